"""Acceptance suite: one callable check per release criterion.

Each check returns a CheckResult with the worst observed metric against
its tolerance; `run_all` executes the whole battery (the CLI `verify`
command prints one pass/fail line per criterion).  Every tolerance is
pinned here, not configurable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import (
    algebra,
    dos,
    dynamics,
    frames,
    pathint,
    spectral,
)
from .algebra import ConformalModel, GeneratorCoeffs


@dataclass(frozen=True)
class CheckResult:
    index: int
    name: str
    passed: bool
    detail: str


def _result(index, name, metric, tol, note="") -> CheckResult:
    passed = metric <= tol
    detail = f"worst {metric:.3e} vs tol {tol:.0e}"
    if note:
        detail += f" ({note})"
    return CheckResult(index=index, name=name, passed=passed, detail=detail)


def check_diamond_temperature(quick: bool = False) -> CheckResult:
    """T_D = hbar/(pi alpha) exact; Lyapunov = 1/alpha within 2%; ratio = 0.5 exact."""
    worst = 0.0
    for alpha in (0.5, 1.0, 2.0):
        m = ConformalModel(g=1.0, alpha=alpha)
        summary = pathint.diamond_temperature(m)
        if summary.temperature != m.hbar / (math.pi * alpha):
            return CheckResult(1, "diamond-temperature", False, "T_D not algebraic")
        if summary.ratio != 0.5:
            return CheckResult(1, "diamond-temperature", False, "ratio != 0.5 exactly")
        n_chunks = 80 if quick else 120
        lam = dynamics.lyapunov_estimate(m, n_chunks=n_chunks)
        worst = max(worst, abs(lam - 1.0 / alpha) * alpha)
    return _result(1, "diamond-temperature", worst, 0.02, "Lyapunov vs 1/alpha")


def _energy_grid(model):
    e_min = math.sqrt(model.g) / model.alpha
    return (1.1 * e_min, 2.0, 10.0)


def check_period_law(quick: bool = False) -> CheckResult:
    """Quadrature period equals pi*alpha within 1e-8 relative on the 9-point grid."""
    alpha = 2.0
    worst = 0.0
    for g in (0.5, 1.0, 2.0):
        m = ConformalModel(g=g, alpha=alpha)
        for E in _energy_grid(m):
            T = dynamics.period(m, E, method="quadrature")
            worst = max(worst, abs(T - math.pi * alpha) / (math.pi * alpha))
    return _result(2, "period-law", worst, 1e-8)


def check_jacobi_action(quick: bool = False) -> CheckResult:
    """Action quadrature equals pi*alpha*E - pi*sqrt(g) within 1e-8; dW/dE = period within 1e-6."""
    alpha = 2.0
    worst_w = 0.0
    worst_d = 0.0
    for g in (0.5, 1.0, 2.0):
        m = ConformalModel(g=g, alpha=alpha)
        e_min = math.sqrt(g) / alpha
        for E in _energy_grid(m):
            W = dynamics.jacobi_action(m, E, method="quadrature")
            exact = math.pi * alpha * E - math.pi * math.sqrt(g)
            worst_w = max(worst_w, abs(W - exact) / abs(exact))
            h = 0.05 * (E - e_min)
            dW = (
                dynamics.jacobi_action(m, E + h, method="quadrature")
                - dynamics.jacobi_action(m, E - h, method="quadrature")
            ) / (2.0 * h)
            T = dynamics.period(m, E, method="quadrature")
            worst_d = max(worst_d, abs(dW - T))
    if worst_d > 1e-6:
        return CheckResult(
            3, "jacobi-action", False, f"dW/dE vs period off by {worst_d:.3e}"
        )
    return _result(3, "jacobi-action", worst_w, 1e-8, f"dW/dE worst {worst_d:.1e}")


def check_trace_identity(quick: bool = False) -> CheckResult:
    """Euclidean diagonal quadrature equals e^{-mu wT}/(2 sinh wT) within 1e-8 relative."""
    worst = 0.0
    for g in (1.0, 2.0):
        m = ConformalModel(g=g, alpha=1.0)
        for wT in (0.1, 0.5, 1.0, 2.0, 5.0):
            T = wT / m.omega
            zq = pathint.trace_Z(m, "R_Euclid", T, method="quadrature").real
            zc = pathint.trace_Z(m, "S", T, method="closed_form").real
            worst = max(worst, abs(zq - zc) / zc)
    return _result(4, "trace-identity", worst, 1e-8)


def check_duality(quick: bool = False) -> CheckResult:
    """K_R at omega -> -i*omega equals K_S pointwise within 1e-10 on the 27-point grid."""
    m = ConformalModel(g=1.0, alpha=1.0)
    dual = algebra.dual_map(m, "R->S")
    worst = 0.0
    for r1 in (0.5, 1.0, 2.0):
        for r2 in (0.5, 1.0, 2.0):
            for T in (0.5, 1.0, 2.0):
                kr = pathint.propagator(m, "K_R", r1, r2, T, omega=dual.omega).value
                ks = pathint.propagator(m, "K_S", r1, r2, T).value
                worst = max(worst, abs(kr - ks) / max(1.0, abs(ks)))
    return _result(5, "duality", worst, 1e-10)


def check_spectrum(quick: bool = False) -> CheckResult:
    """FD eigenvalues match hbar*w*(2n+mu+1) within 1e-4; G_R poles within 1e-6."""
    worst_fd = 0.0
    worst_pole = 0.0
    for g in (1.0, 2.0):
        m = ConformalModel(g=g, alpha=1.0)
        box = spectral.BoxDiscretization(
            q_min=1e-3, L=20.0 * m.length_scale, n_points=4000, scheme_order=4
        )
        vals = spectral.eigenvalues(m, "R", box, count=6).eigenvalues
        law = np.array([spectral.law_eigenvalue(m, n) for n in range(6)])
        worst_fd = max(worst_fd, float(np.max(np.abs(vals - law) / law)))

        poles = pathint.greens_pole_scan(
            m, law[0] - m.hbar * m.omega, law[-1] + m.hbar * m.omega, n_grid=300
        )
        if len(poles) < 6:
            return CheckResult(
                6, "spectrum", False, f"pole scan found {len(poles)}/6 poles (g={g})"
            )
        diffs = np.abs(np.array(poles[:6]) - law) / law
        worst_pole = max(worst_pole, float(np.max(diffs)))
    if worst_pole > 1e-6:
        return CheckResult(6, "spectrum", False, f"pole scan off by {worst_pole:.3e}")
    return _result(6, "spectrum", worst_fd, 1e-4, f"poles worst {worst_pole:.1e}")


def check_partition_function(quick: bool = False) -> CheckResult:
    """Eigen-sum equals closed form within 1e-10 relative for beta*hbar*w in {0.1, 1, 10}."""
    worst = 0.0
    for g in (1.0, 2.0):
        m = ConformalModel(g=g, alpha=1.0)
        for x in (0.1, 1.0, 10.0):
            beta = x / (m.hbar * m.omega)
            zc = pathint.partition_function(m, beta, "closed_form").partition_value
            ze = pathint.partition_function(m, beta, "eigen_sum").partition_value
            worst = max(worst, abs(zc - ze) / zc)
    return _result(7, "partition-function", worst, 1e-10)


def check_dos_routes(quick: bool = False) -> CheckResult:
    """(a) series = closed pole form at 1e-10; (b) digamma vs TF 2% at eta >= 50;
    (c) staircase derivative vs TF 10% at E = 10 hbar w."""
    m = ConformalModel(g=1.0, alpha=1.0)
    hw = m.hbar * m.omega

    worst_a = 0.0
    for eta in (0.5, 1.0, 2.0, 5.0, 20.0):
        closed = dos.dos_semiclassical(m, eta * hw, form="pole_closed").rho
        series = dos.dos_semiclassical(
            m, eta * hw, form="gutzwiller_series", k_max=200
        ).rho
        worst_a = max(worst_a, abs(closed - series))
    if worst_a > 1e-10:
        return CheckResult(8, "dos-routes", False, f"(a) series vs closed {worst_a:.3e}")

    L = 100.0 * m.length_scale
    C = dos.cutoff_constant(m, L)
    worst_b = 0.0
    for eta in (50.0, 100.0, 200.0):
        rho_d = dos.dos_digamma(m, eta * hw, C).rho
        rho_t = dos.dos_thomas_fermi(m, eta * hw, L).rho
        worst_b = max(worst_b, abs(rho_d - rho_t) / abs(rho_t))
    if worst_b > 0.02:
        return CheckResult(8, "dos-routes", False, f"(b) digamma vs TF {worst_b:.3e}")

    Lbox = 40.0 * m.length_scale
    box = spectral.BoxDiscretization(
        q_min=1e-3, L=Lbox, n_points=4000 if quick else 6000, scheme_order=4
    )
    E0 = 10.0 * hw
    stair = spectral.staircase(m, box, [E0], potential="S", count=500)
    rho_t = dos.dos_thomas_fermi(m, E0, Lbox).rho
    worst_c = abs(stair.rho_smoothed[0] - rho_t) / rho_t
    if worst_c > 0.10:
        return CheckResult(8, "dos-routes", False, f"(c) staircase vs TF {worst_c:.3e}")
    return _result(
        8, "dos-routes", worst_a, 1e-10, f"(b) {worst_b:.1e}, (c) {worst_c:.1e}"
    )


def check_bracket_algebra(quick: bool = False) -> CheckResult:
    """Six classical bracket relations within 1e-6 at 100 random points."""
    m = ConformalModel(g=1.0, alpha=2.0)
    H = GeneratorCoeffs(1.0, 0.0, 0.0)
    D = GeneratorCoeffs(0.0, 1.0, 0.0)
    K = GeneratorCoeffs(0.0, 0.0, 1.0)
    R, S = algebra.cartan_weyl(m)
    a2 = m.alpha * m.alpha
    rng = np.random.default_rng(20240917)
    worst = 0.0
    for _ in range(100):
        Q = rng.uniform(0.5, 2.0)
        P = rng.uniform(-2.0, 2.0)
        t = rng.uniform(-1.0, 1.0)
        pt = (Q, P, t)
        val = lambda c: algebra.generator_value(c, Q, P, t, m)  # noqa: E731
        pb = lambda a, b: algebra.poisson_bracket(a, b, pt, m, h=1e-5)  # noqa: E731
        rel = (
            abs(pb(D, H) + val(H)),
            abs(pb(D, K) - val(K)),
            abs(pb(H, K) - 2.0 * val(D)),
            abs(pb(D, R) + val(S)),
            abs(pb(R, S) + 4.0 * val(D) / a2),
            abs(pb(D, S) + val(R)),
        )
        worst = max(worst, max(rel))
    return _result(9, "bracket-algebra", worst, 1e-6)


def check_geometry(quick: bool = False) -> CheckResult:
    """S_K flows stay in the diamond from 20 random interior points; tau<->t
    round trips within 1e-12 on |t| <= 0.999 alpha."""
    geom = frames.DiamondGeometry(alpha=2.0)
    rng = np.random.default_rng(20240918)
    worst_margin = math.inf
    for _ in range(20):
        while True:
            t0 = rng.uniform(-geom.alpha, geom.alpha)
            r0 = rng.uniform(0.0, geom.alpha)
            if abs(t0) + r0 < 0.97 * geom.alpha:
                break
        curve = frames.rckf_flow(
            frames.SpacetimeEvent(t0, r0), geom, "S_K", s_max=3.0 * geom.alpha
        )
        margin = float(np.min(geom.alpha - np.abs(curve.t) - np.abs(curve.r)))
        worst_margin = min(worst_margin, margin)
    if worst_margin <= 0.0:
        return CheckResult(
            10, "geometry", False, f"diamond violated: margin {worst_margin:.3e}"
        )

    m = ConformalModel(g=1.0, alpha=2.0)
    _, S = algebra.cartan_weyl(m)
    worst_rt = 0.0
    for t in np.linspace(-0.999 * m.alpha, 0.999 * m.alpha, 41):
        back = frames.t_of_tau(S, frames.tau_of_t(S, float(t)))
        worst_rt = max(worst_rt, abs(back - t) / max(1.0, abs(t)))
    return _result(
        10, "geometry", worst_rt, 1e-12, f"diamond margin {worst_margin:.2e}"
    )


_CHECKS = (
    check_diamond_temperature,
    check_period_law,
    check_jacobi_action,
    check_trace_identity,
    check_duality,
    check_spectrum,
    check_partition_function,
    check_dos_routes,
    check_bracket_algebra,
    check_geometry,
)


def run_all(quick: bool = False) -> list[CheckResult]:
    return [check(quick=quick) for check in _CHECKS]
