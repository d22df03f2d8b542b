"""Hamiltonian dynamics of the effective R/S/H systems on the half line.

Everything here is classical with unit mass in the hbar = 1 frame:

    V_R(q) = g/(2 q^2) + q^2/(2 alpha^2)      closed orbits, period pi*alpha
    V_S(q) = g/(2 q^2) - q^2/(2 alpha^2)      unstable, Lyapunov rate 1/alpha
    V_H(q) = g/(2 q^2)                        free conformal limit

The only semiclassical ingredient is the Langer-corrected Jacobi action,
where sqrt(g) -> mu = sqrt(g + 1/4) and the subtraction term carries one
power of hbar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .algebra import ConformalModel
from .errors import (
    BelowMinimumError,
    BlowUpError,
    InsufficientGrowthError,
    StepFailureError,
)

_POTENTIAL_SIGN = {"R": +1.0, "S": -1.0, "H": 0.0}

# far beyond the crossover scale q^4 >> g*alpha^2 where the inverted
# oscillator dominates; S trajectories are cut here instead of overflowing
BLOWUP_FACTOR = 1e8


@dataclass(frozen=True)
class PhaseState:
    """Phase-space point (q, p) at effective time tau; q > 0 (half line)."""

    q: float
    p: float
    tau: float = 0.0

    def __post_init__(self):
        if not (self.q > 0.0):
            raise ValueError(f"q must be > 0, got {self.q}")


@dataclass
class Trajectory:
    """Integrated orbit samples with the conserved generating energy."""

    op: str
    tau: np.ndarray
    q: np.ndarray
    p: np.ndarray
    energy: float
    samples: list[PhaseState] = field(init=False, repr=False)

    def __post_init__(self):
        if np.any(np.diff(self.tau) <= 0.0):
            raise ValueError("tau samples must be strictly increasing")
        self.samples = [
            PhaseState(float(q), float(p), float(t))
            for t, q, p in zip(self.tau, self.q, self.p)
        ]

    def energy_drift(self, model: ConformalModel) -> float:
        """Max relative drift of H_op(q, p) along the samples."""
        e = 0.5 * self.p**2 + effective_potential(model, self.op, self.q)
        scale = max(abs(self.energy), 1e-300)
        return float(np.max(np.abs(e - self.energy)) / scale)


@dataclass(frozen=True)
class OrbitData:
    """Closed-orbit summary for the compact (R) system."""

    E: float
    q_minus: float
    q_plus: float
    period: float
    jacobi_action: float
    langer_applied: bool


def _check_op(op: str) -> float:
    if op not in _POTENTIAL_SIGN:
        raise ValueError(f"op must be one of {tuple(_POTENTIAL_SIGN)}, got {op!r}")
    return _POTENTIAL_SIGN[op]


def effective_potential(model: ConformalModel, op: str, q):
    """V_op(q) = g/(2 q^2) + sign * q^2/(2 alpha^2); sign = +1/-1/0 for R/S/H."""
    sign = _check_op(op)
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0.0):
        raise ValueError("q must be > 0")
    a2 = model.alpha * model.alpha
    out = model.g / (2.0 * q * q) + sign * q * q / (2.0 * a2)
    return float(out) if out.ndim == 0 else out


def hamiltonian(model: ConformalModel, op: str, q: float, p: float) -> float:
    return 0.5 * p * p + effective_potential(model, op, q)


def _rhs(model: ConformalModel, op: str):
    sign = _check_op(op)
    g, a2 = model.g, model.alpha * model.alpha

    def rhs(tau, y):
        q, p = y
        return (p, g / (q * q * q) - sign * q / a2)

    return rhs


def blowup_bound(model: ConformalModel) -> float:
    return BLOWUP_FACTOR * (model.g * model.alpha * model.alpha) ** 0.25


def integrate(
    model: ConformalModel,
    op: str,
    s0: PhaseState,
    tau_max: float,
    tol: float = 1e-10,
    n_samples: int = 1001,
) -> Trajectory:
    """Adaptive embedded Runge-Kutta (DOP853) solution of the op dynamics.

    Relative energy drift stays below ~10*tol.  For the unstable S system
    the run is cut at q = BLOWUP_FACTOR*(g*alpha^2)**(1/4) with BlowUpError.
    """
    if tau_max <= 0.0:
        raise ValueError("tau_max must be > 0")
    bound = blowup_bound(model)

    def hit_bound(tau, y):
        return y[0] - bound

    hit_bound.terminal = True
    hit_bound.direction = 1.0

    sol = solve_ivp(
        _rhs(model, op),
        (0.0, tau_max),
        [s0.q, s0.p],
        t_eval=np.linspace(0.0, tau_max, n_samples),
        rtol=tol,
        atol=tol * 1e-2,
        method="DOP853",
        events=hit_bound,
    )
    if sol.t_events[0].size > 0:
        raise BlowUpError(
            f"q reached the overflow bound {bound:g} at tau = {sol.t_events[0][0]:g}",
            tau_reached=float(sol.t_events[0][0]),
        )
    if not sol.success:
        raise StepFailureError(f"integration failed: {sol.message}")
    return Trajectory(
        op=op,
        tau=sol.t,
        q=sol.y[0],
        p=sol.y[1],
        energy=hamiltonian(model, op, s0.q, s0.p),
    )


def default_unstable_start(model: ConformalModel) -> PhaseState:
    """Start well inside the inverted-oscillator region of V_S.

    At q0 = 2*(3 g alpha^2)**(1/4) the local tangent dynamics is already
    hyperbolic, so a twin separation aligns onto the expanding direction
    immediately instead of rotating through the elliptic neighbourhood of
    the potential zero.
    """
    return PhaseState(q=2.0 * (3.0 * model.g * model.alpha**2) ** 0.25, p=0.0)


def lyapunov_estimate(
    model: ConformalModel,
    s0: PhaseState | None = None,
    delta0: float = 1e-7,
    tau_max: float | None = None,
    op: str = "S",
    n_chunks: int = 120,
    tol: float = 1e-12,
) -> float:
    """Lyapunov rate from renormalized twin-trajectory separation.

    delta0 is the separation *relative* to the running trajectory norm;
    after every chunk the twin is rescaled back to that relative size so
    the difference never drowns in the exponential growth of the orbit
    itself.  The rate is the least-squares slope of the accumulated
    log-growth over the late-time window tau in [tau_max/2, tau_max].

    Raises InsufficientGrowthError (carrying the near-zero estimate) when
    the cumulative growth never exceeds 10x, as for the bounded R orbits.
    """
    _check_op(op)
    if s0 is None:
        s0 = default_unstable_start(model)
    if tau_max is None:
        tau_max = 14.0 * model.alpha
    if not (0.0 < delta0 < 1e-2):
        raise ValueError("delta0 is a small relative separation, e.g. 1e-7")

    rhs = _rhs(model, op)
    bound = blowup_bound(model)
    y_ref = np.array([s0.q, s0.p])
    direction = np.array([1.0, 1.0 / model.alpha])
    direction /= np.linalg.norm(direction)
    y_prt = y_ref + delta0 * np.linalg.norm(y_ref) * direction

    taus = np.linspace(0.0, tau_max, n_chunks + 1)
    ell = np.zeros(n_chunks + 1)
    acc = 0.0
    max_acc = 0.0
    for k in range(n_chunks):
        d_start = np.linalg.norm(y_prt - y_ref)
        span = (taus[k], taus[k + 1])
        sols = []
        for y0 in (y_ref, y_prt):
            s = solve_ivp(rhs, span, y0, rtol=tol, atol=tol * 1e-2, method="DOP853")
            if not s.success:
                raise StepFailureError(f"twin integration failed: {s.message}")
            sols.append(s.y[:, -1])
        y_ref, y_prt = sols
        if y_ref[0] > bound:
            raise BlowUpError(
                f"reference orbit passed the overflow bound at tau <= {span[1]:g}",
                tau_reached=span[1],
            )
        d_end = np.linalg.norm(y_prt - y_ref)
        acc += math.log(d_end / d_start)
        max_acc = max(max_acc, acc)
        ell[k + 1] = acc
        target = delta0 * np.linalg.norm(y_ref)
        y_prt = y_ref + (y_prt - y_ref) * (target / d_end)

    window = taus >= tau_max / 2.0
    design = np.vstack([taus[window], np.ones(window.sum())]).T
    slope = float(np.linalg.lstsq(design, ell[window], rcond=None)[0][0])
    if max_acc < math.log(10.0):
        raise InsufficientGrowthError(
            f"separation grew at most {math.exp(max_acc):.3g}x (< 10x): "
            "no exponential instability resolved",
            estimate=slope,
        )
    return slope


def potential_minimum(model: ConformalModel) -> tuple[float, float]:
    """(q_min, V_R(q_min)) of the confining potential: q^4 = g alpha^2."""
    q = (model.g * model.alpha * model.alpha) ** 0.25
    return q, math.sqrt(model.g) / model.alpha


def turning_points(model: ConformalModel, E: float) -> tuple[float, float]:
    """Classical turning points of V_R at energy E.

    q_{-+}^2 = alpha^2 (E -+ sqrt(E^2 - g/alpha^2)); V_R(q_{-+}) = E.
    """
    g, a = model.g, model.alpha
    e_min = math.sqrt(g) / a
    if E < e_min:
        raise BelowMinimumError(f"E = {E} below the V_R minimum {e_min}")
    disc = math.sqrt(max(E * E - g / (a * a), 0.0))
    return (a * math.sqrt(E - disc), a * math.sqrt(E + disc))


def _gauss_chebyshev_orbit(model: ConformalModel, E: float, integrand, n: int) -> float:
    """Gauss-Chebyshev sum for int_{x-}^{x+} integrand(q) / |p|-type orbits.

    Works in x = q^2 where the turning-point singularities carry exactly
    the Chebyshev weight 1/sqrt((x+ - x)(x - x-)); `integrand` receives
    (q, |p|, weightless factor sqrt((x+ - x)(x - x-))).
    """
    q_minus, q_plus = turning_points(model, E)
    xm, xp = q_minus * q_minus, q_plus * q_plus
    mid, half = 0.5 * (xp + xm), 0.5 * (xp - xm)
    nodes = np.arange(1, n + 1)
    x = mid + half * np.cos((2 * nodes - 1) * np.pi / (2 * n))
    q = np.sqrt(x)
    p_abs = np.sqrt(np.maximum(2.0 * (E - effective_potential(model, "R", q)), 0.0))
    weight = np.sqrt((xp - x) * (x - xm))
    return (np.pi / n) * float(np.sum(integrand(q, p_abs, weight)))


def _adaptive_orbit_quadrature(model, E, integrand, rel_tol=1e-11) -> float:
    n = 64
    prev = _gauss_chebyshev_orbit(model, E, integrand, n)
    while n <= 2**15:
        n *= 2
        cur = _gauss_chebyshev_orbit(model, E, integrand, n)
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return prev


def period(model: ConformalModel, E: float, method: str = "quadrature") -> float:
    """Orbit period of V_R: T = 2 int dq/|p|, equal to pi*alpha for every E, g."""
    if method == "closed_form":
        turning_points(model, E)  # validate E above the minimum
        return math.pi * model.alpha

    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")

    # T = 2 int dq/|p| = int_{x-}^{x+} dx/(sqrt(x) |p|) in x = q^2
    def integrand(q, p_abs, weight):
        return weight / (q * p_abs)

    return _adaptive_orbit_quadrature(model, E, integrand)


def jacobi_action(
    model: ConformalModel, E: float, langer: bool = False, method: str = "quadrature"
) -> float:
    """Fixed-energy action W(E) = closed-orbit integral of p dq.

    Closed form: pi*alpha*E - pi*sqrt(g), or pi*alpha*E - pi*mu*hbar with
    the Langer replacement sqrt(g) -> sqrt(g + 1/4) applied.
    """
    if method == "closed_form":
        turning_points(model, E)
        if langer:
            return math.pi * model.alpha * E - math.pi * model.mu * model.hbar
        return math.pi * model.alpha * E - math.pi * math.sqrt(model.g)

    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    work = model
    if langer:
        # Langer-shifted barrier; hbar^2 restores units when hbar != 1
        work = ConformalModel(
            g=model.hbar**2 * (model.g + 0.25),
            alpha=model.alpha,
            mass=model.mass,
            hbar=model.hbar,
        )

    # W = 2 int p dq = int_{x-}^{x+} (p/sqrt(x)) dx in x = q^2
    def integrand(q, p_abs, weight):
        return (p_abs / q) * weight

    return _adaptive_orbit_quadrature(work, E, integrand)


def orbit_data(model: ConformalModel, E: float, langer: bool = False) -> OrbitData:
    q_minus, q_plus = turning_points(model, E)
    return OrbitData(
        E=E,
        q_minus=q_minus,
        q_plus=q_plus,
        period=period(model, E, method="quadrature"),
        jacobi_action=jacobi_action(model, E, langer=langer, method="quadrature"),
        langer_applied=langer,
    )


def direction_field(model: ConformalModel, op: str, q_vals, p_vals):
    """Phase-space direction field (dq, dp) on the grid q_vals x p_vals."""
    sign = _check_op(op)
    q, p = np.meshgrid(np.asarray(q_vals, float), np.asarray(p_vals, float))
    if np.any(q <= 0.0):
        raise ValueError("q grid must be > 0")
    dq = p
    dp = model.g / q**3 - sign * q / model.alpha**2
    return q, p, dq, dp
