"""Exact propagators, energy Green's functions, trace/partition identities,
and the causal-diamond thermality pipeline.

Radial kernels (order mu = sqrt(g + 1/4), measure dr on the half line):

    K_R(r2,r1;T)      = (Mw/(i hb sin wT))  sqrt(r1 r2) e^{(iMw/2hb)(r1^2+r2^2) cot wT}  I_mu(Mw r1 r2/(i hb sin wT))
    K_S               = the same with sin/cot -> sinh/coth (omega -> -i omega duality)
    K_R_Euclid        = (Mw/(hb sinh wT))   sqrt(r1 r2) e^{-(Mw/2hb)(r1^2+r2^2) coth wT} I_mu(Mw r1 r2/(hb sinh wT))

K_S is evaluated through the imaginary-mass relation K_S = K_R_Euclid|_{M -> -iM},
and all trace quadratures run on the positive, exponentially decaying
K_R_Euclid diagonal and transfer to S through the proven trace identity

    Tr K_S(T) = Tr K_R_Euclid(T) = e^{-mu w T} / (2 sinh wT),

whose Wick-rotated time is the inverse temperature: beta = pi*alpha/hbar,
hence the diamond temperature T_D = hbar/(pi*alpha).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .algebra import ConformalModel
from .errors import CausticError, QuadratureError, SpectrumPoleError
from .specfun import bessel_i, bessel_i_scaled, ln_gamma

_KERNEL_KINDS = ("K_R", "K_S", "K_R_Euclid")
_GREENS_KINDS = ("G_R", "G_S")

# fraction of pi*hbar*omega within which sin(wT) counts as a caustic
_CAUSTIC_TOL = 1e-9
# near-caustic margin: finite value returned but flagged
_CAUSTIC_FLAG_MARGIN = 1e-7

# retarded regularization E -> E + i*eps*hbar*omega used by the pole scan
POLE_SCAN_EPS = 1e-8


@dataclass(frozen=True)
class KernelValue:
    """Complex kernel amplitude (units 1/length) with evaluation metadata."""

    value: complex
    kind: str
    caustic_flag: bool = False


@dataclass(frozen=True)
class ThermalReport:
    beta: float
    temperature: float
    partition_value: float
    eigenvalues_used: int


@dataclass(frozen=True)
class ThermalitySummary:
    """Diamond temperature with the scrambling-bound comparison."""

    alpha: float
    beta: float
    temperature: float
    lyapunov_rate: float
    scrambling_bound: float
    ratio: float
    partition_value: float


def _caustic_distance(wT: float) -> float:
    """Distance of wT from the nearest multiple of pi."""
    frac = math.fmod(wT, math.pi)
    return min(abs(frac), math.pi - abs(frac))


def _kernel_value(model: ConformalModel, kind: str, r1, r2, T, omega) -> tuple[complex, bool]:
    M, hb, mu = model.mass, model.hbar, model.mu
    flag = False
    if kind == "K_R":
        w = complex(omega)
        if w.imag == 0.0:
            dist = _caustic_distance(w.real * T)
            if dist < _CAUSTIC_TOL:
                raise CausticError(
                    f"sin(omega*T) vanishes: omega*T = {w.real * T:g} within "
                    f"{_CAUSTIC_TOL:g} of a multiple of pi"
                )
            flag = dist < _CAUSTIC_FLAG_MARGIN
        s = cmath.sin(w * T)
        pref = M * w / (1j * hb * s)
        arg = M * w * r1 * r2 / (1j * hb * s)
        expo = 1j * M * w / (2.0 * hb) * (r1 * r1 + r2 * r2) * cmath.cos(w * T) / s
        return pref * math.sqrt(r1 * r2) * cmath.exp(expo) * bessel_i(mu, arg), flag

    # hyperbolic-family kernels: K_S is the Euclidean kernel with M -> -iM
    Mc = complex(M) if kind == "K_R_Euclid" else -1j * M
    w = complex(omega)
    if kind == "K_R_Euclid" and w.imag == 0.0:
        # positive decaying kernel: scaled Bessel keeps large arguments finite
        z = w.real * T
        s = math.sinh(z)
        arg = M * w.real * r1 * r2 / (hb * s)
        expo = -(M * w.real / (2.0 * hb)) * (r1 * r1 + r2 * r2) * math.cosh(z) / s + arg
        val = (M * w.real / (hb * s)) * math.sqrt(r1 * r2) * math.exp(expo)
        return complex(val * bessel_i_scaled(mu, arg).real), False
    s = cmath.sinh(w * T)
    pref = Mc * w / (hb * s)
    arg = Mc * w * r1 * r2 / (hb * s)
    expo = -Mc * w / (2.0 * hb) * (r1 * r1 + r2 * r2) * cmath.cosh(w * T) / s
    return pref * math.sqrt(r1 * r2) * cmath.exp(expo) * bessel_i(mu, arg), False


def propagator(
    model: ConformalModel,
    kind: str,
    r1: float,
    r2: float,
    T: float,
    omega: complex | None = None,
) -> KernelValue:
    """Radial transition kernel of the requested family at elapsed time T.

    ``omega`` overrides the model frequency 1/alpha; passing the tagged
    value from algebra.dual_map evaluates the analytically continued
    kernel (e.g. K_R at omega -> -i*omega equals K_S pointwise).
    """
    if kind not in _KERNEL_KINDS:
        raise ValueError(f"kind must be one of {_KERNEL_KINDS}, got {kind!r}")
    if not (r1 > 0.0 and r2 > 0.0):
        raise ValueError("r1, r2 must be > 0")
    if not (T > 0.0):
        raise ValueError("T must be > 0")
    w = model.omega if omega is None else omega
    value, flag = _kernel_value(model, kind, r1, r2, T, w)
    return KernelValue(value=value, kind=kind, caustic_flag=flag)


def _euclid_kernel(model: ConformalModel, r1: float, r2: float, T: float) -> float:
    return _kernel_value(model, "K_R_Euclid", r1, r2, T, model.omega)[0].real


def semigroup_check(
    model: ConformalModel,
    r1: float,
    r2: float,
    T1: float,
    T2: float,
    kind: str = "K_R_Euclid",
) -> float:
    """|int_0^inf K(r2,r;T2) K(r,r1;T1) dr - K(r2,r1;T1+T2)| for the Euclidean kernel."""
    if kind != "K_R_Euclid":
        raise ValueError("semigroup check runs on the Euclidean kernel only")
    if not (T1 > 0.0 and T2 > 0.0):
        raise ValueError("T1, T2 must be > 0")

    def f(r):
        return _euclid_kernel(model, r1, r, T1) * _euclid_kernel(model, r, r2, T2)

    val, err = quad(f, 0.0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-11)
    if not math.isfinite(val):
        raise QuadratureError("semigroup quadrature diverged")
    return abs(val - _euclid_kernel(model, r1, r2, T1 + T2))


def _greens_retarded(model: ConformalModel, omega: complex, r1, r2, E) -> complex:
    """Retarded Whittaker-product Green's function at (possibly complex) omega, E."""
    from .specfun import whittaker_m, whittaker_w

    M, hb, mu = model.mass, model.hbar, model.mu
    kappa = E / (2.0 * hb * omega)
    a = (1.0 + mu) / 2.0 - kappa
    if abs(a.imag) < 1e-10 and abs(a.real - round(a.real)) < 1e-10 and round(a.real) <= 0:
        raise SpectrumPoleError(
            f"E = {E} sits on a discrete eigenvalue (Gamma pole at {a})"
        )
    rl, rg = (r1, r2) if r1 <= r2 else (r2, r1)
    zl = M * omega * rl * rl / hb
    zg = M * omega * rg * rg / hb
    pref = (
        -(1.0 / (hb * omega))
        * cmath.exp(ln_gamma(a) - ln_gamma(1.0 + mu))
        / math.sqrt(r1 * r2)
    )
    return pref * whittaker_w(kappa, mu / 2.0, zg) * whittaker_m(kappa, mu / 2.0, zl)


def greens(
    model: ConformalModel,
    kind: str,
    r1: float,
    r2: float,
    E: complex,
    side: str = "retarded",
) -> KernelValue:
    """Energy Green's function G^(+-)(r1, r2; E) of the R or S family.

    G_R uses the real model frequency; G_S is the omega -> -i*omega
    continuation of the same closed form.  The advanced side comes from
    the resolvent identity G^(-)(E) = conj(G^(+)(conj E)) of a
    self-adjoint generator, which reproduces the lower-sign closed form
    on the correct branch side.
    """
    if kind not in _GREENS_KINDS:
        raise ValueError(f"kind must be one of {_GREENS_KINDS}, got {kind!r}")
    if not (r1 > 0.0 and r2 > 0.0):
        raise ValueError("r1, r2 must be > 0")
    if side not in ("retarded", "advanced"):
        raise ValueError(f"side must be 'retarded' or 'advanced', got {side!r}")
    omega = complex(model.omega) if kind == "G_R" else -1j * model.omega
    E = complex(E)
    if side == "retarded":
        value = _greens_retarded(model, omega, r1, r2, E)
    else:
        value = _greens_retarded(model, omega.conjugate(), r1, r2, E.conjugate())
        value = value.conjugate()
    return KernelValue(value=value, kind=kind)


def greens_pole_scan(
    model: ConformalModel,
    E_min: float,
    E_max: float,
    n_grid: int = 400,
    probes: tuple[tuple[float, float], ...] = ((0.8, 1.1), (0.45, 1.7), (1.3, 0.6)),
) -> list[float]:
    """Locate discrete energies as poles of the retarded G_R.

    Scans Re[1/G(E + i eps)] with eps = POLE_SCAN_EPS*hbar*omega, which
    crosses zero linearly at each pole; sign changes caused by zeros of G
    are rejected by the residual magnitude.  Several (r1, r2) probe pairs
    are merged because a pole whose eigenfunction has a node at one probe
    (tiny residue, sub-grid dip) is strong at another.
    """
    from scipy.optimize import brentq

    eps = POLE_SCAN_EPS * model.hbar * model.omega
    omega = complex(model.omega)
    grid = np.linspace(E_min, E_max, n_grid)
    found: list[float] = []
    for r1, r2 in probes:

        def f(E: float) -> float:
            g = _greens_retarded(model, omega, r1, r2, E + 1j * eps)
            return (1.0 / g).real

        vals = np.array([f(E) for E in grid])
        for i in range(n_grid - 1):
            if vals[i] == 0.0 or vals[i] * vals[i + 1] >= 0.0:
                continue
            root = brentq(f, grid[i], grid[i + 1], xtol=1e-12, rtol=8.9e-16)
            if abs(f(root)) < 1e-3:  # a pole of G, not a zero
                found.append(float(root))
    found.sort()
    scale = max(abs(E_min), abs(E_max), 1.0)
    poles: list[float] = []
    for root in found:
        if not poles or root - poles[-1] > 1e-8 * scale:
            poles.append(root)
    return poles


def trace_Z(
    model: ConformalModel, op: str, T: float, method: str = "closed_form"
) -> complex:
    """Trace of the evolution kernel: e^{-mu w T}/(2 sinh wT) for S and R_Eucl.

    The quadrature integrates the K_R_Euclid diagonal, whose integrand is
    positive and exponentially decaying; the S trace equals it identically.
    """
    if op not in ("S", "R_Euclid"):
        raise ValueError(f"op must be 'S' or 'R_Euclid', got {op!r}")
    if not (T > 0.0):
        raise ValueError("T must be > 0")
    z = model.omega * T
    if method == "closed_form":
        return complex(math.exp(-model.mu * z) / (2.0 * math.sinh(z)))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")

    # x = M w r^2/hb:  Tr = 1/(2 sinh z) * int_0^inf e^{-x tanh(z/2)} Ive_mu(x/sinh z) dx
    s = math.sinh(z)
    th = math.tanh(z / 2.0)
    mu = model.mu

    def f(x):
        return np.exp(-x * th) * bessel_i_scaled(mu, x / s).real

    val, err = quad(f, 0.0, np.inf, limit=400, epsabs=1e-14, epsrel=1e-12)
    if not math.isfinite(val) or err > 1e-8 * max(abs(val), 1e-300):
        raise QuadratureError(f"trace quadrature failed: value={val}, err={err}")
    return complex(val / (2.0 * s))


def aux_integral_check(z: float, mu: float) -> float:
    """Residual of int_0^inf e^{-y coth z} I_mu(y/sinh z) dy = e^{-mu z}."""
    if not (z > 0.0 and mu > 0.0):
        raise ValueError("z and mu must be > 0")
    s = math.sinh(z)
    th = math.tanh(z / 2.0)

    def f(y):
        return np.exp(-y * th) * bessel_i_scaled(mu, y / s).real

    val, err = quad(f, 0.0, np.inf, limit=400, epsabs=1e-14, epsrel=1e-12)
    if not math.isfinite(val):
        raise QuadratureError("auxiliary integral diverged")
    return abs(val - math.exp(-mu * z))


# relative tail bound at which the eigenvalue sum is truncated
_EIGEN_SUM_TAIL = 1e-14


def partition_function(
    model: ConformalModel, beta: float, method: str = "closed_form"
) -> ThermalReport:
    """Canonical partition function of the diamond evolution operator.

    closed_form: e^{-mu beta hb w}/(2 sinh(beta hb w)); eigen_sum: the
    geometric series over E_n = hb*w*(2n + mu + 1), truncated when the
    remaining geometric tail drops below 1e-14 of the partial sum.
    """
    if not (beta > 0.0):
        raise ValueError("beta must be > 0")
    x = beta * model.hbar * model.omega
    if method == "closed_form":
        value = math.exp(-model.mu * x) / (2.0 * math.sinh(x))
        n_used = 0
    elif method == "eigen_sum":
        ratio = math.exp(-2.0 * x)
        term = math.exp(-x * (model.mu + 1.0))
        total = 0.0
        n_used = 0
        while True:
            total += term
            n_used += 1
            tail = term * ratio / (1.0 - ratio)
            if tail <= _EIGEN_SUM_TAIL * max(total, 1e-300) or n_used > 100000:
                break
            term *= ratio
        value = total
    else:
        raise ValueError(f"unknown method {method!r}")
    return ThermalReport(
        beta=beta,
        temperature=1.0 / beta,
        partition_value=value,
        eigenvalues_used=n_used,
    )


def eigenvalue(model: ConformalModel, n: int) -> float:
    """Discrete level E_n = hbar*omega*(2n + mu + 1) of the compact operator."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return model.hbar * model.omega * (2 * n + model.mu + 1.0)


def diamond_temperature(model: ConformalModel) -> ThermalitySummary:
    """T_D = hbar/(pi*alpha), with the scrambling comparison lambda_L vs 2 pi T_D/hbar."""
    t_d = model.hbar / (math.pi * model.alpha)
    beta = math.pi * model.alpha / model.hbar
    lam = 1.0 / model.alpha
    bound = 2.0 / model.alpha
    return ThermalitySummary(
        alpha=model.alpha,
        beta=beta,
        temperature=t_d,
        lyapunov_rate=lam,
        scrambling_bound=bound,
        ratio=lam / bound,
        partition_value=partition_function(model, beta).partition_value,
    )


def parity_assemble(
    model: ConformalModel,
    k_half_minus: complex,
    k_half_plus: complex,
    q1: float,
    q2: float,
) -> complex:
    """Assemble the 1D kernel from the two parity channels.

    K = (K_{-1/2} + eps*K_{+1/2})/2 with eps = sgn(q1*q2).  For the
    repulsive half-line model the channels are equal, so the result is
    the channel value for eps = +1 and zero across the barrier.
    """
    if q1 == 0.0 or q2 == 0.0:
        raise ValueError("q1, q2 must be nonzero")
    eps = 1.0 if q1 * q2 > 0.0 else -1.0
    return 0.5 * (k_half_minus + eps * k_half_plus)
