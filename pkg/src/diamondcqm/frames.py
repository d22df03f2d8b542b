"""Time reparametrizations, field/momentum frame maps, causal-diamond
geometry, and radial-conformal-Killing-field flows.

A generator G = u*H + v*D + w*K evolves in an effective time tau with
d tau = dt / f(t), f(t) = u + v*t + w*t**2.  For the noncompact generator
S = (1, 0, -1/alpha**2) this is tau = alpha*atanh(t/alpha): the whole real
tau line maps onto the Minkowski interval t in (-alpha, alpha), which is
the causal-diamond statement.  Zeros of f are coordinate horizons and
raise HorizonError instead of being clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp

from .algebra import GeneratorCoeffs
from .errors import (
    DomainError,
    HorizonError,
    QuadratureError,
    StepFailureError,
    UnsupportedCoefficientsError,
)

_RCKF_NAMES = ("S_K", "R_K", "D_K")


@dataclass(frozen=True)
class DiamondGeometry:
    """Causal diamond of size 2*alpha centered at the origin."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0.0):
            raise ValueError(f"alpha must be > 0, got {self.alpha}")

    def contains(self, e: "SpacetimeEvent") -> bool:
        return abs(e.t) + abs(e.r) < self.alpha

    def boundary_margin(self, e: "SpacetimeEvent") -> float:
        """b = alpha - |t| - |r|; positive inside the diamond."""
        return self.alpha - abs(e.t) - abs(e.r)


@dataclass(frozen=True)
class SpacetimeEvent:
    """Event at Minkowski time t and radial distance r >= 0 (c = 1 units)."""

    t: float
    r: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.r)):
            raise ValueError("event coordinates must be finite")
        if self.r < 0.0:
            raise ValueError("r must be >= 0 (mirror only when serializing)")


def _roots_in_path(c: GeneratorCoeffs, t: float) -> bool:
    """True when f has a real root on the closed interval [0, t] (or [t, 0])."""
    lo, hi = (0.0, t) if t >= 0.0 else (t, 0.0)
    if c.w == 0.0:
        if c.v == 0.0:
            return c.u == 0.0
        root = -c.u / c.v
        return lo <= root <= hi
    disc = c.v * c.v - 4.0 * c.w * c.u
    if disc < 0.0:
        return False
    sq = math.sqrt(disc)
    for root in ((-c.v - sq) / (2.0 * c.w), (-c.v + sq) / (2.0 * c.w)):
        if lo <= root <= hi:
            return True
    return False


def tau_of_t(c: GeneratorCoeffs, t: float, method: str = "auto") -> float:
    """Effective time tau(t) = int_0^t dt'/f(t'), with tau(0) = 0.

    Closed forms are used for the Cartan-Weyl patterns (v = 0, u > 0);
    anything else goes through adaptive quadrature.  Raises HorizonError
    when f vanishes on the integration path.
    """
    if method not in ("auto", "closed_form", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if t == 0.0:
        return 0.0
    if _roots_in_path(c, t):
        raise HorizonError(f"f(t) = u+v*t+w*t^2 vanishes on the path to t={t}")

    closed_ok = c.v == 0.0 and c.u > 0.0
    if method == "closed_form" and not closed_ok:
        raise UnsupportedCoefficientsError(
            "closed form requires v == 0 and u > 0; use method='quadrature'"
        )
    if closed_ok and method != "quadrature":
        u, w = c.u, c.w
        if w == 0.0:
            return t / u
        a = math.sqrt(u / abs(w))
        if w < 0.0:
            if abs(t) >= a:
                raise HorizonError(f"|t| = {abs(t)} reached the horizon at {a}")
            return (a / u) * math.atanh(t / a)
        return (a / u) * math.atan(t / a)

    val, err = quad(lambda s: 1.0 / c.f(s), 0.0, t, limit=200)
    if not math.isfinite(val) or err > 1e-9 * max(1.0, abs(val)):
        raise QuadratureError(f"tau quadrature failed: value={val}, err={err}")
    return val


def t_of_tau(c: GeneratorCoeffs, tau: float) -> float:
    """Inverse map t(tau); closed forms only (v = 0, u > 0 patterns).

    For the hyperbolic pattern (w < 0) the image is the finite interval
    |t| < a = sqrt(u/|w|) for all real tau.  For the elliptic pattern the
    chart only covers |u*tau/a| < pi/2.
    """
    if not (c.v == 0.0 and c.u > 0.0):
        raise UnsupportedCoefficientsError(
            f"no closed-form inverse for coefficients ({c.u}, {c.v}, {c.w})"
        )
    u, w = c.u, c.w
    if tau == 0.0:
        return 0.0
    if w == 0.0:
        return u * tau
    a = math.sqrt(u / abs(w))
    if w < 0.0:
        return a * math.tanh(u * tau / a)
    if abs(u * tau / a) >= math.pi / 2.0:
        raise DomainError(f"elliptic chart covers |tau| < {math.pi * a / (2 * u)}")
    return a * math.tan(u * tau / a)


def q_of_Q(c: GeneratorCoeffs, Q: float, t: float) -> float:
    """Frame map q = Q/|f(t)|**(1/2)."""
    f = c.f(t)
    if f == 0.0:
        raise HorizonError(f"f({t}) = 0: frame map singular")
    return Q / math.sqrt(abs(f))


def p_of_P(c: GeneratorCoeffs, Q: float, P: float, t: float) -> float:
    """Momentum map p = sgn(f) |f|**(1/2) (P - (df/dt)/(2f) Q)."""
    f = c.f(t)
    if f == 0.0:
        raise HorizonError(f"f({t}) = 0: frame map singular")
    sigma = 1.0 if f > 0.0 else -1.0
    return sigma * math.sqrt(abs(f)) * (P - c.fdot(t) / (2.0 * f) * Q)


def rckf_velocity(
    e: SpacetimeEvent, geometry: DiamondGeometry, which: str
) -> tuple[float, float]:
    """Velocity (dt/ds, dr/ds) of the radial conformal Killing field.

    S_K = ((a^2 - t^2 - r^2)/2a, -t r/a) preserves the diamond,
    R_K = ((a^2 + t^2 + r^2)/2a, +t r/a) is the compact partner, and
    D_K = (t, r) is the Euler dilatation field.
    """
    a = geometry.alpha
    t, r = e.t, e.r
    if which == "S_K":
        return ((a * a - t * t - r * r) / (2.0 * a), -t * r / a)
    if which == "R_K":
        return ((a * a + t * t + r * r) / (2.0 * a), +t * r / a)
    if which == "D_K":
        return (t, r)
    raise ValueError(f"which must be one of {_RCKF_NAMES}, got {which!r}")


@dataclass(frozen=True)
class FlowCurve:
    """Integral curve samples of a Killing flow in the affine parameter s."""

    s: np.ndarray
    t: np.ndarray
    r: np.ndarray
    which: str

    def events(self) -> list[SpacetimeEvent]:
        return [SpacetimeEvent(float(t), float(r)) for t, r in zip(self.t, self.r)]


def rckf_flow(
    e0: SpacetimeEvent,
    geometry: DiamondGeometry,
    which: str,
    s_max: float,
    tol: float = 1e-10,
    n_samples: int = 201,
) -> FlowCurve:
    """Integrate the Killing field from e0 over s in [0, s_max].

    The field itself is the velocity (no proper-time normalization).  For
    S_K started inside the diamond every sample stays inside.
    """
    if s_max <= 0.0:
        raise ValueError("s_max must be > 0")
    rckf_velocity(e0, geometry, which)  # validates `which`

    def rhs(s, y):
        return rckf_velocity(SpacetimeEvent(y[0], max(y[1], 0.0)), geometry, which)

    s_eval = np.linspace(0.0, s_max, n_samples)
    sol = solve_ivp(
        rhs,
        (0.0, s_max),
        [e0.t, e0.r],
        t_eval=s_eval,
        rtol=tol,
        atol=tol * max(geometry.alpha, 1.0) * 1e-2,
        method="DOP853",
    )
    if not sol.success:
        raise StepFailureError(f"flow integration failed: {sol.message}")
    r = np.maximum(sol.y[1], 0.0)  # clip integrator noise at the r = 0 axis
    return FlowCurve(s=sol.t, t=sol.y[0], r=r, which=which)
