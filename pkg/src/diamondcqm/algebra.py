"""sl(2,R) generator layer: coefficient triples, classification, classical
generator values, numerical Poisson brackets, and the hyperbolic/elliptic
frequency duality.

Conventions (classical, unit mass):
    H = P**2/2 + g/(2 Q**2)
    D = t*H - Q*P/2
    K = t**2*H - t*Q*P + Q**2/2
    G = u*H + v*D + w*K,   discriminant  Delta = v**2 - 4*u*w
The rescaled compact/noncompact pair is R = H + K/alpha**2 and
S = H - K/alpha**2, i.e. coefficient triples (1, 0, +-1/alpha**2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import SingularOriginError, StepDegeneracyError

# absolute tolerance on Delta for the parabolic class; parabolic inputs
# arise only from exact user input, so this stays tight
DISCRIMINANT_ZERO_TOL = 1e-14


class GeneratorClass(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class GeneratorCoeffs:
    """Coefficient triple (u, v, w) of G = u*H + v*D + w*K."""

    u: float
    v: float
    w: float

    def __post_init__(self):
        for name in ("u", "v", "w"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"coefficient {name} must be finite")
        if self.u == 0.0 and self.v == 0.0 and self.w == 0.0:
            raise ValueError("coefficients (u, v, w) must not all vanish")

    @property
    def discriminant(self) -> float:
        return self.v * self.v - 4.0 * self.u * self.w

    def f(self, t: float) -> float:
        """Reparametrization polynomial f(t) = u + v*t + w*t**2."""
        return self.u + self.v * t + self.w * t * t

    def fdot(self, t: float) -> float:
        return self.v + 2.0 * self.w * t


@dataclass(frozen=True)
class ConformalModel:
    """Physical parameters of the inverse-square conformal model.

    g is the dimensionless coupling (> 0, repulsive half-line model),
    alpha the diamond radius (> 0).  mass and hbar enter only the quantum
    normalization of kernels and spectra; the classical layers use unit
    mass.  The conformal index mu = sqrt(g + 1/4) > 1/2 is derived.
    """

    g: float
    alpha: float
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.g > 0.0):
            raise ValueError(f"coupling g must be > 0, got {self.g}")
        if not (self.alpha > 0.0):
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not (self.mass > 0.0 and self.hbar > 0.0):
            raise ValueError("mass and hbar must be > 0")

    @property
    def mu(self) -> float:
        return math.sqrt(self.g + 0.25)

    @property
    def omega(self) -> float:
        return 1.0 / self.alpha

    @property
    def length_scale(self) -> float:
        """Oscillator length sqrt(hbar/(mass*omega))."""
        return math.sqrt(self.hbar / (self.mass * self.omega))


def classify(c: GeneratorCoeffs) -> GeneratorClass:
    """Classify G by the sign of Delta = v**2 - 4*u*w."""
    d = c.discriminant
    if abs(d) <= DISCRIMINANT_ZERO_TOL:
        return GeneratorClass.PARABOLIC
    return GeneratorClass.ELLIPTIC if d < 0.0 else GeneratorClass.HYPERBOLIC


def generator_value(
    c: GeneratorCoeffs, Q: float, P: float, t: float, model: ConformalModel
) -> float:
    """Classical value of G = u*H + v*D + w*K at phase-space point (Q, P, t)."""
    if Q == 0.0:
        raise SingularOriginError("generator undefined at Q = 0")
    H = 0.5 * P * P + model.g / (2.0 * Q * Q)
    D = t * H - 0.5 * Q * P
    K = t * t * H - t * Q * P + 0.5 * Q * Q
    return c.u * H + c.v * D + c.w * K


def poisson_bracket(
    a: GeneratorCoeffs,
    b: GeneratorCoeffs,
    point: tuple[float, float, float],
    model: ConformalModel,
    h: float = 1e-5,
) -> float:
    """Central-difference estimate of {G_a, G_b} at fixed t.

    {A, B} = dA/dQ dB/dP - dA/dP dB/dQ, each derivative by a second-order
    central difference with step h.
    """
    Q, P, t = point
    scale = max(abs(Q), abs(P), 1.0)
    if h <= 0.0 or Q + h == Q or P + h == P or h < 1e-12 * scale:
        raise StepDegeneracyError(f"step h={h} degenerate at point {point}")

    def dQ(c):
        return (
            generator_value(c, Q + h, P, t, model)
            - generator_value(c, Q - h, P, t, model)
        ) / (2.0 * h)

    def dP(c):
        return (
            generator_value(c, Q, P + h, t, model)
            - generator_value(c, Q, P - h, t, model)
        ) / (2.0 * h)

    return dQ(a) * dP(b) - dP(a) * dQ(b)


def cartan_weyl(model: ConformalModel) -> tuple[GeneratorCoeffs, GeneratorCoeffs]:
    """Rescaled compact/noncompact pair R = (1,0,+1/a^2), S = (1,0,-1/a^2)."""
    w = 1.0 / (model.alpha * model.alpha)
    return GeneratorCoeffs(1.0, 0.0, w), GeneratorCoeffs(1.0, 0.0, -w)


@dataclass(frozen=True)
class DualFrequency:
    """A model together with the analytically continued kernel frequency.

    The continuation alpha^-1 -> -+ i alpha^-1 maps between the hyperbolic
    and elliptic sectors; the geometric alpha is untouched, only the
    frequency fed to downstream kernels picks up the factor.
    """

    model: ConformalModel
    omega: complex
    direction: str


_DUAL_FACTOR = {"S->R": 1j, "R->S": -1j}


def dual_map(source: ConformalModel | DualFrequency, direction: str) -> DualFrequency:
    """Tag the continuation omega' = -+ i*omega for direction 'R->S' / 'S->R'."""
    if direction not in _DUAL_FACTOR:
        raise ValueError(f"direction must be 'S->R' or 'R->S', got {direction!r}")
    if isinstance(source, DualFrequency):
        model, omega = source.model, source.omega
    else:
        model, omega = source, complex(source.omega)
    return DualFrequency(model, _DUAL_FACTOR[direction] * omega, direction)
