"""Density of states of the unstable diamond generator by four routes.

The operator is not of trace class, so every route carries an explicit
regularization constant: a divergent constant C for the series/digamma
routes (fixed by the box identification C = -ln[hbar/(M w L^2)]) or a box
length L for the real-space cutoff.  With eta = E/(hbar w) and
zeta = eta + i mu:

    series     rho = (1/pi hb w) Re sum_n 1/((2n+mu+1) - i eta)   (subtracted)
    digamma    rho = -(1/2 pi hb w) Re[psi((mu+1-i eta)/2) - C]
    box TF     rho = (1/pi hb w) ln(sqrt(2M/|E|) w L)
    pole sum   drho = (alpha/2 hb) Im (e^{pi zeta}+1)^{-1}
             = -(alpha/2 hb) Im sum_k (-e^{-i pi mu} e^{-pi eta})^k

Every route is even in E; the pole sum decays like a Boltzmann factor
e^{-pi alpha E/hbar}, i.e. at the inverse diamond temperature.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .algebra import ConformalModel
from .errors import DomainError, QuadratureError
from .specfun import digamma as _digamma

# Euler-Mascheroni constant: shift between series and digamma constants
EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class DosEstimate:
    """Density-of-states value tagged by method and regularization inputs."""

    E: float
    rho: float
    method: str
    C: float | None = None
    L: float | None = None


def cutoff_constant(model: ConformalModel, L: float) -> float:
    """Box identification of the divergent constant: C = -ln[hbar/(M w L^2)]."""
    if not (L > 0.0):
        raise ValueError("L must be > 0")
    return math.log(model.mass * model.omega * L * L / model.hbar)


def dos_digamma(model: ConformalModel, E: float, C: float) -> DosEstimate:
    """Digamma-regularized density, even in E."""
    hw = model.hbar * model.omega
    eta = E / hw
    z = complex(model.mu + 1.0, -eta) / 2.0
    rho = -(1.0 / (2.0 * math.pi * model.hbar * model.omega)) * (_digamma(z).real - C)
    return DosEstimate(E=E, rho=rho, method="digamma", C=C)


def _s_turning_point(model: ConformalModel, E: float) -> float:
    """Single classical turning point of the inverted-oscillator potential."""
    M, hb, w = model.mass, model.hbar, model.omega
    x = (-E + math.sqrt(E * E + hb * hb * w * w * model.g)) / (M * w * w)
    return math.sqrt(x)


def dos_thomas_fermi(
    model: ConformalModel, E: float, L: float, method: str = "closed_form"
) -> DosEstimate:
    """Box-regularized Thomas-Fermi (Weyl) density at cutoff length L.

    closed_form is the leading log law; quadrature integrates the
    phase-space measure M/(pi hb |p|) between the turning point and L,
    approaching the log law as L grows at fixed E >> hbar*w.
    """
    if E == 0.0:
        raise ValueError("E must be nonzero")
    scale = (model.g * model.alpha * model.alpha) ** 0.25
    if not (L > scale):
        raise ValueError(f"L must exceed the crossover scale {scale:g}")
    q_turn = _s_turning_point(model, E)
    if q_turn >= L:
        raise DomainError(
            f"classically allowed region empty: turning point {q_turn:g} >= L = {L:g}"
        )
    M, hb, w = model.mass, model.hbar, model.omega
    if method == "closed_form":
        rho = (1.0 / (math.pi * hb * w)) * math.log(math.sqrt(2.0 * M / abs(E)) * w * L)
        return DosEstimate(E=E, rho=rho, method="thomas_fermi", L=L)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")

    g_q = hb * hb * model.g / (2.0 * M)

    def p_abs(q):
        return np.sqrt(2.0 * M * (E - g_q / q**2 + 0.5 * M * w * w * q**2))

    # substitution q = q_turn + u^2 removes the 1/sqrt turning-point singularity
    def f(u):
        q = q_turn + u * u
        return 2.0 * u * M / p_abs(q)

    val, err = quad(f, 0.0, math.sqrt(L - q_turn), limit=400, epsrel=1e-11)
    if not math.isfinite(val) or err > 1e-7 * max(abs(val), 1e-300):
        raise QuadratureError(f"Thomas-Fermi quadrature failed: {val}, err={err}")
    return DosEstimate(
        E=E, rho=val / (math.pi * hb), method="thomas_fermi_quadrature", L=L
    )


# above this, e^{pi*eta} overflows; the closed form reduces to its asymptote
_POLE_ETA_MAX = 200.0


def dos_semiclassical(
    model: ConformalModel,
    E: float,
    form: str = "pole_closed",
    k_max: int = 200,
    include_average: bool = False,
    L: float | None = None,
) -> DosEstimate:
    """Oscillatory pole/periodic-orbit correction to the smooth density.

    ``pole_closed`` evaluates (alpha/2 hb) Im (e^{pi zeta}+1)^{-1} with
    zeta = eta + i mu; ``gutzwiller_series`` sums the k-fold orbit
    repetitions -(alpha/2 hb) Im sum_k (-e^{-i pi mu - pi eta})^k, which
    converges to the closed form as k_max grows.  With include_average the
    Thomas-Fermi average at box length L is added.
    """
    hw = model.hbar * model.omega
    eta = abs(E) / hw  # negative energies by evenness
    mu = model.mu
    pref = model.alpha / (2.0 * model.hbar)
    if form == "pole_closed":
        if eta > _POLE_ETA_MAX:
            corr = -pref * math.sin(math.pi * mu) * math.exp(-math.pi * eta)
        else:
            corr = pref * (1.0 / (cmath.exp(math.pi * complex(eta, mu)) + 1.0)).imag
    elif form == "gutzwiller_series":
        if k_max < 1:
            raise ValueError("k_max must be >= 1")
        x = -cmath.exp(complex(-math.pi * eta, -math.pi * mu))
        partial = x * (1.0 - x**k_max) / (1.0 - x)
        corr = -pref * partial.imag
    else:
        raise ValueError(f"unknown form {form!r}")
    if include_average:
        if L is None:
            raise ValueError("include_average requires the box length L")
        corr += dos_thomas_fermi(model, E, L).rho
    return DosEstimate(E=E, rho=corr, method=form, L=L)


def dos_series(
    model: ConformalModel,
    E: float,
    n_max: int,
    C: float,
    subtract_counterterm: bool = True,
) -> DosEstimate:
    """Partial pole series with the matched harmonic counterterm removed.

    Computes (1/2 pi hb w) [ Re sum_{n<n_max} (1/(n+z) - 1/(n+1)) + C ]
    with z = (mu+1-i eta)/2, which converges to dos_digamma(E, C') with
    C' = C - EULER_GAMMA.  Without the counterterm the partial sums grow
    like ln(n_max)/(2 pi hb w) and a divergence warning is issued.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    hw = model.hbar * model.omega
    eta = E / hw
    z = complex(model.mu + 1.0, -eta) / 2.0
    n = np.arange(n_max, dtype=float)
    terms = (1.0 / (n + z)).real
    if subtract_counterterm:
        terms = terms - 1.0 / (n + 1.0)
    else:
        warnings.warn(
            "unsubtracted pole series diverges like ln(n_max)",
            RuntimeWarning,
            stacklevel=2,
        )
    rho = (float(np.sum(terms)) + C) / (2.0 * math.pi * model.hbar * model.omega)
    return DosEstimate(E=E, rho=rho, method="series", C=C)
