"""Special-function kernels used by every analytic formula in the package.

All functions take and return complex values on the principal branch:
complex powers go through the principal logarithm, which matches the
retarded (E -> E + i0+) prescription used by the kernel layer.

Backends: log-gamma, digamma and the modified Bessel function come from
scipy.special (complex-capable); the Whittaker pair is evaluated with
mpmath at fixed working precision.  The wrappers add the domain contracts
(pole, branch-cut and overflow errors) that the callers rely on.
"""

from __future__ import annotations

import mpmath as _mp
from scipy import special as _sp

from .errors import BranchCutError, OverflowGuardError, PoleError

# exp() overflows above ~709.78; leave headroom for algebraic prefactors
OVERFLOW_LOG_THRESHOLD = 700.0

# working precision for the Whittaker backend (double needs ~17 digits)
_WHITTAKER_DPS = 25


def _is_nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real)


def ln_gamma(z: complex) -> complex:
    """Principal-branch log-gamma; exp(ln_gamma(z)) == Gamma(z)."""
    if _is_nonpositive_integer(z):
        raise PoleError(f"ln_gamma pole at nonpositive integer z={z}")
    return complex(_sp.loggamma(complex(z)))


def digamma(z: complex) -> complex:
    """psi(z) = d ln Gamma / dz, with psi(z+1) = psi(z) + 1/z."""
    if _is_nonpositive_integer(z):
        raise PoleError(f"digamma pole at nonpositive integer z={z}")
    return complex(_sp.digamma(complex(z)))


def bessel_i(order: float, z: complex) -> complex:
    """Modified Bessel function I_order(z) on the principal branch.

    ``order`` must be real and >= 0.  Arguments whose result magnitude
    would exceed the floating range raise OverflowGuardError rather than
    returning inf: I_nu(z) ~ e^z/sqrt(2 pi z) for large |z|, so the guard
    triggers at |Re z| > OVERFLOW_LOG_THRESHOLD.
    """
    if not (order >= 0.0):
        raise ValueError(f"bessel_i requires real order >= 0, got {order}")
    z = complex(z)
    if abs(z.real) > OVERFLOW_LOG_THRESHOLD:
        raise OverflowGuardError(
            f"bessel_i argument Re z = {z.real:g} exceeds the overflow guard "
            f"|Re z| <= {OVERFLOW_LOG_THRESHOLD:g}"
        )
    out = complex(_sp.iv(order, z))
    if out != out or abs(out) == float("inf"):  # nan or inf escaped the guard
        raise OverflowGuardError(f"bessel_i({order}, {z}) is not finite")
    return out


def bessel_i_scaled(order: float, z: complex) -> complex:
    """Exponentially scaled e^{-|Re z|} I_order(z); safe for large real z."""
    if not (order >= 0.0):
        raise ValueError(f"bessel_i_scaled requires real order >= 0, got {order}")
    return complex(_sp.ive(order, complex(z)))


def _check_whittaker_arg(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise PoleError("Whittaker functions require z != 0")
    if z.imag == 0.0 and z.real < 0.0:
        raise BranchCutError(
            "z on the negative real axis: add a small imaginary part to select "
            "a branch side"
        )
    if abs(z.real) / 2.0 > OVERFLOW_LOG_THRESHOLD:
        raise OverflowGuardError(
            f"Whittaker argument |Re z|/2 = {abs(z.real) / 2:g} exceeds the "
            f"overflow guard {OVERFLOW_LOG_THRESHOLD:g}"
        )
    return z


def whittaker_m(kappa: complex, halfmu: float, z: complex) -> complex:
    """Whittaker M_{kappa,m}(z) = e^{-z/2} z^{m+1/2} 1F1(m-kappa+1/2; 1+2m; z).

    The second index ``m = halfmu`` is real here (it is mu/2 for the
    conformal kernels).  Raises PoleError when 1+2m is a nonpositive
    integer, where the defining Kummer series breaks down.
    """
    if _is_nonpositive_integer(1.0 + 2.0 * halfmu):
        raise PoleError(f"whittaker_m parameter pole: 1+2m = {1 + 2 * halfmu}")
    z = _check_whittaker_arg(z)
    with _mp.workdps(_WHITTAKER_DPS):
        return complex(_mp.whitm(complex(kappa), halfmu, z))


def whittaker_w(kappa: complex, halfmu: float, z: complex) -> complex:
    """Whittaker W_{kappa,m}(z), the recessive solution: ~ e^{-z/2} z^kappa at +inf."""
    z = _check_whittaker_arg(z)
    with _mp.workdps(_WHITTAKER_DPS):
        return complex(_mp.whitw(complex(kappa), halfmu, z))


def whittaker_wronskian(kappa: complex, halfmu: float) -> complex:
    """Closed form of M W' - M' W = -Gamma(2m+1)/Gamma(m-kappa+1/2)."""
    num = ln_gamma(2.0 * halfmu + 1.0)
    arg = halfmu - complex(kappa) + 0.5
    if _is_nonpositive_integer(arg):
        return 0.0 + 0.0j  # 1/Gamma vanishes at the parameter pole
    import cmath

    return -cmath.exp(num - ln_gamma(arg))
