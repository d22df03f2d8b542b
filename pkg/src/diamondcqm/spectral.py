"""Finite-difference eigensolver on a Dirichlet box.

Independent quantum oracle for the kernel layer: eigenvalues of

    -(hbar^2/2M) d^2/dq^2 + (hbar^2 g/2M)/q^2 +- (M w^2/2) q^2

on [q_min, q_min + L] with Dirichlet ends, via symmetric tridiagonal
(order 2) or pentadiagonal (order 4) stencils.  The inner wall at small
q_min > 0 stands in for the q^{mu+1/2} regular behavior; the repulsive
barrier makes the induced shift negligible.  For the compact potential
the levels reproduce hbar*w*(2n + mu + 1); for the inverted one the
box spectrum feeds the counting staircase N(E) and its smoothed
derivative, the cutoff-regularized density of states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eig_banded, eigh_tridiagonal

from .algebra import ConformalModel
from .errors import ConvergenceError, InsufficientLevelsError

_POTENTIALS = ("R", "S")


@dataclass(frozen=True)
class BoxDiscretization:
    """Dirichlet box [q_min, q_min + L] with n_points grid points."""

    q_min: float
    L: float
    n_points: int
    scheme_order: int = 4

    def __post_init__(self):
        if not (self.q_min > 0.0):
            raise ValueError("q_min must be > 0")
        if not (self.L > 0.0):
            raise ValueError("L must be > 0")
        if self.n_points < 500:
            raise ValueError("n_points must be >= 500")
        if self.scheme_order not in (2, 4):
            raise ValueError("scheme_order must be 2 or 4")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_min + self.L, self.n_points)

    @property
    def spacing(self) -> float:
        return self.L / (self.n_points - 1)


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    box: BoxDiscretization
    potential: str

    def __post_init__(self):
        if np.any(np.diff(self.eigenvalues) <= 0.0):
            raise ConvergenceError("eigenvalues are not strictly increasing")


def box_potential(model: ConformalModel, potential: str, q: np.ndarray) -> np.ndarray:
    """Quantum-normalized effective potential on the grid."""
    if potential not in _POTENTIALS:
        raise ValueError(f"potential must be one of {_POTENTIALS}, got {potential!r}")
    sign = +1.0 if potential == "R" else -1.0
    M, hb, w = model.mass, model.hbar, model.omega
    return (hb * hb * model.g / (2.0 * M)) / q**2 + sign * 0.5 * M * w * w * q**2


def eigenvalues(
    model: ConformalModel, potential: str, box: BoxDiscretization, count: int
) -> SpectrumResult:
    """Lowest `count` Dirichlet eigenvalues; deterministic given the box."""
    if not (0 < count < box.n_points):
        raise ValueError("count must satisfy 0 < count < n_points")
    q = box.grid
    h = box.spacing
    V = box_potential(model, potential, q)
    c = model.hbar**2 / (2.0 * model.mass)
    try:
        if box.scheme_order == 2:
            diag = 2.0 * c / h**2 + V
            off = np.full(box.n_points - 1, -c / h**2)
            vals = eigh_tridiagonal(
                diag, off, select="i", select_range=(0, count - 1), eigvals_only=True
            )
        else:
            bands = np.zeros((3, box.n_points))
            bands[0] = 30.0 * c / (12.0 * h * h) + V
            bands[1, :-1] = -16.0 * c / (12.0 * h * h)
            bands[2, :-2] = c / (12.0 * h * h)
            vals = eig_banded(
                bands,
                lower=True,
                select="i",
                select_range=(0, count - 1),
                eigvals_only=True,
            )
    except LinAlgError as exc:
        raise ConvergenceError(f"banded eigensolve failed: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError("eigensolve produced non-finite values")
    return SpectrumResult(eigenvalues=np.asarray(vals), box=box, potential=potential)


@dataclass(frozen=True)
class StaircaseResult:
    E: np.ndarray
    counts: np.ndarray
    rho_smoothed: np.ndarray
    box: BoxDiscretization


def staircase(
    model: ConformalModel,
    box: BoxDiscretization,
    E_grid,
    potential: str = "S",
    count: int = 600,
    window_spacings: int = 6,
    spectrum: SpectrumResult | None = None,
) -> StaircaseResult:
    """Counting function N(E) and its smoothed derivative on E_grid.

    The derivative is a centered difference over a window of
    `window_spacings` local level spacings (>= 5 for a stable estimate).
    Raises InsufficientLevelsError when the resolved spectrum does not
    bracket the requested window.
    """
    if window_spacings < 5:
        raise ValueError("window_spacings must be >= 5")
    if spectrum is None:
        spectrum = eigenvalues(model, potential, box, count)
    levels = spectrum.eigenvalues
    E_grid = np.asarray(E_grid, dtype=float)
    counts = np.searchsorted(levels, E_grid, side="right").astype(float)

    rho = np.empty_like(E_grid)
    for i, E in enumerate(E_grid):
        idx = int(np.searchsorted(levels, E))
        lo = idx - window_spacings
        hi = idx + window_spacings
        if lo < 0 or hi >= levels.size:
            raise InsufficientLevelsError(
                f"spectrum (count={levels.size}, range [{levels[0]:g}, "
                f"{levels[-1]:g}]) does not bracket E = {E:g} with a "
                f"{window_spacings}-spacing window"
            )
        spacing = (levels[hi] - levels[lo]) / (hi - lo)
        W = window_spacings * spacing
        n_hi = np.searchsorted(levels, E + 0.5 * W, side="right")
        n_lo = np.searchsorted(levels, E - 0.5 * W, side="right")
        rho[i] = (n_hi - n_lo) / W
    return StaircaseResult(E=E_grid, counts=counts, rho_smoothed=rho, box=box)


def law_eigenvalue(model: ConformalModel, n: int) -> float:
    """Closed-form level hbar*w*(2n + mu + 1) of the compact potential."""
    return model.hbar * model.omega * (2 * n + model.mu + 1.0)


def richardson_order(
    model: ConformalModel, potential: str, box: BoxDiscretization, n_level: int = 0
) -> float:
    """Empirical convergence order from halving the grid spacing."""
    exact = law_eigenvalue(model, n_level)
    coarse = BoxDiscretization(
        box.q_min, box.L, (box.n_points + 1) // 2, box.scheme_order
    )
    e_c = abs(eigenvalues(model, potential, coarse, n_level + 1).eigenvalues[-1] - exact)
    e_f = abs(eigenvalues(model, potential, box, n_level + 1).eigenvalues[-1] - exact)
    if e_f == 0.0:
        return math.inf
    return math.log2(e_c / e_f)
