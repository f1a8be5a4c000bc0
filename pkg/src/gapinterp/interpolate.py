"""Classical mean-square optimal interpolation over a gap set.

The optimal estimate of the functional A = sum_{j in K} a(j) xi(j) from the
observations on S = Z \\ K is characterized in the spectral domain by

    h(e^{i lambda}) = A(e^{i lambda}) - C(e^{i lambda}) / f(lambda),

where C carries coefficients c solving the Gram system B c = a with
B[u][v] = b(t_u - t_v), b = Fourier coefficients of 1/f. The error is
Delta = <c, a> = sum_j c(j) conj(a(j)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .densities import (
    DEFAULT_GRID,
    FourierCoeffs,
    SpectralDensity,
    Tabulated,
    angular_grid,
    evaluate_trig_poly,
    grid_fourier_coefficients,
    inverse_fourier_coeffs,
)
from .errors import (
    GridMismatch,
    InvalidParameters,
    LagOutOfRange,
    NotConverged,
    NotPositiveDefinite,
)
from .patterns import FunctionalWeights, ObservationPattern, missing_indices, weight_vector

TRUNCATION_SCHEDULE = (25, 50, 100, 200, 400)
PLATEAU_RTOL = 1e-8


@dataclass(frozen=True)
class GramMatrix:
    """Hermitian matrix B[u][v] = b(t_u - t_v) over the ordered missing set t."""

    matrix: np.ndarray
    indices: tuple

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return solve_hermitian(self.matrix, rhs)


def solve_hermitian(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a Hermitian positive-definite system; LDL fallback guards against
    marginal Cholesky failures, singularity surfaces as NotPositiveDefinite."""
    try:
        cf = scipy.linalg.cho_factor(matrix, lower=True, check_finite=False)
        return scipy.linalg.cho_solve(cf, rhs, check_finite=False)
    except np.linalg.LinAlgError:
        pass
    try:
        lu, d, perm = scipy.linalg.ldl(matrix, lower=True)
        # d may contain non-positive pivots; treat as a diagnostic failure
        pivots = np.diag(d).real
        if np.min(pivots) <= 0:
            raise NotPositiveDefinite(
                f"coefficient matrix is not positive definite (min pivot {np.min(pivots):.3e})"
            )
        return np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def build_gram(pattern: ObservationPattern, b: FourierCoeffs) -> GramMatrix:
    """Assemble B over the canonical missing-index order."""
    idx = missing_indices(pattern)
    lags = np.subtract.outer(idx, idx)
    if np.max(np.abs(lags)) > b.half_length:
        raise LagOutOfRange(
            f"needed lag {np.max(np.abs(lags))} exceeds coefficient half-length {b.half_length}"
        )
    half = b.half_length
    matrix = b.values[lags + half]
    return GramMatrix(matrix=np.asarray(matrix, dtype=complex), indices=tuple(idx))


@dataclass(frozen=True)
class InterpolationSolution:
    indices: tuple
    c: np.ndarray
    a: np.ndarray
    h_grid: np.ndarray
    h_coeffs: dict
    delta: float
    grid_size: int
    convergence: dict = field(default_factory=dict)

    def coefficient(self, j: int) -> complex:
        pos = self.indices.index(j)
        return complex(self.c[pos])


def _poly_on_grid(indices, coeffs, grid_size: int) -> np.ndarray:
    half = max(abs(j) for j in indices) if indices else 0
    spread = np.zeros(2 * half + 1, dtype=complex)
    for j, v in zip(indices, coeffs):
        spread[j + half] += v
    return evaluate_trig_poly(spread, grid_size)


def solve(
    pattern: ObservationPattern,
    weights: FunctionalWeights,
    f: SpectralDensity,
    grid_size: int = DEFAULT_GRID,
    b: FourierCoeffs | None = None,
) -> InterpolationSolution:
    """Solve B c = a and assemble the spectral characteristic and error."""
    idx = missing_indices(pattern)
    a = weight_vector(weights, pattern)
    max_lag = (max(idx) - min(idx)) if idx else 0
    if b is None:
        b = inverse_fourier_coeffs(
            f, half_length=max(max_lag, 1), grid_size=grid_size, check_tail=False
        )
    gram = build_gram(pattern, b)
    c = gram.solve(a)
    inner = complex(np.sum(c * np.conj(a)))
    scale = max(float(np.max(np.abs(a))) ** 2 * len(idx), 1e-300)
    if abs(inner.imag) > 1e-10 * max(abs(inner), scale):
        raise NotPositiveDefinite(f"error inner product has imaginary part {inner.imag:.3e}")
    delta = float(inner.real)

    a_grid = _poly_on_grid(idx, a, grid_size)
    c_grid = _poly_on_grid(idx, c, grid_size)
    f_grid = f.on_grid(grid_size)
    h_grid = a_grid - c_grid / f_grid
    h_coeffs = characteristic_coeffs(h_grid, idx)
    return InterpolationSolution(
        indices=tuple(idx), c=c, a=a, h_grid=h_grid, h_coeffs=h_coeffs,
        delta=delta, grid_size=grid_size,
    )


def characteristic_coeffs(h_grid: np.ndarray, idx) -> dict:
    """Fourier coefficients of h on the window [-L_h, L_h], L_h = 2 max|t| + 64."""
    window = 2 * max((abs(j) for j in idx), default=0) + 64
    window = min(window, h_grid.size // 2 - 1)
    vals = grid_fourier_coefficients(h_grid, window)
    return {m: complex(vals[m + window]) for m in range(-window, window + 1)}


def mse_of_characteristic(
    h_grid: np.ndarray,
    pattern: ObservationPattern,
    weights: FunctionalWeights,
    f: SpectralDensity,
) -> float:
    """Delta(h; f) = (1/2pi) int |A - h|^2 f dlambda for an arbitrary pair."""
    grid_size = h_grid.size
    if isinstance(f, Tabulated) and f.values.size > grid_size:
        raise GridMismatch(
            "tabulated density is finer than the characteristic grid; "
            "downsampling would alias"
        )
    f_grid = f.on_grid(grid_size)
    if f_grid.size != grid_size:
        raise GridMismatch("density grid does not match the characteristic grid")
    idx = missing_indices(pattern)
    a = weight_vector(weights, pattern)
    a_grid = _poly_on_grid(idx, a, grid_size)
    return float(np.mean(np.abs(a_grid - h_grid) ** 2 * f_grid))


def solve_truncated(
    pattern: ObservationPattern,
    weights: FunctionalWeights,
    f: SpectralDensity,
    schedule=TRUNCATION_SCHEDULE,
    grid_size: int = DEFAULT_GRID,
) -> InterpolationSolution:
    """Solve an infinite-pattern problem at increasing truncation depths and
    require a relative plateau of the error sequence."""
    if not pattern.is_infinite:
        raise InvalidParameters("truncation schedule applies to infinite patterns only")
    schedule = sorted(set(int(t) for t in schedule))
    if len(schedule) < 2:
        raise InvalidParameters("schedule needs at least two depths")
    deltas = []
    solution = None
    for depth in schedule:
        solution = solve(pattern.with_truncation(depth), weights, f, grid_size=grid_size)
        deltas.append(solution.delta)
    tail = weights.tail_fraction(pattern.with_truncation(schedule[-1]))
    gap = abs(deltas[-1] - deltas[-2])
    converged = gap <= PLATEAU_RTOL * max(abs(deltas[-1]), 1e-300) and tail < 1e-10
    report = {
        "schedule": schedule,
        "deltas": deltas,
        "final_gap": gap,
        "tail_fraction": tail,
        "converged": converged,
    }
    if not converged:
        raise NotConverged("truncated error sequence did not plateau", diagnostics=report)
    return InterpolationSolution(
        indices=solution.indices, c=solution.c, a=solution.a,
        h_grid=solution.h_grid, h_coeffs=solution.h_coeffs,
        delta=solution.delta, grid_size=solution.grid_size, convergence=report,
    )
