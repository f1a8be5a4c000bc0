"""Gram assembly, coefficient solves, spectral characteristics, and errors."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapinterp.densities import (
    FourierCoeffs,
    InversePolynomial,
    RationalAR,
    Tabulated,
    angular_grid,
    covariance,
    inverse_fourier_coeffs,
)
from gapinterp.errors import GridMismatch, LagOutOfRange, NotConverged
from gapinterp.interpolate import (
    build_gram,
    mse_of_characteristic,
    solve,
    solve_truncated,
)
from gapinterp.patterns import FunctionalWeights, ObservationPattern, missing_indices


def ones_weights(pattern):
    return FunctionalWeights(values={j: 1.0 for j in missing_indices(pattern)})


def random_coeffs(rng, half):
    """A Hermitian coefficient sequence whose trig polynomial is positive."""
    gamma = rng.normal(size=half + 1) + 1j * rng.normal(size=half + 1)
    gamma[0] = abs(gamma[0]) + 1.0
    lam = angular_grid(2048)
    poly = sum(g * np.exp(-1j * n * lam) for n, g in enumerate(gamma))
    vals = np.abs(poly) ** 2
    from gapinterp.densities import grid_fourier_coefficients

    return FourierCoeffs(grid_fourier_coefficients(vals, half)).symmetrized()


class TestBuildGram:
    def test_entry_rule_simple(self):
        p = ObservationPattern("S4", N=0, M1=2, N1=1)  # K = [0, -3]
        b = inverse_fourier_coeffs(RationalAR(alpha=0.5), half_length=3)
        g = build_gram(p, b).matrix
        assert np.allclose(g, [[1.25, 0.0], [0.0, 1.25]])

    def test_entry_rule_s5(self):
        p = ObservationPattern("S5", N=1, M2=1, N2=1)  # K = [0, 1, 3]
        b = inverse_fourier_coeffs(RationalAR(alpha=0.5), half_length=3)
        g = build_gram(p, b).matrix
        expected = [[1.25, -0.5, 0.0], [-0.5, 1.25, 0.0], [0.0, 0.0, 1.25]]
        assert np.allclose(g, expected)

    def test_white_noise_identity(self):
        p = ObservationPattern("S6", N=1, M1=2, N1=2, M2=1, N2=2)
        b = FourierCoeffs.from_dict({0: 1.0}, half_length=10)
        g = build_gram(p, b).matrix
        assert np.allclose(g, np.eye(len(missing_indices(p))))

    def test_lag_out_of_range(self):
        p = ObservationPattern("S4", N=0, M1=5, N1=1)
        b = FourierCoeffs.from_dict({0: 1.25, 1: -0.5, -1: -0.5})
        with pytest.raises(LagOutOfRange):
            build_gram(p, b)

    def test_hermitian(self):
        rng = np.random.default_rng(5)
        b = random_coeffs(rng, 12)
        p = ObservationPattern("S6", N=1, M1=2, N1=2, M2=2, N2=1)
        g = build_gram(p, b).matrix
        assert np.allclose(g, g.conj().T)

    @settings(max_examples=20, deadline=None)
    @given(
        st.integers(min_value=0, max_value=2),
        st.integers(min_value=1, max_value=3),
        st.integers(min_value=1, max_value=3),
        st.integers(min_value=1, max_value=3),
        st.integers(min_value=1, max_value=3),
        st.integers(min_value=0, max_value=2 ** 31 - 1),
    )
    def test_matches_literal_block_formulas(self, N, M1, N1, M2, N2, seed):
        """The single entry rule reproduces all nine hand-indexed blocks of
        the three-block system."""
        rng = np.random.default_rng(seed)
        b = random_coeffs(rng, N + M1 + N1 + M2 + N2 + 2)
        p = ObservationPattern("S6", N=N, M1=M1, N1=N1, M2=M2, N2=N2)
        G = build_gram(p, b).matrix

        B1 = np.array([[b[i - j] for j in range(N + 1)] for i in range(N + 1)])
        B2 = np.array([[b[M1 + 1 + i + j] for j in range(N1)] for i in range(N + 1)])
        B3 = np.array([[b[-M1 - 1 - i - j] for j in range(N + 1)] for i in range(N1)])
        B4 = np.array([[b[j - i] for j in range(N1)] for i in range(N1)])
        B5 = np.array([[b[-N - M2 - 1 + i - j] for j in range(N2)] for i in range(N + 1)])
        B6 = np.array([[b[N + M2 + 1 + i - j] for j in range(N + 1)] for i in range(N2)])
        B7 = np.array([[b[i - j] for j in range(N2)] for i in range(N2)])
        B8 = np.array([[b[-N - M2 - 1 - j - M1 - 1 - i] for j in range(N2)] for i in range(N1)])
        B9 = np.array([[b[N + M2 + 1 + i + M1 + 1 + j] for j in range(N1)] for i in range(N2)])

        literal = np.block([[B1, B2, B5], [B3, B4, B8], [B6, B9, B7]])
        assert np.allclose(G, literal, atol=1e-14)


class TestSolve:
    def test_example_regression(self):
        f = RationalAR(alpha=0.5)
        p = ObservationPattern("S4", N=1, M1=2, N1=3)
        sol = solve(p, ones_weights(p), f)
        assert abs(sol.coefficient(0) - 4 / 3) < 1e-12
        assert abs(sol.coefficient(1) - 4 / 3) < 1e-12
        assert abs(sol.coefficient(-3) - 28 / 17) < 1e-12
        assert abs(sol.coefficient(-4) - 36 / 17) < 1e-12
        assert abs(sol.coefficient(-5) - 28 / 17) < 1e-12
        assert abs(sol.delta - 412 / 51) < 1e-12

    def test_white_noise(self):
        f = Tabulated(np.ones(4096))
        p = ObservationPattern("S6", N=1, M1=1, N1=2, M2=2, N2=1)
        w = FunctionalWeights(values={j: (k + 1) * 1.0 for k, j in
                                      enumerate(missing_indices(p))})
        sol = solve(p, w, f)
        assert np.allclose(sol.c, sol.a)
        assert abs(sol.delta - float(np.sum(np.abs(sol.a) ** 2))) < 1e-12

    def test_zero_weights(self):
        f = RationalAR(alpha=0.5)
        p = ObservationPattern("S5", N=0, M2=1, N2=1)
        w = FunctionalWeights(values={0: 0.0, 2: 0.0})
        sol = solve(p, w, f)
        assert sol.delta == 0.0
        assert np.max(np.abs(sol.h_grid)) < 1e-14

    def test_linearity(self):
        f = RationalAR(alpha=np.array([0.4, -0.2]))
        p = ObservationPattern("S5", N=1, M2=1, N2=2)
        w1 = FunctionalWeights(values={0: 1.0, 1: 0.5, 3: 0.25, 4: 0.1})
        kappa = 2.0 - 1.0j
        w2 = FunctionalWeights(values={0: kappa, 1: 0.5 * kappa, 3: 0.25 * kappa,
                                       4: 0.1 * kappa})
        s1 = solve(p, w1, f)
        s2 = solve(p, w2, f)
        assert np.allclose(s2.c, kappa * s1.c, atol=1e-12)
        assert abs(s2.delta - abs(kappa) ** 2 * s1.delta) < 1e-10

    def test_gap_coefficients_vanish(self):
        f = RationalAR(alpha=np.array([0.3, 0.2]))
        p = ObservationPattern("S6", N=1, M1=2, N1=2, M2=3, N2=2)
        sol = solve(p, ones_weights(p), f)
        norm_a = np.sqrt(np.sum(np.abs(sol.a) ** 2))
        worst = max(abs(sol.h_coeffs[j]) for j in sol.indices)
        assert worst <= 1e-8 * norm_a

    def test_orthogonality_on_observed(self):
        f = RationalAR(alpha=0.5)
        p = ObservationPattern("S4", N=1, M1=2, N1=3)
        sol = solve(p, ones_weights(p), f)
        lam = angular_grid(sol.grid_size)
        a_grid = sum(a * np.exp(1j * j * lam) for j, a in zip(sol.indices, sol.a))
        resid = (a_grid - sol.h_grid) * f.on_grid(sol.grid_size)
        norm_a = np.sqrt(np.sum(np.abs(sol.a) ** 2))
        observed = [t for t in range(-15, 16) if t not in set(sol.indices)][:20]
        for j in observed:
            val = np.mean(resid * np.exp(-1j * j * lam))
            assert abs(val) <= 1e-8 * norm_a

    def test_two_error_formulas_agree(self):
        f = RationalAR(alpha=np.array([0.3 + 0.1j]))
        p = ObservationPattern("S5", N=1, M2=2, N2=2)
        sol = solve(p, ones_weights(p), f)
        lam = angular_grid(sol.grid_size)
        c_grid = sum(c * np.exp(1j * j * lam) for j, c in zip(sol.indices, sol.c))
        direct = float(np.mean(np.abs(c_grid) ** 2 * f.inverse_on_grid(sol.grid_size)))
        assert abs(direct - sol.delta) < 1e-8 * sol.delta

    def test_mse_formula_matches_solution(self):
        f = RationalAR(alpha=0.5)
        p = ObservationPattern("S4", N=1, M1=2, N1=3)
        w = ones_weights(p)
        sol = solve(p, w, f)
        val = mse_of_characteristic(sol.h_grid, p, w, f)
        assert abs(val - sol.delta) < 1e-8 * sol.delta

    def test_zero_characteristic_white_noise(self):
        p = ObservationPattern("S5", N=1, M2=1, N2=3)
        w = ones_weights(p)
        f = Tabulated(np.ones(4096))
        val = mse_of_characteristic(np.zeros(4096, dtype=complex), p, w, f)
        assert abs(val - 5.0) < 1e-12

    def test_suboptimality_under_other_density(self):
        rng = np.random.default_rng(11)
        p = ObservationPattern("S5", N=1, M2=1, N2=2)
        w = ones_weights(p)
        for _ in range(5):
            a1 = rng.uniform(-0.6, 0.6)
            a2 = rng.uniform(-0.6, 0.6)
            f1 = RationalAR(alpha=a1)
            f2 = RationalAR(alpha=np.array([a2, 0.1]))
            h1 = solve(p, w, f1).h_grid
            best2 = solve(p, w, f2).delta
            assert mse_of_characteristic(h1, p, w, f2) >= best2 - 1e-10

    def test_grid_mismatch(self):
        p = ObservationPattern("S5", N=0, M2=1, N2=1)
        w = ones_weights(p)
        f = Tabulated(np.ones(1024))
        with pytest.raises(GridMismatch):
            mse_of_characteristic(np.zeros(512, dtype=complex), p, w, f)

    def test_s6_with_empty_right_matches_s4(self):
        f = RationalAR(alpha=np.array([0.4]))
        s6 = ObservationPattern("S6", N=1, M1=2, N1=3, M2=1, N2=0)
        s4 = ObservationPattern("S4", N=1, M1=2, N1=3)
        sol6 = solve(s6, ones_weights(s6), f)
        sol4 = solve(s4, ones_weights(s4), f)
        assert np.allclose(sol6.c, sol4.c, atol=1e-12)
        assert abs(sol6.delta - sol4.delta) < 1e-12

    def test_example_additivity(self):
        f = RationalAR(alpha=0.5)
        s4 = ObservationPattern("S4", N=1, M1=2, N1=3)
        s5 = ObservationPattern("S5", N=1, M2=2, N2=3)
        s6 = ObservationPattern("S6", N=1, M1=2, N1=3, M2=2, N2=3)
        central = ObservationPattern("S4", N=1, M1=2, N1=0)
        d4 = solve(s4, ones_weights(s4), f).delta
        d5 = solve(s5, ones_weights(s5), f).delta
        d6 = solve(s6, ones_weights(s6), f).delta
        dc = solve(central, ones_weights(central), f).delta
        assert abs(d6 - (d4 + d5 - dc)) < 1e-10


class TestSolveTruncated:
    def test_plateau_and_convergence(self):
        f = RationalAR(alpha=0.5)
        p = ObservationPattern("S2", N=1, M2=1, T=1)
        w = FunctionalWeights(geometric=(1.0, 0.5))
        sol = solve_truncated(p, w, f, schedule=(10, 20, 40, 60, 120))
        deltas = sol.convergence["deltas"]
        assert sol.convergence["converged"]
        assert abs(deltas[-1] - deltas[-2]) <= 1e-8 * deltas[-1]

    def test_zero_tail_weights_stable_in_depth(self):
        f = RationalAR(alpha=0.5)
        p = ObservationPattern("S1", N=1, M1=2, T=1)
        w = FunctionalWeights(values={0: 1.0, 1: 2.0})
        d1 = solve(p.with_truncation(5), w, f).delta
        d2 = solve(p.with_truncation(50), w, f).delta
        assert abs(d1 - d2) < 1e-12

    def test_white_noise_any_depth(self):
        f = Tabulated(np.ones(4096))
        p = ObservationPattern("S3", N=0, M1=1, M2=1, T=1)
        w = FunctionalWeights(geometric=(1.0, 0.5))
        sol = solve_truncated(p, w, f, schedule=(25, 50, 100, 200))
        expected = sum(0.25 ** abs(j) for j in missing_indices(p.with_truncation(200)))
        assert abs(sol.delta - expected) < 1e-10

    def test_monotone_in_depth(self):
        # deeper truncation adds more unknowns to estimate, never lowering
        # the error for weights fixed on the shallow set
        f = RationalAR(alpha=0.5)
        p = ObservationPattern("S2", N=0, M2=1, T=1)
        w = FunctionalWeights(geometric=(1.0, 0.5))
        deltas = [solve(p.with_truncation(t), w, f).delta for t in (5, 10, 20, 40)]
        assert all(d2 >= d1 - 1e-12 for d1, d2 in zip(deltas, deltas[1:]))

    def test_not_converged_raises(self):
        f = RationalAR(alpha=0.5)
        p = ObservationPattern("S2", N=0, M2=1, T=1)
        w = FunctionalWeights(geometric=(1.0, 0.5))
        with pytest.raises(NotConverged):
            solve_truncated(p, w, f, schedule=(2, 3))
