"""Gap geometries and functional weights."""

import numpy as np
import pytest

from gapinterp.errors import InvalidParameters, SupportMismatch
from gapinterp.patterns import (
    FunctionalWeights,
    ObservationPattern,
    missing_indices,
    observed_indices,
    span,
    weight_vector,
)


class TestMissingIndices:
    def test_s4_canonical(self):
        p = ObservationPattern("S4", N=1, M1=3, N1=3)
        assert missing_indices(p) == [0, 1, -4, -5, -6]

    def test_s5_canonical(self):
        p = ObservationPattern("S5", N=1, M2=2, N2=3)
        assert missing_indices(p) == [0, 1, 4, 5, 6]

    def test_s6_small(self):
        p = ObservationPattern("S6", N=0, M1=1, N1=1, M2=1, N2=1)
        assert missing_indices(p) == [0, -2, 2]

    def test_s1_truncated(self):
        p = ObservationPattern("S1", N=1, M1=2, T=4)
        assert missing_indices(p) == [0, 1, -3, -4, -5, -6]

    def test_s2_truncated(self):
        p = ObservationPattern("S2", N=0, M2=1, T=3)
        assert missing_indices(p) == [0, 2, 3, 4]

    def test_s3_both_tails(self):
        p = ObservationPattern("S3", N=0, M1=1, M2=1, T=2)
        assert missing_indices(p) == [0, -2, -3, 2, 3]

    def test_sizes_finite(self):
        p = ObservationPattern("S6", N=2, M1=2, N1=3, M2=1, N2=2)
        assert len(missing_indices(p)) == (2 + 1) + 3 + 2

    def test_stable_repeated_calls(self):
        p = ObservationPattern("S6", N=1, M1=2, N1=2, M2=3, N2=1)
        assert missing_indices(p) == missing_indices(p)

    def test_s6_empty_right_equals_s4(self):
        s6 = ObservationPattern("S6", N=1, M1=2, N1=3, M2=1, N2=0)
        s4 = ObservationPattern("S4", N=1, M1=2, N1=3)
        assert missing_indices(s6) == missing_indices(s4)

    def test_s6_empty_left_equals_s5(self):
        s6 = ObservationPattern("S6", N=1, M1=1, N1=0, M2=2, N2=3)
        s5 = ObservationPattern("S5", N=1, M2=2, N2=3)
        assert missing_indices(s6) == missing_indices(s5)

    def test_truncation_appends_per_block(self):
        p = ObservationPattern("S3", N=1, M1=2, M2=1, T=3)
        q = p.with_truncation(6)
        pc, pl, pr = p.blocks()
        qc, ql, qr = q.blocks()
        assert qc == pc
        assert ql[: len(pl)] == pl
        assert qr[: len(pr)] == pr

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameters):
            ObservationPattern("S4", N=-1, M1=1, N1=1)
        with pytest.raises(InvalidParameters):
            ObservationPattern("S4", N=0, M1=0, N1=1)
        with pytest.raises(InvalidParameters):
            ObservationPattern("S1", N=0, M1=1)  # missing T
        with pytest.raises(InvalidParameters):
            ObservationPattern("S9", N=0)

    def test_observed_indices(self):
        p = ObservationPattern("S5", N=0, M2=1, N2=1)
        assert observed_indices(p, -2, 4) == [-2, -1, 1, 3, 4]

    def test_span(self):
        assert span(ObservationPattern("S5", N=1, M2=1, N2=1)) == 3
        assert span(ObservationPattern("S4", N=1, M1=2, N1=3)) == 6


class TestWeights:
    def test_vector_all_ones(self):
        p = ObservationPattern("S4", N=1, M1=3, N1=3)
        w = FunctionalWeights(values={j: 1.0 for j in [0, 1, -4, -5, -6]})
        assert np.allclose(weight_vector(w, p), np.ones(5))

    def test_vector_dyadic(self):
        p = ObservationPattern("S5", N=0, M2=1, N2=2)
        w = FunctionalWeights(values={0: 1.0, 2: 0.25, 3: 0.125})
        assert np.allclose(weight_vector(w, p), [1.0, 0.25, 0.125])

    def test_support_mismatch(self):
        p = ObservationPattern("S5", N=0, M2=1, N2=2)
        w = FunctionalWeights(values={0: 1.0, 1: 1.0})  # index 1 is observed
        with pytest.raises(SupportMismatch):
            weight_vector(w, p)

    def test_zeros_inside_support_allowed(self):
        p = ObservationPattern("S5", N=0, M2=1, N2=2)
        w = FunctionalWeights(values={0: 1.0, 2: 0.0})
        assert np.allclose(weight_vector(w, p), [1.0, 0.0, 0.0])

    def test_geometric_truncated(self):
        p = ObservationPattern("S1", N=0, M1=1, T=50)
        w = FunctionalWeights(geometric=(1.0, 0.5))
        vec = weight_vector(w, p)
        assert vec.size == 51
        assert abs(vec[0] - 1.0) < 1e-15
        assert abs(vec[1] - 0.5 ** 2) < 1e-15  # index -2

    def test_geometric_tail_fraction_decreases(self):
        w = FunctionalWeights(geometric=(1.0, 0.5))
        shallow = w.tail_fraction(ObservationPattern("S1", N=0, M1=1, T=5))
        deep = w.tail_fraction(ObservationPattern("S1", N=0, M1=1, T=30))
        assert deep < shallow
        assert w.tail_fraction(ObservationPattern("S1", N=0, M1=1, T=200)) < 1e-10

    def test_geometric_tail_matches_series(self):
        w = FunctionalWeights(geometric=(1.0, 0.5))
        p = ObservationPattern("S1", N=0, M1=1, T=5)
        q = 0.25
        first = 1 + 1 + 5  # first dropped index magnitude
        tail = q ** first / (1 - q)
        mass = sum(0.25 ** abs(j) for j in [0, -2, -3, -4, -5, -6])
        assert abs(w.tail_fraction(p) - tail / (mass + tail)) < 1e-12

    def test_bad_rho(self):
        with pytest.raises(InvalidParameters):
            FunctionalWeights(geometric=(1.0, 1.0))

    def test_exactly_one_spec(self):
        with pytest.raises(InvalidParameters):
            FunctionalWeights()
        with pytest.raises(InvalidParameters):
            FunctionalWeights(values={0: 1.0}, geometric=(1.0, 0.5))

    def test_complex_values(self):
        p = ObservationPattern("S5", N=0, M2=1, N2=1)
        w = FunctionalWeights(values={0: 1 + 2j, 2: [3, 4][0]})
        vec = weight_vector(w, p)
        assert vec[0] == 1 + 2j
