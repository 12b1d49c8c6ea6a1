import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import maximum_3, saddle_3, random_signed_permutation
from orthentropy.matrices import (
    MatrixFormatError,
    NotOrthogonalError,
    OrthogonalMatrix,
    SquareMatrix,
    canonical_fingerprint,
    family_matrix,
    haar_random_orthogonal,
    load_matrix,
    orthogonality_defect,
    render_matrix,
    rescaled_hadamard,
    sylvester_hadamard,
)


class TestLoadMatrix:
    def test_identity(self):
        m = load_matrix("1,0\n0,1")
        assert m.n == 2
        np.testing.assert_array_equal(m.entries, np.eye(2))

    def test_whitespace_and_trailing_newline(self):
        m = load_matrix(" 1 , 0 \n0,  1\n\n")
        np.testing.assert_array_equal(m.entries, np.eye(2))

    def test_saddle_nine_digits(self):
        text = "0.5,0.707106781,0.5\n0.707106781,0,-0.707106781\n0.5,-0.707106781,0.5"
        m = load_matrix(text)
        np.testing.assert_allclose(m.entries, saddle_3(), atol=1e-9, rtol=0)

    @pytest.mark.parametrize(
        "text, kind",
        [
            ("1,0,0\n0,1", "ragged"),
            ("1,0,0\n0,1,0", "non-square"),
            ("1,x\n0,1", "unparseable"),
            ("1,nan\n0,1", "non-finite"),
            ("1,inf\n0,1", "non-finite"),
            ("", "empty"),
            ("\n \n", "empty"),
        ],
    )
    def test_malformed(self, text, kind):
        with pytest.raises(MatrixFormatError) as info:
            load_matrix(text)
        assert info.value.kind == kind

    def test_diagnostics_are_distinct(self):
        messages = set()
        for text in ("1,0,0\n0,1", "1,0,0\n0,1,0", "1,x\n0,1", "1,nan\n0,1"):
            with pytest.raises(MatrixFormatError) as info:
                load_matrix(text)
            messages.add(str(info.value).split(":")[0])
        assert len(messages) == 4


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6)).map(lambda t: (t[0], t[0])),
              elements=st.floats(allow_nan=False, allow_infinity=False, width=64)))
def test_render_round_trip(a):
    assert np.array_equal(load_matrix(render_matrix(a)).entries, a)


def test_square_matrix_rejects_non_finite_and_is_read_only():
    with pytest.raises(ValueError):
        SquareMatrix(np.array([[1.0, np.nan], [0.0, 1.0]]))
    m = SquareMatrix(np.eye(2))
    with pytest.raises(ValueError):
        m.entries[0, 0] = 5.0


class TestOrthogonalityDefect:
    @pytest.mark.parametrize("n", [1, 3, 10])
    def test_identity(self, n):
        assert orthogonality_defect(np.eye(n)) == 0.0

    def test_known_maximum(self):
        assert orthogonality_defect(maximum_3()) <= 1e-15

    def test_all_ones(self):
        # columns have inner product 2 and squared norm 2, so |2 - 0| dominates |2 - 1|
        assert orthogonality_defect(np.ones((2, 2))) == 2.0

    def test_validation_rejects_with_defect(self):
        with pytest.raises(NotOrthogonalError) as info:
            OrthogonalMatrix.validate(np.ones((2, 2)))
        assert info.value.defect == 2.0
        assert "defect 2" in str(info.value)


class TestHaar:
    def test_deterministic(self):
        a = haar_random_orthogonal(4, seed=123)
        b = haar_random_orthogonal(4, seed=123)
        assert np.array_equal(a.entries, b.entries)
        assert not np.array_equal(a.entries, haar_random_orthogonal(4, seed=124).entries)

    @pytest.mark.parametrize("seed", range(5))
    def test_defect(self, seed):
        assert haar_random_orthogonal(5, seed).defect <= 1e-12

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            haar_random_orthogonal(0, seed=1)

    def test_mean_entry_near_zero(self):
        vals = [haar_random_orthogonal(2, s).entries[0, 0] for s in range(1000)]
        assert abs(np.mean(vals)) < 0.1

    def test_haar_first_column_uniform_angle(self):
        # for Haar O(2) the first column is uniform on the circle
        angles = [math.atan2(*haar_random_orthogonal(2, s).entries[:, 0][::-1]) for s in range(2000)]
        hist, _ = np.histogram(angles, bins=8, range=(-math.pi, math.pi))
        assert hist.min() > 180 and hist.max() < 320

    def test_both_determinant_signs(self):
        dets = {np.sign(np.linalg.det(haar_random_orthogonal(3, s).entries)) for s in range(40)}
        assert dets == {-1.0, 1.0}


class TestSylvester:
    def test_base_cases(self):
        np.testing.assert_array_equal(sylvester_hadamard(0).entries, [[1.0]])
        np.testing.assert_array_equal(sylvester_hadamard(1).entries, [[1.0, 1.0], [1.0, -1.0]])

    def test_determinant_k2(self):
        assert abs(np.linalg.det(sylvester_hadamard(2).entries)) == pytest.approx(16.0)

    @pytest.mark.parametrize("k", range(8))
    def test_exact_orthogonality(self, k):
        h = sylvester_hadamard(k).entries
        n = 2**k
        assert set(np.unique(h)) <= {-1.0, 1.0}
        np.testing.assert_array_equal(h @ h.T, n * np.eye(n))

    def test_rescaled_validates_up_to_cap(self):
        for k in range(13):
            assert rescaled_hadamard(k).defect <= 1e-10

    def test_cap(self):
        with pytest.raises(ValueError):
            sylvester_hadamard(13)
        with pytest.raises(ValueError):
            sylvester_hadamard(-1)


class TestFamily:
    def test_n3_is_known_maximum(self):
        np.testing.assert_allclose(family_matrix(3).entries, maximum_3(), rtol=0, atol=1e-16)

    def test_n2(self):
        np.testing.assert_array_equal(family_matrix(2).entries, [[0.0, 1.0], [1.0, 0.0]])

    def test_n100_defect(self):
        assert orthogonality_defect(family_matrix(100)) <= 1e-12

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            family_matrix(1)

    @pytest.mark.parametrize("n", [2, 3, 5, 17, 64, 100])
    def test_symmetric_involutory(self, n):
        m = family_matrix(n).entries
        assert np.array_equal(m, m.T)
        assert np.max(np.abs(m @ m - np.eye(n))) <= 1e-12

    @pytest.mark.parametrize("n", [3, 5, 9])
    def test_row_magnitudes(self, n):
        expected = sorted([(n - 2) / n] + [2 / n] * (n - 1))
        for row in np.abs(family_matrix(n).entries):
            np.testing.assert_allclose(sorted(row), expected, atol=1e-15)


class TestFingerprint:
    def test_row_swap(self):
        m = maximum_3()
        assert canonical_fingerprint(m) == canonical_fingerprint(m[[1, 0, 2]])

    def test_sign_flip(self):
        m = maximum_3()
        assert canonical_fingerprint(m) == canonical_fingerprint(-m)

    def test_distinguishes_known_points(self):
        assert canonical_fingerprint(maximum_3()) != canonical_fingerprint(saddle_3())

    def test_serialization(self):
        assert str(canonical_fingerprint(np.eye(2))) == "n=2;rows=0.000000,1.000000;0.000000,1.000000"

    def test_rejects_bad_quantum(self):
        with pytest.raises(ValueError):
            canonical_fingerprint(np.eye(2), quantum=0)

    def test_invariant_under_signed_permutations(self):
        rng = np.random.default_rng(0)
        m = haar_random_orthogonal(5, seed=3).entries
        fp = canonical_fingerprint(m)
        for _ in range(100):
            p = random_signed_permutation(5, rng)
            q = random_signed_permutation(5, rng)
            assert canonical_fingerprint(p @ m @ q) == fp
