import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import maximum_3, saddle_3, random_signed_permutation
from orthentropy.entropy import (
    entropy_bound,
    euclidean_gradient,
    renyi_power_sum,
    row_probabilities,
    shannon_entropy,
    stationarity_residual,
)
from orthentropy.manifold import tangent_project
from orthentropy.matrices import NotOrthogonalError, haar_random_orthogonal, rescaled_hadamard

# mpmath, 30 digits
H_MAX3 = 2.8948887690222831648
H_SADDLE3 = 2.7725887222397812377  # 4 ln 2


def brute_entropy(a):
    """Independent reference: plain double loop over -x^2 ln x^2."""
    total = 0.0
    for row in np.asarray(a):
        for x in row:
            if x != 0.0:
                total -= x * x * math.log(x * x)
    return total


def fd_gradient(a, h=1e-6):
    a = np.array(a, dtype=float)
    g = np.zeros_like(a)
    for idx in np.ndindex(a.shape):
        plus, minus = a.copy(), a.copy()
        plus[idx] += h
        minus[idx] -= h
        g[idx] = (brute_entropy(plus) - brute_entropy(minus)) / (2 * h)
    return g


def haar_bounded_away(n, count, floor, start_seed=0):
    out, seed = [], start_seed
    while len(out) < count:
        m = haar_random_orthogonal(n, seed)
        seed += 1
        if np.min(np.abs(m.entries)) > floor:
            out.append(m)
    return out


class TestShannon:
    def test_identity(self, backend):
        rep = shannon_entropy(np.eye(3))
        assert rep.entropy == 0.0
        assert rep.deficit == pytest.approx(3 * math.log(3), abs=1e-15)

    def test_hadamard_2(self, backend):
        assert shannon_entropy(rescaled_hadamard(1)).entropy == pytest.approx(2 * math.log(2), abs=1e-15)

    def test_known_maximum(self, backend):
        assert shannon_entropy(maximum_3()).entropy == pytest.approx(H_MAX3, abs=1e-14)

    def test_known_saddle(self, backend):
        assert shannon_entropy(saddle_3()).entropy == pytest.approx(H_SADDLE3, abs=1e-14)

    def test_report_fields(self):
        rep = shannon_entropy(saddle_3())
        assert rep.n == 3
        assert sum(rep.per_row) == pytest.approx(rep.entropy, abs=1e-15)
        assert all(0 <= h <= math.log(3) + 1e-12 for h in rep.per_row)
        assert rep.to_dict()["per_row"] == list(rep.per_row)

    def test_rejects_non_orthogonal(self):
        with pytest.raises(NotOrthogonalError):
            shannon_entropy(np.ones((2, 2)))

    def test_matches_brute_force(self, backend):
        for seed in range(10):
            m = haar_random_orthogonal(6, seed)
            assert shannon_entropy(m).entropy == pytest.approx(brute_entropy(m.entries), abs=1e-13)

    def test_bounds_random(self):
        for n in range(1, 9):
            for seed in range(5):
                h = shannon_entropy(haar_random_orthogonal(n, seed)).entropy
                assert 0 <= h <= n * math.log(n) + 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_entropy_symmetries(n, seed):
    rng = np.random.default_rng(seed)
    m = haar_random_orthogonal(n, seed).entries
    h = shannon_entropy(m).entropy
    p, q = random_signed_permutation(n, rng), random_signed_permutation(n, rng)
    assert shannon_entropy(p @ m @ q).entropy == pytest.approx(h, rel=1e-14, abs=1e-15)
    # transposition permutes the summands, so only rounding order changes
    assert shannon_entropy(m.T).entropy == pytest.approx(h, rel=1e-14, abs=1e-15)


def test_row_probabilities():
    rp = row_probabilities(maximum_3())
    assert rp.n == 3
    np.testing.assert_allclose(rp.p.sum(axis=1), 1.0, atol=1e-12)
    assert np.all((rp.p >= 0) & (rp.p <= 1))


class TestBound:
    @pytest.mark.parametrize(
        "n, expected", [(1, 0.0), (3, 3.2958368660043291), (4, 5.5451774444795625)]
    )
    def test_values(self, n, expected):
        assert entropy_bound(n) == pytest.approx(expected, abs=1e-15)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            entropy_bound(0)


class TestPowerSum:
    def test_alpha_one_is_n(self, backend):
        for n in (2, 5, 9):
            assert renyi_power_sum(haar_random_orthogonal(n, 0), 1.0) == pytest.approx(n, abs=1e-13)

    def test_identity_alpha_two(self, backend):
        assert renyi_power_sum(np.eye(3), 2.0) == 3.0

    def test_hadamard_closed_form(self, backend):
        assert renyi_power_sum(rescaled_hadamard(1), 2.0) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.9])
    def test_zero_entries_small_alpha(self, backend, alpha):
        # 0**alpha counts as 0: identity has exactly n unit entries
        assert renyi_power_sum(np.eye(4), alpha) == 4.0

    @pytest.mark.parametrize("alpha", [0.0, -1.0, float("nan")])
    def test_rejects_bad_alpha(self, alpha):
        with pytest.raises(ValueError):
            renyi_power_sum(np.eye(2), alpha)

    def test_shannon_limit(self):
        eps = 1e-6
        for m in haar_bounded_away(4, 10, 0.05):
            h = shannon_entropy(m).entropy
            approx = (renyi_power_sum(m, 1 - eps) - 4) / eps
            assert abs(approx - h) <= 1e-4 * max(1.0, h)


class TestGradient:
    def test_zero_entries(self, backend):
        g = euclidean_gradient(saddle_3())
        assert g[1, 1] == 0.0

    def test_stationary_magnitude(self, backend):
        # (O_ij)^2 = 1/e zeroes the entry gradient
        c = math.exp(-0.5)
        s = math.sqrt(1 - c * c)
        g = euclidean_gradient(np.array([[c, s], [-s, c]]))
        assert abs(g[0, 0]) < 1e-15 and abs(g[1, 1]) < 1e-15

    def test_identity(self, backend):
        np.testing.assert_allclose(euclidean_gradient(np.eye(3)), -2 * np.eye(3), atol=0)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_finite_differences(self, backend, n):
        for m in haar_bounded_away(n, 3, 1e-3, start_seed=100 * n):
            g = euclidean_gradient(m)
            fd = fd_gradient(m.entries)
            assert np.linalg.norm(g - fd) / np.linalg.norm(g) < 1e-6


class TestResidual:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0, 3.0])
    def test_known_maximum(self, backend, alpha):
        assert stationarity_residual(maximum_3(), alpha).max_abs <= 1e-12

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
    def test_known_saddle(self, backend, alpha):
        assert stationarity_residual(saddle_3(), alpha).max_abs <= 1e-12

    @pytest.mark.parametrize("alpha", [0.3, 1.0, 2.0])
    def test_identity(self, backend, alpha):
        assert stationarity_residual(np.eye(3), alpha).max_abs == 0.0

    def test_generic_matrix_not_critical(self, backend):
        assert stationarity_residual(haar_random_orthogonal(4, seed=7), 1.0).max_abs > 1e-3

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_rescaled_hadamard(self, alpha):
        for k in range(4):
            assert stationarity_residual(rescaled_hadamard(k), alpha).max_abs <= 1e-12

    def test_exact_antisymmetry(self, backend):
        for seed in range(5):
            r = stationarity_residual(haar_random_orthogonal(5, seed), 1.3)
            assert np.array_equal(r.residuals, -r.residuals.T)
            assert np.all(np.diag(r.residuals) == 0)
            assert r.max_abs == np.max(np.abs(r.residuals))

    def test_row_pair_worked_example(self):
        # first two columns of the n=3 maximum at exponent a, written out term by term
        a = 2.5
        lhs = (1 / 3) ** (2 * (a - 1)) * (-1 / 3) * (2 / 3) + (2 / 3) ** (2 * (a - 1)) * (2 / 3) * (-1 / 3) \
            + (2 / 3) ** (2 * (a - 1)) * (2 / 3) * (2 / 3)
        rhs = (2 / 3) ** (2 * (a - 1)) * (2 / 3) * (-1 / 3) + (1 / 3) ** (2 * (a - 1)) * (-1 / 3) * (2 / 3) \
            + (2 / 3) ** (2 * (a - 1)) * (2 / 3) * (2 / 3)
        assert lhs == pytest.approx(rhs, abs=1e-15)
        assert stationarity_residual(maximum_3(), a).residuals[0, 1] == pytest.approx(lhs - rhs, abs=1e-15)

    def test_shannon_residual_is_riemannian_gradient(self):
        # for alpha = 1 the residual array equals skew(O^T G)
        m = haar_random_orthogonal(5, seed=11)
        r = stationarity_residual(m, 1.0).residuals
        a = tangent_project(m, euclidean_gradient(m)).A
        np.testing.assert_allclose(r, a, atol=1e-13)

    @pytest.mark.parametrize("alpha", [0.0, -2.0])
    def test_rejects_bad_alpha(self, alpha):
        with pytest.raises(ValueError):
            stationarity_residual(np.eye(2), alpha)
