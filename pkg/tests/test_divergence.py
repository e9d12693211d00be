import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relfit.divergence import ObservedTable, bregman, subset_sums
from relfit.errors import LengthMismatchError, NonPositiveError

positive_vectors = st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=8)


def kl(p, q) -> float:
    # independent reference implementation for normalized vectors
    return sum(pi * math.log(pi / qi) for pi, qi in zip(p, q))


class TestBregman:
    def test_identity(self):
        v = np.array([0.3, 1.5, 2.0])
        assert bregman(v, v) == 0.0

    def test_hand_computed_value(self):
        value = bregman(np.array([1.0, 1.0]), np.array([2.0, 2.0]))
        assert value == pytest.approx(2.0 - 2.0 * math.log(2.0), abs=1e-12)

    def test_matches_kl_for_normalized_inputs(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            p = rng.uniform(0.05, 1.0, 5)
            q = rng.uniform(0.05, 1.0, 5)
            p /= p.sum()
            q /= q.sum()
            assert bregman(p, q) == pytest.approx(kl(p, q), abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            bregman(np.ones(2), np.ones(3))

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveError):
            bregman(np.array([1.0, 0.0]), np.ones(2))

    @settings(max_examples=100, deadline=None)
    @given(positive_vectors, positive_vectors)
    def test_nonnegative(self, t, u):
        n = min(len(t), len(u))
        t, u = np.array(t[:n]), np.array(u[:n])
        assert bregman(t, u) >= -1e-12

    @settings(max_examples=50, deadline=None)
    @given(positive_vectors, st.randoms(use_true_random=False))
    def test_permutation_invariant(self, t, rnd):
        t = np.array(t)
        u = t * np.linspace(0.5, 1.5, len(t))
        perm = list(range(len(t)))
        rnd.shuffle(perm)
        assert bregman(t[perm], u[perm]) == pytest.approx(bregman(t, u), rel=1e-12)

    def test_zero_only_at_identity(self):
        t = np.array([1.0, 2.0])
        u = np.array([1.0, 2.0000001])
        assert bregman(t, u) > 0.0


class TestObservedTable:
    def test_multinomial_q_normalizes(self):
        t = ObservedTable(np.array([2.0, 6.0]), "multinomial")
        assert np.allclose(t.q, [0.25, 0.75])

    def test_poisson_q_is_counts(self):
        t = ObservedTable(np.array([2.0, 6.0]), "poisson")
        assert np.all(t.q == t.counts)

    def test_rejects_bad_scheme(self):
        with pytest.raises(ValueError):
            ObservedTable(np.ones(2), "bootstrap")

    def test_rejects_all_zero(self):
        with pytest.raises(ValueError):
            ObservedTable(np.zeros(3), "poisson")

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            ObservedTable(np.array([1.0, -1.0]), "poisson")


class TestSubsetSums:
    def test_three_feature_data(self, curved_model, curved_q):
        assert np.allclose(subset_sums(curved_model, curved_q), [0.68, 0.88, 0.88])

    def test_ones_give_row_sums(self, curved_model):
        assert np.all(
            subset_sums(curved_model, np.ones(7)) == curved_model.entries.sum(axis=1)
        )

    def test_identity_matrix(self):
        v = np.array([0.2, 0.5, 0.3])
        assert np.all(subset_sums(np.eye(3, dtype=int), v) == v)

    def test_length_mismatch(self, curved_model):
        with pytest.raises(LengthMismatchError):
            subset_sums(curved_model, np.ones(5))
