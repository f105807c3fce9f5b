import math

import numpy as np
import pytest

from renyivar import (
    ClassStructureError,
    InputValidationError,
    NonnegMatrix,
    PairMeasure,
    classes,
    compatible,
    growth_rate,
    growth_rate_bruteforce,
    growth_rate_from_log,
    has_cycle,
    log_mass_sequence,
    maximal_abs_cont,
    perron,
    perron_from_log,
)
from renyivar.numerics import safe_log


def random_matrix(rng, d, density=0.7, scale=2.0):
    m = rng.uniform(0.0, scale, size=(d, d))
    m *= rng.random((d, d)) < density
    return m


class TestNonnegMatrix:
    def test_rejects_negative(self):
        with pytest.raises(InputValidationError):
            NonnegMatrix([[1.0, -0.1], [0.0, 1.0]])

    def test_rejects_nonfinite(self):
        with pytest.raises(InputValidationError):
            NonnegMatrix([[1.0, math.inf], [0.0, 1.0]])
        with pytest.raises(InputValidationError):
            NonnegMatrix([[math.nan, 0.0], [0.0, 1.0]])

    def test_rejects_nonsquare(self):
        with pytest.raises(InputValidationError):
            NonnegMatrix([[1.0, 2.0, 3.0]])


class TestClasses:
    def test_two_cycle_single_class(self):
        dec = classes(NonnegMatrix([[0.0, 1.0], [1.0, 0.0]]))
        assert dec.classes == ((0, 1),)
        assert dec.cyclic == (True,)

    def test_acyclic_chain(self):
        dec = classes(NonnegMatrix([[0.0, 1.0], [0.0, 0.0]]))
        assert dec.classes == ((0,), (1,))
        assert dec.cyclic == (False, False)
        assert not has_cycle(NonnegMatrix([[0.0, 1.0], [0.0, 0.0]]))

    def test_self_loop_is_cyclic(self):
        dec = classes(NonnegMatrix([[1.0, 1.0], [0.0, 0.0]]))
        assert dec.cyclic == (True, False)

    def test_block_structure(self):
        m = NonnegMatrix(
            [
                [1.0, 1.0, 0.0, 0.0],
                [1.0, 1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]
        )
        dec = classes(m)
        assert dec.classes == ((0, 1), (2, 3))
        assert dec.cyclic == (True, True)
        assert dec.class_of[0] == dec.class_of[1] == 0
        assert dec.class_of[2] == dec.class_of[3] == 1

    def test_restriction_to_states(self):
        m = NonnegMatrix([[1.0, 1.0], [1.0, 1.0]])
        dec = classes(m, states=[0])
        assert dec.classes == ((0,),)
        assert dec.class_of[1] == -1

    def test_classes_are_plain_ints(self):
        dec = classes(NonnegMatrix([[0.0, 1.0], [1.0, 0.0]]))
        assert all(type(s) is int for cls in dec.classes for s in cls)


class TestPerron:
    def test_two_cycle_eigendata(self):
        m = NonnegMatrix([[0.0, 1.0], [1.0, 0.0]])
        data = perron(m, (0, 1))
        assert data.lam == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(data.right, [0.5, 0.5], atol=1e-10)
        np.testing.assert_allclose(data.left, [1.0, 1.0], atol=1e-10)

    def test_normalization_and_residual(self, rng):
        for _ in range(40):
            d = int(rng.integers(2, 9))
            block = rng.gamma(1.0, 1.0, size=(d, d)) + 0.05  # strictly positive
            m = NonnegMatrix(block)
            data = perron(m, tuple(range(d)))
            assert data.right.sum() == pytest.approx(1.0, abs=1e-12)
            assert float(data.left @ data.right) == pytest.approx(1.0, abs=1e-12)
            lam = data.lam
            assert np.max(np.abs(block @ data.right - lam * data.right)) <= 1e-10 * lam
            assert np.max(np.abs(data.left @ block - lam * data.left)) <= 1e-10 * lam

    def test_matches_eigvals_oracle(self, rng):
        for _ in range(40):
            d = int(rng.integers(2, 9))
            block = rng.gamma(1.0, 1.0, size=(d, d)) + 0.05
            lam = perron(NonnegMatrix(block), tuple(range(d))).lam
            want = max(abs(np.linalg.eigvals(block)))
            assert lam == pytest.approx(want, rel=1e-10)

    def test_singleton_self_loop(self):
        m = NonnegMatrix([[3.0, 1.0], [0.0, 0.0]])
        data = perron(m, (0,))
        assert data.lam == pytest.approx(3.0, abs=1e-12)
        np.testing.assert_allclose(data.right, [1.0, 0.0], atol=0)

    def test_rejects_non_irreducible_class(self):
        m = NonnegMatrix([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(ClassStructureError):
            perron(m, (0, 1))

    def test_rejects_loopless_singleton(self):
        m = NonnegMatrix([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ClassStructureError):
            perron(m, (0,))

    def test_log_domain_handles_extreme_tilts(self):
        # entries e^{+-800} overflow doubles; the log-form entry point must not
        log_entries = np.array([[800.0, 790.0], [795.0, -800.0]])
        data = perron_from_log(log_entries, (0, 1))
        want = 800.0 + math.log(
            max(abs(np.linalg.eigvals(np.exp(log_entries - 800.0))))
        )
        assert data.log_lam == pytest.approx(want, abs=1e-10)


class TestGrowthRate:
    def test_nilpotent_is_minus_infinity(self):
        m = NonnegMatrix([[0.0, 1.0], [0.0, 0.0]])
        assert growth_rate(m).is_neg_inf
        assert growth_rate_bruteforce(m, 2).is_neg_inf

    def test_identity_is_zero(self):
        assert growth_rate(NonnegMatrix(np.eye(3))).raw == pytest.approx(0.0, abs=1e-12)

    def test_scalar(self):
        assert growth_rate(NonnegMatrix([[2.0]])).raw == pytest.approx(math.log(2.0), abs=1e-12)

    def test_matches_eigvals_oracle(self, rng):
        for _ in range(200):
            d = int(rng.integers(2, 9))
            m = random_matrix(rng, d, density=float(rng.uniform(0.3, 1.0)))
            got = growth_rate(NonnegMatrix(m))
            radius = max(abs(np.linalg.eigvals(m)))
            if got.is_neg_inf:
                assert radius <= 1e-12
            else:
                assert got.raw == pytest.approx(math.log(radius), abs=1e-8)

    def test_matches_successive_differences_aperiodic(self, rng):
        for _ in range(20):
            d = int(rng.integers(2, 7))
            m = rng.uniform(0.2, 2.0, size=(d, d))  # positive, hence aperiodic
            got = growth_rate(NonnegMatrix(m)).raw
            seq = log_mass_sequence(NonnegMatrix(m), 200)
            assert abs(got - (seq[-1] - seq[-2])) <= 1e-8

    def test_bruteforce_cesaro_converges_slowly(self, rng):
        d = 4
        m = rng.uniform(0.2, 2.0, size=(d, d))
        got = growth_rate(NonnegMatrix(m)).raw
        brute = growth_rate_bruteforce(NonnegMatrix(m), 4096).raw
        assert abs(got - brute) <= 10.0 / 4096

    def test_periodic_cesaro_bound(self):
        # hand-built period-2 and period-3 cycles with non-unit weights
        for m, n in [
            (np.array([[0.0, 2.0], [0.5, 0.0]]), 4096),
            (np.array([[0.0, 3.0, 0.0], [0.0, 0.0, 1.0], [0.5, 0.0, 0.0]]), 4096),
        ]:
            rate = growth_rate(NonnegMatrix(m)).raw
            log_mass = log_mass_sequence(NonnegMatrix(m), n)[-1]
            assert abs(rate - log_mass / n) <= 10.0 / n

    def test_monotone_under_entrywise_increase(self, rng):
        for _ in range(30):
            d = int(rng.integers(2, 6))
            lo = random_matrix(rng, d)
            hi = lo + rng.uniform(0.0, 1.0, size=(d, d))
            g_lo, g_hi = growth_rate(NonnegMatrix(lo)), growth_rate(NonnegMatrix(hi))
            if g_lo.is_neg_inf:
                continue
            assert g_hi.raw >= g_lo.raw - 1e-10

    def test_log_form_agrees_with_plain_form(self, rng):
        m = random_matrix(rng, 5)
        got = growth_rate_from_log(safe_log(m))
        want = growth_rate(NonnegMatrix(m))
        assert got.raw == pytest.approx(want.raw, abs=1e-12)


class TestMaximalAbsCont:
    def test_no_cycle_returns_none(self):
        assert maximal_abs_cont(NonnegMatrix([[0.0, 1.0], [0.0, 0.0]])) is None

    def test_irreducible_full_support(self):
        tau = maximal_abs_cont(NonnegMatrix([[1.0, 1.0], [1.0, 1.0]]))
        assert (tau.entries > 0).all()

    def test_transient_edge_carries_no_mass(self):
        tau = maximal_abs_cont(NonnegMatrix([[1.0, 1.0], [0.0, 1.0]]))
        np.testing.assert_allclose(tau.entries, [[0.5, 0.0], [0.0, 0.5]], atol=1e-12)

    def test_support_is_exactly_intra_class_edges(self, rng):
        for _ in range(30):
            d = int(rng.integers(2, 7))
            m = random_matrix(rng, d, density=0.5)
            tau = maximal_abs_cont(NonnegMatrix(m))
            if tau is None:
                assert not has_cycle(NonnegMatrix(m))
                continue
            dec = classes(NonnegMatrix(m))
            expected = np.zeros((d, d), dtype=bool)
            for k, cls in enumerate(dec.classes):
                if not dec.cyclic[k]:
                    continue
                idx = np.asarray(cls)
                expected[np.ix_(idx, idx)] = m[np.ix_(idx, idx)] > 0
            np.testing.assert_array_equal(tau.entries > 0, expected)

    def test_every_compatible_pair_is_dominated(self, rng):
        from conftest import random_pair_on

        for _ in range(20):
            d = int(rng.integers(2, 6))
            m = random_matrix(rng, d, density=0.6)
            tau = maximal_abs_cont(NonnegMatrix(m))
            if tau is None:
                continue
            for _ in range(5):
                nu = random_pair_on(rng, m > 0)
                assert nu is not None
                assert not (nu.entries[tau.entries == 0] > 0).any()

    def test_restriction_preserves_growth_rate(self, rng):
        for _ in range(20):
            d = int(rng.integers(2, 6))
            m = random_matrix(rng, d, density=0.6)
            tau = maximal_abs_cont(NonnegMatrix(m))
            if tau is None:
                continue
            restricted = np.where(tau.entries > 0, m, 0.0)
            assert growth_rate(NonnegMatrix(restricted)).raw == pytest.approx(
                growth_rate(NonnegMatrix(m)).raw, abs=1e-10
            )


class TestCompatible:
    def test_accepts_dominated_pair(self):
        m = NonnegMatrix([[1.0, 1.0], [1.0, 1.0]])
        nu = PairMeasure([[0.25, 0.25], [0.25, 0.25]])
        assert compatible(m, nu)

    def test_rejects_charging_zero_entry(self):
        m = NonnegMatrix([[1.0, 0.0], [1.0, 1.0]])
        nu = PairMeasure([[0.25, 0.25], [0.25, 0.25]])
        assert not compatible(m, nu)
