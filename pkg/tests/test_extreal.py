import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from renyivar import NEG_INF, POS_INF, ExtReal, ExtRealArithmeticError

finite_floats = st.floats(
    allow_nan=False, allow_infinity=False, min_value=-1e150, max_value=1e150
)


def test_nan_rejected():
    with pytest.raises(ValueError):
        ExtReal(math.nan)


def test_finite_constructor_rejects_infinity():
    with pytest.raises(ValueError):
        ExtReal.finite(math.inf)


def test_variant_flags():
    assert ExtReal(2.5).is_finite
    assert POS_INF.is_pos_inf and not POS_INF.is_finite
    assert NEG_INF.is_neg_inf and not NEG_INF.is_finite


def test_opposite_infinities_raise():
    with pytest.raises(ExtRealArithmeticError):
        POS_INF + NEG_INF
    with pytest.raises(ExtRealArithmeticError):
        NEG_INF - NEG_INF


def test_infinity_absorbs_finite():
    assert (POS_INF + ExtReal(-3.0)).is_pos_inf
    assert (NEG_INF + ExtReal(1e100)).is_neg_inf
    assert (POS_INF + POS_INF).is_pos_inf


def test_finite_overflow_raises():
    with pytest.raises(ExtRealArithmeticError):
        ExtReal(1e308) + ExtReal(1e308)


def test_scale():
    assert ExtReal(3.0).scale(-2.0).raw == -6.0
    assert POS_INF.scale(-1.0).is_neg_inf
    assert NEG_INF.scale(0.5).is_neg_inf
    with pytest.raises(ExtRealArithmeticError):
        POS_INF.scale(0.0)


def test_str_forms():
    assert str(POS_INF) == "inf"
    assert str(NEG_INF) == "-inf"
    assert "2.5" in str(ExtReal(2.5))


@given(finite_floats, finite_floats)
def test_addition_matches_floats(a, b):
    assert (ExtReal(a) + ExtReal(b)).raw == a + b


@given(finite_floats, finite_floats)
def test_ordering_matches_floats(a, b):
    assert (ExtReal(a) < ExtReal(b)) == (a < b)
    assert (ExtReal(a) == ExtReal(b)) == (a == b)


@given(finite_floats)
def test_infinities_bound_everything(a):
    assert NEG_INF < ExtReal(a) < POS_INF


@given(finite_floats)
def test_negation_involution(a):
    assert (-(-ExtReal(a))).raw == a
    assert (-POS_INF).is_neg_inf
