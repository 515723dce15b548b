from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from composite_bethe.errors import DegenerateError, GenericityError, PoleError
from composite_bethe.ratfun import (
    ParamSet,
    f,
    finv,
    g,
    genericity_check,
    require_generic,
    set_product_f,
    set_product_finv,
    set_product_g,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
constants = rationals.filter(lambda c: c != 0)


def test_values():
    assert g(3, 1, 2) == 1
    assert f(3, 1, 2) == 2
    assert finv(3, 1, 2) == F(1, 2)
    assert finv(5, 5, 1) == 0


def test_poles():
    with pytest.raises(PoleError):
        g(F(1, 3), F(1, 3), 1)
    with pytest.raises(PoleError):
        f(2, 2, 1)
    with pytest.raises(PoleError):
        finv(1, 2, 1)


def test_empty_products_are_one():
    empty = ParamSet()
    assert set_product_f(empty, ParamSet.of([1, 2]), 1) == 1
    assert set_product_g(ParamSet.of([1]), empty, 1) == 1
    assert set_product_finv(empty, empty, 1) == 1


def test_set_product_accepts_single_points():
    xs = ParamSet.of([F(1, 2), F(7, 3)])
    assert set_product_f(xs, 5, 1) == f(F(1, 2), 5, 1) * f(F(7, 3), 5, 1)
    assert set_product_f(5, xs, 1) == f(5, F(1, 2), 1) * f(5, F(7, 3), 1)


@given(rationals, rationals, constants)
def test_g_antisymmetric_and_f_shift(x, y, c):
    assume(x != y)
    assert g(x, y, c) == -g(y, x, c)
    assert f(x, y, c) == 1 + g(x, y, c)


@given(rationals, rationals, rationals, constants)
def test_three_term_identity(x, y, z, c):
    assume(len({x, y, z}) == 3)
    assert g(x, y, c) * g(y, z, c) == g(x, z, c) * (g(x, y, c) + g(y, z, c))


@given(rationals, rationals, constants)
def test_finv_is_reciprocal(x, y, c):
    assume(x != y and x - y + c != 0)
    assert finv(x, y, c) * f(x, y, c) == 1


def test_param_set_rejects_repeats():
    with pytest.raises(DegenerateError):
        ParamSet.of([1, F(2, 2)], "u")


def test_param_set_helpers():
    s = ParamSet.of([3, 1], "u")
    assert s.plus(F(1, 2)).elems == (3, 1, F(1, 2))
    assert s.minus(3).elems == (1,)
    assert s.negated().elems == (-3, -1)
    assert s.canonical() == (1, 3)
    assert str(s) == "{3/1, 1/1}"


def test_genericity_reports_the_pair():
    assert genericity_check([[0, 10]], 1).ok
    rep = genericity_check([[0, 1]], 1)
    assert not rep.ok
    assert rep.reason == "difference equals +-c"
    assert rep.as_dict() == {"ok": False, "pair": ["0/1", "1/1"], "reason": "difference equals +-c"}
    assert genericity_check([[F(1, 2)], [F(1, 2)]], 1).reason == "coinciding pair"


def test_genericity_merge_shared():
    sets = [[0, F(3, 2)], [F(3, 2), 7]]
    assert not genericity_check(sets, 1).ok
    assert genericity_check(sets, 1, merge_shared=True).ok
    # repeats inside one set are never merged
    assert not genericity_check([[2, 2]], 1, merge_shared=True).ok


def test_require_generic_carries_report():
    with pytest.raises(GenericityError) as err:
        require_generic([[0, F(-2)], [F(-1)]], 1)
    assert err.value.report["ok"] is False


def test_package_exports_resolve():
    import composite_bethe

    for name in composite_bethe.__all__:
        assert hasattr(composite_bethe, name), name
    assert {"f", "g", "finv", "single_picks"} <= set(composite_bethe.__all__)
    assert "h" not in composite_bethe.__all__
