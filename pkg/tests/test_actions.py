import pytest

from composite_bethe.actions import (
    ACTION_FORMULAS,
    a12_base_check,
    a13_commute_check,
    act_terms,
    combine,
    formula,
    verify_action,
)
from composite_bethe.errors import CardinalityError, GenericityError
from composite_bethe.types import Verdict

from .conftest import index, rep, spare

SMALL = [(0, 0), (1, 0), (1, 1), (2, 1)]


@pytest.mark.parametrize("label", sorted(ACTION_FORMULAS))
@pytest.mark.parametrize("a,b", SMALL)
def test_action_formulas(label, a, b):
    if label == (3, 2) and b == 0:
        pytest.skip("T_32 needs b >= 1")
    res = verify_action(ACTION_FORMULAS[label], rep(3), index(a, b), spare(a, b))
    assert res.ok, f"T_{label[0]}{label[1]} on ({a},{b}): {res.witness}"


@pytest.mark.slow
@pytest.mark.parametrize("label", sorted(ACTION_FORMULAS))
def test_action_formulas_two_two(label):
    res = verify_action(ACTION_FORMULAS[label], rep(3), index(2, 2), spare(2, 2))
    assert res.ok, res.witness


def test_piece_counts():
    assert {k: v.pieces for k, v in ACTION_FORMULAS.items()} == {
        (1, 3): 1, (1, 2): 2, (2, 3): 2, (1, 1): 3, (2, 2): 4, (3, 3): 3, (3, 2): 5,
    }
    terms = act_terms(ACTION_FORMULAS[(2, 2)], rep(2), index(1, 1), spare(1, 1))
    assert sorted({t.piece for t in terms}) == [1, 2, 3, 4]


def test_dropping_a_piece_fails():
    T = rep(2)
    res = verify_action(ACTION_FORMULAS[(3, 2)], T, index(1, 1), spare(1, 1), omit=2)
    assert res.verdict == Verdict.FAIL
    assert res.witness is not None


def test_t32_on_empty_v():
    form = formula(3, 2)
    with pytest.raises(CardinalityError):
        act_terms(form, rep(2), index(1, 0), spare(1, 0))
    assert act_terms(form, rep(2), index(1, 0), spare(1, 0), strict=False) == []


def test_unknown_formula():
    with pytest.raises(ValueError):
        formula(2, 1)


def test_t13_commutes():
    z1, z2 = spare(1, 1), spare(1, 1, 1)
    assert a13_commute_check(rep(3), index(1, 1), z1, z2).ok


def test_t12_base_step():
    T = rep(2)
    for b in range(3):
        v_set = index(0, b).v_set
        assert a12_base_check(T, v_set, spare(0, b)).ok, f"b={b}"


def test_combine_of_nothing_is_zero():
    assert combine(rep(1), []).is_zero()


def test_z_may_not_repeat_a_u():
    idx = index(1, 0)
    with pytest.raises(GenericityError):
        act_terms(ACTION_FORMULAS[(1, 3)], rep(2), idx, idx.u_set.elems[0])


def test_actions_on_the_vacuum():
    T = rep(2)
    terms = act_terms(formula(1, 1), T, index(0, 0), spare(0, 0))
    assert [t.piece for t in terms] == [1]
    for label, form in ACTION_FORMULAS.items():
        if label != (3, 2):
            assert verify_action(form, T, index(0, 0), spare(0, 0)).ok, label
