from fractions import Fraction as F

import pytest

from composite_bethe.errors import GenericityError, PoleError
from composite_bethe.ratfun import ParamSet
from composite_bethe.rep import (
    ChainSpec,
    MonodromyRep,
    StateVector,
    TwistFactor,
    build_chain,
    lam,
    lax_entry,
    mirror_realization_check,
    monodromy,
    r,
    require_points,
    residual_check,
    rtt_selftest,
    transpose_realization_check,
    vacuum_selftest,
)
from composite_bethe.types import Verdict

from .conftest import POINTS, TWIST, XI, chain, rep

UNTWISTED = (1, 1, 1)


def test_lax_entry_layout():
    op = lax_entry(1, 2, 2, 0, 1)
    assert op[1][0] == F(1, 2)
    assert sum(x for row in op for x in row) == F(1, 2), "only E_21 is present"
    diag = lax_entry(2, 2, 2, 0, 1)
    assert [diag[k][k] for k in range(3)] == [1, F(3, 2), 1]


def test_empty_chain_is_the_twist():
    empty = ChainSpec(0, (), TWIST)
    assert monodromy(empty, 1, 1, 5).entries() == {(0, 0): TWIST[0]}
    assert monodromy(empty, 1, 2, 5).entries() == {}


def test_vacuum_eigenvalues():
    site = ChainSpec(1, (0,), UNTWISTED)
    assert lam(site, 1, 2) == F(3, 2)
    assert lam(site, 2, 2) == 1
    assert r(chain(2), 3, POINTS[0]) == TWIST[2] / TWIST[1]


@pytest.mark.parametrize("L", [0, 1, 2, 3])
def test_rtt_and_vacuum(L):
    T = rep(L)
    assert rtt_selftest(T, POINTS[0], POINTS[1]).ok, f"RTT fails on L={L}"
    assert vacuum_selftest(T, POINTS[2]).ok


def test_sheared_twist_breaks_rtt():
    T = rep(2)
    sheared = MonodromyRep(T.sites + (TwistFactor(TWIST, F(1)),), 2, T.c, "T-shear")
    res = rtt_selftest(sheared, POINTS[0], POINTS[1])
    assert res.verdict == Verdict.FAIL
    assert res.witness is not None and res.detail.startswith("aux entry")


def test_transpose_realizations():
    assert transpose_realization_check(rep(1, UNTWISTED), POINTS[0]).ok
    assert not transpose_realization_check(rep(1, TWIST), POINTS[0]).ok
    assert not transpose_realization_check(rep(2, UNTWISTED), POINTS[0]).ok
    for L in (1, 2, 3):
        assert mirror_realization_check(rep(L), POINTS[0]).ok, f"mirror fails on L={L}"


def test_apply_rejects_mismatched_vectors():
    T = rep(2)
    with pytest.raises(ValueError):
        T.apply(1, 2, POINTS[0], T.dual_vacuum())
    with pytest.raises(ValueError):
        T.apply_left(1, 2, POINTS[0], T.vacuum())
    with pytest.raises(ValueError):
        T.apply(1, 2, POINTS[0], StateVector.basis(3))


def test_pole_at_inhomogeneity():
    with pytest.raises(PoleError):
        rep(2).apply(1, 1, XI[0], StateVector.basis(2))


def test_require_points_sees_the_chain():
    with pytest.raises(GenericityError):
        require_points(rep(2), [ParamSet((XI[1],), "u")])
    require_points(rep(2), [ParamSet(POINTS[:3], "u")])


def test_state_vector_algebra():
    e1 = StateVector.basis(2, 1)
    e3 = StateVector.basis(2, 3)
    assert e1.juxtapose(e3) == StateVector.basis(2, 4)
    assert (e1 + e3 - e1).coeffs == {3: 1}
    assert (e1 - e1).is_zero()
    assert e1.scale(0).is_zero()
    assert e1.transpose().dual


def test_residual_witness():
    res = residual_check("x", StateVector.basis(2, 4), StateVector.zero(2))
    assert res.verdict == Verdict.FAIL
    assert res.witness.basis_index == 4
    assert res.witness.states == [2, 2]
    assert res.witness.residual == "1/1"


def test_matrix_cache_agrees_with_apply():
    T = rep(2)
    u = POINTS[3]
    vec = StateVector.basis(2, 2)
    col = T.matrix(1, 3, u).cols.get(2, {})
    assert T.apply(1, 3, u, vec).coeffs == col


def test_build_chain_orders_sites_then_twist():
    T = build_chain(chain(2))
    assert isinstance(T.factors[-1], TwistFactor)
    assert T.xi.elems == XI[:2]
