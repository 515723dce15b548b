from fractions import Fraction as F
from itertools import permutations

import pytest

from composite_bethe.bethe import (
    BetheIndex,
    PhiImageRep,
    apply_morphism,
    bethe_polynomial,
    bethe_vector,
    bethe_vector_recursive,
    dual_bethe_vector,
    involution_check,
    izergin,
    izergin_regular,
    phi_formula_check,
    phi_polynomial,
    psi_formula_check,
    psi_polynomial,
)
from composite_bethe.errors import CardinalityError, DegenerateError, GenericityError, PoleError
from composite_bethe.ratfun import f, g
from composite_bethe.rep import ChainSpec, StateVector, build_chain, residual_check

from .conftest import POINTS, TWIST, XI, index, rep


def _single_site(twist=(1, 1, 1)):
    return build_chain(ChainSpec(1, (0,), twist, 1))


def test_single_site_values():
    T = _single_site()
    assert bethe_vector(T, BetheIndex.of([2], [])).coeffs == {1: F(1, 2)}
    assert bethe_vector(T, BetheIndex.of([], [3])).is_zero()
    assert bethe_vector(T, BetheIndex.of()) == T.vacuum()


def test_single_site_twisted():
    T = _single_site(TWIST)
    # T_12 = d1 L_12 and lambda_2 = d2
    assert bethe_vector(T, BetheIndex.of([2], [])).coeffs == {1: TWIST[0] / TWIST[1] * F(1, 2)}


def test_dual_single_site():
    T = _single_site()
    vec = dual_bethe_vector(T, BetheIndex.of([2], []))
    assert vec.dual
    assert vec.coeffs == {1: F(1, 2)}


def test_izergin_small():
    assert izergin([], [], 1) == 1
    assert izergin([3], [1], 2) == 1
    assert izergin_regular([3], [1], 2) == F(1, 2)


def test_izergin_two_by_two():
    c = F(1)
    v, u = (F(5), F(7)), (F(0), F(1, 3))
    gg = lambda x, y: g(x, y, c)
    rows = [[gg(vi, uj) ** 2 / f(vi, uj, c) for uj in u] for vi in v]
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    pre = gg(v[0], v[1]) * gg(u[1], u[0])
    for vi in v:
        for uj in u:
            pre *= f(vi, uj, c) / gg(vi, uj)
    expected = pre * det
    assert izergin(v, u, c) == expected
    assert izergin(v[::-1], u, c) == expected, "symmetric in v"
    assert izergin(v, u[::-1], c) == expected, "symmetric in u"
    fvu = f(v[0], u[0], c) * f(v[0], u[1], c) * f(v[1], u[0], c) * f(v[1], u[1], c)
    assert izergin_regular(v, u, c) == expected / fvu


def test_izergin_pole_is_reported():
    # v - u = -c
    with pytest.raises(PoleError):
        izergin([F(0)], [F(1)], 1)
    with pytest.raises(PoleError):
        izergin_regular([F(0)], [F(1)], 1)


def test_izergin_regular_at_shared_point():
    # K_1(v|u)/f(v,u) = c/(v-u+c)
    assert izergin_regular([F(2)], [F(2)], 1) == 1
    assert izergin_regular([F(2)], [F(2)], 3) == 1


def _equivalence_rep(a: int, b: int, L: int):
    # fundamental sites carry B_{a,b} for b <= a <= L; the phi-image carries a <= b <= L
    return rep(L) if b <= a else PhiImageRep(rep(L))


@pytest.mark.parametrize("a,b,L", [(1, 0, 1), (0, 2, 2), (1, 1, 2), (2, 1, 3), (2, 2, 3), (1, 2, 2)])
def test_formula_matches_recursion(a, b, L):
    T = _equivalence_rep(a, b, L)
    idx = index(a, b)
    vec = bethe_vector(T, idx)
    res = residual_check("formula/recursion", vec, bethe_vector_recursive(T, idx))
    assert res.ok, res.witness
    assert not vec.is_zero()


@pytest.mark.slow
def test_formula_matches_recursion_grid():
    for L in range(1, 5):
        for a in range(6):
            for b in range(6 - a):
                T = _equivalence_rep(a, b, L)
                idx = index(a, b)
                vec = bethe_vector(T, idx)
                res = residual_check("formula/recursion", vec, bethe_vector_recursive(T, idx))
                assert res.ok, (a, b, L, res.witness)
                if max(a, b) <= L:
                    assert not vec.is_zero(), (a, b, L)


def test_symmetry():
    T = rep(3)
    ref = bethe_vector(T, index(2, 2), use_cache=False)
    us, vs = POINTS[:2], POINTS[2:4]
    for pu in permutations(us):
        for pv in permutations(vs):
            assert bethe_vector(T, BetheIndex.of(pu, pv), use_cache=False) == ref


def test_shared_value_is_the_T13_action():
    T = rep(2)
    z = POINTS[0]
    vec = bethe_vector(T, BetheIndex.of([z], [z]))
    expected = T.apply(1, 3, z, T.vacuum()).scale(1 / T.lam(2, z))
    assert vec == expected
    assert not vec.is_zero()


def test_vanishing_on_fundamental_sites():
    # B_{a,b} vanishes unless b <= a <= L
    assert bethe_vector(rep(2), index(0, 1)).is_zero()
    assert bethe_vector(rep(1), index(2, 0)).is_zero()
    assert not bethe_vector(rep(2), index(1, 1)).is_zero()


def test_index_validation():
    with pytest.raises(DegenerateError):
        BetheIndex.of([1, 1], [])
    with pytest.raises(CardinalityError):
        BetheIndex(2, 0, (1,), ())


def test_genericity_with_inhomogeneities():
    with pytest.raises(GenericityError):
        bethe_vector(rep(2), BetheIndex.of([XI[1] + 1], []))
    with pytest.raises(GenericityError):
        bethe_vector(rep(2), BetheIndex.of([XI[0]], []))
    with pytest.raises(GenericityError):
        bethe_vector(rep(2), BetheIndex.of([POINTS[0]], [XI[1]]))


def test_polynomial_factor_order():
    T = rep(2)
    idx = BetheIndex.of([POINTS[0]], [POINTS[1]])
    labels = {tuple((i, j) for i, j, _ in t.factors) for t in bethe_polynomial(T, idx)}
    assert labels == {((1, 2), (2, 3)), ((1, 3),)}


def test_dual_is_mirrored_transpose():
    T = rep(2)
    idx = index(1, 1)
    assert dual_bethe_vector(T, idx) == bethe_vector(T.mirrored(), idx).transpose()


@pytest.mark.parametrize("a,b,L", [(1, 0, 1), (1, 1, 2), (2, 1, 2), (2, 2, 3)])
def test_psi_and_phi(a, b, L):
    T = rep(L)
    idx = index(a, b)
    assert psi_formula_check(T, idx).ok
    assert phi_formula_check(T, idx).ok
    assert involution_check(bethe_polynomial(T, idx)).ok


def test_phi_swaps_and_negates():
    T = rep(2)
    u, v = POINTS[0], POINTS[1]
    image = apply_morphism("phi", bethe_polynomial(PhiImageRep(T), BetheIndex.of([u], [v])), T)
    assert image == bethe_vector(T, BetheIndex.of([-v], [-u]))
    assert not image.is_zero()


def test_morphisms_on_polynomials():
    terms = bethe_polynomial(rep(2), index(1, 1))
    swapped = psi_polynomial(terms)
    assert {x[:2] for t in swapped for x in t.factors} <= {(3, 1), (2, 1), (3, 2)}
    flipped = phi_polynomial(terms)
    assert {x[:2] for t in flipped for x in t.factors} <= {(1, 3), (2, 3), (1, 2)}
    assert psi_polynomial(swapped) == terms


def test_unknown_morphism():
    with pytest.raises(ValueError):
        apply_morphism("chi", [], rep(1))


def test_empty_polynomial_images():
    assert apply_morphism("phi", [], rep(1)) == StateVector.zero(1)
