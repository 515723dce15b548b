"""Action of the monodromy entries on Bethe vectors as linear combinations of Bethe vectors.

Each formula yields labelled pieces; a piece is one summand group of the
formula, in the order the formula is written.  The composite ledgers reuse
the pieces to build their labelled terms.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .bethe import BetheIndex, bethe_vector, bethe_vector_recursive
from .errors import CardinalityError
from .logger import log
from .partitions import single_picks, singleton_partitions
from .ratfun import ParamSet, g, set_product_f, set_product_finv
from .rep import StateVector, residual_check, require_points
from .types import CheckResult


@dataclass(frozen=True)
class ActionTerm:
    piece: int
    coefficient: Fraction
    index: BetheIndex


@dataclass(frozen=True)
class ActionFormula:
    op_label: Tuple[int, int]
    pieces: int
    rhs: Callable[..., List[ActionTerm]]


def _idx(us: ParamSet, vs: ParamSet) -> BetheIndex:
    return BetheIndex(len(us), len(vs), us, vs)


def _terms_13(rep, idx: BetheIndex, z: Fraction) -> List[ActionTerm]:
    return [ActionTerm(1, Fraction(1), _idx(idx.u_set.plus(z), idx.v_set.plus(z)))]


def _terms_12(rep, idx: BetheIndex, z: Fraction) -> List[ActionTerm]:
    c, u, v = rep.c, idx.u_set, idx.v_set
    out = [ActionTerm(1, set_product_f(v, z, c), _idx(u.plus(z), v))]
    for v0, v0bar in single_picks(v):
        coef = g(z, v0, c) * set_product_f(v0bar, v0, c)
        out.append(ActionTerm(2, coef, _idx(u.plus(z), v0bar.plus(z))))
    return out


def _terms_23(rep, idx: BetheIndex, z: Fraction) -> List[ActionTerm]:
    c, u, v = rep.c, idx.u_set, idx.v_set
    out = [ActionTerm(1, set_product_f(z, u, c), _idx(u, v.plus(z)))]
    for u0, u0bar in single_picks(u):
        coef = g(u0, z, c) * set_product_f(u0, u0bar, c)
        out.append(ActionTerm(2, coef, _idx(u0bar.plus(z), v.plus(z))))
    return out


def _terms_11(rep, idx: BetheIndex, z: Fraction) -> List[ActionTerm]:
    c, u, v = rep.c, idx.u_set, idx.v_set
    out = [ActionTerm(1, rep.r(1, z) * set_product_f(u, z, c), idx)]
    fvz = set_product_f(v, z, c)
    for u0, u0bar in single_picks(u):
        base = rep.r(1, u0) * set_product_f(u0bar, u0, c) * set_product_finv(v, u0, c)
        out.append(ActionTerm(2, fvz * base * g(z, u0, c), _idx(u0bar.plus(z), v)))
        for v0, v0bar in single_picks(v):
            coef = base * g(z, v0, c) * g(v0, u0, c) * set_product_f(v0bar, v0, c)
            out.append(ActionTerm(3, coef, _idx(u0bar.plus(z), v0bar.plus(z))))
    return out


def _terms_22(rep, idx: BetheIndex, z: Fraction) -> List[ActionTerm]:
    c, u, v = rep.c, idx.u_set, idx.v_set
    fvz, fzu = set_product_f(v, z, c), set_product_f(z, u, c)
    out = [ActionTerm(1, fvz * fzu, idx)]
    for v0, v0bar in single_picks(v):
        out.append(ActionTerm(2, fzu * g(z, v0, c) * set_product_f(v0bar, v0, c), _idx(u, v0bar.plus(z))))
    for u0, u0bar in single_picks(u):
        out.append(ActionTerm(3, fvz * g(u0, z, c) * set_product_f(u0, u0bar, c), _idx(u0bar.plus(z), v)))
    for u0, u0bar in single_picks(u):
        for v0, v0bar in single_picks(v):
            coef = g(z, v0, c) * g(u0, z, c) * set_product_f(u0, u0bar, c) * set_product_f(v0bar, v0, c)
            out.append(ActionTerm(4, coef, _idx(u0bar.plus(z), v0bar.plus(z))))
    return out


def _terms_33(rep, idx: BetheIndex, z: Fraction) -> List[ActionTerm]:
    c, u, v = rep.c, idx.u_set, idx.v_set
    out = [ActionTerm(1, rep.r(3, z) * set_product_f(z, v, c), idx)]
    fzu = set_product_f(z, u, c)
    for v0, v0bar in single_picks(v):
        base = rep.r(3, v0) * set_product_f(v0, v0bar, c) * set_product_finv(v0, u, c)
        out.append(ActionTerm(2, fzu * base * g(v0, z, c), _idx(u, v0bar.plus(z))))
    for u0, u0bar in single_picks(u):
        for v0, v0bar in single_picks(v):
            base = rep.r(3, v0) * set_product_f(v0, v0bar, c) * set_product_finv(v0, u, c)
            coef = base * g(u0, z, c) * g(v0, u0, c) * set_product_f(u0, u0bar, c)
            out.append(ActionTerm(3, coef, _idx(u0bar.plus(z), v0bar.plus(z))))
    return out


def _terms_32(rep, idx: BetheIndex, z: Fraction) -> List[ActionTerm]:
    """Five pieces; the middle group of the formula is split by its r_3(z) and r_3(v_0) parts."""
    c, u, v = rep.c, idx.u_set, idx.v_set
    out: List[ActionTerm] = []
    fzu = set_product_f(z, u, c)
    for u0, u0bar in single_picks(u):
        for v0, v0bar in single_picks(v):
            coef = (rep.r(3, v0) * g(u0, z, c) * g(v0, u0, c) * set_product_f(u0, u0bar, c)
                    * set_product_f(v0, v0bar, c) * set_product_f(v0bar, z, c) * set_product_finv(v0, u, c))
            out.append(ActionTerm(1, coef, _idx(u0bar.plus(z), v0bar)))
    for v0, v0bar in single_picks(v):
        gz = g(z, v0, c)
        out.append(ActionTerm(2, gz * rep.r(3, z) * set_product_f(z, v0bar, c) * set_product_f(v0bar, v0, c), _idx(u, v0bar)))
        coef = -gz * rep.r(3, v0) * set_product_f(v0bar, z, c) * set_product_f(v0, v0bar, c) * fzu * set_product_finv(v0, u, c)
        out.append(ActionTerm(3, coef, _idx(u, v0bar)))
    for part in singleton_partitions(v, 2) if len(v) >= 2 else ():
        v0, v1 = part.singletons
        v2 = part.rest
        base = (rep.r(3, v0) * g(z, v1, c) * set_product_f(v0, v1, c)
                * set_product_f(v0, v2, c) * set_product_f(v2, v1, c) * set_product_finv(v0, u, c))
        out.append(ActionTerm(4, base * g(v0, z, c) * fzu, _idx(u, v2.plus(z))))
        for u0, u0bar in single_picks(u):
            coef = base * g(u0, z, c) * g(v0, u0, c) * set_product_f(u0, u0bar, c)
            out.append(ActionTerm(5, coef, _idx(u0bar.plus(z), v2.plus(z))))
    return out


ACTION_FORMULAS: Dict[Tuple[int, int], ActionFormula] = {
    (1, 3): ActionFormula((1, 3), 1, _terms_13),
    (1, 2): ActionFormula((1, 2), 2, _terms_12),
    (2, 3): ActionFormula((2, 3), 2, _terms_23),
    (1, 1): ActionFormula((1, 1), 3, _terms_11),
    (2, 2): ActionFormula((2, 2), 4, _terms_22),
    (3, 3): ActionFormula((3, 3), 3, _terms_33),
    (3, 2): ActionFormula((3, 2), 5, _terms_32),
}


def formula(i: int, j: int) -> ActionFormula:
    try:
        return ACTION_FORMULAS[(i, j)]
    except KeyError:
        raise ValueError(f"no action formula for T_{i}{j}") from None


def act_terms(form: ActionFormula, rep, idx: BetheIndex, z: Fraction, strict: bool = True) -> List[ActionTerm]:
    """Labelled terms of the right-hand side for T_ij(z)/lambda_2(z) acting on B(idx)."""
    z = Fraction(z)
    if form.op_label == (3, 2) and idx.b == 0:
        if strict:
            raise CardinalityError("T_32 acts on vectors with b >= 1")
        return []
    require_points(rep, [idx.u_set, idx.v_set, ParamSet((z,), "z")], merge_shared=False)
    return form.rhs(rep, idx, z)


def combine(rep, terms: List[ActionTerm], omit: Optional[int] = None) -> StateVector:
    out = StateVector.zero(rep.n_sites)
    for t in terms:
        if t.piece == omit or t.coefficient == 0:
            continue
        out = out + bethe_vector(rep, t.index).scale(t.coefficient)
    return out


def act_rhs(form: ActionFormula, rep, idx: BetheIndex, z: Fraction, omit: Optional[int] = None) -> StateVector:
    return combine(rep, act_terms(form, rep, idx, z), omit)


def act_lhs(form: ActionFormula, rep, idx: BetheIndex, z: Fraction) -> StateVector:
    i, j = form.op_label
    z = Fraction(z)
    return rep.apply(i, j, z, bethe_vector(rep, idx)).scale(1 / rep.lam(2, z))


def verify_action(form: ActionFormula, rep, idx: BetheIndex, z: Fraction, omit: Optional[int] = None) -> CheckResult:
    """Direct application of T_ij(z)/lambda_2(z) against the formula; ``omit`` drops one piece."""
    name = "action T_%d%d" % form.op_label
    res = residual_check(name, act_lhs(form, rep, idx, z), act_rhs(form, rep, idx, z, omit))
    if not res.ok:
        log.warning("%s failed on %s at z=%s", name, idx.describe(), z)
    return res


def a13_commute_check(rep, idx: BetheIndex, z1: Fraction, z2: Fraction) -> CheckResult:
    """Two successive T_13 actions in both orders give B_{a+2,b+2} with both points added."""
    z1, z2 = Fraction(z1), Fraction(z2)
    require_points(rep, [idx.u_set, idx.v_set, ParamSet((z1, z2), "z")])
    vec = bethe_vector(rep, idx)
    one = rep.apply(1, 3, z1, rep.apply(1, 3, z2, vec)).scale(1 / (rep.lam(2, z1) * rep.lam(2, z2)))
    two = rep.apply(1, 3, z2, rep.apply(1, 3, z1, vec)).scale(1 / (rep.lam(2, z1) * rep.lam(2, z2)))
    res = residual_check("T_13 commute", one, two)
    if not res.ok:
        return res
    target = bethe_vector(rep, _idx(idx.u_set.plus(z1, z2), idx.v_set.plus(z1, z2)))
    return residual_check("T_13 commute", one, target)


def a12_base_check(rep, v_set: ParamSet, z: Fraction) -> CheckResult:
    """T_12 on B_{0,b} against the first step of the recursion."""
    z, c = Fraction(z), rep.c
    idx = _idx(ParamSet((), "u"), v_set)
    lhs = act_rhs(ACTION_FORMULAS[(1, 2)], rep, idx, z)
    rhs = bethe_vector_recursive(rep, _idx(ParamSet((z,), "u"), v_set)).scale(set_product_f(v_set, z, c))
    for v0, v0bar in single_picks(v_set):
        base = bethe_vector_recursive(rep, _idx(ParamSet((), "u"), v0bar))
        step = rep.apply(1, 3, z, base).scale(g(z, v0, c) * set_product_f(v0bar, v0, c) / rep.lam(2, z))
        rhs = rhs + step
    return residual_check("T_12 base step", lhs, rhs)
