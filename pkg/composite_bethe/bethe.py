"""Bethe vectors, dual Bethe vectors and their polynomial form.

B_{a,b}(u;v) is the double partition sum

    sum  K_n(v_I|u_I) f(v_II,v_I) f(u_I,u_II) / (lambda_2(v_II) lambda_2(u) f(v,u))
         * T_13(u_I) T_12(u_II) T_23(v_II) |0>

with #u_I = #v_I = n.  The weight is evaluated in a form that stays finite
when a value is shared by u and v (T_13 actions create such vectors):
K_n/f(v_I,u_I) is taken from a row-scaled determinant and every other 1/f
goes through ``finv``.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import sympy

from .cache import MemoCache
from .errors import CardinalityError, PoleError, SkippedCheck
from .logger import log
from .partitions import partitions_with_cardinality, singleton_partitions
from .ratfun import ParamSet, finv, g, prod, set_product_f, set_product_finv, set_product_g
from .rep import MonodromyRep, StateVector, mirror_realization_check, require_points, residual_check, transpose_realization_check
from .types import CheckResult, Verdict
from .utils import fmt

OperatorLabel = Tuple[int, int, Fraction]

_VECTORS = MemoCache("bethe", max_size=8192)


def bethe_cache() -> MemoCache:
    return _VECTORS


@dataclass(frozen=True)
class BetheIndex:
    a: int
    b: int
    u_set: ParamSet
    v_set: ParamSet

    def __post_init__(self):
        if not isinstance(self.u_set, ParamSet):
            object.__setattr__(self, "u_set", ParamSet.of(self.u_set, "u"))
        if not isinstance(self.v_set, ParamSet):
            object.__setattr__(self, "v_set", ParamSet.of(self.v_set, "v"))
        if self.a < 0 or self.b < 0 or len(self.u_set) != self.a or len(self.v_set) != self.b:
            raise CardinalityError(f"index ({self.a},{self.b}) does not match sets {self.u_set}, {self.v_set}")

    @classmethod
    def of(cls, us: Iterable = (), vs: Iterable = ()) -> "BetheIndex":
        us, vs = ParamSet.of(us, "u"), ParamSet.of(vs, "v")
        return cls(len(us), len(vs), us, vs)

    def key(self) -> Tuple:
        return self.u_set.canonical(), self.v_set.canonical()

    def describe(self) -> Dict[str, object]:
        return {"a": self.a, "b": self.b, "u": [fmt(x) for x in self.u_set], "v": [fmt(x) for x in self.v_set]}


@dataclass(frozen=True)
class BethePolynomialTerm:
    coefficient: Fraction
    factors: Tuple[OperatorLabel, ...]


# ---------------------------------------------------------------------------
# Izergin determinant


def _det(rows: List[List[Fraction]]) -> Fraction:
    if not rows:
        return Fraction(1)
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows])
    d = sympy.Rational(m.det(method="bareiss"))
    return Fraction(int(d.p), int(d.q))


def _vandermonde_g(v: Sequence[Fraction], u: Sequence[Fraction], c: Fraction) -> Fraction:
    out = Fraction(1)
    n = len(v)
    for l in range(n):
        for m in range(l + 1, n):
            out *= g(v[l], v[m], c) * g(u[m], u[l], c)
    return out


def izergin(v_set, u_set, c: Fraction) -> Fraction:
    """K_n(v|u) from its determinant representation; needs v_i != u_j."""
    v = ParamSet.of(v_set, "v").elems
    u = ParamSet.of(u_set, "u").elems
    if len(v) != len(u):
        raise CardinalityError("izergin needs sets of equal size")
    c = Fraction(c)
    rows = [[g(vi, uj, c) ** 2 * finv(vi, uj, c) for uj in u] for vi in v]
    return _vandermonde_g(v, u, c) * set_product_f(v, u, c) / set_product_g(v, u, c) * _det(rows)


def izergin_regular(v_set, u_set, c: Fraction) -> Fraction:
    """K_n(v|u) / f(v,u), finite when some v_i = u_j."""
    v = ParamSet.of(v_set, "v").elems
    u = ParamSet.of(u_set, "u").elems
    if len(v) != len(u):
        raise CardinalityError("izergin needs sets of equal size")
    c = Fraction(c)
    n = len(v)
    rows = []
    for vi in v:
        row = []
        for j, uj in enumerate(u):
            if vi - uj + c == 0:
                raise PoleError(f"v - u = -c at ({fmt(vi)}, {fmt(uj)})")
            row.append(c * c * prod(vi - uk for k, uk in enumerate(u) if k != j) / (vi - uj + c))
        rows.append(row)
    return _vandermonde_g(v, u, c) * _det(rows) / c ** (n * n)


# ---------------------------------------------------------------------------
# explicit formula


def _weight(rep, uI, uII, vI, vII, u_all) -> Fraction:
    c = rep.c
    w = izergin_regular(vI, uI, c)
    w *= set_product_f(vII, vI, c) * set_product_f(uI, uII, c)
    w *= set_product_finv(vI, uII, c) * set_product_finv(vII, uI, c) * set_product_finv(vII, uII, c)
    return w / (rep.lam_set(2, vII) * rep.lam_set(2, u_all))


def _partition_terms(rep, idx: BetheIndex):
    for n in range(min(idx.a, idx.b) + 1):
        for pu in partitions_with_cardinality(idx.u_set, n):
            for pv in partitions_with_cardinality(idx.v_set, n):
                w = _weight(rep, pu.part_I, pu.part_II, pv.part_I, pv.part_II, idx.u_set)
                if w:
                    yield w, pu, pv


def bethe_polynomial(rep, idx: BetheIndex) -> List[BethePolynomialTerm]:
    """Monomials of B_{a,b}, factors in written order T_13(u_I) T_12(u_II) T_23(v_II)."""
    terms = []
    for w, pu, pv in _partition_terms(rep, idx):
        factors = tuple((1, 3, x) for x in pu.part_I) + tuple((1, 2, x) for x in pu.part_II) + tuple((2, 3, x) for x in pv.part_II)
        terms.append(BethePolynomialTerm(w, factors))
    return terms


def dual_bethe_polynomial(rep, idx: BetheIndex) -> List[BethePolynomialTerm]:
    """Monomials of C_{a,b}, written order T_32(v_II) T_21(u_II) T_31(u_I)."""
    terms = []
    for w, pu, pv in _partition_terms(rep, idx):
        factors = tuple((3, 2, x) for x in pv.part_II) + tuple((2, 1, x) for x in pu.part_II) + tuple((3, 1, x) for x in pu.part_I)
        terms.append(BethePolynomialTerm(w, factors))
    return terms


def evaluate_on_vacuum(rep, terms: Sequence[BethePolynomialTerm]) -> StateVector:
    """Sum of coefficient * (product of factors) |0>, rightmost factor first."""
    memo: Dict[Tuple, StateVector] = {(): rep.vacuum()}
    out = StateVector.zero(rep.n_sites)
    for term in terms:
        fs = term.factors
        k = 0
        while fs[k:] not in memo:
            k += 1
        vec = memo[fs[k:]]
        for pos in range(k - 1, -1, -1):
            i, j, x = fs[pos]
            vec = rep.apply(i, j, x, vec)
            memo[fs[pos:]] = vec
        out = out + vec.scale(term.coefficient)
    return out


def evaluate_on_dual_vacuum(rep, terms: Sequence[BethePolynomialTerm]) -> StateVector:
    """Sum of coefficient * <0| (product of factors), leftmost factor first."""
    memo: Dict[Tuple, StateVector] = {(): rep.dual_vacuum()}
    out = StateVector.zero(rep.n_sites, dual=True)
    for term in terms:
        fs = term.factors
        k = 0
        while fs[:len(fs) - k] not in memo:
            k += 1
        vec = memo[fs[:len(fs) - k]]
        for pos in range(len(fs) - k, len(fs)):
            i, j, x = fs[pos]
            vec = rep.apply_left(i, j, x, vec)
            memo[fs[:pos + 1]] = vec
        out = out + vec.scale(term.coefficient)
    return out


def _cached(tag: str, rep, idx: BetheIndex, build: Callable[[], StateVector], use_cache: bool) -> StateVector:
    key = (tag, rep) + idx.key()
    if use_cache:
        hit = _VECTORS.get(key)
        if hit is not None:
            return hit
    vec = build()
    if use_cache:
        _VECTORS.put(key, vec)
    return vec


def bethe_vector(rep, idx: BetheIndex, use_cache: bool = True) -> StateVector:
    require_points(rep, [idx.u_set, idx.v_set])
    return _cached("B", rep, idx, lambda: evaluate_on_vacuum(rep, bethe_polynomial(rep, idx)), use_cache)


def dual_bethe_vector(rep, idx: BetheIndex, use_cache: bool = True) -> StateVector:
    require_points(rep, [idx.u_set, idx.v_set])
    return _cached("C", rep, idx, lambda: evaluate_on_dual_vacuum(rep, dual_bethe_polynomial(rep, idx)), use_cache)


def bethe_vector_recursive(rep, idx: BetheIndex) -> StateVector:
    """Builds B by adding one u at a time; independent of the Izergin weight."""
    require_points(rep, [idx.u_set, idx.v_set], merge_shared=False)
    return _recursive(rep, idx)


def _recursive(rep, idx: BetheIndex) -> StateVector:
    def build() -> StateVector:
        c = rep.c
        if idx.a == 0:
            vec = rep.vacuum()
            for v in idx.v_set:
                vec = rep.apply(2, 3, v, vec)
            return vec.scale(1 / rep.lam_set(2, idx.v_set))
        z = idx.u_set.elems[-1]
        rest = ParamSet(idx.u_set.elems[:-1], "u")
        norm = 1 / (rep.lam(2, z) * set_product_f(idx.v_set, z, c))
        out = rep.apply(1, 2, z, _recursive(rep, BetheIndex(idx.a - 1, idx.b, rest, idx.v_set)))
        if idx.b:
            acc = StateVector.zero(rep.n_sites)
            for part in singleton_partitions(idx.v_set, 1):
                v0 = part.singletons[0]
                coef = g(v0, z, c) * set_product_f(part.rest, v0, c)
                acc = acc + _recursive(rep, BetheIndex(idx.a - 1, idx.b - 1, rest, part.rest)).scale(coef)
            out = out + rep.apply(1, 3, z, acc)
        return out.scale(norm)

    # the peeling order is part of the computation, so the key keeps u ordered
    key = ("R", rep, idx.u_set.elems, idx.v_set.canonical())
    hit = _VECTORS.get(key)
    if hit is None:
        hit = build()
        _VECTORS.put(key, hit)
    return hit


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class PhiImageRep:
    """The representation T'_ij(u) = T_{4-j,4-i}(-u) of a base representation."""
    base: MonodromyRep

    @property
    def n_sites(self) -> int:
        return self.base.n_sites

    @property
    def c(self) -> Fraction:
        return self.base.c

    @property
    def xi(self) -> ParamSet:
        return self.base.xi.negated()

    def apply(self, i: int, j: int, u: Fraction, vec: StateVector) -> StateVector:
        return self.base.apply(4 - j, 4 - i, -u, vec)

    def apply_left(self, i: int, j: int, u: Fraction, covec: StateVector) -> StateVector:
        return self.base.apply_left(4 - j, 4 - i, -u, covec)

    def lam(self, i: int, u: Fraction) -> Fraction:
        return self.base.lam(4 - i, -u)

    def lam_set(self, i: int, us: Iterable[Fraction]) -> Fraction:
        return prod(self.lam(i, u) for u in us)

    def r(self, k: int, u: Fraction) -> Fraction:
        return self.lam(k, u) / self.lam(2, u)

    def r_set(self, k: int, us: Iterable[Fraction]) -> Fraction:
        return prod(self.r(k, u) for u in us)

    def vacuum(self) -> StateVector:
        return self.base.vacuum()

    def dual_vacuum(self) -> StateVector:
        return self.base.dual_vacuum()


def psi_polynomial(terms: Sequence[BethePolynomialTerm]) -> List[BethePolynomialTerm]:
    """Antimorphism T_ij(u) -> T_ji(u): transpose labels and reverse order."""
    return [BethePolynomialTerm(t.coefficient, tuple((j, i, x) for i, j, x in reversed(t.factors))) for t in terms]


def phi_polynomial(terms: Sequence[BethePolynomialTerm]) -> List[BethePolynomialTerm]:
    """Morphism T_ij(u) -> T_{4-j,4-i}(-u), order kept."""
    return [BethePolynomialTerm(t.coefficient, tuple((4 - j, 4 - i, -x) for i, j, x in t.factors)) for t in terms]


def psi_partner(rep: MonodromyRep, u: Fraction) -> MonodromyRep:
    """Representation whose T_ij is T_ji^T of ``rep``, certified at ``u``."""
    if transpose_realization_check(rep, u).ok:
        return rep
    mirror = rep.mirrored()
    if mirror_realization_check(rep, u).ok:
        log.debug("psi realized through the mirrored chain of %s", rep.label)
        return mirror
    raise SkippedCheck("no representation certifies T_ij^T = T_ji")


def apply_morphism(kind: str, poly: Sequence[BethePolynomialTerm], rep: MonodromyRep, start: Fraction = Fraction(1, 7)) -> StateVector:
    """Image of a vacuum polynomial under psi (a covector) or phi (a vector)."""
    points = ParamSet(tuple(dict.fromkeys(x for t in poly for _, _, x in t.factors)), "t")
    if kind == "psi":
        require_points(rep, [points])
        partner = psi_partner(rep, _sample_point(rep, points, start))
        return evaluate_on_vacuum(partner, poly).transpose()
    if kind == "phi":
        require_points(rep, [points.negated()])
        return evaluate_on_vacuum(rep, phi_polynomial(poly))
    raise ValueError(f"unknown morphism {kind!r}")


def _sample_point(rep: MonodromyRep, points: ParamSet, start: Fraction) -> Fraction:
    # any point off the chain's poles certifies the transposition identity
    taken = set(rep.xi.elems) | set(points.elems)
    x = start
    while x in taken:
        x += Fraction(1, 3)
    return x


def psi_formula_check(rep: MonodromyRep, idx: BetheIndex) -> CheckResult:
    """psi(B_{a,b}(u;v)) = C_{a,b}(u;v)."""
    image = apply_morphism("psi", bethe_polynomial(rep, idx), rep)
    return residual_check("psi", image, dual_bethe_vector(rep, idx))


def phi_formula_check(rep: MonodromyRep, idx: BetheIndex) -> CheckResult:
    """phi(B_{a,b}(u;v)) = B_{b,a}(-v;-u).

    The left side is the Bethe polynomial of the phi-image representation,
    pushed back through phi and evaluated in ``rep``.
    """
    image = apply_morphism("phi", bethe_polynomial(PhiImageRep(rep), idx), rep)
    target = BetheIndex(idx.b, idx.a, idx.v_set.negated(), idx.u_set.negated())
    return residual_check("phi", image, bethe_vector(rep, target))


def involution_check(terms: Sequence[BethePolynomialTerm]) -> CheckResult:
    """psi and phi square to the identity on polynomials."""
    terms = list(terms)
    for kind, fn in (("psi", psi_polynomial), ("phi", phi_polynomial)):
        if fn(fn(terms)) != terms:
            return CheckResult("involution", Verdict.FAIL, detail=f"{kind} o {kind} is not the identity")
    return CheckResult("involution", Verdict.OK)
