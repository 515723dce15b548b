"""Finite realizations of the GL(3) RTT algebra.

A representation is an ordered chain of factors ``F_m ... F_1``.  A factor is
either a fundamental site Lax operator ``L_ab(u) = delta_ab + g(u, xi) E_ba``
or a c-number twist.  ``T_ij(u)`` is applied to a vector by carrying three
auxiliary components through the chain, starting from component ``j`` and
reading off component ``i``; full matrices are never multiplied.

Basis index of a state: per-site states in {1,2,3}, base 3, site 1 least
significant.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .cache import MemoCache
from .errors import PoleError
from .logger import log
from .ratfun import ParamSet, f, g, model_constant, require_generic
from .types import CheckResult, Verdict, Witness
from .utils import Scalar, fmt, site_states, to_fraction

Coeffs = Dict[int, Fraction]


class StateVector:
    """Sparse vector (``dual=False``) or covector (``dual=True``) on 3^L states."""

    __slots__ = ("n_sites", "coeffs", "dual")

    def __init__(self, n_sites: int, coeffs: Optional[Coeffs] = None, dual: bool = False):
        self.n_sites = n_sites
        self.coeffs: Coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0}
        self.dual = dual

    @classmethod
    def basis(cls, n_sites: int, index: int = 0, dual: bool = False) -> "StateVector":
        return cls(n_sites, {index: Fraction(1)}, dual)

    @classmethod
    def zero(cls, n_sites: int, dual: bool = False) -> "StateVector":
        return cls(n_sites, {}, dual)

    @property
    def dim(self) -> int:
        return 3 ** self.n_sites

    def _check(self, other: "StateVector") -> None:
        if other.n_sites != self.n_sites or other.dual != self.dual:
            raise ValueError("incompatible state vectors")

    def __add__(self, other: "StateVector") -> "StateVector":
        self._check(other)
        out = dict(self.coeffs)
        axpy(out, Fraction(1), other.coeffs)
        return StateVector(self.n_sites, out, self.dual)

    def __sub__(self, other: "StateVector") -> "StateVector":
        self._check(other)
        out = dict(self.coeffs)
        axpy(out, Fraction(-1), other.coeffs)
        return StateVector(self.n_sites, out, self.dual)

    def __neg__(self) -> "StateVector":
        return self.scale(Fraction(-1))

    def scale(self, s: Fraction) -> "StateVector":
        if s == 0:
            return StateVector(self.n_sites, {}, self.dual)
        return StateVector(self.n_sites, {k: s * v for k, v in self.coeffs.items()}, self.dual)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.n_sites == other.n_sites and self.dual == other.dual and self.coeffs == other.coeffs

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def transpose(self) -> "StateVector":
        return StateVector(self.n_sites, self.coeffs, not self.dual)

    def first_nonzero(self) -> Optional[Tuple[int, Fraction]]:
        if not self.coeffs:
            return None
        k = min(self.coeffs)
        return k, self.coeffs[k]

    def witness(self) -> Optional[Witness]:
        hit = self.first_nonzero()
        if hit is None:
            return None
        k, v = hit
        return Witness(basis_index=k, states=site_states(k, self.n_sites), residual=fmt(v))

    def juxtapose(self, other: "StateVector") -> "StateVector":
        """Product of images of operators acting on disjoint site blocks.

        ``self`` must be supported on the low sites (high digits = state 1)
        and ``other`` on the complementary high sites.
        """
        self._check(other)
        out: Coeffs = {}
        for k1, a in self.coeffs.items():
            for k2, b in other.coeffs.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + a * b
        return StateVector(self.n_sites, out, self.dual)

    def __repr__(self) -> str:
        kind = "covector" if self.dual else "vector"
        body = ", ".join(f"{k}: {fmt(v)}" for k, v in sorted(self.coeffs.items())[:6])
        more = "" if len(self.coeffs) <= 6 else ", ..."
        return f"StateVector({kind}, L={self.n_sites}, {{{body}{more}}})"


def axpy(acc: Coeffs, s: Fraction, x: Coeffs) -> None:
    """acc += s * x in place, dropping cancelled entries."""
    if s == 0:
        return
    for k, v in x.items():
        nv = acc.get(k, 0) + s * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def residual_check(name: str, lhs: StateVector, rhs: StateVector) -> CheckResult:
    diff = lhs - rhs
    if diff.is_zero():
        return CheckResult(name, Verdict.OK)
    return CheckResult(name, Verdict.FAIL, witness=diff.witness(), detail="nonzero residual")


# ---------------------------------------------------------------------------
# factors


@dataclass(frozen=True)
class SiteFactor:
    site: int
    xi: Fraction

    def step(self, w: List[Coeffs], u: Fraction, c: Fraction, transposed: bool) -> List[Coeffs]:
        if u == self.xi:
            raise PoleError(f"spectral point {fmt(u)} hits inhomogeneity of site {self.site}")
        gu = g(u, self.xi, c)
        p = 3 ** (self.site - 1)
        out = [dict(w[0]), dict(w[1]), dict(w[2])]
        for b in range(3):
            for idx, coef in w[b].items():
                s = (idx // p) % 3
                add = gu * coef
                if transposed:
                    # E_ab picks digit b and writes digit a
                    if s != b:
                        continue
                    for a in range(3):
                        _bump(out[a], idx + (a - b) * p, add)
                else:
                    # E_ba picks digit a = s and writes digit b
                    _bump(out[s], idx + (b - s) * p, add)
        return out

    def vacuum_weight(self, i: int, u: Fraction, c: Fraction) -> Fraction:
        return f(u, self.xi, c) if i == 1 else Fraction(1)


@dataclass(frozen=True)
class TwistFactor:
    """c-number factor diag(d) + shear*u*E_12; a nonzero shear breaks RTT."""
    d: Tuple[Fraction, Fraction, Fraction] = (Fraction(1), Fraction(1), Fraction(1))
    shear: Fraction = Fraction(0)

    def step(self, w: List[Coeffs], u: Fraction, c: Fraction, transposed: bool) -> List[Coeffs]:
        out = [{k: self.d[a] * v for k, v in w[a].items()} for a in range(3)]
        if self.shear:
            axpy(out[0], self.shear * u, w[1])
        return out

    def vacuum_weight(self, i: int, u: Fraction, c: Fraction) -> Fraction:
        return self.d[i - 1]


Factor = Union[SiteFactor, TwistFactor]


def _bump(acc: Coeffs, k: int, v: Fraction) -> None:
    nv = acc.get(k, 0) + v
    if nv:
        acc[k] = nv
    else:
        acc.pop(k, None)


def lax_entry(a: int, b: int, u: Scalar, xi_k: Scalar, c: Scalar) -> List[List[Fraction]]:
    """Single-site operator delta_ab + g(u, xi_k) E_ba as a 3x3 matrix, rows = output state."""
    u, xi_k, c = to_fraction(u), to_fraction(xi_k), model_constant(c)
    gu = g(u, xi_k, c)
    op = [[Fraction(1) if (s == t and a == b) else Fraction(0) for t in range(3)] for s in range(3)]
    op[b - 1][a - 1] += gu
    return op


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class ChainSpec:
    L: int
    xi: ParamSet
    twist: Tuple[Fraction, Fraction, Fraction] = (Fraction(1), Fraction(1), Fraction(1))
    c: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "c", model_constant(self.c))
        object.__setattr__(self, "twist", tuple(to_fraction(d) for d in self.twist))
        if not isinstance(self.xi, ParamSet):
            object.__setattr__(self, "xi", ParamSet.of(self.xi, "xi"))
        if self.L < 0 or len(self.xi) != self.L:
            raise ValueError(f"chain needs {self.L} inhomogeneities, got {len(self.xi)}")
        if len(self.twist) != 3 or any(d == 0 for d in self.twist):
            raise ValueError("twist entries must be three nonzero rationals")

    def site_factors(self, offset: int = 0) -> Tuple[SiteFactor, ...]:
        return tuple(SiteFactor(offset + k + 1, x) for k, x in enumerate(self.xi))


_MATRICES = MemoCache("matrices", max_size=2048)


@dataclass(frozen=True)
class MonodromyRep:
    factors: Tuple[Factor, ...]
    n_sites: int
    c: Fraction = Fraction(1)
    label: str = "T"

    @property
    def sites(self) -> Tuple[SiteFactor, ...]:
        return tuple(x for x in self.factors if isinstance(x, SiteFactor))

    @property
    def xi(self) -> ParamSet:
        return ParamSet(tuple(s.xi for s in self.sites), "xi")

    def _run(self, i: int, j: int, u: Fraction, vec: StateVector, transposed: bool) -> StateVector:
        if vec.n_sites != self.n_sites:
            raise ValueError("state vector lives on a different chain")
        u = Fraction(u)
        w: List[Coeffs] = [{}, {}, {}]
        w[j - 1] = dict(vec.coeffs)
        for factor in self.factors:
            w = factor.step(w, u, self.c, transposed)
        return StateVector(self.n_sites, w[i - 1], vec.dual)

    def apply(self, i: int, j: int, u: Fraction, vec: StateVector) -> StateVector:
        """T_ij(u) |vec>."""
        if vec.dual:
            raise ValueError("apply() acts on vectors; use apply_left() for covectors")
        return self._run(i, j, u, vec, transposed=False)

    def apply_left(self, i: int, j: int, u: Fraction, covec: StateVector) -> StateVector:
        """<covec| T_ij(u)."""
        if not covec.dual:
            raise ValueError("apply_left() acts on covectors")
        return self._run(i, j, u, covec, transposed=True)

    def lam(self, i: int, u: Fraction) -> Fraction:
        out = Fraction(1)
        for factor in self.factors:
            out *= factor.vacuum_weight(i, Fraction(u), self.c)
        return out

    def lam_set(self, i: int, us: Iterable[Fraction]) -> Fraction:
        out = Fraction(1)
        for u in us:
            out *= self.lam(i, u)
        return out

    def r(self, k: int, u: Fraction) -> Fraction:
        return self.lam(k, u) / self.lam(2, u)

    def r_set(self, k: int, us: Iterable[Fraction]) -> Fraction:
        out = Fraction(1)
        for u in us:
            out *= self.r(k, u)
        return out

    def vacuum(self) -> StateVector:
        return StateVector.basis(self.n_sites)

    def dual_vacuum(self) -> StateVector:
        return StateVector.basis(self.n_sites, dual=True)

    def mirrored(self) -> "MonodromyRep":
        return MonodromyRep(tuple(reversed(self.factors)), self.n_sites, self.c, self.label + "~")

    def matrix(self, i: int, j: int, u: Fraction) -> "SparseMatrix":
        key = (self, i, j, Fraction(u))
        hit = _MATRICES.get(key)
        if hit is not None:
            return hit
        cols = {k: self.apply(i, j, u, StateVector.basis(self.n_sites, k)).coeffs for k in range(3 ** self.n_sites)}
        m = SparseMatrix(self.n_sites, cols)
        _MATRICES.put(key, m)
        return m


def build_chain(chain: ChainSpec) -> MonodromyRep:
    return MonodromyRep(chain.site_factors() + (TwistFactor(chain.twist),), chain.L, chain.c, "T")


def monodromy(chain: ChainSpec, i: int, j: int, u: Scalar) -> "SparseMatrix":
    return build_chain(chain).matrix(i, j, to_fraction(u))


def vacuum(chain: ChainSpec) -> StateVector:
    return StateVector.basis(chain.L)


def dual_vacuum(chain: ChainSpec) -> StateVector:
    return StateVector.basis(chain.L, dual=True)


def lam(chain: ChainSpec, i: int, u: Scalar) -> Fraction:
    return build_chain(chain).lam(i, to_fraction(u))


def r(chain: ChainSpec, k: int, u: Scalar) -> Fraction:
    return build_chain(chain).r(k, to_fraction(u))


# ---------------------------------------------------------------------------
# sparse matrices (column dictionaries), used only by the self-tests


class SparseMatrix:
    __slots__ = ("n_sites", "cols")

    def __init__(self, n_sites: int, cols: Dict[int, Coeffs]):
        self.n_sites = n_sites
        self.cols = {k: v for k, v in cols.items() if v}

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        out: Dict[int, Coeffs] = {}
        for k, col in other.cols.items():
            acc: Coeffs = {}
            for m, v in col.items():
                src = self.cols.get(m)
                if src:
                    axpy(acc, v, src)
            out[k] = acc
        return SparseMatrix(self.n_sites, out)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        out = {k: dict(v) for k, v in self.cols.items()}
        for k, v in other.cols.items():
            acc = out.setdefault(k, {})
            axpy(acc, Fraction(1), v)
        return SparseMatrix(self.n_sites, out)

    def scale(self, s: Fraction) -> "SparseMatrix":
        return SparseMatrix(self.n_sites, {k: {m: s * x for m, x in v.items()} for k, v in self.cols.items()} if s else {})

    def transpose(self) -> "SparseMatrix":
        out: Dict[int, Coeffs] = {}
        for k, col in self.cols.items():
            for m, v in col.items():
                out.setdefault(m, {})[k] = v
        return SparseMatrix(self.n_sites, out)

    def entries(self) -> Dict[Tuple[int, int], Fraction]:
        return {(m, k): v for k, col in self.cols.items() for m, v in col.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.n_sites == other.n_sites and self.entries() == other.entries()

    __hash__ = None

    def first_difference(self, other: "SparseMatrix") -> Optional[Tuple[Tuple[int, int], Fraction]]:
        a, b = self.entries(), other.entries()
        diffs = {k: a.get(k, 0) - b.get(k, 0) for k in set(a) | set(b)}
        diffs = {k: v for k, v in diffs.items() if v}
        if not diffs:
            return None
        k = min(diffs)
        return k, diffs[k]


# ---------------------------------------------------------------------------
# self-tests


def rtt_selftest(rep: MonodromyRep, w1: Scalar, w2: Scalar) -> CheckResult:
    """All 81 auxiliary entries of R(w1,w2)(T(w1)x1)(1xT(w2)) = (1xT(w2))(T(w1)x1)R(w1,w2)."""
    w1, w2 = to_fraction(w1), to_fraction(w2)
    gw = g(w1, w2, rep.c)
    T1 = {(a, b): rep.matrix(a, b, w1) for a in range(1, 4) for b in range(1, 4)}
    T2 = {(a, b): rep.matrix(a, b, w2) for a in range(1, 4) for b in range(1, 4)}
    for i1 in range(1, 4):
        for i2 in range(1, 4):
            for j1 in range(1, 4):
                for j2 in range(1, 4):
                    lhs = T1[i1, j1] @ T2[i2, j2] + (T1[i2, j1] @ T2[i1, j2]).scale(gw)
                    rhs = T2[i2, j2] @ T1[i1, j1] + (T2[i2, j1] @ T1[i1, j2]).scale(gw)
                    diff = lhs.first_difference(rhs)
                    if diff is not None:
                        (row, col), v = diff
                        log.debug("RTT failure at aux entry %s", (i1, i2, j1, j2))
                        return CheckResult(
                            "rtt",
                            Verdict.FAIL,
                            witness=Witness(row, site_states(row, rep.n_sites), fmt(v)),
                            detail=f"aux entry (i1,i2,j1,j2)=({i1},{i2},{j1},{j2}), column {col}",
                        )
    return CheckResult("rtt", Verdict.OK)


def vacuum_selftest(rep: MonodromyRep, u: Scalar) -> CheckResult:
    """Annihilation by the lower (dual: upper) triangle and the diagonal eigenvalues."""
    u = to_fraction(u)
    vac, dvac = rep.vacuum(), rep.dual_vacuum()
    for i in range(1, 4):
        for j in range(1, 4):
            if i > j:
                out = rep.apply(i, j, u, vac)
                if not out.is_zero():
                    return CheckResult("vacuum", Verdict.FAIL, out.witness(), f"T_{i}{j}|0> != 0")
            if i < j:
                out = rep.apply_left(i, j, u, dvac)
                if not out.is_zero():
                    return CheckResult("vacuum", Verdict.FAIL, out.witness(), f"<0|T_{i}{j} != 0")
        res = residual_check("vacuum", rep.apply(i, i, u, vac), vac.scale(rep.lam(i, u)))
        if not res.ok:
            res.detail = f"T_{i}{i}|0> != lambda_{i}|0>"
            return res
    return CheckResult("vacuum", Verdict.OK)


def _transpose_pair_check(name: str, left: MonodromyRep, right: MonodromyRep, u: Fraction) -> CheckResult:
    for i in range(1, 4):
        for j in range(1, 4):
            a = left.matrix(i, j, u).transpose()
            b = right.matrix(j, i, u)
            diff = a.first_difference(b)
            if diff is not None:
                (row, _), v = diff
                return CheckResult(name, Verdict.FAIL, Witness(row, site_states(row, left.n_sites), fmt(v)), f"entry ({i},{j})")
    return CheckResult(name, Verdict.OK)


def transpose_realization_check(rep: MonodromyRep, u: Scalar) -> CheckResult:
    """ok iff T_ij(u)^T = T_ji(u) for all i, j."""
    return _transpose_pair_check("transpose", rep, rep, to_fraction(u))


def mirror_realization_check(rep: MonodromyRep, u: Scalar) -> CheckResult:
    """ok iff T_ij(u)^T = T~_ji(u) where T~ is the same chain read in reverse order."""
    return _transpose_pair_check("mirror-transpose", rep, rep.mirrored(), to_fraction(u))


def require_points(rep: MonodromyRep, params: Sequence[ParamSet], merge_shared: bool = True) -> None:
    """Joint genericity of spectral parameters with the chain's inhomogeneities.

    ``merge_shared`` lets a value sit in two of the given sets; it never lets a
    parameter coincide with an inhomogeneity.
    """
    require_generic(params, rep.c, merge_shared=merge_shared)
    pool = tuple(dict.fromkeys(x for ps in params for x in ps))
    require_generic([pool, rep.xi], rep.c)
