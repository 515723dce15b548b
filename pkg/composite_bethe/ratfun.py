"""Exact scalar kernel: g, f, set products and genericity of parameter collections.

All scalars are ``fractions.Fraction``.  Products over an empty set are 1.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple
import operator

from .errors import DegenerateError, PoleError, GenericityError
from .utils import Scalar, fmt, pairwise, to_fraction


def model_constant(c: Scalar) -> Fraction:
    c = to_fraction(c)
    if c == 0:
        raise ValueError("model constant c must be nonzero")
    return c


@dataclass(frozen=True)
class ParamSet:
    elems: Tuple[Fraction, ...] = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "elems", tuple(to_fraction(x) for x in self.elems))
        if len(set(self.elems)) != len(self.elems):
            raise DegenerateError(f"repeated element in parameter set {self.label or '?'}: {self}")

    @classmethod
    def of(cls, values: Iterable[Scalar] = (), label: str = "") -> "ParamSet":
        return cls(tuple(values), label)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __contains__(self, x) -> bool:
        return x in self.elems

    def __str__(self) -> str:
        return "{" + ", ".join(fmt(x) for x in self.elems) + "}"

    def plus(self, *xs: Fraction) -> "ParamSet":
        return ParamSet(self.elems + tuple(xs), self.label)

    def minus(self, *xs: Fraction) -> "ParamSet":
        drop = set(xs)
        return ParamSet(tuple(x for x in self.elems if x not in drop), self.label)

    def union(self, other: "ParamSet") -> "ParamSet":
        return ParamSet(self.elems + other.elems, self.label)

    def negated(self) -> "ParamSet":
        return ParamSet(tuple(-x for x in self.elems), self.label)

    def canonical(self) -> Tuple[Fraction, ...]:
        return tuple(sorted(self.elems))


def _as_set(X) -> Sequence[Fraction]:
    if isinstance(X, ParamSet):
        return X.elems
    if isinstance(X, (int, Fraction)):
        return (Fraction(X),)
    return tuple(X)


def g(x: Fraction, y: Fraction, c: Fraction) -> Fraction:
    if x == y:
        raise PoleError(f"g({fmt(Fraction(x))}, {fmt(Fraction(y))}) has a pole")
    return Fraction(c) / (Fraction(x) - Fraction(y))


def f(x: Fraction, y: Fraction, c: Fraction) -> Fraction:
    if x == y:
        raise PoleError(f"f({fmt(Fraction(x))}, {fmt(Fraction(y))}) has a pole")
    d = Fraction(x) - Fraction(y)
    return (d + c) / d


def finv(x: Fraction, y: Fraction, c: Fraction) -> Fraction:
    """1/f(x,y) = (x-y)/(x-y+c); regular at x = y where it vanishes."""
    d = Fraction(x) - Fraction(y)
    if d + c == 0:
        raise PoleError(f"1/f({fmt(Fraction(x))}, {fmt(Fraction(y))}) has a pole")
    return d / (d + c)


def _set_product(fn, X, Y, c: Fraction) -> Fraction:
    return reduce(operator.mul, (fn(x, y, c) for x in _as_set(X) for y in _as_set(Y)), Fraction(1))


def set_product_g(X, Y, c: Fraction) -> Fraction:
    return _set_product(g, X, Y, c)


def set_product_f(X, Y, c: Fraction) -> Fraction:
    return _set_product(f, X, Y, c)


def set_product_finv(X, Y, c: Fraction) -> Fraction:
    return _set_product(finv, X, Y, c)


def prod(values: Iterable[Fraction]) -> Fraction:
    return reduce(operator.mul, values, Fraction(1))


@dataclass(frozen=True)
class GenericityReport:
    ok: bool
    pair: Optional[Tuple[Fraction, Fraction]] = None
    reason: Optional[str] = None

    def as_dict(self) -> dict:
        if self.ok:
            return {"ok": True}
        return {"ok": False, "pair": [fmt(p) for p in self.pair], "reason": self.reason}


def genericity_check(all_params: Sequence, c: Fraction, merge_shared: bool = False) -> GenericityReport:
    """Every pairwise difference among the pooled elements must avoid {0, +c, -c}.

    With ``merge_shared`` an identical value appearing in two different sets
    counts once; repeats inside one set are still reported.
    """
    pooled: List[Fraction] = []
    for ps in all_params:
        elems = list(_as_set(ps))
        seen = set()
        for x in elems:
            if x in seen:
                return GenericityReport(False, (x, x), "coinciding pair")
            seen.add(x)
        pooled.extend(elems)
    if merge_shared:
        pooled = list(dict.fromkeys(pooled))
    c = Fraction(c)
    for x, y in pairwise(pooled):
        d = x - y
        if d == 0:
            return GenericityReport(False, (x, y), "coinciding pair")
        if d == c or d == -c:
            return GenericityReport(False, (x, y), "difference equals +-c")
    return GenericityReport(True)


def require_generic(all_params: Sequence, c: Fraction, merge_shared: bool = False) -> None:
    rep = genericity_check(all_params, c, merge_shared=merge_shared)
    if not rep.ok:
        raise GenericityError(
            f"genericity violated by {fmt(rep.pair[0])}, {fmt(rep.pair[1])}: {rep.reason}",
            rep.as_dict(),
        )
