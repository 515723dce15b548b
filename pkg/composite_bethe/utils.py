from __future__ import annotations
from fractions import Fraction
from typing import Any, Iterable, List, Sequence, Tuple, Union

from .errors import ConfigError


Scalar = Union[int, str, Fraction]


def to_fraction(x: Scalar) -> Fraction:
    """Parse an int, a Fraction or a "num/den" string exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ConfigError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"not a rational: {x!r}") from e
    raise ConfigError(f"not a rational: {x!r}")


def fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def fmt_all(xs: Iterable[Fraction]) -> List[str]:
    return [fmt(x) for x in xs]


def clip(s: str, n: int = 120) -> str:
    return s if len(s) <= n else s[:n] + "..."


def site_states(index: int, n_sites: int) -> List[int]:
    """Per-site states in {1,2,3}, site 1 first."""
    out = []
    for _ in range(n_sites):
        index, d = divmod(index, 3)
        out.append(d + 1)
    return out


def instance_key(instance: Any) -> Tuple:
    # Canonical ordering key for report records.
    if isinstance(instance, dict):
        return tuple((k, instance_key(instance[k])) for k in sorted(instance))
    if isinstance(instance, (list, tuple)):
        return tuple(instance_key(v) for v in instance)
    return (str(type(instance).__name__), str(instance))


def pairwise(seq: Sequence[Any]):
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            yield seq[i], seq[j]
