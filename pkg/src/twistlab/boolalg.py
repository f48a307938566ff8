"""Finite powerset Boolean algebras 2^n.

Elements are atom subsets stored as integer bitmasks. Every finite Boolean
algebra is isomorphic to one of these, so nothing else is constructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator

MAX_ATOMS = 16


class AlgebraSizeError(ValueError):
    pass


class AlgebraMismatchError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class BAElem:
    mask: int
    n: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} mentions atoms outside 0..{self.n - 1}")

    def __repr__(self):
        return f"BAElem({self.mask:#x}/{self.n})"


@dataclass(frozen=True, slots=True)
class BoolAlg:
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ATOMS:
            raise AlgebraSizeError(f"atom count must be in 1..{MAX_ATOMS}, got {self.n}")

    @property
    def top_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def top(self) -> BAElem:
        return BAElem(self.top_mask, self.n)

    @property
    def bottom(self) -> BAElem:
        return BAElem(0, self.n)

    @property
    def size(self) -> int:
        return 1 << self.n

    def element(self, mask: int) -> BAElem:
        return BAElem(mask, self.n)

    def atoms(self) -> list[BAElem]:
        return [BAElem(1 << i, self.n) for i in range(self.n)]

    def elements(self) -> Iterator[BAElem]:
        """All 2^n elements in increasing mask order."""
        for m in range(1 << self.n):
            yield BAElem(m, self.n)

    def owns(self, x: BAElem) -> bool:
        return x.n == self.n

    def big_meet(self, xs: Iterable[BAElem]) -> BAElem:
        return big_meet(self, xs)

    def big_join(self, xs: Iterable[BAElem]) -> BAElem:
        return big_join(self, xs)


def make_powerset_algebra(n: int) -> BoolAlg:
    return BoolAlg(n)


def _same(x: BAElem, y: BAElem) -> int:
    if x.n != y.n:
        raise AlgebraMismatchError(f"operands from 2^{x.n} and 2^{y.n}")
    return x.n


def meet(x: BAElem, y: BAElem) -> BAElem:
    return BAElem(x.mask & y.mask, _same(x, y))


def join(x: BAElem, y: BAElem) -> BAElem:
    return BAElem(x.mask | y.mask, _same(x, y))


def compl(x: BAElem) -> BAElem:
    return BAElem(~x.mask & ((1 << x.n) - 1), x.n)


def imp(x: BAElem, y: BAElem) -> BAElem:
    n = _same(x, y)
    return BAElem((~x.mask | y.mask) & ((1 << n) - 1), n)


def leq(x: BAElem, y: BAElem) -> bool:
    _same(x, y)
    return x.mask & ~y.mask == 0


def _check_members(alg: BoolAlg, xs: Iterable[BAElem]) -> list[BAElem]:
    xs = list(xs)
    for x in xs:
        if x.n != alg.n:
            raise AlgebraMismatchError(f"element of 2^{x.n} passed to 2^{alg.n}")
    return xs


def big_meet(alg: BoolAlg, xs: Iterable[BAElem]) -> BAElem:
    xs = _check_members(alg, xs)
    return BAElem(reduce(lambda a, b: a & b.mask, xs, alg.top_mask), alg.n)


def big_join(alg: BoolAlg, xs: Iterable[BAElem]) -> BAElem:
    xs = _check_members(alg, xs)
    return BAElem(reduce(lambda a, b: a | b.mask, xs, 0), alg.n)
