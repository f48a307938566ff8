"""Bounded twist-valued universes.

Elements are finite maps from earlier elements to twist values.  They live
in a ``UniverseStore`` that interns entry maps, so two structurally equal
elements always share an id.  Rank follows the usual convention: the empty
element has rank 1 and an element's rank is one more than the largest rank
in its domain.
"""

from __future__ import annotations

import io
import re
import threading
from itertools import product
from typing import IO, Iterable, Sequence

from . import twist
from .boolalg import AlgebraMismatchError, BAElem, BoolAlg
from .errors import BudgetExceeded
from .twist import TwistVal

Entries = tuple[tuple[int, TwistVal], ...]


class UnknownElementError(KeyError):
    pass


class DuplicateKeyError(ValueError):
    pass


class UniverseStore:
    def __init__(self, alg: BoolAlg):
        self.alg = alg
        self._entries: list[Entries] = []
        self._maps: list[dict[int, TwistVal]] = []
        self._ranks: list[int] = []
        self._ids: dict[Entries, int] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._entries)

    def __contains__(self, uid) -> bool:
        return isinstance(uid, int) and 0 <= uid < len(self._entries)

    def _check(self, uid: int) -> None:
        if uid not in self:
            raise UnknownElementError(uid)

    def intern(self, pairs: Iterable[tuple[int, TwistVal]]) -> int:
        pairs = list(pairs)
        keys = [k for k, _ in pairs]
        if len(set(keys)) != len(keys):
            raise DuplicateKeyError(f"duplicate keys in {keys}")
        for k, val in pairs:
            self._check(k)
            if val.n != self.alg.n:
                raise AlgebraMismatchError(f"value over 2^{val.n} in a store over 2^{self.alg.n}")
        entries = tuple(sorted(pairs, key=lambda kv: kv[0]))
        uid = self._ids.get(entries)
        if uid is not None:
            return uid
        with self._lock:
            uid = self._ids.get(entries)
            if uid is None:
                uid = len(self._entries)
                self._entries.append(entries)
                self._maps.append(dict(entries))
                self._ranks.append(1 + max((self._ranks[k] for k in keys), default=0))
                self._ids[entries] = uid
        return uid

    def entries(self, uid: int) -> Entries:
        self._check(uid)
        return self._entries[uid]

    def dom(self, uid: int) -> tuple[int, ...]:
        return tuple(k for k, _ in self.entries(uid))

    def value(self, uid: int, key: int) -> TwistVal:
        self._check(uid)
        return self._maps[uid][key]

    def as_map(self, uid: int) -> dict[int, TwistVal]:
        self._check(uid)
        return dict(self._maps[uid])

    def rank(self, uid: int) -> int:
        self._check(uid)
        return self._ranks[uid]

    def ids(self) -> range:
        return range(len(self._entries))

    # -- text dump -----------------------------------------------------------

    def dump(self, out: IO[str]) -> None:
        out.write(f"# atoms {self.alg.n}\n")
        for uid, entries in enumerate(self._entries):
            body = ", ".join(f"{k}:({v.z1:#x},{v.z2:#x})" for k, v in entries)
            out.write(f"{uid} {self._ranks[uid]} {{{body}}}\n")

    def dumps(self) -> str:
        buf = io.StringIO()
        self.dump(buf)
        return buf.getvalue()

    @classmethod
    def load(cls, src: IO[str]) -> "UniverseStore":
        header = src.readline()
        m = re.match(r"#\s*atoms\s+(\d+)\s*$", header)
        if not m:
            raise ValueError("store dump must start with '# atoms <n>'")
        store = cls(BoolAlg(int(m.group(1))))
        n = store.alg.n
        for lineno, line in enumerate(src, 2):
            if not line.strip():
                continue
            lm = re.match(r"^(\d+) (\d+) \{(.*)\}$", line.strip())
            if not lm:
                raise ValueError(f"line {lineno}: malformed element")
            pairs = []
            for em in re.finditer(r"(\d+):\((0x[0-9a-f]+),(0x[0-9a-f]+)\)", lm.group(3)):
                pairs.append((int(em.group(1)), TwistVal(int(em.group(2), 16), int(em.group(3), 16), n)))
            uid = store.intern(pairs)
            if uid != int(lm.group(1)) or store.rank(uid) != int(lm.group(2)):
                raise ValueError(f"line {lineno}: id/rank does not match the interned element")
        return store

    @classmethod
    def loads(cls, text: str) -> "UniverseStore":
        return cls.load(io.StringIO(text))


def empty_element(store: UniverseStore) -> int:
    return store.intern(())


def make_element(store: UniverseStore, pairs: Sequence[tuple[int, TwistVal]]) -> int:
    return store.intern(pairs)


def rank(store: UniverseStore, uid: int) -> int:
    return store.rank(uid)


def universe_size(alg: BoolAlg, max_rank: int) -> int:
    """|V_k| from |V_{k+1}| = (1 + |T_A|) ** |V_k| with |V_0| = 0."""
    t = 3 ** alg.n
    size = 0
    for _ in range(max_rank):
        size = (1 + t) ** size
    return size


def enumerate_rank(store: UniverseStore, max_rank: int, budget: int = 10 ** 6) -> list[int]:
    """All elements of rank <= max_rank, in a fixed order.

    Each level lists every partial map from the previous level into T_A,
    positions varying as in ``itertools.product`` with "absent" first.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    dom = twist.twist_domain(store.alg)
    choices = [None, *dom]
    level: list[int] = []
    for _ in range(max_rank):
        needed = (1 + len(dom)) ** len(level)
        if needed > budget:
            raise BudgetExceeded(needed, budget, "elements")
        nxt = []
        for pick in product(choices, repeat=len(level)):
            nxt.append(store.intern((k, v) for k, v in zip(level, pick) if v is not None))
        level = nxt
    return level


# -- hereditarily finite sets and check-names --------------------------------

HFSet = frozenset


def hf_rank(x: HFSet) -> int:
    return max((hf_rank(y) + 1 for y in x), default=0)


def hf_sets(max_rank: int) -> list[HFSet]:
    """All hereditarily finite sets of rank <= max_rank (that is, V_{max_rank+1})."""
    level: list[HFSet] = []
    for _ in range(max_rank + 1):
        level = [frozenset(y for i, y in enumerate(level) if mask >> i & 1)
                 for mask in range(1 << len(level))]
    return level


def check_name(store: UniverseStore, x: HFSet) -> int:
    one = twist.one(store.alg.n)
    return store.intern((check_name(store, y), one) for y in x)


def hf_render(x: HFSet) -> str:
    return "{" + ", ".join(sorted(hf_render(y) for y in x)) + "}"


def embed(src: UniverseStore, uid: int, dst: UniverseStore, _memo=None) -> int:
    """Copy an element into ``dst``, lifting values along {0,1} -> 2^n.

    Only sources over the two-element algebra (or over the same algebra as
    the destination) are supported.
    """
    if src.alg.n not in (1, dst.alg.n):
        raise AlgebraMismatchError("can only embed from 2^1 or from the same algebra")
    memo = {} if _memo is None else _memo
    if uid in memo:
        return memo[uid]
    top = dst.alg.top_mask

    def lift(v: TwistVal) -> TwistVal:
        if src.alg.n == dst.alg.n:
            return v
        return TwistVal(top if v.z1 else 0, top if v.z2 else 0, dst.alg.n)

    out = dst.intern((embed(src, k, dst, memo), lift(v)) for k, v in src.entries(uid))
    memo[uid] = out
    return out


# -- mixtures and cores ------------------------------------------------------

def mixture(store: UniverseStore, weights: Sequence[BAElem], elements: Sequence[int], ctx) -> int:
    """The twist mixture of ``elements`` with respect to ``weights``.

    Each z in the union of the domains gets first coordinate
    join_i (a_i & [[z in u_i]]_1); the second coordinate is its complement.
    """
    if len(weights) != len(elements):
        raise ValueError(f"{len(weights)} weights for {len(elements)} elements")
    if ctx.store is not store:
        raise ValueError("evaluation context is bound to a different store")
    alg = store.alg
    for a in weights:
        if a.n != alg.n:
            raise AlgebraMismatchError("weight from a different algebra")
    domain = sorted({z for u in elements for z in store.dom(u)})
    pairs = []
    for z in domain:
        acc = 0
        for a, u in zip(weights, elements):
            acc |= a.mask & ctx.val_mem(z, u).z1
        pairs.append((z, TwistVal(acc, ~acc & alg.top_mask, alg.n)))
    return store.intern(pairs)


def core(u: int, carrier: Sequence[int], ctx) -> list[int]:
    """Carrier-relative core: full members of u, one per class of [[x = y]]_1 = 1.

    Representatives are the smallest ids of their classes.
    """
    top = ctx.store.alg.top_mask
    reps: list[int] = []
    for x in sorted(set(carrier)):
        if ctx.val_mem(x, u).z1 != top:
            continue
        if all(ctx.val_eq(x, r).z1 != top for r in reps):
            reps.append(x)
    return reps
