"""Generalised partitions and the combinatorial lemmas used for Euler products."""
from __future__ import annotations

from collections import Counter
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from . import kernels

Index = tuple[int, ...]


def _as_index(i) -> Index:
    return (int(i),) if isinstance(i, int) else tuple(int(x) for x in i)


class MultiPartition:
    """Finite multiset of nonzero indices i in N^p."""

    __slots__ = ("entries", "dim")

    def __init__(self, parts: Iterable = (), dim: int | None = None):
        parts = [_as_index(i) for i in parts]
        dims = {len(i) for i in parts}
        if len(dims) > 1:
            raise ValueError("mixed index dimensions")
        self.dim = dims.pop() if dims else (dim or 1)
        for i in parts:
            if min(i) < 0 or not any(i):
                raise ValueError(f"index {i} must be a nonzero element of N^p")
        self.entries = tuple(sorted(parts))

    @classmethod
    def from_counts(cls, counts: dict, dim: int | None = None) -> "MultiPartition":
        parts = []
        for i, m in counts.items():
            if m < 0:
                raise ValueError("negative multiplicity")
            parts += [i] * m
        return cls(parts, dim)

    def counts(self) -> Counter:
        return Counter(self.entries)

    def size(self) -> int:
        """|pi|: number of elements."""
        return len(self.entries)

    def distinct(self) -> int:
        """||pi||: number of distinct parts."""
        return len(set(self.entries))

    def total(self) -> Index:
        return lambda_map(self)

    def __add__(self, other: "MultiPartition") -> "MultiPartition":
        return MultiPartition(self.entries + other.entries, self.dim)

    def __eq__(self, other):
        return isinstance(other, MultiPartition) and self.entries == other.entries

    def __lt__(self, other):
        return self.entries < other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_list(self) -> list:
        return [list(i) if self.dim > 1 else i[0] for i in self.entries]

    def __repr__(self) -> str:
        return "[" + ", ".join(str(x) for x in self.to_list()) + "]"


def lambda_map(pi: MultiPartition):
    """sum of the parts, an element of N^p (an int when p = 1)."""
    tot = [0] * pi.dim
    for i in pi.entries:
        for k, x in enumerate(i):
            tot[k] += x
    return tot[0] if pi.dim == 1 else tuple(tot)


RefinedPartition = tuple  # sorted tuple of MultiPartition


def mu_map(varpi: Iterable[MultiPartition]) -> MultiPartition:
    parts: list[Index] = []
    dim = None
    for blk in varpi:
        parts += list(blk.entries)
        dim = blk.dim
    return MultiPartition(parts, dim)


def _sub_vectors(rem: tuple[int, ...]):
    return product(*(range(r + 1) for r in rem))


def mu_fiber(pi: MultiPartition) -> list[RefinedPartition]:
    """All multisets of nonempty multi-partitions whose union is pi."""
    keys = sorted(pi.counts())
    total = tuple(pi.counts()[k] for k in keys)
    out: list[RefinedPartition] = []

    def rec(rem, bound, acc):
        if not any(rem):
            out.append(tuple(acc))
            return
        for b in _sub_vectors(rem):
            if not any(b) or (bound is not None and b > bound):
                continue
            rec(tuple(r - x for r, x in zip(rem, b)), b, acc + [b])

    rec(total, None, [])
    result = []
    for blocks in out:
        refined = tuple(sorted(
            MultiPartition.from_counts({keys[i]: c for i, c in enumerate(b) if c}, pi.dim)
            for b in blocks))
        result.append(refined)
    return sorted(set(result))


# -- ordered partitions with zeroes ----------------------------------------

def contraction(mu: Sequence[int]) -> tuple[int, ...]:
    if any(m < 0 for m in mu):
        raise ValueError("negative entry")
    return tuple(m for m in mu if m)


def ordered_size(mu: Sequence[int]) -> int:
    return sum(mu)


def ordered_distinct(mu: Sequence[int]) -> int:
    """||mu||: number of nonempty columns."""
    return sum(1 for m in mu if m)


def compositions(m: int) -> Iterator[tuple[int, ...]]:
    """Ordered partitions of m without zeroes (the set Q_m)."""
    if m == 0:
        return
    for cuts in range(m):
        for pos in combinations(range(1, m), cuts):
            bounds = (0,) + pos + (m,)
            yield tuple(bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1))


class BoundsExceeded(ValueError):
    pass


def howe_preimage(nus: Sequence[Sequence[int]]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Explicit enumeration of c_n^{-1}(nu_1, ..., nu_n)."""
    lens = [len(nu) for nu in nus]
    for L in range(max(lens), sum(lens) + 1):
        choices = [list(combinations(range(L), k)) for k in lens]
        for pick in product(*choices):
            cover = set()
            for s in pick:
                cover.update(s)
            if len(cover) != L:
                continue
            mus = []
            for nu, s in zip(nus, pick):
                mu = [0] * L
                for pos, val in zip(s, nu):
                    mu[pos] = val
                mus.append(tuple(mu))
            yield tuple(mus)


def howe_check(nus: Sequence[Sequence[int]], max_blocks: int = 12) -> tuple[int, int, bool]:
    """(sum over the preimage of (-1)^{||mu_1+...+mu_n||}, (-1)^{sum ||nu_i||}, equal)."""
    nus = [tuple(nu) for nu in nus]
    if not nus:
        raise ValueError("need n >= 1")
    for nu in nus:
        if not nu or contraction(nu) != nu:
            raise ValueError(f"{nu} is not an ordered partition without zeroes")
    if sum(sum(nu) for nu in nus) > max_blocks:
        raise BoundsExceeded("total block count above the bound")
    lens = [len(nu) for nu in nus]
    s = 0
    for L in range(max(lens), sum(lens) + 1):
        s += (-1) ** L * kernels.howe_cover_count(lens, L)
    expected = (-1) ** sum(lens)
    return s, expected, s == expected


def howe_sweep(max_blocks: int, max_n: int):
    """Every tuple with n <= max_n and total blocks <= max_blocks."""
    for n in range(1, max_n + 1):
        for total in range(n, max_blocks + 1):
            for split in _splits(total, n):
                for nus in product(*(list(compositions(m)) for m in split)):
                    yield nus


def _splits(total: int, n: int):
    if n == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - n + 2):
        for rest in _splits(total - first, n - 1):
            yield (first,) + rest


# -- overlaps ---------------------------------------------------------------

class OverlapMatrix:
    """gamma: (i, j) in I_0^2 minus (0, 0) -> n_ij, with 0 the zero index."""

    __slots__ = ("n", "dim")

    def __init__(self, entries: dict, dim: int):
        self.n = {k: v for k, v in entries.items() if v}
        self.dim = dim

    def row_sums(self) -> Counter:
        zero = (0,) * self.dim
        c: Counter = Counter()
        for (i, j), v in self.n.items():
            if i != zero:
                c[i] += v
        return c

    def col_sums(self) -> Counter:
        zero = (0,) * self.dim
        c: Counter = Counter()
        for (i, j), v in self.n.items():
            if j != zero:
                c[j] += v
        return c

    def deformalise(self) -> MultiPartition:
        """d(gamma): the partition with n_ij copies of i + j."""
        parts = []
        for (i, j), v in self.n.items():
            parts += [tuple(a + b for a, b in zip(i, j))] * v
        return MultiPartition(parts, self.dim)

    def overlap(self) -> int:
        zero = (0,) * self.dim
        return sum(v for (i, j), v in self.n.items() if i != zero and j != zero)

    def __repr__(self) -> str:
        return f"OverlapMatrix({dict(sorted(self.n.items()))})"


def overlap_enumerate(kappa: MultiPartition, lam: MultiPartition) -> list[OverlapMatrix]:
    dim = kappa.dim if kappa.entries else lam.dim
    zero = (0,) * dim
    kc, lc = kappa.counts(), lam.counts()
    rows, cols = sorted(kc), sorted(lc)
    out: list[OverlapMatrix] = []

    def rec(r, used, acc):
        if r == len(rows):
            ent = dict(acc)
            for j in cols:
                left = lc[j] - used[j]
                if left < 0:
                    return
                ent[(zero, j)] = left
            out.append(OverlapMatrix(ent, dim))
            return
        i = rows[r]
        # distribute k_i over the columns j (the remainder goes to column 0)
        for vec in product(*(range(min(kc[i], lc[j] - used[j]) + 1) for j in cols)):
            if sum(vec) > kc[i]:
                continue
            nu = dict(used)
            ent = dict(acc)
            for j, v in zip(cols, vec):
                nu[j] += v
                ent[(i, j)] = v
            ent[(i, zero)] = kc[i] - sum(vec)
            rec(r + 1, nu, ent)

    rec(0, Counter({j: 0 for j in cols}), {})
    return out
