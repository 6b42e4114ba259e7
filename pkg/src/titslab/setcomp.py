"""Set compositions, set partitions and the Tits product.

A set composition is stored as a tuple of block bitmasks: element ``x`` of a
block is bit ``1 << x``.  Python integers are unbounded, so any finite subset
of the positive integers can be represented.  The public view of a block is
the sorted tuple of its elements (``SetComposition.blocks``).

Deterministic order: compositions compare by length first, then
lexicographically on the sequence of blocks, each block read as its sorted
list of elements.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Iterable, Iterator

from .errors import CapExceeded, ParseError, SupportMismatch

DEFAULT_CAP = 9

FILTERS = ("all", "canonical", "star", "dagger")


# -- bitmask helpers ---------------------------------------------------------

def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


@lru_cache(maxsize=None)
def bits(mask: int) -> tuple[int, ...]:
    """Sorted elements of a bitmask."""
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return tuple(out)


def low(mask: int) -> int:
    """Smallest element of a nonempty mask."""
    return (mask & -mask).bit_length() - 1


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def as_mask(A) -> int:
    if isinstance(A, int):
        return A
    return mask_of(A)


def interval(n: int) -> int:
    """Mask of [n] = {1, ..., n}."""
    return ((1 << n) - 1) << 1


def _check_cap(size: int, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if size > cap:
        raise CapExceeded(f"support of size {size} exceeds cap {cap}")


# -- set compositions ---------------------------------------------------------

class SetComposition(tuple):
    """An ordered tuple of disjoint nonempty blocks (stored as bitmasks).

    Iterating yields block masks; use :attr:`blocks` for element tuples.
    The constructor does not validate; use :meth:`from_blocks` or
    :func:`parse_sc` for untrusted input.
    """

    __slots__ = ()

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "SetComposition":
        masks = []
        seen = 0
        for block in blocks:
            block = list(block)
            if not block:
                raise ValueError("empty block")
            m = 0
            for x in block:
                if not isinstance(x, int) or x < 1:
                    raise ValueError(f"block elements must be positive integers, got {x!r}")
                if (seen | m) >> x & 1:
                    raise ValueError(f"duplicate element {x}")
                m |= 1 << x
            seen |= m
            masks.append(m)
        return cls(masks)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(bits(m) for m in self)

    @property
    def support(self) -> int:
        # blocks are disjoint, so the sum is the union
        return sum(self)

    @property
    def support_set(self) -> frozenset[int]:
        return frozenset(bits(self.support))

    @property
    def length(self) -> int:
        return len(self)

    @property
    def type(self) -> tuple[int, ...]:
        return tuple(m.bit_count() for m in self)

    def concat(self, other: "SetComposition") -> "SetComposition":
        return SetComposition(tuple.__add__(self, other))

    def is_canonical(self) -> bool:
        mins = [m & -m for m in self]
        return all(a < b for a, b in zip(mins, mins[1:]))

    def canonical(self) -> "SetComposition":
        """The representative of the rearrangement class in canonical order."""
        return SetComposition(sorted(self, key=lambda m: m & -m))

    def sort_key(self):
        return (len(self), tuple(bits(m) for m in self))

    def __str__(self) -> str:
        return format_sc(self)

    def __repr__(self) -> str:
        return f"SC({format_sc(self)!r})"


EMPTY = SetComposition(())


def sc(text: str) -> SetComposition:
    """Shorthand for :func:`parse_sc`."""
    return parse_sc(text)


def parse_sc(text: str) -> SetComposition:
    """Parse ``"1,3|5|4|2,6"``; the empty string is the empty composition."""
    s = "".join(text.split())
    if not s:
        return EMPTY
    blocks = []
    for part in s.split("|"):
        if not part:
            raise ParseError(f"empty block in {text!r}")
        try:
            block = [int(tok) for tok in part.split(",")]
        except ValueError:
            raise ParseError(f"malformed block {part!r} in {text!r}") from None
        blocks.append(block)
    try:
        return SetComposition.from_blocks(blocks)
    except ValueError as exc:
        raise ParseError(f"{exc} in {text!r}") from None


def format_sc(P: Iterable[int]) -> str:
    return "|".join(",".join(map(str, bits(m))) for m in P)


def parse_set(text: str) -> int:
    """Parse a comma separated support such as ``"3,5,6"`` into a mask."""
    s = "".join(text.split())
    if not s:
        return 0
    try:
        elems = [int(t) for t in s.split(",")]
    except ValueError:
        raise ParseError(f"malformed set {text!r}") from None
    if any(x < 1 for x in elems) or len(set(elems)) != len(elems):
        raise ParseError(f"malformed set {text!r}")
    return mask_of(elems)


# -- products and relations ---------------------------------------------------

def tits_product(P: SetComposition, Q: SetComposition) -> SetComposition:
    """Blockwise intersections P_i & Q_j in lexicographic (i, j) order."""
    if sum(P) != sum(Q):
        raise SupportMismatch(f"supports differ: {P} vs {Q}")
    return SetComposition([x for p in P for q in Q if (x := p & q)])


def restrict(P: SetComposition, X) -> SetComposition:
    X = as_mask(X)
    if X & ~P.support:
        raise SupportMismatch(f"{sorted(bits(X))} is not contained in the support of {P}")
    return SetComposition([x for p in P if (x := p & X)])


def refinement(Q: SetComposition, P: SetComposition) -> SetComposition | None:
    """The index composition I with Q_{I_j} a composition of P_j, if Q refines P."""
    if sum(P) != sum(Q):
        raise SupportMismatch(f"supports differ: {Q} vs {P}")
    idx = [0] * len(P)
    for i, q in enumerate(Q, 1):
        for j, p in enumerate(P):
            if not q & ~p:
                idx[j] |= 1 << i
                break
        else:
            return None
    return SetComposition(idx)


def dagger_refinement(Q: SetComposition, P: SetComposition) -> SetComposition | None:
    """Like :func:`refinement`, but each piece must end in the block holding min P_j."""
    I = refinement(Q, P)
    if I is None:
        return None
    for p, ij in zip(P, I):
        last = ij.bit_length() - 1
        if not Q[last - 1] & (p & -p):
            return None
    return I


def refines(Q: SetComposition, P: SetComposition) -> bool:
    return refinement(Q, P) is not None


def rearranges(Q: SetComposition, P: SetComposition) -> bool:
    return len(Q) == len(P) and set(Q) == set(P)


def piece(Q: SetComposition, index_mask: int) -> SetComposition:
    """Q_I: the blocks of Q with (1-based) indices in I, in increasing order."""
    return SetComposition([Q[i - 1] for i in bits(index_mask)])


def coarsen(Q: SetComposition, I: SetComposition) -> SetComposition:
    """Merge blocks of Q along the index composition I."""
    return SetComposition([sum(Q[i - 1] for i in bits(ij)) for ij in I])


# -- set partitions -----------------------------------------------------------

class SetPartition(tuple):
    """Unordered set partition, stored as block masks sorted by their minima."""

    __slots__ = ()

    @classmethod
    def from_blocks(cls, blocks) -> "SetPartition":
        return support_of(SetComposition.from_blocks(blocks))

    @property
    def blocks(self):
        return tuple(bits(m) for m in self)

    def as_composition(self) -> SetComposition:
        return SetComposition(self)

    def sort_key(self):
        return (len(self), tuple(bits(m) for m in self))

    def __str__(self) -> str:
        return format_sc(self)

    def __repr__(self) -> str:
        return f"SP({format_sc(self)!r})"


def support_of(P: SetComposition) -> SetPartition:
    """Forget the order of the blocks."""
    return SetPartition(sorted(P, key=lambda m: m & -m))


def meet(S: SetPartition, T: SetPartition) -> SetPartition:
    """Greatest lower bound in the partition lattice (common refinement)."""
    return support_of(SetComposition([x for s in S for t in T if (x := s & t)]))


# -- enumeration --------------------------------------------------------------

def _ordered_partitions(mask: int):
    if mask == 0:
        yield ()
        return
    for first in submasks(mask):
        if first == 0:
            continue
        for rest in _ordered_partitions(mask ^ first):
            yield (first,) + rest


def _set_partitions(mask: int):
    """Set partitions in canonical block order (block containing min first)."""
    if mask == 0:
        yield ()
        return
    m = mask & -mask
    rest = mask ^ m
    for extra in submasks(rest):
        block = m | extra
        for tail in _set_partitions(rest ^ extra):
            yield (block,) + tail


@lru_cache(maxsize=64)
def _enumerate(mask: int, which: str) -> tuple[SetComposition, ...]:
    if which == "canonical":
        if mask == 0:
            return ()
        items = [SetComposition(p) for p in _set_partitions(mask)]
    else:
        items = [SetComposition(p) for p in _ordered_partitions(mask)]
        if mask == 0:
            return tuple(items) if which == "all" else ()
        m = mask & -mask
        if which == "star":
            items = [P for P in items if P[0] & m]
        elif which == "dagger":
            items = [P for P in items if P[-1] & m]
    items.sort(key=SetComposition.sort_key)
    return tuple(items)


def enumerate_sc(A, filter: str = "all", cap: int | None = None) -> list[SetComposition]:
    """All set compositions of ``A`` (mask or iterable), optionally filtered.

    ``canonical``: block minima increasing; ``star``: min A in the first block;
    ``dagger``: min A in the last block.
    """
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}")
    mask = as_mask(A)
    _check_cap(mask.bit_count(), cap)
    return list(_enumerate(mask, filter))


def rearrangements(Q: SetComposition) -> list[SetComposition]:
    """All Q' with Q' a reordering of the blocks of Q, in enumeration order."""
    out = {SetComposition(p) for p in permutations(Q)}
    return sorted(out, key=SetComposition.sort_key)


def set_partitions(n: int, cap: int | None = None) -> list[SetPartition]:
    """Set partitions of [n], in enumeration order."""
    return [SetPartition(P) for P in enumerate_sc(interval(n), "canonical", cap)]


def partition_covers(n: int, cap: int | None = None) -> list[tuple[SetPartition, SetPartition]]:
    """Covering pairs (coarse, fine) of the partition lattice of [n]."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_cap(n, cap)
    pairs = set()
    for fine in enumerate_sc(interval(n), "canonical", cap):
        k = len(fine)
        for i in range(k):
            for j in range(i + 1, k):
                merged = [b for t, b in enumerate(fine) if t != i and t != j]
                merged.append(fine[i] | fine[j])
                coarse = support_of(SetComposition(merged))
                pairs.add((coarse, SetPartition(fine)))
    return sorted(pairs, key=lambda pr: (pr[0].sort_key(), pr[1].sort_key()))


# -- integer compositions and partitions -------------------------------------

def compositions(n: int) -> list[tuple[int, ...]]:
    """Compositions of n, ordered by length then lexicographically."""
    out = []

    def rec(rest, prefix):
        if rest == 0:
            out.append(tuple(prefix))
            return
        for part in range(1, rest + 1):
            prefix.append(part)
            rec(rest - part, prefix)
            prefix.pop()

    if n == 0:
        return [()]
    rec(n, [])
    out.sort(key=lambda q: (len(q), q))
    return out


def partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of n (weakly decreasing), ordered by length then lexicographically."""
    return [q for q in compositions(n) if all(a >= b for a, b in zip(q, q[1:]))]


def partition_of(q) -> tuple[int, ...]:
    return tuple(sorted(q, reverse=True))


def is_p_regular(r, p: int) -> bool:
    """No part of r occurs p or more times."""
    return all(r.count(x) < p for x in set(r))


def stabilizer_order(q) -> int:
    """s_q = q_1! ... q_k!."""
    out = 1
    for part in q:
        out *= factorial(part)
    return out


def multiplicity_factor(q) -> int:
    """c_q = product of m_i! over the multiplicities m_i of the parts of q."""
    out = 1
    for x in set(q):
        out *= factorial(list(q).count(x))
    return out


@lru_cache(maxsize=None)
def ordered_bell(n: int) -> int:
    """Number of set compositions of an n-set (Fubini numbers)."""
    if n == 0:
        return 1
    return sum(comb(n, k) * ordered_bell(n - k) for k in range(1, n + 1))


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    if n == 0:
        return 1
    return sum(comb(n - 1, k) * bell(k) for k in range(n))
