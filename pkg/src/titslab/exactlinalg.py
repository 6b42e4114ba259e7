"""Exact linear algebra over the rationals and over prime fields.

Vectors are sparse ``dict`` objects mapping a column index to a nonzero
scalar.  Over Q scalars are ``int`` or ``fractions.Fraction``; over GF(p) they
are ints in ``range(p)``.  A :class:`Subspace` keeps its basis in reduced row
echelon form, which is canonical, so two subspaces are equal exactly when
their rows are.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .errors import CharacteristicMismatch

Vector = dict


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Q (characteristic 0) or GF(p)."""

    __slots__ = ("char",)

    def __init__(self, char: int = 0):
        if char != 0 and not _is_prime(char):
            raise ValueError(f"characteristic must be 0 or a prime, got {char}")
        self.char = char

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return "QQ" if self.char == 0 else f"GF({self.char})"

    def __call__(self, x):
        """Coerce an int, Fraction or decimal string into this field."""
        if isinstance(x, str):
            x = Fraction(x)
        p = self.char
        if p == 0:
            if isinstance(x, Fraction) and x.denominator == 1:
                return x.numerator
            if isinstance(x, (int, Fraction)):
                return x
            raise TypeError(f"cannot coerce {x!r} into QQ")
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    def reduce(self, x):
        """Canonical representative of an arithmetic result."""
        if self.char:
            return x % self.char
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def inv(self, a):
        if self.char:
            return pow(a, -1, self.char)
        if isinstance(a, int):
            if a in (1, -1):
                return a
            return Fraction(1, a)
        return 1 / a

    def div(self, a, b):
        if self.char:
            return a * pow(b, -1, self.char) % self.char
        if isinstance(a, int) and isinstance(b, int):
            q, r = divmod(a, b)
            return q if r == 0 else Fraction(a, b)
        return self.reduce(Fraction(a) / b)


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def _check_same(*fields):
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise CharacteristicMismatch(f"{first!r} vs {f!r}")


def normalize_vector(v: Mapping[int, object], field: Field) -> Vector:
    out = {}
    for c, a in v.items():
        a = field(a)
        if a:
            out[c] = a
    return out


def _axpy(v: Vector, a, w: Mapping, p: int) -> None:
    """v += a * w in place, dropping zeros."""
    if p:
        for c, b in w.items():
            x = (v.get(c, 0) + a * b) % p
            if x:
                v[c] = x
            else:
                v.pop(c, None)
    else:
        for c, b in w.items():
            x = v.get(c, 0) + a * b
            if x:
                v[c] = x
            else:
                v.pop(c, None)


class Subspace:
    """A subspace of F^ncols held in reduced row echelon form.

    ``ambient`` is an opaque label naming the coordinate system (for example
    the enumeration of set compositions the columns refer to); binary
    operations refuse to mix ambients.
    """

    __slots__ = ("ncols", "field", "ambient", "_rows")

    def __init__(self, ncols: int, field: Field = QQ, ambient: Hashable = None):
        self.ncols = ncols
        self.field = field
        self.ambient = ambient
        self._rows: dict[int, Vector] = {}

    @classmethod
    def span(cls, vectors: Iterable[Mapping[int, object]], ncols: int,
             field: Field = QQ, ambient: Hashable = None) -> "Subspace":
        S = cls(ncols, field, ambient)
        for v in vectors:
            S.add(v)
        return S

    def copy(self) -> "Subspace":
        S = Subspace(self.ncols, self.field, self.ambient)
        S._rows = {c: dict(r) for c, r in self._rows.items()}
        return S

    # -- building -----------------------------------------------------------

    def reduce(self, v: Mapping[int, object]) -> Vector:
        """The residue of ``v`` modulo this subspace (a fresh dict)."""
        field = self.field
        p = field.char
        w = {c: a for c, a in v.items() if a}
        if p:
            w = {c: a % p for c, a in w.items() if a % p}
        rows = self._rows
        # rows are fully reduced: subtracting one never touches another pivot
        for c in [c for c in w if c in rows]:
            a = w.get(c)
            if a:
                _axpy(w, -a, rows[c], p)
        if not p:
            for c, a in w.items():
                if isinstance(a, Fraction) and a.denominator == 1:
                    w[c] = a.numerator
        return w

    def add(self, v: Mapping[int, object]) -> bool:
        """Extend the span by ``v``; returns True when the dimension grew."""
        w = self.reduce(v)
        if not w:
            return False
        piv = min(w)
        field = self.field
        p = field.char
        lead = w[piv]
        if lead != 1:
            inv = field.inv(lead)
            w = {c: field.reduce(a * inv) for c, a in w.items()}
        for row in self._rows.values():
            a = row.get(piv)
            if a:
                _axpy(row, -a, w, p)
                if not p:
                    for c, b in row.items():
                        if isinstance(b, Fraction) and b.denominator == 1:
                            row[c] = b.numerator
        self._rows[piv] = w
        return True

    def extend(self, vectors: Iterable[Mapping[int, object]]) -> int:
        return sum(self.add(v) for v in vectors)

    # -- queries ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def basis(self) -> list[Vector]:
        return [dict(self._rows[c]) for c in sorted(self._rows)]

    def contains(self, v: Mapping[int, object]) -> bool:
        return not self.reduce(v)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def _check(self, other: "Subspace") -> None:
        if other.ncols != self.ncols or other.ambient != self.ambient:
            raise ValueError(f"ambient mismatch: {self.ambient!r}/{self.ncols} "
                             f"vs {other.ambient!r}/{other.ncols}")
        _check_same(self.field, other.field)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        self._check(other)
        return self._rows == other._rows

    __hash__ = None

    def issubspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(r) for r in self._rows.values())

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        S = self.copy()
        S.extend(other._rows.values())
        return S

    __add__ = sum

    def intersection(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: row reduce [u | u] and [v | 0]; rows with left half zero."""
        self._check(other)
        n = self.ncols
        big = Subspace(2 * n, self.field)
        for u in self._rows.values():
            row = dict(u)
            row.update({c + n: a for c, a in u.items()})
            big.add(row)
        for v in other._rows.values():
            big.add(v)
        out = Subspace(n, self.field, self.ambient)
        for piv, row in big._rows.items():
            if piv >= n:
                out.add({c - n: a for c, a in row.items()})
        return out

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ncols={self.ncols}, field={self.field!r})"


def rref(rows: Iterable[Mapping[int, object]], ncols: int, field: Field = QQ,
         ambient: Hashable = None) -> tuple[int, Subspace]:
    """Rank and canonical row space of a sparse matrix."""
    S = Subspace.span(rows, ncols, field, ambient)
    return S.dim, S


def rank(rows: Iterable[Mapping[int, object]], ncols: int, field: Field = QQ) -> int:
    return Subspace.span(rows, ncols, field).dim


def kernel(images: list[Mapping[int, object]], ncols: int, field: Field = QQ,
           ambient: Hashable = None) -> Subspace:
    """Left kernel: all c with sum_i c_i * images[i] == 0, images living in F^ncols."""
    m = len(images)
    big = Subspace(ncols + m, field)
    for i, img in enumerate(images):
        row = dict(img)
        row[ncols + i] = 1
        big.add(row)
    out = Subspace(m, field, ambient)
    for piv, row in big._rows.items():
        if piv >= ncols:
            out.add({c - ncols: a for c, a in row.items()})
    return out


def direct_sum(spaces: Iterable[Subspace], ncols: int, field: Field = QQ,
               ambient: Hashable = None) -> Subspace:
    """Sum of subspaces with pairwise disjoint column supports (no elimination needed)."""
    out = Subspace(ncols, field, ambient)
    used: set[int] = set()
    for S in spaces:
        cols = set()
        for row in S._rows.values():
            cols.update(row)
        if cols & used:
            raise ValueError("direct_sum requires disjoint column supports")
        used |= cols
        out._rows.update((c, dict(r)) for c, r in S._rows.items())
    return out


def subspace_query(U: Subspace, V: Subspace | None = None, v=None, kind: str = "dim"):
    """Dispatch for the basic subspace questions."""
    if kind == "dim":
        return U.dim
    if kind == "contains_vector":
        return U.contains(v)
    if V is None:
        raise ValueError(f"{kind} needs a second subspace")
    if kind == "equal":
        return U == V
    if kind == "intersection":
        return U.intersection(V)
    if kind == "sum":
        return U.sum(V)
    raise ValueError(f"unknown query {kind!r}")
