"""Elements of the Solomon-Tits algebra and its three structures.

An :class:`Element` is a finite linear combination of set compositions.  It
carries the field it lives over, and binary operations refuse to mix fields.
Products:

* ``wedge`` (``f & g``): the Tits product, zero across different supports;
* ``vee`` (``f | g``): concatenation, zero on overlapping supports;
* ``coproduct``: restriction to all complementary pairs of subsets.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .errors import CharacteristicMismatch, SupportMismatch
from .exactlinalg import QQ, Field
from .setcomp import (
    EMPTY,
    SetComposition,
    as_mask,
    bits,
    enumerate_sc,
    format_sc,
    parse_sc,
    submasks,
    support_of,
)


class _Combination:
    """Sparse linear combination over a field; subclasses fix the label type."""

    __slots__ = ("_terms", "field")

    def __init__(self, terms: Mapping | Iterable = (), field: Field = QQ):
        self.field = field
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for label, c in items:
            acc[label] = acc.get(label, 0) + c
        self._terms = {k: v for k, c in acc.items() if (v := field(c))}

    @classmethod
    def _raw(cls, terms: dict, field: Field):
        """Wrap an already canonical dict without copying or coercing."""
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.field = field
        return obj

    @classmethod
    def zero(cls, field: Field = QQ):
        return cls._raw({}, field)

    # -- mapping protocol ----------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __getitem__(self, label):
        return self._terms.get(label, 0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and not isinstance(other, bool) and other == 0:
            return not self._terms
        if type(other) is not type(self):
            return NotImplemented
        return self.field == other.field and self._terms == other._terms

    __hash__ = None

    # -- linear structure ----------------------------------------------------

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.field != self.field:
            raise CharacteristicMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        red = self.field.reduce
        for k, c in other._terms.items():
            v = red(out.get(k, 0) + c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return self._raw(out, self.field)

    def __neg__(self):
        red = self.field.reduce
        return self._raw({k: red(-c) for k, c in self._terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.field(c)
        if not c:
            return self.zero(self.field)
        red = self.field.reduce
        return self._raw({k: red(c * v) for k, v in self._terms.items()}, self.field)

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __truediv__(self, c):
        return self.scale(self.field.inv(self.field(c)))

    def map_labels(self, fn: Callable):
        """Linear extension of a label map (collisions are summed)."""
        out: dict = {}
        for k, c in self._terms.items():
            k2 = fn(k)
            out[k2] = out.get(k2, 0) + c
        return type(self)(out, self.field)

    def to_field(self, field: Field):
        return type(self)(self._terms, field)


def _sort_items(items):
    return sorted(items, key=lambda kv: kv[0].sort_key())


class Element(_Combination):
    """A linear combination of set compositions (possibly of mixed supports)."""

    __slots__ = ()

    @classmethod
    def basis(cls, P: SetComposition, field: Field = QQ) -> "Element":
        return cls._raw({P: 1}, field)

    @classmethod
    def parse(cls, text: str, field: Field = QQ) -> "Element":
        return cls.basis(parse_sc(text), field)

    def supports(self) -> set[int]:
        return {P.support for P in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.supports()) <= 1

    def support(self) -> int:
        """The common support mask of a homogeneous element."""
        s = self.supports()
        if len(s) > 1:
            raise SupportMismatch("element is not homogeneous")
        return s.pop() if s else 0

    def __and__(self, other: "Element") -> "Element":
        return wedge(self, other)

    def __or__(self, other: "Element") -> "Element":
        return vee(self, other)

    def __repr__(self) -> str:
        if not self._terms:
            return "Element(0)"
        parts = []
        for P, c in _sort_items(self._terms.items()):
            parts.append(f"{c}*({format_sc(P)})")
        return "Element(" + " + ".join(parts) + ")"

    # -- serialization -------------------------------------------------------

    def to_json_obj(self) -> dict:
        terms = []
        for P, c in _sort_items(self._terms.items()):
            c = Fraction(c)
            terms.append({"sc": format_sc(P), "num": str(c.numerator), "den": str(c.denominator)})
        return {"char": self.field.char, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Element":
        field = Field(int(obj["char"]))
        terms = [(parse_sc(t["sc"]), Fraction(int(t["num"]), int(t["den"]))) for t in obj["terms"]]
        return cls(terms, field)

    @classmethod
    def from_json(cls, text: str) -> "Element":
        return cls.from_json_obj(json.loads(text))


class TensorElement(_Combination):
    """A linear combination of pairs of set compositions."""

    __slots__ = ()

    def __repr__(self) -> str:
        parts = [f"{c}*({format_sc(a)})⊗({format_sc(b)})"
                 for (a, b), c in sorted(self._terms.items(),
                                         key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))]
        return "TensorElement(" + (" + ".join(parts) or "0") + ")"


def _same_field(f, g) -> Field:
    if f.field != g.field:
        raise CharacteristicMismatch(f"{f.field!r} vs {g.field!r}")
    return f.field


def _bilinear(f, g, op, cls=Element) -> _Combination:
    field = _same_field(f, g)
    p = field.char
    out: dict = {}
    for a, x in f._terms.items():
        for b, y in g._terms.items():
            r = op(a, b)
            if r is not None:
                out[r] = out.get(r, 0) + x * y
    if p:
        return cls._raw({k: v % p for k, v in out.items() if v % p}, field)
    return cls._raw({k: field.reduce(v) for k, v in out.items() if v}, field)


def _wedge_sc(P: SetComposition, Q: SetComposition):
    if sum(P) != sum(Q):
        return None
    return SetComposition([x for p in P for q in Q if (x := p & q)])


def _vee_sc(P: SetComposition, Q: SetComposition):
    if sum(P) & sum(Q):
        return None
    return SetComposition(tuple.__add__(P, Q))


def wedge(f: Element, g: Element) -> Element:
    return _bilinear(f, g, _wedge_sc)


def vee(f: Element, g: Element) -> Element:
    return _bilinear(f, g, _vee_sc)


def lie_bracket(f: Element, g: Element) -> Element:
    return vee(f, g) - vee(g, f)


def tensor(f: Element, g: Element) -> TensorElement:
    return _bilinear(f, g, lambda a, b: (a, b), TensorElement)


def coproduct(f: Element) -> TensorElement:
    out: dict = {}
    for P, c in f._terms.items():
        A = P.support
        for X in submasks(A):
            Y = A ^ X
            key = (SetComposition([x for p in P if (x := p & X)]),
                   SetComposition([y for p in P if (y := p & Y)]))
            out[key] = out.get(key, 0) + c
    return TensorElement(out, f.field)


def wedge2(s: TensorElement, t: TensorElement) -> TensorElement:
    """(a ⊗ b) ∧₂ (c ⊗ d) = (a ∧ c) ⊗ (b ∧ d)."""
    def op(x, y):
        a = _wedge_sc(x[0], y[0])
        b = _wedge_sc(x[1], y[1]) if a is not None else None
        return None if b is None else (a, b)
    return _bilinear(s, t, op, TensorElement)


def vee2(s: TensorElement, t: TensorElement) -> TensorElement:
    """(a ⊗ b) ∨₂ (c ⊗ d) = (a ∨ c) ⊗ (b ∨ d)."""
    def op(x, y):
        a = _vee_sc(x[0], y[0])
        b = _vee_sc(x[1], y[1]) if a is not None else None
        return None if b is None else (a, b)
    return _bilinear(s, t, op, TensorElement)


def m_vee(t: TensorElement) -> Element:
    """Multiply out a tensor with the concatenation product."""
    out: dict = {}
    for (a, b), c in t._terms.items():
        r = _vee_sc(a, b)
        if r is not None:
            out[r] = out.get(r, 0) + c
    return Element(out, t.field)


def is_delta_primitive(f: Element) -> bool:
    field = f.field
    expected = tensor(f, Element.basis(EMPTY, field)) + tensor(Element.basis(EMPTY, field), f)
    return coproduct(f) == expected


# -- Dynkin mapping -------------------------------------------------------------

@lru_cache(maxsize=None)
def dynkin_terms(Q: SetComposition) -> tuple[tuple[SetComposition, int], ...]:
    """Right-normed bracketing Q_1 ∘ (Q_2 ∘ (... ∘ Q_k)) as integer terms."""
    if len(Q) <= 1:
        return ((Q, 1),)
    head = SetComposition(Q[:1])
    out: dict = {}
    for R, c in dynkin_terms(SetComposition(Q[1:])):
        a = head.concat(R)
        b = R.concat(head)
        out[a] = out.get(a, 0) + c
        out[b] = out.get(b, 0) - c
    return tuple((k, v) for k, v in out.items() if v)


def dynkin(f: Element) -> Element:
    out: dict = {}
    for Q, c in f._terms.items():
        for R, d in dynkin_terms(Q):
            out[R] = out.get(R, 0) + c * d
    return Element(out, f.field)


# -- support map ----------------------------------------------------------------

def support_image(f: Element) -> dict:
    """Linear pushforward to set partitions; zero exactly on the radical."""
    out: dict = {}
    for P, c in f._terms.items():
        S = support_of(P)
        out[S] = out.get(S, 0) + c
    red = f.field
    return {S: v for S, c in out.items() if (v := red(c))}


# -- permutations and the symmetric group action ---------------------------------

Permutation = tuple  # one-line notation (1π, ..., nπ)


def compose(pi: Permutation, sigma: Permutation) -> Permutation:
    """The product πσ: apply π first, then σ, so that x(πσ) = (xπ)σ."""
    return tuple(sigma[x - 1] for x in pi)


def inverse(pi: Permutation) -> Permutation:
    out = [0] * len(pi)
    for i, x in enumerate(pi, 1):
        out[x - 1] = i
    return tuple(out)


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def act_mask(mask: int, pi: Permutation) -> int:
    out = 0
    for x in bits(mask):
        out |= 1 << pi[x - 1]
    return out


def act_sc(P: SetComposition, pi: Permutation) -> SetComposition:
    return SetComposition([act_mask(m, pi) for m in P])


def act(f: Element, pi: Permutation) -> Element:
    """Right action (P_1, ..., P_l)^π = (P_1π, ..., P_lπ)."""
    n = len(pi)
    limit = ((1 << n) - 1) << 1
    for P in f._terms:
        if P.support & ~limit:
            raise SupportMismatch(f"{P} is not supported in [{n}]")
    return Element._raw({act_sc(P, pi): c for P, c in f._terms.items()}, f.field)


# -- coordinates ----------------------------------------------------------------------

class PiBasis:
    """The enumeration of one support's set compositions, with a product table."""

    _cache: dict = {}

    def __init__(self, A):
        self.mask = as_mask(A)
        self.labels: list[SetComposition] = enumerate_sc(self.mask, "all", cap=max(9, self.mask.bit_count()))
        self.index = {P: i for i, P in enumerate(self.labels)}
        self._table = None

    @classmethod
    def of(cls, A) -> "PiBasis":
        mask = as_mask(A)
        if mask not in cls._cache:
            cls._cache[mask] = cls(mask)
        return cls._cache[mask]

    @property
    def ambient(self):
        return ("pi", self.mask)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def table(self) -> list[list[int]]:
        """table[i][j] is the index of labels[i] ∧ labels[j]."""
        if self._table is None:
            idx = self.index
            labs = self.labels
            self._table = [[idx[SetComposition([x for p in P for q in labs[j] if (x := p & q)])]
                            for j in range(len(labs))] for P in labs]
        return self._table

    def vector(self, f: Element) -> dict[int, object]:
        idx = self.index
        try:
            return {idx[P]: c for P, c in f.items()}
        except KeyError as exc:
            raise SupportMismatch(f"{exc.args[0]} is not a composition of this support") from None

    def element(self, v: Mapping[int, object], field: Field = QQ) -> Element:
        return Element({self.labels[i]: c for i, c in v.items()}, field)

    def multiply(self, u: Mapping[int, object], v: Mapping[int, object], field: Field = QQ) -> dict:
        """Product of two coordinate vectors through the table."""
        tab = self.table
        out: dict = {}
        for i, a in u.items():
            row = tab[i]
            for j, b in v.items():
                k = row[j]
                out[k] = out.get(k, 0) + a * b
        return {k: x for k, c in out.items() if (x := field.reduce(c))}
