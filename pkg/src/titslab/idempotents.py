"""The primitive idempotents e_A, the basis {e_Q}, and their multiplication rule.

``e_A`` is the alternating sum of the set compositions of ``A`` whose first
block contains ``min A``.  For a set composition ``Q`` the basis element
``e_Q`` is the concatenation ``e_{Q_1} ∨ ... ∨ e_{Q_k}``.

Combinations of the ``e_Q`` are kept in their own type, :class:`EComb`, and
only become :class:`~titslab.algebra.Element` values through an explicit
:func:`e_to_pi`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .algebra import Element, _Combination, dynkin_terms, is_delta_primitive, wedge
from .errors import CharacteristicMismatch, SupportMismatch
from .exactlinalg import QQ, Field
from .setcomp import (
    EMPTY,
    SetComposition,
    as_mask,
    dagger_refinement,
    enumerate_sc,
    format_sc,
    piece,
    refines,
)


class EComb(_Combination):
    """A formal linear combination of basis labels e_Q."""

    __slots__ = ()

    @classmethod
    def basis(cls, Q: SetComposition, field: Field = QQ) -> "EComb":
        return cls._raw({Q: 1}, field)

    def expand(self) -> Element:
        return e_to_pi(self)

    def __repr__(self) -> str:
        if not self._terms:
            return "EComb(0)"
        parts = [f"{c}*e({format_sc(Q)})"
                 for Q, c in sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())]
        return "EComb(" + " + ".join(parts) + ")"


# -- expansions ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _atom_terms(mask: int) -> tuple[tuple[SetComposition, int], ...]:
    return tuple((P, -1 if len(P) % 2 == 0 else 1)
                 for P in enumerate_sc(mask, "star", cap=max(9, mask.bit_count())))


def e_atom(A, field: Field = QQ) -> Element:
    """e_A = sum over compositions with min A in the first block of (-1)^(l-1) P."""
    mask = as_mask(A)
    if not mask:
        raise ValueError("e_atom needs a nonempty set")
    return Element(_atom_terms(mask), field)


@lru_cache(maxsize=None)
def _family_terms(Q: SetComposition) -> tuple[tuple[SetComposition, int], ...]:
    if not Q:
        return ((EMPTY, 1),)
    acc: dict = {}
    for combo in product(*(_atom_terms(m) for m in Q)):
        R = SetComposition(tuple(b for P, _ in combo for b in P))
        c = 1
        for _, s in combo:
            c *= s
        acc[R] = acc.get(R, 0) + c
    terms = tuple(sorted(((R, c) for R, c in acc.items() if c), key=lambda t: t[0].sort_key()))
    # e_Q = Q + (strict refinements of Q that are not rearrangements)
    assert terms[0] == (Q, 1), f"leading term of e_{Q} is {terms[0]}"
    for R, _ in terms[1:]:
        assert len(R) > len(Q) and refines(R, Q), f"e_{Q} is not triangular at {R}"
    return terms


@dataclass(frozen=True)
class EBasisElement:
    """The basis element e_Q; its expansion is computed on first use and cached."""

    label: SetComposition
    field: Field = QQ

    @property
    def expansion(self) -> Element:
        return Element(_family_terms(self.label), self.field)

    def __str__(self) -> str:
        return f"e({format_sc(self.label)})"


def e_family(Q: SetComposition, field: Field = QQ) -> EBasisElement:
    return EBasisElement(Q, field)


def e_expansion(Q: SetComposition, field: Field = QQ) -> Element:
    return Element(_family_terms(Q), field)


def e_to_pi(f: EComb) -> Element:
    field = f.field
    out: dict = {}
    for Q, c in f.items():
        for R, d in _family_terms(Q):
            out[R] = out.get(R, 0) + c * d
    return Element(out, field)


def pi_to_e(f: Element) -> EComb:
    """Invert the triangular change of basis, shortest labels first."""
    if not f.is_homogeneous():
        raise SupportMismatch("pi_to_e needs a homogeneous element")
    field = f.field
    red = field.reduce
    rest = dict(f.items())
    out: dict = {}
    while rest:
        length = min(len(P) for P in rest)
        for Q in [P for P in rest if len(P) == length]:
            c = rest.pop(Q)
            out[Q] = c
            for R, d in _family_terms(Q)[1:]:
                v = red(rest.get(R, 0) - c * d)
                if v:
                    rest[R] = v
                else:
                    rest.pop(R, None)
    return EComb(out, field)


def change_basis(f, direction: str):
    if direction == "pi_to_e":
        return pi_to_e(f)
    if direction == "e_to_pi":
        return e_to_pi(f)
    raise ValueError(f"unknown direction {direction!r}")


# -- the multiplication rule -----------------------------------------------------------

@lru_cache(maxsize=1 << 18)
def _e_product_terms(P: SetComposition, Q: SetComposition) -> tuple[tuple[SetComposition, int], ...]:
    I = dagger_refinement(Q, P)
    if I is None:
        return ()
    pieces = [dynkin_terms(piece(Q, ij)) for ij in I]
    acc: dict = {}
    for combo in product(*pieces):
        R = SetComposition(tuple(b for S, _ in combo for b in S))
        c = 1
        for _, d in combo:
            c *= d
        acc[R] = acc.get(R, 0) + c
    return tuple((R, c) for R, c in acc.items() if c)


def e_multiply(P: SetComposition, Q: SetComposition, field: Field = QQ) -> EComb:
    """e_P ∧ e_Q in the e-basis, by the dagger-refinement rule."""
    if P.support != Q.support:
        raise SupportMismatch(f"supports differ: {P} vs {Q}")
    return EComb(_e_product_terms(P, Q), field)


def e_wedge(f: EComb, g: EComb) -> EComb:
    """Bilinear extension of :func:`e_multiply` to formal e-combinations."""
    if f.field != g.field:
        raise CharacteristicMismatch(f"{f.field!r} vs {g.field!r}")
    field = f.field
    out: dict = {}
    for P, a in f.items():
        for Q, b in g.items():
            if P.support != Q.support:
                continue
            for R, c in _e_product_terms(P, Q):
                out[R] = out.get(R, 0) + a * b * c
    return EComb(out, field)


def naive_e_multiply(P: SetComposition, Q: SetComposition, field: Field = QQ) -> EComb:
    """e_P ∧ e_Q by expanding both factors and multiplying in the Π basis."""
    return pi_to_e(wedge(e_expansion(P, field), e_expansion(Q, field)))


# -- certification -------------------------------------------------------------------

@dataclass(frozen=True)
class PrimitivityReport:
    is_idempotent: bool
    is_delta_primitive: bool
    coeff_of_full_block: object


def primitivity_report(f: Element) -> PrimitivityReport:
    if not f.is_homogeneous():
        raise SupportMismatch("primitivity_report needs a homogeneous element")
    A = f.support()
    full = SetComposition((A,)) if A else EMPTY
    return PrimitivityReport(
        is_idempotent=wedge(f, f) == f,
        is_delta_primitive=is_delta_primitive(f),
        coeff_of_full_block=f[full],
    )


def complete_system(A, field: Field = QQ) -> list[SetComposition]:
    """The labels T in canonical order whose e_T form a complete orthogonal system."""
    return enumerate_sc(as_mask(A), "canonical", cap=max(9, as_mask(A).bit_count()))
