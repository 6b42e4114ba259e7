"""The invariant subalgebra B_n and the Solomon descent algebra.

Invariant elements are held on the basis X^q (the sum of all set
compositions of [n] of type q) and multiplied through cached structure
constants.  Group algebra elements of S_n are linear combinations of
permutations in one-line notation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from math import factorial, gcd

from .algebra import (
    Element,
    PiBasis,
    _Combination,
    act,
    compose,
    is_delta_primitive,
    support_image,
    vee,
    wedge,
)
from .errors import CapExceeded, CharacteristicMismatch, SupportMismatch
from .exactlinalg import QQ, Field, Subspace, kernel
from .idempotents import EComb, _e_product_terms, e_atom, e_expansion, pi_to_e
from .modstruct import e_coords_to_pi, lambda_basis, loewy_filtration
from .setcomp import (
    SetComposition,
    _check_cap,
    as_mask,
    bits,
    compositions,
    enumerate_sc,
    interval,
    is_p_regular,
    multiplicity_factor,
    partition_of,
    partitions,
    stabilizer_order,
)

DEFAULT_GROUP_CAP = 7

# Found by trying both orders at n <= 5: X^q -> Ξ^q is multiplicative when the
# group product applies the left factor first, x(στ) = (xσ)τ.
GROUP_PRODUCT = "left-first"


def _require_char0(field: Field) -> None:
    if field.char != 0:
        raise CharacteristicMismatch("symmetrization needs characteristic zero")


# -- the X basis --------------------------------------------------------------------

@lru_cache(maxsize=None)
def compositions_by_type(mask: int) -> dict[tuple[int, ...], tuple[SetComposition, ...]]:
    out: dict = {}
    for P in enumerate_sc(mask, "all", cap=max(9, mask.bit_count())):
        out.setdefault(P.type, []).append(P)
    return {q: tuple(v) for q, v in out.items()}


def x_element(q, A=None, field: Field = QQ) -> Element:
    """X^q on the support A (default [n]) as an element of FΠ_A."""
    q = tuple(q)
    mask = interval(sum(q)) if A is None else as_mask(A)
    return Element({P: 1 for P in compositions_by_type(mask).get(q, ())}, field)


class Invariant(_Combination):
    """An element of B_n written on the basis X^q, q a composition of n."""

    __slots__ = ("n",)

    def __init__(self, terms=(), field: Field = QQ, n: int | None = None):
        super().__init__(terms, field)
        if n is None:
            n = sum(next(iter(self._terms))) if self._terms else 0
        self.n = n

    @classmethod
    def _raw(cls, terms, field, n=0):
        obj = super()._raw(terms, field)
        obj.n = n
        return obj

    def __add__(self, other):
        out = super().__add__(other)
        out.n = self.n or other.n
        return out

    def __neg__(self):
        out = super().__neg__()
        out.n = self.n
        return out

    def scale(self, c):
        out = super().scale(c)
        out.n = self.n
        return out

    def element(self) -> Element:
        out: dict = {}
        for q, c in self._terms.items():
            for P in compositions_by_type(interval(self.n))[q]:
                out[P] = c
        return Element(out, self.field)

    def vector(self) -> dict[int, object]:
        idx = composition_index(self.n)
        return {idx[q]: c for q, c in self._terms.items()}

    def __and__(self, other: "Invariant") -> "Invariant":
        return x_wedge(self, other)

    def __repr__(self) -> str:
        parts = [f"{c}*X{q}" for q, c in sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))]
        return "Invariant(" + (" + ".join(parts) or "0") + ")"


def x_basis(q, field: Field = QQ, cap=None) -> Invariant:
    q = tuple(q)
    _check_cap(sum(q), cap)
    return Invariant({q: 1}, field, sum(q))


def identity_invariant(n: int, field: Field = QQ) -> Invariant:
    return Invariant({(n,): 1}, field, n)


@lru_cache(maxsize=None)
def composition_index(n: int) -> dict[tuple[int, ...], int]:
    return {q: i for i, q in enumerate(compositions(n))}


def to_invariant(f: Element, n: int) -> Invariant:
    """Read off X-coordinates, checking that f really is invariant."""
    out: dict = {}
    for q, Ps in compositions_by_type(interval(n)).items():
        cs = {f[P] for P in Ps}
        if len(cs) != 1:
            raise ValueError(f"element is not invariant on type {q}")
        c = cs.pop()
        if c:
            out[q] = c
    extra = [P for P in f if P.support != interval(n)]
    if extra:
        raise SupportMismatch(f"{extra[0]} is not a composition of [{n}]")
    return Invariant(out, f.field, n)


@lru_cache(maxsize=None)
def x_structure(n: int) -> dict:
    """Structure constants: (q, r) -> {t: coefficient of X^t in X^q ∧ X^r}."""
    B = PiBasis.of(interval(n))
    tab = B.table
    types = compositions_by_type(interval(n))
    idx = B.index
    rep = {t: idx[Ps[0]] for t, Ps in types.items()}
    out = {}
    for q, Qs in types.items():
        for r, Rs in types.items():
            counts: dict = {}
            for Q in Qs:
                row = tab[idx[Q]]
                for R in Rs:
                    k = row[idx[R]]
                    counts[k] = counts.get(k, 0) + 1
            res = {t: counts[rep[t]] for t in types if rep[t] in counts}
            assert sum(res[t] * len(types[t]) for t in res) == len(Qs) * len(Rs)
            out[q, r] = res
    return out


def x_wedge(f: Invariant, g: Invariant) -> Invariant:
    if f.field != g.field:
        raise CharacteristicMismatch(f"{f.field!r} vs {g.field!r}")
    n = f.n or g.n
    if f.n and g.n and f.n != g.n:
        raise SupportMismatch("invariants of different degree")
    st = x_structure(n)
    out: dict = {}
    for q, a in f.items():
        for r, b in g.items():
            for t, c in st[q, r].items():
                out[t] = out.get(t, 0) + a * b * c
    return Invariant(out, f.field, n)


# -- symmetrization ------------------------------------------------------------------

def symmetrize(f: Element) -> Element:
    """Sum of f^π over all permutations π of the support of f.

    The orbit sum of a single composition P of type q is s_q times the sum of
    all compositions of the same support and type, since the stabilizer of P
    has order s_q.
    """
    _require_char0(f.field)
    A = f.support()
    types = compositions_by_type(A)
    acc: dict = {}
    for P, c in f.items():
        q = P.type
        acc[q] = acc.get(q, 0) + c * stabilizer_order(q)
    out: dict = {}
    for q, c in acc.items():
        for P in types[q]:
            out[P] = c
    return Element(out, f.field)


def symmetrize_brute(f: Element) -> Element:
    """Orbit sum by summing over every permutation of the support."""
    _require_char0(f.field)
    A = bits(f.support())
    out = Element.zero(f.field)
    for image in permutations(A):
        table = dict(zip(A, image))
        def move(P):
            return SetComposition([sum(1 << table[x] for x in bits(m)) for m in P])
        out = out + f.map_labels(move)
    return out


def omega_atom(A, field: Field = QQ) -> Element:
    """Ω_A = (1/|A|!) · symmetrization of e_A."""
    mask = as_mask(A)
    return symmetrize(e_atom(mask, field)) / factorial(mask.bit_count())


def omega(n: int, field: Field = QQ, cap=None) -> Invariant:
    """Ω_n = sum over q of (-1)^(ℓ(q)-1) q_1 X^q, checked against ē_[n]/(n-1)!."""
    _require_char0(field)
    _check_cap(n, cap)
    direct = Invariant({q: (-1) ** (len(q) - 1) * q[0] for q in compositions(n)}, field, n)
    via_atom = to_invariant(symmetrize(e_atom(interval(n), field)) / factorial(n - 1), n)
    assert direct == via_atom, "the two expressions for Ω_n disagree"
    return direct


def _blocks_of_type(q) -> SetComposition:
    """The composition of [n] with consecutive blocks of sizes q."""
    out, start = [], 1
    for part in q:
        out.append(interval(part) << (start - 1))
        start += part
    return SetComposition(out)


def f_idem(q, Q: SetComposition | None = None, field: Field = QQ, cap=None) -> Invariant:
    """f_q: symmetrization of Ω_{Q_1} ∨ ... ∨ Ω_{Q_k} for a composition Q of type q."""
    _require_char0(field)
    q = tuple(q)
    n = sum(q)
    _check_cap(n, cap)
    if Q is None:
        Q = _blocks_of_type(q)
    if Q.type != q or Q.support != interval(n):
        raise ValueError(f"{Q} is not a composition of [{n}] of type {q}")
    g = Element.basis(SetComposition(()), field)
    for m in Q:
        g = vee(g, omega_atom(m, field))
    return to_invariant(symmetrize(g), n)


# -- radicals -------------------------------------------------------------------------

def solomon_radical(n: int, field: Field = QQ, cap=None) -> Subspace:
    """B_n ∩ ker s in X-coordinates, over the given field."""
    _check_cap(n, cap)
    comps = compositions(n)
    images = []
    col: dict = {}
    for q in comps:
        img = support_image(x_basis(q, field).element())
        row = {}
        for S, c in img.items():
            row[col.setdefault(S, len(col))] = c
        images.append(row)
    return kernel(images, max(len(col), 1), field, ("X", n))


def invariant_rows_to_pi(S: Subspace, n: int) -> Subspace:
    B = PiBasis.of(interval(n))
    comps = compositions(n)
    types = compositions_by_type(interval(n))
    out = Subspace(len(B), S.field, B.ambient)
    for row in S.basis():
        v = {}
        for i, c in row.items():
            for P in types[comps[i]]:
                v[B.index[P]] = c
        out.add(v)
    return out


def x_multiply_vectors(u: dict, v: dict, n: int, field: Field) -> dict:
    comps = compositions(n)
    idx = composition_index(n)
    st = x_structure(n)
    out: dict = {}
    for i, a in u.items():
        for j, b in v.items():
            for t, c in st[comps[i], comps[j]].items():
                k = idx[t]
                out[k] = out.get(k, 0) + a * b * c
    return {k: x for k, c in out.items() if (x := field.reduce(c))}


def solomon_loewy(n: int, field: Field = QQ) -> list[Subspace]:
    """rad^(k) B_n for k = 0, 1, ... until zero, by iterated products, in X-coordinates."""
    m = len(compositions(n))
    whole = Subspace.span(({i: 1} for i in range(m)), m, field, ("X", n))
    rad = solomon_radical(n, field)
    gens = rad.basis()
    out = [whole]
    current = rad
    while current.dim:
        out.append(current)
        nxt = Subspace(m, field, ("X", n))
        for r in gens:
            for s in current.basis():
                nxt.add(x_multiply_vectors(r, s, n, field))
        current = nxt
    out.append(current)
    return out


def loewy_fix_check(n: int, k: int, field: Field = QQ, cap=None) -> bool:
    """rad^(k) B_n equals B_n ∩ rad^(k) FΠ_n (both sides built independently)."""
    _require_char0(field)
    _check_cap(n, cap)
    left_x = _solomon_loewy_cached(n, field.char)
    left = invariant_rows_to_pi(left_x[min(k, len(left_x) - 1)], n)
    layers = _loewy_pi_cached(n, field.char)
    big = layers[min(k, len(layers) - 1)]
    m = len(compositions(n))
    Bn = invariant_rows_to_pi(Subspace.span(({i: 1} for i in range(m)), m, field, ("X", n)), n)
    return left == Bn.intersection(big)


@lru_cache(maxsize=None)
def _solomon_loewy_cached(n, char):
    return solomon_loewy(n, Field(char))


@lru_cache(maxsize=None)
def _loewy_pi_cached(n, char):
    field = Field(char)
    return [e_coords_to_pi(L.space, interval(n), field) for L in loewy_filtration(interval(n), field=field)]


# -- group algebra and the descent algebra ------------------------------------------------

class GroupAlgebraElement(_Combination):
    """A linear combination of permutations of [n] (one-line notation)."""

    __slots__ = ()

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return group_product(self, other)

    def to_json_obj(self) -> dict:
        return {"char": self.field.char,
                "terms": [{"perm": list(p), "num": str(Fraction(c).numerator),
                           "den": str(Fraction(c).denominator)}
                          for p, c in sorted(self._terms.items())]}

    def __repr__(self) -> str:
        parts = [f"{c}*[{''.join(map(str, p))}]" for p, c in sorted(self._terms.items())]
        return "GroupAlgebraElement(" + (" + ".join(parts) or "0") + ")"


def group_product(f: GroupAlgebraElement, g: GroupAlgebraElement,
                  convention: str = GROUP_PRODUCT) -> GroupAlgebraElement:
    """Convolution; ``left-first`` means x(στ) = (xσ)τ, ``right-first`` the opposite."""
    if f.field != g.field:
        raise CharacteristicMismatch(f"{f.field!r} vs {g.field!r}")
    mul = compose if convention == "left-first" else (lambda a, b: compose(b, a))
    out: dict = {}
    for a, x in f.items():
        for b, y in g.items():
            k = mul(a, b)
            out[k] = out.get(k, 0) + x * y
    return GroupAlgebraElement(out, f.field)


def _young_subgroup(q) -> list[tuple[int, ...]]:
    blocks, start = [], 1
    for part in q:
        blocks.append(list(range(start, start + part)))
        start += part
    out = []
    for perms in product(*(permutations(b) for b in blocks)):
        out.append(tuple(x for p in perms for x in p))
    return out


def inversions(pi) -> int:
    return sum(1 for i, j in combinations(range(len(pi)), 2) if pi[i] > pi[j])


def _check_group_cap(n: int, cap) -> None:
    limit = DEFAULT_GROUP_CAP if cap is None else cap
    if n > limit:
        raise CapExceeded(f"n = {n} exceeds the group cap {limit}")


def coset_reps_brute(q, cap=None) -> list[tuple[int, ...]]:
    """Minimal-length elements of the right cosets S_q σ, found by brute force."""
    n = sum(q)
    _check_group_cap(n, cap)
    young = _young_subgroup(q)
    seen = set()
    reps = []
    for sigma in permutations(range(1, n + 1)):
        if sigma in seen:
            continue
        coset = [compose(pi, sigma) for pi in young]
        seen.update(coset)
        reps.append(min(coset, key=lambda w: (inversions(w), w)))
    return sorted(reps)


def coset_reps_direct(q, cap=None) -> list[tuple[int, ...]]:
    """Permutations whose one-line notation increases on each position block of q."""
    n = sum(q)
    _check_group_cap(n, cap)
    cuts = descent_set_of(q)
    return sorted(w for w in permutations(range(1, n + 1)) if descents(w) <= cuts)


def coset_reps(q, field: Field = QQ, cap=None) -> GroupAlgebraElement:
    """Ξ^q, the sum of the minimal right coset representatives of S_q."""
    return GroupAlgebraElement({w: 1 for w in coset_reps_direct(tuple(q), cap)}, field)


def descents(w) -> frozenset[int]:
    return frozenset(i for i in range(1, len(w)) if w[i - 1] > w[i])


def descent_set_of(q) -> frozenset[int]:
    out, s = set(), 0
    for part in q[:-1]:
        s += part
        out.add(s)
    return frozenset(out)


def composition_of_set(S, n: int) -> tuple[int, ...]:
    cuts = [0] + sorted(S) + [n]
    return tuple(b - a for a, b in zip(cuts, cuts[1:]))


def xi_coordinates(g: GroupAlgebraElement, n: int) -> dict[tuple[int, ...], object] | None:
    """Coordinates on the Ξ basis, or None when g is not in the descent algebra."""
    by_set: dict = {}
    for w in permutations(range(1, n + 1)):
        by_set.setdefault(descents(w), set()).add(g[w])
    a = {}
    for S, vals in by_set.items():
        if len(vals) != 1:
            return None
        a[S] = vals.pop()
    out = {}
    for T in a:
        b = 0
        for S in a:
            if T <= S:
                b += (-1) ** (len(S) - len(T)) * a[S]
        if b:
            out[composition_of_set(T, n)] = b
    return out


@dataclass
class BidigareReport:
    n: int
    convention: str
    multiplicative: bool
    pairs_checked: int
    dimension: int


def bidigare_check(n: int, cap=None, conventions=("left-first", "right-first")) -> BidigareReport:
    """Check that X^q -> Ξ^q is multiplicative, trying the product conventions in turn."""
    _check_group_cap(n, cap)
    comps = compositions(n)
    xi = {q: coset_reps(q) for q in comps}
    # Ξ^q must read back as the single coordinate q, so the Ξ^q form a basis
    assert all(xi_coordinates(xi[q], n) == {q: 1} for q in comps)
    st = x_structure(n)
    for conv in conventions:
        ok = True
        for q in comps:
            for r in comps:
                prod = xi_coordinates(group_product(xi[q], xi[r], conv), n)
                if prod != st[q, r]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return BidigareReport(n, conv, True, len(comps) ** 2, len(comps))
    raise AssertionError(f"X^q -> Ξ^q is not multiplicative under the tried conventions at n = {n}")


def omega_group(n: int) -> GroupAlgebraElement:
    """ω_n = sum over q of (-1)^(ℓ(q)-1) q_1 Ξ^q."""
    out = GroupAlgebraElement.zero(QQ)
    for q in compositions(n):
        out = out + ((-1) ** (len(q) - 1) * q[0]) * coset_reps(q)
    return out


# -- Lie idempotents ---------------------------------------------------------------------

def lie_idempotent_check(E: Invariant, n: int | None = None) -> bool:
    """Ω_n ∧ E = n E and E ∧ Ω_n = Ω_n."""
    _require_char0(E.field)
    n = n or E.n
    om = omega(n, E.field)
    return x_wedge(om, E) == E.scale(n) and x_wedge(E, om) == om


def delta_primitive_idempotent_check(E: Invariant) -> bool:
    return x_wedge(E, E) == E and is_delta_primitive(E.element())


# -- block permutations ------------------------------------------------------------------

def _order_preserving(src: int, dst: int) -> dict[int, int]:
    return dict(zip(bits(src), bits(dst)))


@dataclass(frozen=True)
class BlockSymmetrizer:
    """The group G_Q of block permutations of Q and the averaging operator α_Q."""

    base: SetComposition
    elements: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def n(self) -> int:
        return self.base.support.bit_length() - 1

    def is_member(self, pi) -> bool:
        """Q^π is a rearrangement of Q and π increases on every block."""
        Q = self.base
        moved = [sum(1 << pi[x - 1] for x in bits(m)) for m in Q]
        if set(moved) != set(Q):
            return False
        return all(all(pi[a - 1] < pi[b - 1] for a, b in zip(bits(m), bits(m)[1:])) for m in Q)

    def transversal(self) -> list[tuple[int, ...]]:
        """One σ from each right coset G_Q σ."""
        seen = set()
        reps = []
        for sigma in permutations(range(1, self.n + 1)):
            if sigma in seen:
                continue
            seen.update(compose(g, sigma) for g in self.elements)
            reps.append(sigma)
        return reps

    def average_labels(self, f: EComb) -> dict[SetComposition, Fraction]:
        """α_Q on e-coordinates, using e_{Q'}^π = e_{Q'^π} for block permutations π."""
        out: dict = {}
        k = Fraction(1, self.order)
        for Q, c in f.items():
            for pi in self.elements:
                R = SetComposition([sum(1 << pi[x - 1] for x in bits(m)) for m in Q])
                out[R] = out.get(R, 0) + c * k
        return {R: c for R, c in out.items() if c}

    def average(self, f: Element) -> Element:
        out = Element.zero(f.field)
        for pi in self.elements:
            out = out + act(f, pi)
        return out / self.order


def block_symmetrizer(Q: SetComposition, cap=None) -> BlockSymmetrizer:
    n = Q.support.bit_length() - 1
    if Q.support != interval(n):
        raise SupportMismatch(f"{Q} is not a composition of [{n}]")
    _check_cap(n, cap)
    k = len(Q)
    elements = []
    for perm in permutations(range(k)):
        if any(Q[i].bit_count() != Q[j].bit_count() for i, j in enumerate(perm)):
            continue
        pi = [0] * n
        for i, j in enumerate(perm):
            for a, b in _order_preserving(Q[i], Q[j]).items():
                pi[a - 1] = b
        elements.append(tuple(pi))
    return BlockSymmetrizer(Q, tuple(sorted(set(elements))))


def splitting_check(Q: SetComposition) -> bool:
    """Verify that g -> sum over a right transversal of g^σ maps Λ_Q^{α_Q} onto Λ̄_p.

    Checks e_{Q'}^{α_Q} ↦ f_{type Q'} / |G_Q|, injectivity, and that the map
    commutes with left multiplication by every X^r.
    """
    G = block_symmetrizer(Q)
    n = G.n
    trans = G.transversal()
    assert len(trans) * G.order == factorial(n)

    def phi(g: Element) -> Element:
        out = Element.zero(g.field)
        for s in trans:
            out = out + act(g, s)
        return out

    images = {}
    for Qp in lambda_basis(Q).basis:
        for pi in G.elements:
            moved = SetComposition([sum(1 << pi[x - 1] for x in bits(m)) for m in Qp])
            if act(e_expansion(Qp), pi) != e_expansion(moved):
                return False
        g = G.average(e_expansion(Qp))
        img = phi(g)
        if img != f_idem(Qp.type).element() / G.order:
            return False
        images[Qp.type] = (g, img)
    B = PiBasis.of(interval(n))
    src = Subspace.span((B.vector(g) for g, _ in images.values()), len(B), QQ)
    dst = Subspace.span((B.vector(h) for _, h in images.values()), len(B), QQ)
    if src.dim != len(images) or dst.dim != len(images):
        return False
    for r in compositions(n):
        X = x_basis(r).element()
        for g, img in images.values():
            if phi(wedge(X, g)) != wedge(X, img):
                return False
    return True


# -- Solomon Cartan invariants ------------------------------------------------------------

def lyndon_words(content: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Lyndon words whose letters are the given multiset."""
    out = []
    for w in set(permutations(sorted(content))):
        if all(w < w[i:] + w[:i] for i in range(1, len(w))):
            out.append(w)
    return sorted(out)


def _mobius(n: int) -> int:
    out, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    return -out if n > 1 else out


def witt_dimension(content) -> int:
    """Dimension of the free Lie algebra component with the given letter multiset."""
    counts = [list(content).count(x) for x in set(content)]
    N = len(content)
    g = 0
    for c in counts:
        g = gcd(g, c)
    total = Fraction(0)
    for d in range(1, g + 1):
        if g % d:
            continue
        term = factorial(N // d)
        for c in counts:
            term //= factorial(c // d)
        total += _mobius(d) * term
    return int(total / N)


def lie_bracket_rank(content) -> int:
    """Rank of all right-normed brackets of the letters, expanded as words."""
    letters = tuple(content)
    words = sorted(set(permutations(letters)))
    index = {w: i for i, w in enumerate(words)}
    rows = []
    for arrangement in set(permutations(letters)):
        poly = {(arrangement[-1],): 1}
        for x in reversed(arrangement[:-1]):
            new: dict = {}
            for w, c in poly.items():
                new[(x,) + w] = new.get((x,) + w, 0) + c
                new[w + (x,)] = new.get(w + (x,), 0) - c
            poly = new
        rows.append({index[w]: c for w, c in poly.items() if c})
    return Subspace.span(rows, len(words), QQ).dim


def _lyndon_by_degree(parts) -> dict[int, list[tuple[int, ...]]]:
    """Lyndon words using a sub-multiset of ``parts``, grouped by letter sum."""
    out: dict = {}
    seen = set()
    for size in range(1, len(parts) + 1):
        for sub in combinations(sorted(parts), size):
            if sub in seen:
                continue
            seen.add(sub)
            for w in lyndon_words(sub):
                out.setdefault(sum(w), []).append(w)
    return out


def solomon_cartan_count(r, q) -> int:
    """Non-increasing tuples of Lyndon words with degrees r_i and letters the parts of q."""
    r = tuple(r)
    target = tuple(sorted(q))
    pool = _lyndon_by_degree(target)
    key = lambda w: (sum(w), w)
    count = 0

    def rec(i, used, prev):
        nonlocal count
        if i == len(r):
            if tuple(sorted(used)) == target:
                count += 1
            return
        for w in pool.get(r[i], ()):
            if prev is not None and key(w) > key(prev):
                continue
            new = used + w
            rest = list(target)
            ok = True
            for x in new:
                if x in rest:
                    rest.remove(x)
                else:
                    ok = False
                    break
            if ok:
                rec(i + 1, new, w)

    rec(0, (), None)
    return count


def _f_in_e(r) -> EComb:
    return _f_in_e_cached(tuple(r))


@lru_cache(maxsize=None)
def _f_in_e_cached(r):
    return pi_to_e(f_idem(r).element())


def solomon_cartan(r, q, mode: str = "dimension", cap=None) -> int:
    """c_{r,q}: multiplicity of M_r in the indecomposable of B_n labelled by q."""
    r = partition_of(r)
    n = sum(r)
    if sum(q) != n:
        raise ValueError("r and q must have the same size")
    _check_cap(n, cap)
    if mode == "count":
        return solomon_cartan_count(r, q)
    if mode != "dimension":
        raise ValueError(f"unknown mode {mode!r}")
    Q = _blocks_of_type(partition_of(q))
    M = lambda_basis(Q)
    G = block_symmetrizer(M.label)
    fr = _f_in_e(r)
    rows = []
    for Qp in M.basis:
        prod: dict = {}
        for S, a in fr.items():
            for R, c in _e_product_terms(S, Qp):
                prod[R] = prod.get(R, 0) + a * c
        avg = G.average_labels(EComb(prod, QQ))
        rows.append({M.index[R]: c for R, c in avg.items()})
    return Subspace.span(rows, M.dim, QQ).dim


def bn_multiplicities(Q: SetComposition) -> tuple[int, ...]:
    """Multiplicity of each simple B_n-module M_r in Λ_Q, for r ⊢ n in :func:`partitions` order.

    The simples of B_n are one-dimensional, so the multiplicity of M_r is
    dim f_r ∧ Λ_Q.
    """
    M = lambda_basis(Q)
    n = M.label.support.bit_length() - 1
    out = []
    for r in partitions(n):
        fr = _f_in_e(r)
        rows = []
        for Qp in M.basis:
            prod: dict = {}
            for S, a in fr.items():
                for R, c in _e_product_terms(S, Qp):
                    i = M.index[R]
                    prod[i] = prod.get(i, 0) + a * c
            rows.append(prod)
        out.append(Subspace.span(rows, M.dim, QQ).dim)
    return tuple(out)


def solomon_cartan_matrix(n: int, mode: str = "dimension") -> tuple[list, list[list[int]]]:
    ps = partitions(n)
    return ps, [[solomon_cartan(r, q, mode) for q in ps] for r in ps]


# -- decomposition of B_n --------------------------------------------------------------------

def f_basis_rank(n: int) -> int:
    m = len(compositions(n))
    return Subspace.span((f_idem(q).vector() for q in compositions(n)), m, QQ).dim


def f_idempotent_scale(q) -> int:
    """s_q c_q, so that f_q / (s_q c_q) is idempotent."""
    return stabilizer_order(q) * multiplicity_factor(q)


def xi_table(n: int, cap=None) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    return {q: coset_reps_direct(q, cap) for q in compositions(n)}


def p_regular_count(n: int, p: int) -> int:
    return sum(1 for r in partitions(n) if is_p_regular(r, p))
