"""Module structure of FΠ_A: indecomposables, radical, Loewy series, Cartan matrix, quiver.

Most computations live in e-coordinates.  The principal indecomposable
Λ_Q = FΠ_A ∧ e_Q has basis {e_{Q'} : Q' a rearrangement of Q}, and a product
e_R ∧ e_{Q'} is evaluated by the dagger-refinement rule, so a subspace of Λ_Q
is a :class:`~titslab.exactlinalg.Subspace` over the rearrangements of Q.
Independent constructions in Π coordinates serve as oracles.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import product
from math import factorial

from .algebra import PiBasis, dynkin_terms
from .errors import NotCanonical
from .exactlinalg import QQ, Field, Subspace, direct_sum
from .idempotents import _e_product_terms, _family_terms
from .setcomp import (
    SetComposition,
    SetPartition,
    _check_cap,
    as_mask,
    coarsen,
    enumerate_sc,
    format_sc,
    interval,
    ordered_bell,
    partition_covers,
    rearrangements,
    refines,
    support_of,
)


def _canonical_labels(A, cap=None) -> list[SetComposition]:
    mask = as_mask(A)
    _check_cap(mask.bit_count(), cap)
    return enumerate_sc(mask, "canonical", cap=max(9, mask.bit_count()))


def _require_canonical(P: SetComposition) -> None:
    if not P.is_canonical():
        raise NotCanonical(f"{P} is not in canonical block order")


# -- principal indecomposables ----------------------------------------------------

@dataclass(frozen=True)
class PrincipalModule:
    label: SetComposition
    basis: tuple[SetComposition, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def index(self) -> dict[SetComposition, int]:
        return {Q: i for i, Q in enumerate(self.basis)}

    @property
    def ambient(self):
        return ("lambda", self.label)

    def radical_rows(self) -> list[dict[int, int]]:
        """e_Q - e_{Q'} for the rearrangements Q' != Q: a basis of the radical."""
        i0 = self.basis.index(self.label)
        return [{i0: 1, i: -1} for i in range(self.dim) if i != i0]


def lambda_basis(Q: SetComposition) -> PrincipalModule:
    Q = Q.canonical()
    return PrincipalModule(Q, tuple(rearrangements(Q)))


def _e_products(R: SetComposition, labels, index, field: Field) -> list[dict]:
    """Rows e_R ∧ e_{Q'} for Q' in ``labels``, in the coordinates ``index``."""
    rows = []
    for Qp in labels:
        terms = _e_product_terms(R, Qp)
        if terms:
            rows.append({index[S]: field(c) for S, c in terms})
    return rows


# -- the radical --------------------------------------------------------------------

def radical_basis(A, field: Field = QQ, method: str = "pi", cap=None) -> Subspace:
    """rad FΠ_A in Π coordinates.

    ``pi``: spanned by differences P - P' of rearranged compositions.
    ``e``: spanned by the expansions of e_Q - e_{Q'}.
    """
    mask = as_mask(A)
    _check_cap(mask.bit_count(), cap)
    B = PiBasis.of(mask)
    S = Subspace(len(B), field, B.ambient)
    for Q in enumerate_sc(mask, "canonical", cap=max(9, mask.bit_count())):
        rs = rearrangements(Q)
        for Qp in rs[1:]:
            if method == "pi":
                S.add({B.index[rs[0]]: 1, B.index[Qp]: -1})
            elif method == "e":
                v: dict = {}
                for R, c in _family_terms(rs[0]):
                    v[B.index[R]] = v.get(B.index[R], 0) + c
                for R, c in _family_terms(Qp):
                    v[B.index[R]] = v.get(B.index[R], 0) - c
                S.add(v)
            else:
                raise ValueError(f"unknown method {method!r}")
    return S


# -- Loewy series -----------------------------------------------------------------------

@dataclass
class LoewyLayer:
    k: int
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim


def _coarsenings(Q: SetComposition) -> list[SetComposition]:
    """All R with Q ⪯ R, one for each set composition of the block indices."""
    k = len(Q)
    return [coarsen(Q, I) for I in enumerate_sc(interval(k), "all", cap=max(9, k))]


def module_filtration(Q: SetComposition, field: Field = QQ) -> list[Subspace]:
    """rad^(k) Λ_Q for k = 0..ℓ(Q), as the span of e_R ∧ e_{Q'} with ℓ(Q) - ℓ(R) ≥ k."""
    M = lambda_basis(Q)
    Q = M.label
    idx = M.index
    k = len(Q)
    by_depth: dict[int, list[SetComposition]] = {}
    for R in _coarsenings(Q):
        by_depth.setdefault(k - len(R), []).append(R)
    out = [None] * (k + 1)
    S = Subspace(M.dim, field, M.ambient)
    out[k] = S.copy()
    for d in range(k - 1, -1, -1):
        for R in by_depth.get(d, ()):
            S.extend(_e_products(R, M.basis, idx, field))
        out[d] = S.copy()
    return out


def loewy_filtration(A, Q: SetComposition | None = None, field: Field = QQ, cap=None) -> list[LoewyLayer]:
    """The descending Loewy series of Λ_Q, or of FΠ_A when Q is omitted.

    For the whole algebra the spaces live in e-coordinates over the
    enumeration of Π_A and are direct sums of the per-module filtrations.
    """
    mask = as_mask(A)
    _check_cap(mask.bit_count(), cap)
    if Q is not None:
        return [LoewyLayer(k, S) for k, S in enumerate(module_filtration(Q, field))]
    B = PiBasis.of(mask)
    n = mask.bit_count()
    per_module = []
    for T in _canonical_labels(mask, cap):
        M = lambda_basis(T)
        cols = [B.index[S] for S in M.basis]
        lifted = []
        for S in module_filtration(T, field):
            L = Subspace(len(B), field, ("e", mask))
            L._rows = {cols[p]: {cols[c]: a for c, a in row.items()} for p, row in S._rows.items()}
            lifted.append(L)
        per_module.append(lifted)
    layers = []
    for k in range(n + 1):
        spaces = [f[min(k, len(f) - 1)] if k < len(f) else Subspace(len(B), field, ("e", mask))
                  for f in per_module]
        layers.append(LoewyLayer(k, direct_sum(spaces, len(B), field, ("e", mask))))
    return layers


def e_coords_to_pi(S: Subspace, A, field: Field = QQ) -> Subspace:
    """Re-express a subspace of e-coordinates in the Π basis."""
    B = PiBasis.of(as_mask(A))
    out = Subspace(len(B), field, B.ambient)
    for row in S.basis():
        v: dict = {}
        for i, c in row.items():
            for R, d in _family_terms(B.labels[i]):
                j = B.index[R]
                v[j] = v.get(j, 0) + c * d
        out.add(v)
    return out


def loewy_oracle(A, field: Field = QQ, cap=None) -> list[Subspace]:
    """rad^(k) FΠ_A by iterated products rad · rad^(k-1) in Π coordinates."""
    mask = as_mask(A)
    n = mask.bit_count()
    B = PiBasis.of(mask)
    rad = radical_basis(mask, field, "pi", cap).basis()
    whole = Subspace.span(({i: 1} for i in range(len(B))), len(B), field, B.ambient)
    out = [whole]
    current = radical_basis(mask, field, "pi", cap)
    while True:
        out.append(current)
        if current.dim == 0 or len(out) > n + 1:
            break
        nxt = Subspace(len(B), field, B.ambient)
        for r in rad:
            for m in current.basis():
                nxt.add(B.multiply(r, m, field))
        current = nxt
    return out


def loewy_second_form(Q: SetComposition, field: Field = QQ) -> list[Subspace]:
    """rad^(k+1) Λ_Q plus the sum of e_T Λ_Q over canonical T with ℓ(Q) - ℓ(T) = k."""
    M = lambda_basis(Q)
    Q = M.label
    filt = module_filtration(Q, field)
    out = []
    for k in range(len(Q) + 1):
        S = filt[k + 1].copy() if k + 1 < len(filt) else Subspace(M.dim, field, M.ambient)
        for T in enumerate_sc(Q.support, "canonical", cap=max(9, Q.support.bit_count())):
            if len(Q) - len(T) == k and refines(Q, T):
                S.extend(_e_products(T, M.basis, M.index, field))
        out.append(S)
    return out


def _project(T: SetComposition, S: Subspace, M: PrincipalModule, field: Field) -> Subspace:
    """e_T ∧ S for a subspace S of Λ_Q."""
    out = Subspace(M.dim, field, M.ambient)
    for row in S.basis():
        v: dict = {}
        for i, c in row.items():
            for R, d in _e_product_terms(T, M.basis[i]):
                j = M.index[R]
                v[j] = v.get(j, 0) + c * d
        out.add(v)
    return out


def layer_constituents(Q: SetComposition, field: Field = QQ) -> list[dict[SetComposition, int]]:
    """Multiplicity of each simple M_T in each Loewy layer of Λ_Q.

    The multiplicity of M_T in a module N is dim e_T ∧ N, so the layer count
    is the drop of that dimension from rad^(k) to rad^(k+1).
    """
    M = lambda_basis(Q)
    filt = module_filtration(M.label, field)
    labels = enumerate_sc(M.label.support, "canonical", cap=max(9, M.label.support.bit_count()))
    dims = [{T: _project(T, S, M, field).dim for T in labels} for S in filt]
    layers = []
    for k in range(len(filt) - 1):
        layers.append({T: m for T in labels if (m := dims[k][T] - dims[k + 1][T])})
    return layers


def nilindex(A, field: Field = QQ, cap=None) -> int:
    layers = loewy_filtration(A, field=field, cap=cap)
    return next(k for k, L in enumerate(layers) if L.dim == 0)


# -- Cartan matrix -------------------------------------------------------------------------

def cartan_entry(P: SetComposition, Q: SetComposition, mode: str = "formula", field: Field = QQ) -> int:
    """C_{P,Q}: product of (m_j - 1)! with m_j the number of Q-blocks inside P_j."""
    _require_canonical(P)
    _require_canonical(Q)
    if mode == "formula":
        if not refines(Q, P):
            return 0
        out = 1
        for p in P:
            out *= factorial(sum(1 for q in Q if not q & ~p) - 1)
        return out
    if mode == "rank":
        M = lambda_basis(Q)
        return Subspace.span(_e_products(P, M.basis, M.index, field), M.dim, field).dim
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class CartanMatrix:
    labels: list[SetComposition]
    rows: list[list[int]]

    def entry(self, P: SetComposition, Q: SetComposition) -> int:
        return self.rows[self.labels.index(P)][self.labels.index(Q)]

    def column_sums(self) -> list[int]:
        return [sum(r[j] for r in self.rows) for j in range(len(self.labels))]

    def row_sums(self) -> list[int]:
        return [sum(r) for r in self.rows]

    def to_json_obj(self) -> dict:
        return {"labels": [format_sc(P) for P in self.labels],
                "rows": [[str(x) for x in r] for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def to_text(self) -> str:
        names = [format_sc(P) for P in self.labels]
        w = max(len(s) for s in names)
        lines = [" " * w + "  " + " ".join(s.rjust(w) for s in names)]
        for name, row in zip(names, self.rows):
            lines.append(name.rjust(w) + "  " + " ".join(str(x).rjust(w) for x in row))
        return "\n".join(lines)


def cartan_matrix(A, mode: str = "formula", field: Field = QQ, cap=None, workers: int = 1) -> CartanMatrix:
    labels = _canonical_labels(A, cap)
    pairs = [(P, Q) for P in labels for Q in labels]
    if workers > 1 and mode == "rank":
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            vals = list(ex.map(_cartan_job, [(P, Q, mode, field.char) for P, Q in pairs], chunksize=64))
    else:
        vals = [cartan_entry(P, Q, mode, field) for P, Q in pairs]
    k = len(labels)
    return CartanMatrix(labels, [vals[i * k:(i + 1) * k] for i in range(k)])


def _cartan_job(args):
    P, Q, mode, char = args
    return cartan_entry(P, Q, mode, Field(char))


def right_ideal_dim(P: SetComposition, mode: str = "formula", field: Field = QQ) -> int:
    """dim e_P ∧ FΠ_A.

    ``formula``: product over blocks of 2·|Π_{p-1}|, a singleton block contributing 1.
    ``uncorrected``: the product 2^l·|Π_{p_1-1}|···|Π_{p_l-1}| with no singleton exception.
    ``rank``: rank of the products e_P ∧ e_S over all S.
    """
    _require_canonical(P)
    sizes = P.type
    if mode == "formula":
        out = 1
        for p in sizes:
            out *= 1 if p == 1 else 2 * ordered_bell(p - 1)
        return out
    if mode == "uncorrected":
        out = 2 ** len(sizes)
        for p in sizes:
            out *= ordered_bell(p - 1)
        return out
    if mode == "rank":
        B = PiBasis.of(P.support)
        return Subspace.span(_e_products(P, B.labels, B.index, field), len(B), field).dim
    raise ValueError(f"unknown mode {mode!r}")


# -- Ext-quiver -----------------------------------------------------------------------------

@dataclass
class Quiver:
    vertices: list[SetPartition]
    edges: list[tuple[SetPartition, SetPartition]] = dc_field(default_factory=list)

    def to_dot(self) -> str:
        lines = ["digraph {"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for a, b in self.edges:
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {"vertices": [str(v) for v in self.vertices],
                "edges": [[str(a), str(b)] for a, b in self.edges]}


def _edge_key(e):
    return (e[0].sort_key(), e[1].sort_key())


def ext_quiver(A, method: str = "definition", field: Field = QQ, cap=None) -> Quiver:
    """Vertices are the set partitions of A; P -> Q when M_P sits in the top radical layer of Λ_Q.

    ``definition``: Q ⪯ P with one block more.  ``loewy``: nonzero
    multiplicity in Loewy layer 1.  ``covers``: the partition lattice's
    covering pairs (A must be [n]).
    """
    labels = _canonical_labels(A, cap)
    verts = [support_of(P) for P in labels]
    edges = []
    if method == "definition":
        for P in labels:
            for Q in labels:
                if len(Q) - len(P) == 1 and refines(Q, P):
                    edges.append((support_of(P), support_of(Q)))
    elif method == "loewy":
        for Q in labels:
            layers = layer_constituents(Q, field)
            if len(layers) > 1:
                for P, m in layers[1].items():
                    edges.extend([(support_of(P), support_of(Q))] * m)
    elif method == "covers":
        mask = as_mask(A)
        n = mask.bit_count()
        if mask != interval(n):
            raise ValueError("the covers method needs A = [n]")
        edges = list(partition_covers(n, cap=max(9, n)))
    else:
        raise ValueError(f"unknown method {method!r}")
    edges.sort(key=_edge_key)
    return Quiver(verts, edges)


# -- the adapted basis ----------------------------------------------------------------------

@dataclass(frozen=True)
class PBWElement:
    """A concatenation e_{Q(1)°} ∨ ... ∨ e_{Q(m)°} with its defining factors."""

    factors: tuple[SetComposition, ...]

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def length(self) -> int:
        return sum(len(F) for F in self.factors)

    @property
    def depth(self) -> int:
        return self.length - self.m

    def terms(self) -> dict[SetComposition, int]:
        """Coefficients on e-labels."""
        acc: dict = {}
        for combo in product(*(dynkin_terms(F) for F in self.factors)):
            R = SetComposition(tuple(b for S, _ in combo for b in S))
            c = 1
            for _, d in combo:
                c *= d
            acc[R] = acc.get(R, 0) + c
        return {R: c for R, c in acc.items() if c}

    def __str__(self) -> str:
        return " v ".join(f"e[({format_sc(F)})°]" for F in self.factors)


def loewy_pbw_basis(A, k: int | None = None, cap=None) -> list[PBWElement]:
    """The basis adapted to the Loewy series; with ``k`` only the slice ℓ(Q) = m + k.

    Factors Q(i) have the minimum of their support in their last block, and
    the supports of the factors appear in increasing order of their minima.
    """
    mask = as_mask(A)
    n = mask.bit_count()
    _check_cap(n, cap)
    out = []
    for T in enumerate_sc(mask, "canonical", cap=max(9, n)):
        choices = [enumerate_sc(b, "dagger", cap=max(9, n)) for b in T]
        for factors in product(*choices):
            el = PBWElement(tuple(factors))
            if k is None or el.depth == k:
                out.append(el)
    return out


def pbw_space(elements, A, field: Field = QQ) -> Subspace:
    B = PiBasis.of(as_mask(A))
    S = Subspace(len(B), field, ("e", as_mask(A)))
    for el in elements:
        S.add({B.index[R]: c for R, c in el.terms().items()})
    return S
