import json
from math import factorial

import pytest

from titslab.algebra import Element, PiBasis, wedge
from titslab.errors import CapExceeded, NotCanonical
from titslab.exactlinalg import GF, Subspace
from titslab.idempotents import e_atom, e_expansion, e_multiply
from titslab.modstruct import (
    cartan_entry,
    cartan_matrix,
    e_coords_to_pi,
    ext_quiver,
    lambda_basis,
    layer_constituents,
    loewy_filtration,
    loewy_oracle,
    loewy_pbw_basis,
    module_filtration,
    nilindex,
    pbw_space,
    radical_basis,
    right_ideal_dim,
)
from titslab.setcomp import (
    SetComposition,
    bell,
    enumerate_sc,
    interval,
    ordered_bell,
    partition_covers,
    rearrangements,
    refinement,
    refines,
    sc,
    set_partitions,
)

CARTAN_N3 = [
    [1, 1, 1, 1, 2],
    [0, 1, 0, 0, 1],
    [0, 0, 1, 0, 1],
    [0, 0, 0, 1, 1],
    [0, 0, 0, 0, 1],
]


def whole(n):
    return SetComposition((interval(n),))


def discrete(n):
    return SetComposition(tuple(1 << i for i in range(1, n + 1)))


# -- principal modules ------------------------------------------------------------------------

def test_lambda_basis():
    assert lambda_basis(sc("1|2|3")).dim == 6
    assert lambda_basis(sc("1,2,3")).dim == 1
    M = lambda_basis(sc("1,2|3"))
    assert list(M.basis) == [sc("1,2|3"), sc("3|1,2")]
    assert lambda_basis(sc("3|1,2")).label == sc("1,2|3")


# -- radical ------------------------------------------------------------------------------------

@pytest.mark.parametrize("n,dim", [(1, 0), (2, 1), (3, 8), (4, 60)])
def test_radical_dims(n, dim):
    R = radical_basis(interval(n))
    assert R.dim == dim == ordered_bell(n) - bell(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_radical_constructions_agree(n):
    assert radical_basis(interval(n), method="pi") == radical_basis(interval(n), method="e")


@pytest.mark.parametrize("n", [2, 3])
def test_radical_is_nilpotent_ideal(n):
    R = radical_basis(interval(n))
    B = PiBasis.of(interval(n))
    for r in R.basis():
        for j in range(len(B)):
            assert R.contains(B.multiply(r, {j: 1}))
            assert R.contains(B.multiply({j: 1}, r))


# -- Loewy series -------------------------------------------------------------------------------

def test_figure_one():
    Q = sc("1|2|3")
    assert [S.dim for S in module_filtration(Q)] == [6, 5, 2, 0]
    layers = [{str(T): m for T, m in L.items()} for L in layer_constituents(Q)]
    assert layers == [{"1|2|3": 1}, {"1|2,3": 1, "1,2|3": 1, "1,3|2": 1}, {"1,2,3": 2}]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_nilindex_and_socle_dimension(n):
    layers = loewy_filtration(interval(n))
    assert nilindex(interval(n)) == n
    assert layers[n].dim == 0
    assert layers[n - 1].dim == factorial(n - 1)


def test_n1_radical_vanishes():
    assert loewy_filtration(interval(1))[1].dim == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_loewy_matches_iterated_products(n):
    oracle = loewy_oracle(interval(n))
    mine = [e_coords_to_pi(L.space, interval(n)) for L in loewy_filtration(interval(n))]
    assert oracle == mine


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_bottom_layer_is_sandwich(n):
    A = interval(n)
    Bas = PiBasis.of(A)
    left, right = e_atom(A), e_expansion(discrete(n))
    S = Subspace(len(Bas), ambient=Bas.ambient)
    for R in Bas.labels:
        S.add(Bas.vector(wedge(wedge(left, Element.basis(R)), right)))
    bottom = e_coords_to_pi(loewy_filtration(A)[n - 1].space, A)
    assert S == bottom and S.dim == factorial(n - 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_single_layer_occurrence(n):
    canon = enumerate_sc(interval(n), "canonical")
    for Q in canon:
        layers = layer_constituents(Q)
        for k, L in enumerate(layers):
            for T in canon:
                expected = refines(Q, T) and len(Q) - len(T) == k
                assert (T in L) == expected
                if expected:
                    assert L[T] == cartan_entry(T, Q)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_radical_generated_by_covers(n):
    for Q in enumerate_sc(interval(n), "canonical"):
        M = lambda_basis(Q)
        rev = SetComposition(tuple(reversed(Q)))
        S = Subspace(M.dim, ambient=M.ambient)
        for P in enumerate_sc(interval(n)):
            if len(P) == len(Q) - 1 and refines(Q, P):
                for Pp in rearrangements(P):
                    S.add({M.index[R]: c for R, c in e_multiply(Pp, rev).items()})
        assert S == module_filtration(Q)[1]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_adapted_basis(n):
    A = interval(n)
    els = loewy_pbw_basis(A)
    assert len(els) == ordered_bell(n)
    layers = loewy_filtration(A)
    for k in range(n + 1):
        assert pbw_space([e for e in els if e.depth >= k], A) == layers[k].space
        assert len(loewy_pbw_basis(A, k)) == layers[k].dim - (layers[k + 1].dim if k < n else 0)


def test_adapted_basis_n2():
    assert sorted(str(e) for e in loewy_pbw_basis(interval(2), 0)) == ["e[(1)°] v e[(2)°]", "e[(1,2)°]"]
    (el,) = loewy_pbw_basis(interval(2), 1)
    assert el.terms() == {sc("2|1"): 1, sc("1|2"): -1}
    assert loewy_pbw_basis(interval(3), 3) == []


# -- Cartan matrix --------------------------------------------------------------------------------

def test_cartan_table():
    C = cartan_matrix(interval(3))
    assert [str(P) for P in C.labels] == ["1,2,3", "1|2,3", "1,2|3", "1,3|2", "1|2|3"]
    assert C.rows == CARTAN_N3
    assert cartan_matrix(interval(3), "rank").rows == CARTAN_N3


def test_cartan_entries():
    assert cartan_entry(sc("1,2,3"), sc("1|2|3")) == 2
    assert cartan_entry(sc("1,2|3"), sc("1|2|3")) == 1
    assert cartan_entry(sc("1|2,3"), sc("1,2|3")) == 0
    with pytest.raises(NotCanonical):
        cartan_entry(sc("3|1,2"), sc("1|2|3"))


def test_small_cartan():
    assert cartan_matrix(interval(1)).rows == [[1]]
    assert cartan_matrix(interval(2)).rows == [[1, 1], [0, 1]]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_formula_equals_rank(n):
    assert cartan_matrix(interval(n)).rows == cartan_matrix(interval(n), "rank").rows


def test_formula_equals_rank_over_gf2():
    assert cartan_matrix(interval(4), "rank", GF(2)).rows == cartan_matrix(interval(4)).rows


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_column_and_row_sums(n):
    C = cartan_matrix(interval(n))
    assert C.column_sums() == [factorial(len(Q)) for Q in C.labels]
    assert C.row_sums() == [right_ideal_dim(P, "rank") for P in C.labels]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fractal_identity(n):
    for Q in enumerate_sc(interval(n), "canonical"):
        k = len(Q)
        for P in enumerate_sc(interval(n), "canonical"):
            if refines(Q, P):
                I = refinement(Q, P)
                assert cartan_entry(P, Q, "rank") == cartan_entry(I, discrete(k), "rank")


def test_cartan_json_and_text():
    C = cartan_matrix(interval(2))
    assert json.loads(C.to_json()) == {"labels": ["1,2", "1|2"], "rows": [["1", "1"], ["0", "1"]]}
    assert C.to_text().splitlines()[1].split() == ["1,2", "1", "1"]


def test_cartan_workers_deterministic():
    a = cartan_matrix(interval(3), "rank", workers=2)
    assert a.rows == CARTAN_N3


# -- right ideals ---------------------------------------------------------------------------------

def test_right_ideal_examples():
    assert right_ideal_dim(whole(3)) == 6 == right_ideal_dim(whole(3), "rank")
    assert right_ideal_dim(sc("1,2")) == 2 == right_ideal_dim(sc("1,2"), "rank")
    assert right_ideal_dim(sc("1|2|3"), "rank") == 1 == right_ideal_dim(sc("1|2|3"))
    # the product 2^l·|Π_{p-1}|··· without a singleton exception overcounts
    assert right_ideal_dim(sc("1|2|3"), "uncorrected") == 8


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_right_ideal_formula(n):
    for P in enumerate_sc(interval(n), "canonical"):
        assert right_ideal_dim(P) == right_ideal_dim(P, "rank")


# -- quiver ---------------------------------------------------------------------------------------

def test_quiver_n3():
    Q = ext_quiver(interval(3))
    assert len(Q.vertices) == 5 and len(Q.edges) == 6
    assert Q.to_dot().splitlines()[0] == "digraph {"
    assert '  "1,2,3" -> "1|2,3";' in Q.to_dot().splitlines()
    assert Q.to_json_obj()["edges"][0] == ["1,2,3", "1|2,3"]


def test_quiver_small():
    Q = ext_quiver(interval(1))
    assert len(Q.vertices) == 1 and Q.edges == []


@pytest.mark.parametrize("n", [2, 3, 4])
def test_quiver_methods_agree(n):
    a = ext_quiver(interval(n), "definition")
    b = ext_quiver(interval(n), "loewy")
    c = ext_quiver(interval(n), "covers")
    assert a.edges == b.edges == c.edges
    assert len(a.vertices) == len(set_partitions(n))
    assert set(a.edges) == set(partition_covers(n))


def test_caps():
    with pytest.raises(CapExceeded):
        cartan_matrix(interval(5), cap=4)
    with pytest.raises(CapExceeded):
        loewy_filtration(interval(5), cap=4)
