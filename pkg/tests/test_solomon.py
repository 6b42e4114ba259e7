from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import factorial

import pytest
from hypothesis import given

from conftest import set_compositions
from titslab import solomon as sol
from titslab.algebra import Element, act, compose, identity
from titslab.errors import CapExceeded, CharacteristicMismatch
from titslab.exactlinalg import GF, QQ, Subspace
from titslab.idempotents import e_atom, e_expansion
from titslab.setcomp import (
    SetComposition,
    compositions,
    enumerate_sc,
    interval,
    partition_of,
    partitions,
    sc,
    stabilizer_order,
)


def E(*terms):
    return Element({sc(t): c for t, c in terms})


# -- the X basis and symmetrization ------------------------------------------------------------

def test_x_elements():
    assert sol.x_element((1, 1)) == E(("1|2", 1), ("2|1", 1))
    assert sol.x_element((3,)) == E(("1,2,3", 1))
    assert sol.x_element((2, 1)) == E(("1,2|3", 1), ("1,3|2", 1), ("2,3|1", 1))


def test_symmetrize_examples():
    assert sol.symmetrize(e_atom({1, 2})) == E(("1,2", 2), ("1|2", -1), ("2|1", -1))
    for q in compositions(3):
        X = sol.x_element(q)
        assert sol.symmetrize(X) == X.scale(6)


@given(set_compositions(max_size=4))
def test_symmetrize_matches_brute(Q):
    f = e_expansion(Q)
    assert sol.symmetrize(f) == sol.symmetrize_brute(f)


def test_symmetrize_needs_char0():
    with pytest.raises(CharacteristicMismatch):
        sol.symmetrize(Element.basis(sc("1|2"), GF(3)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_x_structure_matches_wedge(n):
    for q in compositions(n):
        for r in compositions(n):
            prod = sol.x_wedge(sol.x_basis(q), sol.x_basis(r))
            assert prod.element() == (sol.x_element(q) & sol.x_element(r))


def test_to_invariant_rejects_noninvariant():
    with pytest.raises(ValueError):
        sol.to_invariant(E(("1|2", 1)), 2)


# -- Ω and f_q ----------------------------------------------------------------------------------

def test_omega_small():
    assert sol.omega(2).element() == E(("1,2", 2), ("1|2", -1), ("2|1", -1))
    assert sol.omega(1).element() == E(("1", 1))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_omega_quasi_idempotent(n):
    om = sol.omega(n)
    assert sol.x_wedge(om, om) == om.scale(n)


def test_f_examples():
    assert sol.f_idem((1, 1)) == sol.x_basis((1, 1))
    for n in (1, 2, 3):
        assert sol.f_idem((n,)).element() == sol.symmetrize(e_atom(interval(n)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_f_from_symmetrized_e(n):
    for Q in enumerate_sc(interval(n)):
        assert sol.to_invariant(sol.symmetrize(e_expansion(Q)), n) == sol.f_idem(Q.type)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_f_basis_and_idempotents(n):
    assert sol.f_basis_rank(n) == 2 ** (n - 1)
    for q in compositions(n):
        f = sol.f_idem(q)
        e = f / sol.f_idempotent_scale(q)
        assert sol.x_wedge(e, e) == e


def test_f_with_other_blocks():
    # any composition of the right type symmetrizes to the same f_q
    assert sol.f_idem((1, 2), sc("2|1,3")) == sol.f_idem((1, 2))
    with pytest.raises(ValueError):
        sol.f_idem((1, 2), sc("1,2|3"))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_radical_spanned_by_differences(n):
    m = len(compositions(n))
    diffs = Subspace(m, QQ, ("X", n))
    for q in compositions(n):
        p = partition_of(q)
        diffs.add((sol.f_idem(p) - sol.f_idem(q)).vector())
    assert diffs == sol.solomon_radical(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_module_isomorphism_classes(n):
    """Λ_Q and Λ_R have the same B_n-composition factors iff their types rearrange."""
    labels = enumerate_sc(interval(n), "canonical")
    sig = {Q: sol.bn_multiplicities(Q) for Q in labels}
    for Q in labels:
        assert sum(sig[Q]) == factorial(len(Q))
        for R in labels:
            assert (sig[Q] == sig[R]) == (partition_of(Q.type) == partition_of(R.type))


# -- radicals ---------------------------------------------------------------------------------------

def test_solomon_radical_examples():
    R = sol.solomon_radical(3)
    idx = sol.composition_index(3)
    assert R == Subspace.span([{idx[(1, 2)]: 1, idx[(2, 1)]: -1}], 4, QQ, ("X", 3))
    assert sol.solomon_radical(1).dim == 0
    assert 8 - sol.solomon_radical(4, GF(2)).dim == 2
    assert 8 - sol.solomon_radical(4, GF(3)).dim == 4


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_modular_radical_codim(n, p):
    codim = 2 ** (n - 1) - sol.solomon_radical(n, GF(p)).dim
    assert codim == sol.p_regular_count(n, p)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_loewy_fix(n):
    for k in range(n + 2):
        assert sol.loewy_fix_check(n, k)
    assert sol.solomon_loewy(n)[-1].dim == 0


# -- the group algebra -------------------------------------------------------------------------------

def test_coset_reps_examples():
    assert sol.coset_reps_direct((1, 1, 1)) == sorted(permutations(range(1, 4)))
    assert sol.coset_reps_direct((3,)) == [identity(3)]
    assert sol.coset_reps_direct((1, 1)) == [(1, 2), (2, 1)]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_coset_reps_brute_vs_direct(n):
    for q in compositions(n):
        reps = sol.coset_reps_direct(q)
        assert sorted(sol.coset_reps_brute(q)) == sorted(reps)
        assert len(reps) == factorial(n) // stabilizer_order(q)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coset_reps_one_per_coset(n):
    for q in compositions(n):
        young = sol._young_subgroup(q)
        cosets = {frozenset(compose(y, w) for y in young) for w in sol.coset_reps_direct(q)}
        assert len(cosets) * len(young) == factorial(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_bidigare(n):
    rep = sol.bidigare_check(n)
    assert rep.multiplicative and rep.convention == sol.GROUP_PRODUCT
    assert rep.dimension == 2 ** (n - 1)


def test_other_product_order_fails():
    with pytest.raises(AssertionError):
        sol.bidigare_check(3, conventions=("right-first",))


def test_group_cap():
    with pytest.raises(CapExceeded):
        sol.coset_reps_direct((1,) * 8)
    assert len(sol.coset_reps_direct((1,) * 3, cap=3)) == 6


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_omega_in_descent_algebra(n):
    coords = sol.xi_coordinates(sol.omega_group(n), n)
    assert coords is not None
    assert coords == dict(sol.omega(n).items())


def test_xi_coordinates_reject_outsiders():
    g = sol.GroupAlgebraElement({(2, 1, 3): 1})
    assert sol.xi_coordinates(g, 3) is None


def test_group_element_json():
    g = sol.coset_reps((1, 1))
    assert g.to_json_obj()["terms"][1] == {"perm": [2, 1], "num": "1", "den": "1"}


# -- Lie idempotents ---------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_lie_idempotents(n):
    e = sol.omega(n) / n
    assert sol.lie_idempotent_check(e)
    assert sol.delta_primitive_idempotent_check(e)
    via_atom = sol.to_invariant(sol.symmetrize(e_atom(interval(n))) / factorial(n), n)
    assert via_atom == e


def test_lie_non_example():
    X = sol.x_basis((1, 1))
    assert not sol.lie_idempotent_check(X)
    assert not sol.delta_primitive_idempotent_check(X)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_lie_battery_agrees(n):
    from titslab.verify import lie_battery
    for name, E_ in lie_battery(n):
        assert sol.lie_idempotent_check(E_, n) == sol.delta_primitive_idempotent_check(E_), name


# -- block permutations --------------------------------------------------------------------------------

def test_block_permutation_membership():
    G = sol.block_symmetrizer(sc("1,3|5|4|2,6"))
    assert G.is_member((2, 1, 6, 5, 4, 3))
    assert not G.is_member((6, 1, 2, 5, 4, 3))
    assert all(G.is_member(pi) for pi in G.elements)
    assert G.order == 4


def test_block_symmetrizer_definition():
    Q = sc("1,3|5|4|2,6")
    G = sol.block_symmetrizer(Q)
    members = [pi for pi in permutations(range(1, 7)) if G.is_member(pi)]
    assert sorted(members) == sorted(G.elements)


def test_distinct_sizes_trivial():
    G = sol.block_symmetrizer(sc("1,2|3"))
    assert G.elements == (identity(3),)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_block_permutations_move_e_labels(n):
    for Q in enumerate_sc(interval(n), "canonical"):
        G = sol.block_symmetrizer(Q)
        for pi in G.elements:
            moved = SetComposition([sum(1 << pi[x - 1] for x in range(1, n + 1) if m >> x & 1) for m in Q])
            assert act(e_expansion(Q), pi) == e_expansion(moved)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_splitting(n):
    for Q in enumerate_sc(interval(n), "canonical"):
        assert sol.splitting_check(Q)


# -- Solomon Cartan invariants --------------------------------------------------------------------------

def test_solomon_cartan_examples():
    assert sol.solomon_cartan((3,), (2, 1)) == 1
    assert sol.solomon_cartan((3,), (1, 1, 1)) == 0
    assert sol.solomon_cartan((3,), (2, 1), "count") == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_solomon_cartan_modes(n):
    for r in partitions(n):
        assert sol.solomon_cartan(r, r) == 1
        for q in compositions(n):
            assert sol.solomon_cartan(r, q) == sol.solomon_cartan(r, q, "count")


def test_solomon_cartan_matrix_n4():
    ps, rows = sol.solomon_cartan_matrix(4)
    assert ps == partitions(4)
    # upper unitriangular in this order, and not the identity
    for i in range(len(ps)):
        assert rows[i][i] == 1
        assert all(rows[i][j] == 0 for j in range(i))
    assert sum(map(sum, rows)) > len(ps)


def _contents(total_len, alphabet):
    return combinations_with_replacement(alphabet, total_len)


@pytest.mark.parametrize("length", [1, 2, 3, 4])
def test_witt_lyndon_bracket(length):
    for content in _contents(length, (1, 2, 3)):
        w = sol.witt_dimension(content)
        assert w == len(sol.lyndon_words(content)) == sol.lie_bracket_rank(content)


def test_lyndon_examples():
    assert sol.lyndon_words((1, 2)) == [(1, 2)]
    assert sol.lyndon_words((1, 1, 1)) == []
    assert sol.lyndon_words((1, 1, 2, 2)) == [(1, 1, 2, 2)]


def test_p_regular():
    assert sol.p_regular_count(4, 2) == 2
    assert sol.p_regular_count(4, 3) == 4
    assert sol.f_idempotent_scale((1, 1)) == 2
    assert sol.f_idempotent_scale((2, 1)) == 2
    assert Fraction(sol.omega(3)[(1, 2)]) == -1
