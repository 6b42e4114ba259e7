"""The verification suites: one check per acceptance criterion.

Each check takes an optional size bound ``n`` (lowering every built-in
bound to at most ``n``) and a field, and returns a :class:`CheckResult`.
``data`` holds the integer outputs a check computed so that runs over
different fields can be compared.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from math import factorial
from typing import Callable

from .algebra import Element, wedge
from .exactlinalg import QQ, Field, GF, Subspace
from .idempotents import e_atom, e_expansion, e_multiply, naive_e_multiply
from .modstruct import (
    cartan_matrix,
    e_coords_to_pi,
    ext_quiver,
    layer_constituents,
    loewy_filtration,
    loewy_oracle,
    loewy_second_form,
    module_filtration,
    radical_basis,
)
from .setcomp import (
    SetComposition,
    bell,
    compositions,
    enumerate_sc,
    interval,
    parse_sc,
    partitions,
)
from . import solomon as sol

IDEMPOTENTS_N3 = {
    "1": {"1": 1},
    "1,2": {"1,2": 1, "1|2": -1},
    "1,2,3": {"1,2,3": 1, "1,2|3": -1, "1|2,3": -1, "1,3|2": -1, "1|2|3": 1, "1|3|2": 1},
    "2,5,6": {"2,5,6": 1, "2,5|6": -1, "2|5,6": -1, "2,6|5": -1, "2|5|6": 1, "2|6|5": 1},
}

E_BASIS_N3 = {
    "1|2|3": {"1|2|3": 1}, "1|3|2": {"1|3|2": 1},
    "2|1|3": {"2|1|3": 1}, "2|3|1": {"2|3|1": 1},
    "3|1|2": {"3|1|2": 1}, "3|2|1": {"3|2|1": 1},
    "1,2|3": {"1,2|3": 1, "1|2|3": -1}, "3|1,2": {"3|1,2": 1, "3|1|2": -1},
    "1|2,3": {"1|2,3": 1, "1|2|3": -1}, "2,3|1": {"2,3|1": 1, "2|3|1": -1},
    "1,3|2": {"1,3|2": 1, "1|3|2": -1}, "2|1,3": {"2|1,3": 1, "2|1|3": -1},
    "1,2,3": IDEMPOTENTS_N3["1,2,3"],
}

# rows M_P, columns Λ_Q
CARTAN_N3_LABELS = ["1,2,3", "1,2|3", "1,3|2", "1|2,3", "1|2|3"]
CARTAN_N3_ROWS = {
    "1|2|3": [0, 0, 0, 0, 1],
    "1|2,3": [0, 0, 0, 1, 1],
    "1,3|2": [0, 0, 1, 0, 1],
    "1,2|3": [0, 1, 0, 0, 1],
    "1,2,3": [1, 1, 1, 1, 2],
}

LOEWY_N3 = [
    {"1|2|3": 1},
    {"1,2|3": 1, "1,3|2": 1, "1|2,3": 1},
    {"1,2,3": 2},
]

QUIVER_N3 = {("1,2,3", "1|2,3"), ("1,2,3", "1,2|3"), ("1,2,3", "1,3|2"),
            ("1|2,3", "1|2|3"), ("1,2|3", "1|2|3"), ("1,3|2", "1|2|3")}


@dataclass
class CheckResult:
    ok: bool
    detail: str = ""
    data: dict = dc_field(default_factory=dict)
    seconds: float = 0.0


class _Failures:
    def __init__(self):
        self.items: list[str] = []

    def check(self, cond: bool, message: str) -> None:
        if not cond:
            self.items.append(message)

    def result(self, data=None) -> CheckResult:
        if self.items:
            shown = "; ".join(self.items[:5])
            more = f" (+{len(self.items) - 5} more)" if len(self.items) > 5 else ""
            return CheckResult(False, shown + more, data or {})
        return CheckResult(True, "ok", data or {})


def _bound(default: int, n: int | None) -> int:
    return default if n is None else min(default, n)


def _as_element(terms: dict, field: Field) -> Element:
    return Element({parse_sc(k): v for k, v in terms.items()}, field)


# -- criteria ---------------------------------------------------------------------

def c1(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    for A, terms in IDEMPOTENTS_N3.items():
        got = e_atom(parse_sc(A).support, field)
        f.check(got == _as_element(terms, field), f"e_{{{A}}} = {got}")
    return f.result()


def c2(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    f.check(len(enumerate_sc(interval(3))) == 13, "Π_3 does not have 13 elements")
    f.check(set(E_BASIS_N3) == {str(P) for P in enumerate_sc(interval(3))}, "basis labels")
    for Q, terms in E_BASIS_N3.items():
        got = e_expansion(parse_sc(Q), field)
        f.check(got == _as_element(terms, field), f"e_({Q}) = {got}")
    return f.result()


def c3(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    data = {}
    C = cartan_matrix(interval(3), "rank", field)
    names = [str(P) for P in C.labels]
    for P, row in CARTAN_N3_ROWS.items():
        for Q, want in zip(CARTAN_N3_LABELS, row):
            got = C.rows[names.index(P)][names.index(Q)]
            f.check(got == want, f"C[{P},{Q}] = {got}, expected {want}")
    for m in range(1, _bound(4, n) + 1):
        F = cartan_matrix(interval(m), "formula")
        R = cartan_matrix(interval(m), "rank", field)
        f.check(F.rows == R.rows, f"formula and rank disagree at n={m}")
        data[f"cartan{m}"] = R.rows
    for m in (5, 6):
        if n is not None and m > n:
            continue
        F = cartan_matrix(interval(m), "formula")
        want = [factorial(len(Q)) for Q in F.labels]
        f.check(F.column_sums() == want, f"column sums at n={m}")
    return f.result(data)


def c4(n=None, field: Field = QQ, samples: int = 10_000, seed: int = 20240501) -> CheckResult:
    f = _Failures()
    count = 0
    for m in range(1, _bound(4, n) + 1):
        L = enumerate_sc(interval(m))
        for P in L:
            for Q in L:
                count += 1
                if e_multiply(P, Q, field) != naive_e_multiply(P, Q, field):
                    f.check(False, f"e_{P} ∧ e_{Q}")
    if _bound(5, n) == 5:
        rng = random.Random(seed)
        L = enumerate_sc(interval(5))
        for _ in range(samples):
            P, Q = rng.choice(L), rng.choice(L)
            count += 1
            if e_multiply(P, Q, field) != naive_e_multiply(P, Q, field):
                f.check(False, f"e_{P} ∧ e_{Q}")
    res = f.result({"pairs": count})
    res.detail = f"{count} pairs " + res.detail
    return res


def c5(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    for m in range(1, _bound(5, n) + 1):
        A = interval(m)
        Ts = enumerate_sc(A, "canonical")
        exp = {T: e_expansion(T, field) for T in Ts}
        total = Element.zero(field)
        for S in Ts:
            total = total + exp[S]
            for T in Ts:
                want = exp[T] if S == T else Element.zero(field)
                f.check(wedge(exp[S], exp[T]) == want, f"e_{S} ∧ e_{T} at n={m}")
        f.check(total == Element.basis(SetComposition((A,)), field), f"sum of e_T at n={m}")
    return f.result()


def c6(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    data = {}
    for m in range(1, _bound(5, n) + 1):
        R = radical_basis(interval(m), field, "pi")
        codim = R.ncols - R.dim
        data[f"codim{m}"] = codim
        f.check(codim == bell(m), f"codim rad at n={m} is {codim}, Bell is {bell(m)}")
        if m <= 4:
            f.check(R == radical_basis(interval(m), field, "e"), f"radical constructions differ at n={m}")
    return f.result(data)


def c7(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    data = {}
    got = [{str(T): c for T, c in layer.items()}
           for layer in layer_constituents(parse_sc("1|2|3"), field)]
    f.check(got == LOEWY_N3, f"Λ_(1|2|3) layers {got}")
    dims = [S.dim for S in module_filtration(parse_sc("1|2|3"), field)]
    f.check(dims[:3] == [6, 5, 2] and dims[3] == 0, f"Λ_(1|2|3) filtration {dims}")
    for m in range(1, _bound(5, n) + 1):
        layers = loewy_filtration(interval(m), field=field)
        ds = [L.dim for L in layers]
        data[f"loewy{m}"] = ds
        nil = next(k for k, d in enumerate(ds) if d == 0)
        f.check(nil == m, f"nilindex at n={m} is {nil}")
        f.check(ds[m - 1] == factorial(m - 1), f"dim rad^(n-1) at n={m} is {ds[m - 1]}")
        if m <= 4:
            for Q in enumerate_sc(interval(m), "canonical"):
                first = module_filtration(Q, field)
                second = loewy_second_form(Q, field)
                f.check(all(a == b for a, b in zip(first, second)), f"Loewy forms differ for Λ_{Q}")
            oracle = loewy_oracle(interval(m), field)
            mine = [e_coords_to_pi(L.space, interval(m), field) for L in layers]
            f.check(len(oracle) == len(mine) and all(a == b for a, b in zip(oracle, mine)),
                    f"Loewy series differs from iterated products at n={m}")
    return f.result(data)


def c8(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    data = {}
    Q3 = ext_quiver(interval(3), "loewy", field)
    edges = {(str(a), str(b)) for a, b in Q3.edges}
    f.check(len(Q3.vertices) == 5 and edges == QUIVER_N3 and len(Q3.edges) == 6, f"n=3 quiver {edges}")
    for m in range(1, _bound(5, n) + 1):
        a = ext_quiver(interval(m), "definition")
        b = ext_quiver(interval(m), "loewy", field)
        c = ext_quiver(interval(m), "covers")
        f.check(a.edges == b.edges == c.edges, f"quiver methods disagree at n={m}")
        data[f"edges{m}"] = len(b.edges)
    return f.result(data)


def c9(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    conventions = set()
    for m in range(1, _bound(5, n) + 1):
        rep = sol.bidigare_check(m)
        conventions.add(rep.convention)
        f.check(rep.multiplicative, f"not multiplicative at n={m}")
        span = sol.invariant_rows_to_pi(
            Subspace.span(({i: 1} for i in range(len(compositions(m)))), len(compositions(m)), QQ, ("X", m)), m)
        f.check(span.dim == 2 ** (m - 1), f"dim B_{m} = {span.dim}")
    f.check(conventions == {sol.GROUP_PRODUCT}, f"convention drifted: {conventions}")
    res = f.result()
    res.detail = f"convention {sol.GROUP_PRODUCT}; " + res.detail
    return res


def c10(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    for m in range(1, _bound(5, n) + 1):
        codim = 2 ** (m - 1) - sol.solomon_radical(m).dim
        f.check(codim == len(partitions(m)), f"char 0 codim at n={m} is {codim}")
    if _bound(4, n) == 4:
        for p, want in ((2, 2), (3, 4)):
            codim = 8 - sol.solomon_radical(4, GF(p)).dim
            f.check(codim == want == sol.p_regular_count(4, p), f"char {p} codim at n=4 is {codim}")
    return f.result()


def lie_battery(m: int) -> list[tuple[str, "sol.Invariant"]]:
    """Candidates for Lie idempotents in B_m: genuine ones and perturbations."""
    om = sol.omega(m)
    e = om / m
    one = sol.identity_invariant(m)
    out = [("Ω/n", e)]
    for q in compositions(m):
        b = sol.x_basis(q)
        out.append((f"Ω/n + (Ω/n)X{q}(1-Ω/n)", e + sol.x_wedge(sol.x_wedge(e, b), one - e)))
    out.append(("2Ω/n", e.scale(2)))
    out.append(("identity", one))
    for q in compositions(m)[1:]:
        out.append((f"Ω/n + X{q}", e + sol.x_basis(q)))
    if m == 2:
        out.append(("X(1,1)", sol.x_basis((1, 1))))
    return out


def c11(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    for m in range(1, _bound(5, n) + 1):
        om = sol.omega(m)  # asserts both formulas agree
        f.check(sol.x_wedge(om, om) == om.scale(m), f"Ω_{m}∧Ω_{m} != {m}Ω_{m}")
        f.check(sol.xi_coordinates(sol.omega_group(m), m) == dict(om.items()), f"ω_{m} vs Ω_{m}")
        for name, E in lie_battery(m):
            a = sol.lie_idempotent_check(E, m)
            b = sol.delta_primitive_idempotent_check(E)
            f.check(a == b, f"n={m} {name}: Lie {a}, Δ-primitive idempotent {b}")
            if name.startswith("Ω/n"):
                f.check(a == ("+ X" not in name), f"n={m} {name} classified as {a}")
    return f.result()


def c12(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    for m in range(1, _bound(4, n) + 1):
        for Q in enumerate_sc(interval(m)):
            got = sol.to_invariant(sol.symmetrize(e_expansion(Q)), m)
            f.check(got == sol.f_idem(Q.type), f"symmetrized e_{Q} != f_{Q.type}")
        f.check(sol.f_basis_rank(m) == 2 ** (m - 1), f"f_q not a basis at n={m}")
        for q in compositions(m):
            fq = sol.f_idem(q)
            f.check(sol.x_wedge(fq, fq) == fq.scale(sol.f_idempotent_scale(q)), f"f_{q} scale")
        for Q in enumerate_sc(interval(m), "canonical"):
            f.check(sol.splitting_check(Q), f"splitting fails for {Q}")
    return f.result()


def c13(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    data = {}
    for m in range(1, _bound(4, n) + 1):
        ps, qs = partitions(m), compositions(m)
        dim = [[sol.solomon_cartan(r, q, "dimension") for q in qs] for r in ps]
        cnt = [[sol.solomon_cartan(r, q, "count") for q in qs] for r in ps]
        f.check(dim == cnt, f"dimension and count modes differ at n={m}")
        f.check(all(dim[i][qs.index(p)] == 1 for i, p in enumerate(ps)), f"diagonal at n={m}")
        data[f"solomon_cartan{m}"] = dim
    if _bound(3, n) == 3:
        f.check(sol.solomon_cartan((3,), (2, 1)) == 1, "c_(3),(2,1)")
        f.check(sol.solomon_cartan((3,), (1, 1, 1)) == 0, "c_(3),(1,1,1)")
    return f.result(data)


def c14(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    for m in range(1, _bound(4, n) + 1):
        for k in range(m + 2):
            f.check(sol.loewy_fix_check(m, k), f"n={m}, k={k}")
    return f.result()


def c15(n=None, field: Field = QQ) -> CheckResult:
    f = _Failures()
    bound = _bound(4, n)
    base = {}
    checks = [("c3", c3), ("c4", c4), ("c5", c5), ("c6", c6), ("c7", c7), ("c8", c8)]
    for name, fn in checks:
        kwargs = {"samples": 0} if name == "c4" else {}
        base[name] = fn(bound, QQ, **kwargs)
    for p in (2, 5):
        F = GF(p)
        for name, fn in checks:
            kwargs = {"samples": 0} if name == "c4" else {}
            r = fn(bound, F, **kwargs)
            f.check(r.ok, f"{name} over GF({p}): {r.detail}")
            f.check(r.data == base[name].data, f"{name} over GF({p}) differs from QQ")
    return f.result()


CRITERIA: dict[str, tuple[str, Callable[..., CheckResult]]] = {
    "c1": ("the idempotents e_A at n=3", c1),
    "c2": ("the basis e_Q of FΠ_3", c2),
    "c3": ("Cartan matrix at n=3, formula vs rank", c3),
    "c4": ("multiplication rule vs naive products", c4),
    "c5": ("complete orthogonal idempotents", c5),
    "c6": ("radical codimension and two constructions", c6),
    "c7": ("Loewy series", c7),
    "c8": ("Ext-quiver", c8),
    "c9": ("Bidigare isomorphism", c9),
    "c10": ("Solomon radical dimensions", c10),
    "c11": ("Dynkin element and Lie idempotents", c11),
    "c12": ("symmetrized idempotents and splitting", c12),
    "c13": ("Solomon Cartan invariants", c13),
    "c14": ("Loewy series of B_n", c14),
    "c15": ("characteristic independence", c15),
}

SUITES = {
    "core": [f"c{i}" for i in range(1, 9)],
    "solomon": [f"c{i}" for i in range(9, 15)],
    "chars": ["c15"],
    "all": list(CRITERIA),
}


def resolve_suite(name: str) -> list[str]:
    if name in SUITES:
        return SUITES[name]
    if name in CRITERIA:
        return [name]
    raise KeyError(name)


def run_criterion(name: str, n: int | None = None, field: Field = QQ) -> CheckResult:
    title, fn = CRITERIA[name]
    start = time.perf_counter()
    try:
        res = fn(n, field)
    except AssertionError as exc:
        res = CheckResult(False, f"assertion failed: {exc}")
    res.seconds = time.perf_counter() - start
    return res


def format_line(name: str, res: CheckResult) -> str:
    title = CRITERIA[name][0]
    status = "PASS" if res.ok else "FAIL"
    return f"{status} {name:>3}  {title}  [{res.seconds:.2f}s] {res.detail}"
