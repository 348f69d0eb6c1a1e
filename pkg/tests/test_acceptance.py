"""
Acceptance suite: eleven end-to-end criteria, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.  Every comparison is exact.
"""

from __future__ import annotations

import itertools
import json
import pathlib
import random
import subprocess
import sys
import time

import pytest

HERE = pathlib.Path(__file__).parent
if str(HERE) not in sys.path:
    sys.path.insert(0, str(HERE))

from oracles import (  # noqa: E402
    gf2_brute_bitmask,
    simplicial_components,
    simplicial_h1_z2_rank,
    smith_invariants_by_minors,
)
from combspin.binary_groups import (  # noqa: E402
    LiftedPermutation,
    Permutation,
    cycle_lift,
    element_order,
    enumerate_cover,
)
from combspin.complex import orient_and_w1  # noqa: E402
from combspin.corpus import builtin, builtin_names, pentagon_patch  # noqa: E402
from combspin.homology import (  # noqa: E402
    GF2Basis,
    GF2Matrix,
    GF2Solution,
    IntMatrix,
    dual_cochain_complex,
    gf2_solve,
    list_to_bits,
    smith_normal_form,
)
from combspin.quaternion_models import (  # noqa: E402
    build_a5_model,
    build_sigma4_model,
    model_check,
    order_histogram,
)
from combspin.spin import (  # noqa: E402
    GaugeElement,
    NonOrientableError,
    apply_gauge,
    brute_force_spin_count,
    canonical_trivialization,
    oriented_model,
    solve_spin_structures,
    stabilizer,
    transition_in_w,
    w2_cochain,
)
from combspin.spinc import find_spinc, h2_presentation, orbit, spinc_check  # noqa: E402

ORIENTABLE = ["torus2", "s3_two_tet", "rp3_two_tet", "t3_six_tet"] + [f"sphere({n})" for n in range(2, 7)]
EXPECTED_COUNTS = {"torus2": 4, "s3_two_tet": 1, "rp3_two_tet": 2, "t3_six_tet": 8,
                   **{f"sphere({n})": 1 for n in range(2, 7)}}
OCTAHEDRAL = {1: 1, 2: 1, 3: 8, 4: 18, 6: 8, 8: 12}
ICOSAHEDRAL = {1: 1, 2: 1, 3: 20, 4: 30, 5: 24, 6: 20, 10: 24}


class Failure(AssertionError):
    pass


def check(cond, message):
    if not cond:
        raise Failure(message)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def _relations_for(a, b, rank, lifts, minus, failures):
    """Relations (3)-(6) for the cycle pair (a, b); tallies failures by relation."""
    x, y = lifts(a), lifts(b)
    n = 0

    def record(ok, key):
        if not ok:
            failures[key] = failures.get(key, 0) + 1

    if b == a:
        record(x ** len(a) == minus, f"power of {len(a)}-cycles")
        for i in range(1, len(a) - 1):
            record(x == lifts(a[:i + 1]) * lifts(a[i:]), "splitting")
        record(x.project() == Permutation.from_cycles(rank, [a]), "projection")
        n += 3
    phi = Permutation.from_cycles(rank, [b])
    sign = (-1) ** ((len(a) - 1) * (len(b) - 1))
    record(y * x * y.inverse() == lifts(tuple(phi(v) for v in a)) * sign, "conjugation")
    n += 1
    if not set(a) & set(b):
        record(x * y == (y * x) * sign, "disjoint commutation")
        n += 1
    return n


def criterion_1():
    rank = 5
    cycles = [c for k in range(2, rank + 1) for c in itertools.permutations(range(rank), k)]
    table = {c: cycle_lift(c, rank) for c in cycles}
    minus = LiftedPermutation.central(rank)
    exhaustive_fail: dict = {}
    exhaustive = 0
    for a in cycles:
        for b in cycles:
            exhaustive += _relations_for(a, b, rank, table.__getitem__, minus, exhaustive_fail)
    rng = random.Random(2024)
    random_fail: dict = {}
    randomized = 0
    cache = {}
    while randomized < 10_000:
        r = rng.randint(2, 6)
        a = tuple(rng.sample(range(r), rng.randint(2, r)))
        b = a if rng.random() < 0.25 else tuple(rng.sample(range(r), rng.randint(2, r)))

        def lifts(c, r=r):
            if (c, r) not in cache:
                cache[(c, r)] = cycle_lift(c, r)
            return cache[(c, r)]

        randomized += _relations_for(a, b, r, lifts, LiftedPermutation.central(r), random_fail)
    summary = (f"{exhaustive} exhaustive checks on {len(cycles)} cycles (failures {exhaustive_fail or 0}), "
               f"{randomized} randomized (failures {random_fail or 0})")
    check(not exhaustive_fail and not random_fail, summary)
    return summary


def criterion_2():
    sizes = {"A4~": len(enumerate_cover(4, True)), "S4~": len(enumerate_cover(4)),
             "A5~": len(enumerate_cover(5, True))}
    check(sizes == {"A4~": 24, "S4~": 48, "A5~": 120}, f"orders {sizes}")
    for rank in range(2, 7):
        for a, b in itertools.combinations(range(rank), 2):
            check(element_order(cycle_lift((a, b), rank)) == 4, f"[{a} {b}] order")
    threes = {element_order(s * cycle_lift(c, 5)) for c in itertools.permutations(range(5), 3) for s in (1, -1)}
    fives = {element_order(s * cycle_lift(c, 5)) for c in itertools.permutations(range(5), 5) for s in (1, -1)}
    check(threes == {3, 6}, f"3-cycle orders {threes}")
    check(fives == {5, 10}, f"5-cycle orders {fives}")
    return f"orders {sizes}; transpositions 4; 3-cycles {sorted(threes)}; 5-cycles {sorted(fives)}"


def criterion_3():
    s4, a5 = build_sigma4_model(), build_a5_model()
    check(s4.check_closure() and a5.check_closure(), "a model is not closed")
    check(order_histogram(s4.orders()) == OCTAHEDRAL, "octahedral histogram")
    check(order_histogram(a5.orders()) == ICOSAHEDRAL, "icosahedral histogram")
    report = model_check()
    check(report["sigma4"]["found"], report["sigma4"]["reason"])
    check(report["a5"]["found"], report["a5"]["reason"])
    return "48- and 120-element models closed, histograms match, isomorphisms verified"


def criterion_4():
    p = pentagon_patch()
    F = [transition_in_w(p.n, p.frames[i], p.b1[i], p.b2[i]) for i in range(p.length)]
    one = LiftedPermutation.identity(3)
    expected = [one, cycle_lift((2, 1, 0), 3), one, -cycle_lift((0, 1, 2), 3), one]
    check(F[0] == one, f"F_1 = {F[0]}")
    check(F == expected, f"transitions {[str(f) for f in F]}")
    prod = one
    for f in F:
        prod = f * prod
    check(prod == LiftedPermutation.central(3), f"circuit product {prod}")
    return "F_1 = 1 and F_5 F_4 F_3 F_2 F_1 = 1 . -[0 1 2] . 1 . [2 1 0] . 1 = -1"


def criterion_5(pairs: int = 1000):
    rng = random.Random(5)
    sizes = []
    for name in ORIENTABLE:
        dc = builtin(name).complex
        m = oriented_model(dc)
        t = canonical_trivialization(m, rng.getrandbits(m.num_facets))
        check(apply_gauge(GaugeElement.identity(m), t) == t, f"identity fails on {name}")
        for _ in range(pairs):
            g, h = GaugeElement.random(m, rng), GaugeElement.random(m, rng)
            check(apply_gauge(g * h, t) == apply_gauge(g, apply_gauge(h, t)), f"associativity fails on {name}")
        st = stabilizer(t)
        comps = simplicial_components(dc.to_json())
        check(st["size"] == 2 ** comps, f"stabilizer size {st['size']} on {name}")
        if st["brute_force_size"] is not None:
            check(st["brute_force_size"] == st["size"], f"brute-force stabilizer on {name}")
        sizes.append(st["size"])
    return f"{pairs} gauge pairs on each of {len(ORIENTABLE)} complexes; stabilizers {sorted(set(sizes))}"


def criterion_6():
    out = []
    for name in ORIENTABLE:
        dc = builtin(name).complex
        s = solve_spin_structures(dc)
        want = EXPECTED_COUNTS[name]
        check(s.feasible and s.count == want, f"{name}: count {s.count}, expected {want}")
        brute = brute_force_spin_count(dc, limit=14)
        if brute is not None:
            check(brute == want, f"{name}: brute force {brute}")
        h1 = dual_cochain_complex(dc).cohomology(1, "Z2").free_rank
        oracle = simplicial_h1_z2_rank(dc.to_json())
        check(h1 == oracle, f"{name}: H^1 rank {h1} vs simplicial {oracle}")
        check(2 ** h1 == want, f"{name}: 2^H1 = {2 ** h1}")
        out.append(f"{name}={want}")
    try:
        solve_spin_structures(builtin("klein").complex)
        raise Failure("klein was not rejected")
    except NonOrientableError as exc:
        cert = exc.result.certificate
        classes = builtin("klein").complex.facet_classes
        even = sum(classes[f].rho.is_even() for f in cert)
        check(cert and even % 2 == 1, "klein certificate is not an orientation-reversing loop")
    return ", ".join(out) + "; klein rejected with certificate"


def criterion_7():
    rng = random.Random(7)
    for name in ORIENTABLE:
        m = oriented_model(builtin(name).complex)
        ws = []
        for _ in range(2):
            t = canonical_trivialization(m, rng.getrandbits(m.num_facets))
            t = apply_gauge(GaugeElement.random(m, rng), t)
            ws.append(list_to_bits(w2_cochain(t)))
        span = GF2Basis(m.circuit_matrix.transpose().rows)
        check((ws[0] ^ ws[1]) in span, f"{name}: w2 difference is not a coboundary")
        # pairing with the boundary of every dual 3-cell, read off the codim-3 links
        w2 = w2_cochain(canonical_trivialization(m))
        for link in m.dc.links:
            total = sum(w2[face] * count for face, count in link.incidence.items())
            check(total % 2 == 0, f"{name}: w2 pairs oddly with dual 3-cell {link.face}")
    return f"w2 well defined and closed on {len(ORIENTABLE)} complexes"


def criterion_8():
    for name in ("torus2", "t3_six_tet"):
        s = solve_spin_structures(builtin(name).complex)
        classes = set(s.classes())
        group = []
        for mask in range(1 << len(s.h1_basis)):
            w = 0
            for j, v in enumerate(s.h1_basis):
                if (mask >> j) & 1:
                    w ^= v
            check(s.model.circuit_matrix.apply(w) == 0, f"{name}: H^1 element is not a cocycle")
            group.append(w)
        for x in classes:
            orbit_x = [s.normalize(x ^ w) for w in group]
            check(len(set(orbit_x)) == len(group), f"{name}: action is not free")
            check(set(orbit_x) == classes, f"{name}: action is not transitive")
    return "H^1 acts freely and transitively on torus2 (4 classes) and t3_six_tet (8 classes)"


def criterion_9():
    for name in ORIENTABLE:
        res = find_spinc(builtin(name).complex)
        check(res.exists, f"{name}: no spin-c structure found")
        s = res.structure
        verdicts = spinc_check(s.trivialization(), s.beta)
        check(all(verdicts), f"{name}: twisted criterion fails on some circuit")
        w2_here = s.model.circuit_matrix.apply(s.signs) ^ list_to_bits(res.w2)
        check(list_to_bits([b & 1 for b in s.beta]) == w2_here, f"{name}: beta is not w2 mod 2")
    dc = builtin("rp3_two_tet").complex
    h2 = h2_presentation(dc)
    check((h2.free_rank, h2.torsion) == (0, [2]), f"RP^3 H^2 = {h2.free_rank}, {h2.torsion}")
    reps = orbit(find_spinc(dc).structure, h2.generators)
    check(len(reps) == 2, f"RP^3 orbit has {len(reps)} classes")
    return f"spin-c found on {len(ORIENTABLE)} complexes; RP^3 H^2 = Z/2 orbit has 2 classes"


def criterion_10():
    rng = random.Random(10)
    for _ in range(200):
        ncols = rng.randint(1, 16)
        nrows = rng.randint(1, 12)
        rows = [rng.getrandbits(ncols) for _ in range(nrows)]
        rhs = [rng.getrandbits(1) for _ in range(nrows)]
        sol = gf2_solve(GF2Matrix(rows, ncols), list_to_bits(rhs))
        truth = gf2_brute_bitmask(rows, rhs, ncols)
        got = set(sol.solutions()) if isinstance(sol, GF2Solution) else set()
        check(got == truth, "gf2_solve disagrees with enumeration")
    for _ in range(200):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        data = [[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)]
        snf = smith_normal_form(IntMatrix(data))
        check(snf.diagonal == smith_invariants_by_minors(data), f"Smith invariants differ on {data}")
    for name in builtin_names():
        dual = dual_cochain_complex(builtin(name).complex)
        check((dual.d[1].mod2() @ dual.d[0].mod2()).is_zero(), f"{name}: d1 d0 != 0 mod 2")
        if len(dual.d) > 2:
            check((dual.d[2] @ dual.d[1]).is_zero(), f"{name}: d2 d1 != 0")
    return "200 GF(2) systems, 200 Smith forms, dd = 0 on every builtin"


def _cli(args):
    cmd = [sys.executable, "-m", "combspin", *args]
    return subprocess.run(cmd, capture_output=True, check=False)


def _verdicts(dc):
    o = orient_and_w1(dc)
    out = {"orientable": o.orientable, "counts": dc.counts()}
    dual = dual_cochain_complex(dc)
    out["z2"] = [dual.cohomology(k, "Z2").free_rank for k in range(dc.dimension + 1)]
    if o.orientable:
        out["spin"] = solve_spin_structures(dc).count
        out["spinc"] = find_spinc(dc).exists
        h2 = dual.cohomology(2, "Z")
        out["H2"] = (h2.free_rank, tuple(h2.torsion))
    return out


def criterion_11():
    commands = [["invariants", "builtin:rp3_two_tet"], ["spin", "builtin:t3_six_tet", "--enumerate"],
                ["spinc", "builtin:rp3_two_tet"], ["spin", str(HERE / "data" / "cp2.json")]]
    for args in commands:
        a, b = _cli(args), _cli(args)
        check(a.stdout == b.stdout and a.returncode == b.returncode, f"nondeterministic output for {args}")
        json.loads(a.stdout)
    rng = random.Random(11)
    for name in builtin_names():
        dc = builtin(name).complex
        base = _verdicts(dc)
        for _ in range(2):
            order = list(range(dc.size))
            rng.shuffle(order)
            maps = {s: Permutation.random(dc.dimension + 1, rng) for s in range(dc.size)}
            other = dc.renumber_simplices(order).relabel_vertices(maps)
            other.validate()
            check(_verdicts(other) == base, f"{name}: verdicts change under relabelling")
    return f"{len(commands)} CLI commands byte-identical; {len(builtin_names())} builtins relabel-invariant"


CRITERIA = [
    (1, "cover group relations", criterion_1),
    (2, "binary group orders", criterion_2),
    (3, "quaternion model check", criterion_3),
    (4, "pentagon regression", criterion_4),
    (5, "gauge action axioms and stabilizers", criterion_5),
    (6, "spin counts on the corpus", criterion_6),
    (7, "w2 well-definedness", criterion_7),
    (8, "H^1 torsor", criterion_8),
    (9, "spin-c existence and torsor", criterion_9),
    (10, "linear algebra oracles", criterion_10),
    (11, "determinism and relabel invariance", criterion_11),
]


def evaluate(number: int, title: str, fn) -> tuple[bool, str]:
    start = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except Failure as exc:
        ok, detail = False, str(exc)
    elapsed = time.perf_counter() - start
    return ok, f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({elapsed:.1f}s) - {detail}"


def _record(line: str):
    print(line)
    try:
        from conftest import ACCEPTANCE_LINES
    except ImportError:  # pragma: no cover - run as a script
        return
    ACCEPTANCE_LINES.append(line)


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_acceptance(number, title, fn):
    ok, line = evaluate(number, title, fn)
    _record(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
