import pathlib
import random

import pytest

from builders import icosahedron, rp2_six_vertex
from combspin.binary_groups import LiftedPermutation, Permutation, cycle_lift
from combspin.complex import load
from combspin.corpus import builtin, pentagon_patch
from combspin.homology import GF2Basis, list_to_bits
from combspin.spin import (
    CombinatorialTrivialization,
    GaugeElement,
    NonOrientableError,
    TrivializationError,
    act_h1,
    act_h1_trivialization,
    apply_gauge,
    brute_force_spin_count,
    canonical_signs,
    canonical_trivialization,
    circuit_obstruction,
    homotopic,
    oriented_model,
    solve_spin_structures,
    stabilizer,
    transition_in_w,
    w2_cochain,
)

DATA = pathlib.Path(__file__).parent / "data"
ORIENTABLE = ["torus2", "s3_two_tet", "rp3_two_tet", "t3_six_tet", "sphere(2)", "sphere(3)", "sphere(4)"]


# -- the pentagon patch -----------------------------------------------------------

def _pentagon_transitions(patch):
    b1 = patch.signed_b1()
    return [transition_in_w(patch.n, patch.frames[i], b1[i], patch.b2[i]) for i in range(patch.length)]


def test_pentagon_transition_maps():
    F = _pentagon_transitions(pentagon_patch())
    one = LiftedPermutation.identity(3)
    assert F[0] == one
    assert F[1] == cycle_lift((2, 1, 0), 3)
    assert F[2] == one
    assert F[3] == -cycle_lift((0, 1, 2), 3)
    assert F[4] == one


def test_pentagon_circuit_product_is_minus_one():
    prod = LiftedPermutation.identity(3)
    for f in _pentagon_transitions(pentagon_patch()):
        prod = f * prod
    assert prod == LiftedPermutation.central(3)


@pytest.mark.parametrize("flipped,expected", [((0,), 1), ((1, 3), -1), ((0, 2, 4), 1)])
def test_pentagon_sign_flips(flipped, expected):
    signs = [-1 if i in flipped else 1 for i in range(5)]
    prod = LiftedPermutation.identity(3)
    for f in _pentagon_transitions(pentagon_patch().with_signs(signs)):
        prod = f * prod
    assert prod == LiftedPermutation.central(3) * (-expected)


# -- spin structures ----------------------------------------------------------------

@pytest.mark.parametrize("name,count", [
    ("torus2", 4), ("s3_two_tet", 1), ("rp3_two_tet", 2), ("t3_six_tet", 8),
    ("sphere(2)", 1), ("sphere(3)", 1), ("sphere(4)", 1), ("sphere(5)", 1), ("sphere(6)", 1),
])
def test_corpus_spin_counts(name, count):
    dc = builtin(name).complex
    s = solve_spin_structures(dc)
    assert s.feasible and s.count == count
    assert len(set(s.classes())) == count
    assert brute_force_spin_count(dc) == count
    assert all(s.contains(x) for x in s.classes())


def test_icosahedron_is_spin_once():
    s = solve_spin_structures(icosahedron())
    assert s.count == 1


@pytest.mark.parametrize("fixture,count", [
    ("k3", 1), ("lens21", 2), ("lens41", 2), ("rp3rp3", 4), ("s2xs2", 1), ("s3xs1", 2),
])
def test_fixture_spin_counts(fixture, count):
    assert solve_spin_structures(load(DATA / f"{fixture}.json")).count == count


@pytest.mark.parametrize("fixture", ["cp2", "s2xs2_twisted"])
def test_non_spin_fixtures_have_certificates(fixture):
    s = solve_spin_structures(load(DATA / f"{fixture}.json"))
    assert not s.feasible and s.count == 0
    y = list_to_bits(s.certificate)
    A = s.model.circuit_matrix
    # y annihilates the image of A but pairs oddly with w2
    assert A.transpose().apply(y) == 0
    assert bin(y & list_to_bits(s.w2)).count("1") % 2 == 1


@pytest.mark.parametrize("dc", [builtin("klein").complex, rp2_six_vertex(), load(DATA / "rp4.json")],
                         ids=["klein", "rp2", "rp4"])
def test_non_orientable_rejected(dc):
    with pytest.raises(NonOrientableError) as info:
        solve_spin_structures(dc)
    assert info.value.result.certificate


def test_brute_force_limit():
    assert brute_force_spin_count(builtin("t3_six_tet").complex, limit=3) is None


def test_circuit_matrix_matches_dual_coboundary():
    for name in ORIENTABLE:
        m = oriented_model(builtin(name).complex)
        assert m.circuit_matrix == m.dual.coboundary(1).mod2()


# -- trivializations and the gauge group ----------------------------------------------

@pytest.mark.parametrize("name", ORIENTABLE)
def test_canonical_trivialization_is_valid(name):
    t = canonical_trivialization(builtin(name).complex)
    t.check()
    t.flip((1 << t.model.num_facets) - 1).check()


def test_bad_trivialization_detected():
    t = canonical_trivialization(builtin("torus2").complex)
    frames = list(t.frames)
    frames[0] = Permutation([1, 0, 2])
    with pytest.raises(TrivializationError):
        CombinatorialTrivialization(t.model, tuple(frames), t.paths).check()


@pytest.mark.parametrize("name", ["torus2", "s3_two_tet", "rp3_two_tet", "sphere(4)"])
def test_gauge_action_axioms(name):
    m = oriented_model(builtin(name).complex)
    rng = random.Random(name)
    t = canonical_trivialization(m, rng.getrandbits(m.num_facets))
    assert apply_gauge(GaugeElement.identity(m), t) == t
    for _ in range(40):
        g, h = GaugeElement.random(m, rng), GaugeElement.random(m, rng)
        gt = apply_gauge(g, t)
        gt.check()
        assert apply_gauge(g * h, t) == apply_gauge(g, apply_gauge(h, t))
        assert apply_gauge(g.inverse(), gt) == t
        assert w2_cochain(gt) == w2_cochain(t)
        assert homotopic(t, gt)


@pytest.mark.parametrize("name", ["torus2", "rp3_two_tet", "sphere(3)"])
def test_stabilizer_is_central_pair(name):
    m = oriented_model(builtin(name).complex)
    t = canonical_trivialization(m)
    st = stabilizer(t)
    assert st["size"] == 2 == st["brute_force_size"]
    everything = GaugeElement.central(m, (1 << m.num_simplices) - 1, (1 << m.num_facets) - 1)
    assert apply_gauge(everything, t) == t


def test_canonical_signs_recovers_flip():
    m = oriented_model(builtin("t3_six_tet").complex)
    rng = random.Random(1)
    for _ in range(10):
        x = rng.getrandbits(m.num_facets)
        t = apply_gauge(GaugeElement.random(m, rng), canonical_trivialization(m, x))
        assert m.gauge_space.reduce(canonical_signs(t)) == m.gauge_space.reduce(x)


def test_h1_action_changes_class_and_gauge_does_not():
    s = solve_spin_structures(builtin("torus2").complex)
    t0 = canonical_trivialization(s.model, s.base)
    for v in s.h1_basis:
        assert not homotopic(t0, act_h1_trivialization(t0, v))
        assert s.normalize(act_h1(s, s.base, v)) != s.normalize(s.base)
    for v in s.gauge_basis:
        assert homotopic(t0, t0.flip(v))


def test_h1_action_rejects_non_cocycle():
    # on the two-triangle torus every cochain is a cocycle, so use S^3
    s = solve_spin_structures(builtin("s3_two_tet").complex)
    bad = next(1 << f for f in range(s.model.num_facets) if s.model.circuit_matrix.apply(1 << f))
    with pytest.raises(ValueError):
        act_h1(s, s.base, bad)


def test_every_spin_class_meets_the_criterion():
    for name in ["torus2", "rp3_two_tet", "t3_six_tet"]:
        s = solve_spin_structures(builtin(name).complex)
        for x in s.classes():
            t = canonical_trivialization(s.model, x)
            assert all(circuit_obstruction(c, t) == -1 for c in s.model.circuits)


def test_w2_random_trivializations_differ_by_coboundary():
    m = oriented_model(builtin("t3_six_tet").complex)
    rng = random.Random(9)
    span = GF2Basis(m.circuit_matrix.transpose().rows)
    for _ in range(5):
        t1 = apply_gauge(GaugeElement.random(m, rng), canonical_trivialization(m, rng.getrandbits(m.num_facets)))
        t2 = apply_gauge(GaugeElement.random(m, rng), canonical_trivialization(m, rng.getrandbits(m.num_facets)))
        diff = list_to_bits(w2_cochain(t1)) ^ list_to_bits(w2_cochain(t2))
        assert diff in span


def test_json_is_expressed_in_input_ids():
    dc = builtin("rp3_two_tet").complex
    out = solve_spin_structures(dc).to_json()
    assert set(out["base"]) == {str(i) for i in range(len(dc.facet_classes))}
    assert set(out["w2"]) == {str(i) for i in range(len(dc.faces(dc.dimension - 2)))}


@pytest.mark.parametrize("name", ["torus2", "rp3_two_tet", "t3_six_tet"])
def test_relabelling_preserves_count(name):
    dc = builtin(name).complex
    rng = random.Random(name)
    order = list(range(dc.size))
    rng.shuffle(order)
    maps = {s: Permutation.random(dc.dimension + 1, rng) for s in range(dc.size)}
    other = dc.renumber_simplices(order).relabel_vertices(maps)
    assert solve_spin_structures(other).count == solve_spin_structures(dc).count
