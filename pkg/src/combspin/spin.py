"""
Combinatorial trivializations of the tangent bundle over the dual 1-skeleton,
their gauge group, the circuit criterion for extending over dual 2-cells,
and the resulting enumeration of spin structures.

All computations run on the *oriented model* of the input: negatively
oriented simplices are relabelled by the transposition (n-1 n), so every
gluing map is odd and every codim-2 embedding w_i can be taken even.  Frames
are even permutations of the simplex vertices (the first n-1 images are the
frame's target vertices), and paths are pairs of binary-alternating elements.

Transition maps are evaluated in W-coordinates: for the i-th step of the
circuit around W the simplex S_i is viewed through w_i, so F_i is the facet
{0..n-2, n} of S_i, the previous facet F_{i-1} is {0..n-1}, and the gluing
S_i -> S_{i+1} is the transposition (n-1 n).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from .binary_groups import (
    LiftedPermutation,
    Permutation,
    canonical_lift,
    conjugate_by_permutation,
    cycle_lift,
    transposition_lift,
)
from .complex import Codim2Circuit, DeltaComplex, OrientationResult, orient_and_w1
from .homology import (
    DualComplex,
    GF2Basis,
    GF2Matrix,
    GF2Solution,
    bits_to_list,
    dual_cochain_complex,
    gf2_nullspace,
    gf2_solve,
    list_to_bits,
)

__all__ = [
    "SpinError",
    "NonOrientableError",
    "TrivializationError",
    "OrientedModel",
    "Frame",
    "CombinatorialPath",
    "CombinatorialTrivialization",
    "GaugeElement",
    "SpinStructureSet",
    "oriented_model",
    "canonical_trivialization",
    "apply_gauge",
    "transition_in_w",
    "transition_map",
    "circuit_product",
    "circuit_obstruction",
    "w2_cochain",
    "solve_spin_structures",
    "act_h1",
    "act_h1_trivialization",
    "homotopic",
    "canonical_signs",
    "stabilizer",
    "brute_force_spin_count",
]


class SpinError(RuntimeError):
    """Internal consistency failure in the framing calculus."""


class NonOrientableError(ValueError):
    def __init__(self, result: OrientationResult):
        self.result = result
        super().__init__(f"input is not orientable; odd dual cycle through facet classes {list(result.certificate)}")


class TrivializationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# the oriented model
# ---------------------------------------------------------------------------

class OrientedModel:
    """An orientable complex together with its oriented relabelling.

    ``facet_to_input[m]`` is the id, in the input complex, of model facet
    class m; likewise ``face2_to_input`` for codim-2 classes.
    """

    def __init__(self, dc: DeltaComplex):
        self.input = dc
        self.orientation_result = orient_and_w1(dc)
        if not self.orientation_result.orientable:
            raise NonOrientableError(self.orientation_result)
        self.orientation = self.orientation_result.orientation
        self.dc = dc.oriented_model(self.orientation)
        self.n = dc.dimension
        self.rank = self.n + 1
        n = self.n
        tau = Permutation.transposition(n + 1, n - 1, n)
        ident = Permutation.identity(n + 1)
        relabel = [tau if o < 0 else ident for o in self.orientation]
        self.facet_to_input = [dc.facet_of[(fc.s1, relabel[fc.s1](fc.i1))] for fc in self.dc.facet_classes]
        look = dc.face_lookup(n - 2)
        self.face2_to_input = []
        for fc in self.dc.faces(n - 2):
            s, verts = fc.rep
            self.face2_to_input.append(look[(s, frozenset(relabel[s](v) for v in verts))])
        for fc in self.dc.facet_classes:
            if fc.rho.is_even():  # pragma: no cover - guaranteed by the relabelling
                raise SpinError("oriented model has an even gluing")

    @property
    def num_simplices(self) -> int:
        return self.dc.size

    @property
    def num_facets(self) -> int:
        return len(self.dc.facet_classes)

    @cached_property
    def circuits(self) -> list[Codim2Circuit]:
        out = self.dc.circuits
        for c in out:
            for st in c.steps:
                if not st.w.is_even():  # pragma: no cover
                    raise SpinError("codim-2 embedding is not positively oriented")
        return out

    @cached_property
    def dual(self) -> DualComplex:
        return dual_cochain_complex(self.dc)

    @cached_property
    def circuit_matrix(self) -> GF2Matrix:
        """Occurrence counts mod 2: rows are circuits, columns facet classes."""
        rows = []
        for c in self.circuits:
            r = 0
            for f, k in c.facet_counts().items():
                if k & 1:
                    r |= 1 << f
            rows.append(r)
        A = GF2Matrix(rows, self.num_facets)
        if A != self.dual.d[1].mod2():
            raise SpinError("circuit incidences disagree with the dual coboundary")
        return A

    @cached_property
    def gauge_matrix(self) -> GF2Matrix:
        """d^0 mod 2: the sign pattern produced by flipping one simplex."""
        return self.dual.d[0].mod2()

    @cached_property
    def gauge_space(self) -> GF2Basis:
        return GF2Basis(self.gauge_matrix.transpose().rows)

    @cached_property
    def face_maps(self) -> list[tuple[Permutation, Permutation]]:
        """(f1, f2) per facet class: facet coordinates -> side-1 / side-2 vertices."""
        n = self.n
        out = []
        for fc in self.dc.facet_classes:
            rest = [v for v in range(n + 1) if v != fc.i1]
            f1 = Permutation(rest + [fc.i1])
            out.append((f1, fc.rho * f1))
        return out

    def facet_vector_to_input(self, x: int) -> dict[str, int]:
        bits = bits_to_list(x, self.num_facets)
        return {str(self.facet_to_input[m]): bits[m] for m in sorted(range(self.num_facets),
                                                                  key=self.facet_to_input.__getitem__)}

    def facet_vector_from_input(self, values) -> int:
        """Accepts a list indexed by input facet ids or a dict keyed by them."""
        if isinstance(values, dict):
            get = lambda k: int(values.get(str(k), values.get(k, 0)))  # noqa: E731
        else:
            if len(values) != self.num_facets:
                raise ValueError(f"expected {self.num_facets} facet values, got {len(values)}")
            get = lambda k: int(values[k])  # noqa: E731
        return list_to_bits([get(self.facet_to_input[m]) & 1 for m in range(self.num_facets)])

    def face2_vector_to_input(self, values: list[int]) -> dict[str, int]:
        return {str(self.face2_to_input[m]): values[m]
                for m in sorted(range(len(values)), key=self.face2_to_input.__getitem__)}

    def face2_vector_from_input(self, values) -> list[int]:
        count = len(self.face2_to_input)
        if isinstance(values, dict):
            return [int(values.get(str(self.face2_to_input[m]), values.get(self.face2_to_input[m], 0)))
                    for m in range(count)]
        if len(values) != count:
            raise ValueError(f"expected {count} codim-2 values, got {len(values)}")
        return [int(values[self.face2_to_input[m]]) for m in range(count)]


def oriented_model(dc: DeltaComplex | OrientedModel) -> OrientedModel:
    return dc if isinstance(dc, OrientedModel) else OrientedModel(dc)


# ---------------------------------------------------------------------------
# trivializations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """An (n-1)-tuple of distinct vertices of a simplex, stored as its even extension."""

    simplex: int
    extension: Permutation

    def __post_init__(self):
        if not self.extension.is_even():
            raise TrivializationError(f"frame extension {self.extension} of simplex {self.simplex} is odd")

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.extension.images[:-2]

    @classmethod
    def from_tuple(cls, simplex: int, vertices, rank: int) -> "Frame":
        vertices = list(vertices)
        rest = [v for v in range(rank) if v not in vertices]
        p = Permutation(vertices + rest)
        if not p.is_even():
            p = Permutation(vertices + rest[::-1])
        return cls(simplex, p)


@dataclass(frozen=True)
class CombinatorialPath:
    facet: int
    b1: LiftedPermutation
    b2: LiftedPermutation


@dataclass(frozen=True)
class CombinatorialTrivialization:
    """Frames per simplex and a path per facet class, on an oriented model."""

    model: OrientedModel = field(compare=False, repr=False)
    frames: tuple[Permutation, ...]
    paths: tuple[tuple[LiftedPermutation, LiftedPermutation], ...]

    def frame(self, s: int) -> Frame:
        return Frame(s, self.frames[s])

    def path(self, f: int) -> CombinatorialPath:
        return CombinatorialPath(f, *self.paths[f])

    def with_paths(self, paths) -> "CombinatorialTrivialization":
        return CombinatorialTrivialization(self.model, self.frames, tuple(paths))

    def flip(self, x: int) -> "CombinatorialTrivialization":
        """Negate B1 on every facet class whose bit is set in ``x``."""
        return self.with_paths(
            (-b1 if (x >> f) & 1 else b1, b2) for f, (b1, b2) in enumerate(self.paths))

    def check(self) -> None:
        """Raise TrivializationError unless every rigid-motion condition holds."""
        m = self.model
        n = m.n
        for s, v in enumerate(self.frames):
            if not v.is_even():
                raise TrivializationError(f"frame of simplex {s} is not even")
        for fc, (b1, b2) in zip(m.dc.facet_classes, self.paths):
            if not (b1.is_even() and b2.is_even()):
                raise TrivializationError(f"path on facet class {fc.index} leaves the alternating group")
            p1 = b1.base * self.frames[fc.s1]
            p2 = b2.base * self.frames[fc.s2]
            for j in range(n - 1):
                if p1(j) == fc.i1 or p2(j) == fc.i2:
                    raise TrivializationError(f"path on facet class {fc.index} does not reach the facet")
                if fc.rho(p1(j)) != p2(j):
                    raise TrivializationError(f"path halves on facet class {fc.index} disagree")


def _even_completion(prefix: list[int], rank: int) -> Permutation:
    rest = [v for v in range(rank) if v not in prefix]
    p = Permutation(prefix + rest)
    return p if p.is_even() else Permutation(prefix + rest[::-1])


@dataclass(frozen=True)
class _CanonicalData:
    b1: tuple[LiftedPermutation, ...]
    b2: tuple[LiftedPermutation, ...]


def _canonical_paths(m: OrientedModel) -> _CanonicalData:
    cache = m.__dict__.get("_canonical_paths")
    if cache is not None:
        return cache
    n = m.n
    b1s, b2s = [], []
    for fc in m.dc.facet_classes:
        rest = [v for v in range(n + 1) if v != fc.i1]
        p1 = _even_completion(rest[: n - 1], n + 1)
        p2 = _even_completion([fc.rho(p1(j)) for j in range(n - 1)], n + 1)
        b1s.append(canonical_lift(p1))
        b2s.append(canonical_lift(p2))
    data = _CanonicalData(tuple(b1s), tuple(b2s))
    m.__dict__["_canonical_paths"] = data
    return data


def canonical_trivialization(dc, signs: int = 0) -> CombinatorialTrivialization:
    """Identity frames, canonical paths, B1 negated where ``signs`` has a bit set."""
    m = oriented_model(dc)
    data = _canonical_paths(m)
    ident = Permutation.identity(m.rank)
    t = CombinatorialTrivialization(m, tuple([ident] * m.num_simplices), tuple(zip(data.b1, data.b2)))
    if signs:
        t = t.flip(signs)
    t.check()
    return t


# ---------------------------------------------------------------------------
# gauge group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaugeElement:
    """One binary-alternating element per simplex (rank n+1) and one
    binary-symmetric element per facet class (rank n)."""

    simplex: tuple[LiftedPermutation, ...]
    facet: tuple[LiftedPermutation, ...]

    @classmethod
    def identity(cls, dc) -> "GaugeElement":
        m = oriented_model(dc)
        return cls(tuple(LiftedPermutation.identity(m.rank) for _ in range(m.num_simplices)),
                   tuple(LiftedPermutation.identity(m.n) for _ in range(m.num_facets)))

    @classmethod
    def random(cls, dc, rng: random.Random | None = None) -> "GaugeElement":
        m = oriented_model(dc)
        rng = rng or random.Random()
        simp = []
        for _ in range(m.num_simplices):
            p = Permutation.random(m.rank, rng)
            if not p.is_even():
                p = p * Permutation.transposition(m.rank, 0, 1)
            simp.append(LiftedPermutation(p, rng.choice((1, -1))))
        fac = [LiftedPermutation(Permutation.random(m.n, rng), rng.choice((1, -1)))
               for _ in range(m.num_facets)]
        return cls(tuple(simp), tuple(fac))

    @classmethod
    def central(cls, dc, simplex_bits: int = 0, facet_bits: int = 0) -> "GaugeElement":
        m = oriented_model(dc)
        return cls(tuple(LiftedPermutation.central(m.rank, -1 if (simplex_bits >> s) & 1 else 1)
                         for s in range(m.num_simplices)),
                   tuple(LiftedPermutation.central(m.n, -1 if (facet_bits >> f) & 1 else 1)
                         for f in range(m.num_facets)))

    def __mul__(self, other: "GaugeElement") -> "GaugeElement":
        return GaugeElement(tuple(a * b for a, b in zip(self.simplex, other.simplex)),
                            tuple(a * b for a, b in zip(self.facet, other.facet)))

    def inverse(self) -> "GaugeElement":
        return GaugeElement(tuple(a.inverse() for a in self.simplex), tuple(a.inverse() for a in self.facet))


def _missed_vertex(m: OrientedModel, f: int, b: LiftedPermutation, frame: Permutation, side: int) -> int:
    """k with {k} = {0..n-1} minus f_side^-1 B v (facet coordinates)."""
    n = m.n
    fmap = m.face_maps[f][side - 1].inverse()
    hit = {fmap(b.base(frame(j))) for j in range(n - 1)}
    missing = [k for k in range(n) if k not in hit]
    if len(missing) != 1:
        raise TrivializationError(f"pushed frame does not lie in facet class {f}")
    return missing[0]


def apply_gauge(g: GaugeElement, t: CombinatorialTrivialization) -> CombinatorialTrivialization:
    """The four-part action: simplex elements act on frames and on the
    incident path halves, facet elements act on their own path by conjugation
    into each side's coordinates."""
    m = t.model
    n = m.n
    frames = [a.base * v for a, v in zip(g.simplex, t.frames)]
    inv = [a.inverse() for a in g.simplex]
    paths = []
    for fc, (b1, b2), a in zip(m.dc.facet_classes, t.paths, g.facet):
        f1, f2 = m.face_maps[fc.index]
        # facet part (uses the old frames, which the simplex part leaves B v unchanged)
        if not a.is_central() or a.sign != 1:
            big = a.extend(n + 1)
            if big.is_even():
                l1 = l2 = big
            else:
                k = _missed_vertex(m, fc.index, b1, t.frames[fc.s1], 1)
                if k != _missed_vertex(m, fc.index, b2, t.frames[fc.s2], 2):
                    raise SpinError("the two halves of a path miss different facet vertices")
                l1 = big * transposition_lift(n, k, n + 1)
                l2 = big * transposition_lift(k, n, n + 1)
            b1 = conjugate_by_permutation(f1, l1) * b1
            b2 = conjugate_by_permutation(f2, l2) * b2
        b1 = b1 * inv[fc.s1]
        b2 = b2 * inv[fc.s2]
        paths.append((b1, b2))
    out = CombinatorialTrivialization(m, tuple(frames), tuple(paths))
    try:
        out.check()
    except TrivializationError as exc:  # pragma: no cover - would signal an action-law bug
        raise SpinError(f"gauge action broke a rigid-motion condition: {exc}") from None
    return out


# ---------------------------------------------------------------------------
# transition maps and the circuit criterion
# ---------------------------------------------------------------------------

def transition_in_w(n: int, frame: Permutation, b1: LiftedPermutation, b2: LiftedPermutation) -> LiftedPermutation:
    """F_i^W from W-coordinate data: frame of S_i, and the two halves of the path across F_i.

    The pushed frame must lie in {0..n-2, n}.  If it misses a vertex a of W
    the rotation [a n n-1] carries F_i back onto F_{i-1} first.
    """
    rank = n + 1
    pushed = {b1.base(frame(j)) for j in range(n - 1)}
    if n - 1 in pushed:
        raise TrivializationError("pushed frame is not contained in the facet F_i")
    missed = [a for a in range(n - 1) if a not in pushed]
    middle = b1 if not missed else cycle_lift((missed[0], n, n - 1), rank) * b1
    return b2.inverse() * middle


def _halves(t: CombinatorialTrivialization, step) -> tuple[LiftedPermutation, LiftedPermutation]:
    b1, b2 = t.paths[step.facet]
    return (b1, b2) if step.side == 1 else (b2, b1)


def transition_map(circuit: Codim2Circuit, i: int, t: CombinatorialTrivialization) -> LiftedPermutation:
    """F_i^W for the i-th step (0-based) of ``circuit``."""
    steps = circuit.steps
    st, nxt = steps[i], steps[(i + 1) % len(steps)]
    here, there = _halves(t, st)
    w_inv = st.w.inverse()
    b1 = conjugate_by_permutation(w_inv, here)
    b2 = conjugate_by_permutation(nxt.w.inverse(), there)
    frame = w_inv * t.frames[st.simplex]
    return transition_in_w(t.model.n, frame, b1, b2)


def circuit_product(circuit: Codim2Circuit, t: CombinatorialTrivialization) -> LiftedPermutation:
    """F_m^W ... F_1^W."""
    out = LiftedPermutation.identity(t.model.rank)
    for i in range(circuit.length):
        out = transition_map(circuit, i, t) * out
    if not out.is_central():
        raise SpinError(f"circuit product around codim-2 class {circuit.face} is not central: {out}")
    return out


def circuit_obstruction(circuit: Codim2Circuit, t: CombinatorialTrivialization) -> int:
    """The central sign of the circuit product; -1 means the trivialization extends."""
    return circuit_product(circuit, t).sign


def w2_cochain(t: CombinatorialTrivialization) -> list[int]:
    """GF(2) value per codim-2 class (model ids): 0 where the criterion holds."""
    return [0 if circuit_obstruction(c, t) == -1 else 1 for c in t.model.circuits]


# ---------------------------------------------------------------------------
# spin structures
# ---------------------------------------------------------------------------

@dataclass
class SpinStructureSet:
    """Spin structures as base + span(h1_basis), modulo the gauge subspace.

    Sign vectors are bitmasks over model facet classes (bit set = B1 negated
    relative to the canonical trivialization).
    """

    model: OrientedModel = field(repr=False)
    feasible: bool
    base: int | None
    h1_basis: list[int]
    gauge_basis: list[int]
    w2: list[int]
    obstruction_log: list[dict]
    certificate: list[int] | None = None     # circuits whose w2 sum is odd on a relation

    @property
    def count(self) -> int:
        return (1 << len(self.h1_basis)) if self.feasible else 0

    def normalize(self, x: int) -> int:
        """Canonical representative of the gauge class of ``x``."""
        return self.model.gauge_space.reduce(x)

    def classes(self) -> list[int]:
        if not self.feasible:
            return []
        out = []
        k = len(self.h1_basis)
        for mask in range(1 << k):
            x = self.base
            for j in range(k):
                if (mask >> j) & 1:
                    x ^= self.h1_basis[j]
            out.append(self.normalize(x))
        return out

    def contains(self, x: int) -> bool:
        A = self.model.circuit_matrix
        return self.feasible and A.apply(x) == list_to_bits(self.w2)

    def to_json(self) -> dict:
        m = self.model
        out = {
            "feasible": self.feasible,
            "count": self.count,
            "w2": m.face2_vector_to_input(self.w2),
            "h1_basis": [m.facet_vector_to_input(v) for v in self.h1_basis],
            "obstruction_log": self.obstruction_log,
        }
        if self.feasible:
            out["base"] = m.facet_vector_to_input(self.base)
        else:
            out["infeasibility_certificate"] = m.face2_vector_to_input(self.certificate)
        return out


def solve_spin_structures(dc) -> SpinStructureSet:
    m = oriented_model(dc)
    t0 = canonical_trivialization(m)
    log = []
    w2 = []
    for c in m.circuits:
        sign = circuit_obstruction(c, t0)
        w2.append(0 if sign == -1 else 1)
        log.append({"face": m.face2_to_input[c.face], "length": c.length, "product": sign})
    log.sort(key=lambda e: e["face"])
    A = m.circuit_matrix
    sol = gf2_solve(A, list_to_bits(w2))
    gauge = m.gauge_space
    if not isinstance(sol, GF2Solution):
        return SpinStructureSet(m, False, None, [], gauge.vectors(), w2, log,
                                bits_to_list(sol.certificate, len(w2)))
    h1 = GF2Basis(gauge.vectors())
    basis = [v for v in sol.nullspace if h1.add(v)]
    return SpinStructureSet(m, True, gauge.reduce(sol.particular), basis, gauge.vectors(), w2, log)


def act_h1(s: SpinStructureSet, x: int, omega: int) -> int:
    """Act on the sign vector ``x`` by the GF(2) 1-cocycle ``omega``."""
    if s.model.circuit_matrix.apply(omega):
        raise ValueError("omega is not a cocycle on the dual 1-cells")
    return x ^ omega


def act_h1_trivialization(t: CombinatorialTrivialization, omega: int) -> CombinatorialTrivialization:
    """(B1, B2) -> (omega(F) B1, B2) for a GF(2) 1-cocycle omega."""
    if t.model.circuit_matrix.apply(omega):
        raise ValueError("omega is not a cocycle on the dual 1-cells")
    return t.flip(omega)


def canonical_signs(t: CombinatorialTrivialization) -> int:
    """Sign vector of the canonical trivialization in the gauge orbit of ``t``.

    Simplex gauges straighten every frame to the identity, then one facet
    gauge per class moves the path onto the canonical one; what remains is a
    central sign on each half, and their product is the facet's bit.
    """
    m = t.model
    n = m.n
    g = GaugeElement(tuple(canonical_lift(v.inverse()) for v in t.frames),
                     tuple(LiftedPermutation.identity(n) for _ in range(m.num_facets)))
    t = apply_gauge(g, t)
    data = _canonical_paths(m)
    facet_elems = []
    for fc, (b1, _) in zip(m.dc.facet_classes, t.paths):
        f1 = m.face_maps[fc.index][0]
        # A sends f1^-1 B1 (j) to j for j <= n-2 and the missed vertex to n-1
        src = [f1.inverse()(b1.base(j)) for j in range(n - 1)]
        k = [v for v in range(n) if v not in src][0]
        images = [0] * n
        for j, v in enumerate(src):
            images[v] = j
        images[k] = n - 1
        facet_elems.append(canonical_lift(Permutation(images)))
    t = apply_gauge(GaugeElement(tuple(LiftedPermutation.identity(m.rank) for _ in range(m.num_simplices)),
                                 tuple(facet_elems)), t)
    x = 0
    for f, ((b1, b2), c1, c2) in enumerate(zip(t.paths, data.b1, data.b2)):
        if b1.base != c1.base or b2.base != c2.base:
            raise SpinError(f"canonicalisation left a non-canonical motion on facet class {f}")
        if b1.sign * c1.sign * b2.sign * c2.sign == -1:
            x |= 1 << f
    return x


def homotopic(t1: CombinatorialTrivialization, t2: CombinatorialTrivialization) -> bool:
    """Same gauge orbit?"""
    m = t1.model
    diff = canonical_signs(t1) ^ canonical_signs(t2)
    return diff in m.gauge_space


def stabilizer(t: CombinatorialTrivialization, brute_force_limit: int = 16) -> dict:
    """The stabilizer of ``t`` among central gauge elements.

    Returns its GF(2) dimension from the incidence equations eps(S) = eps(F)
    and, when the number of unknowns is small, the size found by applying
    every central element.
    """
    m = t.model
    S, F = m.num_simplices, m.num_facets
    rows = []
    for fc in m.dc.facet_classes:
        for s in (fc.s1, fc.s2):
            rows.append((1 << s) | (1 << (S + fc.index)))
    eq = GF2Matrix(rows, S + F)
    kernel = gf2_nullspace(eq)
    out = {"dimension": len(kernel), "size": 1 << len(kernel), "brute_force_size": None}
    if S + F <= brute_force_limit:
        found = 0
        for mask in range(1 << (S + F)):
            g = GaugeElement.central(m, mask & ((1 << S) - 1), mask >> S)
            if apply_gauge(g, t) == t:
                found += 1
        out["brute_force_size"] = found
    return out


def brute_force_spin_count(dc, limit: int = 14) -> int | None:
    """Count gauge classes of sign vectors passing the circuit criterion, by
    trying all 2**#F vectors.  Returns None above ``limit`` facet classes."""
    m = oriented_model(dc)
    if m.num_facets > limit:
        return None
    t0 = canonical_trivialization(m)
    # transitions of the canonical trivialization, and which facet each uses
    per_circuit = []
    for c in m.circuits:
        per_circuit.append([(transition_map(c, i, t0), c.steps[i].facet) for i in range(c.length)])
    good = set()
    one = LiftedPermutation.identity(m.rank)
    for x in range(1 << m.num_facets):
        ok = True
        for trans in per_circuit:
            prod = one
            for elem, f in trans:
                step = -elem if (x >> f) & 1 else elem
                prod = step * prod
            if prod != -1:
                ok = False
                break
        if ok:
            good.add(m.gauge_space.reduce(x))
    return len(good)
