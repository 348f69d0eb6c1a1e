"""
Built-in gluing tables for a handful of classical closed manifolds, plus the
local pentagon configuration used as a transition-map regression.

Tori come from the Kuhn (Freudenthal) subdivision of a single cube, with
facets matched up to integer translation.  The n-sphere is the double of an
n-simplex.  The two-tetrahedron RP^3 is the lens space L(2,1).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .binary_groups import LiftedPermutation, Permutation, cycle_lift
from .complex import DeltaComplex, TriangulationError

__all__ = [
    "NamedComplex",
    "PentagonPatch",
    "builtin",
    "builtin_names",
    "double_simplex",
    "kuhn_torus",
    "klein_bottle",
    "pentagon_patch",
]


@dataclass(frozen=True)
class Expectation:
    orientable: bool
    h1_rank: int                 # rank of H^1(N; Z/2)
    spin_count: int | None       # None when spin structures are not defined (non-orientable)
    spinc_exists: bool | None

    def to_json(self) -> dict:
        return {
            "orientable": self.orientable,
            "h1_z2_rank": self.h1_rank,
            "spin_count": self.spin_count,
            "spinc_exists": self.spinc_exists,
        }


@dataclass(frozen=True)
class NamedComplex:
    name: str
    complex: DeltaComplex
    expected: Expectation
    description: str = ""


def _table(n: int, rows) -> DeltaComplex:
    return DeltaComplex(n, rows)


def double_simplex(n: int) -> DeltaComplex:
    """Two n-simplices glued facet-to-facet by the identity: the n-sphere."""
    if not 2 <= n <= 8:
        raise ValueError(f"double simplex is supported for 2 <= n <= 8, got {n}")
    ident = Permutation.identity(n + 1)
    return _table(n, [[(1, ident)] * (n + 1), [(0, ident)] * (n + 1)])


def kuhn_torus(n: int) -> DeltaComplex:
    """n! simplices v_0 = 0, v_k = v_{k-1} + e_{pi(k)} filling one cube of R^n / Z^n.

    Two facets are glued when their vertex sets differ by an integer
    translation; translating so the componentwise minimum is 0 normalises them.
    """
    simplices = []
    for pi in itertools.permutations(range(n)):
        pt = [0] * n
        verts = [tuple(pt)]
        for axis in pi:
            pt[axis] += 1
            verts.append(tuple(pt))
        simplices.append(verts)

    buckets: dict = {}
    for s, verts in enumerate(simplices):
        for i in range(n + 1):
            pts = [(j, p) for j, p in enumerate(verts) if j != i]
            low = [min(p[c] for _, p in pts) for c in range(n)]
            normal = {j: tuple(p[c] - low[c] for c in range(n)) for j, p in pts}
            buckets.setdefault(frozenset(normal.values()), []).append((s, i, normal))
    rows = [[None] * (n + 1) for _ in simplices]
    for key, members in buckets.items():
        if len(members) != 2:
            raise TriangulationError(f"torus facet {sorted(key)} has {len(members)} incident simplices")
        for (a, ia, na), (b, ib, nb) in (members, members[::-1]):
            where = {pt: idx for idx, pt in nb.items()}
            images = [0] * (n + 1)
            for v, pt in na.items():
                images[v] = where[pt]
            images[ia] = ib
            rows[a][ia] = (b, Permutation(images))
    return _table(n, rows)


def klein_bottle() -> DeltaComplex:
    """Unit square cut along its diagonal; bottom ~ top, right ~ left with a flip."""
    # A = (0,0),(1,0),(1,1);  B = (0,0),(0,1),(1,1)
    rows = [
        [(1, Permutation([2, 1, 0])), (1, Permutation([0, 1, 2])), (1, Permutation([1, 2, 0]))],
        [(0, Permutation([2, 0, 1])), (0, Permutation([0, 1, 2])), (0, Permutation([2, 1, 0]))],
    ]
    return _table(2, rows)


_RP3_ROWS = [
    [(1, [3, 1, 2, 0]), (1, [0, 2, 1, 3]), (0, [0, 1, 3, 2]), (0, [0, 1, 3, 2])],
    [(1, [1, 2, 3, 0]), (1, [3, 0, 1, 2]), (0, [0, 2, 1, 3]), (0, [3, 1, 2, 0])],
]


def rp3_two_tet() -> DeltaComplex:
    return _table(3, [[(t, Permutation(p)) for t, p in row] for row in _RP3_ROWS])


def _sphere_entry(n: int) -> NamedComplex:
    return NamedComplex(f"sphere({n})", double_simplex(n), Expectation(True, 0, 1, True),
                        f"double {n}-simplex, the {n}-sphere")


_BUILDERS = {
    "torus2": lambda: NamedComplex("torus2", kuhn_torus(2), Expectation(True, 2, 4, True),
                                   "two-triangle torus"),
    "klein": lambda: NamedComplex("klein", klein_bottle(), Expectation(False, 2, None, None),
                                  "two-triangle Klein bottle"),
    "s3_two_tet": lambda: NamedComplex("s3_two_tet", double_simplex(3), Expectation(True, 0, 1, True),
                                       "two-tetrahedron 3-sphere"),
    "rp3_two_tet": lambda: NamedComplex("rp3_two_tet", rp3_two_tet(), Expectation(True, 1, 2, True),
                                        "two-tetrahedron RP^3 = L(2,1)"),
    "t3_six_tet": lambda: NamedComplex("t3_six_tet", kuhn_torus(3), Expectation(True, 3, 8, True),
                                       "six-tetrahedron 3-torus"),
}

_SPHERE = re.compile(r"^sphere\((\d+)\)$|^sphere(\d+)$")


def builtin_names() -> list[str]:
    return list(_BUILDERS) + [f"sphere({n})" for n in range(2, 7)]


def builtin(name: str) -> NamedComplex:
    m = _SPHERE.match(name.strip())
    if m:
        n = int(m.group(1) or m.group(2))
        if not 2 <= n <= 6:
            raise KeyError(f"sphere dimension must be between 2 and 6, got {n}")
        return _sphere_entry(n)
    try:
        return _BUILDERS[name.strip()]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(builtin_names())}") from None


# ---------------------------------------------------------------------------
# the pentagon patch: five triangles around one vertex W
# ---------------------------------------------------------------------------

@dataclass
class PentagonPatch:
    """Local data around a vertex W of a surface, all in W-coordinates.

    In W-coordinates every triangle has W at 0 and the circuit crosses from
    S_i to S_{i+1} through the edge opposite vertex 1.  ``frames[i]`` is the
    even extension of the frame of S_i; ``b1[i]``, ``b2[i]`` are the two
    halves of the path across F_i seen from S_i and from S_{i+1}.
    """

    n: int
    frames: list[Permutation]
    b1: list[LiftedPermutation]
    b2: list[LiftedPermutation]
    signs: list[int] = field(default_factory=lambda: [1] * 5)

    @property
    def length(self) -> int:
        return len(self.b1)

    def with_signs(self, signs) -> "PentagonPatch":
        return PentagonPatch(self.n, list(self.frames), list(self.b1), list(self.b2), list(signs))

    def signed_b1(self) -> list[LiftedPermutation]:
        """First halves with ``signs`` applied (a -1 negates that B1)."""
        return [b if s > 0 else -b for b, s in zip(self.b1, self.signs)]


def pentagon_patch() -> PentagonPatch:
    """The framed pentagon with the short representatives of every path."""
    rank = 3
    r012 = cycle_lift((0, 1, 2), rank)
    r210 = cycle_lift((2, 1, 0), rank)
    one = LiftedPermutation.identity(rank)
    at1 = Permutation([1, 2, 0])            # frame pointing at vertex 1
    at0 = Permutation([0, 1, 2])            # frame pointing at W itself
    frames = [at1, at1, at0, at0, at1]
    b1 = [r012, r210, one, r210, r012]
    b2 = [one] * 5
    return PentagonPatch(2, frames, b1, b2)
