"""
Unordered delta complexes: simplices glued along facets by vertex maps.

Gluing convention: ``gluings[s][i] = (t, rho)`` means facet i of simplex s
is attached to facet rho(i) of simplex t, vertex v of s going to vertex
rho(v) of t.  The transition map between the two characteristic maps is rho.

Faces of every dimension are grouped into classes by following gluings.  A
class is represented by its member (simplex, vertex set) with the smallest
key ``(simplex, sorted complement)``; the class's own coordinates are the
sorted vertices of that member.  For facets this makes side 1 the lowest
(simplex, facet index).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .binary_groups import Permutation

__all__ = [
    "TriangulationError",
    "DeltaComplex",
    "FaceClass",
    "FacetClass",
    "CircuitStep",
    "Codim2Circuit",
    "Codim3Link",
    "OrientationResult",
    "DualSkeleton",
    "parse_and_validate",
    "load",
    "codim2_circuits",
    "codim3_links",
    "orient_and_w1",
    "dual_skeleton",
    "permutation_sign",
]


class TriangulationError(ValueError):
    """Invalid triangulation input; ``location`` points at the offending data."""

    def __init__(self, message: str, location=None):
        self.location = location
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)


def permutation_sign(seq: Iterable[int]) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    seq = list(seq)
    sign = 1
    seen = [False] * len(seq)
    order = sorted(range(len(seq)), key=seq.__getitem__)
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass
class FaceClass:
    """One equivalence class of k-faces.

    ``members`` maps (simplex, frozenset of vertices) to the tuple giving, for
    each class coordinate 0..k, the vertex of that simplex it lands on.
    """

    dim: int
    index: int
    rep: tuple[int, tuple[int, ...]]
    members: dict = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class FacetClass:
    """A glued facet pair; side 1 is (s1, i1), side 2 is (s2, i2)."""

    index: int
    s1: int
    i1: int
    s2: int
    i2: int
    rho: Permutation  # vertex map from side 1 to side 2

    def side_of(self, s: int, i: int) -> int:
        if (s, i) == (self.s1, self.i1):
            return 1
        if (s, i) == (self.s2, self.i2):
            return 2
        raise KeyError((s, i))


@dataclass(frozen=True)
class CircuitStep:
    simplex: int
    facet: int          # facet class id of F_i
    facet_index: int    # which facet of the simplex F_i is
    side: int           # side of F_i on which this simplex sits
    w: Permutation      # W coordinates -> simplex vertices, extended to a permutation


@dataclass(frozen=True)
class Codim2Circuit:
    """S_1, F_1, ..., S_m, F_m around a codim-2 class, with embeddings w_i.

    F_i is shared by S_i and S_{i+1}; it is the facet of S_i opposite w_i(n-1),
    so the link edge w_i(n-1) -> w_i(n) is traversed positively.
    """

    face: int
    steps: tuple[CircuitStep, ...]

    @property
    def length(self) -> int:
        return len(self.steps)

    def facet_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for st in self.steps:
            out[st.facet] = out.get(st.facet, 0) + 1
        return out


@dataclass(frozen=True)
class Codim3Link:
    face: int
    triangles: int
    vertices: int
    edges: int
    euler_characteristic: int
    orientable: bool
    connected: bool
    incidence: dict  # codim-2 class id -> number of link vertices in that class

    @property
    def is_sphere(self) -> bool:
        return self.connected and self.orientable and self.euler_characteristic == 2


@dataclass(frozen=True)
class OrientationResult:
    orientable: bool
    orientation: tuple[int, ...]   # +1 / -1 per simplex
    w1: tuple[int, ...]            # GF(2) value per facet class, relative to ``orientation``
    certificate: tuple[int, ...]   # facet classes of a dual cycle with odd w1 sum (empty if orientable)
    components: int

    def to_json(self) -> dict:
        return {
            "orientable": self.orientable,
            "orientation": list(self.orientation),
            "w1": list(self.w1),
            "odd_cycle": list(self.certificate),
            "components": self.components,
        }


@dataclass(frozen=True)
class DualSkeleton:
    """Dual cells by dimension; dual k-cells are the codim-k face classes."""

    cells: tuple[int, ...]
    facet_sides: tuple[tuple[int, int], ...]  # dual 1-cell -> (simplex side 1, simplex side 2)
    circuits: tuple[Codim2Circuit, ...]
    links: tuple[Codim3Link, ...]

    def to_json(self) -> dict:
        return {
            "cells": list(self.cells),
            "edges": [list(p) for p in self.facet_sides],
            "circuit_lengths": [c.length for c in self.circuits],
        }


class DeltaComplex:
    """A closed n-dimensional unordered delta complex (validated on construction)."""

    def __init__(self, dimension: int, gluings, validate: bool = True):
        self.dimension = int(dimension)
        self.gluings = tuple(
            tuple(None if g is None else (int(g[0]), g[1] if isinstance(g[1], Permutation) else Permutation(g[1]))
                  for g in row)
            for row in gluings
        )
        if validate:
            self.validate()

    @property
    def size(self) -> int:
        return len(self.gluings)

    # -- serialisation ---------------------------------------------------
    @classmethod
    def from_json(cls, doc, validate: bool = True) -> "DeltaComplex":
        if isinstance(doc, (str, bytes)):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise TriangulationError(f"malformed JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise TriangulationError("triangulation document must be a JSON object")
        for key in ("dimension", "simplices", "gluings"):
            if key not in doc:
                raise TriangulationError(f"missing key {key!r}")
        n, count, G = doc["dimension"], doc["simplices"], doc["gluings"]
        if not isinstance(n, int) or not isinstance(count, int):
            raise TriangulationError("'dimension' and 'simplices' must be integers")
        if n < 2:
            raise TriangulationError(f"dimension must be at least 2, got {n}", "dimension")
        if not isinstance(G, list) or len(G) != count:
            raise TriangulationError(f"'gluings' must list {count} simplices", "gluings")
        rows = []
        for k, row in enumerate(G):
            if not isinstance(row, list) or len(row) != n + 1:
                raise TriangulationError(f"simplex needs {n + 1} facet entries", f"gluings[{k}]")
            out = []
            for i, ent in enumerate(row):
                loc = f"gluings[{k}][{i}]"
                if ent is None:
                    out.append(None)
                    continue
                if not isinstance(ent, dict) or "simplex" not in ent or "perm" not in ent:
                    raise TriangulationError("entry must be null or {simplex, perm}", loc)
                t, perm = ent["simplex"], ent["perm"]
                if not isinstance(t, int) or not 0 <= t < count:
                    raise TriangulationError(f"target simplex {t!r} out of range", loc)
                if not isinstance(perm, list) or sorted(perm) != list(range(n + 1)):
                    raise TriangulationError(f"perm {perm!r} is not a permutation of 0..{n}", loc)
                out.append((t, Permutation(perm)))
            rows.append(out)
        return cls(n, rows, validate=validate)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "simplices": self.size,
            "gluings": [
                [None if g is None else {"simplex": g[0], "perm": list(g[1].images)} for g in row]
                for row in self.gluings
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    # -- validation ------------------------------------------------------
    def validate(self) -> None:
        n = self.dimension
        if n < 2:
            raise TriangulationError(f"dimension must be at least 2, got {n}")
        if self.size == 0:
            raise TriangulationError("a triangulation needs at least one simplex")
        for s, row in enumerate(self.gluings):
            if len(row) != n + 1:
                raise TriangulationError(f"simplex needs {n + 1} facet entries", f"simplex {s}")
            for i, g in enumerate(row):
                loc = f"simplex {s} facet {i}"
                if g is None:
                    raise TriangulationError("unglued facet: boundary is not supported", loc)
                t, rho = g
                if not 0 <= t < self.size:
                    raise TriangulationError(f"target simplex {t} out of range", loc)
                if len(rho) != n + 1:
                    raise TriangulationError("vertex map has the wrong length", loc)
                j = rho(i)
                if (t, j) == (s, i):
                    raise TriangulationError("facet glued to itself", loc)
                back = self.gluings[t][j]
                if back is None or back[0] != s or back[1] != rho.inverse():
                    raise TriangulationError(
                        f"non-involutive gluing: reverse entry at simplex {t} facet {j} "
                        f"is {_fmt_gluing(back)}, expected simplex {s} perm {list(rho.inverse().images)}",
                        loc)
        # face classes detect self-identifications; circuits and links detect bad links
        self.faces(n - 2)
        self.circuits
        if n >= 3:
            bad = [lk for lk in self.links if not lk.is_sphere]
            if bad:
                lk = bad[0]
                raise TriangulationError(
                    f"link of codim-3 face class {lk.face} is not a 2-sphere "
                    f"(chi={lk.euler_characteristic}, orientable={lk.orientable}, connected={lk.connected})",
                    f"codim-3 class {lk.face}")

    # -- face classes ----------------------------------------------------
    def faces(self, k: int) -> list[FaceClass]:
        """Classes of k-dimensional faces, 0 <= k <= n."""
        cache = self.__dict__.setdefault("_faces", {})
        if k not in cache:
            cache[k] = self._compute_faces(k)
        return cache[k]

    def face_lookup(self, k: int) -> dict:
        cache = self.__dict__.setdefault("_face_lookup", {})
        if k not in cache:
            cache[k] = {key: fc.index for fc in self.faces(k) for key in fc.members}
        return cache[k]

    def _compute_faces(self, k: int) -> list[FaceClass]:
        n = self.dimension
        if not 0 <= k <= n:
            return []
        if k == n:
            full = frozenset(range(n + 1))
            return [FaceClass(n, s, (s, tuple(range(n + 1))), {(s, full): tuple(range(n + 1))})
                    for s in range(self.size)]
        # candidate keys ordered by (simplex, sorted complement)
        keys = []
        for s in range(self.size):
            for comp in combinations(range(n + 1), n - k):
                keys.append((s, comp))
        seen: dict = {}
        classes = []
        for s, comp in keys:
            verts = frozenset(range(n + 1)) - frozenset(comp)
            if (s, verts) in seen:
                continue
            start = tuple(sorted(verts))
            members = {(s, verts): start}
            seen[(s, verts)] = len(classes)
            queue = deque([(s, verts)])
            while queue:
                cs, cv = queue.popleft()
                cmap = members[(cs, cv)]
                for i in range(n + 1):
                    if i in cv:
                        continue
                    t, rho = self.gluings[cs][i]
                    tv = frozenset(rho(v) for v in cv)
                    tmap = tuple(rho(v) for v in cmap)
                    key = (t, tv)
                    if key in members:
                        if members[key] != tmap:
                            raise TriangulationError(
                                f"a {k}-face is identified with itself by a nontrivial permutation",
                                f"simplex {t} vertices {sorted(tv)}")
                        continue
                    members[key] = tmap
                    seen[key] = len(classes)
                    queue.append(key)
            classes.append(FaceClass(k, len(classes), (s, start), members))
        return classes

    @cached_property
    def facet_classes(self) -> list[FacetClass]:
        n = self.dimension
        out = []
        for s in range(self.size):
            for i in range(n + 1):
                t, rho = self.gluings[s][i]
                j = rho(i)
                if (t, j) < (s, i):
                    continue
                out.append(FacetClass(len(out), s, i, t, j, rho))
        return out

    @cached_property
    def facet_of(self) -> dict[tuple[int, int], int]:
        out = {}
        for fc in self.facet_classes:
            out[(fc.s1, fc.i1)] = fc.index
            out[(fc.s2, fc.i2)] = fc.index
        return out

    @cached_property
    def circuits(self) -> list[Codim2Circuit]:
        return codim2_circuits(self)

    @cached_property
    def links(self) -> list[Codim3Link]:
        return codim3_links(self)

    def counts(self) -> tuple[int, ...]:
        """Face-class counts by codimension 0..n."""
        n = self.dimension
        return tuple(len(self.faces(n - c)) for c in range(n + 1))

    # -- transformations -------------------------------------------------
    def relabel_vertices(self, maps: dict[int, Permutation]) -> "DeltaComplex":
        """Precompose characteristic maps: new vertex v of s is old vertex maps[s](v)."""
        n = self.dimension
        ident = Permutation.identity(n + 1)
        tau = [maps.get(s, ident) for s in range(self.size)]
        rows = []
        for s in range(self.size):
            row = [None] * (n + 1)
            inv_s = tau[s].inverse()
            for i_old in range(n + 1):
                t, rho = self.gluings[s][i_old]
                row[inv_s(i_old)] = (t, tau[t].inverse() * rho * tau[s])
            rows.append(row)
        return DeltaComplex(n, rows, validate=False)

    def renumber_simplices(self, order: list[int]) -> "DeltaComplex":
        """New simplex k is old simplex order[k]."""
        new_of = {old: new for new, old in enumerate(order)}
        rows = [[(new_of[t], rho) for t, rho in self.gluings[old]] for old in order]
        return DeltaComplex(self.dimension, rows, validate=False)

    def oriented_model(self, orientation) -> "DeltaComplex":
        """Relabel negatively oriented simplices by (n-1 n) so every gluing is odd."""
        n = self.dimension
        tau = Permutation.transposition(n + 1, n - 1, n)
        maps = {s: tau for s, o in enumerate(orientation) if o < 0}
        return self.relabel_vertices(maps)

    def __eq__(self, other):
        return isinstance(other, DeltaComplex) and self.dimension == other.dimension and self.gluings == other.gluings

    def __hash__(self):
        return hash((self.dimension, self.gluings))

    def __repr__(self):
        return f"DeltaComplex(dimension={self.dimension}, simplices={self.size})"


def _fmt_gluing(g) -> str:
    if g is None:
        return "null"
    return f"simplex {g[0]} perm {list(g[1].images)}"


def parse_and_validate(document) -> DeltaComplex:
    return DeltaComplex.from_json(document, validate=True)


def load(path) -> DeltaComplex:
    with open(path) as fh:
        text = fh.read()
    return parse_and_validate(text)


# ---------------------------------------------------------------------------
# circuits around codimension-2 faces
# ---------------------------------------------------------------------------

def _extend_embedding(image: tuple[int, ...], last_two: tuple[int, int]) -> Permutation:
    return Permutation(image + last_two)


def codim2_circuits(dc: DeltaComplex, orientation=None) -> list[Codim2Circuit]:
    """One circuit per codim-2 class.

    Without ``orientation`` the starting embedding w_1 is even.  With an
    orientation, w_1's parity matches the sign of its simplex, which makes
    every w_i positively oriented in the oriented model.
    """
    n = dc.dimension
    out = []
    for fc in dc.faces(n - 2):
        s, verts = fc.rep
        p, q = sorted(set(range(n + 1)) - set(verts))
        w = _extend_embedding(verts, (p, q))
        want = 0 if orientation is None or orientation[s] > 0 else 1
        if w.parity() != want:
            w = _extend_embedding(verts, (q, p))
        start = (s, w)
        steps = []
        cur_s, cur_w = s, w
        limit = dc.size * (n + 1) * n // 2 + 1
        while True:
            i = cur_w(n - 1)
            t, rho = dc.gluings[cur_s][i]
            fid = dc.facet_of[(cur_s, i)]
            side = dc.facet_classes[fid].side_of(cur_s, i)
            steps.append(CircuitStep(cur_s, fid, i, side, cur_w))
            nxt = Permutation(tuple(rho(cur_w(j)) for j in range(n - 1)) + (rho(cur_w(n)), rho(i)))
            cur_s, cur_w = t, nxt
            if (cur_s, cur_w) == start:
                break
            if cur_s == s and frozenset(cur_w.images[:n - 1]) == frozenset(verts) and cur_w != w:
                raise TriangulationError(
                    "link of a codim-2 face closes up with a twist", f"codim-2 class {fc.index}")
            if len(steps) > limit:
                raise TriangulationError("codim-2 walk does not close", f"codim-2 class {fc.index}")
        if len(steps) != fc.degree:
            raise TriangulationError(
                f"codim-2 link is not a single circle ({len(steps)} of {fc.degree} corners reached)",
                f"codim-2 class {fc.index}")
        out.append(Codim2Circuit(fc.index, tuple(steps)))
    return out


# ---------------------------------------------------------------------------
# links of codimension-3 faces
# ---------------------------------------------------------------------------

def codim3_links(dc: DeltaComplex) -> list[Codim3Link]:
    n = dc.dimension
    if n < 3:
        return []
    lookup2 = dc.face_lookup(n - 2)
    out = []
    for fc in dc.faces(n - 3):
        corners = list(fc.members)           # (s, verts): one link triangle each
        tri_index = {c: k for k, c in enumerate(corners)}
        # link-triangle vertices are labelled by the complementary simplex vertices
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        orientable = True
        adj = {k: [] for k in range(len(corners))}
        for k, (s, verts) in enumerate(corners):
            comp = sorted(set(range(n + 1)) - verts)
            for c in comp:
                find((k, c))
            for c in comp:          # link edge opposite c <-> facet c of s
                t, rho = dc.gluings[s][c]
                tv = frozenset(rho(v) for v in verts)
                k2 = tri_index[(t, tv)]
                a, b = [x for x in comp if x != c]
                union((k, a), (k2, rho(a)))
                union((k, b), (k2, rho(b)))
                adj[k].append((k2, rho, c))
        # coherent orientation by BFS.  A triangle's orientation is a sign
        # relative to its sorted corner labels; the link edge opposite c is
        # traversed a -> b with sign eps * sign(sorted corners -> (c, a, b)).
        eps = {0: 1}
        queue = deque([0])
        while queue:
            k = queue.popleft()
            s, verts = corners[k]
            comp = sorted(set(range(n + 1)) - verts)
            for k2, rho, c in adj[k]:
                t, tv = corners[k2]
                comp2 = sorted(set(range(n + 1)) - tv)
                a, b = [x for x in comp if x != c]
                here = _triple_sign(comp, (c, a, b))
                there = _triple_sign(comp2, (rho(c), rho(a), rho(b)))
                want = -eps[k] * here * there
                if k2 not in eps:
                    eps[k2] = want
                    queue.append(k2)
                elif eps[k2] != want:
                    orientable = False
        connected = len(eps) == len(corners)
        T = len(corners)
        V = len({find(x) for x in list(parent)})
        E = 3 * T // 2
        incidence: dict[int, int] = {}
        for root in {find(x) for x in list(parent)}:
            k, c = root
            s, verts = corners[k]
            w = lookup2[(s, verts | {c})]
            incidence[w] = incidence.get(w, 0) + 1
        out.append(Codim3Link(fc.index, T, V, E, V - E + T, orientable, connected,
                              dict(sorted(incidence.items()))))
    return out


def _perm_parity_sign(p: Permutation) -> int:
    return -1 if p.parity() else 1


def _triple_sign(base, ordered) -> int:
    """Sign of the reordering of ``base`` into ``ordered``."""
    return permutation_sign([base.index(x) for x in ordered])


# ---------------------------------------------------------------------------
# orientation and w1
# ---------------------------------------------------------------------------

def orient_and_w1(dc: DeltaComplex) -> OrientationResult:
    """Spanning-forest sign propagation over the dual graph.

    Simplices s, t glued by rho are compatibly oriented when
    o[s] * o[t] * sign(rho) == -1 (an odd transition between equally
    oriented simplices).  w1(F) = 0 on compatible facets.
    """
    orient = [0] * dc.size
    parent_edge: dict[int, tuple[int, int] | None] = {}
    components = 0
    for root in range(dc.size):
        if orient[root]:
            continue
        components += 1
        orient[root] = 1
        parent_edge[root] = None
        queue = deque([root])
        while queue:
            s = queue.popleft()
            for i in range(dc.dimension + 1):
                t, rho = dc.gluings[s][i]
                if not orient[t]:
                    orient[t] = -orient[s] * _perm_parity_sign(rho)
                    parent_edge[t] = (s, dc.facet_of[(s, i)])
                    queue.append(t)
    w1 = []
    for fc in dc.facet_classes:
        ok = orient[fc.s1] * orient[fc.s2] * _perm_parity_sign(fc.rho) == -1
        w1.append(0 if ok else 1)
    orientable = not any(w1)
    cert: tuple[int, ...] = ()
    if not orientable:
        bad = dc.facet_classes[w1.index(1)]

        def path(s):
            out = []
            while parent_edge[s] is not None:
                prev, f = parent_edge[s]
                out.append(f)
                s = prev
            return out

        a, b = path(bad.s1), path(bad.s2)
        # drop the common tail so the cycle is simple-ish
        while a and b and a[-1] == b[-1]:
            a.pop()
            b.pop()
        cert = tuple(list(reversed(a)) + [bad.index] + b)
    return OrientationResult(orientable, tuple(orient), tuple(w1), cert, components)


def dual_skeleton(dc: DeltaComplex) -> DualSkeleton:
    """Dual cells up to dimension 3 (all that the spin computations touch)."""
    n = dc.dimension
    cells = tuple(len(dc.faces(n - k)) for k in range(min(n, 3) + 1))
    sides = tuple((fc.s1, fc.s2) for fc in dc.facet_classes)
    return DualSkeleton(cells, sides, tuple(dc.circuits), tuple(dc.links))
