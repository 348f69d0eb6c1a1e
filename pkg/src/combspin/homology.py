"""
Exact linear algebra over GF(2) and Z, and the cellular cochain complex of
the dual decomposition.

GF(2) vectors are Python ints (bit j is coordinate j), and a GF2Matrix is a
list of row bitmasks.  Integer matrices are lists of lists of Python ints, so
nothing ever overflows.

The dual complex P has one k-cell per codimension-k face class of T, and its
coboundary d^k: C^k(P) -> C^{k+1}(P) is the simplicial boundary
C_{n-k}(T) -> C_{n-k-1}(T) with face classes oriented by their class
coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

__all__ = [
    "GF2Matrix",
    "GF2Solution",
    "GF2Infeasible",
    "GF2Basis",
    "gf2_solve",
    "gf2_rank",
    "gf2_nullspace",
    "IntMatrix",
    "SmithResult",
    "smith_normal_form",
    "int_solve",
    "CohomologyGroup",
    "cohomology",
    "W3Result",
    "bockstein_w3",
    "DualComplex",
    "dual_cochain_complex",
    "HomologyError",
    "bits_to_list",
    "list_to_bits",
]


class HomologyError(ArithmeticError):
    pass


def list_to_bits(values: Sequence[int]) -> int:
    out = 0
    for j, v in enumerate(values):
        if v & 1:
            out |= 1 << j
    return out


def bits_to_list(x: int, length: int) -> list[int]:
    return [(x >> j) & 1 for j in range(length)]


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


# ---------------------------------------------------------------------------
# GF(2)
# ---------------------------------------------------------------------------

class GF2Matrix:
    """rows x cols matrix over GF(2), one int bitmask per row."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Sequence[int], ncols: int):
        self.rows = [int(r) for r in rows]
        self.ncols = ncols
        limit = 1 << ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits beyond the column count")

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], ncols: int | None = None) -> "GF2Matrix":
        if ncols is None:
            ncols = len(dense[0]) if dense else 0
        return cls([list_to_bits(r) for r in dense], ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "GF2Matrix":
        return cls([0] * nrows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def to_dense(self) -> list[list[int]]:
        return [bits_to_list(r, self.ncols) for r in self.rows]

    def apply(self, x: int) -> int:
        """A x for a column vector x given as a bitmask."""
        out = 0
        for i, r in enumerate(self.rows):
            if _parity(r & x):
                out |= 1 << i
        return out

    def transpose(self) -> "GF2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            j = 0
            while r:
                if r & 1:
                    cols[j] |= 1 << i
                r >>= 1
                j += 1
        return GF2Matrix(cols, self.nrows)

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.rows:
            acc, j = 0, 0
            while r:
                if r & 1:
                    acc ^= other.rows[j]
                r >>= 1
                j += 1
            out.append(acc)
        return GF2Matrix(out, other.ncols)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __eq__(self, other):
        return isinstance(other, GF2Matrix) and self.ncols == other.ncols and self.rows == other.rows

    def __repr__(self):
        return f"GF2Matrix({self.nrows}x{self.ncols})"


class GF2Basis:
    """An echelon basis of a subspace, supporting reduction and membership.

    ``pivots[p]`` is a basis vector whose lowest set bit is p, and no other
    stored vector has bit p set (fully reduced form).
    """

    def __init__(self, vectors: Sequence[int] = ()):
        self.pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        for p, b in self.pivots.items():
            if (v >> p) & 1:
                v ^= b
        return v

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        p = (v & -v).bit_length() - 1
        for q, b in list(self.pivots.items()):
            if (b >> p) & 1:
                self.pivots[q] = b ^ v
        self.pivots[p] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self):
        return len(self.pivots)

    def vectors(self) -> list[int]:
        return [self.pivots[p] for p in sorted(self.pivots)]


@dataclass(frozen=True)
class GF2Solution:
    particular: int
    nullspace: tuple[int, ...]
    ncols: int

    @property
    def count(self) -> int:
        return 1 << len(self.nullspace)

    def solutions(self):
        """Every solution (2**len(nullspace) of them)."""
        k = len(self.nullspace)
        for mask in range(1 << k):
            x = self.particular
            for j in range(k):
                if (mask >> j) & 1:
                    x ^= self.nullspace[j]
            yield x

    def to_json(self) -> dict:
        return {
            "feasible": True,
            "particular": bits_to_list(self.particular, self.ncols),
            "nullspace": [bits_to_list(v, self.ncols) for v in self.nullspace],
        }


@dataclass(frozen=True)
class GF2Infeasible:
    """y with y^T A = 0 and y^T b = 1."""

    certificate: int
    nrows: int

    def to_json(self) -> dict:
        return {"feasible": False, "certificate": bits_to_list(self.certificate, self.nrows)}


def _eliminate(A: GF2Matrix):
    """Row-reduce A, tracking which original rows make each reduced row.

    Returns (pivot list of (column, row bitmask, combination bitmask), zero rows'
    combinations).
    """
    work = [(r, 1 << i) for i, r in enumerate(A.rows)]
    pivots = []
    zero_combos = []
    remaining = work
    while remaining:
        r, comb = remaining[0]
        rest = remaining[1:]
        if r == 0:
            zero_combos.append(comb)
            remaining = rest
            continue
        p = (r & -r).bit_length() - 1
        new_rest = []
        for r2, c2 in rest:
            if (r2 >> p) & 1:
                new_rest.append((r2 ^ r, c2 ^ comb))
            else:
                new_rest.append((r2, c2))
        # back-substitute into earlier pivots for reduced form
        pivots = [(q, rr ^ r, cc ^ comb) if (rr >> p) & 1 else (q, rr, cc) for q, rr, cc in pivots]
        pivots.append((p, r, comb))
        remaining = new_rest
    return pivots, zero_combos


def gf2_rank(A: GF2Matrix) -> int:
    return len(GF2Basis(A.rows))


def gf2_nullspace(A: GF2Matrix) -> list[int]:
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    pivots, _ = _eliminate(A)
    pivot_cols = {p: r for p, r, _ in pivots}
    basis = []
    for f in range(A.ncols):
        if f in pivot_cols:
            continue
        x = 1 << f
        for p, r in pivot_cols.items():
            if (r >> f) & 1:
                x |= 1 << p
        basis.append(x)
    return basis


def gf2_solve(A: GF2Matrix, b: int) -> GF2Solution | GF2Infeasible:
    """Solve A x = b over GF(2); b is a bitmask over the rows of A."""
    if b >> A.nrows:
        raise ValueError(f"right-hand side has bits beyond {A.nrows} rows")
    pivots, zero_combos = _eliminate(A)
    for comb in zero_combos:
        if _parity(comb & b):
            return GF2Infeasible(comb, A.nrows)
    x = 0
    for p, r, comb in pivots:
        if _parity(comb & b):
            x |= 1 << p
    if A.apply(x) != b:  # pragma: no cover - elimination invariant
        raise HomologyError("GF(2) elimination produced a non-solution")
    return GF2Solution(x, tuple(gf2_nullspace(A)), A.ncols)


# ---------------------------------------------------------------------------
# integers
# ---------------------------------------------------------------------------

class IntMatrix:
    """A dense integer matrix; ``data[i][j]`` with arbitrary-precision entries."""

    __slots__ = ("data", "nrows", "ncols")

    def __init__(self, data: Sequence[Sequence[int]], ncols: int | None = None):
        self.data = [[int(v) for v in row] for row in data]
        self.nrows = len(self.data)
        self.ncols = ncols if ncols is not None else (len(self.data[0]) if self.data else 0)
        for row in self.data:
            if len(row) != self.ncols:
                raise ValueError("ragged integer matrix")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.data)) if other.nrows else [()] * other.ncols
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.data],
                         other.ncols)

    def apply(self, x: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(row, x)) for row in self.data]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([list(c) for c in zip(*self.data)] if self.nrows else [], self.nrows)

    def mod2(self) -> GF2Matrix:
        return GF2Matrix([list_to_bits([v & 1 for v in row]) for row in self.data], self.ncols)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.data for v in row)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.data == other.data

    def __repr__(self):
        return f"IntMatrix({self.data})"


@dataclass
class SmithResult:
    """U A V = D with U, V unimodular; ``Uinv``, ``Vinv`` are their inverses."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    Uinv: IntMatrix
    Vinv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D.data[i][i] for i in range(min(self.D.shape)) if self.D.data[i][i]]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def smith_normal_form(A: IntMatrix | Sequence[Sequence[int]]) -> SmithResult:
    """Smith normal form with transforms; invariant factors are positive and d1 | d2 | ..."""
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    m, n = A.shape
    D = [row[:] for row in A.data]
    U = IntMatrix.identity(m).data
    Ui = IntMatrix.identity(m).data
    V = IntMatrix.identity(n).data
    Vi = IntMatrix.identity(n).data

    # elementary operations, each mirrored on the transforms
    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def row_add(i, j, q):  # row_i += q row_j
        if q == 0:
            return
        D[i] = [a + q * b for a, b in zip(D[i], D[j])]
        U[i] = [a + q * b for a, b in zip(U[i], U[j])]
        for row in Ui:  # Ui <- Ui E^-1: column_j -= q column_i
            row[j] -= q * row[i]

    def row_neg(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def col_add(i, j, q):  # col_i += q col_j
        if q == 0:
            return
        for row in D:
            row[i] += q * row[j]
        for row in V:
            row[i] += q * row[j]
        Vi[j] = [a - q * b for a, b in zip(Vi[j], Vi[i])]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v and (best is None or abs(v) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            row_swap(t, best[0])
        if best[1] != t:
            col_swap(t, best[1])
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    row_add(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        row_swap(t, i)
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    col_add(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        col_swap(t, j)
                        changed = True
            if changed:
                continue
            piv = D[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % piv), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if D[t][t] < 0:
            row_neg(t)
        t += 1
    return SmithResult(IntMatrix(D, n), IntMatrix(U, m), IntMatrix(V, n), IntMatrix(Ui, m), IntMatrix(Vi, n))


def int_solve(A: IntMatrix, b: Sequence[int], snf: SmithResult | None = None) -> list[int] | None:
    """An integer solution of A x = b, or None."""
    snf = snf or smith_normal_form(A)
    c = snf.U.apply(b)
    y = [0] * A.ncols
    r = snf.rank
    for i in range(A.nrows):
        d = snf.D.data[i][i] if i < min(A.shape) else 0
        if i < r:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return snf.V.apply(y)


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

@dataclass
class CohomologyGroup:
    """Z^free_rank + sum Z/t for t in torsion (or (Z/2)^free_rank for GF(2)).

    ``generators`` holds one representative cocycle per summand, torsion first.
    """

    coefficients: str
    free_rank: int
    torsion: list[int]
    generators: list = field(default_factory=list)

    @property
    def order(self) -> int | None:
        """Number of elements, or None if infinite."""
        if self.coefficients == "Z2":
            return 2 ** self.free_rank
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def to_json(self) -> dict:
        gens = self.generators
        if self.coefficients == "Z2":
            gens = [list(g) for g in gens]
        return {"coefficients": self.coefficients, "rank": self.free_rank, "torsion": list(self.torsion),
                "generators": [list(g) for g in gens]}


def _as_int(M, nrows, ncols) -> IntMatrix:
    if M is None:
        return IntMatrix.zeros(nrows, ncols)
    return M if isinstance(M, IntMatrix) else IntMatrix(M)


def cohomology(d_prev, d_next, coefficients: str = "Z", dim: int | None = None) -> CohomologyGroup:
    """H = ker d_next / im d_prev for C^{k-1} -d_prev-> C^k -d_next-> C^{k+1}.

    Either map may be None (zero map); then ``dim`` gives dim C^k.
    Integer matrices are accepted for both coefficient choices.
    """
    if dim is None:
        if d_prev is not None:
            dim = d_prev.nrows
        elif d_next is not None:
            dim = d_next.ncols
        else:
            raise ValueError("cannot infer the cochain dimension")
    if coefficients == "Z2":
        return _cohomology_gf2(d_prev, d_next, dim)
    if coefficients != "Z":
        raise ValueError("coefficients must be 'Z' or 'Z2'")
    dp = _as_int(d_prev, dim, 0)
    dn = _as_int(d_next, 0, dim)
    if dp.nrows != dim or dn.ncols != dim:
        raise ValueError("differential shapes do not match")
    if dp.ncols and dn.nrows and not (dn @ dp).is_zero():
        raise HomologyError("d o d != 0: incidence signs are inconsistent")
    s1 = smith_normal_form(dn)
    r = s1.rank
    kernel_cols = [[s1.V.data[i][j] for i in range(dim)] for j in range(r, dim)]
    # image of d_prev in kernel coordinates (the last dim - r coordinates of V^-1 y)
    coords = (s1.Vinv @ dp).data[r:] if dp.ncols else [[] for _ in range(dim - r)]
    M = IntMatrix(coords, dp.ncols)
    s2 = smith_normal_form(M)
    diag = [s2.D.data[i][i] if i < min(M.shape) else 0 for i in range(M.nrows)]
    torsion, gens_t, gens_f = [], [], []
    for i in range(M.nrows):
        col = [s2.Uinv.data[a][i] for a in range(M.nrows)]
        rep = [sum(kernel_cols[a][x] * col[a] for a in range(M.nrows)) for x in range(dim)]
        if diag[i] > 1:
            torsion.append(diag[i])
            gens_t.append(rep)
        elif diag[i] == 0:
            gens_f.append(rep)
    return CohomologyGroup("Z", len(gens_f), torsion, gens_t + gens_f)


def _to_gf2(M, nrows, ncols) -> GF2Matrix:
    if M is None:
        return GF2Matrix.zeros(nrows, ncols)
    if isinstance(M, GF2Matrix):
        return M
    return _as_int(M, nrows, ncols).mod2()


def _cohomology_gf2(d_prev, d_next, dim: int) -> CohomologyGroup:
    dp = _to_gf2(d_prev, dim, 0)
    dn = _to_gf2(d_next, 0, dim)
    if dp.ncols and dn.nrows and not (dn @ dp).is_zero():
        raise HomologyError("d o d != 0 over GF(2)")
    image = GF2Basis(dp.transpose().rows if dp.ncols else [])
    gens = []
    for v in gf2_nullspace(dn):
        if image.add(v):
            gens.append(v)
    return CohomologyGroup("Z2", len(gens), [], [bits_to_list(g, dim) for g in gens])


# ---------------------------------------------------------------------------
# W3
# ---------------------------------------------------------------------------

@dataclass
class W3Result:
    """Obstruction to an integral lift of a mod-2 2-cocycle.

    ``vanishes`` is the exact verdict: some integral cocycle reduces to w2.
    ``sq1`` is the mod-2 class (d z)/2 and ``sq1_vanishes`` whether it is a
    mod-2 coboundary (a necessary condition).
    """

    vanishes: bool
    sq1: list[int]
    sq1_vanishes: bool
    correction: list[int] | None   # c with d(z + 2c) = 0 when vanishes

    def to_json(self) -> dict:
        return {"W3_zero": self.vanishes, "sq1_w2": self.sq1, "sq1_zero": self.sq1_vanishes}


def bockstein_w3(w2: Sequence[int], d2_int: IntMatrix, d3_gf2: GF2Matrix | None = None) -> W3Result:
    """Decide whether the GF(2) cocycle ``w2`` is the reduction of an integral cocycle.

    ``d2_int`` is the integral coboundary C^2 -> C^3.  ``d3_gf2``, when given,
    is used to confirm that (d z)/2 is a mod-2 cocycle.
    """
    z = [v & 1 for v in w2]
    dz = d2_int.apply(z)
    if any(v & 1 for v in dz):
        raise HomologyError("w2 is not a mod-2 cocycle")
    half = [v // 2 for v in dz]
    y = list_to_bits([v & 1 for v in half])
    if d3_gf2 is not None and d3_gf2.apply(y):
        raise HomologyError("(d z)/2 is not a mod-2 cocycle")
    d2 = d2_int.mod2()
    sq1_zero = isinstance(gf2_solve(d2, y), GF2Solution)
    c = int_solve(d2_int, [-v for v in half])
    return W3Result(c is not None, [v & 1 for v in half], sq1_zero, c)


# ---------------------------------------------------------------------------
# the dual cochain complex
# ---------------------------------------------------------------------------

@dataclass
class DualComplex:
    """Coboundaries d[k]: C^k(P) -> C^{k+1}(P), k = 0..n-1, as integer matrices."""

    dimension: int
    cells: list[int]
    d: list[IntMatrix]

    def coboundary(self, k: int) -> IntMatrix | None:
        if 0 <= k < len(self.d):
            return self.d[k]
        return None

    def cohomology(self, k: int, coefficients: str = "Z") -> CohomologyGroup:
        return cohomology(self.coboundary(k - 1), self.coboundary(k), coefficients, dim=self.cells[k])


def _sort_sign(seq) -> int:
    seq = list(seq)
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv & 1 else 1


def dual_cochain_complex(dc) -> DualComplex:
    """The dual cochain complex of a validated delta complex."""
    n = dc.dimension
    cells = [len(dc.faces(n - k)) for k in range(n + 1)]
    ds = []
    for k in range(n):
        m = n - k          # boundary of m-dimensional face classes
        lower = dc.faces(m - 1)
        lookup = dc.face_lookup(m - 1)
        mat = [[0] * cells[k] for _ in range(cells[k + 1])]
        for fc in dc.faces(m):
            s, verts = fc.rep
            cmap = fc.members[(s, frozenset(verts))]
            for j in range(m + 1):
                face_verts = [cmap[c] for c in range(m + 1) if c != j]
                g = lookup[(s, frozenset(face_verts))]
                gmap = lower[g].members[(s, frozenset(face_verts))]
                # position of each face vertex in g's class coordinates
                order = [gmap.index(v) for v in face_verts]
                sign = (-1) ** j * _sort_sign(order)
                mat[g][fc.index] += sign
        ds.append(IntMatrix(mat, cells[k]))
    return DualComplex(n, cells, ds)
