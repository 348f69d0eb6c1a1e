"""
Combinatorial spin-c structures: an integral 2-cocycle beta on the dual
2-cells together with a trivialization whose circuit products satisfy
F_m ... F_1 = (-1)**(1 + beta(W)).

A structure is stored as (beta, x) with x the sign vector over facet classes
relative to the canonical trivialization.  Two pairs describe the same
spin-c structure when they are related by

    (beta, x) ~ (beta + d gamma, x + gamma mod 2)     gamma in C^1(P; Z)
    (beta, x) ~ (beta, x + d^0 eps)                    eps in C^0(P; Z/2)

and H^2(N; Z) acts by c . (beta, x) = (beta + 2c, x).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .homology import (
    CohomologyGroup,
    GF2Basis,
    GF2Solution,
    IntMatrix,
    W3Result,
    bockstein_w3,
    gf2_solve,
    int_solve,
    list_to_bits,
    smith_normal_form,
)
from .spin import (
    CombinatorialTrivialization,
    OrientedModel,
    SpinError,
    canonical_trivialization,
    circuit_obstruction,
    oriented_model,
    w2_cochain,
)

__all__ = [
    "SpinCStructure",
    "SpinCResult",
    "spinc_check",
    "find_spinc",
    "act_h2",
    "spinc_equivalent",
    "h2_presentation",
    "orbit",
    "twisted_signs",
]


@dataclass(frozen=True)
class SpinCStructure:
    model: OrientedModel = field(compare=False, repr=False)
    beta: tuple[int, ...]      # per model codim-2 class
    signs: int                 # bitmask over model facet classes

    def trivialization(self) -> CombinatorialTrivialization:
        return canonical_trivialization(self.model, self.signs)

    def to_json(self) -> dict:
        m = self.model
        return {"beta": m.face2_vector_to_input(list(self.beta)), "signs": m.facet_vector_to_input(self.signs)}


@dataclass
class SpinCResult:
    exists: bool
    structure: SpinCStructure | None
    w3: W3Result
    h2: CohomologyGroup
    w2: list[int]

    def to_json(self) -> dict:
        out = {
            "exists": self.exists,
            "w3": self.w3.to_json(),
            "h2": {"rank": self.h2.free_rank, "torsion": self.h2.torsion},
        }
        if self.structure is not None:
            out.update(self.structure.to_json())
        else:
            out["certificate"] = {"sq1_w2": self.w3.sq1, "w2": self.w2}
        return out


def _d2(m: OrientedModel) -> IntMatrix | None:
    return m.dual.coboundary(2)


def _d1(m: OrientedModel) -> IntMatrix:
    return m.dual.coboundary(1)


def _is_cocycle(m: OrientedModel, beta) -> bool:
    d2 = _d2(m)
    return d2 is None or not any(d2.apply(beta))


def spinc_check(t: CombinatorialTrivialization, beta) -> list[bool]:
    """Per-circuit verdicts of the twisted criterion for (t, beta)."""
    m = t.model
    beta = list(beta)
    if len(beta) != len(m.circuits):
        raise ValueError(f"beta needs {len(m.circuits)} values, got {len(beta)}")
    if not _is_cocycle(m, beta):
        raise ValueError("beta is not an integral cocycle")
    out = []
    for c, b in zip(m.circuits, beta):
        want = -1 if b % 2 == 0 else 1
        out.append(circuit_obstruction(c, t) == want)
    return out


def h2_presentation(dc) -> CohomologyGroup:
    m = oriented_model(dc)
    return m.dual.cohomology(2, "Z")


def find_spinc(dc) -> SpinCResult:
    """Decide existence via the integral lift of w2 and build a structure."""
    m = oriented_model(dc)
    t0 = canonical_trivialization(m)
    w2 = w2_cochain(t0)
    d2 = _d2(m)
    h2 = m.dual.cohomology(2, "Z")
    if d2 is None:
        # surfaces: every 2-cochain is a cocycle
        w3 = W3Result(True, [], True, [])
        beta = list(w2)
    else:
        d3 = m.dual.coboundary(3)
        w3 = bockstein_w3(w2, d2, d3.mod2() if d3 is not None else None)
        if not w3.vanishes:
            return SpinCResult(False, None, w3, h2, w2)
        beta = [z + 2 * c for z, c in zip(w2, w3.correction)]
    if not _is_cocycle(m, beta):  # pragma: no cover
        raise SpinError("constructed beta is not a cocycle")
    x = twisted_signs(m, w2, beta)
    if x is None:  # pragma: no cover - beta reduces to w2, so x = 0 always works
        raise SpinError("twisted criterion has no solution for a lift of w2")
    s = SpinCStructure(m, tuple(beta), x)
    if not all(spinc_check(s.trivialization(), beta)):  # pragma: no cover
        raise SpinError("constructed spin-c structure fails the twisted criterion")
    return SpinCResult(True, s, w3, h2, w2)


def twisted_signs(m: OrientedModel, w2, beta) -> int | None:
    """A sign vector x with (canonical, x) meeting the twisted criterion for beta, or None."""
    rhs = list_to_bits([(a + b) & 1 for a, b in zip(w2, beta)])
    sol = gf2_solve(m.circuit_matrix, rhs)
    if not isinstance(sol, GF2Solution):
        return None
    return m.gauge_space.reduce(sol.particular)


def act_h2(s: SpinCStructure, c) -> SpinCStructure:
    """c . (beta, x) = (beta + 2c, x) for an integral 2-cocycle c."""
    m = s.model
    c = list(c)
    if len(c) != len(s.beta):
        raise ValueError(f"c needs {len(s.beta)} values, got {len(c)}")
    if not _is_cocycle(m, c):
        raise ValueError("c is not an integral cocycle")
    out = SpinCStructure(m, tuple(b + 2 * v for b, v in zip(s.beta, c)), s.signs)
    if not all(spinc_check(out.trivialization(), out.beta)):  # pragma: no cover
        raise SpinError("H^2 action produced an invalid spin-c structure")
    return out


def _integral_cocycles_mod2(m: OrientedModel) -> list[int]:
    """Reductions mod 2 of a basis of the integral 1-cocycles."""
    d1 = _d1(m)
    snf = smith_normal_form(d1)
    r = snf.rank
    dim = d1.ncols
    return [list_to_bits([snf.V.data[i][j] & 1 for i in range(dim)]) for j in range(r, dim)]


def spinc_equivalent(a: SpinCStructure, b: SpinCStructure) -> bool:
    """Decide (beta_a, x_a) ~ (beta_b, x_b) under the relations in the module docstring."""
    m = a.model
    diff = [y - x for x, y in zip(a.beta, b.beta)]
    gamma = int_solve(_d1(m), diff)
    if gamma is None:
        return False
    target = a.signs ^ b.signs ^ list_to_bits([g & 1 for g in gamma])
    space = GF2Basis(m.gauge_space.vectors() + _integral_cocycles_mod2(m))
    return target in space


def orbit(s: SpinCStructure, generators, limit: int = 64) -> list[SpinCStructure]:
    """Distinct classes reached from ``s`` by repeatedly acting with ``generators``."""
    reps = [s]
    frontier = [s]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = act_h2(x, g)
                if not any(spinc_equivalent(y, r) for r in reps):
                    reps.append(y)
                    nxt.append(y)
                    if len(reps) > limit:
                        raise ValueError("orbit exceeds the enumeration limit (infinite H^2?)")
        frontier = nxt
    return reps
