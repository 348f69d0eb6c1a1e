"""
Unit-quaternion models of the binary octahedral group (the binary symmetric
group on 4 letters) and of the binary icosahedral group (the binary
alternating group on 5 letters, sitting diagonally-twisted inside S^3 x S^3).

These are independent of the Clifford realisation in ``binary_groups`` and
serve as a cross-check: ``verify_model_isomorphism`` searches for an explicit
isomorphism between a model and a Clifford enumeration.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .binary_groups import LiftedPermutation, cycle_lift, element_order, enumerate_cover
from .exact_algebra import Quaternion, QuadraticScalar

__all__ = [
    "UnitQuaternionGroup",
    "IsomorphismReport",
    "QuaternionPair",
    "build_sigma4_model",
    "build_a5_model",
    "verify_model_isomorphism",
    "order_histogram",
    "model_check",
]


def _q(d, r=0, x=0, y=0, z=0) -> Quaternion:
    return Quaternion(r, x, y, z, d=d)


def _unit_basis(d: int):
    return {"1": _q(d, 1), "i": _q(d, 0, 1), "j": _q(d, 0, 0, 1), "k": _q(d, 0, 0, 0, 1)}


@dataclass(frozen=True)
class QuaternionPair:
    """An element (q1, q2) of S^3 x S^3 with componentwise product."""

    left: Quaternion
    right: Quaternion

    def __mul__(self, other: "QuaternionPair") -> "QuaternionPair":
        return QuaternionPair(self.left * other.left, self.right * other.right)

    def __neg__(self):
        return QuaternionPair(-self.left, -self.right)

    def inverse(self) -> "QuaternionPair":
        return QuaternionPair(self.left.inverse(), self.right.inverse())

    def norm(self):
        return (self.left.norm(), self.right.norm())

    def is_one(self) -> bool:
        return self.left == 1 and self.right == 1

    def __str__(self):
        return f"({self.left!r}, {self.right!r})"


@dataclass
class UnitQuaternionGroup:
    name: str
    elements: list
    one: Hashable
    closed: bool = field(default=False)

    def __len__(self):
        return len(self.elements)

    def check_closure(self) -> bool:
        pool = set(self.elements)
        self.closed = all(a * b in pool for a in self.elements for b in self.elements)
        return self.closed

    def orders(self) -> list[int]:
        return [_order(g, self.one) for g in self.elements]


def _order(g, one) -> int:
    m, y = 1, g
    while y != one:
        y = y * g
        m += 1
        if m > 1000:
            raise ArithmeticError("element of unbounded order in a finite model")
    return m


def order_histogram(orders) -> dict[int, int]:
    return dict(sorted(Counter(orders).items()))


def build_sigma4_model() -> UnitQuaternionGroup:
    """The 48 unit quaternions preserving a tetrahedron and its antipode."""
    d = 2
    u = _unit_basis(d)
    one = u["1"]
    imag = [u["i"], u["j"], u["k"]]
    half = QuadraticScalar(d, 1, 0, 2)
    inv_r2 = QuadraticScalar(d, 0, 1, 2)  # 1/sqrt(2)
    elts = [one, -one]
    elts += [s * a for a in imag for s in (1, -1)]
    for a in imag:
        for s1, s2 in itertools.product((1, -1), repeat=2):
            elts.append((one * s1 + a * s2) * inv_r2)
    for a, b in itertools.combinations(imag, 2):
        for s1, s2 in itertools.product((1, -1), repeat=2):
            elts.append((a * s1 + b * s2) * inv_r2)
    for signs in itertools.product((1, -1), repeat=4):
        q = one * signs[0] + imag[0] * signs[1] + imag[1] * signs[2] + imag[2] * signs[3]
        elts.append(q * half)
    grp = UnitQuaternionGroup("binary octahedral (Sigma4~)", elts, one)
    if len(set(elts)) != 48:
        raise AssertionError("duplicate quaternions in the 48-element list")
    return grp


def build_a5_model() -> UnitQuaternionGroup:
    """The 120 listed pairs in S^3 x S^3 realising the binary alternating group on 5 letters."""
    d = 5
    u = _unit_basis(d)
    one = u["1"]
    imag = {"i": u["i"], "j": u["j"], "k": u["k"]}
    half = QuadraticScalar(d, 1, 0, 2)
    r5m1 = QuadraticScalar(d, -1, 1, 4)   # (sqrt5 - 1)/4
    r5p1 = QuadraticScalar(d, 1, 1, 4)    # (sqrt5 + 1)/4
    one_minus = QuadraticScalar(d, 1, -1, 4)  # (1 - sqrt5)/4
    cyclic = [("i", "j", "k"), ("j", "k", "i"), ("k", "i", "j")]

    def pair(l, r):
        return QuaternionPair(l, r)

    def bar(x: QuadraticScalar) -> QuadraticScalar:
        return x.conjugate()

    elts = [pair(one, one), pair(-one, -one)]
    # (alpha, alpha), alpha = (+-1 +-i +-j +-k)/2
    for s in itertools.product((1, -1), repeat=4):
        q = (one * s[0] + imag["i"] * s[1] + imag["j"] * s[2] + imag["k"] * s[3]) * half
        elts.append(pair(q, q))
    # +-(1/2 + a al + b be, 1/2 + a~ al + b~ be), al be = ga
    for al, be, _ in cyclic:
        for sa, sb, so in itertools.product((1, -1), repeat=3):
            a, b = r5m1 * sa, r5p1 * sb
            left = one * half + imag[al] * a + imag[be] * b
            right = one * half + imag[al] * bar(a) + imag[be] * bar(b)
            elts.append(pair(left * so, right * so))
    # +-(a +- a~ al +- be/2, a~ +- a al +- be/2)
    for al, be in itertools.permutations("ijk", 2):
        a = one_minus if (al, be) in {(c[0], c[1]) for c in cyclic} else r5p1
        for s1, s2, so in itertools.product((1, -1), repeat=3):
            left = one * a + imag[al] * (bar(a) * s1) + imag[be] * (half * s2)
            right = one * bar(a) + imag[al] * (a * s1) + imag[be] * (half * s2)
            elts.append(pair(left * so, right * so))
    # +-(al, al)
    for al in "ijk":
        for s in (1, -1):
            elts.append(pair(imag[al] * s, imag[al] * s))
    # (a al + b be + c ga, a~ al + b~ be + c~ ga)
    for al, be, ga in cyclic:
        for sa, sb, sc in itertools.product((1, -1), repeat=3):
            a, b, c = r5p1 * sa, one_minus * sb, half * sc
            left = imag[al] * a + imag[be] * b + imag[ga] * c
            right = imag[al] * bar(a) + imag[be] * bar(b) + imag[ga] * bar(c)
            elts.append(pair(left, right))
    grp = UnitQuaternionGroup("binary icosahedral (A5~)", elts, pair(one, one))
    if len(set(elts)) != 120:
        raise AssertionError("duplicate pairs in the 120-element list")
    return grp


@dataclass
class IsomorphismReport:
    found: bool
    reason: str
    generator_images: dict = field(default_factory=dict)
    model_histogram: dict = field(default_factory=dict)
    cover_histogram: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "reason": self.reason,
            "generator_images": {k: str(v) for k, v in self.generator_images.items()},
            "model_order_histogram": {str(k): v for k, v in self.model_histogram.items()},
            "cover_order_histogram": {str(k): v for k, v in self.cover_histogram.items()},
        }


def _generate(gens: Sequence, mul: Callable, one) -> dict:
    """Words for every element reachable from ``gens``: element -> word (tuple of gen indices)."""
    words = {one: ()}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(gens):
                y = mul(x, g)
                if y not in words:
                    words[y] = words[x] + (gi,)
                    nxt.append(y)
        frontier = nxt
    return words


def _pick_generators(cover: list[LiftedPermutation]):
    """Two generators of the cover: a transposition lift and a 3-cycle lift for
    the full group; a 3-cycle and a 5-cycle lift for the alternating one."""
    rank = cover[0].rank
    if all(x.is_even() for x in cover):
        longest = tuple(range(rank)) if rank % 2 else tuple(range(1, rank))
        return [cycle_lift((0, 1, 2), rank), cycle_lift(longest, rank)]
    return [cycle_lift((0, 1), rank), cycle_lift(tuple(range(rank)), rank)]


def verify_model_isomorphism(model: UnitQuaternionGroup, cover: list[LiftedPermutation]) -> IsomorphismReport:
    """Search for an isomorphism cover -> model by matching generator images,
    then check the full multiplication table."""
    model_orders = model.orders()
    cover_orders = [element_order(x) for x in cover]
    report = IsomorphismReport(False, "", model_histogram=order_histogram(model_orders),
                               cover_histogram=order_histogram(cover_orders))
    if len(model) != len(cover):
        report.reason = f"order mismatch: model has {len(model)}, cover has {len(cover)}"
        return report
    if not model.check_closure():
        report.reason = "model is not closed under multiplication"
        return report
    if report.model_histogram != report.cover_histogram:
        report.reason = "element-order histograms differ"
        return report

    rank = cover[0].rank
    gens = _pick_generators(cover)
    one_c = LiftedPermutation.identity(rank)
    words = _generate(gens, lambda a, b: a * b, one_c)
    if len(words) != len(cover):
        report.reason = "chosen generators do not generate the cover"
        return report
    cover_set = set(cover)
    if set(words) != cover_set:
        report.reason = "cover enumeration disagrees with generated subgroup"
        return report

    by_order: dict[int, list] = {}
    for g, o in zip(model.elements, model_orders):
        by_order.setdefault(o, []).append(g)
    gen_orders = [element_order(g) for g in gens]
    cover_list = list(words)
    for images in itertools.product(*(by_order.get(o, []) for o in gen_orders)):
        phi = {}
        ok = True
        for x in cover_list:
            y = model.one
            for gi in words[x]:
                y = y * images[gi]
            phi[x] = y
        if len(set(phi.values())) != len(cover_list):
            continue
        for a in cover_list:
            pa = phi[a]
            for b in cover_list:
                if phi[a * b] != pa * phi[b]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            report.found = True
            report.reason = "isomorphism verified on the full multiplication table"
            report.generator_images = {str(g): im for g, im in zip(gens, images)}
            return report
    report.reason = "no generator assignment extends to an isomorphism"
    return report


def model_check() -> dict:
    """Both quaternion models against the Clifford enumerations."""
    s4 = verify_model_isomorphism(build_sigma4_model(), enumerate_cover(4, even_only=False))
    a5 = verify_model_isomorphism(build_a5_model(), enumerate_cover(5, even_only=True))
    return {"sigma4": s4.to_json(), "a5": a5.to_json()}
