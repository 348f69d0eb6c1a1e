"""
The binary symmetric group (the Z/2 central extension of S_N in which
transposition lifts square to -1) and its binary alternating subgroup.

An element is stored as a permutation plus a sign relative to the canonical
lift of that permutation.  The canonical lift is realised in the Clifford
algebra Cl(0, N): the lift [a b] of the transposition (a b) is the rotation
by pi in the plane spanned by u_ab = (e_a - e_b)/sqrt(2) and the diagonal
direction d.  Since d is orthogonal to every u_ab it anticommutes with all of
them, and a word of lifts collapses to (u_1 u_2 ... u_k) * d**k.  We keep the
product u_1 ... u_k as the *spinor* and k mod 2 as the parity; products then
multiply spinors and add parities.

Signs of products are always decided by Clifford arithmetic: the sign of
canonical(p) * canonical(q) against canonical(p q) is read off one exact
coefficient of the spinor product and memoised.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterable, Sequence

from .exact_algebra import MAX_CLIFFORD_RANK, CliffordElement, blade_sign

__all__ = [
    "GroupError",
    "Permutation",
    "LiftedPermutation",
    "transposition_lift",
    "cycle_lift",
    "canonical_lift",
    "conjugate_by_permutation",
    "embed_odd_fix",
    "element_order",
    "enumerate_cover",
    "parse_lifted",
    "MAX_ENUMERATION_RANK",
]

MAX_ENUMERATION_RANK = 6


class GroupError(ValueError):
    pass


class Permutation:
    """A bijection of {0, ..., N-1}; ``p(i) == p.images[i]``.

    Composition is right-to-left: ``(p * q)(i) == p(q(i))``.
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise GroupError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(n))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if a in seen or not 0 <= a < n:
                    raise GroupError(f"bad cycle data {cycles!r}")
                seen.add(a)
            for x, y in zip(cyc, cyc[1:] + cyc[:1]):
                images[x] = y
        return cls(images)

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        return cls.from_cycles(n, [(a, b)])

    @classmethod
    def random(cls, n: int, rng: random.Random | None = None) -> "Permutation":
        images = list(range(n))
        (rng or random).shuffle(images)
        return cls(images)

    def __len__(self):
        return len(self.images)

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other.images) != len(self.images):
            raise GroupError(f"rank mismatch: {len(self.images)} vs {len(other.images)}")
        im = self.images
        return Permutation(im[j] for j in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each smallest-element-first, ordered by that element."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def parity(self) -> int:
        return sum(len(c) - 1 for c in self.cycles()) & 1

    def is_even(self) -> bool:
        return self.parity() == 0

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def fixes(self, i: int) -> bool:
        return self.images[i] == i

    def extend(self, n: int) -> "Permutation":
        if n < len(self.images):
            raise GroupError("cannot shrink a permutation")
        return Permutation(self.images + tuple(range(len(self.images), n)))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


# ---------------------------------------------------------------------------
# Clifford realisation of canonical lifts
# ---------------------------------------------------------------------------

def canonical_word(p: Permutation) -> list[tuple[int, int]]:
    """Transposition letters of the canonical lift, left to right."""
    word = []
    for cyc in p.cycles():
        word.extend(zip(cyc, cyc[1:]))
    return word


@lru_cache(maxsize=None)
def _root(rank: int, a: int, b: int) -> CliffordElement:
    return CliffordElement.root_vector(rank, a, b)


@lru_cache(maxsize=None)
def _canonical_spinor(images: tuple[int, ...]) -> CliffordElement:
    rank = len(images)
    s = CliffordElement.scalar(rank, 1)
    for a, b in canonical_word(Permutation(images)):
        s = s * _root(rank, a, b)
    return s


@lru_cache(maxsize=None)
def _integer_spinor(images: tuple[int, ...]) -> tuple[dict, int]:
    """(U, k) with canonical spinor = U / sqrt(2)**k and U integral.

    U is the product of the unnormalised root vectors e_a - e_b over the
    canonical word, so its coefficients are plain integers.
    """
    terms = {0: 1}
    word = canonical_word(Permutation(images))
    for a, b in word:
        nxt: dict[int, int] = {}
        for m, c in terms.items():
            for bit, sgn in ((1 << a, 1), (1 << b, -1)):
                key = m ^ bit
                v = nxt.get(key, 0) + c * sgn * blade_sign(m, bit)
                if v:
                    nxt[key] = v
                else:
                    nxt.pop(key, None)
        terms = nxt
    return terms, len(word)


@lru_cache(maxsize=None)
def _lead(images: tuple[int, ...]) -> tuple[int, int]:
    terms, _ = _integer_spinor(images)
    mask = min(terms)
    return mask, terms[mask]


@lru_cache(maxsize=1 << 20)
def _cocycle(p: tuple[int, ...], q: tuple[int, ...]) -> int:
    """The sign c with canonical(p) canonical(q) = c * canonical(p q).

    Only the coefficient of one monomial of the product is formed.
    """
    pq = tuple(p[j] for j in q)
    mask, target = _lead(pq)
    up, kp = _integer_spinor(p)
    uq, kq = _integer_spinor(q)
    kpq = _integer_spinor(pq)[1]
    got = 0
    for ma, ca in up.items():
        cb = uq.get(ma ^ mask)
        if cb is not None:
            got += ca * cb * blade_sign(ma, ma ^ mask)
    scale = 1 << ((kp + kq - kpq) // 2)
    if got == target * scale:
        return 1
    if got == -target * scale:
        return -1
    raise ArithmeticError(f"spinor product is not a lift of the composite ({p} * {q})")


class LiftedPermutation:
    """An element of the binary symmetric group on ``rank`` letters.

    ``sign * canonical_lift(base)``; two elements are equal iff base and sign
    agree, which is the same as equality of (base, parity, spinor).
    """

    __slots__ = ("base", "sign", "_hash")

    def __init__(self, base: Permutation, sign: int = 1):
        if sign not in (1, -1):
            raise GroupError(f"sign must be +1 or -1, got {sign}")
        if len(base) > MAX_CLIFFORD_RANK:
            raise GroupError(f"rank {len(base)} exceeds the Clifford cap {MAX_CLIFFORD_RANK}")
        self.base = base
        self.sign = sign
        self._hash = hash((base.images, sign))

    @classmethod
    def identity(cls, rank: int) -> "LiftedPermutation":
        return cls(Permutation.identity(rank), 1)

    @classmethod
    def central(cls, rank: int, sign: int = -1) -> "LiftedPermutation":
        return cls(Permutation.identity(rank), sign)

    @property
    def rank(self) -> int:
        return len(self.base)

    @property
    def parity(self) -> int:
        return self.base.parity()

    def is_even(self) -> bool:
        return self.base.is_even()

    @property
    def spinor(self) -> CliffordElement:
        s = _canonical_spinor(self.base.images)
        return s if self.sign == 1 else -s

    def project(self) -> Permutation:
        return self.base

    def is_central(self) -> bool:
        return self.base.is_identity()

    def _check(self, other):
        if not isinstance(other, LiftedPermutation):
            raise TypeError(f"expected LiftedPermutation, got {type(other).__name__}")
        if other.rank != self.rank:
            raise GroupError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __mul__(self, other):
        if isinstance(other, int):
            if other not in (1, -1):
                raise GroupError("only central signs may multiply a lift")
            return LiftedPermutation(self.base, self.sign * other)
        self._check(other)
        c = _cocycle(self.base.images, other.base.images)
        return LiftedPermutation(self.base * other.base, self.sign * other.sign * c)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __neg__(self):
        return LiftedPermutation(self.base, -self.sign)

    def inverse(self) -> "LiftedPermutation":
        inv = self.base.inverse()
        c = _cocycle(self.base.images, inv.images)
        return LiftedPermutation(inv, self.sign * c)

    def __pow__(self, k: int) -> "LiftedPermutation":
        if k < 0:
            return self.inverse() ** (-k)
        out = LiftedPermutation.identity(self.rank)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def extend(self, rank: int) -> "LiftedPermutation":
        """Image under the inclusion fixing the new letters rank(self), ..., rank-1."""
        if rank == self.rank:
            return self
        # canonical words are unchanged by appending fixed points
        return LiftedPermutation(self.base.extend(rank), self.sign)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.base.is_identity() and self.sign == other
        return (isinstance(other, LiftedPermutation)
                and self.sign == other.sign and self.base == other.base)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"LiftedPermutation({str(self)!r}, rank={self.rank})"

    def __str__(self):
        cyc = self.base.cycles()
        body = "".join("[" + " ".join(map(str, c)) + "]" for c in cyc)
        prefix = "+" if self.sign == 1 else "-"
        return prefix + (body or "1")


def transposition_lift(a: int, b: int, rank: int) -> LiftedPermutation:
    """The lift [a b]; note [b a] = -[a b]."""
    if a == b:
        raise GroupError(f"transposition needs distinct letters, got {a} twice")
    if not (0 <= a < rank and 0 <= b < rank):
        raise GroupError(f"letters {a}, {b} outside rank {rank}")
    return LiftedPermutation(Permutation.transposition(rank, a, b), 1 if a < b else -1)


def cycle_lift(elements: Sequence[int], rank: int) -> LiftedPermutation:
    """[a1 a2 ... ak] = [a1 a2][a2 a3]...[a_{k-1} a_k]."""
    elements = list(elements)
    if len(elements) < 2:
        raise GroupError("a cycle needs at least two letters")
    if len(set(elements)) != len(elements):
        raise GroupError(f"repeated letter in cycle {elements}")
    out = LiftedPermutation.identity(rank)
    for a, b in zip(elements, elements[1:]):
        out = out * transposition_lift(a, b, rank)
    return out


def canonical_lift(p: Permutation) -> LiftedPermutation:
    return LiftedPermutation(p, 1)


def conjugate_by_permutation(g: Permutation, x: LiftedPermutation) -> LiftedPermutation:
    """x**g = g~ x g~**-1 for either lift g~ of g."""
    if len(g) != x.rank:
        raise GroupError(f"rank mismatch: {len(g)} vs {x.rank}")
    gl = canonical_lift(g)
    return gl * x * gl.inverse()


def embed_odd_fix(x: LiftedPermutation, i: int, j: int, rank: int | None = None) -> LiftedPermutation:
    """x if x is even, x [i j] if x is odd.

    Sends the binary symmetric group on the letters other than i, j into the
    binary alternating group.  ``rank`` optionally enlarges the ambient rank.
    """
    if rank is not None:
        x = x.extend(rank)
    if i == j:
        raise GroupError("embedding needs two distinct marked letters")
    if not (x.base.fixes(i) and x.base.fixes(j)):
        raise GroupError(f"{x} moves a marked letter ({i} or {j})")
    if x.is_even():
        return x
    return x * transposition_lift(i, j, x.rank)


def element_order(x: LiftedPermutation) -> int:
    m = 1
    y = x
    while y != 1:
        y = y * x
        m += 1
    return m


def enumerate_cover(rank: int, even_only: bool = False) -> list[LiftedPermutation]:
    """All elements of the binary symmetric (or alternating) group, by closure."""
    if rank > MAX_ENUMERATION_RANK:
        raise GroupError(f"enumeration is limited to rank <= {MAX_ENUMERATION_RANK}")
    if rank < 1:
        raise GroupError("rank must be positive")
    if even_only:
        gens = [cycle_lift((i, i + 1, i + 2), rank) for i in range(rank - 2)]
    else:
        gens = [transposition_lift(i, i + 1, rank) for i in range(rank - 1)]
    start = [LiftedPermutation.identity(rank), LiftedPermutation.central(rank)]
    seen = set(start)
    frontier = list(start)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=lambda e: (e.base.images, -e.sign))


def parse_lifted(text: str, rank: int) -> LiftedPermutation:
    """Parse '+[0 1 2][3 4]', '-[1 2]', '+1', '-1' (a product of cycle lifts)."""
    s = text.strip().replace("−", "-")
    sign = 1
    if s[:1] in "+-":
        sign = -1 if s[0] == "-" else 1
        s = s[1:].strip()
    out = LiftedPermutation.identity(rank)
    if s in ("", "1"):
        return out * sign
    while s:
        if not s.startswith("["):
            raise GroupError(f"cannot parse {text!r}")
        close = s.index("]")
        letters = [int(t) for t in s[1:close].replace(",", " ").split()]
        out = out * cycle_lift(letters, rank)
        s = s[close + 1:].strip()
    return out * sign
