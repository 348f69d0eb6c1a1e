"""
Exact scalars, Clifford algebras and quaternions.

Nothing in here uses floating point.  Two scalar rings are provided:

* ``DyadicRootTwo`` -- the ring Z[1/sqrt(2)], stored as (a + b*sqrt(2)) / 2**k.
  It carries the coefficients of spinors built from the unit vectors
  (e_a - e_b)/sqrt(2).
* ``QuadraticScalar`` -- the fields Q(sqrt(2)) and Q(sqrt(5)), stored as
  (a + b*sqrt(d)) / c.  Used by the quaternion group models.

``CliffordElement`` is the real Clifford algebra Cl(0, N) with e_i**2 = -1,
monomials encoded as bitmasks.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd
from numbers import Integral

__all__ = [
    "ExactArithmeticError",
    "DyadicRootTwo",
    "QuadraticScalar",
    "CliffordElement",
    "Quaternion",
    "blade_sign",
    "MAX_CLIFFORD_RANK",
]

MAX_CLIFFORD_RANK = 9


class ExactArithmeticError(ArithmeticError):
    """Raised on division by zero or on mixing incompatible scalar kinds."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


# ---------------------------------------------------------------------------
# Z[1/sqrt 2]
# ---------------------------------------------------------------------------

class DyadicRootTwo:
    """An element (a + b*sqrt(2)) / 2**k of Z[1/sqrt(2)].

    Canonical form: k >= 0, and a, b are not both even when k > 0.  Zero is
    (0, 0, 0).  With this normalisation equal values have equal fields.
    """

    __slots__ = ("a", "b", "k", "_hash")

    def __init__(self, a: int = 0, b: int = 0, k: int = 0):
        a, b, k = int(a), int(b), int(k)
        if k < 0:
            a <<= -k
            b <<= -k
            k = 0
        if a == 0 and b == 0:
            k = 0
        while k > 0 and not (a & 1) and not (b & 1):
            a >>= 1
            b >>= 1
            k -= 1
        self.a, self.b, self.k = a, b, k
        self._hash = None

    @classmethod
    def inv_sqrt2_power(cls, m: int, mantissa: int = 1) -> "DyadicRootTwo":
        """mantissa / sqrt(2)**m."""
        if m < 0:
            raise ValueError("negative power")
        if m % 2 == 0:
            return cls(mantissa, 0, m // 2)
        # 1/sqrt(2)**(2j+1) = sqrt(2) / 2**(j+1)
        return cls(0, mantissa, m // 2 + 1)

    def _coerce(self, other):
        if isinstance(other, DyadicRootTwo):
            return other
        if isinstance(other, Integral):
            return DyadicRootTwo(int(other))
        if isinstance(other, QuadraticScalar):
            raise ExactArithmeticError("cannot mix DyadicRootTwo and QuadraticScalar")
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        k = max(self.k, other.k)
        s1, s2 = k - self.k, k - other.k
        return DyadicRootTwo((self.a << s1) + (other.a << s2),
                             (self.b << s1) + (other.b << s2), k)

    __radd__ = __add__

    def __neg__(self):
        return DyadicRootTwo(-self.a, -self.b, self.k)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a = self.a * other.a + 2 * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return DyadicRootTwo(a, b, self.k + other.k)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            raise ExactArithmeticError("division by zero")
        # 1/(a + b r) = (a - b r)/(a^2 - 2 b^2); the result must stay in the ring
        norm = other.a * other.a - 2 * other.b * other.b
        num = self * DyadicRootTwo(other.a, -other.b, 0)
        val = abs(norm)
        sign = 1 if norm > 0 else -1
        twos = (val & -val).bit_length() - 1
        if val >> twos != 1:
            raise ExactArithmeticError("quotient is not in Z[1/sqrt(2)]")
        return DyadicRootTwo(sign * num.a, sign * num.b, num.k + twos - other.k)

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, other):
        if isinstance(other, Integral):
            other = DyadicRootTwo(int(other))
        if not isinstance(other, DyadicRootTwo):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.k == other.k

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.a, self.b, self.k))
        return self._hash

    def __repr__(self):
        return f"DyadicRootTwo({self.a}, {self.b}, {self.k})"

    def __str__(self):
        if not self.b:
            num = str(self.a)
        elif not self.a:
            num = f"{self.b}*r2"
        else:
            num = f"({self.a}{self.b:+d}*r2)"
        return num if self.k == 0 else f"{num}/{2 ** self.k}"


# ---------------------------------------------------------------------------
# Q(sqrt d), d in {2, 5}
# ---------------------------------------------------------------------------

class QuadraticScalar:
    """(a + b*sqrt(d)) / c with gcd(a, b, c) = 1 and c > 0."""

    __slots__ = ("d", "a", "b", "c")
    RADICANDS = (2, 5)

    def __init__(self, d: int, a: int = 0, b: int = 0, c: int = 1):
        if d not in self.RADICANDS:
            raise ExactArithmeticError(f"unsupported radicand {d}")
        if c == 0:
            raise ExactArithmeticError("zero denominator")
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(a, b), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        if a == 0 and b == 0:
            c = 1
        self.d, self.a, self.b, self.c = d, a, b, c

    @classmethod
    def from_int(cls, d: int, n: int) -> "QuadraticScalar":
        return cls(d, n, 0, 1)

    def _coerce(self, other):
        if isinstance(other, QuadraticScalar):
            if other.d != self.d:
                raise ExactArithmeticError(f"radicand mismatch: {self.d} vs {other.d}")
            return other
        if isinstance(other, Integral):
            return QuadraticScalar(self.d, int(other))
        if isinstance(other, DyadicRootTwo):
            raise ExactArithmeticError("cannot mix QuadraticScalar and DyadicRootTwo")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticScalar(self.d, self.a * o.c + o.a * self.c,
                               self.b * o.c + o.b * self.c, self.c * o.c)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar(self.d, -self.a, -self.b, self.c)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticScalar(self.d, self.a * o.a + self.d * self.b * o.b,
                               self.a * o.b + self.b * o.a, self.c * o.c)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticScalar":
        if not self:
            raise ExactArithmeticError("division by zero")
        norm = self.a * self.a - self.d * self.b * self.b
        # rational times conjugate: c (a - b r) / norm
        return QuadraticScalar(self.d, self.c * self.a, -self.c * self.b, norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def conjugate(self) -> "QuadraticScalar":
        """Galois conjugate sqrt(d) -> -sqrt(d)."""
        return QuadraticScalar(self.d, self.a, -self.b, self.c)

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, other):
        if isinstance(other, Integral):
            return self.b == 0 and self.c == 1 and self.a == other
        if not isinstance(other, QuadraticScalar):
            return NotImplemented
        return (self.d, self.a, self.b, self.c) == (other.d, other.a, other.b, other.c)

    def __hash__(self):
        return hash((self.d, self.a, self.b, self.c))

    def __repr__(self):
        return f"QuadraticScalar({self.d}, {self.a}, {self.b}, {self.c})"

    def __str__(self):
        if not self.b:
            num = str(self.a)
        elif not self.a:
            num = f"{self.b}*r{self.d}"
        else:
            num = f"({self.a}{self.b:+d}*r{self.d})"
        return num if self.c == 1 else f"{num}/{self.c}"


# ---------------------------------------------------------------------------
# Clifford algebra Cl(0, N)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def blade_sign(a: int, b: int) -> int:
    """Sign of e_A * e_B = sign * e_(A xor B) with e_i**2 = -1.

    Monomials are ordered products e_i1 e_i2 ... with i1 < i2 < ...
    """
    swaps = 0
    x = a >> 1
    while x:
        swaps += _popcount(x & b)
        x >>= 1
    swaps += _popcount(a & b)
    return -1 if swaps & 1 else 1


_ZERO = DyadicRootTwo(0)
_ONE = DyadicRootTwo(1)


class CliffordElement:
    """An element of Cl(0, rank) with Z[1/sqrt 2] coefficients.

    ``terms`` maps monomial bitmasks to nonzero DyadicRootTwo coefficients.
    """

    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms=None):
        if not 0 <= rank <= MAX_CLIFFORD_RANK:
            raise ValueError(f"Clifford rank must be in [0, {MAX_CLIFFORD_RANK}], got {rank}")
        self.rank = rank
        clean = {}
        top = 1 << rank
        for mask, coeff in (terms or {}).items():
            if not 0 <= mask < top:
                raise ValueError(f"monomial {mask:b} outside rank {rank}")
            if not isinstance(coeff, DyadicRootTwo):
                coeff = DyadicRootTwo(coeff)
            if coeff:
                clean[mask] = coeff
        self.terms = clean
        self._hash = None

    @classmethod
    def scalar(cls, rank: int, value=1) -> "CliffordElement":
        return cls(rank, {0: value})

    @classmethod
    def generator(cls, rank: int, i: int) -> "CliffordElement":
        if not 0 <= i < rank:
            raise ValueError(f"generator index {i} out of range")
        return cls(rank, {1 << i: _ONE})

    @classmethod
    def root_vector(cls, rank: int, a: int, b: int) -> "CliffordElement":
        """The unit vector (e_a - e_b)/sqrt(2)."""
        if a == b:
            raise ValueError("root vector needs distinct indices")
        h = DyadicRootTwo.inv_sqrt2_power(1)
        return cls(rank, {1 << a: h, 1 << b: -h})

    def _check(self, other: "CliffordElement"):
        if not isinstance(other, CliffordElement):
            raise TypeError(f"expected CliffordElement, got {type(other).__name__}")
        if other.rank != self.rank:
            raise ValueError(f"Clifford rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, _ZERO) + c
        return CliffordElement(self.rank, out)

    def __neg__(self):
        return CliffordElement(self.rank, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (Integral, DyadicRootTwo)):
            return CliffordElement(self.rank, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = ma ^ mb
                term = ca * cb
                if blade_sign(ma, mb) < 0:
                    term = -term
                out[m] = out.get(m, _ZERO) + term
        return CliffordElement(self.rank, out)

    def __rmul__(self, other):
        if isinstance(other, (Integral, DyadicRootTwo)):
            return self * other
        return NotImplemented

    def product_coefficient(self, other: "CliffordElement", mask: int) -> DyadicRootTwo:
        """Coefficient of monomial ``mask`` in self * other, without forming the product."""
        self._check(other)
        total = _ZERO
        oterms = other.terms
        for ma, ca in self.terms.items():
            cb = oterms.get(ma ^ mask)
            if cb is None:
                continue
            term = ca * cb
            total = total - term if blade_sign(ma, ma ^ mask) < 0 else total + term
        return total

    def reverse(self) -> "CliffordElement":
        """Reversion: grade-g part scaled by (-1)**(g(g-1)/2)."""
        out = {}
        for m, c in self.terms.items():
            g = _popcount(m)
            out[m] = -c if (g * (g - 1) // 2) & 1 else c
        return CliffordElement(self.rank, out)

    def grade_parity(self):
        """0 or 1 if homogeneous in even/odd grade, else None."""
        parities = {_popcount(m) & 1 for m in self.terms}
        if len(parities) == 1:
            return parities.pop()
        return 0 if not parities else None

    def coefficient(self, mask: int) -> DyadicRootTwo:
        return self.terms.get(mask, _ZERO)

    def is_scalar(self) -> bool:
        return all(m == 0 for m in self.terms)

    def __eq__(self, other):
        if isinstance(other, Integral):
            other = CliffordElement.scalar(self.rank, other)
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda x: (_popcount(x), x)):
            name = "".join(f"e{i}" for i in range(self.rank) if m >> i & 1) or "1"
            parts.append(f"{self.terms[m]}*{name}")
        return " + ".join(parts)


def clifford_product(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    return a * b


def clifford_reverse(a: CliffordElement) -> CliffordElement:
    return a.reverse()


# ---------------------------------------------------------------------------
# Quaternions
# ---------------------------------------------------------------------------

class Quaternion:
    """r + x i + y j + z k with QuadraticScalar components over one radicand."""

    __slots__ = ("r", "x", "y", "z")

    def __init__(self, r, x, y, z, d: int | None = None):
        comps = [r, x, y, z]
        if d is None:
            ds = {c.d for c in comps if isinstance(c, QuadraticScalar)}
            if len(ds) > 1:
                raise ExactArithmeticError(f"radicand mismatch among components: {sorted(ds)}")
            d = ds.pop() if ds else 2
        comps = [c if isinstance(c, QuadraticScalar) else QuadraticScalar(d, int(c)) for c in comps]
        if any(c.d != d for c in comps):
            raise ExactArithmeticError("radicand mismatch among components")
        self.r, self.x, self.y, self.z = comps

    @property
    def d(self) -> int:
        return self.r.d

    def components(self):
        return (self.r, self.x, self.y, self.z)

    def _check(self, other):
        if not isinstance(other, Quaternion):
            raise TypeError(f"expected Quaternion, got {type(other).__name__}")
        if other.d != self.d:
            raise ExactArithmeticError(f"radicand mismatch: {self.d} vs {other.d}")

    def __mul__(self, q):
        if isinstance(q, (Integral, QuadraticScalar)):
            return Quaternion(*(c * q for c in self.components()))
        self._check(q)
        a1, b1, c1, d1 = self.components()
        a2, b2, c2, d2 = q.components()
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, q):
        if isinstance(q, (Integral, QuadraticScalar)):
            return self * q
        return NotImplemented

    def __add__(self, q):
        self._check(q)
        return Quaternion(*(u + v for u, v in zip(self.components(), q.components())))

    def __neg__(self):
        return Quaternion(*(-c for c in self.components()))

    def __sub__(self, q):
        return self + (-q)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.r, -self.x, -self.y, -self.z)

    def galois(self) -> "Quaternion":
        """Apply sqrt(d) -> -sqrt(d) to every component."""
        return Quaternion(*(c.conjugate() for c in self.components()))

    def norm(self) -> QuadraticScalar:
        """Squared Euclidean norm |q|**2."""
        return sum((c * c for c in self.components()[1:]), self.r * self.r)

    def inverse(self) -> "Quaternion":
        n = self.norm()
        if not n:
            raise ExactArithmeticError("zero quaternion has no inverse")
        inv = n.inverse()
        return Quaternion(*(c * inv for c in self.conjugate().components()))

    def __eq__(self, other):
        if isinstance(other, Integral):
            other = Quaternion(other, 0, 0, 0, d=self.d)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return self.components() == other.components()

    def __hash__(self):
        return hash(self.components())

    def __repr__(self):
        return "Quaternion(%s, %s, %s, %s)" % tuple(str(c) for c in self.components())


def quaternion_product(p: Quaternion, q: Quaternion) -> Quaternion:
    return p * q
