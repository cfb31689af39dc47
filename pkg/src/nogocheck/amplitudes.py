"""Dual-backed complex amplitudes for small interferometric fixtures.

Exact values live in the ring of finite sums ``sum_k c_k * sqrt(m_k)`` with
rational coefficients ``c_k`` and squarefree integer radicands ``m_k``,
extended to complex numbers componentwise.  This ring is closed under
addition, multiplication and conjugation and covers everything the device
fixtures need: 50/50 splitters, arbitrary rational intensity splittings,
and phase factors at multiples of pi/12.  Any other phase falls back to a
plain ``complex``; mixed arithmetic promotes to the float backing.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return (s, m) with n == s*s*m and m squarefree, for n >= 1."""
    if n < 1:
        raise ValueError(f"radicand must be >= 1, got {n}")
    s, m, d = 1, 1, 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            s *= d ** (e // 2)
            if e % 2:
                m *= d
        d += 1
    return s, m * n


class RadicalReal:
    """Element of the ring Q(sqrt(2), sqrt(3), sqrt(5), ...).

    Canonical form: mapping {squarefree radicand m: coefficient}, zero
    coefficients dropped.  Distinct squarefree radicals are linearly
    independent over Q, so structural equality is ring equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def from_fraction(cls, value) -> "RadicalReal":
        return cls({1: Fraction(value)})

    @classmethod
    def sqrt_fraction(cls, value) -> "RadicalReal":
        """Exact square root of a nonnegative rational."""
        value = Fraction(value)
        if value < 0:
            raise ValueError(f"cannot take exact sqrt of negative {value}")
        if value == 0:
            return cls()
        s, m = squarefree_decompose(value.numerator * value.denominator)
        return cls({m: Fraction(s, value.denominator)})

    def __add__(self, other: "RadicalReal") -> "RadicalReal":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return RadicalReal(terms)

    def __sub__(self, other: "RadicalReal") -> "RadicalReal":
        return self + (-other)

    def __neg__(self) -> "RadicalReal":
        return RadicalReal({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "RadicalReal") -> "RadicalReal":
        terms: dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                g = math.gcd(m1, m2)
                m = (m1 // g) * (m2 // g)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2 * g
        return RadicalReal(terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadicalReal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.terms.get(1, Fraction(0))

    def __float__(self) -> float:
        return sum((float(c) * math.sqrt(m) for m, c in self.terms.items()), 0.0)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"{c}*sqrt({m})" if m != 1 else str(c)
                 for m, c in sorted(self.terms.items())]
        return " + ".join(parts)


_RZERO = RadicalReal()
_RONE = RadicalReal.from_fraction(1)


class Amplitude:
    """Complex amplitude recording whether it is exactly or float backed."""

    __slots__ = ("_re", "_im", "_z")

    def __init__(self, re: RadicalReal | None = None,
                 im: RadicalReal | None = None,
                 z: complex | None = None):
        if z is not None:
            self._re = None
            self._im = None
            self._z = complex(z)
        else:
            self._re = re if re is not None else _RZERO
            self._im = im if im is not None else _RZERO
            self._z = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "Amplitude":
        return cls(_RZERO, _RZERO)

    @classmethod
    def one(cls) -> "Amplitude":
        return cls(_RONE, _RZERO)

    @classmethod
    def from_fraction(cls, value) -> "Amplitude":
        return cls(RadicalReal.from_fraction(value), _RZERO)

    @classmethod
    def from_sqrt(cls, value) -> "Amplitude":
        """Exact sqrt of a nonnegative rational, e.g. splitter amplitudes."""
        return cls(RadicalReal.sqrt_fraction(value), _RZERO)

    @classmethod
    def from_complex(cls, z) -> "Amplitude":
        return cls(z=complex(z))

    @classmethod
    def exp_i(cls, theta: float) -> "Amplitude":
        """e^{i theta}; exact whenever theta is a multiple of pi/12."""
        k = theta / (math.pi / 12)
        kr = round(k)
        if abs(k - kr) < 1e-9:
            c, s = _PHASE_TABLE[kr % 24]
            return cls(c, s)
        return cls(z=cmath.exp(1j * theta))

    # -- properties ---------------------------------------------------
    @property
    def exact(self) -> bool:
        return self._z is None

    def to_complex(self) -> complex:
        if self._z is not None:
            return self._z
        return complex(float(self._re), float(self._im))

    def is_zero(self) -> bool:
        if self.exact:
            return self._re.is_zero() and self._im.is_zero()
        return self._z == 0

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "Amplitude") -> "Amplitude":
        if self.exact and other.exact:
            return Amplitude(self._re + other._re, self._im + other._im)
        return Amplitude(z=self.to_complex() + other.to_complex())

    def __sub__(self, other: "Amplitude") -> "Amplitude":
        return self + (-other)

    def __neg__(self) -> "Amplitude":
        if self.exact:
            return Amplitude(-self._re, -self._im)
        return Amplitude(z=-self._z)

    def __mul__(self, other: "Amplitude") -> "Amplitude":
        if self.exact and other.exact:
            re = self._re * other._re - self._im * other._im
            im = self._re * other._im + self._im * other._re
            return Amplitude(re, im)
        return Amplitude(z=self.to_complex() * other.to_complex())

    def conjugate(self) -> "Amplitude":
        if self.exact:
            return Amplitude(self._re, -self._im)
        return Amplitude(z=self._z.conjugate())

    def abs2(self):
        """|z|^2 as a Fraction when exact and rational, else a float."""
        if self.exact:
            rad = self._re * self._re + self._im * self._im
            if rad.is_rational():
                return rad.as_fraction()
            return float(rad)
        return abs(self._z) ** 2

    def __eq__(self, other) -> bool:
        if not isinstance(other, Amplitude):
            return NotImplemented
        if self.exact and other.exact:
            return self._re == other._re and self._im == other._im
        return self.to_complex() == other.to_complex()

    def __hash__(self):
        if self.exact:
            return hash((self._re, self._im))
        return hash(self._z)

    def isclose(self, other: "Amplitude", tol: float = 1e-12) -> bool:
        return abs(self.to_complex() - other.to_complex()) <= tol

    def __repr__(self):
        if self.exact:
            return f"Amplitude({self._re!r} + i*({self._im!r}))"
        return f"Amplitude({self._z!r})"


def _build_phase_table() -> list[tuple[RadicalReal, RadicalReal]]:
    # cos(15 deg) = (sqrt(6)+sqrt(2))/4, sin(15 deg) = (sqrt(6)-sqrt(2))/4
    c15 = RadicalReal({6: Fraction(1, 4), 2: Fraction(1, 4)})
    s15 = RadicalReal({6: Fraction(1, 4), 2: Fraction(-1, 4)})
    table = [(_RONE, _RZERO)]
    for _ in range(23):
        c, s = table[-1]
        table.append((c * c15 - s * s15, s * c15 + c * s15))
    return table


_PHASE_TABLE = _build_phase_table()


def prob_sum(values):
    """Sum probabilities, keeping Fractions exact when every term is one."""
    total = Fraction(0)
    for v in values:
        if isinstance(total, Fraction) and isinstance(v, Fraction):
            total += v
        else:
            total = float(total) + float(v)
    return total
