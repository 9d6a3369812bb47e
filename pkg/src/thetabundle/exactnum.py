"""Exact scalars: rationals, abstract roots of unity and cyclotomic fields.

Rationals are :class:`fractions.Fraction`.  A :class:`RootOfUnity` is a pair
``(order, exp)`` standing for ``zeta_order ** exp``; it never becomes a float.
A :class:`Cyclotomic` is an element of Q(zeta_N) stored as its residue modulo
the N-th cyclotomic polynomial, so every nonzero element is invertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import IncompatibleOrder, ZeroInversion

BigRational = Fraction
Scalar = Union[int, Fraction, "Cyclotomic", "RootOfUnity"]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def parse_rational(text: str | int) -> Fraction:
    """Parse the ``"p/q"`` JSON form (plain integers are accepted too)."""
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# polynomial helpers (integer / rational coefficient lists, low degree first)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        out[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row e holds the coordinates of x**e mod Phi_n for 0 <= e < n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce with the monic Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    return tuple(rows)


# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RootOfUnity:
    """The abstract root of unity ``zeta_order ** exp``."""

    order: int
    exp: int = 0

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        object.__setattr__(self, "exp", self.exp % self.order)

    @classmethod
    def one(cls, order: int = 1) -> RootOfUnity:
        return cls(order, 0)

    def reduced(self) -> tuple[int, int]:
        """Primitive form: (multiplicative order, exponent)."""
        g = gcd(self.exp, self.order)
        return self.order // g, self.exp // g

    @property
    def multiplicative_order(self) -> int:
        return self.reduced()[0]

    def __eq__(self, other):
        if isinstance(other, RootOfUnity):
            return self.reduced() == other.reduced()
        if isinstance(other, int) and other == 1:
            return self.exp == 0
        return NotImplemented

    def __hash__(self):
        return hash(("rou",) + self.reduced())

    def is_one(self) -> bool:
        return self.exp == 0

    def lift_order(self, m: int) -> RootOfUnity:
        return lift_order(self, m)

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        m = lcm(self.order, other.order)
        return RootOfUnity(m, self.exp * (m // self.order) + other.exp * (m // other.order))

    def inverse(self) -> RootOfUnity:
        return RootOfUnity(self.order, -self.exp)

    def __truediv__(self, other: RootOfUnity) -> RootOfUnity:
        return self * other.inverse()

    def __pow__(self, k: int) -> RootOfUnity:
        return RootOfUnity(self.order, self.exp * k)

    def to_cyclotomic(self, order: int | None = None) -> Cyclotomic:
        n = self.order if order is None else order
        return Cyclotomic.root(n, self.lift_order(n).exp)

    def __repr__(self):
        return f"RootOfUnity({self.order}, {self.exp})"

    def to_json(self) -> dict:
        return {"order": self.order, "exp": self.exp}

    @classmethod
    def from_json(cls, doc: dict) -> RootOfUnity:
        return cls(int(doc["order"]), int(doc["exp"]))


def lift_order(x: RootOfUnity, m: int) -> RootOfUnity:
    """Re-express ``x`` as a power of ``zeta_m``; requires ``x.order | m``."""
    if m < 1 or m % x.order:
        raise IncompatibleOrder(f"order {x.order} does not divide {m}")
    return RootOfUnity(m, x.exp * (m // x.order))


# --------------------------------------------------------------------------


class Cyclotomic:
    """Element of Q(zeta_N) reduced modulo Phi_N.

    ``coeffs[j]`` is the coefficient of ``zeta_N ** j``; there are
    ``euler_phi(N)`` of them.  Instances are immutable.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable):
        coeffs = tuple(Fraction(c) for c in coeffs)
        deg = euler_phi(order)
        if len(coeffs) > deg:
            coeffs = _reduce(order, coeffs)
        elif len(coeffs) < deg:
            coeffs = coeffs + (Fraction(0),) * (deg - len(coeffs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, key, value):
        raise AttributeError("Cyclotomic is immutable")

    @classmethod
    def _raw(cls, order: int, coeffs: tuple) -> Cyclotomic:
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def rational(cls, value, order: int = 1) -> Cyclotomic:
        deg = euler_phi(order)
        return cls._raw(order, (Fraction(value),) + (Fraction(0),) * (deg - 1))

    @classmethod
    def zero(cls, order: int = 1) -> Cyclotomic:
        return cls.rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> Cyclotomic:
        return cls.rational(1, order)

    @classmethod
    def root(cls, order: int, exp: int = 1) -> Cyclotomic:
        row = _power_table(order)[exp % order]
        return cls._raw(order, tuple(Fraction(c) for c in row))

    @classmethod
    def coerce(cls, value, order: int) -> Cyclotomic:
        if isinstance(value, Cyclotomic):
            return value.lift(lcm(order, value.order)) if value.order != order else value
        if isinstance(value, RootOfUnity):
            return value.to_cyclotomic(lcm(order, value.order))
        return cls.rational(value, order)

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self):
        return not self.is_zero()

    # order handling -------------------------------------------------------
    def lift(self, m: int) -> Cyclotomic:
        """Embed into Q(zeta_m) via zeta_N = zeta_m ** (m / N)."""
        if m == self.order:
            return self
        if m % self.order:
            raise IncompatibleOrder(f"order {self.order} does not divide {m}")
        step = m // self.order
        table = _power_table(m)
        out = [Fraction(0)] * euler_phi(m)
        for j, c in enumerate(self.coeffs):
            if c:
                row = table[(j * step) % m]
                for k, r in enumerate(row):
                    if r:
                        out[k] += c * r
        return Cyclotomic._raw(m, tuple(out))

    def _align(self, other) -> tuple[Cyclotomic, Cyclotomic]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.coerce(other, self.order)
        if other.order == self.order:
            return self, other
        m = lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic._raw(self.order, (self.coeffs[0] + other,) + self.coeffs[1:])
        a, b = self._align(other)
        return Cyclotomic._raw(a.order, tuple(x + y if y else x for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic._raw(self.order, tuple(c * other for c in self.coeffs))
        if isinstance(other, RootOfUnity) or isinstance(other, Cyclotomic):
            a, b = self._align(other)
            return cyclo_mul(a, b)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        return cyclo_inv(self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroInversion("division by zero")
            return self * (Fraction(1) / Fraction(other))
        a, b = self._align(other)
        return cyclo_mul(a, cyclo_inv(b))

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other, self.order) * cyclo_inv(self)

    def __pow__(self, k: int) -> Cyclotomic:
        if k < 0:
            return cyclo_inv(self) ** (-k)
        result = Cyclotomic.one(self.order)
        base = self
        while k:
            if k & 1:
                result = cyclo_mul(result, base)
            base = cyclo_mul(base, base)
            k >>= 1
        return result

    def conjugate_root(self) -> Cyclotomic:
        """Image under zeta -> zeta**-1 (complex conjugation)."""
        n = self.order
        table = _power_table(n)
        out = [Fraction(0)] * len(self.coeffs)
        for j, c in enumerate(self.coeffs):
            if c:
                for k, r in enumerate(table[(-j) % n]):
                    if r:
                        out[k] += c * r
        return Cyclotomic._raw(n, tuple(out))

    def as_root_of_unity(self) -> RootOfUnity | None:
        """Return ``r`` with ``self == r`` if ``self`` is a root of unity."""
        n = self.order
        m = n if n % 2 == 0 else 2 * n
        big = self.lift(m)
        table = _power_table(m)
        for e in range(m):
            if all(c == r for c, r in zip(big.coeffs, table[e])):
                return RootOfUnity(m, e)
        return None

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, RootOfUnity):
            other = other.to_cyclotomic()
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._align(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # cross-order equality forces a coarse hash for irrational values
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash(("cyclotomic", self.is_zero()))

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if j == 0 else f"{c}*z{self.order}^{j}")
        return " + ".join(terms) if terms else "0"

    # json -----------------------------------------------------------------
    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc: dict) -> Cyclotomic:
        return cls(int(doc["order"]), [parse_rational(c) for c in doc["coeffs"]])


def _reduce(order: int, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    table = _power_table(order)
    out = [Fraction(0)] * euler_phi(order)
    for k, c in enumerate(coeffs):
        if c:
            for j, r in enumerate(table[k % order]):
                if r:
                    out[j] += c * r
    return tuple(out)


def cyclo_mul(a: Cyclotomic, b: Cyclotomic) -> Cyclotomic:
    """Exact product in Q(zeta_N); orders are lifted to their lcm first."""
    if a.order != b.order:
        a, b = a._align(b)
    n = a.order
    ac, bc = a.coeffs, b.coeffs
    if len(ac) == 1:
        return Cyclotomic._raw(n, (ac[0] * bc[0],))
    if not any(ac[1:]):
        x = ac[0]
        return Cyclotomic._raw(n, tuple(x * y if y else y for y in bc))
    if not any(bc[1:]):
        y = bc[0]
        return Cyclotomic._raw(n, tuple(x * y if x else x for x in ac))
    conv = [Fraction(0)] * (2 * len(ac) - 1)
    for i, x in enumerate(ac):
        if x:
            for j, y in enumerate(bc):
                if y:
                    conv[i + j] += x * y
    return Cyclotomic._raw(n, _reduce(n, conv))


def _poly_trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for j, d in enumerate(b):
            a[k + j] -= c * d
        a.pop()
        _poly_trim(a)
    return q, a


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim([Fraction(c) for c in out])


def cyclo_inv(a: Cyclotomic) -> Cyclotomic:
    """Inverse via the extended Euclidean algorithm against Phi_N."""
    if a.is_zero():
        raise ZeroInversion("zero has no inverse")
    if a.is_rational():
        return Cyclotomic._raw(a.order, (1 / a.coeffs[0],) + a.coeffs[1:])
    # invariant: s_i * a == r_i (mod Phi_N)
    r0 = [Fraction(c) for c in cyclotomic_polynomial(a.order)]
    r1 = _poly_trim(list(a.coeffs))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    # r1 is a nonzero constant since Phi_N is irreducible
    c = r1[0]
    return Cyclotomic(a.order, [x / c for x in s1])


def zeta(order: int, exp: int = 1) -> Cyclotomic:
    return Cyclotomic.root(order, exp)
