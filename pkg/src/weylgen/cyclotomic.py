"""Exact scalar arithmetic: rationals and cyclotomic field elements.

The coefficient field everywhere in this package is Q(zeta_m) for a
declared conductor m.  A ``CycNum`` stores the canonical residue of an
element modulo the m-th cyclotomic polynomial Phi_m, as a coefficient
vector of length phi(m) over ``fractions.Fraction``.  Conductor 1 gives
plain Q.

Rationals are ``fractions.Fraction`` (exposed as ``Rat``); they mix freely
with ``CycNum`` in arithmetic and comparisons.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ConductorMismatchError

Rat = Fraction

Scalar = Union[Fraction, "CycNum"]
ScalarLike = Union[int, Fraction, "CycNum"]

_PHI_CACHE: dict[int, int] = {}
_CYCLO_CACHE: dict[int, tuple[Fraction, ...]] = {}


def euler_phi(m: int) -> int:
    """Euler totient of a positive integer."""
    if m < 1:
        raise ValueError(f"conductor must be positive, got {m}")
    if m in _PHI_CACHE:
        return _PHI_CACHE[m]
    result = m
    k, p = m, 2
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            result -= result // p
        p += 1
    if k > 1:
        result -= result // k
    _PHI_CACHE[m] = result
    return result


def _poly_divmod(num: list[Fraction], den: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Univariate long division on ascending coefficient lists."""
    num = list(num)
    dden = len(den) - 1
    while len(den) > 1 and den[-1] == 0:
        raise ValueError("denominator has zero leading coefficient")
    quot = [Fraction(0)] * max(len(num) - dden, 0)
    lead = den[-1]
    for i in range(len(num) - 1, dden - 1, -1):
        if num[i] == 0:
            continue
        q = num[i] / lead
        quot[i - dden] = q
        for j, c in enumerate(den):
            num[i - dden + j] -= q * c
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def cyclotomic_polynomial(m: int) -> tuple[Fraction, ...]:
    """Ascending coefficients of Phi_m, computed by dividing x^m - 1 by the
    Phi_d of the proper divisors d of m."""
    if m < 1:
        raise ValueError(f"conductor must be positive, got {m}")
    if m in _CYCLO_CACHE:
        return _CYCLO_CACHE[m]
    if m == 1:
        poly = (Fraction(-1), Fraction(1))
    else:
        num = [Fraction(0)] * (m + 1)
        num[0], num[m] = Fraction(-1), Fraction(1)
        for d in range(1, m):
            if m % d == 0:
                num, rem = _poly_divmod(num, cyclotomic_polynomial(d))
                if any(c != 0 for c in rem):
                    raise AssertionError(f"cyclotomic division left a remainder for m={m}, d={d}")
        poly = tuple(num)
    _CYCLO_CACHE[m] = poly
    return poly


def _as_fraction(value: int | Fraction) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


class CycNum:
    """Element of Q(zeta_m), reduced modulo Phi_m.

    ``coeffs`` has length phi(m); entry k is the coefficient of zeta_m^k in
    the canonical residue.  Instances are immutable and hashable.
    """

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable[int | Fraction] | int | Fraction):
        phi = euler_phi(conductor)
        if isinstance(coeffs, (int, Fraction)):
            vec = [_as_fraction(coeffs)] + [Fraction(0)] * (phi - 1)
        else:
            vec = [_as_fraction(c) for c in coeffs]
            if len(vec) > phi:
                vec = _reduce_mod_cyclotomic(vec, conductor)
            elif len(vec) < phi:
                vec = vec + [Fraction(0)] * (phi - len(vec))
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", tuple(vec))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zeta(m: int) -> "CycNum":
        """The primitive m-th root of unity zeta_m."""
        phi = euler_phi(m)
        if phi == 1:
            # m = 1 gives 1, m = 2 gives -1
            return CycNum(m, Fraction(1) if m == 1 else Fraction(-1))
        coeffs = [Fraction(0)] * phi
        coeffs[1] = Fraction(1)
        return CycNum(m, coeffs)

    @staticmethod
    def zero(m: int = 1) -> "CycNum":
        return CycNum(m, Fraction(0))

    @staticmethod
    def one(m: int = 1) -> "CycNum":
        return CycNum(m, Fraction(1))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    # -- conductor handling -------------------------------------------------

    def lift(self, conductor: int) -> "CycNum":
        """Rewrite in Q(zeta_M) for a multiple M of the current conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor != 0:
            raise ConductorMismatchError(
                f"cannot lift conductor {self.conductor} to non-multiple {conductor}")
        step = conductor // self.conductor
        # zeta_m = zeta_M^step, so substitute x -> x^step into the residue
        vec = [Fraction(0)] * (len(self.coeffs) * step or 1)
        for k, c in enumerate(self.coeffs):
            if c != 0:
                vec[k * step] = c
        return CycNum(conductor, _reduce_mod_cyclotomic(vec, conductor))

    def _pair(self, other: ScalarLike) -> "tuple[CycNum, CycNum] | None":
        if isinstance(other, (int, Fraction)):
            return self, CycNum(self.conductor, _as_fraction(other))
        if isinstance(other, CycNum):
            if other.conductor == self.conductor:
                return self, other
            lcm = math.lcm(self.conductor, other.conductor)
            return self.lift(lcm), other.lift(lcm)
        return None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycNum(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.conductor, [-c for c in self.coeffs])

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycNum(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        result = self.__sub__(other)
        if result is NotImplemented:
            return NotImplemented
        return -result

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            return CycNum(self.conductor, [c * q for c in self.coeffs])
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        conv = [Fraction(0)] * (2 * len(a.coeffs) - 1 or 1)
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(b.coeffs):
                if y != 0:
                    conv[i + j] += x * y
        return CycNum(a.conductor, _reduce_mod_cyclotomic(conv, a.conductor))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic division by zero")
        if self.is_rational():
            return CycNum(self.conductor, 1 / self.coeffs[0])
        # extended Euclid on (residue, Phi_m): u*r + v*Phi = g, a nonzero
        # constant since Phi_m is irreducible over Q
        r0 = list(cyclotomic_polynomial(self.conductor))
        r1 = list(self.coeffs)
        while len(r1) > 1 and r1[-1] == 0:
            r1.pop()
        u0, u1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            quot, rem = _poly_divmod(r0, r1)
            u_next = _poly_sub(u0, _poly_mul(quot, u1))
            r0, r1 = r1, rem
            u0, u1 = u1, u_next
        g = r0
        if len(g) != 1 or g[0] == 0:
            raise AssertionError("gcd with irreducible Phi_m must be a nonzero constant")
        inv = [c / g[0] for c in u0]
        return CycNum(self.conductor, _reduce_mod_cyclotomic(inv, self.conductor))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            if q == 0:
                raise ZeroDivisionError("cyclotomic division by zero")
            return CycNum(self.conductor, [c / q for c in self.coeffs])
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.conductor, _as_fraction(other)) * self.inverse()
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycNum(self.conductor, Fraction(1))
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison / hashing ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CycNum):
            if other.conductor == self.conductor:
                return self.coeffs == other.coeffs
            lcm = math.lcm(self.conductor, other.conductor)
            return self.lift(lcm).coeffs == other.lift(lcm).coeffs
        return NotImplemented

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        # rational values hash like their Fraction so that equal elements of
        # conductors 1 and 2 collide correctly; non-rational elements are only
        # ever hashed alongside peers of the same conductor
        if self._hash is None:
            if self.is_rational():
                h = hash(self.coeffs[0])
            else:
                h = hash((self.conductor, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- formatting ----------------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"CycNum({self.conductor}, {list(self.coeffs)!r})"


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1 or 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return out


def _reduce_mod_cyclotomic(coeffs: list[Fraction], m: int) -> list[Fraction]:
    phi = euler_phi(m)
    _, rem = _poly_divmod(list(coeffs), cyclotomic_polynomial(m))
    rem = rem + [Fraction(0)] * (phi - len(rem))
    return rem[:phi]


def as_scalar(value: ScalarLike) -> Scalar:
    """Normalize a scalar-like value: ints become Fractions, rational CycNums
    collapse to Fractions.  CycNum survives only when genuinely irrational."""
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, CycNum):
        return value.coeffs[0] if value.is_rational() else value
    raise TypeError(f"not a scalar: {value!r}")


def scalar_is_zero(value: ScalarLike) -> bool:
    if isinstance(value, CycNum):
        return value.is_zero()
    return value == 0


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(value: ScalarLike) -> str:
    """Canonical text for a scalar: ``a/b`` for rationals, a parenthesized
    residue ``(c0 + c1*z + ...)`` for irrational cyclotomic values."""
    value = as_scalar(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    parts: list[str] = []
    for k, c in enumerate(value.coeffs):
        if c == 0:
            continue
        if k == 0:
            body = format_rational(abs(c))
        else:
            mono = "z" if k == 1 else f"z^{k}"
            body = mono if abs(c) == 1 else f"{format_rational(abs(c))}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "(" + "".join(parts) + ")"


def parse_scalar(text: str, conductor: int = 1) -> Scalar:
    """Parse the output of :func:`format_scalar`.

    Accepts ``a``, ``a/b``, and residues like ``(1 - 2*z^3)`` (parentheses
    optional).  ``z`` denotes zeta with the given conductor.
    """
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if not s:
        raise ValueError("empty scalar")
    total: Scalar = Fraction(0)
    # split on top-level +/- separators
    for sign, term in _signed_terms(s):
        total = total + sign * _parse_scalar_term(term, conductor)
    return as_scalar(total)


def _signed_terms(s: str):
    terms: list[tuple[int, str]] = []
    sign, i, start = 1, 0, 0
    if s.startswith("-"):
        sign, start, i = -1, 1, 1
    elif s.startswith("+"):
        start = i = 1
    while i < len(s):
        if s[i] in "+-" and i > start and s[i - 1] == " ":
            terms.append((sign, s[start:i].strip()))
            sign = 1 if s[i] == "+" else -1
            i += 1
            start = i
        else:
            i += 1
    terms.append((sign, s[start:].strip()))
    return terms


def _parse_scalar_term(term: str, conductor: int) -> Scalar:
    coeff = Fraction(1)
    zpow = 0
    for factor in term.split("*"):
        f = factor.strip()
        if not f:
            raise ValueError(f"malformed scalar term {term!r}")
        if f[0] == "z":
            if f == "z":
                zpow += 1
            elif f.startswith("z^"):
                zpow += int(f[2:])
            else:
                raise ValueError(f"malformed residue factor {f!r}")
        else:
            coeff *= Fraction(f)
    if zpow == 0:
        return coeff
    return CycNum.zeta(conductor) ** zpow * coeff
