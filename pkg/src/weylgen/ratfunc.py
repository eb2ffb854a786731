"""Formal fractions of multivariate polynomials.

A ``RatFrac`` is a pair num/den with den nonzero.  No canonical reduced
form exists (there is no multivariate GCD engine here); equality is always
decided by cross-multiplication.  ``reduce`` is a best-effort cleanup:
content removal plus trial division against caller-supplied factors,
typically the linear forms of a reflection arrangement.

Addition prefers a shared denominator when one denominator exactly divides
the other, which keeps the denominators of operator coefficients as powers
of a single Jacobian determinant instead of blowing up.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .cyclotomic import CycNum, ScalarLike, scalar_is_zero
from .errors import ArityMismatchError, InexactDivisionError
from .polynomials import MPoly, format_poly, poly_from_json, poly_to_json


class RatFrac:
    """num / den with den != 0; purely formal, immutable."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        if den is None:
            den = MPoly.one(num.nvars)
        if num.nvars != den.nvars:
            raise ArityMismatchError(
                f"numerator has {num.nvars} variables, denominator {den.nvars}")
        if den.is_zero():
            raise ZeroDivisionError("fraction with zero denominator")
        if num.is_zero():
            den = MPoly.one(num.nvars)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFrac is immutable")

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @staticmethod
    def zero(nvars: int) -> "RatFrac":
        return RatFrac(MPoly.zero(nvars))

    @staticmethod
    def one(nvars: int) -> "RatFrac":
        return RatFrac(MPoly.one(nvars))

    @staticmethod
    def constant(nvars: int, value: ScalarLike) -> "RatFrac":
        return RatFrac(MPoly.constant(nvars, value))

    @staticmethod
    def from_poly(p: MPoly) -> "RatFrac":
        return RatFrac(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "RatFrac | None":
        if isinstance(other, RatFrac):
            return other
        if isinstance(other, MPoly):
            return RatFrac(other)
        if isinstance(other, (int, Fraction, CycNum)):
            return RatFrac.constant(self.nvars, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        if self.den == o.den:
            return RatFrac(self.num + o.num, self.den)
        # prefer the larger denominator when one divides the other
        if self.den.degree() >= o.den.degree():
            try:
                q = self.den.divexact(o.den)
                return RatFrac(self.num + o.num * q, self.den)
            except InexactDivisionError:
                pass
        else:
            try:
                q = o.den.divexact(self.den)
                return RatFrac(self.num * q + o.num, o.den)
            except InexactDivisionError:
                pass
        return RatFrac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFrac(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__add__(-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return RatFrac(self.num * other, self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return RatFrac.zero(self.nvars)
        return RatFrac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by a fraction with zero numerator")
        return RatFrac(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if self.is_zero():
                raise ZeroDivisionError("negative power of zero fraction")
            return RatFrac(self.den ** -exponent, self.num ** -exponent)
        return RatFrac(self.num**exponent, self.den**exponent)

    # -- calculus -------------------------------------------------------------------

    def partial(self, index: int) -> "RatFrac":
        """Partial derivative, extended to fractions by the quotient rule."""
        if self.den.is_one():
            return RatFrac(self.num.partial(index))
        dn = self.num.partial(index)
        dd = self.den.partial(index)
        if dd.is_zero():
            return RatFrac(dn, self.den)
        return RatFrac(dn * self.den - self.num * dd, self.den * self.den)

    def substitute(self, images: Sequence[MPoly]) -> "RatFrac":
        return RatFrac(self.num.substitute(images), self.den.substitute(images))

    # -- comparison -------------------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        return self.num * o.den == o.num * self.den

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __bool__(self):
        return not self.is_zero()

    # -- cleanup ------------------------------------------------------------------------

    def reduce(self, factors: Iterable[MPoly] = ()) -> "RatFrac":
        """Equal fraction with monomial and rational content stripped and
        trial division by the supplied factors applied.  Best effort only."""
        if self.is_zero():
            return RatFrac.zero(self.nvars)
        num, den = self.num, self.den
        nc, dc = num.monomial_content(), den.monomial_content()
        common = tuple(min(a, b) for a, b in zip(nc, dc))
        if any(common):
            num = num.shift_down(common)
            den = den.shift_down(common)
        content = num.rational_content() / den.rational_content()
        num = num / num.rational_content()
        den = den / den.rational_content()
        for f in factors:
            if f.is_constant():
                continue
            while True:
                try:
                    n2 = num.divexact(f)
                    d2 = den.divexact(f)
                except InexactDivisionError:
                    break
                num, den = n2, d2
        num = num * content
        # pin the denominator's leading coefficient to one for stable output
        _, lc = den.leading()
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFrac(num, den)

    # -- formatting ------------------------------------------------------------------------

    def to_text(self, varnames: Sequence[str] | None = None) -> str:
        if self.den.is_one():
            return format_poly(self.num, varnames)
        return f"({format_poly(self.num, varnames)})/({format_poly(self.den, varnames)})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RatFrac({self.to_text()!r})"

    def to_json(self) -> dict:
        return {"num": poly_to_json(self.num), "den": poly_to_json(self.den)}


def ratfrac_from_json(obj: dict) -> RatFrac:
    return RatFrac(poly_from_json(obj["num"]), poly_from_json(obj["den"]))
