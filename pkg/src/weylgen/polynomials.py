"""Sparse exact multivariate polynomials over Q(zeta_m).

An ``MPoly`` maps exponent tuples (one non-negative int per variable) to
nonzero scalar coefficients.  Terms iterate in graded-lexicographic order
(total degree first, then lexicographic with x1 largest), which fixes the
canonical text serialization used by the CLI.

The zero polynomial has an empty term map and degree ``MINUS_INFINITY``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .cyclotomic import (
    CycNum,
    Scalar,
    ScalarLike,
    as_scalar,
    format_scalar,
    parse_scalar,
    scalar_is_zero,
)
from .errors import ArityMismatchError, InexactDivisionError

MINUS_INFINITY = float("-inf")

Exponent = tuple[int, ...]


def grlex_key(exp: Exponent) -> tuple[int, Exponent]:
    return (sum(exp), exp)


class MPoly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, ScalarLike] | None = None):
        if nvars < 1:
            raise ValueError(f"nvars must be positive, got {nvars}")
        clean: dict[Exponent, Scalar] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(exp)
                if len(exp) != nvars:
                    raise ArityMismatchError(
                        f"exponent {exp} has length {len(exp)}, expected {nvars}")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                if not scalar_is_zero(coeff):
                    clean[exp] = as_scalar(coeff)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MPoly":
        return MPoly(nvars)

    @staticmethod
    def one(nvars: int) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: Fraction(1)})

    @staticmethod
    def constant(nvars: int, value: ScalarLike) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: value})

    @staticmethod
    def variable(nvars: int, index: int) -> "MPoly":
        """The polynomial x_index (0-based)."""
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for nvars={nvars}")
        exp = [0] * nvars
        exp[index] = 1
        return MPoly(nvars, {tuple(exp): Fraction(1)})

    @staticmethod
    def variables(nvars: int) -> list["MPoly"]:
        return [MPoly.variable(nvars, i) for i in range(nvars)]

    @staticmethod
    def monomial(nvars: int, exp: Sequence[int], coeff: ScalarLike = 1) -> "MPoly":
        return MPoly(nvars, {tuple(exp): coeff})

    # -- predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get((0,) * self.nvars) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int | float:
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(exp) for exp in self.terms)

    def leading(self) -> tuple[Exponent, Scalar]:
        """Leading (exponent, coefficient) under graded lex."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=grlex_key)
        return exp, self.terms[exp]

    def sorted_terms(self) -> list[tuple[Exponent, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    # -- arithmetic --------------------------------------------------------------

    def _check_arity(self, other: "MPoly") -> None:
        if self.nvars != other.nvars:
            raise ArityMismatchError(
                f"operands have {self.nvars} and {other.nvars} variables")

    def __add__(self, other):
        other = _coerce_poly(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        self._check_arity(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            acc = out.get(exp)
            out[exp] = coeff if acc is None else acc + coeff
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce_poly(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        self._check_arity(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            acc = out.get(exp)
            out[exp] = -coeff if acc is None else acc - coeff
        return MPoly(self.nvars, out)

    def __rsub__(self, other):
        result = self.__sub__(other)
        if result is NotImplemented:
            return NotImplemented
        return -result

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            if scalar_is_zero(other):
                return MPoly.zero(self.nvars)
            return MPoly(self.nvars, {exp: c * other for exp, c in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check_arity(other)
        if len(self.terms) > 4 and len(other.terms) > 4:
            packed = self._mul_packed(other)
            if packed is not None:
                return packed
        out: dict[Exponent, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                acc = out.get(exp)
                out[exp] = prod if acc is None else acc + prod
        return MPoly(self.nvars, out)

    def _mul_packed(self, other: "MPoly") -> "MPoly | None":
        # convolution over int-packed exponents (15 bits per variable) is
        # much faster than building a tuple per term pair
        limit = 1 << 15
        if any(e >= limit for exp in self.terms for e in exp):
            return None
        if any(e >= limit for exp in other.terms for e in exp):
            return None
        def pack(exp: Exponent) -> int:
            k = 0
            for e in exp:
                k = (k << 15) | e
            return k
        a = [(pack(exp), c) for exp, c in self.terms.items()]
        b = [(pack(exp), c) for exp, c in other.terms.items()]
        out: dict[int, Scalar] = {}
        get = out.get
        for k1, c1 in a:
            for k2, c2 in b:
                key = k1 + k2
                prod = c1 * c2
                acc = get(key)
                out[key] = prod if acc is None else acc + prod
        mask = (1 << 15) - 1
        n = self.nvars
        unpacked: dict[Exponent, Scalar] = {}
        for key, c in out.items():
            exp = [0] * n
            for i in range(n - 1, -1, -1):
                exp[i] = key & mask
                key >>= 15
            unpacked[tuple(exp)] = c
        return MPoly(n, unpacked)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            if scalar_is_zero(other):
                raise ZeroDivisionError("polynomial division by zero scalar")
            return MPoly(self.nvars, {exp: c / other for exp, c in self.terms.items()})
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers take non-negative integer exponents")
        result = MPoly.one(self.nvars)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- calculus / substitution ---------------------------------------------------

    def partial(self, index: int) -> "MPoly":
        """Formal partial derivative with respect to x_index (0-based)."""
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range for nvars={self.nvars}")
        out: dict[Exponent, Scalar] = {}
        for exp, coeff in self.terms.items():
            e = exp[index]
            if e == 0:
                continue
            new = list(exp)
            new[index] = e - 1
            out[tuple(new)] = coeff * e
        return MPoly(self.nvars, out)

    def substitute(self, images: Sequence["MPoly"]) -> "MPoly":
        """Ring homomorphism sending x_i to images[i]."""
        if len(images) != self.nvars:
            raise ArityMismatchError(
                f"{len(images)} images supplied for {self.nvars} variables")
        if not images:
            raise ArityMismatchError("no images")
        target_nvars = images[0].nvars
        for im in images:
            if im.nvars != target_nvars:
                raise ArityMismatchError("images disagree on nvars")
        mono_images = _monomial_images(images)
        if mono_images is not None:
            return self._substitute_monomials(mono_images, target_nvars)
        power_cache: list[dict[int, MPoly]] = [
            {0: MPoly.one(target_nvars), 1: im} for im in images
        ]
        result = MPoly.zero(target_nvars)
        for exp, coeff in self.terms.items():
            term = MPoly.constant(target_nvars, coeff)
            for i, e in enumerate(exp):
                if e:
                    term = term * _cached_power(power_cache[i], images[i], e)
            result = result + term
        return result

    def _substitute_monomials(self, images, target_nvars: int) -> "MPoly":
        # each x_i maps to a single term, so exponents transform directly
        out: dict[Exponent, Scalar] = {}
        for exp, coeff in self.terms.items():
            new_exp = [0] * target_nvars
            c = coeff
            for i, e in enumerate(exp):
                if e == 0:
                    continue
                im_exp, im_coeff = images[i]
                for j, k in enumerate(im_exp):
                    if k:
                        new_exp[j] += k * e
                if im_coeff != 1:
                    c = c * im_coeff**e
            key = tuple(new_exp)
            acc = out.get(key)
            out[key] = c if acc is None else acc + c
        return MPoly(target_nvars, out)

    # -- exact division ---------------------------------------------------------------

    def divexact(self, divisor: "MPoly") -> "MPoly":
        """Exact quotient self / divisor; raises InexactDivisionError if the
        divisor does not divide exactly."""
        self._check_arity(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return MPoly.zero(self.nvars)
        if divisor.is_constant():
            return self / divisor.constant_value()
        lead_exp, lead_coeff = divisor.leading()
        quot: dict[Exponent, Scalar] = {}
        rem = dict(self.terms)
        while rem:
            rexp = max(rem, key=grlex_key)
            step = tuple(a - b for a, b in zip(rexp, lead_exp))
            if any(e < 0 for e in step):
                raise InexactDivisionError("leading monomial does not divide remainder")
            c = rem[rexp] / lead_coeff
            quot[step] = c
            for dexp, dcoeff in divisor.terms.items():
                key = tuple(a + b for a, b in zip(step, dexp))
                acc = rem.get(key, Fraction(0)) - c * dcoeff
                if scalar_is_zero(acc):
                    rem.pop(key, None)
                else:
                    rem[key] = acc
        return MPoly(self.nvars, quot)

    def divides(self, other: "MPoly") -> bool:
        try:
            other.divexact(self)
            return True
        except InexactDivisionError:
            return False

    # -- content helpers -----------------------------------------------------------------

    def monomial_content(self) -> Exponent:
        """Componentwise minimum exponent across all terms (the largest
        monomial dividing every term).  Zero polynomial gives all zeros."""
        if not self.terms:
            return (0,) * self.nvars
        mins = [min(exp[i] for exp in self.terms) for i in range(self.nvars)]
        return tuple(mins)

    def shift_down(self, exp: Exponent) -> "MPoly":
        """Divide by the monomial x^exp (must divide every term)."""
        out: dict[Exponent, Scalar] = {}
        for e, c in self.terms.items():
            new = tuple(a - b for a, b in zip(e, exp))
            if any(v < 0 for v in new):
                raise InexactDivisionError(f"monomial x^{exp} does not divide all terms")
            out[new] = c
        return MPoly(self.nvars, out)

    def rational_content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer numerators,
        when all coefficients are rational; 1 otherwise."""
        if not self.terms:
            return Fraction(1)
        nums: list[int] = []
        dens: list[int] = []
        for c in self.terms.values():
            if isinstance(c, CycNum):
                return Fraction(1)
            nums.append(abs(c.numerator))
            dens.append(c.denominator)
        g = 0
        for n in nums:
            g = math.gcd(g, n)
        l = 1
        for d in dens:
            l = l // math.gcd(l, d) * d
        return Fraction(g if g else 1, l)

    # -- comparisons ------------------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = MPoly.constant(self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- formatting ----------------------------------------------------------------------------

    def to_text(self, varnames: Sequence[str] | None = None) -> str:
        return format_poly(self, varnames)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.to_text()!r})"

    def to_json(self) -> dict:
        return poly_to_json(self)


def _coerce_poly(value, nvars: int):
    if isinstance(value, MPoly):
        return value
    if isinstance(value, (int, Fraction, CycNum)):
        return MPoly.constant(nvars, value)
    return NotImplemented


def _cached_power(cache: dict[int, MPoly], base: MPoly, e: int) -> MPoly:
    if e not in cache:
        half = _cached_power(cache, base, e // 2)
        result = half * half
        if e % 2:
            result = result * base
        cache[e] = result
    return cache[e]


def _monomial_images(images: Sequence[MPoly]):
    """When every image is a single term, return [(exp, coeff)] for the fast
    substitution path; None otherwise."""
    out = []
    for im in images:
        if len(im.terms) != 1:
            return None
        (exp, coeff), = im.terms.items()
        out.append((exp, coeff))
    return out


# -- canonical text form ----------------------------------------------------------


def default_varnames(nvars: int, prefix: str = "x") -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(nvars)]


def format_poly(p: MPoly, varnames: Sequence[str] | None = None) -> str:
    """Canonical text: graded-lex descending terms joined with `` + `` / `` - ``,
    rational coefficients as ``a/b``, cyclotomic ones parenthesized."""
    if varnames is None:
        varnames = default_varnames(p.nvars)
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for exp, coeff in p.sorted_terms():
        mono = "*".join(
            v if e == 1 else f"{v}^{e}"
            for v, e in zip(varnames, exp)
            if e
        )
        negate = False
        if isinstance(coeff, Fraction):
            if coeff < 0:
                negate, coeff = True, -coeff
            if not mono:
                body = format_scalar(coeff)
            elif coeff == 1:
                body = mono
            else:
                body = f"{format_scalar(coeff)}*{mono}"
        else:
            body = f"{format_scalar(coeff)}*{mono}" if mono else format_scalar(coeff)
        if not pieces:
            pieces.append(f"-{body}" if negate else body)
        else:
            pieces.append(f" - {body}" if negate else f" + {body}")
    return "".join(pieces)


def parse_poly(text: str, nvars: int, conductor: int = 1,
               varnames: Sequence[str] | None = None) -> MPoly:
    """Inverse of :func:`format_poly` (accepts any term order)."""
    if varnames is None:
        varnames = default_varnames(nvars)
    var_index = {name: i for i, name in enumerate(varnames)}
    s = text.strip()
    if s == "0":
        return MPoly.zero(nvars)
    result = MPoly.zero(nvars)
    for sign, term in _split_poly_terms(s):
        exp = [0] * nvars
        coeff: Scalar = Fraction(sign)
        for factor in _split_factors(term):
            f = factor.strip()
            if not f:
                raise ValueError(f"malformed term {term!r}")
            name, _, power = f.partition("^")
            if name in var_index:
                exp[var_index[name]] += int(power) if power else 1
            else:
                coeff = coeff * parse_scalar(f, conductor)
        result = result + MPoly.monomial(nvars, exp, coeff)
    return result


def _split_poly_terms(s: str) -> list[tuple[int, str]]:
    terms: list[tuple[int, str]] = []
    depth = 0
    sign, start, i = 1, 0, 0
    if s.startswith("-"):
        sign, start, i = -1, 1, 1
    elif s.startswith("+"):
        start = i = 1
    while i < len(s):
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > start and s[i - 1] == " ":
            terms.append((sign, s[start:i].strip()))
            sign = 1 if ch == "+" else -1
            i += 1
            start = i
            continue
        i += 1
    terms.append((sign, s[start:].strip()))
    return terms


def _split_factors(term: str) -> list[str]:
    factors: list[str] = []
    depth, start = 0, 0
    for i, ch in enumerate(term):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            factors.append(term[start:i])
            start = i + 1
    factors.append(term[start:])
    return factors


# -- JSON mirror ---------------------------------------------------------------


def scalar_to_json(c: Scalar) -> dict:
    c = as_scalar(c)
    if isinstance(c, Fraction):
        return {"rat": format_scalar(c)}
    return {"conductor": c.conductor, "coeffs": [format_scalar(q) for q in c.coeffs]}


def scalar_from_json(obj: dict) -> Scalar:
    if "rat" in obj:
        return Fraction(obj["rat"])
    return as_scalar(CycNum(obj["conductor"], [Fraction(q) for q in obj["coeffs"]]))


def poly_to_json(p: MPoly) -> dict:
    return {
        "nvars": p.nvars,
        "terms": [
            {"exp": list(exp), "coeff": scalar_to_json(c)}
            for exp, c in p.sorted_terms()
        ],
    }


def poly_from_json(obj: dict) -> MPoly:
    terms = {
        tuple(t["exp"]): scalar_from_json(t["coeff"])
        for t in obj["terms"]
    }
    return MPoly(obj["nvars"], terms)
