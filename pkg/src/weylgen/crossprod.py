"""The shift cross product k(t_1..t_n, z_1..z_m) * Z^n.

Lattice vectors act on the coefficient field by shifting the t-variables
(sigma convention: the basis shift sends t_j to t_j - delta_ij; the inverse
epsilon shifts are the negated lattice vectors).  The central z-variables
are never shifted.  Multiplication is the twisted convolution

    (c_mu s^mu)(c_nu s^nu) = (c_mu . shift(mu, c_nu)) s^(mu + nu),

and the Weyl algebra embeds via x_i -> s^(e_i), d_i -> t_i s^(-e_i).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .cyclotomic import CycNum, scalar_is_zero
from .errors import ArityMismatchError
from .linalg import Matrix
from .polynomials import MPoly, default_varnames
from .ratfunc import RatFrac

LatticeVector = tuple[int, ...]

ShiftFn = Callable[[LatticeVector, RatFrac], RatFrac]


def cross_varnames(n: int, m: int) -> list[str]:
    return [f"t{i + 1}" for i in range(n)] + [f"z{k + 1}" for k in range(m)]


def shift_action(mu: Sequence[int], f: RatFrac, n: int | None = None) -> RatFrac:
    """Substitute t_j -> t_j - mu_j (sigma convention); z-variables fixed.

    ``n`` defaults to len(mu); coefficient variables beyond the first n are
    treated as central z's.
    """
    mu = tuple(mu)
    if n is None:
        n = len(mu)
    if len(mu) != n:
        raise ArityMismatchError(f"lattice vector length {len(mu)} != {n}")
    total = f.nvars
    if n > total:
        raise ArityMismatchError("lattice rank exceeds coefficient variables")
    if all(v == 0 for v in mu):
        return f
    images = []
    for j in range(total):
        var = MPoly.variable(total, j)
        if j < n and mu[j]:
            var = var - MPoly.constant(total, mu[j])
        images.append(var)
    return f.substitute(images)


def flipped_shift_action(mu: Sequence[int], f: RatFrac, n: int | None = None) -> RatFrac:
    """Deliberately wrong convention (t_j -> t_j + mu_j) used as a negative
    control: the Weyl relations must fail under it."""
    return shift_action([-v for v in mu], f, n)


class CrossElem:
    """Element sum_mu c_mu(t, z) s^mu of the cross product."""

    __slots__ = ("n", "m", "terms")

    def __init__(self, n: int, m: int = 0, terms=None):
        if n < 1 or m < 0:
            raise ValueError("need n >= 1 lattice directions and m >= 0 parameters")
        clean: dict[LatticeVector, RatFrac] = {}
        if terms:
            for mu, coeff in terms.items():
                mu = tuple(int(v) for v in mu)
                if len(mu) != n:
                    raise ArityMismatchError(
                        f"lattice vector {mu} has length {len(mu)}, expected {n}")
                if isinstance(coeff, MPoly):
                    coeff = RatFrac(coeff)
                elif not isinstance(coeff, RatFrac):
                    coeff = RatFrac.constant(n + m, coeff)
                if coeff.nvars != n + m:
                    raise ArityMismatchError(
                        f"coefficient has {coeff.nvars} variables, expected {n + m}")
                if not coeff.is_zero():
                    clean[mu] = coeff
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("CrossElem is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int, m: int = 0) -> "CrossElem":
        return CrossElem(n, m)

    @staticmethod
    def one(n: int, m: int = 0) -> "CrossElem":
        return CrossElem(n, m, {(0,) * n: RatFrac.one(n + m)})

    @staticmethod
    def monomial(n: int, mu: Sequence[int], coeff, m: int = 0) -> "CrossElem":
        return CrossElem(n, m, {tuple(mu): coeff})

    @staticmethod
    def coeff_var(n: int, index: int, m: int = 0) -> "CrossElem":
        """The coefficient variable t_index (or z_(index-n)) as an element."""
        return CrossElem(n, m, {(0,) * n: RatFrac(MPoly.variable(n + m, index))})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "CrossElem"):
        if (self.n, self.m) != (other.n, other.m):
            raise ArityMismatchError("cross product elements live in different algebras")

    # -- linear structure -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        self._check(o)
        out = dict(self.terms)
        for mu, c in o.terms.items():
            acc = out.get(mu)
            out[mu] = c if acc is None else acc + c
        return CrossElem(self.n, self.m, out)

    __radd__ = __add__

    def __neg__(self):
        return CrossElem(self.n, self.m, {mu: -c for mu, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def _coerce(self, other):
        if isinstance(other, CrossElem):
            return other
        if isinstance(other, (int, Fraction, CycNum)):
            if scalar_is_zero(other):
                return CrossElem.zero(self.n, self.m)
            return CrossElem(self.n, self.m,
                             {(0,) * self.n: RatFrac.constant(self.n + self.m, other)})
        return None

    # -- multiplication ------------------------------------------------------------

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cross_mul(self, o)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cross_mul(o, self)

    # -- comparisons ----------------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if (self.n, self.m) != (o.n, o.m):
            return False
        for mu in set(self.terms) | set(o.terms):
            a, b = self.terms.get(mu), o.terms.get(mu)
            if a is None or b is None:
                if not (a or b).is_zero():
                    return False
            elif a != b:
                return False
        return True

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    # -- formatting --------------------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = cross_varnames(self.n, self.m)
        pieces = []
        for mu in sorted(self.terms):
            coeff = self.terms[mu]
            if all(v == 0 for v in mu):
                pieces.append(coeff.to_text(names))
            else:
                mu_text = ",".join(str(v) for v in mu)
                pieces.append(f"{coeff.to_text(names)} * s^({mu_text})")
        return " + ".join(pieces)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"CrossElem({self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "terms": [
                {"mu": list(mu), "coeff": self.terms[mu].to_json()}
                for mu in sorted(self.terms)
            ],
        }


def cross_mul(a: CrossElem, b: CrossElem, shift: ShiftFn | None = None) -> CrossElem:
    """Twisted convolution; ``shift`` defaults to the sigma action and is
    injectable so convention mistakes can be demonstrated."""
    a._check(b)
    do_shift = shift if shift is not None else shift_action
    out: dict[LatticeVector, RatFrac] = {}
    for mu, cmu in a.terms.items():
        for nu, cnu in b.terms.items():
            coeff = cmu * do_shift(mu, cnu, a.n)
            key = tuple(x + y for x, y in zip(mu, nu))
            acc = out.get(key)
            out[key] = coeff if acc is None else acc + coeff
    return CrossElem(a.n, a.m, out)


# -- Weyl algebra embedding -------------------------------------------------------------


def embed_weyl(kind: str, index: int, n: int, m: int = 0) -> CrossElem:
    """Image of a Weyl algebra generator: x_i -> s^(e_i) and
    d_i -> t_i s^(-e_i) (0-based index)."""
    if not 0 <= index < n:
        raise ValueError(f"index {index} out of range for n={n}")
    e_i = tuple(1 if k == index else 0 for k in range(n))
    if kind == "x":
        return CrossElem(n, m, {e_i: RatFrac.one(n + m)})
    if kind == "d":
        minus = tuple(-v for v in e_i)
        return CrossElem(n, m, {minus: RatFrac(MPoly.variable(n + m, index))})
    raise ValueError("generator kind must be 'x' or 'd'")


@dataclass
class RelationReport:
    relations: list[tuple[str, bool]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.relations)

    def failing(self) -> list[str]:
        return [name for name, ok in self.relations if not ok]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "relations": [{"name": name, "passed": ok} for name, ok in self.relations],
        }


def relation_check(n: int, m: int = 0, shift: ShiftFn | None = None) -> RelationReport:
    """Verify every Weyl relation on the embedded generators, plus the
    anchor identities image(d_i x_i) = t_i.

    Passing ``flipped_shift_action`` demonstrates how the wrong shift
    convention breaks the relations.
    """
    if n < 1:
        raise ValueError("n must be positive")
    xs = [embed_weyl("x", i, n, m) for i in range(n)]
    ds = [embed_weyl("d", i, n, m) for i in range(n)]
    one = CrossElem.one(n, m)
    zero = CrossElem.zero(n, m)
    relations: list[tuple[str, bool]] = []
    for i in range(n):
        for j in range(n):
            lhs = cross_mul(ds[i], xs[j], shift) - cross_mul(xs[j], ds[i], shift)
            expected = one if i == j else zero
            relations.append((f"[d{i + 1}, x{j + 1}] = {1 if i == j else 0}",
                              lhs == expected))
    for i in range(n):
        for j in range(i + 1, n):
            ok = cross_mul(xs[i], xs[j], shift) == cross_mul(xs[j], xs[i], shift)
            relations.append((f"x{i + 1} x{j + 1} = x{j + 1} x{i + 1}", ok))
    for i in range(n):
        for j in range(i + 1, n):
            ok = cross_mul(ds[i], ds[j], shift) == cross_mul(ds[j], ds[i], shift)
            relations.append((f"d{i + 1} d{j + 1} = d{j + 1} d{i + 1}", ok))
    for i in range(n):
        anchor = cross_mul(ds[i], xs[i], shift)
        expected = CrossElem.coeff_var(n, i, m)
        relations.append((f"d{i + 1} x{i + 1} = t{i + 1}", anchor == expected))
    return RelationReport(relations)


# -- group action ------------------------------------------------------------------------


def group_act_cross(w: Matrix, a: CrossElem) -> CrossElem:
    """Conjugation action of a lattice-preserving matrix: coefficients
    transform by t -> w^-1 t (z fixed), lattice vectors by mu -> w mu."""
    n, m = a.n, a.m
    if w.nrows != n:
        raise ArityMismatchError("matrix size does not match lattice rank")
    lattice_map: list[list[int]] = []
    for row in w.rows:
        out_row = []
        for v in row:
            if isinstance(v, CycNum) or v.denominator != 1:
                raise ValueError("matrix does not preserve the shift lattice")
            out_row.append(int(v))
        lattice_map.append(out_row)
    inv = w.inverse()
    total = n + m
    images = []
    for i in range(total):
        if i < n:
            images.append(MPoly(total, {
                tuple(1 if k == j else 0 for k in range(total)): inv.rows[i][j]
                for j in range(n)
                if not scalar_is_zero(inv.rows[i][j])
            }))
        else:
            images.append(MPoly.variable(total, i))
    out: dict[LatticeVector, RatFrac] = {}
    for mu, coeff in a.terms.items():
        new_mu = tuple(
            sum(lattice_map[i][j] * mu[j] for j in range(n))
            for i in range(n)
        )
        c = coeff.substitute(images)
        acc = out.get(new_mu)
        out[new_mu] = c if acc is None else acc + c
    return CrossElem(n, m, out)


def is_fixed_by(a: CrossElem, mats: Sequence[Matrix]) -> bool:
    """Membership test for the invariant subalgebra: is ``a`` fixed by every
    matrix in ``mats``?"""
    return all(group_act_cross(w, a) == a for w in mats)
