"""Fundamental invariants and the Jacobian/discriminant machinery.

For each built-in family the fundamental invariants e_1..e_n come from
closed-form tables.  ``build_invariant_system`` assembles and checks the
whole package: the Jacobian matrix M of partials, its determinant J', the
product J of the reflection hyperplane forms, the scalar c with J' = c J,
and the discriminant Delta = J^|W| (kept factored; the power is never
expanded unless asked).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclotomic import Scalar, as_scalar, scalar_is_zero
from .errors import InvalidInvariantsError, NotScalarMultipleError
from .groups import MatrixGroup, Reflection, act_on_poly, classify_reflections, is_invariant
from .linalg import Matrix, solve_linear_system
from .polynomials import MPoly


def elementary_symmetric(polys: Sequence[MPoly], k: int) -> MPoly:
    """The k-th elementary symmetric polynomial of the given polynomials."""
    if not 1 <= k <= len(polys):
        raise ValueError(f"k={k} out of range for {len(polys)} inputs")
    nvars = polys[0].nvars
    total = MPoly.zero(nvars)
    for combo in itertools.combinations(polys, k):
        prod = MPoly.one(nvars)
        for p in combo:
            prod = prod * p
        total = total + prod
    return total


def _table_invariants(group: MatrixGroup) -> list[MPoly]:
    n = group.n
    xs = MPoly.variables(n)
    fam = group.family
    if fam == "Sn":
        return [elementary_symmetric(xs, k) for k in range(1, n + 1)]
    if fam == "Bn":
        sq = [x * x for x in xs]
        return [elementary_symmetric(sq, k) for k in range(1, n + 1)]
    if fam == "Dn":
        sq = [x * x for x in xs]
        out = [elementary_symmetric(sq, k) for k in range(1, n)]
        prod = MPoly.one(n)
        for x in xs:
            prod = prod * x
        out.append(prod)
        return out
    if fam == "G":
        m = group.params["m"]
        powers = [x**m for x in xs]
        return [elementary_symmetric(powers, k) for k in range(1, n + 1)]
    if fam == "cyclic":
        m = group.params["m"]
        return [xs[0] ** m] + xs[1:]
    if fam == "trivial":
        return xs
    raise InvalidInvariantsError(
        f"no closed-form invariants for group {group.describe()}; "
        "supply candidate invariants explicitly")


def fundamental_invariants(group: MatrixGroup,
                           candidates: Sequence[MPoly] | None = None) -> list[MPoly]:
    """Fundamental invariants from the family table, or validated candidates.

    Either way each polynomial is checked invariant under every generator,
    and the Jacobian determinant is checked nonzero for candidates.
    """
    if candidates is None:
        e = _table_invariants(group)
    else:
        e = list(candidates)
        if len(e) != group.n:
            raise InvalidInvariantsError(
                f"expected {group.n} invariants, got {len(e)}")
    for i, p in enumerate(e):
        if p.nvars != group.n:
            raise InvalidInvariantsError(f"invariant {i + 1} has wrong nvars")
        if not is_invariant(group, p, generators_only=True):
            raise InvalidInvariantsError(
                f"candidate {i + 1} is not invariant under the generators")
    if candidates is not None:
        if jacobian(e).det().is_zero():
            raise InvalidInvariantsError(
                "candidate invariants are algebraically dependent "
                "(Jacobian determinant vanishes)")
    return e


def jacobian(e: Sequence[MPoly]) -> Matrix:
    """Matrix with entry (i, j) the partial of e_i by the j-th variable."""
    n = len(e)
    if n == 0 or any(p.nvars != n for p in e):
        raise ValueError("need n polynomials in n variables")
    return Matrix([[e[i].partial(j) for j in range(n)] for i in range(n)])


def reflection_product(reflections: Sequence[Reflection], nvars: int) -> MPoly:
    """Product of the normalized hyperplane forms, one per pseudo-reflection;
    1 for the trivial group."""
    result = MPoly.one(nvars)
    for r in reflections:
        form = MPoly(nvars, {
            tuple(1 if k == j else 0 for k in range(nvars)): c
            for j, c in enumerate(r.form)
            if not scalar_is_zero(c)
        })
        result = result * form
    return result


def compare_scalar_multiple(p: MPoly, q: MPoly) -> Scalar:
    """The scalar c with p = c q, or NotScalarMultipleError."""
    if p.is_zero() or q.is_zero():
        raise NotScalarMultipleError("zero polynomial has no scalar comparison")
    (pe, pc), (qe, qc) = p.leading(), q.leading()
    if pe != qe:
        raise NotScalarMultipleError("leading monomials differ")
    c = as_scalar(pc / qc)
    if p != q * c:
        raise NotScalarMultipleError("polynomials are not scalar multiples")
    return c


def semi_invariance_check(group: MatrixGroup, j: MPoly) -> bool:
    """True when w.J = det(w) J for every element of the group."""
    return all(
        act_on_poly(w, j, group.inverse_of(w)) == j * w.det()
        for w in group.elements
    )


@dataclass(frozen=True)
class FactoredPower:
    """A polynomial power base^exponent kept factored until expansion is
    explicitly requested."""

    base: MPoly
    exponent: int

    def degree(self):
        return self.base.degree() * self.exponent

    def expand(self) -> MPoly:
        return self.base**self.exponent

    def to_text(self, varnames=None) -> str:
        return f"({self.base.to_text(varnames)})^{self.exponent}"

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "exponent": self.exponent}


@dataclass
class InvariantSystem:
    """The verified invariant-theory package for one group."""

    group: MatrixGroup
    e: list[MPoly]
    degrees: list[int]
    reflections: list[Reflection]
    M: Matrix
    jprime: MPoly
    J: MPoly
    c: Scalar
    delta: FactoredPower

    def summary(self) -> dict:
        return {
            "group": self.group.describe(),
            "order": self.group.order,
            "degrees": self.degrees,
            "reflection_count": len(self.reflections),
        }


def build_invariant_system(group: MatrixGroup,
                           candidates: Sequence[MPoly] | None = None) -> InvariantSystem:
    """Assemble invariants, Jacobian, J, J', c and Delta, checking every
    structural identity along the way."""
    e = fundamental_invariants(group, candidates)
    reflections = classify_reflections(group)

    for i, p in enumerate(e):
        if not is_invariant(group, p):
            raise InvalidInvariantsError(
                f"invariant {i + 1} is not fixed by the full group")

    degrees = [int(p.degree()) for p in e]
    prod = 1
    for d in degrees:
        prod *= d
    if prod != group.order:
        raise InvalidInvariantsError(
            f"degree product {prod} != group order {group.order}")
    if sum(d - 1 for d in degrees) != len(reflections):
        raise InvalidInvariantsError(
            f"degree sum rule fails: sum(d_i - 1) = {sum(d - 1 for d in degrees)} "
            f"but there are {len(reflections)} pseudo-reflections")

    m = jacobian(e)
    jprime = m.det()
    if jprime.is_zero():
        raise InvalidInvariantsError(
            "Jacobian determinant vanishes; invariants are dependent")
    j = reflection_product(reflections, group.n)
    c = compare_scalar_multiple(jprime, j)
    if scalar_is_zero(c):
        raise InvalidInvariantsError("scalar between J' and J is zero")
    if not semi_invariance_check(group, j):
        raise InvalidInvariantsError("J is not det-semi-invariant")
    return InvariantSystem(
        group=group, e=e, degrees=degrees, reflections=reflections,
        M=m, jprime=jprime, J=j, c=c,
        delta=FactoredPower(j, group.order),
    )


# -- rewriting invariants in the fundamental basis ----------------------------------


def express_in_invariants(p: MPoly, system: InvariantSystem) -> MPoly:
    """The unique q with q(e_1, ..., e_n) = p, for W-invariant p.

    Solved degree by degree as an exact linear system over the weighted
    monomials in the e_i.  Raises ValueError when p is not a polynomial in
    the invariants.
    """
    n = system.group.n
    if p.is_zero():
        return MPoly.zero(n)
    by_degree: dict[int, dict] = {}
    for exp, cf in p.terms.items():
        by_degree.setdefault(sum(exp), {})[exp] = cf
    power_cache: dict[tuple[int, int], MPoly] = {}
    result = MPoly.zero(n)
    for k, terms in sorted(by_degree.items()):
        result = result + _express_homogeneous(
            MPoly(n, terms), k, system, power_cache)
    return result


def _weighted_exponents(total: int, degrees: Sequence[int]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, prefix: tuple[int, ...]):
        if i == len(degrees):
            if remaining == 0:
                out.append(prefix)
            return
        d = degrees[i]
        for b in range(remaining // d + 1):
            rec(i + 1, remaining - b * d, prefix + (b,))

    rec(0, total, ())
    return out


def _e_power(system: InvariantSystem, i: int, b: int,
             cache: dict[tuple[int, int], MPoly]) -> MPoly:
    key = (i, b)
    if key not in cache:
        if b == 0:
            cache[key] = MPoly.one(system.group.n)
        else:
            cache[key] = _e_power(system, i, b - 1, cache) * system.e[i]
    return cache[key]


def _express_homogeneous(part: MPoly, k: int, system: InvariantSystem,
                         power_cache: dict[tuple[int, int], MPoly]) -> MPoly:
    n = system.group.n
    betas = _weighted_exponents(k, system.degrees)
    if not betas:
        raise ValueError(f"no invariant monomials of degree {k}")
    expansions = []
    for beta in betas:
        prod = MPoly.one(n)
        for i, b in enumerate(beta):
            if b:
                prod = prod * _e_power(system, i, b, power_cache)
        expansions.append(prod)
    monomials = sorted(
        {exp for q in expansions for exp in q.terms} | set(part.terms),
    )
    a = [[q.terms.get(mono, Fraction(0)) for q in expansions] for mono in monomials]
    b = [part.terms.get(mono, Fraction(0)) for mono in monomials]
    sol = solve_linear_system(a, b)
    if sol is None:
        raise ValueError("polynomial is not expressible in the invariants")
    return MPoly(n, {beta: coeff for beta, coeff in zip(betas, sol)})
