"""Differential operators with rational-function coefficients, and the
construction of the invariant generators d_i.

Operators are kept in derivative-on-the-right normal form: a term map from
derivative multi-indices to ``RatFrac`` coefficients.  Composition expands
by the generalized Leibniz rule and re-normalizes.  The generators d_i are
assembled by Cramer's rule against the Jacobian of the fundamental
invariants, so their coefficients share the single denominator J', and are
then put through four exhaustive checks:

  1. d_i(e_j) = delta_ij,
  2. invariance under every group element,
  3. pairwise commutation [d_i, d_j] = 0 as operators,
  4. the canonical relations [d_i, e_j . ] = delta_ij as operators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cyclotomic import CycNum, ScalarLike, scalar_is_zero
from .errors import ArityMismatchError, OperatorOrderError, VerificationError
from .groups import MatrixGroup, act_on_poly
from .invariants import InvariantSystem
from .linalg import Matrix, solve_cramer
from .polynomials import MPoly, default_varnames
from .ratfunc import RatFrac

COMPOSE_ORDER_CAP = 8

MultiIndex = tuple[int, ...]


class DiffOp:
    """A differential operator sum_alpha c_alpha(x) d^alpha."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        clean: dict[MultiIndex, RatFrac] = {}
        if terms:
            for alpha, coeff in terms.items():
                alpha = tuple(alpha)
                if len(alpha) != nvars:
                    raise ArityMismatchError(
                        f"multi-index {alpha} has length {len(alpha)}, expected {nvars}")
                if isinstance(coeff, MPoly):
                    coeff = RatFrac(coeff)
                elif not isinstance(coeff, RatFrac):
                    coeff = RatFrac.constant(nvars, coeff)
                if not coeff.is_zero():
                    clean[alpha] = coeff
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "DiffOp":
        return DiffOp(nvars)

    @staticmethod
    def identity(nvars: int) -> "DiffOp":
        return DiffOp(nvars, {(0,) * nvars: RatFrac.one(nvars)})

    @staticmethod
    def partial(nvars: int, index: int) -> "DiffOp":
        """The operator d/dx_index (0-based)."""
        alpha = [0] * nvars
        alpha[index] = 1
        return DiffOp(nvars, {tuple(alpha): RatFrac.one(nvars)})

    @staticmethod
    def multiplication(f: MPoly | RatFrac) -> "DiffOp":
        """Multiplication by a polynomial or fraction as an operator."""
        if isinstance(f, MPoly):
            f = RatFrac(f)
        return DiffOp(f.nvars, {(0,) * f.nvars: f})

    # -- structure ------------------------------------------------------------

    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    # -- linear operations -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for alpha, c in other.terms.items():
            acc = out.get(alpha)
            out[alpha] = c if acc is None else acc + c
        return DiffOp(self.nvars, out)

    def __neg__(self):
        return DiffOp(self.nvars, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "DiffOp":
        if isinstance(factor, (int, Fraction, CycNum, MPoly)):
            factor = RatFrac.constant(self.nvars, factor) if not isinstance(factor, MPoly) \
                else RatFrac(factor)
        return DiffOp(self.nvars, {a: c * factor for a, c in self.terms.items()})

    def _check(self, other: "DiffOp"):
        if self.nvars != other.nvars:
            raise ArityMismatchError(
                f"operators act on {self.nvars} and {other.nvars} variables")

    # -- action on functions -----------------------------------------------------

    def apply(self, f: MPoly | RatFrac) -> RatFrac:
        """sum_alpha c_alpha d^alpha(f), derivatives extended to fractions
        by the quotient rule."""
        if isinstance(f, MPoly):
            f = RatFrac(f)
        if f.nvars != self.nvars:
            raise ArityMismatchError("operand nvars mismatch")
        result = RatFrac.zero(self.nvars)
        for alpha, coeff in self.terms.items():
            result = result + coeff * _iterated_partial(f, alpha)
        return result

    # -- composition ----------------------------------------------------------------

    def compose(self, other: "DiffOp") -> "DiffOp":
        """Operator product: apply(compose(a, b), f) = apply(a, apply(b, f)).

        Normalizes back to derivative-on-the-right form with the Leibniz
        rule; operands of order above COMPOSE_ORDER_CAP are rejected.
        """
        self._check(other)
        if self.order() > COMPOSE_ORDER_CAP or other.order() > COMPOSE_ORDER_CAP:
            raise OperatorOrderError(
                f"composition rejected: operand order exceeds {COMPOSE_ORDER_CAP}")
        out: dict[MultiIndex, RatFrac] = {}
        for alpha, ca in self.terms.items():
            for beta, cb in other.terms.items():
                # d^alpha (cb d^beta .) = sum_{gamma <= alpha} C(alpha, gamma)
                #   d^gamma(cb) d^{alpha - gamma + beta}
                for gamma in _sub_multiindices(alpha):
                    binom = _multi_binom(alpha, gamma)
                    dcb = _iterated_partial(cb, gamma)
                    if dcb.is_zero():
                        continue
                    idx = tuple(a - g + b for a, g, b in zip(alpha, gamma, beta))
                    coeff = ca * dcb * binom
                    acc = out.get(idx)
                    out[idx] = coeff if acc is None else acc + coeff
        return DiffOp(self.nvars, out)

    def commutator(self, other: "DiffOp") -> "DiffOp":
        return self.compose(other) - other.compose(self)

    # -- comparisons -------------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CycNum, MPoly, RatFrac)):
            if isinstance(other, (int, Fraction, CycNum)) and scalar_is_zero(other):
                return self.is_zero()
            other = DiffOp.multiplication(
                other if isinstance(other, (MPoly, RatFrac))
                else RatFrac.constant(self.nvars, other))
        if not isinstance(other, DiffOp):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        for alpha in set(self.terms) | set(other.terms):
            a = self.terms.get(alpha)
            b = other.terms.get(alpha)
            if a is None:
                if not b.is_zero():
                    return False
            elif b is None:
                if not a.is_zero():
                    return False
            elif a != b:
                return False
        return True

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    # -- formatting -----------------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[MultiIndex, RatFrac]]:
        return [
            (alpha, self.terms[alpha])
            for alpha in sorted(self.terms, key=lambda a: (sum(a), a), reverse=True)
        ]

    def to_text(self, varnames: Sequence[str] | None = None) -> str:
        if varnames is None:
            varnames = default_varnames(self.nvars)
        if not self.terms:
            return "0"
        pieces = []
        for alpha, coeff in self.sorted_terms():
            dpart = _derivative_text(alpha)
            ctext = coeff.to_text(varnames)
            pieces.append(f"{ctext} * {dpart}" if dpart else ctext)
        return "  +  ".join(pieces)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"DiffOp({self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"alpha": list(alpha), "coeff": coeff.to_json()}
                for alpha, coeff in self.sorted_terms()
            ],
        }


def _derivative_text(alpha: MultiIndex) -> str:
    return "*".join(
        f"D{i + 1}" if e == 1 else f"D{i + 1}^{e}"
        for i, e in enumerate(alpha) if e
    )


def format_weyl_generator(d: DiffOp, varnames: Sequence[str] | None = None) -> str:
    """Render with the shared denominator factored out when every
    coefficient carries the same one: ``(num1 * D1 + ...) / (den)``."""
    if varnames is None:
        varnames = default_varnames(d.nvars)
    terms = d.sorted_terms()
    if not terms:
        return "0"
    den_polys = [c.den for _, c in terms]
    shared = den_polys[0]
    if all(dp == shared for dp in den_polys) and not shared.is_one():
        inner = " + ".join(
            f"({c.num.to_text(varnames)}) * {_derivative_text(alpha)}"
            if _derivative_text(alpha) else f"({c.num.to_text(varnames)})"
            for alpha, c in terms
        )
        return f"[{inner}] / ({shared.to_text(varnames)})"
    return d.to_text(varnames)


def _iterated_partial(f: RatFrac, alpha: MultiIndex) -> RatFrac:
    for i, e in enumerate(alpha):
        for _ in range(e):
            f = f.partial(i)
            if f.is_zero():
                return f
    return f


def _sub_multiindices(alpha: MultiIndex):
    return itertools.product(*[range(a + 1) for a in alpha])


def _multi_binom(alpha: MultiIndex, gamma: MultiIndex) -> int:
    b = 1
    for a, g in zip(alpha, gamma):
        b *= math.comb(a, g)
    return b


# -- group action on operators -------------------------------------------------------


def act_on_op(w: Matrix, op: DiffOp, w_inverse: Matrix | None = None) -> DiffOp:
    """Conjugated operator f -> w.(op(w^-1 . f)).

    Coefficients transform like functions (substitute w^-1 x); the
    derivative d_k becomes sum_l w_lk d_l.
    """
    n = op.nvars
    if w.nrows != n:
        raise ArityMismatchError("matrix size does not match operator nvars")
    inv = w_inverse if w_inverse is not None else w.inverse()
    images = [
        MPoly(n, {
            tuple(1 if k == j else 0 for k in range(n)): inv.rows[i][j]
            for j in range(n)
            if not scalar_is_zero(inv.rows[i][j])
        })
        for i in range(n)
    ]
    # the transformed derivative symbols, written as degree-1 polynomials in
    # commuting placeholders so powers expand multinomially
    dsymbols = [
        MPoly(n, {
            tuple(1 if k == l else 0 for k in range(n)): w.rows[l][k]
            for l in range(n)
            if not scalar_is_zero(w.rows[l][k])
        })
        for k in range(n)
    ]
    out: dict[MultiIndex, RatFrac] = {}
    for alpha, coeff in op.terms.items():
        new_coeff = coeff.substitute(images)
        dpoly = MPoly.one(n)
        for k, e in enumerate(alpha):
            if e:
                dpoly = dpoly * dsymbols[k] ** e
        for dexp, dcoeff in dpoly.terms.items():
            term = new_coeff * dcoeff
            acc = out.get(dexp)
            out[dexp] = term if acc is None else acc + term
    return DiffOp(n, out)


# -- the invariant generators ------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "passed": self.passed}
        if not self.passed:
            out["witness"] = list(self.witness) if self.witness else None
            out["detail"] = self.detail
        return out


CHECK_NAMES = ("delta_relations", "invariance", "pairwise_commutation", "weyl_relations")


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def summary(self) -> str:
        if self.passed:
            return "all checks passed"
        bad = ", ".join(
            f"{c.name} (witness {c.witness})" for c in self.failing())
        return f"failing: {bad}"

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


@dataclass
class WeylGenerators:
    system: InvariantSystem
    d: list[DiffOp]
    report: VerificationReport | None = None


def assemble_weyl_generators(system: InvariantSystem) -> WeylGenerators:
    """Solve M F_i = E_i by Cramer's rule and package d_i = sum_k f_ik d_k.

    No verification is run here; see ``build_weyl_generators``.
    """
    n = system.group.n
    d = []
    for i in range(n):
        rhs = [MPoly.one(n) if k == i else MPoly.zero(n) for k in range(n)]
        f_i = solve_cramer(system.M, rhs)

        terms = {}
        for k in range(n):
            alpha = tuple(1 if j == k else 0 for j in range(n))
            terms[alpha] = f_i[k]
        d.append(DiffOp(n, terms))
    return WeylGenerators(system=system, d=d)


def verify_generators(gens: WeylGenerators,
                      invariants: Sequence[MPoly] | None = None) -> VerificationReport:
    """Run the four checks against the system's invariants (or a supplied
    replacement list, for perturbation experiments).  Witness indices are
    one-based."""
    system = gens.system
    group = system.group
    e = list(invariants) if invariants is not None else system.e
    n = group.n
    report = VerificationReport()

    witness = None
    for i, di in enumerate(gens.d):
        for j, ej in enumerate(e):
            expected = RatFrac.one(n) if i == j else RatFrac.zero(n)
            if di.apply(ej) != expected:
                witness = (i + 1, j + 1)
                break
        if witness:
            break
    report.checks.append(CheckResult(
        "delta_relations", witness is None, witness,
        "" if witness is None else
        f"d_{witness[0]}(e_{witness[1]}) != {'1' if witness[0] == witness[1] else '0'}"))

    witness = None
    for wi, w in enumerate(group.elements):
        inv = group.inverse_of(w)
        for i, di in enumerate(gens.d):
            if act_on_op(w, di, inv) != di:
                witness = (wi, i + 1)
                break
        if witness:
            break
    report.checks.append(CheckResult(
        "invariance", witness is None, witness,
        "" if witness is None else
        f"group element #{witness[0]} moves d_{witness[1]}"))

    witness = None
    for i in range(n):
        for j in range(i + 1, n):
            if not gens.d[i].commutator(gens.d[j]).is_zero():
                witness = (i + 1, j + 1)
                break
        if witness:
            break
    report.checks.append(CheckResult(
        "pairwise_commutation", witness is None, witness,
        "" if witness is None else f"[d_{witness[0]}, d_{witness[1]}] != 0"))

    witness = None
    for i, di in enumerate(gens.d):
        for j, ej in enumerate(e):
            mult = DiffOp.multiplication(ej)
            expected = DiffOp.identity(n) if i == j else DiffOp.zero(n)
            if di.commutator(mult) != expected:
                witness = (i + 1, j + 1)
                break
        if witness:
            break
    report.checks.append(CheckResult(
        "weyl_relations", witness is None, witness,
        "" if witness is None else
        f"[d_{witness[0]}, e_{witness[1]} .] != delta"))
    return report


def build_weyl_generators(system: InvariantSystem) -> WeylGenerators:
    """Assemble the generators and require the full verification suite to
    pass; raises VerificationError (with the report attached) otherwise."""
    gens = assemble_weyl_generators(system)
    report = verify_generators(gens)
    gens.report = report
    if not report.passed:
        raise VerificationError(report)
    return gens
