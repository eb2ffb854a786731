"""Reference fixture: the closed-form generators for S_3 acting on three
variables by permutation.

The multiplication generators are the elementary symmetric polynomials; the
derivation generators have every coefficient over the common denominator

    J = (x1 - x2)(x2 - x3)(x1 - x3),

whose sign is pinned by requiring Y_i(X_j) = delta_ij (the commonly printed
variant with a repeated factor is not a polynomial basis denominator).
``check_s3_reproduction`` recomputes everything from scratch and compares
exactly.
"""

from __future__ import annotations

from .groups import symmetric_group
from .invariants import build_invariant_system
from .polynomials import MPoly, parse_poly
from .ratfunc import RatFrac
from .weyl import DiffOp, build_weyl_generators

S3_DENOMINATOR_FACTORS = ("x1 - x2", "x2 - x3", "x1 - x3")

S3_X = (
    "x1 + x2 + x3",
    "x1*x2 + x1*x3 + x2*x3",
    "x1*x2*x3",
)

# numerators of the D1, D2, D3 coefficients of Y_1, Y_2, Y_3
S3_Y_NUMERATORS = (
    ("x1^2*x2 - x1^2*x3", "-x2^2*x1 + x2^2*x3", "x3^2*x1 - x3^2*x2"),
    ("-x1*x2 + x1*x3", "x2*x1 - x2*x3", "-x3*x1 + x3*x2"),
    ("x2 - x3", "-x1 + x3", "x1 - x2"),
)


def s3_reference_denominator() -> MPoly:
    j = MPoly.one(3)
    for factor in S3_DENOMINATOR_FACTORS:
        j = j * parse_poly(factor, 3)
    return j


def s3_reference_generators() -> tuple[list[MPoly], list[DiffOp]]:
    """The reference (X_i, Y_i) pairs as exact objects."""
    xs = [parse_poly(text, 3) for text in S3_X]
    j = s3_reference_denominator()
    ys = []
    for numerators in S3_Y_NUMERATORS:
        terms = {}
        for k, num_text in enumerate(numerators):
            alpha = tuple(1 if i == k else 0 for i in range(3))
            terms[alpha] = RatFrac(parse_poly(num_text, 3), j)
        ys.append(DiffOp(3, terms))
    return xs, ys


def check_s3_reproduction() -> dict:
    """Recompute the S_3 system and compare against the fixture.

    Returns a result dictionary with per-item verdicts:
    invariants match, generators match, and all nine operator relations
    [Y_i, X_j .] = delta_ij hold.
    """
    ref_x, ref_y = s3_reference_generators()
    group = symmetric_group(3)
    system = build_invariant_system(group)
    gens = build_weyl_generators(system)

    items: list[tuple[str, bool]] = []
    for i in range(3):
        items.append((f"X{i + 1} matches computed e_{i + 1}", system.e[i] == ref_x[i]))
    for i in range(3):
        items.append((f"Y{i + 1} matches computed d_{i + 1}", gens.d[i] == ref_y[i]))
    for i in range(3):
        for j in range(3):
            mult = DiffOp.multiplication(ref_x[j])
            expected = DiffOp.identity(3) if i == j else DiffOp.zero(3)
            ok = ref_y[i].commutator(mult) == expected
            items.append((f"[Y{i + 1}, X{j + 1}] = {1 if i == j else 0}", ok))
    return {
        "items": items,
        "passed": all(ok for _, ok in items),
        "verification": gens.report.to_json() if gens.report else None,
    }
