"""Finite matrix groups over Q(zeta_m) and their pseudo-reflections.

Groups are enumerated by breadth-first closure from their generators.  The
polynomial action is (w.p)(x) = p(w^-1 x); derivative operators transform
contragrediently (see ``weyl.act_on_op``).  Classified pseudo-reflections
carry their root, hyperplane form, and nontrivial eigenvalue, normalized so
the first nonzero coordinate is one.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclotomic import CycNum, Scalar, as_scalar, format_scalar, parse_scalar, scalar_is_zero
from .errors import (
    ClosureBoundExceededError,
    GroupSpecError,
    NotReflectionGroupError,
    SingularMatrixError,
)
from .linalg import Matrix
from .polynomials import MPoly

DEFAULT_CLOSURE_BOUND = 10_000

#: shipped family parameter bounds (the CLI refuses larger ranks without --force)
FAMILY_BOUNDS = {
    "Sn": {"rank": 6},
    "Bn": {"rank": 4},
    "Dn": {"rank": 4},
    "G": {"rank": 3, "m": 4},
    "cyclic": {"rank": 6, "m": 4},
    "trivial": {"rank": 6},
}


class MatrixGroup:
    """A finite matrix group with its full element enumeration."""

    def __init__(self, n: int, conductor: int, generators: Sequence[Matrix],
                 elements: Sequence[Matrix], family: str | None = None,
                 params: dict | None = None):
        self.n = n
        self.conductor = conductor
        self.generators = list(generators)
        self.elements = list(elements)
        self.order = len(self.elements)
        self.family = family
        self.params = dict(params or {})
        self._element_set = set(self.elements)
        self._inverses: dict[Matrix, Matrix] = {}

    def __contains__(self, m: Matrix) -> bool:
        return m in self._element_set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return self.order

    def identity(self) -> Matrix:
        return Matrix.identity(self.n)

    def inverse_of(self, g: Matrix) -> Matrix:
        inv = self._inverses.get(g)
        if inv is None:
            inv = g.inverse()
            self._inverses[g] = inv
        return inv

    def element_order(self, g: Matrix) -> int:
        power = g
        k = 1
        while not power.is_identity():
            power = power * g
            k += 1
            if k > self.order:
                raise AssertionError("element order exceeds group order")
        return k

    def describe(self) -> str:
        if self.family == "G":
            return f"G({self.params.get('m')},1,{self.params.get('rank')})"
        if self.family:
            return f"{self.family}(rank={self.params.get('rank')})" + (
                f", m={self.params['m']}" if "m" in self.params else "")
        return f"group(n={self.n}, order={self.order})"


def group_closure(generators: Sequence[Matrix], bound: int = DEFAULT_CLOSURE_BOUND,
                  conductor: int = 1, family: str | None = None,
                  params: dict | None = None) -> MatrixGroup:
    """Enumerate the group generated by ``generators`` by breadth-first
    multiplication, failing once ``bound`` elements are exceeded."""
    if generators:
        n = generators[0].nrows
    else:
        raise ValueError("group_closure requires at least one generator; "
                         "use trivial_group for the trivial group")
    for g in generators:
        if not g.is_square or g.nrows != n:
            raise GroupSpecError("generators must be square matrices of equal size")
        if scalar_is_zero(g.det()):
            raise SingularMatrixError("generator not invertible")
    identity = Matrix.identity(n)
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for h in frontier:
            for g in generators:
                prod = h * g
                if prod not in seen:
                    if len(elements) >= bound:
                        raise ClosureBoundExceededError(
                            f"group closure exceeded bound {bound}; "
                            "group is non-finite or too large")
                    seen.add(prod)
                    elements.append(prod)
                    nxt.append(prod)
        frontier = nxt
    return MatrixGroup(n, conductor, generators, elements, family, params)


# -- polynomial action ---------------------------------------------------------


def act_on_poly(w: Matrix, p: MPoly, w_inverse: Matrix | None = None) -> MPoly:
    """The action (w.p)(x) = p(w^-1 x) on polynomials."""
    if w.nrows != p.nvars:
        raise ValueError(f"matrix size {w.nrows} does not match nvars {p.nvars}")
    inv = w_inverse if w_inverse is not None else w.inverse()
    images = [
        MPoly(p.nvars, {
            tuple(1 if k == j else 0 for k in range(p.nvars)): inv.rows[i][j]
            for j in range(p.nvars)
            if not scalar_is_zero(inv.rows[i][j])
        })
        for i in range(p.nvars)
    ]
    return p.substitute(images)


def reynolds(group: MatrixGroup, p: MPoly) -> MPoly:
    """Group-averaging projection (1/|W|) sum_w w.p onto the invariant ring."""
    total = MPoly.zero(p.nvars)
    for w in group.elements:
        total = total + act_on_poly(w, p, group.inverse_of(w))
    return total / Fraction(group.order)


def is_invariant(group: MatrixGroup, p: MPoly, generators_only: bool = False) -> bool:
    mats = group.generators if generators_only else group.elements
    return all(act_on_poly(w, p) == p for w in mats)


# -- pseudo-reflections -----------------------------------------------------------


@dataclass(frozen=True)
class Reflection:
    """A classified pseudo-reflection: rank(Id - g) = 1."""

    g: Matrix
    order: int
    mu: Scalar                    # the nontrivial eigenvalue, a root of unity != 1
    root: tuple[Scalar, ...]      # spans the moved line [V, g]; first nonzero entry 1
    form: tuple[Scalar, ...]      # hyperplane covector L_H with Ker L_H = Fix g

    @property
    def n(self) -> int:
        return len(self.root)

    def form_at(self, vec: Sequence[Scalar]) -> Scalar:
        acc = Fraction(0)
        for c, v in zip(self.form, vec):
            acc = acc + c * v
        return as_scalar(acc)

    def fixes(self, vec: Sequence[Scalar]) -> bool:
        return scalar_is_zero(self.form_at(vec))


def _normalize_vector(vec: Sequence[Scalar]) -> tuple[Scalar, ...]:
    lead = next((v for v in vec if not scalar_is_zero(v)), None)
    if lead is None:
        raise ValueError("zero vector cannot be normalized")
    return tuple(as_scalar(v / lead) for v in vec)


def classify_reflections(group: MatrixGroup) -> list[Reflection]:
    """All elements with rank(Id - g) = 1, packaged with eigen-data."""
    out = []
    identity = Matrix.identity(group.n)
    for g in group.elements:
        if g.is_identity():
            continue
        diff_rows = [
            [identity.rows[i][j] - g.rows[i][j] for j in range(group.n)]
            for i in range(group.n)
        ]
        diff = Matrix(diff_rows)
        if diff.rank() != 1:
            continue
        # Id - g = root . form^T: any nonzero column spans the moved line,
        # any nonzero row spans the forms vanishing on Fix g
        cols = diff.transpose().rows
        root_raw = next(c for c in cols if any(not scalar_is_zero(v) for v in c))
        root = _normalize_vector(root_raw)
        form_raw = next(r for r in diff.rows if any(not scalar_is_zero(v) for v in r))
        form = _normalize_vector(form_raw)
        image = g.matvec(list(root))
        k = next(i for i, v in enumerate(root) if not scalar_is_zero(v))
        mu = as_scalar(image[k] / root[k])
        if any(image[i] != mu * root[i] for i in range(group.n)):
            raise AssertionError("moved line is not an eigenline")
        out.append(Reflection(g, group.element_order(g), mu, root, form))
    return out


def build_reflection(form: Sequence[Scalar], root: Sequence[Scalar], mu: Scalar,
                     ) -> Matrix:
    """Matrix of v |-> v - (1 - mu) L(v)/L(a) a for hyperplane form L and
    root a.  Requires L(a) != 0 and mu != 1."""
    n = len(root)
    if len(form) != n:
        raise ValueError("form and root must have equal length")
    la = Fraction(0)
    for c, v in zip(form, root):
        la = la + c * v
    if scalar_is_zero(la):
        raise ValueError("root lies in the reflection hyperplane (L(a) = 0)")
    if mu == 1:
        raise ValueError("eigenvalue must differ from 1")
    scale = (1 - mu) / la
    rows = [
        [
            (Fraction(1) if i == j else Fraction(0)) - scale * form[j] * root[i]
            for j in range(n)
        ]
        for i in range(n)
    ]
    return Matrix(rows)


def commuting_criterion(r: Reflection, s: Reflection) -> bool:
    """Sufficient condition for rs = sr: each root lies in the other's
    fixed hyperplane."""
    return s.fixes(r.root) and r.fixes(s.root)


class SubspaceVerdict(enum.Enum):
    CONTAINED_IN_FIX = "contained_in_fix"
    CONTAINS_MOVED_LINE = "contains_moved_line"
    NOT_INVARIANT = "not_invariant"


def invariant_subspace_check(basis: Sequence[Sequence[Scalar]], r: Reflection) -> SubspaceVerdict:
    """Classify a subspace against a pseudo-reflection: it is r-invariant
    exactly when it lies in Fix r or contains the moved line."""
    if not basis:
        return SubspaceVerdict.CONTAINED_IN_FIX
    span = Matrix(basis)
    if span.rank() != len(basis):
        raise ValueError("basis vectors are linearly dependent")
    if all(r.fixes(v) for v in basis):
        return SubspaceVerdict.CONTAINED_IN_FIX
    if _in_span(basis, r.root):
        return SubspaceVerdict.CONTAINS_MOVED_LINE
    return SubspaceVerdict.NOT_INVARIANT


def _in_span(basis: Sequence[Sequence[Scalar]], vec: Sequence[Scalar]) -> bool:
    base_rank = Matrix(basis).rank()
    return Matrix(list(basis) + [list(vec)]).rank() == base_rank


# -- direct-product decomposition ----------------------------------------------------


@dataclass
class DecompositionFactor:
    group: MatrixGroup                  # subgroup generated by one reflection class
    reflections: list[Reflection]
    subspace: list[list[Scalar]]        # basis of the span of the class's moved lines


@dataclass
class GroupDecomposition:
    factors: list[DecompositionFactor]
    fixed_subspace: list[list[Scalar]]  # basis of the pointwise-fixed subspace


def decompose(group: MatrixGroup, bound: int = DEFAULT_CLOSURE_BOUND) -> GroupDecomposition:
    """Split a pseudo-reflection group into pairwise-commuting factors.

    Reflections are joined when they fail to commute or share a moved line;
    each connected class generates one factor, acting on the span of its
    moved lines.
    """
    reflections = classify_reflections(group)
    n = group.n
    if reflections:
        closure = group_closure([r.g for r in reflections], bound=bound,
                                conductor=group.conductor)
        if closure.order != group.order:
            raise NotReflectionGroupError(
                f"group of order {group.order} is not generated by its "
                f"{len(reflections)} pseudo-reflections (they generate order {closure.order})")
    elif group.order != 1:
        raise NotReflectionGroupError("nontrivial group with no pseudo-reflections")

    # union-find over the join relation
    parent = list(range(len(reflections)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(reflections)):
        for j in range(i + 1, len(reflections)):
            ri, rj = reflections[i], reflections[j]
            joined = ri.g * rj.g != rj.g * ri.g or ri.root == rj.root
            if joined:
                pi, pj = find(i), find(j)
                if pi != pj:
                    parent[pi] = pj

    classes: dict[int, list[Reflection]] = {}
    for i, r in enumerate(reflections):
        classes.setdefault(find(i), []).append(r)

    factors = []
    for cls in classes.values():
        sub = group_closure([r.g for r in cls], bound=bound, conductor=group.conductor)
        basis = _row_space_basis([list(r.root) for r in cls])
        factors.append(DecompositionFactor(sub, cls, basis))
    factors.sort(key=lambda f: min(group.elements.index(r.g) for r in f.reflections))

    if reflections:
        fixed = Matrix([list(r.form) for r in reflections]).nullspace()
    else:
        fixed = [list(Matrix.identity(n).rows[i]) for i in range(n)]
    return GroupDecomposition(factors, fixed)


def _row_space_basis(rows: list[list[Scalar]]) -> list[list[Scalar]]:
    work = [list(r) for r in rows]
    ncols = len(work[0])
    basis: list[list[Scalar]] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(work))
                      if not scalar_is_zero(work[r][col])), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        pv = work[rank][col]
        work[rank] = [as_scalar(v / pv) for v in work[rank]]
        for r in range(len(work)):
            if r != rank and not scalar_is_zero(work[r][col]):
                f = work[r][col]
                work[r] = [v - f * u for v, u in zip(work[r], work[rank])]
        rank += 1
    return work[:rank]


# -- built-in families -----------------------------------------------------------------


def _perm_matrix(images: Sequence[int], n: int) -> Matrix:
    # column i carries e_i -> e_images[i]
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i, tgt in enumerate(images):
        rows[tgt][i] = Fraction(1)
    return Matrix(rows)


def _transposition_generators(n: int) -> list[Matrix]:
    gens = []
    for i in range(n - 1):
        images = list(range(n))
        images[i], images[i + 1] = images[i + 1], images[i]
        gens.append(_perm_matrix(images, n))
    return gens


def _diag(entries: Sequence[Scalar]) -> Matrix:
    n = len(entries)
    return Matrix([
        [entries[i] if i == j else Fraction(0) for j in range(n)]
        for i in range(n)
    ])


def symmetric_group(n: int, bound: int = DEFAULT_CLOSURE_BOUND) -> MatrixGroup:
    """S_n in its permutation representation."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    if n == 1:
        return trivial_group(1)
    return group_closure(_transposition_generators(n), bound=bound,
                         family="Sn", params={"rank": n})


def hyperoctahedral_group(n: int, bound: int = DEFAULT_CLOSURE_BOUND) -> MatrixGroup:
    """B_n: signed permutation matrices."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    sign = _diag([Fraction(-1)] + [Fraction(1)] * (n - 1))
    gens = _transposition_generators(n) + [sign]
    return group_closure(gens, bound=bound, family="Bn", params={"rank": n})


def demihyperoctahedral_group(n: int, bound: int = DEFAULT_CLOSURE_BOUND) -> MatrixGroup:
    """D_n: even signed permutation matrices (n >= 2)."""
    if n < 2:
        raise ValueError("Dn needs rank at least 2")
    signed_swap = [[Fraction(0)] * n for _ in range(n)]
    signed_swap[0][1] = Fraction(-1)
    signed_swap[1][0] = Fraction(-1)
    for i in range(2, n):
        signed_swap[i][i] = Fraction(1)
    gens = _transposition_generators(n) + [Matrix(signed_swap)]
    return group_closure(gens, bound=bound, family="Dn", params={"rank": n})


def monomial_group(m: int, n: int, bound: int = DEFAULT_CLOSURE_BOUND) -> MatrixGroup:
    """G(m,1,n): n x n monomial matrices with m-th roots of unity."""
    if m < 1 or n < 1:
        raise ValueError("parameters must be positive")
    if m == 1:
        return symmetric_group(n, bound)
    zeta = CycNum.zeta(m)
    gens = _transposition_generators(n) + [_diag([zeta] + [Fraction(1)] * (n - 1))]
    if n == 1:
        gens = [_diag([zeta])]
    return group_closure(gens, bound=bound, conductor=m,
                         family="G", params={"m": m, "rank": n})


def cyclic_diagonal_group(m: int, n: int, bound: int = DEFAULT_CLOSURE_BOUND) -> MatrixGroup:
    """The cyclic group generated by diag(zeta_m, 1, ..., 1)."""
    if m < 1 or n < 1:
        raise ValueError("parameters must be positive")
    if m == 1:
        return trivial_group(n)
    zeta = CycNum.zeta(m)
    gen = _diag([zeta] + [Fraction(1)] * (n - 1))
    return group_closure([gen], bound=bound, conductor=m,
                         family="cyclic", params={"m": m, "rank": n})


def trivial_group(n: int) -> MatrixGroup:
    return MatrixGroup(n, 1, [], [Matrix.identity(n)], family="trivial",
                       params={"rank": n})


def block_product(a: MatrixGroup, b: MatrixGroup,
                  bound: int = DEFAULT_CLOSURE_BOUND) -> MatrixGroup:
    """The direct product acting block-diagonally on the concatenated space."""
    n = a.n + b.n
    conductor = math.lcm(a.conductor, b.conductor)
    gens = []
    for g in a.generators:
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(a.n):
            for j in range(a.n):
                rows[i][j] = g.rows[i][j]
        for i in range(a.n, n):
            rows[i][i] = Fraction(1)
        gens.append(Matrix(rows))
    for g in b.generators:
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(a.n):
            rows[i][i] = Fraction(1)
        for i in range(b.n):
            for j in range(b.n):
                rows[a.n + i][a.n + j] = g.rows[i][j]
        gens.append(Matrix(rows))
    if not gens:
        return trivial_group(n)
    return group_closure(gens, bound=bound, conductor=conductor)


FAMILY_BUILDERS = {
    "Sn": lambda rank, m, bound: symmetric_group(rank, bound),
    "Bn": lambda rank, m, bound: hyperoctahedral_group(rank, bound),
    "Dn": lambda rank, m, bound: demihyperoctahedral_group(rank, bound),
    "G": lambda rank, m, bound: monomial_group(m, rank, bound),
    "cyclic": lambda rank, m, bound: cyclic_diagonal_group(m, rank, bound),
    "trivial": lambda rank, m, bound: trivial_group(rank),
}


def build_family(name: str, rank: int, m: int | None = None,
                 bound: int = DEFAULT_CLOSURE_BOUND) -> MatrixGroup:
    if name not in FAMILY_BUILDERS:
        raise GroupSpecError(
            f"unknown family {name!r}; choose from {sorted(FAMILY_BUILDERS)}")
    if name in ("G", "cyclic") and m is None:
        raise GroupSpecError(f"family {name!r} requires the cyclotomic parameter m")
    return FAMILY_BUILDERS[name](rank, m, bound)


# -- JSON group specifications -----------------------------------------------------------


def parse_group_spec(document: str, bound: int = DEFAULT_CLOSURE_BOUND) -> MatrixGroup:
    """Build a group from a JSON document.

    Schema: ``{"n": int, "conductor": int, "generators": [[entry strings]],
    "family": {"name": str, "rank": int, "m": int}}``; either generators or
    a family block must be present.  Generator entries are scalar strings in
    the canonical format, row-major.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise GroupSpecError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GroupSpecError("group spec must be a JSON object")

    family = doc.get("family")
    if family is not None:
        if not isinstance(family, dict) or "name" not in family:
            raise GroupSpecError("family: expected an object with a 'name' field")
        rank = family.get("rank", family.get("n"))
        if not isinstance(rank, int):
            raise GroupSpecError("family.rank: expected an integer")
        m = family.get("m")
        return build_family(family["name"], rank, m, bound)

    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise GroupSpecError("n: expected a positive integer")
    conductor = doc.get("conductor", 1)
    if not isinstance(conductor, int) or conductor < 1:
        raise GroupSpecError("conductor: expected a positive integer")
    gens_field = doc.get("generators")
    if not isinstance(gens_field, list) or not gens_field:
        raise GroupSpecError("generators: expected a non-empty list")
    generators = []
    for gi, flat in enumerate(gens_field):
        if not isinstance(flat, list):
            raise GroupSpecError(f"generators[{gi}]: expected a list of entry strings")
        if len(flat) == n and all(isinstance(r, list) for r in flat):
            flat = [e for row in flat for e in row]
        if len(flat) != n * n:
            raise GroupSpecError(
                f"generators[{gi}]: expected {n * n} row-major entries, got {len(flat)}")
        entries = []
        for ei, text in enumerate(flat):
            try:
                entries.append(parse_scalar(str(text), conductor))
            except (ValueError, ZeroDivisionError) as exc:
                raise GroupSpecError(
                    f"generators[{gi}][{ei}]: cannot parse scalar {text!r}: {exc}") from exc
        rows = [entries[i * n:(i + 1) * n] for i in range(n)]
        generators.append(Matrix(rows))
    return group_closure(generators, bound=bound, conductor=conductor)


def group_spec_json(group: MatrixGroup) -> dict:
    """Canonical echo of a group specification."""
    doc: dict = {"n": group.n, "conductor": group.conductor}
    if group.family:
        fam: dict = {"name": group.family, "rank": group.params.get("rank")}
        if "m" in group.params:
            fam["m"] = group.params["m"]
        doc["family"] = fam
    doc["generators"] = [
        [format_scalar(e) for row in g.rows for e in row]
        for g in group.generators
    ]
    doc["order"] = group.order
    return doc
