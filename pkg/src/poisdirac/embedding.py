"""Coisotropic embedding of a regular Dirac manifold into a Poisson patch.

Input: polynomial spanning sections (X_a, xi_a) of a Dirac structure L
on a coordinate patch Q^m, a polynomial frame for the constant-rank
distribution E = L intersect TM, and a complementary frame V.  The
total space of E* (coordinates x_1..x_m, p_1..p_k) carries the gauge
transform of the pulled-back structure by the two-form obtained from
the fiberwise pairing one-form theta = sum_I p_I e^I(x), where e^I is
the coframe dual to the E frame that annihilates the V frame.

The gauge form is B = -d(theta); this orientation is the one under
which a constant-frame input reproduces the standard q-p pairing block
Pi = sum d/dq_I ^ d/dp_I, matching the package's sharp convention.

Only frames with a polynomial dual coframe are supported (the frame
matrix must have constant nonzero determinant); anything else would
leave exact polynomial arithmetic and is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .bivector_fields import BivectorField, TwoFormField, is_closed, is_poisson
from .dirac_linear import DiracVS, as_bivector, characteristic, gauge, pullback
from .errors import PreconditionError, PropertyViolationError, SpaceMismatchError
from .poisson_linear import classify_subspace
from .polynomials import Poly, fiber_variables, poly_matrix_det, poly_matrix_inverse
from .rational_linalg import MatrixQ, Subspace, Vector, rank

# Orientation of the canonical two-form on the total space: B = CANONICAL_FORM_SIGN * d(theta).
CANONICAL_FORM_SIGN = -1


@dataclass(frozen=True)
class Section:
    """One spanning section of L: a vector field paired with a one-form."""

    vector: tuple[Poly, ...]
    covector: tuple[Poly, ...]


@dataclass(frozen=True)
class DiracManifoldData:
    """Polynomial presentation of a Dirac structure with chosen frames.

    sections: m pairs spanning L pointwise; e_frame: k vector fields
    spanning L intersect TM pointwise; v_frame: m - k vector fields with
    e_frame + v_frame a pointwise basis of TM.
    """

    base_dim: int
    sections: tuple[Section, ...]
    e_frame: tuple[tuple[Poly, ...], ...]
    v_frame: tuple[tuple[Poly, ...], ...]

    def __post_init__(self) -> None:
        m = self.base_dim
        if len(self.sections) != m:
            raise SpaceMismatchError(f"need {m} spanning sections, got {len(self.sections)}")
        if len(self.e_frame) + len(self.v_frame) != m:
            raise SpaceMismatchError("E and V frames together must have base_dim members")
        for sec in self.sections:
            if len(sec.vector) != m or len(sec.covector) != m:
                raise SpaceMismatchError("section components must have base_dim entries")

    @property
    def fiber_dim(self) -> int:
        return len(self.e_frame)

    @property
    def base_vars(self) -> tuple[str, ...]:
        return self.sections[0].vector[0].variables

    def dirac_at(self, x: Sequence[Fraction]) -> DiracVS:
        rows = [
            tuple(p.evaluate(x) for p in sec.vector) + tuple(p.evaluate(x) for p in sec.covector)
            for sec in self.sections
        ]
        return DiracVS.from_rows(self.base_dim, rows)


@dataclass(frozen=True)
class ValidationIssue:
    sample_index: int
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues


def validate_dirac_data(d: DiracManifoldData, samples: Sequence[Sequence[Fraction]]) -> ValidationReport:
    """Check every pointwise invariant of the data at each sample."""
    issues: list[ValidationIssue] = []
    m, k = d.base_dim, d.fiber_dim
    for idx, x in enumerate(samples):
        try:
            structure = d.dirac_at(x)
        except (PreconditionError, SpaceMismatchError) as exc:
            issues.append(ValidationIssue(idx, f"sections: {exc}"))
            continue
        char = characteristic(structure)
        e_rows = tuple(tuple(p.evaluate(x) for p in field) for field in d.e_frame)
        e_span = Subspace.span(m, e_rows)
        if e_span.dim != k:
            issues.append(ValidationIssue(idx, "E frame vectors are dependent"))
            continue
        if char != e_span:
            issues.append(ValidationIssue(idx, f"E frame spans a {e_span.dim}-dim space but L /\\ TM is {char.dim}-dim or differs"))
        v_rows = tuple(tuple(p.evaluate(x) for p in field) for field in d.v_frame)
        frame = MatrixQ.from_rows(e_rows + v_rows, cols=m)
        if rank(frame) != m:
            issues.append(ValidationIssue(idx, "E and V frames do not span the tangent space"))
    return ValidationReport(tuple(issues))


def total_space_variables(d: DiracManifoldData) -> tuple[str, ...]:
    return d.base_vars + fiber_variables(d.fiber_dim)


def _lift(poly: Poly, total_vars: tuple[str, ...]) -> Poly:
    """Reinterpret a base polynomial in the total-space variable context."""
    pad = len(total_vars) - len(poly.variables)
    return Poly.make(total_vars, {e + (0,) * pad: c for e, c in poly.terms})


def pullback_canonical_one_form(d: DiracManifoldData) -> tuple[Poly, ...]:
    """theta = sum_I p_I e^I(x) on the total space, as covector components.

    e^I are the first k rows of the inverse frame matrix [E | V]; the
    inverse must be polynomial, so the frame determinant has to be a
    nonzero constant.
    """
    m, k = d.base_dim, d.fiber_dim
    total_vars = total_space_variables(d)
    if k == 0:
        return tuple(Poly.zero(total_vars) for _ in range(m))
    frame_cols = d.e_frame + d.v_frame
    frame = [[frame_cols[j][i] for j in range(m)] for i in range(m)]
    det = poly_matrix_det(frame)
    if not det.is_constant() or det.constant_value() == 0:
        raise PreconditionError(
            f"frame determinant {det} is not a nonzero constant; the dual coframe is not polynomial"
        )
    inv = poly_matrix_inverse(frame)
    theta = []
    for j in range(m):
        acc = Poly.zero(total_vars)
        for cap_i in range(k):
            p_var = Poly.variable(total_vars, total_vars[m + cap_i])
            acc = acc + p_var * _lift(inv[cap_i][j], total_vars)
        theta.append(acc)
    return tuple(theta) + tuple(Poly.zero(total_vars) for _ in range(k))


def pullback_canonical_form(d: DiracManifoldData) -> TwoFormField:
    """Gauge two-form B = CANONICAL_FORM_SIGN * d(theta); closed by construction."""
    theta = pullback_canonical_one_form(d)
    total_vars = total_space_variables(d)
    n = len(total_vars)
    grid = [[Poly.zero(total_vars)] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            duv = theta[v].partial(total_vars[u]) - theta[u].partial(total_vars[v])
            entry = duv.scale(CANONICAL_FORM_SIGN)
            grid[u][v] = entry
            grid[v][u] = -entry
    b = TwoFormField(tuple(total_vars), tuple(tuple(r) for r in grid))
    if not is_closed(b):
        raise PropertyViolationError("derived gauge form is not closed; d^2 = 0 was violated")
    return b


def _gauged_span_symbolic(d: DiracManifoldData, b: TwoFormField) -> tuple[tuple[tuple[Poly, ...], tuple[Poly, ...]], ...]:
    """Spanning rows of the gauged pullback structure as (vector, covector) polynomials."""
    m, k = d.base_dim, d.fiber_dim
    total_vars = total_space_variables(d)
    n = m + k
    zero = Poly.zero(total_vars)
    rows: list[tuple[tuple[Poly, ...], tuple[Poly, ...]]] = []
    for sec in d.sections:
        vec = tuple(_lift(p, total_vars) for p in sec.vector) + (zero,) * k
        cov = list(tuple(_lift(p, total_vars) for p in sec.covector) + (zero,) * k)
        rows.append((vec, tuple(cov)))
    for cap_i in range(k):
        vec = tuple(zero for _ in range(m)) + tuple(
            Poly.constant(total_vars, 1) if j == cap_i else zero for j in range(k)
        )
        rows.append((vec, (zero,) * n))
    gauged = []
    for vec, cov in rows:
        shift = []
        for v in range(n):
            acc = Poly.zero(total_vars)
            for u in range(n):
                if not b.entries[u][v].is_zero() and not vec[u].is_zero():
                    acc = acc + b.entries[u][v] * vec[u]
            shift.append(acc)
        gauged.append((vec, tuple(c + s for c, s in zip(cov, shift))))
    return tuple(gauged)


@dataclass(frozen=True)
class SampleCheck:
    point: Vector
    graph: bool
    zero_section_coisotropic: bool
    zero_section_pullback_matches: bool

    @property
    def ok(self) -> bool:
        return self.graph and self.zero_section_coisotropic and self.zero_section_pullback_matches


@dataclass(frozen=True)
class EmbeddingResult:
    """Total-space structure with its gauge form and per-sample evidence.

    `bivector` is present when graph extraction succeeded symbolically
    (covector-part determinant a nonzero constant), in which case it is
    an exact polynomial Poisson structure.
    """

    data: DiracManifoldData
    total_dim: int
    variables: tuple[str, ...]
    gauge_form: TwoFormField
    bivector: BivectorField | None
    sample_checks: tuple[SampleCheck, ...]

    def dirac_at(self, point: Sequence[Fraction]) -> DiracVS:
        return _structure_at(self.data, self.gauge_form, point)


def _structure_at(d: DiracManifoldData, b: TwoFormField, point: Sequence[Fraction]) -> DiracVS:
    m, k = d.base_dim, d.fiber_dim
    n = m + k
    if len(point) != n:
        raise SpaceMismatchError(f"total space has dimension {n}, point has length {len(point)}")
    x = tuple(point[:m])
    base = d.dirac_at(x)
    rows = []
    for r in base.span.basis.entries:
        rows.append(tuple(r[:m]) + (Fraction(0),) * k + tuple(r[m:]) + (Fraction(0),) * k)
    for cap_i in range(k):
        row = [Fraction(0)] * (2 * n)
        row[m + cap_i] = Fraction(1)
        rows.append(tuple(row))
    lifted = DiracVS.from_rows(n, rows)
    return gauge(lifted, b.at(point))


def build_embedding(d: DiracManifoldData, samples: Sequence[Sequence[Fraction]]) -> EmbeddingResult:
    """Assemble the total-space structure and check it at every sample.

    Per sample (x, p): the structure there must be a bivector graph; at
    the zero-section point (x, 0) the base tangent space must be
    coisotropic and the pullback to it must reproduce the input
    structure.  Failures raise, naming the offending point.
    """
    report = validate_dirac_data(d, [tuple(s[: d.base_dim]) for s in samples])
    if not report.ok:
        first = report.issues[0]
        raise PreconditionError(f"input data invalid at sample {first.sample_index}: {first.message}")
    m, k = d.base_dim, d.fiber_dim
    n = m + k
    b = pullback_canonical_form(d)
    bivector = _extract_symbolic_bivector(d, b)
    checks = []
    zero_tangent = Subspace.span(n, [[Fraction(1 if j == i else 0) for j in range(n)] for i in range(m)])
    for point in samples:
        point = tuple(point)
        structure = _structure_at(d, b, point)
        pointwise = as_bivector(structure)
        if pointwise is None:
            raise PropertyViolationError(f"structure is not a bivector graph at {point}")
        base_point = point[:m] + (Fraction(0),) * k
        at_zero = _structure_at(d, b, base_point)
        zero_bivector = as_bivector(at_zero)
        if zero_bivector is None:
            raise PropertyViolationError(f"structure is not a bivector graph at the zero-section point {base_point}")
        coisotropic = classify_subspace(zero_bivector, zero_tangent).coisotropic
        restored = pullback(at_zero, zero_tangent)
        matches = restored == d.dirac_at(point[:m])
        checks.append(SampleCheck(point, True, coisotropic, matches))
    return EmbeddingResult(
        data=d,
        total_dim=n,
        variables=total_space_variables(d),
        gauge_form=b,
        bivector=bivector,
        sample_checks=tuple(checks),
    )


def _extract_symbolic_bivector(d: DiracManifoldData, b: TwoFormField) -> BivectorField | None:
    """Solve the graph relation symbolically when the covector matrix
    inverts inside the polynomial ring; returns None otherwise."""
    n = d.base_dim + d.fiber_dim
    rows = _gauged_span_symbolic(d, b)
    cov = [[rows[r][1][j] for j in range(n)] for r in range(n)]
    det = poly_matrix_det(cov)
    if not det.is_constant() or det.constant_value() == 0:
        return None
    inv = poly_matrix_inverse(cov)
    vec = [[rows[r][0][j] for j in range(n)] for r in range(n)]
    total_vars = total_space_variables(d)
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Poly.zero(total_vars)
            for r in range(n):
                if not inv[i][r].is_zero() and not vec[r][j].is_zero():
                    acc = acc + inv[i][r] * vec[r][j]
            row.append(-acc)
        entries.append(tuple(row))
    field = BivectorField(total_vars, tuple(entries))
    if not is_poisson(field):
        raise PropertyViolationError("extracted polynomial bivector fails the Jacobi identity")
    return field


@dataclass(frozen=True)
class SplittingComparison:
    gauge_difference: TwoFormField
    closed: bool
    one_form_difference_vanishes_on_base: bool
    intertwines_at_all_samples: bool


def compare_splittings(
    d: DiracManifoldData,
    v0_frame: Sequence[Sequence[Poly]],
    v1_frame: Sequence[Sequence[Poly]],
    samples: Sequence[Sequence[Fraction]],
) -> SplittingComparison:
    """Compare the structures built with two complements of E.

    B is the difference of the two gauge forms; it must be closed, the
    difference of the pairing one-forms must vanish identically on the
    zero section, and the gauge by B must carry the first structure to
    the second at every sample.
    """
    d0 = replace(d, v_frame=tuple(tuple(f) for f in v0_frame))
    d1 = replace(d, v_frame=tuple(tuple(f) for f in v1_frame))
    base_samples = [tuple(s[: d.base_dim]) for s in samples]
    for name, dd in (("v0", d0), ("v1", d1)):
        report = validate_dirac_data(dd, base_samples)
        if not report.ok:
            issue = report.issues[0]
            raise PreconditionError(f"{name} frame invalid at sample {issue.sample_index}: {issue.message}")
    b0, b1 = pullback_canonical_form(d0), pullback_canonical_form(d1)
    diff = b1 - b0
    closed = is_closed(diff)
    theta0, theta1 = pullback_canonical_one_form(d0), pullback_canonical_one_form(d1)
    m, k = d.base_dim, d.fiber_dim
    total_vars = total_space_variables(d)
    zero_fibers = {total_vars[m + i]: Poly.zero(total_vars) for i in range(k)}
    keep = {v: Poly.variable(total_vars, v) for v in total_vars[:m]}
    on_base = all((t1 - t0).substitute({**keep, **zero_fibers}).is_zero() for t0, t1 in zip(theta0, theta1))
    intertwines = True
    for point in samples:
        point = tuple(point)
        s0 = _structure_at(d0, b0, point)
        s1 = _structure_at(d1, b1, point)
        if gauge(s0, diff.at(point)) != s1:
            intertwines = False
            break
    return SplittingComparison(diff, closed, on_base, intertwines)
