"""Submanifolds of polynomial Poisson patches, analyzed pointwise.

A submanifold is either a polynomial parametrization Q^k -> Q^n or a
polynomial level set in Q^n; tangent and conormal spaces at rational
points feed the linear classification machinery.  Rank profiles gather
classification records over a sample set and report constancy as
evidence over those samples only: deciding rank constancy of
polynomial data globally is out of scope.

Functions on a parametrized patch are polynomials in the parameters;
on a level set they are ambient polynomials restricted to the locus.
A function is basic at a point when its differential annihilates the
characteristic subspace there, and basic functions carry the bracket
{f, g}(q) = Y(g) for any tangent solution (Y, df_q) of the pullback
structure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bivector_fields import BivectorField
from .dirac_linear import from_bivector, pullback
from .errors import PreconditionError, PropertyViolationError, RegularityError, SpaceMismatchError
from .poisson_linear import (
    ClassificationRecord,
    characteristic_subspace,
    classify_subspace,
    cosymplectic_extension,
    greedy_complement,
    induced_bivector,
    subspace_in_basis,
)
from .polynomials import Poly, PolyMap
from .rational_linalg import MatrixQ, Subspace, Vector, annihilator, column_space, rank, solve


@dataclass(frozen=True)
class Parametrized:
    """Image of a polynomial map Q^k -> Q^n; points are parameter values."""

    map: PolyMap

    @property
    def param_dim(self) -> int:
        return self.map.source_dim

    @property
    def ambient_dim(self) -> int:
        return self.map.target_dim


@dataclass(frozen=True)
class LevelSet:
    """Common zero locus of polynomial constraints on Q^n; points are ambient."""

    constraints: tuple[Poly, ...]

    def __post_init__(self) -> None:
        if not self.constraints:
            raise PreconditionError("a level set needs at least one constraint")
        contexts = {c.variables for c in self.constraints}
        if len(contexts) != 1:
            raise SpaceMismatchError("constraints must share one variable context")

    @property
    def ambient_dim(self) -> int:
        return len(self.constraints[0].variables)


SubmanifoldPatch = Parametrized | LevelSet


def ambient_point(c: SubmanifoldPatch, q: Sequence[Fraction]) -> Vector:
    if isinstance(c, Parametrized):
        return c.map.evaluate(q)
    point = tuple(q)
    for g in c.constraints:
        if g.evaluate(point) != 0:
            raise RegularityError(f"point {point} does not satisfy constraint {g}")
    return point


def tangent_at(c: SubmanifoldPatch, q: Sequence[Fraction]) -> Subspace:
    """Tangent space at a regular point, as a subspace of the ambient Q^n."""
    if isinstance(c, Parametrized):
        jac = c.map.jacobian_at(q)
        if rank(jac) != c.param_dim:
            raise RegularityError(f"parametrization is not an immersion at {tuple(q)}")
        return column_space(jac)
    point = ambient_point(c, q)
    diffs = MatrixQ.from_rows(
        [[g.partial(v).evaluate(point) for v in g.variables] for g in c.constraints]
    )
    if rank(diffs) != len(c.constraints):
        raise RegularityError(f"constraint differentials are dependent at {point}")
    from .rational_linalg import kernel

    return kernel(diffs)


def conormal_at(c: SubmanifoldPatch, q: Sequence[Fraction]) -> Subspace:
    return annihilator(tangent_at(c, q))


def classify_at(pi: BivectorField, c: SubmanifoldPatch, q: Sequence[Fraction]) -> ClassificationRecord:
    point = ambient_point(c, q)
    return classify_subspace(pi.at(point), tangent_at(c, q))


@dataclass(frozen=True)
class RankProfileRow:
    sample: Vector
    ambient: Vector
    record: ClassificationRecord
    characteristic_basis: MatrixQ


@dataclass(frozen=True)
class ConstancyFlags:
    """Whether each profiled quantity is constant on the given samples."""

    dim_tangent: bool
    dim_sharp_conormal: bool
    dim_sum: bool
    dim_characteristic: bool
    rho_rank: bool


@dataclass(frozen=True)
class RankProfile:
    rows: tuple[RankProfileRow, ...]
    errors: tuple[tuple[int, str], ...]
    constant: ConstancyFlags


def rank_profile(pi: BivectorField, c: SubmanifoldPatch, samples: Sequence[Sequence[Fraction]]) -> RankProfile:
    """Per-point classification records plus constancy flags.

    Regularity failures are reported per point and do not abort the
    remaining samples.  The characteristic basis is included per point
    so that a constant characteristic dimension with a jumping
    characteristic direction stays visible.
    """
    rows: list[RankProfileRow] = []
    errors: list[tuple[int, str]] = []
    for idx, q in enumerate(samples):
        try:
            point = ambient_point(c, q)
            tangent = tangent_at(c, q)
            p = pi.at(point)
            record = classify_subspace(p, tangent)
            char = characteristic_subspace(p, tangent)
            rows.append(RankProfileRow(tuple(q), point, record, char.basis))
        except (RegularityError, SpaceMismatchError) as exc:
            errors.append((idx, str(exc)))
    def constant(values: list) -> bool:
        return len(set(values)) <= 1
    flags = ConstancyFlags(
        dim_tangent=constant([r.record.dim_subspace for r in rows]),
        dim_sharp_conormal=constant([r.record.dim_sharp_annihilator for r in rows]),
        dim_sum=constant([r.record.dim_sum for r in rows]),
        dim_characteristic=constant([r.record.dim_characteristic for r in rows]),
        rho_rank=constant([r.record.rho_rank for r in rows]),
    )
    return RankProfile(tuple(rows), tuple(errors), flags)


def grid_points(dim: int, height: int, seed: int, count: int) -> tuple[Vector, ...]:
    """Deterministic sample points with numerators and denominators of
    magnitude at most `height`."""
    if height < 1 or count < 0:
        raise PreconditionError("height must be >= 1 and count >= 0")
    rng = random.Random(seed)
    points = []
    for _ in range(count):
        points.append(tuple(Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(dim)))
    return tuple(points)


def level_set_grid_points(c: LevelSet, height: int, seed: int, count: int, attempts: int = 10000) -> tuple[Vector, ...]:
    """Grid points filtered onto the locus; suits coordinate-aligned constraints."""
    rng = random.Random(seed)
    n = c.ambient_dim
    points: list[Vector] = []
    for _ in range(attempts):
        if len(points) == count:
            break
        q = tuple(Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(n))
        if all(g.evaluate(q) == 0 for g in c.constraints):
            points.append(q)
    return tuple(points)


def _function_context(c: SubmanifoldPatch) -> tuple[str, ...]:
    return c.map.source_vars if isinstance(c, Parametrized) else c.constraints[0].variables


def _differential_on_tangent(
    f: Poly, c: SubmanifoldPatch, q: Sequence[Fraction], tangent: Subspace
) -> Vector:
    """df_q as a covector in the canonical-basis coordinates of the tangent."""
    if f.variables != _function_context(c):
        raise SpaceMismatchError("function does not use the submanifold's coordinates")
    if isinstance(c, Parametrized):
        grad = tuple(f.partial(v).evaluate(q) for v in f.variables)
        jac = c.map.jacobian_at(q)
        # coords: tangent basis row i = J m_i for unique m_i; df(row_i) = grad . m_i
        rows = []
        for row in tangent.basis.entries:
            m = solve(jac, row)
            if m is None:
                raise PropertyViolationError("tangent basis vector has no parameter preimage")
            rows.append(sum(g * mm for g, mm in zip(grad, m)))
        return tuple(rows)
    point = ambient_point(c, q)
    grad = tuple(f.partial(v).evaluate(point) for v in f.variables)
    return tuple(sum(g * t for g, t in zip(grad, row)) for row in tangent.basis.entries)


def is_basic_at(f: Poly, pi: BivectorField, c: SubmanifoldPatch, q: Sequence[Fraction]) -> bool:
    """Whether df annihilates the characteristic subspace at the point."""
    point = ambient_point(c, q)
    tangent = tangent_at(c, q)
    p = pi.at(point)
    char = subspace_in_basis(characteristic_subspace(p, tangent), tangent)
    df = _differential_on_tangent(f, c, q, tangent)
    return all(sum(d * v for d, v in zip(df, row)) == 0 for row in char.basis.entries)


def is_basic(f: Poly, pi: BivectorField, c: SubmanifoldPatch, samples: Sequence[Sequence[Fraction]]) -> tuple[bool, ...]:
    return tuple(is_basic_at(f, pi, c, q) for q in samples)


def basic_bracket(f: Poly, g: Poly, pi: BivectorField, c: SubmanifoldPatch, q: Sequence[Fraction]) -> Fraction:
    """{f, g}(q) = Y(g) for a tangent solution (Y, df_q) of the pullback structure.

    Rejects non-basic inputs; the result is checked to be independent of
    the choice of Y by verifying dg annihilates the solution-space
    degeneracy directions.
    """
    point = ambient_point(c, q)
    tangent = tangent_at(c, q)
    p = pi.at(point)
    structure = pullback(from_bivector(p), tangent)
    d = tangent.dim
    df = _differential_on_tangent(f, c, q, tangent)
    dg = _differential_on_tangent(g, c, q, tangent)
    if not is_basic_at(f, pi, c, q):
        raise PreconditionError(f"function {f} is not basic at {tuple(q)}")
    if not is_basic_at(g, pi, c, q):
        raise PreconditionError(f"function {g} is not basic at {tuple(q)}")
    # solve for lambda with span-combination covector part equal to df
    basis = structure.span.basis.entries
    cov = MatrixQ(d, len(basis), tuple(tuple(row[d + i] for row in basis) for i in range(d)))
    lam = solve(cov, df)
    if lam is None:
        raise PreconditionError(f"no tangent solution for df at {tuple(q)}; function is not admissible there")
    y = tuple(sum(l * row[i] for l, row in zip(lam, basis)) for i in range(d))
    # degeneracy directions: combinations with zero covector part; dg must kill them
    from .rational_linalg import kernel

    for null in kernel(cov).basis.entries:
        y0 = tuple(sum(l * row[i] for l, row in zip(null, basis)) for i in range(d))
        if sum(a * b for a, b in zip(dg, y0)) != 0:
            raise PropertyViolationError("bracket value depends on the solution choice")
    return sum(a * b for a, b in zip(dg, y))


@dataclass(frozen=True)
class BracketConsistency:
    intrinsic: Fraction
    via_extension: Fraction

    @property
    def agree(self) -> bool:
        return self.intrinsic == self.via_extension


def bracket_consistency_check(
    pi: BivectorField, c: SubmanifoldPatch, q: Sequence[Fraction], f: Poly, g: Poly
) -> BracketConsistency:
    """Intrinsic bracket against the route through a cosymplectic extension.

    The extension route: extend the tangent space to a deterministic
    cosymplectic subspace W, take the induced bivector, extend df and dg
    to covectors on W annihilating the chosen complement of the tangent,
    and evaluate the W-bracket.  Both routes must produce the same
    rational; disagreement raises, since agreement is guaranteed.
    """
    intrinsic = basic_bracket(f, g, pi, c, q)
    point = ambient_point(c, q)
    tangent = tangent_at(c, q)
    p = pi.at(point)
    w = cosymplectic_extension(p, tangent)
    pw = induced_bivector(p, w)
    tangent_in_w = subspace_in_basis(tangent, w)
    complement_rows = greedy_complement(tangent_in_w, _standard_rows(w.dim))
    df = _differential_on_tangent(f, c, q, tangent)
    dg = _differential_on_tangent(g, c, q, tangent)
    constraint = MatrixQ.from_rows(tangent_in_w.basis.entries + complement_rows, cols=w.dim)
    pad = (Fraction(0),) * len(complement_rows)
    alpha = solve(constraint, tuple(df) + pad)
    beta = solve(constraint, tuple(dg) + pad)
    if alpha is None or beta is None:
        raise PropertyViolationError("covector extension to the cosymplectic subspace failed")
    # W-bracket with the same orientation as the intrinsic one: beta(sharp_W alpha)
    via_extension = sum(b * s for b, s in zip(beta, pw.sharp(alpha)))
    result = BracketConsistency(intrinsic, Fraction(via_extension))
    if not result.agree:
        raise PropertyViolationError(
            f"bracket routes disagree at {tuple(q)}: intrinsic {intrinsic}, extension {via_extension}"
        )
    return result


def _standard_rows(n: int) -> tuple[Vector, ...]:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))
