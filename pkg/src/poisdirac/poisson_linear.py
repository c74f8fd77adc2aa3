"""Poisson vector spaces over Q.

A Poisson vector space is Q^n with an antisymmetric bivector matrix
Pi; sharp is the contraction xi -> Pi xi, the leaf O is the image of
sharp, and the leaf form Omega is fixed by Omega(sharp xi, .) = -xi|_O.
This module classifies subspaces (coisotropic / cosymplectic /
pointwise Poisson-Dirac / rank of the normal sharp map rho), builds
induced bivectors on Poisson-Dirac subspaces, constructs cosymplectic
extensions with a deterministic complement rule, produces the
canonical isomorphism between two cosymplectic extensions of the same
coisotropic subspace, and splits the ambient space along a coisotropic
subspace of minimal transverse rank into a V + E + E* model.

Sign conventions (used consistently package-wide):
    (sharp xi)^i = sum_j Pi^{ij} xi_j
    Omega(sharp xi, sharp eta) = -xi(sharp eta)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError, PropertyViolationError, SpaceMismatchError
from .rational_linalg import (
    MatrixQ,
    Subspace,
    Vector,
    add,
    annihilator,
    contains,
    image,
    intersect,
    inverse,
    preimage,
    solve,
)


@dataclass(frozen=True)
class PoissonVS:
    """Q^dim with an antisymmetric bivector matrix."""

    dim: int
    pi: MatrixQ

    def __post_init__(self) -> None:
        if self.pi.rows != self.dim or self.pi.cols != self.dim:
            raise SpaceMismatchError("bivector matrix shape does not match dimension")
        if not self.pi.is_antisymmetric():
            raise PreconditionError("bivector matrix must be antisymmetric")

    def sharp(self, xi: Sequence[Fraction]) -> Vector:
        return self.pi.matvec(xi)

    def leaf(self) -> Subspace:
        """O = image(sharp), the tangent space of the symplectic leaf."""
        return Subspace.span(self.dim, self.pi.transpose().entries)


def sharp_image(p: PoissonVS, s: Subspace) -> Subspace:
    """Image under sharp of a subspace of the dual."""
    if not s.dual:
        raise SpaceMismatchError("sharp consumes dual subspaces; got a primal one")
    return image(p.pi, s, dual=False)


def sharp_preimage(p: PoissonVS, s: Subspace) -> Subspace:
    """sharp^{-1}(s) inside the dual, for a primal subspace s."""
    if s.dual:
        raise SpaceMismatchError("sharp preimage consumes primal subspaces; got a dual one")
    return preimage(p.pi, s, source_dual=True)


@dataclass(frozen=True)
class ClassificationRecord:
    """Dimensions and flags describing one subspace of a Poisson vector space.

    rho is the composite of sharp with the projection to the normal
    space, ann C -> Q^n / C; its rank equals dim(C + sharp ann C) - dim C.
    """

    dim_subspace: int
    dim_annihilator: int
    dim_sharp_annihilator: int
    dim_sum: int
    dim_characteristic: int
    dim_leaf: int
    rho_rank: int
    coisotropic: bool
    cosymplectic: bool
    pointwise_poisson_dirac: bool
    lagrangian_in_leaf: bool


def classify_subspace(p: PoissonVS, c: Subspace) -> ClassificationRecord:
    if c.dual or c.ambient_dim != p.dim:
        raise SpaceMismatchError("subspace must be primal and match the ambient dimension")
    ann = annihilator(c)
    sharp_ann = sharp_image(p, ann)
    total = add(c, sharp_ann)
    characteristic = intersect(c, sharp_ann)
    leaf = p.leaf()
    rho_rank = total.dim - c.dim
    kernel_rho = intersect(ann, sharp_preimage(p, c))
    if rho_rank != ann.dim - kernel_rho.dim:
        raise PropertyViolationError("rank(rho) identities disagree; bivector data is inconsistent")
    record = ClassificationRecord(
        dim_subspace=c.dim,
        dim_annihilator=ann.dim,
        dim_sharp_annihilator=sharp_ann.dim,
        dim_sum=total.dim,
        dim_characteristic=characteristic.dim,
        dim_leaf=leaf.dim,
        rho_rank=rho_rank,
        coisotropic=contains(c, sharp_ann),
        cosymplectic=total.dim == p.dim and characteristic.dim == 0,
        pointwise_poisson_dirac=characteristic.dim == 0,
        lagrangian_in_leaf=sharp_ann == intersect(c, leaf),
    )
    return record


def characteristic_subspace(p: PoissonVS, c: Subspace) -> Subspace:
    """C intersected with sharp(ann C): the kernel of the leaf form pulled back to C."""
    return intersect(c, sharp_image(p, annihilator(c)))


def induced_bivector(p: PoissonVS, w: Subspace) -> PoissonVS:
    """Bivector induced on a pointwise Poisson-Dirac subspace.

    In the canonical basis of w: sharp_W of a covector is sharp of the
    unique extension annihilating sharp(ann w).  Rejects subspaces with
    nonzero characteristic part, where the extension is not unique.
    """
    if w.dual or w.ambient_dim != p.dim:
        raise SpaceMismatchError("subspace must be primal and match the ambient dimension")
    sharp_ann = sharp_image(p, annihilator(w))
    if intersect(w, sharp_ann).dim != 0:
        raise PreconditionError("subspace is not pointwise Poisson-Dirac: extension of covectors is not well defined")
    d = w.dim
    basis = w.basis
    constraint_rows = basis.entries + sharp_ann.basis.entries
    constraints = MatrixQ.from_rows(constraint_rows, cols=p.dim)
    columns: list[Vector] = []
    for i in range(d):
        target = tuple(Fraction(1 if r == i else 0) for r in range(len(constraint_rows)))
        xi = solve(constraints, target)
        if xi is None:
            raise PropertyViolationError("covector extension system is inconsistent")
        sharp_xi = p.sharp(xi)
        coords = w.coordinates_of(sharp_xi)
        if coords is None:
            raise PropertyViolationError("sharp of the extension left the subspace")
        columns.append(coords)
    entries = tuple(tuple(columns[j][i] for j in range(d)) for i in range(d))
    return PoissonVS(d, MatrixQ(d, d, entries))


@dataclass(frozen=True)
class EmbeddingConditions:
    """The two conditions for c to sit coisotropically inside a
    Poisson-Dirac subspace w: the leaf is covered by w + sharp(ann c),
    and w meets c + sharp(ann c) exactly in c."""

    cond_leaf: bool
    cond_int: bool

    def both(self) -> bool:
        return self.cond_leaf and self.cond_int


def embedding_conditions(p: PoissonVS, c: Subspace, w: Subspace) -> EmbeddingConditions:
    if not contains(w, c):
        raise PreconditionError("c must be contained in w")
    sharp_ann_c = sharp_image(p, annihilator(c))
    cond_leaf = contains(add(w, sharp_ann_c), p.leaf())
    cond_int = intersect(w, add(c, sharp_ann_c)) == c
    result = EmbeddingConditions(cond_leaf, cond_int)
    if result.both():
        # both conditions holding forces these two facts; a failure here
        # means the input data is inconsistent
        if not classify_subspace(p, w).pointwise_poisson_dirac:
            raise PropertyViolationError("conditions hold but w is not pointwise Poisson-Dirac")
        pw = induced_bivector(p, w)
        c_in_w = subspace_in_basis(c, w)
        if not classify_subspace(pw, c_in_w).coisotropic:
            raise PropertyViolationError("conditions hold but c is not coisotropic in the induced bivector")
    return result


def subspace_in_basis(s: Subspace, w: Subspace) -> Subspace:
    """Express a subspace s of w in the canonical basis coordinates of w."""
    rows = []
    for r in s.basis.entries:
        coords = w.coordinates_of(r)
        if coords is None:
            raise PreconditionError("subspace is not contained in the coordinate subspace")
        rows.append(coords)
    return Subspace.span(w.dim, rows)


def greedy_complement(base: Subspace, candidates: Sequence[Vector], label: str = "complement") -> tuple[Vector, ...]:
    """Extend base by candidate vectors in order; returns the added vectors.

    Deterministic: candidates are scanned in the given order and one is
    kept whenever it is independent of everything collected so far.
    """
    current = base
    added: list[Vector] = []
    for v in candidates:
        if not current.contains_vector(v):
            added.append(tuple(v))
            current = add(current, Subspace.span(base.ambient_dim, [v], base.dual))
    return tuple(added)


def standard_basis(n: int) -> tuple[Vector, ...]:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def cosymplectic_extension(p: PoissonVS, c: Subspace) -> Subspace:
    """Smallest-index cosymplectic subspace containing c coisotropically.

    w = c + R with R a complement of c + sharp(ann c) in Q^n completed
    greedily by standard basis vectors, so the output is deterministic.
    """
    if c.dual or c.ambient_dim != p.dim:
        raise SpaceMismatchError("subspace must be primal and match the ambient dimension")
    reach = add(c, sharp_image(p, annihilator(c)))
    r_vectors = greedy_complement(reach, standard_basis(p.dim))
    w = add(c, Subspace.span(p.dim, r_vectors))
    record = classify_subspace(p, w)
    if not record.cosymplectic or not embedding_conditions(p, c, w).both():
        raise PropertyViolationError("constructed extension failed its defining conditions")
    return w


def leaf_form_value(p: PoissonVS, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    """Omega(x, y) for x, y in the leaf O, via Omega(sharp xi, .) = -xi|_O."""
    leaf = p.leaf()
    if not leaf.contains_vector(x) or not leaf.contains_vector(y):
        raise PreconditionError("leaf form is only defined on the image of sharp")
    xi = solve(p.pi, tuple(x))
    if xi is None:
        raise PropertyViolationError("vector claimed to be in the leaf has no sharp preimage")
    return -sum(a * b for a, b in zip(xi, y))


def canonical_iso(p: PoissonVS, c: Subspace, v: Subspace, w: Subspace) -> MatrixQ:
    """Canonical Poisson isomorphism v -> w fixing c.

    v and w must be cosymplectic subspaces containing c coisotropically.
    With A: v -> sharp(ann v) defined by w = {x + Ax}, and
    B(x) = 1/2 sharp_V(Omega(Ax, A.)), the map is x -> x + Ax + Bx,
    returned as a matrix from canonical v-coordinates to canonical
    w-coordinates.
    """
    for name, sub in (("v", v), ("w", w)):
        if not classify_subspace(p, sub).cosymplectic:
            raise PreconditionError(f"{name} is not cosymplectic")
    for name, sub in (("v", v), ("w", w)):
        if not embedding_conditions(p, c, sub).both():
            raise PreconditionError(f"c does not sit coisotropically inside {name}")
    sharp_ann_v = sharp_image(p, annihilator(v))
    # decompose each v-basis vector along w + sharp(ann v); A is minus the second part
    dec_matrix = MatrixQ.from_rows(w.basis.entries + sharp_ann_v.basis.entries, cols=p.dim).transpose()
    a_vectors: list[Vector] = []
    for row in v.basis.entries:
        coeffs = solve(dec_matrix, row)
        if coeffs is None:
            raise PropertyViolationError("sharp(ann v) is not a complement of w")
        tail = coeffs[w.dim:]
        a_vec = tuple(-sum(t * sharp_ann_v.basis.entries[k][j] for k, t in enumerate(tail)) for j in range(p.dim))
        a_vectors.append(a_vec)
    pv = induced_bivector(p, v)
    d = v.dim
    omega_a = [[leaf_form_value(p, a_vectors[i], a_vectors[j]) for j in range(d)] for i in range(d)]
    phi_cols: list[Vector] = []
    for i in range(d):
        eta = tuple(omega_a[i][j] for j in range(d))
        b_coords = pv.sharp(eta)
        b_vec = tuple(
            Fraction(1, 2) * sum(b_coords[k] * v.basis.entries[k][j] for k in range(d)) for j in range(p.dim)
        )
        phi_vec = tuple(v.basis.entries[i][j] + a_vectors[i][j] + b_vec[j] for j in range(p.dim))
        coords = w.coordinates_of(phi_vec)
        if coords is None:
            raise PropertyViolationError("canonical isomorphism image left w")
        phi_cols.append(coords)
    return MatrixQ(w.dim, d, tuple(tuple(phi_cols[j][i] for j in range(d)) for i in range(w.dim)))


@dataclass(frozen=True)
class CoisotropicSplitting:
    """Splitting data P = V + E + E* along a coisotropic subspace.

    `change_of_basis` columns are the model basis (V rows, then E rows,
    then the Lagrangian partner rows F paired by the leaf form); pushing
    the ambient bivector through it yields `model`, which is block
    diagonal: the induced bivector on V plus the standard pairing block.
    """

    e: Subspace
    v: Subspace
    pairing_basis: MatrixQ
    change_of_basis: MatrixQ
    model: PoissonVS


def coisotropic_splitting(p: PoissonVS, m: Subspace, v: Subspace | None = None) -> CoisotropicSplitting:
    record = classify_subspace(p, m)
    if not record.coisotropic:
        raise PreconditionError("subspace is not coisotropic")
    ann_m = annihilator(m)
    e = sharp_image(p, ann_m)
    if e.dim != p.dim - m.dim:
        raise PreconditionError("sharp is not injective on the annihilator (codimension mismatch)")
    if v is None:
        v_rows = greedy_complement(e, m.basis.entries)
        v = Subspace.span(p.dim, v_rows)
    else:
        if not contains(m, v) or intersect(v, e).dim != 0 or v.dim + e.dim != m.dim:
            raise PreconditionError("supplied v is not a complement of e inside m")
    k = e.dim
    sharp_ann_v = sharp_image(p, annihilator(v))
    w0_rows = greedy_complement(e, sharp_ann_v.basis.entries)
    if len(w0_rows) != k:
        raise PropertyViolationError("could not complete e to sharp(ann v)")
    # normalize the pairing Omega(f_J, e_I) = delta_IJ, then flatten to a Lagrangian
    e_rows = e.basis.entries
    pairing = MatrixQ(k, k, tuple(
        tuple(leaf_form_value(p, w0_rows[j], e_rows[i]) for i in range(k)) for j in range(k)
    ))
    dual_coeff = inverse(pairing)
    w_rows = tuple(
        tuple(sum(dual_coeff.entries[j][s] * w0_rows[s][col] for s in range(k)) for col in range(p.dim))
        for j in range(k)
    )
    omega_w = [[leaf_form_value(p, w_rows[i], w_rows[j]) for j in range(k)] for i in range(k)]
    f_rows = tuple(
        tuple(w_rows[j][col] + Fraction(1, 2) * sum(omega_w[j][i] * e_rows[i][col] for i in range(k)) for col in range(p.dim))
        for j in range(k)
    )
    for i in range(k):
        for j in range(k):
            if leaf_form_value(p, f_rows[i], f_rows[j]) != 0:
                raise PropertyViolationError("Lagrangian correction failed")
            expected = Fraction(1 if i == j else 0)
            if leaf_form_value(p, f_rows[i], e_rows[j]) != expected:
                raise PropertyViolationError("pairing normalization failed")
    model_cols = v.basis.entries + e_rows + f_rows
    t = MatrixQ.from_rows(model_cols, cols=p.dim).transpose()
    t_inv = inverse(t)
    pushed = t_inv @ p.pi @ t_inv.transpose()
    model = PoissonVS(p.dim, pushed)
    pv = induced_bivector(p, v) if v.dim else PoissonVS(0, MatrixQ(0, 0, ()))
    expected_model = _block_model(pv, k)
    if pushed != expected_model.pi:
        raise PropertyViolationError("pushed bivector does not match the V + E + E* model")
    return CoisotropicSplitting(
        e=e,
        v=v,
        pairing_basis=MatrixQ.from_rows(f_rows, cols=p.dim),
        change_of_basis=t,
        model=model,
    )


def _block_model(pv: PoissonVS, k: int) -> PoissonVS:
    """Block-diagonal model bivector: pv on the V block, then the k x k pairing."""
    n = pv.dim + 2 * k
    entries = [[Fraction(0)] * n for _ in range(n)]
    for i in range(pv.dim):
        for j in range(pv.dim):
            entries[i][j] = pv.pi.entries[i][j]
    for i in range(k):
        entries[pv.dim + i][pv.dim + k + i] = Fraction(1)
        entries[pv.dim + k + i][pv.dim + i] = Fraction(-1)
    return PoissonVS(n, MatrixQ(n, n, tuple(tuple(r) for r in entries)))


def linear_uniqueness_iso(p1: PoissonVS, p2: PoissonVS, m: Subspace, v: Subspace) -> MatrixQ:
    """Poisson isomorphism Q^n -> Q^n matching two minimal ambient structures.

    Both bivectors must contain m coisotropically with the same sharp
    image of the annihilator (they induce the same pullback structure on
    m); the map is splitting_2 composed with the inverse of splitting_1
    and fixes m pointwise.
    """
    if p1.dim != p2.dim:
        raise PreconditionError("ambient dimensions differ")
    e1 = sharp_image(p1, annihilator(m))
    e2 = sharp_image(p2, annihilator(m))
    if e1 != e2:
        raise PreconditionError("sharp images of the annihilator differ; structures do not match along m")
    from .dirac_linear import from_bivector, pullback

    if pullback(from_bivector(p1), m) != pullback(from_bivector(p2), m):
        raise PreconditionError("the two bivectors induce different pullback structures on m")
    s1 = coisotropic_splitting(p1, m, v)
    s2 = coisotropic_splitting(p2, m, v)
    if s1.model.pi != s2.model.pi:
        raise PropertyViolationError("splitting models disagree despite equal pullback data")
    phi = s2.change_of_basis @ inverse(s1.change_of_basis)
    if phi @ p1.pi @ phi.transpose() != p2.pi:
        raise PropertyViolationError("matching isomorphism failed to intertwine the bivectors")
    for row in m.basis.entries:
        if phi.matvec(row) != row:
            raise PropertyViolationError("matching isomorphism moved a point of m")
    return phi
