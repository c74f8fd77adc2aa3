"""Polynomial bivector fields and two-form fields on coordinate patches.

Bivector fields are antisymmetric matrices of polynomials; the Jacobi
check is fully symbolic (a polynomial identity, not sampled), pushforward
under a polynomial diffeomorphism requires an explicit polynomial
inverse, and two-forms get a symbolic exterior derivative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import PreconditionError, SpaceMismatchError
from .poisson_linear import PoissonVS
from .polynomials import Poly, PolyMap, compose, compose_map
from .rational_linalg import MatrixQ


def _antisymmetric_grid(variables: tuple[str, ...], upper: Mapping[tuple[int, int], Poly]) -> tuple[tuple[Poly, ...], ...]:
    n = len(variables)
    zero = Poly.zero(variables)
    grid = [[zero] * n for _ in range(n)]
    for (i, j), poly in upper.items():
        if not 0 <= i < j < n:
            raise ValueError(f"upper-triangular index out of range: {(i, j)}")
        if poly.variables != variables:
            raise SpaceMismatchError("entry polynomial has the wrong variable context")
        grid[i][j] = poly
        grid[j][i] = -poly
    return tuple(tuple(r) for r in grid)


@dataclass(frozen=True)
class BivectorField:
    """Antisymmetric n x n matrix of polynomials in the patch coordinates."""

    variables: tuple[str, ...]
    entries: tuple[tuple[Poly, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.variables)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise SpaceMismatchError("entry grid shape does not match the variable count")
        for i in range(n):
            for j in range(i, n):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise PreconditionError(f"entries ({i},{j}) and ({j},{i}) are not antisymmetric")

    @staticmethod
    def from_upper(variables: Sequence[str], upper: Mapping[tuple[int, int], Poly | str]) -> BivectorField:
        """Build from entries above the diagonal (0-based indices i < j)."""
        variables = tuple(variables)
        parsed = {
            ij: (Poly.parse(p, variables) if isinstance(p, str) else p) for ij, p in upper.items()
        }
        return BivectorField(variables, _antisymmetric_grid(variables, parsed))

    @property
    def dim(self) -> int:
        return len(self.variables)

    def upper_entries(self) -> dict[tuple[int, int], Poly]:
        n = self.dim
        return {(i, j): self.entries[i][j] for i in range(n) for j in range(i + 1, n) if not self.entries[i][j].is_zero()}

    def at(self, point: Sequence[Fraction]) -> PoissonVS:
        n = self.dim
        values = tuple(tuple(self.entries[i][j].evaluate(point) for j in range(n)) for i in range(n))
        return PoissonVS(n, MatrixQ(n, n, values))

    def is_constant(self) -> bool:
        return all(e.is_constant() for row in self.entries for e in row)

    def permuted(self, order: Sequence[int], new_variables: Sequence[str] | None = None) -> BivectorField:
        """Relabel coordinates: new coordinate a is the old coordinate order[a]."""
        n = self.dim
        if sorted(order) != list(range(n)):
            raise ValueError("order must be a permutation of the coordinate indices")
        new_vars = tuple(new_variables) if new_variables is not None else tuple(self.variables[a] for a in order)
        # old variable order[a] becomes the a-th new variable
        substitution = {
            self.variables[old]: Poly.variable(new_vars, new_vars[a]) for a, old in enumerate(order)
        }
        grid = tuple(
            tuple(self.entries[order[a]][order[b]].substitute(substitution) for b in range(n)) for a in range(n)
        )
        return BivectorField(new_vars, grid)


@dataclass(frozen=True)
class TwoFormField:
    """Antisymmetric matrix of polynomials: sum_{i<j} B_ij dx_i ^ dx_j."""

    variables: tuple[str, ...]
    entries: tuple[tuple[Poly, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.variables)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise SpaceMismatchError("entry grid shape does not match the variable count")
        for i in range(n):
            for j in range(i, n):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise PreconditionError(f"entries ({i},{j}) and ({j},{i}) are not antisymmetric")

    @staticmethod
    def from_upper(variables: Sequence[str], upper: Mapping[tuple[int, int], Poly | str]) -> TwoFormField:
        variables = tuple(variables)
        parsed = {
            ij: (Poly.parse(p, variables) if isinstance(p, str) else p) for ij, p in upper.items()
        }
        return TwoFormField(variables, _antisymmetric_grid(variables, parsed))

    @property
    def dim(self) -> int:
        return len(self.variables)

    def upper_entries(self) -> dict[tuple[int, int], Poly]:
        n = self.dim
        return {(i, j): self.entries[i][j] for i in range(n) for j in range(i + 1, n) if not self.entries[i][j].is_zero()}

    def at(self, point: Sequence[Fraction]) -> MatrixQ:
        n = self.dim
        return MatrixQ(n, n, tuple(tuple(self.entries[i][j].evaluate(point) for j in range(n)) for i in range(n)))

    def __sub__(self, other: TwoFormField) -> TwoFormField:
        if self.variables != other.variables:
            raise SpaceMismatchError("two-forms live on different patches")
        n = self.dim
        return TwoFormField(self.variables, tuple(
            tuple(self.entries[i][j] - other.entries[i][j] for j in range(n)) for i in range(n)
        ))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)


def jacobiator(pi: BivectorField) -> dict[tuple[int, int, int], Poly]:
    """Trilinear obstruction tensor, indexed by i < j < k.

    J^{ijk} = sum_l (Pi^{il} d_l Pi^{jk} + Pi^{jl} d_l Pi^{ki} + Pi^{kl} d_l Pi^{ij}).
    """
    n = pi.dim
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                out[(i, j, k)] = jacobiator_component(pi, i, j, k)
    return out


def jacobiator_component(pi: BivectorField, i: int, j: int, k: int) -> Poly:
    total = Poly.zero(pi.variables)
    for l, var in enumerate(pi.variables):
        total = total + pi.entries[i][l] * pi.entries[j][k].partial(var)
        total = total + pi.entries[j][l] * pi.entries[k][i].partial(var)
        total = total + pi.entries[k][l] * pi.entries[i][j].partial(var)
    return total


def is_poisson(pi: BivectorField) -> bool:
    return all(p.is_zero() for p in jacobiator(pi).values())


def nonzero_jacobiator_components(pi: BivectorField) -> dict[tuple[int, int, int], Poly]:
    return {ijk: p for ijk, p in jacobiator(pi).items() if not p.is_zero()}


def pushforward(pi: BivectorField, phi: PolyMap, phi_inv: PolyMap) -> BivectorField:
    """Push pi forward along a polynomial diffeomorphism with known inverse.

    (phi_* pi)^{ab} = (sum_ij d_i phi^a d_j phi^b pi^{ij}) composed with
    phi^{-1}.  Both composition identities are verified symbolically
    before any transport happens.
    """
    n = pi.dim
    if phi.source_dim != n or phi.target_dim != n or phi_inv.source_dim != n or phi_inv.target_dim != n:
        raise SpaceMismatchError("diffeomorphism dimensions do not match the field")
    if not compose_map(phi, phi_inv).is_identity() or not compose_map(phi_inv, phi).is_identity():
        raise PreconditionError("supplied maps are not mutually inverse")
    jac = phi.jacobian()
    transported = [[Poly.zero(pi.variables) for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            acc = Poly.zero(pi.variables)
            for i in range(n):
                for j in range(n):
                    entry = pi.entries[i][j]
                    if entry.is_zero():
                        continue
                    acc = acc + jac[a][i] * jac[b][j] * entry
            transported[a][b] = acc
            transported[b][a] = -acc
    target_vars = phi_inv.source_vars
    composed = tuple(
        tuple(compose(transported[a][b], phi_inv) if not transported[a][b].is_zero() else Poly.zero(target_vars)
              for b in range(n))
        for a in range(n)
    )
    return BivectorField(target_vars, composed)


def exterior_derivative(b: TwoFormField) -> dict[tuple[int, int, int], Poly]:
    """(dB)_{ijk} = d_i B_{jk} - d_j B_{ik} + d_k B_{ij}, indexed i < j < k."""
    n = b.dim
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                v = b.variables
                out[(i, j, k)] = (
                    b.entries[j][k].partial(v[i])
                    - b.entries[i][k].partial(v[j])
                    + b.entries[i][j].partial(v[k])
                )
    return out


def is_closed(b: TwoFormField) -> bool:
    return all(p.is_zero() for p in exterior_derivative(b).values())


def verify_split_form(pi: BivectorField, k: int) -> bool:
    """Check for the split shape in coordinates ordered (q_1..q_k, p_1..p_k, y_*).

    True iff the q-p block is the constant identity pairing, all other
    blocks touching q or p vanish, and the y-y block only involves the
    y variables.
    """
    n = pi.dim
    if 2 * k > n:
        raise PreconditionError(f"2k = {2 * k} exceeds the dimension {n}")
    one = Poly.constant(pi.variables, 1)
    for i in range(k):
        for j in range(k):
            expected = one if i == j else Poly.zero(pi.variables)
            if pi.entries[i][k + j] != expected:
                return False
            if not pi.entries[i][j].is_zero() or not pi.entries[k + i][k + j].is_zero():
                return False
    for i in range(2 * k):
        for j in range(2 * k, n):
            if not pi.entries[i][j].is_zero():
                return False
    for i in range(2 * k, n):
        for j in range(2 * k, n):
            for e, _ in pi.entries[i][j].terms:
                if any(e[t] != 0 for t in range(2 * k)):
                    return False
    return True
