"""Multivariate polynomial algebra over Q.

Polynomials are term maps from exponent vectors to nonzero Fraction
coefficients, over an explicit ordered variable context.  Arithmetic,
partial derivatives, evaluation at rational points, and composition
are all exact; printing and parsing use one fixed grammar:

    terms joined by '+' and '-', coefficients as integers or 'p/q',
    variables like x1, t2, p1, y3, exponents via '^', products via '*',
    e.g. "3/2*x1^2*x2 - x3".

Terms are kept in graded-lexicographic order, so equal polynomials
print identically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import SpaceMismatchError
from .rational_linalg import MatrixQ, Vector, rat

_VAR_RE = re.compile(r"[a-zA-Z]+[0-9]+")
_TOKEN_RE = re.compile(r"\s*([+-]|\*|\^|[a-zA-Z]+[0-9]+|[0-9]+(?:/[0-9]+)?)")


def _grlex_key(exponents: tuple[int, ...]) -> tuple:
    return (sum(exponents), exponents)


@dataclass(frozen=True)
class Poly:
    """Polynomial over Q in an ordered tuple of named variables."""

    variables: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    @staticmethod
    def make(variables: Sequence[str], terms: Mapping[tuple[int, ...], Fraction]) -> Poly:
        variables = tuple(variables)
        cleaned = {tuple(e): Fraction(c) for e, c in terms.items() if c != 0}
        for e in cleaned:
            if len(e) != len(variables) or any(k < 0 for k in e):
                raise ValueError(f"bad exponent vector {e} for variables {variables}")
        ordered = tuple(sorted(cleaned.items(), key=lambda t: _grlex_key(t[0]), reverse=True))
        return Poly(variables, ordered)

    @staticmethod
    def zero(variables: Sequence[str]) -> Poly:
        return Poly.make(variables, {})

    @staticmethod
    def constant(variables: Sequence[str], c: int | str | Fraction) -> Poly:
        n = len(variables)
        return Poly.make(variables, {(0,) * n: rat(c)})

    @staticmethod
    def variable(variables: Sequence[str], name: str) -> Poly:
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r} (context: {variables})")
        e = tuple(1 if v == name else 0 for v in variables)
        return Poly.make(variables, {e: Fraction(1)})

    def term_map(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e, _ in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms[0][1] if self.terms else Fraction(0)

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def _check_context(self, other: Poly) -> None:
        if self.variables != other.variables:
            raise SpaceMismatchError(f"variable contexts differ: {self.variables} vs {other.variables}")

    def __add__(self, other: Poly) -> Poly:
        self._check_context(other)
        out = self.term_map()
        for e, c in other.terms:
            out[e] = out.get(e, Fraction(0)) + c
        return Poly.make(self.variables, out)

    def __neg__(self) -> Poly:
        return Poly(self.variables, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        self._check_context(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly.make(self.variables, out)

    def scale(self, c: int | str | Fraction) -> Poly:
        c = rat(c)
        return Poly.make(self.variables, {e: c * coeff for e, coeff in self.terms})

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.constant(self.variables, 1)
        for _ in range(k):
            result = result * self
        return result

    def partial(self, var: str) -> Poly:
        """Partial derivative with respect to a named variable."""
        if var not in self.variables:
            raise ValueError(f"unknown variable {var!r} (context: {self.variables})")
        idx = self.variables.index(var)
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms:
            if e[idx] == 0:
                continue
            de = tuple(k - 1 if i == idx else k for i, k in enumerate(e))
            out[de] = out.get(de, Fraction(0)) + c * e[idx]
        return Poly.make(self.variables, out)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != len(self.variables):
            raise SpaceMismatchError(f"point length {len(point)} != variable count {len(self.variables)}")
        total = Fraction(0)
        for e, c in self.terms:
            value = c
            for base, k in zip(point, e):
                if k:
                    value *= base ** k
            total += value
        return total

    def substitute(self, values: Mapping[str, "Poly"]) -> Poly:
        """Replace every variable by a polynomial (all in one shared context)."""
        missing = [v for v in self.variables if v not in values]
        if missing:
            raise ValueError(f"no substitution given for {missing}")
        contexts = {p.variables for p in values.values()}
        if len(contexts) != 1:
            raise SpaceMismatchError("substitution polynomials must share one variable context")
        target_vars = next(iter(contexts))
        result = Poly.zero(target_vars)
        for e, c in self.terms:
            term = Poly.constant(target_vars, c)
            for var, k in zip(self.variables, e):
                if k:
                    term = term * values[var] ** k
            result = result + term
        return result

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for n, (e, c) in enumerate(self.terms):
            factors = [
                v if k == 1 else f"{v}^{k}"
                for v, k in zip(self.variables, e)
                if k
            ]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if n == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(pieces)

    @staticmethod
    def parse(text: str, variables: Sequence[str]) -> Poly:
        """Parse the term grammar; rejects anything outside it."""
        variables = tuple(variables)
        tokens = _tokenize(text)
        if not tokens:
            raise ValueError("empty polynomial string")
        out: dict[tuple[int, ...], Fraction] = {}
        pos = 0
        sign = Fraction(1)
        if tokens[pos] in ("+", "-"):
            sign = Fraction(-1) if tokens[pos] == "-" else Fraction(1)
            pos += 1
        while True:
            coeff, exps, pos = _parse_term(tokens, pos, variables)
            e = tuple(exps)
            out[e] = out.get(e, Fraction(0)) + sign * coeff
            if pos == len(tokens):
                break
            if tokens[pos] not in ("+", "-"):
                raise ValueError(f"expected '+' or '-' at token {pos} of {text!r}")
            sign = Fraction(-1) if tokens[pos] == "-" else Fraction(1)
            pos += 1
        return Poly.make(variables, out)


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"cannot tokenize {text!r} at position {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def _parse_term(tokens: list[str], pos: int, variables: tuple[str, ...]) -> tuple[Fraction, list[int], int]:
    coeff = Fraction(1)
    exps = [0] * len(variables)
    saw_factor = False
    while pos < len(tokens):
        tok = tokens[pos]
        if tok in ("+", "-"):
            break
        if tok == "*":
            if not saw_factor:
                raise ValueError("term cannot start with '*'")
            pos += 1
            continue
        if saw_factor and tokens[pos - 1] != "*":
            raise ValueError(f"missing '*' before {tok!r}")
        if _VAR_RE.fullmatch(tok):
            if tok not in variables:
                raise ValueError(f"unknown variable {tok!r} (context: {variables})")
            idx = variables.index(tok)
            power = 1
            if pos + 1 < len(tokens) and tokens[pos + 1] == "^":
                if pos + 2 >= len(tokens) or not tokens[pos + 2].isdigit():
                    raise ValueError("'^' must be followed by a nonnegative integer")
                power = int(tokens[pos + 2])
                pos += 2
            exps[idx] += power
            pos += 1
        else:
            coeff *= Fraction(tok)
            pos += 1
        saw_factor = True
    if not saw_factor:
        raise ValueError("empty term")
    return coeff, exps, pos


@dataclass(frozen=True)
class PolyMap:
    """Polynomial map Q^k -> Q^n: one component per target coordinate."""

    source_vars: tuple[str, ...]
    components: tuple[Poly, ...]

    def __post_init__(self) -> None:
        for comp in self.components:
            if comp.variables != self.source_vars:
                raise SpaceMismatchError("component variables do not match the source context")

    @staticmethod
    def parse(texts: Sequence[str], source_vars: Sequence[str]) -> PolyMap:
        source_vars = tuple(source_vars)
        return PolyMap(source_vars, tuple(Poly.parse(t, source_vars) for t in texts))

    @staticmethod
    def identity(variables: Sequence[str]) -> PolyMap:
        variables = tuple(variables)
        return PolyMap(variables, tuple(Poly.variable(variables, v) for v in variables))

    @property
    def source_dim(self) -> int:
        return len(self.source_vars)

    @property
    def target_dim(self) -> int:
        return len(self.components)

    def evaluate(self, point: Sequence[Fraction]) -> Vector:
        return tuple(comp.evaluate(point) for comp in self.components)

    def jacobian(self) -> tuple[tuple[Poly, ...], ...]:
        """Symbolic Jacobian: entry [i][j] = d components[i] / d source_vars[j]."""
        return tuple(tuple(comp.partial(v) for v in self.source_vars) for comp in self.components)

    def jacobian_at(self, point: Sequence[Fraction]) -> MatrixQ:
        rows = tuple(tuple(entry.evaluate(point) for entry in row) for row in self.jacobian())
        return MatrixQ(self.target_dim, self.source_dim, rows)

    def is_identity(self) -> bool:
        return self == PolyMap.identity(self.source_vars)


def compose(outer: Poly, inner: PolyMap) -> Poly:
    """Substitute inner's components for outer's variables."""
    if len(outer.variables) != inner.target_dim:
        raise SpaceMismatchError(
            f"outer has {len(outer.variables)} variables but inner targets dimension {inner.target_dim}"
        )
    values = dict(zip(outer.variables, inner.components))
    return outer.substitute(values)


def compose_map(outer: PolyMap, inner: PolyMap) -> PolyMap:
    if outer.source_dim != inner.target_dim:
        raise SpaceMismatchError("map composition arity mismatch")
    return PolyMap(inner.source_vars, tuple(compose(comp, inner) for comp in outer.components))


def ambient_variables(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n))


def parameter_variables(k: int) -> tuple[str, ...]:
    return tuple(f"t{i + 1}" for i in range(k))


def fiber_variables(k: int) -> tuple[str, ...]:
    return tuple(f"p{i + 1}" for i in range(k))


def poly_matrix_det(entries: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square polynomial matrix by cofactor expansion."""
    size = len(entries)
    if size == 0:
        raise ValueError("empty matrix has no determinant")
    variables = entries[0][0].variables
    if size == 1:
        return entries[0][0]
    total = Poly.zero(variables)
    for j in range(size):
        minor = [row[:j] + row[j + 1:] for row in [list(r) for r in entries[1:]]]
        cofactor = poly_matrix_det(minor)
        piece = entries[0][j] * cofactor
        total = total + (piece if j % 2 == 0 else -piece)
    return total


def poly_matrix_inverse(entries: Sequence[Sequence[Poly]]) -> tuple[tuple[Poly, ...], ...]:
    """Inverse of a polynomial matrix whose determinant is a nonzero constant.

    Rejects non-constant determinants: those inverses leave the
    polynomial ring, and this package never approximates.
    """
    size = len(entries)
    det = poly_matrix_det(entries)
    if not det.is_constant() or det.constant_value() == 0:
        raise ValueError(f"matrix determinant {det} is not a nonzero constant; inverse is not polynomial")
    inv_det = 1 / det.constant_value()
    rows = [list(r) for r in entries]
    adj = [[Poly.zero(rows[0][0].variables) for _ in range(size)] for _ in range(size)]
    for i in range(size):
        for j in range(size):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(rows) if k != i]
            if size == 1:
                cof = Poly.constant(rows[0][0].variables, 1)
            else:
                cof = poly_matrix_det(minor)
            signed = cof if (i + j) % 2 == 0 else -cof
            adj[j][i] = signed.scale(inv_det)
    return tuple(tuple(r) for r in adj)
