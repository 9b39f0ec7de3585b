"""Integral affine maps of the plane with exact, possibly parametric, translations.

A map is a pair ``(A, t)`` acting by ``z -> A z + t`` with ``A`` unimodular;
composition is ``(A, x)(B, y) = (AB, x + A y)``.  Translations are
:class:`LinExpr` values, i.e. rational affine-linear expressions in named
real parameters, so relations and freeness questions that are linear in the
parameters are decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ContractViolation, EvaluationError, ShapeError
from .intlinalg import (
    IntMatrix,
    SolutionSet,
    as_matrix,
    has_eigenvalue_one,
    solve_rational_affine,
    unimodular_matrices,
)

Number = int | Fraction


class LinExpr:
    """``constant + sum(coeff * name)`` with rational coefficients."""

    __slots__ = ("constant", "coeffs")

    def __init__(self, constant: Number = 0, coeffs: Mapping[str, Number] | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[str, Fraction] = {}
        for name, c in items:
            merged[name] = merged.get(name, Fraction(0)) + Fraction(c)
        self.constant = Fraction(constant)
        self.coeffs = tuple(sorted((k, v) for k, v in merged.items() if v != 0))

    @classmethod
    def var(cls, name: str, coeff: Number = 1) -> "LinExpr":
        return cls(0, {name: coeff})

    @classmethod
    def coerce(cls, value) -> "LinExpr":
        if isinstance(value, LinExpr):
            return value
        if isinstance(value, str):
            return cls.var(value)
        return cls(value)

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.coeffs)

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def coefficient(self, name: str) -> Fraction:
        return dict(self.coeffs).get(name, Fraction(0))

    def evaluate(self, sigma: Mapping[str, Number]) -> Fraction:
        total = self.constant
        for name, c in self.coeffs:
            if name not in sigma:
                raise EvaluationError(name)
            total += c * Fraction(sigma[name])
        return total

    def substitute(self, values: Mapping[str, "LinExpr | Number"]) -> "LinExpr":
        out = LinExpr(self.constant)
        for name, c in self.coeffs:
            out = out + (LinExpr.coerce(values[name]) * c if name in values else LinExpr.var(name, c))
        return out

    def __add__(self, other) -> "LinExpr":
        other = LinExpr.coerce(other) if not isinstance(other, LinExpr) else other
        return LinExpr(self.constant + other.constant, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self) -> "LinExpr":
        return LinExpr(-self.constant, [(k, -v) for k, v in self.coeffs])

    def __sub__(self, other) -> "LinExpr":
        return self + (-LinExpr.coerce(other))

    def __rsub__(self, other) -> "LinExpr":
        return LinExpr.coerce(other) - self

    def __mul__(self, k) -> "LinExpr":
        if isinstance(k, LinExpr):
            if k.is_constant:
                k = k.constant
            elif self.is_constant:
                return k * self.constant
            else:
                raise ContractViolation("product of two non-constant expressions is not linear")
        k = Fraction(k)
        return LinExpr(self.constant * k, [(n, v * k) for n, v in self.coeffs])

    __rmul__ = __mul__

    def __truediv__(self, k) -> "LinExpr":
        return self * (1 / Fraction(k))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LinExpr(other)
        if not isinstance(other, LinExpr):
            return NotImplemented
        return self.constant == other.constant and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.constant, self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.coeffs) or self.constant != 0

    def __repr__(self) -> str:
        return f"LinExpr({self})"

    def __str__(self) -> str:
        parts = []
        for name, c in self.coeffs:
            if c == 1:
                term = name
            elif c == -1:
                term = f"-{name}"
            else:
                term = f"{c}*{name}"
            parts.append(term)
        if self.constant != 0 or not parts:
            parts.append(str(self.constant))
        text = "+".join(parts)
        return text.replace("+-", "-")


def vec(*items) -> tuple[LinExpr, ...]:
    """Translation vector from numbers, parameter names and LinExprs."""
    return tuple(LinExpr.coerce(x) for x in items)


def _matvec(m: IntMatrix, t: Sequence[LinExpr]) -> tuple[LinExpr, ...]:
    out = []
    for r in m:
        acc = LinExpr()
        for a, x in zip(r, t):
            if a:
                acc = acc + x * a
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class ParamAffineMap:
    linear: IntMatrix
    translation: tuple[LinExpr, ...]

    def __post_init__(self):
        lin = as_matrix(self.linear)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tuple(LinExpr.coerce(x) for x in self.translation))
        if not lin.is_square or lin.nrows != len(self.translation):
            raise ShapeError("linear part and translation have incompatible sizes")
        if not lin.is_unimodular():
            raise ContractViolation(f"linear part {lin} is not unimodular")

    @classmethod
    def identity(cls, n: int = 2) -> "ParamAffineMap":
        return cls(IntMatrix.identity(n), (LinExpr(),) * n)

    @classmethod
    def translation_by(cls, *t) -> "ParamAffineMap":
        return cls(IntMatrix.identity(len(t)), vec(*t))

    @classmethod
    def linear_map(cls, m) -> "ParamAffineMap":
        m = as_matrix(m)
        return cls(m, (LinExpr(),) * m.nrows)

    @property
    def dim(self) -> int:
        return self.linear.nrows

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(sorted({p for t in self.translation for p in t.parameters}))

    @property
    def is_numeric(self) -> bool:
        return all(t.is_constant for t in self.translation)

    def __matmul__(self, other: "ParamAffineMap") -> "ParamAffineMap":
        return compose(self, other)

    def evaluate(self, sigma: Mapping[str, Number]) -> "ParamAffineMap":
        return ParamAffineMap(self.linear, tuple(LinExpr(t.evaluate(sigma)) for t in self.translation))

    def substitute(self, values: Mapping[str, LinExpr | Number]) -> "ParamAffineMap":
        return ParamAffineMap(self.linear, tuple(t.substitute(values) for t in self.translation))

    def apply(self, z: Sequence[Number], sigma: Mapping[str, Number] | None = None) -> tuple[Fraction, ...]:
        t = [x.evaluate(sigma or {}) for x in self.translation]
        lz = self.linear @ [Fraction(c) for c in z]
        return tuple(a + b for a, b in zip(lz, t))

    def __str__(self) -> str:
        return f"({self.linear}; " + ",".join(str(t) for t in self.translation) + ")"


def compose(f: ParamAffineMap, g: ParamAffineMap) -> ParamAffineMap:
    """``f . g`` as a map: first ``g`` then ``f``."""
    if f.dim != g.dim:
        raise ShapeError("maps act on spaces of different dimension")
    shifted = _matvec(f.linear, g.translation)
    return ParamAffineMap(f.linear @ g.linear, tuple(a + b for a, b in zip(f.translation, shifted)))


def inverse(f: ParamAffineMap) -> ParamAffineMap:
    inv = f.linear.inverse()
    if inv is None:
        raise ContractViolation("linear part is not unimodular")
    return ParamAffineMap(inv, tuple(-x for x in _matvec(inv, f.translation)))


def conjugate(f: ParamAffineMap, g: ParamAffineMap) -> ParamAffineMap:
    """``g f g^-1``."""
    return compose(compose(g, f), inverse(g))


def power(f: ParamAffineMap, k: int) -> ParamAffineMap:
    if k < 0:
        return power(inverse(f), -k)
    result = ParamAffineMap.identity(f.dim)
    base = f
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def fixed_point_set(f: ParamAffineMap, sigma: Mapping[str, Number] | None = None) -> SolutionSet:
    """Points ``z`` with ``f(z) = z``, i.e. solutions of ``(L - I) z = -t``."""
    sigma = sigma or {}
    t = [x.evaluate(sigma) for x in f.translation]
    return solve_rational_affine(f.linear - IntMatrix.identity(f.dim), [-x for x in t])


def hirsch_consistency_scan(entry_bound: int, translation_grid: Iterable[Sequence[Number]]) -> list:
    """Exhaustive search for fixed-point-free maps whose linear part lacks eigenvalue 1.

    Every unimodular 2x2 matrix with entries bounded by ``entry_bound`` is
    paired with every grid translation.  The returned list of ``(C, z)`` pairs
    is empty whenever the principle holds on the scanned set.
    """
    if entry_bound < 1:
        raise ContractViolation("entry_bound must be at least 1")
    grid = [tuple(Fraction(c) for c in z) for z in translation_grid]
    bad = []
    for c in unimodular_matrices(entry_bound):
        eig1 = has_eigenvalue_one(c)
        for z in grid:
            if fixed_point_set(ParamAffineMap(c, z)).is_empty and not eig1:
                bad.append((c, z))
    return bad


@dataclass(frozen=True)
class TraceConstraint:
    applicable: bool
    expected_trace: int | None


def trace_constraint(m) -> TraceConstraint:
    """Trace forced on a 2x2 unimodular matrix by having eigenvalue 1.

    With eigenvalues ``1`` and ``det``, the trace is ``1 + det``.
    """
    m = as_matrix(m)
    if m.shape != (2, 2):
        raise ShapeError("2x2 matrix expected")
    if not has_eigenvalue_one(m):
        return TraceConstraint(False, None)
    return TraceConstraint(True, 1 + m.det())


def grid(values: Iterable[Number]) -> list[tuple[Fraction, Fraction]]:
    vals = [Fraction(v) for v in values]
    return [(a, b) for a in vals for b in vals]
