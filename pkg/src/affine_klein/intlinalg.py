"""Exact integer and rational linear algebra.

Everything here works with Python integers and :class:`fractions.Fraction`,
so there is no overflow and no rounding.  The central routine is
:func:`smith_normal_form`; cokernels and homology of integer cochain
complexes are read off from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import ContractViolation, ShapeError


def _as_int(value) -> int:
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    raise TypeError(f"non-integer matrix entry {value!r}")


class IntMatrix:
    """Immutable integer matrix with row-major storage."""

    __slots__ = ("_rows", "_nrows", "_ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(_as_int(x) for x in row) for row in rows)
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise ShapeError("ragged rows")
            width = widths.pop()
            if ncols is not None and ncols != width:
                raise ShapeError("ncols does not match row width")
        else:
            width = ncols or 0
        self._rows = data
        self._nrows = len(data)
        self._ncols = width
        self._hash = None

    # construction helpers

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls([[0] * n for _ in range(m)], ncols=n)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        k = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(k)] for i in range(k)], ncols=k)

    @classmethod
    def hstack(cls, *blocks: "IntMatrix") -> "IntMatrix":
        m = blocks[0].nrows
        if any(b.nrows != m for b in blocks):
            raise ShapeError("hstack needs equal row counts")
        return cls(
            [sum((b._rows[i] for b in blocks), ()) for i in range(m)],
            ncols=sum(b.ncols for b in blocks),
        )

    @classmethod
    def vstack(cls, *blocks: "IntMatrix") -> "IntMatrix":
        n = blocks[0].ncols
        if any(b.ncols != n for b in blocks):
            raise ShapeError("vstack needs equal column counts")
        return cls([row for b in blocks for row in b._rows], ncols=n)

    # basic protocol

    @property
    def shape(self) -> tuple[int, int]:
        return self._nrows, self._ncols

    @property
    def nrows(self) -> int:
        return self._nrows

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def is_square(self) -> bool:
        return self._nrows == self._ncols

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self._nrows and 0 <= j < self._ncols):
            raise ContractViolation(f"entry {index} outside {self.shape} matrix")
        return self._rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def entries(self) -> Iterable[int]:
        for r in self._rows:
            yield from r

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._rows))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in self._rows) + "]"

    # arithmetic

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self._ncols != other._nrows:
                raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other._rows)) if other._nrows else [()] * other._ncols
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows],
                ncols=other._ncols,
            )
        vec = tuple(other)
        if len(vec) != self._ncols:
            raise ShapeError("vector length does not match column count")
        return tuple(sum((a * v for a, v in zip(r, vec)), 0 * vec[0] if vec else 0) for r in self._rows)

    def _check_same_shape(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], ncols=self._ncols
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], ncols=self._ncols
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._rows], ncols=self._ncols)

    def __mul__(self, k: int) -> "IntMatrix":
        k = _as_int(k)
        return IntMatrix([[k * a for a in r] for r in self._rows], ncols=self._ncols)

    __rmul__ = __mul__

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([list(c) for c in zip(*self._rows)], ncols=self._nrows) if self._rows else IntMatrix.zeros(self._ncols, 0)

    def __pow__(self, k: int) -> "IntMatrix":
        if not self.is_square:
            raise ShapeError("power of non-square matrix")
        if k < 0:
            inv = self.inverse()
            if inv is None:
                raise ContractViolation("negative power of a non-unimodular matrix")
            return inv ** (-k)
        result = IntMatrix.identity(self._nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    # invariants

    def det(self) -> int:
        if not self.is_square:
            raise ShapeError("determinant of non-square matrix")
        return _bareiss_det([list(r) for r in self._rows])

    def trace(self) -> int:
        if not self.is_square:
            raise ShapeError("trace of non-square matrix")
        return sum(self._rows[i][i] for i in range(self._nrows))

    def is_unimodular(self) -> bool:
        return self.is_square and abs(self.det()) == 1

    def inverse(self) -> "IntMatrix | None":
        """Inverse over the integers, or ``None`` when ``|det| != 1``."""
        if not self.is_square:
            raise ShapeError("inverse of non-square matrix")
        if abs(self.det()) != 1:
            return None
        inv = rational_inverse([[Fraction(x) for x in r] for r in self._rows])
        return IntMatrix(inv, ncols=self._ncols)

    def is_orthogonal(self) -> bool:
        return self.is_square and self @ self.T == IntMatrix.identity(self._nrows)


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_inverse(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse of a square rational matrix; raises if singular."""
    n = len(rows)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ContractViolation("singular matrix has no inverse")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def as_matrix(value) -> IntMatrix:
    return value if isinstance(value, IntMatrix) else IntMatrix(value)


# --------------------------------------------------------------------------
# simple queries


@dataclass(frozen=True)
class MatrixBasics:
    det: int
    trace: int
    unimodular: bool
    inverse: IntMatrix | None


def matrix_basics(m) -> MatrixBasics:
    m = as_matrix(m)
    if not m.is_square:
        raise ShapeError(f"expected a square matrix, got {m.shape}")
    d = m.det()
    return MatrixBasics(det=d, trace=m.trace(), unimodular=abs(d) == 1, inverse=m.inverse())


def has_eigenvalue_one(m) -> bool:
    m = as_matrix(m)
    if not m.is_square:
        raise ShapeError(f"expected a square matrix, got {m.shape}")
    return (m - IntMatrix.identity(m.nrows)).det() == 0


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == S`` with U, V unimodular and S diagonal."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.factors if d != 0)


def smith_normal_form(m) -> SmithDecomposition:
    m = as_matrix(m)
    rows, cols = m.shape
    a = m.tolist()
    u = IntMatrix.identity(rows).tolist()
    v = IntMatrix.identity(cols).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    factors = tuple(a[i][i] for i in range(min(rows, cols)))
    return SmithDecomposition(
        U=IntMatrix(u, ncols=rows), S=IntMatrix(a, ncols=cols), V=IntMatrix(v, ncols=cols), factors=factors
    )


# --------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FGAbelianGroup:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ...`` and every ``d_i >= 2``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ContractViolation("negative free rank")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ContractViolation(f"invariant factor {d} is not >= 2")
            if i and d % self.torsion[i - 1]:
                raise ContractViolation(f"invariant factors {self.torsion} break the divisibility chain")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "FGAbelianGroup":
        """Canonical form of a direct sum of cyclic groups ``Z/o`` (``o = 0`` meaning ``Z``)."""
        orders = [abs(o) for o in orders]
        free = free_rank + sum(1 for o in orders if o == 0)
        finite = [o for o in orders if o not in (0, 1)]
        if not finite:
            return cls(free, ())
        snf = smith_normal_form(IntMatrix.diag(finite))
        return cls(free, tuple(d for d in snf.factors if d > 1))

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


def cokernel(m) -> FGAbelianGroup:
    """``Z^rows / column-span(m)``."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    nonzero = [d for d in snf.factors if d != 0]
    return FGAbelianGroup(m.nrows - len(nonzero), tuple(d for d in nonzero if d > 1))


def kernel_basis(m) -> IntMatrix:
    """Columns form a basis of the (saturated) integer kernel of ``m``."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    r = snf.rank
    return IntMatrix([row[r:] for row in snf.V], ncols=m.ncols - r)


def homology(d_in, d_out) -> FGAbelianGroup:
    """``ker(d_out) / im(d_in)`` for integer maps with ``d_out @ d_in == 0``."""
    d_in, d_out = as_matrix(d_in), as_matrix(d_out)
    if d_out.ncols != d_in.nrows:
        raise ShapeError("composable maps expected")
    if d_out @ d_in != IntMatrix.zeros(d_out.nrows, d_in.ncols):
        raise ContractViolation("d_out @ d_in is not zero")
    snf = smith_normal_form(d_out)
    r = snf.rank
    coords = snf.V.inverse() @ d_in
    # first r coordinates vanish because the image lies in the kernel
    sub = IntMatrix([coords.row(i) for i in range(r, coords.nrows)], ncols=d_in.ncols)
    return cokernel(sub)


# --------------------------------------------------------------------------
# rational affine systems


@dataclass(frozen=True)
class SolutionSet:
    """Solutions of ``L z = v`` over the rationals.

    ``dimension`` is -1 for the empty set.  For nonempty sets ``point`` is one
    solution and ``directions`` spans the associated linear space.
    """

    ambient: int
    dimension: int
    point: tuple[Fraction, ...] | None = None
    directions: tuple[tuple[Fraction, ...], ...] = ()

    @property
    def is_empty(self) -> bool:
        return self.dimension < 0

    @property
    def kind(self) -> str:
        if self.dimension < 0:
            return "empty"
        if self.dimension == 0:
            return "point"
        if self.dimension == self.ambient:
            return "whole-plane" if self.ambient == 2 else "whole-space"
        if self.dimension == 1:
            return "affine-line"
        return "affine-subspace"

    def contains(self, z: Sequence) -> bool:
        if self.is_empty:
            return False
        diff = [Fraction(a) - b for a, b in zip(z, self.point)]
        if not self.directions:
            return all(d == 0 for d in diff)
        # diff must lie in span(directions)
        return _in_span(diff, self.directions)


def _in_span(vec, basis) -> bool:
    rows = [list(b) for b in basis]
    return _rank(rows + [list(vec)]) == _rank(rows)


def _rank(rows) -> int:
    rows = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][c] / rows[rank][c]
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def solve_rational_affine(lin, v: Sequence) -> SolutionSet:
    lin = as_matrix(lin)
    v = [Fraction(x) for x in v]
    if not lin.is_square:
        raise ShapeError("square system expected")
    if lin.nrows != len(v):
        raise ShapeError(f"right-hand side has length {len(v)}, expected {lin.nrows}")
    n = lin.ncols
    aug = [[Fraction(x) for x in r] + [b] for r, b in zip(lin, v)]
    pivots = []
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        p = aug[rank][c]
        aug[rank] = [x / p for x in aug[rank]]
        for i in range(len(aug)):
            if i != rank and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[rank])]
        pivots.append(c)
        rank += 1
    if any(aug[i][n] != 0 for i in range(rank, len(aug))):
        return SolutionSet(ambient=n, dimension=-1)
    point = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        point[c] = aug[i][n]
    free = [c for c in range(n) if c not in pivots]
    directions = []
    for f in free:
        d = [Fraction(0)] * n
        d[f] = Fraction(1)
        for i, c in enumerate(pivots):
            d[c] = -aug[i][f]
        directions.append(tuple(d))
    return SolutionSet(ambient=n, dimension=len(free), point=tuple(point), directions=tuple(directions))


def unimodular_matrices(bound: int, det: int | None = None):
    """All 2x2 integer matrices with entries in ``[-bound, bound]`` and ``|det| = 1``.

    Yields in lexicographic order of ``(a, b, c, d)``.
    """
    rng = range(-bound, bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    dd = a * d - b * c
                    if abs(dd) == 1 and (det is None or dd == det):
                        yield IntMatrix([[a, b], [c, d]])


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g == 0:
        raise ContractViolation("zero vector has no primitive multiple")
    return tuple(x // g for x in vec)
