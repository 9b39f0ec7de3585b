"""Topological and symplectic invariants of regular Lagrangian fibrations over the Klein bottle.

A fibration is fixed up to bundle isomorphism by its monodromy and its Chern
class in ``H^2(K; Z^2_rho) = Z^2 / im delta2``.  The surgery construction
realises the class of the pair ``(m, n)``; pairs in ``im delta2`` are
exactly the trivial ones (modelling assumption, no finer characterisation is
used).  Only the discrete effect of the attaching map is modelled, not the
map itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Sequence

from .classify import FamilyId
from .cohomology import MonodromyRep, coboundary_delta2, h2_twisted, monodromy_from_structure
from .errors import ContractViolation, UnsupportedBase
from .intlinalg import FGAbelianGroup, IntMatrix, SmithDecomposition, rational_inverse, smith_normal_form

TRIVIAL_PAIRS_ASSUMPTION = "pairs (m, n) in im delta2 are exactly the surgeries that keep a global section"


@dataclass(frozen=True)
class ChernClass:
    """Element of ``ambient`` in SNF coordinates: torsion coordinates first (reduced), then free ones."""

    ambient: FGAbelianGroup
    coordinates: tuple[int, ...]

    def __post_init__(self):
        t = len(self.ambient.torsion)
        if len(self.coordinates) != t + self.ambient.free_rank:
            raise ContractViolation("coordinate count does not match the ambient group")
        reduced = tuple(c % d for c, d in zip(self.coordinates, self.ambient.torsion)) + tuple(self.coordinates[t:])
        object.__setattr__(self, "coordinates", reduced)

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def __add__(self, other: "ChernClass") -> "ChernClass":
        if self.ambient != other.ambient:
            raise ContractViolation("classes live in different groups")
        return ChernClass(self.ambient, tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))

    def __str__(self) -> str:
        return f"{list(self.coordinates)} in {self.ambient}"


@dataclass(frozen=True)
class ChernQuotient:
    """The quotient map ``Z^2 -> Z^2 / im delta2`` in Smith coordinates."""

    monodromy: MonodromyRep
    snf: SmithDecomposition
    ambient: FGAbelianGroup

    @classmethod
    def of(cls, rep: MonodromyRep) -> "ChernQuotient":
        return cls(rep, smith_normal_form(coboundary_delta2(rep)), h2_twisted(rep))

    def __call__(self, m: int, n: int) -> ChernClass:
        u = self.snf.U @ (m, n)
        factors = list(self.snf.factors) + [0] * (2 - len(self.snf.factors))
        torsion = [c for c, d in zip(u, factors) if d > 1]
        free = [c for c, d in zip(u, factors) if d == 0]
        return ChernClass(self.ambient, tuple(torsion + free))


def chern_from_surgery_pair(rep: MonodromyRep, m: int, n: int) -> ChernClass:
    return ChernQuotient.of(rep)(m, n)


@dataclass(frozen=True)
class SurgeryCoverage:
    bound: int
    torsion_hit: int
    torsion_order: int
    free_gcds: tuple[int, ...]  # gcd of each free coordinate over the image

    @property
    def covers_torsion(self) -> bool:
        return self.torsion_hit == self.torsion_order

    @property
    def generates_free(self) -> bool:
        return all(g == 1 for g in self.free_gcds)


def surgery_coverage(rep: MonodromyRep, bound: int | None = None) -> SurgeryCoverage:
    """Image of the box ``|m|, |n| <= bound`` (default twice the largest invariant factor)."""
    q = ChernQuotient.of(rep)
    t = len(q.ambient.torsion)
    if bound is None:
        bound = 2 * max(q.ambient.torsion, default=1)
    torsion_seen = set()
    gcds = [0] * q.ambient.free_rank
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            c = q(m, n).coordinates
            torsion_seen.add(c[:t])
            gcds = [gcd(g, v) for g, v in zip(gcds, c[t:])]
    order = prod(q.ambient.torsion)
    return SurgeryCoverage(bound, len(torsion_seen), order, tuple(gcds))


def zero_class(rep: MonodromyRep) -> ChernClass:
    g = h2_twisted(rep)
    return ChernClass(g, (0,) * (len(g.torsion) + g.free_rank))


@dataclass(frozen=True)
class FibrationModel:
    monodromy: MonodromyRep
    chern: ChernClass
    base_family: FamilyId | None = None

    def __post_init__(self):
        if self.chern.ambient != h2_twisted(self.monodromy):
            raise ContractViolation("Chern class does not live in H^2 of this monodromy")


def reference_fibration(family: FamilyId) -> FibrationModel:
    rep = monodromy_from_structure(family)
    return FibrationModel(rep, zero_class(rep), family)


def surgery_fibration(rep: MonodromyRep, m: int, n: int, family: FamilyId | None = None) -> FibrationModel:
    return FibrationModel(rep, chern_from_surgery_pair(rep, m, n), family)


def has_global_section(model: FibrationModel) -> bool:
    return model.chern.is_zero


# --------------------------------------------------------------------------
# period lattices


@dataclass(frozen=True)
class PeriodLatticeBasis:
    basis: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]  # columns are generators

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.basis)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ContractViolation("2x2 basis expected")
        object.__setattr__(self, "basis", rows)
        if self.det() == 0:
            raise ContractViolation("degenerate lattice basis")

    @classmethod
    def diagonal(cls, a, b) -> "PeriodLatticeBasis":
        return cls(((a, 0), (0, b)))

    def det(self) -> Fraction:
        (a, b), (c, d) = self.basis
        return a * d - b * c


def lattice_covolume(lattice: PeriodLatticeBasis) -> Fraction:
    return abs(lattice.det())


def lattices_integral_isomorphic(l1: PeriodLatticeBasis, l2: PeriodLatticeBasis) -> bool:
    """Is the change of basis from ``l1`` to ``l2`` an integral unimodular matrix?"""
    change = _matmul(rational_inverse(l1.basis), l2.basis)
    if any(x.denominator != 1 for row in change for x in row):
        return False
    return abs(change[0][0] * change[1][1] - change[0][1] * change[1][0]) == 1


def _matmul(p: Sequence[Sequence[Fraction]], q: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    return [[sum(p[i][k] * q[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def transform_basis(lattice: PeriodLatticeBasis, m: IntMatrix) -> PeriodLatticeBasis:
    return PeriodLatticeBasis(tuple(map(tuple, _matmul(lattice.basis, m.tolist()))))


# --------------------------------------------------------------------------
# Lagrangian classes


@dataclass(frozen=True)
class LagrangianClassSpace:
    base: str
    dimension: int
    statement: str


def lagrangian_class_space(base: str = "klein") -> LagrangianClassSpace:
    """Real cohomology quotient carrying the symplectic invariants; trivial over the Klein bottle."""
    if base != "klein":
        raise UnsupportedBase(f"base {base!r} is not supported (only 'klein')")
    return LagrangianClassSpace(
        "klein",
        0,
        "H^2(K; R) = 0, so Lagrangian fibrations with fixed monodromy and Chern class "
        "are fibrewise symplectomorphic over the identity",
    )
