"""Twisted cohomology of the Klein bottle with coefficients in ``Z^2`` via a monodromy.

The standard CW structure ``e0, e1_1, e1_2, e2`` lifts to a free
``Z[G]``-complex on the universal cover with

    d2 e2   = (1 + b) e1_1 + (a - 1) e1_2
    d1 e1_1 = (a - 1) e0
    d1 e1_2 = (b a - 1) e0

Applying ``Hom_G(-, Z^2_rho)`` gives integer cochain maps
``delta1: Z^2 -> Z^4`` and ``delta2: Z^4 -> Z^2``; group-ring coefficients
act through ``rho``.  The 4-vector ordering is
``(phi(e1_1)_1, phi(e1_1)_2, phi(e1_2)_1, phi(e1_2)_2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .classify import A1, B1, B2, B3, I2, family_template
from .errors import ContractViolation
from .intlinalg import FGAbelianGroup, IntMatrix, as_matrix, cokernel, homology, smith_normal_form
from .kleingroup import NormalForm


@dataclass(frozen=True)
class MonodromyRep:
    rho_a: IntMatrix
    rho_b: IntMatrix
    label: str | None = None
    n: int | None = None

    def __post_init__(self):
        a, b = as_matrix(self.rho_a), as_matrix(self.rho_b)
        object.__setattr__(self, "rho_a", a)
        object.__setattr__(self, "rho_b", b)
        if a.shape != (2, 2) or b.shape != (2, 2) or not (a.is_unimodular() and b.is_unimodular()):
            raise ContractViolation("monodromy images must be unimodular 2x2 matrices")

    @property
    def compatible(self) -> bool:
        return self.rho_a @ self.rho_b @ self.rho_a == self.rho_b

    def image(self, nf: NormalForm) -> IntMatrix:
        return (self.rho_a ** nf.q) @ (self.rho_b ** nf.k)

    def conjugated(self, g) -> "MonodromyRep":
        g = as_matrix(g)
        gi = g.inverse()
        return MonodromyRep(g @ self.rho_a @ gi, g @ self.rho_b @ gi)

    def __str__(self) -> str:
        name = self.label or "rho"
        if self.n is not None:
            name += f"(n={self.n})"
        return f"{name}: a -> {self.rho_a}, b -> {self.rho_b}"


def inverse_transpose(m: IntMatrix) -> IntMatrix:
    inv = m.inverse()
    if inv is None:
        raise ContractViolation(f"{m} is not unimodular")
    return inv.T


def rho(i: int, n: int = 1) -> MonodromyRep:
    """The four monodromy families; ``rho4(n)`` uses the shear with off-diagonal ``2n``."""
    if i == 1:
        return MonodromyRep(I2, inverse_transpose(B1), "rho1")
    if i == 2:
        if n == 0:
            raise ContractViolation("rho2 needs n != 0")
        return MonodromyRep(inverse_transpose(A1(n)), inverse_transpose(B1), "rho2", n)
    if i == 3:
        return MonodromyRep(I2, inverse_transpose(B2), "rho3")
    if i == 4:
        if n == 0:
            raise ContractViolation("rho4 needs n != 0")
        return MonodromyRep(inverse_transpose(A1(2 * n)), inverse_transpose(B3), "rho4", n)
    raise ContractViolation(f"no monodromy family rho{i}")


def monodromy_from_structure(family) -> MonodromyRep:
    """Inverse transpose of the linear holonomy of the family's canonical generators."""
    h = family_template(family)
    index = int(family.label[1])
    n = family.n if index == 2 else (family.n // 2 if index == 4 else None)
    return MonodromyRep(
        inverse_transpose(h.image_a.linear), inverse_transpose(h.image_b.linear), f"rho{index}", n
    )


# --------------------------------------------------------------------------
# the equivariant chain complex


@dataclass(frozen=True)
class GroupRingElement:
    """Finite integer combination of group elements, stored by normal form."""

    terms: tuple[tuple[NormalForm, int], ...]

    @classmethod
    def of(cls, mapping: Mapping[NormalForm, int]) -> "GroupRingElement":
        return cls(tuple(sorted((g, c) for g, c in mapping.items() if c)))

    def augmentation(self) -> int:
        return sum(c for _, c in self.terms)

    def through(self, rep: MonodromyRep) -> IntMatrix:
        out = IntMatrix.zeros(2, 2)
        for g, c in self.terms:
            out = out + rep.image(g) * c
        return out

    def __str__(self) -> str:
        parts = []
        for g, c in self.terms:
            coeff = "" if c == 1 else ("-" if c == -1 else f"{c}")
            parts.append(f"{coeff}{g}")
        return " + ".join(parts).replace("+ -", "- ")


ONE = NormalForm(0, 0)
A = NormalForm(1, 0)
B = NormalForm(0, 1)
BA = NormalForm(-1, 1)  # b a = a^-1 b


@dataclass(frozen=True)
class BoundaryMaps:
    d2: dict  # cell name -> GroupRingElement coefficient in d2 e2
    d1: dict  # cell name -> GroupRingElement coefficient of e0


def boundary_matrices() -> BoundaryMaps:
    return BoundaryMaps(
        d2={
            "e1_1": GroupRingElement.of({ONE: 1, B: 1}),
            "e1_2": GroupRingElement.of({A: 1, ONE: -1}),
        },
        d1={
            "e1_1": GroupRingElement.of({A: 1, ONE: -1}),
            "e1_2": GroupRingElement.of({BA: 1, ONE: -1}),
        },
    )


def _require_compatible(rep: MonodromyRep) -> None:
    if not rep.compatible:
        raise ContractViolation(f"{rep} does not satisfy rho(a) rho(b) rho(a) = rho(b)")


def coboundary_delta2(rep: MonodromyRep) -> IntMatrix:
    _require_compatible(rep)
    d = boundary_matrices().d2
    return IntMatrix.hstack(d["e1_1"].through(rep), d["e1_2"].through(rep))


def coboundary_delta1(rep: MonodromyRep) -> IntMatrix:
    _require_compatible(rep)
    d = boundary_matrices().d1
    return IntMatrix.vstack(d["e1_1"].through(rep), d["e1_2"].through(rep))


def h2_twisted(rep: MonodromyRep) -> FGAbelianGroup:
    return cokernel(coboundary_delta2(rep))


@dataclass(frozen=True)
class FullCohomology:
    H0: FGAbelianGroup
    H1: FGAbelianGroup
    H2: FGAbelianGroup

    @property
    def euler_rank_sum(self) -> int:
        return self.H0.free_rank - self.H1.free_rank + self.H2.free_rank


def full_cohomology(rep: MonodromyRep) -> FullCohomology:
    d1 = coboundary_delta1(rep)
    d2 = coboundary_delta2(rep)
    h0 = FGAbelianGroup(2 - smith_normal_form(d1).rank)
    h1 = homology(d1, d2)
    return FullCohomology(h0, h1, cokernel(d2))


def expected_h2(i: int, n: int = 1) -> FGAbelianGroup:
    """Closed-form H^2 for ``rho_i`` (cyclic summands canonicalised to invariant factors)."""
    if i == 1:
        return FGAbelianGroup.from_cyclic_orders([2], free_rank=1)
    if i == 2:
        return FGAbelianGroup.from_cyclic_orders([2, n])
    if i == 3:
        return FGAbelianGroup(1)
    if i == 4:
        return FGAbelianGroup.from_cyclic_orders([4 * n])
    raise ContractViolation(f"no monodromy family rho{i}")
