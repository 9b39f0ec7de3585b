"""Complete affine structures on the Klein bottle and the Lagrangian fibrations they induce."""

from .affine import LinExpr, ParamAffineMap, compose, conjugate, inverse
from .classify import FamilyId, enumerate_families, family_template, freeness_certificate, identify_family, normalize
from .cohomology import MonodromyRep, full_cohomology, h2_twisted, rho
from .errors import ContractViolation, EvaluationError, NotFree, ShapeError, UnsupportedBase, UnsupportedCase
from .fibration import chern_from_surgery_pair, lattice_covolume, lattices_integral_isomorphic
from .intlinalg import FGAbelianGroup, IntMatrix, cokernel, smith_normal_form
from .kleingroup import GroupHom, NormalForm, is_free_bounded, normal_form

__all__ = [
    "ContractViolation", "EvaluationError", "FGAbelianGroup", "FamilyId", "GroupHom", "IntMatrix",
    "LinExpr", "MonodromyRep", "NormalForm", "NotFree", "ParamAffineMap", "ShapeError",
    "UnsupportedBase", "UnsupportedCase", "chern_from_surgery_pair", "cokernel", "compose",
    "conjugate", "enumerate_families", "family_template", "freeness_certificate", "full_cohomology",
    "h2_twisted", "identify_family", "inverse", "is_free_bounded", "lattice_covolume",
    "lattices_integral_isomorphic", "normal_form", "normalize", "rho", "smith_normal_form",
]
