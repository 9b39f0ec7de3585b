"""Classification of free affine actions of the Klein-bottle group on the plane.

Pipeline for a homomorphism ``a -> (A, x)``, ``b -> (B, y)``:

1. Linear stage.  ``det A = 1``, ``det B = -1``; freeness forces eigenvalue 1
   on ``A`` and ``B`` (so ``tr A = 2``, ``tr B = 0``).  ``B`` is conjugated to
   one of the two involution classes ``B1 = diag(1, -1)``, ``B2 = swap``, and
   then ``A`` is one of ``I, A1(n), A2(p)`` (for ``B1``) or ``I, A3(n), A4(n)``
   (for ``B2``).  ``(A2, B1)`` and ``(A3, B2)`` are rejected here.
   ``(A4, B2)`` is conjugated by ``[[1, 0], [-1, 1]]`` to ``(A1, B3)``.
2. Translation stage.  Conjugation by translations, by ``-I`` and the
   generator inversions bring the translations to the canonical templates;
   the relation then pins the remaining components.

Canonical templates (``x, y`` real parameters)::

    F1  a = (I, x e2)           b = (B1, y e1)                 x, y > 0
    F2  a = (A1(n), x e2)       b = (B1, y e1 + x e2)          x, y > 0, n > 0
    F3  a = (I, x(e1 - e2))     b = (B2, y e2)                 x, y > 0
    F4  a = (A1(n), x e2)       b = (B3, y e1 + (n-1)/n x e2)  x > 0, n > 0 even,
                                                               2y + (n-1)/n x != 0

``(A1(n), B3)`` with ``n`` odd is carried to F2 by the replacement
``b -> a b`` followed by a shear conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .affine import LinExpr, ParamAffineMap, compose, conjugate, inverse, vec
from .errors import ContractViolation, NotFree, UnsupportedCase
from .intlinalg import IntMatrix, as_matrix, has_eigenvalue_one, primitive, unimodular_matrices
from .kleingroup import GroupHom, NormalForm, evaluate, normal_forms, relation_holds, torus_restriction

I2 = IntMatrix.identity(2)
MINUS_I = IntMatrix([[-1, 0], [0, -1]])
B1 = IntMatrix([[1, 0], [0, -1]])
B2 = IntMatrix([[0, 1], [1, 0]])
B3 = IntMatrix([[1, 1], [0, -1]])
SHEAR_TO_B3 = IntMatrix([[1, 0], [-1, 1]])  # conjugates (A4(n), B2) to (A1(n), B3)


def A1(n: int) -> IntMatrix:
    return IntMatrix([[1, n], [0, 1]])


def A2(p: int) -> IntMatrix:
    return IntMatrix([[1, 0], [p, 1]])


def A3(n: int) -> IntMatrix:
    return IntMatrix([[1 + n, n], [-n, 1 - n]])


def A4(n: int) -> IntMatrix:
    return IntMatrix([[1 - n, n], [-n, 1 + n]])


def match_form(m: IntMatrix) -> tuple[str, int] | None:
    """Recognise ``m`` as ``A1(n)``, ``A2(p)``, ``A3(n)`` or ``A4(n)`` with nonzero parameter."""
    (a, b), (c, d) = m.row(0), m.row(1)
    if a == d == 1 and c == 0 and b:
        return "A1", b
    if a == d == 1 and b == 0 and c:
        return "A2", c
    if b and c == -b and a == 1 + b and d == 1 - b:
        return "A3", b
    if b and c == -b and a == 1 - b and d == 1 + b:
        return "A4", b
    return None


# --------------------------------------------------------------------------
# family labels


@dataclass(frozen=True)
class FamilyId:
    label: str
    n: int | None = None

    def __post_init__(self):
        if self.label not in ("F1", "F2", "F3", "F4"):
            raise ContractViolation(f"unknown family {self.label!r}")
        if self.label in ("F2", "F4"):
            if not self.n:
                raise ContractViolation(f"{self.label} needs a nonzero integer n")
            if self.label == "F4" and self.n % 2:
                raise ContractViolation("F4 needs an even off-diagonal entry")
        elif self.n is not None:
            raise ContractViolation(f"{self.label} takes no discrete parameter")

    def __str__(self) -> str:
        return self.label if self.n is None else f"{self.label}(n={self.n})"

    def to_json(self) -> dict:
        return {"label": self.label, "n": self.n}


@dataclass(frozen=True)
class Rejection:
    tag: str
    reason: str

    def __str__(self) -> str:
        return f"rejected[{self.tag}]"

    def to_json(self) -> dict:
        return {"tag": self.tag, "reason": self.reason}


REJECT_A2_B1 = Rejection("A2/B1", "translation of b^2 vanishes: the relation forces x1 = 0 = y1")
REJECT_A3_B2 = Rejection("A3/B2", "translation of b^2 vanishes: the relation forces x1 = -x2 and y1 = -y2")


# --------------------------------------------------------------------------
# templates


def _x() -> LinExpr:
    return LinExpr.var("x")


def _y() -> LinExpr:
    return LinExpr.var("y")


def shifted_b_component(n: int, x: LinExpr | None = None) -> LinExpr:
    """Second translation component ``(n-1)/n x`` of ``b`` in the ``B3`` shape."""
    return (x if x is not None else _x()) * Fraction(n - 1, n)


def shear_glide_hom(n: int, x=None, y=None) -> GroupHom:
    """``a = (A1(n), x e2)``, ``b = (B3, y e1 + (n-1)/n x e2)`` for any ``n != 0``."""
    x = LinExpr.coerce(x if x is not None else "x")
    y = LinExpr.coerce(y if y is not None else "y")
    return GroupHom(
        ParamAffineMap(A1(n), vec(0, x)),
        ParamAffineMap(B3, vec(y, shifted_b_component(n, x))),
    )


def family_template(family: FamilyId | str, n: int | None = None) -> GroupHom:
    if isinstance(family, str):
        family = FamilyId(family, n)
    x, y = _x(), _y()
    if family.label == "F1":
        return GroupHom(ParamAffineMap(I2, vec(0, x)), ParamAffineMap(B1, vec(y, 0)))
    if family.label == "F2":
        return GroupHom(ParamAffineMap(A1(family.n), vec(0, x)), ParamAffineMap(B1, vec(y, x)))
    if family.label == "F3":
        return GroupHom(ParamAffineMap(I2, vec(x, -x)), ParamAffineMap(B2, vec(0, y)))
    return shear_glide_hom(family.n)


def rejected_template(rejection: Rejection, n: int = 1) -> GroupHom:
    """The rejected linear shapes with the translations the relation allows."""
    x, y = _x(), _y()
    if rejection.tag == "A2/B1":
        return GroupHom(ParamAffineMap(A2(n), vec(0, x)), ParamAffineMap(B1, vec(0, y)))
    if rejection.tag == "A3/B2":
        return GroupHom(ParamAffineMap(A3(n), vec(x, -x)), ParamAffineMap(B2, vec(y, -y)))
    raise ContractViolation(f"no template for {rejection}")


# --------------------------------------------------------------------------
# linear relation ABA = B


@dataclass(frozen=True)
class SymbolicFamily:
    name: str
    builder: Callable[[int], IntMatrix] | None  # None: the single matrix I
    parameter: str | None = None

    def instances(self, bound: int) -> list[IntMatrix]:
        if self.builder is None:
            return [I2]
        out = []
        for t in range(-2 * bound - 2, 2 * bound + 3):
            if t == 0:
                continue
            m = self.builder(t)
            if max(abs(e) for e in m.entries()) <= bound:
                out.append(m)
        return out


SYMBOLIC_SOLUTIONS = {
    B1: (SymbolicFamily("I", None), SymbolicFamily("A1", A1, "n"), SymbolicFamily("A2", A2, "p")),
    B2: (SymbolicFamily("I", None), SymbolicFamily("A3", A3, "n"), SymbolicFamily("A4", A4, "n")),
}


@dataclass(frozen=True)
class LinearRelationSolutions:
    B: IntMatrix
    bound: int
    matrices: tuple[IntMatrix, ...]
    families: tuple[SymbolicFamily, ...]

    def instantiated(self) -> set[IntMatrix]:
        return {m for f in self.families for m in f.instances(self.bound)}

    def agrees(self) -> bool:
        return not self.families or set(self.matrices) == self.instantiated()


def solve_linear_relation(B, bound: int) -> LinearRelationSolutions:
    """All ``A`` with entries in ``[-bound, bound]``, ``det A = 1``, ``tr A = 2``, ``ABA = B``."""
    B = as_matrix(B)
    if B.shape != (2, 2) or not B.is_unimodular():
        raise ContractViolation(f"{B} is not a unimodular 2x2 matrix")
    if bound < 1:
        raise ContractViolation("bound must be at least 1")
    found = tuple(
        A for A in unimodular_matrices(bound, det=1) if A.trace() == 2 and A @ B @ A == B
    )
    return LinearRelationSolutions(B, bound, found, SYMBOLIC_SOLUTIONS.get(B, ()))


# --------------------------------------------------------------------------
# translation constraints and symbolic fixed points

TRANSLATION_VARS = ("x1", "x2", "y1", "y2")


def _rref(exprs: Sequence[LinExpr], variables: Sequence[str]) -> tuple[LinExpr, ...]:
    """Reduced row echelon form of linear equations ``expr = 0``; drops ``0 = 0``.

    A nonzero constant row (inconsistent system) is kept as the expression ``1``.
    """
    rows = [[e.coefficient(v) for v in variables] + [e.constant] for e in exprs]
    rank = 0
    for c in range(len(variables)):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][c]
        rows[rank] = [v / p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [u - f * w for u, w in zip(rows[i], rows[rank])]
        rank += 1
    out = [LinExpr(r[-1], zip(variables, r[:-1])) for r in rows[:rank]]
    if any(r[-1] != 0 for r in rows[rank:]):
        out.append(LinExpr(1))
    return tuple(out)


@dataclass(frozen=True)
class TranslationConstraints:
    case: str
    equations: tuple[LinExpr, ...]  # each expression is = 0

    def __str__(self) -> str:
        return "; ".join(f"{e} = 0" for e in self.equations) or "no constraint"

    def satisfied_by(self, values: Mapping[str, Fraction]) -> bool:
        return all(e.evaluate(values) == 0 for e in self.equations)


def linear_case(A, B) -> str:
    A, B = as_matrix(A), as_matrix(B)
    form = match_form(A)
    if B == B1:
        if A == I2:
            return "I/B1"
        if form and form[0] in ("A1", "A2"):
            return f"{form[0]}/B1"
    elif B == B2:
        if A == I2:
            return "I/B2"
        if form and form[0] in ("A3", "A4"):
            return f"{form[0]}/B2"
    elif B == B3 and form and form[0] == "A1":
        return "A1/B3"
    raise UnsupportedCase(f"linear pair A={A}, B={B} is not one of the supported cases")


def solve_translations(A, B, assume: Mapping[str, Fraction | int] | None = None) -> TranslationConstraints:
    """Linear constraints that ``aba = b`` puts on ``x = (x1, x2)``, ``y = (y1, y2)``.

    ``assume`` substitutes values for some components first (for example the
    ``x1 = 0`` normalisation) and those components drop out.
    """
    case = linear_case(A, B)
    x = vec("x1", "x2")
    y = vec("y1", "y2")
    lhs = compose(compose(ParamAffineMap(A, x), ParamAffineMap(B, y)), ParamAffineMap(A, x))
    exprs = [u - v for u, v in zip(lhs.translation, y)]
    assume = dict(assume or {})
    if assume:
        exprs = [e.substitute(assume) for e in exprs]
    variables = [v for v in TRANSLATION_VARS if v not in assume]
    return TranslationConstraints(case, _rref(exprs, variables))


def fixed_point_conditions(f: ParamAffineMap) -> tuple[LinExpr, ...] | None:
    """Parameter conditions for ``f`` to have a fixed point.

    Returns ``None`` if ``f`` never has one, otherwise expressions whose
    simultaneous vanishing is equivalent to the existence of a fixed point
    (empty tuple: always a fixed point).
    """
    n = f.dim
    m = f.linear - IntMatrix.identity(n)
    rows = [[Fraction(v) for v in m.row(i)] for i in range(n)]
    rhs = [-t for t in f.translation]
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        rhs[rank], rhs[piv] = rhs[piv], rhs[rank]
        for i in range(n):
            if i != rank and rows[i][c] != 0:
                fct = rows[i][c] / rows[rank][c]
                rows[i] = [u - fct * w for u, w in zip(rows[i], rows[rank])]
                rhs[i] = rhs[i] - rhs[rank] * fct
        rank += 1
    conds = [e for e in rhs[rank:] if e]
    if any(e.is_constant for e in conds):
        return None
    params = sorted({p for e in conds for p in e.parameters})
    reduced = _rref(conds, params)
    if any(e.is_constant and e for e in reduced):
        return None
    return reduced


# --------------------------------------------------------------------------
# freeness certificates


@dataclass(frozen=True)
class FreenessCertificate:
    """The action is free exactly when every listed expression is nonzero."""

    family: FamilyId
    nonvanishing: tuple[LinExpr, ...]
    argument: str

    def holds(self, sigma: Mapping) -> bool:
        return all(e.evaluate(sigma) != 0 for e in self.nonvanishing)


_CERT_TEXT = {
    "F1": (
        "a^q b^2j = (I, (2jy, qx)) is a nonzero translation unless q = j = 0; "
        "a^q b^(2j+1) = (B1, ((2j+1)y, qx)) has a fixed point only if (2j+1)y = 0"
    ),
    "F2": (
        "a^q b^2j = (A1(qn), (nxq(q-1)/2 + 2jy, qx)) needs qx = 0 and then 2jy = 0; "
        "for odd powers the fixed-point equations collapse to (2j+1)y = 0"
    ),
    "F3": (
        "a^q b^2j = (I, (qx + jy, -qx + jy)) vanishes only for q = j = 0; "
        "a^q b^(2j+1) has linear part B2 and a fixed point only if (2j+1)y = 0"
    ),
    "F4": (
        "with w = 2y + (n-1)/n x, b^2 = (I, w e1); even powers need qx = 0 and jw = 0; "
        "for odd powers the fixed-point equations collapse to (2j+1)w = 0"
    ),
}


def freeness_certificate(family: FamilyId) -> FreenessCertificate:
    x, y = _x(), _y()
    if family.label == "F4":
        conds = (x, y * 2 + shifted_b_component(family.n))
    else:
        conds = (x, y)
    return FreenessCertificate(family, conds, _CERT_TEXT[family.label])


def _in_span(target: LinExpr, spanning: Sequence[LinExpr]) -> bool:
    params = sorted({p for e in (target, *spanning) for p in e.parameters})
    base = _rref(spanning, params)
    return len(_rref((*base, target), params)) == len(base)


def audit_certificate(h: GroupHom, cert: FreenessCertificate, bound: int) -> list[str]:
    """Cross-check a closed-form certificate against symbolic fixed points of every word in the box.

    Soundness: the fixed-point locus of each word must lie in the zero set of
    some certificate expression.  Sharpness: each certificate expression must
    be the whole locus of some word.  Returns the list of disagreements.
    """
    problems = []
    realised = {i: False for i in range(len(cert.nonvanishing))}
    for nf in normal_forms(bound):
        conds = fixed_point_conditions(evaluate(h, nf))
        if conds is None:
            continue
        if not conds:
            problems.append(f"{nf} has a fixed point for every parameter value")
            continue
        if not any(_in_span(c, conds) for c in cert.nonvanishing):
            problems.append(f"{nf}: fixed-point locus {list(map(str, conds))} escapes the certificate")
        for i, c in enumerate(cert.nonvanishing):
            if all(_in_span(e, (c,)) for e in conds):
                realised[i] = True
    for i, ok in realised.items():
        if not ok:
            problems.append(f"certificate condition {cert.nonvanishing[i]} is not realised within bound {bound}")
    return problems


# --------------------------------------------------------------------------
# normalisation moves


@dataclass(frozen=True)
class Move:
    """One step: ``conjugate`` by ``element``, ``invert_a``, ``invert_b`` or ``replace_b`` (``b -> a^k b``)."""

    kind: str
    element: ParamAffineMap | None = None
    k: int = 0

    def apply(self, h: GroupHom) -> GroupHom:
        if self.kind == "conjugate":
            return GroupHom(conjugate(h.image_a, self.element), conjugate(h.image_b, self.element))
        if self.kind == "invert_a":
            return GroupHom(inverse(h.image_a), h.image_b)
        if self.kind == "invert_b":
            return GroupHom(h.image_a, inverse(h.image_b))
        if self.kind == "replace_b":
            return GroupHom(h.image_a, evaluate(h, NormalForm(self.k, 1)))
        raise ContractViolation(f"unknown move {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "conjugate":
            return f"conjugate by {self.element}"
        if self.kind == "replace_b":
            return f"b -> a^{self.k} b"
        return {"invert_a": "a -> a^-1", "invert_b": "b -> b^-1"}[self.kind]

    def to_json(self) -> dict:
        out = {"kind": self.kind, "text": str(self)}
        if self.element is not None:
            out["linear"] = self.element.linear.tolist()
            out["translation"] = [str(t) for t in self.element.translation]
        if self.kind == "replace_b":
            out["k"] = self.k
        return out


def replay(h: GroupHom, moves: Sequence[Move]) -> GroupHom:
    for m in moves:
        h = m.apply(h)
    return h


@dataclass
class ClassificationReport:
    status: str  # "admissible", "rejected" or "unresolved"
    family: FamilyId | Rejection
    input_hom: GroupHom
    canonical_hom: GroupHom
    moves: list[Move] = field(default_factory=list)
    parameters: dict[str, LinExpr] = field(default_factory=dict)
    torus_structure: tuple[ParamAffineMap, ParamAffineMap] | None = None
    levi_civita: bool | None = None

    def replay(self) -> GroupHom:
        return replay(self.input_hom, self.moves)


class _Pipeline:
    def __init__(self, h: GroupHom, sigma: Mapping):
        self.h = h
        self.sigma = sigma
        self.moves: list[Move] = []

    @property
    def a(self) -> ParamAffineMap:
        return self.h.image_a

    @property
    def b(self) -> ParamAffineMap:
        return self.h.image_b

    def push(self, move: Move) -> None:
        self.h = move.apply(self.h)
        self.moves.append(move)

    def conjugate(self, linear=None, translation=(0, 0)) -> None:
        g = ParamAffineMap(linear if linear is not None else I2, vec(*translation))
        if g != ParamAffineMap.identity():
            self.push(Move("conjugate", g))

    def sign(self, expr: LinExpr, what: str) -> int:
        value = expr.evaluate(self.sigma)
        if value == 0:
            raise NotFree(f"{what} = {expr} vanishes at the witness assignment, the action has a fixed point")
        return 1 if value > 0 else -1


def _involution_conjugator(B: IntMatrix) -> IntMatrix:
    """``G`` with ``G B G^-1`` equal to ``B1`` or ``B2`` for an integral involution ``B != +-I``."""

    def left_eigvec(m: IntMatrix) -> tuple[int, int]:
        col = m.col(0) if any(m.col(0)) else m.col(1)
        v = primitive((-col[1], col[0]))
        return v if (v[0], v[1]) > (0, 0) else (-v[0], -v[1])

    vp = left_eigvec(B - I2)
    vm = left_eigvec(B + I2)
    if abs(vp[0] * vm[1] - vp[1] * vm[0]) == 1:
        return IntMatrix([vp, vm])
    g1 = ((vp[0] + vm[0]) // 2, (vp[1] + vm[1]) // 2)
    g2 = tuple(as_matrix([g1]) @ B)[0]
    return IntMatrix([g1, g2])


def _finish(p: _Pipeline, h0: GroupHom, family: FamilyId, params: dict) -> ClassificationReport:
    expected = family_template(family).image_a, family_template(family).image_b
    canon = GroupHom(expected[0].substitute(params), expected[1].substitute(params))
    if canon != p.h:
        return ClassificationReport("unresolved", Rejection("unresolved", f"pipeline ended at {p.h}"), h0, p.h, p.moves)
    return ClassificationReport(
        "admissible",
        family,
        h0,
        p.h,
        p.moves,
        params,
        torus_restriction(p.h),
        is_levi_civita(family),
    )


def _normalize_b1_identity(p: _Pipeline, h0: GroupHom) -> ClassificationReport:
    p.conjugate(translation=(0, -p.b.translation[1] / 2))
    if p.sign(p.a.translation[1], "x2") < 0:
        p.push(Move("invert_a"))
    if p.sign(p.b.translation[0], "y1") < 0:
        p.push(Move("invert_b"))
    return _finish(p, h0, FamilyId("F1"), {"x": p.a.translation[1], "y": p.b.translation[0]})


def _normalize_b1_shear(p: _Pipeline, h0: GroupHom) -> ClassificationReport:
    if p.a.linear[0, 1] < 0:
        p.push(Move("invert_a"))
    n = p.a.linear[0, 1]
    p.conjugate(translation=(0, p.a.translation[0] / n))
    if p.sign(p.a.translation[1], "x2") < 0:
        p.conjugate(linear=MINUS_I)
    if p.sign(p.b.translation[0], "y1") < 0:
        p.push(Move("invert_b"))
    return _finish(p, h0, FamilyId("F2", n), {"x": p.a.translation[1], "y": p.b.translation[0]})


def _normalize_b2_identity(p: _Pipeline, h0: GroupHom) -> ClassificationReport:
    if p.sign(p.a.translation[0], "x1") < 0:
        p.push(Move("invert_a"))
    if p.sign(p.b.translation[0] + p.b.translation[1], "y1 + y2") < 0:
        p.push(Move("invert_b"))
    p.conjugate(translation=(-p.b.translation[0], 0))
    return _finish(p, h0, FamilyId("F3"), {"x": p.a.translation[0], "y": p.b.translation[1]})


def _normalize_b3_shear(p: _Pipeline, h0: GroupHom, replace_b: bool) -> ClassificationReport:
    if p.a.linear[0, 1] < 0:
        p.push(Move("invert_a"))
    n = p.a.linear[0, 1]
    p.conjugate(translation=(0, p.a.translation[0] / n))
    if p.sign(p.a.translation[1], "x2") < 0:
        p.conjugate(linear=MINUS_I)
    p.sign(p.b.translation[0] * 2 + p.b.translation[1], "2y1 + y2")
    if n % 2 == 0:
        return _finish(p, h0, FamilyId("F4", n), {"x": p.a.translation[1], "y": p.b.translation[0]})
    if not replace_b:
        return ClassificationReport(
            "unresolved",
            Rejection("unresolved", "odd off-diagonal entry needs the b -> a b replacement"),
            h0,
            p.h,
            p.moves,
        )
    # a b has linear part [[1, 1 - n], [0, -1]], a shear by (1 - n)/2 takes it to B1
    p.push(Move("replace_b", k=1))
    p.conjugate(linear=IntMatrix([[1, (1 - n) // 2], [0, 1]]))
    return _normalize_b1_shear(p, h0)


def normalize(h: GroupHom, sigma: Mapping | None = None, replace_b: bool = True) -> ClassificationReport:
    """Bring ``h`` to its canonical family representative.

    ``sigma`` assigns values to the translation parameters; it is only used to
    decide signs.  Raises :class:`NotFree` if a translation that must be
    nonzero vanishes at ``sigma``.
    """
    if not relation_holds(h):
        raise ContractViolation("homomorphism does not satisfy aba = b")
    p = _Pipeline(h, sigma or {})
    A, B = h.image_a.linear, h.image_b.linear
    if A.det() != 1 or B.det() != -1:
        rej = Rejection("orientation", f"need det A = 1 and det B = -1, got {A.det()} and {B.det()}")
        return ClassificationReport("rejected", rej, h, h)
    for name, m in (("a", A), ("b", B)):
        if not has_eigenvalue_one(m):
            rej = Rejection("hirsch", f"linear part of {name} lacks eigenvalue 1, so {name} has a fixed point")
            return ClassificationReport("rejected", rej, h, h)

    if not (B == B3 and (match_form(A) or ("",))[0] == "A1") and B not in (B1, B2):
        p.conjugate(linear=_involution_conjugator(B))
    case = linear_case(p.a.linear, p.b.linear)

    if case == "A2/B1":
        return ClassificationReport("rejected", REJECT_A2_B1, h, p.h, p.moves)
    if case == "A3/B2":
        return ClassificationReport("rejected", REJECT_A3_B2, h, p.h, p.moves)
    if case == "I/B1":
        return _normalize_b1_identity(p, h)
    if case == "A1/B1":
        return _normalize_b1_shear(p, h)
    if case == "I/B2":
        return _normalize_b2_identity(p, h)
    if case == "A4/B2":
        p.conjugate(linear=SHEAR_TO_B3)
    return _normalize_b3_shear(p, h, replace_b)


def identify_family(h: GroupHom) -> FamilyId | Rejection:
    """Family of ``h`` from its linear data alone (translations are not inspected)."""
    if not relation_holds(h):
        raise ContractViolation("homomorphism does not satisfy aba = b")
    A, B = h.image_a.linear, h.image_b.linear
    if A.det() != 1 or B.det() != -1:
        return Rejection("orientation", "need det A = 1 and det B = -1")
    if not (has_eigenvalue_one(A) and has_eigenvalue_one(B)):
        return Rejection("hirsch", "a linear part lacks eigenvalue 1")
    if not (B == B3 and (match_form(A) or ("",))[0] == "A1") and B not in (B1, B2):
        G = _involution_conjugator(B)
        Gi = G.inverse()
        A, B = G @ A @ Gi, G @ B @ Gi
    case = linear_case(A, B)
    if case == "A2/B1":
        return REJECT_A2_B1
    if case == "A3/B2":
        return REJECT_A3_B2
    if case == "I/B1":
        return FamilyId("F1")
    if case == "I/B2":
        return FamilyId("F3")
    n = abs(match_form(A)[1])
    if case == "A1/B1":
        return FamilyId("F2", n)
    return FamilyId("F4", n) if n % 2 == 0 else FamilyId("F2", n)


def is_levi_civita(family: FamilyId) -> bool:
    """All linear parts of the generating set orthogonal."""
    h = family_template(family)
    return h.image_a.linear.is_orthogonal() and h.image_b.linear.is_orthogonal()


# --------------------------------------------------------------------------
# the table


@dataclass(frozen=True)
class FamilyEntry:
    kind: str  # "admissible" or "rejected"
    label: str
    a: str
    b: str
    constraints: str
    torus: str
    certificate: str
    levi_civita: bool | None = None

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def enumerate_families() -> list[FamilyEntry]:
    rows = []
    specs = [
        ("F1", "(I, x e2)", "(B1, y e1)", "x, y > 0", "a = (I, x e2), b^2 = (I, 2y e1)"),
        ("F2", "(A1(n), x e2)", "(B1, y e1 + x e2)", "x, y > 0, n > 0", "a = (A1(n), x e2), b^2 = (I, 2y e1)"),
        ("F3", "(I, x(e1 - e2))", "(B2, y e2)", "x, y > 0", "a = (I, x(e1 - e2)), b^2 = (I, y(e1 + e2))"),
        (
            "F4",
            "(A1(n), x e2)",
            "(B3, y e1 + (n-1)/n x e2)",
            "x > 0, n > 0 even, 2y != -((n-1)/n) x",
            "a = (A1(n), x e2), b^2 = (I, (2y + (n-1)/n x) e1)",
        ),
    ]
    for label, a, b, cons, torus in specs:
        fid = FamilyId(label, 2 if label in ("F2", "F4") else None)
        rows.append(FamilyEntry("admissible", label, a, b, cons, torus, _CERT_TEXT[label], is_levi_civita(fid)))
    rows.append(FamilyEntry("rejected", "A2/B1", "(A2(p), x2 e2)", "(B1, y2 e2)", "x1 = 0 = y1", "b^2 = (I, 0)", REJECT_A2_B1.reason))
    rows.append(
        FamilyEntry("rejected", "A3/B2", "(A3(n), x1(e1 - e2))", "(B2, y1(e1 - e2))", "x1 = -x2, y1 = -y2", "b^2 = (I, 0)", REJECT_A3_B2.reason)
    )
    return rows


def format_families_table(rows: Sequence[FamilyEntry] | None = None) -> str:
    rows = rows if rows is not None else enumerate_families()
    lines = ["Free integral affine actions of <a, b | aba = b> on R^2", ""]
    for r in rows:
        if r.kind == "admissible":
            lines.append(f"{r.label}  a = {r.a}   b = {r.b}   [{r.constraints}]")
            lines.append(f"    torus cover: {r.torus}")
            lines.append(f"    Levi-Civita: {'yes' if r.levi_civita else 'no'}")
        else:
            lines.append(f"rejected {r.label}  a = {r.a}   b = {r.b}   forced: {r.constraints}")
            lines.append(f"    reason: {r.certificate}")
    lines.append("")
    lines.append("B1 = [[1,0],[0,-1]]  B2 = [[0,1],[1,0]]  B3 = [[1,1],[0,-1]]")
    lines.append("A1(n) = [[1,n],[0,1]]  A2(p) = [[1,0],[p,1]]  A3(n) = [[1+n,n],[-n,1-n]]")
    return "\n".join(lines) + "\n"
