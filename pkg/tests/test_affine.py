from fractions import Fraction

import pytest
from hypothesis import given

from affine_klein.affine import (
    LinExpr,
    ParamAffineMap,
    compose,
    conjugate,
    fixed_point_set,
    grid,
    hirsch_consistency_scan,
    inverse,
    trace_constraint,
    vec,
)
from affine_klein.classify import A1, A4, B1, B2, B3
from affine_klein.errors import ContractViolation, EvaluationError
from affine_klein.intlinalg import IntMatrix

from conftest import numeric_maps

I = IntMatrix.identity(2)
x, y = LinExpr.var("x"), LinExpr.var("y")


def test_linexpr_canonical():
    e = x * 2 + y - x * 2 + 3
    assert e == y + 3
    assert e.parameters == ("y",)
    assert (x / 3 + y).coefficient("x") == Fraction(1, 3)
    assert str(x / 3 + y) == "1/3*x+y"
    with pytest.raises(EvaluationError) as err:
        (x + y).evaluate({"x": 1})
    assert err.value.parameter == "y"


def test_compose_examples():
    b = ParamAffineMap(B1, vec(y, 0))
    assert compose(b, b) == ParamAffineMap(I, vec(y * 2, 0))
    assert compose(ParamAffineMap(I, vec(0, 1)), ParamAffineMap(B1, vec(1, 0))) == ParamAffineMap(B1, vec(1, 1))


def test_inverse_examples():
    assert inverse(ParamAffineMap(I, vec(0, x))) == ParamAffineMap(I, vec(0, -x))
    assert inverse(ParamAffineMap(B1, vec(y, 0))) == ParamAffineMap(B1, vec(-y, 0))
    with pytest.raises(ContractViolation):
        ParamAffineMap(IntMatrix([[2, 0], [0, 1]]), vec(0, 0))


def test_conjugate_examples():
    y1, y2 = LinExpr.var("y1"), LinExpr.var("y2")
    f = ParamAffineMap(B1, vec(y1, y2))
    # g f g^-1 with g = (I, t) replaces the translation u by u + (I - B1) t
    g = ParamAffineMap(I, vec(0, -y2 / 2))
    assert conjugate(f, g) == ParamAffineMap(B1, vec(y1, 0))
    assert conjugate(f, ParamAffineMap.identity()) == f
    p = ParamAffineMap.linear_map(IntMatrix([[1, 0], [-1, 1]]))
    for n in (1, 2, 3, -2):
        assert conjugate(ParamAffineMap.linear_map(A4(n)), p).linear == A1(n)
    assert conjugate(ParamAffineMap.linear_map(B2), p).linear == B3


def test_fixed_point_examples():
    assert fixed_point_set(ParamAffineMap(-I, vec(1, 1))).point == (Fraction(1, 2), Fraction(1, 2))
    assert fixed_point_set(ParamAffineMap(B1, vec(1, 0))).kind == "empty"
    assert fixed_point_set(ParamAffineMap(I, vec(0, 0))).kind == "whole-plane"
    with pytest.raises(EvaluationError):
        fixed_point_set(ParamAffineMap(I, vec(x, 0)), {})


def test_hirsch_small_scan():
    assert hirsch_consistency_scan(2, grid([-1, 0, 1])) == []
    with pytest.raises(ContractViolation):
        hirsch_consistency_scan(0, [])


def test_hirsch_scan_ninths():
    pts = [Fraction(k, 9) for k in range(-9, 10)]
    assert hirsch_consistency_scan(3, grid(pts)) == []


def test_trace_constraint_examples():
    assert (trace_constraint(A1(3)).applicable, trace_constraint(A1(3)).expected_trace) == (True, 2)
    assert trace_constraint(B2).expected_trace == 0
    assert not trace_constraint(IntMatrix([[2, 0], [0, 2]])).applicable


def test_trace_constraint_exhaustive():
    checked = 0
    r = range(-5, 6)
    for a in r:
        for b in r:
            for c in r:
                for d in r:
                    det = a * d - b * c
                    # eigenvalue 1 iff the characteristic polynomial vanishes at 1
                    if abs(det) != 1 or 1 - (a + d) + det != 0:
                        continue
                    tc = trace_constraint(IntMatrix([[a, b], [c, d]]))
                    assert tc.applicable and tc.expected_trace == a + d == (2 if det == 1 else 0)
                    checked += 1
    assert checked > 100


@given(numeric_maps(), numeric_maps(), numeric_maps())
def test_group_axioms(f, g, h):
    e = ParamAffineMap.identity()
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(f, inverse(f)) == e == compose(inverse(f), f)
    assert compose(e, f) == f == compose(f, e)
    assert inverse(inverse(f)) == f


@given(numeric_maps(), numeric_maps())
def test_conjugation_preserves_fixed_points(f, g):
    assert fixed_point_set(f).is_empty == fixed_point_set(conjugate(f, g)).is_empty


@given(numeric_maps())
def test_fixed_points_are_fixed(f):
    s = fixed_point_set(f)
    if s.point is not None:
        assert f.apply(s.point) == tuple(s.point)
