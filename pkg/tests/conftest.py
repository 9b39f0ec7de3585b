from fractions import Fraction

from hypothesis import settings, strategies as st

from affine_klein.affine import ParamAffineMap
from affine_klein.intlinalg import IntMatrix

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

GENERATORS = [
    IntMatrix([[1, 1], [0, 1]]),
    IntMatrix([[1, 0], [1, 1]]),
    IntMatrix([[0, 1], [1, 0]]),
    IntMatrix([[-1, 0], [0, 1]]),
]

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
positive_rationals = st.fractions(min_value=Fraction(1, 7), max_value=10, max_denominator=7)
small_ints = st.integers(min_value=-5, max_value=5)


@st.composite
def unimodular(draw, max_len=6):
    m = IntMatrix.identity(2)
    for g in draw(st.lists(st.sampled_from(GENERATORS), max_size=max_len)):
        m = m @ (g if draw(st.booleans()) else g.inverse())
    return m


@st.composite
def numeric_maps(draw):
    return ParamAffineMap(draw(unimodular()), (draw(rationals), draw(rationals)))


@st.composite
def int_matrices(draw, max_size=4, bound=5):
    r = draw(st.integers(1, max_size))
    c = draw(st.integers(1, max_size))
    rows = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r))
    return IntMatrix(rows, ncols=c)
