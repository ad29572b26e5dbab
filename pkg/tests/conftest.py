import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from nawelch.scalar import Poly, Scalar

t_sym = sympy.Symbol("t")


def to_sympy(x: Scalar):
    num = sum(sympy.Rational(c.numerator, c.denominator) * t_sym**k for k, c in enumerate(x.num.coeffs))
    den = sum(sympy.Rational(c.numerator, c.denominator) * t_sym**k for k, c in enumerate(x.den.coeffs))
    return sympy.cancel(num / den)


def sympy_valuation(expr):
    """Order at t = 0 of a rational function, computed independently via sympy."""
    expr = sympy.cancel(expr)
    if expr == 0:
        return float("inf")
    num, den = sympy.fraction(expr)
    def order(p):
        poly = sympy.Poly(p, t_sym)
        return min(m[0] for m in poly.monoms())
    return order(num) - order(den)


def rand_scalar(rng: random.Random, lo: int = -3, hi: int = 5, allow_zero: bool = True) -> Scalar:
    """Random Q(t) element whose valuation lies in [lo, hi] (or zero)."""
    if allow_zero and rng.random() < 0.05:
        return Scalar(0)
    v = rng.randint(lo, hi)
    unit_num = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 7), rng.randint(1, 4))]
    unit_num += [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(rng.randint(0, 2))]
    unit_den = [Fraction(1)] + [Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(0, 2))]
    num = Poly([0] * max(v, 0) + unit_num)
    den = Poly([0] * max(-v, 0) + unit_den)
    return Scalar(num, den)


@pytest.fixture
def rng():
    return random.Random(20221014)


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def scalars(draw, nonzero=False):
    num = draw(st.lists(small_fractions, min_size=0 if not nonzero else 1, max_size=3))
    shift = draw(st.integers(0, 2))
    if nonzero and not any(num):
        num = [Fraction(1)]
    den = draw(st.lists(small_fractions, min_size=0, max_size=2)) + [Fraction(1)]
    return Scalar(Poly([0] * shift + num), Poly(den))
