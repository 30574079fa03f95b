"""Bivariate polynomial and truncated-series layer tests.

The resultant oracle here is specialization: Res_Y commutes with X -> x0
whenever the leading coefficients survive the substitution.
"""

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from intbasis.algebra import QQ, UniPoly
from intbasis.poly2 import (
    INF,
    BiPoly,
    XSlices,
    discriminant_y,
    exact_div_bipoly_y,
    kth_root_in_y,
    resultant_y,
)


def bp(d):
    return BiPoly({k: mpq(v) for k, v in d.items()}, QQ)


X = BiPoly.x(QQ)
Y = BiPoly.y(QQ)
ONE = BiPoly.const(1, QQ)


small = st.integers(min_value=-6, max_value=6)


def bipolys(max_dx=3, max_dy=3, max_terms=6):
    def build(pairs):
        d = {}
        for (i, j, c) in pairs:
            if c:
                d[(i, j)] = d.get((i, j), 0) + c
        return BiPoly({k: mpq(v) for k, v in d.items() if v}, QQ)
    return st.lists(
        st.tuples(st.integers(0, max_dx), st.integers(0, max_dy), small),
        min_size=0, max_size=max_terms).map(build)


class TestBiPoly:
    def test_arith_golden(self):
        f = (Y - X) * (Y + X)
        assert f == bp({(0, 2): 1, (2, 0): -1})

    def test_pow(self):
        assert (X + Y) ** 2 == bp({(2, 0): 1, (1, 1): 2, (0, 2): 1})

    @given(bipolys(), bipolys(), bipolys())
    @settings(max_examples=60)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a

    def test_eval(self):
        f = Y ** 3 - X ** 2
        assert f.eval_xy(mpq(2), mpq(3)) == mpq(23)
        assert f.eval_x(mpq(2)) == UniPoly([mpq(-4), 0, 0, mpq(1)], QQ)

    def test_y_shift(self):
        f = Y ** 2
        g = f.y_shift(mpq(1))
        assert g == bp({(0, 2): 1, (0, 1): 2, (0, 0): 1})

    def test_x_shift(self):
        f = X ** 2 - Y
        g = f.x_shift(mpq(3))
        assert g == bp({(2, 0): 1, (1, 0): 6, (0, 0): 9, (0, 1): -1})

    def test_shear(self):
        f = X ** 2
        g = f.shear_x(mpq(1))  # (x+y)^2
        assert g == bp({(2, 0): 1, (1, 1): 2, (0, 2): 1})

    def test_ramified_substitution(self):
        # y -> x^2 (w + y) with w = 1 applied to y^2 - x^4
        f = Y ** 2 - X ** 4
        g = f.y_mul_x_power_shift(mpq(1), 2)
        assert g == bp({(4, 2): 1, (4, 1): 2})

    def test_x_scale_power(self):
        f = X * Y + ONE
        g = f.x_scale_power(mpq(2), 3)
        assert g == bp({(3, 1): 2, (0, 0): 1})

    def test_divide_x_power(self):
        f = X ** 3 * Y + X ** 2
        assert f.divide_x_power(2) == bp({(1, 1): 1, (0, 0): 1})

    @given(bipolys(2, 2, 4), bipolys(2, 2, 4))
    @settings(max_examples=60)
    def test_exact_division(self, a, b):
        if b.is_zero():
            return
        p = a * b
        if p.is_zero():
            return
        assert exact_div_bipoly_y(p, b) == a

    def test_monic_check(self):
        assert (Y ** 3 - X ** 2).is_monic_in_y()
        assert not (X * Y ** 3 - ONE).is_monic_in_y()


class TestResultant:
    def test_disc_cusp(self):
        f = Y ** 3 - X ** 2
        assert discriminant_y(f) == UniPoly([0, 0, 0, 0, mpq(-27)], QQ)

    def test_disc_conic(self):
        # y^2 - x: disc = 4x  (disc of y^2 - c is 4c)
        f = Y ** 2 - X
        assert discriminant_y(f) == UniPoly([0, mpq(4)], QQ)

    @given(bipolys(2, 3, 5), bipolys(2, 3, 5), small)
    @settings(max_examples=150)
    def test_specialization(self, a, b, x0):
        if a.degree_y() < 1 or b.degree_y() < 1:
            return
        la = a.lc_y().evaluate(mpq(x0))
        lb = b.lc_y().evaluate(mpq(x0))
        if not la or not lb:
            return
        r = resultant_y(a, b)
        want = a.eval_x(mpq(x0)).resultant(b.eval_x(mpq(x0)))
        assert r.evaluate(mpq(x0)) == want


class TestKthRoot:
    def test_golden(self):
        g = Y ** 2 + X ** 3
        assert kth_root_in_y(g ** 2, 2) == g

    @given(bipolys(2, 2, 4), st.integers(min_value=2, max_value=3))
    @settings(max_examples=40)
    def test_random_powers(self, a, k):
        g = Y ** 2 + a if a.degree_y() < 2 else Y ** 3 + a
        p = g ** k
        assert kth_root_in_y(p, k) == g


class TestXSlices:
    def test_roundtrip(self):
        f = Y ** 3 - X ** 2 + X * Y
        s = XSlices.from_bipoly(f)
        assert s.trunc is INF
        assert s.to_bipoly() == f

    def test_truncation(self):
        f = ONE + X + X ** 2 + X ** 3
        s = XSlices.from_bipoly(f, trunc=2)
        assert s.to_bipoly() == ONE + X

    @given(bipolys(3, 2, 5), bipolys(3, 2, 5))
    @settings(max_examples=60)
    def test_mul_matches_bipoly(self, a, b):
        sa = XSlices.from_bipoly(a)
        sb = XSlices.from_bipoly(b)
        assert (sa * sb).to_bipoly() == a * b

    def test_mul_precision(self):
        a = XSlices.from_bipoly(ONE + X, trunc=2)
        b = XSlices.from_bipoly(ONE + X, trunc=2)
        p = a * b
        assert p.trunc == 2
        assert p.to_bipoly() == ONE + X.scale(2)

    def test_precision_grows_with_valuation(self):
        a = XSlices.from_bipoly(X, trunc=3)         # x + O(x^3)
        b = XSlices.from_bipoly(X ** 2, trunc=5)    # x^2 + O(x^5)
        assert (a * b).trunc == 5  # min(3+2, 5+1)

    def test_stretch_unstretch(self):
        f = Y ** 2 + X ** 3
        s = XSlices.from_bipoly(f)
        st_ = s.stretch(2, 3)  # x->x^2, y->x^3 y: x^6 y^2 + x^6
        assert st_.to_bipoly() == bp({(6, 2): 1, (6, 0): 1})
        back = st_.divide_x_power(6).unstretch(2, 3, 2)
        # dividing by x^(u*s) then undoing the stretch recovers f
        assert back.to_bipoly() == f

    def test_division(self):
        a = XSlices.from_bipoly(Y ** 2 + X, trunc=6)
        b = XSlices.from_bipoly(Y + X, trunc=6)
        q, r = a.divmod_y(b)
        assert (q * b + r).to_bipoly() == (Y ** 2 + X)

    def test_exact_div(self):
        a = Y ** 2 + X * Y + X ** 3
        b = Y + X ** 2
        prod = XSlices.from_bipoly(
            BiPoly.from_y_coeff_list((a * b).as_y_coeff_list(), QQ), trunc=9)
        bb = XSlices.from_bipoly(b, trunc=9)
        q = prod.exact_div_y(bb)
        assert q.to_bipoly() == a

    def test_unit_series_division(self):
        # divide by a non-monic unit leading coefficient: (1+x) y + 1
        b = XSlices.from_bipoly((ONE + X) * Y + ONE, trunc=5)
        a = XSlices.from_bipoly(Y ** 2, trunc=5)
        q, r = a.divmod_y(b)
        recomposed = (q * b + r).truncate(5)
        assert recomposed.to_bipoly() == a.to_bipoly()


class TestYShift:
    def eval_bipoly(self, p, x0, y0):
        acc = mpq(0)
        for (i, j), c in p.d.items():
            acc += c * x0 ** i * y0 ** j
        return acc

    @given(bipolys(), st.integers(1, 4),
           st.builds(lambda n, d: mpq(n, d), st.integers(-9, 9),
                     st.integers(1, 5)))
    @settings(max_examples=120, deadline=None)
    def test_shift_matches_point_evaluation(self, p, u, c):
        sh = XSlices.from_bipoly(p).y_shift_series(c, u)
        for x0, y0 in [(mpq(2), mpq(3)), (mpq(-1, 2), mpq(5)),
                       (mpq(3), mpq(-1, 3))]:
            want = self.eval_bipoly(p, x0, y0 + c * x0 ** u)
            got = self.eval_bipoly(sh.to_bipoly(), x0, y0)
            assert got == want

    @given(bipolys(), st.integers(1, 3),
           st.builds(lambda n, d: mpq(n, d), st.integers(-6, 6),
                     st.integers(1, 4)))
    @settings(max_examples=80, deadline=None)
    def test_shift_roundtrip(self, p, u, c):
        s = XSlices.from_bipoly(p)
        back = s.y_shift_series(c, u).y_shift_series(-c, u)
        assert back.to_bipoly() == p

    def test_truncation_preserved(self):
        s = XSlices.from_bipoly(Y ** 2 + X * Y, trunc=4)
        sh = s.y_shift_series(mpq(1), 3)
        assert sh.trunc == 4
        # the Y^2 term contributes 2*X^3*Y below the cutoff; the X^6 part
        # and the X^4 from X*Y land beyond it
        assert sh.row(3) == UniPoly([mpq(0), mpq(2)], QQ)


if __name__ == "__main__":
    pytest.main([__file__, "-q"])
