"""Tests for series factor lifting and the branch decomposition.

The backbone oracle throughout is reconstruction: whatever gets split
must multiply back to the input modulo X^(d+1), checked with plain
BiPoly arithmetic rather than the lifting code itself.  Several fixture
curves are built as explicit products, so the true factors are known
polynomials and the splitting routines can be held to exact answers, not
just congruences.
"""

import pytest
from gmpy2 import mpq
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from intbasis.algebra import QQ, UniPoly, factor_univariate
from intbasis.errors import ContractViolation, PrecisionError, StructuralError
from intbasis.hensel import (BranchDecomposition, block_splitting,
                             class_factor, hensel_lift, segment_splitting,
                             separate_unit, splitting)
from intbasis.poly2 import INF, BiPoly, XSlices
from intbasis.puiseux import newton_puiseux, valuation_at


def bp(d):
    return BiPoly({k: mpq(v) for k, v in d.items()}, QQ)


def up(cs):
    return UniPoly([mpq(c) for c in cs], QQ)


def mod_x(p, n):
    if isinstance(p, XSlices):
        p = p.to_bipoly()
    return BiPoly({k: c for k, c in p.d.items() if k[0] < n}, p.f)


def eq_mod(a, b, n):
    return mod_x(a, n) == mod_x(b, n)


# three lines through the origin plus a high-order tail
LIFT3 = bp({(0, 3): 1, (1, 2): 2, (2, 1): -1, (3, 0): -2, (0, 7): 1})
assert LIFT3 == (bp({(0, 1): 1, (1, 0): -1}) * bp({(0, 1): 1, (1, 0): 1})
                 * bp({(0, 1): 1, (1, 0): 2}) + bp({(0, 7): 1}))

# two tangent-distinct Weierstrass pieces glued by a Y^6 perturbation
SEP8 = bp({(0, 6): 1, (0, 4): 1, (2, 3): 4, (4, 2): 4, (5, 2): 1,
           (3, 2): 2, (5, 1): 8, (7, 0): 8, (8, 0): 2})
assert SEP8 == (bp({(0, 2): 1, (3, 0): 2})
                * (bp({(0, 1): 1, (2, 0): 2}) ** 2 + bp({(5, 0): 1}))
                + bp({(0, 6): 1}))

# the curve with branches of initial exponents 2/3 and 3/2
TWO = bp({(0, 6): 1, (0, 5): 1, (3, 3): -1, (2, 2): 1, (5, 0): -1})
assert TWO == (bp({(0, 3): 1, (2, 0): 1}) * bp({(0, 2): 1, (3, 0): -1})
               + bp({(0, 6): 1}))

# a single conjugacy class of size eight
DEG8 = bp({(0, 8): 1, (3, 7): -4, (5, 7): 4, (3, 6): 4, (5, 6): -4,
           (6, 6): -10, (5, 5): 4, (6, 5): -6, (6, 4): 6, (8, 4): -8,
           (8, 3): 8, (9, 3): -4, (9, 2): 4, (10, 2): 4, (11, 1): 4,
           (12, 0): 1})

# two conjugate classes sharing one block: initial terms +-sqrt(2) X^(1/2)
PAIR_A = bp({(0, 1): 1, (1, 0): -2}) ** 2 - bp({(1, 0): 2})
PAIR_B = bp({(0, 1): 1, (1, 0): 2}) ** 2 - bp({(1, 0): 2})
PAIR4 = PAIR_A * PAIR_B

# one segment, two blocks, three classes: a rational expansion plus two
# quadratic pairs that agree through their fractional step
BLK_LIN = bp({(0, 1): 1, (1, 0): -1, (2, 0): -3})
BLK_Q1 = bp({(0, 1): 1, (1, 0): -1, (3, 0): -1}) ** 2 + bp({(5, 0): 1})
BLK_Q2 = bp({(0, 1): 1, (1, 0): -1, (4, 0): -1}) ** 2 + bp({(5, 0): 1})
BLOCKS5 = BLK_LIN * BLK_Q1 * BLK_Q2


# ---------------------------------------------------------------------------
# hensel_lift


def test_lift_matches_hand_computation():
    # both corrections worked out by hand from the degree-by-degree system
    g, h = hensel_lift(LIFT3, up([1, 0, 0, 0, 1]), up([0, 0, 0, 1]), 2)
    assert g.to_bipoly() == bp({(0, 0): 1, (0, 4): 1, (1, 3): -2, (2, 2): 5})
    assert h.to_bipoly() == bp({(0, 3): 1, (1, 2): 2, (2, 1): -1})
    assert eq_mod(g.to_bipoly() * h.to_bipoly(), LIFT3, 3)
    assert g.eval_x0() == up([1, 0, 0, 0, 1])
    assert h.eval_x0() == up([0, 0, 0, 1])


def test_lift_trivial_cofactor():
    g, h = hensel_lift(LIFT3, up([0, 0, 0, 1, 0, 0, 0, 1]), up([1]), 5)
    assert g.to_bipoly() == mod_x(LIFT3, 6)
    assert h.to_bipoly() == bp({(0, 0): 1})


def test_lift_is_deterministic_and_prefix_stable():
    args = (LIFT3, up([1, 0, 0, 0, 1]), up([0, 0, 0, 1]))
    g2, h2 = hensel_lift(*args, 2)
    g6, h6 = hensel_lift(*args, 6)
    assert eq_mod(g6, g2, 3) and eq_mod(h6, h2, 3)
    g6b, h6b = hensel_lift(*args, 6)
    assert g6.to_bipoly() == g6b.to_bipoly()
    assert h6.to_bipoly() == h6b.to_bipoly()


def test_lift_rejects_bad_input():
    with pytest.raises(ContractViolation):
        hensel_lift(LIFT3, up([1, 1]), up([0, 0, 1]), 2)   # wrong product
    # (Y+1)^2 (Y-1) at X=0; the two halves below share the factor Y+1
    shared = bp({(0, 3): 1, (0, 2): 1, (0, 1): -1, (0, 0): -1, (1, 1): 1})
    with pytest.raises(ContractViolation):
        hensel_lift(shared, up([1, 1]), up([-1, 0, 1]), 2)
    with pytest.raises(ContractViolation):
        hensel_lift(bp({(0, 2): 2, (1, 0): 1}), up([2]), up([0, 0, 1]), 1)
    short = XSlices.from_bipoly(LIFT3, trunc=2)
    with pytest.raises(PrecisionError) as err:
        hensel_lift(short, up([1, 0, 0, 0, 1]), up([0, 0, 0, 1]), 4)
    assert err.value.needed == 5


@settings(max_examples=120, deadline=None)
@given(st.lists(st.tuples(st.integers(min_value=0, max_value=3),
                          st.integers(min_value=0, max_value=4),
                          st.integers(min_value=-3, max_value=3)),
                max_size=8))
def test_lift_splits_random_halves(entries):
    d = {(0, 5): mpq(1)}
    for (i, j, c) in entries:
        if j < 5 and c:
            d[(i, j)] = mpq(c)
    F = BiPoly(d, QQ)
    parts = factor_univariate(XSlices.from_bipoly(F).eval_x0(), QQ)
    assume(len(parts) >= 2)
    g0 = parts[0][0] ** parts[0][1]
    h0 = up([1])
    for q, k in parts[1:]:
        h0 = h0 * q ** k
    g, h = hensel_lift(F, g0, h0, 6)
    assert eq_mod(g.to_bipoly() * h.to_bipoly(), F, 7)
    assert g.is_monic_in_y() and h.is_monic_in_y()
    assert g.eval_x0() == g0 and h.eval_x0() == h0


# ---------------------------------------------------------------------------
# separate_unit


def test_unit_separation_three_lines():
    f0, g = separate_unit(LIFT3, 2)
    assert f0.to_bipoly() == bp({(0, 0): 1, (0, 4): 1, (1, 3): -2, (2, 2): 5})
    assert g.to_bipoly() == bp({(0, 3): 1, (1, 2): 2, (2, 1): -1})


SEP8_F0 = bp({(0, 2): 1, (0, 0): 1, (2, 1): -4, (3, 0): -2, (4, 0): 12,
              (5, 1): -8, (5, 0): -1, (6, 1): 32, (6, 0): -4, (7, 1): -8,
              (7, 0): 56, (8, 1): -48, (8, 0): -210})
SEP8_G = bp({(0, 4): 1, (2, 3): 4, (3, 2): 2, (4, 2): 4, (5, 3): 8,
             (5, 2): 1, (5, 1): 8, (6, 3): -32, (6, 2): 4, (7, 3): 8,
             (7, 2): 8, (7, 0): 8, (8, 3): 48, (8, 2): -46, (8, 1): 16,
             (8, 0): 2})


def test_unit_separation_order_eight():
    f0, g = separate_unit(SEP8, 8)
    assert f0.to_bipoly() == SEP8_F0
    assert g.to_bipoly() == SEP8_G
    assert eq_mod(f0.to_bipoly() * g.to_bipoly(), SEP8, 9)
    assert not QQ.is_zero(f0.eval_x0()[0])
    assert g.eval_x0() == up([0, 0, 0, 0, 1])


def test_unit_separation_pure_weierstrass():
    f0, g = separate_unit(bp({(0, 3): 1, (2, 0): -1}), 6)
    assert f0.to_bipoly() == bp({(0, 0): 1})
    assert g.to_bipoly() == bp({(0, 3): 1, (2, 0): -1})
    f0, g = separate_unit(DEG8, 6)
    assert f0.to_bipoly() == bp({(0, 0): 1})
    assert g.to_bipoly() == mod_x(DEG8, 7)


def test_unit_separation_rejects_nonvanishing_origin():
    with pytest.raises(ContractViolation):
        separate_unit(bp({(0, 2): 1, (0, 0): 1, (1, 0): 1}), 4)


# ---------------------------------------------------------------------------
# segment_splitting


SEG8_A = bp({(0, 2): 1, (3, 0): 2, (5, 1): 8, (6, 0): 4, (6, 1): -32,
             (7, 0): -24, (7, 1): 104, (8, 0): 82, (8, 1): -288})
SEG8_B = bp({(0, 2): 1, (2, 1): 4, (4, 0): 4, (5, 0): 1, (7, 1): -96,
             (8, 1): 336})


def test_segment_split_order_eight():
    # the rescaled lift reads the input well past X^8, so developing the
    # factors to that order takes the Weierstrass part modulo X^15
    _, g = separate_unit(SEP8, 14)
    parts = segment_splitting(g, 8)
    assert len(parts) == 2
    assert parts[0].to_bipoly() == SEG8_A
    assert parts[1].to_bipoly() == SEG8_B
    assert eq_mod(parts[0].to_bipoly() * parts[1].to_bipoly(), g.to_bipoly(),
                  9)
    # each factor refines one of the exact pieces SEP8 was built from
    assert eq_mod(parts[0], bp({(0, 2): 1, (3, 0): 2}), 5)
    assert eq_mod(parts[1], bp({(0, 1): 1, (2, 0): 2}) ** 2 + bp({(5, 0): 1}),
                  7)
    for p in parts:
        again = segment_splitting(p, 8)
        assert len(again) == 1
        assert again[0].to_bipoly() == p.to_bipoly()


def test_segment_split_is_insensitive_to_extra_precision():
    _, g_lo = separate_unit(SEP8, 14)
    _, g_hi = separate_unit(SEP8, 30)
    lo = segment_splitting(g_lo, 8)
    hi = segment_splitting(g_hi, 8)
    assert [p.to_bipoly() for p in lo] == [p.to_bipoly() for p in hi]


def test_segment_split_single_segment():
    cusp = bp({(0, 2): 1, (3, 0): 2})
    parts = segment_splitting(cusp, 6)
    assert len(parts) == 1
    assert parts[0].to_bipoly() == cusp
    parts = segment_splitting(DEG8, 6)
    assert len(parts) == 1
    assert parts[0].to_bipoly() == mod_x(DEG8, 7)


def test_segment_split_exact_product_of_two_segments():
    a = bp({(0, 3): 1, (2, 0): 1})
    b = bp({(0, 2): 1, (3, 0): -1})
    parts = segment_splitting(a * b, 6)
    assert [p.to_bipoly() for p in parts] == [a, b]
    for p in parts:
        assert [q.to_bipoly() for q in segment_splitting(p, 6)] \
            == [p.to_bipoly()]


def test_segment_split_rejects_bad_input():
    with pytest.raises(ContractViolation):
        segment_splitting(LIFT3, 4)         # unit part still attached
    short = XSlices.from_bipoly(TWO, trunc=3)
    with pytest.raises(PrecisionError) as err:
        segment_splitting(short, 8)
    assert err.value.needed == 9
    # enough slices to see the polygon, not enough to run the lift: the
    # error reports how much input the rescaled lift would consume
    _, g = separate_unit(SEP8, 8)
    with pytest.raises(PrecisionError) as err:
        segment_splitting(g, 8)
    assert err.value.needed == 15


# ---------------------------------------------------------------------------
# block_splitting


def test_block_split_single_block():
    for curve, d in ((bp({(0, 3): 1, (2, 0): 1}), 6),
                     (bp({(0, 3): 1, (2, 0): -1}), 6),
                     (DEG8, 6)):
        parts = block_splitting(curve, d)
        assert len(parts) == 1
        assert parts[0].to_bipoly() == mod_x(curve, d + 1)


def test_block_split_degrees_one_and_four():
    parts = block_splitting(BLOCKS5, 14)
    assert [p.y_degree() for p in parts] == [1, 4]
    assert parts[0].to_bipoly() == BLK_LIN
    assert parts[1].to_bipoly() == BLK_Q1 * BLK_Q2
    prod = parts[0].to_bipoly() * parts[1].to_bipoly()
    assert eq_mod(prod, BLOCKS5, 15)


def test_block_split_shared_rational_part():
    a = bp({(0, 1): 1, (1, 0): -1}) ** 2 - bp({(3, 0): 1})
    b = bp({(0, 1): 1, (1, 0): -1}) ** 2 - bp({(3, 0): 2})
    parts = block_splitting(a * b, 8)
    assert sorted(repr(p.to_bipoly()) for p in parts) \
        == sorted([repr(a), repr(b)])
    prod = parts[0].to_bipoly() * parts[1].to_bipoly()
    assert eq_mod(prod, a * b, 9)


def test_block_split_rejects_multi_segment():
    two_seg = bp({(0, 3): 1, (2, 0): 1}) * bp({(0, 2): 1, (3, 0): -1})
    with pytest.raises(ContractViolation):
        block_splitting(two_seg, 6)


# ---------------------------------------------------------------------------
# splitting


def test_branches_two_segment_curve():
    dec = splitting(TWO, 3)
    assert isinstance(dec, BranchDecomposition)
    assert dec.unit.to_bipoly() == bp({(0, 1): 1, (3, 0): -1, (2, 0): -1,
                                       (0, 0): 1})
    assert len(dec.branches) == 2
    p1, c1 = dec.branches[0]
    p2, c2 = dec.branches[1]
    assert p1.to_bipoly() == bp({(0, 3): 1, (3, 2): 1, (2, 2): 1,
                                 (2, 1): -1, (2, 0): 1})
    assert p2.to_bipoly() == bp({(0, 2): 1, (3, 0): -1})
    assert c1.class_size == 3 and c1.initial_exponent() == mpq(2, 3)
    assert c2.class_size == 2 and c2.initial_exponent() == mpq(3, 2)
    prod = dec.unit.to_bipoly() * p1.to_bipoly() * p2.to_bipoly()
    assert eq_mod(prod, TWO, 4)


def test_branches_single_class_curve():
    dec = splitting(DEG8, 10)
    assert dec.unit.to_bipoly() == bp({(0, 0): 1})
    assert len(dec.branches) == 1
    p, c = dec.branches[0]
    assert c.class_size == 8
    assert p.to_bipoly() == mod_x(DEG8, 11)


def test_branches_smooth_origin():
    f = bp({(0, 2): 1, (0, 1): 1, (1, 0): 1})
    dec = splitting(f, 4)
    assert len(dec.branches) == 1
    p, c = dec.branches[0]
    assert c.class_size == 1
    # the branch solves Y^2+Y+X=0: coefficients are signed Catalan numbers
    assert p.to_bipoly() == bp({(0, 1): 1, (1, 0): 1, (2, 0): 1, (3, 0): 2,
                                (4, 0): 5})
    assert eq_mod(dec.unit.to_bipoly() * p.to_bipoly(), f, 5)

    g = bp({(0, 2): 1, (0, 1): 1, (0, 0): 1, (1, 1): 1})
    dec = splitting(g, 3)
    assert dec.branches == []
    assert dec.unit.to_bipoly() == mod_x(g, 4)


def test_branches_conjugate_pair_in_one_block():
    dec = splitting(PAIR4, 5)
    assert dec.unit.to_bipoly() == bp({(0, 0): 1})
    assert sorted(repr(p.to_bipoly()) for p, _ in dec.branches) \
        == sorted([repr(PAIR_A), repr(PAIR_B)])
    assert [c.class_size for _, c in dec.branches] == [2, 2]
    for p, c in dec.branches:
        assert valuation_at(p.to_bipoly(), c) == INF
    crossed = [valuation_at(p.to_bipoly(), c)
               for p, _ in dec.branches for _, c in dec.branches
               if valuation_at(p.to_bipoly(), c) != INF]
    assert crossed == [mpq(3, 2), mpq(3, 2)]


def test_branches_block_with_two_classes():
    dec = splitting(BLOCKS5, 14)
    assert dec.unit.to_bipoly() == bp({(0, 0): 1})
    assert sorted(repr(p.to_bipoly()) for p, _ in dec.branches) \
        == sorted([repr(BLK_LIN), repr(BLK_Q1), repr(BLK_Q2)])
    assert sorted(c.class_size for _, c in dec.branches) == [1, 2, 2]
    prod = dec.unit.to_bipoly()
    for p, _ in dec.branches:
        prod = prod * p.to_bipoly()
    assert eq_mod(prod, BLOCKS5, 15)
    # contact between the two quadratic classes is at X^(11/2)
    quads = [(p, c) for p, c in dec.branches if c.class_size == 2]
    (pa, ca), (pb, cb) = quads
    assert valuation_at(pa.to_bipoly(), cb) == mpq(11, 2)
    assert valuation_at(pb.to_bipoly(), ca) == mpq(11, 2)


def test_branches_raise_on_short_input():
    short = XSlices.from_bipoly(TWO, trunc=3)
    with pytest.raises(PrecisionError) as err:
        splitting(short, 5)
    assert err.value.needed == 6


def small_curves():
    def build(n, entries):
        d = {(0, n): mpq(1)}
        for (i, j, c) in entries:
            if j < n and c:
                d[(i, j)] = mpq(c)
        return BiPoly(d, QQ)
    return st.builds(
        build,
        st.integers(min_value=2, max_value=4),
        st.lists(st.tuples(st.integers(min_value=0, max_value=5),
                           st.integers(min_value=0, max_value=3),
                           st.integers(min_value=-4, max_value=4)),
                 max_size=10))


@settings(max_examples=120, deadline=None)
@given(small_curves())
def test_random_branch_products_reconstruct(f):
    try:
        dec = splitting(f, 4)
    except (StructuralError, ContractViolation, PrecisionError):
        assume(False)
    prod = dec.unit.to_bipoly()
    degs = dec.unit.y_degree()
    for p, c in dec.branches:
        prod = prod * p.to_bipoly()
        degs += p.y_degree()
        assert p.is_monic_in_y()
        assert p.eval_x0() == UniPoly([mpq(0)] * p.y_degree() + [mpq(1)], QQ)
        assert p.y_degree() == c.class_size
    assert eq_mod(prod, f, 5)
    assert degs == f.degree_y()
    assert not QQ.is_zero(dec.unit.eval_x0()[0])
    exps = [c.initial_exponent() for _, c in dec.branches]
    assert exps == sorted(exps)


# ---------------------------------------------------------------------------
# class products


def test_class_product_single_class_curve():
    classes = newton_puiseux(DEG8)
    assert len(classes) == 1
    p = class_factor(classes[0], 10)
    assert p.to_bipoly() == mod_x(DEG8, 11)


def test_class_product_zero_class():
    classes = newton_puiseux(bp({(0, 1): 1}))
    assert len(classes) == 1
    p = class_factor(classes[0], 5)
    assert p.to_bipoly() == bp({(0, 1): 1})


def test_class_products_exact_quadratics():
    classes = newton_puiseux(BLOCKS5)
    quads = [c for c in classes if c.class_size == 2]
    assert len(quads) == 2
    prods = sorted(repr(class_factor(c, 14).to_bipoly()) for c in quads)
    assert prods == sorted([repr(BLK_Q1), repr(BLK_Q2)])


def test_class_product_needs_vanishing_class():
    classes = newton_puiseux(bp({(0, 2): 1, (0, 1): 1, (1, 0): 1}),
                             include_units=True)
    unit = [c for c in classes if c.initial_exponent() is None]
    assert unit
    with pytest.raises(ContractViolation):
        class_factor(unit[0], 4)
