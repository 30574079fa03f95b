"""Splitting a curve into its branches at the origin by factor lifting.

A monic polynomial f in K[X][Y] factors over the power series ring
K[[X]][Y] as a unit times one monic Weierstrass polynomial per conjugacy
class of Puiseux expansions vanishing at the origin.  Everything here
develops truncations of those factors while computing only in K.

The workhorse is Hensel's lemma: a factorization of f(0, Y) into two
coprime monic parts lifts, uniquely and degree by degree in X, to a
factorization of f modulo any power of X.  That alone separates the unit
(the part of f(0, Y) not vanishing at Y = 0) from the Weierstrass part.
Going further needs a change of scale: substituting X -> X^v, Y -> X^u Y
and dividing by the appropriate power of X moves the expansions of
initial exponent u/v down to X-order zero, where their initial
coefficients become roots of the new f(0, Y) and Hensel lifting can see
them.  Expansions whose initial coefficients differ by a v-th root of
unity stay together under that substitution, so the factors of f(0, Y)
are grouped by the minimal polynomial of the v-th power of their roots
before splitting; what such a group still mixes -- several conjugacy
classes with the same leading behaviour -- is resolved at the end by
multiplying (Y - gamma) over the conjugates of each class and collapsing
the symmetric functions back to K with traces.

Precision is tracked honestly throughout.  The change of scale makes a
lift to order v*d read the input beyond X^d, so developing factors
modulo X^(d+1) genuinely consumes more of the input than d+1 slices; how
much more depends on the Newton polygon met along the way.  Every
splitting routine checks what it is about to consume and raises a
precision error naming the truncation it would need, and callers that
own enough of the series (like the full decomposition below, which can
redevelop its Weierstrass part from the curve) deepen and try again.
"""

from gmpy2 import mpq

from .algebra import UniPoly, factor_univariate, trace_down_to
from .errors import ContractViolation, PrecisionError, StructuralError
from .poly2 import INF, BiPoly, XSlices, resultant_y


def _as_slices(p):
    if isinstance(p, BiPoly):
        return XSlices.from_bipoly(p)
    if isinstance(p, XSlices):
        return p
    raise ContractViolation("expected a bivariate polynomial or a series")


def _check_order(w, d):
    if d < 0:
        raise ContractViolation("development order must be nonnegative")
    if w.trunc != INF and w.trunc < d + 1:
        raise PrecisionError(
            "input known only below X^%s but development to X^%d was asked"
            % (w.trunc, d), needed=d + 1)


def _bump(err, current):
    """Next working order after a precision shortfall, always progressing."""
    needed = getattr(err, "needed", None) or 0
    return max(needed, current + 1)


# ---------------------------------------------------------------------------
# Hensel lifting


def hensel_lift(F, g0, h0, d):
    """Lift the coprime factorization F(0,Y) = g0*h0 to F = g*h mod X^(d+1).

    F must be monic in Y and g0, h0 monic and coprime; the returned pair
    (g, h) is the unique one with g(0,Y) = g0, h(0,Y) = h0.
    """
    F = _as_slices(F)
    d = int(d)
    _check_order(F, d)
    if not F.is_monic_in_y():
        raise ContractViolation("lifting needs a polynomial monic in Y")
    f = F.f
    g0 = UniPoly([f.coerce(c) for c in g0.c], f)
    h0 = UniPoly([f.coerce(c) for c in h0.c], f)
    for p in (g0, h0):
        if p.degree < 0 or not f.eq(p.lc(), f.one):
            raise ContractViolation("initial factors must be monic")
    if F.eval_x0() != g0 * h0:
        raise ContractViolation(
            "initial factors do not multiply to F at X = 0")
    gcd, _s, t = g0.xgcd(h0)
    if gcd.degree != 0:
        raise ContractViolation("initial factors share a common root")
    grows, hrows = [g0], [h0]
    for m in range(1, d + 1):
        acc = F.row(m)
        for i in range(1, m):
            acc = acc - grows[i] * hrows[m - i]
        if acc.is_zero():
            a = b = UniPoly.zero(f)
        else:
            # solve a*h0 + b*g0 = acc with deg a < deg g0, deg b < deg h0
            a = (t * acc) % g0
            b = (acc - a * h0).exact_div(g0)
        grows.append(a)
        hrows.append(b)
    return XSlices(grows, d + 1, f), XSlices(hrows, d + 1, f)


def separate_unit(f, d):
    """Split f into a unit times its Weierstrass part, modulo X^(d+1).

    Returns (f0, g) with f ≡ f0*g, f0(0,0) != 0 and g(0,Y) = Y^k where k
    is the number of expansions vanishing at the origin.
    """
    w = _as_slices(f)
    d = int(d)
    _check_order(w, d)
    if not w.is_monic_in_y():
        raise ContractViolation("the curve must be monic in Y")
    field = w.f
    p0 = w.eval_x0()
    k = 0
    while k <= p0.degree and field.is_zero(p0[k]):
        k += 1
    if k == 0:
        raise ContractViolation("no expansions vanish at the origin")
    g0 = UniPoly(list(p0.c[k:]), field)
    h0 = UniPoly([field.zero] * k + [field.one], field)
    return hensel_lift(w, g0, h0, d)


# ---------------------------------------------------------------------------
# the Newton polygon of the visible support


def _require_weierstrass(w):
    if not w.is_monic_in_y():
        raise ContractViolation("expected a polynomial monic in Y")
    p0 = w.eval_x0()
    s = w.y_degree()
    if any(not w.f.is_zero(p0[j]) for j in range(min(s, p0.degree + 1))):
        raise ContractViolation(
            "every expansion must vanish at the origin; separate the unit "
            "part first")


def _newton_faces(work):
    """Faces of the Newton polygon the known slices can see.

    Returns (faces, k): faces is a list of (u, v, width) with slopes u/v
    strictly increasing, walking the lower hull of the support from the
    monic corner (Y^s, X^0) down; k is the Y-degree where the visible
    support stops (0 when the hull reaches the Y^0 column).
    """
    f = work.f
    s = work.y_degree()
    col = {}
    for m, r in enumerate(work.known_rows()):
        for j in range(min(r.degree, s - 1) + 1):
            if j not in col and not f.is_zero(r[j]):
                col[j] = m
    pts = [(s, 0)] + sorted(col.items(), reverse=True)
    hull = [pts[0]]
    for p in pts[1:]:
        while len(hull) >= 2:
            (j1, m1), (j2, m2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or above the chord
            if (m2 - m1) * (j2 - p[0]) >= (p[1] - m2) * (j1 - j2):
                hull.pop()
            else:
                break
        hull.append(p)
    faces = []
    for a in range(len(hull) - 1):
        (j1, m1), (j2, m2) = hull[a], hull[a + 1]
        t = mpq(m2 - m1, j1 - j2)
        faces.append((int(t.numerator), int(t.denominator), j1 - j2))
    return faces, hull[-1][0]


def _rescale(work, s, u, v):
    """X -> X^v, Y -> X^u*Y, divided by X^(su): expansions of exponent u/v
    move down to X-order zero."""
    return work.stretch(v, u).divide_x_power(s * u)


# ---------------------------------------------------------------------------
# splitting along the polygon


def segment_splitting(g, d):
    """One factor of g per distinct initial exponent, modulo X^(d+1).

    g must be monic with g(0,Y) = Y^s.  The factors come back ordered by
    increasing initial exponent and multiply to g modulo X^(d+1).  The
    internal rescaled lifts read the input beyond X^d, so a precision
    error reporting the truncation actually needed may be raised.
    """
    w = _as_slices(g)
    d = int(d)
    _check_order(w, d)
    _require_weierstrass(w)
    return _segments(w, d, True)


def _segments(work, floor, top):
    f = work.f
    term = floor + 1
    if work.trunc != INF and work.trunc < term:
        raise PrecisionError(
            "factor development to order %d outruns the input" % floor,
            needed=term)
    s = work.y_degree()
    if s <= 1:
        return [work.truncate(term)]
    faces, k = _newton_faces(work)
    if not faces:
        # nothing below Y^s in sight: either g really is Y^s, or the
        # expansions only leave Y^s beyond what the data shows
        if top and work.trunc != INF:
            raise PrecisionError(
                "the input looks like Y^%d out to its truncation" % s,
                needed=2 * int(work.trunc))
        return [work.truncate(term)]
    if len(faces) == 1 and k == 0:
        return [work.truncate(term)]      # a single segment spans all of g
    u, v, _wd = faces[0]

    def plan(tail_need):
        # a lift in the rescaled chart reads the input well beyond the
        # output order; refuse before changing scale when it cannot fit
        lift_order = v * max(floor, tail_need - 1)
        need = -(-(lift_order + 1 + s * u) // v)
        if work.trunc != INF and work.trunc < need:
            raise PrecisionError(
                "splitting off the exponent-%d/%d factor to order %d needs "
                "the input modulo X^%d" % (u, v, floor, need), needed=need)
        return lift_order

    tail_need = term
    lift_order = plan(tail_need)
    F = _rescale(work, s, u, v)
    F0 = F.eval_x0()
    ww = 0
    while ww <= F0.degree and f.is_zero(F0[ww]):
        ww += 1
    G0 = UniPoly(list(F0.c[ww:]), f)
    H0 = UniPoly([f.zero] * ww + [f.one], f)
    while True:
        G, H = hensel_lift(F, G0, H0, lift_order)
        g1 = G.unstretch(v, u, s - ww)
        h1 = H.unstretch(v, u, ww)
        try:
            rest = _segments(h1, floor, False)
        except PrecisionError as e:
            # the tail needs a deeper development: lift further and retry
            tail_need = _bump(e, tail_need)
            lift_order = plan(tail_need)
            continue
        return [g1.truncate(term)] + rest


# ---------------------------------------------------------------------------
# splitting a segment into blocks


def _power_minimal_poly(sigma, v, field):
    """Minimal polynomial of the v-th power of a root of sigma.

    Roots whose v-th powers agree up to conjugacy are exactly the ones
    mixed by the rescaling X -> X^v, so this is the key that decides
    which face factors must stay together."""
    if v == 1:
        return sigma
    a = BiPoly({(0, j): c for j, c in enumerate(sigma.c)
                if not field.is_zero(c)}, field)
    b = BiPoly({(1, 0): field.one, (0, v): field.neg(field.one)}, field)
    res = resultant_y(a, b).monic()
    parts = factor_univariate(res, field)
    if len(parts) != 1:
        raise StructuralError(
            "the v-th powers of conjugate roots split into several classes")
    return parts[0][0]


def _twist_groups(parts, v, field):
    """Face factors grouped by the minimal polynomial of their roots'
    v-th powers, in order of first appearance."""
    groups = []
    for sigma, k in parts:
        rho = _power_minimal_poly(sigma, v, field)
        key = (rho.degree, tuple(field.sort_key(c) for c in rho.c))
        for gk, members in groups:
            if gk == key:
                members.append((sigma, k))
                break
        else:
            groups.append((key, [(sigma, k)]))
    return [members for _gk, members in groups]


def _is_single_linear(members):
    return len(members) == 1 and members[0][0].degree == 1


def block_splitting(g, d):
    """One factor of g per block of expansions, modulo X^(d+1).

    g must be monic Weierstrass with all expansions in a single segment.
    Blocks merge expansions whose terms agree through their first
    non-rational step; what the requested order cannot tell apart stays
    in one factor.
    """
    w = _as_slices(g)
    d = int(d)
    _check_order(w, d)
    _require_weierstrass(w)
    return _blocks(w, d, True)


def _blocks(work, floor, top):
    f = work.f
    term = floor + 1
    if work.trunc != INF and work.trunc < term:
        raise PrecisionError(
            "factor development to order %d outruns the input" % floor,
            needed=term)
    s = work.y_degree()
    if s <= 1:
        return [work.truncate(term)]
    faces, k = _newton_faces(work)
    if not faces:
        return [work.truncate(term)]
    if len(faces) > 1 or k > 0:
        if top:
            raise ContractViolation("expansions span more than one segment")
        return [work.truncate(term)]
    u, v, _wd = faces[0]
    F = _rescale(work, s, u, v)
    F0 = F.eval_x0()
    groups = _twist_groups(factor_univariate(F0, f), v, f)
    if len(groups) == 1:
        if v == 1 and _is_single_linear(groups[0]):
            # a rational term c*X^u shared by every expansion: peel it off
            # and split whatever the tails do
            c = f.neg(groups[0][0][0][0])
            shifted = work.y_shift_series(c, u)
            back = f.neg(c)
            depth = floor
            while True:
                if work.trunc != INF and work.trunc < depth + 1:
                    raise PrecisionError(
                        "block splitting to order %d needs the input modulo "
                        "X^%d" % (floor, depth + 1), needed=depth + 1)
                try:
                    out = []
                    for part in _segments(shifted, depth, False):
                        out.extend(_blocks(part, floor, False))
                    return [p.y_shift_series(back, u) for p in out]
                except PrecisionError as e:
                    depth = _bump(e, depth + 1) - 1
        return [work.truncate(term)]
    # several groups: peel the first off, then split both halves further
    G0 = UniPoly([f.one], f)
    for sigma, kk in groups[0]:
        G0 = G0 * sigma ** kk
    H0 = F0.exact_div(G0)

    def plan(tail_need):
        lift_order = v * max(floor, tail_need - 1)
        need = -(-(lift_order + 1 + s * u) // v)
        if work.trunc != INF and work.trunc < need:
            raise PrecisionError(
                "block splitting to order %d needs the input modulo X^%d"
                % (floor, need), needed=need)
        return lift_order

    tail_need = term
    lift_order = plan(tail_need)
    while True:
        G, H = hensel_lift(F, G0, H0, lift_order)
        g1 = G.unstretch(v, u, G0.degree)
        h1 = H.unstretch(v, u, H0.degree)
        try:
            out = []
            if v == 1 and _is_single_linear(groups[0]):
                # the group's expansions still share their first term
                out.extend(_blocks(g1, floor, False))
            else:
                out.append(g1.truncate(term))
            out.extend(_blocks(h1, floor, False))
            return out
        except PrecisionError as e:
            tail_need = _bump(e, tail_need)
            lift_order = plan(tail_need)


# ---------------------------------------------------------------------------
# products over a conjugacy class


def class_factor(cls, d):
    """The monic factor with the expansions of one conjugacy class as its
    roots, developed modulo X^(d+1) over the ground field.

    Computed from the class parametrization X = lam*T^v, Y = S(T): the
    power sums of the class expansions are twist sums of powers of S, so
    only every v-th coefficient survives and its trace lands in the
    ground field; Newton's identities then rebuild the coefficients.
    """
    d = int(d)
    if d < 0:
        raise ContractViolation("development order must be nonnegative")
    t0 = cls.initial_exponent()
    if t0 is None:
        raise ContractViolation("expected a class of vanishing expansions")
    ground = cls.ground
    m = cls.class_size
    if t0 == INF:
        # the zero expansion: the factor is Y itself
        return XSlices([UniPoly([ground.zero] * m + [ground.one], ground)],
                       d + 1, ground)
    v = cls.ramification
    cap = v * d + 1
    cls.ensure_order(cap)
    _v, lam, s_list, s_trunc = cls.parametrization()
    if s_trunc != INF and int(s_trunc) < cap:
        raise PrecisionError(
            "class parametrization known only below T-order %s" % s_trunc,
            needed=cap)
    F = cls.field
    lam_inv = F.inv(lam)
    lam_pows = [F.one]
    for _n in range(d):
        lam_pows.append(F.mul(lam_pows[-1], lam_inv))
    svec = s_list[:cap]
    psums = []
    cur = [F.one]
    for _e in range(m):
        cur = _series_mul(cur, svec, cap, F)
        row = []
        for n in range(d + 1):
            idx = v * n
            c = cur[idx] if idx < len(cur) else F.zero
            tr = trace_down_to(F, F.mul(c, lam_pows[n]), ground)
            row.append(ground.mul(tr, ground.coerce(v)))
        psums.append(row)
    # Newton's identities, on series truncated past X^d
    elem = [[ground.one] + [ground.zero] * d]
    for k in range(1, m + 1):
        acc = [ground.zero] * (d + 1)
        sign = 1
        for i in range(1, k + 1):
            ei, pi = elem[k - i], psums[i - 1]
            for a in range(d + 1):
                if ground.is_zero(ei[a]):
                    continue
                for b in range(d + 1 - a):
                    term = ground.mul(ei[a], pi[b])
                    acc[a + b] = ground.add(acc[a + b], term) if sign > 0 \
                        else ground.sub(acc[a + b], term)
            sign = -sign
        inv_k = ground.inv(ground.coerce(k))
        elem.append([ground.mul(c, inv_k) for c in acc])
    rows = []
    for n in range(d + 1):
        coeffs = [ground.zero] * (m + 1)
        for k in range(m + 1):
            c = elem[k][n]
            coeffs[m - k] = ground.neg(c) if k % 2 else c
        rows.append(UniPoly(coeffs, ground))
    p = XSlices(rows, d + 1, ground)
    want = UniPoly([ground.zero] * m + [ground.one], ground)
    if p.eval_x0() != want:
        raise StructuralError("class product is not Weierstrass")
    return p


def _series_mul(a, b, cap, field):
    if not a or not b:
        return []
    n = min(len(a) + len(b) - 1, cap)
    out = [field.zero] * n
    for i, x in enumerate(a):
        if i >= cap or field.is_zero(x):
            continue
        for j, y in enumerate(b):
            k = i + j
            if k >= cap:
                break
            if not field.is_zero(y):
                out[k] = field.add(out[k], field.mul(x, y))
    return out


# ---------------------------------------------------------------------------
# the full decomposition


class BranchDecomposition:
    """A curve split at the origin: a unit times one Weierstrass factor
    per conjugacy class of vanishing Puiseux expansions.

    unit has a nonzero constant term; branches is a list of (factor,
    class) pairs ordered by increasing initial exponent, every factor
    developed modulo X^(order+1).
    """

    def __init__(self, unit, branches, order):
        self.unit = unit
        self.branches = branches
        self.order = order

    def reconstruction(self):
        """Product of all factors, for checking against the curve."""
        prod = self.unit
        for p, _c in self.branches:
            prod = prod.mul(p)
        return prod

    def __repr__(self):
        return "BranchDecomposition(unit degree %d, %d branches, order %d)" \
            % (self.unit.y_degree(), len(self.branches), self.order)


def splitting(f, d):
    """Decompose f at the origin into a unit and one factor per conjugacy
    class of vanishing Puiseux expansions, modulo X^(d+1).

    Segment factors are cut out by rescaled Hensel lifts, redeveloping
    the Weierstrass part deeper whenever a lift asks for more of the
    input; a factor still covering several classes is replaced by the
    class products.  The classes ride along in the result, so valuations
    along each branch remain available to the caller.
    """
    from .puiseux import newton_puiseux, valuation_at
    w = _as_slices(f)
    d = int(d)
    _check_order(w, d)
    if not w.is_monic_in_y():
        raise ContractViolation("the curve must be monic in Y")
    field = w.f
    p0 = w.eval_x0()
    if p0.degree < 0:
        raise ContractViolation("the curve must have positive Y-degree")
    if not field.is_zero(p0[0]):
        return BranchDecomposition(w.truncate(d + 1), [], d)
    classes = newton_puiseux(w)
    classes = sorted(classes, key=lambda c: c.initial_exponent())
    target = d
    while True:
        f0, g = separate_unit(w, target)
        if g.y_degree() <= 1 or len(classes) == 1:
            # a single class owns the whole Weierstrass part
            parts = [g]
            break
        try:
            parts = _segments(g, d, True)
            break
        except PrecisionError as e:
            # the polygon needs more of the series than we developed
            target = _bump(e, target + 1) - 1
    # attribute each class to the factor it has maximal contact with
    def contact(part, c):
        try:
            return valuation_at(part.to_bipoly(), c)
        except PrecisionError:
            # no nonzero term within the search bound: the class sits on
            # this factor as far as the data can tell, and a wrong guess
            # cannot survive the degree bookkeeping below
            return INF

    owner = []
    for c in classes:
        vals = [contact(p, c) for p in parts]
        best = max(range(len(parts)), key=lambda i: vals[i])
        if sum(1 for x in vals if x == vals[best]) > 1:
            raise StructuralError(
                "an expansion class fits several factors at this order")
        owner.append(best)
    for i, p in enumerate(parts):
        got = sum(c.class_size for c, o in zip(classes, owner) if o == i)
        if got != p.y_degree():
            raise StructuralError(
                "expansion classes do not fill their factor: %d of degree %d"
                % (got, p.y_degree()))
    counts = [owner.count(i) for i in range(len(parts))]
    branches = []
    for c, o in zip(classes, owner):
        if counts[o] == 1:
            branches.append((parts[o].truncate(d + 1), c))
        else:
            branches.append((class_factor(c, d), c))
    total = f0.y_degree() + sum(p.y_degree() for p, _c in branches)
    if total != w.y_degree():
        raise StructuralError("branch degrees do not add up to the curve")
    return BranchDecomposition(f0.truncate(d + 1), branches, d)
