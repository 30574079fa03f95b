"""Puiseux expansions organized by conjugacy class.

A plane curve branch at the origin is described by Puiseux expansions
Y = sum c_e X^(e/v).  Rather than enumerating conjugate expansions
individually, everything here works with one representative per conjugacy
class over K((X)): the classical Newton polygon recursion is run with two
refinements that keep each class in a single leaf,

* the coefficient field is extended only by irreducible factors of the
  face polynomial written in its "z-form" (whose roots are the v-th powers
  of the leading coefficients), and
* the ramifying substitution is twisted, X = w0^b X1^v and
  Y = X1^u (w0^a + Y1) with a*v - b*u = 1, so that no root of X ever
  enters the coefficient field.

The recursion records, per class, the chain of substitutions that produced
it.  From that chain we get, without ever writing down two conjugate
expansions:

* a parametrization X = lam * T^v, Y = S(T) over the class's field,
* the branching levels (exponent, width) at which conjugates of the class
  first start to differ, and
* contact orders between classes, by walking the shared part of two
  recursion paths.

Pairwise contact orders drive everything downstream: integrality
exponents, maximal-valuation numerators and the merge of branch bases all
reduce to sums over branching levels.
"""

import itertools
import math

from gmpy2 import mpq

from .algebra import (
    QQ,
    UniPoly,
    _field_pow,
    extend_tower,
    factor_univariate,
    tower_chain,
)
from .errors import ContractViolation, PrecisionError, StructuralError
from .poly2 import INF, BiPoly, PrecisionLoss, XSlices

_ZERO = mpq(0)


# ---------------------------------------------------------------------------
# small helpers


def _coerce_slices(w, field):
    """Re-coerce an XSlices element into a larger field of the same tower."""
    if w.f is field:
        return w
    rows = [UniPoly([field.coerce(c) for c in r.c], field)
            for r in w.known_rows()]
    return XSlices(rows, w.trunc, field)


def _root_of(rho, field):
    """Adjoin (if needed) a root of the irreducible polynomial rho."""
    if rho.degree == 1:
        return field, field.div(field.neg(rho[0]), rho[1])
    return extend_tower(field, rho)


def _poly_key(p):
    """Canonical hashable key for a polynomial over a tower field."""
    return tuple(p.f.sort_key(c) for c in p.c)


def _ser_mul(a, b, cap, field):
    """Product of dense coefficient lists, truncated below `cap`."""
    if not a or not b:
        return []
    n = len(a) + len(b) - 1
    if cap != INF:
        n = min(n, int(cap))
    out = [field.zero] * n
    for i, x in enumerate(a):
        if i >= n:
            break
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            if not field.is_zero(y):
                out[i + j] = field.add(out[i + j], field.mul(x, y))
    return out


def _ser_ord(a, field):
    for i, c in enumerate(a):
        if not field.is_zero(c):
            return i
    return INF


# ---------------------------------------------------------------------------
# series types


class PuiseuxSeries:
    """A single Puiseux series: terms with rational exponents on a common
    1/ramification grid, known below truncation_order."""

    def __init__(self, terms, ramification, truncation_order, field=QQ):
        self.terms = sorted(terms, key=lambda t: t[0])
        self.ramification = int(ramification)
        self.truncation_order = truncation_order
        self.field = field
        for e, _c in self.terms:
            if (mpq(e) * self.ramification).denominator != 1:
                raise ContractViolation(
                    "term exponent %s is off the 1/%d grid"
                    % (e, self.ramification))

    def __repr__(self):
        return "PuiseuxSeries(%s)" % (self.to_str(),)

    def to_str(self, var="X"):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e, c in self.terms:
                cs = self.field.to_str(c)
                if "+" in cs or "-" in cs[1:]:
                    cs = "(%s)" % cs
                if e == 0:
                    parts.append(cs)
                else:
                    es = var if e == 1 else "%s^(%s)" % (var, e)
                    parts.append("%s*%s" % (cs, es))
            body = " + ".join(parts)
        if self.truncation_order == INF:
            return body
        return body + " + O(%s^(%s))" % (var, self.truncation_order)


class ConjugacyClass:
    """One conjugacy class of Puiseux expansions over the ground field.

    Carries the recursion path that produced it (`steps`), the class's
    coefficient field, the parametrization X = lam*T^v, Y = S(T), and the
    leaf polynomial from which the tail of S can be extended on demand.
    """

    def __init__(self, steps, field, ground, leaf_g, eta, run, exact):
        self.steps = steps
        self.field = field          # coefficient field of the parametrization
        self.ground = ground        # field the recursion started over
        self.tower = tower_chain(field)
        self.run = run              # token tying classes of one computation
        self._leaf_g = leaf_g       # vanishing-degree-1 polynomial at the leaf
        self._eta = list(eta)       # leaf solution, coefficient list in X_leaf
        self._eta_known = len(eta)  # exclusive order of _eta
        self.exact = exact          # tail of the leaf solution is exactly zero
        self._leaf_cols = None
        self._gy00 = None
        self._param = None          # cached (v, lam, S, S_trunc)
        self._rep = None
        size = 1
        for st in steps:
            size *= st.width
        self.class_size = size
        v = 1
        for st in steps:
            v *= st.v
        self.ramification = v
        self.levels = [(st.t_abs, st.width) for st in steps if st.width > 1]

    def __repr__(self):
        return "ConjugacyClass(size=%d, ram=%d, levels=%s)" % (
            self.class_size, self.ramification,
            [(str(t), w) for t, w in self.levels])

    # -- leaf extension ----------------------------------------------------

    def _columns(self):
        if self._leaf_cols is None:
            g = self._leaf_g
            f = g.f
            cols = []
            for j in range(g.y_degree() + 1):
                cols.append([r[j] if j <= r.degree else f.zero
                             for r in g.known_rows()])
            self._leaf_cols = cols
            row0 = g.eval_x0()
            if row0.degree < 1 or not f.is_zero(row0[0]):
                raise StructuralError("leaf polynomial is not a simple branch")
            self._gy00 = f.inv(row0[1])
        return self._leaf_cols

    def _eval_leaf(self, eta, cap):
        """g(X, eta) truncated below cap, as a coefficient list."""
        f = self._leaf_g.f
        acc = []
        for col in reversed(self._columns()):
            acc = _ser_mul(acc, eta, cap, f)
            trimmed = col[:cap]
            if len(trimmed) > len(acc):
                acc = acc + [f.zero] * (len(trimmed) - len(acc))
            for i, c in enumerate(trimmed):
                acc[i] = f.add(acc[i], c)
        return acc

    def _needed_input(self, k):
        """Input truncation that would make the leaf known below order k."""
        for st in reversed(self.steps):
            k = -((-k - st.n0) // st.v)
        return int(k)

    def tail_order(self):
        """Order (in X units of the original curve) of the first term the
        expansion owns beyond its recorded branching steps; INF when the
        expansion stops exactly at the end of the steps."""
        if self.exact:
            return INF
        g = self._leaf_g
        m0 = None
        for m, r in enumerate(g.known_rows()):
            if r.degree >= 0 and not g.f.is_zero(r[0]):
                m0 = m
                break
        if m0 is None:
            # the leaf constant column vanishes as far as we can see
            if g.trunc == INF:
                raise StructuralError(
                    "expansion tail is identically zero but not exact")
            raise PrecisionError(
                "expansion tail not visible below the truncation",
                needed=self._needed_input(2 * int(g.trunc) + 1))
        base = _ZERO
        vprod = 1
        for st in self.steps:
            base += mpq(st.u, vprod * st.v)
            vprod *= st.v
        return base + mpq(m0, vprod)

    def ensure_leaf_order(self, k):
        """Extend the leaf solution so its first k coefficients are known."""
        if self.exact or k <= self._eta_known:
            return
        g = self._leaf_g
        if g.trunc != INF and k > g.trunc:
            raise PrecisionError(
                "class tail is only known below order %s" % g.trunc,
                needed=self._needed_input(k))
        f = g.f
        self._columns()
        while self._eta_known < k:
            m = self._eta_known
            r = self._eval_leaf(self._eta, m + 1)
            val = r[m] if m < len(r) else f.zero
            self._eta = self._eta + [f.zero] * (m + 1 - len(self._eta))
            self._eta[m] = f.neg(f.mul(val, self._gy00))
            self._eta_known = m + 1
        self._param = None

    # -- parametrization ---------------------------------------------------

    def parametrization(self):
        """(v, lam, S, S_trunc): X = lam*T^v and Y = S(T) + O(T^S_trunc),
        all over the class field."""
        if self._param is not None:
            return self._param
        F = self.field
        v_c, lam_c = 1, F.one
        s_c = [F.coerce(c) for c in self._eta]
        trunc_c = INF if self.exact else self._eta_known
        for st in reversed(self.steps):
            w0 = F.coerce(st.w0)
            lam_u = _field_pow(F, lam_c, st.u) if st.u else F.one
            shift = st.u * v_c
            new = [F.zero] * (shift + max(len(s_c), 1))
            new[shift] = F.mul(lam_u, _field_pow(F, w0, st.a))
            for k, c in enumerate(s_c):
                scaled = F.mul(lam_u, c)
                if k == 0:
                    new[shift] = F.add(new[shift], scaled)
                else:
                    new[shift + k] = scaled
            s_c = new
            if trunc_c != INF:
                trunc_c += shift
            lam_c = F.mul(_field_pow(F, w0, st.b) if st.b else F.one,
                          _field_pow(F, lam_c, st.v))
            v_c *= st.v
        while s_c and F.is_zero(s_c[-1]):
            s_c.pop()
        self._param = (v_c, lam_c, s_c, trunc_c)
        return self._param

    def _shift_total(self):
        shift = 0
        prod = 1
        for st in reversed(self.steps):
            shift += st.u * prod
            prod *= st.v
        return shift

    def ensure_order(self, t_order):
        """Make the parametrization reliable below T-order t_order."""
        if self.exact:
            return
        need = int(math.ceil(t_order)) - self._shift_total()
        if need > self._eta_known:
            self.ensure_leaf_order(need)
            self._param = None

    def order_limit(self):
        """Largest T-order the parametrization can reach before the
        truncation of the defining input runs out."""
        if self.exact or self._leaf_g.trunc == INF:
            return INF
        return int(self._leaf_g.trunc) + self._shift_total()

    @property
    def representative(self):
        """A PuiseuxSeries for one expansion of the class.  Its
        coefficients live in the extension of the class field by a root mu
        of w^ramification = 1/lam."""
        if self._rep is not None:
            return self._rep
        v, lam, s, s_trunc = self.parametrization()
        F = self.field
        if v == 1:
            rep_field, mu = F, F.inv(lam)
        else:
            coeffs = [F.neg(F.inv(lam))] + [F.zero] * (v - 1) + [F.one]
            facs = factor_univariate(UniPoly(coeffs, F), F)
            rho = min((fm[0] for fm in facs),
                      key=lambda g: (g.degree, _poly_key(g)))
            rep_field, mu = _root_of(rho, F)
        terms = []
        mu_pow = rep_field.one
        for e, c in enumerate(s):
            if e:
                mu_pow = rep_field.mul(mu_pow, mu)
            if F.is_zero(c):
                continue
            terms.append((mpq(e, v),
                          rep_field.mul(rep_field.coerce(c), mu_pow)))
        trunc = INF if s_trunc == INF else mpq(int(s_trunc), v)
        self._rep = PuiseuxSeries(terms, v, trunc, rep_field)
        return self._rep

    # -- structural keys ---------------------------------------------------

    def rational_prefix(self):
        """Terms shared by every expansion of the class: the (integer
        exponent, ground-field coefficient) pairs from the width-1 steps
        before the first branching level."""
        out = []
        for st in self.steps:
            if st.width > 1:
                break
            if st.t_abs == 0:
                continue
            if st.t_abs.denominator != 1:
                raise StructuralError("non-integer exponent in a width-1 step")
            out.append((int(st.t_abs), st.w0))
        return out

    def is_unit_class(self):
        return bool(self.steps) and self.steps[0].t_abs == 0

    def block_key(self):
        """Blocks collect classes with the same rational prefix whose first
        non-rational terms are conjugate; unit expansions form one block."""
        if self.is_unit_class():
            return ("unit",)
        prefix = []
        for st in self.steps:
            if st.width > 1:
                return (tuple((int(t), self.ground.sort_key(c))
                              for t, c in prefix),
                        st.t_abs, _poly_key(st.rho))
            prefix.append((st.t_abs, st.w0))
        # a fully rational expansion: the whole prefix is the key
        return (tuple((int(t), self.ground.sort_key(c)) for t, c in prefix),
                None, None)

    def initial_exponent(self):
        """Exponent of the first term; None for a unit class, INF for the
        identically-zero expansion."""
        if self.is_unit_class():
            return None
        if self.steps:
            return self.steps[0].t_abs
        return self.tail_order()


class _Step:
    __slots__ = ("node", "u", "v", "w0", "a", "b", "rho", "width", "t_abs",
                 "n0")

    def __init__(self, node, u, v, w0, a, b, rho, t_abs, n0=0):
        self.node = node
        self.u = u
        self.v = v
        self.w0 = w0
        self.a = a
        self.b = b
        self.rho = rho
        self.width = v * rho.degree
        self.t_abs = t_abs
        self.n0 = n0

    def sig(self):
        return (self.t_abs, _poly_key(self.rho))


# ---------------------------------------------------------------------------
# the polygon recursion


def _lower_hull(points):
    """Lower convex hull of (j, m) lattice points sorted by j."""
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _column_orders(w):
    """X-order of the coefficient series of each Y^j; None when the order
    is not visible below the truncation."""
    n = w.y_degree()
    orders = [INF] * (n + 1)
    for m, r in enumerate(w.known_rows()):
        for j in range(r.degree + 1):
            if orders[j] == INF and not w.f.is_zero(r[j]):
                orders[j] = m
    if w.trunc != INF:
        orders = [None if o == INF else o for o in orders]
    return orders


def _ord_y_at_0(w):
    row0 = w.eval_x0()
    s0 = 0
    while s0 <= row0.degree and w.f.is_zero(row0[s0]):
        s0 += 1
    return s0 if row0.degree >= 0 else 0


def _need_more(w):
    if w.trunc == INF:
        raise StructuralError("exact input exhausted unexpectedly")
    raise PrecisionLoss(2 * int(w.trunc) + 1)


class _Recursion:
    def __init__(self, ground, run):
        self.ground = ground
        self.run = run
        self.counter = itertools.count()
        self.leaves = []

    def node(self):
        return next(self.counter)

    def expand(self, w, field, steps, depth):
        """Collect the conjugacy classes among the vanishing expansions of
        w over `field`."""
        if depth > 64:
            raise StructuralError("polygon recursion failed to terminate")
        # an exactly-zero expansion splits off as an exact class
        if w.trunc == INF and w.known_rows():
            if all(r.degree < 0 or w.f.is_zero(r[0]) for r in w.known_rows()):
                self.leaves.append(
                    ConjugacyClass(steps, field, self.ground,
                                   None, [], self.run, True))
                rows = [UniPoly(list(r.c[1:]), w.f) if r.degree >= 1
                        else UniPoly.zero(w.f) for r in w.known_rows()]
                w = XSlices(rows, w.trunc, w.f)
                if all(r.degree < 0 or w.f.is_zero(r[0])
                       for r in w.known_rows()):
                    raise StructuralError(
                        "zero expansion repeats; the curve is not "
                        "squarefree")
        if w.trunc != INF and int(w.trunc) < 1:
            _need_more(w)
        if w.eval_x0().degree < 0 and w.known_rows():
            raise StructuralError("X divides a polygon node unexpectedly")
        s0 = _ord_y_at_0(w)
        if s0 == 0:
            return
        if s0 == 1:
            self.leaves.append(
                ConjugacyClass(steps, field, self.ground, w, [], self.run,
                               False))
            return
        orders = _column_orders(w)
        pts = []
        hidden = set()
        for j, o in enumerate(orders):
            if o is None:
                pts.append((j, int(w.trunc)))
                hidden.add(j)
            elif o != INF:
                pts.append((j, o))
        hull = _lower_hull(pts)
        faces = [(p, q) for p, q in zip(hull, hull[1:]) if q[1] < p[1]]
        if not faces or faces[0][0][0] != 0 or faces[-1][1][0] != s0:
            _need_more(w)
        for (jl, ml), (jr, mr) in faces:
            if jl in hidden or jr in hidden:
                _need_more(w)
            self._face(w, field, steps, depth, jl, ml, jr, mr)

    def _face(self, w, field, steps, depth, jl, ml, jr, mr):
        t = mpq(ml - mr, jr - jl)
        u, v = int(t.numerator), int(t.denominator)
        # z-form face polynomial: its roots are the v-th powers of the
        # leading coefficients of this face's expansions
        nz = (jr - jl) // v
        zc = []
        for k in range(nz + 1):
            m = ml - u * k
            r = w.row(m) if m < w.trunc else UniPoly.zero(field)
            j = jl + v * k
            zc.append(r[j] if j <= r.degree else field.zero)
        psi = UniPoly(zc, field)
        if psi.degree != nz or field.is_zero(psi[0]):
            raise StructuralError("face polynomial lost its expected shape")
        base = _ZERO
        vprod = 1
        for st in steps:
            base += mpq(st.u, vprod * st.v)
            vprod *= st.v
        t_abs = base + mpq(u, vprod * v)
        n0 = v * ml + u * jl
        a, b = _twist_exponents(u, v)
        for rho, _mult in factor_univariate(psi, field):
            nf, w0 = _root_of(rho, field)
            st = _Step(self.node(), u, v, w0, a, b, rho, t_abs, n0)
            child = _transform(w, nf, w0, a, b, u, v, n0)
            try:
                self.expand(child, nf, steps + [st], depth + 1)
            except PrecisionLoss as exc:
                # translate what the child needs back into this node's
                # truncation units: child order k needs (k + n0)/v here
                raise PrecisionLoss(-((-exc.needed - n0) // v)) from exc


def _twist_exponents(u, v):
    """Small nonnegative a, b with a*v - b*u = 1."""
    if u == 0:
        return 1, 0
    for a in range(u + 1):
        if a * v >= 1 and (a * v - 1) % u == 0:
            return a, (a * v - 1) // u
    raise StructuralError("no twist exponents for u=%d v=%d" % (u, v))


def _transform(w, field, w0, a, b, u, v, n0):
    """w(w0^b X^v, X^u (w0^a + Y)) / X^n0 over the extended field."""
    wf = _coerce_slices(w, field)
    if b:
        w0b = _field_pow(field, w0, b)
        rows = []
        scale = field.one
        for r in wf.known_rows():
            rows.append(r.scale(scale))
            scale = field.mul(scale, w0b)
        wf = XSlices(rows, wf.trunc, field)
    wf = wf.stretch(v, u)
    w0a = _field_pow(field, w0, a)
    rows = [r.shift_arg(w0a) for r in wf.known_rows()]
    wf = XSlices(rows, wf.trunc, field)
    return wf.divide_x_power(n0)


def newton_puiseux(g, target_order=None, include_units=False):
    """Conjugacy classes of the Puiseux expansions of g at the origin.

    By default only the expansions vanishing at the origin are computed;
    include_units adds the classes of expansions with nonzero constant
    term.  target_order asks for every class's series to be reliable at
    least up to that X-exponent.
    """
    if isinstance(g, BiPoly):
        w = XSlices.from_bipoly(g)
    elif isinstance(g, XSlices):
        w = g
    else:
        raise ContractViolation("expected a bivariate polynomial")
    field = w.f
    if w.y_degree() < 1:
        raise ContractViolation("input must have positive Y-degree")
    if (w.trunc == INF or int(w.trunc) >= 1) and w.eval_x0().degree < 0 \
            and w.known_rows():
        raise ContractViolation(
            "X divides the polynomial; divide the content out first")
    run = object()
    rec = _Recursion(field, run)
    try:
        expected = _ord_y_at_0(w)
        rec.expand(w, field, [], 0)
        if include_units:
            _unit_classes(rec, w, field)
            expected = w.eval_x0().degree
        got = sum(c.class_size for c in rec.leaves)
        if got != expected:
            raise StructuralError(
                "expansion count mismatch: found %d, expected %d"
                % (got, expected))
        if target_order is not None:
            for c in rec.leaves:
                c.ensure_order(
                    int(math.ceil(mpq(target_order) * c.ramification)) + 1)
        return rec.leaves
    except PrecisionLoss as exc:
        raise PrecisionError(
            "input truncated too early for its Puiseux expansions",
            needed=exc.needed) from exc


def _unit_classes(rec, w, field):
    row0 = w.eval_x0()
    s0 = _ord_y_at_0(w)
    q = UniPoly(list(row0.c[s0:]), field).monic()
    if q.degree == 0:
        return
    for sigma, _mult in factor_univariate(q, field):
        nf, y0 = _root_of(sigma, field)
        st = _Step(rec.node(), 0, 1, y0, 1, 0, sigma, _ZERO)
        wf = _coerce_slices(w, nf)
        rows = [r.shift_arg(y0) for r in wf.known_rows()]
        rec.expand(XSlices(rows, wf.trunc, nf), nf, [st], 1)


# ---------------------------------------------------------------------------
# contact orders between classes


def _check_same_run(ci, cj):
    if ci.run is not cj.run:
        raise ContractViolation("classes come from different computations")


def shared_divergence(ci, cj):
    """Walk the two recursion paths: the branching levels they share, and
    the contact exponent at which they part ways."""
    if ci is cj:
        raise ContractViolation("a class has no divergence from itself")
    _check_same_run(ci, cj)
    k = 0
    while (k < len(ci.steps) and k < len(cj.steps)
           and ci.steps[k].node == cj.steps[k].node
           and ci.steps[k].sig() == cj.steps[k].sig()):
        k += 1
    # past the shared trunk each class leaves either through its next
    # recorded step or, if there is none, through the first term of its
    # leaf tail
    div_i = ci.steps[k].t_abs if k < len(ci.steps) else ci.tail_order()
    div_j = cj.steps[k].t_abs if k < len(cj.steps) else cj.tail_order()
    if div_i == INF and div_j == INF:
        raise StructuralError(
            "two classes describe the same expansion; "
            "the curve cannot have been squarefree")
    t_star = min(div_i, div_j)
    shared = [(st.t_abs, st.width) for st in ci.steps[:k] if st.width > 1]
    return shared, t_star


def contact_sum(ci, cj):
    """Sum of the contact orders v(gamma - eta) between one fixed
    expansion gamma of ci and all expansions eta of cj (ci is not cj)."""
    shared, t_star = shared_divergence(ci, cj)
    total = _ZERO
    prod = 1
    for t, wd in shared:
        prod *= wd
        total += mpq(cj.class_size * (wd - 1), prod) * t
    total += mpq(cj.class_size, prod) * t_star
    return total


def intra_contact_sum(ci):
    """Sum of the contact orders between one fixed expansion of ci and the
    other expansions of the same class."""
    total = _ZERO
    levels = ci.levels
    for idx, (t, wd) in enumerate(levels):
        tail = 1
        for _t2, w2 in levels[idx + 1:]:
            tail *= w2
        total += (wd - 1) * tail * t
    return total


def class_contact_total(ci, classes):
    """Total contact order of one expansion of ci against every other
    tracked expansion."""
    total = intra_contact_sum(ci)
    for cj in classes:
        if cj is not ci:
            total += contact_sum(ci, cj)
    return total


def integral_exponent_bound(classes):
    """Floor of the largest total contact order: the largest power of X
    that can divide a denominator of the local integral basis."""
    vals = [class_contact_total(c, classes) for c in classes
            if not c.is_unit_class()]
    if not vals:
        return 0
    return int(math.floor(max(vals)))


# ---------------------------------------------------------------------------
# valuation ladder of a single class


def ladder_values(ci):
    """For each branching level (ascending), the valuation obtained by a
    monic polynomial built from the distinct truncations of the class just
    below that level."""
    levels = ci.levels
    out = []
    for idx, (t, _wd) in enumerate(levels):
        s = t
        for i in range(idx):
            ti, wi = levels[i]
            between = 1
            for j in range(i + 1, idx):
                between *= levels[j][1]
            s += (wi - 1) * between * ti
        out.append(s)
    return out


def ladder_digits(ci, d):
    """Mixed-radix digits of d over the level widths, lowest level first."""
    digits = []
    r = 1
    for _t, wd in ci.levels:
        digits.append((d // r) % wd)
        r *= wd
    return digits


def ladder_max_valuation(ci, d):
    """The maximal valuation of a monic degree-d polynomial along the
    single class ci, via the mixed-radix decomposition of d over the level
    widths."""
    if not 0 <= d < ci.class_size:
        raise ContractViolation("degree %d outside [0, %d)"
                                % (d, ci.class_size))
    total = _ZERO
    for digit, s in zip(ladder_digits(ci, d), ladder_values(ci)):
        if digit:
            total += digit * s
    return total


# ---------------------------------------------------------------------------
# explicit expansion labels (exhaustive fallback)


def expansion_labels(ci):
    """The expansions of ci as twist tuples over its branching levels."""
    return list(itertools.product(*[range(wd) for _t, wd in ci.levels]))


def pair_contact(ci, li, cj, lj):
    """Contact order between expansion li of ci and expansion lj of cj."""
    if ci is cj:
        for idx, (x, y) in enumerate(zip(li, lj)):
            if x != y:
                return ci.levels[idx][0]
        raise ContractViolation("same expansion on both sides")
    shared, t_star = shared_divergence(ci, cj)
    for idx in range(len(shared)):
        if li[idx] != lj[idx]:
            return shared[idx][0]
    return t_star


def max_valuations(classes, d):
    """o(Gamma, k) for k = 1..d: the largest valuation a monic polynomial
    of each Y-degree k can attain along the tracked expansions.

    A single conjugacy class is handled exactly at any size through its
    valuation ladder.  Several classes fall back to an exhaustive search
    over expansion subsets, which is only reasonable for a handful of
    expansions; past 16 the request is refused.
    """
    if not classes:
        raise ContractViolation("no classes given")
    total = sum(c.class_size for c in classes)
    if not 1 <= d <= total - 1:
        raise ContractViolation("degree %d outside [1, %d]" % (d, total - 1))
    if len(classes) == 1:
        return [ladder_max_valuation(classes[0], k) for k in range(1, d + 1)]
    if total > 16:
        raise ContractViolation(
            "maximal valuations over %d expansions in several classes "
            "would need an exhaustive subset search; refusing past 16"
            % total)
    labels = [(c, lab) for c in classes for lab in expansion_labels(c)]
    n = len(labels)
    val = [[_ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = pair_contact(labels[i][0], labels[i][1],
                             labels[j][0], labels[j][1])
            val[i][j] = val[j][i] = v
    out = []
    for k in range(1, d + 1):
        best = None
        for subset in itertools.combinations(range(n), k):
            worst = None
            for m in range(n):
                if m in subset:
                    continue
                s = sum((val[m][i] for i in subset), _ZERO)
                if worst is None or s < worst:
                    worst = s
            if best is None or worst > best:
                best = worst
        out.append(best)
    return out


# ---------------------------------------------------------------------------
# characteristic exponents and classification


def characteristic_exponents(gamma):
    """The characteristic exponents in units of 1/m, m the ramification:
    the exponents at which new ramification appears.  Empty for an
    unramified expansion."""
    if isinstance(gamma, ConjugacyClass):
        m = gamma.ramification
        return tuple(int(st.t_abs * m) for st in gamma.steps if st.v > 1)
    if not isinstance(gamma, PuiseuxSeries):
        raise ContractViolation("expected a series or a conjugacy class")
    m = gamma.ramification
    out = []
    cur = m
    for e, _c in gamma.terms:
        if cur == 1:
            break
        em = int(e * m)
        if em % cur:
            out.append(em)
            cur = math.gcd(cur, em)
    if cur != 1:
        if gamma.truncation_order != INF:
            raise PrecisionError(
                "series truncated before its ramification is exhausted")
        raise ContractViolation(
            "stated ramification %d is not reached by the terms" % m)
    return tuple(out)


class Block:
    def __init__(self, key, classes):
        self.key = key
        self.classes = classes

    def __repr__(self):
        return "Block(%d classes, sizes %s)" % (
            len(self.classes), [c.class_size for c in self.classes])


class Segment:
    def __init__(self, initial_exponent, blocks):
        self.initial_exponent = initial_exponent
        self.blocks = blocks

    def __repr__(self):
        return "Segment(t=%s, %d blocks)" % (self.initial_exponent,
                                             len(self.blocks))


class SegmentBlockTree:
    """Expansions grouped by initial exponent (segments), then by shared
    rational prefix and conjugate first non-rational term (blocks).  Unit
    expansions form a single trailing segment of their own."""

    def __init__(self, segments):
        self.segments = segments

    def __repr__(self):
        return "SegmentBlockTree(%s)" % (self.segments,)


def classify(classes):
    by_seg = {}
    for c in classes:
        t = c.initial_exponent()
        key = ("unit",) if t is None else ("t", t)
        by_seg.setdefault(key, []).append(c)
    segments = []
    order = sorted(by_seg,
                   key=lambda k: (2,) if k[0] == "unit" else (0, k[1]))
    for key in order:
        members = by_seg[key]
        if key[0] == "unit":
            segments.append(Segment(None, [Block(("unit",), members)]))
            continue
        by_block = {}
        for c in members:
            by_block.setdefault(c.block_key(), []).append(c)
        blocks = [Block(k, by_block[k]) for k in sorted(by_block, key=repr)]
        segments.append(Segment(key[1], blocks))
    return SegmentBlockTree(segments)


# ---------------------------------------------------------------------------
# valuations of polynomials along an expansion


def valuation_at(p, gamma, bound=None):
    """Valuation of the polynomial p along gamma (a PuiseuxSeries or a
    ConjugacyClass); math.inf when p vanishes identically on the branch."""
    if isinstance(gamma, ConjugacyClass):
        return _valuation_class(p, gamma, bound)
    if not isinstance(gamma, PuiseuxSeries):
        raise ContractViolation("expected a series or a conjugacy class")
    return _valuation_series(p, gamma)


def _param_eval(p, v, lam, s, cap, field):
    """ord_T of p(lam*T^v, S(T)), computed below cap."""
    cols = {}
    for (i, j), c in p.d.items():
        cols.setdefault(j, []).append((i, c))
    acc = []
    for j in range(max(cols, default=-1), -1, -1):
        acc = _ser_mul(acc, s, cap, field)
        if j in cols:
            extra = {}
            for i, c in cols[j]:
                e = v * i
                if cap == INF or e < cap:
                    extra[e] = field.add(
                        extra.get(e, field.zero),
                        field.mul(c, _field_pow(field, lam, i)))
            if extra:
                n = max(max(extra) + 1, len(acc))
                acc = acc + [field.zero] * (n - len(acc))
                for e, c in extra.items():
                    acc[e] = field.add(acc[e], c)
    return _ser_ord(acc, field)


def _valuation_class(p, gamma, bound):
    if isinstance(p, XSlices):
        p = p.to_bipoly()
    field = gamma.field
    pc = p.map_field(field) if p.f is not field else p
    v, lam, s, s_trunc = gamma.parametrization()
    if s_trunc == INF:
        # S is an exact polynomial, so the evaluation is complete and INF
        # is a proof of vanishing on the branch
        cap = v * (pc.degree_x() + 1) + len(s) * (pc.degree_y() + 1) + 1
        ord_t = _param_eval(pc, v, lam, s, cap, field)
        return INF if ord_t == INF else mpq(int(ord_t), v)
    if bound is None:
        t_max = max((int(t) for t, _w in gamma.levels), default=1)
        bound = (pc.degree_y() + 1) * (t_max + 2) + pc.degree_x() + 8
    bound_t = int(math.ceil(mpq(bound) * v))  # X-order bound in T units
    while True:
        cap = min(int(s_trunc), bound_t + 1)
        ord_t = _param_eval(pc, v, lam, s, cap, field)
        if ord_t != INF and ord_t < cap:
            return mpq(int(ord_t), v)
        if cap > bound_t:
            raise PrecisionError(
                "valuation along the class did not stabilize below %s; "
                "the polynomial may vanish on the branch" % bound)
        want = min(2 * cap + 8, bound_t + 1)
        lim = gamma.order_limit()
        if lim != INF and lim > int(s_trunc) and want > lim:
            want = lim  # drain the available truncation before giving up
        gamma.ensure_order(want)
        v, lam, s, s_trunc = gamma.parametrization()
        if s_trunc == INF:
            return _valuation_class(p, gamma, bound)


def _valuation_series(p, gamma):
    if isinstance(p, XSlices):
        p = p.to_bipoly()
    field = gamma.field
    m = gamma.ramification
    pc = p.map_field(field) if p.f is not field else p
    s = []
    for e, c in gamma.terms:
        k = int(mpq(e) * m)
        if len(s) <= k:
            s.extend([field.zero] * (k + 1 - len(s)))
        s[k] = field.add(s[k], c)
    if gamma.truncation_order == INF:
        cap = m * (pc.degree_x() + 1) + len(s) * (pc.degree_y() + 1) + 1
        ord_t = _param_eval(pc, m, field.one, s, cap, field)
        return INF if ord_t == INF else mpq(int(ord_t), m)
    cap = int(mpq(gamma.truncation_order) * m)
    ord_t = _param_eval(pc, m, field.one, s, cap, field)
    if ord_t == INF or ord_t >= cap:
        raise PrecisionError(
            "series truncated before the valuation is visible",
            needed=int(math.ceil(2 * mpq(gamma.truncation_order))))
    return mpq(int(ord_t), m)
