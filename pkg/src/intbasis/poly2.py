"""Bivariate polynomials and truncated power-series arithmetic.

Two representations, chosen by use:

* BiPoly -- exact sparse bivariate polynomial over a field, a dict mapping
  (x_exponent, y_exponent) to a nonzero coefficient.  Used wherever the data
  is exact: curve input, Newton polygon transforms, resultants.

* XSlices -- a polynomial in Y whose coefficients are X-power series known
  up to some order: a list of Y-polynomials (the X^m slices) plus the
  truncation order.  Used by the lifting and splitting machinery, where only
  finitely many X-orders are ever known.

Resultants and discriminants in Y go through the generic subresultant
routine from the algebra module, with coefficients living in K[X].
"""

import math

from .algebra import QQ, PolyRing, UniPoly, resultant_generic
from .errors import StructuralError

INF = math.inf


class BiPoly:
    """Sparse exact bivariate polynomial: sum of c * X^i * Y^j terms."""

    __slots__ = ("d", "f")

    def __init__(self, d, field=QQ, normalized=False):
        if not normalized:
            clean = {}
            for (i, j), c in d.items():
                c = field.coerce(c)
                if not field.is_zero(c):
                    clean[(i, j)] = c
            d = clean
        self.d = d
        self.f = field

    @classmethod
    def zero(cls, field=QQ):
        return cls({}, field, normalized=True)

    @classmethod
    def const(cls, c, field=QQ):
        return cls({(0, 0): c}, field)

    @classmethod
    def x(cls, field=QQ):
        return cls({(1, 0): field.one}, field, normalized=True)

    @classmethod
    def y(cls, field=QQ):
        return cls({(0, 1): field.one}, field, normalized=True)

    @classmethod
    def term(cls, c, i, j, field=QQ):
        return cls({(i, j): c}, field)

    def is_zero(self):
        return not self.d

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        if set(self.d) != set(other.d):
            return False
        f = self.f
        return all(f.eq(c, other.d[k]) for k, c in self.d.items())

    def __hash__(self):
        return hash(frozenset(self.d.items()))

    def coeff(self, i, j):
        return self.d.get((i, j), self.f.zero)

    def degree_y(self):
        return max((j for _i, j in self.d), default=-1)

    def degree_x(self):
        return max((i for i, _j in self.d), default=-1)

    def total_degree(self):
        return max((i + j for i, j in self.d), default=-1)

    def __add__(self, other):
        f = self.f
        out = dict(self.d)
        for k, c in other.d.items():
            s = f.add(out.get(k, f.zero), c)
            if f.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return BiPoly(out, f, normalized=True)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        f = self.f
        return BiPoly({k: f.neg(c) for k, c in self.d.items()}, f,
                      normalized=True)

    def __mul__(self, other):
        f = self.f
        out = {}
        for (i1, j1), c1 in self.d.items():
            for (i2, j2), c2 in other.d.items():
                k = (i1 + i2, j1 + j2)
                s = f.add(out.get(k, f.zero), f.mul(c1, c2))
                if f.is_zero(s):
                    out.pop(k, None)
                else:
                    out[k] = s
        return BiPoly(out, f, normalized=True)

    def __pow__(self, n):
        acc = BiPoly.const(self.f.one, self.f)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def scale(self, c):
        f = self.f
        c = f.coerce(c)
        if f.is_zero(c):
            return BiPoly.zero(f)
        return BiPoly({k: f.mul(v, c) for k, v in self.d.items()}, f,
                      normalized=True)

    # views

    def y_slices(self):
        """Map j -> UniPoly in X (coefficient of Y^j)."""
        f = self.f
        rows = {}
        for (i, j), c in self.d.items():
            rows.setdefault(j, {})[i] = c
        out = {}
        for j, cs in rows.items():
            n = max(cs) + 1
            out[j] = UniPoly([cs.get(i, f.zero) for i in range(n)], f,
                             normalized=True)
        return out

    def as_y_coeff_list(self):
        """List over Y-degree of UniPoly-in-X coefficients."""
        sl = self.y_slices()
        n = self.degree_y()
        return [sl.get(j, UniPoly.zero(self.f)) for j in range(n + 1)]

    @classmethod
    def from_y_coeff_list(cls, coeffs, field=QQ):
        d = {}
        for j, p in enumerate(coeffs):
            for i, c in enumerate(p.c):
                if not field.is_zero(c):
                    d[(i, j)] = c
        return cls(d, field, normalized=True)

    def eval_y(self, val):
        """Substitute a field element for Y; result is a UniPoly in X."""
        f = self.f
        val = f.coerce(val)
        out = {}
        for (i, j), c in self.d.items():
            t = f.mul(c, _fpow(f, val, j))
            out[i] = f.add(out.get(i, f.zero), t)
        n = max(out, default=-1) + 1
        return UniPoly([out.get(i, f.zero) for i in range(n)], f)

    def eval_x(self, val):
        f = self.f
        val = f.coerce(val)
        out = {}
        for (i, j), c in self.d.items():
            t = f.mul(c, _fpow(f, val, i))
            out[j] = f.add(out.get(j, f.zero), t)
        n = max(out, default=-1) + 1
        return UniPoly([out.get(j, f.zero) for j in range(n)], f)

    def eval_xy(self, xv, yv):
        return self.eval_x(xv).evaluate(yv)

    def derivative_y(self):
        f = self.f
        out = {}
        for (i, j), c in self.d.items():
            if j:
                out[(i, j - 1)] = f.mul(c, f.coerce(j))
        return BiPoly(out, f)

    def derivative_x(self):
        f = self.f
        out = {}
        for (i, j), c in self.d.items():
            if i:
                out[(i - 1, j)] = f.mul(c, f.coerce(i))
        return BiPoly(out, f)

    # substitutions

    def map_field(self, new_field, embed=None):
        embed = embed or new_field.coerce
        return BiPoly({k: embed(c) for k, c in self.d.items()}, new_field)

    def x_scale_power(self, c, v):
        """X -> c * X^v (c a nonzero field element, v >= 1)."""
        f = self.f
        c = f.coerce(c)
        out = {}
        for (i, j), coeff in self.d.items():
            out[(v * i, j)] = f.mul(coeff, _fpow(f, c, i))
        return BiPoly(out, f)

    def y_shift(self, c):
        """Y -> Y + c."""
        f = self.f
        c = f.coerce(c)
        if f.is_zero(c):
            return self
        out = BiPoly.zero(f)
        # horner in Y: collect X-rows by descending Y degree
        rows = self.y_slices()
        n = self.degree_y()
        shift = BiPoly({(0, 0): c, (0, 1): f.one}, f)
        acc = BiPoly.zero(f)
        for j in range(n, -1, -1):
            acc = acc * shift
            if j in rows:
                acc = acc + BiPoly.from_y_coeff_list([rows[j]], f)
        return acc if n >= 0 else out

    def y_mul_x_power_shift(self, w, u):
        """Y -> X^u * (w + Y): the ramified substitution of a Newton step."""
        f = self.f
        w = f.coerce(w)
        out = BiPoly.zero(f)
        rows = self.y_slices()
        n = self.degree_y()
        factor = BiPoly({(u, 0): w, (u, 1): f.one}, f) if not f.is_zero(w) \
            else BiPoly({(u, 1): f.one}, f)
        acc = BiPoly.zero(f)
        for j in range(n, -1, -1):
            acc = acc * factor
            if j in rows:
                acc = acc + BiPoly.from_y_coeff_list([rows[j]], f)
        return acc

    def x_shift(self, a):
        """X -> X + a."""
        f = self.f
        a = f.coerce(a)
        if f.is_zero(a):
            return self
        out = {}
        cols = {}
        for (i, j), c in self.d.items():
            cols.setdefault(j, {})[i] = c
        d = {}
        for j, cs in cols.items():
            n = max(cs) + 1
            p = UniPoly([cs.get(i, f.zero) for i in range(n)], f,
                        normalized=True)
            p = p.shift_arg(a)
            for i, c in enumerate(p.c):
                if not f.is_zero(c):
                    d[(i, j)] = c
        return BiPoly(d, f, normalized=True)

    def shear_x(self, lam):
        """X -> X + lam * Y."""
        f = self.f
        lam = f.coerce(lam)
        if f.is_zero(lam):
            return self
        ly = BiPoly({(1, 0): f.one, (0, 1): lam}, f)
        out = BiPoly.zero(f)
        # horner in X
        cols = {}
        for (i, j), c in self.d.items():
            cols.setdefault(i, {})[j] = c
        nx = self.degree_x()
        acc = BiPoly.zero(f)
        for i in range(nx, -1, -1):
            acc = acc * ly
            if i in cols:
                acc = acc + BiPoly({(0, j): c for j, c in cols[i].items()}, f,
                                   normalized=True)
        return acc

    def divide_x_power(self, k):
        """Exact division by X^k."""
        out = {}
        for (i, j), c in self.d.items():
            if i < k:
                raise StructuralError("division by X^%d not exact" % k)
            out[(i - k, j)] = c
        return BiPoly(out, self.f, normalized=True)

    def x_order(self):
        """Smallest X-exponent appearing (INF for the zero polynomial)."""
        return min((i for i, _j in self.d), default=INF)

    def is_monic_in_y(self):
        n = self.degree_y()
        if n < 0:
            return False
        f = self.f
        for (i, j), c in self.d.items():
            if j == n and (i != 0 or not f.eq(c, f.one)):
                return False
        return (0, n) in self.d

    def lc_y(self):
        """Leading coefficient in Y, as a UniPoly in X."""
        n = self.degree_y()
        return self.y_slices().get(n, UniPoly.zero(self.f))

    def to_str(self, xv="x", yv="y"):
        if not self.d:
            return "0"
        f = self.f
        keys = sorted(self.d, key=lambda k: (-k[1], -k[0]))
        parts = []
        for (i, j) in keys:
            c = self.d[(i, j)]
            cs = f.to_str(c)
            mono = []
            if i == 1:
                mono.append(xv)
            elif i > 1:
                mono.append("%s^%d" % (xv, i))
            if j == 1:
                mono.append(yv)
            elif j > 1:
                mono.append("%s^%d" % (yv, j))
            if not mono:
                body = cs
            elif cs == "1":
                body = "*".join(mono)
            elif cs == "-1":
                body = "-" + "*".join(mono)
            else:
                body = cs + "*" + "*".join(mono)
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    def __repr__(self):
        return "BiPoly(%s)" % self.to_str()


def _fpow(f, a, n):
    acc = f.one
    while n:
        if n & 1:
            acc = f.mul(acc, a)
        n >>= 1
        if n:
            a = f.mul(a, a)
    return acc


class BiRing:
    """Ring adapter so the generic subresultant can run with bivariate
    polynomial entries (used for resultants in a third variable)."""

    def __init__(self, field=QQ):
        self.field = field
        self.one = BiPoly.const(field.one, field)
        self.zero = BiPoly.zero(field)

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def exact_div(self, a, b):
        return exact_div_bipoly_y(a, b)

    def pow(self, a, n):
        return a ** n


def exact_div_bipoly_y(a, b):
    """Exact division of bivariate polynomials, done in (K[X])[Y]."""
    if b.is_zero():
        raise ZeroDivisionError
    fa = a.as_y_coeff_list()
    fb = b.as_y_coeff_list()
    if not fa:
        return BiPoly.zero(a.f)
    db = len(fb) - 1
    q = [UniPoly.zero(a.f) for _ in range(max(0, len(fa) - db))]
    r = list(fa)
    for k in range(len(fa) - 1 - db, -1, -1):
        top = r[k + db]
        if top.is_zero():
            continue
        qk = top.exact_div(fb[-1])
        q[k] = qk
        for j in range(db + 1):
            r[k + j] = r[k + j] - qk * fb[j]
    if any(not t.is_zero() for t in r[:db]):
        raise StructuralError("bivariate division expected exact")
    return BiPoly.from_y_coeff_list(q, a.f)


def resultant_y(a, b):
    """Resultant with respect to Y of two bivariate polynomials; the result
    is a univariate polynomial in X."""
    ring = PolyRing(a.f)
    ra = a.as_y_coeff_list()
    rb = b.as_y_coeff_list()
    return resultant_generic(ra, rb, ring)


def discriminant_y(p):
    """Discriminant of p with respect to Y: standard sign and leading
    coefficient normalization."""
    n = p.degree_y()
    if n < 1:
        raise ValueError("discriminant needs positive Y-degree")
    r = resultant_y(p, p.derivative_y())
    lc = p.lc_y()
    r = r.exact_div(lc)
    if ((n * (n - 1)) // 2) % 2:
        r = -r
    return r


def kth_root_in_y(g, k):
    """Exact k-th root of a polynomial that is a perfect k-th power, monic
    in Y.  Solved coefficient by coefficient from the top Y-degree down."""
    if k == 1:
        return g
    f = g.f
    n = g.degree_y()
    if n % k:
        raise StructuralError("not a k-th power: degree %d" % n)
    m = n // k
    if not g.is_monic_in_y():
        raise StructuralError("k-th root expects a monic input")
    root = BiPoly({(0, m): f.one}, f, normalized=True)
    for s in range(1, m + 1):
        # coefficient of Y^(n - s) in root^k involves k * c_{m-s} plus known terms
        partial = root ** k
        want = g.y_slices().get(n - s, UniPoly.zero(f))
        have = partial.y_slices().get(n - s, UniPoly.zero(f))
        diff = want - have
        if diff.is_zero():
            continue
        cs = diff.scale(f.inv(f.coerce(k))) if f is QQ else \
            UniPoly([f.div(c, f.coerce(k)) for c in diff.c], f)
        root = root + BiPoly.from_y_coeff_list(
            [UniPoly.zero(f)] * (m - s) + [cs], f)
    if not (root ** k == g):
        raise StructuralError("k-th root extraction failed")
    return root


class XSlices:
    """Truncated element of K[[X]][Y], stored X-major.

    rows[m] is the Y-polynomial multiplying X^m; slices at index >= trunc
    are unknown.  trunc may be math.inf when the element is an exact
    polynomial.
    """

    __slots__ = ("rows", "trunc", "f")

    def __init__(self, rows, trunc, field=QQ):
        while rows and rows[-1].is_zero():
            rows.pop()
        self.rows = rows
        self.trunc = trunc
        self.f = field

    @classmethod
    def from_bipoly(cls, p, trunc=INF):
        f = p.f
        if p.is_zero():
            return cls([], trunc, f)
        nx = p.degree_x()
        slices = [{} for _ in range(nx + 1)]
        for (i, j), c in p.d.items():
            slices[i][j] = c
        rows = []
        limit = nx + 1 if trunc == INF else min(nx + 1, trunc)
        for m in range(limit):
            cs = slices[m]
            if cs:
                n = max(cs) + 1
                rows.append(UniPoly([cs.get(j, f.zero) for j in range(n)], f,
                                    normalized=True))
            else:
                rows.append(UniPoly.zero(f))
        return cls(rows, trunc, f)

    @classmethod
    def zero(cls, field=QQ, trunc=INF):
        return cls([], trunc, field)

    @classmethod
    def from_unipoly_y(cls, p, trunc=INF):
        """Constant-in-X element from a Y-polynomial."""
        return cls([p], trunc, p.f)

    def copy(self):
        return XSlices(list(self.rows), self.trunc, self.f)

    def row(self, m):
        if m >= self.trunc:
            raise PrecisionLoss(m + 1)
        if m < len(self.rows):
            return self.rows[m]
        return UniPoly.zero(self.f)

    def known_rows(self):
        return self.rows

    def is_zero_known(self):
        return not self.rows

    def x_order(self):
        for m, r in enumerate(self.rows):
            if not r.is_zero():
                return m
        return INF

    def y_degree(self):
        return max((r.degree for r in self.rows), default=-1)

    def truncate(self, t):
        if t >= self.trunc:
            return XSlices(list(self.rows), self.trunc, self.f)
        return XSlices([r for m, r in enumerate(self.rows) if m < t], t, self.f)

    def __add__(self, other):
        t = min(self.trunc, other.trunc)
        n = max(len(self.rows), len(other.rows))
        rows = []
        for m in range(n):
            if t != INF and m >= t:
                break
            a = self.rows[m] if m < len(self.rows) else UniPoly.zero(self.f)
            b = other.rows[m] if m < len(other.rows) else UniPoly.zero(self.f)
            rows.append(a + b)
        return XSlices(rows, t, self.f)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return XSlices([-r for r in self.rows], self.trunc, self.f)

    def mul(self, other, cap=INF):
        """Product, optionally capped at X-order `cap`."""
        ta = self.trunc + other.x_order()
        tb = other.trunc + self.x_order()
        t = min(ta, tb, cap)
        if self.is_zero_known() or other.is_zero_known():
            return XSlices([], t, self.f)
        la, lb = len(self.rows), len(other.rows)
        limit = la + lb - 1 if t == INF else min(la + lb - 1, t)
        rows = []
        for m in range(int(limit) if limit != INF else la + lb - 1):
            acc = UniPoly.zero(self.f)
            lo = max(0, m - lb + 1)
            hi = min(m, la - 1)
            for i in range(lo, hi + 1):
                a = self.rows[i]
                b = other.rows[m - i]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            rows.append(acc)
        return XSlices(rows, t, self.f)

    def __mul__(self, other):
        return self.mul(other)

    def scale(self, c):
        return XSlices([r.scale(c) for r in self.rows], self.trunc, self.f)

    def mul_unipoly_y(self, p):
        return XSlices([r * p for r in self.rows], self.trunc, self.f)

    def shift_x(self, k):
        return XSlices([UniPoly.zero(self.f)] * k + list(self.rows),
                       self.trunc + k, self.f)

    def divide_x_power(self, k):
        for m in range(min(k, len(self.rows))):
            if not self.rows[m].is_zero():
                raise StructuralError("X^%d does not divide this element" % k)
        return XSlices(list(self.rows[k:]), self.trunc - k, self.f)

    def stretch(self, v, u):
        """Substitute X -> X^v, Y -> X^u * Y (a segment rescaling)."""
        f = self.f
        out = {}
        for m, r in enumerate(self.rows):
            for j, c in enumerate(r.c):
                if not f.is_zero(c):
                    key = v * m + u * j
                    cur = out.setdefault(key, {})
                    cur[j] = f.add(cur.get(j, f.zero), c)
        t = self.trunc * v if self.trunc != INF else INF
        n = max(out, default=-1) + 1
        limit = n if t == INF else min(n, int(t))
        rows = []
        for m in range(limit):
            cs = out.get(m)
            if cs:
                deg = max(cs) + 1
                rows.append(UniPoly([cs.get(j, f.zero) for j in range(deg)], f))
            else:
                rows.append(UniPoly.zero(f))
        return XSlices(rows, t, f)

    def y_shift_series(self, c, u):
        """Substitute Y -> Y + c*X^u with c a scalar and u >= 1; the
        truncation order is preserved."""
        f = self.f
        t = self.trunc
        deg = self.y_degree()
        if deg < 0:
            return self.copy()
        cpow = [f.one]
        for _ in range(deg):
            cpow.append(f.mul(cpow[-1], c))
        out = {}
        for m, r in enumerate(self.rows):
            for j, a in enumerate(r.c):
                if f.is_zero(a):
                    continue
                for k in range(j, -1, -1):
                    key = m + (j - k) * u
                    if t != INF and key >= t:
                        break
                    coeff = f.mul(a, cpow[j - k])
                    bc = math.comb(j, k)
                    if bc != 1:
                        coeff = f.mul(coeff, f.coerce(bc))
                    cur = out.setdefault(key, {})
                    cur[k] = f.add(cur.get(k, f.zero), coeff)
        n = max(out, default=-1) + 1
        limit = n if t == INF else min(n, int(t))
        rows = []
        for m in range(limit):
            cs = out.get(m)
            if cs:
                d = max(cs) + 1
                rows.append(UniPoly([cs.get(jj, f.zero) for jj in range(d)],
                                    f))
            else:
                rows.append(UniPoly.zero(f))
        return XSlices(rows, t, f)

    def unstretch(self, v, u, s):
        """Inverse of stretch for a factor of Y-degree s: each X^i Y^j term
        maps to X^((i + (s-j)u)/v) Y^j; exponents must come out integral."""
        f = self.f
        out = {}
        for m, r in enumerate(self.rows):
            for j, c in enumerate(r.c):
                if f.is_zero(c):
                    continue
                num = m + (s - j) * u
                if num % v:
                    raise StructuralError(
                        "fractional exponent in back-substitution")
                key = num // v
                cur = out.setdefault(key, {})
                cur[j] = f.add(cur.get(j, f.zero), c)
        if self.trunc == INF:
            t = INF
        else:
            t = (self.trunc + v - 1) // v  # slices below ceil(trunc/v) complete
        n = max(out, default=-1) + 1
        limit = n if t == INF else min(n, int(t))
        rows = []
        for m in range(limit):
            cs = out.get(m)
            if cs:
                deg = max(cs) + 1
                rows.append(UniPoly([cs.get(j, f.zero) for j in range(deg)], f))
            else:
                rows.append(UniPoly.zero(f))
        return XSlices(rows, t, f)

    def to_bipoly(self):
        """The known part as an exact polynomial."""
        d = {}
        f = self.f
        for m, r in enumerate(self.rows):
            for j, c in enumerate(r.c):
                if not f.is_zero(c):
                    d[(m, j)] = c
        return BiPoly(d, f, normalized=True)

    def eval_x0(self):
        """The Y-polynomial at X = 0."""
        return self.rows[0] if self.rows else UniPoly.zero(self.f)

    def is_monic_in_y(self):
        n = self.y_degree()
        if n < 0:
            return False
        if self.rows[0].degree != n or not self.f.eq(self.rows[0].lc(),
                                                     self.f.one):
            return False
        return all(r.degree < n for r in self.rows[1:])

    def divmod_y(self, other):
        """Division in Y by a divisor whose Y-leading coefficient is a unit
        series (nonzero at X=0); both truncated to the common precision."""
        t = min(self.trunc, other.trunc)
        a = _to_y_major(self.truncate(t))
        b = _to_y_major(other.truncate(t))
        f = self.f
        if not b:
            raise ZeroDivisionError
        tt = INF if t == INF else int(t)
        lead = b[-1]
        inv_lead = _series_inv(lead, tt, f)
        db = len(b) - 1
        q = [[f.zero] for _ in range(max(0, len(a) - db))]
        r = [list(s) for s in a]
        for k in range(len(a) - 1 - db, -1, -1):
            top = r[k + db]
            qk = _series_mul(top, inv_lead, tt, f)
            q[k] = qk
            for j in range(db + 1):
                r[k + j] = _series_sub(r[k + j],
                                       _series_mul(qk, b[j], tt, f), f)
        rem = r[:db]
        return (_from_y_major(q, t, f), _from_y_major(rem, t, f))

    def exact_div_y(self, other):
        q, r = self.divmod_y(other)
        if not r.is_zero_known():
            raise StructuralError("series division expected exact")
        return q

    def __repr__(self):
        return "XSlices(%s + O(X^%s))" % (self.to_bipoly().to_str(), self.trunc)


class PrecisionLoss(Exception):
    """Internal marker: a slice beyond the known truncation was requested."""

    def __init__(self, needed):
        super().__init__("slice beyond truncation; need order %s" % needed)
        self.needed = needed


def _to_y_major(xs):
    """List over Y-degree of X-coefficient lists (length = known slices)."""
    n = xs.y_degree()
    if n < 0:
        return []
    t = len(xs.rows)
    cols = [[xs.f.zero] * t for _ in range(n + 1)]
    for m, r in enumerate(xs.rows):
        for j, c in enumerate(r.c):
            cols[j][m] = c
    return cols


def _from_y_major(cols, trunc, f):
    if not cols:
        return XSlices([], trunc, f)
    t = max(len(s) for s in cols)
    rows = []
    for m in range(t):
        coeffs = [s[m] if m < len(s) else f.zero for s in cols]
        rows.append(UniPoly(coeffs, f))
    return XSlices(rows, trunc, f)


def _series_mul(a, b, t, f):
    n = len(a) + len(b) - 1 if a and b else 0
    n = min(n, t) if t != INF else n
    out = [f.zero] * n
    for i, x in enumerate(a):
        if f.is_zero(x) or i >= n:
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            if not f.is_zero(y):
                out[i + j] = f.add(out[i + j], f.mul(x, y))
    return out


def _series_sub(a, b, f):
    n = max(len(a), len(b))
    return [f.sub(a[i] if i < len(a) else f.zero,
                  b[i] if i < len(b) else f.zero) for i in range(n)]


def _series_inv(a, t, f):
    """Inverse of a power series with a(0) != 0, modulo X^t."""
    if not a or f.is_zero(a[0]):
        raise StructuralError("series not invertible (zero constant term)")
    if t == INF:
        raise ValueError("cannot invert a series to infinite order")
    inv0 = f.inv(a[0])
    out = [inv0]
    for m in range(1, t):
        acc = f.zero
        for i in range(1, min(m, len(a) - 1) + 1):
            acc = f.add(acc, f.mul(a[i], out[m - i]))
        out.append(f.neg(f.mul(acc, inv0)))
    return out
