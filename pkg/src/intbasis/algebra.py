"""Exact scalar arithmetic: rationals, univariate polynomials over a field,
and polynomial factorization over Q and over towers of algebraic extensions.

Field elements are plain immutable values -- gmpy2.mpq for the rationals,
nested tuples of mpq for extension towers -- so they hash, compare and store
cheaply.  A "field" is an object with add/sub/mul/div/inv/... methods acting
on such values; QQ is the rational singleton and NumberField builds one
extension level on top of another field.

Polynomials are dense little-endian coefficient lists wrapped in UniPoly.
Factorization over Q is Zassenhaus (squarefree split, distinct/equal degree
factorization mod p, Hensel lift, subset recombination); factorization over
an extension tower reduces to the base field through norms (resultants with
the generator's minimal polynomial).
"""

import random

import gmpy2
from gmpy2 import mpq, mpz

from .errors import StructuralError

_ZERO = mpq(0)
_ONE = mpq(1)


class RationalField:
    """The rational numbers.  Elements are gmpy2.mpq."""

    is_rationals = True

    def __init__(self):
        self.zero = _ZERO
        self.one = _ONE

    def __repr__(self):
        return "QQ"

    def coerce(self, a):
        if isinstance(a, (int, mpz)):
            return mpq(a)
        if isinstance(a, mpq):
            return a
        raise TypeError("cannot coerce %r into QQ" % (a,))

    def contains(self, a):
        return isinstance(a, mpq)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return a / b

    def inv(self, a):
        return 1 / a

    def is_zero(self, a):
        return not a

    def eq(self, a, b):
        return a == b

    def degree_over_q(self):
        return 1

    def sort_key(self, a):
        return (int(a.numerator), int(a.denominator))

    def to_str(self, a):
        return str(a)


QQ = RationalField()


class UniPoly:
    """Dense univariate polynomial over a field object.

    Coefficients little-endian: c[i] is the coefficient of x^i.  The zero
    polynomial has an empty coefficient list and degree -1.
    """

    __slots__ = ("c", "f")

    def __init__(self, coeffs, field=QQ, normalized=False):
        if not normalized:
            coeffs = [field.coerce(a) for a in coeffs]
            while coeffs and field.is_zero(coeffs[-1]):
                coeffs.pop()
        self.c = coeffs
        self.f = field

    @classmethod
    def zero(cls, field=QQ):
        return cls([], field, normalized=True)

    @classmethod
    def one(cls, field=QQ):
        return cls([field.one], field, normalized=True)

    @classmethod
    def gen(cls, field=QQ):
        return cls([field.zero, field.one], field, normalized=True)

    @classmethod
    def const(cls, a, field=QQ):
        a = field.coerce(a)
        if field.is_zero(a):
            return cls.zero(field)
        return cls([a], field, normalized=True)

    @property
    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def is_one(self):
        return len(self.c) == 1 and self.f.eq(self.c[0], self.f.one)

    def lc(self):
        if not self.c:
            return self.f.zero
        return self.c[-1]

    def __getitem__(self, i):
        if 0 <= i < len(self.c):
            return self.c[i]
        return self.f.zero

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        if len(self.c) != len(other.c):
            return False
        f = self.f
        return all(f.eq(a, b) for a, b in zip(self.c, other.c))

    def __hash__(self):
        return hash(tuple(self.c))

    def __add__(self, other):
        f = self.f
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = f.add(out[i], x)
        return UniPoly(out, f)

    def __sub__(self, other):
        f = self.f
        n = max(len(self.c), len(other.c))
        out = []
        for i in range(n):
            out.append(f.sub(self[i], other[i]))
        return UniPoly(out, f)

    def __neg__(self):
        f = self.f
        return UniPoly([f.neg(a) for a in self.c], f, normalized=True)

    def __mul__(self, other):
        f = self.f
        a, b = self.c, other.c
        if not a or not b:
            return UniPoly.zero(f)
        if f is QQ:
            out = [_ZERO] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            out[i + j] += x * y
            return UniPoly(out, f)
        out = [f.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if f.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not f.is_zero(y):
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
        return UniPoly(out, f)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        acc = UniPoly.one(self.f)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def scale(self, k):
        f = self.f
        k = f.coerce(k)
        if f.is_zero(k):
            return UniPoly.zero(f)
        return UniPoly([f.mul(a, k) for a in self.c], f, normalized=True)

    def shift_up(self, k):
        """Multiply by x^k."""
        if not self.c:
            return self
        return UniPoly([self.f.zero] * k + self.c, self.f, normalized=True)

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.f
        r = list(self.c)
        d = other.degree
        inv_lc = f.inv(other.lc())
        q = [f.zero] * max(0, len(r) - d)
        for i in range(len(r) - 1 - d, -1, -1):
            t = f.mul(r[i + d], inv_lc)
            if f.is_zero(t):
                continue
            q[i] = t
            for j, b in enumerate(other.c):
                r[i + j] = f.sub(r[i + j], f.mul(t, b))
        return UniPoly(q, f), UniPoly(r[:d], f)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise StructuralError("division expected to be exact was not")
        return q

    def monic(self):
        if self.is_zero() or self.f.eq(self.lc(), self.f.one):
            return self
        return self.scale(self.f.inv(self.lc()))

    def derivative(self):
        f = self.f
        out = []
        for i in range(1, len(self.c)):
            out.append(f.mul(self.c[i], f.coerce(i)))
        return UniPoly(out, f)

    def gcd(self, other):
        # over the rationals a monic euclidean loop suffers badly from
        # coefficient blowup on big inputs, so clear denominators and run a
        # primitive pseudo-remainder sequence over the integers instead
        if isinstance(self.f, RationalField):
            return _gcd_rational(self, other)
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """Extended gcd: returns (g, s, t) with s*self + t*other = g, g monic."""
        f = self.f
        a, b = self, other
        sa, sb = UniPoly.one(f), UniPoly.zero(f)
        ta, tb = UniPoly.zero(f), UniPoly.one(f)
        while not b.is_zero():
            q, r = divmod(a, b)
            a, b = b, r
            sa, sb = sb, sa - q * sb
            ta, tb = tb, ta - q * tb
        if a.is_zero():
            return a, sa, ta
        k = f.inv(a.lc())
        return a.scale(k), sa.scale(k), ta.scale(k)

    def squarefree_part(self):
        if self.degree <= 0:
            return self.monic()
        g = self.gcd(self.derivative())
        return self.exact_div(g).monic()

    def evaluate(self, a):
        f = self.f
        a = f.coerce(a)
        acc = f.zero
        for coeff in reversed(self.c):
            acc = f.add(f.mul(acc, a), coeff)
        return acc

    def compose(self, other):
        f = self.f
        acc = UniPoly.zero(f)
        for coeff in reversed(self.c):
            acc = acc * other + UniPoly.const(coeff, f)
        return acc

    def shift_arg(self, a):
        """Return p(x + a)."""
        return self.compose(UniPoly([a, self.f.one], self.f))

    def map_coeffs(self, fn, field=None):
        field = field or self.f
        return UniPoly([fn(a) for a in self.c], field)

    def resultant(self, other):
        """Resultant of self and other over the coefficient field."""
        return _resultant_field(self, other)

    def __repr__(self):
        return "UniPoly(%s)" % (self.to_str("x"),)

    def to_str(self, var="x"):
        if not self.c:
            return "0"
        f = self.f
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if f.is_zero(a):
                continue
            s = f.to_str(a) if not isinstance(f, RationalField) else str(a)
            if i == 0:
                parts.append(s)
            else:
                xs = var if i == 1 else "%s^%d" % (var, i)
                if s == "1":
                    parts.append(xs)
                elif s == "-1":
                    parts.append("-" + xs)
                else:
                    parts.append("%s*%s" % (s, xs))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _resultant_field(a, b):
    """Resultant via a Euclidean remainder sequence; fine over a field."""
    f = a.f
    if a.is_zero() or b.is_zero():
        return f.zero
    if a.degree == 0:
        return _field_pow(f, a.c[0], b.degree)
    if b.degree == 0:
        return _field_pow(f, b.c[0], a.degree)
    res = f.one
    sign = 1
    while b.degree > 0:
        if (a.degree % 2) and (b.degree % 2):
            sign = -sign
        r = a % b
        res = f.mul(res, _field_pow(f, b.lc(), a.degree - r.degree))
        a, b = b, r
        if b.is_zero():
            return f.zero
    res = f.mul(res, _field_pow(f, b.c[0], a.degree))
    return f.neg(res) if sign < 0 else res


def _field_pow(f, a, n):
    acc = f.one
    for _ in range(n):
        acc = f.mul(acc, a)
    return acc


def _clear_denominators(p):
    """Rational polynomial -> primitive integer coefficient list (mpz)."""
    den = gmpy2.mpz(1)
    for a in p.c:
        den = gmpy2.lcm(den, a.denominator)
    ints = [gmpy2.mpz(a * den) for a in p.c]
    g = gmpy2.mpz(0)
    for a in ints:
        g = gmpy2.gcd(g, a)
    if g > 1:
        ints = [a // g for a in ints]
    return ints


def _prem_ints(A, B):
    """prem(A, B) for little-endian mpz lists, deg A >= deg B >= 0."""
    dB = len(B) - 1
    lb = B[-1]
    R = list(A)
    while len(R) - 1 >= dB:
        t = R[-1]
        k = len(R) - 1 - dB
        R = [lb * c for c in R]
        for j, b in enumerate(B):
            R[k + j] -= t * b
        R.pop()
        while R and R[-1] == 0:
            R.pop()
        if not R:
            break
    return R


def _gcd_rational(pa, pb):
    f = pa.f
    if pa.is_zero():
        return pb.monic()
    if pb.is_zero():
        return pa.monic()
    A, B = _clear_denominators(pa), _clear_denominators(pb)
    if len(A) < len(B):
        A, B = B, A
    while True:
        if len(B) == 1:
            return UniPoly.one(f)
        R = _prem_ints(A, B)
        if not R:
            return UniPoly([f.coerce(a) for a in B], f).monic()
        g = gmpy2.mpz(0)
        for a in R:
            g = gmpy2.gcd(g, a)
        if g > 1:
            R = [a // g for a in R]
        A, B = B, R


def squarefree_decomposition(p):
    """Yun's algorithm: p = lc * prod g_i^i with the g_i monic, squarefree,
    pairwise coprime.  Returns the list of (g_i, i) with deg g_i > 0."""
    f = p.monic()
    if f.degree <= 0:
        return []
    d = f.derivative()
    a = f.gcd(d)
    b = f.exact_div(a)
    c = d.exact_div(a)
    out = []
    i = 1
    w = c - b.derivative()
    while b.degree > 0:
        g = b.gcd(w)
        if g.degree > 0:
            out.append((g, i))
        b = b.exact_div(g)
        w = w.exact_div(g) - b.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# generic subresultant resultant, usable over any integral domain with exact
# division (univariate polynomial rings in particular)


class PolyRing:
    """Ring protocol adapter: UniPoly's over a fixed field, seen as a plain
    commutative ring with exact division."""

    def __init__(self, field):
        self.field = field
        self.one = UniPoly.one(field)
        self.zero = UniPoly.zero(field)

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def exact_div(self, a, b):
        return a.exact_div(b)

    def pow(self, a, n):
        acc = self.one
        for _ in range(n):
            acc = self.mul(acc, a)
        return acc


def _strip(ring, c):
    while c and ring.is_zero(c[-1]):
        c.pop()
    return c


def _pseudo_rem(ring, a, b):
    """lc(b)^(deg a - deg b + 1) * a  mod  b, all in the ring."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        lr = r[-1]
        k = len(r) - 1 - db
        r = [ring.mul(x, lb) for x in r]
        for j in range(db + 1):
            r[k + j] = ring.sub(r[k + j], ring.mul(lr, b[j]))
        r.pop()
        while r and ring.is_zero(r[-1]):
            r.pop()
        e -= 1
    for _ in range(e):
        r = [ring.mul(x, lb) for x in r]
    return r


def resultant_generic(A, B, ring):
    """Resultant of two polynomials given as little-endian lists of ring
    elements, via the subresultant PRS (exact divisions only)."""
    A = _strip(ring, list(A))
    B = _strip(ring, list(B))
    if not A or not B:
        return ring.zero
    da, db = len(A) - 1, len(B) - 1
    sign = 1
    if da < db:
        if da % 2 and db % 2:
            sign = -sign
        A, B, da, db = B, A, db, da
    if db == 0:
        r = ring.pow(B[0], da)
        return ring.neg(r) if sign < 0 else r
    g = ring.one
    h = ring.one
    a, b = A, B
    while True:
        da, db = len(a) - 1, len(b) - 1
        if da % 2 and db % 2:
            sign = -sign
        r = _pseudo_rem(ring, a, b)
        if not r:
            return ring.zero
        delta = da - db
        divisor = g
        for _ in range(delta):
            divisor = ring.mul(divisor, h)
        a = b
        b = [ring.exact_div(x, divisor) for x in r]
        g = a[-1]
        if delta == 0:
            pass  # h unchanged
        elif delta == 1:
            h = g
        else:
            num = ring.pow(g, delta)
            den = ring.pow(h, delta - 1)
            h = ring.exact_div(num, den)
        if len(b) - 1 == 0:
            break
    da = len(a) - 1
    num = ring.pow(b[0], da)
    if da >= 1:
        den = ring.pow(h, da - 1)
        res = ring.exact_div(num, den)
    else:
        res = num
    return ring.neg(res) if sign < 0 else res


# ---------------------------------------------------------------------------
# factorization over Q: Zassenhaus


def _prim_int_coeffs(p):
    """Scale a rational polynomial to a primitive integer coefficient list;
    returns (list of int, rational scale) with p = scale * list."""
    den = mpz(1)
    for a in p.c:
        den = den * a.denominator // gmpy2_gcd(den, a.denominator)
    ints = [mpz(a * den) for a in p.c]
    g = mpz(0)
    for a in ints:
        g = gmpy2_gcd(g, a)
    if g == 0:
        return [], _ZERO
    if ints[-1] < 0:
        g = -g
    ints = [int(a // g) for a in ints]
    return ints, mpq(g, den)


def gmpy2_gcd(a, b):
    a, b = abs(mpz(a)), abs(mpz(b))
    while b:
        a, b = b, a % b
    return a


def _zp_norm(a, p):
    return [x % p for x in a]


def _zp_strip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _zp_strip(out)


def _zp_divmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        t = (a[i + db] * inv) % p
        q[i] = t
        if t:
            for j in range(db + 1):
                a[i + j] = (a[i + j] - t * b[j]) % p
    return _zp_strip(q), _zp_strip(a[:db])


def _zp_gcd(a, b, p):
    a, b = _zp_strip(list(a)), _zp_strip(list(b))
    while b:
        a, b = b, _zp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [(x * inv) % p for x in a]
    return a


def _zp_powmod(a, e, m, p):
    result = [1]
    base = _zp_divmod(a, m, p)[1]
    while e:
        if e & 1:
            result = _zp_divmod(_zp_mul(result, base, p), m, p)[1]
        e >>= 1
        if e:
            base = _zp_divmod(_zp_mul(base, base, p), m, p)[1]
    return result


def _zp_monic(a, p):
    if not a or a[-1] == 1:
        return list(a)
    inv = pow(a[-1], -1, p)
    return [(x * inv) % p for x in a]


def _ddf(f, p):
    """Distinct-degree factorization of a squarefree monic f mod p.
    Returns [(d, product of the irreducible factors of degree d)]."""
    out = []
    h = [0, 1]  # x
    v = list(f)
    d = 0
    while len(v) - 1 > 0:
        d += 1
        if 2 * d > len(v) - 1:
            out.append((len(v) - 1, v))
            break
        h = _zp_powmod(h, p, v, p)
        hx = list(h) + [0] * max(0, 2 - len(h))
        hx[1] = (hx[1] - 1) % p  # h - x
        g = _zp_gcd(_zp_strip(hx), v, p)
        if len(g) - 1 > 0:
            out.append((d, g))
            v = _zp_divmod(v, g, p)[0]
            h = _zp_divmod(h, v, p)[1]
    return out


def _edf(f, d, p, rng):
    """Cantor-Zassenhaus equal-degree splitting: f monic squarefree, all
    irreducible factors of degree d, p odd."""
    n = len(f) - 1
    if n == d:
        return [f]
    e = (pow(p, d) - 1) // 2
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = _zp_strip(a)
        if len(a) - 1 < 1:
            continue
        t = _zp_powmod(a, e, f, p)
        if not t:
            t = [0]
        t = _zp_strip([(t[0] - 1) % p] + list(t[1:]))
        g = _zp_gcd(t, f, p)
        if 0 < len(g) - 1 < n:
            return _edf(g, d, p, rng) + _edf(_zp_divmod(f, g, p)[0], d, p, rng)


def _factor_mod_p(f, p, rng):
    """Monic irreducible factors of a squarefree monic f mod p."""
    out = []
    for d, g in _ddf(f, p):
        out.extend(_edf(g, d, p, rng))
    out.sort(key=lambda a: (len(a), a))
    return out


def _hensel_pair_step(f, g, h, s, t, p, m):
    """One linear Hensel step: from f = g*h (mod p^m) to mod p^(m+1).
    g, h monic; s*g + t*h = 1 (mod p); f monic.  Everything little-endian int
    lists with coefficients reduced mod p^(m+1) by the caller's convention."""
    pm = pow(p, m)
    mod = pm * p
    fg = _poly_mul_int(g, h)
    d = [0] * max(len(f), len(fg))
    for i in range(len(d)):
        a = f[i] if i < len(f) else 0
        b = fg[i] if i < len(fg) else 0
        d[i] = ((a - b) % mod) // pm
    d = _zp_strip([x % p for x in d])
    if not d:
        return g, h
    dg = _zp_divmod(_zp_mul(t, d, p), g, p)[1]
    dh = _zp_divmod(_zp_mul(s, d, p), h, p)[1]
    g2 = list(g)
    for i, x in enumerate(dg):
        g2[i] = (g2[i] + pm * x) % mod
    h2 = list(h)
    for i, x in enumerate(dh):
        h2[i] = (h2[i] + pm * x) % mod
    return g2, h2


def _poly_mul_int(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _hensel_lift_list(f, facs, p, a):
    """Lift the monic factorization f = prod(facs) (mod p) to mod p^a.
    f monic with integer coefficients; returns the lifted monic factors."""
    if len(facs) == 1:
        pa = pow(p, a)
        return [[x % pa for x in f]]
    mid = len(facs) // 2
    g = [1]
    for fac in facs[:mid]:
        g = _zp_mul(g, fac, p)
    h = [1]
    for fac in facs[mid:]:
        h = _zp_mul(h, fac, p)
    gg, s, t = _zp_xgcd(g, h, p)
    if len(gg) - 1 != 0:
        raise StructuralError("hensel split factors not coprime mod p")
    inv = pow(gg[0], -1, p)
    s = [(x * inv) % p for x in s]
    t = [(x * inv) % p for x in t]
    G, H = list(g), list(h)
    fm = list(f)
    for m in range(1, a):
        G, H = _hensel_pair_step(fm, G, H, s, t, p, m)
    pa = pow(p, a)
    fmod = [x % pa for x in f]
    left = _hensel_lift_list(G, facs[:mid], p, a)
    right = _hensel_lift_list(H, facs[mid:], p, a)
    return left + right


def _zp_xgcd(a, b, p):
    a0, b0 = _zp_strip(list(a)), _zp_strip(list(b))
    sa, sb = [1], []
    ta, tb = [], [1]
    while b0:
        q, r = _zp_divmod(a0, b0, p)
        a0, b0 = b0, r
        sa, sb = sb, _zp_strip([(x - y) % p for x, y in
                                _zip_pad(sa, _zp_mul(q, sb, p))])
        ta, tb = tb, _zp_strip([(x - y) % p for x, y in
                                _zip_pad(ta, _zp_mul(q, tb, p))])
    return a0, sa, ta


def _zip_pad(a, b):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)


def _symmetric(x, m):
    x %= m
    return x - m if 2 * x > m else x


_PRIME_POOL = [9851, 9859, 9871, 9883, 9887, 9901, 9907, 9923, 9929, 9931,
               9941, 9949, 9967, 9973, 10007, 10009, 10037, 10039, 10061,
               10067, 10069, 10079, 10091, 10093, 10099, 10103, 10111]


def _factor_int_squarefree(f):
    """Zassenhaus on a primitive squarefree integer polynomial (int list,
    degree >= 1).  Returns primitive integer factor lists, each with positive
    leading coefficient, not sorted."""
    n = len(f) - 1
    if n == 1:
        return [f]
    lc = f[-1]
    rng = random.Random(0x5EED)
    best = None
    tried = 0
    for p in _PRIME_POOL:
        if lc % p == 0:
            continue
        fp = _zp_monic(_zp_norm(f, p), p)
        dfp = _zp_strip([(i * a) % p for i, a in enumerate(fp)][1:])
        if len(_zp_gcd(fp, dfp, p)) - 1 != 0:
            continue  # not squarefree mod p
        facs = _factor_mod_p(fp, p, rng)
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        tried += 1
        if tried >= 4 or len(best[1]) == 1:
            break
    if best is None:
        raise StructuralError("no usable prime found for factorization")
    p, facs = best
    if len(facs) == 1:
        return [f]
    # coefficient bound covering factors of lc * f
    maxc = max(abs(a) for a in f)
    bound = (1 << (n + 1)) * maxc * abs(lc) * (n + 1)
    a = 1
    pa = p
    while pa <= 2 * bound:
        pa *= p
        a += 1
    modulus = pa
    lifted = _hensel_lift_list(_monic_mod(f, modulus), facs, p, a)
    out = []
    rem = list(f)
    avail = list(lifted)
    k = 1
    while 2 * k <= len(avail):
        hit = None
        for subset in _subsets(len(avail), k):
            cand = [_symmetric(rem[-1], modulus)]
            for idx in subset:
                cand = [_symmetric(v, modulus) for v in
                        _poly_mul_mod(cand, avail[idx], modulus)]
            cand = _int_primitive(cand)
            if cand is None:
                continue
            q = _int_poly_divide(rem, cand)
            if q is not None:
                hit = (subset, cand, q)
                break
        if hit is None:
            k += 1
            continue
        subset, cand, q = hit
        out.append(cand)
        rem = q
        avail = [g for i, g in enumerate(avail) if i not in subset]
    if len(rem) - 1 > 0:
        out.append(_int_primitive_always(rem))
    return out


def _monic_mod(f, m):
    inv = pow(f[-1] % m, -1, m)
    return [(x * inv) % m for x in f]


def _poly_mul_mod(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % m
    return out


def _subsets(n, k):
    # lexicographic k-subsets of range(n)
    idx = list(range(k))
    while True:
        yield tuple(idx)
        for i in range(k - 1, -1, -1):
            if idx[i] != i + n - k:
                break
        else:
            return
        idx[i] += 1
        for j in range(i + 1, k):
            idx[j] = idx[j - 1] + 1


def _int_primitive(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    if not c:
        return None
    g = 0
    for x in c:
        g = gmpy2_gcd(g, x)
    g = int(g)
    if c[-1] < 0:
        g = -g
    return [int(x // g) for x in c]


def _int_primitive_always(c):
    r = _int_primitive(c)
    if r is None:
        raise StructuralError("unexpected zero polynomial")
    return r


def _int_poly_divide(a, b):
    """Exact division of integer polynomials, or None if not divisible."""
    if len(b) > len(a):
        return None
    r = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        num = r[i + len(b) - 1]
        if num % b[-1]:
            return None
        t = num // b[-1]
        q[i] = t
        if t:
            for j in range(len(b)):
                r[i + j] -= t * b[j]
    if any(r[: len(b) - 1]):
        return None
    return q


def _factor_rational(p):
    """Monic irreducible factors with multiplicity of p over QQ, unsorted."""
    out = []
    # x^k factor first
    k = 0
    while k <= p.degree and QQ.is_zero(p[k]):
        k += 1
    if k:
        out.append((UniPoly.gen(QQ), k))
        p = UniPoly(p.c[k:], QQ)
    for g, mult in squarefree_decomposition(p):
        ints, _scale = _prim_int_coeffs(g)
        for fac in _factor_int_squarefree(ints):
            q = UniPoly([mpq(x) for x in fac], QQ).monic()
            out.append((q, mult))
    return out


# ---------------------------------------------------------------------------
# extension towers


class NumberField:
    """One algebraic extension step: base_field[z]/(min_poly).

    Elements are tuples of base-field elements of length deg(min_poly),
    little-endian in the generator.
    """

    is_rationals = False

    def __init__(self, base, min_poly, name=None):
        if min_poly.degree < 2:
            raise ValueError("extension needs degree >= 2")
        self.base = base
        self.min_poly = min_poly.monic()
        self.degree = min_poly.degree
        self.name = name or ("z%d" % (self.tower_height(),))
        d = self.degree
        self.zero = tuple([base.zero] * d)
        self.one = tuple([base.one] + [base.zero] * (d - 1))
        # reductions of z^d .. z^(2d-2) as tuples, for products
        self._pow_table = self._build_pow_table()

    def tower_height(self):
        h = 1
        f = self.base
        while isinstance(f, NumberField):
            h += 1
            f = f.base
        return h

    def _build_pow_table(self):
        base, d = self.base, self.degree
        m = self.min_poly
        table = []
        # z^d = -(m - z^d)
        cur = [base.neg(m[i]) for i in range(d)]
        table.append(tuple(cur))
        for _ in range(d - 2):
            # multiply by z
            nxt = [base.zero] + cur[:-1]
            top = cur[-1]
            if not base.is_zero(top):
                for i in range(d):
                    nxt[i] = base.add(nxt[i], base.mul(top, table[0][i]))
            cur = nxt
            table.append(tuple(cur))
        return table

    def __repr__(self):
        return "%r[%s]/(%s)" % (self.base, self.name,
                                self.min_poly.to_str(self.name))

    def gen(self):
        d = self.degree
        return tuple([self.base.zero, self.base.one] + [self.base.zero] * (d - 2))

    def contains(self, a):
        return (isinstance(a, tuple) and len(a) == self.degree
                and all(self.base.contains(x) for x in a))

    def coerce(self, a):
        if self.contains(a):
            return a
        b = self.base.coerce(a)
        return tuple([b] + [self.base.zero] * (self.degree - 1))

    def add(self, a, b):
        base = self.base
        return tuple(base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        base = self.base
        return tuple(base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        base = self.base
        return tuple(base.neg(x) for x in a)

    def mul(self, a, b):
        base, d = self.base, self.degree
        prod = [base.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not base.is_zero(y):
                    prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if base.is_zero(c):
                continue
            red = self._pow_table[k - d]
            for i in range(d):
                out[i] = base.add(out[i], base.mul(c, red[i]))
        return tuple(out)

    def inv(self, a):
        ap = self.as_poly(a)
        if ap.is_zero():
            raise ZeroDivisionError("inverse of zero in %r" % (self,))
        g, s, _t = ap.xgcd(self.min_poly)
        if g.degree != 0:
            raise StructuralError("minimal polynomial not irreducible over base")
        return self.from_poly(s)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        base = self.base
        return all(base.is_zero(x) for x in a)

    def eq(self, a, b):
        base = self.base
        return all(base.eq(x, y) for x, y in zip(a, b))

    def pow(self, a, n):
        acc = self.one
        while n:
            if n & 1:
                acc = self.mul(acc, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return acc

    def degree_over_q(self):
        return self.degree * self.base.degree_over_q()

    def _trace_powers(self):
        """Traces of 1, z, ..., z^(d-1) down to the base field, via Newton's
        identities on the minimal polynomial."""
        if getattr(self, "_trace_vec", None) is None:
            base, d, m = self.base, self.degree, self.min_poly
            vec = [base.coerce(d)]
            for k in range(1, d):
                s = base.mul(base.coerce(k), m[d - k])
                for j in range(1, k):
                    s = base.add(s, base.mul(m[d - j], vec[k - j]))
                vec.append(base.neg(s))
            self._trace_vec = vec
        return self._trace_vec

    def trace(self, a):
        """Trace of a down one level, into the base field."""
        base = self.base
        out = base.zero
        for coeff, t in zip(a, self._trace_powers()):
            out = base.add(out, base.mul(coeff, t))
        return out

    def as_poly(self, a):
        """Element as a UniPoly over the base field (in the generator)."""
        return UniPoly(list(a), self.base)

    def from_poly(self, p):
        c = (p % self.min_poly).c if p.degree >= self.degree else p.c
        c = list(c) + [self.base.zero] * (self.degree - len(c))
        return tuple(c)

    def sort_key(self, a):
        base = self.base
        return tuple(base.sort_key(x) for x in a)

    def to_str(self, a):
        p = self.as_poly(a)
        if p.degree <= 0:
            return self.base.to_str(p[0]) if not p.is_zero() else "0"
        s = p.to_str(self.name)
        return "(" + s + ")" if (" " in s or p.degree > 0) else s


def tower_chain(field):
    """Fields from QQ up to and including `field`."""
    chain = []
    f = field
    while isinstance(f, NumberField):
        chain.append(f)
        f = f.base
    chain.append(f)
    return list(reversed(chain))


def trace_down_to(field, a, target):
    """Trace of a from `field` down to `target`, a field lower in (or equal
    to) the same tower."""
    f, t = field, a
    while f is not target:
        if not isinstance(f, NumberField):
            raise StructuralError("trace target is not below the given field")
        t = f.trace(t)
        f = f.base
    return t


def norm_poly(field, q):
    """Norm of q in field[Y] down one level: the resultant in the generator z
    of the minimal polynomial with q, a polynomial over field.base."""
    base = field.base
    ring = PolyRing(base)
    d = field.degree
    # q as a polynomial in z with coefficients in base[Y]
    qz = []
    for k in range(d):
        coeffs = [a[k] for a in q.c]
        qz.append(UniPoly(coeffs, base))
    while qz and qz[-1].is_zero():
        qz.pop()
    mz = [UniPoly.const(c, base) for c in field.min_poly.c]
    return resultant_generic(mz, qz, ring)


def _factor_ext_squarefree(q, field):
    """Irreducible monic factors of a squarefree monic q over a NumberField."""
    if q.degree == 1:
        return [q]
    z = field.gen()
    s = 0
    while True:
        shift = UniPoly([field.neg(field.mul(field.coerce(s), z)), field.one],
                        field)
        qs = q.compose(shift)  # q(Y - s*z)
        n = norm_poly(field, qs)
        if n.degree == q.degree * field.degree and \
                n.gcd(n.derivative()).degree == 0:
            break
        s += 1
        if s > 4 * q.degree * field.degree + 8:
            raise StructuralError("no squarefree norm shift found")
    nf = factor_univariate(n, field.base)
    out = []
    unshift = UniPoly([field.mul(field.coerce(s), z), field.one], field)
    for g, _m in nf:
        glift = g.map_coeffs(field.coerce, field)
        h = qs.gcd(glift)
        if h.degree > 0:
            out.append(h.compose(unshift).monic())
    if sum(h.degree for h in out) != q.degree:
        raise StructuralError("norm factorization lost degree")
    return out


def factor_univariate(p, field=None):
    """Factor p into monic irreducibles over its coefficient field.

    Returns a list of (factor, multiplicity), sorted by (degree, coefficient
    order) so the choice of "first" factor is deterministic.  The leading
    coefficient is dropped (callers keep track of it when they care).
    """
    field = field or p.f
    if p.degree < 1:
        return []
    if isinstance(field, RationalField):
        out = _factor_rational(p)
    else:
        out = []
        k = 0
        while k <= p.degree and field.is_zero(p[k]):
            k += 1
        if k:
            out.append((UniPoly.gen(field), k))
            p = UniPoly(p.c[k:], field)
        for g, mult in squarefree_decomposition(p):
            for h in _factor_ext_squarefree(g.monic(), field):
                out.append((h, mult))
    out.sort(key=lambda t: (t[0].degree, [field.sort_key(a) for a in t[0].c]))
    return out


def extend_tower(field, p):
    """Adjoin a root of p (a UniPoly over `field`).

    Picks the canonical smallest irreducible factor of p; a linear factor
    keeps the field as is.  Returns (new_field, root_element).
    """
    facs = factor_univariate(p, field)
    if not facs:
        raise ValueError("cannot adjoin a root of a constant")
    g = facs[0][0]
    if g.degree == 1:
        return field, field.neg(g[0])
    nf = NumberField(field, g)
    return nf, nf.gen()
