"""Sign/log-magnitude arithmetic on top of MPFR.

A value is stored as ``sign * exp(logmag)`` together with ``err``, an upper
bound for the absolute error of ``logmag`` (equivalently, the relative error
of the value).  Exact rationals are carried alongside while they stay small,
so that integer and rational bookkeeping (indicators, rounding, hypernatural
indices) never loses information.  Huge integers whose digits cannot be kept
may still carry their parity.

All functions work at the precision of the current gmpy2 context.
"""

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import DomainError

EXACT_BITS = 4096
_EMAX = gmpy2.get_emax_max()
_EMIN = gmpy2.get_emin_min()
_BIG_LOG = mpfr(2) ** 60
NEG_INF = mpfr("-inf")


class Imprecise(Exception):
    """Raised internally when a result lost too many bits."""


# ---------------------------------------------------------------------------
# second logarithmic level
#
# MPFR exponents stop near 2**30, so a log-magnitude such as -2**(48 * 2**48)
# (the gauge exp(-rho^(-1/rho)) at eps = 2^-48) is itself out of range.  Such
# log-magnitudes are stored as a Tower: sign * exp(L).  For a NetValue whose
# logmag is a Tower, ``err`` bounds the absolute error of L instead.

_TOWER_BITS = 2 ** 28
TOWER_L = mpfr(_TOWER_BITS) * gmpy2.log(mpfr(2))
_TOWER_AT = gmpy2.mul_2exp(mpfr(1), _TOWER_BITS)


class Tower:
    """The extended real ``sign * exp(L)`` with ``L >= TOWER_L``."""

    __slots__ = ("sign", "L")

    def __init__(self, sign, L):
        self.sign = sign
        self.L = L

    def __neg__(self):
        return Tower(-self.sign, self.L)

    def __abs__(self):
        return Tower(1, self.L)

    def _key(self):
        return (2, self.L) if self.sign > 0 else (0, -self.L)

    def __lt__(self, o):
        return _lm_key(self) < _lm_key(o)

    def __le__(self, o):
        return _lm_key(self) <= _lm_key(o)

    def __gt__(self, o):
        return _lm_key(self) > _lm_key(o)

    def __ge__(self, o):
        return _lm_key(self) >= _lm_key(o)

    def __eq__(self, o):
        return isinstance(o, Tower) and self.sign == o.sign and self.L == o.L

    def __hash__(self):
        return hash((self.sign, self.L))

    def __float__(self):
        return float("inf") * self.sign

    def __add__(self, o):
        return lm_sum(self, o)

    __radd__ = __add__

    def __sub__(self, o):
        return lm_sum(self, -o)

    def __rsub__(self, o):
        return lm_sum(o, -self)

    def __mul__(self, c):
        return lm_scale(self, c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Tower):
            return lm_ratio(self, c)
        return lm_scale(self, 1 / mpfr(c))

    def __rtruediv__(self, c):
        return lm_ratio(c, self)

    def __repr__(self):
        return "%sexp(%s)" % ("-" if self.sign < 0 else "", gmpy2.mpfr(self.L, 53))


def is_tower(x):
    return isinstance(x, Tower)


def _lm_key(x):
    if isinstance(x, Tower):
        return x._key()
    return (1, x)


def lm_norm(x):
    """Canonical form: mpfr when it fits, Tower otherwise."""
    if isinstance(x, Tower):
        if x.L < TOWER_L:
            return x.sign * gmpy2.exp(x.L)
        return x
    if gmpy2.is_finite(x) and abs(x) >= _TOWER_AT:
        return Tower(1 if x > 0 else -1, gmpy2.log(abs(x)))
    return x


def lm_logabs(x):
    """ln|x| as an mpfr."""
    if isinstance(x, Tower):
        return x.L
    return gmpy2.log(abs(mpfr(x)))


def lm_sum(x, y):
    if not isinstance(x, Tower) and not isinstance(y, Tower):
        return lm_norm(mpfr(x) + y)
    if not isinstance(x, Tower):
        x, y = y, x
    if not isinstance(y, Tower):
        return x            # a finite shift is below the resolution of L
    if x.L < y.L:
        x, y = y, x
    w = gmpy2.exp(y.L - x.L)
    if x.sign == y.sign:
        return lm_norm(Tower(x.sign, x.L + gmpy2.log1p(w)))
    t = -gmpy2.expm1(y.L - x.L)
    if t == 0:
        raise Imprecise("cancellation between astronomically large logarithms")
    return lm_norm(Tower(x.sign, x.L + gmpy2.log(t)))


def lm_scale(x, c):
    """c * x for an mpfr scalar c."""
    c = mpfr(c)
    if c == 0:
        return mpfr(0)
    if not isinstance(x, Tower):
        return lm_norm(c * x)
    s = x.sign * (1 if c > 0 else -1)
    return lm_norm(Tower(s, x.L + gmpy2.log(abs(c))))


def lm_ratio(x, y):
    """x / y as an mpfr, saturating to +-inf or 0."""
    if not isinstance(x, Tower) and not isinstance(y, Tower):
        return mpfr(x) / y
    sx = x.sign if isinstance(x, Tower) else (1 if x > 0 else -1 if x < 0 else 0)
    sy = y.sign if isinstance(y, Tower) else (1 if y > 0 else -1)
    if sx == 0:
        return mpfr(0)
    d = lm_logabs(x) - lm_logabs(y)
    if d > TOWER_L:
        return mpfr("inf") * (sx * sy)
    return sx * sy * gmpy2.exp(d)


_CONTEXTS = {}
_ULPS = {}
_RATIONALS = {}


def context(prec):
    """A gmpy2 context with the widest exponent range and ``prec`` bits."""
    ctx = _CONTEXTS.get(prec)
    if ctx is None:
        ctx = _CONTEXTS[prec] = gmpy2.context(
            precision=prec, emax=_EMAX, emin=_EMIN, subnormalize=False,
            trap_underflow=False, trap_overflow=False)
    return ctx


def _ulp():
    p = gmpy2.get_context().precision
    u = _ULPS.get(p)
    if u is None:
        u = _ULPS[p] = mpfr(2) ** -p
    return u


def _small(q):
    return (q.numerator.bit_length() + q.denominator.bit_length()) <= EXACT_BITS


class NetValue:
    """One grid value of a net, ``sign * exp(logmag)``."""

    __slots__ = ("sign", "_lm", "_err", "exact", "parity", "fuzzy", "_prec")

    def __init__(self, sign, logmag, err=None, exact=None, parity=None, fuzzy=False):
        self.sign = sign
        self._lm = logmag
        self._err = mpfr(0) if err is None else err
        self.exact = exact
        self.parity = parity
        # fuzzy: a cancellation left only an error bound exp(logmag) around 0
        self.fuzzy = fuzzy

    # exact values compute their logarithm only when it is asked for
    @property
    def logmag(self):
        if self._lm is None:
            self._fill()
        return self._lm

    @property
    def err(self):
        if self._lm is None:
            self._fill()
        return self._err

    def _fill(self):
        a = abs(self.exact)
        with gmpy2.context(context(self._prec)):
            if a == 1:
                self._lm, self._err = mpfr(0), mpfr(0)
            else:
                self._lm = gmpy2.log(mpfr(a))
                self._err = _ulp() * (1 + abs(self._lm))

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls(0, NEG_INF, exact=mpq(0), parity=0)

    @classmethod
    def from_rational(cls, q):
        q = mpq(q)
        if _small(q):
            key = (q, gmpy2.get_context().precision)
            hit = _RATIONALS.get(key)
            if hit is None:
                if len(_RATIONALS) > 100000:
                    _RATIONALS.clear()
                hit = _RATIONALS[key] = cls._from_rational(q)
            return hit
        return cls._from_rational(q)

    @classmethod
    def _from_rational(cls, q):
        if q == 0:
            return cls.zero()
        sign = 1 if q > 0 else -1
        par = None
        if q.denominator == 1:
            par = int(q.numerator % 2)
        if not _small(q):
            a = abs(q)
            lm = gmpy2.log(mpfr(a))
            return cls(sign, lm, _ulp() * (1 + abs(lm)), None, par)
        v = cls(sign, None, None, q, par)
        v._prec = gmpy2.get_context().precision
        return v

    @classmethod
    def from_mpfr(cls, x, relerr=None):
        if x == 0:
            raise Imprecise("exact zero from rounded arithmetic")
        sign = 1 if x > 0 else -1
        lm = gmpy2.log(abs(x))
        err = _ulp() * (2 + abs(lm))
        if relerr is not None:
            err += relerr
        return cls(sign, lm, err)

    # inspection -------------------------------------------------------------
    @property
    def is_zero(self):
        return self.sign == 0 and not self.fuzzy

    def is_integer(self):
        if self.exact is not None:
            return self.exact.denominator == 1
        return self.parity is not None

    def to_mpfr(self):
        if self.sign == 0:
            return mpfr(0)
        if isinstance(self.logmag, Tower) and self.logmag.sign < 0:
            return mpfr(0)
        if self.logmag > _BIG_LOG:
            return mpfr("inf") * self.sign
        return self.sign * gmpy2.exp(self.logmag)

    def to_float(self):
        if self.exact is not None:
            return float(self.exact)
        return float(self.to_mpfr())

    def reliable(self, tol):
        if self.fuzzy:
            return False
        if self.sign == 0:
            return True
        if isinstance(self.logmag, Tower):
            return self.err <= tol
        scale = abs(self.logmag)
        if scale < 1:
            scale = mpfr(1)
        return self.err <= tol * scale

    def __repr__(self):
        if self.exact is not None:
            return "NetValue(%s)" % self.exact
        lm = self.logmag if isinstance(self.logmag, Tower) else gmpy2.mpfr(self.logmag, 53)
        if self.fuzzy:
            return "NetValue(0 +- exp(%s))" % lm
        return "NetValue(%+d, %s)" % (self.sign, lm)

    def key(self):
        """Hashable, precision-independent summary used for determinism checks."""
        if self.exact is not None:
            return ("q", str(self.exact))
        if isinstance(self.logmag, Tower):
            return ("t", self.sign, self.logmag.sign,
                    gmpy2.mpfr(self.logmag.L, 64).__format__(".18e"))
        return ("l", self.sign, gmpy2.mpfr(self.logmag, 64).__format__(".18e"))


ZERO = NetValue.zero()


def _exact_result(q, parity=None):
    if _small(q):
        return NetValue.from_rational(q)
    v = NetValue.from_rational(q)
    if parity is not None:
        v.parity = parity
    return v


def _tiny_tower(lm):
    return is_tower(lm) and lm.sign < 0


def _fuzzy(logbound):
    return NetValue(0, logbound, mpfr("inf"), fuzzy=True)


# arithmetic ---------------------------------------------------------------

def neg(a):
    if a.exact is not None:
        return NetValue(-a.sign, a.logmag, a.err, -a.exact, a.parity)
    return NetValue(-a.sign, a.logmag, a.err, None, a.parity, a.fuzzy)


def absval(a):
    if a.exact is not None:
        return NetValue(abs(a.sign), a.logmag, a.err, abs(a.exact), a.parity)
    return NetValue(abs(a.sign) if not a.fuzzy else 0, a.logmag, a.err, None,
                    a.parity, a.fuzzy)


def _err_of(lm, parts):
    """Error bound for a result ``lm`` built from ``sum c_i * lm_i``.

    ``parts`` holds ``(lm_i, err_i, c_i)``; errors follow the NetValue
    convention (absolute on logmag, or on L for a Tower)."""
    u = _ulp()
    if isinstance(lm, Tower):
        tot = mpfr(0)
        for x, e, c in parts:
            if e == 0:
                continue
            if isinstance(x, Tower):
                t = gmpy2.log(abs(mpfr(c)) * e) + x.L - lm.L
            else:
                t = gmpy2.log(abs(mpfr(c)) * e) - lm.L
            tot += gmpy2.exp(t)
        return tot + 4 * u
    tot = mpfr(0)
    for x, e, c in parts:
        if e == 0:
            continue
        if isinstance(x, Tower):
            return mpfr("inf")
        tot += abs(mpfr(c)) * e
    return tot + u * (2 + abs(lm))


def add(a, b):
    if a.exact is not None and b.exact is not None:
        return _exact_result(a.exact + b.exact)
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    par = None
    if a.parity is not None and b.parity is not None:
        par = (a.parity + b.parity) % 2
    if a.fuzzy or b.fuzzy:
        if a.fuzzy and b.fuzzy:
            return _fuzzy(lm_sum(gmpy2.maxnum(a.logmag, b.logmag) if not (
                is_tower(a.logmag) or is_tower(b.logmag)) else max(a.logmag, b.logmag, key=_lm_key),
                gmpy2.log(mpfr(2))))
        f, x = (a, b) if a.fuzzy else (b, a)
        if f.logmag >= x.logmag:
            return _fuzzy(lm_sum(f.logmag, gmpy2.log(mpfr(2))))
        d = lm_sum(x.logmag, -f.logmag)
        extra = mpfr(0) if is_tower(d) else gmpy2.exp(-d)
        return NetValue(x.sign, x.logmag, x.err + 2 * extra, None, par)
    if a.logmag < b.logmag:
        a, b = b, a
    u = _ulp()
    try:
        d = lm_sum(a.logmag, -b.logmag)
    except Imprecise:
        if not _tiny_tower(a.logmag):
            raise
        # |a + b| <= 2 max(|a|, |b|); the factor 2 is below the resolution of L
        if a.sign == b.sign:
            return NetValue(a.sign, a.logmag, a.err + b.err + 4 * u, None, par)
        return _fuzzy(a.logmag)
    if is_tower(d) or gmpy2.is_infinite(d):
        # b is below the resolution of a
        return NetValue(a.sign, a.logmag, a.err, None, par)
    w = gmpy2.exp(-d)
    if a.sign == b.sign:
        lm = lm_sum(a.logmag, gmpy2.log1p(w))
        if is_tower(lm):
            return NetValue(a.sign, lm, a.err + b.err + 4 * u, None, par)
        # rounding in w = exp(-d) is relative, so a tiny w keeps a tiny error
        err = a.err + w * (a.err + b.err) + w * u * (2 + abs(d)) + u * (abs(a.logmag) + abs(lm))
        return NetValue(a.sign, lm, err, None, par)
    t = -gmpy2.expm1(-d)
    if is_tower(a.logmag):
        if t == 0 or a.err + b.err >= t:
            if _tiny_tower(a.logmag):
                return _fuzzy(a.logmag)
            raise Imprecise("cancellation between astronomically large values")
        lm = lm_sum(a.logmag, gmpy2.log(t))
        return NetValue(a.sign, lm, a.err + b.err + 4 * u, None, par)
    spread = a.err + w * b.err
    if t == 0 or spread >= t:
        bound = gmpy2.maxnum(a.err + b.err, u)
        return _fuzzy(a.logmag + gmpy2.log(bound))
    lm = a.logmag + gmpy2.log(t)
    err = spread / t + u * (2 + abs(lm))
    return NetValue(a.sign, lm, err, None, par)


def sub(a, b):
    return add(a, neg(b))


def mul(a, b):
    if a.exact is not None and b.exact is not None:
        return _exact_result(a.exact * b.exact)
    if a.is_zero or b.is_zero:
        return NetValue.zero()
    par = None
    if a.parity is not None and b.parity is not None:
        par = a.parity * b.parity
    if a.fuzzy or b.fuzzy:
        return _fuzzy(lm_sum(a.logmag, b.logmag))
    lm = lm_sum(a.logmag, b.logmag)
    err = _err_of(lm, [(a.logmag, a.err, 1), (b.logmag, b.err, 1)])
    return NetValue(a.sign * b.sign, lm, err, None, par)


def div(a, b):
    if b.is_zero:
        raise DomainError("division by zero")
    if b.fuzzy:
        raise Imprecise("division by an unresolved zero")
    if a.exact is not None and b.exact is not None:
        return _exact_result(a.exact / b.exact)
    if a.is_zero:
        return NetValue.zero()
    if a.fuzzy:
        return _fuzzy(lm_sum(a.logmag, -b.logmag))
    lm = lm_sum(a.logmag, -b.logmag)
    err = _err_of(lm, [(a.logmag, a.err, 1), (b.logmag, b.err, 1)])
    return NetValue(a.sign * b.sign, lm, err)


def _finite_mpfr(x):
    if gmpy2.is_infinite(x) or gmpy2.is_nan(x):
        raise DomainError("overflow beyond the extended exponent range")
    return x


def exp(a):
    if a.is_zero:
        return _exact_result(mpq(1))
    if a.fuzzy:
        raise Imprecise("exp of an unresolved zero")
    if is_tower(a.logmag):
        if a.logmag.sign < 0:
            # exp of something astronomically close to 0
            return NetValue(1, lm_scale(a.logmag, a.sign), mpfr(0) + a.err + 4 * _ulp())
        raise DomainError("exp argument beyond the extended exponent range")
    if a.logmag >= TOWER_L:
        return NetValue(1, Tower(a.sign, a.logmag), a.err + 4 * _ulp())
    v = _finite_mpfr(a.to_mpfr())
    av = abs(v)
    return NetValue(1, lm_norm(v), av * a.err + _ulp() * (1 + av))


def log(a):
    if a.is_zero:
        raise DomainError("log of zero")
    if a.fuzzy:
        raise Imprecise("log of an unresolved zero")
    if a.sign < 0:
        raise DomainError("log of a negative value")
    if a.exact is not None and a.exact == 1:
        return NetValue.zero()
    lm = a.logmag
    if is_tower(lm):
        return NetValue(lm.sign, lm.L, a.err + 4 * _ulp())
    if lm == 0:
        return _fuzzy(gmpy2.log(gmpy2.maxnum(a.err, _ulp())))
    alm = abs(lm)
    if a.err >= alm:
        return _fuzzy(gmpy2.log(a.err))
    return NetValue(1 if lm > 0 else -1, gmpy2.log(alm),
                    a.err / alm + _ulp() * 2)


def _int_parity(b):
    if b.exact is not None:
        if b.exact.denominator != 1:
            return None
        return int(b.exact.numerator % 2)
    return b.parity


def power(a, b):
    if b.is_zero:
        return _exact_result(mpq(1))
    if b.fuzzy:
        raise Imprecise("unresolved exponent")
    if (a.exact is not None and b.exact is not None and b.exact.denominator == 1
            and abs(b.exact) <= 4096):
        e = int(b.exact)
        if a.exact == 0 and e < 0:
            raise DomainError("zero to a negative power")
        bits = (a.exact.numerator.bit_length() + a.exact.denominator.bit_length()) * abs(e)
        if bits <= EXACT_BITS:
            return _exact_result(a.exact ** e)
    if a.is_zero:
        if b.sign > 0:
            return NetValue.zero()
        raise DomainError("zero to a non-positive power")
    if a.fuzzy:
        if b.sign > 0:
            bv = b.to_mpfr()
            return _fuzzy(a.logmag * bv)
        raise Imprecise("unresolved base")
    sign = 1
    if a.sign < 0:
        par = _int_parity(b)
        if par is None:
            raise DomainError("negative base with a non-integer exponent")
        sign = -1 if par else 1
    if a.exact is not None and abs(a.exact) == 1:
        return NetValue(sign, mpfr(0), mpfr(0), mpq(sign), None)
    if is_tower(b.logmag):
        raise DomainError("exponent beyond the extended exponent range")
    if a.logmag == 0:
        return NetValue(sign, mpfr(0), abs(b.to_mpfr()) * a.err + _ulp())
    # ln|ln|result|| = ln|b| + ln|ln|a||
    ll = b.logmag + lm_logabs(a.logmag)
    u = _ulp()
    if ll >= TOWER_L:
        s = b.sign * (a.logmag.sign if is_tower(a.logmag) else (1 if a.logmag > 0 else -1))
        rel_a = a.err if is_tower(a.logmag) else a.err / abs(a.logmag)
        lm = Tower(s, ll)
        err = b.err + rel_a + 4 * u
    else:
        if is_tower(a.logmag):
            lm = lm_scale(a.logmag, b.to_mpfr())
            err = mpfr("inf") if not is_tower(lm) else a.err + b.err + 4 * u
        else:
            bv = _finite_mpfr(b.to_mpfr())
            lm = _finite_mpfr(bv * a.logmag)
            err = abs(bv) * a.err + abs(lm) * b.err + u * (1 + abs(lm))
            lm = lm_norm(lm)
            if is_tower(lm):
                err = b.err + a.err / abs(a.logmag) + 4 * u
    par = None
    if a.parity is not None and b.exact is not None and b.exact.denominator == 1 and b.exact > 0:
        par = a.parity
    return NetValue(sign, lm, err, None, par)


def sin(a):
    if a.is_zero:
        return NetValue.zero()
    if a.fuzzy:
        raise Imprecise("sin of an unresolved zero")
    prec = gmpy2.get_context().precision
    if a.logmag > (prec // 2) * 0.6931471805599453:
        raise DomainError("sin argument too large for the working precision")
    if a.logmag < -(prec // 2 + 2) * 0.6931471805599453:
        # sin x = x (1 - x^2/6 + ...) and x^2 is below the working precision
        return NetValue(a.sign, a.logmag, a.err + 2 * _ulp(), None, None)
    v = a.to_mpfr()
    r = gmpy2.sin(v)
    if r == 0:
        raise Imprecise("sin vanished")
    return NetValue.from_mpfr(r, abs(v) * a.err / abs(r))


def rpi(a):
    """Nearest integer with ties toward +infinity: floor(x + 1/2)."""
    if a.exact is not None:
        q = a.exact + mpq(1, 2)
        return _exact_result(mpq(q.numerator // q.denominator))
    if a.fuzzy:
        # the rounded value of something tiny is 0
        if a.logmag < -1:
            return NetValue.zero()
        raise Imprecise("rounding an unresolved value")
    prec = gmpy2.get_context().precision
    if a.logmag > (prec - 8) * 0.6931471805599453:
        # beyond the resolution of the mantissa the value is already integral
        return NetValue(a.sign, a.logmag, a.err + mpfr(2) ** (8 - prec), None, None)
    v = a.to_mpfr()
    f = gmpy2.floor(v + mpfr(0.5))
    spread = abs(v) * a.err
    frac = v + mpfr(0.5) - f
    if frac < spread or (1 - frac) < spread:
        raise Imprecise("value too close to a rounding boundary")
    return _exact_result(mpq(int(f)))


def floor_(a):
    if a.exact is not None:
        return _exact_result(mpq(a.exact.numerator // a.exact.denominator))
    return rpi(sub(a, NetValue.from_rational(mpq(1, 2))))


def fact(a):
    """Factorial of a non-negative integer valued net, via log-gamma."""
    if a.is_zero:
        return _exact_result(mpq(1))
    if a.sign < 0 or a.fuzzy:
        raise DomainError("factorial of a negative value")
    if a.exact is not None:
        if a.exact.denominator != 1:
            raise DomainError("factorial of a non-integer")
        n = int(a.exact)
        if n <= 64:
            return _exact_result(mpq(gmpy2.fac(n)))
    if is_tower(a.logmag):
        raise DomainError("factorial argument beyond range")
    if a.logmag > 2 ** 20:
        # Stirling: ln n! = n (ln n - 1) up to O(ln n), far below resolution
        lm = lm_norm(Tower(1, a.logmag + gmpy2.log(a.logmag - 1)))
        return NetValue(1, lm, 2 * a.err + 4 * _ulp())
    v = a.to_mpfr()
    lg = gmpy2.lgamma(v + 1)[0]
    return NetValue(1, lg, abs(v) * a.err * (1 + abs(gmpy2.log(v))) + _ulp() * (1 + abs(lg)))


def compare(a, b):
    """-1, 0 or 1 for a<b, a=b, a>b; raises Imprecise when undecidable."""
    d = sub(a, b)
    if d.fuzzy:
        raise Imprecise("comparison inside the error bound")
    return d.sign


def vmin(a, b):
    try:
        c = compare(a, b)
    except Imprecise:
        c = 0
    return a if c <= 0 else b


def vmax(a, b):
    try:
        c = compare(a, b)
    except Imprecise:
        c = 0
    return a if c >= 0 else b


def from_int(n):
    return _exact_result(mpq(int(n)))


def huge_integer(logmag, parity, err=None):
    """A positive integer too large to store, described by log and parity."""
    if err is None:
        err = 4 * _ulp() if is_tower(logmag) else _ulp() * abs(logmag)
    return NetValue(1, logmag, err, None, parity)


def ratio(a, b):
    """logmag(a) / logmag(b) as an mpfr (order of a measured by b)."""
    if a.sign == 0:
        return mpfr("inf")
    return lm_ratio(a.logmag, b.logmag)


__all__ = [
    "NetValue", "Imprecise", "context", "ZERO", "neg", "absval", "add", "sub",
    "mul", "div", "exp", "log", "power", "sin", "rpi", "floor_", "fact",
    "compare", "vmin", "vmax", "from_int", "huge_integer", "ratio", "Tower", "is_tower",
    "lm_norm", "lm_sum", "lm_scale", "lm_ratio", "lm_logabs", "mpq", "mpfr", "mpz",
]
