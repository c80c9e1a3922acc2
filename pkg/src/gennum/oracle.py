"""Exact decisions on a fragment of the ring.

A :class:`SymbolicGN` is piecewise a finite sum ``sum c_i * drho**a_i`` with
rational ``c_i`` and ``a_i``, the pieces living on ``ALL`` or on the
``EVEN``/``ODD`` partition of the grid.  On each piece the leading monomial
(smallest exponent) eventually dominates, so every order question reduces to
the sign of one rational coefficient.  Numeric verdicts are tested against
these answers.
"""

import random

from gmpy2 import mpq

from .errors import OutOfFragment
from .netlang import RHO, Bin, Ind, Neg, Num, Pow, to_source

PARTS = ("EVEN", "ODD")


def _poly(terms):
    """Canonical polynomial: sorted by exponent, merged, zeros dropped."""
    acc = {}
    for a, c in terms:
        a, c = mpq(a), mpq(c)
        acc[a] = acc.get(a, mpq(0)) + c
    return tuple((a, acc[a]) for a in sorted(acc) if acc[a] != 0)


def _padd(p, q):
    return _poly(list(p) + list(q))


def _pneg(p):
    return tuple((a, -c) for a, c in p)


def _pmul(p, q):
    return _poly([(a + b, c * d) for a, c in p for b, d in q])


def _lead(p):
    return p[0] if p else None


def _sign(p):
    if not p:
        return 0
    return 1 if p[0][1] > 0 else -1


class SymbolicGN:
    """Piecewise monomial sum; ``pieces`` maps 'ALL' or 'EVEN'/'ODD' to polys."""

    def __init__(self, pieces):
        if set(pieces) == {"ALL"}:
            self.pieces = {"ALL": _poly(pieces["ALL"])}
        elif set(pieces) == set(PARTS):
            e, o = _poly(pieces["EVEN"]), _poly(pieces["ODD"])
            self.pieces = {"ALL": e} if e == o else {"EVEN": e, "ODD": o}
        else:
            raise OutOfFragment("pieces must partition the grid as ALL or EVEN/ODD")

    @classmethod
    def monomial(cls, c, a=0):
        return cls({"ALL": [(a, c)]})

    @classmethod
    def const(cls, c):
        return cls.monomial(c, 0)

    @classmethod
    def interleave(cls, even, odd):
        return cls({"EVEN": even.part("EVEN"), "ODD": odd.part("ODD")})

    def part(self, name):
        return self.pieces.get(name, self.pieces.get("ALL"))

    def refined(self):
        return {p: self.part(p) for p in PARTS}

    def _combine(self, other, fn):
        other = as_symbolic(other)
        if "ALL" in self.pieces and "ALL" in other.pieces:
            return SymbolicGN({"ALL": fn(self.pieces["ALL"], other.pieces["ALL"])})
        a, b = self.refined(), other.refined()
        return SymbolicGN({p: fn(a[p], b[p]) for p in PARTS})

    def _map(self, fn):
        return SymbolicGN({p: fn(poly) for p, poly in self.pieces.items()})

    def __add__(self, o):
        return self._combine(o, _padd)

    __radd__ = __add__

    def __sub__(self, o):
        return self._combine(o, lambda p, q: _padd(p, _pneg(q)))

    def __rsub__(self, o):
        return as_symbolic(o) - self

    def __mul__(self, o):
        return self._combine(o, _pmul)

    __rmul__ = __mul__

    def __neg__(self):
        return self._map(_pneg)

    def __truediv__(self, o):
        o = as_symbolic(o)

        def div(p, q):
            if len(q) != 1:
                raise OutOfFragment("division only by a monomial")
            b, d = q[0]
            return _poly([(a - b, c / d) for a, c in p])
        return self._combine(o, div)

    def __abs__(self):
        return self._map(lambda p: p if _sign(p) >= 0 else _pneg(p))

    def __eq__(self, other):
        return isinstance(other, SymbolicGN) and self.refined() == other.refined()

    def __hash__(self):
        return hash(tuple(sorted(self.refined().items())))

    def vmax(self, other):
        return self._combine(other, lambda p, q: p if _sign(_padd(p, _pneg(q))) >= 0 else q)

    def vmin(self, other):
        return self._combine(other, lambda p, q: p if _sign(_padd(p, _pneg(q))) <= 0 else q)

    def signs(self):
        return {p: _sign(poly) for p, poly in self.refined().items()}

    # rendering -----------------------------------------------------------
    def to_expr(self):
        if "ALL" in self.pieces:
            return _poly_expr(self.pieces["ALL"])
        e = Bin("*", Ind("EVEN"), _poly_expr(self.pieces["EVEN"]))
        o = Bin("*", Ind("ODD"), _poly_expr(self.pieces["ODD"]))
        return Bin("+", e, o)

    def source(self):
        return to_source(self.to_expr())

    def __repr__(self):
        return "SymbolicGN(%s)" % self.source()


def _num(q):
    return Num(abs(mpq(q)))


def _term_expr(a, c):
    mag = abs(c)
    if a == 0:
        node = _num(mag)
    else:
        expo = _num(a) if a > 0 else Neg(_num(-a))
        p = Pow(RHO, expo)
        node = p if mag == 1 else Bin("*", _num(mag), p)
    return node, c < 0


def _poly_expr(p):
    if not p:
        return Num(0)
    node, neg = _term_expr(*p[0])
    node = Neg(node) if neg else node
    for a, c in p[1:]:
        t, neg = _term_expr(a, c)
        node = Bin("-" if neg else "+", node, t)
    return node


def as_symbolic(x):
    if isinstance(x, SymbolicGN):
        return x
    return SymbolicGN.const(x)


# ---------------------------------------------------------------------------
# exact decisions

RELATIONS = ("=", "<=", "<", ">", ">=", "sbpt<", "sbpt<=", "sbpt>", "sbpt>=", "sbpt=")
UNARY = ("moderate", "negligible", "invertible", "positive")


def oracle_decide(x, y, rel):
    """Exact (value, witness) for ``x rel y``."""
    x, y = as_symbolic(x), as_symbolic(y)
    d = (y - x).signs()          # sign of y - x per piece
    if rel == "=":
        return all(s == 0 for s in d.values()), {}
    if rel == "<=":
        return all(s >= 0 for s in d.values()), {}
    if rel == "<":
        return all(s > 0 for s in d.values()), {}
    if rel == ">=":
        return all(s <= 0 for s in d.values()), {}
    if rel == ">":
        return all(s < 0 for s in d.values()), {}
    if rel.startswith("sbpt"):
        test = {"sbpt<": lambda s: s > 0, "sbpt<=": lambda s: s >= 0,
                "sbpt>": lambda s: s < 0, "sbpt>=": lambda s: s <= 0,
                "sbpt=": lambda s: s == 0}[rel]
        good = [p for p in PARTS if test(d[p])]
        if not good:
            return False, {}
        return True, {"L": "ALL" if len(good) == 2 else good[0]}
    raise OutOfFragment("unknown relation %r" % rel)


def oracle_unary(x, prop):
    x = as_symbolic(x)
    polys = x.refined()
    if prop == "negligible":
        return all(not p for p in polys.values()), {}
    if prop == "moderate":
        leads = [p[0][0] for p in polys.values() if p]
        worst = min(leads) if leads else 0
        n = -worst
        N = max(0, int(n.numerator // n.denominator) + (1 if n.denominator != 1 else 0))
        return True, {"N": N}
    if prop == "invertible":
        return all(bool(p) for p in polys.values()), {}
    if prop == "positive":
        return all(_sign(p) > 0 for p in polys.values()), {}
    raise OutOfFragment("unknown property %r" % prop)


# ---------------------------------------------------------------------------
# random corpus

EXPONENTS = tuple(mpq(i, 2) for i in range(-6, 7))


def random_symbolic(rng, max_terms=4, interleave_p=0.3):
    """Random fragment element: up to ``max_terms`` monomials with exponents in
    [-3, 3] (step 1/2) and coefficients p/q with 1 <= p, q <= 9."""
    def poly():
        k = rng.randint(1, max_terms)
        exps = rng.sample(EXPONENTS, k)
        return [(a, mpq(rng.choice((-1, 1)) * rng.randint(1, 9), rng.randint(1, 9)))
                for a in exps]
    if rng.random() < interleave_p:
        return SymbolicGN({"EVEN": poly(), "ODD": poly()})
    return SymbolicGN({"ALL": poly()})


def random_pair(rng):
    """A pair (x, y) drawn from several families so every relation is hit."""
    x = random_symbolic(rng)
    kind = rng.randrange(5)
    if kind == 0:
        y = random_symbolic(rng)
    elif kind == 1:
        a = rng.choice(EXPONENTS[6:])
        y = x + SymbolicGN.monomial(mpq(rng.choice((-1, 1)) * rng.randint(1, 9), rng.randint(1, 9)), a)
    elif kind == 2:
        y = SymbolicGN({p: list(x.part(p)) for p in PARTS})
    elif kind == 3:
        y = SymbolicGN.interleave(x, random_symbolic(rng))
    else:
        y = x + SymbolicGN.monomial(mpq(rng.randint(1, 9), rng.randint(1, 9)), rng.choice(EXPONENTS))
    return x, y


def corpus(n, seed=0):
    rng = random.Random(seed)
    return [random_pair(rng) for _ in range(n)]
