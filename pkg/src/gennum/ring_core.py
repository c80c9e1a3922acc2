"""Generalized numbers over a gauge and their three-valued decision procedures.

A :class:`GenNum` is a representative net (an expression, or an explicit
table of grid values) together with its gauge.  Every question about the
equivalence class is answered by a :class:`~gennum.netlang.Verdict`:

* the order of a net is read off from ``logmag(x_eps) / logmag(rho_eps)``;
  along a geometric grid a monomial ``c * rho**a`` gives an exact straight
  line, so least-squares slopes over the two halves of the tail decide
  whether the order is stable, growing or collapsing;
* envelopes over tail windows make the estimate see the worst (or best)
  subpoint of interleaved nets.
"""

import math

import gmpy2
from gmpy2 import mpfr, mpq

from . import logval as lv
from .errors import GaugeMismatch, NonMonotoneGauge, NotCofinal, Unbounded
from .logval import NetValue
from .netlang import (EPS, Bin, Call, IndexSet, Node, Num, Poison, Pow, RHO, Verdict,
                      as_node, cofinal_members, default_gauge, eval_point,
                      everything, from_mask, is_cofinal, is_poison, make_gauge,
                      parse_net, to_source)

INF = mpfr("inf")


def _fit_ctx():
    return gmpy2.context(lv.context(128))


def _same_gauge(g, h):
    if g is h:
        return True
    if hasattr(g, "table") or hasattr(h, "table"):
        return False
    return (to_source(g.expr) == to_source(h.expr) and g.grid == h.grid
            and ((g.base is None and h.base is None)
                 or (g.base is not None and h.base is not None and _same_gauge(g.base, h.base))))


class GenNum:
    """A generalized number: gauge plus representative net.

    The representative is either an expression (``expr``) evaluated on
    demand, or an explicit ``table`` mapping grid indices to values.
    """

    def __init__(self, expr=None, gauge=None, table=None, label=None, nb=None):
        if gauge is None:
            gauge = default_gauge()
        if expr is None and table is None:
            raise ValueError("GenNum needs an expression or a table")
        if isinstance(expr, str):
            expr = parse_net(expr, gauge.sets)
        elif expr is not None and not isinstance(expr, Node):
            expr = as_node(expr)
        self.expr = expr
        self.gauge = gauge
        self.table = table
        self.nb = nb
        self.label = label
        self._vals = {}
        self._full = False
        self._dense = {}

    # basic access ---------------------------------------------------------
    @property
    def grid(self):
        return self.gauge.grid

    @property
    def cfg(self):
        return self.gauge.cfg

    def _compute(self, k):
        if self.table is not None:
            return self.table(k) if callable(self.table) else self.table[k]
        g = self.gauge
        return eval_point(self.expr, k, g.grid.eps(k), g, self.nb, g.sets, g.cfg)

    def values(self):
        if not self._full:
            for k in self.grid.indices:
                self.value(k)
            self._full = True
        return self._vals

    def value(self, k):
        v = self._vals.get(k)
        if v is None:
            v = self._vals[k] = self._compute(k)
        return v

    def dense_value(self, eps):
        """Value at an off-grid epsilon (expression representatives only)."""
        if self.expr is None:
            raise ValueError("table representative has no off-grid values")
        v = self._dense.get(eps)
        if v is None:
            g = self.gauge
            v = eval_point(self.expr, g.grid.band(eps), eps, g, self.nb, g.sets, g.cfg,
                           dense=True)
            self._dense[eps] = v
        return v

    def source(self):
        if self.label:
            return self.label
        if self.expr is not None:
            return to_source(self.expr)
        return "<table>"

    def __repr__(self):
        return "GenNum(%s)" % self.source()

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, GenNum):
            if not _same_gauge(self.gauge, other.gauge):
                raise GaugeMismatch("operands live over different gauges: %s vs %s"
                                    % (self.gauge.name, other.gauge.name))
            return other
        return GenNum(as_node(other), self.gauge)

    def _binary(self, other, op, fn):
        other = self._coerce(other)
        if self.table is None and other.table is None and self.nb is other.nb:
            return GenNum(Bin(op, self.expr, other.expr), self.gauge, nb=self.nb)
        return _tablewise(fn, self, other)

    def __add__(self, o):
        return self._binary(o, "+", lv.add)

    def __radd__(self, o):
        return self._coerce(o) + self

    def __sub__(self, o):
        return self._binary(o, "-", lv.sub)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        return self._binary(o, "*", lv.mul)

    def __rmul__(self, o):
        return self._coerce(o) * self

    def __truediv__(self, o):
        return self._binary(o, "/", lv.div)

    def __rtruediv__(self, o):
        return self._coerce(o) / self

    def __neg__(self):
        if self.table is None:
            from .netlang import Neg
            e = self.expr
            if isinstance(e, Neg):
                e = e.arg
            elif not (isinstance(e, Num) and e.value == 0):
                e = Neg(e)
            return GenNum(e, self.gauge, nb=self.nb)
        return _tablewise(lambda a: lv.neg(a), self)

    def __pow__(self, o):
        o = self._coerce(o)
        if self.table is None and o.table is None:
            return GenNum(Pow(self.expr, o.expr), self.gauge, nb=self.nb)
        return _tablewise(lv.power, self, o)

    def restrict_label(self, label):
        self.label = label
        return self


def _tablewise(fn, *xs):
    """Pointwise combination of representatives, evaluated lazily per index."""
    g = xs[0].gauge
    ctx = lv.context(g.cfg.max_prec)

    def at(k):
        vs = [x.value(k) for x in xs]
        bad = [v for v in vs if is_poison(v)]
        if bad:
            return bad[0]
        with gmpy2.context(ctx):
            try:
                r = fn(*vs)
            except Exception as exc:  # noqa: BLE001 - poison the index
                return Poison(str(exc))
        return NetValue.zero() if r.fuzzy else r
    return GenNum(table=at, gauge=g)


def gn(x, gauge=None):
    """Shorthand constructor: ``gn("1 + drho")``."""
    if isinstance(x, GenNum):
        return x
    return GenNum(x if isinstance(x, (str, Node)) else as_node(x), gauge)


def drho(gauge=None):
    return GenNum(RHO, gauge)


def gn_add(x, y):
    return x + y


def gn_mul(x, y):
    return x * y


def gn_neg(x):
    return -x


def gn_abs(x):
    if x.table is None:
        return GenNum(Call("abs", x.expr), x.gauge, nb=x.nb)
    return _tablewise(lv.absval, x)


def gn_min(x, y):
    y = x._coerce(y)
    if x.table is None and y.table is None and x.nb is y.nb:
        return GenNum(Call("min", x.expr, y.expr), x.gauge, nb=x.nb)
    return _tablewise(lv.vmin, x, y)


def gn_max(x, y):
    y = x._coerce(y)
    if x.table is None and y.table is None and x.nb is y.nb:
        return GenNum(Call("max", x.expr, y.expr), x.gauge, nb=x.nb)
    return _tablewise(lv.vmax, x, y)


def _check(x, y):
    if not _same_gauge(x.gauge, y.gauge):
        raise GaugeMismatch("operands live over different gauges")


# ---------------------------------------------------------------------------
# order analysis

class _Data:
    """Tail values of a net restricted to a domain, with their orders."""

    def __init__(self, x, on=None):
        grid = x.grid
        dom = [k for k in grid.tail if on is None or k in on]
        self.domain = dom
        self.poisoned = [k for k in dom if is_poison(x.value(k))]
        self.ks = [k for k in dom if not is_poison(x.value(k))]
        self.vals = {k: x.value(k) for k in self.ks}
        self.lr = {k: x.gauge.log_at(k) for k in self.ks}
        with _fit_ctx():
            self.ords = {k: (INF if self.vals[k].sign == 0
                             else lv.lm_ratio(self.vals[k].logmag, self.lr[k])) for k in self.ks}
        self.grid = grid
        self.cfg = x.cfg

    def poison_cofinal(self):
        return bool(self.poisoned) and cofinal_members(self.poisoned, self.grid)


def _windows(ks, w):
    c = w if len(ks) >= 4 * w else max(1, len(ks) // 4)
    out = []
    end = len(ks)
    while end > 0:
        start = max(0, end - c)
        out.append(ks[start:end])
        end = start
    out.reverse()
    if len(out) > 1 and len(out[0]) < c:
        out[1] = out[0] + out[1]
        out.pop(0)
    return out


def _fit(data, ks):
    """Order estimate over ``ks``: least-squares slope of logmag against
    log(rho), or the mean order when a value needs the second log level."""
    ks = [k for k in ks if gmpy2.is_finite(data.ords[k])]
    if len(ks) < 2:
        return None
    if any(lv.is_tower(data.lr[k]) or lv.is_tower(data.vals[k].logmag) for k in ks):
        with _fit_ctx():
            return sum(data.ords[k] for k in ks) / len(ks)
    return _slope([(data.lr[k], data.vals[k].logmag) for k in ks])


def _slope(points):
    """Least-squares slope of (X, Y) pairs."""
    n = len(points)
    with _fit_ctx():
        mx = sum(p[0] for p in points) / n
        my = sum(p[1] for p in points) / n
        sxx = sum((p[0] - mx) ** 2 for p in points)
        sxy = sum((p[0] - mx) * (p[1] - my) for p in points)
        if sxx == 0:
            return None
        return sxy / sxx


class Profile:
    """Order trend of an envelope: ``zero``, ``stable``, ``growing`` (the
    order increases, i.e. the net collapses faster than any fixed power),
    ``shrinking``, ``erratic`` or ``insufficient``."""

    def __init__(self, trend, a1=None, a2=None, last=None, picks=(), slopes=()):
        self.trend = trend
        self.a1, self.a2, self.last = a1, a2, last
        self.picks = list(picks)
        self.slopes = list(slopes)

    @property
    def order(self):
        return self.a2

    def __repr__(self):
        f = lambda v: None if v is None else float(v) if abs(v) < 1e300 else str(v)
        return "Profile(%s, a1=%s, a2=%s, last=%s)" % (self.trend, f(self.a1), f(self.a2), f(self.last))


def profile(data, side="low"):
    """Trend of the ``low`` (largest magnitude) or ``high`` envelope."""
    ks = data.ks
    if len(ks) < 4:
        return Profile("insufficient")
    wins = _windows(ks, data.cfg.w)
    picks = []
    for win in wins:
        if side == "low":
            k = min(win, key=lambda j: data.ords[j])
        else:
            k = max(win, key=lambda j: data.ords[j])
        picks.append(k)
    ords = [data.ords[k] for k in picks]
    if all(o == INF for o in ords):
        return Profile("zero", INF, INF, INF, picks)
    n = len(picks)
    half = n // 2
    first, second = picks[:half], picks[half:]
    fin1 = [k for k in first if gmpy2.is_finite(data.ords[k])]
    fin2 = [k for k in second if gmpy2.is_finite(data.ords[k])]
    last = ords[-1]
    if len(fin2) < 2:
        if ords[-1] == INF and len(fin1) >= 1:
            return Profile("growing", None, INF, last, picks)
        if ords[-1] == -INF:
            return Profile("shrinking", None, -INF, last, picks, [-INF, -INF, -INF])
        return Profile("insufficient", None, None, last, picks)
    if len(fin1) < 2:
        return Profile("insufficient", None, None, last, picks)
    a1, a2 = _fit(data, fin1), _fit(data, fin2)
    if a1 is None or a2 is None:
        return Profile("insufficient", None, None, last, picks)
    third = max(2, n // 3)
    seg = [picks[:third], picks[third:n - third], picks[n - third:]]
    slopes = []
    for s in seg:
        slopes.append(_fit(data, s))
    delta = data.cfg.delta
    with _fit_ctx():
        d = a2 - a1
        if abs(d) <= delta:
            trend = "stable"
        elif d > delta:
            trend = "growing"
        else:
            trend = "shrinking"
    return Profile(trend, a1, a2, last, picks, slopes)


def _runaway(p):
    """Order dropping faster than any polynomial rate: non-moderate evidence."""
    s = p.slopes
    if len(s) != 3 or any(v is None for v in s):
        return False
    with _fit_ctx():
        return s[2] < s[1] - 1 and s[1] < s[0] - 1 and s[2] < 2 * min(s[1], 0) - 1


def _vanishing(p):
    """Order growing faster than any polynomial rate."""
    s = p.slopes
    if p.a2 == INF:
        return True
    if len(s) != 3 or any(v is None for v in s):
        return False
    with _fit_ctx():
        return s[2] > s[1] + 1 and s[1] > s[0] + 1 and s[2] > 2 * max(s[1], 0) + 1


def _ceil(v):
    return int(gmpy2.ceil(v)) if abs(v) < 1e18 else None


def _floor(v):
    return int(gmpy2.floor(v)) if abs(v) < 1e18 else None


def _poison_unknown(data, what):
    if data.poison_cofinal():
        return Verdict.unknown("%s: poisoned indices are cofinal (%d of %d)"
                               % (what, len(data.poisoned), len(data.domain)))
    if len(data.ks) < 4:
        return Verdict.unknown("%s: too few usable tail indices" % what)
    return None


def _domain_set(on):
    return on if on is not None else everything()


def is_moderate(x, on=None):
    """Is |x_eps| <= rho_eps**-N for some N, for eps small?"""
    data = _Data(x, on)
    bad = _poison_unknown(data, "moderate")
    if bad is not None:
        return bad
    huge = [k for k in data.ks if data.ords[k] == -INF]
    if huge and cofinal_members(huge, data.grid):
        return Verdict(False, {"index": huge[-1]},
                       ["|x| exceeds every power of rho on a cofinal set"])
    p = profile(data, "low")
    diag = ["low-envelope order trend %r" % (p,)]
    if p.trend == "zero":
        return Verdict(True, {"N": 0}, diag)
    if p.trend in ("stable", "growing") and p.a2 is not None:
        a = p.a2 if p.a2 != INF else mpfr(0)
        if p.trend == "growing":
            a = max(a, min(data.ords[k] for k in p.picks[len(p.picks) // 2:]))
        with _fit_ctx():
            N = max(0, _ceil(-a - data.cfg.delta) if _ceil(-a - data.cfg.delta) is not None else 0)
        return Verdict(True, {"N": N}, diag)
    if p.trend == "shrinking" and _runaway(p):
        k = p.picks[-1]
        return Verdict(False, {"index": k, "slopes": [float(s) if abs(s) < 1e300 else str(s) for s in p.slopes]},
                       diag + ["order estimate falls faster than any fixed bound"])
    return Verdict(None, None, diag)


def is_negligible(x, on=None, q_max=None):
    """Is |x_eps| <= rho_eps**q for every q, for eps small?"""
    data = _Data(x, on)
    bad = _poison_unknown(data, "negligible")
    if bad is not None:
        return bad
    q_max = q_max or data.cfg.q_max
    p = profile(data, "low")
    diag = ["low-envelope order trend %r" % (p,)]
    if p.trend == "zero":
        return Verdict(True, {"q_max": q_max, "zero": True}, diag)
    if p.trend == "growing" and p.last is not None and p.last >= q_max:
        return Verdict(True, {"q_max": q_max}, diag + ["order exceeds %d and keeps growing" % q_max])
    q = None
    if p.trend == "stable":
        with _fit_ctx():
            q = _floor(p.a2 + data.cfg.delta)
    elif p.trend == "shrinking":
        # the order only drops: the largest late order bounds it from above
        late = [data.ords[k] for k in p.picks[len(p.picks) // 2:]]
        fin = [o for o in late if gmpy2.is_finite(o)]
        q = _floor(max(fin)) if fin else -1
    if q is not None:
        q = max(q + 1, 0)
        L = [k for k in data.ks if data.ords[k] < q]
        if cofinal_members(L, data.grid):
            return Verdict(False, {"q": q, "L": from_mask(data.grid, L).name,
                                   "order": _num(p.a2)},
                           diag + ["|x| > rho^%d on a cofinal set" % q])
    return Verdict(None, None, diag)


def _num(v):
    if v is None:
        return None
    if v == INF:
        return "inf"
    f = float(v)
    return round(f, 6) if abs(f) < 1e15 else f


def _pos_part(x):
    return _tablewise(lambda a: a if a.sign > 0 else NetValue.zero(), x)


def gn_eq(x, y, on=None):
    _check(x, y)
    return is_negligible(x - y, on)


def leq(x, y, on=None):
    """x <= y: the positive part of x - y is negligible."""
    _check(x, y)
    d = x - y
    v = is_negligible(_pos_part(d), on)
    if v.is_true:
        return Verdict(True, {"slack": "negligible"}, v.diagnostics)
    if v.is_false:
        data = _Data(d, on)
        q = v.witness["q"]
        L = [k for k in data.ks if data.vals[k].sign > 0 and data.ords[k] < q]
        if cofinal_members(L, data.grid):
            S = from_mask(data.grid, L)
            return Verdict(False, {"L": S.name, "q": q},
                           v.diagnostics + ["x > y on the cofinal set %s" % S.name])
    return Verdict(None, None, v.diagnostics)


def lt(x, y, on=None):
    """x < y: x <= y and y - x invertible."""
    _check(x, y)
    a = leq(x, y, on)
    if a.is_false:
        return a
    b = is_invertible(x - y, on)  # |x - y| = |y - x|, and x - y is already cached
    return a & b


def _crit2(data):
    """Positivity robust under every negligible perturbation."""
    neg = [k for k in data.ks if data.vals[k].sign <= 0]
    p = profile(data, "high")
    if neg:
        return False, {"nonpositive_at": neg[-1]}
    if p.trend == "zero":
        return False, {"vanishes": True}
    if p.trend in ("stable", "shrinking"):
        return True, {}
    if p.trend == "growing" and (p.last is not None and p.last >= data.cfg.q_max or _vanishing(p)):
        return False, {"negligible_subpoint": True}
    return None, {}


def _crit3(data):
    """Least m with x_eps > rho_eps**m per index; bounded along the tail?"""
    ms = []
    for k in data.ks:
        v = data.vals[k]
        if v.sign <= 0:
            return False, {"nonpositive_at": k}
        o = data.ords[k]
        if o == INF or o > 1e15:
            ms.append(math.inf)
        else:
            ms.append(int(gmpy2.floor(o)) + 1)
    half = len(ms) // 2
    m1, m2 = max(ms[:half]), max(ms[half:])
    qm = data.cfg.q_max
    if m2 == math.inf or (m2 > qm and m2 > m1 + 1):
        return False, {"m_growth": [str(m1), str(m2)]}
    if m2 <= m1 + 1:
        return True, {"m": int(max(m1, m2))}
    return None, {}


def _crit4(data):
    """Fitted m on this representative, then verified index by index."""
    p = profile(data, "high")
    if any(data.vals[k].sign <= 0 for k in data.ks):
        return False, {}
    if p.trend == "zero" or (p.trend == "growing" and (p.last is not None and p.last >= data.cfg.q_max or _vanishing(p))):
        return False, {}
    if p.a2 is None or p.a2 == INF:
        return None, {}
    with _fit_ctx():
        m0 = _floor(p.a2 + data.cfg.delta)
    if m0 is None:
        return None, {}
    for m in range(m0 + 1, m0 + 4):
        if all(data.ords[k] < m for k in data.ks):
            return True, {"m": m}
    return None, {}


def invertibility_criteria(x, on=None):
    """The three representative-level positivity criteria, separately."""
    data = _Data(x, on)
    return _criteria(data), data


def _criteria(data):
    return {"all_reps_positive": _crit2(data), "all_reps_power_bound": _crit3(data),
            "some_rep_power_bound": _crit4(data)}


def is_invertible_positive(x, on=None):
    """x > 0 (equivalently: x invertible and x >= 0)."""
    data = _Data(x, on)
    bad = _poison_unknown(data, "positive invertible")
    if bad is not None:
        return bad
    crits = _criteria(data)
    vals = {k: c[0] for k, c in crits.items()}
    diag = ["%s: %s" % (k, {True: "true", False: "false", None: "unknown"}[v])
            for k, v in sorted(vals.items())]
    if all(v is True for v in vals.values()):
        m = crits["some_rep_power_bound"][1].get("m")
        return Verdict(True, {"m": m}, diag)
    if all(v is False for v in vals.values()):
        w = {}
        for c in crits.values():
            w.update(c[1])
        return Verdict(False, w, diag)
    return Verdict(None, None, diag + ["criteria disagree or are inconclusive"])


def is_invertible(x, on=None):
    v = is_invertible_positive(gn_abs(x), on)
    return Verdict(v.value, v.witness, v.diagnostics)


# ---------------------------------------------------------------------------
# subpoints

def _require_cofinal(L, grid):
    if not is_cofinal(L, grid).is_true:
        raise NotCofinal("index set %s is not cofinal" % L.name)


def subpoint_rel(x, y, rel, L):
    """x rel_L y for rel in '<', '<=', '=', '>', '>='."""
    _check(x, y)
    _require_cofinal(L, x.grid)
    if rel == "<":
        return lt(x, y, L)
    if rel == "<=":
        return leq(x, y, L)
    if rel == "=":
        return gn_eq(x, y, L)
    if rel == ">":
        return lt(y, x, L)
    if rel == ">=":
        return leq(y, x, L)
    raise ValueError("unknown relation %r" % rel)


def _candidates(x, y, rel):
    grid = x.grid
    d = x - y
    dv = d.values()
    tail = [k for k in grid.tail if not is_poison(dv[k])]
    cands = [("TAIL", tail)]
    if rel in ("<", "<="):
        cands.append(("x<y", [k for k in tail if dv[k].sign < 0]))
        cands.append(("x<=y", [k for k in tail if dv[k].sign <= 0]))
    if rel in (">", ">="):
        cands.append(("x>y", [k for k in tail if dv[k].sign > 0]))
        cands.append(("x>=y", [k for k in tail if dv[k].sign >= 0]))
    if rel == "=":
        cands.append(("x=y", [k for k in tail if dv[k].sign == 0]))
    cands.append(("EVEN", [k for k in tail if k % 2 == 0]))
    cands.append(("ODD", [k for k in tail if k % 2 == 1]))
    return cands


def exists_subpoint_rel(x, y, rel):
    """Search canonical index sets L with x rel_L y; returns a Verdict whose
    witness names L."""
    _check(x, y)
    grid = x.grid
    unknown = False
    seen = set()
    for label, ks in _candidates(x, y, rel):
        key = tuple(ks)
        if key in seen or not ks or not cofinal_members(ks, grid):
            continue
        seen.add(key)
        L = from_mask(grid, ks)
        v = subpoint_rel(x, y, rel, L)
        if v.is_true:
            return Verdict(True, {"L": L.name, "members": ks}, v.diagnostics)
        if v.is_unknown:
            unknown = True
    if unknown:
        return Verdict.unknown("no canonical candidate verified")
    # exhausted canonical sets; the negation lemma decides the rest
    neg = {"<": lambda: leq(y, x), "<=": lambda: lt(y, x), ">": lambda: leq(x, y),
           ">=": lambda: lt(x, y), "=": lambda: is_invertible(x - y)}[rel]()
    if neg.is_true:
        return Verdict(False, {"negation": True}, neg.diagnostics)
    return Verdict.unknown("candidate search failed without a certificate")


def quadrichotomy(x, y):
    """('LEQ' | 'GEQ' | 'SPLIT' | 'UNKNOWN', witness IndexSet or None, diagnostics)."""
    _check(x, y)
    a = leq(x, y)
    if a.is_true:
        return "LEQ", None, a.diagnostics
    b = leq(y, x)
    if b.is_true:
        return "GEQ", None, b.diagnostics
    grid = x.grid
    dv = (x - y).values()
    tail = [k for k in grid.tail if not is_poison(dv[k])]
    Lk = [k for k in tail if dv[k].sign >= 0]
    Lc = [k for k in tail if dv[k].sign < 0]
    if Lk and Lc and cofinal_members(Lk, grid) and cofinal_members(Lc, grid):
        L = from_mask(grid, Lk)
        Lcs = from_mask(grid, Lc)
        if leq(y, x, L).is_true and leq(x, y, Lcs).is_true:
            return "SPLIT", L, ["x >= y on %s and x <= y on %s" % (L.name, Lcs.name)]
    return "UNKNOWN", None, a.diagnostics + b.diagnostics


# ---------------------------------------------------------------------------
# inferior / superior parts

def _require_monotone(x):
    if not x.gauge.monotone:
        raise NonMonotoneGauge("standard parts need a monotone gauge")


def inf_part(x):
    """Grid surrogate of [inf_{e in (0, eps]} x_e]: running minimum towards 0."""
    _require_monotone(x)
    if st_inf(x) == -math.inf:
        raise Unbounded("x has no real lower bound")
    return _running(x, lv.vmin)


def sup_part(x):
    _require_monotone(x)
    if st_sup(x) == math.inf:
        raise Unbounded("x has no real upper bound")
    return _running(x, lv.vmax)


def IndexSetFromList(ks):
    s = frozenset(ks)
    return IndexSet(lambda k: k in s, "list")


def _running(x, pick):
    vals = x.values()
    out = {}
    acc = None
    with gmpy2.context(lv.context(x.cfg.prec)):
        for k in reversed(list(x.grid.indices)):
            v = vals[k]
            if is_poison(v):
                out[k] = v
                continue
            acc = v if acc is None else pick(acc, v)
            out[k] = acc
    return GenNum(table=out, gauge=x.gauge)


DENSE_PER_BAND = 32


def _dense_samples(x):
    """(band index, value) pairs sampled densely over the tail bands."""
    grid = x.grid
    out = []
    if x.expr is None:
        for k in grid.tail:
            v = x.value(k)
            if not is_poison(v):
                out.append((k, v))
        return out
    for k in grid.tail:
        e0 = grid.eps(k)
        for j in range(DENSE_PER_BAND):
            # eps = e0 * base**(-j/J) rounded to a dyadic rational
            f = mpq(int(2 ** 40 * (grid.base ** (-j / DENSE_PER_BAND))), 2 ** 40)
            v = x.dense_value(e0 * f)
            if not is_poison(v):
                out.append((k, v))
    return out


def _st(x, side):
    """liminf ('inf') / limsup ('sup') of the representative as eps -> 0."""
    _require_monotone(x)
    samples = _dense_samples(x)
    if len(samples) < 8:
        return None, ["too few samples"]
    bands = sorted({k for k, _ in samples})
    groups = _windows(bands, x.cfg.w)
    env = []
    with gmpy2.context(lv.context(x.cfg.prec)):
        for grp in groups:
            vs = [v for k, v in samples if k in grp]
            best = vs[0]
            for v in vs[1:]:
                best = lv.vmin(best, v) if side == "inf" else lv.vmax(best, v)
            env.append((grp[-1], best))
    # classify the envelope: diverging to +-inf, collapsing to 0, or finite
    data_vals = {k: v for k, v in env}
    tab = GenNum(table=dict(data_vals), gauge=x.gauge)
    ks = [k for k, _ in env]
    d = _Data(tab, IndexSetFromList(ks))
    d.cfg = x.cfg
    signs = [v.sign for _, v in env[len(env) // 2:]]
    p = _profile_points(d)
    diag = ["%s envelope trend %s" % (side, p)]
    last = env[-1][1]
    if p == "infinite":
        s = signs[-1]
        return (math.inf if s > 0 else -math.inf), diag
    if p == "zero":
        return 0.0, diag
    return _round(last.to_float()), diag


def _profile_points(d):
    """Order trend of sparse envelope points: 'infinite', 'zero' or 'finite'."""
    pts = [(d.lr[k], d.vals[k].logmag) for k in d.ks if d.vals[k].sign != 0]
    zeros = [k for k in d.ks if d.vals[k].sign == 0]
    if len(pts) < 2:
        return "zero" if zeros else "finite"
    half = len(d.ks) // 2
    tail_pts = [(d.lr[k], d.vals[k].logmag) for k in d.ks[half:] if d.vals[k].sign != 0]
    if len(tail_pts) < 2:
        return "zero"
    a = _slope(tail_pts)
    delta = d.cfg.delta
    if a is None:
        return "finite"
    if a < -delta:
        return "infinite"
    if a > delta:
        return "zero"
    return "finite"


def _round(f):
    if f == 0 or math.isinf(f):
        return f
    return float("%.12g" % f)


def st_inf(x):
    return _st(x, "inf")[0]


def st_sup(x):
    return _st(x, "sup")[0]


class Classification:
    """``kind`` follows the standard parts; ``finite`` is True when both are
    real (a mixed number may still be finite, like an interleaved +-1)."""

    def __init__(self, kind, st_inf, st_sup, st=None, diagnostics=()):
        self.kind, self.st_inf, self.st_sup, self.st = kind, st_inf, st_sup, st
        self.diagnostics = list(diagnostics)

    @property
    def finite(self):
        if self.st_inf is None or self.st_sup is None:
            return None
        return math.isfinite(self.st_inf) and math.isfinite(self.st_sup)

    def to_dict(self):
        f = lambda v: v if v is None or not isinstance(v, float) or math.isfinite(v) else ("+inf" if v > 0 else "-inf")
        return {"kind": self.kind, "finite": self.finite, "st_inf": f(self.st_inf),
                "st_sup": f(self.st_sup), "st": f(self.st)}

    def __repr__(self):
        return "Classification(%s, st_inf=%s, st_sup=%s)" % (self.kind, self.st_inf, self.st_sup)


def classify(x):
    lo, d1 = _st(x, "inf")
    hi, d2 = _st(x, "sup")
    diag = d1 + d2
    if lo is None or hi is None:
        return Classification("unknown", lo, hi, None, diag)
    if lo == hi:
        if lo == 0:
            return Classification("infinitesimal", 0.0, 0.0, 0.0, diag)
        if math.isinf(lo):
            return Classification("infinite", lo, hi, lo, diag)
        return Classification("near-standard", lo, hi, lo, diag)
    if abs(hi - lo) <= 1e-9 * max(1.0, abs(lo)):
        return Classification("near-standard", lo, hi, lo, diag)
    if math.isinf(lo) or math.isinf(hi):
        return Classification("mixed-subpoints", lo, hi, None,
                              diag + ["some subpoint is infinite"])
    return Classification("mixed-subpoints", lo, hi, None, diag)


# ---------------------------------------------------------------------------
# nearest integer

def rpi(x):
    """Per-index floor(x + 1/2)."""
    if x.table is None:
        return GenNum(Call("rpi", x.expr), x.gauge, nb=x.nb)
    return _tablewise(lv.rpi, x)


def is_hypernat(x):
    r = rpi(x)
    eq = gn_eq(x, r)
    rv = r.values()
    negs = [k for k in x.grid.tail if not is_poison(rv[k]) and rv[k].sign < 0]
    if negs:
        return Verdict(False, {"negative_at": negs[-1]}, ["rounded values are negative"])
    return eq


__all__ = [
    "GenNum", "gn", "drho", "gn_add", "gn_mul", "gn_neg", "gn_abs", "gn_min", "gn_max",
    "gn_eq", "leq", "lt", "is_moderate", "is_negligible", "is_invertible_positive",
    "is_invertible", "invertibility_criteria", "subpoint_rel", "exists_subpoint_rel",
    "quadrichotomy", "inf_part", "sup_part", "st_inf", "st_sup", "classify",
    "Classification", "rpi", "is_hypernat", "profile", "make_gauge", "EPS",
]
