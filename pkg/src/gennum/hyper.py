"""Hypernatural numbers, hypersequences and their limits.

A hypersequence is a term in ``n`` (and possibly ``eps``) evaluated at
hypernatural probes.  The ``t``-probes are ``n(t) = [rpi(sigma**-t)]``,
taken in an even and an odd version so that ``(-1)**n`` and similar parity
effects are visible; the finite naturals come first.  Quantifiers of the
form "for every n >= M" are checked on all probes at or beyond a threshold
probe, and thresholds are reported by label.
"""

import math

import gmpy2
from gmpy2 import mpfr, mpq

from . import logval as lv
from .config import DEFAULT
from .errors import (ExtractionFailed, GaugeMismatch, HypothesisFailed, NoClassicalLimit,
                     NotExtendable, NotModerateInTarget, SearchCapExceeded)
from .logval import NetValue
from .netlang import (EPS, N, RHO, Bin, Call, Gauge, NBinding, Neg, Node, Num, Poison, Pow,
                      Verdict, as_node, default_gauge, eval_point, is_poison, make_gauge,
                      parse_net, substitute, to_source)
from .ring_core import (INF, GenNum, _Data, _fit_ctx, _pos_part, _same_gauge, classify, gn_abs,
                        gn_eq, is_hypernat, is_moderate, is_negligible, leq, lt, profile, rpi)
from .suprema import SampledRange, SetDescr, find_inf, find_sup

LN2 = math.log(2)


def _gauge(g, cfg, base=None):
    if g is None:
        return base if base is not None else default_gauge(cfg)
    if isinstance(g, Gauge):
        return g
    grid = base.grid if base is not None else None
    return make_gauge(g, grid, base=base, cfg=cfg)


# ---------------------------------------------------------------------------
# hypernaturals

class HyperNat:
    """A hypernatural: an integer-valued, non-negative representative."""

    def __init__(self, x, verdict=None):
        self.x = x
        self.verdict = verdict if verdict is not None else is_hypernat(x)

    @property
    def gauge(self):
        return self.x.gauge

    @classmethod
    def from_net(cls, x, gauge=None):
        if not isinstance(x, GenNum):
            x = GenNum(x if isinstance(x, (str, Node)) else as_node(x), gauge)
        r = rpi(x)
        return cls(r, is_hypernat(r))

    def _other(self, o):
        if not isinstance(o, HyperNat):
            o = HyperNat.from_net(o, self.gauge)
        if not _same_gauge(self.gauge, o.gauge):
            raise GaugeMismatch("hypernaturals over different gauges")
        return o

    def __add__(self, o):
        return HyperNat(self.x + self._other(o).x)

    __radd__ = __add__

    def __mul__(self, o):
        return HyperNat(self.x * self._other(o).x)

    __rmul__ = __mul__

    def eq(self, o):
        return gn_eq(self.x, self._other(o).x)

    def source(self):
        return self.x.source()

    def __repr__(self):
        return "HyperNat(%s)" % self.source()


def aux_gauge(rho=None, cfg=DEFAULT):
    """sigma = rho**exp(1/rho), a gauge in which m**n stays moderate."""
    rho = _gauge(rho, cfg)
    return make_gauge("rho^exp(1/rho)", rho.grid, "rho^exp(1/rho)", base=rho, cfg=rho.cfg)


def pow_hypernat(m, n, target=None):
    """m**n read in the gauge ``target``; the result must be moderate there."""
    if not _same_gauge(m.gauge, n.gauge):
        raise GaugeMismatch("base and exponent over different gauges")
    target = target or m.gauge
    if target.grid != m.gauge.grid:
        raise GaugeMismatch("target gauge lives on another grid")
    ctx = lv.context(target.cfg.max_prec)

    def at(k):
        a, b = m.x.value(k), n.x.value(k)
        if is_poison(a) or is_poison(b):
            return a if is_poison(a) else b
        with gmpy2.context(ctx):
            try:
                return lv.power(a, b)
            except Exception as exc:  # noqa: BLE001
                return Poison(str(exc))
    x = GenNum(table=at, gauge=target, label="(%s)^(%s)" % (m.source(), n.source()))
    v = is_moderate(x)
    if v.is_false:
        raise NotModerateInTarget("m^n grows faster than every power of the target gauge",
                                  trend=v.diagnostics[0] if v.diagnostics else None,
                                  witness=v.witness)
    return HyperNat(x, Verdict(True, {"moderate": v.status}, v.diagnostics))


# ---------------------------------------------------------------------------
# probes

class Probe:
    """A probe hypernatural with its per-index values."""

    def __init__(self, label, values, t=None, parity=None):
        self.label = label
        self.t = t
        self.parity = parity
        self.nb = NBinding(values, label)

    def hypernat(self, gauge):
        return HyperNat(GenNum(N, gauge, nb=self.nb, label=self.label))

    def __repr__(self):
        return "Probe(%s)" % self.label


# probes depend only on the gauges, so sequences over the same gauges share them
_PROBES = {}


def _int_probe(n, grid):
    key = ("n", grid.key(), n)
    p = _PROBES.get(key)
    if p is None:
        v = lv.from_int(n)
        p = _PROBES[key] = Probe("n=%d" % n, {k: v for k in grid.indices}, None, n % 2)
    return p


def _parity_pair(h):
    """(2h, 2h + 1) for a rounded value h."""
    if is_poison(h):
        return h, h
    if h.exact is not None:
        m = int(h.exact)
        return lv.from_int(2 * m), lv.from_int(2 * m + 1)
    lm = lv.lm_sum(h.logmag, mpfr(LN2))
    return lv.huge_integer(lm, 0), lv.huge_integer(lm, 1)


def _fmt_t(t):
    t = mpq(t)
    return str(t.numerator) if t.denominator == 1 else "%d/%d" % (t.numerator, t.denominator)


def _dyadic(x):
    return mpq(max(1, round(x * 1024)), 1024)


class HyperSeq:
    """A term in n over the codomain gauge ``rho``, indexed by hypernaturals of ``sigma``."""

    def __init__(self, term, sigma=None, rho=None, T=1, count=24, naturals=8, mode="hyper",
                 cfg=None, q_max=None):
        if isinstance(rho, Gauge):
            cfg = cfg or rho.cfg
        cfg = cfg or DEFAULT
        self.rho = _gauge(rho, cfg)
        self.sigma = _gauge(sigma, cfg, self.rho) if sigma is not None else self.rho
        if self.sigma.grid != self.rho.grid:
            raise GaugeMismatch("sigma and rho live on different grids")
        self.cfg = self.rho.cfg
        self.term = term if isinstance(term, Node) else parse_net(term, self.rho.sets)
        self.count = max(int(count), 4)
        self.naturals = int(naturals)
        self.mode = mode
        self.q_max = q_max or self.cfg.hyper_qmax
        self.T = mpq(T)
        K = self.grid.K
        with _fit_ctx():
            ords = lv.lm_ratio(self.sigma.log_at(K), self.rho.log_at(K))
        need = (self.q_max + 2) / float(ords) if gmpy2.is_finite(ords) and ords > 0 else 0.0
        self.base_T = max(self.T, _dyadic(need)) if need > self.T else self.T
        self._x = {}
        self._ladders = {}

    @property
    def grid(self):
        return self.rho.grid

    def source(self):
        return to_source(self.term)

    def negated(self):
        s = HyperSeq(Neg(self.term), self.sigma, self.rho, self.T, self.count, self.naturals,
                     self.mode, self.cfg, self.q_max)
        return s

    # probes -----------------------------------------------------------------
    def probe(self, t, parity):
        """The even (parity 0) or odd (parity 1) probe near sigma**-t."""
        t = mpq(t)
        key = ("t", self.sigma.serial, t, parity)
        p = _PROBES.get(key)
        if p is None:
            node = Call("rpi", Bin("/", Pow(RHO, Neg(Num(t))), Num(2)))
            half = GenNum(node, self.sigma).values()
            pairs = {k: _parity_pair(h) for k, h in half.items()}
            for par in (0, 1):
                lab = "t=%s,%s" % (_fmt_t(t), "even" if par == 0 else "odd")
                _PROBES[key[:3] + (par,)] = Probe(lab, {k: v[par] for k, v in pairs.items()},
                                                  t, par)
            p = _PROBES[key]
        return p

    def far_probe(self, parity=0, depth="far"):
        """Probes near sigma**(-1/rho) (``far``) or sigma**(-log(1/rho)) (``mid``).

        Both lie beyond every t-probe; the ``mid`` one keeps 1/n within the
        exponent range of the number format when the ``far`` one does not."""
        key = (depth, self.sigma.serial, self.rho.serial)
        pair = _PROBES.get(key)
        if pair is None:
            ctx = lv.context(self.cfg.prec)
            sv, rv = self.sigma.values(), self.rho.values()
            vals = {}
            for k in self.grid.indices:
                with gmpy2.context(ctx):
                    try:
                        if depth == "far":
                            e = lv.neg(lv.div(NetValue.from_rational(1), rv[k]))
                        else:
                            e = lv.log(rv[k])
                        n = lv.power(sv[k], e)
                        if n.exact is not None:
                            vals[k] = _parity_pair(lv.rpi(lv.div(n, lv.from_int(2))))
                        else:
                            vals[k] = (lv.huge_integer(n.logmag, 0), lv.huge_integer(n.logmag, 1))
                    except Exception as exc:  # noqa: BLE001
                        vals[k] = (Poison(str(exc)), Poison(str(exc)))
            pair = _PROBES[key] = [Probe("%s,%s" % (depth, w), {k: v[i] for k, v in vals.items()},
                                         None, i) for i, w in enumerate(("even", "odd"))]
        return pair[parity]

    def ts(self, T):
        c = self.count
        out = []
        for i in range(c):
            t = _dyadic(float(T) * 8.0 ** (i / (c - 1) - 1))
            if not out or t > out[-1]:
                out.append(t)
        return out

    def ladder(self, T=None):
        """Probes in increasing order: naturals, then even/odd pairs per t."""
        T = mpq(T) if T is not None else self.base_T
        lad = self._ladders.get(T)
        if lad is None:
            if self.mode == "classical":
                ns = list(range(1, 17)) + [2 ** j for j in range(5, 11)]
                lad = [_int_probe(n, self.grid) for n in ns]
            else:
                lad = [_int_probe(n, self.grid) for n in range(1, self.naturals + 1)]
                for t in self.ts(T):
                    lad.append(self.probe(t, 0))
                    lad.append(self.probe(t, 1))
            self._ladders[T] = lad
        return lad

    def x(self, p):
        v = self._x.get(p.label)
        if v is None:
            v = self._x[p.label] = GenNum(self.term, self.rho, nb=p.nb,
                                          label="x(%s)" % p.label)
        return v

    def power_of_rho(self, q):
        q = mpq(q)
        return GenNum(Pow(RHO, Num(q) if q >= 0 else Neg(Num(-q))), self.rho)


# ---------------------------------------------------------------------------
# order bookkeeping

def _order(d):
    """(order, trend) of |d| from its low envelope; order None when unusable."""
    data = _Data(d)
    if data.poison_cofinal() or len(data.ks) < 4:
        return None, "poisoned"
    p = profile(data, "low")
    if p.trend == "zero":
        return INF, "zero"
    late = [data.ords[k] for k in p.picks[len(p.picks) // 2:]]
    if p.trend == "stable":
        return p.a2, "stable"
    if p.trend in ("growing", "shrinking") and late:
        return min(late), p.trend
    return None, p.trend


class _Diffs:
    """Cached |x_p - ref| orders and per-q decisions."""

    def __init__(self, seq, ref):
        self.seq, self.ref = seq, ref
        self.orders = {}
        self.dec = {}
        self.diffs = {}

    def diff(self, p):
        d = self.diffs.get(p.label)
        if d is None:
            d = self.diffs[p.label] = self.seq.x(p) - self.ref
        return d

    def order(self, p):
        o = self.orders.get(p.label)
        if o is None:
            o = self.orders[p.label] = _order(self.diff(p))
        return o

    def within(self, p, q):
        """|x_p - ref| < rho**q as True, False or None."""
        key = (p.label, q)
        if key in self.dec:
            return self.dec[key]
        a, tr = self.order(p)
        delta = self.seq.cfg.delta
        out = "fallback"
        if a is not None:
            with _fit_ctx():
                if a > q + delta and tr != "shrinking":
                    out = True
                elif a < q - delta and tr != "growing":
                    out = False
        if out == "fallback":
            out = lt(gn_abs(self.diff(p)), self.seq.power_of_rho(q)).value
        self.dec[key] = out
        return out


def _thresholds(D, probes, q_max, min_tail=4):
    """For each q the first probe index from which every probe is within rho**q."""
    alive = set(range(1, q_max + 1))
    start = {q: len(probes) for q in alive}
    for i in range(len(probes) - 1, -1, -1):
        if not alive:
            break
        for q in sorted(alive):
            if D.within(probes[i], q) is True:
                start[q] = i
            else:
                alive.discard(q)
    limit = len(probes) - min_tail
    return {q: (i if i <= limit else None) for q, i in start.items()}


def _num(v):
    if v is None:
        return None
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return round(float(v), 4)


class LimitReport:
    """``status`` is Converges, DivergesPlus, DivergesMinus, NoLimit or Unknown."""

    def __init__(self, status, limit=None, thresholds=None, q_verified=0, reason=None,
                 witness=None, T=None, diagnostics=()):
        self.status = status
        self.limit = limit
        self.thresholds = thresholds or {}
        self.q_verified = q_verified
        self.reason = reason
        self.witness = witness or {}
        self.T = T
        self.diagnostics = list(diagnostics)

    @property
    def converges(self):
        return self.status == "Converges"

    @property
    def verdict_status(self):
        if self.status == "Converges":
            return "true"
        if self.status in ("NoLimit", "DivergesPlus", "DivergesMinus"):
            return "false"
        return "unknown"

    def limit_st(self):
        if self.limit is None:
            return None
        st = classify(self.limit).st
        if st is None or not math.isfinite(st):
            return None
        return float("%.12g" % st)

    def to_dict(self):
        return {"status": self.status,
                "limit": None if self.limit is None else self.limit.source(),
                "limit_st": self.limit_st(),
                "thresholds": {str(q): lab for q, lab in sorted(self.thresholds.items())},
                "q_verified": self.q_verified, "reason": self.reason,
                "witness": self.witness,
                "ladder_T": None if self.T is None else _fmt_t(self.T)}

    def __repr__(self):
        lim = "" if self.limit is None else "(%s)" % self.limit.source()
        return "LimitReport(%s%s, q=%d)" % (self.status, lim, self.q_verified)


# ---------------------------------------------------------------------------
# limits

def _usable(x):
    data = _Data(x)
    return len(data.ks) >= 4 and not data.poison_cofinal()


def _candidate(seq, T):
    """Value at the far even probe, else at the mid one, else at the deepest t-probe."""
    lad = seq.ladder(T)
    if seq.mode != "classical":
        for depth in ("far", "mid"):
            x = seq.x(seq.far_probe(0, depth))
            if _usable(x):
                return x, "%s probe" % depth
    return seq.x(lad[-1]), "deepest probe %s" % lad[-1].label


def _divergence(seq, lad):
    q = seq.q_max
    big = seq.power_of_rho(-q)
    for sign, status in ((1, "DivergesPlus"), (-1, "DivergesMinus")):
        ok = True
        for p in lad[-2:]:
            x = seq.x(p) if sign > 0 else -seq.x(p)
            a, _ = _order(x)
            if a is None or a > -q:
                ok = False
                break
            if not lt(big, x).is_true:
                ok = False
                break
        if ok:
            return status
    return None


def _levels(lad):
    """Indices of the t-probe pairs in ``lad``, deepest last."""
    return [i for i, p in enumerate(lad) if p.parity == 0 and p.t is not None]


def _improving(D, lad):
    """Do the orders of |x_p - ref| still grow along the deepest levels?"""
    lv_ = _levels(lad)
    if len(lv_) < 4:
        return False
    with _fit_ctx():
        def level_order(i):
            os = [D.order(lad[j])[0] for j in (i, i + 1) if j < len(lad)]
            if any(o is None for o in os):
                return None
            return min(os)
        a, b = level_order(lv_[-1]), level_order(lv_[-4])
        if a is None or b is None or a == INF:
            return False
        return a > b + D.seq.cfg.delta and a < D.seq.q_max + 1


def _growing(seq, lad):
    """Is |x| still growing by powers of rho along the deepest levels, short of rho^-q_max?"""
    lv_ = _levels(lad)
    if len(lv_) < 4:
        return False
    a, _ = _order(seq.x(lad[lv_[-1]]))
    b, _ = _order(seq.x(lad[lv_[-4]]))
    if a is None or b is None or a == INF or b == INF:
        return False
    with _fit_ctx():
        return a < b - seq.cfg.delta and -seq.q_max - 1 < a < 0


def _gap(seq, lad):
    """Two deep probe values that stay apart on a cofinal set, if any.

    If |x_a - x_b| > rho**q on a cofinal set, no l can be within rho**(q+1)
    of both, so no threshold exists for q + 1."""
    deep = [p for p in lad if p.t is not None][-4:] if seq.mode != "classical" else lad[-3:]
    pairs = [(deep[-2], deep[-1]), (deep[-1], deep[-3] if len(deep) > 2 else deep[0]),
             (deep[-2], deep[0])]
    for a, b in pairs:
        if a is b:
            continue
        d = seq.x(a) - seq.x(b)
        v = is_negligible(d)
        if v.is_false and v.witness["q"] < seq.q_max:
            o, _ = _order(d)
            return {"pair": [a.label, b.label], "gap_order": _num(o), "L": v.witness["L"],
                    "q": v.witness["q"]}
    return None


def _analyse(seq, mode, q_max, extensions=2):
    """Shared core of hyperlim (``mode="limit"``) and is_cauchy (``mode="cauchy"``)."""
    T = seq.base_T
    for step in range(extensions + 1):
        lad = seq.ladder(T)
        shift = 0
        if mode == "limit":
            ref, how = _candidate(seq, T)
            scan = lad
        elif seq.mode == "classical":
            ref, how = seq.x(lad[-1]), "deepest probe"
            scan = lad[:-1]
        else:
            # x_M for the far hypernatural M is a term of the sequence:
            # |x_n - x_M| < rho^(q+1) for n, m >= N gives |x_n - x_m| < rho^q
            ref, how = _candidate(seq, T)
            how = "term at the " + how
            scan = lad if not how.endswith(lad[-1].label) else lad[:-1]
            shift = 1
        D = _Diffs(seq, ref)
        th = _thresholds(D, scan, q_max + shift, min_tail=4 if mode == "limit" else 3)
        th = {q: th[q + shift] for q in range(1, q_max + 1)}
        failed = [q for q in range(1, q_max + 1) if th[q] is None]
        if not failed:
            labels = {q: scan[th[q]].label for q in th}
            return "ok", ref, how, labels, T, None
        can_extend = seq.mode != "classical" and step < extensions
        if can_extend and (_improving(D, lad) or _growing(seq, lad)):
            T = T * 2
            continue
        div = _divergence(seq, lad)
        if div:
            return div, ref, how, {}, T, {"q": q_max}
        gap = _gap(seq, lad)
        if gap:
            return "gap", ref, how, {}, T, dict(gap, failed_q=failed[0])
        return "unknown", ref, how, {}, T, {"failed_q": failed[0]}
    return "unknown", ref, how, {}, T, None


def hyperlim(seq, q_max=None):
    q_max = q_max or seq.q_max
    res, ref, how, labels, T, wit = _analyse(seq, "limit", q_max)
    diag = ["candidate from the %s" % how, "ladder T = %s" % _fmt_t(T)]
    if res == "ok":
        return LimitReport("Converges", ref, labels, q_max, None, {}, T, diag)
    if res in ("DivergesPlus", "DivergesMinus"):
        return LimitReport(res, None, {}, q_max, "x exceeds drho^-%d at the deepest probes" % q_max,
                           wit, T, diag)
    if res == "gap":
        return LimitReport("NoLimit", None, {}, wit["failed_q"] - 1,
                           "deep probe values stay apart on %s" % wit["L"], wit, T, diag)
    return LimitReport("Unknown", None, {}, (wit or {}).get("failed_q", 1) - 1,
                       "no threshold found and no separation certified", wit, T, diag)


def is_cauchy(seq, q_max=None):
    q_max = q_max or seq.q_max
    res, ref, how, labels, T, wit = _analyse(seq, "cauchy", q_max)
    diag = ["pairs checked against the %s" % how, "ladder T = %s" % _fmt_t(T)]
    if res == "ok":
        return Verdict(True, {"thresholds": {str(q): l for q, l in sorted(labels.items())}}, diag)
    if res == "gap" or res in ("DivergesPlus", "DivergesMinus"):
        return Verdict(False, wit if res == "gap" else {"diverges": res}, diag)
    return Verdict(None, wit, diag)


def extend_sequence(a, sigma=None, rho=None, **kw):
    """The hypersequence of an ordinary sequence, if every probe value is moderate."""
    seq = a if isinstance(a, HyperSeq) else HyperSeq(a, sigma, rho, **kw)
    free = seq.term.free_symbols()
    if "eps" in free:
        raise NotExtendable("the term of an ordinary sequence depends only on n")
    for p in seq.ladder():
        v = is_moderate(seq.x(p))
        if v.is_false:
            raise NotExtendable("x_n is not moderate at the probe %s" % p.label,
                                probe=p.label, witness=v.witness)
    return seq


def _merge(state, v):
    if state is False or v is True:
        return state
    return False if v is False else None


def is_monotone(seq):
    """Compare consecutive probes; the probe order is total, so this covers all pairs."""
    lad = seq.ladder()
    xs = [seq.x(p) for p in lad]
    up, down = True, True
    bad = {}
    for i in range(len(xs) - 1):
        if up is not False:
            up = _merge(up, leq(xs[i], xs[i + 1]).value)
            if up is False:
                bad["increase_fails"] = [lad[i].label, lad[i + 1].label]
        if down is not False:
            down = _merge(down, leq(xs[i + 1], xs[i]).value)
            if down is False:
                bad["decrease_fails"] = [lad[i].label, lad[i + 1].label]
        if up is False and down is False:
            return Verdict(False, bad, ["neither non-decreasing nor non-increasing"])
    if up is True:
        return Verdict(True, {"direction": "non-decreasing"}, [])
    if down is True:
        return Verdict(True, {"direction": "non-increasing"}, [])
    return Verdict(None, bad, ["some comparison undecided"])


def probe_set(seq, hint=None, T=None):
    """The set of probe values, with ``hint`` as the expected supremum."""
    xs = [seq.x(p) for p in seq.ladder(T)]
    return SetDescr([SampledRange(xs, hint, seq.rho, "x(%s)" % seq.source())], seq.rho)


def monotone_limit(seq):
    """(hyperlim report, sup or inf report of the probe set, direction Verdict)."""
    mono = is_monotone(seq)
    rep = hyperlim(seq)
    hint, _ = _candidate(seq, seq.base_T)
    down = mono.is_true and mono.witness["direction"] == "non-increasing"
    S = probe_set(seq, hint, rep.T)
    sup = find_inf(S, q_max=seq.q_max) if down else find_sup(S, q_max=seq.q_max)
    return rep, sup, mono


def squeeze(x, y, z, q_max=None):
    """The limit of y from x <= y <= z at every probe."""
    for s in (y, z):
        if not (_same_gauge(s.rho, x.rho) and _same_gauge(s.sigma, x.sigma)):
            raise GaugeMismatch("the three sequences must share sigma and rho")
    q_max = q_max or x.q_max
    for p in x.ladder():
        px, py, pz = x.x(p), y.x(p), z.x(p)
        if not leq(px, py).is_true:
            raise HypothesisFailed("x_n <= y_n not verified at %s" % p.label, probe=p.label)
        if not leq(py, pz).is_true:
            raise HypothesisFailed("y_n <= z_n not verified at %s" % p.label, probe=p.label)
    lx = hyperlim(x, q_max)
    if lx.status == "DivergesPlus":
        return LimitReport("DivergesPlus", None, {}, q_max, "bounded below by a sequence "
                           "diverging to +infinity", {}, lx.T, lx.diagnostics)
    lz = hyperlim(z, q_max)
    if lz.status == "DivergesMinus":
        return LimitReport("DivergesMinus", None, {}, q_max, "bounded above by a sequence "
                           "diverging to -infinity", {}, lz.T, lz.diagnostics)
    if not (lx.converges and lz.converges):
        raise HypothesisFailed("the outer sequences do not both converge (%s, %s)"
                               % (lx.status, lz.status))
    if not gn_eq(lx.limit, lz.limit).is_true:
        raise HypothesisFailed("the outer limits differ")
    th = {}
    for q in range(1, q_max + 1):
        a, b = lx.thresholds[q], lz.thresholds[q]
        th[q] = max((a, b), key=_label_key)
    return LimitReport("Converges", lx.limit, th, q_max, "squeezed", {}, max(lx.T, lz.T),
                       ["limit shared by the outer sequences"])


def _label_key(label):
    """Depth order of probe labels: naturals first, then by t and parity."""
    if label.startswith("n="):
        return (0, mpq(0), int(label[2:]))
    t, _, par = label[2:].partition(",")
    return (1, mpq(t), 0 if par == "even" else 1)


# ---------------------------------------------------------------------------
# limsup and liminf

class LimsupReport:
    def __init__(self, kind, status, value, thresholds, q_verified, cross=None, alpha=None,
                 witness=None, diagnostics=()):
        self.kind = kind
        self.status = status
        self.value = value
        self.thresholds = thresholds
        self.q_verified = q_verified
        self.cross = cross
        self.alpha = alpha
        self.witness = witness or {}
        self.diagnostics = list(diagnostics)

    @property
    def verdict_status(self):
        return {True: "true", False: "false"}.get(self.status, "unknown")

    def to_dict(self):
        st = None
        if self.value is not None:
            s = classify(self.value).st
            st = float("%.12g" % s) if s is not None and math.isfinite(s) else None
        return {"kind": self.kind, "verified": self.status,
                "value": None if self.value is None else self.value.source(), "value_st": st,
                "thresholds": {str(q): l for q, l in sorted(self.thresholds.items())},
                "q_verified": self.q_verified, "cross_check": self.cross,
                "alpha_route": self.alpha, "witness": self.witness}

    def __repr__(self):
        return "LimsupReport(%s, %s, %s)" % (self.kind, self.status,
                                             None if self.value is None else self.value.source())


def _cluster(seq, lad, upper):
    """Join (upper) or meet of the far values, or of the deepest level."""
    cands = []
    if seq.mode != "classical":
        for depth in ("far", "mid"):
            xs = [seq.x(seq.far_probe(par, depth)) for par in (0, 1)]
            if all(_usable(x) for x in xs):
                cands = xs
                break
    if not cands:
        cands = [seq.x(p) for p in lad[-2:]]
    out = cands[0]
    for c in cands[1:]:
        out = _tw(lv.vmax if upper else lv.vmin, out, c)
    out.label = "%s of the deep probe values" % ("max" if upper else "min")
    return out


def _tw(fn, a, b):
    ctx = lv.context(a.cfg.max_prec)

    def at(k):
        u, v = a.value(k), b.value(k)
        if is_poison(u) or is_poison(v):
            return u if is_poison(u) else v
        with gmpy2.context(ctx):
            return fn(u, v)
    return GenNum(table=at, gauge=a.gauge)


def _side_order(seq, p, iota, sign):
    """Order of the part of x_p beyond iota on the given side."""
    d = seq.x(p) - iota if sign > 0 else iota - seq.x(p)
    return _pos_part(d)


def _bound_ok(seq, p, iota, sign, q, cache):
    key = (p.label, sign, q)
    if key not in cache:
        d = cache.get((p.label, sign))
        if d is None:
            d = cache[(p.label, sign)] = _side_order(seq, p, iota, sign)
            cache[(p.label, sign, "o")] = _order(d)
        a, tr = cache[(p.label, sign, "o")]
        delta = seq.cfg.delta
        out = None
        if a is not None:
            with _fit_ctx():
                if a > q + delta and tr != "shrinking":
                    out = True
                elif a < q - delta and tr != "growing":
                    out = False
        if out is None:
            out = leq(d, seq.power_of_rho(q)).value
        cache[key] = out
    return cache[key]


def _limsup_core(seq, q_max, upper):
    lad = seq.ladder()
    iota = _cluster(seq, lad, upper)
    sign = 1 if upper else -1
    cache = {}
    th = {}
    status = True
    wit = {}
    levels = _levels(lad)
    for q in range(1, q_max + 1):
        # (i) eventually every value is on the right side of iota +- rho^q
        start = len(lad)
        for i in range(len(lad) - 1, -1, -1):
            if _bound_ok(seq, lad[i], iota, sign, q, cache) is True:
                start = i
            else:
                break
        if start > len(lad) - 4:
            status = None if status is not False else False
            wit = {"condition": "i", "q": q}
            break
        # (ii) cofinally, every level has a value close to iota
        close = start2 = None
        for li in reversed(levels):
            pair = [lad[li], lad[li + 1]] if li + 1 < len(lad) else [lad[li]]
            close = any(_bound_ok(seq, p, iota, -sign, q, cache) is True for p in pair)
            if not close:
                break
            start2 = li
        if start2 is None or start2 > len(lad) - 4:
            status = None
            wit = {"condition": "ii", "q": q, "level": lad[levels[-1]].label}
            break
        start = max(start, start2)
        if status is not True:
            break
        th[q] = lad[start].label
    qv = len(th)
    return status, iota, th, qv, wit


def _alpha_route(seq, iota, upper):
    """sup (inf) of the deepest two levels of probe values, compared with iota."""
    lad = seq.ladder()
    xs = [seq.x(p) for p in lad[-4:]]
    S = SetDescr([SampledRange(xs, iota, seq.rho, "tail")], seq.rho)
    r = find_sup(S, q_max=seq.q_max) if upper else find_inf(S, q_max=seq.q_max)
    if not r.exists:
        return "alpha not found (%s)" % r.result
    return "agrees" if gn_eq(r.value, iota).is_true else "disagrees"


def _limsup(seq, q_max, upper, cross_check):
    q_max = q_max or seq.q_max
    status, iota, th, qv, wit = _limsup_core(seq, q_max, upper)
    cross = alpha = None
    if status is True:
        alpha = _alpha_route(seq, iota, upper)
        if cross_check:
            st2, iota2, _, _, _ = _limsup_core(seq.negated(), q_max, not upper)
            if st2 is True:
                cross = "agrees" if gn_eq(iota, -iota2).is_true else "disagrees"
            else:
                cross = "not verified"
    return LimsupReport("limsup" if upper else "liminf", status, iota if status else None,
                        th, qv, cross, alpha, wit)


def limsup(seq, q_max=None, cross_check=True):
    return _limsup(seq, q_max, True, cross_check)


def liminf(seq, q_max=None, cross_check=True):
    return _limsup(seq, q_max, False, cross_check)


def subseq_extract(seq, iota, q_max=None):
    """Probes n_q, increasing, with n_q >= sigma**-q and |x_{n_q} - iota| <= rho**q."""
    q_max = q_max or seq.q_max
    out = []
    for q in range(1, q_max + 1):
        t = mpq(2 * q + 1, 2)
        hit = None
        for par in (0, 1):
            p = seq.probe(t, par)
            if leq(gn_abs(seq.x(p) - iota), seq.power_of_rho(q)).is_true:
                hit = p
                break
        if hit is None:
            raise ExtractionFailed("no probe near sigma^-%s within drho^%d of the target"
                                   % (_fmt_t(t), q), q=q)
        out.append(hit)
    return out


# ---------------------------------------------------------------------------
# the eps-wise construction

class TableGauge(Gauge):
    """A gauge known only through its grid values (not necessarily monotone)."""

    def __init__(self, table, grid, name, base=None, cfg=DEFAULT, sets=None):
        super().__init__(EPS, grid, name, base, cfg, sets)
        self.table = dict(table)
        self.monotone = all(lv.compare(self.table[k + 1], self.table[k]) <= 0
                            for k in range(1, grid.K))

    def value_at_point(self, k, eps, dense, final):
        if dense:
            return Poison("no off-grid values for a table gauge")
        return self.table[k]

    def values(self):
        return dict(self.table)

    def log_at(self, k):
        return self.table[k].logmag


class EpswiseResult:
    def __init__(self, sigma, M, limit, report, mbar, path, diagnostics=()):
        self.sigma, self.M, self.limit, self.report = sigma, M, limit, report
        self.mbar = mbar
        self.path = path
        self.diagnostics = list(diagnostics)

    @property
    def verified(self):
        return self.report.converges and gn_eq(self.report.limit, self.limit).is_true

    def to_dict(self):
        return {"sigma": self.sigma.name, "path": self.path, "M": self.M.source(),
                "limit": self.limit.source(), "mbar_moderate": is_moderate(self.mbar).status,
                "hyperlim": self.report.to_dict(), "verified": self.verified}


def _value(node, k, gauge, n=None):
    nb = None if n is None else NBinding({k: n})
    return eval_point(node, k, gauge.grid.eps(k), gauge, nb, gauge.sets, gauge.cfg)


def _samples(cap):
    ns = set(range(1, min(cap, 64) + 1))
    x = 64.0
    while x < cap:
        ns.add(int(x))
        x *= 1.25
    ns.add(cap)
    return sorted(ns)


# n = 2**(2**20): far enough for the per-index limits checked by the search
_N_INF = lv.huge_integer(mpfr(2 ** 20) * mpfr(LN2), 0)


def _local_limit(term, rho, limit):
    if limit is not None:
        return lambda k: limit.value(k)
    return lambda k: _value(term, k, rho, _N_INF)


def _search_index(term, lim_at, k, rho, q_eps, cap, ns):
    """Least sampled M_q for q = 1..q_eps (kept non-decreasing); returns M_{q_eps}."""
    lk = lim_at(k)
    if is_poison(lk):
        raise NoClassicalLimit("no classical limit detected at index %d" % k, index=k)
    logs = []
    ctx = lv.context(rho.cfg.max_prec)
    for n in ns:
        v = _value(term, k, rho, lv.from_int(n))
        if is_poison(v):
            logs.append(INF)
            continue
        with gmpy2.context(ctx):
            d = lv.sub(v, lk)
        if d.sign == 0 or d.fuzzy:
            logs.append(-INF)
        elif lv.is_tower(d.logmag):
            logs.append(INF if d.logmag.sign > 0 else -INF)
        else:
            logs.append(d.logmag)
    # suffix maxima of log|a_n - l|
    suf = [None] * len(ns)
    m = -INF
    for i in range(len(ns) - 1, -1, -1):
        m = max(m, logs[i])
        suf[i] = m
    if suf[0] == -INF:
        return 1
    lr = rho.log_at(k)
    M, i = 1, 0
    for q in range(1, q_eps + 1):
        bound = q * lr
        while i < len(ns) and not suf[i] < bound:
            i += 1
        if i == len(ns):
            raise SearchCapExceeded("index %d, q = %d: threshold above %d" % (k, q, cap),
                                    index=k, q=q)
        M = max(M, ns[i])
        if suf[i] == -INF:
            break
    return M


def epswise_hyperlim(a, rho=None, n_search_cap=10 ** 6, threshold=None, limit=None,
                     q_of=None, cfg=None, shallow=3):
    """Build sigma and M with hyperlim over sigma equal to the classical limits.

    ``threshold`` is an optional closed form for M_{eps,q}, written with
    ``n`` standing for q; ``q_of`` replaces ceil(1/eps) by another
    expression in eps.
    """
    rho = _gauge(rho, cfg or DEFAULT)
    grid = rho.grid
    term = a if isinstance(a, Node) else parse_net(a, rho.sets)
    q_node = q_of if isinstance(q_of, Node) else (parse_net(q_of, rho.sets) if q_of
                                                  else Bin("/", Num(1), EPS))
    diag = []
    if limit is not None:
        lim = GenNum(limit, rho)
    else:
        probe = HyperSeq(term, None, rho)
        lim, how = _candidate(probe, probe.base_T)
        if how.startswith("deepest"):
            raise NoClassicalLimit("classical limits not detected", index=grid.K)
    lim_at = _local_limit(term, rho, GenNum(limit, rho) if limit is not None else None)
    lim_vals = lim.values()
    for k in grid.tail:
        if is_poison(lim_vals[k]):
            raise NoClassicalLimit("no classical limit detected at index %d" % k, index=k)
    if not is_moderate(lim).is_true:
        raise NoClassicalLimit("the limits [l_eps] are not moderate", index=grid.K)
    ns = _samples(n_search_cap)

    def q_eps(k):
        v = _value(q_node, k, rho)
        return int(gmpy2.ceil(v.to_mpfr())) if v.exact is None else int(-(-v.exact // 1))

    if threshold is not None:
        th_node = threshold if isinstance(threshold, Node) else parse_net(threshold, rho.sets)
        mbar_node = substitute(th_node, "n", q_node)
        sig_node = Call("min", RHO, Bin("/", Num(1), mbar_node))
        sigma = make_gauge(sig_node, grid, "min(rho, 1/(%s))" % to_source(mbar_node),
                           base=rho, cfg=rho.cfg)
        mbar = GenNum(mbar_node, rho)
        path = "closed form"
        # cross-check the closed form against the search where it is feasible
        for k in grid.indices[:shallow]:
            qe = min(q_eps(k), 4)
            closed = _value(substitute(th_node, "n", Num(qe)), k, rho)
            extra = []
            if closed.exact is not None and closed.exact <= n_search_cap:
                c = int(closed.exact)
                extra = [c - 1, c] if c > 1 else [c]
            try:
                found = _search_index(term, lim_at, k, rho, qe, n_search_cap,
                                      sorted(set(ns) | set(extra)))
            except SearchCapExceeded:
                diag.append("index %d: search cap reached, closed form not cross-checked" % k)
                continue
            ok = lv.compare(lv.from_int(found), closed) <= 0
            diag.append("index %d, q <= %d: searched M = %d, closed form %s (%s)"
                        % (k, qe, found, closed.to_float(), "consistent" if ok else "INCONSISTENT"))
    else:
        table = {}
        for k in grid.indices:
            table[k] = lv.from_int(_search_index(term, lim_at, k, rho, q_eps(k), n_search_cap, ns))
        mbar = GenNum(table=table, gauge=rho, label="Mbar")
        ctx = lv.context(rho.cfg.max_prec)
        rv = rho.values()
        sv = {}
        for k in grid.indices:
            with gmpy2.context(ctx):
                sv[k] = lv.vmin(rv[k], lv.div(NetValue.from_rational(1), table[k]))
        if all(lv.compare(sv[k], rv[k]) == 0 for k in grid.indices):
            sigma = rho
        else:
            sigma = TableGauge(sv, grid, "min(rho, 1/Mbar)", base=rho.base, cfg=rho.cfg,
                               sets=rho.sets)
        path = "search"
    M = HyperNat(GenNum(table=lambda k: mbar.value(k), gauge=sigma, label="Mbar"))
    seq = HyperSeq(term, sigma, rho)
    report = hyperlim(seq)
    return EpswiseResult(sigma, M, lim, report, mbar, path, diag)


__all__ = [
    "HyperNat", "aux_gauge", "pow_hypernat", "Probe", "HyperSeq", "LimitReport", "hyperlim",
    "is_cauchy", "extend_sequence", "is_monotone", "probe_set", "monotone_limit", "squeeze",
    "LimsupReport", "limsup", "liminf", "subseq_extract", "TableGauge", "EpswiseResult",
    "epswise_hyperlim",
]
