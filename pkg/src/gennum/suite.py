"""The worked-example battery behind ``gn paper-suite``.

Every case returns what was observed together with a pass flag; nothing in
the observations depends on timing, so the JSON dump is reproducible.
"""

from .config import DEFAULT
from .errors import GNError, NotExtendable
from .hyper import (HyperNat, HyperSeq, aux_gauge, extend_sequence, hyperlim, is_cauchy,
                    is_monotone, liminf, limsup, monotone_limit, pow_hypernat, squeeze)
from .netlang import default_gauge, make_gauge
from .ring_core import classify, gn, gn_abs, gn_eq, is_invertible, is_negligible, leq, lt, rpi
from .suprema import (FERMAT, SHARP, UpperBoundFamily, find_inf, find_sup, hans_sequences,
                      is_AUB, parse_setdescr, set_scale, sigma_net)
from .topology import closed_ball, internal_member

OPEN01 = "interval(0,1,open,open)"
SPLIT = "interval(0,1,open,open) | points(2 on EVEN, 1/2 on ODD)"


class Case:
    def __init__(self, name, group, expected, fn):
        self.name, self.group, self.expected, self.fn = name, group, expected, fn

    def run(self, rho):
        try:
            observed, ok = self.fn(rho)
        except GNError as exc:
            observed, ok = "error: %s" % type(exc).__name__, False
        return {"name": self.name, "group": self.group, "expected": self.expected,
                "observed": observed, "pass": bool(ok)}


def _v(verdict):
    return verdict.status


def _eq(x, y):
    return gn_eq(x, y).is_true


def _sup(rep, value, rho):
    ok = rep.exists and value is not None and _eq(rep.value, gn(value, rho))
    if rep.value is None:
        return rep.result, ok
    st = classify(rep.value).st
    return "%s(st %s)" % (rep.result, None if st is None else float("%.12g" % st)), ok


def _lim(rep, value, rho):
    if rep.converges:
        ok = value is not None and _eq(rep.limit, gn(value, rho))
        return "Converges(st %s)" % rep.limit_st(), ok
    return rep.status, value is None


# each builder takes the codomain gauge rho -------------------------------------------

def _negligible_tail(rho):
    v = is_negligible(gn("rho^(1/eps)", rho))
    return _v(v), v.is_true


def _two_reps(rho):
    v = gn_eq(gn("1 - rho^(1/eps)", rho), gn("1 + rho^(1/eps)", rho))
    return _v(v), v.is_true


def _slack(rho):
    x = gn("sin(1/eps)", rho)
    v = leq(x, x + gn("rho^(1/eps)", rho))
    return _v(v), v.is_true


def _drho_positive(rho):
    v = lt(gn("0", rho), gn("drho", rho))
    return _v(v), v.is_true


def _rpi_repair(rho):
    r = rpi(gn("1 - rho^(1/eps)", rho))
    vals = r.values()
    ok = all(vals[k].exact == 1 for k in rho.grid.tail)
    return "rpi = 1 on the tail" if ok else "rpi differs from 1", ok


def _gauges(rho):
    a = make_gauge("eps", rho.grid, cfg=rho.cfg)
    b = make_gauge("exp(-rho^(-1/rho))", rho.grid, base=rho, cfg=rho.cfg)
    return "eps monotone=%s, exp(-rho^(-1/rho)) valid" % a.monotone, a.monotone and b is not None


def _closure(rho):
    v = internal_member(gn("1 + drho", rho), closed_ball("1", "drho"))
    return _v(v), v.is_true


def _set(src, rho):
    return parse_setdescr(src, rho)


def _sup_open(rho):
    return _sup(find_sup(_set(OPEN01, rho)), "1", rho)


def _inf_open(rho):
    return _sup(find_inf(_set(OPEN01, rho)), "0", rho)


def _sup_ab(rho):
    return _sup(find_sup(_set("interval(-2, 3/2, open, open)", rho)), "3/2", rho)


def _inf_recip(rho):
    return _sup(find_inf(_set("recipN", rho)), "0", rho)


def _sup_real_fermat(rho):
    return _sup(find_sup(_set("realinterval(0,1,open,open)", rho), FERMAT), "1", rho)


def _sup_real_sharp(rho):
    r = find_sup(_set("realinterval(0,1,open,open)", rho), SHARP)
    return r.result, r.result == "NoSup"


def _sup_split(rho):
    r = find_sup(_set(SPLIT, rho))
    ok = r.result == "LubOnly" and _eq(r.value, gn("2*ind(EVEN) + ind(ODD)", rho))
    return "%s(%s)" % (r.result, None if r.value is None else r.value.source()), ok


def _sup_dinf(rho):
    r = find_sup(_set("DINF", rho))
    return r.result, r.result == "NoSup"


def _sigma_open(rho):
    s, _, _ = sigma_net(_set(OPEN01, rho))
    return "sigma = %s" % s.value(rho.grid.K).to_float(), _eq(s, gn("1", rho))


def _sigma_split(rho):
    s, mod, _ = sigma_net(_set(SPLIT, rho))
    ok = _eq(s, gn("2*ind(EVEN) + ind(ODD)", rho)) and mod.is_true
    K = rho.grid.K
    return ("sigma = %s on EVEN, %s on ODD" % (s.value(K - K % 2).to_float(),
                                             s.value(K - 1 + K % 2).to_float())), ok


def _sigma_max(rho):
    S = _set("interval(0, 3, open, closed)", rho)
    s, _, _ = sigma_net(S, UpperBoundFamily(["3"]))
    return "sigma = %s" % s.value(rho.grid.K).to_float(), _eq(s, gn("3", rho))


def _hans_dinf(rho):
    h = hans_sequences(_set("DINF", rho))
    return "ok=%s, blocking q=%s" % (h.ok, h.blocking_q), not h.ok and h.blocking_q == 1


def _aub_trivial(rho):
    v, n = is_AUB(gn("drho^(-1)", rho), _set(OPEN01, rho))
    return _v(v), v.is_false and n is None


def _aub_sup(rho):
    v, n = is_AUB(gn("1", rho), _set(OPEN01, rho))
    return "%s, order %s" % (_v(v), n), v.is_true and n == 2


def _reflection(rho):
    S = set_scale(gn("-1", rho), _set(OPEN01, rho))
    a, b = find_inf(S), find_sup(_set(OPEN01, rho))
    ok = a.exists and b.exists and _eq(a.value, -b.value)
    return "inf(-S) = %s" % (a.value.source() if a.value is not None else a.result), ok


def _hypernat_one(rho):
    v = HyperNat.from_net(gn("1 - rho^(1/eps)", rho)).eq(1)
    return _v(v), v.is_true


def _pow_aux(rho):
    m = HyperNat.from_net(gn("rpi(rho^(-1))", rho))
    r = pow_hypernat(m, m, aux_gauge(rho))
    return _v(r.verdict), r.verdict.is_true


def _extend_ok(rho):
    extend_sequence(HyperSeq("1/n + drho^(-1)", rho=rho))
    return "extendable", True


def _extend_bad(rho):
    try:
        extend_sequence(HyperSeq("drho^(-n)", rho=rho))
    except NotExtendable:
        return "NotExtendable", True
    return "extendable", False


def _seq(term, rho, sigma=None, **kw):
    return HyperSeq(term, sigma, rho, **kw)


def _limit_case(term, value, sigma=None):
    return lambda rho: _lim(hyperlim(_seq(term, rho, sigma)), value, rho)


def _nolimit_case(term, sigma=None):
    def run(rho):
        r = hyperlim(_seq(term, rho, sigma))
        return _lim(r, None, rho)[0], r.status == "NoLimit"
    return run


def _compound(rho):
    r = hyperlim(_seq("(1+1/n)^n", rho))
    if not r.converges:
        return r.status, False
    d = r.limit - gn("exp(1)", rho)
    small = leq(gn_abs(d), gn("drho", rho))
    gap = is_invertible(d)
    return ("Converges, |limit - e| <= drho: %s, gap invertible: %s"
            % (_v(small), _v(gap))), small.is_true and not gap.is_true


def _root_sup(rho):
    _, sup, _ = monotone_limit(_seq("drho^(1/n)", rho))
    return _sup(sup, None, rho)[0], sup.result == "NoSup"


def _root_monotone(rho):
    v = is_monotone(_seq("drho^(1/n)", rho))
    return "%s (%s)" % (_v(v), (v.witness or {}).get("direction")), (
        v.is_true and v.witness["direction"] == "non-decreasing")


def _classical_cauchy(rho):
    v = is_cauchy(_seq("(1-drho)^n", rho, mode="classical"))
    return _v(v), v.is_false


def _squeeze_log(rho):
    r = squeeze(_seq("0", rho), _seq("log(n)/n", rho), _seq("2/n^(1/2)", rho))
    return _lim(r, "0", rho)


def _squeeze_fact(rho):
    r = squeeze(_seq("(exp(1)*(n/exp(1))^n)^(1/n)", rho), _seq("fact(n)^(1/n)", rho),
                _seq("(exp(1)*n*(n/exp(1))^n)^(1/n)", rho))
    return r.status, r.status == "DivergesPlus"


def _limsup_case(term, upper, value):
    def run(rho):
        r = (limsup if upper else liminf)(_seq(term, rho))
        ok = r.status is True and _eq(r.value, gn(value, rho))
        if r.status is not True:
            return "%s %s" % (r.kind, r.verdict_status), False
        return "%s %s" % (r.kind, r.to_dict()["value_st"]), ok
    return run


CASES = [
    Case("gauge-examples", "netlang", "eps and exp(-rho^(-1/rho)) are gauges", _gauges),
    Case("negligible-tail", "ring", "true", _negligible_tail),
    Case("two-representatives-of-1", "ring", "true", _two_reps),
    Case("negligible-slack", "ring", "true", _slack),
    Case("drho-positive", "ring", "true", _drho_positive),
    Case("rpi-repairs-floor", "ring", "rpi = 1 on the tail", _rpi_repair),
    Case("ball-closure", "topology", "true", _closure),
    Case("sup-open-interval", "sup", "Sup(1)", _sup_open),
    Case("inf-open-interval", "sup", "Sup(0)", _inf_open),
    Case("sup-interval-ab", "sup", "Sup(3/2)", _sup_ab),
    Case("inf-reciprocals", "sup", "Sup(0)", _inf_recip),
    Case("sup-real-points-fermat", "sup", "Sup(1)", _sup_real_fermat),
    Case("sup-real-points-sharp", "sup", "NoSup", _sup_real_sharp),
    Case("sup-split-set", "sup", "LubOnly(2 on EVEN, 1 on ODD)", _sup_split),
    Case("sup-dinf", "sup", "NoSup", _sup_dinf),
    Case("sup-reflection", "sup", "inf(-S) = -sup(S)", _reflection),
    Case("sigma-net-open-interval", "sup", "sigma = 1", _sigma_open),
    Case("sigma-net-split-set", "sup", "sigma = 2 on EVEN, 1 on ODD", _sigma_split),
    Case("sigma-net-maximum", "sup", "sigma = 3", _sigma_max),
    Case("hans-dinf", "sup", "no pair at q = 1", _hans_dinf),
    Case("aub-trivial-bound", "sup", "false", _aub_trivial),
    Case("aub-sup-order-2", "sup", "true, order 2", _aub_sup),
    Case("sup-drho-roots", "sup", "NoSup", _root_sup),
    Case("hypernat-rpi-one", "hyper", "true", _hypernat_one),
    Case("hypernat-power-aux", "hyper", "true", _pow_aux),
    Case("extend-shifted", "hyper", "extendable", _extend_ok),
    Case("extend-drho-powers", "hyper", "NotExtendable", _extend_bad),
    Case("hyperlim-recip", "hyper", "Converges(0)", _limit_case("1/n", "0")),
    Case("hyperlim-recip-sigma-rho2", "hyper", "Converges(0)",
         _limit_case("1/n", "0", "rho^2")),
    Case("hyperlim-inv-log-fast-sigma", "hyper", "Converges(0)",
         _limit_case("1/log(n)", "0", "exp(-rho^(-1/rho))")),
    Case("hyperlim-inv-log-sigma-rho", "hyper", "NoLimit", _nolimit_case("1/log(n)")),
    Case("hyperlim-geometric", "hyper", "Converges(0)", _limit_case("(1-drho)^n", "0")),
    Case("hyperlim-compound-interest", "hyper", "e up to a non-invertible gap", _compound),
    Case("hyperlim-drho-roots", "hyper", "NoLimit", _nolimit_case("drho^(1/n)")),
    Case("monotone-drho-roots", "hyper", "true (non-decreasing)", _root_monotone),
    Case("cauchy-classical-geometric", "hyper", "false", _classical_cauchy),
    Case("squeeze-log-over-n", "hyper", "Converges(0)", _squeeze_log),
    Case("squeeze-factorial-root", "hyper", "DivergesPlus", _squeeze_fact),
    Case("limsup-alternating", "limsup", "limsup 1", _limsup_case("(-1)^n", True, "1")),
    Case("liminf-alternating", "limsup", "liminf -1", _limsup_case("(-1)^n", False, "-1")),
    Case("limsup-mu-powers", "limsup", "limsup 1",
         _limsup_case("(ind(EVEN) - ind(ODD))^n", True, "1")),
    Case("hyperlim-mu-powers", "limsup", "NoLimit",
         _nolimit_case("(ind(EVEN) - ind(ODD))^n")),
]


def select(name_filter=None):
    if not name_filter:
        return list(CASES)
    f = name_filter.lower()
    if f in {c.group for c in CASES}:
        return [c for c in CASES if c.group == f]
    return [c for c in CASES if f in c.name]


def run_suite(cfg=DEFAULT, name_filter=None, rho=None):
    rho = rho or default_gauge(cfg)
    return [c.run(rho) for c in select(name_filter)]
