"""``gn``: command-line front end.

Every command prints either a short text report or, with ``--json``, one
JSON object ``{"command", "status", "witness", "diagnostics", "config", ...}``
with sorted keys.  Exit status: 0 for a definite verdict, 2 for Unknown,
1 for errors (and for ``paper-suite`` when a case fails).
"""

import argparse
import json
import math
import sys
from fractions import Fraction

from . import hyper, ring_core, suite, suprema
from .config import load_config
from .errors import GNError
from .netlang import EpsGrid, default_gauge, is_poison, make_gauge
from .ring_core import GenNum

EXIT = {"true": 0, "false": 0, "unknown": 2, "error": 1}
RELATIONS = ("leq", "lt", "eq", "geq", "gt", "quadrichotomy")


# ---------------------------------------------------------------------------
# plain data for JSON

def plain(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "+inf" if x > 0 else "-inf"
        return float("%.12g" % x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, GenNum):
        return x.source()
    if isinstance(x, hyper.Probe):
        return x.label
    return str(x)


def fmt_value(v):
    if is_poison(v):
        return "undefined (%s)" % v.reason
    if v.exact is not None:
        s = str(v.exact)
        return s if len(s) <= 40 else "%.12g" % float(v.exact)
    if v.sign == 0:
        return "0"
    f = v.to_float()
    if f != 0 and math.isfinite(f):
        return "%.12g" % f
    return "%s exp(%s)" % ("-" if v.sign < 0 else "", plain(float(v.logmag)))


class Report:
    def __init__(self, command, status, result=None, witness=None, diagnostics=()):
        self.command = command
        self.status = status
        self.result = result or {}
        self.witness = witness or {}
        self.diagnostics = list(diagnostics)

    @classmethod
    def of_verdict(cls, command, v, result=None):
        return cls(command, v.status, result, v.witness, v.diagnostics)

    def to_dict(self, config):
        return plain({"command": self.command, "status": self.status, "result": self.result,
                      "witness": self.witness, "diagnostics": self.diagnostics,
                      "config": config})

    def text(self):
        lines = ["%s: %s" % (self.command, self.status)]
        for key in sorted(self.result):
            val = self.result[key]
            if key == "cases":
                continue
            lines.append("  %s: %s" % (key, json.dumps(plain(val), sort_keys=True)))
        if self.witness:
            lines.append("  witness: %s" % json.dumps(plain(self.witness), sort_keys=True))
        for d in self.diagnostics:
            lines.append("  - %s" % d)
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# context built from the flags

class Context:
    def __init__(self, args):
        cfg = load_config(args.config)
        cfg = cfg.replace(K=args.grid, tail_start=args.tail, prec=args.prec)
        self.cfg = cfg
        self.args = args
        self.grid = EpsGrid.from_config(cfg)
        g = args.rho or args.gauge
        self.rho = default_gauge(cfg, self.grid) if g is None else make_gauge(g, self.grid,
                                                                              cfg=cfg)
        self.qmax = args.qmax

    def num(self, src):
        return GenNum(src, self.rho)

    def set(self, src):
        return suprema.parse_setdescr(src, self.rho)

    def seq(self, term):
        T, count = 1, 24
        if self.args.ladder:
            parts = self.args.ladder.split(",")
            T = Fraction(parts[0].strip())
            if len(parts) > 1:
                count = int(parts[1])
        return hyper.HyperSeq(term, self.args.sigma, self.rho, T=T, count=count,
                              mode=self.args.mode, cfg=self.cfg, q_max=self.qmax)

    def snapshot(self):
        snap = self.cfg.snapshot()
        snap["gauge.rho"] = self.rho.name
        snap["gauge.sigma"] = self.args.sigma or self.rho.name
        if self.args.ladder:
            snap["hyper.ladder"] = self.args.ladder
        if self.qmax:
            snap["cli.qmax"] = self.qmax
        return snap


def _need(value, flag):
    if value is None:
        raise GNError("missing %s" % flag)
    return value


def _expr(args):
    return _need(args.expr or args.positional, "-e EXPR")


# ---------------------------------------------------------------------------
# commands

def cmd_eval(ctx):
    x = ctx.num(_expr(ctx.args))
    c = ring_core.classify(x)
    K = ctx.grid.K
    vals = {str(k): fmt_value(x.value(k)) for k in range(max(1, K - 3), K + 1)}
    return Report("eval", "true" if c.kind != "unknown" else "unknown",
                  {"expr": x.source(), "classification": c.to_dict(), "values": vals},
                  {}, c.diagnostics)


def cmd_classify(ctx):
    x = ctx.num(_expr(ctx.args))
    props = {"moderate": ring_core.is_moderate(x), "negligible": ring_core.is_negligible(x),
             "invertible": ring_core.is_invertible(x),
             "positive_invertible": ring_core.is_invertible_positive(x),
             "hypernatural": ring_core.is_hypernat(x)}
    c = ring_core.classify(x)
    result = {"expr": x.source(), "classification": c.to_dict()}
    result.update({k: v.status for k, v in props.items()})
    witness = {k: v.witness for k, v in props.items() if v.witness}
    status = "unknown" if props["moderate"].is_unknown else "true"
    return Report("classify", status, result, witness, c.diagnostics)


def cmd_cmp(ctx):
    a = ctx.args
    x, y = ctx.num(_need(a.x, "-x EXPR")), ctx.num(_need(a.y, "-y EXPR"))
    rel = a.rel
    if rel == "quadrichotomy":
        case, L, diag = ring_core.quadrichotomy(x, y)
        return Report("cmp", "unknown" if case == "UNKNOWN" else "true",
                      {"relation": rel, "case": case, "x": x.source(), "y": y.source()},
                      {"L": L.name} if L is not None else {}, diag)
    fn = {"leq": lambda: ring_core.leq(x, y), "lt": lambda: ring_core.lt(x, y),
          "eq": lambda: ring_core.gn_eq(x, y), "geq": lambda: ring_core.leq(y, x),
          "gt": lambda: ring_core.lt(y, x)}[rel]
    return Report.of_verdict("cmp", fn(), {"relation": rel, "x": x.source(), "y": y.source()})


def _kind(ctx):
    return suprema.FERMAT if ctx.args.kind == "fermat" else suprema.SHARP


def _sup_report(name, r):
    result = r.to_dict()
    del result["witnesses"]
    return Report(name, r.status, result, r.witnesses, r.diagnostics)


def cmd_sup(ctx):
    r = suprema.find_sup(ctx.set(_need(ctx.args.set, "--set")), _kind(ctx), ctx.qmax)
    return _sup_report("sup", r)


def cmd_inf(ctx):
    r = suprema.find_inf(ctx.set(_need(ctx.args.set, "--set")), _kind(ctx), ctx.qmax)
    return _sup_report("inf", r)


def cmd_aub(ctx):
    S = ctx.set(_need(ctx.args.set, "--set"))
    M = ctx.num(_need(ctx.args.M, "-M EXPR"))
    v, n = suprema.is_AUB(M, S, kind=_kind(ctx), q_max=ctx.qmax or 8)
    return Report.of_verdict("aub", v, {"M": M.source(), "order": n})


def _bounds(ctx):
    if not ctx.args.bounds:
        return None
    return suprema.UpperBoundFamily([ctx.num(b.strip()) for b in ctx.args.bounds.split(";")])


def cmd_sigma_net(ctx):
    S = ctx.set(_need(ctx.args.set, "--set"))
    sigma, moderate, diag = suprema.sigma_net(S, _bounds(ctx), _kind(ctx))
    K = ctx.grid.K
    vals = {str(k): fmt_value(sigma.value(k)) for k in range(max(1, K - 3), K + 1)}
    return Report("sigma-net", moderate.status, {"values": vals, "moderate": moderate.status},
                  moderate.witness, list(diag) + moderate.diagnostics)


def cmd_hans(ctx):
    S = ctx.set(_need(ctx.args.set, "--set"))
    h = suprema.hans_sequences(S, _bounds(ctx), ctx.qmax, _kind(ctx))
    return Report("hans", "true" if h.ok else "false", h.to_dict(), {}, h.diagnostics)


def _seq_arg(ctx):
    return ctx.seq(_need(ctx.args.seq or ctx.args.positional, "--seq TERM"))


def _report(name, r):
    result = r.to_dict()
    del result["witness"]
    return Report(name, r.verdict_status, result, r.witness, r.diagnostics)


def cmd_hyperlim(ctx):
    return _report("hyperlim", hyper.hyperlim(_seq_arg(ctx)))


def cmd_cauchy(ctx):
    return Report.of_verdict("cauchy", hyper.is_cauchy(_seq_arg(ctx)))


def cmd_monotone(ctx):
    seq = _seq_arg(ctx)
    rep, sup, mono = hyper.monotone_limit(seq)
    result = {"monotone": mono.status, "hyperlim": rep.to_dict(), "bound": sup.to_dict()}
    if not mono.is_true:
        return Report("monotone", mono.status, result, mono.witness, mono.diagnostics)
    agree = rep.converges == sup.exists
    if agree and rep.converges:
        agree = ring_core.gn_eq(rep.limit, sup.value).is_true
    result["theorem_holds"] = agree
    return Report("monotone", "true", result, mono.witness, mono.diagnostics)


def cmd_squeeze(ctx):
    a = ctx.args
    low = ctx.seq(_need(a.lower, "--lower TERM"))
    mid = _seq_arg(ctx)
    up = ctx.seq(_need(a.upper, "--upper TERM"))
    return _report("squeeze", hyper.squeeze(low, mid, up, ctx.qmax))


def _limsup(name, fn, ctx):
    return _report(name, fn(_seq_arg(ctx), ctx.qmax))


def cmd_limsup(ctx):
    return _limsup("limsup", hyper.limsup, ctx)


def cmd_liminf(ctx):
    return _limsup("liminf", hyper.liminf, ctx)


def cmd_epswise(ctx):
    a = ctx.args
    r = hyper.epswise_hyperlim(_need(a.seq or a.positional, "--seq TERM"), ctx.rho,
                               n_search_cap=a.cap, threshold=a.threshold, limit=a.limit,
                               q_of=a.q_of, cfg=ctx.cfg)
    st = "true" if r.verified else r.report.verdict_status
    return Report("epswise", st, r.to_dict(), r.report.witness, r.diagnostics)


def cmd_paper_suite(ctx):
    cases = suite.run_suite(ctx.cfg, ctx.args.filter, ctx.rho)
    failed = [c["name"] for c in cases if not c["pass"]]
    status = "true" if not failed else "false"
    result = {"cases": cases, "passed": len(cases) - len(failed), "total": len(cases)}
    return Report("paper-suite", status, result, {"failed": failed} if failed else {}, [])


COMMANDS = {
    "eval": cmd_eval, "cmp": cmd_cmp, "classify": cmd_classify, "sup": cmd_sup,
    "inf": cmd_inf, "aub": cmd_aub, "sigma-net": cmd_sigma_net, "hans": cmd_hans,
    "hyperlim": cmd_hyperlim, "cauchy": cmd_cauchy, "monotone": cmd_monotone,
    "squeeze": cmd_squeeze, "limsup": cmd_limsup, "liminf": cmd_liminf,
    "epswise": cmd_epswise, "paper-suite": cmd_paper_suite,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", help="key=value config file (default: $GN_CONFIG)")
    g.add_argument("--gauge", help="gauge rho as an expression in eps")
    g.add_argument("--rho", help="same as --gauge")
    g.add_argument("--sigma", help="index gauge sigma of a hypersequence")
    g.add_argument("--grid", type=int, metavar="K", help="number of grid indices")
    g.add_argument("--tail", type=int, metavar="k0", help="first index of the decision tail")
    g.add_argument("--prec", type=int, metavar="BITS", help="working precision")
    g.add_argument("--qmax", type=int, metavar="Q", help="largest q checked")
    g.add_argument("--ladder", metavar="T,count", help="probe ladder depth and size")
    g.add_argument("--mode", choices=("hyper", "classical"), default="hyper",
                   help="probe hypernatural or only natural indices")
    g.add_argument("--json", action="store_true", help="print the JSON report")

    p = argparse.ArgumentParser(prog="gn", description="Decide and compute with "
                                "Robinson-Colombeau generalized numbers.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name, parents=[common])
        s.add_argument("positional", nargs="?", help=argparse.SUPPRESS)
        if name in ("eval", "classify"):
            s.add_argument("-e", "--expr")
        if name == "cmp":
            s.add_argument("-x", required=True)
            s.add_argument("-y", required=True)
            s.add_argument("--rel", choices=RELATIONS, default="leq")
        if name in ("sup", "inf", "aub", "sigma-net", "hans"):
            s.add_argument("--set", help="set description")
            s.add_argument("--kind", choices=("sharp", "fermat"), default="sharp")
        if name == "aub":
            s.add_argument("-M", help="candidate upper bound")
        if name in ("sigma-net", "hans"):
            s.add_argument("--bounds", help="upper bounds separated by ';'")
        if name in ("hyperlim", "cauchy", "monotone", "squeeze", "limsup", "liminf",
                    "epswise"):
            s.add_argument("--seq", help="term in n")
        if name == "squeeze":
            s.add_argument("--lower", help="lower term in n")
            s.add_argument("--upper", help="upper term in n")
        if name == "epswise":
            s.add_argument("--threshold", help="closed form of M_{eps,q}, with n for q")
            s.add_argument("--limit", help="the classical limits as a net")
            s.add_argument("--q-of", dest="q_of", help="replaces ceil(1/eps)")
            s.add_argument("--cap", type=int, default=10 ** 6, help="search cap for n")
        if name == "paper-suite":
            s.add_argument("--filter", help="case name substring or group")
    return p


def run(argv=None, args=None):
    """Return (JSON-ready dict, Report, exit code) for one invocation."""
    args = args or build_parser().parse_args(argv)
    config = {}
    try:
        ctx = Context(args)
        config = ctx.snapshot()
        rep = COMMANDS[args.command](ctx)
    except GNError as exc:
        rep = Report(args.command, "error", {}, exc.to_dict(), [str(exc)])
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        rep = Report(args.command, "error", {}, {"type": type(exc).__name__,
                                                 "message": str(exc)}, [str(exc)])
    code = EXIT[rep.status]
    if args.command == "paper-suite" and rep.status == "false":
        code = 1
    return rep.to_dict(config), rep, code


def main(argv=None):
    args = build_parser().parse_args(argv)
    data, rep, code = run(args=args)
    if args.json:
        sys.stdout.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
    else:
        print(rep.text())
        if args.command == "paper-suite":
            for c in data["result"].get("cases", []):
                print("%s  %-32s expected %s; observed %s"
                      % ("PASS" if c["pass"] else "FAIL", c["name"], c["expected"],
                         c["observed"]))
    return code


if __name__ == "__main__":
    sys.exit(main())
