"""Close suprema and infima of finitely described sets.

A :class:`SetDescr` is a finite union of *parts*.  Each part class knows
closed forms for what a supremum search needs: a candidate least upper bound,
an upper-bound test for a given number, and for every radius ``r_q`` an
element lying as close as possible below a given bound.  The supremum
conditions are then checked for ``q = 1 .. q_max``.

Radii: ``dρ**q`` for the sharp kind, the real ``2**-q`` for the Fermat kind.
"""

import re

import gmpy2
from gmpy2 import mpq

from . import logval as lv
from .errors import (ClampViolation, EmptyFamily, EmptySet, GNSyntaxError, NoPositiveElement,
                     NotSharplyBounded, UnsupportedPartClass)
from .netlang import Ind, Num, Poison, RHO, Verdict, default_gauge, is_poison
from .ring_core import (GenNum, gn_abs, gn_max, gn_min, is_invertible_positive,
                        is_moderate, leq, lt, rpi, st_inf, st_sup)
from .topology import RadiiKind, _split_top, as_setnet, real_constant

SHARP, FERMAT = RadiiKind.SHARP, RadiiKind.FERMAT


def radius(kind, q, gauge):
    if kind is SHARP:
        return GenNum(RHO ** Num(q), gauge)
    return GenNum(Num(mpq(1, 2 ** q)), gauge)


def _const(q, gauge):
    return GenNum(Num(mpq(q)) if q >= 0 else -Num(-mpq(q)), gauge)


def _join(xs):
    out = xs[0]
    for x in xs[1:]:
        out = gn_max(out, x)
    return out


def _meet(xs):
    out = xs[0]
    for x in xs[1:]:
        out = gn_min(out, x)
    return out


def _all(verdicts):
    out = Verdict(True)
    for v in verdicts:
        out = out & v
        if out.is_false:
            break
    return out


# ---------------------------------------------------------------------------
# part classes

class Part:
    """Interface of a part class; ``gauge`` is that of the enclosing set."""

    closed_under_scaling = False
    canned = None          # reason string when the part has no supremum at all

    def __init__(self, gauge):
        self.gauge = gauge

    def candidate(self, kind):
        """(least upper bound candidate or None, is it provably the lub)."""
        raise NotImplementedError

    def upper_check(self, s, kind):
        raise NotImplementedError

    def witness(self, s, q, kind):
        """An element of the part close below ``s`` at radius r_q, or None."""
        raise NotImplementedError

    def positive_element(self):
        return None

    def index_sup(self, k):
        """sup of the members' values at grid index k (None: unbounded)."""
        raise NotImplementedError

    def neg(self):
        raise UnsupportedPartClass("%s has no reflection" % type(self).__name__)


class Interval(Part):
    """The interval of the ring between ``lo`` and ``hi``."""

    closed_under_scaling = True

    def __init__(self, lo, hi, lo_open=False, hi_open=False, gauge=None):
        gauge = gauge or (lo.gauge if isinstance(lo, GenNum) else default_gauge())
        super().__init__(gauge)
        self.lo, self.hi = _gn(lo, gauge), _gn(hi, gauge)
        self.lo_open, self.hi_open = lo_open, hi_open

    def source(self):
        f = lambda o: "open" if o else "closed"
        return "interval(%s, %s, %s, %s)" % (self.lo.source(), self.hi.source(),
                                             f(self.lo_open), f(self.hi_open))

    def candidate(self, kind):
        return self.hi, True

    def upper_check(self, s, kind):
        return leq(self.hi, s)

    def witness(self, s, q, kind):
        if not self.hi_open:
            return self.hi
        r = radius(kind, q, self.gauge)
        return self.hi - gn_min(r, self.hi - self.lo) / 2

    def positive_element(self):
        return self.witness(self.hi, 1, SHARP)

    def index_sup(self, k):
        return self.hi.value(k)

    def neg(self):
        return Interval(-self.hi, -self.lo, self.hi_open, self.lo_open, self.gauge)


class RealInterval(Part):
    """Only the real points of an interval with rational endpoints."""

    def __init__(self, a, b, lo_open=False, hi_open=False, gauge=None):
        super().__init__(gauge or default_gauge())
        self.a, self.b = mpq(a), mpq(b)
        self.lo_open, self.hi_open = lo_open, hi_open

    def source(self):
        f = lambda o: "open" if o else "closed"
        return "realinterval(%s, %s, %s, %s)" % (self.a, self.b, f(self.lo_open), f(self.hi_open))

    def candidate(self, kind):
        # in the sharp sense 1 - drho is still above every real point of (0, 1)
        return _const(self.b, self.gauge), kind is FERMAT or not self.hi_open

    def upper_check(self, s, kind):
        b = _const(self.b, self.gauge)
        v = leq(b, s)
        if v.is_true or not self.hi_open:
            return v
        lo = st_inf(s - b)
        if lo is None:
            return Verdict.unknown("no standard part for s - b")
        return Verdict(lo >= 0, {"st_inf": lo}, ["s bounds every real point below b iff st_inf(s - b) >= 0"])

    def witness(self, s, q, kind):
        if not self.hi_open:
            return _const(self.b, self.gauge)
        if kind is SHARP:
            return None
        return _const(max(self.b - mpq(1, 2 ** (q + 1)), (self.a + self.b) / 2), self.gauge)

    def positive_element(self):
        if self.b <= 0:
            return None
        return _const((max(self.a, 0) + self.b) / 2, self.gauge)

    def index_sup(self, k):
        return _const(self.b, self.gauge).value(k)

    def neg(self):
        return RealInterval(-self.b, -self.a, self.hi_open, self.lo_open, self.gauge)


class Points(Part):
    """The internal set generated by finitely many nets: at every index the
    set of their values.  Its supremum is the join of the points."""

    closed_under_scaling = True

    def __init__(self, points, gauge=None):
        gauge = gauge or (points[0].gauge if isinstance(points[0], GenNum) else default_gauge())
        super().__init__(gauge)
        self.points = [_gn(p, gauge) for p in points]
        self._join = None

    def source(self):
        return "points(%s)" % ", ".join(p.source() for p in self.points)

    @property
    def join(self):
        if self._join is None:
            self._join = _join(self.points)
        return self._join

    def candidate(self, kind):
        return self.join, True

    def upper_check(self, s, kind):
        return _all(leq(p, s) for p in self.points)

    def witness(self, s, q, kind):
        return self.join

    def positive_element(self):
        return self.join

    def index_sup(self, k):
        vals = [p.value(k) for p in self.points]
        best = vals[0]
        for v in vals[1:]:
            if is_poison(v) or is_poison(best):
                return v if is_poison(v) else best
            best = _vmax(best, v)
        return best

    def neg(self):
        return Points([-p for p in self.points], self.gauge)


class InterleavedPoint(Points):
    """One number glued from values on complementary index sets."""

    def __init__(self, pieces, gauge=None):
        gauge = gauge or default_gauge()
        self.pieces = [(name, _gn(v, gauge)) for name, v in pieces]
        names = [n for n, _ in self.pieces]
        if sorted(names) not in (["EVEN", "ODD"], ["ALL"]):
            raise GNSyntaxError("interleaved pieces must cover EVEN and ODD", 0)
        total = None
        for name, v in self.pieces:
            term = GenNum(Ind(name), gauge) * v
            total = term if total is None else total + term
        super().__init__([total], gauge)

    def source(self):
        return "points(%s)" % ", ".join("%s on %s" % (v.source(), n) for n, v in self.pieces)

    def neg(self):
        return InterleavedPoint([(n, -v) for n, v in self.pieces], self.gauge)


class SampledRange(Part):
    """An ordinary set known through samples, such as the values of a
    sequence at probe indices; ``hint`` is the expected supremum."""

    def __init__(self, members, hint=None, gauge=None, label="sampled"):
        gauge = gauge or members[0].gauge
        super().__init__(gauge)
        self.members = list(members)
        self.hint = hint
        self.label = label

    def source(self):
        return "sampled(%s)" % self.label

    def candidate(self, kind):
        return (self.hint if self.hint is not None else _join(self.members)), False

    def upper_check(self, s, kind):
        return _all(leq(m, s) for m in reversed(self.members))

    def witness(self, s, q, kind):
        r = radius(kind, q, self.gauge)
        for m in reversed(self.members):
            if leq(s - r, m).is_true:
                return m
        return self.members[-1]

    def positive_element(self):
        for m in reversed(self.members):
            if is_invertible_positive(m).is_true:
                return m
        return None

    def index_sup(self, k):
        vals = [m.value(k) for m in self.members]
        if self.hint is not None:
            vals.append(self.hint.value(k))
        best = vals[0]
        for v in vals[1:]:
            best = _vmax(best, v)
        return best

    def neg(self):
        return SampledRange([-m for m in self.members],
                            None if self.hint is None else -self.hint, self.gauge,
                            "-" + self.label)


class InternalSet(Part):
    """The internal set [A_eps] of an interval set net."""

    def __init__(self, setnet, gauge=None):
        super().__init__(gauge or default_gauge())
        self.setnet = as_setnet(setnet, self.gauge.sets)
        self._sup = None

    def source(self):
        return "internal(%s)" % self.setnet.source()

    @property
    def sup_net(self):
        if self._sup is None:
            self._sup = epswise_sup_internal(self.setnet, self.gauge)
        return self._sup

    def candidate(self, kind):
        return self.sup_net, True

    def upper_check(self, s, kind):
        return leq(self.sup_net, s)

    def witness(self, s, q, kind):
        return self.sup_net

    def positive_element(self):
        return self.sup_net

    def index_sup(self, k):
        return self.sup_net.value(k)


class DInf(Part):
    """All infinitesimals."""

    canned = ("a supremum s of the infinitesimals would be infinitesimal, "
              "but then 2s is an infinitesimal above it (doubling)")

    def source(self):
        return "DINF"

    def candidate(self, kind):
        return None, False

    def upper_check(self, s, kind):
        lo = st_inf(s)
        if lo is None:
            return Verdict.unknown("no standard part")
        return Verdict(lo > 0, {"st_inf": lo},
                       ["s bounds every infinitesimal iff st_inf(s) > 0"])

    def witness(self, s, q, kind):
        hi = st_sup(gn_abs(s))
        if kind is SHARP and hi == 0:
            return s - radius(kind, q, self.gauge)
        return _const(0, self.gauge)

    def positive_element(self):
        return GenNum(RHO, self.gauge)

    def index_sup(self, k):
        return None

    def neg(self):
        return self


class RecipN(Part):
    """{sign / n : n a positive hypernatural}."""

    def __init__(self, sign=1, gauge=None):
        super().__init__(gauge or default_gauge())
        self.sign = sign

    def source(self):
        return "recipN" if self.sign > 0 else "neg(recipN)"

    def candidate(self, kind):
        return _const(1 if self.sign > 0 else 0, self.gauge), True

    def upper_check(self, s, kind):
        return leq(_const(1 if self.sign > 0 else 0, self.gauge), s)

    def witness(self, s, q, kind):
        if self.sign > 0:
            return _const(1, self.gauge)
        n = rpi(2 / radius(kind, q, self.gauge))
        return -(1 / n)

    def positive_element(self):
        return _const(1, self.gauge) if self.sign > 0 else None

    def index_sup(self, k):
        return _const(1 if self.sign > 0 else 0, self.gauge).value(k)

    def neg(self):
        return RecipN(-self.sign, self.gauge)


class PowFamily(Part):
    """{sign * drho**(1/n) : n = 1, 2, ...} or, with ``real=True``,
    {sign * drho**r : r > 0 real}."""

    SAMPLES = 16

    def __init__(self, sign=1, real=False, gauge=None):
        super().__init__(gauge or default_gauge())
        self.sign, self.real = sign, real
        if sign > 0:
            what = "drho^r for real r > 0" if real else "drho^(1/n)"
            self.canned = ("%s increases towards 1 with no least upper bound: a supremum s "
                           "would satisfy s <= x + drho^q for some member x, yet a larger "
                           "member exceeds 2x" % what)

    def source(self):
        name = "powfamR" if self.real else "powfam"
        return name if self.sign > 0 else "neg(%s)" % name

    def _member(self, j):
        e = Num(mpq(1, 2 ** j)) if self.real else Num(mpq(1, j))
        return GenNum(RHO ** e, self.gauge)

    def _samples(self):
        return [self._member(j) for j in (range(0, self.SAMPLES) if self.real
                                          else range(1, self.SAMPLES + 1))]

    def candidate(self, kind):
        if self.sign > 0:
            return None, False
        if self.real:
            return _const(0, self.gauge), True
        return -GenNum(RHO, self.gauge), True

    def upper_check(self, s, kind):
        if self.sign > 0:
            v = _all(leq(m, s) for m in reversed(self._samples()))
            if v.is_true:
                v.diagnostics.append("checked on %d sampled members" % self.SAMPLES)
            return v
        return leq(self.candidate(kind)[0], s)

    def witness(self, s, q, kind):
        if self.sign > 0:
            return self._samples()[-1]
        if self.real:
            return -GenNum(RHO ** Num(q + 1), self.gauge)
        return -GenNum(RHO, self.gauge)

    def positive_element(self):
        return GenNum(RHO, self.gauge) if self.sign > 0 else None

    def index_sup(self, k):
        if self.sign > 0:
            return _const(1, self.gauge).value(k)
        return self.candidate(SHARP)[0].value(k)

    def neg(self):
        return PowFamily(-self.sign, self.real, self.gauge)


def _gn(x, gauge):
    if isinstance(x, GenNum):
        return x
    if isinstance(x, str):
        return GenNum(x, gauge)
    return _const(mpq(x), gauge)


def _vmax(a, b):
    with gmpy2.context(lv.context(1024)):
        return lv.vmax(a, b)


def _vmin(a, b):
    with gmpy2.context(lv.context(1024)):
        return lv.vmin(a, b)


# ---------------------------------------------------------------------------
# set descriptions

class SetDescr:
    def __init__(self, parts, gauge=None):
        self.parts = list(parts)
        self.gauge = gauge or (self.parts[0].gauge if self.parts else default_gauge())

    def source(self):
        if not self.parts:
            return "empty"
        return " | ".join(p.source() for p in self.parts)

    def __repr__(self):
        return "SetDescr(%s)" % self.source()

    def neg(self):
        return SetDescr([p.neg() for p in self.parts], self.gauge)

    def __neg__(self):
        return self.neg()

    def require_nonempty(self):
        if not self.parts:
            raise EmptySet("the set is empty")


_CALL = re.compile(r"\s*([A-Za-z_]+)\s*(?:\((.*)\))?\s*$", re.S)
_ON = re.compile(r"^(.*\S)\s+on\s+([A-Za-z_][A-Za-z_0-9]*)\s*$", re.S)


def parse_setdescr(src, gauge=None):
    """Parse e.g. ``interval(0,1,open,open) | points(2 on EVEN, 1/2 on ODD)``."""
    gauge = gauge or default_gauge()
    if src.strip() == "empty":
        return SetDescr([], gauge)
    parts = []
    depth, start = 0, 0
    items = []
    for i, ch in enumerate(src):
        depth += ch == "("
        depth -= ch == ")"
        if ch == "|" and depth == 0:
            items.append((src[start:i], start))
            start = i + 1
    items.append((src[start:], start))
    for text, off in items:
        parts.append(_parse_part(text, off, gauge))
    return SetDescr(parts, gauge)


def _flag(text, pos):
    t = text.strip()
    if t not in ("open", "closed"):
        raise GNSyntaxError("expected open or closed", pos)
    return t == "open"


def _parse_part(text, off, gauge):
    m = _CALL.match(text)
    if not m:
        raise GNSyntaxError("expected a set part", off)
    name, body = m.group(1), m.group(2)
    boff = off + (m.start(2) if body is not None else len(text))
    simple = {"DINF": lambda: DInf(gauge), "recipN": lambda: RecipN(1, gauge),
              "powfam": lambda: PowFamily(1, False, gauge),
              "powfamR": lambda: PowFamily(1, True, gauge)}
    if name in simple and body is None:
        return simple[name]()
    if body is None:
        raise GNSyntaxError("unknown set part %r" % name, off)
    args = _split_top(body, boff)
    if name == "neg":
        return _parse_part(body, boff, gauge).neg()
    if name == "internal":
        return InternalSet(body, gauge)
    if name in ("interval", "realinterval"):
        if len(args) not in (2, 4):
            raise GNSyntaxError("%s takes 2 or 4 arguments" % name, boff)
        lo_open = _flag(*args[2]) if len(args) == 4 else False
        hi_open = _flag(*args[3]) if len(args) == 4 else False
        if name == "interval":
            return Interval(_gn_at(args[0], gauge), _gn_at(args[1], gauge), lo_open, hi_open, gauge)
        a, b = (real_constant(_gn_at(x, gauge)) for x in args[:2])
        if a is None or b is None:
            raise GNSyntaxError("realinterval endpoints must be real constants", boff)
        return RealInterval(a, b, lo_open, hi_open, gauge)
    if name == "points":
        ons = [_ON.match(t) for t, _ in args]
        if any(ons):
            if not all(ons):
                raise GNSyntaxError("mix of plain and 'on' points", boff)
            return InterleavedPoint([(o.group(2), _gn_at((o.group(1), p), gauge))
                                     for o, (_, p) in zip(ons, args)], gauge)
        return Points([_gn_at(a, gauge) for a in args], gauge)
    raise GNSyntaxError("unknown set part %r" % name, off)


def _gn_at(arg, gauge):
    text, pos = arg
    try:
        return GenNum(text.strip(), gauge)
    except GNSyntaxError as exc:
        raise GNSyntaxError(str(exc).rsplit(" at position", 1)[0], pos + exc.position)


def as_setdescr(S, gauge=None):
    if isinstance(S, SetDescr):
        return S
    if isinstance(S, Part):
        return SetDescr([S], S.gauge)
    return parse_setdescr(S, gauge)


# ---------------------------------------------------------------------------
# supremum conditions

def _qmax(S, q_max):
    return q_max or S.gauge.cfg.sup_qmax


def upper_bound_check(S, s, kind=SHARP):
    """Condition (a): every element of S is <= s."""
    S = as_setdescr(S)
    out = Verdict(True)
    for p in S.parts:
        v = p.upper_check(s, kind)
        if v.is_false:
            return Verdict(False, {"part": p.source()}, v.diagnostics)
        out = out & v
    return out


def approach_check(S, s, kind=SHARP, q_max=None):
    """Condition (b): for q = 1..q_max an element above s - r_q."""
    S = as_setdescr(S)
    q_max = _qmax(S, q_max)
    witnesses = {}
    # an element >= s settles every q at once
    for p in S.parts:
        w = p.witness(s, q_max, kind)
        if w is not None and leq(s, w).is_true:
            for q in range(1, q_max + 1):
                witnesses[q] = p.source()
            return Verdict(True, {"checked_q": q_max, "witnesses": witnesses},
                           ["%s attains the bound" % p.source()])
    last = None
    for q in range(1, q_max + 1):
        r = radius(kind, q, S.gauge)
        order = S.parts if last is None else [last] + [p for p in S.parts if p is not last]
        found, unknown, holes = None, False, []
        for p in order:
            w = p.witness(s, q, kind)
            if w is None:
                holes.append({"part": p.source(), "reason": "no element within r_q"})
                continue
            v = leq(s - r, w)
            if v.is_true:
                found = p
                break
            if v.is_unknown:
                unknown = True
            else:
                holes.append({"part": p.source(), "L": v.witness.get("L")})
        if found is None:
            if unknown:
                return Verdict.unknown("condition (b) undecided at q = %d" % q)
            return Verdict(False, {"failed_q": q, "holes": holes},
                           ["no element of S lies above s - r_%d" % q])
        witnesses[q] = found.source()
        last = found
    return Verdict(True, {"checked_q": q_max, "witnesses": witnesses},
                   ["verified for q = 1..%d" % q_max])


def check_sup_candidate(S, s, kind=SHARP, q_max=None):
    """Both supremum conditions, (b) up to ``q_max``."""
    S = as_setdescr(S)
    S.require_nonempty()
    a = upper_bound_check(S, s, kind)
    if a.is_false:
        return Verdict(False, dict(a.witness, condition="a"), a.diagnostics)
    b = approach_check(S, s, kind, q_max)
    if b.is_false:
        return Verdict(False, dict(b.witness, condition="b"), b.diagnostics)
    return a & b


class SupReport:
    """``result`` is one of Sup, NoSup, LubOnly, Unknown."""

    def __init__(self, result, value=None, reason=None, checked_q=0, witnesses=None,
                 diagnostics=()):
        self.result = result
        self.value = value
        self.reason = reason
        self.checked_q = checked_q
        self.witnesses = witnesses or {}
        self.diagnostics = list(diagnostics)

    @property
    def exists(self):
        return self.result == "Sup"

    @property
    def status(self):
        return {"Sup": "true", "NoSup": "false", "LubOnly": "false"}.get(self.result, "unknown")

    def to_dict(self):
        return {"result": self.result,
                "value": None if self.value is None else self.value.source(),
                "reason": self.reason, "checked_q": self.checked_q,
                "witnesses": {str(k): v for k, v in sorted(self.witnesses.items())}}

    def negated(self):
        v = None if self.value is None else -self.value
        return SupReport(self.result, v, self.reason, self.checked_q, self.witnesses,
                         self.diagnostics)

    def __repr__(self):
        v = "" if self.value is None else "(%s)" % self.value.source()
        return "SupReport(%s%s)" % (self.result, v)


def _candidate(S, kind):
    cands, lub, canned = [], True, []
    for p in S.parts:
        c, is_lub = p.candidate(kind)
        if c is None:
            canned.append(p)
        else:
            cands.append(c)
            lub = lub and is_lub
    return cands, lub, canned


def find_sup(S, kind=SHARP, q_max=None):
    S = as_setdescr(S)
    S.require_nonempty()
    q_max = _qmax(S, q_max)
    cands, lub, canned = _candidate(S, kind)
    if not cands:
        return SupReport("NoSup", reason=canned[0].canned)
    s = _join(cands)
    v = check_sup_candidate(S, s, kind, q_max)
    if v.is_true:
        return SupReport("Sup", s, None, q_max, v.witness.get("witnesses"), v.diagnostics)
    if v.is_unknown:
        return SupReport("Unknown", s, "candidate could not be verified", 0, None, v.diagnostics)
    w = v.witness
    if w.get("condition") == "a":
        bad = [p for p in canned if p.source() == w.get("part")]
        reason = bad[0].canned if bad else "candidate is not an upper bound"
        return SupReport("NoSup" if bad else "Unknown", None, reason, 0, None, v.diagnostics)
    q = w.get("failed_q")
    if lub and not canned:
        holes = [h for h in w.get("holes", []) if h.get("L")]
        where = ", ".join("%s misses it on %s" % (h["part"], h["L"]) for h in holes)
        reason = ("least upper bound is not approached by any single part at q = %d%s"
                  % (q, ": " + where if where else ""))
        return SupReport("LubOnly", s, reason, q - 1, None, v.diagnostics)
    reason = "no element of S approaches the bound at q = %d" % q
    for p in canned:
        reason = p.canned
    return SupReport("NoSup", None, reason, q - 1, None, v.diagnostics)


def find_inf(S, kind=SHARP, q_max=None):
    """inf(S) = -sup(-S)."""
    S = as_setdescr(S)
    return find_sup(S.neg(), kind, q_max).negated()


# ---------------------------------------------------------------------------
# ε-wise suprema and the σ_ε(S) construction

def epswise_sup_internal(K, gauge=None):
    """Per-index maxima of a sharply bounded net of compact interval unions."""
    gauge = gauge or default_gauge()
    K = as_setnet(K, gauge.sets)
    for i, (lo, hi) in zip(K.intervals, K.ends(gauge)):
        if lo is None or hi is None:
            raise NotSharplyBounded("interval %s is unbounded" % i.source())
        if not (i.lo_closed and i.hi_closed):
            raise NotSharplyBounded("interval %s is not closed" % i.source())
        for e in (lo, hi):
            if is_moderate(e).is_false:
                raise NotSharplyBounded("endpoint %s is not moderate" % e.source())
    ends = K.ends(gauge)

    def at(k):
        best = None
        for (lo, hi), ok in zip(ends, K.nonempty(gauge, k)):
            if ok is None:
                return Poison("endpoint undefined")
            if ok:
                v = hi.value(k)
                best = v if best is None else _vmax(best, v)
        return best if best is not None else Poison("empty at this index")
    return GenNum(table=at, gauge=gauge, label="eps-wise sup of %s" % K.source())


class UpperBoundFamily:
    """Finitely many upper bounds; ``choosers[(i, j)]`` optionally fixes the
    representative of the part-j supremum clamped below bound i."""

    def __init__(self, members, choosers=None):
        if not members:
            raise EmptyFamily("no upper bounds given")
        self.members = list(members)
        self.choosers = dict(choosers or {})


def auto_upper_bounds(S, kind=SHARP, extra=3):
    """Part candidates, their join and the join plus drho**q."""
    S = as_setdescr(S)
    cands, _, canned = _candidate(S, kind)
    pool = list(cands)
    if cands:
        j = _join(cands)
        pool.append(j)
        pool.extend(j + radius(SHARP, q, S.gauge) for q in range(1, extra + 1))
    if canned:
        pool.append(_const(1, S.gauge))
    out = []
    for u in pool:
        if upper_bound_check(S, u, kind).is_true:
            out.append(u)
    return out


def sigma_net(S, U=None, kind=SHARP):
    """σ_ε(S) = min over u in U of the part-wise sup of s_ε(u) = min(s_ε, u_ε).

    Returns (σ, moderateness Verdict, diagnostics)."""
    S = as_setdescr(S)
    S.require_nonempty()
    diag = []
    if U is None:
        U = UpperBoundFamily(auto_upper_bounds(S, kind) or [None][:0])
    elif not isinstance(U, UpperBoundFamily):
        U = UpperBoundFamily([_gn(u, S.gauge) for u in U])
    bounds = []
    for i, u in enumerate(U.members):
        u = _gn(u, S.gauge)
        if upper_bound_check(S, u, kind).is_true:
            bounds.append((i, u))
        else:
            diag.append("dropped %s: not an upper bound" % u.source())
    if not bounds:
        raise EmptyFamily("no member of the family is an upper bound of S")
    for (i, j), rep in U.choosers.items():
        u = _gn(U.members[i], S.gauge)
        for k in S.gauge.grid.indices:
            a, b = rep.value(k), u.value(k)
            if is_poison(a) or is_poison(b):
                continue
            with gmpy2.context(lv.context(1024)):
                d = lv.sub(a, b)
            if d.sign > 0 and not d.fuzzy:
                raise ClampViolation("chosen representative exceeds %s at index %d"
                                     % (u.source(), k), index=k, bound=i, part=j)

    def inner(i, u, k):
        uk = u.value(k)
        best = None
        for j, p in enumerate(S.parts):
            rep = U.choosers.get((i, j))
            if rep is not None:
                v = rep.value(k)
            else:
                v = p.index_sup(k)
                v = uk if v is None else _vmin(v, uk)
            if is_poison(v):
                return v
            best = v if best is None else _vmax(best, v)
        return best

    def at(k):
        vals = [inner(i, u, k) for i, u in bounds]
        bad = [v for v in vals if is_poison(v)]
        if bad:
            return bad[0]
        best = vals[0]
        for v in vals[1:]:
            best = _vmin(best, v)
        return best
    sigma = GenNum(table=at, gauge=S.gauge, label="sigma_eps(%s)" % S.source())
    return sigma, is_moderate(sigma), diag


class HansResult:
    def __init__(self, ok, us, ss, limit, blocking_q, diagnostics=()):
        self.ok, self.us, self.ss, self.limit = ok, us, ss, limit
        self.blocking_q = blocking_q
        self.diagnostics = list(diagnostics)

    def to_dict(self):
        return {"ok": self.ok, "blocking_q": self.blocking_q,
                "limit": None if self.limit is None else self.limit.source(),
                "u": [u.source() for u in self.us], "s": [s.source() for s in self.ss]}

    def __repr__(self):
        return "HansResult(ok=%s, blocking_q=%s)" % (self.ok, self.blocking_q)


def hans_sequences(S, U=None, q_max=None, kind=SHARP):
    """Pairs (u_q, s_q), u_q an upper bound and s_q in S, with u_q - s_q <= r_q."""
    S = as_setdescr(S)
    S.require_nonempty()
    q_max = _qmax(S, q_max)
    if U is None:
        U = auto_upper_bounds(S, kind)
    else:
        U = [_gn(u, S.gauge) for u in (U.members if isinstance(U, UpperBoundFamily) else U)]
        U = [u for u in U if upper_bound_check(S, u, kind).is_true]
    if not U:
        return HansResult(False, [], [], None, 1, ["no upper bound available"])
    pairs = [(u, p) for u in U for p in S.parts]
    us, ss = [], []
    last = None
    for q in range(1, q_max + 1):
        r = radius(kind, q, S.gauge)
        order = pairs if last is None else [last] + [x for x in pairs if x is not last]
        hit = None
        for u, p in order:
            s = p.witness(u, q, kind)
            if s is not None and leq(u - s, r).is_true:
                hit = (u, p)
                break
        if hit is None:
            return HansResult(False, us, ss, None, q,
                              ["no pair (u, s) with u - s <= r_%d" % q])
        last = hit
        us.append(hit[0])
        ss.append(hit[1].witness(hit[0], q, kind))
    return HansResult(True, us, ss, us[-1], None, ["pairs found for q = 1..%d" % q_max])


# ---------------------------------------------------------------------------
# Archimedean upper bounds

def is_AUB(M, S, n_max=64, kind=SHARP, q_max=8):
    """(Verdict, order): M >= S and M < n*s for some s in S, n least."""
    S = as_setdescr(S)
    S.require_nonempty()
    M = _gn(M, S.gauge)
    if not any(p.positive_element() is not None and
               is_invertible_positive(p.positive_element()).is_true for p in S.parts):
        raise NoPositiveElement("S has no element that is provably > 0")
    a = upper_bound_check(S, M, kind)
    if not a.is_true:
        return Verdict(a.value, a.witness, ["M is not an upper bound"] + a.diagnostics), None
    cands, _, canned = _candidate(S, kind)
    u = _join(cands) if cands and not canned else None
    probes = []
    for p in S.parts:
        pe = p.positive_element()
        base = u if u is not None else M
        probes.extend(w for w in (p.witness(base, q, kind) for q in range(1, q_max + 1))
                      if w is not None)
        if pe is not None:
            probes.append(pe)
    for n in range(1, n_max + 1):
        if n == 1:
            continue  # M >= s for every s in S
        if u is not None and leq(n * u, M).is_true:
            continue  # every s <= u gives n*s <= M
        for s in probes:
            v = lt(M, n * s)
            if v.is_true:
                return Verdict(True, {"order": n, "s": s.source()},
                               ["M < %d * s" % n]), n
        return Verdict.unknown("order %d neither certified nor excluded" % n), None
    if u is not None:
        ratio = st_inf(M / u)
        if ratio == float("inf"):
            return Verdict(False, {"n_max": n_max},
                           ["M / sup S is infinite: no natural n works"]), None
    return Verdict.unknown("no order up to %d" % n_max), None


# ---------------------------------------------------------------------------
# transforms

def _scale_part(lam, p):
    if isinstance(p, InterleavedPoint):
        return InterleavedPoint([(n, lam * v) for n, v in p.pieces], p.gauge)
    if isinstance(p, Points):
        return Points([lam * x for x in p.points], p.gauge)
    if isinstance(p, Interval):
        if is_invertible_positive(lam).is_true:
            return Interval(lam * p.lo, lam * p.hi, p.lo_open, p.hi_open, p.gauge)
        if is_invertible_positive(-lam).is_true:
            return Interval(lam * p.hi, lam * p.lo, p.hi_open, p.lo_open, p.gauge)
        raise UnsupportedPartClass("scaling an interval needs a factor of definite sign")
    c = real_constant(lam)
    if c == -1:
        return p.neg()
    if isinstance(p, RealInterval) and c is not None and c != 0:
        if c > 0:
            return RealInterval(c * p.a, c * p.b, p.lo_open, p.hi_open, p.gauge)
        return RealInterval(c * p.b, c * p.a, p.hi_open, p.lo_open, p.gauge)
    raise UnsupportedPartClass("%s is not closed under scaling" % p.source())


def set_scale(lam, S):
    S = as_setdescr(S)
    lam = _gn(lam, S.gauge)
    return SetDescr([_scale_part(lam, p) for p in S.parts], S.gauge)


def _add_parts(a, b):
    if isinstance(a, Interval) and isinstance(b, Interval):
        return [Interval(a.lo + b.lo, a.hi + b.hi, a.lo_open or b.lo_open,
                         a.hi_open or b.hi_open, a.gauge)]
    if isinstance(a, Points) and isinstance(b, Points):
        return [Points([x + y for x in a.points for y in b.points], a.gauge)]
    if isinstance(a, Interval) and isinstance(b, Points):
        a, b = b, a
    if isinstance(a, Points) and not isinstance(a, InterleavedPoint) and isinstance(b, Interval):
        # a finite union of translates
        return [Interval(c + b.lo, c + b.hi, b.lo_open, b.hi_open, b.gauge) for c in a.points]
    raise UnsupportedPartClass("sum of %s and %s" % (a.source(), b.source()))


def set_add(A, B):
    A, B = as_setdescr(A), as_setdescr(B)
    return SetDescr([c for a in A.parts for b in B.parts for c in _add_parts(a, b)], A.gauge)


def _nonneg(p):
    if isinstance(p, Interval):
        return leq(_const(0, p.gauge), p.lo).is_true
    if isinstance(p, Points):
        return all(leq(_const(0, p.gauge), x).is_true for x in p.points)
    return False


def _mul_parts(a, b):
    if not (_nonneg(a) and _nonneg(b)):
        raise UnsupportedPartClass("products need parts of non-negative numbers")
    if isinstance(a, Interval) and isinstance(b, Interval):
        return [Interval(a.lo * b.lo, a.hi * b.hi, a.lo_open or b.lo_open,
                         a.hi_open or b.hi_open, a.gauge)]
    if isinstance(a, Points) and isinstance(b, Points):
        return [Points([x * y for x in a.points for y in b.points], a.gauge)]
    if isinstance(a, Interval) and isinstance(b, Points):
        a, b = b, a
    if isinstance(a, Points) and not isinstance(a, InterleavedPoint) and isinstance(b, Interval):
        if not all(is_invertible_positive(c).is_true for c in a.points):
            raise UnsupportedPartClass("scaling by a non-invertible point")
        return [Interval(c * b.lo, c * b.hi, b.lo_open, b.hi_open, b.gauge) for c in a.points]
    raise UnsupportedPartClass("product of %s and %s" % (a.source(), b.source()))


def set_mul(A, B):
    A, B = as_setdescr(A), as_setdescr(B)
    return SetDescr([c for a in A.parts for b in B.parts for c in _mul_parts(a, b)], A.gauge)


__all__ = [
    "SHARP", "FERMAT", "radius", "Part", "Interval", "RealInterval", "Points",
    "InterleavedPoint", "SampledRange", "InternalSet", "DInf", "RecipN", "PowFamily",
    "SetDescr", "parse_setdescr", "as_setdescr", "upper_bound_check", "approach_check",
    "check_sup_candidate", "SupReport", "find_sup", "find_inf", "epswise_sup_internal",
    "UpperBoundFamily", "auto_upper_bounds", "sigma_net", "HansResult", "hans_sequences",
    "is_AUB", "set_scale", "set_add", "set_mul",
]
