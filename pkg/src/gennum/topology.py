"""Sharp and Fermat balls, interval set nets and internal membership.

A :class:`SetNet` is a per-index finite union of intervals whose endpoints are
nets.  Distances to such a set and to its complement have closed forms, which
is all the membership tests below need.  An interval whose endpoints come out
in the wrong order at some index is empty there.
"""

import enum
import re

import gmpy2
from gmpy2 import mpq

from . import logval as lv
from .errors import BadRadius, GNSyntaxError
from .logval import NetValue
from .netlang import (Node, Poison, Verdict, cofinal_members, from_mask, is_poison,
                      parse_net, to_source)
from .ring_core import (GenNum, gn_abs, is_invertible_positive, is_moderate,
                        is_negligible, lt, st_sup, gn_eq)


class RadiiKind(enum.Enum):
    SHARP = "sharp"
    FERMAT = "fermat"

    def check_radius(self, r, gauge=None):
        """Raise BadRadius unless ``r`` is a radius of this kind."""
        if self is RadiiKind.FERMAT:
            q = real_constant(r)
            if q is None:
                raise BadRadius("a Fermat radius must be a positive real constant, got %s" % _src(r))
            if q <= 0:
                raise BadRadius("radius %s is not positive" % q)
            return q
        r = _as_gn(r, gauge)
        v = is_invertible_positive(r)
        if not v.is_true:
            raise BadRadius("sharp radius %s is not invertible positive (%s)" % (r.source(), v.status))
        return r


def _src(r):
    return r.source() if isinstance(r, GenNum) else str(r)


def _as_gn(x, gauge=None):
    if isinstance(x, GenNum):
        return x
    return GenNum(x if isinstance(x, (str, Node)) else str(mpq(x)), gauge)


def real_constant(r):
    """The rational value of ``r`` if it names a real constant, else None."""
    if isinstance(r, GenNum):
        if r.expr is None:
            return None
        node = r.expr
    elif isinstance(r, (str, Node)):
        node = parse_net(r) if isinstance(r, str) else r
    else:
        try:
            return mpq(r) if not isinstance(r, float) else mpq(str(r))
        except (TypeError, ValueError):
            return None
    if node.free_symbols() or node.set_names():
        return None
    v = GenNum(node).value(1)
    if is_poison(v):
        return None
    return v.exact if v.exact is not None else mpq(v.to_float())


def ball_contains(kind, c, r, x):
    """Is ``x`` in the open ball of centre ``c`` and radius ``r``?"""
    x = _as_gn(x)
    c = _as_gn(c, x.gauge)
    d = gn_abs(x - c)
    if kind is RadiiKind.SHARP:
        r = kind.check_radius(r, x.gauge)
        return lt(d, r)
    rq = kind.check_radius(r)
    s = st_sup(d)
    if s is None:
        return Verdict.unknown("standard part of |x - c| not available")
    ok = s < float(rq)
    return Verdict(ok, {"st_sup": s, "radius": float(rq)},
                   ["st_sup |x - c| = %s vs radius %s" % (s, rq)])


# ---------------------------------------------------------------------------
# interval set nets

class Interval:
    """Endpoints are nodes (None for an infinite end); flags say closed."""

    __slots__ = ("lo", "hi", "lo_closed", "hi_closed")

    def __init__(self, lo, hi, lo_closed=True, hi_closed=True):
        self.lo = _node(lo)
        self.hi = _node(hi)
        self.lo_closed = lo_closed and self.lo is not None
        self.hi_closed = hi_closed and self.hi is not None

    def source(self):
        name = {(True, True): "closed", (False, False): "open",
                (True, False): "closed_open", (False, True): "open_closed"}
        lo = "-inf" if self.lo is None else to_source(self.lo)
        hi = "inf" if self.hi is None else to_source(self.hi)
        return "%s(%s, %s)" % (name[self.lo_closed, self.hi_closed], lo, hi)


def _node(e):
    if e is None or isinstance(e, Node):
        return e
    return parse_net(e) if isinstance(e, str) else parse_net(str(mpq(e)))


class SetNet:
    """A net of finite unions of intervals."""

    def __init__(self, intervals):
        self.intervals = list(intervals)
        if not self.intervals:
            raise ValueError("a SetNet needs at least one interval")
        self._ends = {}

    def source(self):
        if len(self.intervals) == 1:
            return self.intervals[0].source()
        return "union(%s)" % ", ".join(i.source() for i in self.intervals)

    def __repr__(self):
        return "SetNet(%s)" % self.source()

    def ends(self, gauge):
        """Endpoints as GenNums over ``gauge`` (None for infinite ends)."""
        key = gauge.serial
        e = self._ends.get(key)
        if e is None:
            e = self._ends[key] = [
                (None if i.lo is None else GenNum(i.lo, gauge),
                 None if i.hi is None else GenNum(i.hi, gauge)) for i in self.intervals]
        return e

    def nonempty(self, gauge, k):
        """Indices (into ``intervals``) of the intervals non-empty at grid index k."""
        out = []
        for i, (lo, hi) in zip(self.intervals, self.ends(gauge)):
            if lo is None or hi is None:
                out.append(True)
                continue
            a, b = lo.value(k), hi.value(k)
            if is_poison(a) or is_poison(b):
                out.append(None)
                continue
            c = _cmp(a, b)
            out.append(c < 0 or (c == 0 and i.lo_closed and i.hi_closed))
        return out

    def contains_at(self, x, k):
        """Exact membership of the representative value x_k in A_k."""
        v = x.value(k)
        if is_poison(v):
            return None
        hit = False
        for i, (lo, hi), ok in zip(self.intervals, self.ends(x.gauge), self.nonempty(x.gauge, k)):
            if ok is None:
                return None
            if not ok:
                continue
            if lo is not None:
                c = _cmp(v, lo.value(k))
                if c < 0 or (c == 0 and not i.lo_closed):
                    continue
            if hi is not None:
                c = _cmp(v, hi.value(k))
                if c > 0 or (c == 0 and not i.hi_closed):
                    continue
            hit = True
        return hit


def _cmp(a, b):
    with gmpy2.context(lv.context(1024)):
        d = lv.sub(a, b)
    return 0 if d.fuzzy else d.sign


_KINDS = {"closed": (True, True), "open": (False, False),
          "closed_open": (True, False), "open_closed": (False, True)}


def _split_top(text, offset):
    """Split on commas at paren depth 0; returns [(piece, start offset)]."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GNSyntaxError("unbalanced ')'", offset + i)
        elif ch == "," and depth == 0:
            out.append((text[start:i], offset + start))
            start = i + 1
    if depth:
        raise GNSyntaxError("unbalanced '('", offset + len(text))
    out.append((text[start:], offset + start))
    return out


_CALL = re.compile(r"\s*([A-Za-z_]+)\s*\((.*)\)\s*$", re.S)


def _endpoint(text, pos, sets):
    t = text.strip()
    if t in ("inf", "+inf", "-inf"):
        return None
    try:
        return parse_net(t, sets)
    except GNSyntaxError as exc:
        raise GNSyntaxError(str(exc).rsplit(" at position", 1)[0],
                            pos + (len(text) - len(text.lstrip())) + exc.position)


def parse_setnet(src, sets=None):
    """Parse ``union( closed(0, 1+eps), open(2, 3) )`` and single intervals."""
    m = _CALL.match(src)
    if not m:
        raise GNSyntaxError("expected interval(...) or union(...)", 0)
    name, body = m.group(1), m.group(2)
    off = m.start(2)
    if name == "union":
        items = [p for p in _split_top(body, off)]
        return SetNet([_parse_interval(t, o, sets) for t, o in items])
    return SetNet([_parse_interval(src, 0, sets)])


def _parse_interval(text, off, sets):
    m = _CALL.match(text)
    if not m or m.group(1) not in _KINDS and m.group(1) != "point":
        raise GNSyntaxError("expected closed/open/closed_open/open_closed/point(...)", off)
    args = _split_top(m.group(2), off + m.start(2))
    if m.group(1) == "point":
        if len(args) != 1:
            raise GNSyntaxError("point takes one argument", off)
        e = _endpoint(args[0][0], args[0][1], sets)
        return Interval(e, e, True, True)
    if len(args) != 2:
        raise GNSyntaxError("an interval takes two endpoints", off)
    lc, hc = _KINDS[m.group(1)]
    lo = _endpoint(args[0][0], args[0][1], sets)
    hi = _endpoint(args[1][0], args[1][1], sets)
    return Interval(lo, hi, lc, hc)


def as_setnet(A, sets=None):
    return A if isinstance(A, SetNet) else parse_setnet(A, sets)


def closed_ball(c, r):
    c, r = _node(c), _node(r)
    return SetNet([Interval(c - r, c + r, True, True)])


def open_ball(c, r):
    c, r = _node(c), _node(r)
    return SetNet([Interval(c - r, c + r, False, False)])


# ---------------------------------------------------------------------------
# distances

_INF_DIST = "empty"


def _gaps(x, A):
    """Per interval: GenNums (x - lo, hi - x), None for an infinite end."""
    return [(None if lo is None else x - lo, None if hi is None else hi - x)
            for lo, hi in A.ends(x.gauge)]


def distance_net(x, A):
    """The net d(x_eps, A_eps) as a GenNum."""
    x = _as_gn(x)
    A = as_setnet(A, x.gauge.sets)
    gaps = _gaps(x, A)

    def at(k):
        best = None
        for (below, above), ok in zip(gaps, A.nonempty(x.gauge, k)):
            if ok is None:
                return Poison("endpoint undefined")
            if not ok:
                continue
            d = NetValue.zero()
            if below is not None:
                v = below.value(k)
                if is_poison(v):
                    return v
                if v.sign < 0:
                    d = lv.neg(v)
            if above is not None:
                v = above.value(k)
                if is_poison(v):
                    return v
                if v.sign < 0:
                    d = lv.neg(v)
            best = d if best is None else _vmin(best, d)
        return best if best is not None else Poison("empty set at this index")
    return GenNum(table=at, gauge=x.gauge)


def _vmin(a, b):
    with gmpy2.context(lv.context(1024)):
        return lv.vmin(a, b)


def complement_distance_net(x, A):
    """The net d(x_eps, complement of A_eps); intervals touching or overlapping
    at an index are merged into one component first."""
    x = _as_gn(x)
    A = as_setnet(A, x.gauge.sets)
    gaps = _gaps(x, A)

    def at(k):
        if not A.contains_at(x, k):
            return NetValue.zero()
        flags = A.nonempty(x.gauge, k)
        live = [j for j, ok in enumerate(flags) if ok]
        # grow the component around x: any interval reaching into it joins
        comp = {j for j in live if _holds(A, x, gaps, j, k)}
        changed = True
        while changed:
            changed = False
            for j in live:
                if j not in comp and any(_touch(A, x.gauge, i, j, k) for i in comp):
                    comp.add(j)
                    changed = True
        lows = [gaps[j][0] for j in comp]
        highs = [gaps[j][1] for j in comp]
        if any(g is None for g in lows):
            left = None
        else:
            left = max((g.value(k) for g in lows), key=_key)
        if any(g is None for g in highs):
            right = None
        else:
            right = max((g.value(k) for g in highs), key=_key)
        sides = [v for v in (left, right) if v is not None]
        if not sides:
            return Poison(_INF_DIST)
        return sides[0] if len(sides) == 1 else _vmin(*sides)
    return GenNum(table=at, gauge=x.gauge)


def _key(v):
    return lv._lm_key(v.logmag) if v.sign > 0 else (-1,)


def _holds(A, x, gaps, j, k):
    i = A.intervals[j]
    below, above = gaps[j]
    if below is not None:
        s = below.value(k).sign
        if s < 0 or (s == 0 and not i.lo_closed):
            return False
    if above is not None:
        s = above.value(k).sign
        if s < 0 or (s == 0 and not i.hi_closed):
            return False
    return True


def _touch(A, gauge, i, j, k):
    """Do intervals i and j overlap or share an endpoint that one contains?"""
    a, b = A.intervals[i], A.intervals[j]
    (alo, ahi), (blo, bhi) = A.ends(gauge)[i], A.ends(gauge)[j]

    def meets(lo_int, lo, hi_int, hi):
        # does [.., hi] of one reach [lo, ..] of the other?
        if lo is None or hi is None:
            return True
        c = _cmp(lo.value(k), hi.value(k))
        return c < 0 or (c == 0 and (lo_int.lo_closed or hi_int.hi_closed))
    return meets(b, blo, a, ahi) and meets(a, alo, b, bhi)


# ---------------------------------------------------------------------------
# membership

def internal_member(x, A):
    """x belongs to the internal set [A_eps]: the distance net is negligible."""
    x = _as_gn(x)
    v = is_negligible(distance_net(x, A))
    return Verdict(v.value, v.witness, ["distance to A: " + d for d in v.diagnostics])


def strongly_internal_member(x, A):
    """x strongly belongs to [A_eps]: d(x, A^c) exceeds some power of rho."""
    x = _as_gn(x)
    A = as_setnet(A, x.gauge.sets)
    d = complement_distance_net(x, A)
    dv = [d.value(k) for k in x.grid.tail]
    if all(is_poison(v) and v.reason == _INF_DIST for v in dv):
        return Verdict(True, {"complement": "empty"}, ["A is the whole line"])
    m = is_moderate(d)
    if m.is_false:
        return Verdict.unknown("distance to the complement is not moderate")
    v = is_invertible_positive(d)
    return Verdict(v.value, v.witness, ["distance to complement: " + s for s in v.diagnostics])


def nearest_representative(x, A):
    """Per index, the point of the closure of A_eps nearest to x_eps."""
    x = _as_gn(x)
    A = as_setnet(A, x.gauge.sets)
    ends = A.ends(x.gauge)
    gaps = _gaps(x, A)

    def at(k):
        v = x.value(k)
        best, pick = None, v
        for (lo, hi), (below, above), ok in zip(ends, gaps, A.nonempty(x.gauge, k)):
            if not ok:
                continue
            d, p = NetValue.zero(), v
            if below is not None and below.value(k).sign < 0:
                d, p = lv.neg(below.value(k)), lo.value(k)
            elif above is not None and above.value(k).sign < 0:
                d, p = lv.neg(above.value(k)), hi.value(k)
            if best is None or _cmp(d, best) < 0:
                best, pick = d, p
        return pick
    return GenNum(table=at, gauge=x.gauge)


def internal_dichotomy(x, A):
    """('IN' | 'IN_COMPLEMENT' | 'SPLIT' | 'UNKNOWN', L or None, diagnostics)."""
    x = _as_gn(x)
    A = as_setnet(A, x.gauge.sets)
    grid = x.grid
    mem = {k: A.contains_at(x, k) for k in grid.tail}
    if any(v is None for v in mem.values()):
        bad = [k for k, v in mem.items() if v is None]
        if cofinal_members(bad, grid):
            return "UNKNOWN", None, ["evaluation poisoned on a cofinal set"]
    Lk = [k for k, v in mem.items() if v]
    Lc = [k for k, v in mem.items() if v is False]
    inside = internal_member(x, A)
    if inside.is_true:
        return "IN", None, inside.diagnostics
    outside = is_negligible(complement_distance_net(x, A))
    if outside.is_true and not cofinal_members(Lk, grid):
        return "IN_COMPLEMENT", None, ["x lies in the complement from some index on"]
    if cofinal_members(Lk, grid) and cofinal_members(Lc, grid):
        L, Lcs = from_mask(grid, Lk), from_mask(grid, Lc)
        a = is_negligible(distance_net(x, A), L)
        b = is_negligible(complement_distance_net(x, A), Lcs)
        if a.is_true and b.is_true:
            return "SPLIT", L, ["x in A on %s, in the complement on %s" % (L.name, Lcs.name)]
    if outside.is_true:
        return "IN_COMPLEMENT", None, outside.diagnostics
    return "UNKNOWN", None, inside.diagnostics + outside.diagnostics


def representative_agrees(x, A):
    """Cross-check of internal_member by the nearest-point representative."""
    x = _as_gn(x)
    return gn_eq(nearest_representative(x, A), x)


__all__ = [
    "RadiiKind", "Interval", "SetNet", "parse_setnet", "as_setnet", "closed_ball", "open_ball",
    "ball_contains", "distance_net", "complement_distance_net", "internal_member",
    "strongly_internal_member", "internal_dichotomy", "nearest_representative",
    "representative_agrees", "real_constant",
]
