"""Net expression language, epsilon grid, gauges, index sets and verdicts.

Nets ``eps -> x_eps`` are written in a small arithmetic language::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | atom ['^' factor]
    atom   := NUMBER | eps | rho | drho | n | FUNC '(' expr [',' expr] ')'
            | ind '(' SETNAME ')' | '(' expr ')'

``drho`` is the same symbol as ``rho``.  Evaluation happens on a finite
geometric grid ``eps_k = base**-k`` in sign/log-magnitude form (see
:mod:`gennum.logval`), escalating the working precision when cancellation
eats the mantissa.
"""

import itertools
import re
import weakref

import gmpy2
from gmpy2 import mpfr, mpq

from . import logval as lv
from .config import DEFAULT
from .errors import DomainError, GNError, GNSyntaxError, NotAGauge, UnknownSymbol
from .logval import Imprecise, NetValue

FUNCS = {"exp": 1, "log": 1, "sin": 1, "abs": 1, "rpi": 1, "min": 2, "max": 2,
         "fact": 1}
SYMBOLS = ("eps", "rho", "n")

_serial = itertools.count(1)


# ---------------------------------------------------------------------------
# AST

class _Interned(type):
    """Hash-consing: structurally equal nodes are the same object."""

    def __call__(cls, *args):
        node = super().__call__(*args)
        key = (cls, node._fields())
        found = _NODES.get(key)
        if found is not None:
            return found
        _NODES[key] = node
        return node


_NODES = weakref.WeakValueDictionary()


class Node(metaclass=_Interned):
    __slots__ = ("_h", "__weakref__")
    prec = 99

    def __eq__(self, other):
        return self is other

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return self._h

    def _fields(self):
        raise NotImplementedError

    def children(self):
        return ()

    def free_symbols(self):
        out = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, Sym):
                out.add(node.name)
            stack.extend(node.children())
        return out

    def set_names(self):
        out = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, Ind):
                out.add(node.name)
            stack.extend(node.children())
        return out

    def __str__(self):
        return to_source(self)

    # operator sugar for building trees in Python code
    def __add__(self, o):
        return Bin("+", self, as_node(o))

    def __radd__(self, o):
        return Bin("+", as_node(o), self)

    def __sub__(self, o):
        return Bin("-", self, as_node(o))

    def __rsub__(self, o):
        return Bin("-", as_node(o), self)

    def __mul__(self, o):
        return Bin("*", self, as_node(o))

    def __rmul__(self, o):
        return Bin("*", as_node(o), self)

    def __truediv__(self, o):
        return Bin("/", self, as_node(o))

    def __rtruediv__(self, o):
        return Bin("/", as_node(o), self)

    def __pow__(self, o):
        return Pow(self, as_node(o))

    def __neg__(self):
        return Neg(self)


class Num(Node):
    """Non-negative rational literal."""
    __slots__ = ("value",)

    def __init__(self, value):
        value = mpq(value)
        if value < 0:
            raise ValueError("Num holds non-negative literals; use Neg")
        self.value = value
        self._h = hash(("Num", value))

    def _fields(self):
        return (self.value,)

    def __repr__(self):
        return "Num(%s)" % self.value


class Sym(Node):
    __slots__ = ("name",)

    def __init__(self, name):
        if name == "drho":
            name = "rho"
        self.name = name
        self._h = hash(("Sym", name))

    def _fields(self):
        return (self.name,)

    def __repr__(self):
        return self.name


class Neg(Node):
    __slots__ = ("arg",)
    prec = 3

    def __init__(self, arg):
        self.arg = arg
        self._h = hash(("Neg", arg))

    def _fields(self):
        return (self.arg,)

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return "Neg(%r)" % (self.arg,)


class Bin(Node):
    __slots__ = ("op", "left", "right")

    def __init__(self, op, left, right):
        if op not in "+-*/":
            raise ValueError(op)
        self.op, self.left, self.right = op, left, right
        self._h = hash(("Bin", op, left, right))

    @property
    def prec(self):
        return 1 if self.op in "+-" else 2

    def _fields(self):
        return (self.op, self.left, self.right)

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        name = {"+": "Add", "-": "Sub", "*": "Mul", "/": "Div"}[self.op]
        return "%s(%r, %r)" % (name, self.left, self.right)


class Pow(Node):
    __slots__ = ("base", "exponent")
    prec = 4

    def __init__(self, base, exponent):
        self.base, self.exponent = base, exponent
        self._h = hash(("Pow", base, exponent))

    def _fields(self):
        return (self.base, self.exponent)

    def children(self):
        return (self.base, self.exponent)

    def __repr__(self):
        return "Pow(%r, %r)" % (self.base, self.exponent)


class Call(Node):
    __slots__ = ("func", "args")

    def __init__(self, func, *args):
        if func not in FUNCS or FUNCS[func] != len(args):
            raise ValueError("bad call %s/%d" % (func, len(args)))
        self.func, self.args = func, tuple(args)
        self._h = hash(("Call", func, self.args))

    def _fields(self):
        return (self.func, self.args)

    def children(self):
        return self.args

    def __repr__(self):
        return "%s(%s)" % (self.func.capitalize(), ", ".join(map(repr, self.args)))


class Ind(Node):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name
        self._h = hash(("Ind", name))

    def _fields(self):
        return (self.name,)

    def __repr__(self):
        return "Ind(%s)" % self.name


def substitute(node, name, repl):
    """Replace the symbol ``name`` by the tree ``repl``."""
    if isinstance(node, Sym):
        return repl if node.name == name else node
    if isinstance(node, Neg):
        return Neg(substitute(node.arg, name, repl))
    if isinstance(node, Bin):
        return Bin(node.op, substitute(node.left, name, repl), substitute(node.right, name, repl))
    if isinstance(node, Pow):
        return Pow(substitute(node.base, name, repl), substitute(node.exponent, name, repl))
    if isinstance(node, Call):
        return Call(node.func, *(substitute(a, name, repl) for a in node.args))
    return node


EPS = Sym("eps")
RHO = Sym("rho")
N = Sym("n")


def as_node(x):
    if isinstance(x, Node):
        return x
    if isinstance(x, str):
        return parse_net(x)
    q = mpq(x)
    return Num(q) if q >= 0 else Neg(Num(-q))


def const(q):
    return as_node(q)


# ---------------------------------------------------------------------------
# parser

# an unspaced p/q not followed by '^' is a rational literal; "1/2^3" stays 1/(2^3)
_TOKEN = re.compile(r"\s*(?:(\d+/\d+(?![\d^])|\d+\.\d*|\.\d+|\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(src):
    pos, out = 0, []
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", num, start))
        elif ident is not None:
            out.append(("id", ident, start))
        else:
            if op not in "+-*/^(),":
                raise GNSyntaxError("unexpected character %r" % op, start)
            out.append(("op", op, start))
        pos = m.end()
    out.append(("end", None, len(src)))
    return out


def _decimal(text):
    if "/" in text:
        p, q = text.split("/")
        if int(q) == 0:
            raise ZeroDivisionError
        return mpq(int(p), int(q))
    if "." in text:
        whole, frac = text.split(".")
        whole = whole or "0"
        return mpq(int(whole + frac or "0"), 10 ** len(frac))
    return mpq(int(text))


class _Parser:
    def __init__(self, src, set_names=None):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.set_names = frozenset(STANDARD_SETS if set_names is None else set_names)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise GNSyntaxError("expected %r" % op, t[2])
        return t

    def parse(self):
        if not self.src.strip():
            raise GNSyntaxError("empty expression", 0)
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise GNSyntaxError("unexpected %r" % (t[1],), t[2])
        return e

    def expr(self):
        left = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            left = Bin(op, left, self.term())
        return left

    def term(self):
        left = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            left = Bin(op, left, self.factor())
        return left

    def factor(self):
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            return Neg(self.factor())
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            return Pow(base, self.factor())
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            try:
                return Num(_decimal(val))
            except ZeroDivisionError:
                raise GNSyntaxError("zero denominator in literal %s" % val, pos)
        if kind == "id":
            if val in ("eps", "rho", "drho", "n"):
                return Sym(val)
            if val == "ind":
                self.expect("(")
                k2, name, p2 = self.take()
                if k2 != "id":
                    raise GNSyntaxError("expected a set name", p2)
                if name not in self.set_names:
                    raise UnknownSymbol(name, p2)
                self.expect(")")
                return Ind(name)
            if val in FUNCS:
                self.expect("(")
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                end = self.expect(")")
                if len(args) != FUNCS[val]:
                    raise GNSyntaxError("%s expects %d argument(s)" % (val, FUNCS[val]), end[2])
                return Call(val, *args)
            raise UnknownSymbol(val, pos)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise GNSyntaxError("unexpected end of input", pos)
        raise GNSyntaxError("unexpected %r" % (val,), pos)


def parse_net(src, set_names=None):
    """Parse ``src`` into a :class:`Node` tree.

    ``set_names`` lists the names accepted inside ``ind(...)``; by default
    EVEN, ODD and ALL.
    """
    return _Parser(src, set_names).parse()


# ---------------------------------------------------------------------------
# pretty printer

def _num_source(q):
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        digits = max(twos, fives)
        scaled = q * 10 ** digits
        s = str(scaled.numerator).rjust(digits + 1, "0")
        return s[:-digits] + "." + s[-digits:]
    return "(%d/%d)" % (q.numerator, q.denominator)


def to_source(node):
    """Render a tree with the fewest parentheses that parse back to it."""
    if isinstance(node, Num):
        return _num_source(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Ind):
        return "ind(%s)" % node.name
    if isinstance(node, Call):
        return "%s(%s)" % (node.func, ", ".join(to_source(a) for a in node.args))
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, 3)
    if isinstance(node, Pow):
        base = to_source(node.base)
        if isinstance(node.base, (Bin, Neg, Pow)) or (
                isinstance(node.base, Num) and node.base.value.denominator != 1
                and not base.startswith("(")):
            base = "(" + base + ")"
        return base + "^" + _wrap(node.exponent, 3)
    if isinstance(node, Bin):
        p = node.prec
        left = _wrap(node.left, p)
        right = _wrap(node.right, p + 1)
        return "%s %s %s" % (left, node.op, right)
    raise TypeError(node)


def _wrap(node, need):
    s = to_source(node)
    if node.prec < need:
        return "(" + s + ")"
    return s


# ---------------------------------------------------------------------------
# grid

class EpsGrid:
    """Geometric grid ``eps_k = base**-k`` for ``k = 1..K``."""

    def __init__(self, K=48, tail_start=16, base=2, w=4):
        if not 1 <= tail_start < K:
            raise ValueError("tail_start must lie in [1, K)")
        self.K = K
        self.tail_start = tail_start
        self.base = base
        self.w = w
        self.points = tuple(mpq(1, base ** k) for k in range(1, K + 1))

    @classmethod
    def from_config(cls, cfg=DEFAULT):
        return cls(cfg.K, cfg.tail_start, cfg.base, cfg.w)

    @property
    def indices(self):
        return range(1, self.K + 1)

    @property
    def tail(self):
        return range(self.tail_start, self.K + 1)

    def eps(self, k):
        return self.points[k - 1]

    def band(self, eps):
        """Grid index whose band (base**-(k+1), base**-k] contains ``eps``."""
        eps = mpq(eps)
        k = 0
        x = mpq(1)
        while x / self.base >= eps:
            x /= self.base
            k += 1
        return max(k, 1)

    def key(self):
        return (self.K, self.tail_start, self.base, self.w)

    def __eq__(self, other):
        return isinstance(other, EpsGrid) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "EpsGrid(K=%d, tail_start=%d, base=%d, w=%d)" % self.key()


# ---------------------------------------------------------------------------
# index sets

class IndexSet:
    """A subset of grid indices, described by a membership predicate."""

    def __init__(self, pred, name):
        self.pred = pred
        self.name = name

    def __contains__(self, k):
        return bool(self.pred(k))

    def members(self, ks):
        return [k for k in ks if self.pred(k)]

    def complement(self):
        return IndexSet(lambda k, p=self.pred: not p(k), _neg_name(self.name))

    def __and__(self, other):
        return IndexSet(lambda k, a=self.pred, b=other.pred: a(k) and b(k),
                        "%s & %s" % (self.name, other.name))

    def __or__(self, other):
        return IndexSet(lambda k, a=self.pred, b=other.pred: a(k) or b(k),
                        "%s | %s" % (self.name, other.name))

    def same_as(self, other, grid):
        return all((k in self) == (k in other) for k in grid.indices)

    def __repr__(self):
        return "IndexSet(%s)" % self.name


def _neg_name(name):
    swap = {"EVEN": "ODD", "ODD": "EVEN", "ALL": "NONE", "NONE": "ALL"}
    if name in swap:
        return swap[name]
    if name.startswith("~"):
        return name[1:]
    return "~" + name if " " not in name else "~(%s)" % name


def even():
    return IndexSet(lambda k: k % 2 == 0, "EVEN")


def odd():
    return IndexSet(lambda k: k % 2 == 1, "ODD")


def everything():
    return IndexSet(lambda k: True, "ALL")


def nothing():
    return IndexSet(lambda k: False, "NONE")


def index_list(ks, name=None):
    ks = frozenset(int(k) for k in ks)
    return IndexSet(lambda k: k in ks, name or "{%s}" % ",".join(map(str, sorted(ks))))


def from_mask(grid, ks, name=None):
    """Index set equal to ``ks`` on the grid (used for canonical witnesses)."""
    ks = sorted(set(ks))
    nm = name or _describe(ks, grid)
    return index_list(ks, nm)


def _describe(ks, grid):
    tail = [k for k in grid.indices if k >= grid.tail_start]
    sel = [k for k in tail if k in ks]
    if sel and all((k % 2 == 0) == (k in ks) for k in tail):
        return "EVEN"
    if sel and all((k % 2 == 1) == (k in ks) for k in tail):
        return "ODD"
    if sel == tail:
        return "TAIL"
    return "{%s}" % ",".join(map(str, ks))


STANDARD_SETS = {"EVEN": even(), "ODD": odd(), "ALL": everything()}


def suffix_windows(grid):
    """Width-``w`` windows ending at K and covering the last half of the tail."""
    w = grid.w
    tail = list(grid.tail)
    span = tail[len(tail) // 2:]
    out = []
    end = len(span)
    while end >= w:
        out.append(span[end - w:end])
        end -= w
    if end > 0 and not out:
        out.append(span[:end])
    return list(reversed(out))


def is_cofinal(S, grid):
    """Every suffix window of the tail meets ``S``."""
    for win in suffix_windows(grid):
        if not any(k in S for k in win):
            return Verdict(False, {"empty_window_start": win[0]},
                           ["no member in indices %d..%d" % (win[0], win[-1])])
    return Verdict(True, {"set": S.name},
                   ["every suffix window of width %d meets the set" % grid.w])


def cofinal_members(ks, grid):
    """Cofinality test on an explicit list of indices."""
    s = set(ks)
    return is_cofinal(IndexSet(lambda k: k in s, "?"), grid).is_true


# ---------------------------------------------------------------------------
# verdicts

class Verdict:
    """Three-valued decision: True, False or Unknown (``None``)."""

    __slots__ = ("value", "witness", "diagnostics")

    def __init__(self, value, witness=None, diagnostics=()):
        if value is not None and witness is None:
            witness = {}
        self.value = value
        self.witness = witness
        self.diagnostics = list(diagnostics)

    @classmethod
    def unknown(cls, *lines):
        return cls(None, None, lines)

    @property
    def is_true(self):
        return self.value is True

    @property
    def is_false(self):
        return self.value is False

    @property
    def is_unknown(self):
        return self.value is None

    @property
    def status(self):
        return {True: "true", False: "false", None: "unknown"}[self.value]

    def __and__(self, other):
        if self.is_false:
            return self
        if other.is_false:
            return other
        if self.is_true and other.is_true:
            w = dict(self.witness or {})
            w.update(other.witness or {})
            return Verdict(True, w, self.diagnostics + other.diagnostics)
        return Verdict(None, None, self.diagnostics + other.diagnostics)

    def __or__(self, other):
        if self.is_true:
            return self
        if other.is_true:
            return other
        if self.is_false and other.is_false:
            w = dict(self.witness or {})
            w.update(other.witness or {})
            return Verdict(False, w, self.diagnostics + other.diagnostics)
        return Verdict(None, None, self.diagnostics + other.diagnostics)

    def __invert__(self):
        if self.value is None:
            return self
        return Verdict(not self.value, self.witness, self.diagnostics)

    def __bool__(self):
        raise TypeError("a Verdict is three-valued; test .is_true / .is_false")

    def __repr__(self):
        return "Verdict(%s, %r)" % (self.status, self.witness)


# ---------------------------------------------------------------------------
# evaluation

class Poison:
    """Marker for a grid index where evaluation failed."""

    __slots__ = ("reason",)

    def __init__(self, reason):
        self.reason = reason

    def __repr__(self):
        return "Poison(%s)" % self.reason


def is_poison(v):
    return isinstance(v, Poison)


class NBinding:
    """Per-index values of the sequence variable ``n``."""

    def __init__(self, values, label="n"):
        self.values = dict(values)
        self.label = label
        self.serial = next(_serial)

    def at(self, k):
        return self.values[k]


_MEMO = {}
_MEMO_LIMIT = 400000


def clear_cache():
    _MEMO.clear()


class _Point:
    __slots__ = ("k", "eps", "gauge", "nb", "sets", "key", "prec")

    def __init__(self, k, eps, gauge, nb, sets, dense):
        self.k, self.eps, self.gauge, self.nb, self.sets = k, eps, gauge, nb, sets
        gk = gauge.serial if gauge is not None else 0
        nk = nb.serial if nb is not None else 0
        self.key = (gk, nk, id(sets), k, eps if dense else None)


_TOL = mpfr(2) ** -32


def _tol():
    return _TOL


def _ev(node, pt, final):
    # keyed on identity; the node is stored alongside so the id stays valid
    key = (id(node), pt.key, pt.prec, final)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit[1]
    v = _ev_node(node, pt, final)
    if v.fuzzy:
        if final:
            v = NetValue.zero()
        else:
            raise Imprecise("cancellation")
    elif not v.reliable(_tol()):
        if final:
            raise DomainError("precision loss at the maximal working precision")
        raise Imprecise("error bound too large")
    if len(_MEMO) > _MEMO_LIMIT:
        _MEMO.clear()
    _MEMO[key] = (node, v)
    return v


def _ev_node(node, pt, final):
    if isinstance(node, Num):
        return NetValue.from_rational(node.value)
    if isinstance(node, Sym):
        if node.name == "eps":
            return NetValue.from_rational(pt.eps)
        if node.name == "rho":
            if pt.gauge is None:
                return NetValue.from_rational(pt.eps)
            return pt.gauge.value_at_point(pt.k, pt.eps, pt.key[4] is not None, final)
        if node.name == "n":
            if pt.nb is None:
                raise DomainError("symbol n is unbound")
            return pt.nb.at(pt.k)
        raise DomainError("unknown symbol %s" % node.name)
    if isinstance(node, Ind):
        S = pt.sets.get(node.name)
        if S is None:
            raise DomainError("unknown index set %s" % node.name)
        return lv.from_int(1 if pt.k in S else 0)
    if isinstance(node, Neg):
        return lv.neg(_ev(node.arg, pt, final))
    if isinstance(node, Bin):
        a = _ev(node.left, pt, final)
        if node.op == "*" and a.is_zero:
            return a
        b = _ev(node.right, pt, final)
        if node.op == "+":
            return lv.add(a, b)
        if node.op == "-":
            return lv.sub(a, b)
        if node.op == "*":
            return lv.mul(a, b)
        return lv.div(a, b)
    if isinstance(node, Pow):
        return lv.power(_ev(node.base, pt, final), _ev(node.exponent, pt, final))
    if isinstance(node, Call):
        args = [_ev(a, pt, final) for a in node.args]
        f = node.func
        if f == "exp":
            return lv.exp(args[0])
        if f == "log":
            return lv.log(args[0])
        if f == "sin":
            return lv.sin(args[0])
        if f == "abs":
            return lv.absval(args[0])
        if f == "rpi":
            return lv.rpi(args[0])
        if f == "fact":
            return lv.fact(args[0])
        if f == "min":
            return lv.vmin(*args)
        if f == "max":
            return lv.vmax(*args)
    raise DomainError("cannot evaluate %r" % (node,))


def precision_ladder(cfg):
    if cfg.max_prec > cfg.prec:
        return (cfg.prec, cfg.max_prec)
    return (cfg.prec,)


def eval_point(node, k, eps, gauge=None, nb=None, sets=None, cfg=DEFAULT, dense=False):
    """Evaluate at one point; returns a NetValue or a Poison marker.

    The working precision starts at ``cfg.prec`` bits; if cancellation leaves
    too few reliable bits the point is redone once at ``cfg.max_prec``.  At the
    last level an unresolved cancellation counts as an exact zero.
    """
    sets = STANDARD_SETS if sets is None else sets
    pt = _Point(k, eps, gauge, nb, sets, dense)
    ladder = precision_ladder(cfg)
    for i, p in enumerate(ladder):
        final = i == len(ladder) - 1
        pt.prec = p
        with gmpy2.context(lv.context(p)):
            try:
                return _ev(node, pt, final)
            except Imprecise:
                continue
            except DomainError as exc:
                return Poison(str(exc))
            except (ZeroDivisionError, ValueError, OverflowError) as exc:
                return Poison(str(exc))
    return Poison("precision loss")


def eval_net(e, grid, gauge=None, n_binding=None, sets=None, cfg=DEFAULT):
    """Values of ``e`` at every grid index, as a dict ``k -> NetValue | Poison``."""
    if isinstance(e, str):
        e = parse_net(e, sets)
    free = e.free_symbols()
    if "n" in free and n_binding is None:
        raise GNError("expression uses n but no n binding was given")
    out = {}
    for k in grid.indices:
        out[k] = eval_point(e, k, grid.eps(k), gauge, n_binding, sets, cfg)
    return out


# ---------------------------------------------------------------------------
# gauges

class Gauge:
    """A net in (0, 1] tending to 0; ``rho`` inside ``expr`` refers to ``base``."""

    def __init__(self, expr, grid, name=None, base=None, cfg=DEFAULT, sets=None):
        self.expr = expr if isinstance(expr, Node) else parse_net(expr, sets)
        self.grid = grid
        self.name = name or to_source(self.expr)
        self.base = base
        self.cfg = cfg
        self.sets = STANDARD_SETS if sets is None else sets
        self.serial = next(_serial)
        self._cache = {}
        self.monotone = False

    def value_at_point(self, k, eps, dense, final):
        p = gmpy2.get_context().precision
        key = (k, eps if dense else None, p)
        v = self._cache.get(key)
        if v is None:
            pt = _Point(k, eps, self.base, None, self.sets, dense)
            pt.prec = p
            v = _ev(self.expr, pt, final)
            self._cache[key] = v
        return v

    def values(self):
        return eval_net(self.expr, self.grid, self.base, None, self.sets, self.cfg)

    def log_at(self, k):
        """ln(rho_eps) at grid index k, as an mpfr at the base precision."""
        key = ("log", k)
        v = self._cache.get(key)
        if v is None:
            r = eval_point(self.expr, k, self.grid.eps(k), self.base, None, self.sets, self.cfg)
            if is_poison(r):
                raise NotAGauge("gauge poisoned at index %d: %s" % (k, r.reason))
            v = r.logmag
            self._cache[key] = v
        return v

    def __repr__(self):
        return "Gauge(%s)" % self.name


def make_gauge(e, grid=None, name=None, base=None, cfg=DEFAULT, sets=None):
    """Build a gauge from ``e`` and verify it on the grid."""
    grid = grid or EpsGrid.from_config(cfg)
    node = e if isinstance(e, Node) else parse_net(e, sets)
    free = node.free_symbols()
    if "n" in free:
        raise NotAGauge("a gauge cannot depend on n")
    if "rho" in free and base is None:
        base = make_gauge(EPS, grid, "eps", cfg=cfg, sets=sets)
    g = Gauge(node, grid, name, base, cfg, sets)
    vals = g.values()
    logs = {}
    for k in grid.indices:
        v = vals[k]
        if is_poison(v):
            raise NotAGauge("gauge undefined at index %d: %s" % (k, v.reason))
        if v.sign != 1 or v.logmag > 0:
            raise NotAGauge("gauge value at index %d is not in (0,1]" % k)
        logs[k] = v.logmag
    first, last = logs[grid.tail_start], logs[grid.K]
    thr = gmpy2.log(mpfr(cfg.gauge_threshold))
    if not (last < first and last < thr):
        raise NotAGauge("gauge does not descend towards 0 along the grid tail")
    g.monotone = all(logs[k + 1] <= logs[k] for k in range(1, grid.K))
    for k, l in logs.items():
        g._cache[("log", k)] = l
    return g


_DEFAULT_GAUGES = {}


def default_gauge(cfg=DEFAULT, grid=None):
    """The gauge rho_eps = eps, shared per configuration."""
    grid = grid or EpsGrid.from_config(cfg)
    key = (cfg, grid.key())
    g = _DEFAULT_GAUGES.get(key)
    if g is None:
        g = _DEFAULT_GAUGES[key] = make_gauge(EPS, grid, "eps", cfg=cfg)
    return g
