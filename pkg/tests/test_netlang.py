import math

import gmpy2
import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from gennum import logval as lv
from gennum.errors import GNError, GNSyntaxError, NotAGauge, UnknownSymbol
from gennum.logval import NetValue
from gennum.netlang import (EPS, RHO, Bin, Call, EpsGrid, Ind, Neg, Num, Pow, Sym, Verdict,
                            default_gauge, eval_net, eval_point, even, index_list, is_cofinal,
                            make_gauge, odd, parse_net, to_source)

GRID = EpsGrid()


# parsing -----------------------------------------------------------------

def test_drho_is_sugar_for_rho():
    assert parse_net("drho^(-3)") == Pow(RHO, Neg(Num(3)))


def test_parse_gauge_and_two_representatives():
    e = parse_net("exp(-rho^(-1/rho))")
    assert isinstance(e, Call) and e.func == "exp"
    assert parse_net("1 - rho^(1/eps)") == Bin("-", Num(1), Pow(RHO, Bin("/", Num(1), EPS)))


def test_power_is_right_associative_and_binds_tighter_than_minus():
    assert parse_net("2^3^2") == Pow(Num(2), Pow(Num(3), Num(2)))
    assert parse_net("-rho^2") == Neg(Pow(RHO, Num(2)))


def test_decimals_and_rationals():
    assert parse_net("0.25") == Num(mpq(1, 4))
    assert parse_net("1/3") == Num(mpq(1, 3))
    assert parse_net("1 / 3") == Bin("/", Num(1), Num(3))
    assert parse_net("1/2^3") == Bin("/", Num(1), Pow(Num(2), Num(3)))


def test_min_max_are_binary():
    assert parse_net("min(eps, rho)") == Call("min", EPS, RHO)
    with pytest.raises(GNSyntaxError):
        parse_net("min(eps)")


def test_indicator():
    assert parse_net("ind(EVEN)") == Ind("EVEN")
    assert parse_net("ind(L)", set_names={"L"}) == Ind("L")


@pytest.mark.parametrize("src,pos", [("1 +", 3), ("(eps", 4), ("eps $ 2", 4), ("", 0)])
def test_syntax_errors_carry_a_position(src, pos):
    with pytest.raises(GNSyntaxError) as info:
        parse_net(src)
    assert info.value.position == pos


def test_unknown_identifier():
    with pytest.raises(UnknownSymbol) as info:
        parse_net("1 + delta")
    assert info.value.position == 4


def test_unknown_set_name():
    with pytest.raises(UnknownSymbol):
        parse_net("ind(FOO)")


def test_interning_makes_equal_trees_identical():
    assert parse_net("1 + rho^2") is parse_net("1+rho^(2)")


# round trip ---------------------------------------------------------------

_leaf = st.one_of(
    st.builds(lambda p, q: Num(mpq(p, q)), st.integers(0, 50), st.integers(1, 9)),
    st.sampled_from([EPS, RHO, Sym("n"), Ind("EVEN"), Ind("ODD")]),
)


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(Bin, st.sampled_from("+-*/"), children, children),
        st.builds(Pow, children, children),
        st.builds(lambda f, a: Call(f, a), st.sampled_from(["exp", "log", "sin", "abs", "rpi"]), children),
        st.builds(lambda f, a, b: Call(f, a, b), st.sampled_from(["min", "max"]), children, children),
    )


ASTS = st.recursive(_leaf, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(ASTS)
def test_print_parse_round_trip(node):
    assert parse_net(to_source(node)) == node


@settings(max_examples=100, deadline=None)
@given(ASTS)
def test_printing_is_a_fixed_point(node):
    s = to_source(node)
    assert to_source(parse_net(s)) == s


def test_minimal_parentheses():
    assert to_source(parse_net("(1 + eps) * (rho - 2)")) == "(1 + eps) * (rho - 2)"
    assert to_source(parse_net("1 + (eps * rho)")) == "1 + eps * rho"
    assert to_source(parse_net("1 - (eps - rho)")) == "1 - (eps - rho)"


# evaluation ----------------------------------------------------------------

def test_rho_is_eps_on_the_default_gauge():
    vals = eval_net("rho", GRID, default_gauge())
    for k in (1, 10, 48):
        v = vals[k]
        assert v.sign == 1
        assert v.exact == mpq(1, 2 ** k)
        with gmpy2.context(lv.context(256)):
            assert abs(v.logmag + k * gmpy2.log(2)) < 1e-70


def test_doubly_exponential_gauge_stays_representable():
    # at eps = 2^-8: rho^(-1/rho) = (2^8)^(2^8) = 2^2048, so logmag = -2^2048
    v = eval_point(parse_net("exp(-rho^(-1/rho))"), 8, GRID.eps(8), default_gauge())
    assert v.sign == 1
    assert abs(v.logmag / gmpy2.mpfr(2) ** 2048 + 1) < 1e-60


def test_indicator_values():
    vals = eval_net("ind(EVEN)", GRID, default_gauge())
    assert [vals[k].exact for k in (1, 2, 3, 4)] == [0, 1, 0, 1]


def test_domain_errors_poison_single_indices():
    vals = eval_net("log(eps - 1/1024)", GRID, default_gauge())
    assert vals[5].sign != 0 and not hasattr(vals[5], "reason")
    assert hasattr(vals[10], "reason")
    assert hasattr(vals[20], "reason")


def test_unbound_n_is_rejected():
    with pytest.raises(GNError):
        eval_net("n * eps", GRID, default_gauge())


def test_cancellation_resolves_by_escalation():
    # (1 + eps^3) - 1 at eps = 2^-48 needs more than 256 bits if not exact
    e = parse_net("(1 + rho^(1/2)*rho^3) - 1")
    v = eval_point(e, 48, GRID.eps(48), default_gauge())
    with gmpy2.context(lv.context(256)):
        assert abs(v.logmag + 168 * gmpy2.log(2)) < 1e-60


def test_exact_cancellation_is_zero():
    e = parse_net("(rho^(1/2) + 1) - 1 - rho^(1/2)")
    assert eval_point(e, 40, GRID.eps(40), default_gauge()).sign == 0


def test_evaluation_is_deterministic():
    a = eval_net("sin(1/eps) + exp(rho^(1/3))", GRID, default_gauge())
    b = eval_net("sin(1/eps) + exp(rho^(1/3))", GRID, default_gauge())
    assert [v.key() for v in a.values()] == [v.key() for v in b.values()]


def test_powers_of_a_gauge_decrease_along_the_tail():
    g = make_gauge("eps^2", GRID)
    for q in (1, 2, 5):
        vals = eval_net("rho^%d" % q, GRID, g)
        lms = [vals[k].logmag for k in GRID.tail]
        assert all(vals[k].sign == 1 for k in GRID.tail)
        assert all(a > b for a, b in zip(lms, lms[1:]))


# gauges --------------------------------------------------------------------

def test_eps_is_a_monotone_gauge():
    assert make_gauge("eps", GRID).monotone


def test_tiny_gauge_is_accepted():
    g = make_gauge("exp(-rho^(-1/rho))", GRID, base=default_gauge())
    # ln sigma at eps = 2^-48 is -2^(48 * 2^48), kept on the second log level
    lr = g.log_at(48)
    assert lv.is_tower(lr) and lr.sign == -1
    with gmpy2.context(lv.context(256)):
        assert abs(lr.L - 48 * 2 ** 48 * gmpy2.log(2)) < 1e-30
    assert g.monotone


@pytest.mark.parametrize("src", ["0.5", "1 + eps", "-eps", "1/eps"])
def test_not_a_gauge(src):
    with pytest.raises(NotAGauge):
        make_gauge(src, GRID)


def test_non_monotone_gauge_is_flagged():
    g = make_gauge("eps * (1 + 3 * ind(EVEN)) / 4", GRID)
    assert not g.monotone


# index sets and verdicts ----------------------------------------------------

def test_cofinality():
    assert is_cofinal(even(), GRID).is_true
    assert is_cofinal(odd(), GRID).is_true
    assert is_cofinal(even().complement(), GRID).is_true
    v = is_cofinal(index_list([1, 2, 3]), GRID)
    assert v.is_false and v.witness["empty_window_start"] > GRID.tail_start
    assert is_cofinal(index_list(range(25, 49)), GRID).is_true
    assert is_cofinal(index_list(range(16, 40)), GRID).is_false


def test_set_and_complement_both_cofinal():
    assert (is_cofinal(even(), GRID) & is_cofinal(even().complement(), GRID)).is_true


def test_kleene_connectives():
    T, F, U = Verdict(True), Verdict(False), Verdict(None)
    assert (T & U).is_unknown and (F & U).is_false
    assert (T | U).is_true and (F | U).is_unknown
    assert (~U).is_unknown and (~T).is_false


def test_verdict_refuses_truthiness():
    with pytest.raises(TypeError):
        bool(Verdict(True))


def test_net_value_zero_invariant():
    z = NetValue.zero()
    assert z.sign == 0 and z.logmag == -math.inf
