import math
import random

import pytest
from gmpy2 import mpq

from gennum.errors import GaugeMismatch, NonMonotoneGauge, NotCofinal, Unbounded
from gennum.netlang import EpsGrid, even, index_list, make_gauge, odd
from gennum.oracle import SymbolicGN, random_symbolic
from gennum.ring_core import (GenNum, classify, drho, exists_subpoint_rel, gn, gn_abs, gn_eq,
                              gn_max, gn_min, inf_part, invertibility_criteria,
                              is_hypernat, is_invertible, is_invertible_positive, is_moderate,
                              is_negligible, leq, lt, quadrichotomy, rpi, st_inf, st_sup,
                              subpoint_rel, sup_part)

MU = "ind(EVEN) - ind(ODD)"


def V(src):
    return gn(src)


# moderateness and negligibility ------------------------------------------------

def test_moderate_with_witness():
    v = is_moderate(V("drho^(-3)"))
    assert v.is_true and v.witness["N"] == 3


def test_exponential_blowup_is_not_moderate():
    assert is_moderate(V("exp(1/eps)")).is_false


def test_moderate_dominant_exponent():
    v = is_moderate(V("2*drho^(1/2) + drho^(-1)"))
    assert v.is_true and v.witness["N"] == 1


def test_astronomically_large_net_is_not_moderate():
    assert is_moderate(V("exp(rho^(-1/rho))")).is_false


def test_negligible():
    assert is_negligible(V("rho^(1/eps)")).is_true
    assert is_negligible(V("0")).is_true
    assert is_negligible(V("exp(-rho^(-1/rho))")).is_true


def test_power_is_not_negligible():
    v = is_negligible(V("drho^5"))
    assert v.is_false and v.witness["q"] == 6


# lattice and arithmetic -------------------------------------------------------

def test_lattice_examples():
    r = drho()
    assert gn_eq(gn_min(r, r * r), r * r).is_true
    assert gn_eq(gn_abs(-r), r).is_true
    assert gn_eq(V("drho^(1/2)") * V("drho^(1/2)"), r).is_true
    assert gn_eq(gn_max(r, -r), gn_abs(r)).is_true


def test_gauge_mismatch():
    other = make_gauge("eps^2", EpsGrid())
    with pytest.raises(GaugeMismatch):
        drho() + GenNum("rho", other)
    with pytest.raises(GaugeMismatch):
        leq(drho(), GenNum("rho", other))


# equality and order ---------------------------------------------------------

def test_two_representatives_of_one():
    assert gn_eq(V("1 - rho^(1/eps)"), V("1 + rho^(1/eps)")).is_true
    assert gn_eq(drho(), V("0")).is_false


def test_interleaved_negligible_perturbation():
    x = V("ind(EVEN) + ind(ODD) * (1 + rho^(1/eps))")
    assert gn_eq(x, V("1")).is_true


def test_leq():
    assert leq(drho(), V("1")).is_true
    v = leq(V(MU), V("0"))
    assert v.is_false and v.witness["L"] == "EVEN"
    x = V("sin(1/eps) + rho^(1/3)")
    assert leq(x, x + V("rho^(1/eps)")).is_true


def test_lt():
    assert lt(V("0"), drho()).is_true
    x = V("3 + rho")
    assert lt(x, x).is_false
    assert lt(drho(), V("drho^(1/2)")).is_true


def test_leq_does_not_imply_lt_for_negligible_gap():
    x = V("1 - rho^(1/eps)")
    assert leq(x, V("1")).is_true
    assert lt(x, V("1")).is_false


# invertibility --------------------------------------------------------------

def test_invertible_positive():
    v = is_invertible_positive(drho())
    assert v.is_true and v.witness["m"] == 2
    assert is_invertible_positive(V("ind(EVEN) + ind(ODD) * rho^(1/eps)")).is_false
    assert is_invertible_positive(-drho()).is_false
    assert is_invertible(-drho()).is_true


def test_criteria_are_reported_separately():
    crits, _ = invertibility_criteria(V("drho^(3/2) + drho^2"))
    assert {k: v[0] for k, v in crits.items()} == {
        "all_reps_positive": True, "all_reps_power_bound": True, "some_rep_power_bound": True}


# subpoints ----------------------------------------------------------------------

def test_subpoint_relations():
    assert subpoint_rel(V(MU), V("1"), "=", even()).is_true
    assert subpoint_rel(drho(), V("1"), "<", odd()).is_true
    assert subpoint_rel(V(MU), V("0"), "<", even()).is_false


def test_subpoint_needs_cofinal_set():
    with pytest.raises(NotCofinal):
        subpoint_rel(drho(), V("1"), "<", index_list([1, 2, 3]))


def test_exists_subpoint():
    v = exists_subpoint_rel(V(MU), V("0"), "<")
    assert v.is_true and v.witness["L"] == "ODD"
    v = exists_subpoint_rel(V("0"), drho(), "<")
    assert v.is_true and v.witness["L"] == "TAIL"
    assert exists_subpoint_rel(V("1"), V("1"), "<").is_false


def test_quadrichotomy():
    branch, L, _ = quadrichotomy(V(MU), V("0"))
    assert branch == "SPLIT" and L.name == "EVEN"
    x = V("2 - rho")
    assert quadrichotomy(x, x)[0] == "LEQ"
    assert quadrichotomy(drho(), V("drho^2"))[0] == "GEQ"


# standard parts ---------------------------------------------------------------

def test_standard_parts_of_sine():
    x = V("sin(1/eps)")
    assert st_inf(x) == pytest.approx(-1, abs=1e-3)
    assert st_sup(x) == pytest.approx(1, abs=1e-3)


def test_standard_parts_of_infinitesimals_and_infinities():
    assert st_inf(drho()) == st_sup(drho()) == 0
    assert st_inf(V("1/rho")) == st_sup(V("1/rho")) == math.inf


def test_inf_sup_parts_bracket_x():
    x = V("2 + sin(1/eps)")
    assert leq(inf_part(x), x).is_true
    assert leq(x, sup_part(x)).is_true
    with pytest.raises(Unbounded):
        inf_part(V("-1/rho"))


def test_parts_refuse_non_monotone_gauges():
    g = make_gauge("eps * (1 + 3 * ind(EVEN)) / 4", EpsGrid())
    with pytest.raises(NonMonotoneGauge):
        inf_part(GenNum("1 + rho", g))


@pytest.mark.parametrize("src,kind,lo,hi", [
    ("1 + drho", "near-standard", 1, 1),
    (MU, "mixed-subpoints", -1, 1),
    ("drho^(-1) * ind(EVEN)", "mixed-subpoints", 0, math.inf),
    ("drho", "infinitesimal", 0, 0),
    ("drho^(-1)", "infinite", math.inf, math.inf),
    ("2 + sin(1/eps)", "mixed-subpoints", 1, 3),
])
def test_classify(src, kind, lo, hi):
    c = classify(V(src))
    assert c.kind == kind
    assert c.finite == (math.isfinite(lo) and math.isfinite(hi))
    assert c.st_inf == pytest.approx(lo, abs=1e-3)
    assert c.st_sup == pytest.approx(hi, abs=1e-3)


# nearest integer ----------------------------------------------------------------

def test_rpi_repairs_the_floor():
    r = rpi(V("1 - rho^(1/eps)"))
    assert all(r.value(k).exact == 1 for k in r.grid.tail)
    assert rpi(V("2.5")).value(20).exact == 3
    assert rpi(V("-2.5")).value(20).exact == -2


def test_rpi_is_idempotent():
    x = V("1/eps + sin(1/eps)/3")
    a, b = rpi(x), rpi(rpi(x))
    assert all(a.value(k).key() == b.value(k).key() for k in x.grid.indices)


def test_hypernatural_membership():
    assert is_hypernat(V("rpi(1/eps + 1/2) + rho^(2/eps)")).is_true
    assert is_hypernat(V("1/2 + 1/eps")).is_false
    assert is_hypernat(V("-3")).is_false


# algebraic laws on random fragment elements -----------------------------------------

def _pairs(n, seed):
    rng = random.Random(seed)
    return [(random_symbolic(rng, 3), random_symbolic(rng, 3)) for _ in range(n)]


@pytest.mark.parametrize("x,y", _pairs(12, 7))
def test_norm_laws(x, y):
    X, Y = GenNum(x.to_expr()), GenNum(y.to_expr())
    assert gn_eq(gn_abs(X), gn_max(X, -X)).is_true
    assert gn_eq(gn_abs(X * Y), gn_abs(X) * gn_abs(Y)).is_true
    assert leq(gn_abs(X + Y), gn_abs(X) + gn_abs(Y)).is_true
    assert leq(gn_abs(gn_abs(X) - gn_abs(Y)), gn_abs(X - Y)).is_true


@pytest.mark.parametrize("x,y", _pairs(12, 8))
def test_negation_lemma_and_trichotomy(x, y):
    X, Y = GenNum(x.to_expr()), GenNum(y.to_expr())
    a = leq(X, Y)
    b = exists_subpoint_rel(X, Y, ">")
    assert a.value is (not b.value)
    disj = gn_eq(X, Y) | exists_subpoint_rel(X, Y, "<") | b
    assert disj.is_true


def test_order_is_compatible_with_addition_and_scaling():
    x, y, z = V("drho - 2"), V("drho^(1/2) - 2"), V(MU)
    lam = V("drho^(-1) * ind(EVEN) + 3 * ind(ODD)")
    assert leq(x, y).is_true
    assert leq(x + z, y + z).is_true
    assert leq(lam * x, lam * y).is_true


def test_symbolic_and_numeric_agree_on_a_mixed_example():
    s = SymbolicGN({"EVEN": [(mpq(-1), 1), (0, 2)], "ODD": [(mpq(1, 2), -3)]})
    X = GenNum(s.to_expr())
    assert is_moderate(X).witness["N"] == 1
    assert is_invertible(X).is_true
    assert is_invertible_positive(X).is_false
