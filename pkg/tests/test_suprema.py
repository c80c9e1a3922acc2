import random

import pytest

from gennum.errors import ClampViolation, EmptyFamily, EmptySet, GNSyntaxError, UnsupportedPartClass
from gennum.ring_core import gn, gn_eq
from gennum.suprema import (FERMAT, SHARP, UpperBoundFamily, check_sup_candidate,
                            epswise_sup_internal, find_inf, find_sup, hans_sequences, is_AUB,
                            parse_setdescr, set_add, set_mul, set_scale, sigma_net)

OPEN01 = "interval(0,1,open,open)"
SPLIT = "interval(0,1,open,open) | points(2 on EVEN, 1/2 on ODD)"


def same(report, value):
    return report.value is not None and gn_eq(report.value, gn(value)).is_true


@pytest.mark.parametrize("S,kind,result,value", [
    (OPEN01, SHARP, "Sup", "1"),
    ("recipN", SHARP, "Sup", "1"),
    ("DINF", SHARP, "NoSup", None),
    ("realinterval(0,1,open,open)", SHARP, "NoSup", None),
    ("realinterval(0,1,open,open)", FERMAT, "Sup", "1"),
    ("powfam", SHARP, "NoSup", None),
    ("DINF | points(1)", SHARP, "Sup", "1"),
    ("points(drho, ind(EVEN) - ind(ODD))", SHARP, "Sup", "max(drho, ind(EVEN) - ind(ODD))"),
    ("internal(closed(0, 1+eps))", SHARP, "Sup", "1 + eps"),
])
def test_find_sup(S, kind, result, value):
    r = find_sup(S, kind)
    assert r.result == result
    if value is not None:
        assert same(r, value)


@pytest.mark.parametrize("S,value", [(OPEN01, "0"), ("recipN", "0"), ("powfamR", "0")])
def test_find_inf(S, value):
    r = find_inf(S)
    assert r.result == "Sup" and same(r, value)


def test_dinf_has_no_infimum_either():
    assert find_inf("DINF").result == "NoSup"


def test_split_set_has_only_a_least_upper_bound():
    r = find_sup(SPLIT)
    assert r.result == "LubOnly"
    assert r.status == "false"
    assert same(r, "2*ind(EVEN) + ind(ODD)")


def test_failed_candidate_reports_the_condition():
    ok = check_sup_candidate(OPEN01, gn("1"))
    assert ok.is_true
    low = check_sup_candidate(OPEN01, gn("1 - drho"))
    assert low.is_false and low.witness["condition"] == "a"
    high = check_sup_candidate(OPEN01, gn("1 + drho"))
    assert high.is_false and high.witness["condition"] == "b"


def test_sigma_net_follows_the_subpoints():
    sigma, moderate, _ = sigma_net(SPLIT)
    assert moderate.is_true
    assert [sigma.value(k).to_float() for k in (20, 21)] == [2.0, 1.0]
    sigma, _, _ = sigma_net(OPEN01)
    assert gn_eq(sigma, gn("1")).is_true


def test_sigma_net_needs_an_upper_bound():
    with pytest.raises(EmptyFamily):
        sigma_net(OPEN01, ["1/2"])


def test_clamp_violation():
    U = UpperBoundFamily(["1"], {(0, 0): gn("2")})
    with pytest.raises(ClampViolation):
        sigma_net(OPEN01, U)


def test_hans_sequences_agree_with_find_sup():
    for S in (OPEN01, "DINF", "recipN", "realinterval(0,1,open,open)"):
        h = hans_sequences(S)
        assert h.ok == find_sup(S).exists, S
    h = hans_sequences(OPEN01, ["1", "2"])
    assert gn_eq(h.limit, gn("1")).is_true
    assert hans_sequences("DINF").blocking_q == 1


def test_archimedean_upper_bounds():
    v, n = is_AUB("3", OPEN01)
    assert v.is_true and n == 4
    v, n = is_AUB("1", OPEN01)
    assert v.is_true and n == 2
    v, n = is_AUB("drho^(-1)", OPEN01)
    assert v.is_false and n is None


def test_epswise_sup_of_internal_set():
    K = "union(closed(-sin(1/eps), sin(1/eps)), closed(sin(1/eps), -sin(1/eps)))"
    s = epswise_sup_internal(K)
    assert gn_eq(s, gn("abs(sin(1/eps))")).is_true


def test_parse_errors_and_empty_set():
    with pytest.raises(GNSyntaxError):
        parse_setdescr("interval(0,1,open)")
    with pytest.raises(GNSyntaxError):
        parse_setdescr("cube(0)")
    with pytest.raises(EmptySet):
        find_sup("empty")


def test_products_need_nonnegative_parts():
    with pytest.raises(UnsupportedPartClass):
        set_mul("interval(-1,1,closed,closed)", "points(2)")


# laws ----------------------------------------------------------------------------

def _lam(rng):
    num = rng.choice([n for n in range(-9, 10) if n])
    return "%d/%d" % (num, rng.randint(1, 5))


@pytest.mark.parametrize("seed", range(6))
def test_scaling_law(seed):
    rng = random.Random(seed)
    lam = _lam(rng)
    A = "interval(%d, %d, closed, open) | points(%d)" % (
        rng.randint(-3, 0), rng.randint(1, 4), rng.randint(-4, 4))
    lhs = find_sup(set_scale(gn(lam), A))
    if lam.startswith("-"):
        rhs = find_inf(A)
    else:
        rhs = find_sup(A)
    assert lhs.exists and rhs.exists
    assert gn_eq(lhs.value, gn(lam) * rhs.value).is_true


@pytest.mark.parametrize("seed", range(4))
def test_sum_law(seed):
    rng = random.Random(100 + seed)
    A = "interval(%d, 1, open, open)" % rng.randint(-3, 0)
    B = "points(%d, %d)" % (rng.randint(-3, 3), rng.randint(-3, 3))
    lhs = find_sup(set_add(A, B))
    assert gn_eq(lhs.value, find_sup(A).value + find_sup(B).value).is_true


def test_product_law_for_nonnegative_sets():
    lhs = find_sup(set_mul("interval(0, 2, closed, open)", "points(1/2, 3)"))
    assert same(lhs, "6")


def test_monotone_in_the_set():
    small = find_sup("interval(0, 1/2, open, closed)")
    big = find_sup("interval(0, 1/2, open, closed) | points(drho + 1/2)")
    assert same(small, "1/2") and same(big, "1/2 + drho")


def test_sup_of_reflection_is_minus_inf():
    a = find_sup(set_scale(gn("-1"), "recipN"))
    assert same(a, "0")
