import pytest

from gennum.errors import (ExtractionFailed, GaugeMismatch, HypothesisFailed, NotExtendable,
                           NotModerateInTarget, SearchCapExceeded)
from gennum.hyper import (HyperNat, HyperSeq, aux_gauge, epswise_hyperlim, extend_sequence,
                          hyperlim, is_cauchy, is_monotone, liminf, limsup, monotone_limit,
                          pow_hypernat, squeeze, subseq_extract)
from gennum.netlang import default_gauge
from gennum.ring_core import gn, gn_eq, leq

MU = "(ind(EVEN) - ind(ODD))^n"


def lim_is(report, value):
    return report.converges and gn_eq(report.limit, gn(value)).is_true


@pytest.mark.parametrize("term,sigma,value", [
    ("1/n", None, "0"),
    ("1/log(n)", "exp(-rho^(-1/rho))", "0"),
    ("(1-drho)^n", None, "0"),
    ("2/n^(1/2)", None, "0"),
    ("3 - 1/n", None, "3"),
    ("drho + 1/n^2", None, "drho"),
])
def test_converging(term, sigma, value):
    assert lim_is(hyperlim(HyperSeq(term, sigma=sigma)), value)


def test_compound_interest_is_e_up_to_infinitesimals():
    r = hyperlim(HyperSeq("(1+1/n)^n"))
    assert r.converges
    # the limit differs from e by an infinitesimal that is not negligible
    d = r.limit - gn("exp(1)")
    assert leq(-gn("drho"), d).is_true and leq(d, gn("drho")).is_true


@pytest.mark.parametrize("term,status", [
    ("1/log(n)", "NoLimit"),
    ("(-1)^n", "NoLimit"),
    (MU, "NoLimit"),
    ("n", "DivergesPlus"),
    ("-n^2", "DivergesMinus"),
])
def test_not_converging(term, status):
    r = hyperlim(HyperSeq(term))
    assert r.status == status
    assert r.verdict_status == "false"


def test_report_is_serialisable():
    d = hyperlim(HyperSeq("1/n")).to_dict()
    assert d["status"] == "Converges" and d["limit_st"] == 0.0
    assert set(d["thresholds"]) == {str(q) for q in range(1, d["q_verified"] + 1)}


# Cauchy -------------------------------------------------------------------------

@pytest.mark.parametrize("term", ["1/n", "(1-drho)^n", "(-1)^n", MU, "ind(EVEN)/n + 1",
                                  "1/log(n)"])
def test_cauchy_iff_convergent(term):
    seq = HyperSeq(term)
    c, r = is_cauchy(seq), hyperlim(seq)
    assert c.value is not None
    assert c.is_true == r.converges


def test_classical_ladder_misses_the_infinitesimal_decay():
    assert is_cauchy(HyperSeq("(1-drho)^n", mode="classical")).is_false


# algebra and continuity ----------------------------------------------------------

def test_limit_of_sum_and_product():
    a, b = hyperlim(HyperSeq("1 + 1/n")), hyperlim(HyperSeq("2 - (1-drho)^n"))
    s = hyperlim(HyperSeq("1 + 1/n + 2 - (1-drho)^n"))
    p = hyperlim(HyperSeq("(1 + 1/n)*(2 - (1-drho)^n)"))
    assert gn_eq(s.limit, a.limit + b.limit).is_true
    assert gn_eq(p.limit, a.limit * b.limit).is_true


@pytest.mark.parametrize("term,value", [
    ("exp(1/n)", "1"),
    ("log(2 + 1/n)", "log(2)"),
    ("(2 + 1/n)^3 - 4*(2 + 1/n)", "0"),
])
def test_sequential_continuity(term, value):
    assert lim_is(hyperlim(HyperSeq(term)), value)


def test_limits_stay_in_closed_sets():
    r = hyperlim(HyperSeq("1 - 1/n"))
    assert leq(r.limit, gn("1")).is_true and leq(gn("0"), r.limit).is_true


def test_limit_is_unique():
    r = hyperlim(HyperSeq("1/n"))
    assert not gn_eq(r.limit, gn("drho^2")).is_true


# monotone sequences --------------------------------------------------------------

@pytest.mark.parametrize("term,direction", [
    ("1/n", "non-increasing"), ("1 - 1/n", "non-decreasing"), ("n", "non-decreasing"),
])
def test_is_monotone(term, direction):
    v = is_monotone(HyperSeq(term))
    assert v.is_true and v.witness["direction"] == direction


def test_alternating_is_not_monotone():
    assert is_monotone(HyperSeq("(-1)^n")).is_false


@pytest.mark.parametrize("term,bounded", [("1 - 1/n", True), ("n", False)])
def test_monotone_limit_matches_supremum(term, bounded):
    rep, sup, mono = monotone_limit(HyperSeq(term))
    assert mono.is_true
    assert rep.converges == sup.exists == bounded
    if bounded:
        assert gn_eq(rep.limit, sup.value).is_true


# squeeze ------------------------------------------------------------------------

def test_squeeze():
    r = squeeze(HyperSeq("0"), HyperSeq("log(n)/n"), HyperSeq("2/n^(1/2)"))
    assert lim_is(r, "0")


def test_squeeze_checks_the_ordering():
    with pytest.raises(HypothesisFailed):
        squeeze(HyperSeq("1/n"), HyperSeq("0"), HyperSeq("2/n"))


def test_squeeze_needs_shared_gauges():
    with pytest.raises(GaugeMismatch):
        squeeze(HyperSeq("0"), HyperSeq("1/n", sigma="rho^2"), HyperSeq("1/n"))


# limsup and liminf ---------------------------------------------------------------

@pytest.mark.parametrize("term,sup,inf", [("(-1)^n", "1", "-1"), (MU, "1", "ind(EVEN) - ind(ODD)"),
                                          ("3", "3", "3"), ("1/n", "0", "0")])
def test_limsup_liminf(term, sup, inf):
    seq = HyperSeq(term)
    s, i = limsup(seq), liminf(seq)
    assert s.status is True and gn_eq(s.value, gn(sup)).is_true
    assert i.status is True and gn_eq(i.value, gn(inf)).is_true
    assert s.cross == "agrees" and i.cross == "agrees"
    # limsup = liminf exactly when the hyperlimit exists
    assert gn_eq(s.value, i.value).is_true == hyperlim(seq).converges


def test_limsup_is_subadditive():
    a, b = HyperSeq("(-1)^n"), HyperSeq("-(-1)^n")
    both = limsup(HyperSeq("(-1)^n - (-1)^n")).value
    assert leq(both, limsup(a).value + limsup(b).value).is_true


def test_subsequence_extraction():
    ps = subseq_extract(HyperSeq("(-1)^n"), gn("1"), q_max=4)
    assert len(ps) == 4 and all(p.parity == 0 for p in ps)
    with pytest.raises(ExtractionFailed):
        subseq_extract(HyperSeq("(-1)^n"), gn("0"), q_max=2)


# hypernaturals and extension -----------------------------------------------------

def test_hypernat_arithmetic():
    two, three = HyperNat.from_net(2), HyperNat.from_net(3)
    assert pow_hypernat(two, three).eq(8).is_true
    m = HyperNat.from_net("rpi(rho^(-1))")
    assert (m + m).eq(HyperNat.from_net("2*rpi(rho^(-1))")).is_true
    assert HyperNat.from_net("1 - rho^(1/eps)").eq(1).is_true


def test_power_needs_a_moderate_target():
    m = HyperNat.from_net("rpi(rho^(-1))")
    assert pow_hypernat(m, m, aux_gauge()).verdict.is_true
    with pytest.raises(NotModerateInTarget):
        pow_hypernat(m, m, default_gauge())


def test_extend_sequence():
    assert extend_sequence("3") is not None
    with pytest.raises(NotExtendable):
        extend_sequence("drho^(-n)")


# the eps-wise construction -------------------------------------------------------

def test_epswise_constant_by_search():
    r = epswise_hyperlim("eps + 2")
    assert r.path == "search" and r.verified


@pytest.mark.parametrize("term,threshold,moderate", [
    ("1/n", "rpi(rho^(-n)) + 1", "false"),
    ("1/(n*eps)", "rpi(eps^(-n-1)) + 1", "false"),
])
def test_epswise_closed_form(term, threshold, moderate):
    r = epswise_hyperlim(term, threshold=threshold)
    assert r.path == "closed form" and r.verified
    assert r.to_dict()["mbar_moderate"] == moderate
    assert r.diagnostics and all("INCONSISTENT" not in d for d in r.diagnostics)


def test_epswise_search_cap():
    with pytest.raises(SearchCapExceeded):
        epswise_hyperlim("1/n")
