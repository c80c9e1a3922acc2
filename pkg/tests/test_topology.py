import random

import pytest

from gennum.errors import BadRadius, GNSyntaxError
from gennum.oracle import SymbolicGN, random_symbolic
from gennum.ring_core import GenNum, gn
from gennum.topology import (RadiiKind, ball_contains, closed_ball, internal_dichotomy,
                             internal_member, parse_setnet, representative_agrees,
                             strongly_internal_member)

SHARP, FERMAT = RadiiKind.SHARP, RadiiKind.FERMAT


def test_sharp_ball():
    assert ball_contains(SHARP, 0, "drho", gn("drho^2")).is_true
    assert ball_contains(SHARP, 0, "drho", gn("2*drho")).is_false


def test_fermat_ball_uses_the_standard_part():
    assert ball_contains(FERMAT, 0, 0.6, gn("0.5 + drho")).is_true
    assert ball_contains(FERMAT, 0, "1/2", gn("0.5 - drho")).is_false


@pytest.mark.parametrize("kind,r", [(FERMAT, "drho"), (FERMAT, -1), (SHARP, "0"),
                                    (SHARP, "ind(EVEN)")])
def test_bad_radius(kind, r):
    with pytest.raises(BadRadius):
        ball_contains(kind, 0, r, gn("0"))


def test_internal_membership():
    assert internal_member(gn("1"), "closed(0, 1+eps)").is_true
    v = internal_member(gn("eps^(1/2)"), "closed(0, eps)")
    assert v.is_false and v.witness["order"] == 0.5


def test_closure_of_a_ball_contains_its_boundary():
    x = gn("3 + drho")
    assert internal_member(x, closed_ball("3", "drho")).is_true
    assert internal_member(x, "open(3 - rho, 3 + rho)").is_true
    assert strongly_internal_member(x, "open(3 - rho, 3 + rho)").is_false


def test_strong_membership():
    assert strongly_internal_member(gn("1 - drho^(1/2)"), "open(-1, 1)").is_true
    assert strongly_internal_member(gn("1"), "open(-1, 1)").is_false
    assert strongly_internal_member(gn("eps/2"), "open(0, eps)").is_true


def test_touching_intervals_merge_for_the_complement():
    assert strongly_internal_member(gn("1"), "union(open(0, 1), closed(1, 2))").is_true
    assert strongly_internal_member(gn("1"), "union(open(0, 1), open(1, 2))").is_false


def test_whole_line_and_unbounded_ends():
    assert strongly_internal_member(gn("drho^(-5)"), "open(-inf, inf)").is_true
    assert internal_member(gn("drho^(-5)"), "closed(0, inf)").is_true


@pytest.mark.parametrize("x,A,branch,L", [
    ("ind(EVEN) - ind(ODD)", "closed(0, 2)", "SPLIT", "EVEN"),
    ("drho", "closed(0, 1)", "IN", None),
    ("2 + drho", "closed(0, 1)", "IN_COMPLEMENT", None),
])
def test_dichotomy(x, A, branch, L):
    b, S, _ = internal_dichotomy(gn(x), A)
    assert b == branch
    assert (S.name if S else None) == L


def test_empty_index_is_skipped():
    K = "union(closed(-sin(1/eps), sin(1/eps)), closed(sin(1/eps), -sin(1/eps)))"
    assert internal_member(gn("abs(sin(1/eps))"), K).is_true
    assert internal_member(gn("2"), K).is_false


def test_setnet_syntax():
    A = parse_setnet("union( closed(0, 1+eps), open(2, 3) )")
    assert [i.lo_closed for i in A.intervals] == [True, False]
    assert A.source() == "union(closed(0, 1 + eps), open(2, 3))"
    with pytest.raises(GNSyntaxError):
        parse_setnet("union(closed(0, 1), half(2, 3))")
    with pytest.raises(GNSyntaxError):
        parse_setnet("closed(0, 1")


# properties --------------------------------------------------------------------

def _fragment(seed, n):
    rng = random.Random(seed)
    return [random_symbolic(rng, 3) for _ in range(n)]


@pytest.mark.parametrize("s", _fragment(11, 8))
def test_ball_nesting(s):
    x = GenNum(s.to_expr())
    r, R = gn("drho^2"), gn("drho")
    if ball_contains(SHARP, 0, r, x).is_true:
        assert ball_contains(SHARP, 0, R, x).is_true
    assert ball_contains(SHARP, 0, r, x).value is not None


@pytest.mark.parametrize("s", _fragment(12, 8))
def test_fermat_membership_implies_sharp(s):
    x = GenNum(s.to_expr())
    if ball_contains(FERMAT, 0, 2, x).is_true:
        assert ball_contains(SHARP, 0, "2", x).is_true


@pytest.mark.parametrize("s", _fragment(13, 8))
def test_strong_implies_internal_and_representatives_agree(s):
    x = GenNum(s.to_expr())
    A = "union(open(-1, drho), closed(2, 3))"
    if strongly_internal_member(x, A).is_true:
        assert internal_member(x, A).is_true
    assert internal_member(x, A).value == representative_agrees(x, A).value


def test_symbolic_boundary_point():
    c = SymbolicGN.monomial(1, 1) + 2
    x = GenNum(c.to_expr())
    assert internal_member(x, "closed(2, 2 + rho)").is_true
    assert strongly_internal_member(x, "closed(2, 2 + rho)").is_false
