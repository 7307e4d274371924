import pytest

from acll.ac import FuelExhausted, Relation, Rewriter, ac_equal
from acll.decision import (church_rosser_mod_ac, decide_validity, find_ac_loop, joinable,
                           replay_loop)
from acll.terms import Rule, Symbol
from sig import a, b, f, g, plus, x, y, zero

R4 = [Rule(f(plus(x, y)), plus(f(x), f(y))), Rule(f(zero), zero),
      Rule(plus(x, zero), x), Rule(plus(zero, x), x)]


def test_accp_is_church_rosser(corpus):
    rules = corpus("accp").rules
    v = church_rosser_mod_ac(rules)
    assert v.yes and str(v) == "YES (Church-Rosser modulo AC)"
    assert church_rosser_mod_ac(rules, prime_only=False).yes


def test_nonlinear_is_refused():
    v = church_rosser_mod_ac([Rule(g(x, x), x), Rule(plus(x, zero), x)])
    assert v.verdict == "indeterminate" and "left-linear" in v.reason


def test_empty_is_church_rosser():
    assert church_rosser_mod_ac([]).yes


def test_non_joinable_witness():
    # a -> b and a -> c with no way back: not Church-Rosser
    c = Symbol("c", 0)()
    rules = [Rule(f(a), b), Rule(a, c)]
    v = church_rosser_mod_ac(rules)
    assert v.verdict == "no"
    w = v.witness.eq
    assert joinable(w.lhs, w.rhs, rules) is False
    assert str(v).startswith("NO (critical pair")


def test_cliff_witness():
    # x+0 -> x alone is not CR modulo AC: 0+a cannot be reduced
    v = church_rosser_mod_ac([Rule(plus(x, zero), x)])
    assert v.verdict == "no" and v.witness.origin in ("RB", "BR")


def test_prime_and_all_agree(corpus):
    for name in ("accp", "pcp", "ddot13", "fewerpcp"):
        rules = corpus(name).rules
        assert church_rosser_mod_ac(rules).verdict == \
            church_rosser_mod_ac(rules, prime_only=False).verdict, name


def test_acterm_rejected_with_loop(corpus):
    p = corpus("acterm")
    v = church_rosser_mod_ac(p.rules)
    assert v.verdict == "indeterminate" and "not AC-terminating" in v.reason
    assert replay_loop(v.loop, p.rules)


def test_acterm_loop_from_a_plus_a_plus_b(corpus):
    p = corpus("acterm")
    start = p.parse_term("+(a,+(a,b))")
    loop = find_ac_loop(p.rules, 1, start=start)
    assert loop is not None and len(loop) == 2
    assert ac_equal(loop[0], loop[1]) and replay_loop(loop, p.rules)
    assert ac_equal(loop[1], p.parse_term("+(a,+(b,a))"))


def test_no_loop_in_terminating_system():
    for depth in (1, 2, 3, 4):
        assert find_ac_loop(R4, depth) is None


def test_depth_zero_finds_nothing(corpus):
    assert find_ac_loop(corpus("acterm").rules, 0) is None


def test_replay_rejects_bad_loops():
    assert not replay_loop([f(zero)], R4)
    assert not replay_loop([f(zero), zero], R4)


def test_decide_validity():
    res = decide_validity(R4, f(plus(zero, zero)), plus(f(zero), f(zero)))
    assert res.valid and res.lhs_nf == zero == res.rhs_nf
    assert str(res) == "VALID (0 vs 0)"
    assert decide_validity(R4, f(x), f(x)).valid
    assert decide_validity(R4, plus(f(y), f(x)), f(plus(x, y))).valid
    assert not decide_validity(R4, f(x), x).valid


def test_acterm_goal_is_invalid_under_its_rules(corpus):
    p = corpus("acterm")
    c, d = p.parse_term("c"), p.parse_term("d")
    res = decide_validity(p.rules, c, d)
    assert not res.valid
    assert str(res).startswith("INVALID")


def test_joinable_uses_all_reducts():
    # normal forms differ but both sides reach b
    rules = [Rule(f(x), b), Rule(f(a), g(a, a))]
    assert joinable(f(a), b, rules)
    assert joinable(g(a, a), b, rules) is False


def test_joinable_on_looping_system_runs_out_of_fuel():
    rules = [Rule(f(x), f(f(x)))]
    rw = Rewriter(rules, Relation.PLAIN, fuel=10)
    with pytest.raises(FuelExhausted):
        joinable(f(a), a, rules, rw)


def test_joinable_cutoff():
    # terminating, but the term has 2^7 distinct reducts
    h = Symbol("h", 2)
    rules = [Rule(a, b)]
    t = h(h(h(a, a), h(a, a)), h(h(a, a), a))
    assert joinable(t, b, rules, limit=5) is None
