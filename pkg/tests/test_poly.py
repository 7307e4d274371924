import itertools

import pytest

from acll.ac import Relation, Rewriter
from acll.completion import EngineConfig, run_completion
from acll.critical_pairs import signature
from acll.poly import (Poly, PolyInterp, parse_interpretation, poly_check_ac_compatible,
                       poly_difference, poly_orients, poly_search, poly_value)
from acll.terms import Rule
from sig import CORPUS, f, g, load, plus, x, y, z, zero

X, Y = Poly.var("x"), Poly.var("y")


def a95_interp():
    return parse_interpretation((CORPUS / "a95_interpretation.txt").read_text())


def test_poly_value():
    i = a95_interp()
    assert poly_value(i, f(zero)) == Poly.const(2)
    assert poly_value(i, zero) == Poly.const(1)
    assert poly_value(i, x) == X
    assert poly_orients(i, Rule(f(zero), zero))


def test_poly_value_missing_symbol():
    with pytest.raises(KeyError):
        poly_value(a95_interp(), g(x, y))


def test_distributivity_difference():
    d = poly_difference(a95_interp(), Rule(f(plus(x, y)), plus(f(x), f(y))))
    assert d == 2 * X * Y + 2 * X + 2 * Y + 1


def test_right_unit_difference():
    # [x+0] = x + 1 + 1 since the constant 0 is interpreted as 1
    assert poly_difference(a95_interp(), Rule(plus(x, zero), x)) == Poly.const(2)
    assert poly_orients(a95_interp(), Rule(plus(x, zero), x))


def test_orients():
    i = a95_interp()
    assert poly_orients(i, Rule(f(plus(x, y)), plus(f(x), f(y))))
    assert not poly_orients(i, Rule(f(x), f(x)))
    assert not poly_orients(i, Rule(plus(f(x), f(y)), f(plus(x, y))))


def test_shifted_positivity():
    # x*y - x - y + 1 = (x-1)(y-1) is not always positive, but the
    # shifted form checks only naturals >= 1: xy >= 0
    p = X * Y - X - Y + 2
    assert p.shifted().absolutely_positive()
    assert not (X - Y).shifted().absolutely_positive()


def test_ac_compatibility():
    check = lambda p: poly_check_ac_compatible(PolyInterp({"+": p}), [plus])
    xs, ys = Poly.var("x1"), Poly.var("x2")
    assert check(xs + ys + 1)
    assert not check(2 * xs + ys)
    assert check(xs * ys)
    assert not check(xs * ys + 1)  # commutative, not associative


def test_search_right_unit():
    found = poly_search([Rule(plus(x, zero), x)], 2)
    assert found is not None
    assert poly_orients(found, Rule(plus(x, zero), x))
    assert poly_check_ac_compatible(found, [plus])


def test_search_postcondition_on_run():
    out = run_completion(load("a95_ex_4_2_15b").all_equations(), EngineConfig())
    assert out.completed
    cs = list(out.constraints)
    found = poly_search(cs, 2)
    assert found is not None
    assert all(poly_orients(found, r) for r in cs)
    assert poly_check_ac_compatible(found, signature(cs))


def test_search_fails_on_nonterminating():
    assert poly_search([Rule(f(x), f(f(x)))], 2) is None


def test_parse_interpretation():
    i = parse_interpretation("*(x,y) = x*y + 2\ns(u) = u^2 + 1\n# comment\na = 3\n")
    xs, ys = Poly.var("x1"), Poly.var("x2")
    assert i["*"] == xs * ys + 2
    assert i["s"] == xs * xs + 1
    assert i["a"] == Poly.const(3)


def test_numeric_decrease_on_modulo_steps():
    """Evaluation decreases along sampled R/AC steps when every rule is oriented."""
    i = a95_interp()
    cfg = EngineConfig(order="poly-file:" + str(CORPUS / "a95_interpretation.txt"))
    rules = run_completion(load("a95_ex_4_2_15b").all_equations(), cfg).rules
    assert all(poly_orients(i, r) for r in rules)
    rw = Rewriter(rules, Relation.MODULO)
    starts = [f(plus(x, plus(zero, y))), plus(f(zero), plus(x, zero)), f(f(plus(zero, z)))]
    for t in starts:
        for st in rw.steps(t):
            for env in itertools.product(range(1, 4), repeat=3):
                e = dict(zip("xyz", env))
                assert poly_value(i, t).evaluate(e) > poly_value(i, st.result).evaluate(e)
