"""Hypothesis strategies for small terms and rules."""

from hypothesis import strategies as st

from acll.terms import (Fun, Rule, Symbol, Var, apply_subst, is_linear, is_valid_rule, size,
                        variables)

PLUS = Symbol("+", 2, "AC")
TIMES = Symbol("*", 2, "AC")
F = Symbol("f", 1)
G = Symbol("g", 2)
S = Symbol("s", 1)
A, B, ZERO = Symbol("a", 0), Symbol("b", 0), Symbol("0", 0)

VARS = [Var("x"), Var("y"), Var("z")]
SYMS = [PLUS, TIMES, F, G, A, B, ZERO]


@st.composite
def terms(draw, max_size=8, syms=SYMS, variables=VARS):
    """Terms with at most ``max_size`` symbol occurrences."""
    leaves = [s for s in syms if s.arity == 0]
    inner = [s for s in syms if s.arity > 0]

    def build(budget):
        if budget <= 1 or not inner or draw(st.integers(0, 3)) == 0:
            pool = list(variables) + [Fun(s, ()) for s in leaves]
            return draw(st.sampled_from(pool))
        sym = draw(st.sampled_from(inner))
        budget -= 1
        args = []
        for i in range(sym.arity):
            share = budget // (sym.arity - i) if i < sym.arity - 1 else budget
            share = draw(st.integers(1, max(1, share)))
            args.append(build(share))
            budget -= size(args[-1])
            budget = max(budget, 1)
        return Fun(sym, tuple(args))

    return build(max_size)


def ground_terms(max_size=8, syms=SYMS):
    return terms(max_size=max_size, syms=syms, variables=[])


@st.composite
def linear_rules(draw, max_size=5, syms=SYMS):
    lhs = draw(terms(max_size=max_size, syms=syms).filter(lambda t: not t.is_var and is_linear(t)))
    rhs = draw(terms(max_size=max_size, syms=syms))
    if not is_valid_rule(lhs, rhs):
        # ground the variables the lhs does not bind
        extra = variables(rhs) - variables(lhs)
        rhs = apply_subst(rhs, {v: Fun(A, ()) for v in extra})
    return Rule(lhs, rhs)
