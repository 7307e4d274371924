"""Randomized checks of the kernel against brute-force oracles."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from acll.ac import (Relation, Rewriter, ac_class_enumerate, ac_equal, ac_match, canonical,
                     from_canonical)
from acll.acrpo import AcRpo
from acll.canonicity import ddot, dot, llrbsim
from acll.completion import EngineConfig, run_completion
from acll.decision import church_rosser_mod_ac
from acll.terms import (Fun, Rule, Symbol, Var, apply_subst, encompasses, fun_positions,
                        is_variant, match_syntactic, replace_at, subterm_at, unify, var_list,
                        variables)
from gen import A, B, F, G, PLUS, S, SYMS, TIMES, ZERO, ground_terms, linear_rules, terms
from sig import load

CASES = settings(max_examples=500, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])

SUBJECT_VARS = [Var("u"), Var("v")]


def cset(ts):
    return {canonical(t) for t in ts}


# ------------------------------------------------------------ AC equality

@st.composite
def related_pairs(draw):
    s = draw(terms(max_size=8))
    if draw(st.booleans()):
        members = sorted(ac_class_enumerate(s), key=str)
        return s, draw(st.sampled_from(members))
    return s, draw(terms(max_size=8))


@CASES
@given(related_pairs())
def test_ac_equal_matches_class_enumeration(pair):
    s, t = pair
    assert ac_equal(s, t) == (t in ac_class_enumerate(s))


@CASES
@given(terms(max_size=8))
def test_canonical_form_is_idempotent(t):
    c = canonical(t)
    assert canonical(from_canonical(c)) == c
    assert all(canonical(m) == c for m in ac_class_enumerate(t))


# ------------------------------------------------------------ AC matching

def _binding_key(sigma):
    # identity bindings are left implicit
    return frozenset((v.name, canonical(t)) for v, t in sigma.items() if t != v)


@CASES
@given(terms(max_size=5), terms(max_size=6, variables=SUBJECT_VARS))
def test_ac_match_against_enumeration(pattern, subject):
    emitted = ac_match(pattern, subject)
    got = {_binding_key(s) for s in emitted}
    assert len(got) == len(emitted)  # no duplicates modulo AC
    oracle = set()
    for m in ac_class_enumerate(subject):
        sigma = match_syntactic(pattern, m)
        if sigma is not None:
            oracle.add(_binding_key(sigma))
    assert got == oracle
    for sigma in emitted:
        assert ac_equal(apply_subst(pattern, sigma), subject)


@CASES
@given(terms(max_size=5), st.dictionaries(st.sampled_from([Var("x"), Var("y"), Var("z")]),
                                          terms(max_size=3, variables=SUBJECT_VARS)))
def test_ac_match_finds_instances(pattern, sigma):
    subject = apply_subst(pattern, sigma)
    want = _binding_key({v: sigma.get(v, v) for v in var_list(pattern)})
    assert want in {_binding_key(s) for s in ac_match(pattern, subject)}


# ------------------------------------------------------------ unification

SYNTACTIC = [F, G, S, A, B, ZERO]
H = Symbol("h", 3)


@st.composite
def generalize(draw, t, names, binding):
    """Replace some subterms of t by variables; ``binding`` records what each stands for."""
    if draw(st.integers(0, 3)) == 0:
        v = Var(draw(st.sampled_from(names)))
        if binding.setdefault(v, t) == t:
            return v
    if t.is_var:
        return t
    return Fun(t.symbol, tuple(draw(generalize(a, names, binding)) for a in t.args))


@st.composite
def unifiable_pairs(draw):
    u = draw(terms(max_size=7, syms=SYNTACTIC, variables=[Var("w")]))
    tau = {}
    s = draw(generalize(u, ["x1", "x2", "x3"], tau))
    t = draw(generalize(u, ["x2", "y1", "y2"], tau))
    return s, t, tau


@CASES
@given(unifiable_pairs())
def test_mgu_sound_idempotent_and_general(case):
    s, t, tau = case
    assert apply_subst(s, tau) == apply_subst(t, tau)
    sigma = unify(s, t)
    assert sigma is not None
    assert apply_subst(s, sigma) == apply_subst(t, sigma)
    for v, img in sigma.items():
        assert v != img and apply_subst(img, sigma) == img
    vs = sorted(variables(s) | variables(t), key=lambda v: v.name)
    # tau = sigma . delta for some delta
    pack = lambda sub: _pack([apply_subst(v, sub) for v in vs])
    assert match_syntactic(pack(sigma), pack(tau)) is not None


def _pack(ts):
    out = Fun(ZERO, ())
    for t in ts:
        out = Fun(H, (t, out, out))
    return out


@CASES
@given(terms(max_size=6, syms=SYNTACTIC), terms(max_size=6, syms=SYNTACTIC))
def test_unify_random_pairs(s, t):
    sigma = unify(s, t)
    if sigma is not None:
        assert apply_subst(s, sigma) == apply_subst(t, sigma)


@CASES
@given(terms(max_size=6, syms=SYNTACTIC), st.dictionaries(
    st.sampled_from([Var("x"), Var("y"), Var("z")]), terms(max_size=3, syms=SYNTACTIC)))
def test_match_syntactic_returns_restriction(p, sigma):
    got = match_syntactic(p, apply_subst(p, sigma))
    assert got is not None
    pv = variables(p)
    assert {v: t for v, t in sigma.items() if v in pv and t != v} == \
        {v: t for v, t in got.items() if t != v}


# -------------------------------------------------------- term relations

@CASES
@given(terms(max_size=6), st.permutations(["x", "y", "z"]))
def test_variant_is_equivalence(t, names):
    ren = {Var(a): Var(b) for a, b in zip(["x", "y", "z"], names)}
    u = apply_subst(t, ren)
    assert is_variant(t, t) and is_variant(t, u) and is_variant(u, t)
    back = {v: k for k, v in ren.items()}
    assert is_variant(apply_subst(u, back), t)


@CASES
@given(terms(max_size=7), st.data())
def test_encompassment_reflexive_transitive(t, data):
    assert encompasses(t, t)
    p = data.draw(st.sampled_from([()] + fun_positions(t)))
    u = subterm_at(t, p)
    assert encompasses(t, u)
    q = data.draw(st.sampled_from([()] + fun_positions(u))) if not u.is_var else ()
    v = subterm_at(u, q)
    assert encompasses(u, v) and encompasses(t, v)


@CASES
@given(terms(max_size=7), terms(max_size=3), st.data())
def test_substitution_distributes_over_replacement(s, t, data):
    ps = fun_positions(s)
    p = data.draw(st.sampled_from(ps)) if ps else ()
    sigma = {Var("x"): data.draw(terms(max_size=3)), Var("y"): Fun(A, ())}
    lhs = apply_subst(replace_at(s, p, t), sigma)
    rhs = replace_at(apply_subst(s, sigma), p, apply_subst(t, sigma))
    assert lhs == rhs


# -------------------------------------------- R/AC versus extended rules

def _slash_step(cs, rules):
    plain = Rewriter(rules)
    out = set()
    for c in cs:
        for m in ac_class_enumerate(from_canonical(c)):
            out |= {st_.canonical for st_ in plain.steps(m)}
    return out


def _ext_step(cs, rules):
    modulo = Rewriter(rules, Relation.MODULO)
    out = set()
    for c in cs:
        out |= {st_.canonical for st_ in modulo.steps(from_canonical(c))}
    return out


SMALL = [PLUS, F, A, ZERO]


@CASES
@given(st.lists(linear_rules(max_size=4, syms=SMALL), min_size=1, max_size=2),
       terms(max_size=5, syms=SMALL, variables=SUBJECT_VARS))
def test_modulo_steps_equal_extended_steps(rules, t):
    slash, ext = {canonical(t)}, {canonical(t)}
    for n in range(3):
        slash, ext = _slash_step(slash, rules), _ext_step(ext, rules)
        assert slash == ext, n
        if not slash or max(len(str(from_canonical(c))) for c in slash) > 60:
            break


@CASES
@given(st.lists(linear_rules(max_size=4, syms=SMALL), min_size=1, max_size=2),
       terms(max_size=5, syms=SMALL, variables=SUBJECT_VARS), st.data())
def test_strict_coherence(rules, t, data):
    members = sorted(ac_class_enumerate(t), key=str)
    m = data.draw(st.sampled_from(members))
    assert _ext_step({canonical(t)}, rules) == \
        {st_.canonical for st_ in Rewriter(rules, Relation.MODULO).steps(m)}


@CASES
@given(st.lists(linear_rules(max_size=4, syms=SMALL), min_size=1, max_size=2),
       terms(max_size=5, syms=SMALL, variables=SUBJECT_VARS))
def test_step_inclusions(rules, t):
    plain = {s.canonical for s in Rewriter(rules).steps(t)}
    ps = {s.canonical for s in Rewriter(rules, Relation.PS).steps(t)}
    assert plain <= ps
    assert ps <= _slash_step({canonical(t)}, rules)


# --------------------------------------------------- conversion preservation

CP_SYMS = [PLUS, F, S, A, ZERO]


@st.composite
def small_problems(draw):
    n = draw(st.integers(1, 2))
    eqs = []
    for _ in range(n):
        l = draw(terms(max_size=4, syms=CP_SYMS, variables=[Var("x"), Var("y")]))
        r = draw(terms(max_size=3, syms=CP_SYMS, variables=[Var("x"), Var("y")]))
        eqs.append((l, r))
    return eqs


QUICK = EngineConfig(max_iterations=12, timeout=1.0, order="poly-search:1")


@CASES
@given(small_problems())
def test_completed_outputs_join_inputs(eqs):
    out = run_completion(eqs, QUICK)
    if not out.completed:
        return
    rw = Rewriter(out.rules)
    for l, r in eqs:
        assert ac_equal(rw.normalize(l), rw.normalize(r))
    assert church_rosser_mod_ac(out.rules).verdict != "no"


# ------------------------------------------------------ canonical systems

R4 = [Rule(Fun(F, (Fun(PLUS, (Var("x"), Var("y"))),)),
           Fun(PLUS, (Fun(F, (Var("x"),)), Fun(F, (Var("y"),))))),
      Rule(Fun(F, (Fun(ZERO, ()),)), Fun(ZERO, ())),
      Rule(Fun(PLUS, (Var("x"), Fun(ZERO, ()))), Var("x")),
      Rule(Fun(PLUS, (Fun(ZERO, ()), Var("x"))), Var("x"))]


def _inputs():
    out = {"r4": R4, "ddot13": load("ddot13").rules, "accp": load("accp").rules}
    for name in ("list_add", "cliffscol", "encompassment"):
        out[name] = run_completion(load(name).all_equations(), EngineConfig()).rules
    return out


COMPLETE = _inputs()


@st.composite
def shuffled(draw, rules):
    order = draw(st.permutations(range(len(rules))))
    out = []
    for i in order:
        r = rules[i]
        vs = var_list(r.lhs)
        names = draw(st.permutations([f"v{k}" for k in range(len(vs))]))
        ren = {v: Var(n) for v, n in zip(vs, names)}
        out.append(Rule(apply_subst(r.lhs, ren), apply_subst(r.rhs, ren)))
    return out


@CASES
@given(st.data())
def test_ddot_is_unique_up_to_variants(data):
    name = data.draw(st.sampled_from(sorted(COMPLETE)))
    rules = COMPLETE[name]
    one = ddot(data.draw(shuffled(rules)))
    two = ddot(data.draw(shuffled(rules)))
    assert llrbsim(one, two)
    assert _lhs_subset(one, dot(rules)) and _lhs_subset(dot(rules), rules)


def _lhs_subset(rs1, rs2):
    """Every lhs of rs1 is a renamed AC-variant of some lhs of rs2."""
    same = lambda s, t: bool(ac_match(s, t)) and bool(ac_match(t, s))
    return all(any(same(r.lhs, q.lhs) for q in rs2) for r in rs1)


@CASES
@given(terms(max_size=7, syms=[PLUS, F, ZERO, A]))
def test_ddot_is_normalization_equivalent(t):
    rules = COMPLETE["ddot13"]
    reduced = ddot(rules)
    assert ac_equal(Rewriter(rules).normalize(t), Rewriter(reduced).normalize(t))


# ---------------------------------------------------------------- AC-RPO

RPO_SYMS = [PLUS, TIMES, F, G, S, A, B, ZERO]
NAMES = [s.name for s in RPO_SYMS]


def _gt(order, s, t):
    return order.gt(canonical(s), canonical(t))


@st.composite
def precedences(draw):
    names = draw(st.permutations(NAMES))
    return AcRpo({n: i for i, n in enumerate(names)})


@CASES
@given(precedences(), terms(max_size=7, syms=RPO_SYMS), terms(max_size=7, syms=RPO_SYMS),
       st.dictionaries(st.sampled_from([Var("x"), Var("y"), Var("z")]),
                       terms(max_size=3, syms=RPO_SYMS)))
def test_acrpo_strict_and_stable(order, s, t, sigma):
    if not _gt(order, s, t):
        return
    assert not _gt(order, t, s)
    assert _gt(order, apply_subst(s, sigma), apply_subst(t, sigma))


@CASES
@given(precedences(), terms(max_size=6, syms=RPO_SYMS), terms(max_size=6, syms=RPO_SYMS),
       terms(max_size=3, syms=RPO_SYMS), st.integers(0, 5))
def test_acrpo_closed_under_contexts(order, s, t, c, k):
    if not _gt(order, s, t):
        return
    ctx = [lambda u: Fun(PLUS, (u, c)), lambda u: Fun(TIMES, (c, u)), lambda u: Fun(S, (u,)),
           lambda u: Fun(G, (c, u)), lambda u: Fun(PLUS, (Fun(PLUS, (u, c)), c)),
           lambda u: Fun(TIMES, (c, Fun(TIMES, (u, c))))][k]
    assert _gt(order, ctx(s), ctx(t))


@CASES
@given(precedences(), terms(max_size=6, syms=RPO_SYMS), terms(max_size=6, syms=RPO_SYMS),
       terms(max_size=6, syms=RPO_SYMS))
def test_acrpo_transitive(order, s, t, u):
    if _gt(order, s, t) and _gt(order, t, u):
        assert _gt(order, s, u)


@CASES
@given(precedences(), ground_terms(max_size=7, syms=RPO_SYMS),
       ground_terms(max_size=7, syms=RPO_SYMS))
def test_acrpo_total_on_ground_terms(order, s, t):
    if not ac_equal(s, t):
        assert _gt(order, s, t) or _gt(order, t, s)
