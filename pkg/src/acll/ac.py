"""Rewriting modulo associativity and commutativity.

Canonical forms are nested tuples::

    (0, name)                      a variable
    (1, name, (arg, ...), symbol)  an application

AC applications are flattened into one variadic node and their arguments
sorted; arguments of commutative-only symbols are sorted but not flattened.
Tuple comparison realizes the global term order, so sorting is plain
``sorted``.  Two terms are AC-equal exactly when their canonical forms are
equal.
"""

from __future__ import annotations

import enum
from collections import deque
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .terms import (Fun, Position, Rule, Subst, Symbol, Term, Var, apply_subst,
                    fresh_names, fun_positions, match_syntactic, replace_at,
                    subterm_at, var_list)

DEFAULT_FUEL = 10 ** 6


class FuelExhausted(RuntimeError):
    """Raised when a normal-form computation exceeds its step budget."""


class Relation(enum.Enum):
    PLAIN = "plain"     # ->_R, syntactic matching
    PS = "ps"           # ->_{R,AC}, AC matching at subterms
    MODULO = "modulo"   # ->_{R/AC}, computed as ->_{R^e,AC}

    @classmethod
    def parse(cls, value):
        return value if isinstance(value, cls) else cls(str(value).lower())


# ---------------------------------------------------------- canonical forms

def _flat_args(sym: Symbol, args) -> tuple:
    """Splice nested applications of the AC symbol ``sym`` and sort."""
    out = []
    for a in args:
        if a[0] == 1 and a[3] == sym:
            out.extend(a[2])
        else:
            out.append(a)
    out.sort()
    return tuple(out)


def make_node(sym: Symbol, args) -> tuple:
    if sym.is_ac:
        return (1, sym.name, _flat_args(sym, args), sym)
    if sym.is_c:
        return (1, sym.name, tuple(sorted(args)), sym)
    return (1, sym.name, tuple(args), sym)


def canonical(t: Term) -> tuple:
    if t.is_var:
        return (0, t.name)
    c = t.canon_cache
    if c is None:
        c = make_node(t.symbol, [canonical(a) for a in t.args])
        t.canon_cache = c
    return c


flatten_canonical = canonical


def from_canonical(c: tuple) -> Term:
    """Binary term for a canonical form: sorted arguments, right-associated."""
    if c[0] == 0:
        return Var(c[1])
    sym = c[3]
    args = [from_canonical(a) for a in c[2]]
    if sym.is_ac:
        t = args[-1]
        for a in reversed(args[:-1]):
            t = Fun(sym, (a, t))
        return t
    return Fun(sym, tuple(args))


def normalize_ac(t: Term) -> Term:
    return from_canonical(canonical(t))


def ac_equal(s: Term, t: Term) -> bool:
    return s == t or canonical(s) == canonical(t)


def canon_str(c: tuple) -> str:
    if c[0] == 0:
        return c[1]
    if not c[2]:
        return c[1]
    return f"{c[1]}({','.join(canon_str(a) for a in c[2])})"


def subst_canonical(c: tuple, sigma: Dict[str, tuple]) -> tuple:
    """Instantiate a canonical form with canonical bindings, re-normalizing."""
    if c[0] == 0:
        return sigma.get(c[1], c)
    return make_node(c[3], [subst_canonical(a, sigma) for a in c[2]])


# ------------------------------------------------------------- AC matching

def _match(p: tuple, s: tuple, sigma: dict) -> Iterator[dict]:
    if p[0] == 0:
        bound = sigma.get(p[1])
        if bound is None:
            out = dict(sigma)
            out[p[1]] = s
            yield out
        elif bound == s:
            yield sigma
        return
    if s[0] == 0 or s[1] != p[1]:
        return
    sym = p[3]
    if sym.is_ac:
        yield from _match_ac(sym, p[2], s[2], sigma)
    elif sym.is_c:
        yield from _match_seq(p[2], s[2], 0, sigma)
        if s[2][0] != s[2][1]:
            yield from _match_seq(p[2], (s[2][1], s[2][0]), 0, sigma)
    elif len(p[2]) == len(s[2]):
        yield from _match_seq(p[2], s[2], 0, sigma)


def _match_seq(ps, ss, i, sigma):
    if i == len(ps):
        yield sigma
        return
    for s2 in _match(ps[i], ss[i], sigma):
        yield from _match_seq(ps, ss, i + 1, s2)


def _match_ac(sym, pargs, sargs, sigma):
    if len(pargs) > len(sargs):
        return
    rigid = [q for q in pargs if q[0] == 1]
    flex: Dict[str, int] = {}
    for q in pargs:
        if q[0] == 0:
            flex[q[1]] = flex.get(q[1], 0) + 1

    def assign(i, used, sg):
        if i == len(rigid):
            rest = [a for j, a in enumerate(sargs) if j not in used]
            yield from _distribute(sym, list(flex.items()), rest, sg)
            return
        q = rigid[i]
        for j, a in enumerate(sargs):
            if j in used or a[0] == 0 or a[1] != q[1]:
                continue
            if j and sargs[j - 1] == a and (j - 1) not in used:
                continue  # same choice as the equal neighbour
            for s2 in _match(q, a, sg):
                yield from assign(i + 1, used | {j}, s2)

    yield from assign(0, frozenset(), sigma)


def _remove(rest: list, items: list) -> Optional[list]:
    rest = list(rest)
    for it in items:
        try:
            rest.remove(it)
        except ValueError:
            return None
    return rest


def _distribute(sym, flex, rest, sigma):
    """Share the leftover arguments among the pattern's variables."""
    free = []
    for name, k in flex:
        bound = sigma.get(name)
        if bound is None:
            free.append((name, k))
            continue
        parts = list(bound[2]) if bound[0] == 1 and bound[3] == sym else [bound]
        rest = _remove(rest, parts * k)
        if rest is None:
            return
    if not free:
        if not rest:
            yield sigma
        return
    yield from _share(sym, free, rest, sigma)


def _share(sym, free, rest, sigma):
    (name, k), tail = free[0], free[1:]
    need = sum(m for _, m in tail)
    groups: List[Tuple[tuple, int]] = []
    for a in rest:
        if groups and groups[-1][0] == a:
            groups[-1] = (a, groups[-1][1] + 1)
        else:
            groups.append((a, 1))

    def choose(i, picked):
        if i == len(groups):
            if picked:
                yield picked
            return
        a, n = groups[i]
        for c in range(0, n // k + 1):
            yield from choose(i + 1, picked + [a] * c)

    for part in choose(0, []):
        left = _remove(rest, part * k)
        if len(left) < need or (not tail and left):
            continue
        value = part[0] if len(part) == 1 else (1, sym.name, tuple(part), sym)
        s2 = dict(sigma)
        s2[name] = value
        if tail:
            yield from _share(sym, tail, left, s2)
        else:
            yield s2


def ac_match_canonical(p: tuple, s: tuple) -> Iterator[dict]:
    """Distinct canonical matchers of canonical pattern p onto s."""
    seen = set()
    for sigma in _match(p, s, {}):
        key = tuple(sorted(sigma.items(), key=lambda kv: kv[0]))
        if key not in seen:
            seen.add(key)
            yield sigma


def to_subst(sigma: Dict[str, tuple]) -> Subst:
    return {Var(n): from_canonical(c) for n, c in sigma.items() if c != (0, n)}


def ac_match(pattern: Term, subject: Term) -> List[Subst]:
    """All σ with pattern·σ ∼AC subject, one per AC class of bindings."""
    return [to_subst(s) for s in ac_match_canonical(canonical(pattern), canonical(subject))]


# --------------------------------------------------------- AC equivalence class

def _axiom_steps(t: Term) -> Iterator[Term]:
    for p in fun_positions(t):
        u = subterm_at(t, p)
        sym = u.symbol
        if sym.is_c:
            a, b = u.args
            yield replace_at(t, p, Fun(sym, (b, a)))
        if sym.is_ac:
            a, b = u.args
            if not a.is_var and a.symbol == sym:
                yield replace_at(t, p, Fun(sym, (a.args[0], Fun(sym, (a.args[1], b)))))
            if not b.is_var and b.symbol == sym:
                yield replace_at(t, p, Fun(sym, (Fun(sym, (a, b.args[0])), b.args[1])))


def ac_class_enumerate(t: Term, bound: int = 100000) -> set:
    """Closure of {t} under the AC (and C) axioms applied at any position."""
    seen = {t}
    todo = deque([t])
    while todo:
        u = todo.popleft()
        for v in _axiom_steps(u):
            if v not in seen:
                seen.add(v)
                if len(seen) > bound:
                    raise ValueError(f"AC class of {t} exceeds {bound} terms")
                todo.append(v)
    return seen


# -------------------------------------------------------------- extensions

class ExtendedSystem:
    """Rules together with one extension per rule whose lhs root is AC."""

    def __init__(self, rules: Sequence[Rule]):
        self.rules = list(rules)
        self.extensions: List[Tuple[Rule, Rule]] = []
        for r in self.rules:
            ext = extension_of(r)
            if ext is not None:
                self.extensions.append((ext, r))

    def all_rules(self) -> List[Rule]:
        return self.rules + [e for e, _ in self.extensions]

    def parent(self, rule: Rule) -> Rule:
        for e, p in self.extensions:
            if e == rule:
                return p
        return rule


def extension_of(rule: Rule) -> Optional[Rule]:
    sym = rule.lhs.symbol
    if not sym.is_ac:
        return None
    used = {v.name for v in var_list(rule.lhs)}
    name = next((n for n in ("z", "w", "u", "v", "y", "x") if n not in used), None)
    if name is None:
        name = fresh_names(["z"], used)["z"]
    z = Var(name)
    return Rule(Fun(sym, (rule.lhs, z)), Fun(sym, (rule.rhs, z)))


def extend_rules(rules: Sequence[Rule]) -> ExtendedSystem:
    return ExtendedSystem(rules)


# ----------------------------------------------------------------- rewriting

class Step(NamedTuple):
    pos: Position
    rule: Rule
    subst: Subst
    result: Term

    @property
    def canonical(self) -> tuple:
        return canonical(self.result)


class Rewriter:
    """Rewriting and normalization with a fixed rule set and relation.

    Normal forms are memoized per rewriter, so subterms are never scanned
    twice.  ``fuel`` bounds the number of rewrite steps of one ``normalize``
    call.
    """

    def __init__(self, rules: Sequence[Rule], kind=Relation.PLAIN, fuel=DEFAULT_FUEL):
        self.kind = Relation.parse(kind)
        self.rules = list(rules)
        self.fuel = fuel
        self.steps_taken = 0
        if self.kind is Relation.MODULO:
            self.active = ExtendedSystem(self.rules).all_rules()
        else:
            self.active = self.rules
        self.index: Dict[str, List[Rule]] = {}
        for r in self.active:
            self.index.setdefault(r.lhs.symbol.name, []).append(r)
        self._canon_lhs = {r: canonical(r.lhs) for r in self.active}
        self._memo: dict = {}
        self._budget = 0

    # stepping on binary positions
    def steps(self, t: Term) -> Iterator[Step]:
        for p in fun_positions(t):
            u = subterm_at(t, p)
            for r in self.index.get(u.symbol.name, ()):
                if self.kind is Relation.PLAIN:
                    sigma = match_syntactic(r.lhs, u)
                    matches = [] if sigma is None else [sigma]
                else:
                    matches = ac_match(r.lhs, u)
                for sigma in matches:
                    yield Step(p, r, sigma, replace_at(t, p, apply_subst(r.rhs, sigma)))

    def is_reducible_at_root(self, t: Term) -> bool:
        if t.is_var:
            return False
        for r in self.index.get(t.symbol.name, ()):
            if self.kind is Relation.PLAIN:
                if match_syntactic(r.lhs, t) is not None:
                    return True
            elif next(ac_match_canonical(self._canon_lhs[r], canonical(t)), None) is not None:
                return True
        return False

    def is_normal(self, t: Term) -> bool:
        if self.kind is Relation.MODULO:
            return self._canon_normal(canonical(t))
        stack = [t]
        while stack:
            u = stack.pop()
            if u.is_var:
                continue
            if self.is_reducible_at_root(u):
                return False
            stack.extend(u.args)
        return True

    def _canon_normal(self, c) -> bool:
        if c[0] == 0:
            return True
        if not all(self._canon_normal(a) for a in c[2]):
            return False
        for r in self.index.get(c[1], ()):
            if next(ac_match_canonical(self._canon_lhs[r], c), None) is not None:
                return False
        return True

    def _tick(self):
        self._budget -= 1
        self.steps_taken += 1
        if self._budget < 0:
            raise FuelExhausted(f"more than {self.fuel} rewrite steps")

    def normalize(self, t: Term) -> Term:
        self._budget = self.fuel
        if self.kind is Relation.MODULO:
            return from_canonical(self._nf_canon(canonical(t)))
        return self._nf(t)

    def normalize_canonical(self, t: Term) -> tuple:
        self._budget = self.fuel
        if self.kind is Relation.MODULO:
            return self._nf_canon(canonical(t))
        return canonical(self._nf(t))

    def _nf(self, t: Term) -> Term:
        if t.is_var:
            return t
        memo = self._memo
        done = memo.get(t)
        if done is not None:
            return done
        args = tuple(self._nf(a) for a in t.args)
        u = t if all(a is b for a, b in zip(args, t.args)) else Fun(t.symbol, args)
        res = u
        for r in self.index.get(u.symbol.name, ()):
            if self.kind is Relation.PLAIN:
                sigma = match_syntactic(r.lhs, u)
            else:
                cs = next(ac_match_canonical(self._canon_lhs[r], canonical(u)), None)
                sigma = None if cs is None else to_subst(cs)
            if sigma is not None:
                self._tick()
                res = self._nf(apply_subst(r.rhs, sigma))
                break
        memo[t] = res
        memo[u] = res
        return res

    def _nf_canon(self, c: tuple) -> tuple:
        if c[0] == 0:
            return c
        memo = self._memo
        done = memo.get(c)
        if done is not None:
            return done
        node = make_node(c[3], [self._nf_canon(a) for a in c[2]])
        res = node
        for r in self.index.get(node[1], ()):
            sigma = next(ac_match_canonical(self._canon_lhs[r], node), None)
            if sigma is not None:
                self._tick()
                res = self._nf_canon(subst_canonical(canonical(r.rhs), sigma))
                break
        memo[c] = res
        memo[node] = res
        return res


def rewrite_step(t: Term, rules: Sequence[Rule], kind=Relation.PLAIN) -> Iterator[Step]:
    return Rewriter(rules, kind).steps(t)


def normal_form(t: Term, rules: Sequence[Rule], kind=Relation.PLAIN,
                fuel: int = DEFAULT_FUEL) -> Term:
    return Rewriter(rules, kind, fuel).normalize(t)


def joinable_mod_ac(s: Term, t: Term, rules: Sequence[Rule],
                    fuel: int = DEFAULT_FUEL, rewriter: Optional[Rewriter] = None) -> bool:
    rw = rewriter or Rewriter(rules, Relation.PLAIN, fuel)
    return ac_equal(rw.normalize(s), rw.normalize(t))
