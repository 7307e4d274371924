"""A fully syntactic AC-compatible recursive path order.

The order works on flattened, sorted canonical forms (see ``ac``) and is
parametrized by a total precedence on symbol names.  For f = g an AC symbol,
an argument whose head is smaller than f may be replaced by one of its own
arguments (an "embedding"), and the number of arguments after flattening
counts, with a variable argument standing for at least one argument.
Commutative-only symbols use multiset status.

    s > t  iff
      1. some argument s_i >= t, or
      2. top(s) > top(t) and s > t_j for all j, or
      3. equal non-AC tops, arguments lex (multiset for C) greater, s > t_j, or
      4. equal AC tops and some embedding s' of s has s' >= t, or
      5. equal AC tops, s > every embedding of t, the arguments of s whose
         heads are not below f dominate those of t (multiset >=), and either
         the big-headed arguments dominate strictly, or s has more arguments,
         or as many and its argument multiset is greater.
"""

from __future__ import annotations

import time
from typing import Dict, List, Optional, Sequence

from .ac import canonical, make_node
from .terms import Rule, symbols


class AcRpo:
    def __init__(self, precedence: Dict[str, int]):
        self.prec = precedence
        self._memo: Dict[tuple, bool] = {}

    def rank(self, name):
        return self.prec.get(name, -1)

    # --- helpers on canonical nodes
    def _small(self, f, a) -> bool:
        return a[0] == 1 and self.rank(f) > self.rank(a[1])

    def embeddings(self, s) -> List[tuple]:
        f, sym, args = s[1], s[3], s[2]
        out = []
        for i, a in enumerate(args):
            if not self._small(f, a):
                continue
            rest = args[:i] + args[i + 1:]
            for v in a[2]:
                e = make_node(sym, list(rest) + [v])
                if e not in out:
                    out.append(e)
        return out

    def no_small_head(self, s):
        return [a for a in s[2] if not self._small(s[1], a)]

    def big_head(self, s):
        return [a for a in s[2] if a[0] == 1 and self.rank(a[1]) > self.rank(s[1])]

    @staticmethod
    def count(s):
        coeff: Dict[str, int] = {}
        const = 0
        for a in s[2]:
            if a[0] == 0:
                coeff[a[1]] = coeff.get(a[1], 0) + 1
            else:
                const += 1
        return coeff, const

    def count_cmp(self, s, t) -> str:
        cs, ks = self.count(s)
        ct, kt = self.count(t)
        diff = {v: cs.get(v, 0) - ct.get(v, 0) for v in set(cs) | set(ct)}
        if any(d < 0 for d in diff.values()):
            return "?"
        low = sum(diff.values()) + ks - kt
        return ">" if low > 0 else (">=" if low == 0 else "?")

    def mul_gt(self, m: Sequence, n: Sequence) -> bool:
        m, n = list(m), list(n)
        for a in list(m):
            if a in n:
                n.remove(a)
                m.remove(a)
        return bool(m) and all(any(self.gt(x, y) for x in m) for y in n)

    def mul_ge(self, m, n) -> bool:
        return sorted(m) == sorted(n) or self.mul_gt(m, n)

    def ge(self, s, t) -> bool:
        return s == t or self.gt(s, t)

    # --- the order itself
    def gt(self, s, t) -> bool:
        if s[0] == 0:
            return False
        key = (s, t)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._gt(s, t)
            self._memo[key] = hit
        return hit

    def _gt(self, s, t) -> bool:
        if s == t:
            return False
        if t[0] == 0:
            return _has_var(s, t[1])
        if any(self.ge(a, t) for a in s[2]):
            return True
        f, g = s[1], t[1]
        rf, rg = self.rank(f), self.rank(g)
        if f != g:
            return rf > rg and all(self.gt(s, b) for b in t[2])
        sym = s[3]
        if not sym.is_c:
            for a, b in zip(s[2], t[2]):
                if a != b:
                    return self.gt(a, b) and all(self.gt(s, c) for c in t[2])
            return False
        if not sym.is_ac:
            return self.mul_gt(s[2], t[2])
        if any(self.ge(e, t) for e in self.embeddings(s)):
            return True
        if not all(self.gt(s, e) for e in self.embeddings(t)):
            return False
        if not self.mul_ge(self.no_small_head(s), self.no_small_head(t)):
            return False
        if self.mul_gt(self.big_head(s), self.big_head(t)):
            return True
        c = self.count_cmp(s, t)
        if c == ">":
            return True
        return c == ">=" and self.mul_gt(s[2], t[2])

    def orients(self, rule: Rule) -> bool:
        return self.gt(canonical(rule.lhs), canonical(rule.rhs))


def _has_var(c, name) -> bool:
    if c[0] == 0:
        return c[1] == name
    return any(_has_var(a, name) for a in c[2])


class PrecedenceBudget(Exception):
    pass


def _rule_symbols(r: Rule) -> List[str]:
    out: Dict[str, None] = {}
    for s in symbols(r.lhs) + symbols(r.rhs):
        out.setdefault(s.name, None)
    return list(out)


def _preference(rules: Sequence[Rule], names: List[str]) -> List[str]:
    """Heuristic initial order: lhs roots above what their rhs introduces."""
    score = {n: 0 for n in names}
    for r in rules:
        root = r.lhs.symbol.name
        rhs_names = {s.name for s in symbols(r.rhs)}
        lhs_names = {s.name for s in symbols(r.lhs)}
        for n in rhs_names - {root}:
            score[root] += 1
            score[n] -= 1
        for n in lhs_names - rhs_names:
            score[n] += 1
    arity = {}
    for r in rules:
        for s in symbols(r.lhs) + symbols(r.rhs):
            arity[s.name] = s.arity
    return sorted(names, key=lambda n: (-score[n], -arity.get(n, 0), n))


def find_precedence(rules: Sequence[Rule], max_nodes: int = 50000,
                    deadline: Optional[float] = None) -> Optional[Dict[str, int]]:
    """A total precedence under which every rule decreases, or None.

    Symbols are placed from the top; a rule is checked as soon as at most one
    of its symbols is still unplaced (that one is then the smallest).
    """
    names: List[str] = []
    for r in rules:
        for n in _rule_symbols(r):
            if n not in names:
                names.append(n)
    order = _preference(rules, names)
    rsyms = [set(_rule_symbols(r)) for r in rules]
    nodes = [0]
    placed: List[str] = []

    def consistent() -> bool:
        rank = {n: len(names) - i for i, n in enumerate(placed)}
        placed_set = set(placed)
        cmp = AcRpo(rank)
        for r, ss in zip(rules, rsyms):
            if len(ss - placed_set) <= 1 and not cmp.orients(r):
                return False
        return True

    def go() -> bool:
        if len(placed) == len(names):
            return True
        for n in order:
            if n in placed:
                continue
            nodes[0] += 1
            if nodes[0] > max_nodes:
                raise PrecedenceBudget()
            if deadline is not None and nodes[0] % 64 == 0 and time.monotonic() > deadline:
                raise PrecedenceBudget()
            placed.append(n)
            if consistent() and go():
                return True
            placed.pop()
        return False

    if go():
        return {n: len(names) - i for i, n in enumerate(placed)}
    return None
