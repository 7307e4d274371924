"""Church-Rosser modulo AC, validity of equations, and an AC-loop finder."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .ac import (DEFAULT_FUEL, FuelExhausted, Relation, Rewriter, ac_equal,
                 canon_str, canonical)
from .critical_pairs import CriticalPair, cp_pm, critical_pairs
from .terms import Equation, Rule, Term, is_linear


@dataclass
class CrVerdict:
    verdict: str  # "yes", "no" or "indeterminate"
    reason: str = ""
    witness: Optional[CriticalPair] = None
    loop: Optional[List[Term]] = None
    checked: int = 0

    @property
    def yes(self) -> bool:
        return self.verdict == "yes"

    def __str__(self):
        if self.yes:
            return "YES (Church-Rosser modulo AC)"
        if self.verdict == "no":
            w = self.witness.eq
            return f"NO (critical pair {w.lhs} == {w.rhs} is not joinable)"
        return f"MAYBE ({self.reason})"


def reachable(t: Term, rewriter: Rewriter, limit: int = 20000) -> Optional[set]:
    """Canonical forms of all reducts of t (None when more than ``limit``)."""
    seen = {canonical(t)}
    todo = deque([t])
    while todo:
        u = todo.popleft()
        for step in rewriter.steps(u):
            c = canonical(step.result)
            if c not in seen:
                if len(seen) >= limit:
                    return None
                seen.add(c)
                todo.append(step.result)
    return seen


def joinable(s: Term, t: Term, rules: Sequence[Rule], rewriter: Optional[Rewriter] = None,
             limit: int = 20000) -> Optional[bool]:
    """Whether s ->* . ~AC . <-* t with plain steps; None if the search is cut off.

    Normal forms are compared first; the exhaustive reduct search is only
    needed when the system may have several normal forms for a term.
    """
    rw = rewriter or Rewriter(rules)
    if ac_equal(rw.normalize(s), rw.normalize(t)):
        return True
    left = reachable(s, rw, limit)
    right = reachable(t, rw, limit) if left is not None else None
    if left is None or right is None:
        return None
    return not left.isdisjoint(right)


def is_left_linear(rules: Sequence[Rule]) -> bool:
    return all(is_linear(r.lhs) for r in rules)


def church_rosser_mod_ac(rules: Sequence[Rule], oracle=None, prime_only: bool = True,
                         fuel: int = DEFAULT_FUEL, loop_depth: int = 3) -> CrVerdict:
    """Decide Church-Rosser modulo AC for a left-linear, AC-terminating system.

    All critical pairs of R with itself and with the AC axioms must be
    joinable modulo AC.  Without a termination proof the answer is
    indeterminate; a loop found by ``find_ac_loop`` is attached then.
    """
    from .termination import make_oracle
    rules = list(rules)
    if not is_left_linear(rules):
        return CrVerdict("indeterminate", "not left-linear")
    if oracle is None:
        oracle = make_oracle("auto")
    ans = oracle.check(rules)
    if not ans.yes:
        loop = find_ac_loop(rules, loop_depth)
        if loop is not None:
            return CrVerdict("indeterminate", f"not AC-terminating: {loop[0]} loops", loop=loop)
        return CrVerdict("indeterminate", f"AC-termination not shown ({ans.verdict.value})")
    rw = Rewriter(rules, Relation.PLAIN, fuel)
    pairs = critical_pairs(rules, prime=prime_only) + cp_pm(rules, prime=prime_only)
    try:
        for n, cp in enumerate(pairs, 1):
            j = joinable(cp.eq.lhs, cp.eq.rhs, rules, rw)
            if j is None:
                return CrVerdict("indeterminate", "joinability search cut off", checked=n)
            if not j:
                return CrVerdict("no", witness=cp, checked=n)
    except FuelExhausted as exc:
        return CrVerdict("indeterminate", str(exc))
    return CrVerdict("yes", checked=len(pairs))


@dataclass
class GoalResult:
    valid: bool
    lhs_nf: Term
    rhs_nf: Term
    lhs_canonical: str = field(default="")
    rhs_canonical: str = field(default="")

    def __str__(self):
        word = "VALID" if self.valid else "INVALID"
        return f"{word} ({self.lhs_nf} vs {self.rhs_nf})"


def decide_validity(rules: Sequence[Rule], s: Term, t: Term,
                    fuel: int = DEFAULT_FUEL) -> GoalResult:
    """s = t holds in E and AC iff the plain normal forms are AC-equal.

    Only meaningful when ``rules`` is AC-complete for E.
    """
    rw = Rewriter(rules, Relation.PLAIN, fuel)
    u, v = rw.normalize(s), rw.normalize(t)
    cu, cv = canon_str(canonical(u)), canon_str(canonical(v))
    return GoalResult(cu == cv, u, v, cu, cv)


def find_ac_loop(rules: Sequence[Rule], depth: int = 3, start: Optional[Term] = None,
                 max_terms: int = 5000) -> Optional[List[Term]]:
    """A sequence t0 -> t1 -> ... -> tk (k <= depth) with tk ~AC t0, or None.

    Breadth-first from ``start`` or else from every left-hand side at once,
    so a shortest loop is found first.  Plain steps are tried before steps
    on AC-equivalent redexes; either kind is an R/AC step.
    """
    if depth <= 0:
        return None
    plain, ps = Rewriter(rules), Rewriter(rules, Relation.PS)

    def successors(u):
        yield from plain.steps(u)
        yield from ps.steps(u)

    starts = [start] if start is not None else [r.lhs for r in rules]
    searches = []
    for t in starts:
        searches.append((canonical(t), {canonical(t)}, [(t, [t])]))
    for _ in range(depth):
        advanced = []
        for origin, seen, level in searches:
            nxt = []
            for u, path in level:
                for step in successors(u):
                    c = canonical(step.result)
                    if c == origin:
                        return path + [step.result]
                    if c not in seen and len(seen) < max_terms:
                        seen.add(c)
                        nxt.append((step.result, path + [step.result]))
            if nxt:
                advanced.append((origin, seen, nxt))
        searches = advanced
    return None


def replay_loop(loop: Sequence[Term], rules: Sequence[Rule]) -> bool:
    """Check that consecutive terms are single R/AC steps and the ends agree."""
    if len(loop) < 2 or not ac_equal(loop[0], loop[-1]):
        return False
    rw = Rewriter(rules, Relation.PS)
    for a, b in zip(loop, loop[1:]):
        cb = canonical(b)
        if not any(canonical(st.result) == cb for st in rw.steps(a)):
            return False
    return True


def goal_equation(problem, text: str) -> Equation:
    return problem.parse_equation(text)
