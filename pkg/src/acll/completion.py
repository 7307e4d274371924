"""Completion of left-linear systems modulo AC with a constraint system.

The main loop follows the usual eager strategy: simplify and delete
equations, pick the smallest equation or pending rule, orient it, deduce
its critical pairs (peaks become equations, cliffs become pending rules),
then compose and collapse.  Every orientation is recorded in a constraint
system C and all of C is handed to the termination oracle at once.

Engine "b" deduces cliffs as equations and rewrites with plain steps only.
"""

from __future__ import annotations

import multiprocessing
import time
from queue import Empty
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .ac import (DEFAULT_FUEL, FuelExhausted, Relation, Rewriter, ac_equal,
                 canonical, joinable_mod_ac)
from .critical_pairs import cp_between, cp_pm, critical_pairs
from .termination import ConstraintSystem, Oracle, make_oracle
from .terms import (Equation, Rule, Term, is_linear, is_valid_rule,
                    normalize_vars, size)
from .wst import print_wst


@dataclass
class EngineConfig:
    engine: str = "a"
    prime_only: bool = False
    simp: Relation = Relation.PLAIN
    prefer: str = "l2r"
    max_iterations: int = 2500
    timeout: float = 60.0
    order: str = "auto"
    interactive_prover: bool = False
    prover_timeout_ms: int = 10000
    fuel: int = DEFAULT_FUEL

    def __post_init__(self):
        self.engine = self.engine.lower()
        if self.engine not in ("a", "b"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.prefer not in ("l2r", "r2l"):
            raise ValueError(f"unknown preference {self.prefer!r}")
        self.simp = Relation.parse(self.simp)
        if self.engine == "b":
            self.simp = Relation.PLAIN

    def oracle(self) -> Oracle:
        return make_oracle(self.order, self.interactive_prover, self.prover_timeout_ms)


@dataclass(eq=False)
class Item:
    """An equation in E or a pending rule in P, with its creation age."""
    lhs: Term
    rhs: Term
    age: int

    @property
    def weight(self):
        return size(self.lhs) + size(self.rhs)


def _tidy(lhs, rhs):
    return normalize_vars(lhs, rhs)


def _eq_key(lhs, rhs):
    return frozenset((normalize_vars(lhs, rhs), normalize_vars(rhs, lhs)))


class Ledger:
    """Everything that ever was an equation, and everything that ever was a rule."""

    def __init__(self):
        self.equations = set()
        self.rules = set()

    def add_equation(self, lhs, rhs):
        self.equations.add(normalize_vars(lhs, rhs))
        self.equations.add(normalize_vars(rhs, lhs))

    def add_rule(self, rule: Rule):
        self.rules.add(normalize_vars(rule.lhs, rule.rhs))
        self.rules.add(normalize_vars(rule.rhs, rule.lhs))

    def has_equation_or_rule(self, lhs, rhs) -> bool:
        key = normalize_vars(lhs, rhs)
        return key in self.equations or key in self.rules

    def has_rule(self, lhs, rhs) -> bool:
        return normalize_vars(lhs, rhs) in self.rules


@dataclass
class CompletionState:
    E: List[Item] = field(default_factory=list)
    P: List[Item] = field(default_factory=list)
    R: List[Rule] = field(default_factory=list)
    C: ConstraintSystem = field(default_factory=ConstraintSystem)
    ledger: Ledger = field(default_factory=Ledger)
    iteration: int = 0
    clock: int = 0
    stats: Dict[str, object] = field(default_factory=dict)

    def tick(self) -> int:
        self.clock += 1
        return self.clock

    def bump(self, key, n=1):
        self.stats[key] = self.stats.get(key, 0) + n

    def add_equation(self, lhs, rhs, age=None):
        lhs, rhs = _tidy(lhs, rhs)
        self.E.append(Item(lhs, rhs, self.tick() if age is None else age))
        self.ledger.add_equation(lhs, rhs)

    def add_pending(self, rule: Rule) -> bool:
        lhs, rhs = _tidy(rule.lhs, rule.rhs)
        key = (lhs, rhs)
        if any(_tidy(p.lhs, p.rhs) == key for p in self.P) or \
                any(_tidy(r.lhs, r.rhs) == key for r in self.R):
            return False
        self.P.append(Item(lhs, rhs, self.tick()))
        self.ledger.add_rule(Rule(lhs, rhs))
        return True

    def add_rule(self, rule: Rule):
        rule = Rule(*_tidy(rule.lhs, rule.rhs))
        self.R.append(rule)
        self.C.add(rule)
        self.ledger.add_rule(rule)
        return rule

    def pending_rules(self) -> List[Rule]:
        return [Rule(p.lhs, p.rhs) for p in self.P]

    def dump(self) -> str:
        """WST text with R as rules, E as equations, P and C as extra blocks."""
        entries = list(self.R) + [Equation(e.lhs, e.rhs) for e in self.E]
        return print_wst(entries, pending=self.pending_rules(), constraints=list(self.C))


@dataclass
class Outcome:
    status: str
    rules: List[Rule]
    state: CompletionState
    stats: Dict[str, object]
    reason: str = ""
    peer: Optional["Outcome"] = None

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    @property
    def constraints(self) -> List[Rule]:
        return list(self.state.C)

    def __repr__(self):
        extra = f" ({self.reason})" if self.reason else ""
        return f"<{self.status}{extra}: {len(self.rules)} rules>"


def Completed(state, stats):
    return Outcome("completed", list(state.R), state, stats)


def Failed(state, stats, reason):
    return Outcome("failed", list(state.R), state, stats, reason)


def Exhausted(state, stats, bound):
    return Outcome("exhausted", list(state.R), state, stats, bound)


# ------------------------------------------------------------------ steps

def simplify(state: CompletionState, cfg: EngineConfig):
    """Rewrite both sides of every equation to normal form w.r.t. R and P."""
    rules = state.R + state.pending_rules()
    if not rules:
        return
    rw = Rewriter(rules, cfg.simp, cfg.fuel)
    out = []
    for e in state.E:
        lhs, rhs = rw.normalize(e.lhs), rw.normalize(e.rhs)
        if canonical(lhs) == canonical(e.lhs) and canonical(rhs) == canonical(e.rhs):
            out.append(e)
            continue
        state.bump("simplifications")
        lhs, rhs = _tidy(lhs, rhs)
        state.ledger.add_equation(lhs, rhs)
        out.append(Item(lhs, rhs, e.age))
    state.E = out


def delete(state: CompletionState):
    """Drop AC-equal equations and repeated equations (modulo renaming)."""
    seen = set()
    out = []
    for e in state.E:
        if ac_equal(e.lhs, e.rhs):
            state.bump("deleted")
            continue
        key = _eq_key(e.lhs, e.rhs)
        if key in seen:
            continue
        seen.add(key)
        out.append(e)
    state.E = out


def _candidates(lhs, rhs, prefer):
    return [(lhs, rhs), (rhs, lhs)] if prefer == "l2r" else [(rhs, lhs), (lhs, rhs)]


def orient_equation(state: CompletionState, item: Item, oracle: Oracle, prefer="l2r",
                    reasons: Optional[List[str]] = None) -> Optional[Rule]:
    """A rule for ``item`` that passes the linearity gate and the oracle, or None."""
    reasons = [] if reasons is None else reasons
    for lhs, rhs in _candidates(item.lhs, item.rhs, prefer):
        if not is_valid_rule(lhs, rhs):
            reasons.append("invalid")
            continue
        if not is_linear(lhs):
            reasons.append("nonlinear")
            continue
        rule = Rule(lhs, rhs)
        state.bump("oracle_calls")
        ans = oracle.check(state.C.with_rule(rule))
        if ans.yes:
            return rule
        reasons.append("oracle")
    return None


def choose_and_orient(state: CompletionState, oracle: Oracle, prefer):
    """Orient the smallest orientable element of E and P.

    Returns (rule, None) on success or (None, failure reason).
    """
    pool = [(it.weight, it.age, 0, it) for it in state.E] + \
           [(it.weight, it.age, 1, it) for it in state.P]
    pool.sort(key=lambda t: t[:3])
    reasons: List[str] = []
    for _, _, is_pending, it in pool:
        if oracle.deadline is not None and time.monotonic() > oracle.deadline:
            return None, "timeout"
        if is_pending:
            state.P.remove(it)
            rule = state.add_rule(Rule(it.lhs, it.rhs))
            state.bump("activated")
            return rule, None
        rule = orient_equation(state, it, oracle, prefer, reasons)
        if rule is not None:
            state.E.remove(it)
            state.bump("oriented")
            return state.add_rule(rule), None
        state.bump("postponed")
    if reasons and all(r in ("nonlinear", "invalid") for r in reasons):
        return None, "nonlinear-lhs-only"
    if "oracle" in reasons:
        return None, "oracle-rejects-all"
    return None, "no-orientable-equation"


def deduce(state: CompletionState, rho: Rule, cfg: EngineConfig):
    """Critical pairs of rho with itself and with R, and cliffs of rho with AC."""
    others = [r for r in state.R if r is not rho]
    prime = cfg.prime_only
    ref = state.R
    peaks = cp_between([rho], [rho], prime, ref) + cp_between(others, [rho], prime, ref) + \
        cp_between([rho], others, prime, ref)
    state.bump("critical_pairs", len(peaks))
    for cp in peaks:
        state.add_equation(cp.eq.lhs, cp.eq.rhs)
    cliffs = cp_pm([rho], prime=prime, reference=ref)
    state.bump("cliffs", len(cliffs))
    for cp in cliffs:
        if cfg.engine == "b":
            state.add_equation(cp.eq.lhs, cp.eq.rhs)
            continue
        lhs, rhs = (cp.eq.rhs, cp.eq.lhs) if cp.origin == "RB" else (cp.eq.lhs, cp.eq.rhs)
        if ac_equal(lhs, rhs):
            continue
        if is_valid_rule(lhs, rhs):
            state.add_pending(Rule(lhs, rhs))
        else:
            state.add_equation(lhs, rhs)


def compose(state: CompletionState, cfg: EngineConfig):
    """Normalize every right-hand side in R and P w.r.t. R and P."""
    rw = Rewriter(state.R + state.pending_rules(), cfg.simp, cfg.fuel)
    new_r = []
    for r in state.R:
        rhs = rw.normalize(r.rhs)
        if canonical(rhs) != canonical(r.rhs):
            state.bump("composed")
            r = Rule(*_tidy(r.lhs, rhs))
            state.C.add(r)
            state.ledger.add_rule(r)
        new_r.append(r)
    for p in state.P:
        rhs = rw.normalize(p.rhs)
        if canonical(rhs) != canonical(p.rhs):
            state.bump("composed")
            p.lhs, p.rhs = _tidy(p.lhs, rhs)
            state.ledger.add_rule(Rule(p.lhs, p.rhs))
    state.R = new_r


def collapse(state: CompletionState, rho_lhs: Term):
    """Turn rules with reducible lhs back into equations (plain steps only).

    R is collapsed with the newest rule only, P with all of R.
    """
    rho = next(r for r in state.R if r.lhs == rho_lhs)
    by_rho = Rewriter([rho])
    keep = []
    for r in state.R:
        if r is not rho:
            step = next(by_rho.steps(r.lhs), None)
            if step is not None:
                state.bump("collapsed")
                state.add_equation(step.result, r.rhs)
                continue
        keep.append(r)
    state.R = keep
    by_r = Rewriter(state.R)
    keep_p = []
    for p in state.P:
        step = next(by_r.steps(p.lhs), None)
        if step is not None:
            state.bump("collapsed")
            state.add_equation(step.result, p.rhs)
            continue
        keep_p.append(p)
    state.P = keep_p


# -------------------------------------------------------------- fairness

def fairness_violations(rules: Sequence[Rule], ledger: Ledger, fuel=DEFAULT_FUEL) -> List[str]:
    """Prime critical pairs of ``rules`` neither joinable nor seen in the run."""
    rules = list(rules)
    rw = Rewriter(rules, Relation.PLAIN, fuel)
    bad = []
    for cp in critical_pairs(rules, prime=True):
        s, t = cp.eq.lhs, cp.eq.rhs
        if not joinable_mod_ac(s, t, rules, rewriter=rw) and not ledger.has_equation_or_rule(s, t):
            bad.append(f"critical pair {s} == {t}")
    for cp in cp_pm(rules, prime=True):
        s, t = cp.eq.lhs, cp.eq.rhs
        if not joinable_mod_ac(s, t, rules, rewriter=rw) and not ledger.has_rule(s, t):
            bad.append(f"cliff {s} == {t}")
    return bad


def fairness_check(rules: Sequence[Rule], ledger: Ledger) -> bool:
    return not fairness_violations(rules, ledger)


# -------------------------------------------------------------- main loop

def _as_pairs(equations) -> List[Tuple[Term, Term]]:
    out = []
    for e in equations:
        if isinstance(e, (Equation, Rule)):
            out.append((e.lhs, e.rhs))
        else:
            out.append(tuple(e))
    return out


def run_completion(equations: Iterable, cfg: Optional[EngineConfig] = None,
                   oracle: Optional[Oracle] = None, cancel=None) -> Outcome:
    """Complete the given equations (or pairs of terms).

    ``cancel`` may be any object with ``is_set()``; it is polled once per
    iteration.
    """
    cfg = cfg or EngineConfig()
    own_oracle = oracle is None
    oracle = oracle or cfg.oracle()
    state = CompletionState()
    for lhs, rhs in _as_pairs(equations):
        state.add_equation(lhs, rhs)
    start = time.monotonic()
    oracle.set_deadline(start + cfg.timeout)

    def stats():
        s = {"iterations": state.iteration, "rules": len(state.R),
             "equations": len(state.E), "pending": len(state.P),
             "constraints": len(state.C), "oracle_queries": oracle.queries}
        for k in ("critical_pairs", "cliffs", "oriented", "activated", "postponed",
                  "composed", "collapsed", "simplifications", "deleted"):
            s[k] = state.stats.get(k, 0)
        s["seconds"] = round(time.monotonic() - start, 3)
        return s

    try:
        while True:
            if cancel is not None and cancel.is_set():
                return Exhausted(state, stats(), "cancelled")
            if time.monotonic() - start > cfg.timeout:
                return Exhausted(state, stats(), "timeout")
            if state.iteration >= cfg.max_iterations:
                return Exhausted(state, stats(), "iterations")
            state.iteration += 1
            simplify(state, cfg)
            delete(state)
            if not state.E and not state.P:
                bad = fairness_violations(state.R, state.ledger, cfg.fuel)
                if bad:
                    return Failed(state, stats(), "fairness-violation: " + "; ".join(bad))
                return Completed(state, stats())
            rho, why = choose_and_orient(state, oracle, cfg.prefer)
            if why == "timeout" or (rho is None and time.monotonic() - start > cfg.timeout):
                return Exhausted(state, stats(), "timeout")
            if rho is None:
                return Failed(state, stats(), why)
            deduce(state, rho, cfg)
            compose(state, cfg)
            collapse(state, rho.lhs)
    except FuelExhausted:
        return Exhausted(state, stats(), "fuel")
    finally:
        oracle.set_deadline(None)
        if own_oracle:
            oracle.close()


# ------------------------------------------------------------------ racing

def _worker(equations, cfg, cancel, queue):
    try:
        out = run_completion(equations, cfg, cancel=cancel)
    except Exception as exc:  # reported to the parent as a failure
        out = ("error", repr(exc))
    queue.put((cfg.prefer, out))


def race_preferences(equations: Iterable, cfg: Optional[EngineConfig] = None) -> Outcome:
    """Run the left-to-right and right-to-left strategies in two processes.

    The first Completed outcome wins and the other worker is cancelled.  If
    neither completes, the left-to-right outcome is returned with the other
    one attached as ``peer``.
    """
    from dataclasses import replace
    cfg = cfg or EngineConfig()
    equations = _as_pairs(equations)
    ctx = multiprocessing.get_context("fork")
    cancel = ctx.Event()
    queue = ctx.Queue()
    procs = [ctx.Process(target=_worker, args=(equations, replace(cfg, prefer=p), cancel, queue),
                         daemon=True)
             for p in ("l2r", "r2l")]
    for p in procs:
        p.start()
    results: Dict[str, Outcome] = {}
    winner = None
    try:
        while len(results) < 2:
            try:
                pref, out = queue.get(timeout=cfg.timeout + 30)
            except Empty:
                break
            if isinstance(out, tuple):
                dummy = CompletionState()
                out = Failed(dummy, {}, f"worker error {out[1]}")
            results[pref] = out
            if out.completed:
                winner = out
                cancel.set()
                break
    finally:
        cancel.set()
        for p in procs:
            p.join(timeout=5)
            if p.is_alive():
                p.terminate()
    if winner is not None:
        winner.stats["winner"] = next(k for k, v in results.items() if v is winner)
        return winner
    if not results:
        return Exhausted(CompletionState(), {}, "no worker answered")
    first = results.get("l2r") or next(iter(results.values()))
    first.peer = results.get("r2l")
    return first
