"""Termination oracles answering "is this rule set terminating modulo AC?".

Every oracle maps a list of rules to a Verdict.  Only YES permits an
orientation; the other verdicts differ only in diagnostics.  Oracles are
described by short spec strings so that worker processes can build their
own instances:

    auto                 polynomial search, then the AC path order
    poly-search[:BOUND]  polynomial interpretations only
    poly-file:PATH       a fixed interpretation read from PATH
    acrpo                the AC path order with precedence search
    external:CMD         a WST-speaking termination prover
"""

from __future__ import annotations

import enum
import os
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .acrpo import PrecedenceBudget, find_precedence
from .poly import (PolyInterp, SearchBudget, parse_interpretation,
                   poly_check_ac_compatible, poly_orients, poly_search)
from .terms import Rule, normalize_vars
from .wst import print_wst


class Verdict(enum.Enum):
    YES = "YES"
    MAYBE = "MAYBE"
    NO = "NO"
    TIMEOUT = "TIMEOUT"
    ERROR = "ERROR"


@dataclass
class Answer:
    verdict: Verdict
    detail: str = ""
    witness: object = None

    @property
    def yes(self) -> bool:
        return self.verdict is Verdict.YES


class ConstraintSystem:
    """Ordered, duplicate-free (modulo renaming) list of rules; only grows."""

    def __init__(self, rules: Sequence[Rule] = ()):
        self.rules: List[Rule] = []
        self._keys = set()
        for r in rules:
            self.add(r)

    def add(self, rule: Rule) -> bool:
        key = normalize_vars(rule.lhs, rule.rhs)
        if key in self._keys:
            return False
        self._keys.add(key)
        self.rules.append(rule)
        return True

    def with_rule(self, rule: Rule) -> List[Rule]:
        if normalize_vars(rule.lhs, rule.rhs) in self._keys:
            return list(self.rules)
        return self.rules + [rule]

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def serialize(rules: Sequence[Rule]) -> str:
    """WST text of a termination problem; also the cache key."""
    tidy = [Rule(*normalize_vars(r.lhs, r.rhs)) for r in rules]
    return print_wst(tidy)


class Oracle:
    name = "oracle"

    def __init__(self):
        self.queries = 0
        self.deadline: Optional[float] = None  # time.monotonic() value
        self._cache: Dict[str, Answer] = {}

    def check(self, rules: Sequence[Rule]) -> Answer:
        rules = list(rules)
        if not rules:
            return Answer(Verdict.YES, "empty system")
        key = serialize(rules)
        hit = self._cache.get(key)
        if hit is None:
            self.queries += 1
            hit = self._check(rules)
            if hit.verdict is not Verdict.TIMEOUT:
                self._cache[key] = hit
        return hit

    def set_deadline(self, deadline: Optional[float]):
        self.deadline = deadline

    def _check(self, rules: List[Rule]) -> Answer:
        raise NotImplementedError

    def close(self):
        pass


class PolyOracle(Oracle):
    name = "poly"

    def __init__(self, bound: int = 2, fixed: Optional[PolyInterp] = None,
                 max_nodes: int = 200000):
        super().__init__()
        self.bound = bound
        self.fixed = fixed
        self.max_nodes = max_nodes
        self._last: Optional[PolyInterp] = None

    def _check(self, rules):
        from .critical_pairs import signature
        syms = signature(rules)
        if self.fixed is not None:
            missing = [s.name for s in syms if s.name not in self.fixed]
            if missing:
                return Answer(Verdict.ERROR, f"no interpretation for {', '.join(missing)}")
            if not poly_check_ac_compatible(self.fixed, syms):
                return Answer(Verdict.NO, "interpretation is not AC-compatible")
            bad = [r for r in rules if not poly_orients(self.fixed, r)]
            if bad:
                return Answer(Verdict.MAYBE, f"does not orient {bad[0]}")
            return Answer(Verdict.YES, "fixed interpretation", self.fixed)
        try:
            found = poly_search(rules, self.bound, max_nodes=self.max_nodes, hint=self._last,
                                deadline=self.deadline)
        except SearchBudget:
            return Answer(Verdict.TIMEOUT, "polynomial search budget exhausted")
        if found is None:
            return Answer(Verdict.MAYBE, f"no interpretation with coefficients <= {self.bound}")
        self._last = found
        return Answer(Verdict.YES, f"polynomial interpretation {found}", found)


class AcRpoOracle(Oracle):
    name = "acrpo"

    def __init__(self, max_nodes: int = 50000):
        super().__init__()
        self.max_nodes = max_nodes
        self._last: Optional[Dict[str, int]] = None

    def _check(self, rules):
        from .acrpo import AcRpo
        if self._last is not None:
            order = AcRpo(self._last)
            names = {s for r in rules for s in _names(r)}
            if names <= set(self._last) and all(order.orients(r) for r in rules):
                return Answer(Verdict.YES, f"AC-RPO precedence {_prec_str(self._last)}", self._last)
        try:
            prec = find_precedence(rules, self.max_nodes, self.deadline)
        except PrecedenceBudget:
            return Answer(Verdict.TIMEOUT, "precedence search budget exhausted")
        if prec is None:
            return Answer(Verdict.MAYBE, "no AC-RPO precedence")
        self._last = prec
        return Answer(Verdict.YES, f"AC-RPO precedence {_prec_str(prec)}", prec)


def _names(rule):
    from .terms import symbols
    return [s.name for s in symbols(rule.lhs) + symbols(rule.rhs)]


def _prec_str(prec):
    return " > ".join(sorted(prec, key=lambda n: -prec[n]))


class FirstYesOracle(Oracle):
    """Asks each oracle in turn and accepts the first YES.

    The oracle that answered YES last is asked first next time; any YES is
    a termination proof of the whole system, so the order only affects speed
    and which proof is found.
    """

    name = "auto"

    def __init__(self, oracles: Sequence[Oracle]):
        super().__init__()
        self.oracles = list(oracles)

    def _check(self, rules):
        details = []
        for o in list(self.oracles):
            ans = o.check(rules)
            if ans.yes:
                self.oracles.remove(o)
                self.oracles.insert(0, o)
                return ans
            details.append(f"{o.name}: {ans.verdict.value} {ans.detail}".strip())
        return Answer(Verdict.MAYBE, "; ".join(details))

    def set_deadline(self, deadline):
        self.deadline = deadline
        for o in self.oracles:
            o.set_deadline(deadline)

    def close(self):
        for o in self.oracles:
            o.close()


def parse_verdict(output: str) -> Answer:
    words = output.split()
    if not words:
        return Answer(Verdict.ERROR, "empty prover output")
    first = words[0]
    for v in (Verdict.YES, Verdict.MAYBE, Verdict.NO, Verdict.TIMEOUT):
        if first == v.value:
            return Answer(v, output.strip())
    return Answer(Verdict.ERROR, f"unexpected prover output: {output.strip()[:200]}")


class ExternalOracle(Oracle):
    """Client for a termination prover reading WST problems.

    In oneshot mode the command is run once per query with the problem file
    appended as last argument.  In interactive mode one process is kept alive;
    each problem is written to its stdin followed by a ``(RUN)`` line and one
    verdict line is read back.
    """

    name = "external"

    def __init__(self, command: str, interactive: bool = False, timeout_ms: int = 10000):
        super().__init__()
        self.argv = shlex.split(command)
        self.interactive = interactive
        self.per_query = timeout_ms / 1000
        self._proc: Optional[subprocess.Popen] = None

    @property
    def timeout(self) -> float:
        if self.deadline is None:
            return self.per_query
        return max(0.01, min(self.per_query, self.deadline - time.monotonic()))

    def _check(self, rules):
        text = serialize(rules)
        if self.interactive:
            return self._ask_session(text)
        fd, path = tempfile.mkstemp(suffix=".trs")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            out = subprocess.run(self.argv + [path], capture_output=True, text=True,
                                 timeout=self.timeout)
        except subprocess.TimeoutExpired:
            return Answer(Verdict.TIMEOUT, f"no answer within {self.timeout}s")
        except OSError as exc:
            return Answer(Verdict.ERROR, f"cannot run prover: {exc}")
        finally:
            if os.path.exists(path):
                os.unlink(path)
        return parse_verdict(out.stdout)

    def _ask_session(self, text):
        import select
        try:
            if self._proc is None or self._proc.poll() is not None:
                self._proc = subprocess.Popen(self.argv, stdin=subprocess.PIPE,
                                              stdout=subprocess.PIPE, text=True, bufsize=1)
            self._proc.stdin.write(text + "(RUN)\n")
            self._proc.stdin.flush()
            ready, _, _ = select.select([self._proc.stdout], [], [], self.timeout)
            if not ready:
                self.close()
                return Answer(Verdict.TIMEOUT, f"no answer within {self.timeout}s")
            line = self._proc.stdout.readline()
        except OSError as exc:
            self.close()
            return Answer(Verdict.ERROR, f"prover session failed: {exc}")
        return parse_verdict(line)

    def close(self):
        if self._proc is not None:
            try:
                self._proc.stdin.close()
                self._proc.wait(timeout=2)
            except (OSError, subprocess.TimeoutExpired):
                self._proc.kill()
            self._proc = None


def make_oracle(spec: str = "auto", interactive: bool = False,
                timeout_ms: int = 10000) -> Oracle:
    spec = spec.strip()
    if spec == "auto":
        return FirstYesOracle([PolyOracle(2), AcRpoOracle()])
    if spec == "acrpo":
        return AcRpoOracle()
    if spec.startswith("poly-search"):
        _, _, bound = spec.partition(":")
        return PolyOracle(int(bound) if bound else 2)
    if spec.startswith("poly-file:"):
        path = spec.split(":", 1)[1]
        with open(path) as fh:
            return PolyOracle(fixed=parse_interpretation(fh.read()))
    if spec.startswith("external:"):
        return ExternalOracle(spec.split(":", 1)[1], interactive, timeout_ms)
    raise ValueError(f"unknown order specification {spec!r}")
