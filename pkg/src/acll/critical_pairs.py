"""Overlaps, critical peaks and critical pairs, including cliffs with AC axioms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence

from .ac import Rewriter, Relation
from .terms import (Equation, Fun, Position, Rule, Subst, Symbol, Term, Var,
                    apply_subst, fun_positions, is_rule_variant, normalize_vars,
                    rename_apart, replace_at, subterm_at, symbols, unify, var_list)


@dataclass(frozen=True, eq=False)
class Overlap:
    inner: Rule
    pos: Position
    outer: Rule
    mgu: Subst


@dataclass(frozen=True, eq=False)
class CriticalPeak:
    left: Term
    pos: Position
    source: Term
    right: Term
    inner: Rule
    outer: Rule
    prime: Optional[bool] = None

    @property
    def equation(self) -> Equation:
        return Equation(self.left, self.right)

    @property
    def redex(self) -> Term:
        return subterm_at(self.source, self.pos)


@dataclass(frozen=True, eq=False)
class CriticalPair:
    eq: Equation
    origin: str  # "RR", "RB" (rule inside an axiom) or "BR" (axiom inside a rule)
    peak: CriticalPeak

    def cliff_rule(self) -> Rule:
        """Orient a cliff from its axiom side towards its rule-reduct."""
        if self.origin == "RB":
            return Rule(self.eq.rhs, self.eq.lhs)
        if self.origin == "BR":
            return Rule(self.eq.lhs, self.eq.rhs)
        raise ValueError("not a cliff")


def theory_axioms(syms: Iterable[Symbol]) -> List[Rule]:
    """Associativity (both ways) and commutativity as rules, per symbol."""
    x, y, z = Var("x"), Var("y"), Var("z")
    out = []
    for f in syms:
        if f.is_ac:
            out.append(Rule(f(f(x, y), z), f(x, f(y, z))))
            out.append(Rule(f(x, f(y, z)), f(f(x, y), z)))
        if f.is_c:
            out.append(Rule(f(x, y), f(y, x)))
    return out


def signature(rules: Iterable[Rule]) -> List[Symbol]:
    seen: Dict[Symbol, None] = {}
    for r in rules:
        for s in symbols(r.lhs) + symbols(r.rhs):
            seen.setdefault(s, None)
    return list(seen)


def theory_symbols(rules: Iterable[Rule]) -> List[Symbol]:
    return [s for s in signature(rules) if s.is_c]


def overlaps(inner_rules: Sequence[Rule], outer_rules: Sequence[Rule]) -> Iterator[Overlap]:
    """Overlaps of an inner rule into a function position of an outer lhs."""
    for outer in outer_rules:
        avoid = var_list(outer.lhs)
        fps = fun_positions(outer.lhs)
        for inner in inner_rules:
            renamed = rename_apart(inner, avoid)
            for p in fps:
                if not p and is_rule_variant(inner, outer):
                    continue
                sigma = unify(renamed.lhs, subterm_at(outer.lhs, p))
                if sigma is not None:
                    yield Overlap(renamed, p, outer, sigma)


def peak_of(ov: Overlap) -> CriticalPeak:
    source = apply_subst(ov.outer.lhs, ov.mgu)
    left = replace_at(source, ov.pos, apply_subst(ov.inner.rhs, ov.mgu))
    return CriticalPeak(left, ov.pos, source, apply_subst(ov.outer.rhs, ov.mgu),
                        ov.inner, ov.outer)


def critical_peaks(inner_rules, outer_rules) -> List[CriticalPeak]:
    return [peak_of(ov) for ov in overlaps(inner_rules, outer_rules)]


def is_prime(peak: CriticalPeak, reference: Rewriter) -> bool:
    redex = peak.redex
    return all(reference.is_normal(a) for a in redex.args)


def prime_filter(peaks: Iterable[CriticalPeak], rules: Sequence[Rule],
                 rewriter: Optional[Rewriter] = None) -> List[CriticalPeak]:
    rw = rewriter or Rewriter(rules, Relation.PLAIN)
    return [p for p in peaks if is_prime(p, rw)]


def _pairs(inner, outer, origin, prime_wrt) -> List[CriticalPair]:
    peaks = critical_peaks(inner, outer)
    if prime_wrt is not None:
        peaks = [p for p in peaks if is_prime(p, prime_wrt)]
    return [CriticalPair(p.equation, origin, p) for p in peaks]


def critical_pairs(rules: Sequence[Rule], prime: bool = False,
                   reference: Optional[Sequence[Rule]] = None) -> List[CriticalPair]:
    """CP(R), or PCP(R) when ``prime`` (normal forms w.r.t. ``reference``)."""
    rw = Rewriter(rules if reference is None else reference) if prime else None
    return _pairs(rules, rules, "RR", rw)


def cp_between(inner, outer, prime=False, reference=None, origin="RR") -> List[CriticalPair]:
    rw = Rewriter(reference if reference is not None else list(inner) + list(outer)) if prime else None
    return _pairs(inner, outer, origin, rw)


def cp_pm(rules: Sequence[Rule], axioms: Optional[Sequence[Rule]] = None,
          prime: bool = False, reference: Optional[Sequence[Rule]] = None) -> List[CriticalPair]:
    """CP±(R, B±): rule-into-axiom and axiom-into-rule peaks.

    ``axioms`` defaults to the AC/C axioms of the symbols occurring in R.
    Primality is always judged by ordinary rewriting with R.
    """
    if axioms is None:
        axioms = theory_axioms(theory_symbols(rules))
    rw = Rewriter(rules if reference is None else reference) if prime else None
    return _pairs(rules, axioms, "RB", rw) + _pairs(axioms, rules, "BR", rw)


def equation_key(eq: Equation) -> tuple:
    return normalize_vars(eq.lhs, eq.rhs)


def equation_set(eqs: Iterable) -> set:
    """Equations (or pairs) as a set modulo renaming of variables."""
    out = set()
    for e in eqs:
        if isinstance(e, CriticalPair):
            e = e.eq
        elif isinstance(e, tuple):
            e = Equation(*e)
        out.add(equation_key(e))
    return out
