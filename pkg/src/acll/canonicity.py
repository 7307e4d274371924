"""AC-canonical systems: right-AC-equivalent variants and the reduced system.

``dot`` normalizes right-hand sides modulo AC and keeps one rule per class
of right-AC-equivalent variants; ``ddot`` then drops rules whose left-hand
side is reducible by the remaining ones.  For an AC-complete system the
result is AC-canonical and normalization-equivalent to the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .ac import DEFAULT_FUEL, Relation, Rewriter, ac_equal, canon_str, canonical
from .terms import Rule, Var, apply_subst, match_syntactic, var_list


def _renaming(pattern, subject):
    sigma = match_syntactic(pattern, subject)
    if sigma is None:
        return None
    # identity bindings are not stored, so read the image of every variable
    images = [sigma.get(v, v) for v in var_list(pattern)]
    if not all(isinstance(v, Var) for v in images) or len(set(images)) != len(images):
        return None
    return sigma


def right_b_variant(r1: Rule, r2: Rule) -> bool:
    """l1 renames to l2 and the renamed r1 is AC-equal to r2."""
    sigma = _renaming(r1.lhs, r2.lhs)
    return sigma is not None and ac_equal(apply_subst(r1.rhs, sigma), r2.rhs)


def llrbsim(rs1: Sequence[Rule], rs2: Sequence[Rule]) -> bool:
    return all(any(right_b_variant(a, b) for b in rs2) for a in rs1) and \
        all(any(right_b_variant(b, a) for a in rs1) for b in rs2)


def _require_termination(rules, oracle):
    if oracle is None:
        return
    ans = oracle.check(rules)
    if not ans.yes:
        raise ValueError(f"AC-termination not shown: {ans.verdict.value} {ans.detail}")


def _serial(rule: Rule) -> str:
    return canon_str(canonical(rule.lhs)) + " -> " + canon_str(canonical(rule.rhs))


def dot(rules: Sequence[Rule], oracle=None, fuel: int = DEFAULT_FUEL) -> List[Rule]:
    """Right-hand sides to R/AC normal form, one rule per variant class.

    The kept representative of a class is the one with the smallest
    canonical serialization; classes keep the order of first occurrence.
    """
    rules = list(rules)
    _require_termination(rules, oracle)
    rw = Rewriter(rules, Relation.MODULO, fuel)
    normal = [Rule(r.lhs, rw.normalize(r.rhs)) for r in rules]
    classes: List[List[Rule]] = []
    for r in normal:
        for cls in classes:
            if right_b_variant(cls[0], r):
                cls.append(r)
                break
        else:
            classes.append([r])
    return [min(cls, key=_serial) for cls in classes]


def ddot(rules: Sequence[Rule], oracle=None, fuel: int = DEFAULT_FUEL) -> List[Rule]:
    """Rules of ``dot(rules)`` whose lhs is normal w.r.t. the other rules."""
    dotted = dot(rules, oracle, fuel)
    out = []
    for i, r in enumerate(dotted):
        others = Rewriter(dotted[:i] + dotted[i + 1:])
        if others.is_normal(r.lhs):
            out.append(r)
    return out


@dataclass
class CanonVerdict:
    value: Optional[bool]  # None when termination or confluence is unknown
    reasons: List[str] = field(default_factory=list)

    def __bool__(self):
        return self.value is True


def is_canonical_mod_b(rules: Sequence[Rule], oracle=None, fuel: int = DEFAULT_FUEL) -> CanonVerdict:
    """AC-terminating, Church-Rosser modulo AC, left-reduced and right-AC-reduced."""
    from .decision import church_rosser_mod_ac
    from .termination import make_oracle
    rules = list(rules)
    oracle = oracle or make_oracle("auto")
    reasons = []
    for i, r in enumerate(rules):
        if not Rewriter(rules[:i] + rules[i + 1:]).is_normal(r.lhs):
            reasons.append(f"lhs of {r} is reducible by another rule")
    modulo = Rewriter(rules, Relation.MODULO, fuel)
    for r in rules:
        if not modulo.is_normal(r.rhs):
            reasons.append(f"rhs of {r} is reducible modulo AC")
    cr = church_rosser_mod_ac(rules, oracle, fuel=fuel)
    if cr.verdict == "no":
        reasons.append(str(cr))
    if reasons:
        return CanonVerdict(False, reasons)
    if not cr.yes:
        return CanonVerdict(None, [cr.reason])
    return CanonVerdict(True)
