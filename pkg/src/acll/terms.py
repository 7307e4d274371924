"""First-order terms, positions, substitutions, matching and unification.

Terms are immutable and hash-consed only in the weak sense that their hash is
computed once.  Function symbols carry their equational theory (``"AC"``,
``"C"`` or ``None``) so that every term knows how it must be compared.

    >>> plus = Symbol("+", 2, "AC")
    >>> x = Var("x")
    >>> zero = Fun(Symbol("0", 0), ())
    >>> t = Fun(plus, (x, zero))
    >>> str(t)
    '+(x,0)'
    >>> match_syntactic(t, Fun(plus, (zero, zero)))
    {Var('x'): Fun(Symbol('0', 0), ())}
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

Position = Tuple[int, ...]
ROOT: Position = ()


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    theory: Optional[str] = None

    def __post_init__(self):
        if self.theory not in (None, "AC", "C"):
            raise ValueError(f"unknown theory {self.theory!r}")
        if self.theory and self.arity != 2:
            raise ValueError(f"{self.theory} symbol {self.name} must be binary")

    @property
    def is_ac(self) -> bool:
        return self.theory == "AC"

    @property
    def is_c(self) -> bool:
        """True for symbols that are commutative (AC or C-only)."""
        return self.theory is not None

    def __repr__(self):
        if self.theory:
            return f"Symbol({self.name!r}, {self.arity}, {self.theory!r})"
        return f"Symbol({self.name!r}, {self.arity})"

    def __call__(self, *args) -> "Fun":
        return Fun(self, tuple(args))


class Term:
    __slots__ = ()

    is_var = False


class Var(Term):
    __slots__ = ("name", "_hash")
    is_var = True

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("v", name))

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.name == self.name)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return self.name

    def __reduce__(self):
        return (Var, (self.name,))


class Fun(Term):
    __slots__ = ("symbol", "args", "_hash", "_size", "canon_cache")

    def __init__(self, symbol: Symbol, args: tuple = ()):
        if len(args) != symbol.arity:
            raise ValueError(
                f"{symbol.name} expects {symbol.arity} arguments, got {len(args)}")
        self.symbol = symbol
        self.args = args
        self._hash = hash((symbol.name, args))
        self._size = 1 + sum(size(a) for a in args)
        self.canon_cache = None

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is Fun and self._hash == other._hash
                and self.symbol == other.symbol and self.args == other.args)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Fun({self.symbol!r}, {self.args!r})"

    def __str__(self):
        if not self.args:
            return self.symbol.name
        return f"{self.symbol.name}({','.join(map(str, self.args))})"

    def __reduce__(self):
        return (Fun, (self.symbol, self.args))


def size(t: Term) -> int:
    return 1 if t.is_var else t._size


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{self.lhs} == {self.rhs}"

    def swapped(self) -> "Equation":
        return Equation(self.rhs, self.lhs)


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.lhs.is_var:
            raise ValueError(f"rule lhs is a variable: {self.lhs} -> {self.rhs}")
        if not variables(self.rhs) <= variables(self.lhs):
            raise ValueError(f"rule rhs has extra variables: {self.lhs} -> {self.rhs}")

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


def is_valid_rule(lhs: Term, rhs: Term) -> bool:
    return not lhs.is_var and variables(rhs) <= variables(lhs)


# ---------------------------------------------------------------- traversal

def var_list(t: Term) -> List[Var]:
    """Variables of t in order of first (left-to-right) occurrence."""
    seen: Dict[Var, None] = {}
    stack = [t]
    while stack:
        u = stack.pop()
        if u.is_var:
            seen.setdefault(u, None)
        else:
            stack.extend(reversed(u.args))
    return list(seen)


def variables(t: Term) -> frozenset:
    return frozenset(var_list(t))


def symbols(t: Term) -> List[Symbol]:
    out: Dict[Symbol, None] = {}
    stack = [t]
    while stack:
        u = stack.pop()
        if not u.is_var:
            out.setdefault(u.symbol, None)
            stack.extend(reversed(u.args))
    return list(out)


def positions(t: Term) -> List[Tuple[Position, str]]:
    """All positions of t in pre-order, tagged ``"function"`` or ``"variable"``."""
    out = []

    def walk(u, p):
        if u.is_var:
            out.append((p, "variable"))
        else:
            out.append((p, "function"))
            for i, a in enumerate(u.args, 1):
                walk(a, p + (i,))

    walk(t, ROOT)
    return out


def fun_positions(t: Term) -> List[Position]:
    return [p for p, kind in positions(t) if kind == "function"]


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if t.is_var or not 1 <= i <= len(t.args):
            raise IndexError(f"invalid position {p}")
        t = t.args[i - 1]
    return t


def replace_at(s: Term, p: Position, t: Term) -> Term:
    if not p:
        return t
    if s.is_var or not 1 <= p[0] <= len(s.args):
        raise IndexError(f"invalid position {p}")
    i = p[0] - 1
    args = list(s.args)
    args[i] = replace_at(args[i], p[1:], t)
    return Fun(s.symbol, tuple(args))


def subterms(t: Term) -> Iterator[Tuple[Position, Term]]:
    stack = [(ROOT, t)]
    while stack:
        p, u = stack.pop()
        yield p, u
        if not u.is_var:
            for i in range(len(u.args), 0, -1):
                stack.append((p + (i,), u.args[i - 1]))


def is_linear(t: Term) -> bool:
    seen = set()
    for _, u in subterms(t):
        if u.is_var:
            if u in seen:
                return False
            seen.add(u)
    return True


def is_ground(t: Term) -> bool:
    return not var_list(t)


# ------------------------------------------------------------ substitutions

Subst = Dict[Var, Term]


def apply_subst(t: Term, sigma: Subst) -> Term:
    if not sigma:
        return t
    if t.is_var:
        return sigma.get(t, t)
    return Fun(t.symbol, tuple(apply_subst(a, sigma) for a in t.args))


def compose(sigma: Subst, tau: Subst) -> Subst:
    """The substitution x -> (x sigma) tau (apply sigma first)."""
    out = {x: apply_subst(t, tau) for x, t in sigma.items()}
    for x, t in tau.items():
        out.setdefault(x, t)
    return {x: t for x, t in out.items() if t != x}


def match_syntactic(pattern: Term, subject: Term,
                    sigma: Optional[Subst] = None) -> Optional[Subst]:
    sigma = {} if sigma is None else dict(sigma)
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if p.is_var:
            bound = sigma.get(p)
            if bound is None:
                sigma[p] = s
            elif bound != s:
                return None
        elif s.is_var or p.symbol != s.symbol:
            return None
        else:
            stack.extend(zip(p.args, s.args))
    return {x: t for x, t in sigma.items() if t != x}


def occurs(x: Var, t: Term) -> bool:
    if t.is_var:
        return t == x
    return any(occurs(x, a) for a in t.args)


def unify(s: Term, t: Term) -> Optional[Subst]:
    """Most general unifier in triangular-free (idempotent) form, or None."""
    sigma: Subst = {}
    eqs = [(s, t)]
    while eqs:
        a, b = eqs.pop()
        a = apply_subst(a, sigma)
        b = apply_subst(b, sigma)
        if a == b:
            continue
        if not a.is_var and b.is_var:
            a, b = b, a
        if a.is_var:
            if occurs(a, b):
                return None
            binding = {a: b}
            sigma = {x: apply_subst(u, binding) for x, u in sigma.items()}
            sigma[a] = b
        elif a.symbol != b.symbol:
            return None
        else:
            eqs.extend(zip(a.args, b.args))
    return sigma


# ---------------------------------------------------------------- renaming

def _base(name: str) -> str:
    return name.split("'", 1)[0] or "x"


def fresh_names(names: Iterable[str], avoid: Iterable[str]) -> Dict[str, str]:
    """Map each name to a primed variant not in ``avoid`` (deterministic)."""
    taken = set(avoid)
    out = {}
    for n in names:
        base = _base(n)
        k = 1
        while f"{base}'{k}" in taken:
            k += 1
        out[n] = f"{base}'{k}"
        taken.add(out[n])
    return out


def rename_apart(rule: Rule, avoid: Iterable[Var]) -> Rule:
    vs = var_list(rule.lhs)
    names = fresh_names([v.name for v in vs], [v.name for v in avoid])
    sigma = {v: Var(names[v.name]) for v in vs}
    return Rule(apply_subst(rule.lhs, sigma), apply_subst(rule.rhs, sigma))


def normalize_vars(*terms: Term, prefix: str = "x") -> Tuple[Term, ...]:
    """Rename the variables of the terms jointly to prefix1, prefix2, ...

    Two tuples of terms are variants of each other exactly when their
    normalized forms coincide.
    """
    order: Dict[Var, None] = {}
    for t in terms:
        for v in var_list(t):
            order.setdefault(v, None)
    sigma = {v: Var(f"{prefix}{i}") for i, v in enumerate(order, 1)}
    return tuple(apply_subst(t, sigma) for t in terms)


def is_variant(s: Term, t: Term) -> bool:
    return normalize_vars(s) == normalize_vars(t)


def is_rule_variant(r1: Rule, r2: Rule) -> bool:
    return normalize_vars(r1.lhs, r1.rhs) == normalize_vars(r2.lhs, r2.rhs)


def encompasses(s: Term, t: Term) -> bool:
    """True iff some subterm of s is an instance of t."""
    return any(match_syntactic(t, u) is not None for _, u in subterms(s))


# -------------------------------------------------------------------- order

def order_key(t: Term) -> tuple:
    """Sort key of the global term order.

    Variables come before applications; applications compare by symbol name
    and then lexicographically by their arguments.
    """
    if t.is_var:
        return (0, t.name)
    return (1, t.symbol.name, tuple(order_key(a) for a in t.args))
