"""Polynomial interpretations over the naturals starting at 1.

A term is interpreted by a polynomial with non-negative integer
coefficients.  A rule l -> r is oriented when [l] - [r], with every variable
shifted by +1, has non-negative coefficients and a positive constant; such a
difference is positive for all arguments >= 1.
"""

from __future__ import annotations

import itertools
import re
import time
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .terms import Rule, Symbol, Term, Var, symbols

Monomial = Tuple[Tuple[str, int], ...]


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, int]] = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @staticmethod
    def const(c: int) -> "Poly":
        return Poly({(): c})

    @staticmethod
    def var(name: str) -> "Poly":
        return Poly({((name, 1),): 1})

    def __add__(self, other):
        other = _lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        out: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, (Poly, int)) and self.terms == _lift(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def constant(self) -> int:
        return self.terms.get((), 0)

    def variables(self) -> List[str]:
        return sorted({v for m in self.terms for v, _ in m})

    def substitute(self, env: Mapping[str, "Poly"]) -> "Poly":
        out = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v, e in m:
                term = term * (env[v] ** e if v in env else Poly({((v, e),): 1}))
            out = out + term
        return out

    def shifted(self) -> "Poly":
        return self.substitute({v: Poly.var(v) + 1 for v in self.variables()})

    def absolutely_positive(self) -> bool:
        return all(c >= 0 for c in self.terms.values()) and self.constant() > 0

    def evaluate(self, env: Mapping[str, int]) -> int:
        total = 0
        for m, c in self.terms.items():
            for v, e in m:
                c *= env[v] ** e
            total += c
        return total

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(e for _, e in m), m)):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _lift(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class PolyInterp:
    """Maps symbol names to polynomials over the parameters x1..xn."""

    def __init__(self, table: Optional[Mapping[str, Poly]] = None):
        self.table: Dict[str, Poly] = dict(table or {})

    def __getitem__(self, name):
        return self.table[name]

    def __contains__(self, name):
        return name in self.table

    def __repr__(self):
        return "PolyInterp({" + ", ".join(f"{k}: {v}" for k, v in self.table.items()) + "})"


def params(n: int) -> List[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def poly_value(interp: PolyInterp, t: Term) -> Poly:
    if t.is_var:
        return Poly.var(t.name)
    name = t.symbol.name
    if name not in interp:
        raise KeyError(f"no interpretation for symbol {name}")
    env = {p: poly_value(interp, a) for p, a in zip(params(len(t.args)), t.args)}
    return interp[name].substitute(env)


def poly_difference(interp: PolyInterp, rule: Rule) -> Poly:
    return poly_value(interp, rule.lhs) - poly_value(interp, rule.rhs)


def poly_orients(interp: PolyInterp, rule: Rule) -> bool:
    return poly_difference(interp, rule).shifted().absolutely_positive()


def poly_check_ac_compatible(interp: PolyInterp, syms: Iterable[Symbol]) -> bool:
    for f in syms:
        if not f.is_c:
            continue
        p = interp[f.name]
        x, y, z = Poly.var("x1"), Poly.var("x2"), Poly.var("x3")
        if p.substitute({"x1": y, "x2": x}) != p:
            return False
        if f.is_ac:
            lhs = p.substitute({"x1": p, "x2": z})
            rhs = p.substitute({"x1": x, "x2": p.substitute({"x1": y, "x2": z})})
            if lhs != rhs:
                return False
    return True


def is_monotone(p: Poly, arity: int) -> bool:
    """Strictly monotone on naturals >= 1 in every parameter, and >= 1."""
    if any(c < 0 for c in p.terms.values()) or not p.terms:
        return False
    used = {v for m in p.terms for v, _ in m}
    return all(v in used for v in params(arity))


# ------------------------------------------------------------------ search

def templates(sym: Symbol, bound: int, quadratic: bool = True) -> List[Poly]:
    """Candidate interpretations for one symbol, simplest first."""
    n = sym.arity
    xs = [Poly.var(v) for v in params(n)]
    out: List[Poly] = []
    if n == 0:
        out = [Poly.const(c) for c in range(1, bound + 1)]
    elif sym.is_c:
        x, y = xs
        for a in range(1, bound + 1):
            for c in range(0, bound + 1):
                out.append(a * x + a * y + c)
        for a in range(1, bound + 1):
            for b in range(0, bound + 1):
                for c in range(0, bound + 1):
                    out.append(a * x * y + b * x + b * y + c)
        out = [p for p in out if poly_check_ac_compatible(PolyInterp({sym.name: p}), [sym])]
    else:
        for coeffs in itertools.product(range(1, bound + 1), repeat=n):
            for c in range(0, bound + 1):
                out.append(sum((a * x for a, x in zip(coeffs, xs)), Poly()) + c)
        if n == 1 and quadratic:
            x = xs[0]
            for q in range(1, bound + 1):
                for a in range(0, bound + 1):
                    for c in range(0, bound + 1):
                        out.append(q * x * x + a * x + c)
    out = [p for p in out if is_monotone(p, n)]
    out.sort(key=lambda p: (max((sum(e for _, e in m) for m in p.terms), default=0),
                            sum(p.terms.values()), str(p)))
    return out


class SearchBudget(Exception):
    pass


def _numeric(p: Poly):
    items = [(c, [(int(v[1:]) - 1, e) for v, e in m]) for m, c in p.terms.items()]

    def f(args):
        total = 0
        for c, mono in items:
            for i, e in mono:
                c *= args[i] ** e
            total += c
        return total

    return f


def _eval_numeric(t: Term, funcs, env) -> int:
    if t.is_var:
        return env[t.name]
    return funcs[t.symbol.name]([_eval_numeric(a, funcs, env) for a in t.args])


def poly_search(rules: Sequence[Rule], bound: int = 2, quadratic: bool = True,
                max_nodes: int = 200000, extra_symbols: Iterable[Symbol] = (),
                hint: Optional[PolyInterp] = None,
                deadline: Optional[float] = None) -> Optional[PolyInterp]:
    """First interpretation (in template order) orienting every rule.

    Raises SearchBudget when ``max_nodes`` partial assignments were tried or
    the ``time.monotonic()`` deadline has passed.
    A ``hint`` interpretation is tried first as a whole.
    """
    syms: Dict[str, Symbol] = {}
    for r in rules:
        for s in symbols(r.lhs) + symbols(r.rhs):
            syms.setdefault(s.name, s)
    for s in extra_symbols:
        syms.setdefault(s.name, s)
    if hint is not None and all(n in hint for n in syms):
        if all(poly_orients(hint, r) for r in rules) and \
                poly_check_ac_compatible(hint, syms.values()):
            return PolyInterp({n: hint[n] for n in syms})
    order = list(syms)
    depth_of = {n: i for i, n in enumerate(order)}
    by_depth: Dict[int, List[Rule]] = {}
    for r in rules:
        names = {s.name for s in symbols(r.lhs) + symbols(r.rhs)}
        d = max(depth_of[n] for n in names)
        by_depth.setdefault(d, []).append(r)
    cands = [templates(syms[n], bound, quadratic) for n in order]
    numerics = [[_numeric(p) for p in cs] for cs in cands]
    points = []
    for r in rules:
        vs = sorted({v.name for v in _vars(r)})
        pts = [{v: 1 for v in vs}, {v: 2 for v in vs},
               {v: i + 1 for i, v in enumerate(vs)}, {v: len(vs) - i + 1 for i, v in enumerate(vs)}]
        points.append(pts)
    rule_index = {id(r): i for i, r in enumerate(rules)}
    chosen: List[Poly] = []
    funcs: Dict[str, object] = {}
    nodes = [0]

    def ok_at(depth) -> bool:
        for r in by_depth.get(depth, ()):
            for env in points[rule_index[id(r)]]:
                if _eval_numeric(r.lhs, funcs, env) <= _eval_numeric(r.rhs, funcs, env):
                    return False
        interp = PolyInterp(dict(zip(order, chosen)))
        return all(poly_orients(interp, r) for r in by_depth.get(depth, ()))

    def go(depth) -> bool:
        if depth == len(order):
            return True
        for p, num in zip(cands[depth], numerics[depth]):
            nodes[0] += 1
            if nodes[0] > max_nodes:
                raise SearchBudget()
            if deadline is not None and nodes[0] % 512 == 0 and time.monotonic() > deadline:
                raise SearchBudget()
            chosen.append(p)
            funcs[order[depth]] = num
            if ok_at(depth) and go(depth + 1):
                return True
            chosen.pop()
        funcs.pop(order[depth], None)
        return False

    if go(0):
        return PolyInterp(dict(zip(order, chosen)))
    return None


def _vars(rule: Rule):
    from .terms import var_list
    return var_list(rule.lhs)


# --------------------------------------------------------- reading from text

_LINE = re.compile(r"^\s*([^\s(),=]+)\s*(?:\(([^)]*)\))?\s*=\s*(.+?)\s*$")


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    """Parse a polynomial such as ``x^2 + 2*x*y + 1`` over the given names."""
    mapping = {n: f"x{i}" for i, n in enumerate(names, 1)}
    total = Poly()
    for chunk in re.split(r"\s*\+\s*", text.strip()):
        term = Poly.const(1)
        for factor in re.split(r"\s*\*\s*", chunk):
            if "^" in factor:
                base, exp = factor.split("^")
                exp = int(exp)
            else:
                base, exp = factor, 1
            base = base.strip()
            if base.isdigit():
                term = term * Poly.const(int(base) ** exp)
            elif base in mapping:
                term = term * Poly({((mapping[base], exp),): 1})
            else:
                raise ValueError(f"unknown name {base!r} in polynomial {text!r}")
        total = total + term
    return total


def parse_interpretation(text: str) -> PolyInterp:
    """Read lines ``f(x,y) = x + y + 1``; ``#`` starts a comment."""
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
        name, args, body = m.groups()
        names = [a.strip() for a in args.split(",")] if args and args.strip() else []
        table[name] = parse_poly(body, names)
    return PolyInterp(table)
