"""Reading and writing problems in the WST s-expression format.

    (VAR x y)
    (THEORY (AC +))
    (RULES
      +(x,0) -> x
      f(+(x,y)) == +(f(x),f(y))
    )

``->`` entries are rules, ``==`` entries equations.  Besides ``VAR``,
``THEORY`` and ``RULES`` the reader accepts ``COMMENT`` (ignored), ``GOAL``
(one equation) and the state-dump blocks ``PENDING`` and ``CONSTRAINTS``.
``(C f)`` inside ``THEORY`` declares a commutative-only symbol.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Union

from .terms import Equation, Fun, Rule, Symbol, Term, Var, is_valid_rule, var_list

Entry = Union[Rule, Equation]


class WstError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line
        self.col = col


@dataclass
class WstProblem:
    variables: List[str] = field(default_factory=list)
    symbols: Dict[str, Symbol] = field(default_factory=dict)
    entries: List[Entry] = field(default_factory=list)
    goal: Optional[Equation] = None
    pending: List[Rule] = field(default_factory=list)
    constraints: List[Rule] = field(default_factory=list)

    @property
    def rules(self) -> List[Rule]:
        return [e for e in self.entries if isinstance(e, Rule)]

    @property
    def equations(self) -> List[Equation]:
        return [e for e in self.entries if isinstance(e, Equation)]

    def all_equations(self) -> List[Equation]:
        """Every entry read as an equation, in file order."""
        return [Equation(e.lhs, e.rhs) for e in self.entries]

    def theory_symbols(self) -> List[Symbol]:
        return [s for s in self.symbols.values() if s.theory]

    def parse_term(self, text: str) -> Term:
        return _Reader(text, self, extend=True).standalone_term()

    def parse_equation(self, text: str) -> Equation:
        """Parse ``s = t`` (or ``s == t``) over this problem's signature."""
        return _Reader(text, self, extend=True).standalone_equation()


# "->" and "==" are tokens even without surrounding blanks
_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|,|->|==|(?:(?!->|==)[^\s(),])+")


class _Tok:
    __slots__ = ("text", "line", "col")

    def __init__(self, text, line, col):
        self.text, self.line, self.col = text, line, col

    def __repr__(self):
        return f"{self.text!r}@{self.line}:{self.col}"


def tokenize(text: str) -> List[_Tok]:
    out = []
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        tok = m.group(0)
        if not tok[0].isspace() and tok[0] != ";":
            out.append(_Tok(tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        i = m.end()
    return out


class _Reader:
    def __init__(self, text, problem: WstProblem, extend=False):
        self.toks = tokenize(text)
        self.i = 0
        self.problem = problem
        self.extend = extend
        self.end = _Tok("<end of input>", *self._end_pos(text))

    @staticmethod
    def _end_pos(text):
        lines = text.split("\n")
        return len(lines), len(lines[-1]) + 1

    def peek(self, k=0) -> _Tok:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else self.end

    def next(self) -> _Tok:
        t = self.peek()
        self.i += 1
        return t

    def expect(self, text) -> _Tok:
        t = self.next()
        if t.text != text:
            raise WstError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return WstError(msg, tok.line, tok.col)

    # raw term trees: (token, [children]) or (token, None) for bare identifiers
    def raw_term(self):
        t = self.next()
        if t.text in ("(", ")", ",", "->", "==", "=") or t is self.end:
            raise WstError(f"expected a term, found {t.text!r}", t.line, t.col)
        if self.peek().text != "(":
            return (t, None)
        self.next()
        args = []
        if self.peek().text == ")":
            self.next()
            return (t, args)
        while True:
            args.append(self.raw_term())
            sep = self.next()
            if sep.text == ")":
                return (t, args)
            if sep.text != ",":
                raise WstError(f"expected ',' or ')', found {sep.text!r}", sep.line, sep.col)

    def build(self, raw, theories=None) -> Term:
        tok, args = raw
        name = tok.text
        if name in self.problem.variables:
            if args:
                raise WstError(f"variable {name} applied to arguments", tok.line, tok.col)
            return Var(name)
        args = args or []
        sym = self.problem.symbols.get(name)
        if sym is None:
            theory = (theories or {}).get(name)
            if theory and len(args) != 2:
                raise WstError(f"{theory} symbol {name} must be binary", tok.line, tok.col)
            sym = Symbol(name, len(args), theory)
            self.problem.symbols[name] = sym
        elif sym.arity != len(args):
            raise WstError(f"symbol {name} used with arity {len(args)}, "
                           f"previously {sym.arity}", tok.line, tok.col)
        return Fun(sym, tuple(self.build(a, theories) for a in args))

    def standalone_term(self) -> Term:
        t = self.build(self.raw_term())
        if self.peek() is not self.end:
            raise self.error(f"unexpected {self.peek().text!r}")
        return t

    def standalone_equation(self) -> Equation:
        lhs = self.build(self.raw_term())
        sep = self.next()
        if sep.text not in ("=", "=="):
            raise WstError(f"expected '=', found {sep.text!r}", sep.line, sep.col)
        rhs = self.build(self.raw_term())
        if self.peek() is not self.end:
            raise self.error(f"unexpected {self.peek().text!r}")
        return Equation(lhs, rhs)

    def skip_balanced(self):
        depth = 1
        while depth:
            t = self.next()
            if t is self.end:
                raise WstError("unterminated block", t.line, t.col)
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1

    def entries_block(self, allow_eq=True):
        out = []
        while self.peek().text != ")":
            if self.peek() is self.end:
                raise self.error("unterminated block")
            lhs = self.raw_term()
            sep = self.next()
            if sep.text not in ("->", "==") or (sep.text == "==" and not allow_eq):
                raise WstError(f"expected '->' or '==', found {sep.text!r}", sep.line, sep.col)
            rhs = self.raw_term()
            out.append((lhs, sep, rhs))
        self.next()
        return out

    def problem_blocks(self):
        var_decls, theories, blocks = [], {}, []
        while self.peek() is not self.end:
            self.expect("(")
            head = self.next()
            kind = head.text
            if kind == "VAR":
                while self.peek().text != ")":
                    t = self.next()
                    if t.text in ("(", ",") or t is self.end:
                        raise WstError(f"bad variable name {t.text!r}", t.line, t.col)
                    var_decls.append(t.text)
                self.next()
            elif kind == "THEORY":
                while self.peek().text != ")":
                    self.expect("(")
                    th = self.next()
                    if th.text not in ("AC", "C"):
                        raise WstError(f"unsupported theory {th.text!r}", th.line, th.col)
                    while self.peek().text != ")":
                        t = self.next()
                        if t.text in ("(", ",") or t is self.end:
                            raise WstError(f"bad symbol {t.text!r}", t.line, t.col)
                        theories[t.text] = th.text
                    self.next()
                self.next()
            elif kind == "COMMENT":
                self.skip_balanced()
            elif kind in ("RULES", "PENDING", "CONSTRAINTS"):
                blocks.append((kind, self.entries_block(kind == "RULES")))
            elif kind == "GOAL":
                lhs = self.raw_term()
                sep = self.next()
                if sep.text not in ("==", "="):
                    raise WstError(f"expected '==', found {sep.text!r}", sep.line, sep.col)
                rhs = self.raw_term()
                self.expect(")")
                blocks.append(("GOAL", [(lhs, sep, rhs)]))
            else:
                raise WstError(f"unknown block {kind!r}", head.line, head.col)
        return var_decls, theories, blocks


def parse_wst(text: str) -> WstProblem:
    problem = WstProblem()
    reader = _Reader(text, problem)
    var_decls, theories, blocks = reader.problem_blocks()
    for v in var_decls:
        if v not in problem.variables:
            problem.variables.append(v)
    for kind, items in blocks:
        for lhs_raw, sep, rhs_raw in items:
            lhs = reader.build(lhs_raw, theories)
            rhs = reader.build(rhs_raw, theories)
            if kind == "GOAL":
                problem.goal = Equation(lhs, rhs)
                continue
            if sep.text == "->":
                if not is_valid_rule(lhs, rhs):
                    raise WstError(f"invalid rule {lhs} -> {rhs}: lhs must not be a "
                                   "variable and rhs variables must occur in lhs",
                                   sep.line, sep.col)
                entry = Rule(lhs, rhs)
            else:
                entry = Equation(lhs, rhs)
            {"RULES": problem.entries, "PENDING": problem.pending,
             "CONSTRAINTS": problem.constraints}[kind].append(entry)
    for name, th in theories.items():
        if name in problem.variables:
            raise WstError(f"variable {name} declared as {th} symbol")
        if name not in problem.symbols:
            problem.symbols[name] = Symbol(name, 2, th)
    return problem


def term_str(t: Term) -> str:
    return str(t)


def _entry_str(e: Entry) -> str:
    op = "->" if isinstance(e, Rule) else "=="
    return f"{e.lhs} {op} {e.rhs}"


def _collect(items) -> tuple:
    vs: Dict[str, None] = {}
    syms: Dict[str, Symbol] = {}
    for e in items:
        for side in (e.lhs, e.rhs):
            for v in var_list(side):
                vs.setdefault(v.name, None)
            stack = [side]
            while stack:
                u = stack.pop()
                if not u.is_var:
                    syms.setdefault(u.symbol.name, u.symbol)
                    stack.extend(u.args)
    return list(vs), syms


def print_wst(obj, *, pending: Sequence[Rule] = (), constraints: Sequence[Rule] = (),
              goal: Optional[Equation] = None, extra_symbols: Iterable[Symbol] = ()) -> str:
    """Serialize a WstProblem or a sequence of rules/equations."""
    if isinstance(obj, WstProblem):
        variables = list(obj.variables)
        syms = dict(obj.symbols)
        entries = list(obj.entries)
        pending = list(obj.pending) or list(pending)
        constraints = list(obj.constraints) or list(constraints)
        goal = obj.goal or goal
    else:
        entries = list(obj)
        everything = entries + list(pending) + list(constraints) + ([goal] if goal else [])
        variables, syms = _collect(everything)
    for s in extra_symbols:
        syms.setdefault(s.name, s)
    lines = []
    if variables:
        lines.append("(VAR " + " ".join(variables) + ")")
    ths = [s for s in syms.values() if s.theory]
    if ths:
        groups = []
        for th in ("AC", "C"):
            names = [s.name for s in ths if s.theory == th]
            if names:
                groups.append(f"({th} " + " ".join(names) + ")")
        lines.append("(THEORY " + " ".join(groups) + ")")
    if entries:
        lines.append("(RULES")
        lines.extend("  " + _entry_str(e) for e in entries)
        lines.append(")")
    else:
        lines.append("(RULES )")
    for name, block in (("PENDING", pending), ("CONSTRAINTS", constraints)):
        if block:
            lines.append(f"({name}")
            lines.extend("  " + _entry_str(e) for e in block)
            lines.append(")")
    if goal is not None:
        lines.append(f"(GOAL {goal.lhs} == {goal.rhs})")
    return "\n".join(lines) + "\n"
