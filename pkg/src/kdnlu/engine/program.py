"""Rule and program representation plus the rule-text reader.

Rule text format, one clause per line (clauses may wrap; a clause ends at
`.`), `%` starts a comment:

    head :- b1, b2, not r1, X \\== Y, findall(O, p(T,O), Os), list_length(Os, N).
    fact(a,b).
    :- p(X), q(X).        % headless constraint, checked after solving
    ?- goal(X).           % query form, accepted by parse_query

Builtins are recognised by functor/arity: findall/3, set/2, list_length/2,
member/2, `is`/2 and the comparison operators. Anonymous `_` variables are
given a fresh identity per occurrence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from ..errors import RuleSyntaxError
from .terms import Atom, Int, PList, Struct, Term, Var, fresh_var, variables

COMPARISON_OPS = {"<", ">", "=<", ">=", "==", "\\==", "=", "is"}
BUILTIN_SIGNATURES = {
    ("findall", 3),
    ("set", 2),
    ("list_length", 2),
    ("member", 2),
}


def is_builtin(term: Struct) -> bool:
    if term.functor in COMPARISON_OPS and len(term.args) == 2:
        return True
    return (term.functor, len(term.args)) in BUILTIN_SIGNATURES


@dataclass(frozen=True)
class Lit:
    """One body element: a plain call, or the same under default negation."""

    term: Struct
    negated: bool = False

    def __repr__(self) -> str:
        return f"not {self.term!r}" if self.negated else repr(self.term)


@dataclass(frozen=True)
class Rule:
    head: Optional[Struct]          # None for headless constraints
    body: tuple[Lit, ...]
    source: str = ""                # original text, used in justifications

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    @property
    def body_pos(self) -> tuple[Struct, ...]:
        return tuple(l.term for l in self.body if not l.negated and not is_builtin(l.term))

    @property
    def body_naf(self) -> tuple[Struct, ...]:
        return tuple(l.term for l in self.body if l.negated)

    @property
    def body_builtin(self) -> tuple[Struct, ...]:
        return tuple(l.term for l in self.body if not l.negated and is_builtin(l.term))

    def __repr__(self) -> str:
        if self.head is None:
            return ":- " + ", ".join(map(repr, self.body)) + "."
        if not self.body:
            return f"{self.head!r}."
        return f"{self.head!r} :- " + ", ".join(map(repr, self.body)) + "."


class Program:
    """An immutable bundle of clauses indexed by predicate name/arity."""

    def __init__(self, rules: Iterable[Rule]):
        self.rules: tuple[Rule, ...] = tuple(rules)
        self.constraints: tuple[Rule, ...] = tuple(r for r in self.rules if r.head is None)
        self._index: dict[tuple[str, int], list[Rule]] = {}
        for rule in self.rules:
            if rule.head is None:
                continue
            key = (rule.head.functor, len(rule.head.args))
            self._index.setdefault(key, []).append(rule)

    def clauses(self, functor: str, arity: int) -> list[Rule]:
        return self._index.get((functor, arity), [])

    def predicates(self) -> set[tuple[str, int]]:
        return set(self._index.keys())

    def extended(self, more: Iterable[Rule]) -> "Program":
        return Program(self.rules + tuple(more))

    def __len__(self) -> int:
        return len(self.rules)


# --- range restriction -------------------------------------------------------

def check_range_restricted(rule: Rule) -> list[str]:
    """Return violation messages (empty when the rule is safe).

    Safety: every named variable in the head or under negation must occur in
    a positive body literal or be bound as a builtin output (`is`/`=`
    left side, findall/set/list_length result). Anonymous variables under
    negation are existential and exempt. Variables inside a findall goal
    count as bound: they are channels the caller must ground (aggregation
    rules are queried with their grouping arguments instantiated), and the
    solver still rejects any non-ground answer at runtime.
    """
    bound: set[Var] = set()
    for lit in rule.body:
        if lit.negated:
            continue
        t = lit.term
        if not is_builtin(t):
            bound.update(variables(t))
        elif t.functor in ("is", "="):
            bound.update(v for v in variables(t.args[0]))
        elif t.functor == "findall":
            bound.update(variables(t.args[1]))
            bound.update(variables(t.args[2]))
        elif t.functor in ("set", "list_length"):
            bound.update(variables(t.args[1]))
        elif t.functor == "member":
            bound.update(variables(t.args[0]))
    problems = []
    if rule.head is not None:
        for v in variables(rule.head):
            if v not in bound and not v.anonymous:
                problems.append(f"head variable {v!r} not bound by a positive body literal")
    for naf in (l.term for l in rule.body if l.negated):
        for v in variables(naf):
            if v not in bound and not v.anonymous:
                problems.append(f"negated variable {v!r} not bound by a positive body literal")
    return problems


# --- rule text reader ---------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<neck>:-)
  | (?P<query>\?-)
  | (?P<op>=<|>=|\\==|==|=|<|>)
  | (?P<int>-?\d+)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<punct>[(),.\[\]|+\-*/])
    """,
    re.VERBOSE,
)

_ARITH_TOKENS = {"+", "-", "*", "/", "mod"}


class _Tokens:
    def __init__(self, text: str):
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        line = 1
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise RuleSyntaxError(f"unexpected character {text[pos]!r}", line)
            kind = m.lastgroup
            value = m.group()
            line += value.count("\n")
            if kind not in ("ws", "comment"):
                self.items.append((kind, value, line))
            pos = m.end()
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.items[self.i] if self.i < len(self.items) else None

    def next(self) -> tuple[str, str, int]:
        item = self.peek()
        if item is None:
            raise RuleSyntaxError("unexpected end of input")
        self.i += 1
        return item

    def accept(self, value: str) -> bool:
        item = self.peek()
        if item and item[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        item = self.next()
        if item[1] != value:
            raise RuleSyntaxError(f"expected {value!r}, found {item[1]!r}", item[2])


class _Parser:
    def __init__(self, text: str):
        self.toks = _Tokens(text)
        self.varmap: dict[str, Var] = {}

    def fresh_scope(self) -> None:
        self.varmap = {}

    def parse_clauses(self) -> list[tuple[str, Optional[Struct], list[Lit], str]]:
        clauses = []
        while self.toks.peek() is not None:
            self.fresh_scope()
            start = self.toks.i
            kind = "rule"
            head: Optional[Struct] = None
            body: list[Lit] = []
            if self.toks.accept("?-"):
                kind = "query"
                body = self.body()
            elif self.toks.accept(":-"):
                kind = "constraint"
                body = self.body()
            else:
                head = self.struct()
                if self.toks.accept(":-"):
                    body = self.body()
            self.toks.expect(".")
            source = self._source_text(start)
            clauses.append((kind, head, body, source))
        return clauses

    def _source_text(self, start: int) -> str:
        parts = []
        for kind, value, _ in self.toks.items[start : self.toks.i]:
            parts.append(value)
        out = ""
        for p in parts:
            if out and out[-1] not in "([" and p not in ")],.(":
                out += " "
            out += p
        return out

    def body(self) -> list[Lit]:
        lits = [self.literal()]
        while self.toks.accept(","):
            lits.append(self.literal())
        return lits

    def literal(self) -> Lit:
        item = self.toks.peek()
        if item and item[1] == "not" and item[0] == "name":
            nxt = self.toks.items[self.toks.i + 1 : self.toks.i + 2]
            if nxt and nxt[0][1] != "(":  # `not` as a predicate name still works: not(...)
                self.toks.next()
                return Lit(self._as_literal(self.op_term()), negated=True)
        return Lit(self._as_literal(self.op_term()))

    @staticmethod
    def _as_literal(term: Term) -> Struct:
        if isinstance(term, Atom):
            return Struct(term.name, ())
        if not isinstance(term, Struct):
            raise RuleSyntaxError(f"expected a literal, found {term!r}")
        return term

    def op_term(self) -> Term:
        left = self.arith()
        item = self.toks.peek()
        if item and item[1] in COMPARISON_OPS and item[0] in ("op", "name"):
            self.toks.next()
            right = self.arith()
            return Struct(item[1], (left, right))
        return left

    def arith(self) -> Term:
        term = self.arith_factor()
        while True:
            item = self.toks.peek()
            if item and item[1] in ("+", "-"):
                self.toks.next()
                right = self.arith_factor()
                term = Struct(item[1], (term, right))
            else:
                return term

    def arith_factor(self) -> Term:
        term = self.primary()
        while True:
            item = self.toks.peek()
            if item and item[1] in ("*", "/", "mod"):
                op = self.toks.next()[1]
                right = self.primary()
                term = Struct("//" if op == "/" else op, (term, right))
            else:
                return term

    def primary(self) -> Term:
        kind, value, line = self.toks.next()
        if kind == "int":
            return Int(int(value))
        if kind == "var":
            if value == "_":
                return fresh_var()
            if value not in self.varmap:
                self.varmap[value] = Var(value)
            return self.varmap[value]
        if kind == "name":
            if self.toks.accept("("):
                args = [self.op_term()]
                while self.toks.accept(","):
                    args.append(self.op_term())
                self.toks.expect(")")
                return Struct(value, tuple(args))
            return Atom(value)
        if value == "[":
            if self.toks.accept("]"):
                return PList(())
            items = [self.op_term()]
            while self.toks.accept(","):
                items.append(self.op_term())
            self.toks.expect("]")
            return PList(tuple(items))
        if value == "(":
            inner = self.op_term()
            self.toks.expect(")")
            return inner
        raise RuleSyntaxError(f"unexpected token {value!r}", line)

    def struct(self) -> Struct:
        term = self.op_term()
        if isinstance(term, Atom):
            return Struct(term.name, ())
        if not isinstance(term, Struct):
            raise RuleSyntaxError(f"expected a head literal, found {term!r}")
        return term


def parse_program(text: str, *, check_safety: bool = True) -> list[Rule]:
    """Parse rule text into a clause list (queries not allowed here)."""
    rules = []
    for kind, head, body, source in _Parser(text).parse_clauses():
        if kind == "query":
            raise RuleSyntaxError("queries (?-) are not allowed in a program file")
        if head is not None and isinstance(head, Atom):
            head = Struct(head.name, ())
        rule = Rule(head, tuple(body), source)
        if check_safety:
            problems = check_range_restricted(rule)
            if problems:
                raise RuleSyntaxError(f"unsafe rule {source!r}: {problems[0]}")
        rules.append(rule)
    return rules


def parse_query(text: str) -> list[Lit]:
    """Parse `?- g1, ..., gn.` (the `?-` is optional) into a literal list."""
    clauses = _Parser(text).parse_clauses()
    if len(clauses) != 1:
        raise RuleSyntaxError("expected exactly one query")
    kind, head, body, _ = clauses[0]
    if kind == "rule" and head is not None and not body:
        return [Lit(head)]
    if kind in ("query", "constraint"):
        return list(body)
    raise RuleSyntaxError("not a query")


def parse_term(text: str) -> Term:
    """Parse a single term (no trailing dot required)."""
    parser = _Parser(text + " .")
    term = parser.op_term()
    parser.toks.expect(".")
    return term
