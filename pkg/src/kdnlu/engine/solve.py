"""Goal-directed evaluation of stratified programs with default negation.

The solver runs SLD-style, left to right, clause order first, with a
variant-keyed answer table per solver instance. A call whose variant is
already being expanded higher in the derivation consumes the answers known
so far instead of expanding again; the top-level loop then re-runs the goal
until the table stops growing, which makes the strategy complete for
recursive (including left-recursive) stratified programs while staying
goal-directed: only predicates reachable from the query are ever touched.

Negation and aggregation goals are evaluated to completion in a nested
fixpoint. Stratification guarantees their predicate cones are disjoint from
every call currently on the stack, so those nested runs never read a
half-built table.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterator, Union

from ..errors import BuiltinTypeError, EngineError, Floundering, NonterminationGuard
from .justify import (
    KIND_BUILTIN,
    KIND_FACT,
    KIND_NAF,
    KIND_RULE,
    Justification,
)
from .program import Lit, Program, Rule, is_builtin
from .terms import (
    Atom,
    Int,
    PList,
    Struct,
    Subst,
    Term,
    Var,
    is_ground,
    rename,
    render,
    resolve,
    unify,
    variables,
    variant_key,
)


@dataclass(frozen=True)
class Answer:
    bindings: dict
    justification: Justification

    def __getitem__(self, name: str) -> Term:
        return self.bindings[name]


class _Entry:
    __slots__ = ("answers", "keys", "complete", "expanded_at")

    def __init__(self) -> None:
        self.answers: list[tuple[Struct, Justification]] = []
        self.keys: set[Struct] = set()
        self.complete = False
        # Global answer count when this variant last finished expanding;
        # -1 means never expanded. Re-expansion is pointless (derives the
        # exact same set) unless some table grew in the meantime.
        self.expanded_at = -1

    def add(self, term: Struct, just: Justification) -> bool:
        if term in self.keys:
            return False
        self.keys.add(term)
        self.answers.append((term, just))
        return True


class Solver:
    """One reasoning session over an immutable program.

    The answer table lives for the lifetime of the solver; concurrent use of
    one Solver is not supported (share the Program, not the Solver).
    """

    def __init__(self, program: Program, depth_limit: int = 10_000):
        self.program = program
        self.depth_limit = depth_limit
        self.tables: dict[tuple, _Entry] = {}
        self._answer_count = 0
        self._wrap_counter = 0
        if sys.getrecursionlimit() < 100_000:
            sys.setrecursionlimit(100_000)

    # -- public API ---------------------------------------------------------

    def solve(self, query: Union[Struct, Atom, list[Lit], Lit]) -> Iterator[Answer]:
        """Enumerate answers for a query literal or conjunction."""
        if isinstance(query, Atom):
            query = Struct(query.name, ())
        if isinstance(query, Lit):
            query = [query]
        if isinstance(query, list) and len(query) == 1 and not query[0].negated:
            query = query[0].term
        if isinstance(query, list):
            pattern, runner = self._wrap_conjunction(query)
        else:
            pattern, runner = query, self
        entry = runner._solve_to_completion(pattern, 0)
        for ans_term, just in entry.answers:
            subst = unify(pattern, ans_term, {})
            if subst is None:
                continue
            bindings = {
                v.name: resolve(v, subst)
                for v in variables(pattern)
                if not v.anonymous
            }
            yield Answer(bindings, just)

    def prove_naf(self, goal: Struct) -> tuple[bool, Justification]:
        """Negation as failure on a ground goal: true iff no proof exists."""
        goal = resolve(goal, {})
        self._require_naf_ground(goal)
        entry = self._solve_to_completion(goal, 0)
        if entry.answers:
            return False, entry.answers[0][1]
        return True, Justification(goal, KIND_NAF)

    # -- plumbing -------------------------------------------------------------

    def _wrap_conjunction(self, lits: list[Lit]) -> tuple[Struct, "Solver"]:
        named = []
        seen = set()
        for lit in lits:
            for v in variables(lit.term):
                if not v.anonymous and v not in seen:
                    seen.add(v)
                    named.append(v)
        self._wrap_counter += 1
        head = Struct(f"_query{self._wrap_counter}", tuple(named))
        rule = Rule(head, tuple(lits), "query")
        sub = Solver(self.program.extended([rule]), self.depth_limit)
        sub.tables = self.tables  # share memo for the underlying predicates
        return head, sub

    def _solve_to_completion(self, goal: Struct, depth: int) -> _Entry:
        key = variant_key(goal)
        entry = self.tables.get(key)
        if entry is not None and entry.complete:
            return entry
        while True:
            before = self._answer_count
            for _ in self._call(goal, depth, set()):
                pass
            if self._answer_count == before:
                break
        entry = self.tables.setdefault(key, _Entry())
        entry.complete = True
        return entry

    def _call(
        self, goal: Struct, depth: int, stack: set
    ) -> Iterator[tuple[Struct, Justification]]:
        if depth > self.depth_limit:
            raise NonterminationGuard(
                f"goal recursion exceeded {self.depth_limit} at {render(goal)}"
            )
        key = variant_key(goal)
        entry = self.tables.setdefault(key, _Entry())
        if entry.complete:
            yield from entry.answers
            return
        if key in stack or entry.expanded_at == self._answer_count:
            # In-progress ancestor, or nothing anywhere has changed since the
            # last expansion: replay known answers (list may grow meanwhile).
            i = 0
            while i < len(entry.answers):
                yield entry.answers[i]
                i += 1
            return
        stack.add(key)
        # Stamp before expanding: any growth during the expansion (its own
        # answers included) must allow a later re-expansion.
        entry.expanded_at = self._answer_count
        try:
            yielded: set[Struct] = set()
            for clause in self.program.clauses(goal.functor, len(goal.args)):
                mapping: dict = {}
                head = rename(clause.head, mapping)
                subst = unify(goal, head, {})
                if subst is None:
                    continue
                if clause.is_fact:
                    ans = resolve(goal, subst)
                    if not is_ground(ans):
                        raise EngineError(f"non-ground fact match: {render(ans)}")
                    just = Justification(ans, KIND_FACT, clause)
                    if entry.add(ans, just):
                        self._answer_count += 1
                        self._guard_growth(entry, goal)
                    if ans not in yielded:
                        yielded.add(ans)
                        yield ans, self._stored(entry, ans)
                    continue
                body = tuple(Lit(rename(l.term, mapping), l.negated) for l in clause.body)
                for final_subst, children in self._conj(body, subst, depth + 1, stack):
                    ans = resolve(goal, final_subst)
                    if not is_ground(ans):
                        raise EngineError(
                            f"rule {clause!r} produced non-ground answer {render(ans)}"
                        )
                    just = Justification(ans, KIND_RULE, clause, children)
                    if entry.add(ans, just):
                        self._answer_count += 1
                        self._guard_growth(entry, goal)
                    if ans not in yielded:
                        yielded.add(ans)
                        yield ans, self._stored(entry, ans)
        finally:
            stack.discard(key)

    def _guard_growth(self, entry: _Entry, goal: Struct) -> None:
        # A single goal variant accumulating more answers than the depth
        # bound means the program generates terms without end (e.g. through
        # arithmetic); recursion through the answer table is flat, so this
        # is the tabled counterpart of runaway goal recursion.
        if len(entry.answers) > self.depth_limit:
            raise NonterminationGuard(
                f"answer table for {render(goal)} exceeded {self.depth_limit} entries"
            )

    @staticmethod
    def _stored(entry: _Entry, term: Struct) -> Justification:
        for t, j in entry.answers:
            if t == term:
                return j
        raise EngineError("answer table lost an entry")

    def _conj(
        self, body: tuple[Lit, ...], subst: Subst, depth: int, stack: set
    ) -> Iterator[tuple[Subst, tuple[Justification, ...]]]:
        if not body:
            yield subst, ()
            return
        lit, rest = body[0], body[1:]
        goal = resolve(lit.term, subst)
        if lit.negated:
            if not isinstance(goal, Struct):
                raise EngineError(f"cannot negate {render(goal)}")
            self._require_naf_ground(goal)
            sub_entry = self._solve_to_completion(goal, depth)
            if sub_entry.answers:
                return
            child = Justification(goal, KIND_NAF)
            for s2, cs in self._conj(rest, subst, depth, stack):
                yield s2, (child,) + cs
        elif isinstance(goal, Struct) and is_builtin(goal):
            for s2, child in self._builtin(goal, subst, depth):
                for s3, cs in self._conj(rest, s2, depth, stack):
                    yield s3, (child,) + cs
        else:
            if not isinstance(goal, Struct):
                raise EngineError(f"cannot call {render(goal)}")
            for ans, just in self._call(goal, depth, stack):
                s2 = unify(lit.term, ans, subst)
                if s2 is None:
                    continue
                for s3, cs in self._conj(rest, s2, depth, stack):
                    yield s3, (just,) + cs

    @staticmethod
    def _require_naf_ground(goal: Struct) -> None:
        for v in variables(goal):
            if not v.anonymous:
                raise Floundering(
                    f"variable {v!r} unbound under negation in {render(goal)}"
                )

    # -- builtins -----------------------------------------------------------------

    def _builtin(
        self, goal: Struct, subst: Subst, depth: int
    ) -> Iterator[tuple[Subst, Justification]]:
        name, arity = goal.functor, len(goal.args)
        if name == "findall" and arity == 3:
            template, inner, out = goal.args
            if not isinstance(inner, Struct):
                raise BuiltinTypeError("findall goal must be a literal", inner)
            entry = self._solve_to_completion(inner, depth)
            collected = []
            children = []
            for ans, just in entry.answers:
                s = unify(inner, ans, {})
                if s is None:
                    continue
                collected.append(resolve(template, s))
                children.append(just)
            s2 = unify(out, PList(tuple(collected)), subst)
            if s2 is None:
                return
            child = Justification(resolve(goal, s2), KIND_BUILTIN, None, tuple(children))
            yield s2, child
            return
        if name == "set" and arity == 2:
            src = goal.args[0]
            if not isinstance(src, PList):
                raise BuiltinTypeError("set/2 expects a list", src)
            deduped: list[Term] = []
            for item in src.items:
                if item not in deduped:
                    deduped.append(item)
            s2 = unify(goal.args[1], PList(tuple(deduped)), subst)
            if s2 is None:
                return
            yield s2, Justification(resolve(goal, s2), KIND_BUILTIN)
            return
        if name == "list_length" and arity == 2:
            src = goal.args[0]
            if not isinstance(src, PList):
                raise BuiltinTypeError("list_length/2 expects a list", src)
            s2 = unify(goal.args[1], Int(len(src.items)), subst)
            if s2 is None:
                return
            yield s2, Justification(resolve(goal, s2), KIND_BUILTIN)
            return
        if name == "member" and arity == 2:
            src = goal.args[1]
            if not isinstance(src, PList):
                raise BuiltinTypeError("member/2 expects a list", src)
            for item in src.items:
                s2 = unify(goal.args[0], item, subst)
                if s2 is not None:
                    yield s2, Justification(resolve(goal, s2), KIND_BUILTIN)
            return
        if name == "=" and arity == 2:
            s2 = unify(goal.args[0], goal.args[1], subst)
            if s2 is not None:
                yield s2, Justification(resolve(goal, s2), KIND_BUILTIN)
            return
        if name == "is" and arity == 2:
            value = Int(_arith(goal.args[1]))
            s2 = unify(goal.args[0], value, subst)
            if s2 is not None:
                yield s2, Justification(resolve(goal, s2), KIND_BUILTIN)
            return
        if name in ("==", "\\==") and arity == 2:
            left, right = goal.args
            if not is_ground(left) or not is_ground(right):
                raise BuiltinTypeError(f"{name} needs ground arguments", goal)
            holds = (left == right) if name == "==" else (left != right)
            if holds:
                yield subst, Justification(goal, KIND_BUILTIN)
            return
        if name in ("<", ">", "=<", ">=") and arity == 2:
            lhs, rhs = (_arith(a) for a in goal.args)
            ok = {
                "<": lhs < rhs,
                ">": lhs > rhs,
                "=<": lhs <= rhs,
                ">=": lhs >= rhs,
            }[name]
            if ok:
                yield subst, Justification(goal, KIND_BUILTIN)
            return
        raise BuiltinTypeError(f"unknown builtin {name}/{arity}", goal)


def _arith(term: Term) -> int:
    if isinstance(term, Int):
        return term.value
    if isinstance(term, Struct) and len(term.args) == 2:
        left, right = (_arith(a) for a in term.args)
        if term.functor == "+":
            return left + right
        if term.functor == "-":
            return left - right
        if term.functor == "*":
            return left * right
        if term.functor == "//":
            if right == 0:
                raise BuiltinTypeError("division by zero", term)
            return left // right
        if term.functor == "mod":
            if right == 0:
                raise BuiltinTypeError("mod by zero", term)
            return left % right
    raise BuiltinTypeError(f"not arithmetic: {render(term)}", term)


def solve(
    query: Union[Struct, list[Lit]],
    program: Program,
    depth_limit: int = 10_000,
) -> Iterator[Answer]:
    """Enumerate the query's true ground instances in the perfect model."""
    return Solver(program, depth_limit).solve(query)


def builtin_eval(
    call: Struct,
    bindings: Subst | None = None,
    program: Program | None = None,
) -> Iterator[Subst]:
    """Evaluate one builtin call, yielding extended bindings.

    findall needs a program to enumerate its goal against; the pure
    builtins (set, list_length, member, comparisons, `is`, `=`) do not.
    """
    solver = Solver(program if program is not None else Program(()))
    resolved = resolve(call, bindings or {})
    if not isinstance(resolved, Struct) or not is_builtin(resolved):
        raise BuiltinTypeError(f"not a builtin call: {render(resolved)}", resolved)
    for subst, _ in solver._builtin(resolved, dict(bindings or {}), 0):
        yield subst


def prove_naf(goal: Struct, program: Program, depth_limit: int = 10_000):
    return Solver(program, depth_limit).prove_naf(goal)


def find_classical_conflicts(program: Program) -> list[tuple[Struct, Struct]]:
    """Pairs (p(...), neg_p(...)) that both hold for the same ground args.

    Classical negation is encoded with a neg_ prefix; this integrity check
    enforces that the two never co-hold.
    """
    conflicts = []
    preds = program.predicates()
    for name, arity in sorted(preds):
        if not name.startswith("neg_"):
            continue
        positive = name[len("neg_"):]
        if (positive, arity) not in preds:
            continue
        solver = Solver(program)
        pos_pattern = Struct(positive, tuple(Var(f"X{i}") for i in range(arity)))
        neg_pattern = Struct(name, tuple(Var(f"X{i}") for i in range(arity)))
        pos = {a for a, _ in solver._solve_to_completion(pos_pattern, 0).answers}
        for ans, _ in solver._solve_to_completion(neg_pattern, 0).answers:
            twin = Struct(positive, ans.args)
            if twin in pos:
                conflicts.append((twin, ans))
    return conflicts


def check_constraints(program: Program, depth_limit: int = 10_000) -> list[Rule]:
    """Headless rules are integrity constraints; return the violated ones."""
    violated = []
    for constraint in program.constraints:
        solver = Solver(program, depth_limit)
        if next(solver.solve(list(constraint.body)), None) is not None:
            violated.append(constraint)
    return violated
