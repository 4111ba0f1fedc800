"""Predicate stratification over the rule dependency graph.

Negation edges and aggregation edges (the goal inside findall) must
strictly increase the stratum; positive edges may stay level. A program
whose dependency graph has a negation/aggregation edge inside a strongly
connected component has no stratification and is rejected.
"""

from __future__ import annotations

from ..errors import UnstratifiableProgram
from .program import Program, Rule, is_builtin
from .terms import Struct

Pred = tuple[str, int]


def _body_dependencies(rule: Rule) -> list[tuple[Pred, bool]]:
    """(predicate, strict) pairs the rule's head depends on."""
    deps: list[tuple[Pred, bool]] = []
    for lit in rule.body:
        t = lit.term
        if is_builtin(t):
            if t.functor == "findall" and isinstance(t.args[1], Struct):
                goal = t.args[1]
                deps.append(((goal.functor, len(goal.args)), True))
            continue
        deps.append(((t.functor, len(t.args)), lit.negated))
    return deps


def check_stratified(program: Program) -> dict[Pred, int]:
    """Return a predicate -> stratum map, or raise UnstratifiableProgram.

    Facts and predicates with no negated dependencies sit at stratum 0;
    each negation/aggregation edge raises the stratum by at least one.
    """
    edges: dict[Pred, list[tuple[Pred, bool]]] = {}
    preds: set[Pred] = set()
    for rule in program.rules:
        if rule.head is None:
            continue
        head = (rule.head.functor, len(rule.head.args))
        preds.add(head)
        for dep, strict in _body_dependencies(rule):
            preds.add(dep)
            edges.setdefault(head, []).append((dep, strict))

    # Tarjan SCC over the dependency graph, iterative to avoid deep recursion.
    index: dict[Pred, int] = {}
    lowlink: dict[Pred, int] = {}
    on_stack: dict[Pred, bool] = {}
    stack: list[Pred] = []
    scc_of: dict[Pred, int] = {}
    sccs: list[list[Pred]] = []
    counter = [0]

    def strongconnect(root: Pred) -> None:
        work = [(root, iter(edges.get(root, ())))]
        index[root] = lowlink[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            node, it = work[-1]
            advanced = False
            for dep, _ in it:
                if dep not in index:
                    index[dep] = lowlink[dep] = counter[0]
                    counter[0] += 1
                    stack.append(dep)
                    on_stack[dep] = True
                    work.append((dep, iter(edges.get(dep, ()))))
                    advanced = True
                    break
                if on_stack.get(dep):
                    lowlink[node] = min(lowlink[node], index[dep])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    scc_of[w] = len(sccs)
                    if w == node:
                        break
                sccs.append(comp)

    for p in sorted(preds):
        if p not in index:
            strongconnect(p)

    for head, deps in edges.items():
        for dep, strict in deps:
            if strict and scc_of[head] == scc_of[dep]:
                cycle = sorted({f"{n}/{a}" for n, a in sccs[scc_of[head]]})
                raise UnstratifiableProgram(cycle)

    # Longest strict-edge path over the SCC condensation gives the stratum.
    strata: dict[Pred, int] = {p: 0 for p in preds}
    changed = True
    guard = 0
    while changed:
        changed = False
        guard += 1
        if guard > len(preds) + 2:
            raise UnstratifiableProgram(sorted(f"{n}/{a}" for n, a in preds))
        for head, deps in edges.items():
            for dep, strict in deps:
                need = strata[dep] + (1 if strict else 0)
                if strata[head] < need:
                    strata[head] = need
                    changed = True
    return strata
