"""Proof trees for answers, their English rendering, and a validity checker.

Every answer the solver produces carries a Justification. A node records
the ground goal it establishes and how: by a program rule (children are the
instantiated body literals, in order), by a fact, by failure-to-prove under
negation, or by a builtin (findall nodes carry one child per collected
solution).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .program import Program, Rule
from .terms import Atom, Struct, Term, is_ground, render, unify

KIND_RULE = "rule"
KIND_FACT = "fact"
KIND_NAF = "naf-failure"
KIND_BUILTIN = "builtin"


@dataclass(frozen=True)
class Justification:
    goal: Term
    kind: str
    rule_used: Optional[Rule] = None
    children: tuple["Justification", ...] = ()

    def leaves(self) -> list["Justification"]:
        if not self.children:
            return [self]
        out = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def fact_leaves(self) -> list[Term]:
        return [leaf.goal for leaf in self.leaves() if leaf.kind == KIND_FACT]


# English templates for the commonsense vocabulary; anything unlisted falls
# back to the raw term text. Index 0 is the timestamp argument.
_TEMPLATES = {
    ("location", 3): "{1} is at {2} at {0}",
    ("possible_location", 3): "{1} may be at {2} at {0}",
    ("neg_location", 3): "{1} is not at {2} at {0}",
    ("object_at", 3): "{1} is at {2} at {0}",
    ("motion", 4): "there is a motion of {2} to {3} at {0}",
    ("contact", 4): "{2} contacts {3} at {0}",
    ("cause", 3): "{1} causes {2} at {0}",
    ("transfer", 3): "{2} is transferred at {0}",
    ("transfer", 4): "{2} is transferred to {3} at {0}",
    ("release", 3): "{2} is released at {0}",
    ("acquire", 3): "{1} acquires {2} at {0}",
    ("give_event", 4): "{1} gives {2} to {3} at {0}",
    ("release_event", 3): "{1} lets go of {2} at {0}",
    ("received", 3): "{1} receives {2} at {0}",
    ("relinquished", 3): "{1} relinquishes {2} at {0}",
    ("gave", 4): "{1} gave {2} to {3} at {0}",
    ("count_object", 3): "{1} carries {2} objects at {0}",
    ("truth_location", 4): "whether {1} is at {2} at {0}: {3}",
    ("succ_time", 2): "{0} is followed by {1}",
}


def _strip_tag(term: Term) -> str:
    """agent(john) -> john, during(grab) -> grab, the_apple -> the_apple."""
    if isinstance(term, Struct) and len(term.args) == 1:
        return _strip_tag(term.args[0])
    return render(term)


def describe_goal(goal: Term) -> str:
    if isinstance(goal, Struct):
        if goal.functor == "property" and len(goal.args) == 4:
            kind, t, who, what = goal.args
            if isinstance(kind, Atom) and kind.name == "possession":
                return f"{_strip_tag(who)} has {_strip_tag(what)} at {render(t)}"
        template = _TEMPLATES.get((goal.functor, len(goal.args)))
        if template:
            return template.format(*[_strip_tag(a) for a in goal.args])
    return render(goal)


def render_justification(j: Justification, depth_limit: int = 20) -> str:
    """Indented English, two spaces per level, byte-deterministic."""
    lines: list[str] = []

    def emit(node: Justification, depth: int) -> None:
        pad = "  " * depth
        if depth >= depth_limit:
            lines.append(pad + "…")
            return
        if node.kind == KIND_NAF:
            lines.append(pad + "it is not the case that " + describe_goal(node.goal))
        elif node.kind == KIND_FACT:
            lines.append(pad + describe_goal(node.goal) + " (fact)")
        elif node.kind == KIND_BUILTIN:
            lines.append(pad + describe_goal(node.goal) + " (computed)")
            for child in node.children:
                emit(child, depth + 1)
        else:
            suffix = ", because" if node.children else ""
            lines.append(pad + describe_goal(node.goal) + suffix)
            for child in node.children:
                emit(child, depth + 1)

    emit(j, 0)
    return "\n".join(lines) + "\n"


def validate_justification(j: Justification, program: Program) -> list[str]:
    """Mechanical check of the node invariants; returns problem strings.

    A rule node's goal must equal the instantiated head of rule_used and its
    children must instantiate the rule's body literals one to one, in order,
    under a single consistent substitution. Fact leaves must be ground
    instances of program facts.
    """
    problems: list[str] = []

    def visit(node: Justification) -> None:
        if node.kind == KIND_FACT:
            if not is_ground(node.goal):
                problems.append(f"fact leaf not ground: {render(node.goal)}")
                return
            assert isinstance(node.goal, Struct)
            hit = any(
                clause.is_fact and unify(clause.head, node.goal, {}) is not None
                for clause in program.clauses(node.goal.functor, len(node.goal.args))
            )
            if not hit:
                problems.append(f"fact leaf not in program: {render(node.goal)}")
        elif node.kind == KIND_RULE:
            rule = node.rule_used
            if rule is None or rule.head is None:
                problems.append(f"rule node without a rule: {render(node.goal)}")
                return
            subst = unify(rule.head, node.goal, {})
            if subst is None:
                problems.append(f"goal {render(node.goal)} does not match head of {rule!r}")
                return
            if len(node.children) != len(rule.body):
                problems.append(f"children/body arity mismatch at {render(node.goal)}")
                return
            for lit, child in zip(rule.body, node.children):
                if lit.negated != (child.kind == KIND_NAF):
                    problems.append(f"negation mismatch under {render(node.goal)}")
                    continue
                next_subst = unify(lit.term, child.goal, subst)
                if next_subst is None:
                    problems.append(
                        f"child {render(child.goal)} does not instantiate "
                        f"{render(lit.term)} under {render(node.goal)}"
                    )
                    continue
                subst = next_subst
                visit(child)
        elif node.kind == KIND_BUILTIN:
            for child in node.children:
                visit(child)
        elif node.kind == KIND_NAF:
            if not is_ground(node.goal, ignore_anonymous=True):
                problems.append(f"naf node not ground: {render(node.goal)}")
        else:
            problems.append(f"unknown node kind {node.kind!r}")

    visit(j)
    return problems
