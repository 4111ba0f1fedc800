"""Utterance understanding for the reservation agent.

Every turn becomes a little fact program: token mentions and bigrams, plus
frame semantics when the controlled grammar covers the sentence. Slot
values, exclusions, and ingredient preferences are then *derived* by the
rule engine over the dialog domain knowledge, which is what keeps
out-of-vocabulary entity names working: typing comes from the KB and from
lexical patterns, not from a hard-coded list in the code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..engine import Atom, Program, Rule, Solver, Struct, Var, parse_program
from ..errors import KdnluError
from ..lexicon import bundled_lexicon
from ..semgen import get_sentence_semantics
from ..syntax import parse_sentence, tokenize
from .state import DialogState

SILENCE = "<SILENCE>"


@lru_cache(maxsize=2)
def domain_rules(path: str | None = None) -> tuple[Rule, ...]:
    file = (
        Path(path)
        if path
        else Path(str(resources.files("kdnlu") / "resources" / "dialog" / "domain.rules"))
    )
    return tuple(parse_program(file.read_text()))


@dataclass
class Understanding:
    intent: str                      # silence|bye|thanks|info|accept|reject|deny|update|greeting|request|exception|inform|unknown
    slots: dict = field(default_factory=dict)
    restaurant: str | None = None
    exclusions: tuple[str, ...] = ()
    ingredients: tuple[str, ...] = ()
    info_kind: str | None = None     # phone | address | other
    justification: str = ""


_ACCEPT_PHRASES = {"let's do it", "it's perfect", "i love that"}
_REJECT_PHRASES = {"no this does not work for me", "i don't like that", "do you have something else"}
_BYE_PHRASES = {"no thank you", "no thanks"}
_THANKS_PHRASES = {"thank you", "thanks"}
_UPDATE_PREFIXES = ("instead", "actually")
_REQUEST_WORDS = {"book", "reservation", "table", "reserve"}
_INFO_WORDS = {"phone", "address", "number"}


def _utterance_tokens(text: str) -> list[str]:
    try:
        toks = tokenize(text)
    except KdnluError:
        return []
    return [t.surface.lower() for t in toks if t.pos != "PUNCT"]


def _utterance_fact_rules(text: str, words: list[str]) -> list[Rule]:
    rules = [Rule(Struct("mention", (Atom(w),)), ()) for w in dict.fromkeys(words)]
    seen = set()
    for a, b in zip(words, words[1:]):
        if (a, b) not in seen:
            seen.add((a, b))
            rules.append(Rule(Struct("bigram", (Atom(a), Atom(b))), ()))
    # Frame semantics when the sentence is inside the controlled grammar.
    try:
        tree = parse_sentence(text)
        facts, _ = get_sentence_semantics(tree, bundled_lexicon(), 1)
        rules.extend(Rule(f.to_term(), ()) for f in facts)
    except KdnluError:
        pass
    return rules


def session_fact_rules(state: DialogState) -> list[Rule]:
    rules: list[Rule] = []
    for name, value in state.slots.filled().items():
        rules.append(
            Rule(Struct("query_parameter_value", (Atom(name), Atom(value))), ())
        )
    for c in sorted(state.rejected_cuisines):
        rules.append(Rule(Struct("rejected_cuisine", (Atom("user"), Atom(c))), ()))
    for c in sorted(state.excluded_cuisines):
        rules.append(Rule(Struct("excluded_cuisine", (Atom("user"), Atom(c))), ()))
    for i in sorted(state.wanted_ingredients):
        rules.append(Rule(Struct("wanted_ingredient", (Atom("user"), Atom(i))), ()))
    for fact in state.kb_facts:
        rules.append(Rule(Struct("restaurant", (Atom(fact.restaurant),)), ()))
    for text in state.profile_facts:
        rules.extend(parse_program(text))
    return rules


def _dedupe(rules: list[Rule]) -> list[Rule]:
    out, seen = [], set()
    for r in rules:
        key = (r.head, r.body)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def turn_program(state: DialogState, text: str | None = None) -> Program:
    rules = list(domain_rules())
    rules.extend(session_fact_rules(state))
    if text is not None:
        words = _utterance_tokens(text)
        rules.extend(_utterance_fact_rules(text, words))
    return Program(_dedupe(rules))


def _query_values(solver: Solver, query: Struct, var: str) -> list[str]:
    out = []
    for ans in solver.solve(query):
        value = ans.bindings[var]
        if isinstance(value, Atom) and value.name not in out:
            out.append(value.name)
    return out


def _query_values_justified(
    solver: Solver, query: Struct, var: str
) -> tuple[list[str], list[str]]:
    from ..engine import render_justification

    values, proofs = [], []
    for ans in solver.solve(query):
        value = ans.bindings[var]
        if isinstance(value, Atom) and value.name not in values:
            values.append(value.name)
            proofs.append(render_justification(ans.justification))
    return values, proofs


def understand(state: DialogState, text: str) -> Understanding:
    """Classify the utterance and derive typed slot values via the engine."""
    stripped = text.strip()
    if stripped == SILENCE:
        return Understanding("silence")
    lowered = stripped.lower().rstrip(".!?").strip()
    words = _utterance_tokens(stripped)

    program = turn_program(state, stripped)
    solver = Solver(program)
    found: dict[str, str] = {}
    proof_lines: list[str] = []
    for slot in ("cuisine", "location", "party_size", "price"):
        values, proofs = _query_values_justified(
            solver, Struct("slot_mention", (Atom(slot), Var("X"))), "X"
        )
        if values:
            found[slot] = values[0]
            proof_lines.append(proofs[0].rstrip("\n"))
    restaurants = _query_values(
        solver, Struct("slot_mention", (Atom("restaurant"), Var("X"))), "X"
    )
    exclusions = tuple(
        _query_values(solver, Struct("excluded_mention", (Var("X"),)), "X")
    )
    ingredients = tuple(
        _query_values(solver, Struct("ingredient_mention", (Var("X"),)), "X")
    )
    if exclusions and found.get("cuisine") in exclusions:
        del found["cuisine"]
    greeting = bool(list(solver.solve(Struct("utterance_greeting", ()))))

    intent = "unknown"
    info_kind = None
    if lowered in _BYE_PHRASES:
        intent = "bye"
    elif lowered in _THANKS_PHRASES:
        intent = "thanks"
    elif lowered in _ACCEPT_PHRASES:
        intent = "accept"
    elif any(w in _INFO_WORDS for w in words) and (
        "its" in words or "restaurant" in words or lowered.startswith(("what", "may", "do", "can"))
    ):
        intent = "info"
        info_kind = "phone" if "phone" in words else (
            "address" if "address" in words else "other"
        )
    elif lowered in _REJECT_PHRASES:
        intent = "reject"
    elif lowered == "no":
        intent = "deny"
    elif lowered.startswith(_UPDATE_PREFIXES):
        intent = "update"
    elif restaurants and any(w in _REQUEST_WORDS for w in words):
        intent = "request"
    elif any(w in _REQUEST_WORDS for w in words):
        intent = "request"
    elif greeting and not found and not ingredients:
        intent = "greeting"
    elif exclusions:
        intent = "exception"
    elif found or ingredients:
        intent = "inform"

    return Understanding(
        intent=intent,
        slots=found,
        restaurant=restaurants[0] if restaurants else None,
        exclusions=exclusions,
        ingredients=ingredients,
        info_kind=info_kind,
        justification="\n".join(proof_lines),
    )


def missing_parameters(state: DialogState) -> list[str]:
    """The reservation slots still unfilled, via the engine query."""
    solver = Solver(turn_program(state))
    for ans in solver.solve(
        Struct("all_missing_parameter", (Var("ParaList"),))
    ):
        plist = ans.bindings["ParaList"]
        return [item.name for item in plist.items]
    return []


def suggest_cuisines(state: DialogState) -> list[str]:
    """Cuisines the engine is willing to suggest, narrowed by ingredients."""
    solver = Solver(turn_program(state))
    if state.wanted_ingredients:
        query = Struct("cuisine_candidate", (Atom("user"), Var("C")))
    else:
        query = Struct("cuisine_suggestion", (Atom("user"), Var("C")))
    return _query_values(solver, query, "C")
