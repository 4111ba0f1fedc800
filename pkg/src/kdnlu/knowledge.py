"""Question-side pipeline and the reusable commonsense knowledge base.

The KB ships as rule text (resources/kb/commonsense.rules) tagged by
section; questions map to query plans through a template table
(resources/kb/questions.tsv) so new question shapes are data, not code.
Answers come back as the dataset expects them: bare nouns, number words,
yes/no/maybe.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .engine import (
    Atom,
    Int,
    Program,
    Rule,
    Struct,
    Var,
    check_stratified,
    parse_program,
)
from .engine.solve import Answer
from .errors import MissingEntity, NoAnswer, UnsupportedQuestion
from .semgen import SemanticFact
from .syntax import ParseTree

_NUMBER_WORDS = [
    "none", "one", "two", "three", "four", "five",
    "six", "seven", "eight", "nine", "ten",
]

_DETERMINER_PREFIXES = ("the_", "an_", "a_")


# --- commonsense KB -----------------------------------------------------------

@dataclass(frozen=True)
class CommonsenseKB:
    rules: tuple[Rule, ...]
    provenance: dict  # rule -> section tag

    def program(self, extra: Iterable[Rule] = ()) -> Program:
        return Program(tuple(extra) + self.rules)


def load_kb(path: str | Path | None = None) -> CommonsenseKB:
    """Load rule text; sections are `% [tag]` comments above the rules."""
    file = (
        Path(path)
        if path
        else Path(str(resources.files("kdnlu") / "resources" / "kb" / "commonsense.rules"))
    )
    text = file.read_text()
    tags: dict[int, str] = {}
    tag = "untagged"
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("%") and "[" in stripped and "]" in stripped:
            tag = stripped[stripped.index("[") + 1 : stripped.index("]")]
        tags[lineno] = tag
    rules = tuple(parse_program(text))
    provenance = {}
    consumed = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("%"):
            if consumed < len(rules):
                provenance[rules[consumed]] = tags[lineno]
                consumed += 1
    kb = CommonsenseKB(rules, provenance)
    check_stratified(kb.program())  # stratified against an empty story
    return kb


@lru_cache(maxsize=1)
def bundled_kb() -> CommonsenseKB:
    return load_kb()


# --- story scaffolding -----------------------------------------------------------

def story_scaffolding(facts: list[SemanticFact], n_sentences: int) -> list[Rule]:
    """Ground context every story program carries.

    succ_time chains the sentence timestamps; known_place collects every
    location constant; asserted_location marks copular (re)assertions so
    the location inertia rule yields to them.
    """
    out: list[Rule] = []
    for i in range(1, n_sentences):
        out.append(Rule(Struct("succ_time", (Atom(f"t{i}"), Atom(f"t{i + 1}"))), ()))
    places: list[str] = []
    for f in facts:
        if f.predicate == "motion" and len(f.args) == 3:
            dest = f.args[2]
            if isinstance(dest, Struct) and dest.functor == "destination":
                places.append(dest.args[0].name)
        elif f.predicate in ("location", "possible_location", "neg_location"):
            places.append(f.args[-1].name)
    seen = set()
    for p in places:
        if p not in seen:
            seen.add(p)
            out.append(Rule(Struct("known_place", (Atom(p),)), ()))
    for f in facts:
        if f.predicate in ("location", "possible_location"):
            out.append(
                Rule(
                    Struct("asserted_location", (Atom(f"t{f.time}"), f.args[0])), ()
                )
            )
    deduped = []
    seen_rules = set()
    for r in out:
        if r.head not in seen_rules:
            seen_rules.add(r.head)
            deduped.append(r)
    return deduped


def compose_program(
    facts: list[SemanticFact],
    n_sentences: int,
    kb: CommonsenseKB,
    extra: Iterable[Rule] = (),
) -> Program:
    fact_rules = [Rule(f.to_term(), ()) for f in facts]
    scaffolding = story_scaffolding(facts, n_sentences)
    return Program(fact_rules + scaffolding + list(extra) + list(kb.rules))


# --- question classification ---------------------------------------------------------

@dataclass(frozen=True)
class QuestionType:
    name: str
    params: tuple[tuple[str, str], ...] = ()

    def param(self, key: str) -> str | None:
        for k, v in self.params:
            if k == key:
                return v
        return None


_PARAM_NAMES = {
    "where_person": ("person",),
    "where_object": ("object",),
    "where_before": ("object", "place"),
    "count_possessions": ("person",),
    "list_possessions": ("person",),
    "what_given": ("giver", "recipient"),
    "who_recipient": ("giver", "object"),
    "who_gave": ("object", "recipient"),
    "who_received": ("object",),
    "yes_no_location": ("person", "place"),
    "where_maybe": ("person", "place"),
}


@lru_cache(maxsize=2)
def _question_templates(path: str | None = None) -> tuple[tuple[tuple[str, ...], str], ...]:
    file = (
        Path(path)
        if path
        else Path(str(resources.files("kdnlu") / "resources" / "kb" / "questions.tsv"))
    )
    rows = []
    for raw in file.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        pattern, _, qtype = line.partition("\t")
        rows.append((tuple(pattern.split()), qtype.strip()))
    return tuple(rows)


def _signature(pt: ParseTree) -> list:
    return [leaf.token for leaf in pt.leaves()]


def _match_template(template: tuple[str, ...], tokens: list) -> Optional[list[str]]:
    if len(template) != len(tokens):
        return None
    captures: list[str] = []
    for want, tok in zip(template, tokens):
        if want == "<person>":
            if tok.pos != "PROPN":
                return None
            captures.append(tok.lemma)
        elif want == "<thing>":
            if tok.pos not in ("NOUN", "PROPN", "NUM"):
                return None
            captures.append(tok.lemma)
        elif want != tok.lemma and want != tok.surface.lower():
            return None
    return captures


def classify_question(
    pt: ParseTree, story_facts: list[SemanticFact] | None = None
) -> QuestionType:
    """Deterministic wh-word + verb + argument-shape classification.

    A yes/no location question becomes where_maybe when the story holds
    indefinite (possible_location) knowledge about the person asked about.
    """
    tokens = _signature(pt)
    for template, qtype in _question_templates():
        captures = _match_template(template, tokens)
        if captures is None:
            continue
        names = _PARAM_NAMES.get(qtype, ())
        params = tuple(zip(names, captures))
        if qtype == "yes_no_location" and story_facts:
            person = dict(params).get("person")
            for f in story_facts:
                if (
                    f.predicate == "possible_location"
                    and f.args
                    and isinstance(f.args[0], Atom)
                    and f.args[0].name == person
                ):
                    return QuestionType("where_maybe", params)
        return QuestionType(qtype, params)
    shape = " ".join(t.surface for t in tokens)
    raise UnsupportedQuestion(f"no question template matches {shape!r}", shape)


# --- query generation ---------------------------------------------------------------

@dataclass(frozen=True)
class QueryPlan:
    qtype: QuestionType
    query: Struct
    answer_var: str
    answer_kind: str               # entity | entity_list | yes_no_maybe | number
    generic_rule: Optional[Rule] = None
    extra_facts: tuple[Rule, ...] = ()
    pick: str = "unique"           # unique | latest | all


def _obj(name: str) -> Atom:
    return Atom(name if name.startswith("the_") else f"the_{name}")


def generate_query(
    qtype: QuestionType, entities: dict | None, time: int
) -> QueryPlan:
    """Instantiate the generic query for a classified question."""
    params = dict(qtype.params)
    if entities:
        params.update(entities)

    def need(key: str) -> str:
        value = params.get(key)
        if not value:
            raise MissingEntity(f"question type {qtype.name} needs {key!r}")
        return value

    now = Atom(f"t{time}")
    name = qtype.name
    if name == "where_person":
        return QueryPlan(
            qtype, Struct("location", (now, Atom(need("person")), Var("L"))), "L", "entity"
        )
    if name == "where_object":
        return QueryPlan(
            qtype, Struct("object_at", (now, _obj(need("object")), Var("L"))), "L", "entity"
        )
    if name == "where_before":
        return QueryPlan(
            qtype,
            Struct("location_before", (_obj(need("object")), _obj(need("place")), Var("L"))),
            "L",
            "entity",
        )
    if name == "count_possessions":
        return QueryPlan(
            qtype,
            Struct("count_object", (now, Atom(need("person")), Var("Count"))),
            "Count",
            "number",
        )
    if name == "list_possessions":
        return QueryPlan(
            qtype,
            Struct("property", (Atom("possession"), now, Atom(need("person")), Var("O"))),
            "O",
            "entity_list",
        )
    if name == "what_given":
        return QueryPlan(
            qtype,
            Struct(
                "gave",
                (Var("T"), Atom(need("giver")), Var("O"), Atom(need("recipient"))),
            ),
            "O",
            "entity",
            pick="latest",
        )
    if name == "who_recipient":
        return QueryPlan(
            qtype,
            Struct(
                "gave", (Var("T"), Atom(need("giver")), _obj(need("object")), Var("R"))
            ),
            "R",
            "entity",
            pick="latest",
        )
    if name == "who_gave":
        recipient = params.get("recipient")
        last = Atom(recipient) if recipient else Var("R")
        return QueryPlan(
            qtype,
            Struct("gave", (Var("T"), Var("P"), _obj(need("object")), last)),
            "P",
            "entity",
            pick="latest",
        )
    if name == "who_received":
        return QueryPlan(
            qtype,
            Struct("gave", (Var("T"), Var("G"), _obj(need("object")), Var("R"))),
            "R",
            "entity",
            pick="latest",
        )
    if name in ("yes_no_location", "where_maybe"):
        place = _obj(need("place"))
        return QueryPlan(
            qtype,
            Struct("truth_location", (now, Atom(need("person")), place, Var("V"))),
            "V",
            "yes_no_maybe",
            extra_facts=(Rule(Struct("known_place", (place,)), ()),),
            pick="all",
        )
    raise UnsupportedQuestion(f"no query template for {name}", name)


# --- answer extraction -----------------------------------------------------------------

@dataclass(frozen=True)
class ExtractedAnswer:
    text: str
    candidates: tuple[str, ...] = ()
    note: str = ""


def _strip_determiner(atom_name: str) -> str:
    for prefix in _DETERMINER_PREFIXES:
        if atom_name.startswith(prefix):
            return atom_name[len(prefix):]
    return atom_name


def _time_key(term) -> int:
    if isinstance(term, Atom) and term.name.startswith("t") and term.name[1:].isdigit():
        return int(term.name[1:])
    return -1


def number_word(n: int) -> str:
    return _NUMBER_WORDS[n] if 0 <= n < len(_NUMBER_WORDS) else str(n)


def extract_answer(answers: Iterable[Answer], plan: QueryPlan) -> ExtractedAnswer:
    """Dataset-format answer text from the solver's enumeration."""
    answers = list(answers)
    kind = plan.answer_kind
    if kind == "entity":
        if not answers:
            raise NoAnswer(f"no answer for {plan.qtype.name}")
        values = []
        for a in answers:
            v = a.bindings[plan.answer_var]
            if isinstance(v, Atom):
                values.append((_time_key(a.bindings.get("T")), _strip_determiner(v.name)))
        candidates = tuple(dict.fromkeys(name for _, name in values))
        if plan.pick == "latest":
            chosen = max(values, key=lambda pair: pair[0])[1]
            note = "" if len(candidates) == 1 else "multiple candidates; latest chosen"
            return ExtractedAnswer(chosen, candidates, note)
        return ExtractedAnswer(values[0][1], candidates)
    if kind == "entity_list":
        ordered = []
        for a in answers:
            v = a.bindings[plan.answer_var]
            if isinstance(v, Atom) and v.name not in ordered:
                ordered.append(v.name)
        # The solver finds current holdings newest acquisition first
        # (inertia recursion digs into the past); the dataset lists them
        # oldest first.
        ordered.reverse()
        if not ordered:
            return ExtractedAnswer("nothing", ())
        names = [_strip_determiner(o) for o in ordered]
        return ExtractedAnswer(",".join(names), tuple(names))
    if kind == "number":
        if not answers:
            raise NoAnswer(f"no answer for {plan.qtype.name}")
        value = answers[0].bindings[plan.answer_var]
        assert isinstance(value, Int)
        return ExtractedAnswer(number_word(value.value), (str(value.value),))
    if kind == "yes_no_maybe":
        votes = []
        for a in answers:
            v = a.bindings[plan.answer_var]
            if isinstance(v, Atom):
                votes.append(v.name)
        for verdict in ("yes", "no", "maybe"):
            if verdict in votes:
                return ExtractedAnswer(verdict, tuple(dict.fromkeys(votes)))
        return ExtractedAnswer("maybe", (), "no location knowledge; epistemic maybe")
    raise UnsupportedQuestion(f"unknown answer kind {kind}", kind)
