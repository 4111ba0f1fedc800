"""From parse trees to timestamped ground facts via verb-frame matching.

The matcher aligns a frame's slot pattern against a subtree, climbing
ancestors from the verb: slots bind whole constituents, left to right,
over disjoint spans; any token left uncovered must be a function word
(determiner, punctuation, adverb, preposition, or verb particle). The
lowest ancestor with a match wins. Bound thematic roles are then poured
into the frame's semantic templates, producing facts timestamped by the
sentence's position in its story.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .engine import Atom, Struct, Term, render
from .errors import UnboundRole, UnmappedBePattern, VerbNotInTree
from .lexicon import Frame, Lexicon, SemanticTemplate, SyntaxSlot
from .syntax import ParseTree

SKIP_POS = {"DET", "PUNCT", "ADV", "PREP"}
_PARTICLES = {"up", "down"}
_LOCATIVE_PREPS = ("in", "at", "on")


def skippable(leaf: ParseTree) -> bool:
    """May this leaf go unmatched during partial tree matching?

    Function words skip by POS (determiners, punctuation, adverbs,
    prepositions) or by being a verb particle; material inside an
    adverbial phrase ("after that", "following that") is adverbial as a
    whole, whatever the parts are tagged.
    """
    token = leaf.token
    if token.pos in SKIP_POS or token.surface.lower() in _PARTICLES:
        return True
    return any(a.label == "ADVP" for a in leaf.ancestors())


@dataclass(frozen=True)
class ThematicBinding:
    role_values: dict
    verb: str                     # lemma, multiword joined with a space
    frame: Frame

    @property
    def event_atom(self) -> str:
        return self.verb.replace(" ", "_")


@dataclass(frozen=True)
class SemanticFact:
    predicate: str
    time: int                     # sentence index within the story, 1-based
    event: str                    # verb lemma in atom form
    args: tuple[Term, ...]

    def to_term(self) -> Struct:
        return Struct(self.predicate, (Atom(f"t{self.time}"),) + self.args)

    def render(self) -> str:
        return render(self.to_term()) + "."

    def __repr__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Diagnostic:
    """Non-fatal condition raised while compiling a sentence."""

    kind: str                     # "NoFrameMatched" | "UnmappedBePattern" | ...
    time: int
    detail: str


def normalize_constituent(node: ParseTree) -> str:
    """Lowercased, space-joined-by-underscore text, determiners kept."""
    return "_".join(t.surface.lower() for t in node.tokens())


def _pp_value(node: ParseTree) -> str:
    """The inner NP of a PP, without its preposition."""
    for child in node.children:
        if child.label == "NP":
            return normalize_constituent(child)
    return "_".join(
        t.surface.lower() for t in node.tokens()[1:]
    ) or normalize_constituent(node)


def slot_fits(slot: SyntaxSlot, node: ParseTree, verb_leaf: ParseTree) -> bool:
    """Can this constituent fill the slot? Shared with the test oracle."""
    if slot.category == "V":
        return node.label == "V" and verb_leaf in node.leaves()
    if slot.category == "NP":
        return node.label == "NP"
    if slot.category == "PP":
        if node.label != "PP":
            return False
        if slot.literal is None:
            return True
        first = node.leaves()[0].token
        return first.surface.lower() == slot.literal
    if slot.category == "ADV":
        return node.label == "ADV"
    if slot.category in ("PREP", "LEX"):
        return node.is_leaf and node.token.surface.lower() == (slot.literal or "")
    return False


def _slot_value(slot: SyntaxSlot, node: ParseTree) -> str:
    if slot.category == "PP":
        return _pp_value(node)
    return normalize_constituent(node)


def get_matching(
    root: ParseTree, syntax: tuple[SyntaxSlot, ...] | list[SyntaxSlot],
    verb_leaf: ParseTree,
) -> Optional[ThematicBinding]:
    """Left-to-right depth-first alignment of the slot pattern under root.

    Returns the leftmost binding, or None. Every uncovered token must be
    skippable; chosen constituents occupy disjoint spans in slot order.
    """
    syntax = tuple(syntax)
    nodes = list(root.walk())
    leaves = root.leaves()

    def search(slot_idx: int, min_start: int, chosen: list[ParseTree]):
        if slot_idx == len(syntax):
            covered: set[int] = set()
            for node in chosen:
                lo, hi = node.leaf_span()
                covered.update(range(lo, hi + 1))
            for leaf in leaves:
                if leaf.token.index not in covered and not skippable(leaf):
                    return None
            return list(chosen)
        for node in nodes:
            if not slot_fits(syntax[slot_idx], node, verb_leaf):
                continue
            lo, hi = node.leaf_span()
            if lo < min_start:
                continue
            result = search(slot_idx + 1, hi + 1, chosen + [node])
            if result is not None:
                return result
        return None

    picked = search(0, 0, [])
    if picked is None:
        return None
    roles = {}
    for slot, node in zip(syntax, picked):
        if slot.role:
            roles[slot.role] = _slot_value(slot, node)
    return ThematicBinding(roles, "", None)  # verb/frame filled by callers


def _find_verb_leaf(pt: ParseTree, verb: str) -> ParseTree:
    base = verb.split(" ")[0]
    for leaf in pt.leaves():
        if leaf.token.pos == "VERB" and leaf.token.lemma == base:
            return leaf
    raise VerbNotInTree(f"verb {verb!r} has no leaf in {pt.text()!r}")


def get_thematic_roles(
    pt: ParseTree, syntax, verb, frame: Frame | None = None
) -> Optional[ThematicBinding]:
    """Climb ancestors from the verb's parent, matching at each level.

    `verb` may be a lemma string or the verb leaf itself. The first (i.e.
    lowest) ancestor producing a match wins; None past the sentence root.
    """
    if isinstance(verb, ParseTree):
        verb_leaf = verb
        lemma = verb_leaf.token.lemma
    else:
        verb_leaf = _find_verb_leaf(pt, verb)
        lemma = verb
    root: Optional[ParseTree] = verb_leaf.parent
    while root is not None:
        found = get_matching(root, syntax, verb_leaf)
        if found is not None:
            return ThematicBinding(found.role_values, lemma, frame)
        if root is pt:
            break
        root = root.parent
    return None


def instantiate_semantics(
    binding: ThematicBinding,
    templates: Iterable[SemanticTemplate],
    time: int,
) -> list[SemanticFact]:
    """Fill templates with bound roles; the event variable takes the verb."""
    event = binding.event_atom
    facts = []
    for template in templates:
        args: list[Term] = []
        for arg in template.args:
            if arg.kind == "role":
                value = binding.role_values.get(arg.value)
                if value is None:
                    raise UnboundRole(
                        f"template {template.predicate} needs role {arg.value!r}"
                    )
                args.append(Struct(arg.value.lower(), (Atom(value),)))
            elif arg.kind == "event":
                args.append(Struct("event", (Atom(event),)))
            elif arg.kind == "phase":
                args.append(Struct(arg.value, (Atom(event),)))
            else:
                args.append(Atom(arg.value))
        facts.append(SemanticFact(template.predicate, time, event, tuple(args)))
    return facts


# --- whole sentences -----------------------------------------------------------

def _effective_verbs(pt: ParseTree, lexicon: Lexicon) -> list[tuple[str, ParseTree]]:
    """(lemma, leaf) pairs, joining verb + particle into multiword lemmas."""
    out = []
    for leaf in pt.leaves():
        if leaf.token.pos != "VERB":
            continue
        lemma = leaf.token.lemma
        particles = lexicon.multiword_particles(lemma)
        joined = None
        if particles and leaf.parent is not None and leaf.parent.parent is not None:
            vp = leaf.parent.parent
            after = False
            for child in vp.children:
                if child is leaf.parent:
                    after = True
                    continue
                if after and child.leaves():
                    first = child.leaves()[0].token.surface.lower()
                    if first in particles:
                        joined = f"{lemma} {first}"
                    break
        out.append((joined or lemma, leaf))
    return out


def get_sentence_semantics(
    pt: ParseTree, lexicon: Lexicon, time: int
) -> tuple[list[SemanticFact], list[Diagnostic]]:
    """Algorithmic core: union of frame semantics over verbs/classes/frames.

    Copular sentences route to be_semantics. Action sentences that match no
    frame yield no facts plus a NoFrameMatched diagnostic.
    """
    verbs = _effective_verbs(pt, lexicon)
    if any(lemma == "be" for lemma, _ in verbs):
        try:
            return be_semantics(pt, lexicon, time), []
        except UnmappedBePattern as e:
            return [], [Diagnostic("UnmappedBePattern", time, str(e))]

    facts: list[SemanticFact] = []
    seen: set[SemanticFact] = set()
    diagnostics: list[Diagnostic] = []
    for lemma, leaf in verbs:
        matched = False
        for vn_class in lexicon.get_vn_classes(lemma):
            for frame in lexicon.get_vn_frames(vn_class):
                binding = get_thematic_roles(pt, frame.syntax, leaf, frame)
                if binding is None:
                    continue
                binding = ThematicBinding(binding.role_values, lemma, frame)
                matched = True
                for fact in instantiate_semantics(binding, frame.semantics, time):
                    if fact not in seen:
                        seen.add(fact)
                        facts.append(fact)
        if not matched and lexicon.get_vn_classes(lemma):
            diagnostics.append(
                Diagnostic("NoFrameMatched", time, f"no frame matched verb {lemma!r}")
            )
        elif not lexicon.get_vn_classes(lemma):
            diagnostics.append(
                Diagnostic("UnknownVerb", time, f"verb {lemma!r} not in lexicon")
            )
    return facts, diagnostics


def be_semantics(pt: ParseTree, lexicon: Lexicon, time: int) -> list[SemanticFact]:
    """Handcrafted copular patterns: location, disjunction, negation, class."""
    mappings = lexicon.be_mappings
    nps = [n for n in pt.children if n.label == "NP"]
    vps = [n for n in pt.children if n.label == "VP"]
    if not nps or not vps:
        raise UnmappedBePattern(f"no copular shape in {pt.text()!r}")
    subject = normalize_constituent(nps[0])
    vp = vps[0]
    literals = [c.token.surface.lower() for c in vp.children if c.is_leaf]
    pps = [c for c in vp.children if c.label == "PP"]
    trailing_nps = [c for c in vp.children if c.label == "NP"]

    def fact(shape: str, *args: str) -> SemanticFact:
        mapping = mappings.get(shape)
        if mapping is None:
            raise UnmappedBePattern(f"no mapping row for shape {shape!r}")
        return SemanticFact(
            mapping.predicate, time, "be", tuple(Atom(a) for a in args)
        )

    if "either" in literals and "or" in literals and pps and trailing_nps:
        first = _pp_value(pps[0])
        second = normalize_constituent(trailing_nps[0])
        out = [fact("copular_disjunction", subject, first)]
        alternative = fact("copular_disjunction", subject, second)
        if alternative not in out:
            out.append(alternative)
        return out
    if ("no" in literals and "longer" in literals) or "not" in literals:
        if pps:
            return [fact("copular_negation", subject, _pp_value(pps[0]))]
        raise UnmappedBePattern(f"negated copula without location in {pt.text()!r}")
    if pps and pps[0].leaves()[0].token.surface.lower() in _LOCATIVE_PREPS:
        return [fact("copular_location", subject, _pp_value(pps[0]))]
    if trailing_nps:
        toks = trailing_nps[0].tokens()
        if toks and toks[0].pos == "DET" and toks[0].surface.lower() in ("a", "an"):
            noun = "_".join(t.surface.lower() for t in toks[1:])
            return [fact("copular_class", subject, noun)]
    raise UnmappedBePattern(f"no copular pattern applies to {pt.text()!r}")


def story_to_program(
    trees: list[ParseTree], lexicon: Lexicon
) -> tuple[list[SemanticFact], list[Diagnostic]]:
    """Compile a story: sentence i (1-based) gets timestamp i."""
    facts: list[SemanticFact] = []
    seen: set[SemanticFact] = set()
    diagnostics: list[Diagnostic] = []
    for i, tree in enumerate(trees, start=1):
        sentence_facts, notes = get_sentence_semantics(tree, lexicon, i)
        diagnostics.extend(notes)
        for f in sentence_facts:
            if f not in seen:
                seen.add(f)
                facts.append(f)
    return facts, diagnostics


def render_facts(facts: Iterable[SemanticFact]) -> str:
    """One fact per line, byte-stable for golden files."""
    return "\n".join(f.render() for f in facts) + "\n"
