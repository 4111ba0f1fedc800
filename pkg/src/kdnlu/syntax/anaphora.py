"""Pronoun and locative-anaphor resolution over a story's parse trees.

Strategy: most recent compatible antecedent. Person pronouns (he/she/it/
they) take the latest gender-compatible entity NP; the locative "there"
takes the latest location NP, which in this vocabulary is the NP inside a
motion or copular PP. Unresolvable anaphors are reported and the sentence
passes through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tokens import Token, gender_of
from .tree import ParseTree, renumber_tokens

_PERSON_PRONOUNS = {"he": "m", "she": "f", "it": None, "they": None}


@dataclass(frozen=True)
class AnaphoraNote:
    """One resolution event (or failure) for diagnostics."""

    sentence: int
    anaphor: str
    antecedent: str | None

    @property
    def resolved(self) -> bool:
        return self.antecedent is not None


def _np_copy_with_indices(np: ParseTree) -> ParseTree:
    return np.copy()


def _leaf_tokens_lower(node: ParseTree) -> str:
    return " ".join(t.surface.lower() for t in node.tokens())


def _location_np(sentence: ParseTree) -> ParseTree | None:
    """The NP of the last locative/destination PP in the sentence."""
    found = None
    for pp in sentence.find_all("PP"):
        leaves = pp.leaves()
        if leaves and leaves[0].token.surface.lower() in ("to", "in", "at", "on"):
            for child in pp.children:
                if child.label == "NP":
                    found = child
    return found


def _entity_nps(sentence: ParseTree) -> list[ParseTree]:
    """Entity mentions in surface order: PROPN NPs and object NPs."""
    out = []
    for np in sentence.find_all("NP"):
        toks = np.tokens()
        if any(t.pos == "PRON" for t in toks):
            continue
        out.append(np)
    return out


def _compatible(np: ParseTree, pronoun: str) -> bool:
    toks = np.tokens()
    wanted = _PERSON_PRONOUNS[pronoun]
    is_person = all(t.pos == "PROPN" for t in toks)
    if pronoun in ("he", "she"):
        if not is_person:
            return False
        gender = gender_of(toks[0].lemma)
        return gender is None or gender == wanted
    if pronoun == "it":
        return not is_person
    return True  # they: any prior entity, compound coreference is out of scope


def resolve_anaphora(
    sentences: list[ParseTree],
) -> tuple[list[ParseTree], list[AnaphoraNote]]:
    """Replace pronouns and locative "there" by their latest antecedents.

    Returns new trees (inputs are not mutated) in story order plus one note
    per anaphor seen. Trees with unresolved anaphors are copied unchanged.
    """
    notes: list[AnaphoraNote] = []
    resolved: list[ParseTree] = []
    entity_history: list[ParseTree] = []
    location_history: list[ParseTree] = []

    for i, original in enumerate(sentences):
        tree = original.copy()
        for leaf in list(tree.leaves()):
            word = leaf.token.surface.lower()
            if leaf.token.pos == "PRON" and word in _PERSON_PRONOUNS:
                antecedent = next(
                    (np for np in reversed(entity_history) if _compatible(np, word)),
                    None,
                )
                if antecedent is None:
                    notes.append(AnaphoraNote(i, word, None))
                    continue
                replacement = antecedent.copy()
                parent = leaf.parent
                if parent is not None and parent.label == "NP":
                    grand = parent.parent
                    if grand is not None:
                        grand.replace_child(parent, replacement)
                    else:
                        tree = replacement
                elif parent is not None:
                    parent.replace_child(leaf, replacement)
                notes.append(AnaphoraNote(i, word, replacement.text()))
            elif word == "there" and leaf.token.pos == "ADV":
                antecedent = location_history[-1] if location_history else None
                if antecedent is None:
                    notes.append(AnaphoraNote(i, word, None))
                    continue
                in_tok = Token("in", "in", "PREP", 0)
                replacement = ParseTree.node(
                    "PP", [ParseTree.leaf(in_tok), antecedent.copy()]
                )
                parent = leaf.parent
                if parent is not None and parent.label == "ADV" and parent.parent is not None:
                    parent.parent.replace_child(parent, replacement)
                elif parent is not None:
                    parent.replace_child(leaf, replacement)
                notes.append(AnaphoraNote(i, word, antecedent.text()))
        renumber_tokens(tree)
        resolved.append(tree)
        entity_history.extend(_entity_nps(tree))
        loc = _location_np(tree)
        if loc is not None:
            location_history.append(loc)
    return resolved, notes
