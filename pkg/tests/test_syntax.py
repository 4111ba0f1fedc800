"""Tokenizer, controlled grammar, bracketed trees, anaphora."""

from __future__ import annotations

import random

import pytest

from kdnlu.errors import EmptyInput, MalformedTree, UnparsableSentence
from kdnlu.syntax import (
    ParseTree,
    Token,
    gender_of,
    load_grammar,
    parse_controlled,
    parse_sentence,
    read_bracketed,
    resolve_anaphora,
    tokenize,
    write_bracketed,
)


# --- tokenize -------------------------------------------------------------------

def test_tokenize_reference_sentence():
    toks = tokenize("John moved to the bedroom.")
    assert [(t.surface, t.pos) for t in toks] == [
        ("John", "PROPN"), ("moved", "VERB"), ("to", "PREP"),
        ("the", "DET"), ("bedroom", "NOUN"), (".", "PUNCT"),
    ]
    assert toks[1].lemma == "move"
    assert [t.index for t in toks] == list(range(6))


def test_tokenize_empty_raises():
    with pytest.raises(EmptyInput):
        tokenize("")
    with pytest.raises(EmptyInput):
        tokenize("   ")


def test_tokenize_single_name():
    [tok] = tokenize("Mary")
    assert (tok.surface, tok.pos, tok.lemma) == ("Mary", "PROPN", "mary")


def test_tokenize_keeps_particles_separate():
    toks = tokenize("John picked up the milk there.")
    assert [t.surface for t in toks] == ["John", "picked", "up", "the", "milk", "there", "."]
    assert toks[1].lemma == "pick"
    assert toks[2].pos == "ADV"


def test_tokenize_lemma_table():
    assert tokenize("Mary got it.")[1].lemma == "get"
    assert tokenize("They are here.")[1].lemma == "be"
    assert tokenize("Is Fred here?")[0].lemma == "be"


def test_lemmas_lowercase_nonempty():
    for text in ("John moved to the bedroom.", "Is Fred in the cinema?", "i want curry"):
        for tok in tokenize(text):
            assert tok.lemma and tok.lemma == tok.lemma.lower()


# --- parse_controlled -----------------------------------------------------------

def test_parse_grab_sentence_shape():
    tree = parse_sentence("John grabbed the apple there.")
    assert write_bracketed(tree) == (
        "(S (NP John) (VP (V grabbed) (NP the apple) (ADV there)) .)"
    )


def test_parse_yes_no_question_shape():
    tree = parse_sentence("Is Fred in the cinema?")
    assert write_bracketed(tree) == "(SQ (V Is) (NP Fred) (PP in (NP the cinema)) ?)"


def test_parse_out_of_grammar_reports_token_index():
    with pytest.raises(UnparsableSentence) as err:
        parse_sentence("colorless ideas sleep furiously quickly oddly")
    assert err.value.token_index >= 1


def test_leaf_order_equals_token_order():
    for text in (
        "John moved to the bedroom.",
        "John picked up the milk there.",
        "Fred is either in the cinema or the park.",
        "Who did Fred give the milk to?",
        "How many objects is John carrying?",
    ):
        toks = tokenize(text)
        tree = parse_controlled(toks)
        assert tree.tokens() == toks


def test_parse_determinism():
    a = write_bracketed(parse_sentence("John gave the apple to Mary."))
    b = write_bracketed(parse_sentence("John gave the apple to Mary."))
    assert a == b


def _tree_derivable(tree: ParseTree, grammar) -> bool:
    """Independent recognizer: every internal node must fit some rule RHS."""

    def symbol_matches(sym, child) -> bool:
        if sym.kind == "nonterminal":
            return not child.is_leaf and child.label == sym.value
        if not child.is_leaf:
            return False
        if sym.kind == "pos":
            return child.token.pos == sym.value
        return child.token.surface.lower() == sym.value

    def rhs_matches(rhs, children, i=0, j=0) -> bool:
        if i == len(rhs):
            return j == len(children)
        sym = rhs[i]
        if j < len(children) and symbol_matches(sym, children[j]):
            if rhs_matches(rhs, children, i + 1, j + 1):
                return True
        if sym.optional:
            return rhs_matches(rhs, children, i + 1, j)
        return False

    for node in tree.walk():
        if node.is_leaf:
            continue
        rules = grammar.by_lhs.get(node.label, [])
        if not any(rhs_matches(r.rhs, node.children) for r in rules):
            return False
        if not all(_tree_derivable(c, grammar) for c in node.children if not c.is_leaf):
            return False
    return True


def test_grammar_soundness_every_parse_is_derivable():
    grammar = load_grammar()
    for text in (
        "John moved to the bedroom.",
        "Mary went back to the kitchen.",
        "John picked up the milk there.",
        "Fred is either in the cinema or the park.",
        "Julie is no longer in the school.",
        "Afterwards she journeyed to the bathroom.",
        "What did Fred give to Bill?",
        "Where was the football before the garden?",
    ):
        tree = parse_sentence(text)
        assert _tree_derivable(tree, grammar), text


# --- bracketed IO ------------------------------------------------------------------

def test_read_bracketed_basic():
    tree = read_bracketed("(S (NP John) (VP (V ran)))")
    assert tree.label == "S"
    assert [t.surface for t in tree.tokens()] == ["John", "ran"]
    assert tree.children[0].label == "NP"


def test_read_bracketed_reports_offset_of_imbalance():
    with pytest.raises(MalformedTree) as err:
        read_bracketed("(S (NP John")
    assert err.value.offset == 11


def test_read_bracketed_rejects_trailing_garbage():
    with pytest.raises(MalformedTree):
        read_bracketed("(S (NP John)) extra")


_LABELS = ["S", "NP", "VP", "PP", "ADVP", "X"]
_WORDS = ["john", "mary", "apple", "ran", "took", "the", "to", "there"]


def _random_tree(rng: random.Random, depth: int) -> str:
    label = rng.choice(_LABELS)
    if depth <= 0 or rng.random() < 0.35:
        words = " ".join(rng.choice(_WORDS) for _ in range(rng.randint(1, 3)))
        return f"({label} {words})"
    kids = " ".join(_random_tree(rng, depth - 1) for _ in range(rng.randint(1, 3)))
    return f"({label} {kids})"


def test_bracketed_round_trip_on_random_trees():
    rng = random.Random(424242)
    for _ in range(1000):
        text = _random_tree(rng, rng.randint(1, 4))
        assert write_bracketed(read_bracketed(text)) == text


# --- anaphora -------------------------------------------------------------------------

def test_pronoun_resolves_to_most_recent_compatible_entity():
    trees = [
        parse_sentence("Mary went to the office."),
        parse_sentence("Then she journeyed to the garden."),
    ]
    resolved, notes = resolve_anaphora(trees)
    assert "Mary" in resolved[1].text()
    assert "she" not in resolved[1].text()
    assert notes[0].resolved and notes[0].antecedent == "Mary"


def test_locative_there_resolves_to_latest_location():
    trees = [
        parse_sentence("John moved to the bedroom."),
        parse_sentence("John got the football there."),
    ]
    resolved, notes = resolve_anaphora(trees)
    assert "bedroom" in resolved[1].text()
    assert notes[0].anaphor == "there" and notes[0].antecedent == "the bedroom"


def test_unresolved_anaphor_passes_through_unchanged():
    trees = [parse_sentence("It fell.")]
    resolved, notes = resolve_anaphora(trees)
    assert resolved[0].text() == trees[0].text()
    assert len(notes) == 1 and not notes[0].resolved


def test_gender_blocks_wrong_antecedent():
    trees = [
        parse_sentence("John moved to the office."),
        parse_sentence("Mary went to the garden."),
        parse_sentence("Then he journeyed to the kitchen."),
    ]
    resolved, _ = resolve_anaphora(trees)
    assert "John" in resolved[2].text()


def test_anaphora_brute_force_antecedent_oracle():
    rng = random.Random(77)
    names = ["Mary", "John", "Sandra", "Daniel", "Julie", "Fred"]
    places = ["office", "garden", "kitchen", "hallway", "bedroom"]
    for _ in range(60):
        story = []
        mentions = []
        for _ in range(rng.randint(1, 5)):
            name = rng.choice(names)
            place = rng.choice(places)
            story.append(f"{name} went to the {place}.")
            mentions.append(name)
        pron = rng.choice(["he", "she"])
        story.append(f"Then {pron} moved to the park.")
        want = None
        for name in reversed(mentions):
            g = gender_of(name)
            if g == ("m" if pron == "he" else "f"):
                want = name
                break
        resolved, notes = resolve_anaphora([parse_sentence(s) for s in story])
        got = notes[-1].antecedent if notes and notes[-1].anaphor == pron else None
        assert got == want, (story, got, want)


def test_resolved_trees_keep_consecutive_indices():
    trees = [
        parse_sentence("John moved to the bedroom."),
        parse_sentence("John got the football there."),
    ]
    resolved, _ = resolve_anaphora(trees)
    for tree in resolved:
        assert [t.index for t in tree.tokens()] == list(range(len(tree.tokens())))
