"""Controlled-English syntax: tokens, constituency trees, anaphora."""

from .anaphora import AnaphoraNote, resolve_anaphora
from .grammar import Grammar, load_grammar, parse_controlled
from .tokens import POS_TAGS, Token, classify_word, gender_of, set_table_dir, tokenize, word_tables
from .tree import ParseTree, read_bracketed, renumber_tokens, write_bracketed

__all__ = [
    "AnaphoraNote", "Grammar", "POS_TAGS", "ParseTree", "Token",
    "classify_word", "gender_of", "load_grammar", "parse_controlled",
    "parse_sentence", "read_bracketed", "renumber_tokens", "resolve_anaphora",
    "set_table_dir", "tokenize", "word_tables", "write_bracketed",
]


def parse_sentence(text: str, grammar: "Grammar | None" = None) -> ParseTree:
    """tokenize + parse_controlled in one step."""
    return parse_controlled(tokenize(text), grammar)
