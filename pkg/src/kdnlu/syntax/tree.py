"""Constituency trees and the bracketed text format.

A node either has children (internal) or carries a Token (leaf), never
both. Leaves read left to right reproduce the sentence's token sequence.
Trees read from bracketed text get their leaf tokens re-classified through
the word tables so external parses can feed the same downstream pipeline.
"""

from __future__ import annotations

from typing import Iterator, Optional

from ..errors import MalformedTree
from .tokens import Token, classify_word


class ParseTree:
    __slots__ = ("label", "children", "token", "parent")

    def __init__(self, label: str, children: Optional[list["ParseTree"]] = None,
                 token: Optional[Token] = None):
        if (children is None or children == []) == (token is None):
            raise ValueError("a node has children xor a token")
        self.label = label
        self.children: list[ParseTree] = children or []
        self.token = token
        self.parent: Optional[ParseTree] = None
        for child in self.children:
            child.parent = self

    # -- construction helpers --------------------------------------------------

    @staticmethod
    def leaf(token: Token) -> "ParseTree":
        return ParseTree(token.surface, token=token)

    @staticmethod
    def node(label: str, children: list["ParseTree"]) -> "ParseTree":
        return ParseTree(label, children=children)

    # -- structure -------------------------------------------------------------

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def walk(self) -> Iterator["ParseTree"]:
        """Pre-order, leftmost-first traversal of all nodes."""
        yield self
        for child in self.children:
            yield from child.walk()

    def leaves(self) -> list["ParseTree"]:
        return [n for n in self.walk() if n.is_leaf]

    def tokens(self) -> list[Token]:
        return [leaf.token for leaf in self.leaves()]

    def leaf_span(self) -> tuple[int, int]:
        """(first, last) token index covered by this node, inclusive."""
        leaves = self.leaves()
        return leaves[0].token.index, leaves[-1].token.index

    def root(self) -> "ParseTree":
        node = self
        while node.parent is not None:
            node = node.parent
        return node

    def ancestors(self) -> Iterator["ParseTree"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens())

    def find_all(self, label: str) -> list["ParseTree"]:
        return [n for n in self.walk() if n.label == label]

    def replace_child(self, old: "ParseTree", new: "ParseTree") -> None:
        idx = self.children.index(old)
        self.children[idx] = new
        new.parent = self

    def copy(self) -> "ParseTree":
        if self.is_leaf:
            return ParseTree(self.label, token=self.token)
        return ParseTree(self.label, children=[c.copy() for c in self.children])

    def __repr__(self) -> str:
        return write_bracketed(self)


def write_bracketed(tree: ParseTree) -> str:
    if tree.is_leaf:
        return tree.token.surface
    inner = " ".join(write_bracketed(c) for c in tree.children)
    return f"({tree.label} {inner})"


def read_bracketed(text: str) -> ParseTree:
    """Parse Penn-Treebank-style labeled bracketing into a ParseTree.

    Leaf words are re-tokenized through the word tables so the resulting
    tree carries usable lemma/POS information. Raises MalformedTree with
    the character offset of the first imbalance.
    """
    pos = 0
    n = len(text)
    leaf_index = [0]

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def read_symbol() -> str:
        nonlocal pos
        start = pos
        while pos < n and not text[pos].isspace() and text[pos] not in "()":
            pos += 1
        if pos == start:
            raise MalformedTree(f"expected a symbol at offset {start}", start)
        return text[start:pos]

    def read_node() -> ParseTree:
        nonlocal pos
        skip_ws()
        if pos >= n or text[pos] != "(":
            raise MalformedTree(f"expected '(' at offset {pos}", pos)
        open_at = pos
        pos += 1
        skip_ws()
        label = read_symbol()
        children: list[ParseTree] = []
        while True:
            skip_ws()
            if pos >= n:
                # The imbalance becomes evident where the text runs out.
                raise MalformedTree(
                    f"unclosed '(' (opened at {open_at}) at offset {pos}", pos
                )
            if text[pos] == ")":
                pos += 1
                break
            if text[pos] == "(":
                children.append(read_node())
            else:
                word = read_symbol()
                lemma, word_pos = classify_word(word, leaf_index[0] == 0)
                token = Token(word, lemma, word_pos, leaf_index[0])
                leaf_index[0] += 1
                children.append(ParseTree.leaf(token))
        if not children:
            raise MalformedTree(f"empty constituent at offset {open_at}", open_at)
        return ParseTree.node(label, children)

    tree = read_node()
    skip_ws()
    if pos != n:
        raise MalformedTree(f"trailing text at offset {pos}", pos)
    return tree


def renumber_tokens(tree: ParseTree) -> None:
    """Rewrite leaf token indices to consecutive order after edits."""
    for i, leaf in enumerate(tree.leaves()):
        tok = leaf.token
        leaf.token = Token(tok.surface, tok.lemma, tok.pos, i)
