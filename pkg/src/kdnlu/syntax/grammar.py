"""The controlled-English parser: ordered-choice CFG over the word tables.

Sentences in this domain are short, so a plain backtracking descent over
the rule file is both fast enough and exactly deterministic: alternatives
are tried in file order and the first parse covering every token wins.
The failure report carries the furthest token index reached, which is
where no grammar rule applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional

from ..errors import UnparsableSentence
from .tokens import POS_TAGS, Token
from .tree import ParseTree


@dataclass(frozen=True)
class Symbol:
    kind: str        # "nonterminal" | "pos" | "literal"
    value: str
    optional: bool = False


@dataclass(frozen=True)
class GrammarRule:
    lhs: str
    rhs: tuple[Symbol, ...]


class Grammar:
    def __init__(self, rules: list[GrammarRule], start: str = "ROOT"):
        self.rules = rules
        self.start = start
        self.by_lhs: dict[str, list[GrammarRule]] = {}
        for rule in rules:
            self.by_lhs.setdefault(rule.lhs, []).append(rule)
        defined = set(self.by_lhs)
        for rule in rules:
            for sym in rule.rhs:
                if sym.kind == "nonterminal" and sym.value not in defined:
                    raise ValueError(f"undefined nonterminal {sym.value} in {rule}")

    # -- parsing ------------------------------------------------------------

    def parse(self, tokens: list[Token]) -> ParseTree:
        furthest = [0]
        for entry in self.by_lhs[self.start]:
            for node, end in self._match_rule(entry, tokens, 0, furthest, 0):
                if end == len(tokens):
                    # ROOT is a plumbing symbol; expose the real clause node.
                    result = node.children[0] if len(node.children) == 1 else node
                    result.parent = None
                    return result
        raise UnparsableSentence(
            f"no grammar rule applies at token {furthest[0]}"
            + (f" ({tokens[furthest[0]].surface!r})" if furthest[0] < len(tokens) else ""),
            furthest[0],
        )

    def _match_symbol(
        self, sym: Symbol, tokens: list[Token], pos: int, furthest: list[int], depth: int
    ) -> Iterator[tuple[Optional[ParseTree], int]]:
        if sym.optional:
            bare = Symbol(sym.kind, sym.value)
            yield from self._match_symbol(bare, tokens, pos, furthest, depth)
            yield None, pos
            return
        if sym.kind == "nonterminal":
            if depth > 40:  # guards accidental left recursion in rule files
                return
            for rule in self.by_lhs[sym.value]:
                yield from self._match_rule(rule, tokens, pos, furthest, depth + 1)
            return
        if pos >= len(tokens):
            return
        token = tokens[pos]
        if sym.kind == "pos" and token.pos == sym.value:
            furthest[0] = max(furthest[0], pos + 1)
            yield ParseTree.leaf(token), pos + 1
        elif sym.kind == "literal" and token.surface.lower() == sym.value:
            furthest[0] = max(furthest[0], pos + 1)
            yield ParseTree.leaf(token), pos + 1

    def _match_rule(
        self, rule: GrammarRule, tokens: list[Token], pos: int, furthest: list[int], depth: int
    ) -> Iterator[tuple[ParseTree, int]]:
        def step(i: int, at: int, kids: list[ParseTree]) -> Iterator[tuple[ParseTree, int]]:
            if i == len(rule.rhs):
                if kids:
                    yield ParseTree.node(rule.lhs, [k.copy() for k in kids]), at
                return
            for node, nxt in self._match_symbol(rule.rhs[i], tokens, at, furthest, depth):
                if node is None:
                    yield from step(i + 1, nxt, kids)
                else:
                    yield from step(i + 1, nxt, kids + [node])

        yield from step(0, pos, [])


def _parse_symbol(text: str) -> Symbol:
    optional = text.endswith("?")
    if optional:
        text = text[:-1]
    if text.startswith("@"):
        pos = text[1:]
        if pos not in POS_TAGS:
            raise ValueError(f"unknown POS tag {pos}")
        return Symbol("pos", pos, optional)
    if text.startswith("'") and text.endswith("'") and len(text) >= 3:
        return Symbol("literal", text[1:-1].lower(), optional)
    return Symbol("nonterminal", text, optional)


def load_grammar(path: str | Path | None = None) -> Grammar:
    if path is None:
        return _bundled_grammar()
    return _read_grammar(Path(path))


@lru_cache(maxsize=1)
def _bundled_grammar() -> Grammar:
    return _read_grammar(Path(str(resources.files("kdnlu") / "resources" / "grammar" / "grammar.rules")))


def _read_grammar(path: Path) -> Grammar:
    rules = []
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lhs, arrow, rhs = line.partition("->")
        if not arrow:
            raise ValueError(f"bad grammar rule: {line}")
        symbols = tuple(_parse_symbol(s) for s in rhs.split())
        if not symbols:
            raise ValueError(f"empty right-hand side: {line}")
        rules.append(GrammarRule(lhs.strip(), symbols))
    return Grammar(rules)


def parse_controlled(tokens: list[Token], grammar: Grammar | None = None) -> ParseTree:
    """Parse one sentence's tokens into a constituency tree."""
    return (grammar or load_grammar()).parse(tokens)
