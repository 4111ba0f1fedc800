"""Tokenization over the controlled vocabulary.

POS tags come from bundled word tables rather than a learned tagger: the
closed-class words are listed explicitly, inflected verb forms come from
the lemma table, and anything unknown defaults to NOUN (or PROPN when
capitalized), which is what keeps out-of-vocabulary entity names working.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..errors import EmptyInput

POS_TAGS = {"NOUN", "PROPN", "VERB", "PREP", "DET", "ADJ", "ADV", "PRON", "NUM", "PUNCT"}

_PUNCT_CHARS = ".?!,;:"


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    index: int

    def __repr__(self) -> str:
        return f"{self.surface}/{self.pos}"


def _resource_dir() -> Path:
    return Path(str(resources.files("kdnlu") / "resources" / "grammar"))


def _read_table(name: str, path: Path | None = None) -> dict[str, str]:
    table = {}
    file = (path or _resource_dir()) / name
    for raw in file.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("\t")
        table[key.strip()] = value.strip()
    return table


_active_table_dir: str | None = None


def set_table_dir(path: str | None) -> None:
    """Point the word tables at a different directory (CLI --grammar)."""
    global _active_table_dir
    _active_table_dir = path
    _load_tables.cache_clear()


@lru_cache(maxsize=4)
def _load_tables(path: str | None) -> tuple[dict[str, str], dict[str, str], dict[str, str]]:
    base = Path(path) if path else None
    return (
        _read_table("words.tsv", base),
        _read_table("lemmas.tsv", base),
        _read_table("names.tsv", base),
    )


def word_tables() -> tuple[dict[str, str], dict[str, str], dict[str, str]]:
    """(word -> pos, inflected form -> lemma, name -> gender)."""
    return _load_tables(_active_table_dir)


def classify_word(surface: str, sentence_initial: bool) -> tuple[str, str]:
    """Return (lemma, pos) for one word using the bundled tables."""
    words, lemmas, names = word_tables()
    low = surface.lower()
    if all(c in _PUNCT_CHARS for c in surface):
        return low, "PUNCT"
    if low in lemmas:
        return lemmas[low], "VERB"
    if low in words:
        return low, words[low]
    if low in names:
        return low, "PROPN"
    if low.isdigit():
        return low, "NUM"
    if surface[0].isupper() and not sentence_initial:
        return low, "PROPN"
    if surface[0].isupper() and sentence_initial and low not in words:
        # Unknown capitalized sentence opener: a name in this vocabulary.
        return low, "PROPN"
    return low, "NOUN"


def tokenize(sentence: str) -> list[Token]:
    """Split controlled English into classified tokens.

    Verb particles stay separate ("picked", "up"); punctuation becomes its
    own PUNCT token. Raises EmptyInput when nothing remains.
    """
    pieces: list[str] = []
    for chunk in sentence.split():
        start = 0
        end = len(chunk)
        lead = []
        tail = []
        while start < end and chunk[start] in _PUNCT_CHARS:
            lead.append(chunk[start])
            start += 1
        while end > start and chunk[end - 1] in _PUNCT_CHARS:
            tail.append(chunk[end - 1])
            end -= 1
        pieces.extend(lead)
        if start < end:
            pieces.append(chunk[start:end])
        pieces.extend(reversed(tail))
    if not pieces:
        raise EmptyInput(f"no tokens in {sentence!r}")
    out = []
    for i, piece in enumerate(pieces):
        lemma, pos = classify_word(piece, i == 0)
        out.append(Token(piece, lemma, pos, i))
    return out


def gender_of(name: str) -> str | None:
    """'m', 'f', or None when the gazetteer does not know the name."""
    _, _, names = word_tables()
    return names.get(name.lower())
