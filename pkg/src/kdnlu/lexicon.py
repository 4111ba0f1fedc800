"""Verb lexicon: classes, frames, syntax slot patterns, semantic templates.

The bundled mini-lexicon covers the controlled vocabulary: motion,
obtaining, giving, releasing, plus the dialog verbs. Copular sentences are
not frame-driven; they go through a separate pattern table (be_mappings)
loaded alongside the classes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import DanglingRole, LexiconFormatError

SLOT_CATEGORIES = {"NP", "V", "PP", "ADV", "PREP", "LEX"}
EVENT_PHASES = {"start", "during", "end"}


@dataclass(frozen=True)
class SyntaxSlot:
    category: str
    role: str | None = None
    literal: str | None = None

    def __repr__(self) -> str:
        if self.category == "V":
            return "V"
        bits = [self.category]
        if self.role:
            bits.append(self.role)
        if self.literal:
            bits.append(repr(self.literal))
        return ":".join(bits)


@dataclass(frozen=True)
class TemplateArg:
    """One argument spec: a role reference, the event, a phase-wrapped
    event, or a constant."""

    kind: str               # "role" | "event" | "phase" | "constant"
    value: str              # role name, phase name, or constant text


@dataclass(frozen=True)
class SemanticTemplate:
    predicate: str
    args: tuple[TemplateArg, ...]


@dataclass(frozen=True)
class Frame:
    pattern_name: str
    syntax: tuple[SyntaxSlot, ...]
    semantics: tuple[SemanticTemplate, ...]
    example: str = ""

    @property
    def roles(self) -> set[str]:
        return {s.role for s in self.syntax if s.role}


@dataclass(frozen=True)
class VerbNetClass:
    class_id: str
    members: frozenset[str]
    frames: tuple[Frame, ...]


@dataclass(frozen=True)
class BeMapping:
    shape: str
    predicate: str


@dataclass
class Lexicon:
    classes: list[VerbNetClass]
    verb_index: dict[str, list[str]]
    be_mappings: dict[str, BeMapping]

    def get_vn_classes(self, verb: str) -> list[VerbNetClass]:
        """Every class whose members contain this lemma (whole-word)."""
        ids = self.verb_index.get(verb, [])
        by_id = {c.class_id: c for c in self.classes}
        return [by_id[i] for i in ids]

    def get_vn_frames(self, vn_class: VerbNetClass) -> list[Frame]:
        return list(vn_class.frames)

    @property
    def lemmas(self) -> set[str]:
        return set(self.verb_index)

    def multiword_particles(self, verb: str) -> set[str]:
        """Particles that combine with this verb into a multiword member."""
        out = set()
        for lemma in self.verb_index:
            first, _, rest = lemma.partition(" ")
            if first == verb and rest and " " not in rest:
                out.add(rest)
        return out


_ARG_PHASE_RE = re.compile(r"^(start|during|end)\(E\)$")


def _parse_arg(raw: str, line_hint: str) -> TemplateArg:
    m = _ARG_PHASE_RE.match(raw)
    if m:
        return TemplateArg("phase", m.group(1))
    if raw == "E":
        return TemplateArg("event", "E")
    if raw and raw[0].isupper():
        return TemplateArg("role", raw)
    if raw and raw[0].islower():
        return TemplateArg("constant", raw)
    raise LexiconFormatError(f"bad template argument {raw!r} in {line_hint}")


def _parse_frame(data: dict, where: str) -> Frame:
    slots = []
    for s in data.get("syntax", []):
        cat = s.get("cat")
        if cat not in SLOT_CATEGORIES:
            raise LexiconFormatError(f"bad slot category {cat!r} in {where}")
        role = s.get("role")
        literal = s.get("literal")
        if cat == "V" and role:
            raise LexiconFormatError(f"V slot cannot carry a role in {where}")
        if cat in ("NP", "PP") and not role:
            raise LexiconFormatError(f"{cat} slot needs a role in {where}")
        if cat in ("PREP", "LEX") and not literal:
            raise LexiconFormatError(f"{cat} slot needs a literal in {where}")
        slots.append(SyntaxSlot(cat, role, literal))
    if sum(1 for s in slots if s.category == "V") != 1:
        raise LexiconFormatError(f"frame needs exactly one V slot in {where}")
    if not slots:
        raise LexiconFormatError(f"empty syntax in {where}")
    templates = []
    for t in data.get("semantics", []):
        args = tuple(_parse_arg(a, where) for a in t.get("args", []))
        templates.append(SemanticTemplate(t["pred"], args))
    frame = Frame(
        pattern_name=data.get("pattern", ""),
        syntax=tuple(slots),
        semantics=tuple(templates),
        example=data.get("example", ""),
    )
    roles = frame.roles
    for template in frame.semantics:
        for arg in template.args:
            if arg.kind == "role" and arg.value not in roles:
                raise DanglingRole(
                    f"template {template.predicate} references role "
                    f"{arg.value!r} absent from syntax in {where}"
                )
    return frame


def load_lexicon(path: str | Path | None = None,
                 be_path: str | Path | None = None) -> Lexicon:
    """Load classes and be-mappings; every type invariant is checked here."""
    base = resources.files("kdnlu") / "resources" / "lexicon"
    lex_file = Path(path) if path else Path(str(base / "verbs.json"))
    be_file = Path(be_path) if be_path else Path(str(base / "be_mappings.json"))

    try:
        raw = json.loads(lex_file.read_text() or "[]")
    except json.JSONDecodeError as e:
        raise LexiconFormatError(str(e), e.lineno) from e
    if not isinstance(raw, list):
        raise LexiconFormatError("top level must be a list of classes")

    classes: list[VerbNetClass] = []
    seen_ids: set[str] = set()
    for i, entry in enumerate(raw):
        class_id = entry.get("id")
        if not class_id:
            raise LexiconFormatError(f"class #{i} missing id")
        if class_id in seen_ids:
            raise LexiconFormatError(f"duplicate class id {class_id!r}")
        seen_ids.add(class_id)
        members = frozenset(entry.get("members", []))
        if not members:
            raise LexiconFormatError(f"class {class_id} has no members")
        frames = tuple(
            _parse_frame(f, f"class {class_id}") for f in entry.get("frames", [])
        )
        classes.append(VerbNetClass(class_id, members, frames))

    verb_index: dict[str, list[str]] = {}
    for c in classes:
        for lemma in sorted(c.members):
            verb_index.setdefault(lemma, []).append(c.class_id)

    try:
        be_raw = json.loads(be_file.read_text() or "[]")
    except json.JSONDecodeError as e:
        raise LexiconFormatError(str(e), e.lineno) from e
    be_mappings = {}
    for row in be_raw:
        be_mappings[row["shape"]] = BeMapping(row["shape"], row["predicate"])

    return Lexicon(classes, verb_index, be_mappings)


@lru_cache(maxsize=1)
def bundled_lexicon() -> Lexicon:
    return load_lexicon()
