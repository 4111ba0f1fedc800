"""Readers for the story-QA and dialog dataset line formats.

Story files: `N text` for statements, `N question?\\tanswer\\tsupport` for
questions; N restarting at 1 opens a new story. Dialog files: `N user\\tbot`
turns with interleaved knowledge lines `N <restaurant> <attribute> <value>`;
a blank line ends a dialog.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from ..dialog.state import RestaurantFact
from ..errors import FormatError

_R_ATTRIBUTES = {
    "R_cuisine", "R_location", "R_price", "R_rating",
    "R_phone", "R_address", "R_number", "R_post_code", "R_type",
}


@dataclass(frozen=True)
class QaQuestion:
    line_no: int
    text: str
    gold: str
    support: tuple[int, ...]


@dataclass(frozen=True)
class QaRecord:
    story_id: int
    sentences: tuple[tuple[int, str], ...]     # (line_no, text)
    questions: tuple[QaQuestion, ...]


def read_babi_qa(path: Union[str, Path]) -> list[QaRecord]:
    """Parse a story file into records; line numbers restart per story."""
    records: list[QaRecord] = []
    sentences: list[tuple[int, str]] = []
    questions: list[QaQuestion] = []
    story_id = 0
    last_no = 0

    def flush() -> None:
        nonlocal sentences, questions, story_id
        if sentences or questions:
            records.append(QaRecord(story_id, tuple(sentences), tuple(questions)))
            story_id += 1
            sentences, questions = [], []

    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.rstrip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if not head.isdigit():
            raise FormatError(f"expected a line number, found {head!r}", lineno)
        n = int(head)
        if n == 1:
            flush()
        elif not records and not sentences and not questions:
            raise FormatError(f"file must start a story at 1, found {n}", lineno)
        elif n != last_no + 1:
            raise FormatError(f"line number {n} after {last_no}", lineno)
        last_no = n
        if "\t" in rest:
            parts = rest.split("\t")
            if len(parts) < 2:
                raise FormatError("question line needs answer field", lineno)
            text = parts[0].strip()
            gold = parts[1].strip()
            support = tuple(
                int(s) for s in (parts[2].split() if len(parts) > 2 else [])
            )
            questions.append(QaQuestion(n, text, gold, support))
        else:
            sentences.append((n, rest.strip()))
    flush()
    return records


@dataclass(frozen=True)
class DialogTurn:
    user: str
    bot: str


@dataclass(frozen=True)
class DialogRecord:
    dialog_id: int
    # Replay order matters: knowledge lines take effect where they appear.
    items: tuple[Union[DialogTurn, RestaurantFact], ...]

    @property
    def turns(self) -> list[DialogTurn]:
        return [i for i in self.items if isinstance(i, DialogTurn)]


def read_babi_dialog(path: Union[str, Path]) -> list[DialogRecord]:
    records: list[DialogRecord] = []
    items: list[Union[DialogTurn, RestaurantFact]] = []
    dialog_id = 0

    def flush() -> None:
        nonlocal items, dialog_id
        if items:
            records.append(DialogRecord(dialog_id, tuple(items)))
            dialog_id += 1
            items = []

    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.rstrip()
        if not line:
            flush()
            continue
        head, _, rest = line.partition(" ")
        if not head.isdigit():
            raise FormatError(f"expected a line number, found {head!r}", lineno)
        if int(head) == 1:
            flush()
        if "\t" in rest:
            user, _, bot = rest.partition("\t")
            items.append(DialogTurn(user.strip(), bot.strip()))
        else:
            fields = rest.split()
            if len(fields) == 3 and fields[1] in _R_ATTRIBUTES:
                items.append(RestaurantFact(fields[0], fields[1], fields[2]))
            else:
                raise FormatError(f"unrecognized dialog line {rest!r}", lineno)
    flush()
    return records


def find_task_file(data_dir: Union[str, Path], prefix: str, task_id: int,
                   split: str = "test", oov: bool = False) -> Path:
    """Locate a task file by the vendored or the public naming convention.

    Vendored: qa7_test.txt, dialog_task1_OOV-test.txt. Public datasets:
    qa7_counting_test.txt, dialog-babi-task1-API-calls-tst.txt and the
    OOV variants dialog-babi-task1-API-callsOOV-tst.txt.
    """
    directory = Path(data_dir)
    splits = [split] + (["tst"] if split == "test" else [])
    prefixes = [prefix] + (["dialog-babi-task"] if prefix.startswith("dialog") else [])
    for pre in prefixes:
        for sp in splits:
            suffix = f"OOV-{sp}" if oov else sp
            patterns = [
                f"{pre}{task_id}_{suffix}.txt",
                f"{pre}{task_id}_*{suffix}.txt",
                f"{pre}{task_id}-*{suffix}.txt",
                f"{pre}{task_id}-*OOV-{sp}.txt" if oov else f"{pre}{task_id}-*{sp}.txt",
            ]
            for pattern in patterns:
                hits = [
                    h for h in sorted(directory.glob(pattern))
                    if ("OOV" in h.name) == oov and h.name.endswith(f"{sp}.txt")
                ]
                if hits:
                    return hits[0]
    raise FileNotFoundError(f"no {prefix}{task_id} {split} file under {directory}")
