"""Dialog benchmark replay: byte-exact per-response and per-dialog scoring."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..dialog import DialogState, legal_transition, next_turn
from ..dialog.state import RestaurantFact
from ..errors import KdnluError
from .babi import DialogRecord, DialogTurn

SHIPPED_DIALOG_TASKS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class TurnMismatch:
    dialog_id: int
    turn_index: int
    user: str
    expected: str
    got: str


@dataclass
class DialogTaskReport:
    task_id: int
    oov: bool = False
    n_dialogs: int = 0
    n_perfect_dialogs: int = 0
    n_turns: int = 0
    n_correct_turns: int = 0
    mean_seconds_per_turn: float = 0.0
    mismatches: list[TurnMismatch] = field(default_factory=list)
    edge_violations: list[str] = field(default_factory=list)

    @property
    def per_response(self) -> float:
        return 100.0 * self.n_correct_turns / self.n_turns if self.n_turns else 0.0

    @property
    def per_dialog(self) -> float:
        return 100.0 * self.n_perfect_dialogs / self.n_dialogs if self.n_dialogs else 0.0

    def summary(self) -> str:
        suffix = " (OOV)" if self.oov else ""
        return (
            f"dialog task {self.task_id}{suffix}: per-response "
            f"{self.per_response:.1f} (per-dialog {self.per_dialog:.1f}) over "
            f"{self.n_dialogs} dialogs, {self.mean_seconds_per_turn * 1000:.0f} ms/turn"
        )

    def to_tsv(self) -> str:
        lines = [
            "task\toov\tn_dialogs\tper_response\tper_dialog",
            f"{self.task_id}\t{int(self.oov)}\t{self.n_dialogs}"
            f"\t{self.per_response:.4f}\t{self.per_dialog:.4f}",
            "",
            "dialog_id\tturn\tuser\texpected\tgot",
        ]
        for m in self.mismatches:
            lines.append(
                f"{m.dialog_id}\t{m.turn_index}\t{m.user}\t{m.expected}\t{m.got}"
            )
        return "\n".join(lines) + "\n"


def run_dialog_task(
    task_id: int,
    dialogs: list[DialogRecord],
    *,
    oov: bool = False,
    limit: int | None = None,
    assert_edges: bool = True,
) -> DialogTaskReport:
    """Replay gold user turns; the bot's replies must match byte for byte."""
    report = DialogTaskReport(task_id, oov)
    total = 0.0
    if limit is not None:
        dialogs = dialogs[:limit]
    for record in dialogs:
        report.n_dialogs += 1
        state = DialogState(session_id=f"replay-{task_id}-{record.dialog_id}")
        perfect = True
        turn_index = 0
        for item in record.items:
            if isinstance(item, RestaurantFact):
                state = state.with_fact_lines([item])
                continue
            assert isinstance(item, DialogTurn)
            turn_index += 1
            report.n_turns += 1
            before = state.fsm
            t0 = time.perf_counter()
            try:
                response, state = next_turn(state, item.user)
            except (KdnluError, AssertionError) as e:
                response = f"<{type(e).__name__}: {e}>"
            total += time.perf_counter() - t0
            if assert_edges and not legal_transition(before, state.fsm):
                report.edge_violations.append(
                    f"dialog {record.dialog_id} turn {turn_index}: {before} -> {state.fsm}"
                )
            if response == item.bot:
                report.n_correct_turns += 1
            else:
                perfect = False
                report.mismatches.append(
                    TurnMismatch(record.dialog_id, turn_index, item.user, item.bot, response)
                )
        if perfect:
            report.n_perfect_dialogs += 1
    report.mean_seconds_per_turn = total / max(report.n_turns, 1)
    return report
