"""Benchmark harness: dataset readers, runners, HTTP service, CLI."""

from .babi import (
    DialogRecord,
    DialogTurn,
    QaQuestion,
    QaRecord,
    find_task_file,
    read_babi_dialog,
    read_babi_qa,
)
from .dialog_runner import SHIPPED_DIALOG_TASKS, DialogTaskReport, run_dialog_task
from .qa_runner import SHIPPED_QA_TASKS, Mismatch, TaskReport, run_qa_task

__all__ = [
    "DialogRecord", "DialogTaskReport", "DialogTurn", "Mismatch", "QaQuestion",
    "QaRecord", "SHIPPED_DIALOG_TASKS", "SHIPPED_QA_TASKS", "TaskReport",
    "find_task_file", "read_babi_dialog", "read_babi_qa", "run_dialog_task",
    "run_qa_task",
]
