"""Command-line entry points: compile, query, qa, dialog, serve, repl."""

from __future__ import annotations

import argparse
import os
import random
import sys
from importlib import resources
from pathlib import Path

from ..dialog import SILENCE, DialogState, next_turn
from ..engine import (
    Solver,
    parse_query,
    render,
    render_justification,
)
from ..errors import FormatError, KdnluError
from ..knowledge import compose_program, load_kb
from ..lexicon import load_lexicon
from ..semgen import render_facts, story_to_program
from ..syntax import (
    load_grammar,
    parse_controlled,
    read_bracketed,
    resolve_anaphora,
    set_table_dir,
    tokenize,
)
from .babi import find_task_file, read_babi_dialog, read_babi_qa
from .dialog_runner import SHIPPED_DIALOG_TASKS, run_dialog_task
from .qa_runner import SHIPPED_QA_TASKS, run_qa_task

EX_OK = 0
EX_FORMAT = 1
EX_ACCURACY = 2
EX_USAGE = 64

_BUNDLED_DATA = Path(str(resources.files("kdnlu") / "resources" / "data"))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdnlu",
        description="Story QA and reservation dialogs over a rule engine",
    )
    parser.add_argument("--lexicon", help="verb lexicon JSON path")
    parser.add_argument("--kb", help="commonsense rule file path")
    parser.add_argument("--grammar", help="grammar directory or rules file")
    parser.add_argument("--seed", type=int, default=0, help="seed for generators")
    parser.add_argument("--depth-limit", type=int, default=10_000)
    sub = parser.add_subparsers(dest="command")

    c = sub.add_parser("compile", help="compile a story file into facts")
    c.add_argument("story", help="text file, one sentence per line")
    c.add_argument("--trees", help="bracketed-tree file to use instead of parsing")

    q = sub.add_parser("query", help="evaluate a query against a compiled story")
    q.add_argument("story")
    q.add_argument("query_file")
    q.add_argument("--trees", help="bracketed-tree file to use instead of parsing")
    q.add_argument("--justify", action="store_true")

    qa = sub.add_parser("qa", help="run a story-QA benchmark task")
    qa.add_argument("--task", type=int, required=True)
    qa.add_argument(
        "--data",
        default=os.environ.get("DATA_DIR"),
        help="dataset directory (default: $DATA_DIR or bundled subsets)",
    )
    qa.add_argument("--limit", type=int)
    qa.add_argument("--report", help="write a TSV report here")
    qa.add_argument("--assert-accuracy", type=float, dest="assert_accuracy")

    d = sub.add_parser("dialog", help="replay a dialog benchmark task")
    d.add_argument("--task", type=int, required=True)
    d.add_argument("--oov", action="store_true")
    d.add_argument("--data", default=os.environ.get("DATA_DIR"))
    d.add_argument("--limit", type=int)
    d.add_argument("--report")
    d.add_argument("--assert-accuracy", type=float, dest="assert_accuracy")

    s = sub.add_parser("serve", help="run the dialog HTTP service")
    s.add_argument("--port", type=int, default=int(os.environ.get("PORT", "8000")))
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--static", default=os.environ.get("STATIC_DIR"))
    s.add_argument("--sessions", default=os.environ.get("SESSION_DIR"))

    sub.add_parser("repl", help="terminal dialog session")
    return parser


def _load_resources(args):
    if args.grammar:
        path = Path(args.grammar)
        if path.is_dir():
            set_table_dir(str(path))
            grammar = load_grammar(path / "grammar.rules")
        else:
            grammar = load_grammar(path)
    else:
        grammar = load_grammar()
    lexicon = load_lexicon(args.lexicon)
    kb = load_kb(args.kb)
    return grammar, lexicon, kb


def _story_trees(args, grammar):
    if args.trees:
        lines = Path(args.trees).read_text().splitlines()
        return [read_bracketed(line) for line in lines if line.strip()]
    sentences = [
        line.strip()
        for line in Path(args.story).read_text().splitlines()
        if line.strip()
    ]
    return [parse_controlled(tokenize(s), grammar) for s in sentences]


def _cmd_compile(args) -> int:
    grammar, lexicon, _ = _load_resources(args)
    trees = _story_trees(args, grammar)
    resolved, notes = resolve_anaphora(trees)
    facts, diagnostics = story_to_program(resolved, lexicon)
    sys.stdout.write(render_facts(facts) if facts else "")
    for note in notes:
        if not note.resolved:
            print(f"% unresolved anaphor {note.anaphor!r} in sentence {note.sentence + 1}", file=sys.stderr)
    for diag in diagnostics:
        print(f"% {diag.kind} at t{diag.time}: {diag.detail}", file=sys.stderr)
    return EX_OK


def _cmd_query(args) -> int:
    grammar, lexicon, kb = _load_resources(args)
    trees = _story_trees(args, grammar)
    resolved, _ = resolve_anaphora(trees)
    facts, _ = story_to_program(resolved, lexicon)
    query_text = Path(args.query_file).read_text()
    lits = parse_query(query_text)
    program = compose_program(facts, len(resolved), kb)
    solver = Solver(program, args.depth_limit)
    answers = list(solver.solve(lits))
    if not answers:
        print("no")
        return EX_OK
    for ans in answers:
        bindings = ", ".join(f"{k} = {render(v)}" for k, v in sorted(ans.bindings.items()))
        print(bindings or "yes")
    if args.justify:
        print()
        print(render_justification(answers[0].justification), end="")
    return EX_OK


def _qa_data_file(args) -> Path:
    directory = Path(args.data) if args.data else _BUNDLED_DATA / "qa"
    return find_task_file(directory, "qa", args.task, "test")


def _cmd_qa(args) -> int:
    if args.task not in SHIPPED_QA_TASKS:
        print(f"qa task must be one of {SHIPPED_QA_TASKS}", file=sys.stderr)
        return EX_USAGE
    grammar, lexicon, kb = _load_resources(args)
    records = read_babi_qa(_qa_data_file(args))
    report = run_qa_task(
        args.task, records, lexicon, kb,
        grammar=grammar, limit=args.limit, depth_limit=args.depth_limit,
    )
    print(report.summary())
    for m in report.mismatches:
        print(f"  story {m.story_id}: {m.question!r} gold={m.gold!r} "
              f"system={m.system!r} candidates={list(m.candidate_set)}")
    if args.report:
        Path(args.report).write_text(report.to_tsv())
    if args.assert_accuracy is not None and report.accuracy < args.assert_accuracy:
        print(f"accuracy {report.accuracy:.2f} below {args.assert_accuracy}", file=sys.stderr)
        return EX_ACCURACY
    return EX_OK


def _cmd_dialog(args) -> int:
    if args.task not in SHIPPED_DIALOG_TASKS:
        print(f"dialog task must be one of {SHIPPED_DIALOG_TASKS}", file=sys.stderr)
        return EX_USAGE
    directory = Path(args.data) if args.data else _BUNDLED_DATA / "dialog"
    path = find_task_file(directory, "dialog_task", args.task, "test", oov=args.oov)
    dialogs = read_babi_dialog(path)
    report = run_dialog_task(args.task, dialogs, oov=args.oov, limit=args.limit)
    print(report.summary())
    for m in report.mismatches:
        print(f"  dialog {m.dialog_id} turn {m.turn_index}: {m.user!r}")
        print(f"    expected {m.expected!r}")
        print(f"    got      {m.got!r}")
    for violation in report.edge_violations:
        print(f"  EDGE VIOLATION {violation}")
    if args.report:
        Path(args.report).write_text(report.to_tsv())
    if args.assert_accuracy is not None and report.per_response < args.assert_accuracy:
        print(f"per-response {report.per_response:.2f} below {args.assert_accuracy}",
              file=sys.stderr)
        return EX_ACCURACY
    return EX_OK


def _cmd_serve(args) -> int:
    from .service import ServiceConfig, serve_http

    config = ServiceConfig(
        session_dir=Path(args.sessions) if args.sessions else None,
        static_dir=Path(args.static) if args.static else None,
    )
    serve_http(port=args.port, host=args.host, config=config)
    return EX_OK


def _cmd_repl(args) -> int:
    state = DialogState(session_id="repl")
    print("reservation agent ready; empty line sends <SILENCE>, ^D quits")
    while True:
        try:
            text = input("you> ").strip()
        except EOFError:
            print()
            return EX_OK
        if not text:
            text = SILENCE
        try:
            response, state = next_turn(state, text)
        except KdnluError as e:
            print(f"!! {e}")
            continue
        print(f"bot> {response}   [{state.fsm}]")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EX_USAGE if e.code not in (0, None) else EX_OK
    if args.seed:
        random.seed(args.seed)
    if args.command is None:
        parser.print_help()
        return EX_USAGE
    handler = {
        "compile": _cmd_compile,
        "query": _cmd_query,
        "qa": _cmd_qa,
        "dialog": _cmd_dialog,
        "serve": _cmd_serve,
        "repl": _cmd_repl,
    }[args.command]
    try:
        return handler(args)
    except FormatError as e:
        print(f"format error: {e}", file=sys.stderr)
        return EX_FORMAT
    except FileNotFoundError as e:
        print(f"not found: {e}", file=sys.stderr)
        return EX_FORMAT
    except KdnluError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EX_FORMAT


if __name__ == "__main__":
    sys.exit(main())
