"""Command line: `alia repl|run|serve`.

Exit codes: 0 ok, 1 assertion failure, 2 configuration error.
"""

from __future__ import annotations

import sys
import threading
import time
from pathlib import Path
from typing import Optional

import click

from .grounding.world import ScenarioError
from .kbio import KnowledgeError
from .language import GrammarError
from .script import ScriptError, Session, run_script_file


def _common(f):
    for opt in reversed([
        click.option("--grammar", type=click.Path(exists=True), default=None,
                     help="grammar file (defaults to the built-in grammar)"),
        click.option("--scenario", type=click.Path(exists=True), default=None,
                     help="scenario file describing the simulated world"),
        click.option("--rules", type=click.Path(exists=True), default=None,
                     help="knowledge file with rules to preload"),
        click.option("--ops", type=click.Path(exists=True), default=None,
                     help="knowledge file with operators to preload"),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--trace", "trace_path", type=click.Path(), default=None,
                     help="write the trace event log here on exit"),
    ]):
        f = opt(f)
    return f


def _build_session(grammar, scenario, rules, ops, seed, mode) -> Session:
    try:
        return Session.build(grammar_path=grammar, scenario_path=scenario,
                             rules_path=rules, ops_path=ops, seed=seed,
                             mode=mode)
    except (GrammarError, ScenarioError, KnowledgeError, OSError) as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(2)


def _write_trace(session: Session, trace_path: Optional[str]) -> None:
    if trace_path:
        Path(trace_path).write_text(session.engine.trace.text())


@click.group()
def main():
    """Advice-taking agent engine."""


@main.command()
@_common
@click.option("--cycles", type=int, default=0,
              help="run this many extra cycles after the script completes")
@click.argument("script", type=click.Path(exists=True))
def run(grammar, scenario, rules, ops, seed, trace_path, cycles, script):
    """Run a scripted scenario and check its assertions."""
    session = _build_session(grammar, scenario, rules, ops, seed, "script")
    try:
        report = run_script_file(session, script)
    except ScriptError as exc:
        click.echo(f"script error: {exc}", err=True)
        sys.exit(2)
    if cycles:
        session.engine.run(cycles)
    _write_trace(session, trace_path)
    for failure in report.failures:
        click.echo(f"FAIL {failure}", err=True)
    click.echo(f"{'ok' if report.ok else 'failed'}: "
               f"{session.engine.cycle} cycles, "
               f"{len(session.engine.trace.events)} events")
    sys.exit(report.exit_code)


@main.command()
@_common
def repl(grammar, scenario, rules, ops, seed, trace_path):
    """Interactive session; the engine keeps cycling between inputs."""
    session = _build_session(grammar, scenario, rules, ops, seed, "repl")
    engine = session.engine
    stop = threading.Event()
    printed = 0

    def ticker():
        nonlocal printed
        rate = engine.cfg.cycle_rate or 10.0
        while not stop.is_set():
            try:
                engine.run_cycle()
            except Exception as exc:   # engine errors never kill the loop
                click.echo(f"[engine] cycle error: {exc}", err=True)
            while printed < len(engine.transcript):
                entry = engine.transcript[printed]
                printed += 1
                if entry.speaker != "user":
                    click.echo(f"[{entry.speaker}] {entry.text}")
            time.sleep(1.0 / rate)

    thread = threading.Thread(target=ticker, daemon=True)
    thread.start()
    click.echo("alia ready; teach me something (ctrl-d to leave)")
    try:
        while True:
            try:
                line = input("> ").strip()
            except EOFError:
                break
            if line in ("quit", "exit"):
                break
            if not line:
                continue
            status = engine.instruct(line)
            if status["status"] == "rejected":
                click.echo(f"[agent] cannot parse past {status['prefix']!r}")
    finally:
        stop.set()
        thread.join(timeout=1.0)
        _write_trace(session, trace_path)
    sys.exit(0)


@main.command()
@_common
@click.option("--port", type=int, default=8321, show_default=True)
@click.option("--paused", is_flag=True, default=False,
              help="start with the cycle loop paused")
def serve(grammar, scenario, rules, ops, seed, trace_path, port, paused):
    """Serve the dashboard API and static bundle."""
    session = _build_session(grammar, scenario, rules, ops, seed, "serve")
    from .server import serve as _serve
    try:
        _serve(session, port, start_paused=paused)
    finally:
        _write_trace(session, trace_path)


if __name__ == "__main__":
    main()
