from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from alia.cli import main as cli_main
from alia.engine import Engine
from alia.kbio import load_knowledge, save_knowledge
from alia.script import ScriptError, Session, run_script, run_script_file
from alia.semnet import NameGen
from alia.server import build_app

REPO = Path(__file__).resolve().parents[1]
TIGER_SCN = REPO / "scenarios" / "tiger.scn"
ZEBRA_SCN = REPO / "scenarios" / "zebra.scn"
TIGER_SCRIPT = REPO / "scripts" / "tiger.alia"
ZEBRA_SCRIPT = REPO / "scripts" / "zebra.alia"


def tiger_session(seed=1):
    return Session.build(scenario_path=str(TIGER_SCN), seed=seed)


# ------------------------------------------------------------ knowledge io

def test_knowledge_round_trip(tmp_path):
    s = tiger_session()
    e = s.engine
    for sentence in ["Orange striped things are usually tigers",
                     "Tigers are animals",
                     "If a tiger is close then flee",
                     "To flee move backward and say save me master"]:
        e.teach(sentence)
    path = tmp_path / "kb.txt"
    save_knowledge(path, list(e.rules), list(e.ops))

    e2 = Engine(seed=5)
    rules, ops = load_knowledge(path, e2.names)
    assert len(rules) == 2 and len(ops) == 2
    for r in rules:
        e2.rules.add(r)
    for o in ops:
        e2.ops.add(o)
    assert len(e2.rules) == 2 and len(e2.ops) == 2
    # loaded rules still fire
    from alia.semnet import Builder
    b = Builder(e2.names)
    x = b.obj()
    b.fact("orange", "hq", x)
    b.fact("striped", "hq", x)
    facts = e2.rules.derive(b.build(), e2.names)
    assert any(n.lex == "tiger" for f in facts for n in f.graphlet.nodes)


def test_loaded_knowledge_coalesces_with_reteaching(tmp_path):
    s = tiger_session()
    s.engine.teach("Orange striped things are usually tigers")
    path = tmp_path / "kb.txt"
    save_knowledge(path, list(s.engine.rules), [])
    rules, _ = load_knowledge(path, s.engine.names)
    for r in rules:
        s.engine.rules.add(r)
    assert len(s.engine.rules) == 1


# ------------------------------------------------------------ scripts

def test_tiger_script_passes():
    report = run_script_file(tiger_session(seed=1), TIGER_SCRIPT)
    assert report.failures == []
    assert report.ok


def test_zebra_script_passes():
    session = Session.build(scenario_path=str(ZEBRA_SCN), seed=1)
    report = run_script_file(session, ZEBRA_SCRIPT)
    assert report.failures == []


def test_script_asserting_never_fired_directive_fails():
    session = tiger_session()
    report = run_script(session, "wait: 3\nassert: directive .* KEEP .*\n")
    assert not report.ok and report.exit_code == 1


def test_script_determinism_byte_identical():
    t1 = tiger_session(seed=7)
    run_script_file(t1, TIGER_SCRIPT)
    t2 = tiger_session(seed=7)
    run_script_file(t2, TIGER_SCRIPT)
    assert t1.engine.trace.text() == t2.engine.trace.text()


def test_malformed_script_reports_line():
    session = tiger_session()
    with pytest.raises(ScriptError) as err:
        run_script(session, "say: stop\nfrobnicate the lot\n")
    assert "line 2" in str(err.value)


def test_replay_reproduces_trace_byte_for_byte():
    live = tiger_session(seed=3)
    live.engine.instruct("Orange striped things are usually tigers")
    live.engine.instruct("Tigers are animals")
    live.engine.run(4)
    live.engine.instruct("drive forward")
    live.engine.run(30)
    script = live.to_script()

    replay = tiger_session(seed=3)
    run_script(replay, script)
    assert replay.engine.trace.text() == live.engine.trace.text()
    assert replay.engine.cycle == live.engine.cycle


# ------------------------------------------------------------ CLI

def test_cli_run_tiger_exit_zero(tmp_path):
    runner = CliRunner()
    trace_path = tmp_path / "trace.log"
    result = runner.invoke(cli_main, [
        "run", "--scenario", str(TIGER_SCN), "--seed", "1",
        "--trace", str(trace_path), str(TIGER_SCRIPT)])
    assert result.exit_code == 0, result.output
    assert trace_path.exists()
    assert "save me master" in trace_path.read_text()


def test_cli_run_failing_assert_exit_one(tmp_path):
    bad = tmp_path / "bad.alia"
    bad.write_text("wait: 2\nassert: speech .*never said this\n")
    runner = CliRunner()
    result = runner.invoke(cli_main, [
        "run", "--scenario", str(TIGER_SCN), str(bad)])
    assert result.exit_code == 1


def test_cli_missing_scenario_exit_two():
    runner = CliRunner()
    result = runner.invoke(cli_main, [
        "run", "--scenario", "/nonexistent.scn", str(TIGER_SCRIPT)])
    assert result.exit_code == 2


def test_cli_malformed_script_exit_two(tmp_path):
    bad = tmp_path / "bad.alia"
    bad.write_text("say stop\n")
    runner = CliRunner()
    result = runner.invoke(cli_main, ["run", str(bad)])
    assert result.exit_code == 2


def test_snapshot_equals_memory_export():
    s = tiger_session(seed=1)
    e = s.engine
    for sentence in ["Orange striped things are usually tigers",
                     "If something is close then find out what it is"]:
        e.instruct(sentence)
    e.instruct("drive forward")
    e.run(20)
    from alia.semnet import dump
    snap = e.snapshot()
    mem = e.memory.snapshot(e.cycle)
    assert [i["id"] for i in snap["attention"]] == [i.id for i in mem.attention]
    assert snap["working"]["dump"] == dump(mem.working).splitlines()
    assert [h["id"] for h in snap["halo"]] == [f.id for f in mem.halo]


# ------------------------------------------------------------ service API

@pytest.fixture
def client():
    session = tiger_session(seed=2)
    app = build_app(session, start_paused=True, rate=0.0)
    with TestClient(app) as c:
        yield c


def test_instruction_endpoint_accepts_and_rejects(client):
    ok = client.post("/api/instruction",
                     json={"text": "Tigers are animals"}).json()
    assert ok["status"] == "queued" and ok["category"] == "rule-teaching"
    bad = client.post("/api/instruction",
                      json={"text": "peacock the block"}).json()
    assert bad["status"] == "rejected"
    assert "prefix" in bad
    empty = client.post("/api/instruction", json={})
    assert empty.status_code == 400


def test_pause_then_step_emits_exactly_three_snapshots(client):
    with client.websocket_connect("/api/stream") as ws:
        hello = json.loads(ws.receive_text())
        assert hello["type"] == "hello"
        r = client.post("/api/control", json={"action": "step", "value": 3})
        assert r.json()["status"] == "ok"
        got = [json.loads(ws.receive_text()) for _ in range(3)]
        assert [g["type"] for g in got] == ["snapshot"] * 3
        cycles = [g["data"]["cycle"] for g in got]
        assert cycles == sorted(cycles)


def test_two_clients_identical_streams(client):
    with client.websocket_connect("/api/stream") as a, \
         client.websocket_connect("/api/stream") as b:
        a.receive_text()
        b.receive_text()
        client.post("/api/control", json={"action": "step", "value": 2})
        for _ in range(2):
            assert a.receive_text() == b.receive_text()


def test_state_endpoint_matches_snapshot_schema(client):
    client.post("/api/control", json={"action": "step", "value": 1})
    data = client.get("/api/state").json()
    for key in ("cycle", "attention", "working", "halo", "trees",
                "transcript", "events", "world"):
        assert key in data
    assert data["world"]["robot"]["heading"] == 0.0


def test_bad_control_action_is_structured_error(client):
    r = client.post("/api/control", json={"action": "explode"})
    assert r.status_code == 400
    assert "reason" in r.json()
