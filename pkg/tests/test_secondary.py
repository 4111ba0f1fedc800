"""Cross-surface acceptance for the chat client (secondary component).

The reference conversation must produce byte-identical agent turns through
three routes: direct next_turn calls, the HTTP API, and the built chat
client driven headlessly under node; the client's transcript must also
reconcile with GET /history. Skipped when the frontend build or node is
absent.
"""

from __future__ import annotations

import json
import shutil
import socket
import subprocess
import sys
import time
from pathlib import Path

import httpx
import pytest

from kdnlu.dialog import DialogState, next_turn

ROOT = Path(__file__).resolve().parents[1]
FRONTEND = ROOT / "frontend"
CLIENT_BUILD = FRONTEND / "dist" / "js" / "api.js"

TRANSCRIPT = [
    "Good morning",
    "Can you make a restaurant reservation in London in a cheap price range",
    "<SILENCE>",
    "anything, except Lebanese food",
    "I want to have curry",
    "Thai",
    "we will be six",
    "<SILENCE>",
]


def direct_agent_turns() -> list[str]:
    state = DialogState(session_id="direct")
    out = []
    for user in TRANSCRIPT:
        response, state = next_turn(state, user)
        out.append(response)
    return out


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="module")
def live_server(tmp_path_factory):
    port = _free_port()
    sessions = tmp_path_factory.mktemp("sessions")
    process = subprocess.Popen(
        [
            sys.executable, "-m", "kdnlu.harness.cli", "serve",
            "--port", str(port), "--sessions", str(sessions),
            "--static", str(FRONTEND / "dist"),
        ],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    try:
        for _ in range(100):
            try:
                httpx.get(base + "/api/session/none/history", timeout=1)
                break
            except httpx.TransportError:
                time.sleep(0.1)
        else:
            raise RuntimeError("service did not come up")
        yield base
    finally:
        process.terminate()
        process.wait(timeout=10)


def http_agent_turns(base: str) -> tuple[list[str], list[list[str]]]:
    with httpx.Client(base_url=base, timeout=30) as client:
        sid = client.post("/api/session").json()["session_id"]
        turns = []
        for user in TRANSCRIPT:
            body = client.post(f"/api/session/{sid}/turn", json={"text": user}).json()
            turns.append(body["response"])
        history = client.get(f"/api/session/{sid}/history").json()["history"]
    return turns, history


def test_http_api_matches_direct_calls(live_server):
    want = direct_agent_turns()
    got, history = http_agent_turns(live_server)
    assert got == want
    assert [h for h in history if h[0] == "bot"] == [["bot", t] for t in want]
    print("ACCEPTANCE 6-http: PASS - HTTP agent turns byte-identical to next_turn")


@pytest.mark.skipif(shutil.which("node") is None, reason="node unavailable")
@pytest.mark.skipif(not CLIENT_BUILD.exists(), reason="frontend not built (npm run build)")
def test_chat_client_matches_direct_calls_and_reconciles(live_server):
    result = subprocess.run(
        ["node", str(FRONTEND / "scripts" / "replay.mjs"), live_server],
        input="\n".join(TRANSCRIPT) + "\n",
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert result.returncode == 0, result.stderr
    payload = json.loads(result.stdout)
    assert payload["agentTurns"] == direct_agent_turns()
    assert payload["reconciles"] is True
    print(
        "ACCEPTANCE 6-ui: PASS - chat client turns byte-identical to next_turn, "
        "transcript reconciles with /history"
    )


def test_static_ui_served(live_server):
    page = httpx.get(live_server + "/", timeout=10)
    assert page.status_code == 200
    assert "Reservation Agent" in page.text
    assert httpx.get(live_server + "/js/app.js", timeout=10).status_code == 200
