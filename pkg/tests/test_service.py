"""The HTTP API: operations, jobs, sessions, replay, and error mapping."""

import time

import pytest
from fastapi.testclient import TestClient

from lclre import catalog
from lclre.ops import apply_descriptor
from lclre.problem import problem_to_json, serialize_problem
from lclre.service import create_app


@pytest.fixture()
def client(tmp_path):
    app = create_app(state_dir=str(tmp_path / "state"))
    with TestClient(app) as c:
        yield c


def sso_json():
    return problem_to_json(catalog.sso())


def so_json():
    return problem_to_json(catalog.sinkless_orientation(3))


# -- problems and operations -------------------------------------------------


def test_post_problem_text_and_json(client):
    r = client.post("/v1/problems",
                    json={"text": serialize_problem(catalog.sso())})
    assert r.status_code == 200
    as_text = r.json()["problem"]
    r = client.post("/v1/problems", json=sso_json())
    assert r.status_code == 200
    assert r.json()["problem"] == as_text


def test_post_problem_parse_error(client):
    r = client.post("/v1/problems", json={"text": "not a problem"})
    assert r.status_code == 400
    assert r.json()["kind"] == "parse"


def test_op_q_matches_direct_dispatch(client):
    r = client.post("/v1/ops/q", json={"problem": sso_json()})
    assert r.status_code == 200
    assert r.json() == apply_descriptor({"op": "q", "problem": sso_json()})


def test_op_fixedpoint(client):
    r = client.post("/v1/ops/fixedpoint", json={"problem": so_json()})
    assert r.json() == {"fixed_point": True}
    r = client.post("/v1/ops/fixedpoint", json={"problem": sso_json()})
    assert r.json() == {"fixed_point": False}


def test_op_relaxation_search_and_verify(client):
    r = client.post("/v1/ops/relaxation",
                    json={"from": sso_json(), "to": so_json()})
    body = r.json()
    assert body["found"]
    mapping = body["relaxation"]
    r = client.post("/v1/ops/relaxation",
                    json={"from": sso_json(), "to": so_json(),
                          "mapping": mapping})
    assert r.json()["verified"]


def test_op_zeroround_counterexample(client):
    r = client.post("/v1/ops/zeroround", json={"problem": sso_json()})
    body = r.json()
    assert body["solvable"] is False
    assert "counterexample" in body


def test_op_lift_bounds(client):
    r = client.post("/v1/ops/lift",
                    json={"which": "bounds", "k": 10 ** 9, "delta": 3,
                          "L": "2^3^5", "n": "2^3^85"})
    d = r.json()["report"]
    assert d["randomized"]["exact_fraction"] == [75, 16]
    assert d["randomized_rounds"] == 4


def test_unknown_op_404(client):
    r = client.post("/v1/ops/frobnicate", json={})
    assert r.status_code == 404


def test_catalog_endpoint(client):
    r = client.get("/v1/catalog/sso")
    assert r.status_code == 200
    assert r.json()["problem"] == sso_json()
    r = client.get("/v1/catalog/sso-qk", params={"k": 2})
    assert len(r.json()["problem"]["labels"]) == 5
    r = client.get("/v1/catalog/nope")
    assert r.status_code == 400


# -- error mapping -----------------------------------------------------------


def test_cap_exceeded_is_409_with_partial_index(client):
    r = client.post("/v1/ops/qpow",
                    json={"problem": sso_json(), "k": 3, "label_cap": 5,
                          "run_async": False})
    assert r.status_code == 409
    body = r.json()
    assert body["kind"] == "cap-exceeded"
    # q(sso) and q^2(sso) fit under the 5-label cap; the third power breaks
    assert body["partial_index"] == 2


def test_premise_error_is_400(client):
    r = client.post("/v1/ops/refute-sso",
                    json={"candidate": sso_json(), "run_async": False})
    assert r.status_code == 400
    assert r.json()["kind"] == "premise"


def test_malformed_problem_is_400(client):
    r = client.post("/v1/ops/q", json={"problem": {"labels": "nope"}})
    assert r.status_code == 400
    assert r.json()["kind"] in ("parse", "invalid")


# -- jobs --------------------------------------------------------------------


def poll_until_done(client, jid, timeout=60.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        body = client.get("/v1/jobs/%s" % jid).json()
        if body["status"] != "running":
            return body
        time.sleep(0.02)
    raise AssertionError("job %s did not finish" % jid)


def test_slow_op_becomes_job(client):
    r = client.post("/v1/ops/qpow", json={"problem": sso_json(), "k": 3})
    assert r.status_code == 202
    jid = r.json()["job"]
    body = poll_until_done(client, jid)
    assert body["status"] == "done"
    assert body["result"] == apply_descriptor(
        {"op": "qpow", "problem": sso_json(), "k": 3})
    assert body["progress"]["elapsed"] >= 0


def test_run_async_override_forces_job(client):
    r = client.post("/v1/ops/fixedpoint",
                    json={"problem": so_json(), "run_async": True})
    assert r.status_code == 202
    body = poll_until_done(client, r.json()["job"])
    assert body["result"] == {"fixed_point": True}


def test_job_error_surfaces_on_poll(client):
    r = client.post("/v1/ops/qpow",
                    json={"problem": sso_json(), "k": 4, "label_cap": 5,
                          "run_async": True})
    body = poll_until_done(client, r.json()["job"])
    assert body["status"] == "error"
    assert body["error"]["kind"] == "cap-exceeded"


def test_job_cancellation(client):
    r = client.post("/v1/ops/qpow",
                    json={"problem": problem_to_json(catalog.orcx(4)),
                          "k": 6, "run_async": True})
    jid = r.json()["job"]
    c = client.post("/v1/jobs/%s/cancel" % jid)
    assert c.status_code == 200 and c.json()["cancelling"]
    body = poll_until_done(client, jid)
    assert body["status"] in ("cancelled", "done")


def test_unknown_job_404(client):
    assert client.get("/v1/jobs/deadbeef").status_code == 404
    assert client.post("/v1/jobs/deadbeef/cancel").status_code == 404


# -- sessions ----------------------------------------------------------------


def test_session_lifecycle_and_replay(client):
    r = client.post("/v1/sessions",
                    json={"root": {"op": "catalog", "name": "sso"},
                          "note": "start"})
    assert r.status_code == 200
    sid = r.json()["id"]
    assert sid in client.get("/v1/sessions").json()["sessions"]

    node = 0
    counts = [len(r.json()["nodes"][0]["problem"]["labels"])]
    for _ in range(3):
        s = client.post("/v1/sessions/%s/steps" % sid,
                        json={"node": node, "op": "q"})
        assert s.status_code == 200
        node = s.json()["id"]
        counts.append(len(s.json()["problem"]["labels"]))
    assert counts == [2, 3, 5, 7]

    a = client.post("/v1/sessions/%s/steps" % sid,
                    json={"node": node, "op": "fixedpoint"})
    assert a.json()["result"] == {"fixed_point": False}

    session = client.get("/v1/sessions/%s" % sid).json()
    assert [n["id"] for n in session["nodes"]] == [0, 1, 2, 3]
    assert session["nodes"][3]["annotations"][0]["result"] == {
        "fixed_point": False}

    # byte-for-byte replay of everything stored
    store = client.app.state.store
    assert store.verify_replay(sid) == []

    assert client.delete("/v1/sessions/%s" % sid).json() == {"deleted": sid}
    assert client.get("/v1/sessions/%s" % sid).status_code == 404


def test_session_with_explicit_problem_root(client):
    r = client.post("/v1/sessions", json={"problem": sso_json()})
    sid = r.json()["id"]
    assert r.json()["nodes"][0]["problem"] == sso_json()
    s = client.post("/v1/sessions/%s/steps" % sid,
                    json={"node": 0, "op": "relaxation", "to": so_json()})
    assert s.json()["result"]["found"]


def test_session_branching(client):
    sid = client.post("/v1/sessions",
                      json={"root": {"op": "catalog", "name": "sso"}}
                      ).json()["id"]
    a = client.post("/v1/sessions/%s/steps" % sid,
                    json={"node": 0, "op": "q"}).json()["id"]
    b = client.post("/v1/sessions/%s/steps" % sid,
                    json={"node": 0, "op": "re"}).json()["id"]
    session = client.get("/v1/sessions/%s" % sid).json()
    root = session["nodes"][0]
    assert sorted(root["children"]) == sorted([a, b])


def test_session_errors(client):
    assert client.get("/v1/sessions/missing").status_code == 404
    assert client.delete("/v1/sessions/missing").status_code == 404
    r = client.post("/v1/sessions", json={"note": "no root"})
    assert r.status_code == 400
    sid = client.post("/v1/sessions",
                      json={"root": {"op": "catalog", "name": "sso"}}
                      ).json()["id"]
    r = client.post("/v1/sessions/%s/steps" % sid,
                    json={"node": 99, "op": "q"})
    assert r.status_code == 404
    r = client.post("/v1/sessions/%s/steps" % sid,
                    json={"node": 0, "op": "catalog", "name": "sso"})
    assert r.status_code == 400  # catalog is not a step operation


def test_sessions_persist_across_app_instances(tmp_path):
    state = str(tmp_path / "state")
    with TestClient(create_app(state_dir=state)) as c1:
        sid = c1.post("/v1/sessions",
                      json={"root": {"op": "catalog", "name": "sso"}}
                      ).json()["id"]
        c1.post("/v1/sessions/%s/steps" % sid, json={"node": 0, "op": "q"})
    with TestClient(create_app(state_dir=state)) as c2:
        session = c2.get("/v1/sessions/%s" % sid).json()
        assert len(session["nodes"]) == 2
        assert c2.app.state.store.verify_replay(sid) == []
