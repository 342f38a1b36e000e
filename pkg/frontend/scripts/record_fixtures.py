"""Record API fixtures for the frontend snapshot tests.

Runs the full criterion flow against a live server instance and stores the
raw JSON payloads under test/fixtures/.
"""

import json
import os
import sys

import httpx
from fastapi.testclient import TestClient

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "src"))

from lclre.service import create_app  # noqa: E402

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "test", "fixtures")


def save(name, payload):
    path = os.path.join(FIXTURES, name + ".json")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("wrote", path)


def main(tmpdir="/tmp/lclre-fixture-state"):
    os.makedirs(FIXTURES, exist_ok=True)
    client = TestClient(create_app(state_dir=tmpdir))

    save("catalog-sso", client.get("/v1/catalog/sso").json())
    save("catalog-so", client.get("/v1/catalog/so").json())

    session = client.post("/v1/sessions",
                          json={"root": {"op": "catalog", "name": "sso"}}
                          ).json()
    sid = session["id"]
    node = 0
    for _ in range(3):
        step = client.post("/v1/sessions/%s/steps" % sid,
                           json={"node": node, "op": "q"}).json()
        node = step["id"]
        badge = client.post("/v1/sessions/%s/steps" % sid,
                            json={"node": node, "op": "fixedpoint"}).json()
        assert "result" in badge
    full = client.get("/v1/sessions/%s" % sid).json()
    # strip the volatile identifiers and timestamps so snapshots are stable
    full["id"] = "fixture-session"
    full["created"] = full["updated"] = 0.0
    for entry in full["nodes"]:
        entry["created"] = 0.0
    save("session-sso-q3", full)

    sso = client.get("/v1/catalog/sso").json()["problem"]
    so = client.get("/v1/catalog/so").json()["problem"]
    save("op-q-sso", client.post("/v1/ops/q", json={"problem": sso}).json())
    save("zeroround-sso",
         client.post("/v1/ops/zeroround", json={"problem": sso}).json())
    save("relaxation-sso-so",
         client.post("/v1/ops/relaxation",
                     json={"from": sso, "to": so}).json())
    save("error-cap-exceeded",
         client.post("/v1/ops/qpow",
                     json={"problem": sso, "k": 3, "label_cap": 5,
                           "run_async": False}).json())


if __name__ == "__main__":
    main()
