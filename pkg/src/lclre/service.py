"""HTTP API: every engine operation plus exploration sessions and jobs.

Operations predicted to be slow run as cancellable background jobs; the
response then carries a job id pollable at /v1/jobs/{id}.  Session step
appends are serialized per session by the store; engine calls are stateless
and run concurrently.
"""

import os
import threading
import time
import uuid

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import cancel
from .errors import (CapExceeded, LclreError, OperationCancelled, ParseError,
                     PremiseError)
from .ops import ALL_OPS, apply_descriptor
from .problem import parse_problem, problem_from_json, problem_to_json
from .sessions import NodeNotFound, SessionNotFound, SessionStore

DEFAULT_STATE_DIR = os.path.expanduser("~/.lclre/state")

_SLOW_LABEL_THRESHOLDS = {"re": 10, "rere": 8, "q": 8, "rstar": 9}


def _predict_slow(desc):
    """Alphabet-size heuristic for the 200 ms budget."""
    op = desc.get("op")
    labels = len((desc.get("problem") or {}).get("labels", []))
    if op == "tau":
        return True
    if op == "qpow" and int(desc.get("k", 1)) >= 2:
        return True
    if op in _SLOW_LABEL_THRESHOLDS:
        return labels >= _SLOW_LABEL_THRESHOLDS[op]
    if op == "zeroround" and desc.get("input") is not None:
        return labels * len(desc["input"].get("labels", [])) >= 24
    if op == "refute-sso":
        return len((desc.get("candidate") or {}).get("labels", [])) >= 4
    return False


class JobRegistry:
    def __init__(self):
        self._jobs = {}
        self._guard = threading.Lock()

    def submit(self, fn):
        jid = uuid.uuid4().hex
        event = threading.Event()
        job = {"id": jid, "status": "running", "result": None,
               "error": None, "started": time.time(), "finished": None,
               "event": event}
        with self._guard:
            self._jobs[jid] = job

        def run():
            token = cancel.install(event)
            try:
                job["result"] = fn()
                job["status"] = "done"
            except OperationCancelled:
                job["status"] = "cancelled"
            except Exception as exc:  # stored, surfaced on poll
                job["status"] = "error"
                job["error"] = _error_payload(exc)
            finally:
                cancel.uninstall(token)
                job["finished"] = time.time()

        thread = threading.Thread(target=run, daemon=True)
        job["thread"] = thread
        thread.start()
        return jid

    def get(self, jid):
        with self._guard:
            return self._jobs.get(jid)

    def cancel(self, jid):
        job = self.get(jid)
        if job is None:
            return None
        job["event"].set()
        return job


def _error_payload(exc):
    if isinstance(exc, CapExceeded):
        payload = {"kind": "cap-exceeded", "error": str(exc)}
        if exc.partial_index is not None:
            payload["partial_index"] = exc.partial_index
        return payload
    if isinstance(exc, PremiseError):
        return {"kind": "premise", "error": str(exc)}
    if isinstance(exc, ParseError):
        return {"kind": "parse", "error": str(exc)}
    if isinstance(exc, (LclreError, ValueError, KeyError, TypeError)):
        return {"kind": "invalid", "error": str(exc)}
    raise exc


def _status_for(payload):
    return {"cap-exceeded": 409}.get(payload["kind"], 400)


def create_app(state_dir=None):
    state_dir = state_dir or os.environ.get("LCLRE_STATE_DIR",
                                            DEFAULT_STATE_DIR)
    app = FastAPI(title="round-elimination workbench", version="1")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    store = SessionStore(state_dir)
    jobs = JobRegistry()
    app.state.store = store
    app.state.jobs = jobs

    @app.exception_handler(LclreError)
    async def _lclre_error(request, exc):
        if isinstance(exc, (SessionNotFound, NodeNotFound)):
            return JSONResponse({"kind": "not-found", "error": str(exc)},
                                status_code=404)
        payload = _error_payload(exc)
        return JSONResponse(payload, status_code=_status_for(payload))

    @app.exception_handler(ValueError)
    async def _value_error(request, exc):
        payload = _error_payload(exc)
        return JSONResponse(payload, status_code=_status_for(payload))

    @app.post("/v1/problems")
    async def post_problem(request: Request):
        body = await request.json()
        if isinstance(body, dict) and "text" in body:
            p = parse_problem(body["text"])
        else:
            p = problem_from_json(body)
        return {"problem": problem_to_json(p)}

    @app.post("/v1/ops/{opname}")
    async def post_op(opname: str, request: Request):
        if opname not in ALL_OPS:
            return JSONResponse({"kind": "not-found",
                                 "error": "unknown operation %r" % opname},
                                status_code=404)
        desc = await request.json()
        if not isinstance(desc, dict):
            return JSONResponse({"kind": "parse",
                                 "error": "body must be an object"},
                                status_code=400)
        desc["op"] = opname
        run_async = desc.pop("run_async", None)
        slow = _predict_slow(desc) if run_async is None else bool(run_async)
        if slow:
            jid = jobs.submit(lambda: apply_descriptor(desc))
            return JSONResponse({"job": jid}, status_code=202)
        return apply_descriptor(desc)

    @app.get("/v1/catalog/{name}")
    async def get_catalog(name: str, delta: int = 3, k: int = None):
        return apply_descriptor({"op": "catalog", "name": name,
                                 "delta": delta, "k": k})

    @app.get("/v1/jobs/{jid}")
    async def get_job(jid: str):
        job = jobs.get(jid)
        if job is None:
            return JSONResponse({"kind": "not-found",
                                 "error": "unknown job %r" % jid},
                                status_code=404)
        out = {"id": jid, "status": job["status"],
               "progress": {"elapsed":
                            (job["finished"] or time.time())
                            - job["started"]}}
        if job["status"] == "done":
            out["result"] = job["result"]
        if job["status"] == "error":
            out["error"] = job["error"]
        return out

    @app.post("/v1/jobs/{jid}/cancel")
    async def cancel_job(jid: str):
        job = jobs.cancel(jid)
        if job is None:
            return JSONResponse({"kind": "not-found",
                                 "error": "unknown job %r" % jid},
                                status_code=404)
        return {"id": jid, "status": job["status"], "cancelling": True}

    @app.post("/v1/sessions")
    async def post_session(request: Request):
        body = await request.json()
        root = body.get("root")
        if root is None and "problem" in body:
            root = {"op": "problem", "problem": body["problem"]}
        if root is None:
            return JSONResponse({"kind": "parse",
                                 "error": "missing session root"},
                                status_code=400)
        return store.create(root, note=body.get("note", ""))

    @app.get("/v1/sessions")
    async def list_sessions():
        return {"sessions": store.list_ids()}

    @app.get("/v1/sessions/{sid}")
    async def get_session(sid: str):
        return store.get(sid)

    @app.delete("/v1/sessions/{sid}")
    async def delete_session(sid: str):
        store.delete(sid)
        return {"deleted": sid}

    @app.post("/v1/sessions/{sid}/steps")
    async def post_step(sid: str, request: Request):
        body = await request.json()
        node = body.get("node", 0)
        desc = body.get("descriptor") or {}
        if "op" not in desc and "op" in body:
            desc = {k: v for k, v in body.items()
                    if k not in ("node", "note")}
        return store.add_step(sid, node, desc, note=body.get("note", ""))

    return app


def main(port=8800, state_dir=None):
    import uvicorn
    uvicorn.run(create_app(state_dir), host="127.0.0.1", port=port)
