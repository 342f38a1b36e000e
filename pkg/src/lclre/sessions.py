"""Exploration sessions: trees of problem snapshots plus the operation that
produced each node, persisted as append-only JSON-lines files.

Every problem-producing step stores both the operation descriptor and the
resulting snapshot; replaying the descriptor against the parent snapshot
must reproduce the stored payload byte-for-byte (`verify_replay`).
Verdict operations (fixed-point checks, zero-round solvability, ...) attach
annotations to existing nodes instead of adding children.
"""

import json
import os
import threading
import time
import uuid

from .errors import LclreError, ParseError
from .ops import PROBLEM_OPS, VERDICT_OPS, apply_descriptor
from .problem import problem_from_json, problem_to_json


class SessionNotFound(LclreError):
    pass


class NodeNotFound(LclreError):
    pass


def _canonical(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


class SessionStore:
    """File-backed store; one JSON-lines file per session under state_dir.

    Appends within a session are serialized by a per-session lock; reads
    re-parse the file, so concurrent readers always see a consistent
    prefix.
    """

    def __init__(self, state_dir):
        self.state_dir = state_dir
        os.makedirs(state_dir, exist_ok=True)
        self._locks = {}
        self._locks_guard = threading.Lock()

    def _lock(self, sid):
        with self._locks_guard:
            return self._locks.setdefault(sid, threading.Lock())

    def _path(self, sid):
        if not sid.replace("-", "").isalnum():
            raise SessionNotFound("unknown session %r" % sid)
        return os.path.join(self.state_dir, sid + ".jsonl")

    def _append(self, sid, record):
        with open(self._path(sid), "a") as fh:
            fh.write(_canonical(record) + "\n")

    def _records(self, sid):
        path = self._path(sid)
        if not os.path.exists(path):
            raise SessionNotFound("unknown session %r" % sid)
        with open(path) as fh:
            return [json.loads(line) for line in fh if line.strip()]

    # -- public API --------------------------------------------------------

    def create(self, root_descriptor, note=""):
        """Start a session; the root descriptor is either
        {"op": "catalog", ...} or {"op": "problem", "problem": {...}}."""
        if root_descriptor.get("op") == "problem":
            problem = problem_to_json(
                problem_from_json(root_descriptor.get("problem")))
        elif root_descriptor.get("op") == "catalog":
            problem = apply_descriptor(root_descriptor)["problem"]
        else:
            raise ParseError("session root must be a catalog reference or "
                             "an explicit problem")
        sid = uuid.uuid4().hex
        now = time.time()
        with self._lock(sid):
            self._append(sid, {"type": "session", "id": sid, "created": now})
            self._append(sid, {"type": "node", "id": 0, "parent": None,
                               "op": root_descriptor, "problem": problem,
                               "note": note, "created": now})
        return self.get(sid)

    def get(self, sid):
        records = self._records(sid)
        header = records[0]
        nodes = {}
        order = []
        updated = header["created"]
        for rec in records[1:]:
            updated = rec.get("created", updated)
            if rec["type"] == "node":
                rec = dict(rec)
                rec["children"] = []
                rec["annotations"] = []
                nodes[rec["id"]] = rec
                order.append(rec["id"])
                if rec["parent"] is not None:
                    nodes[rec["parent"]]["children"].append(rec["id"])
            elif rec["type"] == "annotation":
                nodes[rec["node"]]["annotations"].append(
                    {"op": rec["op"], "result": rec["result"],
                     "note": rec.get("note", "")})
        return {"id": header["id"], "created": header["created"],
                "updated": updated,
                "nodes": [nodes[i] for i in order]}

    def delete(self, sid):
        path = self._path(sid)
        with self._lock(sid):
            if not os.path.exists(path):
                raise SessionNotFound("unknown session %r" % sid)
            os.unlink(path)

    def add_step(self, sid, node_id, descriptor, note=""):
        """Apply an operation to a node.  Problem-producing operations
        append a child node and return it; verdict operations append an
        annotation and return it."""
        descriptor = dict(descriptor)
        op = descriptor.get("op")
        with self._lock(sid):
            session = self.get(sid)
            by_id = {n["id"]: n for n in session["nodes"]}
            if node_id not in by_id:
                raise NodeNotFound("unknown node %r" % node_id)
            parent_problem = by_id[node_id]["problem"]
            descriptor = _inject_parent(descriptor, parent_problem)
            result = apply_descriptor(descriptor)
            now = time.time()
            if op in PROBLEM_OPS:
                new_id = max(by_id) + 1
                record = {"type": "node", "id": new_id, "parent": node_id,
                          "op": descriptor, "problem": result["problem"],
                          "note": note, "created": now}
                self._append(sid, record)
                record = dict(record)
                record["children"] = []
                record["annotations"] = []
                return record
            record = {"type": "annotation", "node": node_id,
                      "op": descriptor, "result": result, "note": note,
                      "created": now}
            self._append(sid, record)
            return {"node": node_id, "op": descriptor, "result": result,
                    "note": note}

    def verify_replay(self, sid):
        """Re-run every stored descriptor against its parent snapshot and
        compare canonical JSON byte-for-byte; returns a list of mismatch
        descriptions (empty when fully replayable)."""
        session = self.get(sid)
        by_id = {n["id"]: n for n in session["nodes"]}
        problems = []
        for node in session["nodes"]:
            if node["parent"] is None:
                continue
            replayed = apply_descriptor(node["op"])["problem"]
            if _canonical(replayed) != _canonical(node["problem"]):
                problems.append("node %d does not replay" % node["id"])
            for ann in by_id[node["id"]]["annotations"]:
                redone = apply_descriptor(ann["op"])
                if _canonical(redone) != _canonical(ann["result"]):
                    problems.append("annotation on node %d does not replay"
                                    % node["id"])
        for ann in by_id[0]["annotations"]:
            redone = apply_descriptor(ann["op"])
            if _canonical(redone) != _canonical(ann["result"]):
                problems.append("annotation on node 0 does not replay")
        return problems

    def list_ids(self):
        out = []
        for name in sorted(os.listdir(self.state_dir)):
            if name.endswith(".jsonl"):
                out.append(name[:-len(".jsonl")])
        return out


def _inject_parent(descriptor, parent_problem):
    """Fill the parent snapshot into the descriptor slot the operation reads
    its primary problem from."""
    op = descriptor.get("op")
    descriptor = dict(descriptor)
    if op in PROBLEM_OPS or op in ("fixedpoint", "zeroround"):
        descriptor["problem"] = parent_problem
    elif op == "relaxation":
        descriptor["from"] = parent_problem
    elif op == "refute-sso":
        descriptor["candidate"] = parent_problem
    elif op == "lift":
        pass
    else:
        raise ParseError("operation %r cannot be applied as a session step"
                         % op)
    return descriptor
