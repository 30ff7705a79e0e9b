"""HTTP API over assessment sessions, knowledge bases, profiles, and
evaluation.

Thin, stateless-over-storage wrappers: every numeric result comes from the
library modules unchanged — the service adds routing, persistence, and
error mapping only.  Endpoints (JSON request/response bodies):

    POST /sessions                     open a session, returns first question
    GET  /sessions/{id}/question       pending question or {"done": true}
    POST /sessions/{id}/answers        {"index": n, "answer": x}
    POST /sessions/{id}/finalize       build + persist the profile
    GET|POST /profiles, GET /profiles/{id}
    GET|POST /kbs,      GET /kbs/{id}
    POST /evaluate                     {"kb_id", "facts", "profile_id", "mode"}
    POST /beta/fit                     beta fitting + sampled density curve

Listen address and storage directory come from --addr/--data-dir flags or
the MAUD_ADDR / MAUD_DATA_DIR environment variables.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import assessment, documents, evaluation, uncertainty
from .errors import DocumentError, MaudError, SequenceError
from .rules import FactSet, load_knowledge_base
from .storage import DocumentStore

DEFAULT_ADDR = "127.0.0.1:8765"
DEFAULT_DATA_DIR = "./maud-data"

_STATUS_BY_CODE = {
    "not_found": 404,
    "conflict": 409,
    "answer_sequence": 409,
    "session_state": 409,
}


class ServiceState:
    """Storage handles plus per-session submission locks."""

    def __init__(self, data_dir: str):
        self.sessions = DocumentStore(data_dir, "sessions")
        self.profiles = DocumentStore(data_dir, "profiles")
        self.kbs = DocumentStore(data_dir, "kbs")
        self._session_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._session_locks.setdefault(session_id, threading.Lock())


def _question_payload(session) -> dict:
    question = assessment.next_question(session)
    if question is None:
        return {"done": True, "answered": len(session.responses),
                "total": session.total_questions}
    return {"done": False, "answered": len(session.responses),
            "total": session.total_questions, "question": question.to_document()}


def _create_session(state: ServiceState, body: dict) -> tuple[int, dict]:
    attributes = documents.attributes_from_document(body)
    ce_count = body.get("ce_count", 1)
    if not isinstance(ce_count, int) or isinstance(ce_count, bool):
        raise DocumentError("ce_count must be an integer", field="ce_count")
    session = assessment.start_session(attributes, ce_count=ce_count)
    state.sessions.put(documents.session_to_document(session), doc_id=session.id)
    return 201, {"session_id": session.id, **_question_payload(session)}

def _get_question(state: ServiceState, session_id: str) -> tuple[int, dict]:
    session = documents.session_from_document(state.sessions.get(session_id))
    return 200, _question_payload(session)


def _post_answer(state: ServiceState, session_id: str, body: dict) -> tuple[int, dict]:
    if "answer" not in body:
        raise DocumentError("body needs an 'answer'", field="answer")
    index = body.get("index")
    if index is None:
        raise SequenceError("body needs the question 'index' being answered")
    with state.session_lock(session_id):
        session = documents.session_from_document(state.sessions.get(session_id))
        session = assessment.submit_answer(session, float(body["answer"]),
                                           at_index=int(index))
        state.sessions.put(documents.session_to_document(session),
                           doc_id=session.id)
    return 200, _question_payload(session)


def _finalize(state: ServiceState, session_id: str, body: dict) -> tuple[int, dict]:
    with state.session_lock(session_id):
        session = documents.session_from_document(state.sessions.get(session_id))
        profile = assessment.finalize_profile(session)
        doc = documents.profile_to_document(profile)
        label = body.get("label") if isinstance(body, dict) else None
        stored = {
            "format_version": "1",
            "label": label or "",
            "profile": doc,
            "session_log": documents.session_to_document(session),
        }
        profile_id, digest = state.profiles.put(stored)
    return 201, {"profile_id": profile_id, "fingerprint": digest,
                 "profile_fingerprint": documents.profile_fingerprint(profile),
                 "profile": doc}


def _store_profile(state: ServiceState, body: dict) -> tuple[int, dict]:
    if isinstance(body, dict) and "profile" in body:
        payload = body["profile"]
        label = body.get("label", "")
        session_log = body.get("session_log")
    else:
        payload, label, session_log = body, "", None
    profile = documents.profile_from_document(payload)  # validation
    if session_log is not None:
        replayed = documents.session_from_document(session_log)
        if documents.profile_to_document(
                assessment.finalize_profile(replayed)) != payload:
            raise DocumentError("session_log does not replay to the profile",
                                field="session_log")
    stored = {"format_version": "1", "label": label,
              "profile": documents.profile_to_document(profile),
              "session_log": session_log}
    profile_id, digest = state.profiles.put(stored, doc_id=body.get("id"))
    return 201, {"profile_id": profile_id, "fingerprint": digest,
                 "profile_fingerprint": documents.profile_fingerprint(profile)}


def _store_kb(state: ServiceState, body: dict) -> tuple[int, dict]:
    kb = load_knowledge_base(body)  # full validation
    kb_id, digest = state.kbs.put(kb.raw_document, doc_id=body.get("id"))
    return 201, {"kb_id": kb_id, "fingerprint": digest, "name": kb.name}


def _load_profile(state: ServiceState, profile_id: str):
    stored = state.profiles.get(profile_id)
    return documents.profile_from_document(stored.get("profile", stored))


def _evaluate(state: ServiceState, body: dict) -> tuple[int, dict]:
    for key in ("kb_id", "facts", "profile_id"):
        if key not in body:
            raise DocumentError(f"body needs {key!r}", field=key)
    mode = body.get("mode", "integrated")
    if mode not in ("integrated", "compare"):
        raise DocumentError(f"mode must be integrated|compare, got {mode!r}",
                            field="mode")
    kb = load_knowledge_base(state.kbs.get(body["kb_id"]))
    facts = FactSet.from_document(body["facts"])
    profile = _load_profile(state, body["profile_id"])
    if mode == "compare":
        report = evaluation.compare_modes(kb, facts, profile)
        return 200, report.to_document()
    result = evaluation.evaluate_design(kb, facts, profile)
    return 200, result.to_document()


def _fit_beta(body: dict) -> tuple[int, dict]:
    kwargs = {}
    for key in ("p", "q", "mode", "mean"):
        if key in body and body[key] is not None:
            kwargs[key] = float(body[key])
    spec = uncertainty.fit_beta(float(body.get("lower", 0.0)),
                                float(body.get("upper", 0.0)), **kwargs)
    samples = body.get("samples", 101)
    if not isinstance(samples, int) or isinstance(samples, bool) \
            or not 2 <= samples <= 2001:
        raise DocumentError("samples must be an integer in [2, 2001]",
                            field="samples")
    return 200, {
        "beta": spec.to_document(),
        "mean": uncertainty.beta_mean(spec),
        "mode": None if spec.is_uniform else uncertainty.beta_mode(spec),
        "density": [[x, f] for x, f in uncertainty.density_curve(spec, samples)],
    }


class _Handler(BaseHTTPRequestHandler):
    state: ServiceState  # assigned by make_server
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _error(self, exc: MaudError) -> None:
        status = _STATUS_BY_CODE.get(exc.code, 400)
        self._send(status, {"error": exc.to_document()})

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            parsed = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise DocumentError(f"request body is not valid JSON: {exc}")
        if not isinstance(parsed, (dict, list)):
            raise DocumentError("request body must be a JSON object")
        return parsed

    def do_OPTIONS(self):  # CORS preflight for the browser UI
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        try:
            state = self.state
            if self.path == "/profiles":
                self._send(200, {"profiles": state.profiles.entries()})
            elif self.path == "/kbs":
                self._send(200, {"kbs": state.kbs.entries()})
            elif m := re.fullmatch(r"/sessions/([\w-]+)/question", self.path):
                self._send(*_get_question(state, m.group(1)))
            elif m := re.fullmatch(r"/profiles/([\w-]+)", self.path):
                self._send(200, state.profiles.get(m.group(1)))
            elif m := re.fullmatch(r"/kbs/([\w-]+)", self.path):
                self._send(200, state.kbs.get(m.group(1)))
            else:
                self._send(404, {"error": {"code": "not_found",
                                           "message": f"no route {self.path}"}})
        except MaudError as exc:
            self._error(exc)
        except Exception as exc:  # defensive: never leak a traceback
            self._send(500, {"error": {"code": "internal", "message": str(exc)}})

    def do_POST(self):
        try:
            state = self.state
            body = self._body()
            if self.path == "/sessions":
                self._send(*_create_session(state, body))
            elif m := re.fullmatch(r"/sessions/([\w-]+)/answers", self.path):
                self._send(*_post_answer(state, m.group(1), body))
            elif m := re.fullmatch(r"/sessions/([\w-]+)/finalize", self.path):
                self._send(*_finalize(state, m.group(1), body))
            elif self.path == "/profiles":
                self._send(*_store_profile(state, body))
            elif self.path == "/kbs":
                self._send(*_store_kb(state, body))
            elif self.path == "/evaluate":
                self._send(*_evaluate(state, body))
            elif self.path == "/beta/fit":
                self._send(*_fit_beta(body))
            else:
                self._send(404, {"error": {"code": "not_found",
                                           "message": f"no route {self.path}"}})
        except MaudError as exc:
            self._error(exc)
        except Exception as exc:
            self._send(500, {"error": {"code": "internal", "message": str(exc)}})


def make_server(addr: str = DEFAULT_ADDR,
                data_dir: str = DEFAULT_DATA_DIR) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server; ``addr`` is host:port,
    port 0 picks a free port."""
    host, _, port_text = addr.rpartition(":")
    if not host:
        raise DocumentError(f"addr must be host:port, got {addr!r}", field="addr")
    state = ServiceState(data_dir)
    handler = type("BoundHandler", (_Handler,), {"state": state})
    server = ThreadingHTTPServer((host, int(port_text)), handler)
    server.maud_state = state
    return server


def serve_forever(addr: str, data_dir: str) -> None:
    server = make_server(addr, data_dir)
    host, port = server.server_address[:2]
    print(f"maud service listening on http://{host}:{port} (data: {data_dir})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
