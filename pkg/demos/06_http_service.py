"""Driving the HTTP service end to end from a client's point of view.

Starts the server on a loopback port with a throwaway data directory,
walks a session over the wire, stores the bundled knowledge base, and
asks for a comparison -- the same sequence the browser UI performs.
"""

import json
import tempfile
import threading
import urllib.request

from maud.fixtures import bumper_kb_document, truck_facts_document
from maud.service import make_server

server = make_server("127.0.0.1:0", tempfile.mkdtemp(prefix="maud-demo-"))
threading.Thread(target=server.serve_forever, daemon=True).start()
base = f"http://127.0.0.1:{server.server_address[1]}"
print("service at", base)


def call(method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(base + path, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


# elicit a profile over the wire
resp = call("POST", "/sessions", {"attributes": bumper_kb_document()["attributes"]})
session_id = resp["session_id"]
print("first question:", resp["question"]["prompt"][:72], "...")

answers = [340.0, 100.0, 3.4, 3.6, 0.56, 0.06, 0.23, 0.12]
for i, answer in enumerate(answers):
    resp = call("POST", f"/sessions/{session_id}/answers",
                {"index": i, "answer": answer})
resp = call("POST", f"/sessions/{session_id}/finalize", {"label": "demo"})
profile_id = resp["profile_id"]
print("stored profile", profile_id, "fingerprint", resp["profile_fingerprint"][:16])

# store the knowledge base and evaluate
resp = call("POST", "/kbs", bumper_kb_document())
kb_id = resp["kb_id"]
report = call("POST", "/evaluate", {
    "kb_id": kb_id, "profile_id": profile_id,
    "facts": truck_facts_document(), "mode": "compare"})
print("conventional:", report["conventional"]["pick"]["assignment"])
print("integrated:  ", report["integrated"]["pick"]["assignment"])

# beta fitting endpoint (what the uncertainty screen calls)
fit = call("POST", "/beta/fit", {"lower": 10, "upper": 100, "p": 1.1, "mode": 18})
print("fitted q =", fit["beta"]["q"], " mean =", fit["mean"])

server.shutdown()
print("done")
