import json
import threading
import urllib.error
import urllib.request

import pytest

from maud.fixtures import (
    atypical_profile_document,
    bumper_kb_bytes,
    truck_facts_document,
    typical_profile_document,
)
from maud.documents import profile_from_document
from maud.rules import FactSet, load_knowledge_base
from maud.utility import AttributeSpec, Direction


def make_attribute(attr_id="score", worst=0.0, best=10.0, units="pts"):
    direction = Direction.INCREASING if best > worst else Direction.DECREASING
    return AttributeSpec(id=attr_id, label=attr_id.title(), units=units,
                         range_worst=worst, range_best=best, direction=direction)


@pytest.fixture(scope="session")
def bumper_kb():
    return load_knowledge_base(bumper_kb_bytes())


@pytest.fixture(scope="session")
def truck_facts():
    return FactSet.from_document(truck_facts_document())


@pytest.fixture(scope="session")
def typical_profile():
    return profile_from_document(typical_profile_document())


@pytest.fixture(scope="session")
def atypical_profile():
    return profile_from_document(atypical_profile_document())


class ServiceClient:
    def __init__(self, base):
        self.base = base

    def call(self, method, path, body=None):
        data = json.dumps(body).encode("utf-8") if body is not None else None
        req = urllib.request.Request(self.base + path, data=data, method=method,
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req) as resp:
                return resp.status, json.loads(resp.read())
        except urllib.error.HTTPError as exc:
            return exc.code, json.loads(exc.read())


@pytest.fixture()
def service_client(tmp_path):
    from maud.service import make_server

    server = make_server("127.0.0.1:0", str(tmp_path / "data"))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    port = server.server_address[1]
    try:
        yield ServiceClient(f"http://127.0.0.1:{port}")
    finally:
        server.shutdown()
        server.server_close()
