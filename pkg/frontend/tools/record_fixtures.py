"""Record workbench test fixtures from the real HTTP service.

The snapshot tests assert byte-identical labels against these recorded
responses, so regenerate them whenever the backend's wire format changes:

    python3 frontend/tools/record_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from sciuncert.knowledge import default_assets, demo_text
from sciuncert.service import ServiceConfig, create_app

OUT = Path(__file__).resolve().parents[1] / "fixtures"


def dump(name, payload):
    (OUT / name).write_text(json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
                            encoding="utf-8")
    print("wrote", name)


def main():
    OUT.mkdir(exist_ok=True)

    # Default service: annotation + asset snapshots.
    client = TestClient(create_app(ServiceConfig()))
    dump("annotate_demo.json", client.post("/annotate", json={"text": demo_text()}).json())
    dump("annotate_claim_only.json",
         client.post("/annotate", json={"text": "The data were collected in 2019."}).json())
    dump("patterns_get.json", client.get("/patterns").json())

    health = client.get("/health").json()
    dump("health.json", health)

    # Duplicate rule id: validation must fail with ERROR findings (422).
    dup = default_assets()
    dup["rules"] = dup["rules"] + [dict(dup["rules"][0])]
    resp = client.post("/patterns/validate", json={"assets": dup})
    assert resp.status_code == 422
    dump("validate_duplicate_422.json", {"status": 422, "body": resp.json()})

    # Stale-version commit: optimistic concurrency precondition.
    ok_assets = default_assets()
    resp = client.put("/patterns", json={"assets": ok_assets, "expected_version": "stale-version"})
    assert resp.status_code == 409
    dump("put_conflict_409.json", {"status": 409, "body": resp.json()})

    # Edit-loop scenario: start from the paper-faithful library (no errfix_*
    # rules), preview the assets that add them back; the error-analysis
    # corpus sentences flip CLAIM -> UNCERTAINTY.
    faithful_client = TestClient(create_app(ServiceConfig(paper_faithful=True)))
    before = faithful_client.get("/patterns").json()
    dump("patterns_get_faithful.json", before)
    resp = faithful_client.post(
        "/preview", json={"assets": default_assets(), "corpus_id": "error_analysis"}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert all(c["before"]["label"] == "CLAIM" and c["after"]["label"] == "UNCERTAINTY"
               for c in body["changed"])
    dump("preview_needs_replicated.json", body)

    resp = faithful_client.put(
        "/patterns", json={"assets": default_assets(), "expected_version": before["version"]}
    )
    assert resp.status_code == 200
    dump("put_commit_200.json", {"status": 200, "body": resp.json()})


if __name__ == "__main__":
    main()
