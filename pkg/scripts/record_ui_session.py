#!/usr/bin/env python3
"""Record the scripted what-if session against the real HTTP service.

The frontend contract tests replay this recording through the UI controller
with a transport stub that serves only these bytes, which proves the UI
renders server numbers verbatim. Regenerate after engine or fixture changes:

    python3 scripts/record_ui_session.py
"""
from __future__ import annotations

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fastapi.testclient import TestClient

from dcbam.service import create_app

ROOT = os.path.join(os.path.dirname(__file__), "..")
FIXTURE = os.path.join(ROOT, "fixtures", "gridstix.dcbam.json")
OUT = os.path.join(ROOT, "frontend", "tests", "fixtures", "recorded_session.json")


def main():
    client = TestClient(create_app())
    entries = []

    def record(name, method, path, body=None):
        if method == "GET":
            response = client.get(path)
        elif method == "POST":
            response = client.post(path, json=body)
        elif method == "PUT":
            response = client.put(path, json=body)
        else:
            raise ValueError(method)
        entries.append(
            {
                "name": name,
                "request": {"method": method, "path": path, "body": body},
                "response": {
                    "status": response.status_code,
                    "body": response.json(),
                    "revision": response.headers.get("X-Revision"),
                },
            }
        )
        return response

    created = record(
        "create-session", "POST", "/v1/projects", {"path": "fixtures/gridstix.dcbam.json"}
    )
    sid = created.json()["session_id"]

    record("get-project", "GET", f"/v1/projects/{sid}")
    record(
        "sweep",
        "POST",
        f"/v1/projects/{sid}/whatif",
        {"portfolio_id": "P57", "lo": 300.0, "hi": 2200.0, "step": 100.0},
    )
    record(
        "broken-d-valuation",
        "POST",
        f"/v1/projects/{sid}/valuation",
        {"portfolio_id": "P57", "lattice": {"d": 1.01}},
    )
    record(
        "fixed-d-valuation",
        "POST",
        f"/v1/projects/{sid}/valuation",
        {"portfolio_id": "P57", "lattice": {"d": 0.9}},
    )
    record("value-P57", "POST", f"/v1/projects/{sid}/valuation", {"portfolio_id": "P57"})
    record("value-P5", "POST", f"/v1/projects/{sid}/valuation", {"portfolio_id": "P5"})
    record("value-P7", "POST", f"/v1/projects/{sid}/valuation", {"portfolio_id": "P7"})
    # query strings follow the UI client's fixed parameter order and number
    # formatting (JS String(n)), so the replay stub can match paths exactly
    record("lattice-P57", "GET", f"/v1/projects/{sid}/lattice?portfolio_id=P57")
    record(
        "lattice-P57-fixed-d",
        "GET",
        f"/v1/projects/{sid}/lattice?portfolio_id=P57&d=0.9",
    )
    record(
        "lattice-worked-cell",
        "GET",
        f"/v1/projects/{sid}/lattice?dad_ids=DAD5&base=138&horizon=2&u=1.25&d=0.8",
    )
    record(
        "lattice-all-zero",
        "GET",
        f"/v1/projects/{sid}/lattice?dad_ids=DAD5&base=0&vs=100",
    )

    # contrib-editing flow: zero DAD5's scores, commit, re-rank. The rank
    # path repeats with a different response; the replay stub serves
    # repeated keys in recorded order.
    record("rank-initial", "GET", f"/v1/projects/{sid}/rank")
    doc = client.get(f"/v1/projects/{sid}").json()["project"]
    for dad in doc["dads"]:
        if dad["id"] == "DAD5":
            dad["contrib"] = {qa: 0.0 for qa in dad["contrib"]}
    record(
        "put-zero-contrib",
        "PUT",
        f"/v1/projects/{sid}",
        {"revision": 0, "project": doc},
    )
    record("rank-after-edit", "GET", f"/v1/projects/{sid}/rank")

    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump({"session_id": sid, "entries": entries}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"recorded {len(entries)} exchanges to {os.path.relpath(OUT, ROOT)}")


if __name__ == "__main__":
    main()
