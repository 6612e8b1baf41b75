"""Record service responses into tests/fixtures/ for the UI contract tests.

Builds the bundled artifacts in a temp dir, boots the service in-process,
seeds the 18-member panel plus a plenary team consensus, and saves every
response the dashboard consumes. Rerun after any service change:

    python3 scripts/record_fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from fairdesk.cli import main as cli_main
from fairdesk.service import create_app

ROOT = Path(__file__).resolve().parent.parent
PKG = ROOT.parent
OUT = ROOT / "tests" / "fixtures"


def save(name: str, payload) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / f"{name}.json"
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n",
                    encoding="utf-8")
    print(f"  {path.relative_to(ROOT)}")


def get(client: TestClient, url: str):
    resp = client.get(url)
    if resp.status_code != 200:
        raise SystemExit(f"GET {url} -> {resp.status_code}: {resp.text}")
    return resp.json()


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        work = Path(tmp)
        dataset_path = work / "dataset.json"
        model_path = work / "model.json"
        rc = cli_main(["ingest", "--data", str(PKG / "data" / "synthetic_credit.data"),
                       "--out", str(dataset_path)])
        rc |= cli_main(["train", "--data", str(dataset_path),
                        "--out", str(model_path)])
        if rc != 0:
            raise SystemExit("artifact build failed")

        app = create_app(dataset_path, model_path, work / "store")
        client = TestClient(app)

        panel = json.loads((PKG / "data" / "credit_panel_preferences.json").read_text())
        for record in panel:
            resp = client.post("/api/preferences", json=record)
            assert resp.status_code == 200, resp.text
        member_ids = [r["participant_id"] for r in panel]

        assign = client.post("/api/teams/assign", json={"team_count": 1}).json()
        save("teams_assign_1", assign)
        save("teams_assign_3",
             client.post("/api/teams/assign", json={"team_count": 3}).json())

        draft = {
            "team_id": "plenary",
            "member_ids": member_ids,
            "consensus": [{"metric_id": "CSP", "scope": "subgroup"}],
            "notes": "panel-wide session",
            "final": False,
        }
        assert client.post("/api/consensus", json=draft).status_code == 200
        save("consensus_plenary_draft", get(client, "/api/consensus?team_id=plenary"))
        final = dict(draft)
        final["consensus"] = [{"metric_id": "CSP", "scope": "subgroup"},
                              {"metric_id": "CF", "scope": "individual"}]
        final["final"] = True
        assert client.post("/api/consensus", json=final).status_code == 200
        save("consensus_plenary", get(client, "/api/consensus?team_id=plenary"))
        save("consensus_all", get(client, "/api/consensus"))

        save("schema", get(client, "/api/dataset/schema"))
        save("instances", get(client, "/api/instances?limit=200"))
        save("instances_sorted",
             get(client, "/api/instances?limit=200&sort=credit_amount:desc"))
        save("instances_filtered",
             get(client, "/api/instances?limit=200&filter=age:lt:25"))
        save("histogram_credit_amount",
             get(client, "/api/dataset/histogram?feature=credit_amount"))
        save("model_summary", get(client, "/api/model/summary"))
        save("model_weights", get(client, "/api/model/weights"))
        save("session_default", get(client, "/api/session"))

        for feature in ("age_group", "gender", "foreign_worker"):
            save(f"metrics_group_{feature}",
                 get(client, f"/api/metrics/group?feature={feature}"))
        save("metrics_subgroup_age_group_gender",
             get(client, "/api/metrics/subgroup?features=age_group,gender"))
        save("metrics_individual", get(client, "/api/metrics/individual"))

        save("explain_dp_age_group",
             get(client, "/api/metrics/explain?metric=DP&feature=age_group"))
        save("explain_dp_gender",
             get(client, "/api/metrics/explain?metric=DP&feature=gender"))
        save("explain_eopp_age_group",
             get(client, "/api/metrics/explain?metric=EOpp&feature=age_group"))
        save("explain_eodds_age_group",
             get(client, "/api/metrics/explain?metric=EOdds&feature=age_group"))
        save("explain_csp_age_group_job",
             get(client, "/api/metrics/explain?metric=CSP&feature=age_group&condition=job"))
        save("explain_csp_age_group_credit_history",
             get(client, "/api/metrics/explain?metric=CSP&feature=age_group"
                         "&condition=credit_history"))

        save("preferences", get(client, "/api/preferences"))
        save("aggregate", get(client, "/api/preferences/aggregate"))
        save("whatif_empty", get(client, "/api/whatif/edits"))

        # thresholds variant: group slider at zero, individual at 100
        zero = {"group": 0, "subgroup": 10, "individual": 95}
        resp = client.put("/api/session/thresholds?session=t0", json=zero)
        assert resp.status_code == 200, resp.text
        save("session_t0", resp.json())
        save("metrics_group_age_group_t0",
             get(client, "/api/metrics/group?feature=age_group&session=t0"))
        hundred = {"group": 10, "subgroup": 10, "individual": 100}
        resp = client.put("/api/session/thresholds?session=t100", json=hundred)
        assert resp.status_code == 200, resp.text
        save("session_t100", resp.json())
        save("metrics_individual_t100",
             get(client, "/api/metrics/individual?session=t100"))

        # what-if variant: one prediction flipped on the first listed instance
        first = get(client, "/api/instances?limit=1")["rows"][0]
        flipped = "Bad" if first["predicted"] == "Good" else "Good"
        resp = client.post("/api/whatif/edits?session=w1",
                           json={"instance_id": first["id"], "target": "prediction",
                                 "new_value": flipped})
        assert resp.status_code == 200, resp.text
        save("whatif_one", resp.json())
        save("metrics_group_age_group_whatif",
             get(client, "/api/metrics/group?feature=age_group&session=w1"))
        save("model_summary_whatif", get(client, "/api/model/summary?session=w1"))
        save("instances_whatif", get(client, "/api/instances?limit=200&session=w1"))
        resp = client.delete("/api/whatif/edits?session=w1")
        assert resp.status_code == 200, resp.text
        save("whatif_cleared", resp.json())

        manifest = {
            "first_instance": {"id": first["id"], "predicted": first["predicted"],
                               "flipped_to": flipped},
            "member_ids": member_ids,
        }
        save("manifest", manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
