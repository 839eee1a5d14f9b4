"""HTTP service surface: estimator sessions and batch jobs."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from streamquant.service.app import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


class TestSessions:
    def test_create_observe_estimate_delete(self, client):
        created = client.post("/estimators", json={"algorithm": "data-aligned", "bins": 32})
        assert created.status_code == 200
        body = created.json()
        eid = body["estimator_id"]
        assert body["memory_footprint"] == 32

        fed = client.post(
            f"/estimators/{eid}/observations",
            json={"values": [float(v) for v in range(1, 101)]},
        )
        assert fed.status_code == 200
        assert fed.json()["observed"] == 100

        got = client.get(f"/estimators/{eid}/quantiles", params=[("q", 0.5), ("q", 0.9)])
        assert got.status_code == 200
        estimates = {e["q"]: e["value"] for e in got.json()["estimates"]}
        assert estimates[0.5] == pytest.approx(50.0, rel=0.05)
        assert estimates[0.9] == pytest.approx(90.0, rel=0.05)

        listing = client.get("/estimators")
        assert [s["estimator_id"] for s in listing.json()] == [eid]

        assert client.delete(f"/estimators/{eid}").json() == {"deleted": eid}
        assert client.get(f"/estimators/{eid}").status_code == 404

    def test_unknown_session_404(self, client):
        assert client.get("/estimators/nope").status_code == 404
        assert client.delete("/estimators/nope").status_code == 404
        r = client.post("/estimators/nope/observations", json={"values": [1.0]})
        assert r.status_code == 404

    def test_estimate_before_data_is_400(self, client):
        eid = client.post("/estimators", json={"algorithm": "uniform"}).json()["estimator_id"]
        r = client.get(f"/estimators/{eid}/quantiles", params=[("q", 0.5)])
        assert r.status_code == 400
        assert "no data" in r.text

    def test_non_finite_observation_is_400(self, client):
        eid = client.post("/estimators", json={"algorithm": "uniform"}).json()["estimator_id"]
        r = client.post(f"/estimators/{eid}/observations", json={"values": [1.0, "NaN"]})
        assert r.status_code in (400, 422)

    def test_p2_session_uses_target(self, client):
        eid = client.post(
            "/estimators", json={"algorithm": "p2", "quantile": 0.9}
        ).json()["estimator_id"]
        client.post(
            f"/estimators/{eid}/observations",
            json={"values": [float(v) for v in range(100)]},
        )
        ok = client.get(f"/estimators/{eid}/quantiles", params=[("q", 0.9)])
        assert ok.status_code == 200
        bad = client.get(f"/estimators/{eid}/quantiles", params=[("q", 0.5)])
        assert bad.status_code == 400

    def test_validation_rejects_bad_spec(self, client):
        assert client.post("/estimators", json={"algorithm": "bogus"}).status_code == 422
        assert (
            client.post("/estimators", json={"algorithm": "uniform", "bins": 1}).status_code
            == 422
        )


class TestGenerate:
    def test_deterministic_text(self, client):
        payload = {"kind": "mixture", "count": 50, "seed": 3}
        a = client.post("/generate", json=payload)
        b = client.post("/generate", json=payload)
        assert a.status_code == 200
        assert a.text == b.text
        lines = [l for l in a.text.splitlines() if not l.startswith("#")]
        assert len(lines) == 50
        assert all(np.isfinite(float(l)) for l in lines)


class TestRuns:
    def test_run_returns_summaries_and_series(self, client):
        r = client.post(
            "/runs",
            json={
                "estimator": {"algorithm": "data-aligned", "bins": 32},
                "stream": {"kind": "mixture", "count": 500, "seed": 2},
                "quantiles": [0.5, 0.95],
                "stride": 50,
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert [s["q"] for s in body["series"]] == [0.5, 0.95]
        assert len(body["summaries"]) == 2
        first = body["series"][0]["csv"].splitlines()
        assert first[0] == "index,estimate,truth,rel_error"
        assert len(first) == 11
        assert body["summary_csv"].startswith("algorithm,memory,q")

    def test_run_without_truth(self, client):
        r = client.post(
            "/runs",
            json={
                "estimator": {"algorithm": "reservoir", "buffer": 16},
                "stream": {"kind": "normal", "count": 100, "seed": 1},
                "truth": False,
            },
        )
        body = r.json()
        assert body["summaries"] == []
        assert body["series"][0]["csv"].splitlines()[1].endswith(",,")

    def test_file_stream_runs(self, client, tmp_path):
        path = tmp_path / "stream.txt"
        path.write_text("".join(f"{v}\n" for v in range(1, 201)))
        r = client.post(
            "/runs",
            json={
                "estimator": {"algorithm": "uniform", "bins": 16},
                "stream": {"kind": "file", "path": str(path)},
                "quantiles": [0.5],
                "stride": 100,
            },
        )
        assert r.status_code == 200

    def test_missing_file_is_400(self, client):
        r = client.post(
            "/runs",
            json={
                "estimator": {"algorithm": "uniform"},
                "stream": {"kind": "file", "path": "/does/not/exist.txt"},
            },
        )
        assert r.status_code == 400

    def test_file_kind_requires_path(self, client):
        r = client.post(
            "/runs",
            json={"estimator": {"algorithm": "uniform"}, "stream": {"kind": "file"}},
        )
        assert r.status_code == 422


class TestCompare:
    def test_compare_rows_and_tables(self, client):
        r = client.post(
            "/compare",
            json={
                "estimators": [
                    {"algorithm": "data-aligned", "bins": 64},
                    {"algorithm": "reservoir", "buffer": 64},
                    {"algorithm": "p2"},
                ],
                "stream": {"kind": "mixture", "count": 1000, "seed": 5},
                "quantiles": [0.95],
                "stride": 100,
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert [row["algorithm"] for row in body["rows"]] == ["data-aligned", "reservoir", "p2"]
        assert body["table_csv"].count("\n") == 4  # header + 3 rows + trailing newline
        assert "mean_rel" in body["table_text"]

    def test_compare_needs_two(self, client):
        r = client.post(
            "/compare",
            json={
                "estimators": [{"algorithm": "uniform"}],
                "stream": {"kind": "normal", "count": 100, "seed": 1},
            },
        )
        assert r.status_code == 422

    def test_health(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"
