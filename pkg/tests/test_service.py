import pytest
from fastapi.testclient import TestClient

from workerlens.pipeline import VALID_RATIO_THRESHOLD, valid_ratio
from workerlens.service import create_app
from workerlens.simulate import generate_corpus
from workerlens.store import EventStore

from conftest import make_piece_doc, make_session_doc


@pytest.fixture(scope="module")
def service(tmp_path_factory):
    root = tmp_path_factory.mktemp("svc")
    store = EventStore(root)
    generate_corpus(store, seed=0)
    store.close()
    app = create_app(str(root))
    client = TestClient(app, raise_server_exceptions=False)
    entry = client.post("/train", json={
        "scenario": 2, "model": {"family": "random_forest", "seed": 0}}).json()
    return client, entry, root


def test_health(service):
    client, _, _ = service
    body = client.get("/health").json()
    assert body["status"] == "ok"
    assert body["sessions"] == 30


def test_train_response_carries_reports(service):
    client, entry, _ = service
    assert entry["model_id"] == "m0001"
    assert entry["scenario"] == 2
    assert entry["eval"]["accuracy"] >= 0.9
    assert {"f09", "f03(avg)"} <= set(entry["selection"]["final"])
    metrics = client.get(f"/models/{entry['model_id']}/metrics").json()
    assert metrics == entry["eval"]
    listed = client.get("/models").json()
    assert any(m["model_id"] == entry["model_id"] for m in listed)


def test_ingest_endpoints_and_errors(service):
    client, _, _ = service
    doc = make_piece_doc(piece_id="svc-p1", session_id="svc-s1",
                         worker_id="W01", input_instant=1.5)
    assert client.post("/events/pieces", json=doc).status_code == 201
    assert client.post("/events/pieces", json=doc).status_code == 409
    bad = dict(doc, piece_id="svc-p2", output_delay=-1.0)
    r = client.post("/events/pieces", json=bad)
    assert r.status_code == 400
    assert r.json()["code"] == "schema_violation"
    sdoc = make_session_doc(session_id="svc-sess1", worker_id="W01", start=2.0)
    assert client.post("/events/sessions", json=sdoc).status_code == 201
    assert client.post("/events/sessions", json=sdoc).status_code == 409


def test_predict_and_explain_routes(service):
    client, entry, _ = service
    record = make_session_doc(session_id="adhoc", worker_id="W01", start=5e5,
                              delays=(20.0,) * 8,
                              valid=(True,) * 7 + (False,),
                              n_to_buffer=7, n_direct_placed=1)
    r = client.post(f"/models/{entry['model_id']}/predict", json={"record": record})
    assert r.status_code == 200
    body = r.json()
    assert body["label"] in ("expert", "inexpert")
    assert 0.0 <= body["confidence"] <= 1.0

    r = client.post(f"/models/{entry['model_id']}/explain",
                    json={"record": record, "seed": 3})
    assert r.status_code == 200
    out = r.json()
    assert out["explanation"]["instance_id"] == "adhoc"
    assert len([l for l in out["report"].splitlines() if l[:2] in
                ("1.", "2.", "3.", "4.", "5.")]) == 5

    missing = dict(record)
    del missing["output_delays"]
    r = client.post(f"/models/{entry['model_id']}/predict", json={"record": missing})
    assert r.status_code == 400


def test_report_route_and_unknown_session(service):
    client, _, _ = service
    r = client.get("/reports/W03-s002")
    assert r.status_code == 200
    assert r.json()["report"].startswith("1. For task W03-s002")
    assert client.get("/reports/nope").status_code == 404


def test_kpis_route(service):
    client, _, _ = service
    r = client.get("/kpis/W01", params={"date": "2024-01-12"})
    assert r.status_code == 200
    body = r.json()
    assert body["snapshot"]["worker_id"] == "W01"
    assert set(body["intra"]["verdict"]) == {"n_inc", "n_inv", "n_val",
                                             "n_task", "t_val", "t_total"}
    assert body["inter"]["baseline"]["window"] == "inter_daily"


def test_dashboard_summary_route(service):
    client, _, _ = service
    body = client.get("/dashboard/summary").json()
    assert len(body["timeline"]) >= 30
    assert body["valid_ratio"]["ratio"] > 0
    worker_view = client.get("/dashboard/summary", params={"worker": "W04"}).json()
    assert all(p["worker_id"] == "W04" for p in worker_view["timeline"])
    assert len(worker_view["kpi_boxes"]) == 6
    for box in worker_view["kpi_boxes"]:
        assert box["status"] in ("over", "under", "neutral")


def test_export_route(service):
    client, _, _ = service
    r = client.get("/export", params={"kind": "sessions"})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("text/csv")
    lines = r.text.splitlines()
    assert lines[0].startswith("session_id,")
    assert len(lines) >= 31


def test_model_errors(service):
    client, _, _ = service
    assert client.get("/models/zzz/metrics").status_code == 404
    r = client.post("/train", json={"scenario": 2, "delta": 1.5,
                                    "model": {"family": "random_forest"}})
    assert r.status_code == 400


def test_registry_survives_restart(service):
    client, entry, root = service
    fresh = TestClient(create_app(str(root)), raise_server_exceptions=False)
    listed = fresh.get("/models").json()
    assert any(m["model_id"] == entry["model_id"] for m in listed)
    r = fresh.get("/reports/W03-s002")
    assert r.status_code == 200


def test_valid_ratio_rule():
    # strict comparison against the published 66.67% threshold
    assert not (0.6667 > VALID_RATIO_THRESHOLD)
    assert 0.67 > VALID_RATIO_THRESHOLD
    assert not (2.0 / 3.0 > VALID_RATIO_THRESHOLD)
    assert 0.7 > VALID_RATIO_THRESHOLD


def test_valid_ratio_is_mean_of_task_ratios(fresh_store):
    fresh_store.ingest_session(make_session_doc(
        session_id="a", delays=(5.0,) * 4, valid=(True, True, True, False)))
    fresh_store.ingest_session(make_session_doc(
        session_id="b", start=5000.0, delays=(5.0,) * 2, valid=(True, False)))
    sessions = fresh_store.query("sessions")
    assert valid_ratio(sessions) == pytest.approx((0.75 + 0.5) / 2)
