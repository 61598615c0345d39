"""Endpoint contracts of the local JSON service."""

import json

import pytest
from fastapi.testclient import TestClient

from riskgate import ValidationError, default_matrix
from riskgate.config import AppConfig
from riskgate.serialize import matrix_payload, tables_payload
from riskgate.service import create_app
from riskgate.model import score_c, score_d, score_m, score_n, score_t, score_v, score_w

CSV_SAMPLE = """\
region,date,weekly_incidence
berlin,2021-03-15,35.0
berlin,2021-03-22,80.4
munich,2021-03-22,9.9
"""

SHOPPING = {
    "persons": 30,
    "weekly_incidence": 80,
    "exposures_per_week": 3,
    "duration_minutes": 4,
    "label": "click&meet shopping",
}
EVERYMAN = {"age": 55}
NURSE = {"age": 55, "occupational_exposure": "very_high"}


@pytest.fixture
def client(tmp_path):
    csv = tmp_path / "incidence.csv"
    csv.write_text(CSV_SAMPLE)
    config = AppConfig(
        incidence_source=str(csv),
        profile_path=tmp_path / "profile.json",
    )
    app = create_app(config)
    with TestClient(app, raise_server_exceptions=False) as client:
        yield client


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"
    assert body["incidence_loaded"] is True


class TestAssessEndpoint:
    def test_shopping_green(self, client):
        response = client.post("/assess", json={"scenario": SHOPPING, "profile": EVERYMAN})
        assert response.status_code == 200
        body = response.json()
        assert body["f"] == 10
        assert body["risk"] == "green"
        assert body["severity"] == "VI"
        assert body["scores"] == {"n": 4, "w": 3, "c": 1, "t": 2, "d": 0, "m": 0, "v": 0}
        assert body["refused"] is False

    def test_nurse_red(self, client):
        body = client.post("/assess", json={"scenario": SHOPPING, "profile": NURSE}).json()
        assert body["risk"] == "red"
        assert body["severity"] == "I"

    def test_refusal_is_a_structured_response(self, client):
        scenario = dict(SHOPPING, persons=500)
        response = client.post("/assess", json={"scenario": scenario, "profile": EVERYMAN})
        assert response.status_code == 200
        body = response.json()
        assert body["refused"] is True
        assert body["risk"] is None and body["scores"] is None

    def test_no_exposure(self, client):
        scenario = dict(SHOPPING, persons=0)
        body = client.post("/assess", json={"scenario": scenario, "profile": EVERYMAN}).json()
        assert body["no_exposure"] is True
        assert body["risk"] is None

    def test_region_scenario(self, client):
        scenario = {
            "persons": 2, "region": "berlin", "date": "2021-03-23",
            "exposures_per_week": 1, "duration_minutes": 10,
        }
        body = client.post("/assess", json={"scenario": scenario, "profile": EVERYMAN}).json()
        assert body["scores"]["w"] == 3

    def test_validation_error_carries_field_path(self, client):
        scenario = dict(SHOPPING, persons=-1)
        response = client.post("/assess", json={"scenario": scenario, "profile": EVERYMAN})
        assert response.status_code == 400
        assert response.json()["error"]["location"] == "scenario.persons"

    def test_unknown_scenario_field_rejected(self, client):
        scenario = dict(SHOPPING, persnos=1)
        response = client.post("/assess", json={"scenario": scenario, "profile": EVERYMAN})
        assert response.status_code == 400
        assert "persnos" in response.json()["error"]["message"]

    def test_malformed_body(self, client):
        response = client.post(
            "/assess", content=b"{nope", headers={"Content-Type": "application/json"}
        )
        assert response.status_code == 400
        response = client.post("/assess", json=["a", "list"])
        assert response.status_code == 400
        response = client.post("/assess", json={"profile": EVERYMAN})
        assert response.status_code == 400
        assert "scenario" in response.json()["error"]["message"]

    def test_identical_bodies_identical_responses(self, client):
        payload = {"scenario": SHOPPING, "profile": NURSE}
        first = client.post("/assess", json=payload)
        second = client.post("/assess", json=payload)
        assert first.content == second.content


class TestWhatIfEndpoint:
    def test_nurse_shopping(self, client):
        body = client.post("/whatif", json={"scenario": SHOPPING, "profile": NURSE}).json()
        assert body["original"]["risk"] == "red"
        assert body["mitigations"], "expected a non-empty ranked list"
        top = body["mitigations"][0]
        assert top["new_risk"] == "green"
        assert top["new_f"] == 4
        assert [change["field"] for change in top["changes"]] == ["ventilation", "mask"]

    def test_ranked_monotone(self, client):
        body = client.post("/whatif", json={"scenario": SHOPPING, "profile": NURSE}).json()
        order = {"green": 0, "yellow": 1, "orange": 2, "red": 3}
        keys = [(order[m["new_risk"]], m["new_f"]) for m in body["mitigations"]]
        assert keys == sorted(keys)


class TestScheduleEndpoint:
    def test_two_entries(self, client):
        metro = {
            "persons": 30, "weekly_incidence": 20, "exposures_per_week": 7,
            "duration_minutes": 7, "mask": "ffp2", "label": "metro",
        }
        body = client.post(
            "/schedule", json={"entries": [SHOPPING, metro], "profile": NURSE}
        ).json()
        assert [entry["risk"] for entry in body["entries"]] == ["red", "red"]
        assert body["headline"] == "red"
        assert "independently" in body["warning"]

    def test_entry_error_carries_index(self, client):
        bad = dict(SHOPPING, persons=-2)
        response = client.post(
            "/schedule", json={"entries": [SHOPPING, bad], "profile": EVERYMAN}
        )
        assert response.status_code == 400
        assert "entries[1]" in response.json()["error"]["message"]


class TestReferenceData:
    def test_matrix_endpoint_matches_engine(self, client):
        assert client.get("/matrix").json() == matrix_payload(default_matrix())

    def test_tables_endpoint_matches_engine(self, client):
        assert client.get("/tables").json() == tables_payload(100)

    def test_tables_round_trip_through_scoring(self, client):
        # the payload's representative values must score to the band they
        # label: the engine is the single source of the band constants
        tables = client.get("/tables").json()
        scorers = {
            "persons": score_n, "weekly_incidence": score_w,
            "exposures_per_week": score_c, "duration_minutes": score_t,
            "distance_meters": score_d, "mask": score_m, "ventilation": score_v,
        }
        for parameter in tables["parameters"]:
            scorer = scorers[parameter["field"]]
            for option in parameter["options"]:
                if option["score"] is None:
                    continue  # the deliberate refusal overflow choice
                assert scorer(option["value"]) == option["score"], parameter["field"]

    def test_tables_overflow_option_refuses(self, client):
        from riskgate import ActivityRefused

        tables = client.get("/tables").json()
        persons = next(p for p in tables["parameters"] if p["field"] == "persons")
        overflow = persons["options"][-1]
        assert overflow["score"] is None
        with pytest.raises(ActivityRefused):
            score_n(overflow["value"], tables["max_persons"])


class TestIncidenceEndpoint:
    def test_resolution(self, client):
        body = client.get(
            "/incidence", params={"region": "berlin", "date": "2021-03-25"}
        ).json()
        assert body == {
            "region": "berlin", "date": "2021-03-22", "weekly_incidence": 80.4,
            "w": 3, "stale": False,
        }

    def test_stale_flag(self, client):
        body = client.get(
            "/incidence", params={"region": "berlin", "date": "2021-05-01"}
        ).json()
        assert body["stale"] is True

    def test_unknown_region_404(self, client):
        response = client.get("/incidence", params={"region": "atlantis"})
        assert response.status_code == 404

    def test_missing_region_param(self, client):
        assert client.get("/incidence").status_code == 400

    def test_unconfigured_source_503(self, tmp_path):
        config = AppConfig(profile_path=tmp_path / "p.json")
        with TestClient(create_app(config)) as client:
            assert client.get("/incidence", params={"region": "x"}).status_code == 503


class TestProfileEndpoint:
    def test_round_trip_and_fallback(self, client):
        assert client.get("/profile").json() == {"profile": None}
        response = client.put("/profile", json=NURSE)
        assert response.status_code == 200
        stored = client.get("/profile").json()["profile"]
        assert stored["occupational_exposure"] == "very_high"
        # an assess without an inline profile uses the stored one
        body = client.post("/assess", json={"scenario": SHOPPING}).json()
        assert body["severity"] == "I"

    def test_no_profile_anywhere_is_an_error(self, tmp_path):
        config = AppConfig(profile_path=tmp_path / "p.json")
        with TestClient(create_app(config)) as client:
            assert client.post("/assess", json={"scenario": SHOPPING}).status_code == 400

    def test_invalid_profile_rejected(self, client):
        assert client.put("/profile", json={"age": "old"}).status_code == 400

    def test_profile_survives_service_restart(self, tmp_path):
        config = AppConfig(profile_path=tmp_path / "profile.json")
        with TestClient(create_app(config)) as client:
            client.put("/profile", json={"age": 72, "teacher": True})
        with TestClient(create_app(config)) as reborn:
            stored = reborn.get("/profile").json()["profile"]
            assert stored["age"] == 72 and stored["teacher"] is True


def test_internal_failure_is_opaque(client, monkeypatch):
    import riskgate.service as service_module

    def boom(*args, **kwargs):
        raise RuntimeError("secret stack detail")

    monkeypatch.setattr(service_module.serialize, "assessment_payload", boom)
    response = client.post("/assess", json={"scenario": SHOPPING, "profile": EVERYMAN})
    assert response.status_code == 500
    assert response.json() == {"error": {"message": "internal error", "location": None}}
    assert "secret" not in response.text


def test_startup_rejects_invalid_matrix(tmp_path):
    bad = tmp_path / "broken.txt"
    bad.write_text(
        "F I II III IV V VI\n" + "\n".join(
            f"{f} G G G G G G" for f in range(3, 16)
        ).replace("10 G", "10 R", 1).replace("11 G", "11 G", 1) + "\n"
    )
    # column falls back from red to green at F=11: monotonicity error
    config = AppConfig(matrix_path=bad, profile_path=tmp_path / "p.json")
    with pytest.raises(ValidationError):
        create_app(config)
