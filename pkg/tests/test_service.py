import pytest
from fastapi.testclient import TestClient

from cryoplan.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_scenarios_listed_stable(client):
    r1 = client.get("/scenarios")
    r2 = client.get("/scenarios")
    assert r1.status_code == 200
    assert r1.content == r2.content
    names = [s["name"] for s in r1.json()["scenarios"]]
    assert names == sorted(names)
    for expected in ("all_coax", "optical_coax_normal", "optical_coax_sc"):
        assert expected in names
    assert "properties" in r1.json()["override_schema"]


def test_new_scenario_file_appears_once(client, data, tmp_path):
    import shutil

    custom = tmp_path / "data"
    shutil.copytree(data.data_dir, custom)
    app_client = TestClient(create_app(str(custom)))
    before = [s["name"] for s in app_client.get("/scenarios").json()["scenarios"]]
    src = custom / "scenarios" / "all_coax.scenario"
    (custom / "scenarios" / "my_variant.scenario").write_text(
        src.read_text().replace("scenario: all_coax", "scenario: my_variant"))
    after = [s["name"] for s in app_client.get("/scenarios").json()["scenarios"]]
    assert after.count("my_variant") == 1
    assert set(after) - set(before) == {"my_variant"}


def test_solve_bundled_scenario_table_like(client):
    r = client.post("/solve", json={"scenario": "optical_coax_sc"})
    assert r.status_code == 200
    body = r.json()
    stages = body["stages"]
    assert stages["Flange50K"]["temperature_k"] == pytest.approx(35.349, rel=0.10)
    assert stages["Flange4K"]["temperature_k"] == pytest.approx(2.988, rel=0.10)
    assert stages["Still"]["temperature_k"] == 1.4
    assert stages["CP"]["temperature_k"] == pytest.approx(0.121412, rel=0.10)
    assert stages["MXC"]["temperature_k"] == pytest.approx(0.019143, rel=0.10)
    assert body["scenario_hash"]
    assert body["machine_report"].startswith("# cryoplan report")


def test_solve_identical_requests_identical_bodies(client):
    req = {"scenario": "all_coax", "overrides": {"duty_cycle": 0.25}}
    r1 = client.post("/solve", json=req)
    r2 = client.post("/solve", json=req)
    assert r1.status_code == r2.status_code == 200
    assert r1.content == r2.content


def test_solve_photodiode_stage_override(client):
    r = client.post("/solve", json={
        "scenario": "optical_coax_sc",
        "overrides": {"photodiode_stage": "Flange4K"},
    })
    assert r.status_code == 200
    body = r.json()
    assert body["stages"]["Flange4K"]["temperature_k"] == pytest.approx(3.012, rel=0.05)
    assert body["effective_parameters"]["photodiode_stage"] == "Flange4K"


def test_solve_zero_duty_kills_optical_heat(client):
    r = client.post("/solve", json={
        "scenario": "optical_coax_sc",
        "overrides": {"duty_cycle": 0.0},
    })
    assert r.status_code == 200
    assert r.json()["stages"]["Still"]["optical_w"] == 0.0


def test_solve_inline_scenario_text(client, data):
    path = f"{data.data_dir}/scenarios/optical_coax_sc.scenario"
    text = open(path).read()
    r = client.post("/solve", json={"scenario_text": text})
    named = client.post("/solve", json={"scenario": "optical_coax_sc"})
    assert r.status_code == 200
    assert r.json()["scenario_hash"] == named.json()["scenario_hash"]
    assert r.json()["stages"] == named.json()["stages"]


def test_solve_validation_400_with_field(client):
    r = client.post("/solve", json={"scenario": "all_coax",
                                    "overrides": {"duty_cycle": 1.5}})
    assert r.status_code == 400
    assert "duty_cycle" in (r.json().get("field") or r.json()["detail"])


def test_solve_rejects_bad_document_with_field_parity(client, data):
    text = open(f"{data.data_dir}/scenarios/optical_coax_sc.scenario").read()
    broken = text.replace("duty: 33 %", "duty: 150 %")
    r = client.post("/solve", json={"scenario_text": broken})
    assert r.status_code == 400
    assert "duty_cycle" in (r.json().get("field") or "") or "duty" in r.json()["detail"]
    # parity with direct loading
    from cryoplan.errors import ValidationError
    with pytest.raises(ValidationError, match="duty_cycle"):
        data.parse_scenario(broken)


def test_solve_both_sources_rejected(client):
    r = client.post("/solve", json={"scenario": "all_coax", "scenario_text": "x"})
    assert r.status_code == 400


def test_solve_capacity_exceeded_422(client):
    r = client.post("/solve", json={"scenario": "all_coax",
                                    "overrides": {"control_count": 200000}})
    assert r.status_code == 422
    assert "exceeds capacity" in r.json()["detail"]


def test_noise_infer_named_chain(client):
    r = client.post("/noise/infer", json={
        "scenario": "experiment_ld400", "chain_name": "photodiode_drive",
        "target_temperature_k": 0.1,
    })
    assert r.status_code == 200
    body = r.json()
    assert 17.0 <= body["inferred_source_k"] <= 31.0
    assert len(body["assumption_flags"]) == 2


def test_noise_infer_inline_identity(client):
    r = client.post("/noise/infer", json={
        "elements": [{"label": "open", "db": 0.0, "temperature_k": 4.0}],
        "frequency_ghz": 6.0,
        "target_temperature_k": 0.1,
    })
    assert r.status_code == 200
    assert r.json()["inferred_source_k"] == pytest.approx(0.1, rel=1e-9)


def test_noise_infer_below_floor_409(client):
    r = client.post("/noise/infer", json={
        "scenario": "experiment_ld400", "chain_name": "photodiode_drive",
        "target_temperature_k": 0.02,
    })
    assert r.status_code == 409
    body = r.json()
    assert body["floor_temperature_k"] == pytest.approx(0.036, abs=0.002)


def test_noise_infer_unknown_chain_400(client):
    r = client.post("/noise/infer", json={
        "scenario": "experiment_ld400", "chain_name": "nope",
        "target_temperature_k": 0.1,
    })
    assert r.status_code == 400
