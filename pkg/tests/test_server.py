import json
import threading
import urllib.error
import urllib.request

import pytest

from accex import reports, server
from conftest import data_text


@pytest.fixture(scope="module")
def api(worked_example):
    httpd = server.make_server(worked_example, port=0)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}"
    httpd.shutdown()
    httpd.server_close()


def get(base, path):
    with urllib.request.urlopen(base + path, timeout=10) as resp:
        return resp.status, json.loads(resp.read())


def post(base, path, doc):
    req = urllib.request.Request(
        base + path,
        data=json.dumps(doc).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req, timeout=10) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


class TestProfileEndpoints:
    def test_profile_matches_cli_payload(self, api, worked_example):
        status, doc = get(api, "/api/profile")
        assert status == 200
        assert doc == json.loads(
            json.dumps(reports.profile_payload(worked_example))
        )

    def test_ids_endpoint(self, api, worked_example):
        status, doc = get(api, "/api/ids")
        assert status == 200
        assert [r["id"] for r in doc["records"]] == [1, 2, 3, 4, 5]
        assert doc["records"][1]["caller"] == "func4"

    def test_unknown_route_404(self, api):
        with pytest.raises(urllib.error.HTTPError) as exc:
            urllib.request.urlopen(api + "/api/unknown", timeout=10)
        assert exc.value.code == 404

    def test_cors_preflight(self, api):
        req = urllib.request.Request(api + "/api/whatif", method="OPTIONS")
        with urllib.request.urlopen(req, timeout=10) as resp:
            assert resp.status == 204
            assert resp.headers["Access-Control-Allow-Origin"] == "*"


class TestWhatIfEndpoint:
    def test_worked_example_scenario(self, api):
        scenario = json.loads(data_text("worked_example_scenario.json"))
        status, doc = post(api, "/api/whatif", scenario)
        assert status == 200
        assert doc["edited_total_seconds"] == 2.64
        assert doc["base_total_seconds"] == 9.34

    def test_malformed_scenario_schema_error(self, api):
        status, doc = post(api, "/api/whatif", {"edits": "nope"})
        assert status == 400
        assert doc["error"] == "ScenarioError"
        assert "accex_scenario_version" in doc["message"]

    def test_edit_out_of_range(self, api):
        status, doc = post(api, "/api/whatif", {
            "accex_scenario_version": 1,
            "edits": [{"kind": "bin_range", "min": 1, "max": 99, "c": 0}],
        })
        assert status == 400
        assert doc["error"] == "IdOutOfRange"


class TestSweepEndpoint:
    def test_sweep(self, api):
        status, doc = post(api, "/api/sweep", {"target": "func5", "grid": [0, 0.5, 1]})
        assert status == 200
        assert [p["r"] for p in doc["points"]] == [0, 0.5, 1]

    def test_unknown_target(self, api):
        status, doc = post(api, "/api/sweep", {"target": "ghost"})
        assert status == 400
        assert doc["error"] == "UnknownTarget"


class TestStaticServing:
    def test_ui_dir_served_with_index(self, worked_example, tmp_path):
        (tmp_path / "index.html").write_text("<html><body>explorer</body></html>")
        httpd = server.make_server(worked_example, port=0, ui_dir=str(tmp_path))
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        base = f"http://127.0.0.1:{httpd.server_address[1]}"
        try:
            with urllib.request.urlopen(base + "/", timeout=10) as resp:
                assert b"explorer" in resp.read()
            with pytest.raises(urllib.error.HTTPError) as exc:
                urllib.request.urlopen(base + "/../secret", timeout=10)
            assert exc.value.code == 404
        finally:
            httpd.shutdown()
            httpd.server_close()
