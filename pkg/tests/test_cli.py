import json

from sixvertexlab.cli import main


def read(path):
    with open(path) as fh:
        return fh.read()


def test_constants_run(tmp_path, capsys):
    rc = main(["constants", "--out", str(tmp_path)])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "ok"
    csv_text = read(tmp_path / "constants" / "constants_checks.csv")
    assert csv_text.splitlines()[0].startswith("check,value,reference")
    sidecar = json.loads(read(tmp_path / "constants" / "sidecar.json"))
    assert sidecar["config"]["q"] == 0.5
    assert "wall_clock_s" in sidecar and "versions" in sidecar
    assert sidecar["n_failures"] == 0


def test_invalid_params_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"u": 1.2}))
    rc = main(["constants", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == 2
    out = json.loads(capsys.readouterr().out)
    assert "q^(-1/2)" in out["validation_error"]


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 1, "out": "ignored"}))
    rc = main(["constants", "--config", str(cfg), "--seed", "7",
               "--out", str(tmp_path)])
    assert rc == 0
    sidecar = json.loads(read(tmp_path / "constants" / "sidecar.json"))
    assert sidecar["config"]["seed"] == 7
    assert sidecar["config"]["out"] == str(tmp_path)


def test_failure_exit_1(tmp_path, capsys):
    # an unattainable tolerance must fail loudly with a machine-readable
    # report naming the violated invariant
    rc = main(["identities", "--tol", "0", "--out", str(tmp_path)])
    assert rc == 1
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "failed"
    assert any("cauchy" in f["invariant"] for f in out["failures"])


def test_sample_reproducibility(tmp_path, capsys):
    rc = main(["sample", "--seed", "5", "--threads", "1",
               "--out", str(tmp_path / "a")])
    assert rc == 0
    rc = main(["sample", "--seed", "5", "--threads", "4",
               "--out", str(tmp_path / "b")])
    assert rc == 0
    for name in ("samples.csv", "top_row_pmf.csv"):
        assert read(tmp_path / "a" / "sample" / name) == \
            read(tmp_path / "b" / "sample" / name)
    grids = json.loads(read(tmp_path / "a" / "sample" /
                            "configuration_grids.json"))
    assert grids and grids[0]["vertices"]
