import json

import pytest

from normlab.automorphic import PeriodicDistribution
from normlab.cli import main


def _report(path):
    with open(path) as fh:
        return json.load(fh)


def test_decompose_passes(tmp_path):
    out = tmp_path / "r.json"
    assert main(["decompose", "--n", "500", "--seed", "3",
                 "--out", str(out)]) == 0
    rep = _report(out)
    assert rep["ok"] and all(c["ok"] for c in rep["checks"])


def test_measure_check(tmp_path):
    out = tmp_path / "r.json"
    assert main(["measure-check", "--n", "40", "--out", str(out)]) == 0


def test_intertwine_reports_frozen_value(tmp_path):
    out = tmp_path / "r.json"
    assert main(["intertwine", "--u", "0.5", "--m", "0",
                 "--out", str(out)]) == 0
    rep = _report(out)
    assert rep["c"][0] == pytest.approx(5.2441, abs=1e-4)


def test_verify_whittaker_example(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify-whittaker", "--u0", "0", "--u1", "1",
                 "--model", "finite:b1=1", "--eps", "1",
                 "--out", str(out)]) == 0
    assert _report(out)["relError"] < 1e-6


def test_verify_whittaker_eps_zero_barrier(capsys):
    assert main(["verify-whittaker", "--eps", "0"]) == 2
    assert "eps" in capsys.readouterr().err


def test_invalid_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["decompose", "--does-not-exist", "1"])
    assert exc.value.code == 2


def test_invalid_profile_exits_2():
    assert main(["region-norm", "--profile", "bogus"]) == 2


def test_report_determinism(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["gnorm", "--u", "0.3", "--out", str(out)]) == 0
        rep = _report(out)
        rep.pop("timestamp")
        outs.append(json.dumps(rep, sort_keys=True))
    assert outs[0] == outs[1]


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"u": 0.5, "m": 1}))
    out = tmp_path / "r.json"
    assert main(["intertwine", "--config", str(cfg), "--m", "0",
                 "--out", str(out)]) == 0
    rep = _report(out)
    assert rep["u"] == 0.5 and rep["m"] == 0  # flag beat the file

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"unknown_key": 1}))
    assert main(["intertwine", "--config", str(bad)]) == 2


def test_csv_mirror(tmp_path):
    out = tmp_path / "r.json"
    csv_path = tmp_path / "r.csv"
    assert main(["comp-norm-scan", "--m-max", "4", "--out", str(out),
                 "--csv", str(csv_path)]) == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0].startswith("m,")
    assert len(lines) == len(_report(out)["rows"]) + 1


def test_gen_coeffs_roundtrip(tmp_path):
    path = tmp_path / "tau.json"
    assert main(["gen-coeffs", "--model", "ramanujan-tau:N=20",
                 "--out-coeffs", str(path)]) == 0
    dist = PeriodicDistribution.from_file(path)
    assert dist.coeffs[2] == -24
    assert main(["gen-coeffs", "--model", "ramanujan-tau:N=20"]) == 2


def test_regress_against_frozen_tables():
    assert main(["regress"]) == 0
