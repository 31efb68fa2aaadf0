import json

import numpy as np
import pytest

from hardyid.cli import main


def read_rows(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


def run_twice_identical(args, out_path):
    code1 = main(args)
    first = out_path.read_bytes()
    code2 = main(args)
    assert first == out_path.read_bytes()
    assert code1 == code2
    return code1


def test_mu_h2_equispaced_flat_and_closed_form(tmp_path):
    out = tmp_path / "mu.csv"
    code = run_twice_identical(
        ["mu-h2", "--m", "8", "--r", "0.5", "--scheme", "equi", "--out", str(out)], out
    )
    assert code == 0
    header, rows = read_rows(out)
    assert header[:8] == ["experiment", "point_scheme", "m", "n", "r", "seed", "mu", "mu_closed_form"]
    assert len(rows) == 8
    mus = [float(r["mu"]) for r in rows]
    assert max(mus) - min(mus) <= 1e-8
    for r in rows:
        assert r["mu_closed_form"] == r["mu"]
        assert r["seed"] == ""  # seeds only accompany random schemes


def test_mu_h2_random_scheme_columns(tmp_path):
    out = tmp_path / "mu.csv"
    code = main(["mu-h2", "--m", "8", "--r", "0.5", "--scheme", "both", "--seed", "4", "--out", str(out)])
    assert code == 0
    _, rows = read_rows(out)
    schemes = {r["point_scheme"] for r in rows}
    assert schemes == {"equi", "random"}
    for r in rows:
        if r["point_scheme"] == "random":
            assert r["mu_closed_form"] == ""
            assert r["seed"] == "4"
    random_mu = {int(r["n"]): float(r["mu"]) for r in rows if r["point_scheme"] == "random"}
    assert random_mu[8] >= random_mu[1]


def test_mu_h2_near_origin_single_point(tmp_path):
    out = tmp_path / "mu.csv"
    code = main(["mu-h2", "--m", "1", "--r", "1e-8", "--scheme", "equi", "--n", "1", "--out", str(out)])
    assert code == 0
    _, rows = read_rows(out)
    assert float(rows[0]["mu"]) == pytest.approx(1.0, abs=1e-10)


def test_mu_h2_ill_conditioned_rows_annotated(tmp_path):
    out = tmp_path / "mu.csv"
    code = main(["mu-h2", "--m", "48", "--r", "0.5", "--scheme", "random", "--seed", "1",
                 "--n", "2:3", "--out", str(out)])
    assert code == 3
    _, rows = read_rows(out)
    assert all(r["status"] == "ill-conditioned" and r["mu"] == "" for r in rows)


def test_identify_bounds_and_exactness(tmp_path):
    out = tmp_path / "id.csv"
    code = run_twice_identical(
        ["identify", "--m", "8", "--r", "0.5", "--seed", "2", "--out", str(out)], out
    )
    assert code == 0
    _, rows = read_rows(out)
    for r in rows:
        assert float(r["h2_error"]) <= float(r["bound"]) * (1 + 1e-4) + 1e-12
        assert r["status"] == "ok"


def test_mu_da_desk_values(tmp_path):
    out = tmp_path / "da.csv"
    code = run_twice_identical(
        ["mu-da", "--m", "2", "--n", "1:2", "--scheme", "equi", "--zeta0-angle", str(np.pi / 2),
         "--out", str(out)], out
    )
    assert code == 0
    _, rows = read_rows(out)
    by_n = {int(r["n"]): r for r in rows}
    assert float(by_n[1]["mu"]) == pytest.approx(2.0, abs=1e-6)
    assert float(by_n[2]["mu"]) == pytest.approx(1 + np.sqrt(2), abs=1e-6)
    assert all(float(r["gap"]) <= 1e-8 for r in rows)
    assert float(by_n[2]["zeta0_re"]) == pytest.approx(0.0, abs=1e-15)
    assert float(by_n[2]["zeta0_im"]) == pytest.approx(1.0, abs=1e-15)


def test_estimate_rows_respect_bounds(tmp_path):
    out = tmp_path / "est.csv"
    code = run_twice_identical(["estimate", "--m", "8", "--seed", "3", "--out", str(out)], out)
    assert code == 0
    _, rows = read_rows(out)
    assert len(rows) == 16  # both schemes, n = 1..8 each
    for r in rows:
        assert float(r["est_error"]) <= float(r["bound"]) + 1e-9
        assert float(r["mu"]) >= 2.0 - 1e-6


def test_kappa_table(tmp_path):
    out = tmp_path / "kappa.csv"
    code = run_twice_identical(["kappa", "--m", "8", "--out", str(out)], out)
    assert code == 0
    _, rows = read_rows(out)
    by_n = {int(r["n"]): r for r in rows}
    assert float(by_n[1]["kappa"]) <= 1e-6
    assert by_n[1]["ratio"] == ""
    assert float(by_n[8]["reference"]) == pytest.approx(np.log(8), abs=0)
    kappas = [float(by_n[n]["kappa"]) for n in range(1, 9)]
    assert all(b >= a - 1e-9 for a, b in zip(kappas, kappas[1:]))
    assert all(k >= 0 for k in kappas)


def test_oracle_report(tmp_path):
    out = tmp_path / "oracle.json"
    code = run_twice_identical(["oracle", "--seed", "1", "--instances", "5", "--out", str(out)], out)
    assert code == 0
    report = json.loads(out.read_text())
    assert report["all_pass"] is True
    names = {c["name"] for c in report["checks"]}
    assert "empty_feasible_set_error" in names
    assert "trivial_kernel_mu_zero" in names
    assert "zero_data_radius_mu_eps" in names
    assert all(c["pass"] for c in report["checks"])


def test_config_file_merging_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"m": 4, "r": 0.5, "scheme": "equi", "n": "1:2"}))
    out1 = tmp_path / "a.csv"
    code = main(["mu-h2", "--config", str(cfg), "--out", str(out1)])
    assert code == 0
    _, rows = read_rows(out1)
    assert {r["m"] for r in rows} == {"4"}  # JSON overrode the default m=64
    out2 = tmp_path / "b.csv"
    code = main(["mu-h2", "--config", str(cfg), "--m", "6", "--out", str(out2)])
    assert code == 0
    _, rows = read_rows(out2)
    assert {r["m"] for r in rows} == {"6"}  # flag overrode the JSON value


def test_invalid_configs_exit_two(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert main(["mu-h2", "--m", "4", "--r", "1.5", "--out", str(out)]) == 2
    assert "--r" in capsys.readouterr().err
    assert main(["mu-h2", "--m", "4", "--n", "3:9", "--out", str(out)]) == 2
    assert "--n" in capsys.readouterr().err
    assert main(["mu-h2", "--m", "4"]) == 2
    assert "--out" in capsys.readouterr().err
    assert main(["kappa", "--m", "8", "--grid-size", "9", "--out", str(out)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"unknown-key": 1}))
    assert main(["mu-h2", "--config", str(bad), "--out", str(out)]) == 2


def test_mu_da_nonconvergence_exits_four(tmp_path):
    # Random points keep the constraint matrix irrational, so the feasibility
    # residual never cancels to exactly zero and 1e-30 stays unattainable.
    out = tmp_path / "da.csv"
    code = main(["mu-da", "--m", "4", "--n", "2:2", "--scheme", "random", "--seed", "1",
                 "--tol-feas", "1e-30", "--out", str(out)])
    assert code == 4
    _, rows = read_rows(out)
    assert rows[0]["status"] == "non-converged"
    assert rows[0]["mu"] == ""


def test_rows_sorted_deterministically(tmp_path):
    out = tmp_path / "mu.csv"
    main(["mu-h2", "--m", "4", "--scheme", "both", "--seed", "2", "--out", str(out)])
    _, rows = read_rows(out)
    keys = [(r["point_scheme"], int(r["n"])) for r in rows]
    assert keys == sorted(keys)
