import csv
import json

import pytest

from transmission_bie.cli import build_parser, compare, main, resolve_config, run_table, table_header
from transmission_bie.published import TABLES


def _args(argv):
    return build_parser().parse_args(argv)


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"geometry": "kite", "omega": 16, "eps2": 4, "kappa1": "10+2j"}))
    cfg = resolve_config(_args(["solve", "--config", str(path), "--omega", "8"]))
    assert cfg.geometry == "kite" and cfg.omega == 8 and cfg.eps2 == 4 and cfg.kappa1 == 10 + 2j


def test_nu_selects_polarization():
    assert resolve_config(_args(["solve", "--eps2", "4", "--nu", "0.25"])).polarization == "H"
    assert resolve_config(_args(["solve", "--nu", "1"])).polarization == "E"
    with pytest.raises(ValueError):
        resolve_config(_args(["solve", "--eps2", "4", "--nu", "0.3"]))
    with pytest.raises(ValueError):
        resolve_config(_args(["solve", "--eps2", "4", "--nu", "0.25", "--polarization", "E"]))


def test_unknowns_flag():
    assert resolve_config(_args(["solve", "--unknowns", "256"])).n == 64
    with pytest.raises(ValueError):
        resolve_config(_args(["solve", "--unknowns", "130"]))


def test_bad_config_field(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"radius": 2}))
    with pytest.raises(SystemExit):
        main(["solve", "--config", str(path)])


def test_solve_prints_report(tmp_path, capsys):
    out = tmp_path / "ff.csv"
    code = main(["solve", "--geometry", "circle", "--formulation", "sk15", "--omega", "8", "--eps2", "2",
                 "--unknowns", "128", "--tol", "1e-8", "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    for key in ("geometry", "formulation", "omega", "eps2", "nu", "kappa1", "unknowns", "iterations",
                "far_field_error", "wall_time"):
        assert key in text
    assert "iterations: 21" in text
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["angle", "re", "im", "abs"] and len(rows) == 721


def test_solve_is_deterministic(tmp_path):
    argv = ["solve", "--geometry", "kite", "--formulation", "skr-ps", "--n", "32", "--no-reference"]
    main(argv + ["--out", str(tmp_path / "a.csv")])
    main(argv + ["--out", str(tmp_path / "b.csv")])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_kite_example_iterations(capsys):
    # 256 unknowns, the published kite row
    assert main(["solve", "--geometry", "kite", "--formulation", "sk15", "--omega", "8", "--eps2", "2",
                 "--unknowns", "256", "--tol", "1e-8", "--no-reference"]) == 0
    assert "iterations: 45" in capsys.readouterr().out


def test_zero_contrast_run(capsys):
    assert main(["solve", "--geometry", "circle", "--eps2", "1", "--n", "32", "--tol", "1e-8"]) == 0
    out = capsys.readouterr().out
    err = float(out.split("far_field_error:")[1].split()[0])
    its = int(out.split("iterations:")[1].split()[0])
    assert err <= 1e-8 and its <= 2


def test_unconverged_exits_nonzero(capsys):
    code = main(["solve", "--geometry", "kite", "--n", "32", "--maxiter", "3", "--no-reference"])
    assert code == 2
    err = capsys.readouterr().err
    assert "did not converge" in err and "iteration    3" in err


def test_bad_flags():
    with pytest.raises(SystemExit):
        main(["solve", "--geometry", "square"])
    with pytest.raises(SystemExit):
        main(["solve", "--directions", "100"])
    with pytest.raises(SystemExit):
        main(["table", "2"])


def test_compare_rule():
    assert compare(45, 1e-7, (45, 4.5e-8))
    assert compare(25, None, (22, None))
    assert not compare(24, 5e-9, (16, 6.3e-8))
    assert not compare(45, 1e-3, (45, 4.5e-8))


def test_table1_layout():
    header, names = table_header(1)
    assert names == ("sk15", "fk16", "skr-lp", "skr-ps")
    assert len(TABLES[1]) == 8
    assert [r.values["skr-lp"][0] for r in TABLES[1] if r.geometry == "circle"] == [16, 16]
    assert "sk14_iters" in table_header(6)[0]


def test_table3_run(tmp_path, capsys):
    out = tmp_path / "t3.csv"
    assert main(["table", "3", "--max-omega", "32", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 2
    assert [int(r["skr-lp_pub_iters"]) for r in rows] == [31, 40]
    observed = [int(r["skr-lp_iters"]) for r in rows]
    assert all(abs(o - p) <= 3 for o, p in zip(observed, (31, 40)))
    assert all(r[f"{f}_pass"] == "True" for r in rows for f in ("sk15", "fk16", "skr-lp", "skr-ps"))
    archive = json.loads(out.with_suffix(".json").read_text())
    assert len(archive["runs"]) == 8 and archive["runs"][0]["direction"] == [0.0, -1.0]


def test_table6_fk_vs_lp():
    header, rows, _ = run_table(6, max_omega=16, formulations=("fk16", "skr-lp"))
    assert len(rows) == 2
    fk = [rows[i]["fk16_iters"] for i in range(2)]
    lp = [rows[i]["skr-lp_iters"] for i in range(2)]
    for o, p in zip(fk + lp, (210, 283, 65, 97)):
        assert abs(o - p) <= 0.2 * p
    assert all(f > 2.5 * l for f, l in zip(fk, lp))


def test_properties_jsonl(tmp_path):
    out = tmp_path / "p.jsonl"
    assert main(["properties", "--suite", "spectral", "--suite", "specfun", "--out", str(out)]) == 0
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(records) == 4
    assert set(records[0]) == {"module", "quantity", "observed", "required", "passed"}


def test_properties_fault_injection(tmp_path, capsys):
    code = main(["properties", "--suite", "calderon", "--perturb-diagonal", "1e-3", "--out", str(tmp_path / "p")])
    assert code == 1
    assert "FAIL operators: calderon" in capsys.readouterr().err


def test_properties_reject_real_kappa(capsys):
    assert main(["properties", "--suite", "positivity", "--kappa1", "2"]) == 2
    assert "strictly positive" in capsys.readouterr().err
