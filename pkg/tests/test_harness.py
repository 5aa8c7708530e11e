import json

import pytest

from semiquant.cli import EXIT_OK, EXIT_USAGE, run_cli
from semiquant.harness import (
    ComparisonRow,
    RunConfig,
    compare,
    count_records,
    critical_records,
    emit_plotdata,
    plotdata_series,
    render_comparison,
    render_series,
    render_spectrum,
    spectrum_records,
    write_atomic,
)
from semiquant.model import Potential, ReportedEnergy


def test_comparison_row_recomputes_discrepancy():
    pot = Potential.logarithmic()
    row = ComparisonRow(
        n=2, ell=1,
        e_schr=ReportedEnergy.from_natural(pot, 1.29457),
        e_oq_shifted=ReportedEnergy.from_natural(pot, 1.29659),
    )
    assert row.discrepancy == pytest.approx(0.00202, abs=1e-10)


def test_compare_log_matches_reference_row():
    res = compare(RunConfig(potential="log", n_max=2))
    by_key = {(r.n, r.ell): r for r in res.rows}
    row = by_key[(2, 1)]
    assert row.e_schr.value == pytest.approx(1.29457, abs=5e-5)
    assert row.e_oq_shifted.value == pytest.approx(1.29659, abs=5e-6)
    assert row.discrepancy == pytest.approx(0.00202, abs=1e-4)
    assert res.metadata["unpaired"] == []


def test_compare_coulomb_shows_exact_degeneracy():
    res = compare(RunConfig(potential="coulomb", n_max=2))
    assert len(res.rows) == 3
    for r in res.rows:
        expected = -1.0 / r.n**2
        assert r.e_schr.value == pytest.approx(expected, abs=1e-8)
        assert r.e_oq_shifted.value == pytest.approx(expected, abs=1e-8)
        assert r.discrepancy <= 1e-8


def test_compare_yukawa_matches_reference_row():
    res = compare(RunConfig(potential="yukawa", lam=100.0, n_max=1))
    row = res.rows[0]
    assert row.e_schr.value == pytest.approx(-0.980149, abs=1e-5)
    assert row.e_oq_shifted.value == pytest.approx(-0.980137, abs=1e-5)


def test_render_comparison_csv_schema_and_precision():
    pot = Potential.logarithmic()
    rows = [
        ComparisonRow(2, 1, ReportedEnergy.from_natural(pot, 1.2945678901),
                      ReportedEnergy.from_natural(pot, 1.2965912345)),
    ]
    text = render_comparison(rows, "csv", {})
    lines = text.strip().split("\n")
    assert lines[0] == "n,l,E_schr,E_oq_shifted,discrepancy"
    fields = lines[1].split(",")
    assert fields[:2] == ["2", "1"]
    assert fields[2] == "1.29457"  # six significant digits
    assert fields[3] == "1.29659"


def test_render_rejects_empty_rows():
    with pytest.raises(ValueError):
        render_comparison([], "csv", {})
    with pytest.raises(ValueError):
        render_spectrum([], "csv", {})


def test_json_round_trip_is_idempotent():
    res = compare(RunConfig(potential="log", n_max=1, fmt="json"))
    text = render_comparison(res.rows, "json", res.metadata)
    parsed = json.loads(text)
    again = json.dumps(parsed, indent=2, sort_keys=True) + "\n"
    assert again == text


def test_deterministic_output(tmp_path):
    cfg = RunConfig(potential="log", n_max=2)
    res1 = compare(cfg)
    res2 = compare(cfg)
    a = render_comparison(res1.rows, "csv", res1.metadata)
    b = render_comparison(res2.rows, "csv", res2.metadata)
    assert a == b
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_atomic(str(p1), a)
    write_atomic(str(p2), b)
    assert p1.read_bytes() == p2.read_bytes()


def test_write_atomic_leaves_no_partial_file(tmp_path):
    target = tmp_path / "missing_dir" / "out.csv"
    with pytest.raises(OSError):
        write_atomic(str(target), "data")
    assert not target.exists()


def test_spectrum_records_log_count():
    cfg = RunConfig(potential="log", method="schrodinger", n_max=2)
    recs = spectrum_records(cfg)
    assert [(n, ell) for n, ell, _ in recs] == [(1, 0), (2, 1), (2, 0)]
    cfg = RunConfig(potential="log", method="oq", policy="integer", n_max=2)
    recs = spectrum_records(cfg)
    assert len(recs) == 2 + 3


def test_count_records_coulomb_integer():
    cfg = RunConfig(potential="coulomb", policy="integer", n_max=3)
    assert count_records(cfg) == [(1, 2), (2, 3), (3, 4)]


def test_critical_records():
    cfg = RunConfig(potential="yukawa", lam=100.0)
    recs = dict(critical_records(cfg))
    assert recs["nu_star"] == pytest.approx(8.57764, abs=1e-4)
    assert recs["nr_star"] == pytest.approx(11.28379, abs=1e-4)
    assert recs["nu_star_star"] == pytest.approx(9.16494, abs=1e-4)
    with pytest.raises(ValueError):
        critical_records(RunConfig(potential="log"))


def test_plotdata_ueff_series(tmp_path):
    cfg = RunConfig(potential="yukawa", lam=10.0, out=str(tmp_path))
    series = plotdata_series(cfg)
    names = [s[0] for s in series]
    assert len(names) == 3 and all(n.startswith("ueff") for n in names)
    paths = emit_plotdata(series, str(tmp_path))
    assert len(paths) == 3
    text = open(paths[0]).read().splitlines()
    assert text[0].startswith("# ueff lambda=10")
    assert text[1] == "x,y"
    assert len(text) == 2 + 801


def test_plotdata_spectrum_series():
    cfg = RunConfig(potential="log", n_max=2)
    names = {s[0] for s in plotdata_series(cfg)}
    assert "spectrum schrodinger" in names
    assert "spectrum oq-integer" in names
    assert "spectrum circular-limit" in names
    assert "spectrum radial-limit" in names


def test_render_series_two_columns():
    import numpy as np

    text = render_series("ueff lambda=10 ptheta=2.0", np.array([1.0]), np.array([2.0]))
    assert text.splitlines() == ["# ueff lambda=10 ptheta=2.0", "x,y", "1,2"]


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(potential="yukawa")  # missing lambda
    with pytest.raises(ValueError):
        RunConfig(potential="log", lam=3.0)
    with pytest.raises(ValueError):
        RunConfig(method="variational")
    with pytest.raises(ValueError):
        RunConfig(n_max=0)
    with pytest.raises(ValueError):
        RunConfig(panels=15)


# -- CLI ----------------------------------------------------------------------

def test_cli_spectrum_log_csv(capsys):
    code = run_cli(["spectrum", "--potential", "log", "--method", "schrodinger", "--nmax", "2"])
    assert code == EXIT_OK
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "n,l,E"
    assert len(out) == 1 + 3


def test_cli_spectrum_log_full_table_row_count(capsys):
    code = run_cli(["spectrum", "--potential", "log", "--method", "schrodinger",
                    "--nmax", "6", "--format", "csv"])
    assert code == EXIT_OK
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1 + 21  # header plus one row per state


def test_cli_critical_json(capsys):
    code = run_cli(["critical", "--potential", "yukawa", "--lambda", "100", "--format", "json"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["rows"]["nu_star"] == pytest.approx(8.57764, abs=1e-4)


def test_cli_count(capsys):
    code = run_cli(["count", "--potential", "coulomb", "--nmax", "3", "--policy", "integer"])
    assert code == EXIT_OK
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ["n,count", "1,2", "2,3", "3,4"]


def test_cli_compare_writes_file(tmp_path, capsys):
    out = tmp_path / "table.csv"
    code = run_cli(["compare", "--potential", "log", "--nmax", "1", "-o", str(out)])
    assert code == EXIT_OK
    assert out.read_text().startswith("n,l,E_schr")


def test_cli_usage_errors(capsys):
    assert run_cli(["critical", "--potential", "log"]) == EXIT_USAGE
    assert run_cli(["spectrum", "--potential", "yukawa", "--nmax", "1"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as err:
        run_cli(["spectrum", "--potential", "squarewell"])
    assert err.value.code == EXIT_USAGE


def test_cli_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("potential = coulomb\nnmax = 3  # comment\npolicy = integer\n")
    code = run_cli(["count", "--config", str(cfg), "--nmax", "2"])
    assert code == EXIT_OK
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ["n,count", "1,2", "2,3"]  # flag nmax=2 wins over config 3


def test_cli_rejects_bad_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("no_such_key = 1\n")
    assert run_cli(["count", "--config", str(cfg), "--nmax", "2"]) == EXIT_USAGE
