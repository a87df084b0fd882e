import csv
import io
import math

import pytest

from wienerphase import cli
from wienerphase.bounds import prelog


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, list(csv.DictReader(io.StringIO(out.out))), out


def test_parse_grid():
    assert cli.parse_grid("0.1:0.5:0.1") == [0.1, 0.2, 0.3, 0.4]
    assert cli.parse_grid("0.25,0.5") == [0.25, 0.5]
    with pytest.raises(Exception):
        cli.parse_grid("0.1:0.5")


def test_prelog(capsys):
    code, rows, _ = run(capsys, "prelog", "--alpha", "0.25,0.4,0.6")
    assert code == 0
    assert [float(r["prelog_total"]) for r in rows] == [prelog(a) for a in (0.25, 0.4, 0.6)]
    assert list(rows[0]) == ["alpha", "prelog_total", "prelog_amplitude", "prelog_phase"]


def test_bounds_columns_and_bits(capsys):
    _, nats, _ = run(capsys, "bounds", "--snr", "1e6", "--alpha", "0.5")
    _, bits, _ = run(capsys, "bounds", "--snr", "1e6", "--alpha", "0.5", "--bits")
    for col in ("lam", "mu", "nu", "var_g", "rho", "zeta", "K"):
        assert col in nats[0]
    assert float(bits[0]["i_amp"]) == pytest.approx(float(nats[0]["i_amp"]) / math.log(2))
    assert nats[0]["status"] == "ok"


def test_bounds_skips_infeasible(capsys, caplog):
    code, rows, _ = run(capsys, "bounds", "--snr", "1", "--alpha", "0.5")
    assert code == 0 and rows[0]["status"] == "skipped" and rows[0]["reason"]
    assert "skipping" in caplog.text


def test_mc_and_out_file(capsys, tmp_path):
    path = tmp_path / "mc.csv"
    code = cli.main(["mc", "--gamma", "0.316227766016838", "--snr", "1000", "--samples", "512",
                     "--inner-steps", "16", "--chunk-size", "256", "--out", str(path)])
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    got = {r["quantity"]: r for r in rows}
    assert set(got) == {"amplitude_mi", "amplitude_bound", "phase_mi", "phase_bound", "cos_phi", "cos_phi_bound"}
    assert got["amplitude_mi"]["status"] == "ok"
    assert "wall_time" not in rows[0]


def test_config_file_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# test config\nalpha = 0.25\nbits = true\n")
    _, rows, _ = run(capsys, "prelog", "--config", str(cfg))
    assert float(rows[0]["alpha"]) == 0.25
    _, rows, _ = run(capsys, "prelog", "--config", str(cfg), "--alpha", "0.75")
    assert float(rows[0]["alpha"]) == 0.75


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    with pytest.raises(SystemExit):
        cli.main(["prelog", "--config", str(cfg)])


@pytest.mark.parametrize("argv", [["prelog", "--nope"], ["bounds", "--samples", "-3"], ["mc", "--workers", "0"], []])
def test_bad_arguments(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
