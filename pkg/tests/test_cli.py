from __future__ import annotations

import json

import pytest

from hcflink.cli import (
    EXIT_CONFIG,
    EXIT_INFEASIBLE,
    EXIT_IO,
    EXIT_OK,
    main,
    run_command,
)
from hcflink.config import parse_config


def _run_json(capsys, argv):
    assert main(argv) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_rbs_defaults_reproduce_reported_values(capsys):
    doc = _run_json(capsys, ["rbs"])
    by_loss = {row["loss_db_per_km"]: row for row in doc["rows"]}
    assert by_loss[0.05]["gsnr_rbs_db"] == pytest.approx(28.48, abs=0.02)
    assert by_loss[0.07]["gsnr_rbs_db"] == pytest.approx(25.90, abs=0.02)
    assert by_loss[0.05]["enhancement"] == pytest.approx(2.1498, abs=1e-4)
    assert doc["config"]["fiber"]["backscatter_db_per_km"] == -70.0


def test_powerfeed_defaults(capsys):
    doc = _run_json(capsys, ["powerfeed"])
    assert doc["cable_w"] == 6600.0
    assert doc["repeaters_w"] == 5760.0
    assert doc["total_w"] == 12360.0
    assert doc["within_limit"] is True
    assert doc["n_repeaters"] == 32


def test_latency_defaults(capsys):
    doc = _run_json(capsys, ["latency"])
    assert doc["hollow_core_ms"] == pytest.approx(22.0, abs=0.1)
    assert doc["solid_core_ms"] == pytest.approx(32.3, abs=0.5)


def test_budget_reference_point(capsys):
    doc = _run_json(capsys, ["budget"])
    assert doc["budget"]["gsnr_db"] == pytest.approx(16.286, abs=1e-3)
    assert doc["cable_throughput_tbps"] == pytest.approx(1000.0, rel=1e-5)
    assert doc["config"]["transceiver"]["gap_db"] == pytest.approx(4.64, abs=0.01)
    assert doc["n_channels"] == 66
    assert doc["budget"]["snr_rbs_db"] is None


def test_budget_with_rbs(capsys):
    doc = _run_json(capsys, ["budget", "--include-rbs", "true"])
    assert doc["budget"]["gsnr_db"] == pytest.approx(15.951, abs=1e-3)
    assert doc["budget"]["snr_rbs_db"] == pytest.approx(27.25, abs=0.01)


def test_budget_with_config_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[fiber]\nloss_db_per_km = 0.05\n")
    doc = _run_json(capsys, ["budget", "--config", str(cfg)])
    assert doc["config"]["fiber"]["loss_db_per_km"] == 0.05
    assert doc["operating_point"]["loss_db_per_km"] == 0.05


def test_budget_with_tabulated_transceiver(capsys, tmp_path):
    table = tmp_path / "trx.csv"
    table.write_text("10,400\n20,700\n")
    doc = _run_json(capsys, ["budget", "--trx-table", str(table)])
    assert doc["config"]["transceiver"]["variant"] == "tabulated"
    # GSNR 16.286 dB interpolates between the two rows
    assert doc["channel_net_rate_gbps"] == pytest.approx(400 + 300 * 0.62863, abs=0.5)


def test_contour_csv_to_file(tmp_path):
    out = tmp_path / "grid.csv"
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[sweep]\nloss_steps = 5\npower_steps = 4\n")
    assert main(["contour", "--config", str(cfg), "--output", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "loss_db_per_km,edfa_power_dbm,gsnr_db,throughput_tbps"
    assert len(body) == 1 + 5 * 4
    assert any(l.startswith("# transceiver.gap_db = ") for l in lines)


def test_contour_byte_identical_across_runs(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[sweep]\nloss_steps = 4\npower_steps = 3\n")
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert main(["contour", "--config", str(cfg), "--output", str(first)]) == EXIT_OK
    assert main(["contour", "--config", str(cfg), "--output", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_contour_svg_matches_extractor(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[sweep]\nloss_steps = 21\npower_steps = 23\n")
    doc = _run_json(capsys, [
        "contour", "--config", str(cfg), "--format", "json", "--levels", "1000",
    ])
    n_polylines = sum(len(c["polylines"]) for c in doc["contours"])
    out = tmp_path / "plot.svg"
    assert main([
        "contour", "--config", str(cfg), "--format", "svg", "--levels", "1000",
        "--output", str(out),
    ]) == EXIT_OK
    assert out.read_text().count("<polyline") == n_polylines


def test_span_curve_csv(capsys):
    assert main(["span-curve", "--span-min", "190", "--span-max", "210",
                 "--span-points", "3"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "span_km,required_edfa_dbm,feasible"
    assert len(body) >= 2


def test_exit_code_config_error(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("fiber.unknown_knob = 1\n")
    assert main(["budget", "--config", str(cfg)]) == EXIT_CONFIG
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["code"] == "config"
    assert "unknown_knob" in err["error"]["message"]


def test_exit_code_missing_config(capsys, tmp_path):
    assert main(["budget", "--config", str(tmp_path / "absent.cfg")]) == EXIT_CONFIG


def test_exit_code_infeasible(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("transceiver.calibration_target_tbps = 1e9\n")
    assert main(["budget", "--config", str(cfg)]) == EXIT_INFEASIBLE
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["code"] == "infeasible"


def test_exit_code_io_error(capsys, tmp_path):
    out = tmp_path / "no" / "such" / "dir" / "x.json"
    assert main(["latency", "--output", str(out)]) == EXIT_IO
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["code"] == "io"


def test_exit_code_missing_trx_table(capsys, tmp_path):
    assert main(["budget", "--trx-table", str(tmp_path / "absent.csv")]) == EXIT_IO


def test_run_command_rejects_unknown_command():
    cfg = parse_config("")
    with pytest.raises(ValueError):
        run_command("optimize", cfg)


def test_run_command_format_guard():
    cfg = parse_config("")
    with pytest.raises(ValueError, match="format"):
        run_command("latency", cfg, fmt="csv")
