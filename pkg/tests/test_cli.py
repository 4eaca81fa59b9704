import json
from pathlib import Path

import pytest

from enriqueslab.cli import build_parser, main
from enriqueslab.typing import SCHEMA


@pytest.mark.parametrize(
    "argv",
    [
        ["--suite", "geometry"],
        ["--export", "gamma-dot"],
        ["--out", "gamma.dot"],
        ["--workers", "0"],
        ["--config-index", "-3"],
        ["--export", "gamma-svg", "--out", "x"],
    ],
)
def test_usage_errors(argv: list[str], capsys: pytest.CaptureFixture[str]):
    with pytest.raises(SystemExit) as exc_info:
        main(argv)
    assert exc_info.value.code == 2
    assert "usage: enriqueslab" in capsys.readouterr().err


def test_defaults():
    args = build_parser().parse_args([])
    assert args.suite == "all"
    assert args.config_index == 0
    assert args.export is None
    assert not args.no_timings


def test_plane_report_to_stdout(capsys: pytest.CaptureFixture[str]):
    assert main(["--suite", "plane", "--no-timings"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["schema"] == SCHEMA
    assert document["counts"]["pass"] == 5
    assert all("elapsed_ms" not in r for r in document["records"])


def test_report_file(tmp_path: Path):
    report = tmp_path / "report.json"
    assert main(["--suite", "plane", "--seed", "11", "--report", str(report)]) == 0
    document = json.loads(report.read_text(encoding="utf-8"))
    assert document["seed"] == 11
    assert all("elapsed_ms" in r for r in document["records"])


def test_export(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    out = tmp_path / "gamma.dot"
    assert main(["--export", "gamma-dot", "--out", str(out)]) == 0
    assert capsys.readouterr().out.strip() == str(out)
    assert out.read_text(encoding="utf-8").startswith("graph Gamma {")


def test_plane_export(tmp_path: Path):
    out = tmp_path / "plane.json"
    assert main(["--export", "plane-json", "--out", str(out)]) == 0
    assert json.loads(out.read_text(encoding="utf-8"))["kind"] == "plane"


def test_export_failure(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    assert main(["--export", "gamma-json", "--out", str(blocker / "g.json")]) == 1
    assert "cannot write" in capsys.readouterr().err


def test_export_config_out_of_range(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    out = tmp_path / "lattice.json"
    argv = ["--export", "lattice-json", "--out", str(out), "--config-index", "500"]
    assert main(argv) == 1
    assert not out.exists()
    assert capsys.readouterr().err.startswith("enriqueslab:")
