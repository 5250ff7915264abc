from __future__ import annotations

import json
import os
import stat
import subprocess
import sys

import pytest

from spgraphs import cli
from spgraphs.families import CountTable


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0
    assert "count" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    [],
    ["count", "--family", "planar"],
    ["count", "--upto", "0"],
    ["count", "--refined", "--upto", "100000"],
    ["oracle", "--max-n", "9"],
    ["constants", "--prec", "8"],
    ["count", "--threads", "0"],
])
def test_usage_errors_exit_two(argv):
    assert cli.main(argv) == cli.EXIT_USAGE


def test_count_to_stdout(capsys):
    assert cli.main(["count", "--upto", "5", "--output", "-"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# spgraphs")
    table = CountTable.from_csv(out)
    assert table.marginal(4) == 63


def test_count_json_schema(tmp_path):
    path = tmp_path / "c.json"
    assert cli.main(["count", "--family", "k23free", "--level", "biconnected", "--upto", "6",
                     "--refined", "--format", "json", "-o", str(path)]) == 0
    data = json.loads(path.read_text())
    assert data["family"] == "k23free" and data["level"] == "biconnected"
    assert "generator" in data["meta"]
    assert CountTable.from_json(path.read_text()).entries[(4, 6)] == 1


def test_output_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / "out"))
    assert cli.main(["count", "--upto", "4"]) == 0
    files = os.listdir(tmp_path / "out")
    assert files == ["counts_sp_all_marginal_4.csv"]
    mode = os.stat(tmp_path / "out" / files[0]).st_mode
    assert stat.S_IMODE(mode) == 0o644


def test_atomic_write_leaves_no_temporaries(tmp_path):
    target = tmp_path / "t.txt"
    target.write_text("old")
    cli.write_output("new", str(target))
    assert target.read_text() == "new"
    assert os.listdir(tmp_path) == ["t.txt"]


def test_verify_oracle_small(tmp_path):
    path = tmp_path / "v.md"
    assert cli.main(["verify", "--suite", "oracle", "--max-n", "5", "-o", str(path)]) == 0
    assert "checks passed" in path.read_text()


def test_oracle_command(tmp_path):
    path = tmp_path / "o.csv"
    assert cli.main(["oracle", "--max-n", "4", "-o", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert sum(1 for l in lines if l.startswith("family,")) == 1
    assert {l.split(",")[0] for l in lines if not l.startswith(("#", "family"))} == {"sp", "outerplanar", "k23free"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spgraphs.cli", "count", "--upto", "3", "-o", "-"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "sp,all,3,,8"
