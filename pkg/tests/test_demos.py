"""The demo scripts run end to end."""

import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"


def run_demo(name, tmp_path, extra=()):
    return subprocess.run(
        [sys.executable, str(DEMOS / name), *extra],
        cwd=tmp_path,
        capture_output=True,
        text=True,
        timeout=120,
    )


def test_cooccurrence_network_demo(tmp_path):
    proc = run_demo("cooccurrence_network.py", tmp_path, extra=["exports"])
    assert proc.returncode == 0, proc.stderr
    assert "annotated 13 letters" in proc.stdout
    assert "pruned graph:" in proc.stdout
    assert (tmp_path / "exports" / "letters_cooccur.gexf").is_file()
    assert (tmp_path / "exports" / "letters_cooccur.json").is_file()


def test_verb_argument_pairs_demo(tmp_path):
    proc = run_demo("verb_argument_pairs.py", tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert "--SUBJ-->" in proc.stdout and "--OBJ-->" in proc.stdout
    assert "scores, plain:" in proc.stdout
    assert "scores, resolved:" in proc.stdout


def test_pruning_comparison_demo(tmp_path):
    proc = run_demo("pruning_comparison.py", tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert "full graph: 278 nodes" in proc.stdout
    assert "mean2" in proc.stdout
