"""Demo scripts compile, and the quick ones run to completion."""

import py_compile
import runpy
from pathlib import Path

import pytest

DEMOS = sorted((Path(__file__).resolve().parent.parent / "demos").glob("*.py"))


@pytest.mark.parametrize("path", DEMOS, ids=lambda p: p.name)
def test_demo_compiles(path):
    py_compile.compile(str(path), doraise=True)


@pytest.mark.parametrize("name", ["01_design_vs_truth.py", "06_lyapunov_design_model.py"])
def test_quick_demo_runs(name, capsys):
    runpy.run_path(str(DEMOS[0].parent / name), run_name="__main__")
    assert capsys.readouterr().out.strip()
