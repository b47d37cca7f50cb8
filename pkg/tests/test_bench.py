import runpy
import sys
from pathlib import Path

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


def test_benchmark_runs(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", [str(BENCH), "--scale", "0.02", "--repeat", "1"])
    runpy.run_path(str(BENCH), run_name="__main__")
    out = capsys.readouterr().out
    for kernel in ("product", "determinize", "refine", "bfs_order"):
        assert kernel in out
