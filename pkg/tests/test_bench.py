import runpy
from pathlib import Path

import pytest

from fofs import kernels

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
def test_benchmark_backends_agree(capsys):
    main = runpy.run_path(str(BENCH))["main"]
    assert main(["--quick", "--repeat", "1"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert len(rows) == 4 and all(r.endswith("yes") for r in rows)
    assert kernels.backend is kernels.compiled_backend
