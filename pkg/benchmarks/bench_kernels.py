"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--mb 50] [--repeat 3]

Two measurements per backend: the row scanner and exact-sum accumulator
called directly on in-memory lines, and a full ``stats`` run in a fresh
interpreter with the backend forced through ``COUNTYSCORE_PURE_PYTHON``.
"""

import argparse
import importlib
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import synth  # noqa: E402
from countyscore.ingest_market import REQUIRED_COLUMNS, MarketRecord  # noqa: E402

BATCH = 4096


def _layout(header):
    cols = {name: i for i, name in enumerate(header)}
    return (len(header), cols["region_type"], "All Residential",
            *(cols[name] for name in REQUIRED_COLUMNS))


def bench_kernels(module, lines, layout, repeat):
    best = float("inf")
    for _ in range(repeat):
        drops = [0] * 8
        acc = module.GrowthAccumulator()
        started = time.perf_counter()
        for i in range(0, len(lines), BATCH):
            for r in module.scan_lines(lines[i:i + BATCH], layout, drops, MarketRecord):
                acc.add(r.homes_sold_mom, r.homes_sold_yoy, r.median_sale_price_mom,
                        r.median_sale_price_yoy)
        best = min(best, time.perf_counter() - started)
    return best


def bench_pipeline(pure, market, svi, repeat):
    env = dict(os.environ, COUNTYSCORE_PURE_PYTHON="1" if pure else "0")
    argv = [sys.executable, "-m", "countyscore", "stats", "--market", str(market), "--svi", str(svi)]
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        subprocess.run(argv, env=env, check=True, capture_output=True)
        best = min(best, time.perf_counter() - started)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--mb", type=int, default=50, help="size of the generated TSV")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = [("python", importlib.import_module("countyscore._purepy"))]
    try:
        backends.append(("cython", importlib.import_module("countyscore._speedups")))
    except ImportError:
        print("compiled kernels not built; showing the pure-Python backend only")

    with tempfile.TemporaryDirectory() as tmp:
        market, svi = Path(tmp) / "market.tsv", Path(tmp) / "svi.csv"
        counts = synth.write_market(market, args.mb * 1_000_000)
        synth.write_svi(svi)
        with open(market, encoding="utf-8", newline="") as fh:
            header = [c.strip('"') for c in fh.readline().rstrip("\n").split("\t")]
            lines = fh.readlines()
        layout = _layout(header)
        print(f"{args.mb} MB, {counts['rows']:,} rows, best of {args.repeat}")
        print(f"{'backend':<8} {'kernels s':>10} {'rows/s':>12} {'stats run s':>12}")
        base = None
        for name, module in backends:
            k = bench_kernels(module, lines, layout, args.repeat)
            p = bench_pipeline(name == "python", market, svi, args.repeat)
            base = base or (k, p)
            print(f"{name:<8} {k:>10.2f} {len(lines) / k:>12,.0f} {p:>12.2f}"
                  f"   (x{base[0] / k:.1f} kernels, x{base[1] / p:.1f} end to end)")


if __name__ == "__main__":
    main()
