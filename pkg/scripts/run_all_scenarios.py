#!/usr/bin/env python3
"""Run every bundled scenario and sweep, writing reports/tables to out/.

The two density scenarios also get a 10^6-sample Monte-Carlo cross-check
with fixed seeds, so the whole script doubles as an end-to-end smoke test.
"""
import sys
from pathlib import Path

from helispin.cli import bundled_scenarios, main

MC_OVERRIDES = {
    "eq10_theta_independent": "1000000,20260808",
    "eq15_isotropic_helicity": "1000000,31415926",
}


def run(out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name, tree in sorted(bundled_scenarios().items()):
        if "parameter" in tree:
            args = ["sweep", name, "--out", str(out_dir / f"{name}.csv")]
        else:
            args = ["run", name, "--out", str(out_dir / f"{name}.report.json")]
            if name in MC_OVERRIDES:
                args += ["--mc", MC_OVERRIDES[name]]
        print(f"$ helispin {' '.join(args)}")
        rc = main(args)
        print(f"-> exit {rc}\n")
        worst = max(worst, rc)
    return worst


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")
    raise SystemExit(run(target))
