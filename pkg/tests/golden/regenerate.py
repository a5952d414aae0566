#!/usr/bin/env python3
"""Regenerate the golden regression reports.

Run from the repository root after an intentional report-schema change:

    python3 tests/golden/regenerate.py

Golden comparisons ignore meta.timing_ms; everything else must be
byte-stable for the recorded seed.
"""

import contextlib
import io
import json
from pathlib import Path

from padicdyn.cli import main

CASES = {
    "verify_sy1": ["verify", "--theorem", "sy1", "--p", "3", "--N", "3", "--a", "1/9", "--samples", "25"],
    "verify_sy2": ["verify", "--theorem", "sy2", "--p", "5", "--N", "2", "--a", "5/1", "--depth", "4", "--samples", "25"],
    "verify_sy3": ["verify", "--theorem", "sy3", "--p", "2", "--N", "3", "--a", "2/1", "--samples", "25"],
    "verify_sy4": ["verify", "--theorem", "sy4", "--p", "5", "--N", "2", "--a", "1/1", "--samples", "25"],
    "verify_dsy1": ["verify", "--theorem", "dsy1", "--p", "5", "--N", "5", "--a", "2/625", "--samples", "25"],
    "verify_dsy2": ["verify", "--theorem", "dsy2", "--p", "2", "--N", "2", "--a", "1/1", "--samples", "25", "--precision", "40"],
    "verify_dsy3": ["verify", "--theorem", "dsy3", "--p", "3", "--N", "2", "--a", "4/1", "--samples", "25"],
    "analyze_sy1_empty": ["analyze", "--p", "7", "--N", "3", "--a", "1/7"],
    "binomial_p2": ["binomial", "--p", "2", "--n-max", "100"],
    "repeller_552": ["repeller", "--p", "5", "--N", "2", "--a", "5/1", "--depth", "4"],
    "hensel_sqrtm1": ["hensel", "--p", "5", "--poly", "1,0,1", "--seed-residue", "2", "--prec", "40"],
}


def regenerate() -> None:
    out_dir = Path(__file__).parent
    for name, args in CASES.items():
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(["--output", "json"] + args)
        doc = {"request": {"argv": args, "exit_code": code}, "report": json.loads(buf.getvalue())}
        (out_dir / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
        print(f"{name}: exit {code}, verdict {doc['report']['verdict']}")


if __name__ == "__main__":
    regenerate()
