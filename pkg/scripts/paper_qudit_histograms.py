#!/usr/bin/env python3
"""Fidelity histograms for 2000 Haar-random qudits, D = 3 and D = 7.

Both methods at 20/30/60% flicker; the CSV feeds figgen's histogram kind.
"""

import json
import sys
import tempfile

from slmqudits.cli import main

CONFIG = {
    "schema_version": 1,
    "scenario": "qudit-hist",
    "method": "both",
    "flicker_levels": [0.2, 0.3, 0.6],
    "states": {"kind": "haar", "n": 2000, "seed": 7},
}

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/qudit_hists"
    for dim in (3, 7):
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            json.dump({**CONFIG, "dimension": dim}, fh)
            cfg = fh.name
        code = main(["qudit-hist", "--config", cfg, "--out", f"{out}/d{dim}",
                     "--workers", "2"])
        if code:
            sys.exit(code)
