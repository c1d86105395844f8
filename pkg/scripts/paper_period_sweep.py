#!/usr/bin/env python3
"""Flicker-free Bloch sweeps at grating periods 4, 8 and 16 pixels.

Shows the phase-quantization fidelity floor improving with the period;
the quantization follows the period (one level per pixel).
"""

import sys

from slmqudits.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/period_sweep"
    sys.exit(main(["period-sweep", "--out", out, "--workers", "2"]))
