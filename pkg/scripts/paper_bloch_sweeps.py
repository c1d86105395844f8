#!/usr/bin/env python3
"""Full-resolution qubit Bloch sweeps: PA and GD at 20/30/60% flicker.

2112 grid states x 2 methods x 3 flicker levels; takes a while. The CSV
feeds figgen's bloch_heatmap to reproduce the six-sphere comparison figure.
"""

import sys

from slmqudits.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/bloch_sweeps"
    sys.exit(main(["bloch-sweep", "--out", out, "--workers", "2"]))
