"""figgen: render slmqudits sweep outputs to PNG or SVG.

    figgen bloch_heatmap --in records.csv --out spheres.png [--vmin 0.9]
    figgen histogram     --in records.csv --out hist.png --method GD --flicker 0.6
    figgen waveform      --out wave.svg [--levels ...] [--amplitude 0.2] [--periods 2]
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .io import EmptyDataError, SchemaError, read_records, select
from .plots import FigureJob, render_bloch_heatmap, render_histogram, render_waveform


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figgen",
                                     description="figures from slmqudits CSV outputs")
    sub = parser.add_subparsers(dest="kind", required=True)

    hm = sub.add_parser("bloch_heatmap", help="fidelity-colored Bloch spheres")
    hm.add_argument("--in", dest="inputs", required=True, help="records CSV")
    hm.add_argument("--out", required=True, help="output image (.png or .svg)")
    hm.add_argument("--vmin", type=float, default=None, help="color scale floor")
    hm.add_argument("--method", default=None)
    hm.add_argument("--flicker", type=float, default=None)
    hm.add_argument("--period", type=int, default=None)

    hi = sub.add_parser("histogram", help="fidelity occurrence histogram")
    hi.add_argument("--in", dest="inputs", required=True)
    hi.add_argument("--out", required=True)
    hi.add_argument("--method", default=None)
    hi.add_argument("--flicker", type=float, default=None)
    hi.add_argument("--dim", type=int, default=None)
    hi.add_argument("--period", type=int, default=None)

    wf = sub.add_parser("waveform", help="triangular flicker model traces")
    wf.add_argument("--out", required=True)
    wf.add_argument("--levels", default=None,
                    help="comma-separated phase levels in radians")
    wf.add_argument("--amplitude", type=float, default=0.2)
    wf.add_argument("--periods", type=int, default=2)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.kind == "waveform":
            levels = (tuple(float(tok) for tok in args.levels.split(","))
                      if args.levels else
                      (np.pi / 2, np.pi, 3 * np.pi / 2, 2 * np.pi))
            job = FigureJob(kind="waveform", output=args.out, levels=levels,
                            amplitude=args.amplitude, periods=args.periods)
            written = render_waveform(job)
        else:
            records = read_records(args.inputs)
            records = select(records, method=args.method,
                             flicker_a=args.flicker,
                             dim=getattr(args, "dim", None),
                             period=args.period)
            job = FigureJob(kind=args.kind, inputs=(args.inputs,),
                            output=args.out,
                            vmin=getattr(args, "vmin", None))
            if args.kind == "bloch_heatmap":
                written = render_bloch_heatmap(job, records)
            else:
                written = render_histogram(job, records)
        for path in written:
            print(path)
        return 0
    except (SchemaError, EmptyDataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
