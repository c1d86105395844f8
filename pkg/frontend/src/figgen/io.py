"""Reading the slmqudits records contract.

The CSV header is fixed:

    state_id,D,method,p,N,a,theta,phi,fidelity,mle_iters,T

theta/phi are empty for Haar-sampled states. This module never imports the
producer package; the file format is the whole interface.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass


class SchemaError(ValueError):
    """The input file does not match the documented records contract."""


class EmptyDataError(ValueError):
    """No records survive the requested selection."""


REQUIRED_COLUMNS = ("state_id", "D", "method", "p", "N", "a",
                    "theta", "phi", "fidelity", "mle_iters", "T")


@dataclass(frozen=True)
class Record:
    state_id: int
    dim: int
    method: str
    period: int
    levels: int
    flicker_a: float
    theta: float | None
    phi: float | None
    fidelity: float


def read_records(path) -> list[Record]:
    """Parse a records CSV, verifying every documented column is present."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in REQUIRED_COLUMNS:
            if column not in header:
                raise SchemaError(f"{path}: missing required column {column!r}")
        records = []
        for row in reader:
            records.append(Record(
                state_id=int(row["state_id"]),
                dim=int(row["D"]),
                method=row["method"],
                period=int(row["p"]),
                levels=int(row["N"]),
                flicker_a=float(row["a"]),
                theta=float(row["theta"]) if row["theta"] else None,
                phi=float(row["phi"]) if row["phi"] else None,
                fidelity=float(row["fidelity"]),
            ))
    return records


def select(records, method=None, flicker_a=None, dim=None, period=None):
    """Filter records on the grouping keys; None keeps everything."""
    out = [r for r in records
           if (method is None or r.method == method)
           and (flicker_a is None or abs(r.flicker_a - flicker_a) < 1e-12)
           and (dim is None or r.dim == dim)
           and (period is None or r.period == period)]
    return out


def group_key(record) -> tuple:
    return (record.method, record.flicker_a)
