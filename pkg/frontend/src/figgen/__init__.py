"""Figure rendering for slmqudits sweep outputs.

Consumes only the documented CSV/JSON contract (fixed header
``state_id,D,method,p,N,a,theta,phi,fidelity,mle_iters,T``); never imports
the producer package.
"""

from .io import EmptyDataError, Record, SchemaError, read_records, select
from .plots import (
    FigureJob,
    bloch_grid,
    histogram_bins,
    render_bloch_heatmap,
    render_histogram,
    render_waveform,
    waveform_curves,
)

__version__ = "0.1.0"
