import contextlib
import os

import numpy as np
import pandas as pd

from mmhybrid.compat import CSV_LINE_TERMINATOR_KW

RECORDS_COLUMNS = [
    "sweep_axis",
    "sweep_value",
    "trial",
    "algorithm",
    "spectral_efficiency_bps_hz",
    "sum_rate_bps_hz",
    "min_sinr_db",
    "elapsed_s",
    "skipped",
]
SUMMARY_COLUMNS = [
    "sweep_axis",
    "sweep_value",
    "algorithm",
    "trials",
    "se_mean",
    "se_std",
    "rate_mean",
    "rate_std",
]
RAY_COLUMNS = ["cluster", "ray", "gain_re", "gain_im", "aod", "aoa"]
MATRIX_COLUMNS = ["row", "col", "re", "im"]

# 17 significant digits round-trip every double
FLOAT_FORMAT = "%.17g"


def records_frame(records):
    return pd.DataFrame(
        [
            [
                r.sweep_axis.value,
                r.sweep_value,
                r.trial_index,
                r.algorithm.value,
                r.spectral_efficiency,
                r.sum_rate,
                r.min_sinr_db,
                r.elapsed_seconds,
                int(r.skipped),
            ]
            for r in records
        ],
        columns=RECORDS_COLUMNS,
    )


def summary_frame(summary):
    return pd.DataFrame(
        [
            [
                row.sweep_axis.value,
                row.sweep_value,
                row.algorithm.value,
                row.trials,
                row.se_mean,
                row.se_std,
                row.rate_mean,
                row.rate_std,
            ]
            for row in summary
        ],
        columns=SUMMARY_COLUMNS,
    )


@contextlib.contextmanager
def _open_output(output):
    if isinstance(output, (str, os.PathLike)):
        with open(output, "w", encoding="utf-8", newline="") as handle:
            yield handle
    else:
        yield output


def _to_csv(frame, handle):
    frame.to_csv(
        handle, index=False, float_format=FLOAT_FORMAT, **{CSV_LINE_TERMINATOR_KW: "\n"}
    )


def write_records_csv(records, output):
    with _open_output(output) as handle:
        _to_csv(records_frame(records), handle)
    return output


def write_summary_csv(summary, output):
    with _open_output(output) as handle:
        _to_csv(summary_frame(summary), handle)
    return output


def write_channel_csv(realization, params, output):
    """Rays table followed by the channel matrix as (row, col, re, im)."""
    n_rays = params.n_rays
    rays = pd.DataFrame(
        [
            [r.cluster, i % n_rays, r.gain.real, r.gain.imag, r.aod, r.aoa]
            for i, r in enumerate(realization.rays)
        ],
        columns=RAY_COLUMNS,
    )
    h = realization.h
    rows, cols = np.indices(h.shape)
    matrix = pd.DataFrame(
        {
            "row": rows.ravel(),
            "col": cols.ravel(),
            "re": h.real.ravel(),
            "im": h.imag.ravel(),
        },
        columns=MATRIX_COLUMNS,
    )
    with _open_output(output) as handle:
        _to_csv(rays, handle)
        _to_csv(matrix, handle)
    return output


def read_csv(path):
    return pd.read_csv(path, float_precision="round_trip")
