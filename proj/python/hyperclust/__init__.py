"""Python interface to the hyperclust C++ core."""
import json

import numpy as np

from ._core import (
    DataError,
    Dataset,
    NumericError,
    ari,
    kmeans,
    load_csv,
    make_synthetic,
    nmi,
    preprocess,
    save_csv,
    select_delta,
    train_linear_svm,
)
from . import _core

__all__ = [
    "DataError", "Dataset", "NumericError", "ari", "cluster", "kmeans", "load_csv", "make_synthetic", "nmi",
    "preprocess", "save_csv", "select_delta", "sweep", "train_linear_svm",
]


def _as_dataset(data, labels=None):
    if isinstance(data, Dataset):
        return data
    return Dataset(np.ascontiguousarray(data, dtype=float), None if labels is None else [int(v) for v in labels])


def cluster(data, delta=None, *, labels=None, h_mode="experiment", margin_mode="paper", repeats=5, seed=0,
            minmax=False, center=False, grid=(), svm_c=100.0, assigned_only=False):
    """Cluster `data` (a Dataset or an n x d array).

    Returns (assignment, report): an int array with -1 for unassigned points
    and the report as a dict. Omitting `delta` selects it from a sweep.
    """
    ds = _as_dataset(data, labels)
    assignment, report = _core._cluster(ds, delta, h_mode, margin_mode, repeats, seed, minmax, center, list(grid),
                                        svm_c, assigned_only)
    return np.asarray(assignment, dtype=int), json.loads(report)


def sweep(data, grid=(), *, labels=None, h_mode="experiment", repeats=5, seed=0):
    """N(delta) over `grid` (a default grid when empty).

    Returns a dict with grid, n_assigned, selected_delta and the CSV text.
    """
    ds = _as_dataset(data, labels)
    g, n, selected, csv = _core._sweep(ds, list(grid), h_mode, repeats, seed)
    return {"grid": g, "n_assigned": n, "selected_delta": selected, "csv": csv}
