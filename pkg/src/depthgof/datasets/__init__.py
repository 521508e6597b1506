"""Bundled example data.

The guinea-pig tooth growth data (a public-domain classical dataset):
60 animals, odontoblast length under three vitamin C doses delivered as
ascorbic acid (VC) or orange juice (OJ), 30 per delivery method.
"""

from __future__ import annotations

import csv
from importlib import resources

import numpy as np

__all__ = ["tooth_growth"]


def tooth_growth() -> tuple[np.ndarray, np.ndarray]:
    """Return the (length, dose) matrix and the delivery-method labels."""
    path = resources.files(__name__) / "tooth_growth.csv"
    rows = []
    labels = []
    with path.open() as fh:
        for record in csv.DictReader(fh):
            rows.append((float(record["len"]), float(record["dose"])))
            labels.append(record["supp"])
    return np.array(rows), np.array(labels)
