"""Reading and writing curves, match results, distance matrices and embeddings.

Curves are JSON objects ``{"points": [[x, y], ...], "closed": bool}``; a
two-column CSV (no header) is also accepted and read as an open curve.
Matrices and embeddings are CSV files. Floats are written with ``repr`` so
that a parse/serialize round trip is exact.
"""
import csv
import json
from pathlib import Path

import numpy as np

from .curves import DiscreteCurve


def curve_to_dict(curve):
    return {"points": curve.vertices.tolist(), "closed": bool(curve.closed)}


def curve_from_dict(data):
    return DiscreteCurve(np.asarray(data["points"], dtype=float), bool(data.get("closed", False)))


def read_curve(path):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        pts = np.loadtxt(path, delimiter=",", ndmin=2)
        return DiscreteCurve(pts, closed=False)
    with open(path) as fh:
        return curve_from_dict(json.load(fh))


def write_curve(path, curve):
    with open(path, "w") as fh:
        json.dump(curve_to_dict(curve), fh)
        fh.write("\n")


def write_json(path, data):
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def write_matrix_csv(path, labels, values):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(labels)
        for row in np.asarray(values, dtype=float):
            out.writerow([repr(float(v)) for v in row])


def read_matrix_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    labels = rows[0]
    values = np.array([[float(v) for v in row] for row in rows[1:]])
    if values.shape != (len(labels), len(labels)):
        raise ValueError(f"{path}: expected a {len(labels)}x{len(labels)} matrix")
    return labels, values


def write_embedding_csv(path, labels, coords):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["label"] + [f"x{k + 1}" for k in range(coords.shape[1])])
        for lab, row in zip(labels, coords):
            out.writerow([lab] + [repr(float(v)) for v in row])


def read_embedding_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    labels = [r[0] for r in rows[1:]]
    coords = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return labels, coords


def read_labels(path):
    """Class labels file: either ``name,class`` lines or one class per line."""
    mapping, order = {}, []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            if len(row) >= 2:
                mapping[row[0]] = row[1]
            else:
                order.append(row[0])
    return mapping if mapping else order
