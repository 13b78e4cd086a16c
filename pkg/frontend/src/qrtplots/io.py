"""Readers for the pipeline's CSV outputs. The schemas are the pipeline's
external contract; nothing here recomputes statistics."""

from __future__ import annotations

from pathlib import Path

import numpy as np

WITNESS_IDS = ("ent", "ferm", "imag", "real", "coh", "stab", "sn", "uent")

DATASET_HEADER = "family,n,state_id,seed," + ",".join(
    f"lambda_{w}" for w in WITNESS_IDS
)

# fixed, documented family color order (matches the pipeline's family ids)
FAMILY_COLORS = {
    "haar": "#4c72b0",
    "ent": "#dd8452",
    "ferm": "#55a868",
    "imag": "#c44e52",
    "real": "#8172b3",
    "coh": "#937860",
    "stab": "#da8bc3",
    "sn": "#8c8c8c",
    "uent": "#ccb974",
}
FAMILY_ORDER = tuple(FAMILY_COLORS)


class SchemaError(ValueError):
    pass


def read_dataset(path):
    """Returns (families, n_values, witness matrix) from a dataset CSV."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or lines[0] != DATASET_HEADER:
        raise SchemaError(f"unexpected dataset header in {path}")
    fams, ns, vals = [], [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 4 + len(WITNESS_IDS):
            raise SchemaError(f"bad column count in {path}: {ln!r}")
        fams.append(parts[0])
        ns.append(int(parts[1]))
        vals.append([float(v) for v in parts[4:]])
    return np.array(fams), np.array(ns), np.array(vals)


def read_projections(path):
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or lines[0] != "family,pc1,pc2":
        raise SchemaError(f"unexpected projections header in {path}")
    fams, pts = [], []
    for ln in lines[1:]:
        f, a, b = ln.split(",")
        fams.append(f)
        pts.append((float(a), float(b)))
    return np.array(fams), np.array(pts)


def read_loadings(path):
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    header = lines[0].split(",")
    if header[0] != "witness" or len(header) < 3:
        raise SchemaError(f"unexpected loadings header in {path}")
    names, rows = [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        names.append(parts[0])
        rows.append([float(v) for v in parts[1:]])
    return names, np.array(rows)
