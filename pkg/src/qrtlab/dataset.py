"""Flat-file formats: dataset CSV, run manifest JSON, and raw state dumps.

Dataset CSV schema (bit-exact header, floats at 17 significant digits):

    family,n,state_id,seed,lambda_ent,lambda_ferm,lambda_imag,lambda_real,lambda_coh,lambda_stab,lambda_sn,lambda_uent

State dumps hold, per state, family, n, state_id and then 2^(n+1) floats of
interleaved real/imag amplitudes, either as CSV text or little-endian binary
(uint32 family index, uint32 n, uint64 state_id, float64 amplitudes), with
the global phase fixed by making the largest-magnitude amplitude real
positive.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .sample import FAMILY_IDS, WitnessRecord
from .witness import WITNESS_IDS

CSV_HEADER = "family,n,state_id,seed," + ",".join(f"lambda_{w}" for w in WITNESS_IDS)


def format_float(v: float) -> str:
    return f"{v:.17g}"


def records_to_csv(records) -> str:
    lines = [CSV_HEADER]
    for rec in records:
        vals = ",".join(format_float(rec.values[w]) for w in WITNESS_IDS)
        lines.append(f"{rec.family},{rec.n},{rec.state_id},{rec.seed},{vals}")
    return "\n".join(lines) + "\n"


class SchemaError(ValueError):
    pass


def read_csv(path) -> list:
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        got = lines[0] if lines else "<empty>"
        raise SchemaError(f"dataset header mismatch: expected {CSV_HEADER!r}, got {got!r}")
    records = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 4 + len(WITNESS_IDS):
            raise SchemaError(f"bad column count in row {ln!r}")
        family, n, state_id, seed = parts[0], int(parts[1]), int(parts[2]), int(parts[3])
        values = {w: float(v) for w, v in zip(WITNESS_IDS, parts[4:])}
        records.append(
            WitnessRecord(family=family, n=n, state_id=state_id, seed=seed, values=values)
        )
    return records


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_dataset(records, out_path) -> str:
    out_path = Path(out_path)
    csv_text = records_to_csv(records)
    out_path.write_text(csv_text)
    return content_hash(csv_text.encode())


def write_manifest(path, config: dict, dataset_hash: str, records) -> dict:
    counts: dict = {}
    for rec in records:
        counts[rec.family] = counts.get(rec.family, 0) + 1
    manifest = {
        "config": config,
        "dataset_sha256": dataset_hash,
        "per_family_counts": counts,
        "n_records": len(records),
    }
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def canonical_phase(amps: np.ndarray) -> np.ndarray:
    """Global phase fixed by making the largest-magnitude amplitude real positive."""
    k = int(np.argmax(np.abs(amps)))
    ph = amps[k] / abs(amps[k])
    return amps / ph


def dump_states_csv(entries) -> str:
    """entries: iterable of (family, n, state_id, amps)."""
    lines = []
    for family, n, state_id, amps in entries:
        a = canonical_phase(np.asarray(amps))
        flat = np.empty(2 * a.size)
        flat[0::2] = a.real
        flat[1::2] = a.imag
        lines.append(
            f"{family},{n},{state_id}," + ",".join(format_float(v) for v in flat)
        )
    return "\n".join(lines) + "\n"


def dump_states_binary(entries) -> bytes:
    chunks = []
    for family, n, state_id, amps in entries:
        a = canonical_phase(np.asarray(amps))
        flat = np.empty(2 * a.size)
        flat[0::2] = a.real
        flat[1::2] = a.imag
        chunks.append(struct.pack("<IIQ", FAMILY_IDS.index(family), n, state_id))
        chunks.append(flat.astype("<f8").tobytes())
    return b"".join(chunks)


def load_states_binary(data: bytes):
    out = []
    off = 0
    while off < len(data):
        fam_idx, n, state_id = struct.unpack_from("<IIQ", data, off)
        off += 16
        count = 2 ** (n + 1)
        flat = np.frombuffer(data, dtype="<f8", count=count, offset=off)
        off += 8 * count
        amps = flat[0::2] + 1j * flat[1::2]
        out.append((FAMILY_IDS[fam_idx], n, state_id, amps))
    return out
