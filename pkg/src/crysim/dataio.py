"""File-based dataset handling and deterministic CSV/JSON writers.

A dataset is a manifest CSV (``id,path,formation_energy``) whose rows point
at structure JSON files; paths are resolved relative to the manifest.  All
floats written to CSV use 17 significant digits with a ``.`` decimal point
so that artifacts round-trip exactly and rerunning a command reproduces
them byte for byte.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ManifestError, MissingEnergyError
from .structures import CrystalStructure, parse_structure

MANIFEST_HEADER = ["id", "path", "formation_energy"]


def fmt(x: float) -> str:
    """Float to text, 17 significant digits (round-trip exact)."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    path: Path
    formation_energy: float | None


def load_manifest(path) -> list[ManifestEntry]:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != MANIFEST_HEADER:
            raise ManifestError(
                f"{path}: manifest header must be {','.join(MANIFEST_HEADER)}, "
                f"got {reader.fieldnames}"
            )
        entries = []
        for row in reader:
            struct_id = (row["id"] or "").strip()
            rel = (row["path"] or "").strip()
            if not struct_id or not rel:
                raise ManifestError(f"{path}: row with empty id or path")
            raw_energy = (row["formation_energy"] or "").strip()
            energy = float(raw_energy) if raw_energy else None
            entries.append(ManifestEntry(struct_id, (path.parent / rel).resolve(), energy))
    if not entries:
        raise ManifestError(f"{path}: manifest lists no structures")
    return entries


def load_dataset(manifest_path) -> list[CrystalStructure]:
    """Load and validate every structure a manifest lists, in row order.

    The manifest's formation_energy column, when present, overrides the
    value stored in the structure file; ids must agree between the two.
    """
    structures = []
    for entry in load_manifest(manifest_path):
        try:
            content = entry.path.read_bytes()
        except OSError as exc:
            raise ManifestError(f"{entry.id}: cannot read {entry.path}: {exc}") from exc
        structure = parse_structure(content)
        if structure.id != entry.id:
            raise ManifestError(
                f"manifest id {entry.id!r} does not match file id {structure.id!r}"
            )
        energy = entry.formation_energy
        if energy is not None and energy != structure.formation_energy:
            structure = CrystalStructure(structure.id, structure.lattice, structure.sites, energy)
        structures.append(structure)
    return structures


def require_energies(structures) -> np.ndarray:
    """Formation energies of all structures; error names the first gap."""
    for s in structures:
        if s.formation_energy is None:
            raise MissingEnergyError(f"structure {s.id!r} has no formation_energy label")
    return np.array([s.formation_energy for s in structures], dtype=float)


# --- artifact writers ---------------------------------------------------


def write_feature_csv(path, ids, matrix) -> None:
    """Feature table with header id,f0,f1,..."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + [f"f{j}" for j in range(matrix.shape[1])])
        for struct_id, row in zip(ids, matrix):
            writer.writerow([struct_id] + [fmt(v) for v in row])


def write_csv(path, header, rows) -> None:
    """Generic CSV writer; floats formatted, everything else stringified."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])


def _sanitize(obj):
    """Make an object JSON-serializable; NaN becomes null."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) else v
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj]
    return obj


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(_sanitize(obj), fh, indent=2, allow_nan=False)
        fh.write("\n")
