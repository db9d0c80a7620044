"""Periodic crystal structures: parsing, validation, and basic geometry.

Structures are read from a small JSON schema (lattice rows in angstrom,
fractional site coordinates) rather than CIF/POSCAR; coordinates are
fractional in files and converted to cartesian internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .elements import get_element
from .errors import (
    CoordinateMismatchError,
    InvalidStructureError,
    MalformedDocumentError,
    SingularLatticeError,
)

_MIN_CELL_VOLUME = 1e-8  # angstrom^3


def wrap_frac(coords) -> np.ndarray:
    """Wrap fractional coordinates into [0, 1). Idempotent."""
    wrapped = np.asarray(coords, dtype=float) % 1.0
    # x % 1.0 can round up to exactly 1.0 for tiny negative x
    wrapped[wrapped >= 1.0] -= 1.0
    return wrapped


@dataclass(frozen=True)
class Site:
    """One atom: element symbol, its Z, and fractional coordinates."""

    element: str
    atomic_number: int
    frac_coords: tuple[float, float, float]


@dataclass(frozen=True)
class CrystalStructure:
    """Lattice (rows are lattice vectors, angstrom) plus ordered sites.

    Instances are validated on construction and treated as immutable.
    """

    id: str
    lattice: np.ndarray
    sites: tuple[Site, ...]
    formation_energy: float | None = None

    def __post_init__(self):
        lattice = np.asarray(self.lattice, dtype=float)
        if lattice.shape != (3, 3):
            raise InvalidStructureError(f"{self.id}: lattice must be 3x3")
        if abs(np.linalg.det(lattice)) <= _MIN_CELL_VOLUME:
            raise SingularLatticeError(f"{self.id}: cell volume below {_MIN_CELL_VOLUME} A^3")
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "sites", tuple(self.sites))
        if not self.sites:
            raise InvalidStructureError(f"{self.id}: structure has no sites")
        for site in self.sites:
            info = get_element(site.element)
            if info.atomic_number != site.atomic_number:
                raise InvalidStructureError(
                    f"{self.id}: site Z={site.atomic_number} conflicts with {site.element}"
                )
            if len(site.frac_coords) != 3:
                raise CoordinateMismatchError(
                    f"{self.id}: site {site.element} has {len(site.frac_coords)} coordinates"
                )
            if not all(0.0 <= c < 1.0 for c in site.frac_coords):
                raise InvalidStructureError(
                    f"{self.id}: fractional coordinate outside [0, 1): {site.frac_coords}"
                )

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def frac_matrix(self) -> np.ndarray:
        return np.array([s.frac_coords for s in self.sites], dtype=float)


def structure_from_dict(doc: dict) -> CrystalStructure:
    """Build a validated structure from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise MalformedDocumentError("top-level document must be an object")
    try:
        struct_id = doc["id"]
        lattice = doc["lattice"]
        raw_sites = doc["sites"]
    except (KeyError, TypeError) as exc:
        raise MalformedDocumentError(f"missing required field: {exc}") from None
    if not isinstance(struct_id, str) or not struct_id:
        raise MalformedDocumentError("'id' must be a non-empty string")

    lattice = np.asarray(lattice, dtype=object)
    try:
        lattice = lattice.astype(float)
    except (ValueError, TypeError):
        raise MalformedDocumentError("'lattice' must contain numbers") from None
    if lattice.shape != (3, 3):
        raise MalformedDocumentError("'lattice' must be a 3x3 matrix")

    if not isinstance(raw_sites, list) or not raw_sites:
        raise MalformedDocumentError("'sites' must be a non-empty list")
    sites = []
    for entry in raw_sites:
        if not isinstance(entry, dict) or "element" not in entry or "frac" not in entry:
            raise MalformedDocumentError("each site needs 'element' and 'frac'")
        symbol = entry["element"]
        frac = entry["frac"]
        if not isinstance(frac, (list, tuple)) or len(frac) != 3:
            raise CoordinateMismatchError(
                f"site {symbol!r}: 'frac' must have exactly 3 entries, got {len(frac)}"
            )
        try:
            frac = wrap_frac([float(c) for c in frac])
        except (ValueError, TypeError):
            raise MalformedDocumentError(f"site {symbol!r}: non-numeric coordinates") from None
        info = get_element(symbol)  # raises UnknownElementError
        sites.append(Site(symbol, info.atomic_number, tuple(frac)))

    energy = doc.get("formation_energy")
    if energy is not None:
        try:
            energy = float(energy)
        except (ValueError, TypeError):
            raise MalformedDocumentError("'formation_energy' must be a number or null") from None

    return CrystalStructure(struct_id, lattice, tuple(sites), energy)


def parse_structure(content: bytes) -> CrystalStructure:
    """Parse a structure file (JSON bytes) into a validated CrystalStructure.

    Fractional coordinates are wrapped into [0, 1).  Distinct errors:
    MalformedDocumentError, SingularLatticeError, UnknownElementError,
    CoordinateMismatchError.
    """
    try:
        doc = json.loads(content.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedDocumentError(f"not valid JSON: {exc}") from None
    return structure_from_dict(doc)


def cartesian_coords(structure: CrystalStructure) -> np.ndarray:
    """Cartesian positions (angstrom), one row per site: r = frac . lattice."""
    return structure.frac_matrix() @ structure.lattice


class PeriodicImage(NamedTuple):
    site_index: int
    offset: tuple[int, int, int]
    position: np.ndarray


def plane_spacings(lattice: np.ndarray) -> np.ndarray:
    """Perpendicular spacing between lattice planes along each cell axis."""
    inv = np.linalg.inv(lattice)
    return 1.0 / np.linalg.norm(inv, axis=0)


def periodic_images(structure: CrystalStructure, cutoff: float) -> list[PeriodicImage]:
    """Enumerate periodic copies of every site near the home cell.

    Includes every lattice translation that moves the cell by at most
    ``cutoff`` worth of whole plane spacings along each axis; the zero
    translation (the home cell itself) is excluded.  Ordering is
    deterministic: by site index, then lexicographic offset.
    """
    if cutoff <= 0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    spacings = plane_spacings(structure.lattice)
    reach = np.floor(cutoff / spacings).astype(int)
    axes = [np.arange(-reach[ax], reach[ax] + 1) for ax in range(3)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    grid = grid[np.any(grid != 0, axis=1)]  # drop the home cell
    # meshgrid with ij indexing already yields lexicographic offset order
    frac = structure.frac_matrix()
    images = []
    for site_index in range(structure.n_sites):
        positions = (frac[site_index] + grid) @ structure.lattice
        for offset, pos in zip(grid, positions):
            images.append(PeriodicImage(site_index, (int(offset[0]), int(offset[1]), int(offset[2])), pos))
    return images
