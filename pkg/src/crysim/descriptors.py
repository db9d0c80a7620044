"""Fixed-length numerical descriptors for crystals.

Two families:

* an orbital-interaction matrix built per site from valence-subshell
  one-hot vectors weighted by Voronoi solid angles and inverse neighbor
  distances, averaged over sites and flattened (length 32 x 33 = 1056);
* the pairwise nuclear-repulsion matrix, represented either by its
  eigenvalue spectrum or by a row-norm-sorted, flattened copy, both
  zero-padded to a dataset-wide size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elements import get_element
from .errors import DegenerateGeometryError, DimensionMismatchError
from .structures import CrystalStructure
from .voronoi import NeighborShell, neighbor_shell

# subshell dictionary, fixed order: s1 s2 p1..p6 d1..d10 f1..f14
ORBITAL_LABELS: tuple[str, ...] = (
    ("s1", "s2")
    + tuple(f"p{i}" for i in range(1, 7))
    + tuple(f"d{i}" for i in range(1, 11))
    + tuple(f"f{i}" for i in range(1, 15))
)
N_ORBITALS = len(ORBITAL_LABELS)  # 32
_ORBITAL_INDEX = {label: i for i, label in enumerate(ORBITAL_LABELS)}

OFM_DIM = N_ORBITALS * (N_ORBITALS + 1)  # 32 x 33 = 1056

KIND_OFM = "ofm"
KIND_CM_SPECTRUM = "cm-spectrum"
KIND_CM_SORTED = "cm-sorted"


@dataclass(frozen=True)
class Descriptor:
    """A tagged feature vector of the length its kind demands."""

    kind: str
    values: np.ndarray
    pad_len: int | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        object.__setattr__(self, "values", values)
        expected = self.expected_length()
        if expected is not None and len(values) != expected:
            raise DimensionMismatchError(
                f"{self.kind} descriptor must have length {expected}, got {len(values)}"
            )

    def expected_length(self) -> int | None:
        if self.kind == KIND_OFM:
            return OFM_DIM
        if self.kind == KIND_CM_SPECTRUM:
            return self.pad_len
        if self.kind == KIND_CM_SORTED:
            return None if self.pad_len is None else self.pad_len**2
        raise ValueError(f"unknown descriptor kind {self.kind!r}")


@dataclass(frozen=True)
class LocalOFM:
    """Orbital-interaction matrix of one site (32 rows x 33 columns).

    Column 0 is the central atom's own orbital indicator; the remaining
    32 columns are the outer product of that indicator with the weighted
    environment vector, hence of rank at most one.
    """

    matrix: np.ndarray
    central_site_index: int


def orbital_onehot(element: str) -> np.ndarray:
    """0/1 vector over the 32-subshell dictionary for one element."""
    vec = np.zeros(N_ORBITALS)
    for label in get_element(element).valence_labels:
        vec[_ORBITAL_INDEX[label]] = 1.0
    return vec


def local_ofm(structure: CrystalStructure, shell: NeighborShell) -> LocalOFM:
    """Orbital-interaction matrix of the shell's central site.

    Each neighbor contributes its orbital indicator scaled by the face
    weight (solid angle over the largest one) and by the inverse distance;
    an empty shell leaves the environment block all zero.
    """
    central = orbital_onehot(structure.sites[shell.central_site_index].element)
    env = np.zeros(N_ORBITALS)
    theta_max = shell.max_solid_angle
    for rec in shell.records:
        weight = rec.solid_angle / theta_max
        env += orbital_onehot(rec.neighbor_element) * weight / rec.distance
    matrix = np.outer(central, np.concatenate([[1.0], env]))
    return LocalOFM(matrix, shell.central_site_index)


def material_ofm(structure: CrystalStructure) -> Descriptor:
    """Site-averaged orbital-interaction matrix, flattened row-major."""
    total = np.zeros((N_ORBITALS, N_ORBITALS + 1))
    for site_index in range(structure.n_sites):
        total += local_ofm(structure, neighbor_shell(structure, site_index)).matrix
    mean = total / structure.n_sites
    return Descriptor(KIND_OFM, mean.ravel(order="C"))


def min_image_distance(structure: CrystalStructure, i: int, j: int) -> float:
    """Minimum-image distance (angstrom) between two distinct sites."""
    frac = structure.frac_matrix()
    delta = frac[j] - frac[i]
    delta -= np.round(delta)
    shifts = np.stack(
        np.meshgrid(*(np.arange(-1, 2),) * 3, indexing="ij"), axis=-1
    ).reshape(-1, 3)
    vectors = (delta + shifts) @ structure.lattice
    return float(np.min(np.linalg.norm(vectors, axis=1)))


def coulomb_matrix(structure: CrystalStructure) -> np.ndarray:
    """Nuclear-repulsion matrix: 0.5 Z^2.4 on the diagonal, Zi Zj / d off it.

    Off-diagonal distances are minimum-image distances within the periodic
    cell.  Coincident sites (d < 1e-6 A) are an error.
    """
    n = structure.n_sites
    z = np.array([s.atomic_number for s in structure.sites], dtype=float)
    matrix = np.zeros((n, n))
    np.fill_diagonal(matrix, 0.5 * z**2.4)
    for i in range(n):
        for j in range(i + 1, n):
            d = min_image_distance(structure, i, j)
            if d < 1e-6:
                raise DegenerateGeometryError(
                    f"{structure.id}: sites {i} and {j} are {d:.2e} A apart"
                )
            matrix[i, j] = matrix[j, i] = z[i] * z[j] / d
    return matrix


def cm_eigenspectrum(matrix: np.ndarray, pad_len: int) -> Descriptor:
    """Eigenvalues sorted by descending magnitude, zero-padded to pad_len."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    if pad_len < n:
        raise ValueError(f"pad_len {pad_len} smaller than matrix size {n}")
    eigenvalues = np.linalg.eigvalsh(matrix)
    order = np.argsort(-np.abs(eigenvalues), kind="stable")
    values = np.zeros(pad_len)
    values[:n] = eigenvalues[order]
    return Descriptor(KIND_CM_SPECTRUM, values, pad_len=pad_len)


def cm_sorted(matrix: np.ndarray, pad_len: int) -> Descriptor:
    """Row/column permutation by non-increasing row norm, padded and flattened."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    if pad_len < n:
        raise ValueError(f"pad_len {pad_len} smaller than matrix size {n}")
    norms = np.linalg.norm(matrix, axis=1)
    order = np.argsort(-norms, kind="stable")
    permuted = matrix[np.ix_(order, order)]
    padded = np.zeros((pad_len, pad_len))
    padded[:n, :n] = permuted
    return Descriptor(KIND_CM_SORTED, padded.ravel(order="C"), pad_len=pad_len)


def featurize_dataset(
    structures, kind: str, pad_len: int | None = None
) -> tuple[list[Descriptor], int | None]:
    """Descriptors for a whole dataset, in input order.

    For the repulsion-matrix kinds, ``pad_len`` defaults to the largest
    site count in the dataset.  Returns (descriptors, pad_len used).
    """
    structures = list(structures)
    if kind == KIND_OFM:
        return [material_ofm(s) for s in structures], None
    if kind not in (KIND_CM_SPECTRUM, KIND_CM_SORTED):
        raise ValueError(f"unknown descriptor kind {kind!r}")
    if pad_len is None:
        pad_len = max(s.n_sites for s in structures)
    build = cm_eigenspectrum if kind == KIND_CM_SPECTRUM else cm_sorted
    return [build(coulomb_matrix(s), pad_len) for s in structures], pad_len
