"""crysim: crystal descriptors, similarity measures, and energy regression.

The package turns periodic crystal structures into fixed-length feature
vectors (an orbital-interaction matrix built on periodic Voronoi geometry,
and a nuclear-repulsion matrix with spectrum/sorted representations),
quantifies how much point-level distinctiveness different dissimilarity
measures retain, and predicts formation energies with nearest-neighbor,
ridge, and kernel-ridge regressors, including degrees-of-freedom model
complexity estimates.
"""

__version__ = "0.1.0"

from .structures import CrystalStructure, Site, parse_structure
from .voronoi import NeighborRecord, NeighborShell, neighbor_shell
from .descriptors import Descriptor, coulomb_matrix, material_ofm
from .similarity import MeasureSpec, distance, parse_measure
from .regression import KernelSpec, KnnConfig

__all__ = [
    "CrystalStructure",
    "Site",
    "parse_structure",
    "NeighborRecord",
    "NeighborShell",
    "neighbor_shell",
    "Descriptor",
    "coulomb_matrix",
    "material_ofm",
    "MeasureSpec",
    "distance",
    "parse_measure",
    "KernelSpec",
    "KnnConfig",
    "__version__",
]
