"""Exception types raised across the toolkit.

Every data- or numerics-level failure derives from :class:`CrysimError` so
that callers (notably the CLI) can separate them from usage errors.
"""


class CrysimError(Exception):
    """Base class for all toolkit errors."""


# --- structure files ---------------------------------------------------


class MalformedDocumentError(CrysimError):
    """Structure or manifest document does not match the expected schema."""


class SingularLatticeError(CrysimError):
    """Lattice matrix is singular or numerically degenerate."""


class UnknownElementError(CrysimError):
    """Element symbol does not resolve in the element table."""


class CoordinateMismatchError(CrysimError):
    """A site's fractional coordinates are not a 3-vector."""


class InvalidStructureError(CrysimError):
    """A structure violates a basic invariant (empty sites, bad range, ...)."""


class ManifestError(CrysimError):
    """Dataset manifest is inconsistent with the structure files it lists."""


class MissingEnergyError(CrysimError):
    """A structure required to carry a formation-energy label does not."""


# --- geometry ----------------------------------------------------------


class OpenCellError(CrysimError):
    """The tessellation cell stayed unbounded after maximum cutoff growth."""


class DegenerateGeometryError(CrysimError):
    """Two atoms are (numerically) coincident."""


# --- numerics ----------------------------------------------------------


class DimensionMismatchError(CrysimError):
    """Vector or matrix dimensions are incompatible."""


class ZeroVectorError(CrysimError):
    """Cosine distance requested for an all-zero vector."""


class ZeroDenominatorError(CrysimError):
    """Bray-Curtis denominator vanished while the numerator did not."""


class DegenerateDataError(CrysimError):
    """Input data has no variation where variation is required."""


class InsufficientDataError(CrysimError):
    """Not enough points for the requested operation (k, folds, radius...)."""


class ZeroVarianceError(CrysimError):
    """R^2 requested against a constant target vector."""


class SingularSystemError(CrysimError):
    """A linear system that the model must solve is singular."""


class GridSearchError(CrysimError):
    """Every grid cell failed during hyperparameter search."""
