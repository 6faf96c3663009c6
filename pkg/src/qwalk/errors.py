"""Exception types shared across the package."""


class QwalkError(Exception):
    """Base class for all package errors."""


class NotAnAutomorphism(QwalkError):
    """A candidate basis permutation does not preserve the shift structure."""


class NotOrbitCompatible(QwalkError):
    """An automorphism does not map orbits onto orbits."""


class CommutationFailure(QwalkError):
    """An operator fails to commute with a required symmetry generator."""


class MeasurementSymmetryViolation(QwalkError):
    """A projective measurement does not commute with a symmetry generator."""


class DimensionLimit(QwalkError):
    """A dense superoperator would exceed the configured size cap.

    Reduce the walk first (e.g. restrict to an orbit subspace) or raise
    the cap via the QWALK_DENSE_LIMIT environment variable.
    """


class BlockStructureError(QwalkError):
    """A matrix expected to be block diagonal has weight outside its blocks."""
