"""Typed errors shared across the engines.

The CLI maps these onto its exit-code contract: obstruction errors
(the mathematics says no) exit 3, verification failures exit 2, and
malformed input exits 4.
"""


class TessellaError(Exception):
    """Base class for all package errors."""


class InvalidInput(TessellaError):
    """Malformed instance document or argument (CLI exit 4)."""


class NotFree(TessellaError):
    """The action has an orbit shorter than the group, so no fundamental
    domain indexed by group elements can exist."""


class InvalidDomain(TessellaError):
    """A set that was required to be a verified fundamental domain is not."""


class ConditionFails(TessellaError):
    """The measure condition on joint-invariant sets fails, so the requested
    construction provably does not exist (CLI exit 3)."""


class InvalidAlpha(TessellaError):
    """The twisting map of a semidirect product is not a homomorphism into
    the automorphism group."""


class TooLarge(TessellaError):
    """Instance exceeds the configured bound of a brute-force oracle."""


class Incommensurable(TessellaError):
    """Lattice pair without a common finite-index sublattice (for rational
    full-rank lattices this can only happen on dimension mismatch)."""


class NotSublattice(TessellaError):
    """index() called on a pair where the first lattice is not contained in
    the second."""


class CovolumeMismatch(TessellaError):
    """Common fundamental domain requested for lattices of different
    covolume."""


class NonRationalRatio(TessellaError):
    """Covolume ratio is not rational; unreachable for rational lattices,
    kept as an explicit guard."""


class DimensionTooLarge(TessellaError):
    """Operation only implemented up to dimension 3."""


class NotMeasurePreserving(TessellaError):
    """Planar matrix with determinant different from 1 cannot define a
    measure-preserving center-fixing automorphism."""


class WindowTooSmall(TessellaError):
    """Monte Carlo window does not contain the candidate's bounding box."""
