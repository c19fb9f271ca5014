"""Exception taxonomy shared across the package.

Validation errors mean the inputs violated a structural or physical
precondition; numerical errors mean the inputs were acceptable but an
algorithm failed to reach its target.  The CLI maps the former to exit
code 2 and the latter to exit code 3.
"""

from __future__ import annotations


class KrausTreeError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(KrausTreeError):
    """Input failed a structural or physical precondition."""


class NumericalError(KrausTreeError):
    """An algorithm failed to reach its numerical target."""


class NotSquare(ValidationError):
    """Matrix is not square."""


class NotHermitian(ValidationError):
    """Matrix deviates from Hermitian symmetry beyond tolerance."""


class NegativeEigenvalue(ValidationError):
    """Matrix has an eigenvalue below the positive-semidefinite clamp."""


class Singular(ValidationError):
    """Matrix is numerically singular and no regularization was requested."""


class NotIsometry(ValidationError):
    """Columns are not orthonormal within tolerance."""


class NotDensityMatrix(ValidationError):
    """Matrix is not Hermitian, positive semidefinite, and unit trace."""


class DimensionMismatch(ValidationError):
    """Operands act on different or incompatible spaces."""


class IncompleteChannel(ValidationError):
    """Kraus operators do not satisfy the completeness relation."""


class NotUnitary(ValidationError):
    """Matrix is not unitary within tolerance."""


class StepTooLarge(ValidationError):
    """Time step too coarse for the first-order jump expansion."""


class NotContraction(ValidationError):
    """Operator increases norm where a contraction is required."""


class SupportMismatch(ValidationError):
    """Operator support does not match the declared support projector."""


class NotProjector(ValidationError):
    """Matrix is not an orthogonal projector within tolerance."""


class RankOverflow(ValidationError):
    """Operation rank exceeds what the requested structure can hold."""


class BadParameter(ValidationError):
    """Scalar parameter outside its admissible range."""


class DegenerateState(ValidationError):
    """State carries no usable amplitude for the requested construction."""


class InvalidProtocol(ValidationError):
    """Requested protocol name or structure is not recognized."""


class UnsupportedDim(ValidationError):
    """No operator basis or frame is defined for this dimension."""


class NotPSD(ValidationError):
    """Matrix is not positive semidefinite within tolerance."""


class BasisMismatch(ValidationError):
    """Operator basis size or dimension does not match the data."""


class OutOfRange(ValidationError):
    """Value escapes the interval its definition guarantees."""


class InvalidState(ValidationError):
    """State vector or density matrix fails its invariants."""


class TruncationTooSmall(ValidationError):
    """Fock-space truncation too small for the requested amplitude."""


class NoConvergence(NumericalError):
    """Iterative algorithm exhausted its budget before converging."""


class FitFailed(NumericalError):
    """Data does not support the requested fit model."""


class SingularDesign(NumericalError):
    """Tomography design matrix is numerically singular."""


class SingularFrame(NumericalError):
    """Measurement frame matrix is numerically singular."""
