"""Exception taxonomy.

Every failure mode raised by this package derives from :class:`QpviError`,
so callers can catch one type at the CLI boundary.  Configuration problems
(bad parameters, out-of-range requests) are distinct from numerical
failures (precision exhaustion, singular fits, indeterminate steps); the
command-line driver maps the former to exit code 2 and the latter to 3.
"""


class QpviError(Exception):
    """Base class for all package errors."""


class ConfigError(QpviError):
    """Invalid configuration or request (maps to CLI exit code 2)."""


class NumericalError(QpviError):
    """Numerical failure at the requested precision (CLI exit code 3)."""


class DomainError(ConfigError):
    """Input outside the admissible parameter domain."""


class DegreeError(ConfigError):
    """Polynomial degree inconsistent with the requested operation."""


class PoleError(NumericalError):
    """Evaluation point collides with a pole of the weight."""


class PrecisionError(NumericalError):
    """Working precision cannot support the requested accuracy."""


class ConvergenceError(NumericalError):
    """An infinite product or series failed to converge."""


class SingularMeasureError(NumericalError):
    """Moment data is not positive definite; the recursion broke down."""


class FitError(NumericalError):
    """Linear fit for a spectral matrix did not reach the residual gate."""


class DegenerateError(ConfigError):
    """Parameter values collapse a generically nonzero quantity."""


class GaugeError(NumericalError):
    """Matrix entry lacks the degree structure the gauge normalization needs."""


class SingularGaugeError(NumericalError):
    """Gauge transform is non-invertible at these parameter values."""


class ConsistencyError(NumericalError):
    """Two independent routes to the same quantity disagree."""


class IndeterminacyError(NumericalError):
    """Evaluation hit a base point of the birational map."""


class ConstraintError(ConfigError):
    """Parameters violate the constraint variety of the dynamics."""


class ChartError(NumericalError):
    """Coordinate chart change is singular at the requested point."""


class SingularityError(NumericalError):
    """Trajectory reached a singularity of the differential system."""


class StepFailure(NumericalError):
    """Integrator could not complete a step within tolerances."""
