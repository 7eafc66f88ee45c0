"""Exception hierarchy for vortexlab.

Library code raises these; only the command-line layer catches
:class:`VortexLabError` and turns it into an exit status.
"""

from __future__ import annotations


class VortexLabError(Exception):
    """Base class for every error raised by the package."""


class InvalidConfigError(VortexLabError, ValueError):
    """A configuration or value type violates its invariants."""


class DegenerateConfigError(VortexLabError):
    """Vortices coincide or sit on the boundary circle."""


class PairingInvalidError(VortexLabError):
    """Two configurations cannot be paired for the minimal-connection distance."""


class OutsideDomainError(VortexLabError, ValueError):
    """An evaluation point lies on or outside the unit circle."""


class NoConvergenceError(VortexLabError):
    """An iterative solve or an extrapolation did not converge."""


class InvalidParamsError(VortexLabError, ValueError):
    """Solver parameters are out of range."""


class NodeOnVortexError(VortexLabError):
    """A sampling node coincides with a vortex center."""


class GridTooCoarseError(VortexLabError):
    """The grid has too few nodes for the difference stencils."""


class LinearSolveError(VortexLabError):
    """A linear system could not be factorized or solved."""


class GridMismatchError(VortexLabError):
    """Two fields live on different grids."""


class DegenerateFitError(VortexLabError):
    """A regression has too few or invalid points."""


class GuardTriggeredError(VortexLabError):
    """A run needed to reach its final time but a separation guard stopped it."""


class FieldFormatError(VortexLabError):
    """A binary field file is malformed."""


class TrajectoryFormatError(VortexLabError):
    """A trajectory CSV file is malformed."""


class ScenarioError(VortexLabError):
    """A scenario file cannot be parsed or validated."""
