"""Exception types raised across the package."""


class ShellError(Exception):
    """Base class for all package errors."""


class DegenerateFrame(ShellError):
    """The coordinate frame has collapsed: det(G_ij) is below threshold."""


class OutOfDomain(ShellError):
    """A coordinate point lies outside the chart's parameter rectangle."""


class StencilOutOfDomain(OutOfDomain):
    """A finite-difference stencil reaches outside the chart's parameter rectangle."""


class OrientationReversed(ShellError):
    """The motion flips orientation (det F <= 0)."""


class ConfigInvalid(ShellError):
    """A case configuration failed validation."""


class UnknownSuite(ShellError):
    """A verification suite name was not recognised."""
