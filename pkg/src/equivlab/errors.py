"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range input (unknown variable, bad shape, bad range)."""


class ConstraintError(ValueError):
    """A rate or feasibility bound of a region is violated."""


class ResourceError(RuntimeError):
    """A memory or enumeration guard would be exceeded."""
