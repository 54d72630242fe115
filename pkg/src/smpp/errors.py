"""Exception types shared across the package."""


class CapacityError(Exception):
    """Problem size exceeds what a component is willing to handle."""


class InfeasibleSelectionError(ValueError):
    """A selection violates at least one pairwise conflict."""
