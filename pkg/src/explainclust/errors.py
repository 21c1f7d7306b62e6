"""Exception types shared across the package."""


class ExplainClustError(Exception):
    """Base class for all package errors."""


class DatasetError(ExplainClustError, ValueError):
    """Malformed or invalid dataset input."""


class EmptyFileError(DatasetError):
    pass


class RaggedRowError(DatasetError):
    pass


class NonNumericError(DatasetError):
    pass


class NonFiniteError(DatasetError):
    pass


class TreeError(ExplainClustError, ValueError):
    """Structurally invalid tree or malformed tree JSON."""


class EmptyClusterError(ExplainClustError, ValueError):
    pass


class GraphError(ExplainClustError, ValueError):
    """Invalid graph, cover, or generator parameters."""


class LimitExceeded(ExplainClustError):
    """An exact solver was asked to run beyond its configured size limits."""
