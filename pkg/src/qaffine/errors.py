class QAffineError(Exception):
    """Base class for errors raised by qaffine."""


class DimensionError(QAffineError, ValueError):
    """Shapes or dimensions of inputs do not agree."""


class NotHermitianError(QAffineError, ValueError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class ParameterError(QAffineError, ValueError):
    """A channel parameter is outside its allowed range."""
