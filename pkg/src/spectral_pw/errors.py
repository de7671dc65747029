class SpectralError(ValueError):
    """Base class for all errors raised by spectral_pw."""


class DomainError(SpectralError):
    pass


class CapabilityError(SpectralError):
    pass


class SizeError(SpectralError):
    pass


class PreconditionError(SpectralError):
    pass


class UndersampledError(SpectralError):
    pass


class CoverageError(SpectralError):
    pass
