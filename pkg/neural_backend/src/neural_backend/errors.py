class NeuralBackendError(Exception):
    """Base class for this package's errors."""


class DatasetTooSmall(NeuralBackendError):
    pass


class ArtifactError(NeuralBackendError):
    pass
