class GTAError(ValueError):
    """Base class for all model and data errors raised by gtapl."""


class DomainError(GTAError):
    pass


class GeometryError(DomainError):
    pass


class InsufficientDataError(GTAError):
    pass


class RankDeficiencyError(GTAError):
    pass


class PartialDataError(InsufficientDataError):
    def __init__(self, missing):
        self.missing = missing
        super().__init__(f"no usable {missing.value} samples in input")
