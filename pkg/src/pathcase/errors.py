"""Exception hierarchy shared across the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


class EmptyDocument(EngineError):
    pass


class EmptyInput(EngineError):
    pass


class InvalidConfig(EngineError):
    pass


class IntegrityError(EngineError):
    pass


class IoError(EngineError):
    pass


class ZeroVector(EngineError):
    pass


class DimensionMismatch(EngineError):
    pass


class DuplicateId(EngineError):
    pass


class CorruptIndex(EngineError):
    pass


class ProviderUnavailable(EngineError):
    pass


class BudgetExhausted(EngineError):
    pass


class ParseFailure(EngineError):
    pass


class UnmaskedInput(EngineError):
    pass


class EmptyCandidateSet(EngineError):
    pass


class InvalidCase(EngineError):
    pass


class InvalidInput(EngineError):
    pass
