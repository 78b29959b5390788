"""Exception taxonomy shared across the package.

Every error raised by adaptaug derives from AdaptaugError so callers can
catch the whole family at stage boundaries.
"""


class AdaptaugError(Exception):
    """Base class for all adaptaug errors."""


# --- corpus / file ingestion ---

class CorpusError(AdaptaugError):
    pass


class MissingField(CorpusError):
    pass


class UnknownField(CorpusError):
    pass


class TokenOutOfRange(CorpusError):
    pass


class DuplicateId(CorpusError):
    pass


class EmptyDataset(CorpusError):
    pass


class InvalidConfig(AdaptaugError):
    pass


# --- synthesis ---

class SynthesisError(AdaptaugError):
    pass


class EmptyQuestion(SynthesisError):
    pass


class MalformedTeacherOutput(SynthesisError):
    pass


class TeacherUnavailable(SynthesisError):
    pass


# --- model ---

class ModelError(AdaptaugError):
    pass


class SequenceTooLong(ModelError):
    pass


class IndexOutOfRange(ModelError):
    pass


class DegenerateEmbedding(ModelError):
    pass


class CheckpointMissing(ModelError):
    pass


class CheckpointVersionMismatch(ModelError):
    pass


# --- training ---

class TrainingError(AdaptaugError):
    pass


class MissingAugmentation(TrainingError):
    pass


class AlignmentMismatch(TrainingError):
    pass


class ShapeMismatch(TrainingError):
    pass


class NonUnitNorm(TrainingError):
    pass


class NonFiniteLoss(TrainingError):
    pass


# --- division ---

class DivisionError(AdaptaugError):
    pass


class UnknownDataset(DivisionError):
    pass


class MissingLabel(DivisionError):
    pass


class InsufficientHeldout(DivisionError):
    pass


# --- evaluation ---

class EvalError(AdaptaugError):
    pass


class EmptyPool(EvalError):
    pass


class EmptyReport(EvalError):
    pass


class IoFailure(EvalError):
    pass
