"""Exception hierarchy shared across the toolkit.

Every error that callers are expected to branch on carries a stable
``code`` string; the CLI prints it and maps it to exit status 1.
"""


class GojunError(Exception):
    """Base class for all toolkit errors."""

    code = "ERROR"


class FormatError(GojunError):
    """Malformed input file; carries the offending line number."""

    code = "FORMAT"

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        super().__init__(where + message)


class InvariantError(GojunError):
    """A data-model invariant does not hold; names it and the sentence."""

    code = "INVARIANT"

    def __init__(self, invariant: str, message: str, sentence_id: str | None = None):
        self.invariant = invariant
        self.sentence_id = sentence_id
        tag = f" [sentence {sentence_id}]" if sentence_id else ""
        super().__init__(f"{invariant}: {message}{tag}")


class TransformError(GojunError):
    code = "TRANSFORM"


class NoScrambleSiteError(TransformError):
    code = "NO_SCRAMBLE_SITE"


class TooManyOrdersError(TransformError):
    code = "TOO_MANY_ORDERS"

    def __init__(self, k: int, cap: int):
        self.k = k
        self.cap = cap
        super().__init__(f"{k} children give {k}! orderings, above the cap of {cap}")


class RoleNotUniqueError(TransformError):
    code = "ROLE_NOT_UNIQUE"


class UnsupportedParticleError(TransformError):
    code = "UNSUPPORTED_PARTICLE"


class ConjunctionInitialError(TransformError):
    code = "CONJUNCTION_INITIAL"


class NotRootArgumentError(TransformError):
    code = "NOT_ROOT_ARGUMENT"


class ScoringError(GojunError):
    code = "SCORING"


class ExternalScorerDownError(ScoringError):
    code = "EXTERNAL_SCORER_DOWN"


class ProtocolError(ScoringError):
    code = "PROTOCOL_ERROR"


class StatsError(GojunError):
    code = "STATS"


class DegenerateVarianceError(StatsError):
    code = "DEGENERATE_VARIANCE"


class ZeroJointError(StatsError):
    code = "ZERO_JOINT"


class ExperimentError(GojunError):
    code = "EXPERIMENT"


class EmptyEvalError(ExperimentError):
    code = "EMPTY_EVAL"


class EmptyGroupError(ExperimentError):
    code = "EMPTY_GROUP"
