"""Exception hierarchy shared across the harness."""


class AdvMetricsError(Exception):
    """Base class for all harness errors."""


class EmptyInput(AdvMetricsError):
    """An operation received empty or whitespace-only text."""


class Unsupported(AdvMetricsError):
    """A numeric literal is malformed or outside the supported range."""


class NotApplicable(AdvMetricsError):
    """A perturbation template does not apply to the given sentence."""

    def __init__(self, phenomenon, reason: str):
        self.phenomenon = phenomenon
        self.reason = reason
        super().__init__(f"{phenomenon}: {reason}")


class MissingParaphrase(AdvMetricsError):
    """A seed lacks the paraphrase field required by the chosen mode."""


class MissingField(AdvMetricsError):
    """A seed lacks a field required by the suite construction."""


class WrongArity(AdvMetricsError):
    """An operation received the wrong number of inputs."""


class InvalidTriple(AdvMetricsError):
    """Probabilities of an inference triple violate the simplex invariants."""


class MissingDirection(AdvMetricsError):
    """A pooling strategy needs the reverse-direction triple but none was given."""


class CoverageGap(AdvMetricsError):
    """A response set does not exactly cover the expected ids."""

    def __init__(self, missing=(), extra=()):
        self.missing = tuple(sorted(missing))
        self.extra = tuple(sorted(extra))
        parts = []
        if self.missing:
            parts.append(f"missing ids: {', '.join(self.missing[:10])}"
                         + (" ..." if len(self.missing) > 10 else ""))
        if self.extra:
            parts.append(f"unexpected ids: {', '.join(self.extra[:10])}"
                         + (" ..." if len(self.extra) > 10 else ""))
        super().__init__("; ".join(parts) or "coverage mismatch")


class ParseError(AdvMetricsError):
    """A protocol file contains malformed lines."""

    def __init__(self, path, problems):
        self.path = str(path)
        self.problems = list(problems)  # (line_number, message)
        head = "; ".join(f"line {n}: {m}" for n, m in self.problems[:5])
        super().__init__(f"{self.path}: {head}")


class ScorerFailed(AdvMetricsError):
    """An external scorer process exited nonzero."""

    def __init__(self, command, returncode, stderr_tail):
        self.command = command
        self.returncode = returncode
        self.stderr_tail = stderr_tail
        super().__init__(
            f"scorer exited {returncode}: {command}\n{stderr_tail}")


class ScorerTimeout(AdvMetricsError):
    """An external scorer exceeded its time budget."""


class UnknownScorer(AdvMetricsError):
    """No builtin scorer is registered under the requested name."""


class EmptyBatch(AdvMetricsError):
    """A score batch has no entries."""


class NotNormalized(AdvMetricsError):
    """combine() requires min-max normalized inputs."""


class DegenerateRange(AdvMetricsError):
    """Stored min/max cannot be applied because max <= min."""


class EmptyIntersection(AdvMetricsError):
    """Two score batches share no instance ids."""


class IdMismatch(AdvMetricsError):
    """Two score batches must cover identical instance ids."""


class LengthMismatch(AdvMetricsError):
    """Paired vectors differ in length (or are shorter than 2)."""


class ConstantVector(AdvMetricsError):
    """A correlation was requested for a constant vector."""


class AllTied(AdvMetricsError):
    """Rank correlation is undefined when one vector is entirely tied."""


class EmptyJoin(AdvMetricsError):
    """Metric scores and judgments share no (segment, system) keys."""


class TooFewSystems(AdvMetricsError):
    """System-level correlation needs at least two systems."""


class TooFewDatasets(AdvMetricsError):
    """Leave-one-out selection needs at least two datasets."""


class IncompleteGrid(AdvMetricsError):
    """A winning-frequency cell is missing some pooling strategies."""
