"""Exception and warning types shared across the toolkit."""


class AccexError(Exception):
    """Base class for every error this package raises on bad input."""


class InvalidProfile(AccexError):
    """Profile data violates a structural invariant (geometry, ranges, counts)."""


class MismatchedGeometry(AccexError):
    """Histograms being merged do not share low/high/bin-count/rate."""


class BadMagic(AccexError):
    """Binary profile does not start with the expected magic bytes."""


class UnsupportedVersion(AccexError):
    """Binary profile header carries a version this reader does not handle."""


class TruncatedRecord(AccexError):
    """Binary profile ends in the middle of the header or a record body."""


class UnknownTag(AccexError):
    """Binary profile contains a record tag the format does not define."""


class ParseError(AccexError):
    """Text input could not be parsed; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OverlappingSymbols(AccexError):
    """Two symbols claim overlapping address ranges."""


class EmptyTable(AccexError):
    """A symbol map contained no symbols."""


class SchemaVersionUnsupported(AccexError):
    """Structured profile document declares an unknown schema version."""


class NoSymbols(AccexError):
    """Graph construction needs at least one symbol."""


class CycleInCondensation(AccexError):
    """Internal consistency failure: condensation was not acyclic."""


class IdOutOfRange(AccexError):
    """An edit referenced a record id outside 1..N."""


class ValuesLengthMismatch(AccexError):
    """A per-id values array does not cover the edited id range exactly."""


class InvalidEdit(AccexError):
    """Replacement values are negative or otherwise unusable."""


class ArcNotFound(AccexError):
    """No caller/callee arc with the given names exists in the profile."""


class UnknownTarget(AccexError):
    """Sweep target name is not a known function."""


class ZeroSelfTime(AccexError):
    """Sweep target has no self time to scale."""


class InconsistentArcSamples(AccexError):
    """Per-arc sample groups are partial or disagree with histogram totals."""


class ScenarioError(AccexError):
    """A scenario document failed schema validation."""


class SpecError(AccexError):
    """A workload spec is malformed (unknown names, non-quantum times)."""


class CycleUnsupported(AccexError):
    """The analytic oracle only handles acyclic workloads."""


class NonIntegralSamplesWarning(UserWarning):
    """A requested time is not a whole number of samples; it was rounded."""


class SkippedRecordWarning(UserWarning):
    """A binary profile record was recognized but intentionally ignored."""
