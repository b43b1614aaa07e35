"""Exception types shared across the package."""


class BJKnotError(Exception):
    """Base class for all package errors."""


class CodecError(BJKnotError, ValueError):
    """A text code failed to parse or violates a structural invariant."""


class MalformedText(CodecError):
    pass


class OddEntry(CodecError):
    pass


class ZeroEntry(CodecError):
    pass


class DuplicateMagnitude(CodecError):
    """A magnitude repeats, or the magnitudes do not form {2, 4, ..., 2n}."""


class NonRealizable(CodecError):
    """The pairing admits no planar embedding as a closed curve."""


class MultiComponentClosure(CodecError):
    """A braid closure (or traversal) has more than one component."""


class InvalidDiagram(BJKnotError):
    """Adjacency data does not describe a single planar closed curve."""


class InapplicableMove(BJKnotError):
    """A move record does not apply to the given diagram."""


class OrbitCapExceeded(BJKnotError):
    """A flype orbit walk exceeded its node cap."""


class ResourceLimit(BJKnotError):
    """A computation exceeded a configured size or time budget."""


class MalformedLine(BJKnotError, ValueError):
    """A line of a table or ledger file does not parse."""


class NonRealizableCode(NonRealizable):
    """A table line carries a DT code with no planar embedding."""


class InvertedBounds(BJKnotError, ValueError):
    """A ledger line has lower bound above upper bound."""


class IdentificationGap(BJKnotError):
    """A pipeline met a diagram it could not name against its table."""


class MissingBJRecord(BJKnotError):
    """A worklist pass needed a record the provider cannot supply."""


class MissingFact(BJKnotError):
    """A bound lookup needed a ledger entry that is not present."""


class LedgerConflict(BJKnotError):
    """Ingested facts contradict each other or a computed value."""
