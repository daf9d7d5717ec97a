"""Exception hierarchy shared across the package.

Every domain failure maps to one of these; the HTTP layer translates them
to (status, code) pairs and the CLI to exit code 1.
"""


class CasebookError(Exception):
    """Base class for all domain errors."""

    code = "error"


# --- text pipeline ---

class EmptyAfterCleaning(CasebookError):
    code = "empty_after_cleaning"


class EmptyFile(CasebookError):
    code = "empty_file"


class MalformedLine(CasebookError):
    code = "malformed_line"

    def __init__(self, line_no: int, detail: str = ""):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {detail or 'malformed'}")


class DimensionMismatch(CasebookError):
    code = "dimension_mismatch"

    def __init__(self, line_no: int, expected: int, got: int):
        self.line_no = line_no
        self.expected = expected
        self.got = got
        super().__init__(f"line {line_no}: expected {expected} components, got {got}")


class NoCoverage(CasebookError):
    """No token of the document exists in the embedding table."""

    code = "no_coverage"


# --- similarity ---

class ZeroVector(CasebookError):
    code = "zero_vector"


class EmptySet(CasebookError):
    code = "empty_set"


class ZeroNorm(CasebookError):
    code = "zero_norm"


# --- case memory ---

class SchemaError(CasebookError):
    code = "schema_error"

    def __init__(self, record_index: int, missing_key: str):
        self.record_index = record_index
        self.missing_key = missing_key
        super().__init__(f"record {record_index}: missing key {missing_key!r}")


class InvalidPersonality(CasebookError):
    code = "invalid_personality"

    def __init__(self, record_index: int, value: str):
        self.record_index = record_index
        self.value = value
        super().__init__(f"record {record_index}: invalid personality code {value!r}")


class DuplicateRecord(CasebookError):
    code = "duplicate_record"


class NotAccepted(CasebookError):
    code = "not_accepted"


class CorruptStore(CasebookError):
    code = "corrupt_store"


class EmptyCaseBase(CasebookError):
    code = "empty_case_base"


# --- review workflow ---

class AlreadyVoted(CasebookError):
    code = "already_voted"


class TicketClosed(CasebookError):
    code = "ticket_closed"


class UnknownExpert(CasebookError):
    code = "unknown_expert"


class UnknownTicket(CasebookError):
    code = "unknown_ticket"


class JustificationRequired(CasebookError):
    code = "justification_required"


# --- ingestion ---

class EmptyDump(CasebookError):
    code = "empty_dump"


# --- config ---

class ConfigError(CasebookError):
    code = "config_error"
