"""Exception hierarchy shared by all riskreg modules."""


class RiskregError(Exception):
    """Base class for all riskreg errors."""


class RangeError(RiskregError, ValueError):
    """A field value falls outside its allowed range."""


class DomainError(RiskregError, ValueError):
    """An input is outside the operation's domain (e.g. non-positive rate)."""


class NotApplicableError(RiskregError):
    """A control's applicability tags match neither the threat nor the vulnerability."""


class UnknownEntryError(RiskregError, LookupError):
    """A plan or request references a register entry id that does not exist."""

    def __init__(self, entry_id):
        super().__init__(f"unknown register entry id: {entry_id}")
        self.entry_id = entry_id


class UnknownControlError(RiskregError, LookupError):
    """A plan or request references a control id that does not exist."""

    def __init__(self, control_id):
        super().__init__(f"unknown control id: {control_id}")
        self.control_id = control_id


class ParseError(RiskregError, ValueError):
    """Input text could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownEnumValueError(ParseError):
    """A parsed field names an enum member that does not exist."""
