"""Library circulation: students, loans, submissions and the event log."""

from .eventlog import EventLog, encode_document, read_events
from .models import (
    ACTIVE,
    EVENT_REISSUED,
    EVENT_SUBMITTED,
    EVENT_UNLOADED,
    SUBMITTED,
    BadMac,
    BarcodeMismatch,
    Book,
    CorruptLog,
    Loan,
    LoanNotActive,
    LoanView,
    MalformedToken,
    NotDocked,
    PayloadFull,
    Student,
    TokenExpired,
    UnknownLoan,
    UnknownStudent,
)
from .service import DAY_MS, WEEK_MS, LibraryService, replay
from .tokens import mint_token, verify_token

__all__ = [
    "ACTIVE", "BadMac", "BarcodeMismatch", "Book", "CorruptLog", "DAY_MS",
    "EVENT_REISSUED", "EVENT_SUBMITTED", "EVENT_UNLOADED", "EventLog",
    "LibraryService", "Loan", "LoanNotActive", "LoanView", "MalformedToken",
    "NotDocked", "PayloadFull", "SUBMITTED", "Student", "TokenExpired",
    "UnknownLoan", "UnknownStudent", "WEEK_MS", "encode_document",
    "mint_token", "read_events", "replay", "verify_token",
]
