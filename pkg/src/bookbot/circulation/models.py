"""Circulation domain records and error types."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..symbology.ean13 import ean13_check_digit

ACTIVE = "active"
SUBMITTED = "submitted"

EVENT_SUBMITTED = "submitted"
EVENT_REISSUED = "re-issued"
EVENT_UNLOADED = "unloaded"


class MalformedToken(ValueError):
    pass

class BadMac(ValueError):
    pass

class TokenExpired(ValueError):
    pass

class UnknownStudent(KeyError):
    pass

class UnknownLoan(KeyError):
    pass

class LoanNotActive(ValueError):
    pass

class BarcodeMismatch(ValueError):
    pass

class PayloadFull(ValueError):
    """Inventory would pass the weight threshold; warning raised."""

class NotDocked(ValueError):
    pass

class CorruptLog(ValueError):
    pass


@dataclass(frozen=True)
class Student:
    student_id: str
    display_name: str
    hostel: str = ""

    def __post_init__(self):
        if not self.student_id:
            raise ValueError("student_id must be non-empty")


@dataclass(frozen=True)
class Book:
    barcode: str
    title: str
    weight_grams: int

    def __post_init__(self):
        if len(self.barcode) != 13 or not self.barcode.isdigit():
            raise ValueError(f"barcode {self.barcode!r} is not 13 digits")
        if int(self.barcode[12]) != ean13_check_digit(self.barcode[:12]):
            raise ValueError(f"barcode {self.barcode} fails its check digit")
        if self.weight_grams <= 0:
            raise ValueError("book weight must be positive")


@dataclass
class Loan:
    loan_id: str
    student_id: str
    barcode: str
    issued_at_ms: int
    due_at_ms: int
    status: str = ACTIVE
    renewal_count: int = 0

    def __post_init__(self):
        if self.due_at_ms <= self.issued_at_ms:
            raise ValueError("due date must follow issue date")
        if self.status not in (ACTIVE, SUBMITTED):
            raise ValueError(f"unknown loan status {self.status!r}")

    def overdue(self, now_ms: int) -> bool:
        return self.status == ACTIVE and now_ms > self.due_at_ms


@dataclass(frozen=True)
class LoanView:
    loan: Loan
    overdue: bool
