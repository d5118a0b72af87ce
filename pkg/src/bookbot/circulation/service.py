"""Loan workflow: verify a student token, list loans, renew for one week
or take a submitted book aboard, with every mutation event-sourced.

Live mutations and log replay share the same _apply step, so folding
the log over the seed state reconstructs the live state exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import replace

from ..symbology.scan import ScanResult, SymbolType
from ..weighscale import Decision, PayloadPolicy, accept_book
from . import tokens
from .eventlog import EventLog, read_events
from .models import (
    ACTIVE,
    EVENT_REISSUED,
    EVENT_SUBMITTED,
    EVENT_UNLOADED,
    SUBMITTED,
    BarcodeMismatch,
    Book,
    CorruptLog,
    Loan,
    LoanNotActive,
    LoanView,
    NotDocked,
    PayloadFull,
    Student,
    UnknownLoan,
    UnknownStudent,
)

log = logging.getLogger(__name__)

WEEK_MS = 7 * 24 * 3600 * 1000
DAY_MS = 24 * 3600 * 1000
WEIGHT_CROSSCHECK_TOLERANCE_G = 50


class LibraryService:
    def __init__(self, roster: dict[str, Student], catalog: dict[str, Book],
                 loans: list[Loan], secret: str, bot_id: str = "bookbot-1",
                 event_log: EventLog | None = None,
                 policy: PayloadPolicy | None = None):
        self.roster = dict(roster)
        self.catalog = dict(catalog)
        self.secret = secret
        self.bot_id = bot_id
        self.policy = policy if policy is not None else PayloadPolicy()
        self._log = event_log
        self.loans: dict[str, Loan] = {}
        for loan in loans:
            if loan.student_id not in self.roster:
                raise UnknownStudent(f"loan {loan.loan_id} references {loan.student_id}")
            if loan.barcode not in self.catalog:
                raise KeyError(f"loan {loan.loan_id} references unknown book {loan.barcode}")
            self.loans[loan.loan_id] = replace(loan)
        self.held_barcodes: list[str] = []

    # -- queries --

    @property
    def inventory_weight_g(self) -> int:
        return sum(self.catalog[b].weight_grams for b in self.held_barcodes)

    def held_books(self) -> list[Book]:
        return [self.catalog[b] for b in self.held_barcodes]

    def verify_student(self, scan, now_ms: int) -> Student:
        """Token text or a QR ScanResult to the roster record it names."""
        if isinstance(scan, ScanResult):
            if scan.symbol_type is not SymbolType.QRCODE:
                raise ValueError("student verification needs a QR scan")
            text = scan.text()
        else:
            text = str(scan)
        student_id, _ = tokens.verify_token(text, now_ms, self.secret)
        student = self.roster.get(student_id)
        if student is None:
            raise UnknownStudent(f"{student_id} is not on the roster")
        return student

    def list_loans(self, student_id: str, now_ms: int) -> list[LoanView]:
        if student_id not in self.roster:
            raise UnknownStudent(student_id)
        active = [l for l in self.loans.values()
                  if l.student_id == student_id and l.status == ACTIVE]
        active.sort(key=lambda l: (l.due_at_ms, l.loan_id))
        return [LoanView(replace(l), l.overdue(now_ms)) for l in active]

    def overdue_reminders(self, now_ms: int) -> list[tuple[str, str, int]]:
        out = []
        for loan in sorted(self.loans.values(), key=lambda l: l.loan_id):
            if loan.status == ACTIVE and loan.due_at_ms < now_ms:
                days = math.ceil((now_ms - loan.due_at_ms) / DAY_MS)
                out.append((loan.student_id, loan.loan_id, days))
        return out

    # -- mutations (validate, build document, apply, persist) --

    def renew(self, loan_id: str, now_ms: int, student_qr_data: str = "") -> tuple[Loan, dict]:
        loan = self._active_loan(loan_id)
        doc = {
            "event": EVENT_REISSUED,
            "loan_id": loan.loan_id,
            "student_qr_data": student_qr_data,
            "book_barcode": loan.barcode,
            "timestamp_ms": now_ms,
            "bot_id": self.bot_id,
            "due_at_ms": now_ms + WEEK_MS,
            "renewal_count": loan.renewal_count + 1,
        }
        self._commit(doc)
        return replace(self.loans[loan_id]), doc

    def submit(self, loan_id: str, book_scan, measured_delta_grams: float,
               now_ms: int, student_qr_data: str = "") -> dict:
        loan = self._active_loan(loan_id)
        if isinstance(book_scan, ScanResult):
            if book_scan.symbol_type is not SymbolType.EAN13:
                raise ValueError("book submission needs a barcode scan")
            scanned = book_scan.text()
        else:
            scanned = str(book_scan)
        if scanned != loan.barcode:
            raise BarcodeMismatch(f"scanned {scanned}, loan is for {loan.barcode}")
        book = self.catalog[loan.barcode]
        decision = accept_book(self.inventory_weight_g, book.weight_grams, self.policy)
        if decision is Decision.REJECT_THRESHOLD:
            raise PayloadFull(
                f"{self.inventory_weight_g} g + {book.weight_grams} g passes "
                f"{self.policy.threshold_grams} g")
        if abs(measured_delta_grams - book.weight_grams) > WEIGHT_CROSSCHECK_TOLERANCE_G:
            log.warning("measured delta %.0f g disagrees with catalog %d g for %s",
                        measured_delta_grams, book.weight_grams, book.barcode)
        doc = {
            "event": EVENT_SUBMITTED,
            "loan_id": loan.loan_id,
            "student_qr_data": student_qr_data,
            "book_barcode": loan.barcode,
            "timestamp_ms": now_ms,
            "bot_id": self.bot_id,
        }
        self._commit(doc)
        return doc

    def unload(self, now_ms: int, docked: bool) -> list[dict]:
        if not docked:
            raise NotDocked("bot must be docked at the library to unload")
        if not self.held_barcodes:
            return []
        doc = {
            "event": EVENT_UNLOADED,
            "timestamp_ms": now_ms,
            "bot_id": self.bot_id,
            "barcodes": list(self.held_barcodes),
        }
        self._commit(doc)
        return [doc]

    # -- event-sourcing core --

    def _active_loan(self, loan_id: str) -> Loan:
        loan = self.loans.get(loan_id)
        if loan is None:
            raise UnknownLoan(loan_id)
        if loan.status != ACTIVE:
            raise LoanNotActive(f"loan {loan_id} is {loan.status}")
        return loan

    def _commit(self, doc: dict) -> None:
        self._apply(doc)
        if self._log is not None:
            self._log.append(doc)

    def _apply(self, doc: dict) -> None:
        kind = doc["event"]
        if kind == EVENT_SUBMITTED:
            loan = self.loans[doc["loan_id"]]
            loan.status = SUBMITTED
            self.held_barcodes.append(doc["book_barcode"])
        elif kind == EVENT_REISSUED:
            loan = self.loans[doc["loan_id"]]
            loan.due_at_ms = doc["due_at_ms"]
            loan.renewal_count = doc["renewal_count"]
        elif kind == EVENT_UNLOADED:
            self.held_barcodes.clear()
        else:
            raise CorruptLog(f"unknown event kind {kind!r}")

    def state_fingerprint(self) -> tuple:
        """Comparable snapshot of everything replay must reproduce."""
        loans = tuple(sorted(
            (l.loan_id, l.student_id, l.barcode, l.issued_at_ms, l.due_at_ms,
             l.status, l.renewal_count) for l in self.loans.values()))
        return loans, tuple(self.held_barcodes)


def replay(roster, catalog, loans, secret: str, store_path,
           bot_id: str = "bookbot-1") -> LibraryService:
    """Reconstruct service state by folding the event log over the seeds."""
    service = LibraryService(roster, catalog, loans, secret, bot_id=bot_id)
    for doc in read_events(store_path):
        if doc.get("event") not in (EVENT_SUBMITTED, EVENT_REISSUED, EVENT_UNLOADED):
            raise CorruptLog(f"unknown event kind {doc.get('event')!r}")
        if "loan_id" in doc and doc["loan_id"] not in service.loans:
            raise CorruptLog(f"event references unknown loan {doc['loan_id']}")
        service._apply(doc)
    return service
