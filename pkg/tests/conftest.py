import random

import pytest

from bookbot.circulation import Book, Loan, Student

SECRET = "0123456789abcdef0123456789abcdef"

T0_MS = 1_700_000_000_000
DAY = 86_400_000


@pytest.fixture
def secret():
    return SECRET


@pytest.fixture
def rng():
    return random.Random(0xB00B07)


@pytest.fixture
def roster():
    return {
        "alice2019": Student("alice2019", "Alice Tran", "A Block"),
        "bob2020": Student("bob2020", "Bob Okafor", "C Block"),
    }


@pytest.fixture
def catalog():
    return {
        "5901234123457": Book("5901234123457", "Signals and Systems", 800),
        "9780306406157": Book("9780306406157", "Data Networks", 950),
        "4006381333931": Book("4006381333931", "Field Guide to Pencils", 400),
    }


def make_loans():
    return [
        Loan("L1", "alice2019", "5901234123457", T0_MS - 14 * DAY, T0_MS - 2 * DAY),
        Loan("L2", "alice2019", "9780306406157", T0_MS - 3 * DAY, T0_MS + 1 * DAY),
        Loan("L3", "bob2020", "4006381333931", T0_MS - 5 * DAY, T0_MS + 2 * DAY),
    ]


@pytest.fixture
def loans():
    return make_loans()
