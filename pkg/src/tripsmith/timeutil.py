"""Clock-time helpers.

All schedule arithmetic runs on whole minutes since midnight; "HH:MM" strings
are only a wire format. Overnight spans are not representable on purpose.
"""

from __future__ import annotations

import re

from .errors import InputError

_TIME_RE = re.compile(r"^(\d{1,2}):(\d{2})$")


def to_minutes(text: str) -> int:
    """Parse "HH:MM" into minutes since midnight."""
    m = _TIME_RE.match(text.strip()) if isinstance(text, str) else None
    if not m:
        raise InputError(f"invalid clock time: {text!r}")
    hours, minutes = int(m.group(1)), int(m.group(2))
    if hours > 23 or minutes > 59:
        raise InputError(f"clock time out of range: {text!r}")
    return hours * 60 + minutes


def to_hhmm(minutes: int) -> str:
    """Format minutes since midnight as zero-padded "HH:MM"."""
    if not 0 <= minutes <= 24 * 60 - 1:
        raise InputError(f"minutes out of range: {minutes}")
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def is_hhmm(text) -> bool:
    if not isinstance(text, str):
        return False
    m = _TIME_RE.match(text.strip())
    return bool(m) and int(m.group(1)) <= 23 and int(m.group(2)) <= 59
