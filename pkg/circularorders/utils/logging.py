"""Progress lines for query handlers.

Handlers ``yield from log(...)``; the CLI writes what they yield to stderr.
Progress lines are never part of a result document.
"""

import datetime
import logging

logger = logging.getLogger(__name__)


def progress_line(message, verbose):
    """``message`` with a UTC timestamp, or None when not verbose."""
    if not verbose:
        return None
    stamp = datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%d %H:%M:%S")
    return f"[{stamp}] {message}"


def log(verbose, msg):
    logger.debug(msg)
    line = progress_line(msg, verbose)
    if line:
        yield line
