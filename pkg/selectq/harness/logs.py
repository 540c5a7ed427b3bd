"""
LOGS

Root logging set-up for the command line. Records are written through
`tqdm.write` so that they do not break an active progress bar.
"""

import logging
import sys

from tqdm import tqdm

LOG_FORMAT = "[%(levelname)-8s] %(name)s: %(message)s"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class TqdmHandler(logging.Handler):
    """Emits records with `tqdm.write` on stderr."""

    def emit(self, record):
        try:
            tqdm.write(self.format(record), file=sys.stderr)
        except Exception:  # pylint: disable=broad-except
            self.handleError(record)


def configure_logging(level="INFO"):
    """Replaces the root handlers by one TqdmHandler at `level`; returns the handler."""
    if isinstance(level, str):
        if level.upper() not in LEVELS:
            raise ValueError(f"Unknown log level {level!r}; expected one of {', '.join(LEVELS)}.")
        level = getattr(logging, level.upper())
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = TqdmHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    return handler
