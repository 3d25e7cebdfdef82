"""Atomic file writes: write to a temp file in the target directory, then rename."""

from __future__ import annotations

import os
import tempfile
from contextlib import contextmanager
from pathlib import Path


@contextmanager
def atomic_write(path, newline: str | None = None):
    """Open a temp file for writing and rename it onto `path` on success.

    The temp file lives next to the target so os.replace is atomic; on any
    exception it is removed and the target is left untouched.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline=newline) as handle:
            yield handle
        os.replace(tmp_name, target)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


@contextmanager
def open_destination(destination, newline: str | None = None):
    """Yield a writable handle: the destination itself if it is one, else an
    atomic write to the given path."""
    if hasattr(destination, "write"):
        yield destination
    else:
        with atomic_write(destination, newline=newline) as handle:
            yield handle
