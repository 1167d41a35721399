"""Small internal helpers shared across modules."""

from __future__ import annotations

import io
import os

import numpy as np
from scipy.special import expit

from .errors import DimensionError, NumericalError

# Open interval (0, 1) clamp bounds for probabilities: smallest positive
# normal double and the largest double strictly below 1.
PROB_FLOOR = np.finfo(float).tiny
PROB_CEIL = np.nextafter(1.0, 0.0)


def as_coefficients(x, k: int | None = None, name: str = "coefficients") -> np.ndarray:
    """Validate a coefficient vector: 1-D, float, finite, optional length."""
    arr = np.asarray(x, dtype=float).ravel()
    if k is not None and arr.shape != (k,):
        raise DimensionError(f"{name} has length {arr.shape[0]}, expected {k}")
    if not np.all(np.isfinite(arr)):
        raise NumericalError(f"{name} contains non-finite entries", iterate=arr)
    return arr


def clipped_probs(z) -> np.ndarray:
    """expit(z) clamped into the open interval (0, 1)."""
    return np.clip(expit(z), PROB_FLOOR, PROB_CEIL)


def atomic_write_text(path, text: str) -> None:
    """Write a file via temp-and-rename so interrupted runs leave no partials."""
    path = os.fspath(path)
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


class CsvBuffer:
    """In-memory CSV builder flushed atomically to disk."""

    def __init__(self):
        self._buf = io.StringIO()

    def writerow(self, fields) -> None:
        self._buf.write(",".join(str(f) for f in fields) + "\n")

    def flush_to(self, path) -> None:
        atomic_write_text(path, self._buf.getvalue())


def fmt_float(x) -> str:
    """Shortest decimal string that round-trips the exact double."""
    return repr(float(x))
