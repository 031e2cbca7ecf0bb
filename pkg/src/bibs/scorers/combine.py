"""Softmax helpers and the bidirectional output combiner."""

from __future__ import annotations

import numpy as np


def log_softmax(logits: np.ndarray) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    m = logits.max()
    shifted = logits - m
    return shifted - np.log(np.exp(shifted).sum())


def bidir_combine(fwd_logits: np.ndarray, bwd_logits: np.ndarray) -> np.ndarray:
    """Log-distribution of a bidirectional softmax output from its two halves.

    ``softmax(a + b)`` is the elementwise product ``softmax(a) * softmax(b)``
    renormalised, so a bidirectional output layer with bias ``b_y`` can be
    evaluated from two oppositely directed unidirectional outputs that each
    carry ``b_y / 2``. Log-distributions are valid inputs too, since the
    normaliser of each half cancels.
    """
    a = np.asarray(fwd_logits, dtype=np.float64)
    b = np.asarray(bwd_logits, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"logit vectors must be 1-d and equal length, got {a.shape} and {b.shape}")
    return log_softmax(a + b)


def split_bias_halves(
    fwd_scores: np.ndarray, bwd_scores: np.ndarray, b_y: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Split a shared output bias evenly between the two directional scores."""
    half = np.asarray(b_y, dtype=np.float64) / 2.0
    return np.asarray(fwd_scores) + half, np.asarray(bwd_scores) + half
