"""Deterministic stream derivation from a single user seed.

Every randomized operation derives its own Philox stream from
(seed, label).  Philox is counter-based, so a stream can be split at
any counter offset without generating the skipped values, which keeps
chunked and parallel runs identical to serial ones.
"""

from __future__ import annotations

import hashlib

import numpy as np

# one Philox counter block yields this many doubles
BLOCK_DOUBLES = 4


def stream_key(seed: int, label: str) -> np.ndarray:
    """128-bit Philox key derived from (seed, label); stable across runs."""
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return np.frombuffer(digest[:16], dtype="<u8").astype(np.uint64)


def stream(seed: int, label: str, block_offset: int = 0) -> np.random.Generator:
    """Generator positioned `block_offset` counter blocks into the stream."""
    bg = np.random.Philox(key=stream_key(seed, label))
    if block_offset:
        bg.advance(block_offset)
    return np.random.Generator(bg)


def block_uniforms(seed: int, label: str, start: int, count: int) -> np.ndarray:
    """Uniform doubles for counter blocks [start, start+count), shape (count, 4).

    Row i holds exactly the doubles a scalar caller would see for block
    start+i, so batched and one-at-a-time consumers agree bit for bit.
    """
    return stream(seed, label, block_offset=start).random((count, BLOCK_DOUBLES))
