"""Deterministic, splittable randomness.

Every stream is a plain ``random.Random`` whose seed is derived by hashing a
root seed together with a label path, so any sub-stream (per party, per grid
point, per trial) can be re-created independently of the others.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(root: int, *labels: object) -> int:
    """Derive a 128-bit child seed from a root seed and a label path."""
    material = str(int(root)) + "".join(f"/{label}" for label in labels)
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "big")


def derive_rng(root: int, *labels: object) -> random.Random:
    """A fresh deterministic generator for (root, labels)."""
    return random.Random(derive_seed(root, *labels))
