"""Miscellaneous utility functions."""

from typing import Dict, Tuple


def make_outcome(severity: str, code: str, details_text: str) -> Dict[str, str]:
    """Create a simple outcome mapping given a severity, code, and details."""
    return {"severity": severity, "code": code, "details": details_text}


def ceil_log2(value: int) -> int:
    """Return ⌈log2(value)⌉ for value >= 1, and 0 for value <= 1."""
    if value <= 1:
        return 0
    return (value - 1).bit_length()


def bits_to_bytes(bits: int) -> int:
    """Return the number of whole bytes needed to hold the given number of bits."""
    return (bits + 7) // 8


def popcount(mask: int) -> int:
    """Return the number of set bits in a non-negative integer."""
    return bin(mask).count("1")


def normalize_edge(u: int, v: int) -> Tuple[int, int]:
    """Return an unordered vertex pair in canonical (smaller, larger) order."""
    return (u, v) if u <= v else (v, u)
