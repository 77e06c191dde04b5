"""Deterministic 64-bit seed derivation (splitmix64)."""

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def mix64(*parts: int) -> int:
    """Mix integers into one 64-bit seed; order-sensitive, platform-stable."""
    h = 0
    for p in parts:
        h = _splitmix64(h ^ (p & _MASK))
    return h
