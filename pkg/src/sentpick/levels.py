"""CEFR proficiency scale helpers.

The full scale is A1..C2; the sentence classifier only predicts A1..C1,
but word lists may grade lemmas up to C2.
"""

LEVELS = ("A1", "A2", "B1", "B2", "C1", "C2")
CLASSIFIER_LEVELS = ("A1", "A2", "B1", "B2", "C1")

_ORDINALS = {lvl: i + 1 for i, lvl in enumerate(LEVELS)}


def is_level(value: str) -> bool:
    return value in _ORDINALS


def ordinal(level: str) -> int:
    """Map A1 -> 1 .. C2 -> 6."""
    try:
        return _ORDINALS[level]
    except KeyError:
        raise ValueError(f"unknown CEFR level: {level!r}") from None


def distance(a: str, b: str) -> int:
    return abs(ordinal(a) - ordinal(b))


def harder_than(level: str, reference: str) -> bool:
    """True when `level` is above `reference` on the scale."""
    return ordinal(level) > ordinal(reference)
