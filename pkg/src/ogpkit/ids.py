"""Element identifiers and their canonical serialized form.

Ids are either plain strings (base shapes, JSON input), pairs (x, y) of ids
(Gray products and cylinders), or tagged injections (IN0, x) / (IN1, x)
introduced by pushouts.  Pushouts keep left ids under the "in0" tag, right
ids under "in1", and the shared part reuses the left tag, so no fresh-name
generator is ever needed and serialization is stable.
"""

from __future__ import annotations


class _Tag:
    """Sentinel marking a pushout injection; distinct from any pair id."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


IN0 = _Tag("in0")
IN1 = _Tag("in1")


def inl(x):
    return (IN0, x)


def inr(x):
    return (IN1, x)


def is_injection(x):
    return isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], _Tag)


def is_pair(x):
    return isinstance(x, tuple) and len(x) == 2 and not isinstance(x[0], _Tag)


def sid(x) -> str:
    """Canonical string form: "a", "(a,b)", "in0:a"."""
    if isinstance(x, str):
        return x
    if is_injection(x):
        return f"{x[0].name}:{sid(x[1])}"
    if is_pair(x):
        return f"({sid(x[0])},{sid(x[1])})"
    raise TypeError(f"not an element id: {x!r}")


def parse_sid(text: str):
    """Inverse of sid on structured ids; plain strings parse to themselves.

    Used by the expression language to refer to elements of constructed
    shapes.  Ids loaded from JSON stay plain strings and never pass through
    here.
    """
    value, rest = _parse(text)
    if rest:
        raise ValueError(f"trailing input in id {text!r}")
    return value


def _parse(text: str):
    if text.startswith("in0:"):
        inner, rest = _parse(text[4:])
        return (IN0, inner), rest
    if text.startswith("in1:"):
        inner, rest = _parse(text[4:])
        return (IN1, inner), rest
    if text.startswith("("):
        left, rest = _parse(text[1:])
        if not rest.startswith(","):
            raise ValueError(f"bad pair id near {rest!r}")
        right, rest = _parse(rest[1:])
        if not rest.startswith(")"):
            raise ValueError(f"bad pair id near {rest!r}")
        return (left, right), rest[1:]
    # plain atom: up to the next delimiter at this nesting level
    for i, ch in enumerate(text):
        if ch in ",)":
            return text[:i], text[i:]
    return text, ""
