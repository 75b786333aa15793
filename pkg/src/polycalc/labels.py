"""Structured labels: finite trees of ints and strings.

A label is an ``int``, a ``str`` or a ``tuple`` of labels. Tuples serialize
as JSON arrays. All orderings in the package use :func:`label_key`, which
compares ints before strings before tuples and tuples lexicographically.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Any, Iterable, Union

Label = Union[int, str, tuple]


@lru_cache(maxsize=1 << 18)
def label_key(x):
    t = type(x)
    if t is int:
        return (0, x)
    if t is str:
        return (1, x)
    if t is tuple:
        return (2, tuple(label_key(y) for y in x))
    raise TypeError(f"not a label: {x!r}")


def is_label(x: Any) -> bool:
    t = type(x)
    if t is int or t is str:
        return True
    if t is tuple:
        return all(is_label(y) for y in x)
    return False


def sort_labels(xs: Iterable[Label]) -> list:
    return sorted(xs, key=label_key)


def to_json(x: Label):
    if type(x) is tuple:
        return [to_json(y) for y in x]
    return x


def from_json(obj, path: str = "$") -> Label:
    from .errors import PolycalcError

    if isinstance(obj, bool) or obj is None or isinstance(obj, float) or isinstance(obj, dict):
        raise PolycalcError(f"{path}: not a label: {obj!r}")
    if isinstance(obj, list):
        return tuple(from_json(y, f"{path}[{i}]") for i, y in enumerate(obj))
    return obj


def dumps(x: Label) -> str:
    """Canonical compact serialization, also used for JSON object keys."""
    return json.dumps(to_json(x), separators=(",", ":"), ensure_ascii=False)


def loads(s: str, path: str = "$") -> Label:
    from .errors import PolycalcError

    try:
        obj = json.loads(s)
    except json.JSONDecodeError:
        raise PolycalcError(f"{path}: key {s!r} is not a serialized label") from None
    return from_json(obj, path)


def table(mapping, order: Iterable[Label]) -> tuple:
    """A function as a label: pairs (x, mapping[x]) in the given order."""
    return tuple((x, mapping[x]) for x in order)
