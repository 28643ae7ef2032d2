"""Encoding of synthetic symbols.

Words are plain ``str`` values with one character per symbol.  User
generators are arbitrary single Unicode scalars; symbols introduced by the
library (fresh generators, units generators, markers, primed copies) live in
the private-use area and have multi-character external names.
"""

import re

HASH = "#"

_FRESH = 0xE000      # _p0, _p1, ...
_UNITS = 0xE400      # b1, b2, ...
_HEART = 0xE800      # ♥0, ♥1, ...
_HEART_REV = 0xEA00  # ♥~0, ...
_PRIMED = 0xEC00     # transient primed copies
_BLOCK = 0x200

RESERVED_CHARS = set(" \t\r\n#():|'\"_")

_NAME_RE = re.compile(r"_p(\d+)|b_?(\d+)|♥~(\d+)|♥(\d+)|′(\d+)")


def fresh(k: int) -> str:
    return chr(_FRESH + k)


def units(i: int) -> str:
    """The units generator ``b_i`` (1-based, as in the literature)."""
    return chr(_UNITS + i)


def heart(k: int) -> str:
    return chr(_HEART + k)


def heart_rev(k: int) -> str:
    return chr(_HEART_REV + k)


def primed(k: int) -> str:
    return chr(_PRIMED + k)


def _kind(ch: str):
    o = ord(ch)
    for base, kind in ((_FRESH, "fresh"), (_UNITS, "units"), (_HEART, "heart"),
                       (_HEART_REV, "heart_rev"), (_PRIMED, "primed")):
        if base <= o < base + _BLOCK:
            return kind, o - base
    return None, None


def is_synthetic(ch: str) -> bool:
    return _kind(ch)[0] is not None


def is_fresh(ch: str) -> bool:
    return _kind(ch)[0] == "fresh"


def units_index(ch: str) -> int:
    kind, k = _kind(ch)
    if kind != "units":
        raise ValueError(f"{ch!r} is not a units generator")
    return k


def render(ch: str) -> str:
    kind, k = _kind(ch)
    if kind is None:
        return ch
    return {"fresh": f"_p{k}", "units": f"b{k}", "heart": f"♥{k}",
            "heart_rev": f"♥~{k}", "primed": f"′{k}"}[kind]


def render_word(w: str, sep: str = "") -> str:
    return sep.join(render(c) for c in w)


def parse_name(name: str) -> str:
    """Inverse of :func:`render` for a single symbol name."""
    if len(name) == 1:
        return name
    m = _NAME_RE.fullmatch(name)
    if m is None:
        raise ValueError(f"unknown symbol name {name!r}")
    if m.group(1) is not None:
        return fresh(int(m.group(1)))
    if m.group(2) is not None:
        return units(int(m.group(2)))
    if m.group(3) is not None:
        return heart_rev(int(m.group(3)))
    if m.group(4) is not None:
        return heart(int(m.group(4)))
    return primed(int(m.group(5)))


_FRESH_TOKEN = re.compile(r"_p(\d+)")


def parse_word(text: str) -> str:
    """Parse a word over a presentation alphabet; ``_pN`` is one symbol."""
    out = []
    i = 0
    while i < len(text):
        m = _FRESH_TOKEN.match(text, i)
        if m:
            out.append(fresh(int(m.group(1))))
            i = m.end()
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


_UNITS_TOKEN = re.compile(r"\s*b_?(\d+)")


def parse_units_word(text: str) -> str:
    """Parse a word over the units alphabet, e.g. ``b1b2`` or ``b_1 b_2``."""
    out = []
    i = 0
    text = text.strip()
    while i < len(text):
        m = _UNITS_TOKEN.match(text, i)
        if m is None:
            raise ValueError(f"bad units word {text!r} at offset {i}")
        out.append(units(int(m.group(1))))
        i = m.end()
        while i < len(text) and text[i].isspace():
            i += 1
    return "".join(out)
