"""Parser for group-spec files.

    # identity, SL_3, SL_3, identity over Z[1/2]
    blocks = 1 3 3 1
    kinds  = id sl sl id
    prime  = 2
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from sympy import isprime

from .nilpotent import BlockPattern

KEYS = ("blocks", "kinds", "prime")
KIND_WORDS = ("id", "sl")


class SpecParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class SpecFile:
    blocks: tuple[int, ...]
    kinds: tuple[str, ...]
    prime: int | None = None

    def to_pattern(self) -> BlockPattern:
        return BlockPattern(self.blocks, self.kinds, self.prime)

    def to_text(self) -> str:
        out = [f"blocks = {' '.join(map(str, self.blocks))}", f"kinds = {' '.join(self.kinds)}"]
        if self.prime is not None:
            out.append(f"prime = {self.prime}")
        return "\n".join(out) + "\n"

    def as_dict(self) -> dict:
        return {"blocks": list(self.blocks), "kinds": list(self.kinds), "prime": self.prime}


def parse_spec(text: str) -> SpecFile:
    values: dict[str, tuple[int, list[tuple[int, str]]]] = {}
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        eq = line.find("=")
        first = len(line) - len(line.lstrip()) + 1
        if eq < 0:
            raise SpecParseError(lineno, first, "expected `key = value ...`")
        key = line[:eq].strip()
        if key not in KEYS:
            raise SpecParseError(lineno, first, f"unknown key {key!r}")
        if key in values:
            raise SpecParseError(lineno, first, f"duplicate key {key!r}")
        tokens = [(eq + 2 + m.start(), m.group()) for m in re.finditer(r"\S+", line[eq + 1:])]
        if not tokens:
            raise SpecParseError(lineno, eq + 2, f"no value for {key!r}")
        _check_tokens(key, lineno, tokens)
        values[key] = (lineno, tokens)

    end = len(lines) + 1
    for key in ("blocks", "kinds"):
        if key not in values:
            raise SpecParseError(end, 1, f"missing key {key!r}")
    bline, btoks = values["blocks"]
    kline, ktoks = values["kinds"]
    if len(btoks) != len(ktoks):
        raise SpecParseError(kline, ktoks[0][0], f"{len(ktoks)} kinds given for {len(btoks)} blocks")
    if len(btoks) < 2:
        raise SpecParseError(bline, btoks[0][0], "at least two blocks are required")
    prime = int(values["prime"][1][0][1]) if "prime" in values else None
    return SpecFile(tuple(int(t) for _, t in btoks), tuple(t for _, t in ktoks), prime)


def _check_tokens(key: str, lineno: int, tokens: list[tuple[int, str]]) -> None:
    if key == "blocks":
        for col, tok in tokens:
            if not tok.isdigit() or int(tok) < 1:
                raise SpecParseError(lineno, col, f"block size must be a positive integer, got {tok!r}")
    elif key == "kinds":
        for col, tok in tokens:
            if tok not in KIND_WORDS:
                raise SpecParseError(lineno, col, f"kind must be 'id' or 'sl', got {tok!r}")
    else:
        if len(tokens) != 1:
            raise SpecParseError(lineno, tokens[1][0], "prime takes a single value")
        col, tok = tokens[0]
        if not tok.isdigit() or int(tok) < 1:
            raise SpecParseError(lineno, col, f"prime must be a positive integer, got {tok!r}")
        if not isprime(int(tok)):
            raise SpecParseError(lineno, col, f"{tok} is not prime")
