"""Finitely describable binary sequences: a prefix followed by a zero or periodic tail.

Text form is ``prefix[pattern]*``, for example ``0110[01]*``; a bare prefix
means the tail is zero. Arbitrary elements of {0,1}^N have no finite
description and are not representable.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from src.errors import SequenceSyntaxError

logger = logging.getLogger(__name__)

_SYNTAX = re.compile(r"^(?P<prefix>[01]*)(?:\[(?P<pattern>[01]*)\]\*)?$")


@dataclass(frozen=True)
class EventuallyZero:
    def bit(self, offset: int) -> int:
        return 0

    def __str__(self) -> str:
        return ""


@dataclass(frozen=True)
class Periodic:
    pattern: tuple[int, ...]

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("periodic tail needs a non-empty pattern")
        if any(b not in (0, 1) for b in self.pattern):
            raise ValueError(f"pattern entries must be bits, got {self.pattern}")

    def bit(self, offset: int) -> int:
        return self.pattern[offset % len(self.pattern)]

    def __str__(self) -> str:
        return "[" + "".join(map(str, self.pattern)) + "]*"


Tail = Union[EventuallyZero, Periodic]


@dataclass(frozen=True)
class BinarySeq:
    """A sequence a_0, a_1, ... of bits, indexed from 0.

    Attributes:
        prefix: Leading bits.
        tail: What follows the prefix.
    """

    prefix: tuple[int, ...] = ()
    tail: Tail = EventuallyZero()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(b) for b in self.prefix))
        if any(b not in (0, 1) for b in self.prefix):
            raise ValueError(f"prefix entries must be bits, got {self.prefix}")

    @classmethod
    def parse(cls, text: str) -> "BinarySeq":
        """Parse ``prefix[pattern]*``; surrounding whitespace is ignored.

        Raises:
            SequenceSyntaxError: On any other input.
        """
        cleaned = text.strip()
        match = _SYNTAX.match(cleaned)
        if match is None:
            raise SequenceSyntaxError(text, "expected bits optionally followed by [pattern]*")
        prefix = tuple(int(c) for c in match.group("prefix"))
        pattern = match.group("pattern")
        if pattern is None:
            return cls(prefix)
        if pattern == "":
            raise SequenceSyntaxError(text, "empty periodic pattern")
        if set(pattern) == {"0"}:
            return cls(prefix)
        return cls(prefix, Periodic(tuple(int(c) for c in pattern)))

    @classmethod
    def constant(cls, bit: int) -> "BinarySeq":
        return cls((), Periodic((bit,))) if bit else cls()

    @classmethod
    def random(cls, rng: np.random.Generator, length: int) -> "BinarySeq":
        """Random prefix of the given length followed by zeros."""
        return cls(tuple(int(b) for b in rng.integers(0, 2, size=length)))

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError(f"negative index {i}")
        if i < len(self.prefix):
            return self.prefix[i]
        return self.tail.bit(i - len(self.prefix))

    def bits(self, n: int) -> tuple[int, ...]:
        """First n bits."""
        return tuple(self[i] for i in range(n))

    def with_bit(self, i: int, value: int) -> "BinarySeq":
        """Copy with bit i replaced; the prefix grows to cover i and the tail keeps its phase."""
        grown = max(i + 1, len(self.prefix))
        prefix = list(self.bits(grown))
        prefix[i] = value
        tail = self.tail
        if isinstance(tail, Periodic):
            shift = (grown - len(self.prefix)) % len(tail.pattern)
            tail = Periodic(tail.pattern[shift:] + tail.pattern[:shift])
        return BinarySeq(tuple(prefix), tail)

    def first_agreement(self, other: "BinarySeq", window: int) -> int:
        """Smallest N such that the two agree on every index in [N, window)."""
        n = window
        while n > 0 and self[n - 1] == other[n - 1]:
            n -= 1
        return n

    def __str__(self) -> str:
        return "".join(map(str, self.prefix)) + str(self.tail)


def random_pair(rng: np.random.Generator, window: int, agree_from: int) -> tuple[BinarySeq, BinarySeq]:
    """Two random sequences that agree from index ``agree_from`` on."""
    a = BinarySeq.random(rng, window)
    head = tuple(int(b) for b in rng.integers(0, 2, size=agree_from))
    return a, BinarySeq(head + a.prefix[agree_from:], a.tail)


def load_corpus(path: str | Path) -> list[BinarySeq]:
    """One sequence per line; blank lines and ``#`` comments are skipped."""
    sequences = []
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            sequences.append(BinarySeq.parse(text))
        except SequenceSyntaxError as exc:
            raise SequenceSyntaxError(text, f"line {number}: {exc.reason}") from exc
    logger.info("loaded %d sequences from %s", len(sequences), path)
    return sequences


def dump_corpus(sequences: Iterable[BinarySeq], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{s}\n" for s in sequences), encoding="utf-8")
    return path
