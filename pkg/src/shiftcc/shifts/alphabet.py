"""Alphabets, words, and the token pairing used for product shifts.

Symbols are plain strings and words are tuples of symbols.  Product
shifts need a single token per symbol tuple; ``join_tokens`` builds one
reversibly (commas inside component tokens are escaped), so nested
products round-trip through ``split_tokens``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import InputError

Word = tuple[str, ...]


@dataclass(frozen=True)
class Alphabet:
    """Ordered, duplicate-free collection of symbol tokens."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise InputError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise InputError(f"alphabet has duplicate symbols: {self.symbols}")
        if not all(isinstance(s, str) for s in self.symbols):
            raise InputError("alphabet symbols must be strings")

    @classmethod
    def of(cls, symbols: Iterable[str]) -> "Alphabet":
        return cls(tuple(symbols))

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.symbols

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    def check_word(self, word: Sequence[str]) -> Word:
        """Validate that every symbol of ``word`` belongs to this alphabet."""
        w = tuple(word)
        for s in w:
            if s not in self.symbols:
                raise InputError(f"symbol {s!r} not in alphabet {list(self.symbols)}")
        return w


_SEP = ","
_ESC = "\\"


def _escape(token: str) -> str:
    return token.replace(_ESC, _ESC + _ESC).replace(_SEP, _ESC + _SEP)


def join_tokens(parts: Sequence[str]) -> str:
    """Pack component tokens into one product-alphabet token."""
    return _SEP.join(_escape(p) for p in parts)


def split_tokens(token: str) -> tuple[str, ...]:
    """Inverse of :func:`join_tokens`."""
    parts: list[str] = []
    buf: list[str] = []
    i = 0
    while i < len(token):
        c = token[i]
        if c == _ESC and i + 1 < len(token):
            buf.append(token[i + 1])
            i += 2
        elif c == _SEP:
            parts.append("".join(buf))
            buf = []
            i += 1
        else:
            buf.append(c)
            i += 1
    parts.append("".join(buf))
    return tuple(parts)


def product_alphabet(*alphabets: Alphabet) -> Alphabet:
    """Alphabet whose tokens are joined tuples, in lexicographic component order."""
    symbols = [()]
    for alpha in alphabets:
        symbols = [prefix + (s,) for prefix in symbols for s in alpha.symbols]
    return Alphabet(tuple(join_tokens(parts) for parts in symbols))


def join_words(*words: Word) -> Word:
    """Componentwise token join of equal-length words."""
    lengths = {len(w) for w in words}
    if len(lengths) != 1:
        raise InputError(f"cannot join words of different lengths: {[len(w) for w in words]}")
    return tuple(join_tokens([w[i] for w in words]) for i in range(lengths.pop()))


def split_word(word: Word, track: int) -> Word:
    """Extract one component track from a word over a product alphabet."""
    return tuple(split_tokens(tok)[track] for tok in word)
