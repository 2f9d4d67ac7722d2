"""Shared brute-force oracles, kept independent of the library internals."""

from __future__ import annotations

import itertools
import random

import pytest

from shiftcc.shifts import Alphabet, build_sft


def contains_factor(word, factor):
    f = tuple(factor)
    return any(tuple(word[i : i + len(f)]) == f for i in range(len(word) - len(f) + 1))


def brute_factors(symbols, forbidden, n, pad=None):
    """Length-n factors of the shift avoiding ``forbidden``, by exhaustion.

    A word is a factor iff it admits admissible extensions of length
    ``pad`` on both sides; pad = (#symbols)^(k-1) + k steps suffice to
    reach a cycle of the de Bruijn graph, by pigeonhole.
    """
    forbidden = [tuple(f) for f in forbidden]
    k = max([1] + [len(f) for f in forbidden])
    if pad is None:
        pad = len(symbols) ** (k - 1) + k

    def admissible(w):
        return not any(contains_factor(w, f) for f in forbidden)

    out = set()
    for w in itertools.product(symbols, repeat=n + 2 * pad):
        if admissible(w):
            out.add(w[pad : pad + n])
    return out


def brute_count(symbols, forbidden, n, pad=None):
    return len(brute_factors(symbols, forbidden, n, pad))


def random_sft(rng: random.Random):
    """Small random presentation: 2-3 symbols, up to 3 short forbidden words."""
    n_sym = rng.choice([2, 2, 3])
    symbols = [str(i) for i in range(n_sym)]
    alphabet = Alphabet.of(symbols)
    n_forbidden = rng.randint(0, 3)
    forbidden = []
    for _ in range(n_forbidden):
        length = rng.randint(1, 3)
        forbidden.append(tuple(rng.choice(symbols) for _ in range(length)))
    return alphabet, forbidden, build_sft(alphabet, forbidden)


@pytest.fixture
def rng():
    return random.Random(12345)
