"""Wang tilesets, strip languages, the border protocol, and soficness probes.

Rows are indexed bottom to top: a strip of height n is read as a
bi-infinite word of n-symbol columns, and a pattern is stored as a tuple
of rows with row 0 at the bottom.  The concatenation relation pairs an
n-strip (lower, Alice's) with an m-strip (upper, Bob's) when they stack
into an admissible (n+m)-strip; for tilings this is decided by the edge
colors along the shared horizontal border, which is what the border
protocol communicates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .errors import GuardExceeded, InputError
from .infinite_cc import ProtocolTriple
from .shifts import (
    Alphabet,
    SftPresentation,
    SoficPresentation,
    Word,
    as_sofic,
    full_shift,
    join_tokens,
    make_sofic,
    product_alphabet,
)
from .shifts.sofic import determinize

DEFAULT_AREA_GUARD = 4096
DEFAULT_NODE_GUARD = 5_000_000


# ---------------------------------------------------------------------------
# Tiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WangTile:
    north: str
    south: str
    east: str
    west: str
    symbol: str


@dataclass(frozen=True)
class TileSet:
    tiles: tuple[WangTile, ...]

    def __post_init__(self):
        if not self.tiles:
            raise InputError("tileset must be nonempty")

    @property
    def colors(self) -> tuple[str, ...]:
        seen = []
        for t in self.tiles:
            for c in (t.north, t.south, t.east, t.west):
                if c not in seen:
                    seen.append(c)
        return tuple(sorted(seen))

    @property
    def horizontal_colors(self) -> tuple[str, ...]:
        """Colors that can appear on a horizontal (north/south) edge."""
        return tuple(sorted({c for t in self.tiles for c in (t.north, t.south)}))

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(sorted({t.symbol for t in self.tiles}))


def paper_tileset() -> TileSet:
    """The five-tile set whose pictures carry at most one occurrence of 1.

    Canonical order: the all-blue background tile, the marked crossing
    tile, the vertical-line tile, the horizontal-line tile, and the
    all-yellow background tile.
    """
    return TileSet(
        (
            WangTile(north="blue", south="blue", east="blue", west="blue", symbol="0"),
            WangTile(north="red", south="blue", east="red", west="blue", symbol="1"),
            WangTile(north="red", south="red", east="yellow", west="blue", symbol="0"),
            WangTile(north="yellow", south="blue", east="red", west="red", symbol="0"),
            WangTile(north="yellow", south="yellow", east="yellow", west="yellow", symbol="0"),
        )
    )


Pattern = tuple[tuple[str, ...], ...]  # rows, bottom first


def enumerate_patterns(
    tileset: TileSet,
    width: int,
    height: int,
    extend_radius: int = 0,
    area_guard: int = DEFAULT_AREA_GUARD,
    node_guard: int = DEFAULT_NODE_GUARD,
) -> list[Pattern]:
    """All width x height symbol patterns of locally admissible tilings.

    Tiles the enlarged (width + 2e) x (height + 2e) rectangle with
    matching contiguous edges and keeps the central window, so radius 0
    yields the locally admissible patterns and larger radii shrink toward
    the true factors of the tiling shift.
    """
    if width < 1 or height < 1 or extend_radius < 0:
        raise InputError("need width, height >= 1 and extend_radius >= 0")
    e = extend_radius
    full_w, full_h = width + 2 * e, height + 2 * e
    if full_w * full_h * len(tileset.tiles) > area_guard:
        raise GuardExceeded(
            f"pattern grid {full_w}x{full_h} with {len(tileset.tiles)} tiles "
            f"exceeds guard {area_guard}",
            requested=full_w * full_h * len(tileset.tiles),
            limit=area_guard,
        )
    tiles = tileset.tiles
    grid: list[WangTile | None] = [None] * (full_w * full_h)
    patterns: set[Pattern] = set()
    nodes = 0

    def fill(pos: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_guard:
            raise GuardExceeded(f"pattern enumeration exceeded {node_guard} nodes", limit=node_guard)
        if pos == full_w * full_h:
            patterns.add(
                tuple(
                    tuple(
                        grid[(r + e) * full_w + (col + e)].symbol for col in range(width)
                    )
                    for r in range(height)
                )
            )
            return
        row, col = divmod(pos, full_w)
        left = grid[pos - 1] if col > 0 else None
        below = grid[pos - full_w] if row > 0 else None
        for tile in tiles:
            if left is not None and left.east != tile.west:
                continue
            if below is not None and below.north != tile.south:
                continue
            grid[pos] = tile
            fill(pos + 1)
        grid[pos] = None

    fill(0)
    return sorted(patterns)


# ---------------------------------------------------------------------------
# Strips
# ---------------------------------------------------------------------------


def _consistent_columns(tileset: TileSet, n: int) -> list[tuple[WangTile, ...]]:
    """Vertically consistent n-tile columns, bottom tile first."""
    columns: list[tuple[WangTile, ...]] = [()]
    for _ in range(n):
        columns = [
            col + (t,)
            for col in columns
            for t in tileset.tiles
            if not col or col[-1].north == t.south
        ]
    return columns


def _column_alphabet(tileset: TileSet, n: int) -> Alphabet:
    syms = Alphabet.of(tileset.symbols)
    if n == 1:
        return syms
    return product_alphabet(*([syms] * n))


def _column_token(column: tuple[WangTile, ...]) -> str:
    if len(column) == 1:
        return column[0].symbol
    return join_tokens([t.symbol for t in column])


@dataclass(frozen=True)
class StripPresentation:
    """Sofic presentation of the height-n strips of a tiling shift.

    States are east/west color vectors (bottom first); an edge per
    vertically consistent column joins its west vector to its east vector
    and is labeled with the column's symbols.
    """

    n: int
    graph: SoficPresentation


def strip_language(
    tileset: TileSet, n: int, column_guard: int = DEFAULT_NODE_GUARD
) -> StripPresentation:
    if n < 1:
        raise InputError(f"strip height must be >= 1, got {n}")
    if len(tileset.tiles) ** n > column_guard:
        raise GuardExceeded(f"strip of height {n} exceeds {column_guard} columns", limit=column_guard)
    alphabet = _column_alphabet(tileset, n)
    edges = set()
    for col in _consistent_columns(tileset, n):
        west = tuple(t.west for t in col)
        east = tuple(t.east for t in col)
        edges.add((west, _column_token(col), east))
    graph = make_sofic(alphabet, edges)
    return StripPresentation(n, graph)


def concat_relation(
    tileset: TileSet, n: int, m: int, column_guard: int = DEFAULT_NODE_GUARD
) -> SoficPresentation:
    """Pairs of an n-strip and an m-strip that stack into an (n+m)-strip.

    Presented over paired column tokens by splitting each consistent
    (n+m)-column into its bottom n and top m symbols.
    """
    if n < 1 or m < 1:
        raise InputError("strip heights must be >= 1")
    if len(tileset.tiles) ** (n + m) > column_guard:
        raise GuardExceeded(f"stack of height {n + m} exceeds {column_guard} columns", limit=column_guard)
    alphabet = product_alphabet(_column_alphabet(tileset, n), _column_alphabet(tileset, m))
    edges = set()
    for col in _consistent_columns(tileset, n + m):
        west = tuple(t.west for t in col)
        east = tuple(t.east for t in col)
        label = join_tokens((_column_token(col[:n]), _column_token(col[n:])))
        edges.add((west, label, east))
    return make_sofic(alphabet, edges)


def border_protocol(tileset: TileSet, n: int, m: int) -> ProtocolTriple:
    """O(1)-entropy protocol for the concatenation relation.

    Alice tiles her lower strip and announces the colors along the shared
    border (the north colors of her top row); Bob checks that his upper
    strip admits them as its bottom colors.  The message shift is the full
    shift over the horizontal colors, independent of n and m.
    """
    if n < 1 or m < 1:
        raise InputError("strip heights must be >= 1")
    h_colors = Alphabet.of(tileset.horizontal_colors)
    z = full_shift(h_colors)
    a = _column_alphabet(tileset, n)
    b = _column_alphabet(tileset, m)

    x_edges = set()
    for col in _consistent_columns(tileset, n):
        west = tuple(t.west for t in col)
        east = tuple(t.east for t in col)
        label = join_tokens((_column_token(col), col[-1].north))
        x_edges.add((west, label, east))
    y_edges = set()
    for col in _consistent_columns(tileset, m):
        west = tuple(t.west for t in col)
        east = tuple(t.east for t in col)
        label = join_tokens((_column_token(col), col[0].south))
        y_edges.add((west, label, east))
    s_x = make_sofic(product_alphabet(a, h_colors), x_edges)
    s_y = make_sofic(product_alphabet(b, h_colors), y_edges)
    return ProtocolTriple(z=z, s_x=s_x, s_y=s_y, a=a, b=b, c=h_colors)


# ---------------------------------------------------------------------------
# Language oracles and residual profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LanguageOracle:
    """Membership oracle for a factorial language, driven by a scan state.

    ``step(state, symbol)`` returns the successor state, or None when the
    extended word leaves the language; equal states have equal residual
    languages, which keeps residual profiling tractable.
    """

    alphabet: Alphabet
    initial: Hashable
    step: Callable[[Hashable, str], Hashable | None]

    def contains(self, word: Sequence[str]) -> bool:
        state = self.initial
        for sym in word:
            if sym not in self.alphabet:
                return False
            state = self.step(state, sym)
            if state is None:
                return False
        return True


def oracle_from_presentation(p: SftPresentation | SoficPresentation) -> LanguageOracle:
    """Oracle for the factor language of a presentation (via its subset DFA)."""
    dfa = determinize(as_sofic(p))
    transitions = dict(dfa.transitions)

    def step(state, sym):
        return transitions.get((state, sym))

    initial = dfa.start if dfa.start != -1 else None
    if initial is None:
        raise InputError("cannot build an oracle for the empty language")
    return LanguageOracle(Alphabet.of(sorted(p.alphabet.symbols)), initial, step)


_NO_PATTERN = ("idle",)


def counterexample_oracle() -> LanguageOracle:
    """Words over {a, b, c, d} with no factor c a^j d b^j c.

    The only live pattern candidate starts at the last 'c' seen, so the
    scan state tracks the run structure since then; runs of a and b only
    matter through their difference once the 'd' has been read.  Deciding
    whether the two runs around 'd' have equal length is a finite
    inequality check between neighbours, which is exactly the relation
    served by ``finite_cc.neq_index_protocol``.
    """

    def step(state, sym):
        if sym == "c":
            if state[0] == "armed" and state[1] == 0:
                return None  # closing c completes c a^j d b^j c
            return ("run", 0)
        if state == _NO_PATTERN:
            return _NO_PATTERN
        if state[0] == "run":
            if sym == "a":
                return ("run", state[1] + 1)
            if sym == "d":
                return ("armed", state[1])
            return _NO_PATTERN  # b before d breaks the pattern
        # state[0] == "armed": counting b's down toward the a-run length
        if sym == "b":
            return ("armed", state[1] - 1) if state[1] > 0 else _NO_PATTERN
        return _NO_PATTERN  # a or d after the b-run breaks the pattern

    return LanguageOracle(Alphabet.of(["a", "b", "c", "d"]), _NO_PATTERN, step)


def residual_profile_count(
    oracle: LanguageOracle, k: int, m: int, node_guard: int = DEFAULT_NODE_GUARD
) -> list[tuple[int, int]]:
    """Distinct depth-m residual profiles per word length 0..k.

    Words are grouped by scan state (equal states give equal residuals)
    and state classes are then merged exactly up to depth m, so a bounded
    sequence matches a sofic language and strict growth certifies
    non-regular residual structure.
    """
    if k < 0 or m < 0:
        raise InputError("need k >= 0 and m >= 0")
    memo: dict[tuple, bool] = {}

    def same_profile(s1, s2, depth: int) -> bool:
        if s1 == s2:
            return True
        if depth == 0:
            return True
        key = (s1, s2, depth)
        if key in memo:
            return memo[key]
        memo[key] = True  # guard against cycles; refined below
        result = True
        for sym in oracle.alphabet.symbols:
            t1, t2 = oracle.step(s1, sym), oracle.step(s2, sym)
            if (t1 is None) != (t2 is None):
                result = False
                break
            if t1 is not None and not same_profile(t1, t2, depth - 1):
                result = False
                break
        memo[key] = result
        return result

    counts: list[tuple[int, int]] = []
    frontier = {oracle.initial}
    nodes = 0
    for length in range(k + 1):
        classes: list = []
        for state in sorted(frontier, key=repr):
            if not any(same_profile(state, rep, m) for rep in classes):
                classes.append(state)
        counts.append((length, len(classes)))
        nxt = set()
        for state in frontier:
            for sym in oracle.alphabet.symbols:
                nodes += 1
                if nodes > node_guard:
                    raise GuardExceeded(f"residual profiling exceeded {node_guard} steps", limit=node_guard)
                t = oracle.step(state, sym)
                if t is not None:
                    nxt.add(t)
        frontier = nxt
        if not frontier:
            break
    return counts
