"""JSON (de)serialization for the file formats used by the CLI.

Words may be written either as lists of symbol tokens or, when every
symbol of the alphabet is a single character, as plain strings.
"""

from __future__ import annotations

import json
import math
from typing import Any, Sequence

from .errors import InputError
from .finite_cc import CoverResult, Rectangle, RelationMatrix
from .infinite_cc import ProtocolTriple
from .shifts import (
    Alphabet,
    SftPresentation,
    SoficPresentation,
    Word,
    build_sft,
    make_sofic,
)
from .wang import TileSet, WangTile


def parse_word(data: Any, alphabet: Alphabet) -> Word:
    if isinstance(data, str):
        if all(len(s) == 1 for s in alphabet.symbols):
            return alphabet.check_word(tuple(data))
        raise InputError(
            f"word {data!r} given as a string, but alphabet symbols are not single characters"
        )
    if isinstance(data, (list, tuple)):
        return alphabet.check_word(tuple(str(s) for s in data))
    raise InputError(f"cannot parse word from {data!r}")


def word_to_json(word: Word) -> list[str]:
    return list(word)


# -- shifts -----------------------------------------------------------------


def shift_from_json(data: dict) -> SftPresentation | SoficPresentation:
    if not isinstance(data, dict):
        raise InputError("shift JSON must be an object")
    kind = data.get("kind", "sft" if "forbidden" in data or "alphabet" in data else None)
    if kind == "sft":
        alphabet = Alphabet.of([str(s) for s in data["alphabet"]])
        forbidden = [parse_word(w, alphabet) for w in data.get("forbidden", [])]
        return build_sft(alphabet, forbidden)
    if kind == "sft-graph":
        alphabet = Alphabet.of([str(s) for s in data["alphabet"]])
        vertices = frozenset(parse_word(w, alphabet) for w in data["vertices"])
        edges = frozenset(parse_word(w, alphabet) for w in data["edges"])
        return SftPresentation(alphabet, int(data["window"]), vertices, edges)
    if kind == "sofic":
        alphabet = Alphabet.of([str(s) for s in data["alphabet"]])
        n = int(data["states"])
        edges = set()
        for src, label, dst in data["edges"]:
            src, dst = int(src), int(dst)
            if not (0 <= src < n and 0 <= dst < n):
                raise InputError(f"edge endpoint out of range in [{src}, {label!r}, {dst}]")
            if str(label) not in alphabet:
                raise InputError(f"edge label {label!r} not in alphabet")
            edges.add((src, str(label), dst))
        return make_sofic(alphabet, edges)
    raise InputError(f"unknown shift kind {kind!r}")


def shift_to_json(p: SftPresentation | SoficPresentation) -> dict:
    if isinstance(p, SftPresentation):
        return {
            "kind": "sft-graph",
            "alphabet": list(p.alphabet.symbols),
            "window": p.window,
            "vertices": sorted(word_to_json(v) for v in p.vertices),
            "edges": sorted(word_to_json(e) for e in p.edges),
        }
    order = {s: i for i, s in enumerate(sorted(p.states, key=repr))}
    return {
        "kind": "sofic",
        "alphabet": list(p.alphabet.symbols),
        "states": len(order),
        "edges": sorted([order[s], label, order[t]] for s, label, t in p.edges),
    }


# -- relations and covers ---------------------------------------------------


def relation_from_json(data: dict) -> RelationMatrix:
    if not isinstance(data, dict) or "ones" not in data:
        raise InputError("relation JSON must have x_labels, y_labels, ones")
    x_labels = [str(s) for s in data["x_labels"]]
    y_labels = [str(s) for s in data["y_labels"]]
    ones = [(int(i), int(j)) for i, j in data["ones"]]
    return RelationMatrix.from_ones(len(x_labels), len(y_labels), ones, x_labels, y_labels)


def relation_to_json(r: RelationMatrix) -> dict:
    return {
        "x_labels": list(r.x_labels),
        "y_labels": list(r.y_labels),
        "ones": [[i, j] for i, j in r.ones],
    }


def cover_from_json(data: dict) -> CoverResult:
    rects = tuple(
        Rectangle(frozenset(int(i) for i in rect["rows"]), frozenset(int(j) for j in rect["cols"]))
        for rect in data["rectangles"]
    )
    return CoverResult(rects, len(rects), math.log2(len(rects)), bool(data.get("exact", False)))


def cover_to_json(c: CoverResult) -> dict:
    return {
        "cover": c.cover_number,
        "bits": c.nd_cc_bits,
        "exact": c.exact,
        "rectangles": [
            {"rows": sorted(r.rows), "cols": sorted(r.cols)} for r in c.rectangles
        ],
    }


# -- protocols --------------------------------------------------------------


def protocol_from_json(data: dict) -> ProtocolTriple:
    try:
        alphabets = data["alphabets"]
        a = Alphabet.of([str(s) for s in alphabets["A"]])
        b = Alphabet.of([str(s) for s in alphabets["B"]])
        c = Alphabet.of([str(s) for s in alphabets["C"]])
        return ProtocolTriple(
            z=shift_from_json(data["Z"]),
            s_x=shift_from_json(data["SX"]),
            s_y=shift_from_json(data["SY"]),
            a=a,
            b=b,
            c=c,
        )
    except KeyError as exc:
        raise InputError(f"protocol JSON missing key {exc}") from exc


def protocol_to_json(p: ProtocolTriple) -> dict:
    return {
        "alphabets": {
            "A": list(p.a.symbols),
            "B": list(p.b.symbols),
            "C": list(p.c.symbols),
        },
        "Z": shift_to_json(p.z),
        "SX": shift_to_json(p.s_x),
        "SY": shift_to_json(p.s_y),
    }


# -- tilesets ---------------------------------------------------------------


def tileset_from_json(data: dict) -> TileSet:
    tiles = []
    for t in data["tiles"]:
        tiles.append(
            WangTile(
                north=str(t["n"]),
                south=str(t["s"]),
                east=str(t["e"]),
                west=str(t["w"]),
                symbol=str(t["sym"]),
            )
        )
    return TileSet(tuple(tiles))


def tileset_to_json(ts: TileSet) -> dict:
    return {
        "tiles": [
            {"n": t.north, "s": t.south, "e": t.east, "w": t.west, "sym": t.symbol}
            for t in ts.tiles
        ]
    }


# -- generic helpers --------------------------------------------------------


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_file(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
