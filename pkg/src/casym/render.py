"""Space-time diagram output: ASCII rows and binary PGM (P5).

PGM gray levels spread the alphabet over 0..255 by letter index
(gray = round(255 * index / (size - 1)), all-zero for unary alphabets),
one pixel per cell, one row per time step, top row = time 0.
"""

from __future__ import annotations

from .alphabet import Alphabet


def ascii_rows(alphabet: Alphabet, rows) -> str:
    return "\n".join("".join(alphabet.glyph(a) for a in row) for row in rows) + "\n"


def pgm_bytes(alphabet: Alphabet, rows) -> bytes:
    rows = [tuple(r) for r in rows]
    h = len(rows)
    w = len(rows[0]) if rows else 0
    k = len(alphabet)
    if k > 1:
        gray = [round(255 * i / (k - 1)) for i in range(k)]
    else:
        gray = [0]
    header = f"P5\n{w} {h}\n255\n".encode()
    body = bytes(gray[a] for row in rows for a in row)
    return header + body


def orbit_rows(configs, lo: int, hi: int):
    """Sample presented configurations on the cell window [lo, hi)."""
    return [c.window(lo, hi - lo) for c in configs]
