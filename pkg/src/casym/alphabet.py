"""Finite alphabets with optional one-character glyph maps.

Symbols are strings; everywhere else in the package letters are handled as
indices into an Alphabet, and words as tuples of indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]
    glyphs: tuple[str, ...] | None = None
    _index: dict = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        if self.glyphs is not None:
            if len(self.glyphs) != len(self.symbols):
                raise ValueError("glyph map must cover every symbol")
            if any(len(g) != 1 for g in self.glyphs):
                raise ValueError("glyphs must be single characters")
            if len(set(self.glyphs)) != len(self.glyphs):
                raise ValueError("glyph map must be injective")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise KeyError(f"unknown symbol {symbol!r}") from None

    def glyph(self, i: int) -> str:
        if self.glyphs is not None:
            return self.glyphs[i]
        s = self.symbols[i]
        return s if len(s) == 1 else "?"

    def word(self, letters) -> tuple[int, ...]:
        """Coerce an iterable of symbols or indices to an index tuple."""
        out = []
        for x in letters:
            if isinstance(x, str):
                out.append(self.index(x))
            else:
                i = int(x)
                if not 0 <= i < len(self.symbols):
                    raise KeyError(f"letter index {i} out of range")
                out.append(i)
        return tuple(out)

    def parse_word(self, text: str) -> tuple[int, ...]:
        """Parse a word given as space-separated names, or as a glyph string."""
        if " " in text.strip():
            return tuple(self.index(tok) for tok in text.split())
        if text in self._index:  # a single (possibly multi-char) symbol name
            return (self.index(text),)
        if all(t in self._index for t in text):  # every char is a symbol name
            return tuple(self.index(t) for t in text)
        if self.glyphs is not None:
            gmap = {g: i for i, g in enumerate(self.glyphs)}
            try:
                return tuple(gmap[ch] for ch in text)
            except KeyError as e:
                raise KeyError(f"unknown glyph {e.args[0]!r}") from None
        return tuple(self.index(tok) for tok in text.split())

    def format_word(self, word, sep: str | None = None) -> str:
        """Render an index word; glyph string when possible, else space-joined names."""
        names = [self.symbols[i] for i in word]
        if sep is not None:
            return sep.join(names)
        if all(len(n) == 1 for n in names) and self.glyphs is None:
            return "".join(names)
        if self.glyphs is not None:
            return "".join(self.glyphs[i] for i in word)
        return " ".join(names)

    def all_words(self, length: int):
        """All index words of a given length, in canonical (declaration) order."""
        if length == 0:
            yield ()
            return
        k = len(self.symbols)
        word = [0] * length
        while True:
            yield tuple(word)
            j = length - 1
            while j >= 0 and word[j] == k - 1:
                word[j] = 0
                j -= 1
            if j < 0:
                return
            word[j] += 1
