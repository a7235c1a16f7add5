"""Local rules of one-dimensional cellular automata.

A Rule is a total map from (2r+1)-tuples over its alphabet to the alphabet,
stored as a dense table indexed by mixed-radix encoding of the tuple
(leftmost letter most significant), so lookup is a single indexing operation.
"""

from __future__ import annotations

from .alphabet import Alphabet


class Rule:
    def __init__(self, alphabet: Alphabet, radius: int, table, name: str | None = None):
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        k = len(alphabet)
        width = 2 * radius + 1
        table = tuple(table)
        if len(table) != k ** width:
            raise ValueError(f"table must have {k ** width} entries, got {len(table)}")
        if any(not 0 <= v < k for v in table):
            raise ValueError("table output out of alphabet range")
        self.alphabet = alphabet
        self.radius = radius
        self.table = table
        self.name = name
        self._k = k
        self._hash = hash((alphabet.symbols, radius, table))

    def __eq__(self, other):
        return (isinstance(other, Rule)
                and self.alphabet.symbols == other.alphabet.symbols
                and self.radius == other.radius
                and self.table == other.table)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Rule({self.name or 'anonymous'}, |A|={self._k}, r={self.radius})"

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    @classmethod
    def from_fn(cls, alphabet: Alphabet, radius: int, fn, name=None) -> "Rule":
        """Tabulate fn over all (2r+1)-tuples of letter indices; fn may return
        a letter index or a symbol name."""
        table = []
        for w in alphabet.all_words(2 * radius + 1):
            v = fn(w)
            table.append(alphabet.index(v) if isinstance(v, str) else v)
        return cls(alphabet, radius, table, name=name)

    def encode(self, window) -> int:
        idx = 0
        for x in window:
            idx = idx * self._k + x
        return idx

    def apply(self, window) -> int:
        """Image letter of one neighborhood (tuple of 2r+1 letter indices)."""
        idx = 0
        for x in window:
            idx = idx * self._k + x
        return self.table[idx]

    def pad_to_radius(self, radius: int) -> "Rule":
        """Widen to a larger radius by ignoring the extra outer cells."""
        if radius == self.radius:
            return self
        if radius < self.radius:
            raise ValueError("can only pad to a larger radius")
        d = radius - self.radius
        inner = 2 * self.radius + 1

        def fn(w):
            return self.apply(w[d:d + inner])

        return Rule.from_fn(self.alphabet, radius, fn,
                            name=f"{self.name}@r{radius}" if self.name else None)


def block_map(rule: Rule, word) -> tuple[int, ...]:
    """Apply the local rule along a word; output is shorter by 2*radius."""
    w = 2 * rule.radius + 1
    if len(word) < w:
        raise ValueError(f"word of length {len(word)} too short for radius {rule.radius}")
    word = tuple(word)
    return tuple(rule.apply(word[i:i + w]) for i in range(len(word) - w + 1))


def iterate_block(rule: Rule, word, t: int) -> tuple[int, ...]:
    """t-fold block map; needs |word| >= 2*radius*t + 1 unless t = 0."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    word = tuple(word)
    if t > 0 and len(word) < 2 * rule.radius * t + 1:
        raise ValueError(f"word of length {len(word)} too short for {t} steps")
    for _ in range(t):
        word = block_map(rule, word)
    return word


def has_spreading_state(rule: Rule, z) -> bool:
    """True iff every neighborhood containing z maps to z."""
    zi = rule.alphabet.index(z) if isinstance(z, str) else z
    if not 0 <= zi < len(rule.alphabet):
        raise KeyError(f"unknown symbol {z!r}")
    for w in rule.alphabet.all_words(rule.width):
        if zi in w and rule.apply(w) != zi:
            return False
    return True


def product_alphabet(a: Alphabet, b: Alphabet) -> Alphabet:
    symbols = tuple(f"({x},{y})" for x in a.symbols for y in b.symbols)
    return Alphabet(symbols)


def product_rule(f: Rule, g: Rule) -> Rule:
    """Componentwise product over the pair alphabet; radii reconciled by padding."""
    r = max(f.radius, g.radius)
    f = f.pad_to_radius(r)
    g = g.pad_to_radius(r)
    alph = product_alphabet(f.alphabet, g.alphabet)
    nb = len(g.alphabet)

    def fn(w):
        fw = tuple(x // nb for x in w)
        gw = tuple(x % nb for x in w)
        return f.apply(fw) * nb + g.apply(gw)

    name = None
    if f.name and g.name:
        name = f"{f.name}x{g.name}"
    return Rule.from_fn(alph, r, fn, name=name)


def check_sub_automaton(big: Rule, sub_alphabet, small: Rule, embedding) -> bool:
    """Is (sub_alphabet, big) a closed sub-automaton equal to small up to renaming?

    embedding maps small's symbols injectively into sub_alphabet; sub_alphabet
    is a subset of big's symbols.  Radii are reconciled by padding.
    """
    emb = {s: embedding[s] for s in small.alphabet.symbols}
    if len(set(emb.values())) != len(emb):
        raise ValueError("embedding must be injective")
    sub = set(sub_alphabet)
    if set(emb.values()) != sub:
        raise ValueError("embedding must map onto the sub-alphabet")
    r = max(big.radius, small.radius)
    big = big.pad_to_radius(r)
    small = small.pad_to_radius(r)
    to_big = [big.alphabet.index(emb[s]) for s in small.alphabet.symbols]
    for w in small.alphabet.all_words(2 * r + 1):
        out = big.apply(tuple(to_big[x] for x in w))
        if out != to_big[small.apply(w)]:
            return False
    return True


# --- built-in rules ----------------------------------------------------------

def shift_rule(symbols=("a", "b")) -> Rule:
    alph = Alphabet(tuple(symbols))
    return Rule.from_fn(alph, 1, lambda w: w[2], name="shift")


def identity_rule(symbols=("a", "b")) -> Rule:
    alph = Alphabet(tuple(symbols))
    return Rule.from_fn(alph, 1, lambda w: w[1], name="identity")


def min_rule() -> Rule:
    alph = Alphabet(("0", "1"))
    return Rule.from_fn(alph, 1, min, name="min")


def elementary_rule(n: int) -> Rule:
    """One of the 256 radius-1 binary rules, Wolfram numbering."""
    if not 0 <= n < 256:
        raise ValueError("elementary rule number must be in [0, 256)")
    alph = Alphabet(("0", "1"))
    return Rule.from_fn(alph, 1, lambda w: (n >> (w[0] * 4 + w[1] * 2 + w[2])) & 1,
                        name=f"elementary:{n}")


def builtin_rule(name: str) -> Rule:
    if name == "shift":
        return shift_rule()
    if name == "identity":
        return identity_rule()
    if name == "min":
        return min_rule()
    if name.startswith("elementary:"):
        return elementary_rule(int(name.split(":", 1)[1]))
    if name == "fs":
        from .fsquad import fs_rule
        return fs_rule()
    raise KeyError(f"no built-in rule named {name!r}")


# --- rule file format ---------------------------------------------------------

def serialize_rule(rule: Rule) -> str:
    """Rule file text: alphabet, radius, optional glyphs, then the full map."""
    lines = [
        "alphabet: " + " ".join(rule.alphabet.symbols),
        f"radius: {rule.radius}",
    ]
    if rule.alphabet.glyphs is not None:
        pairs = " ".join(f"{s}={g}" for s, g in zip(rule.alphabet.symbols, rule.alphabet.glyphs))
        lines.append("glyphs: " + pairs)
    lines.append("map:")
    syms = rule.alphabet.symbols
    for w in rule.alphabet.all_words(rule.width):
        lines.append(" ".join(syms[x] for x in w) + " -> " + syms[rule.apply(w)])
    return "\n".join(lines) + "\n"


def parse_rule(text: str, name=None) -> Rule:
    alphabet = None
    radius = None
    glyphs = None
    entries = {}
    default = None
    in_map = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if in_map:
            if line.startswith("default:"):
                default = line.split(":", 1)[1].strip()
                continue
            if "->" not in line:
                raise ValueError(f"line {lineno}: expected 'tuple -> symbol'")
            lhs, rhs = line.split("->")
            entries[tuple(lhs.split())] = rhs.strip()
            continue
        if line.startswith("alphabet:"):
            alphabet = tuple(line.split(":", 1)[1].split())
        elif line.startswith("radius:"):
            radius = int(line.split(":", 1)[1])
        elif line.startswith("glyphs:"):
            glyphs = dict(tok.split("=", 1) for tok in line.split(":", 1)[1].split())
        elif line.startswith("map:"):
            in_map = True
        else:
            raise ValueError(f"line {lineno}: unrecognized header {line!r}")
    if alphabet is None or radius is None:
        raise ValueError("rule file must declare alphabet and radius")
    if glyphs is not None:
        missing = set(glyphs) - set(alphabet)
        if missing:
            raise ValueError(f"glyphs for unknown symbols: {sorted(missing)}")
        glyph_tuple = tuple(glyphs.get(s, s if len(s) == 1 else None) for s in alphabet)
        if None in glyph_tuple:
            raise ValueError("glyph map must cover every multi-character symbol")
        alph = Alphabet(alphabet, glyph_tuple)
    else:
        alph = Alphabet(alphabet)
    width = 2 * radius + 1
    table = []
    for w in alph.all_words(width):
        key = tuple(alphabet[x] for x in w)
        if key in entries:
            table.append(alph.index(entries[key]))
        elif default is not None:
            table.append(alph.index(default))
        else:
            raise ValueError(f"map does not cover {' '.join(key)} and no default given")
    for key in entries:
        if len(key) != width or any(s not in alph for s in key):
            raise ValueError(f"bad map entry {' '.join(key)!r}")
    return Rule(alph, radius, table, name=name)


def load_rule(source: str) -> Rule:
    """Resolve a rule from a built-in name or an @file path."""
    if source.startswith("@"):
        with open(source[1:], encoding="utf-8") as f:
            return parse_rule(f.read(), name=source[1:])
    return builtin_rule(source)
