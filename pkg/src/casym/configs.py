"""Bi-infinite configurations given by finite presentations.

PeriodicConfig is fully periodic; equality is decidable because the period is
kept in canonical form (lexicographically least rotation of the primitive
root).  PresentedConfig is left-periodic + finite center + right-periodic,
which is enough for every configuration the constructions produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alphabet import Alphabet
from .rules import Rule


def _primitive_root(word):
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word == word[:p] * (n // p):
            return word[:p]
    return word


def _least_rotation(word):
    return min(word[i:] + word[:i] for i in range(len(word)))


def canonical_period(word) -> tuple:
    return _least_rotation(_primitive_root(tuple(word)))


@dataclass(frozen=True)
class PeriodicConfig:
    alphabet: Alphabet
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        object.__setattr__(self, "period", canonical_period(self.period))

    @classmethod
    def from_text(cls, alphabet: Alphabet, text: str) -> "PeriodicConfig":
        return cls(alphabet, alphabet.parse_word(text))

    def __str__(self):
        return self.alphabet.format_word(self.period)

    def rotate(self, k: int = 1) -> "PeriodicConfig":
        p = self.period
        k %= len(p)
        return PeriodicConfig(self.alphabet, p[k:] + p[:k])


def apply_periodic(rule: Rule, c: PeriodicConfig) -> PeriodicConfig:
    """One CA step on a fully periodic configuration."""
    if rule.alphabet.symbols != c.alphabet.symbols:
        raise ValueError("rule and configuration alphabets differ")
    p = c.period
    n = len(p)
    r = rule.radius
    image = tuple(rule.apply(tuple(p[(i + j) % n] for j in range(-r, r + 1)))
                  for i in range(n))
    return PeriodicConfig(c.alphabet, image)


@dataclass(frozen=True)
class PresentedConfig:
    """Configuration of the form  ...LLL [center] RRR...  with origin the
    index of the first center cell (center may be empty)."""
    alphabet: Alphabet
    left: tuple[int, ...]
    center: tuple[int, ...]
    right: tuple[int, ...]
    origin: int = 0

    def __post_init__(self):
        if not self.left or not self.right:
            raise ValueError("periodic tails must be nonempty")

    @classmethod
    def from_text(cls, alphabet: Alphabet, left: str, center: str, right: str,
                  origin: int = 0) -> "PresentedConfig":
        return cls(alphabet,
                   alphabet.parse_word(left),
                   alphabet.parse_word(center) if center else (),
                   alphabet.parse_word(right),
                   origin)

    @classmethod
    def uniform(cls, alphabet: Alphabet, symbol) -> "PresentedConfig":
        i = alphabet.index(symbol) if isinstance(symbol, str) else symbol
        return cls(alphabet, (i,), (), (i,))

    def at(self, i: int) -> int:
        if i < self.origin:
            return self.left[(i - self.origin) % len(self.left)]
        j = i - self.origin
        if j < len(self.center):
            return self.center[j]
        return self.right[(j - len(self.center)) % len(self.right)]

    def window(self, start: int, length: int) -> tuple[int, ...]:
        return tuple(self.at(i) for i in range(start, start + length))

    def letters_used(self):
        return set(self.left) | set(self.center) | set(self.right)

    def __str__(self):
        a = self.alphabet
        return (f"w({a.format_word(self.left)})"
                f".{a.format_word(self.center)}."
                f"w({a.format_word(self.right)})@{self.origin}")


def apply_presented(rule: Rule, c: PresentedConfig) -> PresentedConfig:
    """One CA step; the center absorbs 2*radius cells from each tail so the
    presentation stays exact."""
    if rule.alphabet.symbols != c.alphabet.symbols:
        raise ValueError("rule and configuration alphabets differ")
    r = rule.radius
    o = c.origin
    m = len(c.center)
    w = 2 * r + 1

    def image(i):
        return rule.apply(c.window(i - r, w))

    new_origin = o - 2 * r
    center = tuple(image(i) for i in range(new_origin, o + m + 2 * r))
    pl, pr = len(c.left), len(c.right)
    left = tuple(image(i) for i in range(new_origin - pl, new_origin))
    right_start = o + m + 2 * r
    right = tuple(image(i) for i in range(right_start, right_start + pr))
    return PresentedConfig(c.alphabet, left, center, right, new_origin)
