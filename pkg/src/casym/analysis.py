"""Language-level analysis: column factors, 2-approximations, image and limit
languages, factor-map transport, and the predicted limit words of the joined
construction.

Wherever a set is claimed exact there are two routes: direct enumeration over
the dependence cone (the oracle, budget-guarded) and an automaton pipeline
(image covers with determinization and minimization between steps).  The two
are required to agree wherever both run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alphabet import Alphabet
from .budgets import Budget, DEFAULT
from .fsm import (Nfa, bi_trim, cover_image, cover_normalize, cover_words,
                  full_shift_cover)
from .fsquad import column_extend
from .rules import Rule, block_map, iterate_block


@dataclass(frozen=True)
class LanguageSample:
    """The set of length-n words of a subshift approximation."""
    n: int
    t: int
    rule_id: str
    words: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ws = tuple(sorted(set(self.words)))
        object.__setattr__(self, "words", ws)

    def __contains__(self, word):
        return tuple(word) in set(self.words)

    def __len__(self):
        return len(self.words)

    def to_text(self, alphabet: Alphabet) -> str:
        head = f"n={self.n} t={self.t} rule={self.rule_id}"
        body = [alphabet.format_word(w, sep=" ") for w in self.words]
        return "\n".join([head] + body) + "\n"

    @classmethod
    def from_text(cls, alphabet: Alphabet, text: str) -> "LanguageSample":
        lines = [l for l in text.splitlines() if l.strip()]
        meta = dict(tok.split("=", 1) for tok in lines[0].split())
        words = tuple(alphabet.parse_word(l) for l in lines[1:])
        return cls(int(meta["n"]), int(meta["t"]), meta.get("rule", "?"), words)


@dataclass(frozen=True)
class ColumnWord:
    """k cells observed for T consecutive steps; rows[0] is time 0."""
    rows: tuple[tuple[int, ...], ...]

    @property
    def width(self):
        return len(self.rows[0])

    @property
    def depth(self):
        return len(self.rows)


@dataclass(frozen=True)
class TwoApproxGraph:
    """One-step compatibility graph on width-k words: u -> v iff some
    configuration through u maps into v."""
    k: int
    vertices: tuple[tuple[int, ...], ...]
    edges: frozenset

    def successors(self, u):
        return [v for (x, v) in self.edges if x == u]

    def to_text(self, alphabet: Alphabet) -> str:
        lines = [f"{alphabet.format_word(u, sep=' ')} -> {alphabet.format_word(v, sep=' ')}"
                 for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"


def two_approx(rule: Rule, k: int, budget: Budget = DEFAULT) -> TwoApproxGraph:
    nwords = len(rule.alphabet) ** (k + 2 * rule.radius)
    budget.check_enum(nwords)
    r = rule.radius
    edges = set()
    for w in rule.alphabet.all_words(k + 2 * r):
        u = w[r:r + k]
        v = block_map(rule, w)
        edges.add((u, v))
    return TwoApproxGraph(k, tuple(rule.alphabet.all_words(k)), frozenset(edges))


def _cone_columns(rule: Rule, k: int, T: int, budget: Budget):
    r = rule.radius
    width = k + 2 * r * (T - 1)
    budget.check_enum(len(rule.alphabet) ** width)
    out = set()
    for u in rule.alphabet.all_words(width):
        rows = []
        w = u
        for t in range(T):
            off = r * (T - 1 - t)
            rows.append(w[off:off + k])
            if t < T - 1:
                w = block_map(rule, w)
        out.add(tuple(rows))
    return out


def trace_covers(rule: Rule, T: int, budget: Budget = DEFAULT):
    """Covers of the depth-t strip subshifts (letters: height-t history
    columns, oldest entry first), for t = 1..T."""
    letters = [(a,) for a in range(len(rule.alphabet))]
    cover = full_shift_cover(letters)
    covers = [cover]
    for _ in range(T - 1):
        cover = cover_normalize(column_extend(cover, rule), budget)
        covers.append(cover)
    return covers


def trace_prefixes(rule: Rule, k: int, T: int, budget: Budget = DEFAULT,
                   strategy: str = "auto") -> set:
    """The exact set of realizable T-step histories of a width-k window,
    as tuples of T rows.

    strategy "enum" walks the whole dependence cone (the oracle);
    "automaton" grows strip covers one time layer at a time; "auto" picks
    enumeration when the cone fits the budget.
    """
    if k < 1 or T < 1:
        raise ValueError("need k >= 1 and T >= 1")
    if strategy == "auto":
        cone = len(rule.alphabet) ** (k + 2 * rule.radius * (T - 1))
        strategy = "enum" if cone <= budget.max_enum else "automaton"
    if strategy == "enum":
        return _cone_columns(rule, k, T, budget)
    if strategy != "automaton":
        raise ValueError(f"unknown strategy {strategy!r}")
    cover = trace_covers(rule, T, budget)[-1]
    out = set()
    for word in cover_words(cover, k, budget):
        # word is k columns bottom-up in time; transpose into rows
        rows = tuple(tuple(col[t] for col in word) for t in range(T))
        out.add(rows)
    return out


def check_sft_order2(rule: Rule, k: int, T: int, budget: Budget = DEFAULT):
    """Is every depth-T path of the 2-approximation graph a realizable
    history?  Returns (ok, witness); witness is a shortest unrealizable path.
    The reverse inclusion always holds and is asserted.
    """
    graph = two_approx(rule, k, budget)
    succ = {}
    for u, v in graph.edges:
        succ.setdefault(u, []).append(v)
    for depth in range(2, T + 1):
        traces = trace_prefixes(rule, k, depth, budget)
        paths = set()
        stack = [(v,) for v in graph.vertices]
        while stack:
            p = stack.pop()
            if len(p) == depth:
                paths.add(p)
                budget.check_enum(len(paths))
                continue
            for v in succ.get(p[-1], ()):
                stack.append(p + (v,))
        if not traces <= paths:
            raise AssertionError("2-approximation lost realizable histories")
        extra = paths - traces
        if extra:
            return False, min(extra)
    return True, None


def image_language(rule: Rule, n: int, t: int, budget: Budget = DEFAULT,
                   strategy: str = "auto") -> LanguageSample:
    """Length-n words of the t-th image of the full shift."""
    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")
    if strategy == "auto":
        cone = len(rule.alphabet) ** (n + 2 * rule.radius * t)
        strategy = "enum" if cone <= budget.max_enum else "automaton"
    rid = rule.name or "rule"
    if strategy == "enum":
        budget.check_enum(len(rule.alphabet) ** (n + 2 * rule.radius * t))
        words = {iterate_block(rule, u, t)
                 for u in rule.alphabet.all_words(n + 2 * rule.radius * t)}
        return LanguageSample(n, t, rid, tuple(words))
    if strategy != "automaton":
        raise ValueError(f"unknown strategy {strategy!r}")
    cover = _image_cover_at(rule, t, budget)
    return LanguageSample(n, t, rid, tuple(cover_words(cover, n, budget)))


_image_cover_cache = {}


def _image_cover_at(rule: Rule, t: int, budget: Budget):
    key = (rule, t)
    if key in _image_cover_cache:
        return _image_cover_cache[key]
    if t == 0:
        cover = full_shift_cover(range(len(rule.alphabet)))
    else:
        prev = _image_cover_at(rule, t - 1, budget)
        cover = cover_normalize(cover_image(prev, rule), budget)
    _image_cover_cache[key] = cover
    return cover


def limit_language(rule: Rule, n: int, t_max: int, budget: Budget = DEFAULT,
                   strategy: str = "auto"):
    """The decreasing chain of length-n word sets for t = 0..t_max, plus a
    stabilization report.

    The final set over-approximates the limit language; constancy over the
    last s steps is reported, never asserted as convergence.
    """
    if t_max < 1:
        raise ValueError("need t_max >= 1")
    chain = [image_language(rule, n, t, budget, strategy) for t in range(t_max + 1)]
    last_change = 0
    for t in range(1, t_max + 1):
        if set(chain[t].words) != set(chain[t - 1].words):
            last_change = t
    report = {
        "last_strict_decrease": last_change,
        "stable_steps": t_max - last_change,
        "final_size": len(chain[-1]),
    }
    return chain, report


@dataclass(frozen=True)
class FactorMap:
    """Letter-level factor map between subshift alphabets; a coloring when the
    radius is zero."""
    source: Alphabet
    target: Alphabet
    radius: int
    table: tuple[int, ...]

    @classmethod
    def from_fn(cls, source, target, radius, fn):
        table = []
        for w in source.all_words(2 * radius + 1):
            v = fn(w)
            table.append(target.index(v) if isinstance(v, str) else v)
        return cls(source, target, radius, tuple(table))

    @classmethod
    def identity(cls, alphabet):
        return cls.from_fn(alphabet, alphabet, 0, lambda w: w[0])

    @classmethod
    def projection(cls, source, target, component: int, block: int):
        """Coloring from a product alphabet (index = a*block + b) onto one
        component; block is the size of the second factor."""
        if component == 0:
            return cls.from_fn(source, target, 0, lambda w: w[0] // block)
        return cls.from_fn(source, target, 0, lambda w: w[0] % block)

    @property
    def is_coloring(self):
        return self.radius == 0

    def apply_word(self, word):
        k = len(self.source)
        width = 2 * self.radius + 1
        if len(word) < width:
            raise ValueError("word too short for the factor radius")
        out = []
        for i in range(len(word) - width + 1):
            idx = 0
            for x in word[i:i + width]:
                idx = idx * k + x
            out.append(self.table[idx])
        return tuple(out)


def apply_factor_language(phi: FactorMap, sample: LanguageSample) -> LanguageSample:
    words = {phi.apply_word(w) for w in sample.words}
    return LanguageSample(sample.n - 2 * phi.radius, sample.t,
                          f"phi({sample.rule_id})", tuple(words))


def predicted_limit_words(base: Alphabet, zero, squad: Alphabet, n: int,
                          xs_oracle) -> LanguageSample:
    """Length-n words of: every plain word, plus runs of paired letters whose
    squad projection the oracle accepts, flanked only by the spreading symbol.

    The word layout follows the joined alphabet: plain letters first, then
    pairs (a|q) with index base + a*|squad| + q.
    """
    zi = base.index(zero) if isinstance(zero, str) else zero
    na = len(base)
    nq = len(squad)
    words = set(base.all_words(n))  # plain words, any letters
    for run in range(1, n + 1):
        for qs in squad.all_words(run):
            if not xs_oracle(qs):
                continue
            for a_part in base.all_words(run):
                mid = tuple(na + a * nq + q for a, q in zip(a_part, qs))
                for i in range(0, n - run + 1):
                    w = (zi,) * i + mid + (zi,) * (n - run - i)
                    words.add(w)
    return LanguageSample(n, -1, "predicted-limit", tuple(words))
