"""A radius-1 firing-squad CA over Z built from signal semantics.

The automaton synchronizes a periodic lattice of # marks: every # splits into
five signals (speeds -1, -1/2, 0, +1/2, +1), the fast pair crosses in the
middle of each gap, the slow pair meets there to plant a fresh #, and the
returning fast signals revive the old columns, so the spacing halves every
generation.  Spacing 1 (the ``#B#B...`` lattice) fires: every cell turns into
the firing state simultaneously two steps later.  Every neighborhood that is
not part of some valid diagram produces the spreading killer state.

States are sets of atomic signals.  Speed-1/2 signals alternate a "moved"
phase (rendered at the destination cell, continuously half a cell behind) and
a "stay" phase (exactly on the cell), which makes the slope-1/2 segments hit
integer coordinates exactly at their stay cells.  Co-occupancy states exist
for precisely the legal crossings:

    name  atoms            role
    AL    {L1, l2m}        left half of a fresh split
    AR    {R1, r2m}        right half of a fresh split
    C     {l1, r1}         fast signals crossing in one cell
    M     {l2m, r2m}       slow signals meeting; becomes # next step
    F0    {L1,l2m,R1,r2m}  spacing-1 overlap; fires or dies next step
    X1/X2 {l1, r2m/r2s}    l1 passing over a slow right signal
    Y1/Y2 {r1, l2m/l2s}    r1 passing over a slow left signal

The only valid signal crossings are the fast pair L1+R1 (which lowercases
both), l1 over r2, r1 over l2, and the slow meet l2+r2 on an integer point;
l1 and r1 arriving together at a column revive it.  Everything else kills.
"""

from __future__ import annotations

import functools
from importlib import resources

from .alphabet import Alphabet
from .budgets import Budget, BudgetExceeded, DEFAULT
from .configs import PeriodicConfig, PresentedConfig, apply_periodic, apply_presented
from .fsm import (Nfa, bi_trim, cover_normalize, cover_words, factor_nfa,
                  full_shift_cover, preimage_nfa)
from .rules import Rule

BLANK = "B"
KAPPA = "κ"
GAMMA = "γ"
SHARP = "#"
COLUMN = "#'"

# symbol name -> frozenset of atomic signals (macro states handled separately)
STATE_ATOMS = {
    "B": frozenset(),
    "#'": frozenset({"P"}),
    "L1": frozenset({"L1"}),
    "l1": frozenset({"l1"}),
    "l2": frozenset({"l2s"}),
    "l2m": frozenset({"l2m"}),
    "r2": frozenset({"r2s"}),
    "r2m": frozenset({"r2m"}),
    "r1": frozenset({"r1"}),
    "R1": frozenset({"R1"}),
    "AL": frozenset({"L1", "l2m"}),
    "AR": frozenset({"R1", "r2m"}),
    "C": frozenset({"l1", "r1"}),
    "M": frozenset({"l2m", "r2m"}),
    "F0": frozenset({"L1", "l2m", "R1", "r2m"}),
    "X1": frozenset({"l1", "r2m"}),
    "X2": frozenset({"l1", "r2s"}),
    "Y1": frozenset({"r1", "l2m"}),
    "Y2": frozenset({"r1", "l2s"}),
}
ATOMS_STATE = {v: k for k, v in STATE_ATOMS.items()}

FS_SYMBOLS = ("B", "#", "#'", "L1", "l1", "l2", "l2m", "r2", "r2m", "r1", "R1",
              "AL", "AR", "C", "M", "F0", "X1", "X2", "Y1", "Y2", GAMMA, KAPPA)
FS_GLYPHS = (".", "#", "'", "L", "l", "(", "{", ")", "}", "r", "R",
             "<", ">", "X", "M", "F", "1", "2", "3", "4", "g", "k")

SIGNAL_SPEED = {"L1": -1, "l1": -1, "l2": -0.5, "#'": 0.0,
                "r2": 0.5, "r1": 1, "R1": 1}

# crossings at a cell boundary: (right-mover from the left cell, left-mover
# leaving the right cell); anything not listed raises kappa
_VALID_BOUNDARY = {("R1", "L1"), ("r1", "l2s"), ("r2m", "l1")}
# simultaneous arrivals into one cell from both sides
_VALID_MEET = {("R1", "L1"), ("r1", "l2m"), ("r2m", "l1"), ("r2m", "l2m")}


def _arrivals_from_left(state):
    if state == SHARP:
        return {"R1", "r2m"}
    out = set()
    atoms = STATE_ATOMS.get(state, frozenset())
    if "R1" in atoms:
        out.add("R1")
    if "r1" in atoms:
        out.add("r1")
    if "r2s" in atoms:
        out.add("r2m")
    return out


def _arrivals_from_right(state):
    if state == SHARP:
        return {"L1", "l2m"}
    out = set()
    atoms = STATE_ATOMS.get(state, frozenset())
    if "L1" in atoms:
        out.add("L1")
    if "l1" in atoms:
        out.add("l1")
    if "l2s" in atoms:
        out.add("l2m")
    return out


def _transition(a, x, b):
    """Next state of the center cell given symbol names (a, x, b)."""
    if KAPPA in (a, x, b):
        return KAPPA
    if GAMMA in (a, x, b):
        return GAMMA if a == x == b == GAMMA else KAPPA
    # the two fully synchronized local patterns fire
    if (a, x, b) == ("F0", COLUMN, "F0") or (a, x, b) == (COLUMN, "F0", COLUMN):
        return GAMMA
    # spacing-1 overlap of two splits
    if a == SHARP and b == SHARP and x == BLANK:
        return "F0"

    la = _arrivals_from_left(a)
    ra = _arrivals_from_right(b)

    if x == SHARP:  # fresh mark turns into a column; nothing may run into it
        return COLUMN if not la and not ra else KAPPA
    if x == "M":    # slow signals settle together: a new mark
        return SHARP if not la and not ra else KAPPA
    if x == COLUMN:
        if la == {"r1"} and ra == {"l1"}:
            return SHARP
        return COLUMN if not la and not ra else KAPPA

    atoms = STATE_ATOMS[x]
    # boundary crossings between this cell and its neighbors, on the raw
    # identities; the only valid capital crossing lowercases the mover
    out_left = {t for t in atoms if t in ("L1", "l1", "l2s")}
    out_right = {t for t in atoms if t in ("R1", "r1", "r2s")}
    for p in la:
        for q in out_left:
            if (p, q) not in _VALID_BOUNDARY:
                return KAPPA
    for q in ra:
        for p in out_right:
            if (p, q) not in _VALID_BOUNDARY_MIRROR:
                return KAPPA
    la = {"r1" if p == "R1" and "L1" in out_left else p for p in la}
    ra = {"l1" if q == "L1" and "R1" in out_right else q for q in ra}
    # arrivals meeting inside this cell, after the boundary conversions;
    # the capital pair crossing here lowercases both during assembly
    cross = ("R1" in la and "L1" in ra)
    for p in la:
        for q in ra:
            if (p, q) != ("R1", "L1") and (p, q) not in _VALID_MEET:
                return KAPPA
    # assemble the next atom set
    out = set()
    if "l2m" in atoms:
        out.add("l2s")
    if "r2m" in atoms:
        out.add("r2s")
    for p in la:
        out.add("r1" if p == "R1" and cross else p)
    for q in ra:
        out.add("l1" if q == "L1" and cross else q)
    name = ATOMS_STATE.get(frozenset(out))
    return name if name is not None else KAPPA


_VALID_BOUNDARY_MIRROR = {("R1", "L1"), ("r2s", "l1"), ("r1", "l2m")}


def fs_alphabet() -> Alphabet:
    return Alphabet(FS_SYMBOLS, FS_GLYPHS)


@functools.lru_cache(maxsize=1)
def fs_rule() -> Rule:
    """The shipped firing-squad rule (synthesized; also packaged as fs.rule)."""
    alph = fs_alphabet()
    syms = alph.symbols

    def fn(w):
        return _transition(syms[w[0]], syms[w[1]], syms[w[2]])

    return Rule.from_fn(alph, 1, fn, name="fs")


def packaged_rule_text() -> str:
    return resources.files("casym").joinpath("rules/fs.rule").read_text("utf-8")


# spacing map of the shipped rule: the lattice with g(n) blanks evolves to the
# lattice with n blanks (halving), and spacing 1 fires two steps later
SPACING_SET = (1, 3, 7, 15, 31)


def spacing_map(n: int) -> int:
    return 2 * n + 1


def fire_time(n: int) -> int:
    """Steps from the n-blank lattice to the all-firing configuration."""
    d = n + 1
    if d & (d - 1):
        raise ValueError(f"spacing {n} does not synchronize")
    return 2 * d - 2


def lattice(n: int) -> PeriodicConfig:
    """The configuration with marks every n+1 cells:  # B^n  repeated."""
    alph = fs_alphabet()
    return PeriodicConfig(alph, (alph.index(SHARP),) + (alph.index(BLANK),) * n)


def lattice_presented(n: int) -> PresentedConfig:
    alph = fs_alphabet()
    p = (alph.index(SHARP),) + (alph.index(BLANK),) * n
    return PresentedConfig(alph, p, (), p)


def simulate(c: PresentedConfig, steps: int, rule: Rule | None = None):
    """Orbit of a presented configuration plus first kappa/gamma times.

    Returns (orbit, first_kappa, first_gamma); orbit[t] is the configuration
    at time t, events are None when the symbol never shows up.
    """
    rule = rule or fs_rule()
    ki = rule.alphabet.index(KAPPA) if KAPPA in rule.alphabet else None
    gi = rule.alphabet.index(GAMMA) if GAMMA in rule.alphabet else None
    orbit = [c]
    first_k = first_g = None
    for t in range(steps + 1):
        used = orbit[t].letters_used()
        if first_k is None and ki in used:
            first_k = t
        if first_g is None and gi in used:
            first_g = t
        if t < steps:
            orbit.append(apply_presented(rule, orbit[t]))
    return orbit, first_k, first_g


# --- history diagrams ----------------------------------------------------------

class HistoryDiagram:
    """W x T grid of states; row 0 is the most recent time, row t+1 is the
    preimage row of row t.  Only interior cells are constrained (free boundary).
    """

    def __init__(self, rows, alphabet=None):
        self.rows = [tuple(r) for r in rows]
        if not self.rows or not self.rows[0]:
            raise ValueError("diagram must be nonempty")
        if len({len(r) for r in self.rows}) != 1:
            raise ValueError("all rows must have equal width")
        self.alphabet = alphabet or fs_alphabet()

    @property
    def width(self):
        return len(self.rows[0])

    @property
    def depth(self):
        return len(self.rows)

    @classmethod
    def from_orbit(cls, orbit_rows, alphabet=None):
        """Build from forward-time rows (oldest first): reverses into history order."""
        return cls(list(reversed([tuple(r) for r in orbit_rows])), alphabet)


def validate_history(d: HistoryDiagram, rule: Rule | None = None):
    """Check the local rule between consecutive rows and the killer/firing ban
    in the past; returns (ok, violations)."""
    rule = rule or fs_rule()
    bad = []
    ki = rule.alphabet.index(KAPPA)
    gi = rule.alphabet.index(GAMMA)
    for t in range(1, d.depth):
        row = d.rows[t]
        for c, s in enumerate(row):
            if s in (ki, gi):
                bad.append(("forbidden symbol", c, t))
    r = rule.radius
    for t in range(1, d.depth):
        below, above = d.rows[t], d.rows[t - 1]
        for c in range(r, d.width - r):
            if rule.apply(below[c - r:c + r + 1]) != above[c]:
                bad.append(("local rule mismatch", c, t))
    return not bad, bad


# --- backward reachability (the X_S oracle) ------------------------------------

def q_prime_letters(rule: Rule | None = None):
    rule = rule or fs_rule()
    return [i for i, s in enumerate(rule.alphabet.symbols) if s not in (KAPPA, GAMMA)]


def backward_reach(word, depth: int, rule: Rule | None = None,
                   budget: Budget = DEFAULT) -> bool:
    """Does some depth-long chain of preimages reach `word`, with every
    intermediate word free of kappa and gamma?  Monotone decreasing in depth.
    """
    rule = rule or fs_rule()
    if isinstance(word, str):
        word = rule.alphabet.parse_word(word)
    letters = list(range(len(rule.alphabet)))
    good = q_prime_letters(rule)
    lang = factor_nfa(letters, tuple(word))
    for _ in range(depth):
        lang = preimage_nfa(lang, rule, budget)
        lang = lang.restrict_letters(good).trim_useful()
        if not lang.initial:
            return False
        lang = lang.bisim_quotient()
        try:  # a small DFA keeps the next preimage cheap; bisim is enough otherwise
            lang = lang.minimize(Budget(max_states=8 * lang.n + 64))
        except BudgetExceeded:
            pass
        budget.check_states(lang.n)
    return True


def backward_reach_sets(max_len: int, depth: int, rule: Rule | None = None,
                        budget: Budget = DEFAULT):
    """All words of length <= max_len with a depth-long clean preimage chain.

    Batch equivalent of backward_reach, computed once with a time-layered
    strip cover: columns record a cell's whole history, layers 0..depth-1 are
    restricted to non-killer non-firing states, and projecting each column to
    its newest entry yields the reachable words.
    """
    rule = rule or fs_rule()
    good = set(q_prime_letters(rule))
    cover = full_shift_cover([(a,) for a in good])
    for level in range(1, depth + 1):
        allowed = good if level < depth else None
        cover = cover_normalize(column_extend(cover, rule, allowed), budget)
    last = cover.relabel(lambda col: col[-1])
    out = {}
    for n in range(1, max_len + 1):
        out[n] = set(cover_words(bi_trim(last), n, budget))
    return out


def column_extend(cover: Nfa, rule: Rule, allowed_last=None) -> Nfa:
    """One more time layer on a strip cover whose letters are history columns
    (tuples of letters, oldest first)."""
    r = rule.radius
    layer = {(q, ()) for q in range(cover.n)}
    for _ in range(2 * r):
        nxt = set()
        for q, w in layer:
            for a, tgts in cover.edges.get(q, {}).items():
                for q2 in tgts:
                    nxt.add((q2, w + (a,)))
        layer = nxt
    index = {s: i for i, s in enumerate(sorted(layer, key=repr))}
    edges = {}
    for (q, w), i in index.items():
        row = {}
        for a, tgts in cover.edges.get(q, {}).items():
            full = w + (a,)
            new_letter = rule.apply(tuple(col[-1] for col in full))
            if allowed_last is not None and new_letter not in allowed_last:
                continue
            out = full[r] + (new_letter,)
            nw = full[1:]
            for q2 in tgts:
                j = index.get((q2, nw))
                if j is not None:
                    row.setdefault(out, set()).add(j)
        edges[i] = {k: frozenset(v) for k, v in row.items()}
    allstates = range(len(index))
    return bi_trim(Nfa(len(index), edges, allstates, allstates))


def doubling_chain(n: int, rule: Rule | None = None):
    """The halving cascade from the n-blank lattice down to all-firing, as a
    list of (spacing, steps) generations; constructive witness that the
    all-firing configuration has arbitrarily deep clean histories."""
    rule = rule or fs_rule()
    chain = []
    d = n + 1
    while d > 2:
        if d % 2:
            raise ValueError(f"spacing {d - 1} does not halve")
        chain.append((d - 1, d))
        d //= 2
    chain.append((1, 2))
    return chain


def gamma_history(depth: int, rule: Rule | None = None):
    """Backward history of the all-firing configuration: configurations
    y^1..y^depth with S(y^t) = y^{t-1}, none containing kappa or gamma."""
    rule = rule or fs_rule()
    n = 1
    while fire_time(n) < depth:
        n = spacing_map(n)
    start = lattice(n)
    orbit = [start]
    for _ in range(fire_time(n)):
        orbit.append(apply_periodic(rule, orbit[-1]))
    # orbit[-1] is all-gamma; history y^t = orbit[fire - t]
    fire = fire_time(n)
    return [orbit[fire - t] for t in range(1, depth + 1)]
