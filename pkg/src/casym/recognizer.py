"""Membership in the clean-history set of the firing-squad CA.

A configuration belongs iff it has an infinite backward history avoiding the
killer and firing states.  The decision procedure is a union of cases:

* ALL_GAMMA        the all-firing configuration and its factors;
* NO_SHARPS        signal/blank configurations matching one of four verified
                   regular families (no column symbols);
* NEUTRAL_PRIMES   columns that were never re-formed, with outward signals;
* ONE_SHARP        a single column with the products of one past split on a
                   blank background (bounded simulation match);
* TWO_SHARPS       forward orbits of the periodic mark lattices (bounded
                   simulation match; equal spacing pins the search);
* PRIMES_WITH_SIGNALS  the same orbits at moments where every mark has
                   already split.

Every regular family is verified backward-invariant at build time: its
language is contained in the language of its own image, so each member has a
preimage inside the family and hence an infinite clean history.  That makes
acceptance sound by construction.  The procedure may under-accept exotic
signal mixtures; cross_check reports oracle-confirmed rejects as undecided.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum

from .budgets import Budget, DEFAULT
from .configs import PeriodicConfig, PresentedConfig, apply_periodic
from .fsm import Nfa, bi_trim, cover_accepts_presented, cover_image
from .fsquad import (BLANK, COLUMN, GAMMA, KAPPA, SHARP, backward_reach,
                     backward_reach_sets, fs_alphabet, fs_rule, lattice)
from .rules import Rule


class CaseLabel(Enum):
    ONE_SHARP = "one-sharp"
    TWO_SHARPS = "two-sharps"
    NEUTRAL_PRIMES = "neutral-primes"
    PRIMES_WITH_SIGNALS = "primes-with-signals"
    NO_SHARPS = "no-sharps"
    ALL_GAMMA = "all-gamma"


# --- the verified regular families ---------------------------------------------

def _cover_from_graph(transitions) -> Nfa:
    """transitions: iterable of (state, symbol name, state); states hashable."""
    alph = fs_alphabet()
    states = sorted({t[0] for t in transitions} | {t[2] for t in transitions}, key=repr)
    index = {s: i for i, s in enumerate(states)}
    edges = {}
    for q, sym, q2 in transitions:
        a = alph.index(sym)
        row = edges.setdefault(index[q], {})
        row[a] = row.get(a, frozenset()) | frozenset([index[q2]])
    return bi_trim(Nfa(len(states), edges, range(len(states)), range(len(states))))


def _family_left_fast_mix():
    """Right-fast block, then a mix of left-fast singles over right-slow
    trains: w{r1,R1,B} {B,l1,r2,r2m,X1,X2}w with no stay-phase immediately
    before a move-phase."""
    has_r2s = ("r2", "X2")
    has_r2m = ("r2m", "X1")
    t = []
    for s in ("B", "r1", "R1"):
        t.append(("blk", s, "blk"))
    for s in ("B", "l1", "r2", "r2m", "X1", "X2"):
        for q in ("blk", "mix0", "mixs"):
            if q == "mixs" and s in has_r2m:
                continue
            t.append((q, s, "mixs" if s in has_r2s else "mix0"))
    return _cover_from_graph(t)


def _family_right_fast_mix():
    """Mirror: mix of right-fast singles over left-slow trains, then a
    left-fast block."""
    has_l2m = ("l2m", "Y1")
    has_l2s = ("l2", "Y2")
    t = []
    for s in ("B", "r1", "l2", "l2m", "Y1", "Y2"):
        for q in ("mix0", "mixm"):
            if q == "mixm" and s in has_l2s:
                continue
            t.append((q, s, "mixm" if s in has_l2m else "mix0"))
    for s in ("B", "l1", "L1"):
        for q in ("mix0", "mixm", "blk"):
            t.append((q, s, "blk"))
    return _cover_from_graph(t)


def _family_slow_wedge():
    """w{r1,R1,B} right-slow train, at most one meet, left-slow train,
    {l1,L1,B}w: the diverging-backward ordering of slow signals."""
    t = []
    for s in ("B", "r1", "R1"):
        t.append(("p0", s, "p0"))
    # right-slow block with the phase rule
    for q in ("p0", "p1_0"):
        t.append((q, "r2m", "p1_0"))
        t.append((q, "r2", "p1_s"))
    t.append(("p1_s", "r2", "p1_s"))
    t.append(("p1_0", "B", "p1_0"))
    t.append(("p1_s", "B", "p1_0"))
    # the meet: carries a move-phase pair, so no stay-phase may precede it
    for q in ("p0", "p1_0"):
        t.append((q, "M", "pM"))
    # left-slow block; the meet counts as a move phase on the left track
    for q, flag in (("p0", False), ("p1_0", False), ("p1_s", False), ("pM", True)):
        t.append((q, "l2m", "p2_m"))
        if not flag:
            t.append((q, "l2", "p2_0"))
    t.append(("p2_0", "l2", "p2_0"))
    t.append(("p2_0", "l2m", "p2_m"))
    t.append(("p2_m", "l2m", "p2_m"))
    t.append(("p2_0", "B", "p2_0"))
    t.append(("p2_m", "B", "p2_0"))
    # trailing left-fast block
    for q in ("p0", "p1_0", "p1_s", "pM", "p2_0", "p2_m", "p3"):
        for s in ("l1", "L1"):
            t.append((q, s, "p3"))
    t.append(("p3", "B", "p3"))
    return _cover_from_graph(t)


def _family_fast_pair():
    """w{r1,R1,B} with at most one diverged fast pair (l1 then r1, or the
    in-cell crossing) and a trailing {l1,L1,B}w block."""
    t = []
    for s in ("B", "r1", "R1"):
        t.append(("q0", s, "q0"))
    t.append(("q0", "l1", "gap"))
    t.append(("gap", "B", "gap"))
    t.append(("gap", "r1", "q2"))
    t.append(("q0", "C", "q2"))
    for s in ("B", "l1", "L1"):
        t.append(("q0", s, "q2"))
        t.append(("q2", s, "q2"))
    return _cover_from_graph(t)


def _family_neutral_columns():
    """(B+{R1,r1})* (B+r2)* (B+#')* (B+l2)* (B+{L1,l1})*: static columns that
    were never marks, with signals drifting outward backward."""
    t = []
    for s in ("B", "r1", "R1"):
        t.append(("n0", s, "n0"))
    for q in ("n0", "n1_0"):
        t.append((q, "r2m", "n1_0"))
        t.append((q, "r2", "n1_s"))
    t.append(("n1_s", "r2", "n1_s"))
    t.append(("n1_0", "B", "n1_0"))
    t.append(("n1_s", "B", "n1_0"))
    for q in ("n0", "n1_0", "n1_s", "n2"):
        t.append((q, "#'", "n2"))
    t.append(("n2", "B", "n2"))
    for q in ("n0", "n1_0", "n1_s", "n2", "n3_0"):
        t.append((q, "l2", "n3_0"))
        t.append((q, "l2m", "n3_m"))
    t.append(("n3_m", "l2m", "n3_m"))
    t.append(("n3_0", "B", "n3_0"))
    t.append(("n3_m", "B", "n3_0"))
    for q in ("n0", "n1_0", "n1_s", "n2", "n3_0", "n3_m", "n4"):
        for s in ("l1", "L1"):
            t.append((q, s, "n4"))
    t.append(("n4", "B", "n4"))
    return _cover_from_graph(t)


def verify_backward_invariant(cover: Nfa, rule: Rule | None = None,
                              budget: Budget = DEFAULT) -> bool:
    """Language inclusion L(cover) <= L(image(cover)): every member then has a
    preimage inside the family, so the family sits inside the clean-history set."""
    rule = rule or fs_rule()
    image = cover_image(cover, rule)
    img_lang = Nfa(image.n, image.edges, range(image.n), range(image.n))
    dfa = img_lang.minimize(budget)
    letters = range(len(rule.alphabet))
    # complement over the full alphabet (complete with a dead state)
    dead = dfa.n
    edges = {q: dict(dfa.edges.get(q, {})) for q in range(dfa.n)}
    edges[dead] = {}
    for q in range(dfa.n + 1):
        for a in letters:
            edges.setdefault(q, {})
            if a not in edges[q]:
                edges[q][a] = frozenset([dead])
    finals = frozenset(set(range(dfa.n + 1)) - set(dfa.finals))
    comp = Nfa(dfa.n + 1, edges, dfa.initial, finals, deterministic=True)
    cover_lang = Nfa(cover.n, cover.edges, range(cover.n), range(cover.n))
    return cover_lang.intersect(comp, budget).is_empty()


@functools.lru_cache(maxsize=1)
def no_sharp_families():
    fams = {
        "left-fast-mix": _family_left_fast_mix(),
        "right-fast-mix": _family_right_fast_mix(),
        "slow-wedge": _family_slow_wedge(),
        "fast-pair": _family_fast_pair(),
    }
    for name, cover in fams.items():
        if not verify_backward_invariant(cover):
            raise AssertionError(f"family {name} is not backward invariant")
    return fams


@functools.lru_cache(maxsize=1)
def neutral_family():
    cover = _family_neutral_columns()
    if not verify_backward_invariant(cover):
        raise AssertionError("neutral-columns family is not backward invariant")
    return cover


def _word_in_cover(cover: Nfa, word) -> bool:
    cur = frozenset(range(cover.n))
    for a in word:
        nxt = set()
        for q in cur:
            nxt.update(cover.edges.get(q, {}).get(a, ()))
        cur = frozenset(nxt)
        if not cur:
            return False
    return True


# --- orbit and shell matchers ---------------------------------------------------

@functools.lru_cache(maxsize=256)
def _orbit_periods(d: int):
    """Clean periods of the lattice orbit with mark distance d, up to the
    halving/firing/killing moment (killing excluded, firing excluded)."""
    rule = fs_rule()
    alph = rule.alphabet
    ki, gi = alph.index(KAPPA), alph.index(GAMMA)
    out = []
    c = lattice(d - 1)
    for t in range(d + 1):
        if ki in c.period or gi in c.period:
            break
        out.append((t, c))
        c = apply_periodic(rule, c)
    return tuple(out)


def _word_in_periodic(word, period) -> bool:
    reps = period * (len(word) // len(period) + 2)
    return any(reps[i:i + len(word)] == tuple(word) for i in range(len(period)))


@functools.lru_cache(maxsize=4096)
def _shell_words(s: int, span: int):
    """Window of the lone-mark configuration after s steps, padded with span
    blanks on both sides."""
    rule = fs_rule()
    alph = rule.alphabet
    b = alph.index(BLANK)
    cfg = PresentedConfig(alph, (b,), (alph.index(SHARP),), (b,))
    from .configs import apply_presented
    for _ in range(s):
        cfg = apply_presented(rule, cfg)
    lo = cfg.origin - span
    return cfg.window(lo, len(cfg.center) + 2 * span)


def _match_orbit(word, alph) -> str | None:
    cols = [i for i, a in enumerate(word)
            if alph.symbols[a] in (SHARP, COLUMN)]
    if cols:
        gaps = {cols[j + 1] - cols[j] for j in range(len(cols) - 1)}
        if len(gaps) > 1:
            return None
        ds = [gaps.pop()] if gaps else range(2, 2 * len(word) + 9)
    else:
        ds = range(2, 2 * len(word) + 9)
    word = tuple(word)
    has_sharp = any(alph.symbols[a] == SHARP for a in word)
    for d in ds:
        if d < 2:
            continue
        for t, cfg in _orbit_periods(d):
            if _word_in_periodic(word, cfg.period):
                if has_sharp or len(cols) < 2:
                    return CaseLabel.TWO_SHARPS
                return CaseLabel.PRIMES_WITH_SIGNALS if t > 0 else CaseLabel.TWO_SHARPS
    return None


def _match_shell(word, alph) -> bool:
    word = tuple(word)
    smax = 2 * len(word) + 8
    for s in range(smax + 1):
        big = _shell_words(s, len(word) + 1)
        if any(big[i:i + len(word)] == word for i in range(len(big) - len(word) + 1)):
            return True
    return False


# --- the decision procedures ----------------------------------------------------

def recognize_word(word, rule: Rule | None = None):
    """Is the word a factor of some clean-history configuration?
    Returns (accepted, CaseLabel or None)."""
    rule = rule or fs_rule()
    alph = rule.alphabet
    if isinstance(word, str):
        word = alph.parse_word(word)
    word = tuple(word)
    if not word:
        return True, CaseLabel.NO_SHARPS
    names = [alph.symbols[a] for a in word]
    if KAPPA in names:
        return False, None
    if all(n == GAMMA for n in names):
        return True, CaseLabel.ALL_GAMMA
    if GAMMA in names:
        return False, None
    ncols = sum(1 for n in names if n in (SHARP, COLUMN))
    if ncols == 0:
        for cover in no_sharp_families().values():
            if _word_in_cover(cover, word):
                return True, CaseLabel.NO_SHARPS
        label = _match_orbit(word, alph)
        if label is not None:
            return True, CaseLabel.NO_SHARPS
        if _match_shell(word, alph):
            return True, CaseLabel.NO_SHARPS
        return False, None
    if ncols == 1:
        if _match_shell(word, alph):
            return True, CaseLabel.ONE_SHARP
        if _word_in_cover(neutral_family(), word):
            return True, CaseLabel.ONE_SHARP
        label = _match_orbit(word, alph)
        if label is not None:
            return True, label
        return False, None
    # two or more column symbols
    if _word_in_cover(neutral_family(), word):
        return True, CaseLabel.NEUTRAL_PRIMES
    label = _match_orbit(word, alph)
    if label is not None:
        return True, label
    return False, None


def classify_config(c: PresentedConfig, rule: Rule | None = None):
    """Membership of a finitely presented configuration; returns
    (accepted, CaseLabel or None, note)."""
    rule = rule or fs_rule()
    alph = rule.alphabet
    used = {alph.symbols[a] for a in c.letters_used()}
    if KAPPA in used:
        return False, None, "killer state present (excluded by the case analysis)"
    if used == {GAMMA}:
        return True, CaseLabel.ALL_GAMMA, ""
    if GAMMA in used:
        return False, None, "mixed firing state"
    period = _as_periodic(c)
    if period is not None:
        p = period.period
        ncols = sum(1 for a in p if alph.symbols[a] in (SHARP, COLUMN))
        if ncols:
            for d in (len(p), 2 * len(p)):
                for t, cfg in _orbit_periods(d):
                    if cfg == period:
                        if any(alph.symbols[a] == SHARP for a in p):
                            return True, CaseLabel.TWO_SHARPS, f"orbit d={d} t={t}"
                        return True, CaseLabel.PRIMES_WITH_SIGNALS, f"orbit d={d} t={t}"
            if set(p) <= {alph.index(COLUMN), alph.index(BLANK)}:
                if cover_accepts_presented(neutral_family(), p, (), p):
                    return True, CaseLabel.NEUTRAL_PRIMES, "static columns"
            return False, None, ""
        for cover in no_sharp_families().values():
            if cover_accepts_presented(cover, p, (), p):
                return True, CaseLabel.NO_SHARPS, ""
        return False, None, ""
    # non-periodic presentation
    ncols = sum(1 for a in (c.left + c.center + c.right)
                if alph.symbols[a] in (SHARP, COLUMN))
    covers = [(neutral_family(), CaseLabel.NEUTRAL_PRIMES)]
    for cover in no_sharp_families().values():
        covers.append((cover, CaseLabel.NO_SHARPS))
    for cover, label in covers:
        if cover_accepts_presented(cover, c.left, c.center, c.right):
            if ncols == 1:
                label = CaseLabel.ONE_SHARP
            elif ncols == 0 and label is CaseLabel.NEUTRAL_PRIMES:
                label = CaseLabel.NO_SHARPS
            return True, label, ""
    if _shell_config_match(c, rule):
        return True, CaseLabel.ONE_SHARP, "split products of a lone mark"
    return False, None, ""


def _as_periodic(c: PresentedConfig):
    """The PeriodicConfig this presentation denotes, or None."""
    import math
    p = math.lcm(len(c.left), len(c.right))
    if p > 256:
        return None
    lo = c.origin - p - 1
    hi = c.origin + len(c.center) + p + 1
    for i in range(lo, hi + 1):
        if c.at(i) != c.at(i + p):
            return None
    return PeriodicConfig(c.alphabet, c.window(c.origin, p))


def _shell_config_match(c: PresentedConfig, rule) -> bool:
    alph = rule.alphabet
    b = alph.index(BLANK)
    if set(c.left) != {b} or set(c.right) != {b}:
        return False
    core = _strip_blanks(c.center, b)
    if not core:
        return False
    for s in range(2 * len(c.center) + 10):
        big = _shell_words(s, 1)
        if _strip_blanks(big, b) == core:
            return True
    return False


def _strip_blanks(word, b):
    word = tuple(word)
    i, j = 0, len(word)
    while i < j and word[i] == b:
        i += 1
    while j > i and word[j - 1] == b:
        j -= 1
    return word[i:j]


# --- orbit period schemas --------------------------------------------------------

@dataclass(frozen=True)
class PeriodSchema:
    """One period of the lattice orbit: an anchor symbol followed by gaps and
    signal symbols, with the positions given by the signal geometry
    (fast signals at distance t from a mark, slow signals at ceil(t/2),
    phases following the parity of t)."""
    n: int
    t: int
    anchor: str
    entries: tuple  # ((blank gap before symbol, symbol name), ...)

    def word(self, alphabet):
        b = alphabet.index(BLANK)
        out = [alphabet.index(self.anchor)]
        for gap, sym in self.entries:
            out.extend([b] * gap)
            out.append(alphabet.index(sym))
        return tuple(out)


def _merge_atoms(cells, pos, atoms):
    cells.setdefault(pos, set()).update(atoms)


def _gen1_period(d: int, t: int):
    """Signal positions during the first generation (0 < t < d) of the
    lattice with mark distance d."""
    cells = {0: {"P"}}
    rpos = (t + 1) // 2
    rph = "r2m" if t % 2 else "r2s"
    _merge_atoms(cells, rpos, {rph})
    _merge_atoms(cells, d - rpos, {"l2m" if t % 2 else "l2s"})
    if 2 * t < d:
        _merge_atoms(cells, t, {"R1"})
        _merge_atoms(cells, d - t, {"L1"})
    elif 2 * t == d:
        _merge_atoms(cells, t, {"l1", "r1"})
    else:
        _merge_atoms(cells, t % d, {"r1"})
        _merge_atoms(cells, (d - t) % d, {"l1"})
    from .fsquad import ATOMS_STATE
    alph = fs_alphabet()
    out = [alph.index(BLANK)] * d
    for pos, atoms in cells.items():
        if atoms == {"P"}:
            out[pos] = alph.index(COLUMN)
        else:
            atoms.discard("P")
            name = ATOMS_STATE.get(frozenset(atoms))
            if name is None:
                raise AssertionError(f"geometry produced no state: {atoms} (d={d}, t={t})")
            out[pos] = alph.index(name)
    return tuple(out)


def _circ(a, b, d):
    r = abs(a - b) % d
    return min(r, d - r)


def parametric_period(n: int, t: int):
    """The period of the n-blank lattice orbit at time t, from the signal
    geometry alone: splits, halving recursion, firing for power-of-two
    distances; for odd distances the slow signals swap off-grid at time d and
    the killer ball then grows around the swap cells at speed one over the
    still-unrolling split products of the reborn mark."""
    alph = fs_alphabet()
    d = n + 1
    b = alph.index(BLANK)
    if t == 0:
        return (alph.index(SHARP),) + (b,) * n
    if d == 2:
        if t == 1:
            return (alph.index(COLUMN), alph.index("F0"))
        return (alph.index(GAMMA),) * 2
    if d % 2 == 0:
        if t >= d:
            half = parametric_period(d // 2 - 1, t - d)
            return half * 2
        return _gen1_period(d, t)
    if t < d:
        return _gen1_period(d, t)
    m1, m2 = (d - 1) // 2, (d + 1) // 2
    s = t - d
    out = []
    for c in range(d):
        if _circ(c, m1, d) <= s or _circ(c, m2, d) <= s:
            out.append(alph.index(KAPPA))
        else:
            out.append(_shell_letter(c, s, d, alph))
    return tuple(out)


def _shell_letter(c, s, d, alph):
    if s == 0:
        return alph.index(SHARP) if c == 0 else alph.index(BLANK)
    atoms = set()
    if c == 0:
        atoms.add("P")
    slow = (s + 1) // 2
    if c == slow % d:
        atoms.add("r2m" if s % 2 else "r2s")
    if c == (-slow) % d:
        atoms.add("l2m" if s % 2 else "l2s")
    if c == s % d:
        atoms.add("R1")
    if c == (-s) % d:
        atoms.add("L1")
    if not atoms:
        return alph.index(BLANK)
    if atoms == {"P"}:
        return alph.index(COLUMN)
    atoms.discard("P")
    from .fsquad import ATOMS_STATE
    name = ATOMS_STATE.get(frozenset(atoms))
    if name is None:
        raise AssertionError(f"shell geometry stuck: {atoms} (c={c}, s={s}, d={d})")
    return alph.index(name)


def orbit_period_schemas(n: int, t: int) -> PeriodSchema:
    """The period of the lattice orbit at time t as a schema; the parametric
    geometry and direct simulation are both computed and must agree."""
    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")
    rule = fs_rule()
    alph = rule.alphabet
    word = parametric_period(n, t)
    sim = lattice(n)
    for _ in range(t):
        sim = apply_periodic(rule, sim)
    if PeriodicConfig(alph, word) != sim:
        raise AssertionError(f"geometry disagrees with simulation at n={n}, t={t}")
    from .configs import canonical_period
    prim = word[:len(word)]
    for p in range(1, len(word) + 1):
        if len(word) % p == 0 and word == word[:p] * (len(word) // p):
            prim = word[:p]
            break
    anchor = alph.symbols[prim[0]]
    entries = []
    gap = 0
    b = alph.index(BLANK)
    for a in prim[1:]:
        if a == b:
            gap += 1
        else:
            entries.append((gap, alph.symbols[a]))
            gap = 0
    return PeriodSchema(n, t, anchor, tuple(entries))


# --- cross check against the oracle ---------------------------------------------

def cross_check(max_len: int, depth: int, rule: Rule | None = None,
                budget: Budget = DEFAULT, sample_stride: int = 1):
    """Compare the recognizer against the backward-reachability oracle on all
    words up to max_len (or a deterministic stride-sample).

    Soundness is hard: an accepted word the oracle refutes is a failure (the
    batched oracle over-approximates nothing here: batch membership implies
    word-level reachability, and accepted words missing from the batch are
    re-checked word-level).  Rejected words the oracle confirms are reported
    as undecided at this depth.
    """
    rule = rule or fs_rule()
    alph = rule.alphabet
    batch = backward_reach_sets(max_len, depth, rule, budget)
    counts = {"accept_confirmed": 0, "soundness_failures": 0,
              "undecided": 0, "undecided_flagged": 0, "agreed_reject": 0}
    failures = []
    undecided = []
    flagged = {alph.index(KAPPA), alph.index(GAMMA)}
    for n in range(1, max_len + 1):
        for i, w in enumerate(alph.all_words(n)):
            if sample_stride > 1 and i % sample_stride:
                continue
            ok, _ = recognize_word(w, rule)
            reachable = w in batch[n]
            if ok and not reachable:
                # the batch is the stricter full-line oracle; settle word-level
                if backward_reach(w, depth, rule, budget):
                    counts["accept_confirmed"] += 1
                else:
                    counts["soundness_failures"] += 1
                    failures.append(w)
            elif ok:
                counts["accept_confirmed"] += 1
            elif reachable:
                if set(w) & flagged:
                    counts["undecided_flagged"] += 1
                else:
                    counts["undecided"] += 1
                if len(undecided) < 200:
                    undecided.append(w)
            else:
                counts["agreed_reject"] += 1
    return {"counts": counts, "failures": failures, "undecided": undecided,
            "depth": depth, "max_len": max_len}
