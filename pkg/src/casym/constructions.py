"""The three embedding constructions.

* build_tilde: wraps a CA so every cell carries a flag in {-1, 0, +1}; flagged
  cells turn into left/right shifts of the base letter, unflagged cells apply
  the base rule.  The wrapped CA contains the base CA on the flag-0 sub-
  alphabet and its column factors collapse to order-2 SFTs.
* build_delta: joins a CA (with a spreading symbol) to a synchronizer CA on a
  disjoint-union alphabet; the pair component runs the synchronizer while the
  first component is frozen, fires into the plain alphabet, and every
  incoherent neighborhood starts the spreading symbol.
* add_spreading: adjoins a fresh spreading symbol to any CA.
"""

from __future__ import annotations

from .alphabet import Alphabet
from .rules import Rule, has_spreading_state

FLAGS = ("-1", "0", "+1")


def tilde_alphabet(base: Alphabet) -> Alphabet:
    symbols = tuple(f"({f},{c})" for f in FLAGS for c in base.symbols)
    return Alphabet(symbols)


def build_tilde(g: Rule) -> Rule:
    """Flagged wrapper of g; radius max(r, 1)."""
    g = g.pad_to_radius(max(g.radius, 1))
    r = g.radius
    nb = len(g.alphabet)
    alph = tilde_alphabet(g.alphabet)
    # letter index = flag * nb + base, flag in {0: -1, 1: 0, 2: +1}

    def fn(w):
        flag = w[r] // nb
        if flag == 1:  # unflagged: apply g to the base components
            return nb + g.apply(tuple(x % nb for x in w))
        offset = -1 if flag == 0 else +1
        return flag * nb + (w[r + offset] % nb)

    return Rule.from_fn(alph, r, fn, name=f"tilde({g.name})" if g.name else "tilde")


def tilde_embedding(g: Rule) -> dict:
    """Symbol map from g's alphabet onto the flag-0 sub-alphabet."""
    return {c: f"(0,{c})" for c in g.alphabet.symbols}


def delta_alphabet(base: Alphabet, squad: Alphabet) -> Alphabet:
    symbols = tuple(base.symbols) + tuple(
        f"({a}|{q})" for a in base.symbols for q in squad.symbols)
    return Alphabet(symbols)


def build_delta(f: Rule, zero, s: Rule, kappa, gamma) -> Rule:
    """Join f (spreading symbol `zero`) with the synchronizer s (states kappa,
    gamma); radius max(r_f, r_s)."""
    if kappa == gamma:
        raise ValueError("kappa and gamma must be distinct")
    zi = f.alphabet.index(zero) if isinstance(zero, str) else zero
    if not has_spreading_state(f, zi):
        raise ValueError(f"{f.alphabet.symbols[zi]!r} is not a spreading state of the base rule")
    ki = s.alphabet.index(kappa) if isinstance(kappa, str) else kappa
    gi = s.alphabet.index(gamma) if isinstance(gamma, str) else gamma
    r = max(f.radius, s.radius)
    f = f.pad_to_radius(r)
    s = s.pad_to_radius(r)
    na = len(f.alphabet)
    nq = len(s.alphabet)
    alph = delta_alphabet(f.alphabet, s.alphabet)
    # letter index: a in [0, na) is plain a; na + a*nq + q is the pair (a|q)

    def fn(w):
        if all(x < na for x in w):                       # plain block: run f
            return f.apply(w)
        if any(x < na for x in w):                       # incoherent: spread
            return zi
        pairs = [divmod(x - na, nq) for x in w]
        if all(q == gi for _, q in pairs):               # fired: release
            return pairs[r][0]
        if any(q == gi or q == ki for _, q in pairs):    # partial fire: spread
            return zi
        a0 = pairs[r][0]
        return na + a0 * nq + s.apply(tuple(q for _, q in pairs))

    name = None
    if f.name and s.name:
        name = f"delta({f.name},{s.name})"
    return Rule.from_fn(alph, r, fn, name=name)


def delta_case(f: Rule, s: Rule, w, kappa, gamma) -> int:
    """Which of the four branches of the joined rule applies to the window w
    (1 plain, 2 fired, 3 synchronizing, 4 spreading)."""
    na = len(f.alphabet)
    nq = len(s.alphabet)
    ki = s.alphabet.index(kappa) if isinstance(kappa, str) else kappa
    gi = s.alphabet.index(gamma) if isinstance(gamma, str) else gamma
    if all(x < na for x in w):
        return 1
    if any(x < na for x in w):
        return 4
    qs = [(x - na) % nq for x in w]
    if all(q == gi for q in qs):
        return 2
    if any(q in (gi, ki) for q in qs):
        return 4
    return 3


DEFAULT_SPREAD_SYMBOL = "⊥"


def add_spreading(f: Rule, symbol: str = DEFAULT_SPREAD_SYMBOL) -> Rule:
    """Adjoin a fresh spreading symbol; agrees with f away from it."""
    if symbol in f.alphabet:
        raise ValueError(f"{symbol!r} already in the alphabet")
    alph = Alphabet(f.alphabet.symbols + (symbol,))
    bot = len(f.alphabet)

    def fn(w):
        if bot in w:
            return bot
        return f.apply(w)

    return Rule.from_fn(alph, f.radius, fn,
                        name=f"spread({f.name})" if f.name else "spread")
