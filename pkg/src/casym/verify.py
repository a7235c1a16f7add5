"""Verification suites behind `casym verify` and the acceptance tests.

Each suite returns (ok, records): records are (key=value) dicts, one per
assertion, naming the property checked and its outcome.
"""

from __future__ import annotations

from .analysis import (apply_factor_language, check_sft_order2, image_language,
                       limit_language, predicted_limit_words, trace_prefixes,
                       two_approx, FactorMap)
from .budgets import Budget, DEFAULT
from .configs import PeriodicConfig, apply_periodic
from .constructions import (add_spreading, build_delta, build_tilde,
                            delta_alphabet, tilde_embedding)
from .fsquad import (GAMMA, KAPPA, SPACING_SET, backward_reach, fire_time,
                     fs_rule, lattice, lattice_presented, simulate)
from .recognizer import classify_config, cross_check, recognize_word
from .rules import (Rule, check_sub_automaton, elementary_rule, iterate_block,
                    min_rule, product_rule, shift_rule)


def _rec(records, ok, **kv):
    kv["result"] = "PASS" if ok else "FAIL"
    records.append(kv)
    return ok


def suite_tilde_sft2(bases=("elementary:110", "elementary:90"), ks=(1, 2),
                     ts=(2, 3, 4, 5, 6), budget: Budget = DEFAULT):
    """Column factors of the flag-wrapped rules are order-2: every depth-T
    path of the 2-approximation is a realizable history."""
    records = []
    ok = True
    for base in bases:
        g = elementary_rule(int(base.split(":")[1]))
        wrapped = build_tilde(g)
        for k in ks:
            good, witness = check_sft_order2(wrapped, k, max(ts), budget)
            ok &= _rec(records, good,
                       check="order2-paths-realizable", base=base, k=k, T=max(ts),
                       witness="none" if witness is None else str(witness))
    return ok, records


def suite_sub_automaton(budget: Budget = DEFAULT):
    """The base rules embed: the wrapped rule restricted to flag 0 is the base
    rule, and the joined rule restricted to plain letters is the base rule."""
    records = []
    ok = True
    g = elementary_rule(110)
    wrapped = build_tilde(g)
    emb = tilde_embedding(g)
    ok &= _rec(records, check_sub_automaton(wrapped, set(emb.values()), g, emb),
               check="flag-zero-embedding", base="elementary:110")
    f = add_spreading(elementary_rule(110))
    joined = build_delta(f, "⊥", fs_rule(), KAPPA, GAMMA)
    emb2 = {s: s for s in f.alphabet.symbols}
    ok &= _rec(records, check_sub_automaton(joined, set(f.alphabet.symbols), f, emb2),
               check="plain-letter-embedding", base="spread(elementary:110)")
    return ok, records


def suite_limsim(n_max=4, t_max=4, budget: Budget = DEFAULT):
    """Factor transport at finite time: the projection of the product rule's
    image language equals the component's image language."""
    records = []
    ok = True
    f = shift_rule()
    g = min_rule()
    prod = product_rule(f, g)
    pi2 = FactorMap.projection(prod.alphabet, g.alphabet, 1, len(g.alphabet))
    for n in range(1, n_max + 1):
        for t in range(t_max + 1):
            left = apply_factor_language(pi2, image_language(prod, n, t, budget))
            right = image_language(g, n, t, budget)
            ok &= _rec(records, set(left.words) == set(right.words),
                       check="projection-transport", n=n, t=t,
                       left=len(left), right=len(right))
    return ok, records


def _delta_fixture():
    f = add_spreading(elementary_rule(110))
    return f, build_delta(f, "⊥", fs_rule(), KAPPA, GAMMA)


def suite_delta_limfs(n=2, t_max=6, budget: Budget = DEFAULT):
    """Limit-language structure of the joined rule: plain words persist in
    every image (witnessed constructively), the predicted limit words sit
    inside every finite image, and the over-approximation shrinks."""
    records = []
    ok = True
    f, joined = _delta_fixture()
    na = len(f.alphabet)
    # plain words persist, each witnessed by an explicit backward chain
    for length in range(1, 4):
        worst = None
        good = True
        for w in f.alphabet.all_words(length):
            for t in range(1, t_max + 1):
                u = _delta_witness(f, joined, w, t)
                if iterate_block(joined, u, t) != w:
                    good = False
                    worst = (w, t)
        ok &= _rec(records, good, check="plain-words-witnessed", length=length,
                   t_max=t_max, counterexample=str(worst))
    # predicted limit words are a lower bound of every finite image
    predicted = predicted_limit_words(f.alphabet, "⊥", fs_rule().alphabet, n,
                                      lambda q: recognize_word(q)[0])
    prev_extra = None
    for t in range(t_max + 1):
        img = image_language(joined, n, t, budget, strategy="automaton")
        missing = set(predicted.words) - set(img.words)
        ok &= _rec(records, not missing, check="predicted-lower-bound", n=n, t=t,
                   predicted=len(predicted), image=len(img), missing=len(missing))
        extra = set(img.words) - set(predicted.words)
        if prev_extra is not None:
            ok &= _rec(records, extra <= prev_extra,
                       check="over-approximation-shrinks", n=n, t=t,
                       extra=len(extra))
        prev_extra = extra
    return ok, records


def _delta_witness(f, joined, w, t):
    """Preimage word of the plain word w at depth t: the base letters ride
    frozen over a backward history of the all-firing configuration, so the
    synchronizer component fires on the last step and releases them."""
    from .fsquad import gamma_history
    squad = fs_rule()
    na = len(f.alphabet)
    nq = len(squad.alphabet)
    if t == 1:
        y = PeriodicConfig(squad.alphabet, (squad.alphabet.index(GAMMA),))
    else:
        y = gamma_history(t - 1)[-1]
    r = joined.radius
    width = len(w) + 2 * r * t
    base = (0,) * (r * t) + tuple(w) + (0,) * (r * t)
    qrow = [y.period[i % len(y.period)] for i in range(width)]
    return tuple(na + a * nq + q for a, q in zip(base, qrow))


def suite_fs_contract(budget: Budget = DEFAULT):
    """The synchronizer's behavioral contract: the all-firing configuration
    has clean histories at every tested depth, lattices fire synchronously
    with no earlier killer, and firing letters in deep images only ride with
    the killer."""
    records = []
    ok = True
    rule = fs_rule()
    alph = rule.alphabet
    for T in range(1, 7):
        ok &= _rec(records, backward_reach("γ", T, rule, budget),
                   check="all-firing-clean-history", depth=T)
    for nsp in SPACING_SET:
        steps = fire_time(nsp) + 1
        orbit, first_k, first_g = simulate(lattice_presented(nsp), steps, rule)
        gi = alph.index(GAMMA)
        fired = orbit[first_g] if first_g is not None else None
        sync = fired is not None and fired.letters_used() == {gi}
        ok &= _rec(records, first_k is None and first_g == fire_time(nsp) and sync,
                   check="synchronous-firing", spacing=nsp,
                   fire_step=first_g, killer_step=first_k)
    gi, ki = alph.index(GAMMA), alph.index(KAPPA)
    for n in range(1, 5):
        t_max = 2 * n
        img = image_language(rule, n, t_max, budget, strategy="automaton")
        bad = [w for w in img.words if gi in w and not set(w) <= {gi, ki}]
        ok &= _rec(records, not bad, check="firing-rides-with-killer",
                   n=n, t=t_max, offenders=len(bad))
    return ok, records


def suite_xs_crosscheck(max_len=3, depth=6, budget: Budget = DEFAULT):
    """Recognizer soundness against the backward oracle, factor closure, and
    acceptance of the whole lattice family."""
    records = []
    ok = True
    rep = cross_check(max_len, depth, budget=budget)
    ok &= _rec(records, rep["counts"]["soundness_failures"] == 0,
               check="recognizer-sound", max_len=max_len, depth=depth,
               **rep["counts"])
    rule = fs_rule()
    closure_bad = 0
    for n in range(1, 5):
        for w in rule.alphabet.all_words(n):
            if recognize_word(w, rule)[0]:
                for i in range(n):
                    for j in range(i + 1, n + 1):
                        if i == 0 and j == n:
                            continue
                        if j > i and not recognize_word(w[i:j], rule)[0]:
                            closure_bad += 1
    ok &= _rec(records, closure_bad == 0, check="factor-closure", max_len=4,
               violations=closure_bad)
    for nsp in range(1, 9):
        good, label, _ = classify_config(lattice_presented(nsp))
        ok &= _rec(records, good, check="lattice-accepted", spacing=nsp,
                   label=str(label and label.value))
    return ok, records


SUITES = {
    "tilde-sft2": suite_tilde_sft2,
    "delta-limfs": suite_delta_limfs,
    "limsim": suite_limsim,
    "fs-contract": suite_fs_contract,
    "xs-crosscheck": suite_xs_crosscheck,
    "sub-automaton": suite_sub_automaton,
}
