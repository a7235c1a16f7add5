import itertools

from casym.budgets import Budget
from casym.fsm import (Nfa, bi_trim, cover_image, cover_normalize, cover_words,
                       covers_equal_language, factor_nfa, full_shift_cover,
                       preimage_nfa)
from casym.rules import block_map, elementary_rule, iterate_block, min_rule

BIG = Budget(max_enum=10 ** 7, max_states=10 ** 6)


def brute_language(nfa, letters, n):
    out = set()
    for w in itertools.product(letters, repeat=n):
        if nfa.accepts(w):
            out.add(w)
    return out


def test_factor_nfa():
    a = factor_nfa([0, 1], (1, 0, 1))
    assert a.accepts((1, 0, 1))
    assert a.accepts((0, 1, 0, 1, 1))
    assert not a.accepts((1, 1, 0, 0))
    assert not a.accepts(())


def test_determinize_minimize_preserve_language():
    a = factor_nfa([0, 1], (1, 1))
    d = a.determinize(BIG)
    m = a.minimize(BIG)
    for n in range(0, 6):
        ref = brute_language(a, [0, 1], n)
        assert brute_language(d, [0, 1], n) == ref
        assert brute_language(m, [0, 1], n) == ref
        assert set(m.words_of_length(n, BIG)) == ref


def test_intersection():
    a = factor_nfa([0, 1], (1, 1))
    b = factor_nfa([0, 1], (0, 0))
    both = a.intersect(b, BIG)
    for n in range(0, 7):
        assert brute_language(both, [0, 1], n) == \
            brute_language(a, [0, 1], n) & brute_language(b, [0, 1], n)


def test_trim_and_bisim_preserve_language():
    a = factor_nfa([0, 1], (1, 0)).trim_useful().bisim_quotient()
    for n in range(0, 6):
        assert brute_language(a, [0, 1], n) == \
            brute_language(factor_nfa([0, 1], (1, 0)), [0, 1], n)


def test_preimage_nfa_matches_enumeration():
    rule = min_rule()
    target = factor_nfa([0, 1], (1, 0, 1))
    pre = preimage_nfa(target, rule, BIG)
    for n in range(3, 8):
        expect = {w for w in itertools.product((0, 1), repeat=n)
                  if target.accepts(block_map(rule, w))}
        assert brute_language(pre, [0, 1], n) == expect


def test_full_shift_cover_words():
    c = full_shift_cover([0, 1])
    assert len(cover_words(c, 3, BIG)) == 8


def test_cover_image_exact():
    # words of the image cover = images of all wider words, for several rules
    for rule in [min_rule(), elementary_rule(110), elementary_rule(90)]:
        c = full_shift_cover(range(len(rule.alphabet)))
        img = cover_normalize(cover_image(c, rule), BIG)
        for n in range(1, 5):
            expect = {block_map(rule, w)
                      for w in rule.alphabet.all_words(n + 2 * rule.radius)}
            assert set(cover_words(img, n, BIG)) == expect


def test_cover_image_iterated_min():
    rule = min_rule()
    c = full_shift_cover(range(2))
    for t in (1, 2):
        c = cover_normalize(cover_image(c, rule), BIG)
    words3 = set(cover_words(c, 3, BIG))
    expect = {iterate_block(rule, w, 2) for w in rule.alphabet.all_words(7)}
    assert words3 == expect


def test_bi_trim_drops_transients():
    # a tail state with no in-edges must go
    edges = {0: {0: frozenset([1])}, 1: {0: frozenset([1]), 1: frozenset([1])}}
    c = bi_trim(Nfa(2, edges, [0, 1], [0, 1]))
    assert c.n == 1


def test_covers_equal_language():
    c1 = full_shift_cover([0, 1])
    edges = {0: {0: frozenset([1]), 1: frozenset([1])},
             1: {0: frozenset([0]), 1: frozenset([0])}}
    c2 = Nfa(2, edges, [0, 1], [0, 1])
    assert covers_equal_language(c1, c2, BIG)
