from hypothesis import given, settings, strategies as st

from casym import (Alphabet, PeriodicConfig, PresentedConfig, apply_periodic,
                   apply_presented, block_map, elementary_rule, identity_rule,
                   min_rule, shift_rule)

RULES = [shift_rule(("0", "1")), identity_rule(("0", "1")), min_rule(),
         elementary_rule(110), elementary_rule(90)]


def test_canonical_form():
    a = Alphabet(("a", "b"))
    assert PeriodicConfig.from_text(a, "ab") == PeriodicConfig.from_text(a, "ba")
    assert PeriodicConfig.from_text(a, "abab") == PeriodicConfig.from_text(a, "ab")
    assert PeriodicConfig.from_text(a, "aab") != PeriodicConfig.from_text(a, "ab")


def test_apply_periodic_examples():
    s = shift_rule()
    c = PeriodicConfig.from_text(s.alphabet, "ab")
    assert apply_periodic(s, c) == PeriodicConfig.from_text(s.alphabet, "ba")
    i = identity_rule()
    c = PeriodicConfig.from_text(i.alphabet, "ab")
    assert apply_periodic(i, c) == c
    m = min_rule()
    c = PeriodicConfig.from_text(m.alphabet, "110")
    assert apply_periodic(m, c) == PeriodicConfig.from_text(m.alphabet, "000")


@given(st.sampled_from(RULES),
       st.lists(st.integers(0, 1), min_size=1, max_size=6),
       st.integers(0, 5))
@settings(max_examples=200, deadline=None)
def test_shift_commutation(rule, period, k):
    c = PeriodicConfig(rule.alphabet, tuple(period))
    assert apply_periodic(rule, c.rotate(k)) == apply_periodic(rule, c).rotate(k)


@given(st.sampled_from(RULES), st.lists(st.integers(0, 1), min_size=1, max_size=5))
@settings(max_examples=200, deadline=None)
def test_periodic_consistent_with_block_map(rule, period):
    c = PeriodicConfig(rule.alphabet, tuple(period))
    image = apply_periodic(rule, c)
    # every window of the image equals the block map of the wider source window
    p = c.period
    n = len(p)
    r = rule.radius
    raw = tuple(rule.apply(tuple(p[(i + j) % n] for j in range(-r, r + 1)))
                for i in range(n))
    assert PeriodicConfig(rule.alphabet, raw) == image
    wide = tuple(p[(i - r) % n] for i in range(3 * n + 2 * r))
    assert block_map(rule, wide)[:n] == raw


def test_apply_presented_min():
    m = min_rule()
    c = PresentedConfig.from_text(m.alphabet, "1", "0", "1")
    out = apply_presented(m, c)
    assert out.window(-3, 7) == m.alphabet.parse_word("1100011")
    assert set(out.left) == {m.alphabet.index("1")}


def test_apply_presented_shift():
    s = shift_rule()
    c = PresentedConfig.from_text(s.alphabet, "a", "b", "a")
    out = apply_presented(s, c)
    # the lone b moves one cell left
    assert out.at(-1) == s.alphabet.index("b")
    assert out.at(0) == s.alphabet.index("a")


def test_apply_presented_identity():
    i = identity_rule()
    c = PresentedConfig.from_text(i.alphabet, "ab", "ba", "ab", origin=3)
    out = apply_presented(i, c)
    for j in range(-8, 12):
        assert out.at(j) == c.at(j)


@given(st.sampled_from(RULES),
       st.lists(st.integers(0, 1), min_size=1, max_size=3),
       st.lists(st.integers(0, 1), min_size=0, max_size=4),
       st.lists(st.integers(0, 1), min_size=1, max_size=3))
@settings(max_examples=150, deadline=None)
def test_presented_matches_pointwise(rule, left, center, right):
    c = PresentedConfig(rule.alphabet, tuple(left), tuple(center), tuple(right))
    out = apply_presented(rule, c)
    r = rule.radius
    for i in range(-12, 12):
        assert out.at(i) == rule.apply(c.window(i - r, 2 * r + 1))
