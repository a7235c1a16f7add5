import pytest

from casym.analysis import (FactorMap, LanguageSample, apply_factor_language,
                            check_sft_order2, image_language, limit_language,
                            predicted_limit_words, trace_prefixes, two_approx)
from casym.budgets import Budget, BudgetExceeded
from casym.constructions import build_tilde
from casym.rules import (elementary_rule, identity_rule, min_rule,
                         product_rule, shift_rule)

BIG = Budget(max_enum=10 ** 7, max_states=200_000)


def fmt(rule, words):
    return {rule.alphabet.format_word(w) for w in words}


def test_trace_prefixes_identity_shift():
    i = identity_rule()
    assert len(trace_prefixes(i, 1, 2, BIG)) == 2  # constant columns
    s = shift_rule()
    assert len(trace_prefixes(s, 1, 2, BIG)) == 4  # fresh cell each row


def test_trace_prefixes_min_pinned():
    m = min_rule()
    cols = trace_prefixes(m, 1, 3, BIG)
    assert {tuple(r[0] for r in c) for c in cols} == \
        {(1, 1, 1), (1, 1, 0), (1, 0, 0), (0, 0, 0)}


def test_trace_strategies_agree():
    for rule in [min_rule(), elementary_rule(110), build_tilde(elementary_rule(110))]:
        for k, T in [(1, 2), (1, 3), (2, 2), (1, 4)]:
            a = trace_prefixes(rule, k, T, BIG, strategy="enum")
            b = trace_prefixes(rule, k, T, BIG, strategy="automaton")
            assert a == b, (rule.name, k, T)


def test_trace_suffix_closure():
    rule = elementary_rule(110)
    deep = trace_prefixes(rule, 1, 4, BIG)
    shallow = trace_prefixes(rule, 1, 3, BIG)
    assert {c[1:] for c in deep} <= shallow


def test_two_approx_min():
    m = min_rule()
    g = two_approx(m, 1, BIG)
    assert g.edges == frozenset({((1,), (1,)), ((1,), (0,)), ((0,), (0,))})
    s = shift_rule()
    assert len(two_approx(s, 1, BIG).edges) == 4
    i = identity_rule()
    assert two_approx(i, 1, BIG).edges == frozenset({((0,), (0,)), ((1,), (1,))})


def test_paths_contain_traces():
    for rule in [min_rule(), elementary_rule(110)]:
        for k in (1, 2):
            g = two_approx(rule, k, BIG)
            succ = {}
            for u, v in g.edges:
                succ.setdefault(u, set()).add(v)
            for col in trace_prefixes(rule, k, 4, BIG):
                rows = col
                for a, b in zip(rows, rows[1:]):
                    assert b in succ[a]


def test_check_sft_order2_identity():
    ok, witness = check_sft_order2(identity_rule(), 1, 5, BIG)
    assert ok and witness is None


def test_check_sft_order2_raw_rules_pinned():
    # pinned by the enumeration oracle: the raw rule 110 trace is NOT order 2
    # (its wrapped version is; that contrast is the point of the construction)
    ok110, witness110 = check_sft_order2(elementary_rule(110), 1, 6, BIG)
    assert not ok110
    assert witness110 == ((1,), (1,), (1,), (0,), (1,))
    enum_cols = trace_prefixes(elementary_rule(110), 1, 5, BIG, strategy="enum")
    assert witness110 not in enum_cols
    assert check_sft_order2(min_rule(), 1, 6, BIG) == (True, None)
    assert check_sft_order2(elementary_rule(90), 1, 6, BIG) == (True, None)


def test_image_language_min_pinned():
    m = min_rule()
    s = image_language(m, 3, 1, BIG)
    assert fmt(m, s.words) == {"000", "001", "010", "011", "100", "110", "111"}
    for t in range(1, 7):
        img = image_language(m, 3, t, BIG)
        assert m.alphabet.parse_word("101") not in img
        assert m.alphabet.parse_word("010") in img


def test_image_language_shift_full():
    s = shift_rule()
    for t in range(4):
        assert len(image_language(s, 2, t, BIG)) == 4


def test_image_strategies_agree():
    rules = [min_rule(), elementary_rule(110), shift_rule(),
             product_rule(shift_rule(), min_rule())]
    for rule in rules:
        for n in range(1, 4):
            for t in range(0, 4):
                a = image_language(rule, n, t, BIG, strategy="enum")
                b = image_language(rule, n, t, BIG, strategy="automaton")
                assert set(a.words) == set(b.words), (rule.name, n, t)


def test_limit_language_chain():
    m = min_rule()
    chain, report = limit_language(m, 3, 6, BIG)
    for a, b in zip(chain, chain[1:]):
        assert set(b.words) <= set(a.words)
    # factors of members stay members one length down
    for t in range(3):
        shorter = set(image_language(m, 2, t, BIG).words)
        for w in chain[t].words:
            assert w[:2] in shorter and w[1:] in shorter
    s = shift_rule()
    chain, report = limit_language(s, 2, 4, BIG)
    assert report["last_strict_decrease"] == 0
    assert all(len(x) == 4 for x in chain)


def test_budget_guard():
    tiny = Budget(max_enum=10, max_states=10)
    with pytest.raises(BudgetExceeded):
        image_language(min_rule(), 3, 2, tiny, strategy="enum")


def test_factor_map_transport():
    prod = product_rule(shift_rule(), min_rule())
    m = min_rule()
    pi2 = FactorMap.projection(prod.alphabet, m.alphabet, 1, len(m.alphabet))
    assert pi2.is_coloring
    for n in range(1, 4):
        for t in range(0, 4):
            left = apply_factor_language(pi2, image_language(prod, n, t, BIG))
            right = image_language(m, n, t, BIG)
            assert set(left.words) == set(right.words)
    ident = FactorMap.identity(m.alphabet)
    s = image_language(m, 3, 1, BIG)
    assert set(apply_factor_language(ident, s).words) == set(s.words)


def test_factor_map_projection_example():
    prod = product_rule(shift_rule(("a", "b")), min_rule())
    pi2 = FactorMap.projection(prod.alphabet, min_rule().alphabet, 1, 2)
    w = tuple(prod.alphabet.index(x) for x in ["(a,0)", "(b,1)"])
    assert pi2.apply_word(w) == (0, 1)


def test_language_sample_serialization():
    m = min_rule()
    s = image_language(m, 3, 1, BIG)
    text = s.to_text(m.alphabet)
    back = LanguageSample.from_text(m.alphabet, text)
    assert back.words == s.words and back.n == 3 and back.t == 1


def test_predicted_limit_words_small():
    from casym.alphabet import Alphabet
    base = Alphabet(("0", "1"))
    squad = Alphabet(("p", "q"))
    pred = predicted_limit_words(base, "0", squad, 2, lambda w: "q" not in
                                 tuple(squad.symbols[i] for i in w))
    names = {tuple("0 1 (0|p) (0|q) (1|p) (1|q)".split()[i] for i in w)
             for w in pred.words}
    assert ("0", "1") in names            # plain words
    assert ("0", "(1|p)") in names        # bordered pair
    assert ("(0|p)", "(1|p)") in names    # run of accepted pairs
    assert ("1", "(1|p)") not in names    # only the spreading symbol flanks
    assert ("(0|q)", "0") not in names    # oracle-rejected squad letter
