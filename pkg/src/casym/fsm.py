"""NFA/DFA machinery and sofic-shift covers.

Two views of the same Nfa class are used:

* ordinary finite-word acceptors (initial/final states matter), used by the
  backward-reachability oracle;
* "covers" of sofic subshifts: labeled graphs in which every state lies on a
  bi-infinite path, with the convention initial = finals = all states.  The
  labels of length-n paths are then exactly the length-n words of the
  subshift's language, and `cover_image` pushes a cover through one CA step.

Letters are arbitrary hashable objects: alphabet indices (ints) for rule
covers, tuples for the time-layered strip covers used by trace analysis.
"""

from __future__ import annotations

from .budgets import Budget, DEFAULT
from .rules import Rule


class Nfa:
    def __init__(self, n_states, edges, initial, finals, deterministic=False):
        self.n = n_states
        # edges: dict[state][letter] -> frozenset of targets
        self.edges = edges
        self.initial = frozenset(initial)
        self.finals = frozenset(finals)
        self.deterministic = deterministic

    @classmethod
    def from_edge_list(cls, n_states, edge_list, initial, finals):
        edges = {}
        det = True
        for q, a, q2 in edge_list:
            tgt = edges.setdefault(q, {}).setdefault(a, set())
            tgt.add(q2)
            if len(tgt) > 1:
                det = False
        frozen = {q: {a: frozenset(t) for a, t in d.items()} for q, d in edges.items()}
        return cls(n_states, frozen, initial, finals, det and len(set(initial)) <= 1)

    def letters(self):
        out = set()
        for d in self.edges.values():
            out.update(d.keys())
        return out

    def edge_count(self):
        return sum(len(t) for d in self.edges.values() for t in d.values())

    def step(self, states, letter):
        out = set()
        for q in states:
            out.update(self.edges.get(q, {}).get(letter, ()))
        return frozenset(out)

    def accepts(self, word) -> bool:
        cur = self.initial
        for a in word:
            cur = self.step(cur, a)
            if not cur:
                return False
        return bool(cur & self.finals)

    def is_empty(self) -> bool:
        seen = set(self.initial)
        stack = list(self.initial)
        while stack:
            q = stack.pop()
            if q in self.finals:
                return False
            for tgts in self.edges.get(q, {}).values():
                for q2 in tgts:
                    if q2 not in seen:
                        seen.add(q2)
                        stack.append(q2)
        return True

    def words_of_length(self, length: int, budget: Budget = DEFAULT):
        """All accepted words of the given length, sorted."""
        memo = {}

        def suffixes(q, k):
            key = (q, k)
            if key in memo:
                return memo[key]
            if k == 0:
                res = frozenset([()]) if q in self.finals else frozenset()
            else:
                acc = set()
                for a, tgts in self.edges.get(q, {}).items():
                    for q2 in tgts:
                        for w in suffixes(q2, k - 1):
                            acc.add((a,) + w)
                budget.check_enum(len(acc))
                res = frozenset(acc)
            memo[key] = res
            return res

        out = set()
        for q in self.initial:
            out |= suffixes(q, length)
            budget.check_enum(len(out))
        return sorted(out)

    def determinize(self, budget: Budget = DEFAULT) -> "Nfa":
        start = frozenset(self.initial)
        index = {start: 0}
        order = [start]
        edges = {}
        i = 0
        while i < len(order):
            S = order[i]
            letters = set()
            for q in S:
                letters.update(self.edges.get(q, {}).keys())
            row = {}
            for a in letters:
                T = self.step(S, a)
                if not T:
                    continue
                if T not in index:
                    index[T] = len(order)
                    order.append(T)
                    budget.check_states(len(order))
                row[a] = frozenset([index[T]])
            edges[i] = row
            i += 1
        finals = frozenset(i for S, i in index.items() if S & self.finals)
        return Nfa(len(order), edges, [0], finals, deterministic=True)

    def minimize(self, budget: Budget = DEFAULT) -> "Nfa":
        """Minimal DFA (partial, no explicit dead state) for the same language."""
        dfa = self if self.deterministic else self.determinize(budget)
        # keep only states reachable from the start and co-reachable to a final
        reach = set(dfa.initial)
        stack = list(dfa.initial)
        while stack:
            q = stack.pop()
            for tgts in dfa.edges.get(q, {}).values():
                for q2 in tgts:
                    if q2 not in reach:
                        reach.add(q2)
                        stack.append(q2)
        back = {}
        for q in reach:
            for a, tgts in dfa.edges.get(q, {}).items():
                for q2 in tgts:
                    back.setdefault(q2, set()).add(q)
        co = set(dfa.finals & reach)
        stack = list(co)
        while stack:
            q = stack.pop()
            for q2 in back.get(q, ()):
                if q2 not in co:
                    co.add(q2)
                    stack.append(q2)
        useful = reach & co
        if not useful:
            return Nfa(1, {}, [0], [], deterministic=True)
        # Moore refinement; missing transitions behave as an implicit dead class
        cls = {q: (1 if q in dfa.finals else 0) for q in useful}
        while True:
            sigs = {}
            for q in useful:
                row = []
                for a, tgts in dfa.edges.get(q, {}).items():
                    (q2,) = tgts
                    if q2 in useful:
                        row.append((a, cls[q2]))
                sig = (cls[q], tuple(sorted(row, key=repr)))
                sigs.setdefault(sig, []).append(q)
            new_cls = {}
            for i, group in enumerate(sigs.values()):
                for q in group:
                    new_cls[q] = i
            if len(sigs) == len(set(cls.values())):
                cls = new_cls
                break
            cls = new_cls
        (q0,) = dfa.initial
        edges = {}
        for q in useful:
            for a, tgts in dfa.edges.get(q, {}).items():
                (q2,) = tgts
                if q2 in useful:
                    edges.setdefault(cls[q], {})[a] = frozenset([cls[q2]])
        n = len(set(cls.values()))
        finals = frozenset(cls[q] for q in useful if q in dfa.finals)
        initial = [cls[q0]] if q0 in useful else []
        return Nfa(n, edges, initial, finals, deterministic=True)

    def intersect(self, other: "Nfa", budget: Budget = DEFAULT) -> "Nfa":
        index = {}
        order = []
        for p in self.initial:
            for q in other.initial:
                if (p, q) not in index:
                    index[(p, q)] = len(order)
                    order.append((p, q))
        edges = {}
        i = 0
        while i < len(order):
            p, q = order[i]
            row = {}
            dp = self.edges.get(p, {})
            dq = other.edges.get(q, {})
            for a in set(dp) & set(dq):
                tgts = set()
                for p2 in dp[a]:
                    for q2 in dq[a]:
                        key = (p2, q2)
                        if key not in index:
                            index[key] = len(order)
                            order.append(key)
                            budget.check_states(len(order))
                        tgts.add(index[key])
                if tgts:
                    row[a] = frozenset(tgts)
            edges[i] = row
            i += 1
        finals = [i for (p, q), i in index.items()
                  if p in self.finals and q in other.finals]
        initial = [index[(p, q)] for p in self.initial for q in other.initial]
        return Nfa(len(order), edges, initial, finals)

    def trim_useful(self) -> "Nfa":
        """Keep only states on some path from an initial to a final state."""
        reach = set(self.initial)
        stack = list(self.initial)
        while stack:
            q = stack.pop()
            for tgts in self.edges.get(q, {}).values():
                for q2 in tgts:
                    if q2 not in reach:
                        reach.add(q2)
                        stack.append(q2)
        back = {}
        for q in reach:
            for a, tgts in self.edges.get(q, {}).items():
                for q2 in tgts:
                    back.setdefault(q2, set()).add(q)
        co = set(self.finals & reach)
        stack = list(co)
        while stack:
            q = stack.pop()
            for q2 in back.get(q, ()):
                if q2 not in co:
                    co.add(q2)
                    stack.append(q2)
        useful = sorted(reach & co)
        index = {q: i for i, q in enumerate(useful)}
        edges = {}
        for q in useful:
            row = {}
            for a, tgts in self.edges.get(q, {}).items():
                live = frozenset(index[t] for t in tgts if t in index)
                if live:
                    row[a] = live
            edges[index[q]] = row
        return Nfa(len(useful), edges,
                   [index[q] for q in self.initial if q in index],
                   [index[q] for q in self.finals if q in index])

    def bisim_quotient(self) -> "Nfa":
        """Merge forward-bisimilar states; preserves the language without any
        subset construction."""
        cls = {q: (1 if q in self.finals else 0) for q in range(self.n)}
        nclasses = 2
        while True:
            sigs = {}
            for q in range(self.n):
                row = tuple(sorted(
                    (repr(a), frozenset(cls[t] for t in tgts))
                    for a, tgts in self.edges.get(q, {}).items()))
                sigs.setdefault((cls[q], row), []).append(q)
            if len(sigs) == nclasses:
                break
            nclasses = len(sigs)
            cls = {}
            for i, group in enumerate(sigs.values()):
                for q in group:
                    cls[q] = i
        edges = {}
        for q in range(self.n):
            row = edges.setdefault(cls[q], {})
            for a, tgts in self.edges.get(q, {}).items():
                row[a] = row.get(a, frozenset()) | frozenset(cls[t] for t in tgts)
        return Nfa(nclasses, edges,
                   {cls[q] for q in self.initial},
                   {cls[q] for q in self.finals})

    def restrict_letters(self, allowed) -> "Nfa":
        allowed = set(allowed)
        edges = {q: {a: t for a, t in d.items() if a in allowed}
                 for q, d in self.edges.items()}
        return Nfa(self.n, edges, self.initial, self.finals, self.deterministic)

    def relabel(self, fn) -> "Nfa":
        """Apply fn to every edge letter (may merge letters)."""
        edges = {}
        for q, d in self.edges.items():
            row = {}
            for a, tgts in d.items():
                b = fn(a)
                row[b] = row.get(b, frozenset()) | tgts
            edges[q] = row
        return Nfa(self.n, edges, self.initial, self.finals)


# --- covers -------------------------------------------------------------------

def full_shift_cover(letters) -> Nfa:
    edges = {0: {a: frozenset([0]) for a in letters}}
    return Nfa(1, edges, [0], [0])


def bi_trim(nfa: Nfa) -> Nfa:
    """Keep exactly the states lying on bi-infinite paths; initial/finals = all."""
    alive = set(range(nfa.n))
    while True:
        has_out = set()
        has_in = set()
        for q in alive:
            for a, tgts in nfa.edges.get(q, {}).items():
                live = tgts & alive
                if live:
                    has_out.add(q)
                    has_in.update(live)
        keep = alive & has_out & has_in
        if keep == alive:
            break
        alive = keep
        if not alive:
            return Nfa(0, {}, [], [])
    index = {q: i for i, q in enumerate(sorted(alive))}
    edges = {}
    for q in alive:
        row = {}
        for a, tgts in nfa.edges.get(q, {}).items():
            live = frozenset(index[t] for t in tgts if t in alive)
            if live:
                row[a] = live
        edges[index[q]] = row
    allstates = range(len(alive))
    return Nfa(len(alive), edges, allstates, allstates)


def cover_image(cover: Nfa, rule: Rule) -> Nfa:
    """Cover of the image subshift under one application of the rule.

    States are (cover state, last 2r letters read); an edge consumes one more
    letter of the preimage and emits the rule applied to the full window.
    """
    r = rule.radius
    # windows of length 2r readable ending at each state
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
            out = rule.apply(w + (a,))
            nw = (w + (a,))[1:]
            for q2 in tgts:
                j = index.get((q2, nw))
                if j is not None:
                    row.setdefault(out, set()).add(j)
        edges[i] = {a: frozenset(t) for a, t in row.items()}
    allstates = range(len(index))
    return bi_trim(Nfa(len(index), edges, allstates, allstates))


def cover_normalize(cover: Nfa, budget: Budget = DEFAULT) -> Nfa:
    """Deterministic minimal presentation of the same sofic subshift."""
    if cover.n == 0:
        return cover
    as_lang = Nfa(cover.n, cover.edges, range(cover.n), range(cover.n))
    m = as_lang.minimize(budget)
    return bi_trim(m)


def cover_words(cover: Nfa, length: int, budget: Budget = DEFAULT):
    """Length-n words of the presented subshift (labels of length-n paths)."""
    as_lang = Nfa(cover.n, cover.edges, range(cover.n), range(cover.n))
    return as_lang.words_of_length(length, budget)


def cover_language_key(cover: Nfa, budget: Budget = DEFAULT):
    """Canonical fingerprint of the factor language, for equality tests."""
    m = cover_normalize(cover, budget)
    as_lang = Nfa(m.n, m.edges, range(m.n), range(m.n))
    dfa = as_lang.minimize(budget)
    if not dfa.initial:
        return ("empty",)
    (q0,) = dfa.initial
    order = {q0: 0}
    queue = [q0]
    rows = []
    while queue:
        q = queue.pop(0)
        row = []
        for a, tgts in sorted(dfa.edges.get(q, {}).items(), key=lambda kv: repr(kv[0])):
            (q2,) = tgts
            if q2 not in order:
                order[q2] = len(order)
                queue.append(q2)
            row.append((a, order[q2]))
        rows.append(tuple(row))
    finals = tuple(sorted(order[q] for q in dfa.finals if q in order))
    return (tuple(rows), finals)


def covers_equal_language(a: Nfa, b: Nfa, budget: Budget = DEFAULT) -> bool:
    return cover_language_key(a, budget) == cover_language_key(b, budget)


def cover_accepts_presented(cover: Nfa, left, center, right) -> bool:
    """Is the configuration  wLw . center . wRw  presented by the cover?"""
    if cover.n == 0:
        return False
    allstates = frozenset(range(cover.n))

    def word_step(states, word):
        cur = frozenset(states)
        for a in word:
            nxt = set()
            for q in cur:
                nxt.update(cover.edges.get(q, {}).get(a, ()))
            cur = frozenset(nxt)
            if not cur:
                return cur
        return cur

    # states reachable after an infinite left tail: greatest fixpoint of
    # "read one more copy of left"
    E = allstates
    seen = {E}
    while True:
        E2 = word_step(E, left)
        if E2 == E:
            break
        if E2 in seen:
            # cycle of sets: intersect the cycle to get the stable core
            cyc = [E2]
            cur = word_step(E2, left)
            while cur != E2:
                cyc.append(cur)
                cur = word_step(cur, left)
            E = frozenset.intersection(*cyc)
            break
        seen.add(E2)
        E = E2
    # states with an infinite right tail ahead: greatest fixpoint of
    # "can read one copy of right and continue"
    F = allstates
    while True:
        F2 = frozenset(q for q in F if word_step([q], right) & F)
        if F2 == F:
            break
        F = F2
    mid = word_step(E, center)
    return bool(mid & F)


# --- finite-word preimages under a block map -----------------------------------

def factor_nfa(letters, word) -> Nfa:
    """Accepts every word containing `word` as a factor (Sigma* w Sigma*)."""
    n = len(word) + 1
    edges = {}
    for a in letters:
        edges.setdefault(0, {})[a] = frozenset([0])
        edges.setdefault(n - 1, {})[a] = frozenset([n - 1])
    for i, a in enumerate(word):
        cur = edges.setdefault(i, {})
        cur[a] = cur.get(a, frozenset()) | frozenset([i + 1])
    return Nfa(n, edges, [0], [n - 1])


def exact_word_nfa(word) -> Nfa:
    n = len(word) + 1
    edges = {i: {a: frozenset([i + 1])} for i, a in enumerate(word)}
    return Nfa(n, edges, [0], [n - 1])


def preimage_nfa(acceptor: Nfa, rule: Rule, budget: Budget = DEFAULT) -> Nfa:
    """{ u : block_map(rule, u) accepted }, as an NFA over rule's letters."""
    r = rule.radius
    letters = list(range(len(rule.alphabet)))
    index = {}
    order = []

    def intern(s):
        if s not in index:
            index[s] = len(order)
            order.append(s)
            budget.check_states(len(order))
        return index[s]

    initial = []
    if r == 0:
        for q in acceptor.initial:
            initial.append(intern(((), q)))
    else:
        # window-building phase: consume the first 2r letters without emitting
        frontier = {(): None}
        for _ in range(2 * r):
            nxt = {}
            for w in frontier:
                for a in letters:
                    nxt[w + (a,)] = None
            frontier = nxt
        for w in frontier:
            for q in acceptor.initial:
                initial.append(intern((w, q)))
    edges = {}
    i = 0
    while i < len(order):
        w, q = order[i]
        row = {}
        for a in letters:
            out = rule.apply(w + (a,))
            for q2 in acceptor.edges.get(q, {}).get(out, ()):
                row.setdefault(a, set()).add(intern(((w + (a,))[1:], q2)))
        edges[i] = {a: frozenset(t) for a, t in row.items()}
        i += 1
    finals = [i for (w, q), i in index.items() if q in acceptor.finals]
    return Nfa(len(order), edges, initial, finals)
