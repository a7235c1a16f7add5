"""Euclidean renderings of firing-squad history diagrams.

Marks become integer points, signals become sloped segments (slope = speed,
time axis pointing up), and validity means every intersection is one of the
listed collisions and splits keep their distance.  Slow signals sample integer
coordinates exactly at their stay-phase cells; the move phase sits half a cell
behind the cell that renders it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .fsquad import COLUMN, GAMMA, KAPPA, SHARP, STATE_ATOMS, fs_alphabet

# atom -> (signal label, velocity, rendering offset within the cell)
ATOM_SIGNAL = {
    "L1": ("L1", Fraction(-1), Fraction(0)),
    "l1": ("l1", Fraction(-1), Fraction(0)),
    "l2s": ("l2", Fraction(-1, 2), Fraction(0)),
    "l2m": ("l2", Fraction(-1, 2), Fraction(1, 2)),
    "r2s": ("r2", Fraction(1, 2), Fraction(0)),
    "r2m": ("r2", Fraction(1, 2), Fraction(-1, 2)),
    "r1": ("r1", Fraction(1), Fraction(0)),
    "R1": ("R1", Fraction(1), Fraction(0)),
    "P": ("#'", Fraction(0), Fraction(0)),
}

SPEED = {"L1": Fraction(-1), "l1": Fraction(-1), "l2": Fraction(-1, 2),
         "#'": Fraction(0), "r2": Fraction(1, 2), "r1": Fraction(1),
         "R1": Fraction(1)}

# allowed segment-pair crossings away from points (signals pass through)
PASS_THROUGH = {frozenset(("l1", "r2")), frozenset(("r1", "l2"))}
# crossings that must coincide with an event: both fast signals end and the
# lowercase pair starts (capital crossing), or a mark point (slow meet, revive)
CAPITAL_CROSS = frozenset(("L1", "R1"))


@dataclass
class Segment:
    label: str
    x0: Fraction
    t0: Fraction
    x1: Fraction
    t1: Fraction

    def at(self, t):
        if not self.t0 <= t <= self.t1:
            return None
        return self.x0 + SPEED[self.label] * (t - self.t0)


@dataclass
class EuclideanDiagram:
    points: set = field(default_factory=set)      # integer (x, t), marks
    segments: list = field(default_factory=list)

    def to_svg(self, scale: int = 24) -> str:
        xs = [p[0] for p in self.points] + [s.x0 for s in self.segments] + [s.x1 for s in self.segments]
        ts = [p[1] for p in self.points] + [s.t0 for s in self.segments] + [s.t1 for s in self.segments]
        if not xs:
            xs, ts = [0], [0]
        x_lo, x_hi = min(xs) - 1, max(xs) + 1
        t_lo, t_hi = min(ts) - 1, max(ts) + 1
        w = float((x_hi - x_lo) * scale)
        h = float((t_hi - t_lo) * scale)

        def px(x):
            return float((x - x_lo) * scale)

        def py(t):  # time increases upward
            return float((t_hi - t) * scale)

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
               f'viewBox="0 0 {w:.0f} {h:.0f}">']
        colors = {"L1": "#1f4e9c", "l1": "#4a90d9", "l2": "#7fb3e6", "#'": "#555555",
                  "r2": "#e6a37f", "r1": "#d96f4a", "R1": "#9c2f1f"}
        for s in self.segments:
            c = colors.get(s.label, "#222222")
            out.append(f'<line x1="{px(s.x0):.1f}" y1="{py(s.t0):.1f}" '
                       f'x2="{px(s.x1):.1f}" y2="{py(s.t1):.1f}" stroke="{c}" stroke-width="2"/>')
            out.append(f'<text x="{px((s.x0 + s.x1) / 2):.1f}" y="{py((s.t0 + s.t1) / 2):.1f}" '
                       f'font-size="9">{s.label}</text>')
        for (x, t) in sorted(self.points):
            out.append(f'<circle cx="{px(x):.1f}" cy="{py(t):.1f}" r="4" fill="#000"/>')
            out.append(f'<text x="{px(x) + 5:.1f}" y="{py(t) - 5:.1f}" font-size="10">#</text>')
        out.append("</svg>")
        return "\n".join(out)


class UnliftableDiagram(ValueError):
    def __init__(self, cell, time, why):
        super().__init__(f"cell {cell} at history time {time}: {why}")
        self.cell = cell
        self.time = time


def lift_euclidean(diagram) -> EuclideanDiagram:
    """Euclidean version of a history diagram: marks as points, signal atoms
    chained into maximal segments.  Raises UnliftableDiagram when the signals
    in the grid cross in a way the collision rules exclude."""
    alph = fs_alphabet()
    T = diagram.depth
    # atom occurrences with continuous coordinates; history row t is time T-1-t
    occ = {}  # (signal, x, t) -> grid cell
    points = set()
    for h, row in enumerate(diagram.rows):
        t = T - 1 - h
        for c, a in enumerate(row):
            name = alph.symbols[a]
            if name == SHARP:
                points.add((c, t))
                continue
            if name == KAPPA:
                # a killed cell records an invalid signal meeting just before it
                raise UnliftableDiagram(c, h, "killer state: signals crossed invalidly")
            if name in (GAMMA, "B"):
                continue
            for atom in STATE_ATOMS.get(name, ()):
                label, _speed, off = ATOM_SIGNAL[atom]
                occ[(label, Fraction(c) + off, t)] = (c, h)
    # chain occurrences into segments along their velocity
    segs = []
    used = set()
    for key in sorted(occ, key=lambda k: (k[0], k[2], k[1])):
        if key in used:
            continue
        label, x, t = key
        v = SPEED[label]
        while (label, x - v, t - 1) in occ and (label, x - v, t - 1) not in used:
            x, t = x - v, t - 1
        x1, t1 = x, t
        while (label, x1 + v, t1 + 1) in occ:
            nxt = (label, x1 + v, t1 + 1)
            if nxt in used:
                break
            used.add(nxt)
            x1, t1 = x1 + v, t1 + 1
        used.add((label, x, t))
        segs.append(Segment(label, x, t, x1, t1))
    diag = EuclideanDiagram(points, segs)
    ok, violations = validate_euclidean(diag)
    if not ok:
        x, t, why = violations[0]
        raise UnliftableDiagram(int(x), T - 1 - int(t), why)
    return diag


def _intersection(a: Segment, b: Segment):
    va, vb = SPEED[a.label], SPEED[b.label]
    if va == vb:
        return None
    t = Fraction(b.x0 - a.x0 + va * a.t0 - vb * b.t0, va - vb)
    lo = max(a.t0, b.t0)
    hi = min(a.t1, b.t1)
    if not lo <= t <= hi:
        return None
    return (a.x0 + va * (t - a.t0), t)


def validate_euclidean(diag: EuclideanDiagram):
    """The three diagram rules: integer mark points, label/slope agreement
    (structural), intersections from the collision list only, and split
    spacing of at least 3 cells."""
    bad = []
    for (x, t) in diag.points:
        if x != int(x) or t != int(t):
            bad.append((x, t, "mark off the integer grid"))
    point_set = {(Fraction(x), Fraction(t)) for (x, t) in diag.points}
    segs = diag.segments
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            a, b = segs[i], segs[j]
            hit = _intersection(a, b)
            if hit is None:
                continue
            pair = frozenset((a.label, b.label))
            if pair in PASS_THROUGH:
                continue
            if hit in point_set:
                continue  # a mark event explains the meeting
            if pair == CAPITAL_CROSS and a.t1 == hit[1] and b.t1 == hit[1]:
                continue  # both capitals end at the crossing (they lowercase)
            if pair == frozenset(("l1", "r1")) and (a.x0, a.t0) == hit and (b.x0, b.t0) == hit:
                continue  # the lowercase pair diverging from its crossing
            bad.append((hit[0], hit[1], f"invalid crossing {a.label}+{b.label}"))
    # split spacing: marks at the same time within distance 2
    pts = sorted(diag.points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            (x1, t1), (x2, t2) = pts[i], pts[j]
            if t1 == t2 and abs(x2 - x1) <= 2:
                bad.append((x1, t1, f"marks {abs(x2 - x1)} apart at the same step"))
    return not bad, bad
