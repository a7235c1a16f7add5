from fractions import Fraction

import pytest

from casym.euclid import (EuclideanDiagram, Segment, UnliftableDiagram,
                          lift_euclidean, validate_euclidean)
from casym.fsquad import HistoryDiagram, fire_time, lattice_presented, simulate


def orbit_diagram(n, steps, span):
    orbit, _, _ = simulate(lattice_presented(n), steps)
    rows = [c.window(-span, 2 * span + 1) for c in orbit]
    return HistoryDiagram.from_orbit(rows)


def test_lift_split_five_ways():
    d = orbit_diagram(7, 3, 10)
    e = lift_euclidean(d)
    assert e.points  # the marks are points
    labels = {s.label for s in e.segments}
    assert {"L1", "l2", "#'", "r2", "R1"} <= labels


def test_lift_full_cascade_valid():
    n = 3
    d = orbit_diagram(n, fire_time(n) - 1, 2 * (n + 1))
    e = lift_euclidean(d)
    ok, bad = validate_euclidean(e)
    assert ok, bad[:4]
    # slow signals hit integer coordinates on their stay cells: slopes check
    for s in e.segments:
        if s.t1 > s.t0:
            slope = (s.x1 - s.x0) / (s.t1 - s.t0)
            from casym.euclid import SPEED
            assert slope == SPEED[s.label]


def test_points_only_at_integers():
    e = EuclideanDiagram(points={(Fraction(1, 2), 3)}, segments=[])
    ok, bad = validate_euclidean(e)
    assert not ok


def test_crossing_rules():
    # l1 over r2 passes
    e = EuclideanDiagram(segments=[Segment("l1", 4, 0, 0, 4),
                                   Segment("r2", 0, 0, 2, 4)])
    ok, _ = validate_euclidean(e)
    assert ok
    # l1 meeting l2 is invalid
    e = EuclideanDiagram(segments=[Segment("l1", 4, 0, 0, 4),
                                   Segment("l2", 3, 0, 1, 4)])
    ok, bad = validate_euclidean(e)
    assert not ok
    # capitals crossing must end at the meeting
    e = EuclideanDiagram(segments=[Segment("R1", 0, 0, 2, 2),
                                   Segment("L1", 4, 0, 2, 2),
                                   Segment("l1", 2, 2, 0, 4),
                                   Segment("r1", 2, 2, 4, 4)])
    ok, bad = validate_euclidean(e)
    assert ok, bad
    # capitals crossing mid-flight is invalid
    e = EuclideanDiagram(segments=[Segment("R1", 0, 0, 4, 4),
                                   Segment("L1", 4, 0, 0, 4)])
    ok, _ = validate_euclidean(e)
    assert not ok


def test_mark_spacing():
    e = EuclideanDiagram(points={(0, 0), (4, 0)})
    assert validate_euclidean(e)[0]
    e = EuclideanDiagram(points={(0, 0), (2, 0)})
    ok, bad = validate_euclidean(e)
    assert not ok and "apart" in bad[0][2]
    assert validate_euclidean(EuclideanDiagram())[0]  # empty diagram


def test_unliftable_reports_cell():
    # an l1 running into an l2 kills a cell; the lift refuses the grid
    orbit, fk, _ = simulate(lattice_presented(2), 4)
    assert fk is not None
    rows = [c.window(-4, 9) for c in orbit]
    with pytest.raises(UnliftableDiagram) as err:
        lift_euclidean(HistoryDiagram.from_orbit(rows))
    assert "invalid" in str(err.value)


def test_svg_export():
    d = orbit_diagram(3, 4, 6)
    svg = lift_euclidean(d).to_svg()
    assert svg.startswith("<svg") and "</svg>" in svg and "line" in svg
