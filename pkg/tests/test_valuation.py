from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tmotives.valuation import INF, EmptyInput, NPPoint, ext, fmt, leftmost_root_ord, lower_hull, root_ords

F = Fraction


def test_ext_and_fmt():
    assert ext("3/4") == F(3, 4)
    assert ext(2) == 2
    assert fmt(F(-1, 2)) == "-1/2"
    assert fmt(INF) == "inf"
    assert fmt(-INF) == "-inf"


def test_hull_of_known_polygon():
    np = lower_hull([(1, -2), (2, -3), (4, -4), (8, -16), (16, -20)])
    assert [(p.x, p.y) for p in np.vertices] == [(1, -2), (8, -16), (16, -20)]
    assert root_ords(np) == [(F(2), 7), (F(1, 2), 8)]
    assert np.dump() == "1,-2\n8,-16\n16,-20"


def test_hull_keeps_collinear_points_on_segment():
    np = lower_hull([(0, 0), (1, -1), (2, -2)])
    assert [p.x for p in np.vertices] == [0, 2]
    assert [p.x for p in np.segments[0].on_segment] == [0, 1, 2]


def test_hull_drops_infinite_points_and_rejects_empty():
    np = lower_hull([(1, 0), (2, INF), (4, 1)])
    assert [p.x for p in np.vertices] == [1, 4]
    with pytest.raises(EmptyInput):
        lower_hull([(1, INF)])


def test_leftmost_root_ord():
    head = [(1, F(-2)), (8, F(-16)), (16, F(-20))]
    # (0, w) joined to the polygon: max_j (w - a_j) / x_j
    assert leftmost_root_ord(F(0), head) == 2
    assert leftmost_root_ord(INF, head) == INF


points = st.lists(
    st.tuples(st.integers(0, 40), st.fractions(min_value=-50, max_value=50, max_denominator=12)),
    min_size=1, max_size=12,
)


@settings(max_examples=1000, deadline=None)
@given(points)
def test_hull_invariants(pts):
    np = lower_hull(pts)
    best = {}
    for x, y in pts:
        best[x] = min(best.get(x, y), y)
    xs = sorted(best)
    # vertices are input points, span the full x-range, and include the extreme x's
    assert all(best[p.x] == p.y for p in np.vertices)
    assert np.vertices[0].x == xs[0] and np.vertices[-1].x == xs[-1]
    # slopes strictly increase (strict convexity at every vertex)
    slopes = [s.slope for s in np.segments]
    assert all(a < b for a, b in zip(slopes, slopes[1:]))
    # root counts add up to the x-range
    assert sum(s.x_span for s in np.segments) == xs[-1] - xs[0]
    # every point lies on or above the hull
    for x in xs:
        for s in np.segments:
            if s.left.x <= x <= s.right.x:
                assert best[x] >= s.left.y + s.slope * (x - s.left.x)
    # on_segment lists exactly the collinear points
    for s in np.segments:
        on = [p.x for p in s.on_segment]
        assert on[0] == s.left.x and on[-1] == s.right.x
        assert all(best[x] == s.left.y + s.slope * (x - s.left.x) for x in on)
    # the leftmost root ord through (0, w) matches the hull with (0, w) added
    if xs[0] > 0:
        w = min(best.values()) - 1
        full = lower_hull([NPPoint(0, w)] + [NPPoint(x, best[x]) for x in xs])
        assert leftmost_root_ord(w, [(x, best[x]) for x in xs]) == full.segments[0].root_ord
