import pytest

from cyclewall.davis import build_ball
from cyclewall.diagrams import (
    DiscDiagram,
    convention_lock,
    diagram_to_json_dict,
    fill_and_audit,
    fill_loop,
    gauss_bonnet_check,
    single_polygon_diagram,
    two_polygon_diagram,
)
from cyclewall.errors import FillError, ValidationError
from cyclewall.words import identity, parse_word


def union_boundary_loop(b, reps):
    """Trace the boundary cycle of a disc-shaped union of polygons."""
    count = {}
    for rep in reps:
        for e in b.polygon_edges[rep]:
            count[e] = count.get(e, 0) + 1
    border = [e for e, c in count.items() if c == 1]
    at = {}
    for e in border:
        for v in e.ends:
            at.setdefault(v, []).append(e)
    assert all(len(es) == 2 for es in at.values())
    start = min(at, key=lambda v: v.sort_key())
    loop, prev = [start], None
    while True:
        e = next(x for x in at[loop[-1]] if x is not prev)
        nxt = e.ends[0] if e.ends[1] == loop[-1] else e.ends[1]
        if nxt == start:
            return loop
        loop.append(nxt)
        prev = e


# -- convention lock ---------------------------------------------------------


def test_convention_lock_holds_for_reference_sizes():
    for n in (5, 6, 7):
        assert convention_lock(n).ok


def test_single_polygon_curvatures():
    d = single_polygon_diagram(5)
    assert all(d.vertex_curvature(v) == 2 for v in d.vertices)
    assert d.face_curvature(0) == -2
    assert d.total_curvature() == 8


def test_two_polygon_curvatures():
    d = two_polygon_diagram(5)
    # the two endpoints of the shared edge are flat, the rest are corners
    flats = [v for v in d.vertices if d.vertex_curvature(v) == 0]
    assert len(flats) == 2
    assert d.total_curvature() == 8


# -- validation ----------------------------------------------------------------


def test_rejects_non_contractible():
    # an annulus of squares is not a disc; simplest: a face plus a stray edge
    with pytest.raises(ValidationError):
        DiscDiagram([0, 1, 2, 3], [frozenset({0, 1}), frozenset({1, 2}),
                                   frozenset({2, 0}), frozenset({0, 3}),
                                   frozenset({1, 3})],
                    [(0, 1, 2)], (0, 1, 2))


def test_rejects_disconnected():
    with pytest.raises(ValidationError):
        DiscDiagram([0, 1, 2, 3], [frozenset({0, 1}), frozenset({2, 3})],
                    [], (0, 1))


def test_rejects_face_with_missing_edge():
    with pytest.raises(ValidationError):
        DiscDiagram([0, 1, 2], [frozenset({0, 1}), frozenset({1, 2})],
                    [(0, 1, 2)], (0, 1, 2))


def test_unreduced_pair_detected(c5_z2):
    p = c5_z2
    d = two_polygon_diagram(5)
    d.face_polygons = [identity(p), identity(p)]
    assert not d.is_reduced()
    d.face_polygons = [identity(p), parse_word(p, "v2:1")]
    assert d.is_reduced()


# -- filling ---------------------------------------------------------------------


def test_fill_single_polygon(c5_z2):
    b = build_ball(c5_z2, 1)
    loop = union_boundary_loop(b, [identity(c5_z2)])
    d = fill_loop(b, loop)
    assert len(d.faces) == 1
    assert d.face_polygons == [identity(c5_z2)]
    assert d.total_curvature() == 8
    assert gauss_bonnet_check(d).ok


def test_fill_two_polygons(c5_z2):
    p = c5_z2
    b = build_ball(p, 1)
    reps = [identity(p), parse_word(p, "v2:1")]
    loop = union_boundary_loop(b, reps)
    assert len(loop) == 8
    d, report = fill_and_audit(b, loop)
    assert report.ok
    assert len(d.faces) == 2
    assert sorted(map(str, d.face_polygons)) == sorted(map(str, reps))


def test_fill_three_polygon_fan(c5_z2):
    p = c5_z2
    b = build_ball(p, 2)
    reps = [identity(p), parse_word(p, "v2:1"), parse_word(p, "v3:1")]
    loop = union_boundary_loop(b, reps)
    d, report = fill_and_audit(b, loop)
    assert report.ok
    assert len(d.faces) == 3
    assert d.total_curvature() == 8


def test_fill_backtrack_gives_a_hair(c5_z2):
    p = c5_z2
    b = build_ball(p, 1)
    e = b.polygon_edges[identity(p)][0]
    d = fill_loop(b, [e.ends[0], e.ends[1]])
    assert len(d.faces) == 0
    assert len(d.vertices) == 2 and len(d.edges) == 1
    assert d.total_curvature() == 8   # two leaves worth 4 each


def test_fill_rejects_non_edge_path(c5_z2):
    p = c5_z2
    b = build_ball(p, 1)
    poly = b.polygons[identity(p)].boundary
    with pytest.raises(FillError):
        fill_loop(b, [poly[0], poly[2], poly[4]])  # skips around the polygon


def test_fill_respects_face_budget(c5_z2):
    p = c5_z2
    b = build_ball(p, 1)
    loop = union_boundary_loop(b, [identity(p)])
    with pytest.raises(FillError):
        fill_loop(b, loop, max_faces=0)


def test_fill_mixed_groups(c5_mixed):
    p = c5_mixed
    b = build_ball(p, 1)
    loop = union_boundary_loop(b, [identity(p)])
    d, report = fill_and_audit(b, loop)
    assert report.ok and len(d.faces) == 1


def test_fill_hexagon_pair(c6_z2):
    p = c6_z2
    b = build_ball(p, 1)
    reps = [identity(p), parse_word(p, "v2:1")]
    loop = union_boundary_loop(b, reps)
    assert len(loop) == 10
    d, report = fill_and_audit(b, loop)
    assert report.ok and len(d.faces) == 2


def test_json_export(c5_z2):
    p = c5_z2
    b = build_ball(p, 1)
    d = fill_loop(b, union_boundary_loop(b, [identity(p)]))
    doc = diagram_to_json_dict(d)
    assert doc["total_curvature"] == 8
    assert len(doc["faces"]) == 1
    assert all("image" in v for v in doc["vertices"])
