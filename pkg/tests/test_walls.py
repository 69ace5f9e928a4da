import itertools

import pytest

from cyclewall.davis import act_edge, build_ball, subdivide, x_edge
from cyclewall.errors import ValidationError
from cyclewall.walls import (
    adjacency_criterion_audit,
    classify_pair,
    crossing_graph,
    crossing_graph_to_dot,
    delta,
    hyperplane_classes,
    hyperplane_treewall_audit,
    min_set,
    min_set_audit,
    no_triple_crossing_audit,
    pair_stabilizer_truncated,
    tree_property_audit,
    treewall_of_edge,
    vertex_stabilizer_criterion_audit,
    wall_fixator_audit,
    wall_fixator_truncated,
    wall_key,
    wall_no_shared_polygon_audit,
    wall_stabilizer_audit,
    wall_stabilizer_truncated,
    walls_of_ball,
)
from cyclewall.words import (
    enumerate_ball_elements,
    format_word,
    identity,
    mul,
    parse_word,
)


def central_walls(b):
    return {w.label: w for w in walls_of_ball(b) if w.key_rep.is_identity}


# -- wall construction --------------------------------------------------------


def test_wall_of_lone_polygon_is_single_edge(c5_z2):
    b = build_ball(c5_z2, 0)
    e = x_edge(c5_z2, identity(c5_z2), 1)
    w = treewall_of_edge(b, e)
    assert w.edges == frozenset({e})
    assert w.label == 1


def test_wall_endpoint_degrees_match_neighbour_group_orders(c5_mixed):
    p = c5_mixed
    b = build_ball(p, 2)
    w = central_walls(b)[1]
    # at a vertex of classes (0,1) the wall branches |G_0| ways, at (1,2) |G_2| ways
    for v in w.vertices():
        if v not in b.interior_vertices:
            continue
        deg = sum(1 for e in w.edges if v in e.ends)
        other = v.index if v.index != 1 else (v.index + 1) % 5
        assert deg == p.group(other).size


def test_wall_key_constant_over_edges(c5_mixed):
    p = c5_mixed
    b = build_ball(p, 2)
    for w in walls_of_ball(b):
        for e in w.edges:
            assert wall_key(p, w.label, e.rep) == w.key_rep


def test_wall_rejects_spokes_and_square_form(c5_z2):
    b = build_ball(c5_z2, 1)
    sq = subdivide(b)
    spoke = next(e for e in sq.edges if e.label is None)
    with pytest.raises(ValidationError):
        treewall_of_edge(sq, spoke)


def test_no_two_wall_edges_share_a_polygon(c5_z2, c5_mixed):
    assert wall_no_shared_polygon_audit(build_ball(c5_z2, 2)).ok
    assert wall_no_shared_polygon_audit(build_ball(c5_mixed, 2)).ok


def test_tree_property(c5_z2, c5_mixed, c6_z2):
    assert tree_property_audit(build_ball(c5_z2, 2)).ok
    assert tree_property_audit(build_ball(c5_mixed, 2)).ok
    assert tree_property_audit(build_ball(c6_z2, 1)).ok


def test_translated_wall_is_a_wall(c5_z2):
    p = c5_z2
    b = build_ball(p, 2)
    g = parse_word(p, "v0:1")
    w = central_walls(b)[2]
    moved = {act_edge(g, e) for e in w.edges}
    in_ball = {e for e in moved if b.has_edge(e)}
    target = treewall_of_edge(b, act_edge(g, w.seed))
    assert in_ball <= target.edges


# -- crossing graph -----------------------------------------------------------


def test_crossing_graph_distances(c5_z2):
    b = build_ball(c5_z2, 2)
    cg = crossing_graph(b)
    cent = central_walls(b)
    # consecutive labels cross at a corner of the central polygon
    for i in range(5):
        d, exact = delta(cg, cent[i].key, cent[(i + 1) % 5].key)
        assert d == 1 and exact
    # skip-one labels are at distance two
    d, _ = delta(cg, cent[1].key, cent[3].key)
    assert d == 2


def test_crossing_walls_share_exactly_one_vertex(c5_mixed):
    b = build_ball(c5_mixed, 2)
    cg = crossing_graph(b)
    for k1, k2 in cg.edges:
        w1, w2 = cg.nodes[k1]["wall"], cg.nodes[k2]["wall"]
        assert len(w1.vertices() & w2.vertices()) == 1


def test_no_triple_crossing(c5_z2, c5_mixed):
    assert no_triple_crossing_audit(crossing_graph(build_ball(c5_z2, 2))).ok
    assert no_triple_crossing_audit(crossing_graph(build_ball(c5_mixed, 2))).ok


def test_crossing_graph_dot_export(c5_z2):
    cg = crossing_graph(build_ball(c5_z2, 1))
    dot = crossing_graph_to_dot(cg)
    assert dot.startswith("graph crossings {")
    assert dot.count("--") == cg.number_of_edges()


# -- truncated stabilizers ------------------------------------------------------


def test_fixator_of_central_wall_is_vertex_group(c5_mixed):
    p = c5_mixed
    b = build_ball(p, 2)
    w = central_walls(b)[1]
    fix = wall_fixator_truncated(b, w, 2)
    expect = {identity(p)} | {parse_word(p, f"v1:{x}") for x in (1, 2)}
    assert fix == expect


def test_fixator_zero_radius_of_search_is_identity(c5_z2):
    b = build_ball(c5_z2, 2)
    w = central_walls(b)[0]
    assert wall_fixator_truncated(b, w, 0) == {identity(c5_z2)}


def test_fixator_of_translated_wall_is_conjugate(c5_z2):
    p = c5_z2
    b = build_ball(p, 2)
    g = parse_word(p, "v3:1")
    w = treewall_of_edge(b, act_edge(g, x_edge(p, identity(p), 1)))
    # the conjugate generator has syllable length 3, so search length 3
    fix = wall_fixator_truncated(b, w, 3)
    a1 = parse_word(p, "v1:1")
    assert fix == {identity(p), mul(mul(g, a1), g)}  # g a_1 g^-1, g an involution


def test_fixator_audit(c5_z2, c5_mixed):
    assert wall_fixator_audit(build_ball(c5_z2, 2), 2).ok
    assert wall_fixator_audit(build_ball(c5_mixed, 2), 2).ok


def test_stabilizer_of_central_wall_at_length_one(c5_mixed):
    p = c5_mixed
    b = build_ball(p, 2)
    w = central_walls(b)[2]
    got = wall_stabilizer_truncated(b, w, 1)
    expect = {identity(p)} | {
        parse_word(p, f"v{i}:{x}")
        for i in (1, 2, 3) for x in p.group(i).nontrivial_elements()}
    assert got == expect


def test_stabilizer_audit(c5_z2, c5_mixed):
    assert wall_stabilizer_audit(build_ball(c5_z2, 2), 2).ok
    assert wall_stabilizer_audit(build_ball(c5_mixed, 2), 2).ok


def test_pair_stabilizer_classification(c5_z2):
    b = build_ball(c5_z2, 2)
    cg = crossing_graph(b)
    cent = central_walls(b)
    r = classify_pair(b, cg, cent[0], cent[1], 2)
    assert r.ok and {x.check_id for x in r.results} == {
        "walls.crossing-walls-meet-once",
        "walls.pair-stabilizer-delta1-is-vertex-stabilizer"}
    r = classify_pair(b, cg, cent[1], cent[3], 2)
    assert r.ok and r.results[0].check_id == \
        "walls.pair-stabilizer-delta2-is-connecting-fixator"


def test_pair_stabilizer_delta2_is_middle_vertex_group(c5_z2):
    p = c5_z2
    b = build_ball(p, 2)
    cent = central_walls(b)
    inter = pair_stabilizer_truncated(b, cent[1], cent[3], 2)
    assert inter == {identity(p), parse_word(p, "v2:1")}


def test_far_pair_search_in_radius_three(c5_z2):
    # hunt a distance >= 3 pair; if the horizon hides one, report, don't fail
    p = c5_z2
    b = build_ball(p, 3)
    cg = crossing_graph(b)
    far = []
    for k1, k2 in itertools.combinations(sorted(cg.nodes), 2):
        d, _ = delta(cg, k1, k2)
        if d >= 3:
            far.append((k1, k2, d))
    if not far:
        pytest.skip("no distance >= 3 pair within this horizon")
    k1, k2, d = far[0]
    r = classify_pair(b, cg, cg.nodes[k1]["wall"], cg.nodes[k2]["wall"], 2)
    assert not r.failures  # pass or honestly inconclusive


# -- minimal sets -----------------------------------------------------------------


def test_min_set_of_crossing_pair_is_the_intersection(c5_z2):
    b = build_ball(c5_z2, 2)
    cent = central_walls(b)
    closest, d, diam = min_set(b, cent[0], cent[1])
    assert d == 0 and diam == 0 and len(closest) == 1
    assert closest == cent[0].vertices() & cent[1].vertices()


def test_min_set_audit(c5_z2, c5_mixed):
    b = build_ball(c5_z2, 2)
    assert min_set_audit(b, crossing_graph(b)).ok
    b = build_ball(c5_mixed, 2)
    assert min_set_audit(b, crossing_graph(b)).ok


# -- hyperplanes --------------------------------------------------------------------


def test_hyperplane_classes_partition_edges(c5_z2):
    sq = subdivide(build_ball(c5_z2, 1))
    classes = hyperplane_classes(sq)
    assert sum(len(v) for v in classes.values()) == len(sq.edges)


def test_hyperplane_treewall_audit(c5_z2, c5_mixed):
    assert hyperplane_treewall_audit(subdivide(build_ball(c5_z2, 2))).ok
    assert hyperplane_treewall_audit(subdivide(build_ball(c5_mixed, 1))).ok


# -- membership criteria ----------------------------------------------------------


def test_vertex_stabilizer_criterion(c5_z2, c5_mixed):
    r = vertex_stabilizer_criterion_audit(build_ball(c5_z2, 2), 2)
    assert r.ok and "pairs=" in r.results[0].instance
    assert vertex_stabilizer_criterion_audit(build_ball(c5_mixed, 2), 2).ok


def test_adjacency_criterion(c5_z2):
    r = adjacency_criterion_audit(build_ball(c5_z2, 2), 3)
    assert r.ok
