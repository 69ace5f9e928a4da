"""Tree-walls of the polygonal complex, their crossing graph, and
truncated stabilizer audits.

A tree-wall is a maximal connected subgraph of the 1-skeleton all of whose
edges carry the same label.  Same-label edges never share a polygon, so any
two of them meeting at a vertex make a straight angle and flood fill over
shared vertices realizes the definition.

Every wall with label i and a member edge uG_i is determined by the coset
u<G_{i-1}, G_i, G_{i+1}>; that coset's minimal representative is the wall's
algebraic key, constant across the wall's edges.  Stabilizer audits compare
the geometric action on in-ball edges against membership in the conjugated
parabolic with that key.

Truncation semantics: "g stabilizes T in the ball" means g maps every edge
of T whose image is still inside the ball into T, and at least one image is
observable.  Pair stabilizers are classified against the crossing-graph
distance; distances at the ball's horizon are reported as lower bounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from .davis import (
    ComplexBall,
    ComplexEdge,
    ComplexVertex,
    act_edge,
    subdivide,
)
from .errors import ValidationError
from .reports import Report
from .words import (
    GroupElement,
    ParabolicRef,
    Presentation,
    coset_rep,
    enumerate_ball_elements,
    format_word,
    identity,
    mul,
    parabolic_member,
)


@dataclass(frozen=True)
class TreeWall:
    label: int
    seed: ComplexEdge
    edges: frozenset[ComplexEdge]
    key_rep: GroupElement   # minimal rep of seed.rep <G_{label-1}, G_label, G_{label+1}>

    @property
    def key(self) -> tuple:
        return (self.label, self.key_rep)

    def key_string(self) -> str:
        return f"T{self.label}@{format_word(self.key_rep) or 'e'}"

    def vertices(self) -> set[ComplexVertex]:
        return {v for e in self.edges for v in e.ends}

    def window(self, p: Presentation) -> frozenset[int]:
        i = self.label
        return frozenset({(i - 1) % p.n, i, (i + 1) % p.n})

    def parabolic(self, p: Presentation) -> ParabolicRef:
        """The wall stabilizer as a conjugated standard parabolic."""
        return ParabolicRef(self.window(p), self.key_rep)

    def fixator_parabolic(self, p: Presentation) -> ParabolicRef:
        """The wall fixator: the conjugate of G_label through any member edge."""
        return ParabolicRef(frozenset({self.label}), self.seed.rep)


def wall_key(p: Presentation, label: int, edge_rep: GroupElement) -> GroupElement:
    window = {(label - 1) % p.n, label, (label + 1) % p.n}
    return coset_rep(edge_rep, window)


def treewall_of_edge(b: ComplexBall, e: ComplexEdge) -> TreeWall:
    """Flood fill over same-label edges meeting at a shared vertex."""
    if e.label is None or e.rep is None:
        raise ValidationError("tree-walls grow from labelled edges of the 1-skeleton")
    if b.form != "polygonal":
        raise ValidationError("tree-walls live in the polygonal ball")
    label = e.label
    seen = {e}
    frontier = [e]
    while frontier:
        cur = frontier.pop()
        for v in cur.ends:
            for nxt in b.vertex_edges.get(v, []):
                if nxt.label == label and nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    p = b.presentation
    key = wall_key(p, label, e.rep)
    seed = min(seen)
    return TreeWall(label, seed, frozenset(seen), key)


def walls_of_ball(b: ComplexBall) -> list[TreeWall]:
    """All tree-walls through interior edges; one wall per algebraic key.

    Components of one mathematical wall that the ball disconnects are merged
    under their shared key.
    """
    by_key: dict[tuple, TreeWall] = {}
    done: set[ComplexEdge] = set()
    for e in sorted(b.interior_edges):
        if e in done:
            continue
        w = treewall_of_edge(b, e)
        done |= w.edges
        if w.key in by_key:
            prev = by_key[w.key]
            merged = prev.edges | w.edges
            by_key[w.key] = TreeWall(w.label, min(prev.seed, w.seed),
                                     frozenset(merged), w.key_rep)
        else:
            by_key[w.key] = w
    return [by_key[k] for k in sorted(by_key, key=lambda k: (k[0], k[1]))]


# -- crossing graph -------------------------------------------------------------


def crossing_graph(b: ComplexBall) -> nx.Graph:
    """Nodes are the ball's tree-walls; arcs join walls sharing a vertex."""
    g = nx.Graph()
    walls = walls_of_ball(b)
    for w in walls:
        g.add_node(w.key, wall=w)
    for w1, w2 in itertools.combinations(walls, 2):
        common = w1.vertices() & w2.vertices()
        if common:
            g.add_edge(w1.key, w2.key, vertices=sorted(common))
    return g


def delta(cg: nx.Graph, k1: tuple, k2: tuple) -> tuple[float, bool]:
    """(distance, exact?) in the crossing graph.

    Unreachable pairs get (inf, False): within the ball only a lower bound on
    the true distance is observable.
    """
    if k1 == k2:
        return 0, True
    try:
        d = nx.shortest_path_length(cg, k1, k2)
    except nx.NetworkXNoPath:
        return float("inf"), False
    # crossings outside the ball can only shorten paths, so d >= 2 is a bound
    return d, d <= 1


def crossing_graph_to_dot(cg: nx.Graph) -> str:
    lines = ["graph crossings {"]
    for k in sorted(cg.nodes):
        w = cg.nodes[k]["wall"]
        lines.append(f'  "{w.key_string()}" [label="{w.key_string()}"];')
    for k1, k2 in sorted(cg.edges):
        w1, w2 = cg.nodes[k1]["wall"], cg.nodes[k2]["wall"]
        lines.append(f'  "{w1.key_string()}" -- "{w2.key_string()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- truncated stabilizers --------------------------------------------------------


def _stabilizes_wall(b: ComplexBall, g: GroupElement, T: TreeWall) -> Optional[bool]:
    """Guarded geometric test; None when no image of a wall edge is observable."""
    observed = False
    for e in T.edges:
        img = act_edge(g, e)
        if b.has_edge(img):
            observed = True
            if img not in T.edges:
                return False
    return True if observed else None


def wall_fixator_truncated(b: ComplexBall, T: TreeWall, L: int) -> set[GroupElement]:
    """Elements of length <= L fixing every edge of T, computed geometrically.

    Asserted equal to the truncated stabilizer of any single member edge.
    """
    p = b.presentation
    geometric = {g for g in enumerate_ball_elements(p, L)
                 if all(act_edge(g, e) == e for e in T.edges)}
    ref = T.fixator_parabolic(p)
    algebraic = {g for g in enumerate_ball_elements(p, L) if parabolic_member(g, ref)}
    assert geometric == algebraic, (
        f"wall fixator of {T.key_string()} disagrees with the edge stabilizer")
    return geometric


def wall_stabilizer_truncated(b: ComplexBall, T: TreeWall, L: int) -> set[GroupElement]:
    """Elements of length <= L mapping observable wall edges into the wall."""
    out = set()
    for g in enumerate_ball_elements(b.presentation, L):
        verdict = _stabilizes_wall(b, g, T)
        if verdict:
            out.add(g)
    return out


def wall_stabilizer_audit(b: ComplexBall, L: int) -> Report:
    """Geometric truncated wall stabilizers match the conjugated 3-vertex parabolic."""
    report = Report()
    p = b.presentation
    ball = enumerate_ball_elements(p, L)
    for T in walls_of_ball(b):
        ref = T.parabolic(p)
        algebraic = {g for g in ball if parabolic_member(g, ref)}
        geometric = wall_stabilizer_truncated(b, T, L)
        ok = geometric == algebraic
        witness = None
        if not ok:
            witness = {
                "geometric_only": sorted(format_word(g) for g in geometric - algebraic),
                "algebraic_only": sorted(format_word(g) for g in algebraic - geometric),
            }
        report.add("walls.stabilizer-is-three-vertex-parabolic",
                   f"{T.key_string()} L={L}", ok, witness)
    return report


def wall_fixator_audit(b: ComplexBall, L: int) -> Report:
    """Fixators equal single-edge stabilizers (asserted inside the op)."""
    report = Report()
    p = b.presentation
    for T in walls_of_ball(b):
        try:
            fix = wall_fixator_truncated(b, T, L)
        except AssertionError as exc:
            report.add("walls.fixator-is-edge-stabilizer",
                       f"{T.key_string()} L={L}", False, str(exc))
            continue
        # the fixator is a conjugate of G_label, so never bigger than it
        ok = len(fix) <= p.group(T.label).size
        if T.seed.rep.is_identity and L >= 1:
            # central wall: the conjugate is G_label itself and fits in the ball
            ok = ok and len(fix) == p.group(T.label).size
        report.add("walls.fixator-is-edge-stabilizer",
                   f"{T.key_string()} L={L}", ok,
                   None if ok else sorted(format_word(g) for g in fix))
    return report


def pair_stabilizer_truncated(b: ComplexBall, T1: TreeWall, T2: TreeWall,
                              L: int) -> set[GroupElement]:
    return wall_stabilizer_truncated(b, T1, L) & wall_stabilizer_truncated(b, T2, L)


def classify_pair(b: ComplexBall, cg: nx.Graph, T1: TreeWall, T2: TreeWall,
                  L: int) -> Report:
    """Compare the truncated pair stabilizer with the distance classification:

    crossing walls share a full vertex stabilizer; distance-2 walls share the
    connecting wall's fixator; further walls share only the identity (reported
    as a lower-bound statement when the ball cannot certify the distance).
    """
    report = Report()
    p = b.presentation
    d, exact = delta(cg, T1.key, T2.key)
    inter = pair_stabilizer_truncated(b, T1, T2, L)
    inst = f"{T1.key_string()}|{T2.key_string()} L={L} delta={d}"
    ball = enumerate_ball_elements(p, L)

    if d == 1:
        common = sorted(T1.vertices() & T2.vertices())
        ok = len(common) == 1
        report.add("walls.crossing-walls-meet-once", inst, ok,
                   None if ok else [v.key_string() for v in common])
        v = common[0]
        ref = ParabolicRef(frozenset({v.index, (v.index + 1) % p.n}), v.rep)
        expect = {g for g in ball if parabolic_member(g, ref)}
        report.add("walls.pair-stabilizer-delta1-is-vertex-stabilizer", inst,
                   inter == expect,
                   None if inter == expect else sorted(
                       format_word(g) for g in inter ^ expect))
    elif d == 2:
        mids = sorted(set(cg.neighbors(T1.key)) & set(cg.neighbors(T2.key)),
                      key=lambda k: (k[0], k[1]))
        expects = []
        for mid in mids:
            w = cg.nodes[mid]["wall"]
            ref = w.fixator_parabolic(p)
            expects.append({g for g in ball if parabolic_member(g, ref)})
        ok = any(inter == e for e in expects)
        report.add("walls.pair-stabilizer-delta2-is-connecting-fixator", inst, ok,
                   None if ok else sorted(format_word(g) for g in inter))
    else:
        # observed distance >= 3 only bounds the true distance from above, so a
        # non-trivial intersection is uncertain evidence, not a failure
        ok = inter == {identity(p)}
        if ok:
            report.add("walls.pair-stabilizer-far-trivial", inst, True)
        else:
            report.add_inconclusive(
                "walls.pair-stabilizer-far-trivial", inst,
                {"note": "distance is a ball-horizon bound",
                 "intersection": sorted(format_word(g) for g in inter)})
    return report


# -- minimal sets ------------------------------------------------------------------


def _square_skeleton(b_sq: ComplexBall) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(b_sq.vertices)
    for e in b_sq.edges:
        g.add_edge(e.ends[0], e.ends[1])
    return g


def min_set(b: ComplexBall, T1: TreeWall, T2: TreeWall) -> tuple[set[ComplexVertex], int, int]:
    """(vertices of T1 closest to T2, that distance, diameter of the set).

    Distances are edge counts in the square subdivision's 1-skeleton.
    """
    sq = subdivide(b) if b.form == "polygonal" else b
    g = _square_skeleton(sq)
    sources = [v for v in T2.vertices() if v in g]
    dist = nx.multi_source_dijkstra_path_length(g, sources)
    t1_vertices = [v for v in T1.vertices() if v in dist]
    if not t1_vertices:
        raise ValidationError("walls are not connected within the ball")
    d = min(dist[v] for v in t1_vertices)
    closest = {v for v in t1_vertices if dist[v] == d}
    diam = 0
    for v in closest:
        lengths = nx.single_source_shortest_path_length(g, v)
        diam = max(diam, max(lengths.get(u, 0) for u in closest))
    return closest, d, diam


def min_set_audit(b: ComplexBall, cg: nx.Graph, L_pairs: int = 40) -> Report:
    """Minimal sets have diameter at most twice the wall distance."""
    report = Report()
    walls = {k: cg.nodes[k]["wall"] for k in cg.nodes}
    pairs = list(itertools.combinations(sorted(walls), 2))[:L_pairs]
    for k1, k2 in pairs:
        T1, T2 = walls[k1], walls[k2]
        closest, d, diam = min_set(b, T1, T2)
        inst = f"{T1.key_string()}|{T2.key_string()}"
        report.add("walls.min-set-diameter", f"{inst} d={d}", diam <= 2 * d,
                   None if diam <= 2 * d else {"diameter": diam, "distance": d})
        if delta(cg, k1, k2)[0] == 1:
            report.add("walls.min-set-of-crossing-pair", inst,
                       len(closest) == 1 and d == 0 and diam == 0)
    return report


# -- hyperplanes of the square subdivision ------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def hyperplane_classes(b_sq: ComplexBall) -> dict[ComplexEdge, list[ComplexEdge]]:
    """Square-midline equivalence classes: edges opposite in a square are dual
    to the same hyperplane."""
    if b_sq.form != "square":
        raise ValidationError("hyperplanes live in the square subdivision")
    uf = _UnionFind()
    for s in b_sq.squares:
        # corners (m_i, v, m_{i+1}, c) in cyclic order; opposite edge pairs:
        m_i, v, m_next, c = s.corners
        pairs = [((m_i, v), (m_next, c)), ((v, m_next), (c, m_i))]
        for (a1, b1), (a2, b2) in pairs:
            e1 = _find_edge(s, a1, b1)
            e2 = _find_edge(s, a2, b2)
            uf.union(e1, e2)
    classes: dict[ComplexEdge, list[ComplexEdge]] = {}
    for e in b_sq.edges:
        classes.setdefault(uf.find(e), []).append(e)
    return classes


def _find_edge(s, a, b) -> ComplexEdge:
    want = {a, b}
    for e in s.edges:
        if set(e.ends) == want:
            return e
    raise AssertionError("square is missing one of its sides")


def combinatorial_hyperplanes(b_sq: ComplexBall,
                              dual_edges: list[ComplexEdge]) -> list[set[ComplexEdge]]:
    """The two side graphs of a hyperplane.

    Endpoints of dual (crossed) edges are 2-colored: the two endpoints of a
    crossed edge get different colors; corners joined by a square side
    parallel to the hyperplane get the same color.  Each combinatorial
    hyperplane is the set of parallel sides within one color.
    """
    dual = set(dual_edges)
    color: dict[ComplexVertex, int] = {}
    adj_same: dict[ComplexVertex, set[ComplexVertex]] = {}
    adj_diff: dict[ComplexVertex, set[ComplexVertex]] = {}
    parallel_edges: set[ComplexEdge] = set()
    for e in dual:
        adj_diff.setdefault(e.ends[0], set()).add(e.ends[1])
        adj_diff.setdefault(e.ends[1], set()).add(e.ends[0])
    for s in b_sq.squares:
        crossed = [e for e in s.edges if e in dual]
        if not crossed:
            continue
        assert len(crossed) == 2, "a square meets a hyperplane in opposite sides"
        for e in s.edges:
            if e not in dual:
                parallel_edges.add(e)
                adj_same.setdefault(e.ends[0], set()).add(e.ends[1])
                adj_same.setdefault(e.ends[1], set()).add(e.ends[0])
    # BFS 2-coloring
    for start in sorted(adj_diff):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for w in adj_same.get(u, ()):
                if w not in color:
                    color[w] = color[u]
                    queue.append(w)
                else:
                    assert color[w] == color[u], "hyperplane sides are inconsistent"
            for w in adj_diff.get(u, ()):
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                else:
                    assert color[w] != color[u], "hyperplane is one-sided in the ball"
    sides = [set(), set()]
    for e in parallel_edges:
        c0, c1 = color[e.ends[0]], color[e.ends[1]]
        assert c0 == c1, "a parallel side straddles the hyperplane"
        sides[c0].add(e)
    return sides


def hyperplane_treewall_audit(b_sq: ComplexBall) -> Report:
    """Exactly one side of each interior hyperplane is a constant-label
    subgraph of the unsubdivided 1-skeleton."""
    report = Report()
    classes = hyperplane_classes(b_sq)
    idx = 0
    for root in sorted(classes, key=lambda e: e.sort_key()):
        dual = classes[root]
        sides = combinatorial_hyperplanes(b_sq, dual)
        skeleton_sides = 0
        for side in sides:
            labels = {e.label for e in side}
            if None not in labels and len(labels) == 1:
                skeleton_sides += 1
        report.add("walls.hyperplane-side-is-wall", f"hyperplane#{idx}",
                   skeleton_sides == 1,
                   None if skeleton_sides == 1 else {
                       "sides_in_skeleton": skeleton_sides,
                       "side_labels": [sorted({str(e.label) for e in s}) for s in sides]})
        idx += 1
    return report


# -- structural audits ---------------------------------------------------------------


def tree_property_audit(b: ComplexBall) -> Report:
    """Interior restriction of every wall is a tree: connected, V - E = 1."""
    report = Report()
    for T in walls_of_ball(b):
        edges = [e for e in T.edges if e in b.interior_edges]
        if not edges:
            continue
        g = nx.Graph()
        for e in edges:
            g.add_edge(e.ends[0], e.ends[1])
        connected = nx.is_connected(g)
        euler = g.number_of_nodes() - g.number_of_edges()
        ok = connected and euler == 1
        report.add("walls.interior-restriction-is-tree",
                   f"{T.key_string()} edges={len(edges)}", ok,
                   None if ok else {"connected": connected, "euler": euler})
    return report


def no_triple_crossing_audit(cg: nx.Graph) -> Report:
    report = Report()
    triangles = [tri for tri in nx.enumerate_all_cliques(cg) if len(tri) == 3]
    report.add("walls.no-three-pairwise-crossing",
               f"walls={cg.number_of_nodes()}", not triangles,
               [[cg.nodes[k]['wall'].key_string() for k in t] for t in triangles] or None)
    return report


def wall_no_shared_polygon_audit(b: ComplexBall) -> Report:
    """No two edges of one wall lie in a common polygon."""
    report = Report()
    for T in walls_of_ball(b):
        bad = []
        for e1, e2 in itertools.combinations(sorted(T.edges), 2):
            common = set(b.edge_polygons[e1]) & set(b.edge_polygons[e2])
            if common:
                bad.append((e1.key_string(), e2.key_string()))
        report.add("walls.no-two-edges-share-polygon", T.key_string(), not bad,
                   bad or None)
    return report


def vertex_stabilizer_criterion_audit(b: ComplexBall, L: int = 2) -> Report:
    """stab(v) (truncated) stabilizes T exactly when v lies on T."""
    report = Report()
    p = b.presentation
    ball = enumerate_ball_elements(p, L)
    walls = walls_of_ball(b)
    bad = []
    checked = 0
    for v in sorted(b.interior_vertices):
        ref = ParabolicRef(frozenset({v.index, (v.index + 1) % p.n}), v.rep)
        stab_v = [g for g in ball if parabolic_member(g, ref)]
        for T in walls:
            verdicts = [_stabilizes_wall(b, g, T) for g in stab_v]
            if any(x is None for x in verdicts):
                continue   # truncation blind spot: skip, never guess
            checked += 1
            stabilizes = all(verdicts)
            if stabilizes != (v in T.vertices()):
                bad.append((v.key_string(), T.key_string(), stabilizes))
    report.add("walls.vertex-stabilizer-detects-membership",
               f"L={L} pairs={checked}", not bad, bad or None)
    return report


def _bounded_closure(p: Presentation, gens: set[GroupElement], L: int) -> set[GroupElement]:
    """Close under products, discarding anything longer than L."""
    out = set(g for g in gens if g.syllable_length <= L)
    out.add(identity(p))
    frontier = set(out)
    while frontier:
        new = set()
        for a in frontier:
            for s in gens:
                h = mul(a, s)
                if h.syllable_length <= L and h not in out:
                    new.add(h)
        out |= new
        frontier = new
    return out


def adjacency_criterion_audit(b: ComplexBall, L: int = 3) -> Report:
    """Two wall vertices generate the whole truncated wall stabilizer exactly
    when they are adjacent on the wall."""
    report = Report()
    p = b.presentation
    ball = enumerate_ball_elements(p, L)
    bad = []
    checked = 0
    for T in walls_of_ball(b):
        verts = sorted(v for v in T.vertices() if v in b.interior_vertices)
        if len(verts) < 2:
            continue
        ref_T = T.parabolic(p)
        stab_T = {g for g in ball if parabolic_member(g, ref_T)}
        stabs = {}
        for v in verts:
            ref = ParabolicRef(frozenset({v.index, (v.index + 1) % p.n}), v.rep)
            stabs[v] = {g for g in ball if parabolic_member(g, ref)}
        edge_pairs = {frozenset(e.ends) for e in T.edges}
        for x, y in itertools.combinations(verts, 2):
            generated = _bounded_closure(p, stabs[x] | stabs[y], L)
            saturates = generated == stab_T
            adjacent = frozenset({x, y}) in edge_pairs
            checked += 1
            if saturates != adjacent:
                bad.append((x.key_string(), y.key_string(), saturates, adjacent))
    report.add("walls.generation-detects-adjacency", f"L={L} pairs={checked}",
               not bad, bad or None)
    return report
