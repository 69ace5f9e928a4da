"""Bounded-radius construction of the polygonal complex X and its square
subdivision X', with interior marking and the local geometry audits.

Polygons have trivial stabilizer, so they biject with group elements; a ball
of radius r holds the polygons indexed by elements of syllable length <= r.
Vertices and edges are identified by canonical coset representatives:

* X-vertex      = coset g(G_i x G_{i+1}),  key (i, coset_rep(g, {i, i+1}));
* X-edge        = coset gG_i,              key (i, coset_rep(g, {i}));
* X'-center     = coset g,                 one per polygon.

A cell is interior iff every polygon of X containing it (computed
algebraically from the coset structure) is present in the ball, so audits
restricted to interior cells see exactly the infinite complex.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .errors import BoundaryCellError, ResourceLimitError, ValidationError
from .reports import Report
from .words import (
    GroupElement,
    Presentation,
    Syllable,
    coset_rep,
    enumerate_ball_elements,
    format_word,
    mul,
    reduce_word,
)

# vertex classes
TRIVIAL = "trivial"   # coset of the trivial subgroup (squares' centers)
EDGE = "edge"         # coset of G_i (edge midpoints of the subdivision)
POLY = "poly"         # coset of G_i x G_{i+1} (vertices of X)

_CLASS_ORDER = {POLY: 0, EDGE: 1, TRIVIAL: 2}


@dataclass(frozen=True)
class ComplexVertex:
    cls: str
    index: Optional[int]   # i for EDGE/POLY, None for TRIVIAL
    rep: GroupElement

    def sort_key(self):
        return (_CLASS_ORDER[self.cls], -1 if self.index is None else self.index, self.rep)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def key_string(self) -> str:
        idx = "" if self.index is None else str(self.index)
        return f"{self.cls}|{idx}|{format_word(self.rep)}"


@dataclass(frozen=True)
class ComplexEdge:
    ends: tuple[ComplexVertex, ComplexVertex]
    label: Optional[int]             # X-edge label; None for center spokes
    rep: Optional[GroupElement]      # coset rep of gG_label for labelled edges

    def sort_key(self):
        return (self.ends[0].sort_key(), self.ends[1].sort_key(),
                -1 if self.label is None else self.label)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def key_string(self) -> str:
        lbl = "" if self.label is None else str(self.label)
        return f"{lbl}|{self.ends[0].key_string()}--{self.ends[1].key_string()}"


def _edge_between(a: ComplexVertex, b: ComplexVertex, label, rep) -> ComplexEdge:
    lo, hi = (a, b) if a.sort_key() <= b.sort_key() else (b, a)
    return ComplexEdge((lo, hi), label, rep)


@dataclass(frozen=True)
class Polygon:
    rep: GroupElement
    boundary: tuple[ComplexVertex, ...]   # v_0 .. v_{n-1}, v_i = g(G_i x G_{i+1})


@dataclass(frozen=True)
class Square:
    polygon: GroupElement
    corner: int   # the polygon corner v_corner this square surrounds
    corners: tuple[ComplexVertex, ...]   # (mid e_corner, v_corner, mid e_{corner+1}, center)
    edges: tuple[ComplexEdge, ...]


@dataclass
class ComplexBall:
    presentation: Presentation
    radius: int
    form: str  # "polygonal" or "square"
    vertices: list[ComplexVertex] = field(default_factory=list)
    edges: list[ComplexEdge] = field(default_factory=list)
    polygons: dict[GroupElement, Polygon] = field(default_factory=dict)
    squares: list[Square] = field(default_factory=list)
    interior_vertices: set[ComplexVertex] = field(default_factory=set)
    interior_edges: set[ComplexEdge] = field(default_factory=set)
    vertex_edges: dict[ComplexVertex, list[ComplexEdge]] = field(default_factory=dict)
    edge_polygons: dict[ComplexEdge, list[GroupElement]] = field(default_factory=dict)
    vertex_polygons: dict[ComplexVertex, list[GroupElement]] = field(default_factory=dict)
    vertex_squares: dict[ComplexVertex, list[Square]] = field(default_factory=dict)
    edge_squares: dict[ComplexEdge, list[Square]] = field(default_factory=dict)
    polygon_edges: dict[GroupElement, list[ComplexEdge]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.presentation.n

    def has_edge(self, e: ComplexEdge) -> bool:
        return e in self.edge_polygons or e in self.edge_squares

    def has_vertex(self, v: ComplexVertex) -> bool:
        return v in self.vertex_edges

    def is_interior(self, cell) -> bool:
        if isinstance(cell, ComplexVertex):
            return cell in self.interior_vertices
        return cell in self.interior_edges

    def polygon_interior(self, rep: GroupElement) -> bool:
        return all(v in self.interior_vertices for v in self.polygons[rep].boundary)


# -- cell constructors --------------------------------------------------------


def x_vertex(p: Presentation, g: GroupElement, i: int) -> ComplexVertex:
    i %= p.n
    return ComplexVertex(POLY, i, coset_rep(g, (i, (i + 1) % p.n)))


def x_edge(p: Presentation, g: GroupElement, i: int) -> ComplexEdge:
    """Edge of X for the coset gG_i, joining g(G_{i-1} x G_i) and g(G_i x G_{i+1})."""
    i %= p.n
    rep = coset_rep(g, (i,))
    return _edge_between(x_vertex(p, rep, i - 1), x_vertex(p, rep, i), i, rep)


def act_vertex(h: GroupElement, v: ComplexVertex) -> ComplexVertex:
    p = h.presentation
    moved = mul(h, v.rep)
    if v.cls == TRIVIAL:
        return ComplexVertex(TRIVIAL, None, moved)
    if v.cls == EDGE:
        return ComplexVertex(EDGE, v.index, coset_rep(moved, (v.index,)))
    return ComplexVertex(POLY, v.index, coset_rep(moved, (v.index, (v.index + 1) % p.n)))


def act_edge(h: GroupElement, e: ComplexEdge) -> ComplexEdge:
    return _edge_between(act_vertex(h, e.ends[0]), act_vertex(h, e.ends[1]),
                         e.label,
                         None if e.rep is None else coset_rep(mul(h, e.rep), (e.label,)))


# -- construction ---------------------------------------------------------------


def _memory_budget_mb() -> Optional[int]:
    raw = os.environ.get("CYCLEWALL_MEM_MB")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"CYCLEWALL_MEM_MB must be an integer, got {raw!r}") from None


def build_ball(p: Presentation, r: int, mem_mb: Optional[int] = None) -> ComplexBall:
    """Sub-complex of X spanned by polygons g.P with syllable length(g) <= r."""
    if r < 0:
        raise ValidationError("radius must be >= 0")
    p.require_finite()
    if mem_mb is None:
        mem_mb = _memory_budget_mb()

    reps = enumerate_ball_elements(p, r)
    if mem_mb is not None:
        # crude estimate: ~2 KiB of cell data per polygon corner
        estimate_mb = len(reps) * p.n * 2048 / (1024 * 1024)
        if estimate_mb > mem_mb:
            raise ResourceLimitError(
                f"ball of radius {r} needs ~{estimate_mb:.0f} MiB, budget {mem_mb} MiB")

    ball = ComplexBall(presentation=p, radius=r, form="polygonal")
    n = p.n
    for g in reps:
        corners = tuple(x_vertex(p, g, i) for i in range(n))
        poly = Polygon(g, corners)
        ball.polygons[g] = poly
        edges = []
        for i in range(n):
            e = x_edge(p, g, i)
            edges.append(e)
            ball.edge_polygons.setdefault(e, []).append(g)
        ball.polygon_edges[g] = edges
        for v in corners:
            ball.vertex_polygons.setdefault(v, []).append(g)

    for e in ball.edge_polygons:
        for v in e.ends:
            ball.vertex_edges.setdefault(v, []).append(e)
    for v in ball.vertex_polygons:
        ball.vertex_edges.setdefault(v, [])

    ball.vertices = sorted(ball.vertex_edges)
    ball.edges = sorted(ball.edge_polygons)
    for v in ball.vertices:
        ball.vertex_edges[v].sort()
        ball.vertex_polygons[v].sort()
    for e in ball.edges:
        ball.edge_polygons[e].sort()

    _mark_interior(ball)
    return ball


def polygons_containing_vertex(p: Presentation, v: ComplexVertex) -> list[GroupElement]:
    """All polygon reps of X whose boundary passes through the X-vertex v."""
    assert v.cls == POLY
    i, j = v.index, (v.index + 1) % p.n
    out = []
    for a in p.group(i).elements():
        for b in p.group(j).elements():
            syls = [Syllable(vv, x) for vv, x in ((i, a), (j, b)) if x]
            out.append(mul(v.rep, reduce_word(p, syls)))
    return out


def polygons_containing_edge(p: Presentation, e: ComplexEdge) -> list[GroupElement]:
    assert e.label is not None and e.rep is not None
    p_ = p
    return [mul(e.rep, reduce_word(p_, [Syllable(e.label, a)] if a else []))
            for a in p_.group(e.label).elements()]


def _mark_interior(ball: ComplexBall) -> None:
    p = ball.presentation
    present = ball.polygons.keys()
    for v in ball.vertices:
        if all(g in present for g in polygons_containing_vertex(p, v)):
            ball.interior_vertices.add(v)
    for e in ball.edges:
        if all(g in present for g in polygons_containing_edge(p, e)):
            ball.interior_edges.add(e)


# -- subdivision ------------------------------------------------------------------


def subdivide(b: ComplexBall) -> ComplexBall:
    """First square subdivision X' of a polygonal ball."""
    if b.form != "polygonal":
        raise ValidationError("can only subdivide a polygonal ball")
    p = b.presentation
    n = p.n
    sq = ComplexBall(presentation=p, radius=b.radius, form="square")
    sq.polygons = b.polygons

    mid = {e: ComplexVertex(EDGE, e.label, e.rep) for e in b.edges}

    for g, poly in b.polygons.items():
        center = ComplexVertex(TRIVIAL, None, g)
        poly_edges = b.polygon_edges[g]   # e_0 .. e_{n-1}; e_i joins v_{i-1}, v_i
        for i in range(n):
            e_i, e_next = poly_edges[i], poly_edges[(i + 1) % n]
            v = poly.boundary[i]
            half1 = _edge_between(mid[e_i], v, e_i.label, e_i.rep)
            half2 = _edge_between(mid[e_next], v, e_next.label, e_next.rep)
            spoke1 = _edge_between(center, mid[e_i], None, None)
            spoke2 = _edge_between(center, mid[e_next], None, None)
            square = Square(g, i, (mid[e_i], v, mid[e_next], center),
                            (half1, half2, spoke1, spoke2))
            sq.squares.append(square)
            for c in square.corners:
                sq.vertex_squares.setdefault(c, []).append(square)
            for se in square.edges:
                sq.edge_squares.setdefault(se, []).append(square)

    for e in sq.edge_squares:
        for v in e.ends:
            sq.vertex_edges.setdefault(v, []).append(e)
    for v in sq.vertex_edges:
        sq.vertex_edges[v] = sorted(set(sq.vertex_edges[v]))
    sq.vertices = sorted(sq.vertex_edges)
    sq.edges = sorted(sq.edge_squares)

    # interiority inherited from the polygonal ball
    for v in sq.vertices:
        if v.cls == POLY:
            if v in b.interior_vertices:
                sq.interior_vertices.add(v)
        elif v.cls == EDGE:
            # locate the X-edge this midpoint subdivides
            if any(e.label == v.index and e.rep == v.rep for e in b.interior_edges):
                sq.interior_vertices.add(v)
        else:
            sq.interior_vertices.add(v)
    for e in sq.edges:
        if e.label is None:
            sq.interior_edges.add(e)   # spokes lie inside one polygon
        else:
            x = _edge_between(*[v for v in _x_edge_ends(p, e)], e.label, e.rep)
            if x in b.interior_edges:
                sq.interior_edges.add(e)
    return sq


def _x_edge_ends(p: Presentation, half_edge: ComplexEdge):
    rep, i = half_edge.rep, half_edge.label
    return (x_vertex(p, rep, i - 1), x_vertex(p, rep, i))


# -- links and audits ----------------------------------------------------------------


def vertex_link(b: ComplexBall, v: ComplexVertex) -> nx.Graph:
    """Link graph of an interior vertex.

    Nodes are the incident edges; arcs are the 2-cell corners at v, tagged
    with the polygon (or square) providing them.
    """
    if v not in b.interior_vertices:
        raise BoundaryCellError(f"vertex {v.key_string()} is not interior to the ball")
    link = nx.Graph()
    for e in b.vertex_edges[v]:
        link.add_node(e, label=e.label)
    if b.form == "polygonal":
        for g in b.vertex_polygons.get(v, []):
            poly_edges = b.polygon_edges[g]
            at_v = [e for e in poly_edges if v in e.ends]
            assert len(at_v) == 2
            link.add_edge(at_v[0], at_v[1], corner=format_word(g))
    else:
        for s in b.vertex_squares.get(v, []):
            at_v = [e for e in s.edges if v in e.ends]
            assert len(at_v) == 2
            link.add_edge(at_v[0], at_v[1], corner=f"{format_word(s.polygon)}#{s.corner}")
    return link


def graph_girth(g: nx.Graph) -> float:
    """Shortest cycle length; inf for forests. BFS per node (links are small)."""
    best = float("inf")
    for root in g.nodes:
        dist = {root: 0}
        parent = {root: None}
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def t4_audit(b: ComplexBall) -> Report:
    """Every interior X'-vertex link has girth >= 4; every polygon has n sides."""
    report = Report()
    sq = subdivide(b) if b.form == "polygonal" else b
    n = b.presentation.n
    for g, poly in b.polygons.items():
        ok = len(poly.boundary) == n and len(set(poly.boundary)) == n
        if not ok:
            report.add("davis.t4.polygon-sides", format_word(g), False,
                       witness=[v.key_string() for v in poly.boundary])
    bad = []
    for v in sorted(sq.interior_vertices):
        girth = graph_girth(vertex_link(sq, v))
        if girth < 4:
            bad.append((v.key_string(), girth))
    report.add("davis.t4.link-girth", f"radius={b.radius}", not bad, witness=bad or None)
    if all(len(p_.boundary) == n for p_ in b.polygons.values()):
        report.add("davis.t4.polygon-sides", f"radius={b.radius}", True)
    return report


def polygon_pair_audit(b: ComplexBall) -> Report:
    """No two polygons share two edges or three vertices."""
    report = Report()
    seen_pairs = set()
    bad = []
    for v, polys in b.vertex_polygons.items():
        for idx, g in enumerate(polys):
            for h in polys[idx + 1:]:
                if (g, h) in seen_pairs:
                    continue
                seen_pairs.add((g, h))
                shared_v = set(b.polygons[g].boundary) & set(b.polygons[h].boundary)
                shared_e = set(b.polygon_edges[g]) & set(b.polygon_edges[h])
                if len(shared_e) >= 2 or len(shared_v) >= 3:
                    bad.append((format_word(g), format_word(h),
                                len(shared_e), len(shared_v)))
    report.add("davis.polygon-pairs", f"radius={b.radius} pairs={len(seen_pairs)}",
               not bad, witness=bad or None)
    return report


def free_face_audit(b: ComplexBall) -> Report:
    """Every interior edge of X' lies in at least two squares."""
    report = Report()
    sq = subdivide(b) if b.form == "polygonal" else b
    bad = []
    for e in sorted(sq.interior_edges):
        if len(sq.edge_squares[e]) < 2:
            bad.append(e.key_string())
    report.add("davis.free-faces", f"radius={b.radius} edges={len(sq.interior_edges)}",
               not bad, witness=bad or None)
    return report


def links_audit(b: ComplexBall) -> Report:
    """Interior X-vertex links are complete bipartite w.r.t. the two labels."""
    report = Report()
    p = b.presentation
    bad = []
    for v in sorted(b.interior_vertices):
        link = vertex_link(b, v)
        i, j = v.index, (v.index + 1) % p.n
        side_i = [e for e in link.nodes if e.label == i]
        side_j = [e for e in link.nodes if e.label == j]
        ok = (len(side_i) + len(side_j) == link.number_of_nodes()
              and len(side_i) == p.group(j).size
              and len(side_j) == p.group(i).size
              and all(link.has_edge(a, c) for a in side_i for c in side_j)
              and not any(link.has_edge(a, c) for a in side_i for c in side_i if a != c)
              and not any(link.has_edge(a, c) for a in side_j for c in side_j if a != c))
        if not ok:
            bad.append(v.key_string())
    report.add("davis.links-complete-bipartite",
               f"radius={b.radius} vertices={len(b.interior_vertices)}",
               not bad, witness=bad or None)
    return report


# -- exports ----------------------------------------------------------------------


def ball_to_dot(b: ComplexBall) -> str:
    lines = ["graph ball {"]
    for v in b.vertices:
        interior = "true" if v in b.interior_vertices else "false"
        lines.append(f'  "{v.key_string()}" [interior={interior}];')
    for e in b.edges:
        lbl = "" if e.label is None else f' [label="{e.label}"]'
        lines.append(f'  "{e.ends[0].key_string()}" -- "{e.ends[1].key_string()}"{lbl};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def ball_to_json(b: ComplexBall) -> str:
    doc = {
        "schema": "cyclewall/1",
        "form": b.form,
        "n": b.presentation.n,
        "radius": b.radius,
        "vertices": [
            {"key": v.key_string(), "class": v.cls, "index": v.index,
             "rep": format_word(v.rep), "interior": v in b.interior_vertices}
            for v in b.vertices
        ],
        "edges": [
            {"key": e.key_string(), "label": e.label,
             "rep": None if e.rep is None else format_word(e.rep),
             "ends": [e.ends[0].key_string(), e.ends[1].key_string()],
             "interior": e in b.interior_edges}
            for e in b.edges
        ],
        "polygons": [
            {"rep": format_word(g),
             "boundary": [v.key_string() for v in poly.boundary]}
            for g, poly in sorted(b.polygons.items())
        ],
    }
    if b.form == "square":
        doc["squares"] = [
            {"polygon": format_word(s.polygon), "corner": s.corner,
             "corners": [c.key_string() for c in s.corners]}
            for s in b.squares
        ]
    return json.dumps(doc, indent=2, sort_keys=True)
