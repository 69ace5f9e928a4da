"""Conjugated standard subgroups, the abstract complex rebuilt from them, and
the isomorphism check against the geometric ball.

Three tiers of subgroup appear, classified by their defining vertex window:
minimal (one vertex group), medium (two consecutive), maximal (three
consecutive).  Each is encoded by its tier, base vertex, and the minimal
coset representative of its conjugator modulo the subgroup's normalizer, so
equal subgroups get equal encodings and equality is field comparison.

The abstract complex has the medium encodings of a ball's vertices as nodes,
arcs where the join of two mediums is a maximal, and faces for the induced
n-cycles.  The map (coset gH) -> (subgroup gHg^-1) is verified to be an
equivariant isomorphism on interior cells.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import networkx as nx

from .davis import POLY, ComplexBall, ComplexVertex, act_vertex, x_edge
from .errors import InconclusiveError, ValidationError
from .reports import Report
from .words import (
    GroupElement,
    ParabolicRef,
    Presentation,
    Syllable,
    coset_rep,
    enumerate_ball_elements,
    enumerate_parabolic_ball,
    format_word,
    identity,
    inv,
    mul,
    parabolic_member,
    parabolic_normalizer,
)

MINIMAL = "minimal"
MEDIUM = "medium"
MAXIMAL = "maximal"

_TIER_WIDTH = {MINIMAL: 1, MEDIUM: 2, MAXIMAL: 3}

DEFAULT_JOIN_DEPTH = 4
ESCALATED_JOIN_DEPTH = 6


@lru_cache(maxsize=64)
def _ball(p: Presentation, L: int) -> tuple[GroupElement, ...]:
    return tuple(enumerate_ball_elements(p, L))


@dataclass(frozen=True)
class CSubgroup:
    """A conjugate of a 1-, 2- or 3-vertex consecutive standard subgroup."""

    tier: str
    base: int
    conjugator: GroupElement

    def __post_init__(self):
        if self.tier not in _TIER_WIDTH:
            raise ValidationError(f"unknown tier {self.tier!r}")
        p = self.conjugator.presentation
        object.__setattr__(self, "base", self.base % p.n)
        canon = coset_rep(self.conjugator,
                          parabolic_normalizer(p, self.defining_set()))
        if canon != self.conjugator:
            object.__setattr__(self, "conjugator", canon)

    @property
    def presentation(self) -> Presentation:
        return self.conjugator.presentation

    def defining_set(self) -> frozenset[int]:
        n = self.presentation.n
        i = self.base
        if self.tier == MINIMAL:
            return frozenset({i})
        if self.tier == MEDIUM:
            return frozenset({i, (i + 1) % n})
        return frozenset({(i - 1) % n, i, (i + 1) % n})

    def parabolic(self) -> ParabolicRef:
        return ParabolicRef(self.defining_set(), self.conjugator)

    def member(self, g: GroupElement) -> bool:
        return parabolic_member(g, self.parabolic())

    def key_string(self) -> str:
        return f"{self.tier}|{self.base}|{format_word(self.conjugator)}"

    def conjugated(self, g: GroupElement) -> "CSubgroup":
        """The subgroup g * self * g^-1."""
        return CSubgroup(self.tier, self.base, mul(g, self.conjugator))

    def sort_key(self):
        return (_TIER_WIDTH[self.tier], self.base, self.conjugator)


def csubgroup_equal(a: CSubgroup, b: CSubgroup) -> bool:
    return (a.tier, a.base, a.conjugator) == (b.tier, b.base, b.conjugator)


def medium_of_vertex(v: ComplexVertex) -> CSubgroup:
    """The stabilizer encoding of an X-vertex: its coset rep conjugates the
    two-vertex subgroup at the vertex's index."""
    assert v.cls == POLY
    return CSubgroup(MEDIUM, v.index, v.rep)


def vertex_of_medium(h: CSubgroup) -> ComplexVertex:
    assert h.tier == MEDIUM
    return ComplexVertex(POLY, h.base, h.conjugator)


def containing_maximals(h: CSubgroup) -> list[CSubgroup]:
    """The exactly two maximal-tier subgroups containing a medium one."""
    if h.tier != MEDIUM:
        raise ValidationError("only medium subgroups have canonical maximals here")
    i = h.base
    return [CSubgroup(MAXIMAL, i, h.conjugator),
            CSubgroup(MAXIMAL, (i + 1) % h.presentation.n, h.conjugator)]


# -- the join decision ---------------------------------------------------------


def _edge_cosets(h: CSubgroup) -> dict[int, set[GroupElement]]:
    """Edge cosets of the X-vertex encoded by a medium subgroup, by label."""
    p = h.presentation
    i, j = h.base, (h.base + 1) % p.n
    c = h.conjugator
    out = {i: set(), j: set()}
    for b in p.group(j).elements():
        shift = mul(c, GroupElement(p, (Syllable(j, b),) if b else ()))
        out[i].add(coset_rep(shift, (i,)))
    for a in p.group(i).elements():
        shift = mul(c, GroupElement(p, (Syllable(i, a),) if a else ()))
        out[j].add(coset_rep(shift, (j,)))
    return out


def shared_edge(h1: CSubgroup, h2: CSubgroup) -> Optional[tuple[int, GroupElement]]:
    """(label, edge coset rep) of an edge joining the two encoded vertices."""
    e1, e2 = _edge_cosets(h1), _edge_cosets(h2)
    for label in sorted(set(e1) & set(e2)):
        common = e1[label] & e2[label]
        if common:
            assert len(common) == 1
            return label, next(iter(common))
    return None


def _pairwise_closure(p: Presentation, gens: set[GroupElement], L: int) -> set[GroupElement]:
    """Close under pairwise products, discarding anything longer than L."""
    out = {g for g in gens if g.syllable_length <= L}
    out.add(identity(p))
    frontier = set(out)
    while frontier:
        new = set()
        known = list(out)
        for a in frontier:
            for s in known:
                for h in (mul(a, s), mul(s, a)):
                    if h.syllable_length <= L and h not in out and h not in new:
                        new.add(h)
        out |= new
        frontier = new
    return out


_HARVEST_DEPTH = 3


def _bounded_closure(p: Presentation, gens: set[GroupElement], L: int) -> set[GroupElement]:
    """Bounded subgroup closure at syllable length L.

    Phase one closes pairwise at a small depth so that short derived elements
    — e.g. a syllable recovered from a conjugated generator by cancellation —
    become available as factors; without them, targets reachable only through
    such elements are missed at the length cap.  Phase two is the cheap
    generator-wise sweep with the enriched generating set.
    """
    enriched = _pairwise_closure(p, gens, min(L, _HARVEST_DEPTH)) | gens
    out = {g for g in enriched if g.syllable_length <= L}
    out.add(identity(p))
    gen_list = sorted(g for g in enriched if not g.is_identity)
    frontier = set(out)
    while frontier:
        new = set()
        for a in frontier:
            for s in gen_list:
                h = mul(a, s)
                if h.syllable_length <= L and h not in out and h not in new:
                    new.add(h)
        out |= new
        frontier = new
    return out


@lru_cache(maxsize=4096)
def _subgroup_truncation(h: CSubgroup, depth: int) -> frozenset[GroupElement]:
    """All elements of the conjugated standard subgroup with length <= depth."""
    p = h.presentation
    c, ci = h.conjugator, inv(h.conjugator)
    inner_radius = depth + 2 * c.syllable_length
    out = set()
    for u in enumerate_parabolic_ball(p, h.defining_set(), inner_radius):
        x = mul(mul(c, u), ci)
        if x.syllable_length <= depth:
            out.add(x)
    return frozenset(out)


def _generator_conjugates(h: CSubgroup) -> set[GroupElement]:
    p = h.presentation
    c, ci = h.conjugator, inv(h.conjugator)
    gens = set()
    for v in h.defining_set():
        for x in p.group(v).nontrivial_elements():
            gens.add(mul(mul(c, GroupElement(p, (Syllable(v, x),))), ci))
    return gens


def join_is_cmaximal(h1: CSubgroup, h2: CSubgroup,
                     L: int = DEFAULT_JOIN_DEPTH) -> tuple[bool, Optional[CSubgroup]]:
    """Decide whether the subgroup generated by two mediums is a maximal.

    The algebraic route closes conjugated generators under products up to
    syllable length L and compares against the truncations of the (at most
    one) maximal containing both.  The geometric route tests whether the
    encoded vertices share an edge.  The verdicts are cross-checked; an
    unresolvable disagreement raises instead of guessing.
    """
    if h1.tier != MEDIUM or h2.tier != MEDIUM:
        raise ValidationError("the join rule applies to medium subgroups")
    p = h1.presentation
    p.require_finite()
    if csubgroup_equal(h1, h2):
        return False, None
    if h2.sort_key() < h1.sort_key():
        h1, h2 = h2, h1

    # translate so h1 is standard: keeps closure element lengths small and
    # lets geometrically distinct but congruent pairs share one computation
    t = inv(h1.conjugator)
    ok, candidate = _join_standard(h1.conjugated(t), h2.conjugated(t), L)
    if ok:
        return True, candidate.conjugated(h1.conjugator)
    return False, None


@lru_cache(maxsize=65536)
def _join_standard(a1: CSubgroup, a2: CSubgroup,
                   L: int) -> tuple[bool, Optional[CSubgroup]]:
    p = a1.presentation
    shared = [m1 for m1 in containing_maximals(a1)
              if any(csubgroup_equal(m1, m2) for m2 in containing_maximals(a2))]
    geo = shared_edge(a1, a2)

    if not shared:
        if geo is not None:
            raise InconclusiveError(
                "vertices share an edge but no common maximal exists")
        return False, None
    candidate = min(shared, key=lambda s: s.sort_key())

    gens = _generator_conjugates(a1) | _generator_conjugates(a2)
    for depth in (L, ESCALATED_JOIN_DEPTH) if L < ESCALATED_JOIN_DEPTH else (L,):
        closure = _bounded_closure(p, gens, depth)
        if not all(candidate.member(g) for g in closure):
            raise InconclusiveError(
                "closure escapes the only shared maximal candidate")
        target = _subgroup_truncation(candidate, depth)
        algebraic = closure >= target
        geometric = geo is not None
        if algebraic == geometric:
            if not algebraic:
                return False, None
            return True, candidate
    raise InconclusiveError(
        f"join of {a1.key_string()} and {a2.key_string()} undecided at depth "
        f"{ESCALATED_JOIN_DEPTH}: geometric={geo is not None}")


# -- the abstract complex -----------------------------------------------------------


@dataclass
class ScriptXBall:
    presentation: Presentation
    nodes: list[CSubgroup] = field(default_factory=list)
    arcs: dict[frozenset, CSubgroup] = field(default_factory=dict)
    cycles: list[tuple[CSubgroup, ...]] = field(default_factory=list)
    interior: set[CSubgroup] = field(default_factory=set)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        for pair in self.arcs:
            g.add_edge(*tuple(pair))
        return g


def _induced_n_cycles(g: nx.Graph, n: int) -> list[tuple]:
    """All induced cycles of length exactly n, each in canonical rotation."""
    out = set()
    nodes = sorted(g.nodes, key=lambda x: x.sort_key() if hasattr(x, "sort_key")
                   else x)
    index = {v: k for k, v in enumerate(nodes)}

    def extend(path: list):
        if len(path) == n:
            if g.has_edge(path[-1], path[0]):
                key = tuple(path) if index[path[1]] < index[path[-1]] \
                    else (path[0],) + tuple(reversed(path[1:]))
                out.add(key)
            return
        for w in sorted(g.neighbors(path[-1]), key=lambda x: index[x]):
            if index[w] <= index[path[0]] or w in path:
                continue
            # induced: w may touch only its predecessor among path vertices,
            # plus the start vertex when w closes the cycle
            closing = len(path) == n - 1
            if any(g.has_edge(w, u) for u in path[:-1]
                   if not (closing and u == path[0])):
                continue
            extend(path + [w])

    for start in nodes:
        extend([start])
    return sorted(out, key=lambda c: [index[v] for v in c])


def build_script_X_ball(b: ComplexBall, L: int = DEFAULT_JOIN_DEPTH) -> ScriptXBall:
    """Rebuild the ball's 1-skeleton (plus filled n-cycles) from subgroup data."""
    p = b.presentation
    sx = ScriptXBall(presentation=p)
    encode = {}
    for v in b.vertices:
        h = medium_of_vertex(v)
        encode[v] = h
        sx.nodes.append(h)
        if v in b.interior_vertices:
            sx.interior.add(h)
    if len(set(sx.nodes)) != len(sx.nodes):
        raise ValidationError("subgroup encodings collide: ball is inconsistent")

    # hash-join on shared maximal candidates: only such pairs can join
    buckets: dict[tuple, list[CSubgroup]] = {}
    for h in sx.nodes:
        for m in containing_maximals(h):
            buckets.setdefault((m.base, m.conjugator), []).append(h)
    seen = set()
    for bucket in buckets.values():
        for h1, h2 in itertools.combinations(sorted(bucket, key=lambda h: h.sort_key()), 2):
            pair = frozenset((h1, h2))
            if pair in seen:
                continue
            seen.add(pair)
            ok, candidate = join_is_cmaximal(h1, h2, L)
            if ok:
                sx.arcs[pair] = candidate

    sx.cycles = _induced_n_cycles(sx.graph(), p.n)
    return sx


def script_x_to_json(sx: ScriptXBall) -> str:
    doc = {
        "schema": "cyclewall/1",
        "form": "abstract",
        "n": sx.presentation.n,
        "nodes": [{"key": h.key_string(),
                   "interior": h in sx.interior} for h in sorted(
                       sx.nodes, key=lambda h: h.sort_key())],
        "arcs": sorted(
            ({"ends": sorted(h.key_string() for h in pair),
              "maximal": m.key_string()}
             for pair, m in sx.arcs.items()),
            key=lambda d: (d["ends"], d["maximal"])),
        "cycles": sorted([h.key_string() for h in c] for c in sx.cycles),
    }
    return json.dumps(doc, indent=2, sort_keys=True)


# -- isomorphism and cycle audits -----------------------------------------------------


def _interior_skeleton(b: ComplexBall) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(v for v in b.vertices if v in b.interior_vertices)
    for e in b.edges:
        u, w = e.ends
        if u in b.interior_vertices and w in b.interior_vertices:
            g.add_edge(u, w)
    return g


def phi_iso_check(b: ComplexBall, seed: int = 0, samples: int = 50,
                  L: int = DEFAULT_JOIN_DEPTH) -> Report:
    """The coset-to-conjugate map is an equivariant isomorphism on interior cells."""
    report = Report()
    p = b.presentation
    sx = build_script_X_ball(b, L)
    encode = {v: medium_of_vertex(v) for v in b.vertices}

    report.add("phi.injective-on-vertices", f"vertices={len(b.vertices)}",
               len(set(encode.values())) == len(encode))
    report.add("phi.surjective-onto-nodes", f"nodes={len(sx.nodes)}",
               set(encode.values()) == set(sx.nodes))

    skel = _interior_skeleton(b)
    sxg = sx.graph()
    bad = []
    pairs = 0
    interior = sorted(skel.nodes)
    for u, w in itertools.combinations(interior, 2):
        pairs += 1
        x_adj = skel.has_edge(u, w)
        sx_adj = sxg.has_edge(encode[u], encode[w])
        if x_adj != sx_adj:
            bad.append((u.key_string(), w.key_string(), x_adj, sx_adj))
    report.add("phi.edges-preserved-both-ways", f"interior-pairs={pairs}",
               not bad, bad[:10] or None)

    # interior polygons map onto induced-cycle faces
    cycle_sets = {frozenset(c) for c in sx.cycles}
    bad_faces = []
    interior_polys = 0
    for g, poly in b.polygons.items():
        if all(v in b.interior_vertices for v in poly.boundary):
            interior_polys += 1
            image = frozenset(encode[v] for v in poly.boundary)
            if image not in cycle_sets:
                bad_faces.append(format_word(g))
    report.add("phi.polygons-map-to-cycles", f"interior-polygons={interior_polys}",
               not bad_faces, bad_faces or None)

    rng = random.Random(seed)
    gens = list(_ball(p, 2))
    bad_eq = []
    for _ in range(samples):
        g = rng.choice(gens)
        v = rng.choice(b.vertices)
        lhs = medium_of_vertex(act_vertex(g, v))
        rhs = encode[v].conjugated(g)
        if not csubgroup_equal(lhs, rhs):
            bad_eq.append((format_word(g), v.key_string()))
    report.add("phi.equivariance-on-samples", f"samples={samples} seed={seed}",
               not bad_eq, bad_eq or None)
    return report


def induced_cycle_audit(b: ComplexBall) -> Report:
    """Every induced cycle of length n through interior vertices bounds a polygon."""
    report = Report()
    p = b.presentation
    skel = _interior_skeleton(b)
    cycles = _induced_n_cycles(skel, p.n)
    poly_boundaries = {frozenset(poly.boundary) for poly in b.polygons.values()}
    bad = [c for c in cycles if frozenset(c) not in poly_boundaries]
    report.add("cycles.induced-n-cycles-bound-polygons",
               f"radius={b.radius} cycles={len(cycles)}",
               not bad,
               [[v.key_string() for v in c] for c in bad] or None)
    return report


def join_agreement_audit(b: ComplexBall, L: int = DEFAULT_JOIN_DEPTH) -> Report:
    """Algebraic join verdicts match geometric adjacency on interior pairs."""
    report = Report()
    skel = _interior_skeleton(b)
    interior = sorted(skel.nodes)
    bad = []
    inconclusive = []
    pairs = 0
    for u, w in itertools.combinations(interior, 2):
        pairs += 1
        try:
            ok, candidate = join_is_cmaximal(medium_of_vertex(u),
                                             medium_of_vertex(w), L)
        except InconclusiveError as exc:
            inconclusive.append((u.key_string(), w.key_string(), str(exc)))
            continue
        if ok != skel.has_edge(u, w):
            bad.append((u.key_string(), w.key_string(), ok))
    report.add("joins.agree-with-adjacency", f"pairs={pairs} L={L}",
               not bad, bad or None)
    if inconclusive:
        report.add_inconclusive("joins.agree-with-adjacency",
                                f"undecided={len(inconclusive)}", inconclusive)
    return report
