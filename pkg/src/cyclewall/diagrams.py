"""Disc diagrams over the polygonal complex with exact integer curvature.

A disc diagram is a finite contractible planar complex together with a map
sending its faces to polygons of the complex.  Curvature is measured in
integer quarter-turn units (a right angle is 2 units, a full turn 8):

* every corner of every face carries angle 2,
* a vertex contributes ``8 - 4*chi(link) - 2*(corners at the vertex)``,
* a face with ``k`` sides contributes ``8 - 2*k``,

so the total over any contractible diagram is exactly 8.  The convention is
locked by two reference diagrams (one polygon alone; two polygons sharing an
edge) before any audit runs.

:func:`fill_loop` builds a reduced diagram for a closed edge path by a
deterministic depth-first search over polygon gluings, cancelling spurs as
they appear, and refuses with :class:`FillError` rather than return a
diagram it cannot verify.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .davis import ComplexBall, ComplexVertex
from .errors import FillError, ValidationError
from .reports import Report
from .words import GroupElement, format_word


# -- the planar complex ---------------------------------------------------------


@dataclass
class DiscDiagram:
    """A contractible planar complex mapped into the polygonal complex.

    ``faces`` are cycles of local vertex ids; ``images`` sends local ids to
    complex vertices; ``face_polygons`` sends face indices to polygon
    representatives (None for abstract diagrams used in convention locks).
    """

    vertices: list[int]
    edges: list[frozenset[int]]
    faces: list[tuple[int, ...]]
    boundary: tuple[int, ...]
    images: dict[int, ComplexVertex] = field(default_factory=dict)
    face_polygons: list[Optional[GroupElement]] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        vs = set(self.vertices)
        if len(self.vertices) != len(vs):
            raise ValidationError("duplicate vertex ids")
        es = set(self.edges)
        if len(self.edges) != len(es):
            raise ValidationError("duplicate edges")
        for e in es:
            if len(e) != 2 or not e <= vs:
                raise ValidationError(f"bad edge {sorted(e)}")
        for f in self.faces:
            if len(set(f)) != len(f) or len(f) < 3:
                raise ValidationError("face boundary is not an embedded cycle")
            for a, b in zip(f, f[1:] + f[:1]):
                if frozenset({a, b}) not in es:
                    raise ValidationError(f"face uses a missing edge ({a},{b})")
        if self.face_polygons and len(self.face_polygons) != len(self.faces):
            raise ValidationError("one polygon per face is required")
        # connected
        if vs:
            adj = {v: set() for v in vs}
            for a, b in map(sorted, es):
                adj[a].add(b)
                adj[b].add(a)
            seen = {self.vertices[0]}
            todo = [self.vertices[0]]
            while todo:
                for w in adj[todo.pop()]:
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            if seen != vs:
                raise ValidationError("diagram is not connected")
        # contractible: V - E + F = 1
        if len(vs) - len(es) + len(self.faces) != 1:
            raise ValidationError("diagram is not contractible (V - E + F != 1)")

    # -- curvature -------------------------------------------------------------

    def corner_count(self, v: int) -> int:
        return sum(f.count(v) for f in self.faces)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def vertex_curvature(self, v: int) -> int:
        chi_link = self.degree(v) - self.corner_count(v)
        return 8 - 4 * chi_link - 2 * self.corner_count(v)

    def face_curvature(self, f: int) -> int:
        return 8 - 2 * len(self.faces[f])

    def total_curvature(self) -> int:
        return (sum(self.vertex_curvature(v) for v in self.vertices)
                + sum(self.face_curvature(i) for i in range(len(self.faces))))

    def is_reduced(self) -> bool:
        """No two faces sharing an edge map to the same polygon."""
        if not self.face_polygons:
            return True
        by_edge: dict[frozenset[int], list[int]] = {}
        for i, f in enumerate(self.faces):
            for a, b in zip(f, f[1:] + f[:1]):
                by_edge.setdefault(frozenset({a, b}), []).append(i)
        for owners in by_edge.values():
            if len(owners) == 2:
                if self.face_polygons[owners[0]] == self.face_polygons[owners[1]]:
                    return False
        return True


def gauss_bonnet_check(d: DiscDiagram, instance: str = "") -> Report:
    report = Report()
    total = d.total_curvature()
    report.add("diagrams.gauss-bonnet-sum-is-eight",
               instance or f"V={len(d.vertices)} F={len(d.faces)}",
               total == 8, None if total == 8 else {"total": total})
    return report


# -- convention lock -------------------------------------------------------------


def single_polygon_diagram(n: int) -> DiscDiagram:
    verts = list(range(n))
    edges = [frozenset({i, (i + 1) % n}) for i in range(n)]
    return DiscDiagram(verts, edges, [tuple(range(n))], tuple(range(n)))


def two_polygon_diagram(n: int) -> DiscDiagram:
    # faces [0..n-1] and [0, n-1, n, .., 2n-3] share the edge {0, n-1}
    verts = list(range(2 * n - 2))
    f1 = tuple(range(n))
    f2 = (0,) + tuple(range(2 * n - 3, n - 2, -1))
    edges = sorted({frozenset({a, b})
                    for f in (f1, f2) for a, b in zip(f, f[1:] + f[:1])})
    boundary = tuple(range(n - 1)) + tuple(range(n - 1, 2 * n - 2))
    return DiscDiagram(verts, edges, [f1, f2], boundary)


def convention_lock(n: int = 5) -> Report:
    """Pin the curvature constants on two reference diagrams.

    Must pass before any curvature audit is trusted; the audits call it
    themselves.
    """
    report = Report()
    one = single_polygon_diagram(n)
    report.add("diagrams.convention-lock-single-polygon", f"n={n}",
               one.total_curvature() == 8
               and all(one.vertex_curvature(v) == 2 for v in one.vertices)
               and one.face_curvature(0) == 8 - 2 * n)
    two = two_polygon_diagram(n)
    shared = [v for v in two.vertices if two.corner_count(v) == 2]
    report.add("diagrams.convention-lock-shared-edge", f"n={n}",
               two.total_curvature() == 8
               and sorted(shared) == [0, n - 1]
               and all(two.vertex_curvature(v) == 0 for v in shared))
    return report


# -- filling loops -----------------------------------------------------------------


def _cancel_spurs(loop: list, creators: list) -> list[tuple]:
    """Remove backtracks (x, y, x) in place; return fold records."""
    folds = []
    changed = True
    while changed and len(loop) > 2:
        changed = False
        L = len(loop)
        for j in range(L):
            a, b = loop[j], loop[(j + 1) % L]
            c = loop[(j + 2) % L]
            if a == c and L > 2:
                folds.append((a, b))
                for idx in sorted(((j + 1) % L, (j + 2) % L), reverse=True):
                    del loop[idx]
                    del creators[idx]
                changed = True
                break
    if len(loop) == 2 and loop[0] != loop[1]:
        # a pure backtrack over one edge
        folds.append((loop[0], loop[1]))
        del loop[1]
        del creators[1]
    return folds


def _match_polygon(cycle: Sequence[ComplexVertex], segment: Sequence[ComplexVertex]):
    """Longest run of the polygon cycle equal to the segment, either direction.

    Returns (k, completion) where the first k edges of the segment are covered
    and ``completion`` is the polygon's remaining corner path from segment[k]
    back to segment[0] (exclusive of both endpoints).
    """
    n = len(cycle)
    best = None
    for direction in (1, -1):
        cyc = list(cycle) if direction == 1 else list(reversed(cycle))
        for start in range(n):
            if cyc[start] != segment[0]:
                continue
            k = 0
            while k < min(len(segment) - 1, n - 1) and \
                    cyc[(start + k + 1) % n] == segment[k + 1]:
                k += 1
            if k == 0:
                continue
            completion = [cyc[(start + j) % n] for j in range(k + 1, n)]
            if best is None or k > best[0]:
                best = (k, completion)
    return best


def _loop_state(loop: list, creators: list):
    """Rotation-minimal canonical form for memoisation."""
    if not loop:
        return ()
    pairs = [(v.key_string(), format_word(c) if c is not None else None)
             for v, c in zip(loop, creators)]
    L = len(pairs)
    return min(tuple(pairs[(i + j) % L] for j in range(L)) for i in range(L))


def fill_loop(b: ComplexBall, loop: Sequence[ComplexVertex],
              max_faces: int = 24) -> DiscDiagram:
    """Build a reduced disc diagram bounded by the closed edge path ``loop``.

    The search glues one polygon at a time along the longest matching run of
    the current boundary, never glues a polygon back onto an edge it just
    created (which keeps the result reduced), cancels spurs, and backtracks.
    Raises :class:`FillError` when no diagram exists within ``max_faces``.
    """
    loop = list(loop)
    if len(loop) < 1:
        raise FillError("empty loop")
    if loop[0] == loop[-1] and len(loop) > 1:
        loop = loop[:-1]
    for v, w in zip(loop, loop[1:] + loop[:1]):
        if len(loop) > 1 and _ball_edge(b, v, w) is None:
            raise FillError(f"loop is not an edge path at {v.key_string()}")

    creators: list[Optional[GroupElement]] = [None] * len(loop)
    steps: list[tuple] = []
    seen: set = set()

    def search(loop, creators, budget) -> bool:
        base = len(steps)
        folds = _cancel_spurs(loop, creators)
        steps.extend(("fold", a, bvert) for a, bvert in folds)
        if len(loop) <= 1:
            return True
        state = _loop_state(loop, creators)
        if state in seen or budget == 0:
            del steps[base:]
            return False
        seen.add(state)

        L = len(loop)
        candidates = []
        for j in range(L):
            v, w = loop[j], loop[(j + 1) % L]
            e = _ball_edge(b, v, w)
            for rep in b.edge_polygons.get(e, ()):
                if creators[j] == rep:
                    continue   # would stack the same polygon on this edge
                segment = [loop[(j + t) % L] for t in range(L)] + [loop[j]]
                m = _match_polygon(b.polygons[rep].boundary, segment)
                if m is None:
                    continue
                k, completion = m
                if any(creators[(j + t) % L] == rep for t in range(k)):
                    continue
                candidates.append((-k, j, rep, k, completion))
        candidates.sort(key=lambda c: (c[0], c[1], c[2]))

        for _, j, rep, k, completion in candidates:
            # keep the path from loop[j+k] around to loop[j] (both endpoints),
            # then close through the polygon's remaining corners
            new_loop = [loop[(j + k + t) % L] for t in range(L - k + 1)] \
                + list(reversed(completion))
            new_creators = [creators[(j + k + t) % L] for t in range(L - k)] \
                + [rep] * (len(completion) + 1)
            mark = len(steps)
            steps.append(("glue", loop[j], rep, k,
                          [loop[(j + t) % L] for t in range(k + 1)], completion))
            if search(new_loop, new_creators, budget - 1):
                return True
            del steps[mark:]
        del steps[base:]
        return False

    original = list(loop)
    if not search(loop, creators, max_faces):
        raise FillError(
            f"no reduced filling with at most {max_faces} faces was found")
    return _rebuild(b, original, steps)


def _ball_edge(b: ComplexBall, v: ComplexVertex, w: ComplexVertex):
    for e in b.vertex_edges.get(v, ()):
        if w in e.ends:
            return e
    return None


class _Fold:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        self.parent[self.find(x)] = self.find(y)


def _rebuild(b: ComplexBall, loop: list, steps: list) -> DiscDiagram:
    """Replay the recorded gluing sequence as an explicit planar complex."""
    ids = itertools.count()
    images: dict[int, ComplexVertex] = {}

    def fresh(img):
        i = next(ids)
        images[i] = img
        return i

    boundary = [fresh(v) for v in loop]
    start_boundary = list(boundary)
    uf = _Fold()
    edges = {frozenset({a, c}) for a, c in zip(boundary, boundary[1:] + boundary[:1])
             if a != c}
    faces: list[tuple[int, ...]] = []
    face_polygons: list[GroupElement] = []

    for step in steps:
        if step[0] == "fold":
            # boundary ... x -> y -> x' ... with images (a, b, a): identify
            _, a, bimg = step
            L = len(boundary)
            for j in range(L):
                if (images[boundary[j]] == a
                        and images[boundary[(j + 1) % L]] == bimg
                        and images[boundary[(j + 2) % L]] == a):
                    uf.union(boundary[(j + 2) % L], boundary[j])
                    keep = boundary[j]
                    for idx in sorted(((j + 1) % L, (j + 2) % L), reverse=True):
                        del boundary[idx]
                    break
            else:
                raise FillError("recorded fold no longer matches the boundary")
        else:
            _, anchor_img, rep, k, segment_imgs, completion = step
            L = len(boundary)
            for j in range(L):
                if all(images[boundary[(j + t) % L]] == segment_imgs[t]
                       for t in range(k + 1)):
                    break
            else:
                raise FillError("recorded gluing no longer matches the boundary")
            seg_ids = [boundary[(j + t) % L] for t in range(k + 1)]
            new_ids = [fresh(img) for img in completion]
            cycle = seg_ids + new_ids
            for a, c in zip(cycle, cycle[1:] + cycle[:1]):
                edges.add(frozenset({a, c}))
            faces.append(tuple(cycle))
            face_polygons.append(rep)
            rest = [boundary[(j + k + t) % L] for t in range(L - k + 1)]
            boundary = rest + list(reversed(new_ids))

    # apply the folds everywhere
    def root(x):
        return uf.find(x)

    vert_ids = sorted({root(v) for v in images})
    canon_images = {root(v): images[v] for v in images}
    canon_edges = sorted({frozenset({root(a), root(c)}) for a, c in edges
                          if root(a) != root(c)},
                         key=sorted)
    canon_faces = [tuple(root(v) for v in f) for f in faces]
    canon_boundary = tuple(root(v) for v in start_boundary)

    d = DiscDiagram(vert_ids, list(canon_edges), canon_faces, canon_boundary,
                    canon_images, face_polygons)
    if not d.is_reduced():
        raise FillError("search produced a non-reduced diagram")
    return d


def fill_and_audit(b: ComplexBall, loop: Sequence[ComplexVertex],
                   max_faces: int = 24) -> tuple[DiscDiagram, Report]:
    """Fill the loop and audit the curvature identity on the result."""
    report = convention_lock(b.presentation.n)
    d = fill_loop(b, loop, max_faces)
    report.add("diagrams.filling-is-reduced", f"faces={len(d.faces)}",
               d.is_reduced())
    ok_bound = all(d.images[v] == w for v, w in zip(d.boundary, loop))
    report.add("diagrams.boundary-matches-loop", f"len={len(loop)}", ok_bound)
    report.extend(gauss_bonnet_check(d, f"faces={len(d.faces)}"))
    return d, report


def union_boundary_loop(b: ComplexBall, reps: Sequence[GroupElement]):
    """Boundary cycle of a disc-shaped union of polygons, or None if the
    union is not bounded by one simple cycle."""
    count: dict = {}
    for rep in reps:
        for e in b.polygon_edges[rep]:
            count[e] = count.get(e, 0) + 1
    border = [e for e, c in count.items() if c == 1]
    at: dict = {}
    for e in border:
        for v in e.ends:
            at.setdefault(v, []).append(e)
    if not at or any(len(es) != 2 for es in at.values()):
        return None
    start = min(at, key=lambda v: v.sort_key())
    loop, prev = [start], None
    while True:
        e = next(x for x in at[loop[-1]] if x is not prev)
        nxt = e.ends[0] if e.ends[1] == loop[-1] else e.ends[1]
        if nxt == start:
            return loop if len(loop) == len(border) else None
        loop.append(nxt)
        prev = e


def sample_loops(b: ComplexBall, seed: int, count: int, max_len: int = 12):
    """Deterministic sample of null-homotopic loops: boundaries of random
    connected polygon unions, capped at ``max_len`` edges."""
    import random as _random
    rng = _random.Random(seed)
    reps = sorted(b.polygons)
    loops = []
    attempts = 0
    while len(loops) < count and attempts < 50 * count:
        attempts += 1
        chosen = [rng.choice(reps)]
        for _ in range(rng.randrange(0, 3)):
            # grow across a shared edge to keep the union connected
            frontier = [other
                        for g in chosen for e in b.polygon_edges[g]
                        for other in b.edge_polygons[e] if other not in chosen]
            if not frontier:
                break
            chosen.append(rng.choice(sorted(frontier, key=str)))
        loop = union_boundary_loop(b, chosen)
        if loop is not None and len(loop) <= max_len:
            loops.append(loop)
    return loops


def filling_audit(b: ComplexBall, seed: int = 0, count: int = 20,
                  max_len: int = 12) -> Report:
    """Fill sampled loops and audit curvature on each result."""
    report = convention_lock(b.presentation.n)
    loops = sample_loops(b, seed, count, max_len)
    report.add("diagrams.loop-sampler-found-instances", f"loops={len(loops)}",
               bool(loops))
    for idx, loop in enumerate(loops):
        key = f"loop {idx:03d}: len={len(loop)} at={loop[0].key_string()}"
        try:
            d = fill_loop(b, loop)
        except FillError as exc:
            report.add("diagrams.gauss-bonnet-sum-is-eight", key, False,
                       {"fill_error": str(exc)})
            continue
        total = d.total_curvature()
        report.add("diagrams.gauss-bonnet-sum-is-eight", key, total == 8,
                   None if total == 8 else {"total": total})
        report.add("diagrams.filling-is-reduced", key, d.is_reduced())
    return report


def diagram_to_json_dict(d: DiscDiagram) -> dict:
    return {
        "schema": "cyclewall/1",
        "vertices": [{"id": v,
                      "image": d.images[v].key_string() if v in d.images else None,
                      "curvature": d.vertex_curvature(v)}
                     for v in d.vertices],
        "edges": [sorted(e) for e in d.edges],
        "faces": [{"cycle": list(f),
                   "polygon": format_word(d.face_polygons[i])
                   if d.face_polygons and d.face_polygons[i] is not None else None,
                   "curvature": d.face_curvature(i)}
                  for i, f in enumerate(d.faces)],
        "boundary": list(d.boundary),
        "total_curvature": d.total_curvature(),
    }
