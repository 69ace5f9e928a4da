"""Automorphisms of a cyclic product: inner-times-local normal form,
action on the complex, decomposition from generator images, and the
determining-set witness whose local fixator is trivial.

Every automorphism is stored as ``conjugation by g`` composed with a *local*
automorphism: a dihedral symmetry of the cycle that preserves vertex-group
isomorphism classes, together with one isomorphism per vertex.  The pair is
unique, so composition and inversion are done in normal form.  Arbitrary
candidate automorphisms enter only through :func:`aut_decompose`, which
reconstructs the normal form from generator images or rejects with a typed
witness.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .davis import EDGE, POLY, TRIVIAL, ComplexBall, ComplexEdge, ComplexVertex
from .errors import DecompositionError, ValidationError
from .localgroups import (
    LocalIso,
    determining_set,
    identity_iso,
    isomorphisms,
)
from .reports import Report
from .words import (
    GroupElement,
    Presentation,
    Syllable,
    coset_rep,
    cyclic_reduce,
    enumerate_ball_elements,
    format_word,
    identity,
    inv,
    mul,
    mul_all,
    reduce_word,
)


# -- cycle symmetries -----------------------------------------------------------


@dataclass(frozen=True)
class CycleSymmetry:
    """A dihedral symmetry of the cycle preserving group isomorphism classes."""

    presentation: Presentation
    perm: tuple[int, ...]

    def __post_init__(self):
        p = self.presentation
        n = p.n
        if sorted(self.perm) != list(range(n)):
            raise ValidationError("not a permutation of the cycle's vertices")
        step = (self.perm[1] - self.perm[0]) % n
        if step not in (1, n - 1) or any(
                (self.perm[(i + 1) % n] - self.perm[i]) % n != step
                for i in range(n)):
            raise ValidationError("not a rotation or reflection of the cycle")
        for i in range(n):
            if not _iso_exists(p.group(i), p.group(self.perm[i])):
                raise ValidationError(
                    f"vertex groups {i} and {self.perm[i]} are not isomorphic")

    def __call__(self, i: int) -> int:
        return self.perm[i % self.presentation.n]

    @property
    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.perm))

    def compose(self, inner: "CycleSymmetry") -> "CycleSymmetry":
        n = self.presentation.n
        return CycleSymmetry(self.presentation,
                             tuple(self.perm[inner.perm[i]] for i in range(n)))

    def inverse(self) -> "CycleSymmetry":
        out = [0] * len(self.perm)
        for i, v in enumerate(self.perm):
            out[v] = i
        return CycleSymmetry(self.presentation, tuple(out))


@lru_cache(maxsize=1024)
def _iso_exists(src, dst) -> bool:
    if src == dst:
        return True
    return bool(isomorphisms(src, dst))


def identity_symmetry(p: Presentation) -> CycleSymmetry:
    return CycleSymmetry(p, tuple(range(p.n)))


def enumerate_symmetries(p: Presentation) -> list[CycleSymmetry]:
    """All dihedral cycle symmetries compatible with the vertex groups."""
    out = []
    n = p.n
    for shift in range(n):
        for step in (1, -1):
            perm = tuple((shift + step * i) % n for i in range(n))
            try:
                out.append(CycleSymmetry(p, perm))
            except ValidationError:
                continue
    return out


# -- local automorphisms ------------------------------------------------------------


@dataclass(frozen=True)
class LocalAut:
    """A cycle symmetry with one vertex-group isomorphism per vertex."""

    sigma: CycleSymmetry
    isos: tuple[LocalIso, ...]

    def __post_init__(self):
        p = self.presentation
        if len(self.isos) != p.n:
            raise ValidationError("one isomorphism per vertex is required")
        for i, phi in enumerate(self.isos):
            if phi.source != p.group(i) or phi.target != p.group(self.sigma(i)):
                raise ValidationError(
                    f"isomorphism at vertex {i} does not follow the symmetry")

    @property
    def presentation(self) -> Presentation:
        return self.sigma.presentation

    @property
    def is_identity(self) -> bool:
        return self.sigma.is_identity and all(phi.is_identity for phi in self.isos)

    def apply_syllable(self, s: Syllable) -> Syllable:
        return Syllable(self.sigma(s.vertex), self.isos[s.vertex].apply(s.value))

    def apply(self, g: GroupElement) -> GroupElement:
        return reduce_word(self.presentation,
                           (self.apply_syllable(s) for s in g.word))

    def compose(self, inner: "LocalAut") -> "LocalAut":
        """self after inner."""
        p = self.presentation
        sigma = self.sigma.compose(inner.sigma)
        isos = tuple(self.isos[inner.sigma(i)].compose(inner.isos[i])
                     for i in range(p.n))
        return LocalAut(sigma, isos)

    def inverse(self) -> "LocalAut":
        p = self.presentation
        tau = self.sigma.inverse()
        isos = tuple(self.isos[tau(i)].inverse() for i in range(p.n))
        return LocalAut(tau, isos)


def identity_local_aut(p: Presentation) -> LocalAut:
    return LocalAut(identity_symmetry(p),
                    tuple(identity_iso(p.group(i)) for i in range(p.n)))


def enumerate_loc(p: Presentation) -> list[LocalAut]:
    """The whole local group, deterministic order."""
    out = []
    for sigma in enumerate_symmetries(p):
        per_vertex = [isomorphisms(p.group(i), p.group(sigma(i)))
                      for i in range(p.n)]
        for combo in itertools.product(*per_vertex):
            out.append(LocalAut(sigma, tuple(combo)))
    return out


# -- automorphisms in normal form ----------------------------------------------------


@dataclass(frozen=True)
class AutElement:
    """Conjugation by ``inner`` composed after the local automorphism."""

    inner: GroupElement
    local: LocalAut

    def __post_init__(self):
        if self.inner.presentation != self.local.presentation:
            raise ValidationError("inner and local parts disagree on the presentation")

    @property
    def presentation(self) -> Presentation:
        return self.inner.presentation

    @property
    def is_identity(self) -> bool:
        return self.inner.is_identity and self.local.is_identity


def aut_identity(p: Presentation) -> AutElement:
    return AutElement(identity(p), identity_local_aut(p))


def inner_aut(g: GroupElement) -> AutElement:
    return AutElement(g, identity_local_aut(g.presentation))


def local_aut(lam: LocalAut) -> AutElement:
    return AutElement(identity(lam.presentation), lam)


def aut_apply(a: AutElement, x: GroupElement) -> GroupElement:
    moved = a.local.apply(x)
    return mul(mul(a.inner, moved), inv(a.inner))


def aut_compose(a: AutElement, b: AutElement) -> AutElement:
    return AutElement(mul(a.inner, a.local.apply(b.inner)),
                      a.local.compose(b.local))


def aut_inverse(a: AutElement) -> AutElement:
    lam = a.local.inverse()
    return AutElement(lam.apply(inv(a.inner)), lam)


def aut_serialize(a: AutElement) -> dict:
    isos = []
    for phi in a.local.isos:
        if phi.mapping is None:
            isos.append({"sign": phi.sign})
        else:
            isos.append({"mapping": list(phi.mapping)})
    return {"schema": "cyclewall/1",
            "inner": format_word(a.inner),
            "sigma": list(a.local.sigma.perm),
            "isos": isos}


# -- action on complex cells ------------------------------------------------------


def _image_pair_base(sigma: CycleSymmetry, i: int) -> int:
    """Base index j with {j, j+1} the image of the consecutive pair {i, i+1}."""
    n = sigma.presentation.n
    a, b = sigma(i), sigma((i + 1) % n)
    return a if (a + 1) % n == b else b


def aut_act_vertex(a: AutElement, v: ComplexVertex) -> ComplexVertex:
    p = a.presentation
    moved = mul(a.inner, a.local.apply(v.rep))
    if v.cls == TRIVIAL:
        return ComplexVertex(TRIVIAL, None, moved)
    if v.cls == EDGE:
        j = a.local.sigma(v.index)
        return ComplexVertex(EDGE, j, coset_rep(moved, (j,)))
    j = _image_pair_base(a.local.sigma, v.index)
    return ComplexVertex(POLY, j, coset_rep(moved, (j, (j + 1) % p.n)))


def aut_act_edge(a: AutElement, e: ComplexEdge) -> ComplexEdge:
    lo, hi = aut_act_vertex(a, e.ends[0]), aut_act_vertex(a, e.ends[1])
    if lo.sort_key() > hi.sort_key():
        lo, hi = hi, lo
    if e.label is None:
        return ComplexEdge((lo, hi), None, None)
    j = a.local.sigma(e.label)
    rep = coset_rep(mul(a.inner, a.local.apply(e.rep)), (j,))
    return ComplexEdge((lo, hi), j, rep)


def loc_stabilizes_P_audit(p: Presentation, sample: Sequence[AutElement],
                           seed: int = 0) -> Report:
    """Pure-local elements fix the base polygon setwise; sampled non-trivial
    inner elements move it."""
    report = Report()
    corners = {ComplexVertex(POLY, i, identity(p)) for i in range(p.n)}

    bad = []
    for lam in sample:
        a = AutElement(identity(p), lam.local) if isinstance(lam, AutElement) else local_aut(lam)
        image = {aut_act_vertex(a, v) for v in corners}
        if image != corners:
            bad.append(aut_serialize(a))
    report.add("aut.local-fixes-base-polygon", f"sample={len(sample)}",
               not bad, bad[:3] or None)

    rng = random.Random(seed)
    ball = [g for g in enumerate_ball_elements(p, 2) if not g.is_identity]
    moved_count = 0
    fixed = []
    for _ in range(min(30, len(ball))):
        g = rng.choice(ball)
        a = inner_aut(g)
        image = {aut_act_vertex(a, v) for v in corners}
        if image != corners:
            moved_count += 1
        else:
            fixed.append(format_word(g))
    report.add("aut.nontrivial-inner-moves-base-polygon",
               f"sampled={moved_count + len(fixed)}", not fixed, fixed or None)
    return report


# -- decomposition ------------------------------------------------------------------


def generator_values(p: Presentation, i: int) -> list[int]:
    """The fixed generating list of a vertex group: all non-identity elements."""
    return list(p.group(i).nontrivial_elements())


def generator_images(a: AutElement) -> list[list[GroupElement]]:
    p = a.presentation
    return [[aut_apply(a, GroupElement(p, (Syllable(i, x),)))
             for x in generator_values(p, i)]
            for i in range(p.n)]


def _strip_two_sided(p: Presentation, w: GroupElement, left_set: frozenset[int],
                     right_set: frozenset[int]):
    """Factor w = lam * rho with supports in the given sets, greedily.

    Returns (lam, rho) or None when a middle part remains.
    """
    word = list(w.word)
    lam: list[Syllable] = []
    rho: list[Syllable] = []
    progress = True
    while word and progress:
        progress = False
        for k, s in enumerate(word):
            if s.vertex in left_set and all(
                    p.commutes(word[j].vertex, s.vertex) for j in range(k)):
                lam.append(s)
                del word[k]
                progress = True
                break
        for k in range(len(word) - 1, -1, -1):
            s = word[k]
            if s.vertex in right_set and all(
                    p.commutes(word[j].vertex, s.vertex)
                    for j in range(k + 1, len(word))):
                rho.insert(0, s)
                del word[k]
                progress = True
                break
    if word:
        return None
    return reduce_word(p, lam), reduce_word(p, rho)


def coset_intersection(c1: GroupElement, S1: frozenset[int],
                       c2: GroupElement, S2: frozenset[int]):
    """Intersect c1<G_S1> with c2<G_S2>: (rep, S1 & S2) or None if empty."""
    p = c1.presentation
    w = mul(inv(c2), c1)
    split = _strip_two_sided(p, w, S2, S1)
    if split is None:
        return None
    lam, _rho = split
    return coset_rep(mul(c2, lam), S1 & S2), S1 & S2


def _window(p: Presentation, j: int) -> frozenset[int]:
    return frozenset({(j - 1) % p.n, j, (j + 1) % p.n})


def aut_decompose(p: Presentation, images: Sequence[Sequence[GroupElement]]) -> AutElement:
    """Recover the normal form (inner g, symmetry, per-vertex isomorphisms)
    from the images of every standard generator, or reject with a witness.

    Each image must be conjugate to a single syllable; the syllable vertices
    determine the symmetry, the conjugators constrain g to one coset of a
    three-vertex parabolic per vertex, and intersecting those cosets pins g
    down uniquely.  The result is verified against all images before return.
    """
    p.require_finite()
    n = p.n
    if len(images) != n:
        raise DecompositionError("one image list per vertex is required", None)

    target = [None] * n
    conjugators = [None] * n
    for i in range(n):
        gens = generator_values(p, i)
        if len(images[i]) != len(gens):
            raise DecompositionError(
                f"vertex {i}: expected {len(gens)} generator images", None)
        for x, h in zip(gens, images[i]):
            core, conj = cyclic_reduce(h)
            if core.syllable_length != 1:
                raise DecompositionError(
                    f"image of generator {x} at vertex {i} is not conjugate "
                    "to a syllable", format_word(h))
            vertex = core.word[0].vertex
            if target[i] is None:
                target[i] = vertex
                conjugators[i] = conj
            elif target[i] != vertex:
                raise DecompositionError(
                    f"vertex {i}: generator images land in different vertex "
                    f"groups {target[i]} and {vertex}", format_word(h))

    try:
        sigma = CycleSymmetry(p, tuple(target))
    except ValidationError as exc:
        raise DecompositionError(
            f"the induced vertex map is not an admissible cycle symmetry: {exc}",
            list(target)) from None

    # g lies in conj_i * <window around sigma(i)> for every i; intersect
    z, S = conjugators[0], _window(p, sigma(0))
    for i in range(1, n):
        hit = coset_intersection(conjugators[i], _window(p, sigma(i)), z, S)
        if hit is None:
            raise DecompositionError(
                "conjugator constraints are inconsistent: no single inner "
                "element matches all vertices", format_word(conjugators[i]))
        z, S = hit
    if S:
        raise DecompositionError(
            "conjugator constraints do not pin the inner part down", sorted(S))
    g = z

    gi = inv(g)
    isos = []
    for i in range(n):
        j = sigma(i)
        src, dst = p.group(i), p.group(j)
        mapping = [0] * src.size
        for x, h in zip(generator_values(p, i), images[i]):
            moved = mul(mul(gi, h), g)
            if moved.syllable_length != 1 or moved.word[0].vertex != j:
                raise DecompositionError(
                    f"after removing the inner part, the image of generator "
                    f"{x} at vertex {i} is not a syllable at vertex {j}",
                    format_word(moved))
            mapping[x] = moved.word[0].value
        try:
            isos.append(LocalIso(src, dst, mapping=tuple(mapping)))
        except ValidationError as exc:
            raise DecompositionError(
                f"vertex {i}: generator images do not define an isomorphism: "
                f"{exc}", mapping) from None

    a = AutElement(g, LocalAut(sigma, tuple(isos)))
    for i in range(n):
        for x, h in zip(generator_values(p, i), images[i]):
            got = aut_apply(a, GroupElement(p, (Syllable(i, x),)))
            if got != h:
                raise DecompositionError(
                    f"reconstructed automorphism disagrees with the image of "
                    f"generator {x} at vertex {i}",
                    {"expected": format_word(h), "got": format_word(got)})
    return a


# -- the determining-set witness ------------------------------------------------------


def witness_details(p: Presentation) -> dict:
    """The witness element plus the data of its construction."""
    p.require_finite()
    n = p.n
    det = [[e.value for e in determining_set(p.group(i))] for i in range(n)]
    m = max((len(d) for d in det), default=0)
    if m == 0:
        return {"element": identity(p), "degenerate": True, "m": 0,
                "determining": det}
    padded = []
    for i, d in enumerate(det):
        if not d:
            # vertices whose group has no automorphisms to pin down still
            # take part so the supports interleave; use the first generator
            d = [1]
        while len(d) < m:
            d = d + [d[-1]]   # repeat the last element (arbitrary, recorded)
        padded.append(d)

    factors = []
    for j in range(m):
        for i in range(n):
            factors.append(GroupElement(
                p, (Syllable((i + 2) % n, padded[(i + 2) % n][j]),)))
            factors.append(GroupElement(p, (Syllable(i, padded[i][j]),)))
    g = mul_all(p, factors)

    word = tuple(s for f in factors for s in f.word)
    rigid = all(
        word[k].vertex != word[k + 1].vertex
        and not p.adjacent(word[k].vertex, word[k + 1].vertex)
        for k in range(len(word) - 1))
    assert rigid, "witness word has adjacent or equal consecutive supports"
    assert g.syllable_length == 2 * n * m, "witness word is not reduced verbatim"
    return {"element": g, "degenerate": False, "m": m, "determining": det,
            "vertex_sequence": [s.vertex for s in g.word]}


def acyl_witness(p: Presentation) -> GroupElement:
    return witness_details(p)["element"]


def loc_fixator(p: Presentation, g: GroupElement) -> list[LocalAut]:
    return [lam for lam in enumerate_loc(p) if lam.apply(g) == g]


def witness_fixator_check(p: Presentation, g: GroupElement) -> Report:
    """Enumerate the local group and collect the elements fixing g."""
    report = Report()
    loc = enumerate_loc(p)
    fixator = [lam for lam in loc if lam.apply(g) == g]
    trivial = len(fixator) == 1 and fixator[0].is_identity
    report.add("aut.witness-fixator-trivial",
               f"g={format_word(g) or 'e'} loc={len(loc)}", trivial,
               None if trivial else
               [aut_serialize(local_aut(lam)) for lam in fixator[:5]])
    return report


# -- axes ------------------------------------------------------------------------------


def axis_segment(b: ComplexBall, i: int, k: int) -> list[ComplexEdge]:
    """Edges of the translation axis through the central label-i edge.

    The translating element is the product of one syllable on each side of
    vertex group i; the segment is its orbit of the central edge and the
    neighbouring one, truncated to the ball.
    """
    from .davis import act_edge, x_edge   # local import to avoid cycles
    from .walls import treewall_of_edge, wall_key

    p = b.presentation
    i %= p.n
    s_prev = GroupElement(p, (Syllable((i - 1) % p.n, 1),))
    s_next = GroupElement(p, (Syllable((i + 1) % p.n, 1),))
    g_i = mul(s_prev, s_next)

    e0 = x_edge(p, identity(p), i)
    e1 = act_edge(s_next, e0)
    edges = []
    for j in range(-k, k + 1):
        power = identity(p)
        step = g_i if j >= 0 else inv(g_i)
        for _ in range(abs(j)):
            power = mul(power, step)
        for e in (act_edge(power, e0), act_edge(power, e1)):
            if b.has_edge(e) and e not in edges:
                edges.append(e)
    if not edges:
        raise ValidationError("axis leaves the ball immediately")

    key = wall_key(p, i, e0.rep)
    for e in edges:
        assert e.label == i, "axis edge with the wrong label"
        assert wall_key(p, i, e.rep) == key, "axis leaves its tree-wall"
    wall = treewall_of_edge(b, e0)
    assert all(e in wall.edges for e in edges)
    return sorted(edges)
