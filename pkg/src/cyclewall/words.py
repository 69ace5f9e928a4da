"""Canonical words in a cyclic product of groups.

An element is stored as its canonical reduced word: reduced in the usual
sense (no identity syllables, no mergeable same-group neighbours, not
shortenable by commuting shuffles), and lexicographically least among its
shuffle-equivalent reduced forms when comparing vertex-index sequences.
Two ``GroupElement`` values are equal iff they are equal in the group.

Vertices are 0-based residues mod n; vertices i and j commute iff they are
adjacent on the cycle, i.e. ``|i - j| = 1 (mod n)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, Optional, Sequence

from .errors import GroupMismatchError, InfiniteGroupError, ValidationError
from .localgroups import IDENTITY, LocalGroupSpec


@dataclass(frozen=True)
class Presentation:
    """A cyclic product: n >= 5 non-trivial vertex groups on the cycle C_n."""

    groups: tuple[LocalGroupSpec, ...]

    def __post_init__(self):
        if len(self.groups) < 5:
            raise ValidationError("cyclic products need at least 5 vertex groups")

    @property
    def n(self) -> int:
        return len(self.groups)

    def group(self, vertex: int) -> LocalGroupSpec:
        return self.groups[vertex % self.n]

    def adjacent(self, i: int, j: int) -> bool:
        d = (i - j) % self.n
        return d == 1 or d == self.n - 1

    def commutes(self, i: int, j: int) -> bool:
        return self.adjacent(i, j)

    @property
    def all_finite(self) -> bool:
        return all(g.is_finite for g in self.groups)

    def require_finite(self) -> None:
        if not self.all_finite:
            raise InfiniteGroupError("operation requires finite vertex groups")

    def vertices(self) -> range:
        return range(self.n)

    def syllables(self) -> Iterator["Syllable"]:
        """All generator syllables (every non-identity local element)."""
        for v in self.vertices():
            for x in self.group(v).nontrivial_elements():
                yield Syllable(v, x)


@dataclass(frozen=True, order=True)
class Syllable:
    """A non-identity element of one vertex group."""

    vertex: int
    value: int


@total_ordering
@dataclass(frozen=True)
class GroupElement:
    presentation: Presentation
    word: tuple[Syllable, ...]

    def __len__(self) -> int:
        return len(self.word)

    @property
    def syllable_length(self) -> int:
        return len(self.word)

    @property
    def is_identity(self) -> bool:
        return not self.word

    def support(self) -> frozenset[int]:
        return frozenset(s.vertex for s in self.word)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return mul(self, other)

    def __invert__(self) -> "GroupElement":
        return inv(self)

    def __lt__(self, other: "GroupElement") -> bool:
        return (len(self.word), self.word) < (len(other.word), other.word)

    def __str__(self) -> str:
        return format_word(self)

    def conjugate(self, by: "GroupElement") -> "GroupElement":
        """``by * self * by^-1``."""
        return mul(mul(by, self), inv(by))


# -- reduction and canonical form -------------------------------------------


def _push(p: Presentation, word: list[Syllable], syl: Syllable) -> None:
    """Append one syllable to a reduced word, keeping it reduced.

    Scans right to left over commuting syllables; merges with a same-vertex
    syllable if one is reachable, otherwise appends.
    """
    if syl.value == IDENTITY:
        return
    v = syl.vertex
    g = p.group(v)
    for k in range(len(word) - 1, -1, -1):
        w = word[k]
        if w.vertex == v:
            prod = g.mul(w.value, syl.value)
            if prod == IDENTITY:
                del word[k]
            else:
                word[k] = Syllable(v, prod)
            return
        if not p.commutes(w.vertex, v):
            break
    word.append(syl)


def _canonical_order(p: Presentation, word: list[Syllable]) -> tuple[Syllable, ...]:
    """Lexicographically least shuffle representative by vertex index.

    Greedy: repeatedly emit the least-vertex syllable among those that
    commute with everything before them. Two same-vertex syllables are never
    simultaneously available, so there are no ties.
    """
    remaining = list(word)
    out: list[Syllable] = []
    while remaining:
        best = None
        for k, s in enumerate(remaining):
            if all(p.commutes(t.vertex, s.vertex) for t in remaining[:k]):
                if best is None or s.vertex < remaining[best].vertex:
                    best = k
        out.append(remaining.pop(best))
    return tuple(out)


def reduce_word(p: Presentation, syllables: Iterable[Syllable]) -> GroupElement:
    """Canonical reduced form of an arbitrary syllable sequence."""
    word: list[Syllable] = []
    for s in syllables:
        p.group(s.vertex).check(s.value)
        _push(p, word, s)
    return GroupElement(p, _canonical_order(p, word))


def identity(p: Presentation) -> GroupElement:
    return GroupElement(p, ())


def from_syllable(p: Presentation, vertex: int, value: int) -> GroupElement:
    return reduce_word(p, [Syllable(vertex % p.n, value)])


def mul(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.presentation != b.presentation:
        raise GroupMismatchError("elements of different presentations")
    word = list(a.word)
    for s in b.word:
        _push(a.presentation, word, s)
    return GroupElement(a.presentation, _canonical_order(a.presentation, word))


def mul_all(p: Presentation, elements: Iterable[GroupElement]) -> GroupElement:
    acc = identity(p)
    for e in elements:
        acc = mul(acc, e)
    return acc


def inv(a: GroupElement) -> GroupElement:
    p = a.presentation
    rev = [Syllable(s.vertex, p.group(s.vertex).inv(s.value)) for s in reversed(a.word)]
    return reduce_word(p, rev)


def support(a: GroupElement) -> frozenset[int]:
    return a.support()


# -- parabolic machinery -----------------------------------------------------


def _right_strippable(p: Presentation, word: Sequence[Syllable], S: frozenset[int]) -> Optional[int]:
    """Rightmost position whose syllable has vertex in S and shuffles to the end."""
    for k in range(len(word) - 1, -1, -1):
        v = word[k].vertex
        if v in S and all(p.commutes(word[j].vertex, v) for j in range(k + 1, len(word))):
            return k
        # keep scanning: an S-syllable further left may still shuffle past
    return None


def coset_rep(g: GroupElement, S: Iterable[int]) -> GroupElement:
    """Minimal representative of the left coset ``g<G_S>``.

    Strips, right to left, every syllable with vertex in S that can be
    shuffled to the last position. ``coset_rep(g, S) == coset_rep(h, S)`` iff
    g and h lie in the same coset.
    """
    p = g.presentation
    Sf = frozenset(v % p.n for v in S)
    word = list(g.word)
    while True:
        k = _right_strippable(p, word, Sf)
        if k is None:
            break
        del word[k]
    return reduce_word(p, word)


@dataclass(frozen=True)
class ParabolicRef:
    """Conjugate of a standard parabolic: ``w <G_S> w^-1``."""

    vertices: frozenset[int]
    conjugator: GroupElement

    def __post_init__(self):
        w = coset_rep(self.conjugator, self.vertices)
        if w != self.conjugator:
            object.__setattr__(self, "conjugator", w)


def parabolic_member(g: GroupElement, ref: ParabolicRef) -> bool:
    w = ref.conjugator
    moved = mul(mul(inv(w), g), w)
    return moved.support() <= ref.vertices


def in_standard_parabolic(g: GroupElement, S: Iterable[int]) -> bool:
    return g.support() <= frozenset(v % g.presentation.n for v in S)


def parabolic_normalizer(p: Presentation, S: Iterable[int]) -> frozenset[int]:
    """Vertex set generating the normalizer of ``<G_S>``: S plus the vertices
    adjacent to every vertex of S."""
    Sf = frozenset(v % p.n for v in S)
    extra = {v for v in p.vertices() if all(p.adjacent(v, s) for s in Sf)}
    return frozenset(Sf | extra)


# -- cyclic reduction ---------------------------------------------------------


def _front_shufflable(p: Presentation, word: Sequence[Syllable]) -> list[int]:
    """Positions whose syllables can be shuffled to the front."""
    out = []
    for k, s in enumerate(word):
        if all(p.commutes(word[j].vertex, s.vertex) for j in range(k)):
            out.append(k)
    return out


def cyclic_reduce(g: GroupElement) -> tuple[GroupElement, GroupElement]:
    """``(core, conj)`` with ``g == conj * core * conj^-1``.

    Core is minimal under single-syllable conjugations, resolved
    deterministically by always conjugating by the lowest-vertex-index
    front syllable that strictly shortens the word.
    """
    p = g.presentation
    core = g
    conj = identity(p)
    while True:
        word = core.word
        candidates = sorted(_front_shufflable(p, word),
                            key=lambda k: (word[k].vertex, word[k].value))
        progressed = False
        for k in candidates:
            s = GroupElement(p, (word[k],))
            trial = mul(mul(inv(s), core), s)
            if trial.syllable_length < core.syllable_length:
                core = trial
                conj = mul(conj, s)
                progressed = True
                break
        if not progressed:
            return core, conj


# -- bounded enumeration ------------------------------------------------------


def enumerate_ball_elements(p: Presentation, L: int) -> list[GroupElement]:
    """All elements of syllable length <= L, canonical, sorted, no duplicates."""
    p.require_finite()
    gens = list(p.syllables())
    seen = {identity(p)}
    frontier = [identity(p)]
    for length in range(1, L + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = mul(g, GroupElement(p, (s,)))
                if h.syllable_length == length and h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(seen)


def enumerate_parabolic_ball(p: Presentation, S: Iterable[int], L: int) -> list[GroupElement]:
    """Elements of the standard parabolic ``<G_S>`` of syllable length <= L."""
    p.require_finite()
    Sf = frozenset(v % p.n for v in S)
    gens = [s for s in p.syllables() if s.vertex in Sf]
    seen = {identity(p)}
    frontier = [identity(p)]
    for length in range(1, L + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = mul(g, GroupElement(p, (s,)))
                if h.syllable_length == length and h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(seen)


# -- text syntax --------------------------------------------------------------


def parse_word(p: Presentation, text: str) -> GroupElement:
    """Parse ``v3:2 v1:1`` into a canonical element."""
    syllables = []
    for token in text.split():
        if not token.startswith("v") or ":" not in token:
            raise ValidationError(f"bad syllable token: {token!r}")
        v_part, _, e_part = token[1:].partition(":")
        try:
            vertex, value = int(v_part), int(e_part)
        except ValueError:
            raise ValidationError(f"bad syllable token: {token!r}") from None
        if not 0 <= vertex < p.n:
            raise ValidationError(f"vertex {vertex} out of range for n={p.n}")
        p.group(vertex).check(value)
        syllables.append(Syllable(vertex, value))
    return reduce_word(p, syllables)


def format_word(g: GroupElement) -> str:
    return " ".join(f"v{s.vertex}:{s.value}" for s in g.word)
