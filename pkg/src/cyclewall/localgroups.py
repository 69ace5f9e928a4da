"""Vertex groups of a cyclic product: arithmetic, automorphisms, determining sets.

Three kinds of vertex group are supported:

* ``cyclic(k)``    -- Z/k, elements are residues 0..k-1, identity 0;
* ``table``        -- an explicit finite multiplication table, identity id 0;
* ``integers``     -- (Z, +), elements are Python ints.

Elements are plain ints throughout (ids in the finite case, integers
otherwise), wrapped in :class:`LocalElement` only at API boundaries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import EnumerationCapError, GroupMismatchError, InfiniteGroupError, ValidationError

#: Brute-force automorphism search refuses groups above this order by default.
DEFAULT_AUT_ORDER_CAP = 12

IDENTITY = 0


def _validate_table(table: tuple[tuple[int, ...], ...]) -> None:
    m = len(table)
    if m < 2:
        raise ValidationError("group table needs at least 2 elements")
    for row in table:
        if len(row) != m or any(not (0 <= x < m) for x in row):
            raise ValidationError("group table is not a square table of element ids")
    # identity must be id 0
    for a in range(m):
        if table[0][a] != a or table[a][0] != a:
            raise ValidationError("element 0 is not a two-sided identity")
    # associativity
    for a in range(m):
        for b in range(m):
            for c in range(m):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise ValidationError(f"table is not associative at ({a},{b},{c})")
    # inverses
    for a in range(m):
        if not any(table[a][b] == 0 and table[b][a] == 0 for b in range(m)):
            raise ValidationError(f"element {a} has no inverse")


@dataclass(frozen=True)
class LocalGroupSpec:
    """One vertex group: ``cyclic``, ``table`` or ``integers``."""

    kind: str
    order: Optional[int] = None            # cyclic only
    table: Optional[tuple[tuple[int, ...], ...]] = None  # table only
    names: Optional[tuple[str, ...]] = None  # table only, display names
    name: str = ""

    def __post_init__(self):
        if self.kind == "cyclic":
            if self.order is None or self.order < 2:
                raise ValidationError("cyclic group needs order >= 2")
        elif self.kind == "table":
            if self.table is None:
                raise ValidationError("table group needs a multiplication table")
            _validate_table(self.table)
            if self.names is not None and len(self.names) != len(self.table):
                raise ValidationError("names do not match table size")
        elif self.kind == "integers":
            pass
        else:
            raise ValidationError(f"unknown group kind: {self.kind!r}")
        if not self.name:
            object.__setattr__(self, "name", self._default_name())

    def _default_name(self) -> str:
        if self.kind == "cyclic":
            return f"Z/{self.order}"
        if self.kind == "table":
            return f"table({len(self.table)})"
        return "Z"

    # -- basic structure ---------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind != "integers"

    @property
    def size(self) -> int:
        if self.kind == "cyclic":
            return self.order
        if self.kind == "table":
            return len(self.table)
        raise InfiniteGroupError(f"{self.name} is infinite")

    def elements(self) -> range:
        return range(self.size)

    def nontrivial_elements(self) -> range:
        return range(1, self.size)

    def contains(self, value: int) -> bool:
        if self.kind == "integers":
            return True
        return 0 <= value < self.size

    def check(self, value: int) -> None:
        if not self.contains(value):
            raise ValidationError(f"{value} is not an element of {self.name}")

    def mul(self, a: int, b: int) -> int:
        if self.kind == "cyclic":
            return (a + b) % self.order
        if self.kind == "table":
            return self.table[a][b]
        return a + b

    def inv(self, a: int) -> int:
        if self.kind == "cyclic":
            return (-a) % self.order
        if self.kind == "integers":
            return -a
        for b in range(len(self.table)):
            if self.table[a][b] == IDENTITY:
                return b
        raise AssertionError("validated table has inverses")

    def element_order(self, a: int) -> int:
        if self.kind == "integers":
            raise InfiniteGroupError("elements of Z have infinite order (except 0)")
        k, x = 1, a
        while x != IDENTITY:
            x = self.mul(x, a)
            k += 1
        return k

    def element_name(self, value: int) -> str:
        if self.kind == "table" and self.names is not None:
            return self.names[value]
        return str(value)


@dataclass(frozen=True)
class LocalElement:
    group: LocalGroupSpec
    value: int

    def __post_init__(self):
        self.group.check(self.value)

    @property
    def is_identity(self) -> bool:
        return self.value == IDENTITY


def lg_mul(a: LocalElement, b: LocalElement) -> LocalElement:
    if a.group != b.group:
        raise GroupMismatchError(f"cannot multiply elements of {a.group.name} and {b.group.name}")
    return LocalElement(a.group, a.group.mul(a.value, b.value))


def lg_inv(a: LocalElement) -> LocalElement:
    return LocalElement(a.group, a.group.inv(a.value))


@dataclass(frozen=True)
class LocalIso:
    """Isomorphism between two vertex groups.

    Finite case: ``mapping`` is the full value table (mapping[x] = image of x).
    Integers case: ``sign`` is +1 or -1 and mapping is None.
    """

    source: LocalGroupSpec
    target: LocalGroupSpec
    mapping: Optional[tuple[int, ...]] = None
    sign: int = 1

    def __post_init__(self):
        if self.source.kind == "integers" or self.target.kind == "integers":
            if self.source.kind != "integers" or self.target.kind != "integers":
                raise ValidationError("Z is only isomorphic to Z")
            if self.sign not in (1, -1):
                raise ValidationError("an automorphism of Z is a sign")
        else:
            m = self.mapping
            if m is None or len(m) != self.source.size or sorted(m) != list(range(self.target.size)):
                raise ValidationError("mapping is not a bijection onto the target")
            if m[IDENTITY] != IDENTITY:
                raise ValidationError("mapping does not fix the identity")
            for a in self.source.elements():
                for b in self.source.elements():
                    if m[self.source.mul(a, b)] != self.target.mul(m[a], m[b]):
                        raise ValidationError(f"mapping is not a homomorphism at ({a},{b})")

    def apply(self, value: int) -> int:
        if self.mapping is None:
            return self.sign * value
        return self.mapping[value]

    def compose(self, inner: "LocalIso") -> "LocalIso":
        """self after inner (``self(inner(x))``)."""
        if inner.target != self.source:
            raise GroupMismatchError("isomorphisms do not compose")
        if self.mapping is None:
            return LocalIso(inner.source, self.target, sign=self.sign * inner.sign)
        return LocalIso(
            inner.source, self.target,
            mapping=tuple(self.mapping[inner.mapping[x]] for x in range(len(inner.mapping))),
        )

    def inverse(self) -> "LocalIso":
        if self.mapping is None:
            return LocalIso(self.target, self.source, sign=self.sign)
        inv = [0] * len(self.mapping)
        for x, y in enumerate(self.mapping):
            inv[y] = x
        return LocalIso(self.target, self.source, mapping=tuple(inv))

    @property
    def is_identity(self) -> bool:
        if self.source != self.target:
            return False
        if self.mapping is None:
            return self.sign == 1
        return all(m == x for x, m in enumerate(self.mapping))


def identity_iso(g: LocalGroupSpec) -> LocalIso:
    if g.kind == "integers":
        return LocalIso(g, g, sign=1)
    return LocalIso(g, g, mapping=tuple(range(g.size)))


def _generating_sequence(g: LocalGroupSpec) -> list[int]:
    """Small generating list, grown greedily by subgroup closure."""
    gens: list[int] = []
    reached = {IDENTITY}
    for x in g.nontrivial_elements():
        if x in reached:
            continue
        gens.append(x)
        frontier = list(reached)
        reached = set(reached)
        # close under multiplication with the new generating set
        changed = True
        while changed:
            changed = False
            for a in list(reached):
                for s in gens:
                    p = g.mul(a, s)
                    if p not in reached:
                        reached.add(p)
                        changed = True
        if len(reached) == g.size:
            break
    return gens


def isomorphisms(src: LocalGroupSpec, dst: LocalGroupSpec,
                 cap: int = DEFAULT_AUT_ORDER_CAP) -> list[LocalIso]:
    """All isomorphisms src -> dst, in a deterministic order.

    Finite groups are handled by backtracking over images of a generating
    sequence; Z -> Z gives the two signs.
    """
    if src.kind == "integers" and dst.kind == "integers":
        return [LocalIso(src, dst, sign=1), LocalIso(src, dst, sign=-1)]
    if not src.is_finite or not dst.is_finite:
        return []
    if src.size != dst.size:
        return []
    if src.size > cap:
        raise EnumerationCapError(
            f"automorphism search capped at order {cap}, got {src.size}")

    gens = _generating_sequence(src)
    found: list[LocalIso] = []

    def close(images: dict[int, int]) -> Optional[dict[int, int]]:
        # extend a partial map on generators to the generated set; None on clash
        table = dict(images)
        table[IDENTITY] = IDENTITY
        frontier = list(table)
        while frontier:
            a = frontier.pop()
            for s, t in images.items():
                p, q = src.mul(a, s), dst.mul(table[a], t)
                if p in table:
                    if table[p] != q:
                        return None
                else:
                    table[p] = q
                    frontier.append(p)
        return table

    def candidates_for(gen: int) -> list[int]:
        order = src.element_order(gen)
        return [y for y in dst.nontrivial_elements() if dst.element_order(y) == order]

    def search(k: int, images: dict[int, int]) -> None:
        if k == len(gens):
            table = close(images)
            if table is None or len(table) != src.size:
                return
            vals = [table[x] for x in range(src.size)]
            if sorted(vals) != list(range(dst.size)):
                return
            found.append(LocalIso(src, dst, mapping=tuple(vals)))
            return
        for y in candidates_for(gens[k]):
            trial = dict(images)
            trial[gens[k]] = y
            if close(trial) is not None:
                search(k + 1, trial)

    search(0, {})
    return found


def lg_automorphisms(g: LocalGroupSpec, cap: int = DEFAULT_AUT_ORDER_CAP) -> list[LocalIso]:
    """Full automorphism group of a vertex group, deterministic order.

    Z has exactly the two signs; finite groups are searched by brute force up
    to the configured order cap.
    """
    return isomorphisms(g, g, cap=cap)


def determining_set(g: LocalGroupSpec, cap: int = DEFAULT_AUT_ORDER_CAP) -> list[LocalElement]:
    """Finite subset fixed pointwise only by the identity automorphism.

    Grown greedily: scan elements in id order, keep those that strictly shrink
    the subgroup of automorphisms fixing everything chosen so far.
    """
    if g.kind == "integers":
        return [LocalElement(g, 1)]
    auts = lg_automorphisms(g, cap=cap)
    fixing = list(auts)
    chosen: list[LocalElement] = []
    for x in g.nontrivial_elements():
        if len(fixing) == 1:
            break
        still = [a for a in fixing if a.apply(x) == x]
        if len(still) < len(fixing):
            chosen.append(LocalElement(g, x))
            fixing = still
    assert len(fixing) == 1
    return chosen


# -- convenience constructors ---------------------------------------------

def cyclic_group(k: int, name: str = "") -> LocalGroupSpec:
    return LocalGroupSpec(kind="cyclic", order=k, name=name)


def table_group(table, names=None, name: str = "") -> LocalGroupSpec:
    tbl = tuple(tuple(row) for row in table)
    nm = tuple(names) if names is not None else None
    return LocalGroupSpec(kind="table", table=tbl, names=nm, name=name)


def integers_group(name: str = "") -> LocalGroupSpec:
    return LocalGroupSpec(kind="integers", name=name)
