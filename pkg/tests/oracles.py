"""Independent oracles used by the test suite.

These deliberately avoid the package's normal-form machinery: equality of
words is decided by exhaustively closing the set of raw words under the three
elementary rewriting moves (delete identity / merge same-group neighbours /
swap commuting neighbours) and reading off the resulting partition.
"""

import itertools

from cyclewall.localgroups import IDENTITY, table_group
from cyclewall.words import Presentation, Syllable


def s3_table_group():
    """Symmetric group on 3 points as an explicit table, identity id 0."""
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(a[b[x]] for x in range(3))] for b in perms]
        for a in perms
    ]
    names = ["".join(map(str, p)) for p in perms]
    return table_group(table, names=names, name="S3")


def all_raw_words(p: Presentation, max_len: int):
    """Every raw word over the generator syllables up to the given length."""
    alphabet = list(p.syllables())
    words = [()]
    for length in range(1, max_len + 1):
        words.extend(itertools.product(alphabet, repeat=length))
    return words


def single_moves(p: Presentation, word):
    """All words reachable from ``word`` by one elementary move."""
    out = []
    for k in range(len(word) - 1):
        a, b = word[k], word[k + 1]
        if a.vertex == b.vertex:
            prod = p.group(a.vertex).mul(a.value, b.value)
            if prod == IDENTITY:
                out.append(word[:k] + word[k + 2:])
            else:
                out.append(word[:k] + (Syllable(a.vertex, prod),) + word[k + 2:])
        elif p.commutes(a.vertex, b.vertex):
            out.append(word[:k] + (b, a) + word[k + 2:])
    return out


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def closure_classifier(p: Presentation, max_len: int):
    """Map raw word -> class id, classes being the move-closure components.

    Only words over the generator alphabet are enumerated; moves can only
    shorten words or permute them, so the closure stays inside the universe.
    """
    uf = UnionFind()
    for word in all_raw_words(p, max_len):
        uf.find(word)
        for other in single_moves(p, word):
            uf.union(word, other)
    return uf
