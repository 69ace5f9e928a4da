import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cyclewall.errors import ValidationError
from cyclewall.words import (
    GroupElement,
    ParabolicRef,
    Presentation,
    Syllable,
    coset_rep,
    cyclic_reduce,
    enumerate_ball_elements,
    enumerate_parabolic_ball,
    format_word,
    from_syllable,
    identity,
    inv,
    mul,
    mul_all,
    parabolic_member,
    parabolic_normalizer,
    parse_word,
    reduce_word,
)

from conftest import presentation_c5_mixed, presentation_c5_z2
from oracles import all_raw_words, closure_classifier, single_moves


def random_raw_word(rng, p, max_len):
    alphabet = list(p.syllables())
    return tuple(rng.choice(alphabet) for _ in range(rng.randrange(max_len + 1)))


# -- reduce -------------------------------------------------------------------


def test_reduce_empty_word(c5_z2):
    assert reduce_word(c5_z2, []).is_identity


def test_reduce_shuffle_then_merge(c5_z2):
    # vertices 1 and 2 are adjacent, so a1 a2 a1 -> a2
    w = parse_word(c5_z2, "v1:1 v2:1 v1:1")
    assert format_word(w) == "v2:1"


def test_reduce_rigid_word_unchanged(c5_z2):
    # supports 1,3 alternate: no move applies, the word is its own reduced form
    w = parse_word(c5_z2, "v1:1 v3:1 v1:1 v3:1")
    assert format_word(w) == "v1:1 v3:1 v1:1 v3:1"
    assert w.syllable_length == 4


def test_reduce_canonical_is_lex_least(c5_z2):
    # vertices 2 and 3 commute, lex-least form puts 2 first
    w = parse_word(c5_z2, "v3:1 v2:1")
    assert format_word(w) == "v2:1 v3:1"


def test_reduce_agrees_with_closure_oracle_on_short_words(c5_mixed):
    p = c5_mixed
    max_len = 4
    uf = closure_classifier(p, max_len)
    canon = {}
    for word in all_raw_words(p, max_len):
        root = uf.find(word)
        form = reduce_word(p, word)
        if root in canon:
            assert canon[root] == form, f"word {word} disagrees with oracle"
        else:
            canon[root] = form
    # distinct components must get distinct canonical forms
    assert len(set(canon.values())) == len(canon)


def test_confluence_under_random_move_sequences(c5_mixed):
    p = c5_mixed
    rng = random.Random(0)
    for _ in range(1000):
        word = random_raw_word(rng, p, 8)
        target = reduce_word(p, word)
        w = word
        for _ in range(rng.randrange(12)):
            moves = single_moves(p, w)
            if not moves:
                break
            w = rng.choice(moves)
        assert reduce_word(p, w) == target


# -- group operations ---------------------------------------------------------


def test_mul_examples(c5_z2):
    a1, a3 = parse_word(c5_z2, "v1:1"), parse_word(c5_z2, "v3:1")
    assert format_word(mul(a1, a3)) == "v1:1 v3:1"
    assert mul(a1, inv(a1)).is_identity


def test_inv_examples(c5_z3):
    assert inv(identity(c5_z3)).is_identity
    t = parse_word(c5_z3, "v1:1 v3:1")
    got = inv(t)
    assert mul(t, got).is_identity
    assert got == parse_word(c5_z3, "v3:2 v1:2")
    assert got.syllable_length == t.syllable_length


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_group_axioms(data):
    p = presentation_c5_mixed()
    alphabet = list(p.syllables())
    def elem():
        raw = data.draw(st.lists(st.sampled_from(alphabet), max_size=6))
        return reduce_word(p, raw)
    a, b, c = elem(), elem(), elem()
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert inv(inv(a)) == a
    assert mul(a, identity(p)) == a == mul(identity(p), a)
    assert mul(a, inv(a)).is_identity
    assert inv(a).syllable_length == a.syllable_length


# -- cosets and parabolics ------------------------------------------------------


def test_coset_rep_examples(c5_z2):
    assert coset_rep(identity(c5_z2), [1, 2]).is_identity
    g = parse_word(c5_z2, "v3:1 v2:1")
    assert format_word(coset_rep(g, [1, 2])) == "v3:1"


def test_coset_rep_quotient_in_parabolic(c5_mixed):
    p = c5_mixed
    rng = random.Random(1)
    for _ in range(300):
        g = reduce_word(p, random_raw_word(rng, p, 6))
        S = frozenset(rng.sample(range(5), rng.randrange(1, 4)))
        r = coset_rep(g, S)
        assert mul(inv(r), g).support() <= S
        # idempotent
        assert coset_rep(r, S) == r


def test_coset_rep_constant_on_cosets(c5_mixed):
    p = c5_mixed
    rng = random.Random(2)
    for _ in range(300):
        g = reduce_word(p, random_raw_word(rng, p, 5))
        S = frozenset(rng.sample(range(5), rng.randrange(1, 4)))
        h = rng.choice(enumerate_parabolic_ball(p, S, 2))
        assert coset_rep(mul(g, h), S) == coset_rep(g, S)


def test_parabolic_member_examples(c5_z2):
    p = c5_z2
    anything = ParabolicRef(frozenset({0, 1}), identity(p))
    assert parabolic_member(identity(p), anything)
    a1 = parse_word(p, "v1:1")
    assert parabolic_member(a1, ParabolicRef(frozenset({1, 2}), identity(p)))
    a3 = parse_word(p, "v3:1")
    assert not parabolic_member(a3, ParabolicRef(frozenset({1, 2}), a1))


def test_parabolic_normalizer(c5_z2):
    p = c5_z2
    for i in range(5):
        assert parabolic_normalizer(p, [i]) == {(i - 1) % 5, i, (i + 1) % 5}
        assert parabolic_normalizer(p, [i, i + 1]) == {i, (i + 1) % 5}
    assert parabolic_normalizer(p, []) == set(range(5))


def test_parabolic_normalizer_c6(c6_z2):
    assert parabolic_normalizer(c6_z2, [0, 1]) == {0, 1}
    assert parabolic_normalizer(c6_z2, [0]) == {5, 0, 1}


# -- cyclic reduction -----------------------------------------------------------


def test_cyclic_reduce_single_syllable(c5_z2):
    g = parse_word(c5_z2, "v2:1")
    core, conj = cyclic_reduce(g)
    assert core == g and conj.is_identity


def test_cyclic_reduce_example(c5_z2):
    g = parse_word(c5_z2, "v1:1 v3:1 v1:1")
    core, conj = cyclic_reduce(g)
    assert format_word(core) == "v3:1"
    assert format_word(conj) == "v1:1"
    assert mul(mul(conj, core), inv(conj)) == g


def test_cyclic_reduce_conjugated_syllable_roundtrip(c5_mixed):
    p = c5_mixed
    rng = random.Random(3)
    for _ in range(300):
        w = reduce_word(p, random_raw_word(rng, p, 5))
        s = rng.choice(list(p.syllables()))
        g = mul(mul(w, GroupElement(p, (s,))), inv(w))
        core, conj = cyclic_reduce(g)
        assert core.syllable_length == 1
        assert core.word[0].vertex == s.vertex
        assert mul(mul(conj, core), inv(conj)) == g


# -- enumeration ----------------------------------------------------------------


def test_enumerate_ball_sizes(c5_z2):
    assert [format_word(g) for g in enumerate_ball_elements(c5_z2, 0)] == [""]
    assert len(enumerate_ball_elements(c5_z2, 1)) == 6


def test_enumerate_ball_matches_naive_closure(c5_z2):
    p = c5_z2
    naive = {reduce_word(p, w) for w in all_raw_words(p, 2)}
    ball = enumerate_ball_elements(p, 2)
    assert set(ball) == naive
    assert ball == sorted(ball)
    assert len(ball) == len(set(ball))


def test_enumerate_ball_deterministic(c5_mixed):
    a = enumerate_ball_elements(c5_mixed, 2)
    b = enumerate_ball_elements(c5_mixed, 2)
    assert a == b


# -- text syntax ------------------------------------------------------------------


def test_parse_format_roundtrip(c5_mixed):
    p = c5_mixed
    rng = random.Random(4)
    for _ in range(200):
        g = reduce_word(p, random_raw_word(rng, p, 6))
        assert parse_word(p, format_word(g)) == g


def test_parse_rejects_garbage(c5_z2):
    for bad in ["w1:1", "v9:1", "v1:7", "v1", "v1:x"]:
        with pytest.raises(ValidationError):
            parse_word(c5_z2, bad)


def test_presentation_requires_n_at_least_5():
    from cyclewall.localgroups import cyclic_group
    with pytest.raises(ValidationError):
        Presentation(tuple(cyclic_group(2) for _ in range(4)))
