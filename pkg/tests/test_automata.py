import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syncword import automata as fa
from syncword.automata import Dfa, Dfao, Nfa
from syncword.errors import AlphabetMismatch, MalformedInput, StateCapExceeded
from syncword.numeration import encode_tuple


def random_dfa(seed, n, base=2, tracks=1, p_acc=0.4):
    rng = np.random.default_rng(seed)
    K = base**tracks
    return Dfa(base, tracks, rng.integers(0, n, size=(n, K)), rng.random(n) < p_acc)


def words(K, max_len):
    for L in range(max_len + 1):
        yield from itertools.product(range(K), repeat=L)


def language(A, max_len=6):
    K = A.delta.shape[1]
    return {w for w in words(K, max_len) if A.accepting[A.run(w)]}


seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.integers(1, 10))
@settings(max_examples=50, deadline=None)
def test_minimize_keeps_language_and_is_canonical(seed, n):
    A = random_dfa(seed, n)
    M = fa.minimize(A)
    assert language(M) == language(A)
    assert M.n_states <= A.n_states
    assert fa.minimize(M) is M
    # relabelling the states of A must not change the minimal table
    perm = np.random.default_rng(seed).permutation(n)
    inv = np.argsort(perm)
    B = Dfa(2, 1, perm[A.delta[inv]], A.accepting[inv], int(perm[A.initial]))
    assert fa.minimize(B) == M


@given(seeds, seeds, st.sampled_from(["and", "or", "andnot", "xor"]))
@settings(max_examples=40, deadline=None)
def test_boolean_combine_is_setwise(s1, s2, op):
    A, B = random_dfa(s1, 5, tracks=2), random_dfa(s2, 4, tracks=2)
    LA, LB, LC = language(A, 4), language(B, 4), language(fa.boolean_combine(A, B, op), 4)
    want = {"and": LA & LB, "or": LA | LB, "andnot": LA - LB, "xor": LA ^ LB}[op]
    assert LC == want


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_complement(seed):
    A = random_dfa(seed, 6)
    all_words = set(words(2, 6))
    assert language(fa.complement(A)) == all_words - language(A)


def test_boolean_errors():
    with pytest.raises(AlphabetMismatch):
        fa.boolean_combine(fa.universal(2, 1), fa.universal(2, 2), "and")
    with pytest.raises(ValueError):
        fa.boolean_combine(fa.universal(2, 1), fa.universal(2, 1), "nand")
    A = random_dfa(1, 40, tracks=2, p_acc=0.5)
    B = random_dfa(2, 40, tracks=2, p_acc=0.5)
    with pytest.raises(StateCapExceeded), fa.state_cap(10):
        fa.boolean_combine(A, B, "and")


@given(seeds, st.integers(1, 2))
@settings(max_examples=30, deadline=None)
def test_projection_guesses_the_erased_digit(seed, track):
    A = random_dfa(seed, 5, tracks=2)
    N = fa.erase_track(A, track).determinize(leading_zeros=False)
    got = language(N, 4)
    want = set()
    for w in words(2, 4):
        for guess in itertools.product(range(2), repeat=len(w)):
            full = [(g * 2 + d) if track == 1 else (d * 2 + g) for d, g in zip(w, guess)]
            if A.accepting[A.run(full)]:
                want.add(w)
                break
    assert got == want


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_zero_closure(seed):
    A = random_dfa(seed, 5)
    Z = fa.zero_closure(A)
    for w in words(2, 5):
        want = any(A.accepting[A.run((0,) * s + w)] for s in range(A.n_states + 1))
        assert bool(Z.accepting[Z.run(w)]) == want
        # a leading zero can only remove padding choices
        if Z.accepting[Z.run((0,) + w)]:
            assert Z.accepting[Z.run(w)]


def test_leading_zero_invariance_check():
    # accepts exactly the words with an even number of symbols: not invariant
    even = Dfa(2, 1, [[1, 1], [0, 0]], [True, False])
    assert not fa.is_leading_zero_invariant(even)
    assert fa.is_leading_zero_invariant(fa.universal(2, 1))


@given(st.integers(0, 200), st.integers(0, 200), st.integers(0, 200))
@settings(max_examples=30, deadline=None)
def test_insert_and_permute_tracks(a, b, c):
    # x <= y on two tracks, checked through its value semantics
    le = fa.from_step(2, 2, "eq", lambda s: s != "gt",
                      lambda s, d: s if s != "eq" else ("eq" if d[0] == d[1] else ("lt" if d[0] < d[1] else "gt")))
    cyl = fa.insert_tracks(le, 3, [2, 0])  # old track 1 -> slot 2, old track 2 -> slot 0
    assert cyl.accepts_values(a, b, c) == (c <= a)
    sw = fa.permute_tracks(le, [1, 0])
    assert sw.accepts_values(a, b) == (b <= a)


def test_witness_is_shortest_then_least():
    # tracks (x, y) with x = 5 and y odd; state = (x so far capped at 6, last y digit)
    A = fa.from_step(2, 2, (0, 0), lambda s: s == (5, 1), lambda s, d: (min(2 * s[0] + d[0], 6), d[1]))
    w = fa.shortest_witness(A)
    assert w.values() == (5, 1)
    assert len(w) == 3
    assert fa.shortest_witness(fa.empty(2, 1)) is None


def test_empty_universal_equivalent():
    assert fa.is_empty(fa.empty(3, 2))
    assert not fa.is_empty(fa.universal(3, 2))
    assert fa.equivalent(fa.complement(fa.empty(2, 1)), fa.universal(2, 1))


def test_nfa_from_edges_and_determinize():
    # words over {0,1} whose second-to-last symbol is 1
    N = Nfa.from_edges(2, 1, 3, [(0, 0, 0), (0, 1, 0), (0, 1, 1), (1, 0, 2), (1, 1, 2)], [0], [False, False, True])
    D = N.determinize(leading_zeros=False)
    assert language(D) == {w for w in words(2, 6) if len(w) >= 2 and w[-2] == 1}
    assert fa.minimize(D).n_states == 4


def test_dfao_basics(tm):
    assert [tm(n) for n in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]
    assert tm.prefix(8).tolist() == [0, 1, 1, 0, 1, 0, 0, 1]
    assert tm.letters == [0, 1]
    assert fa.dfao_output(tm, 7) == 1
    ones = tm.as_dfa(1)
    assert [ones.accepts_values(n) for n in range(4)] == [False, True, True, False]
    assert fa.dfao_is_leading_zero_invariant(tm)


def test_minimize_dfao_merges_duplicates(tm):
    d = np.vstack([tm.delta, tm.delta + 2])
    d[1] += 2  # state 1 now points into the copy
    M = Dfao(2, d, np.concatenate([tm.outputs, tm.outputs]), 0)
    assert fa.minimize_dfao(M) == fa.minimize_dfao(tm)
    assert fa.minimize_dfao(M).n_states == 2


@given(seeds, st.integers(1, 6), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_text_round_trip(seed, n, tracks):
    A = fa.minimize(random_dfa(seed, n, tracks=tracks))
    text = fa.dumps(A, [f"v{i}" for i in range(tracks)], {"note": "x"})
    B, vars, meta = fa.loads(text)
    assert B == A
    assert vars == [f"v{i}" for i in range(tracks)]
    assert meta == {"note": "x"}


def test_text_round_trip_dfao(tm):
    M, vars, meta = fa.loads(fa.dumps(tm, meta={"name": "thue_morse"}))
    assert isinstance(M, Dfao) and M == tm and M.name == "thue_morse" and vars is None


def test_partial_transitions_go_to_sink():
    text = "base 2 tracks 1\nstates 1 initial 0\naccepting 0\n0 [0] 0\n"
    A, _, _ = fa.loads(text)
    assert A.n_states == 2
    assert A.accepts_values(0) and not A.accepts_values(1)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "base 2\nstates 1 initial 0\n",
        "base 2 tracks 1\nstates 1 initial 0\naccepting 3\n",
        "base 2 tracks 1\nstates 1 initial 0\n0 [0] 5\n",
        "base 2 tracks 1\nstates 1 initial 0\n0 0 0\n",
        "base 2 tracks 1\nstates 2 initial 0\n0 [0] 0\n0 [1] 1\n1 [0] 1\n1 [1] 1\noutput 0 0\n",
        "base 2 tracks 1\nstates 1 initial 0\n0 [0] 0\noutput 0 1\n",
        "base two tracks 1\n",
    ],
)
def test_malformed_text(text):
    with pytest.raises(MalformedInput):
        fa.loads(text)


def test_dot_omits_dead_states():
    A = fa.from_step(2, 1, 0, lambda s: s == 1, lambda s, d: 1 if s == 0 and d[0] == 1 else (0 if s == 0 else None))
    dot = fa.to_dot(A, "one", ["n"])
    assert dot.startswith("digraph one {")
    assert "doublecircle" in dot
    assert "q2" not in dot  # the dead state
    assert 'label="tracks: n"' in dot


def test_accepts_checks_alphabet():
    with pytest.raises(AlphabetMismatch):
        fa.accepts(fa.universal(2, 1), encode_tuple((1, 2), 2))
    assert fa.accepts(fa.universal(2, 2), encode_tuple((1, 2), 2))
