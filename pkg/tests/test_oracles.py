import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syncword import oracles as O
from syncword.errors import OracleInstability
from syncword.sequences import binary_concatenation

binary_words = st.lists(st.integers(0, 1), min_size=1, max_size=60)


def is_power_brute(w):
    n = len(w)
    return any(n % d == 0 and w == w[:d] * (n // d) for d in range(1, n // 2 + 1))


def bordered_brute(w):
    return any(w[:b] == w[-b:] for b in range(1, len(w)))


@given(binary_words, st.integers(0, 70))
@settings(max_examples=150, deadline=None)
def test_window_ids_identify_equal_windows(w, n):
    arr = np.array(w)
    ids = O.window_ids(arr, n)
    assert ids.size == max(0, len(w) - n + 1) or (n == 0 and ids.size == len(w) + 1)
    for i in range(ids.size):
        for j in range(ids.size):
            assert (ids[i] == ids[j]) == (w[i:i + n] == w[j:j + n])


@given(st.lists(st.integers(0, 2), min_size=1, max_size=40), st.integers(0, 12))
@settings(max_examples=150, deadline=None)
def test_counts_on_finite_words(w, n):
    factors = {tuple(w[i:i + n]) for i in range(len(w) - n + 1)}
    assert O.count_naive(w, n, "factors") == len(factors)
    assert O.count_naive(w, n, "powers") == sum(1 for f in factors if n and is_power_brute(list(f)))
    assert O.count_naive(w, n, "primitive") == len(factors) - O.count_naive(w, n, "powers")
    assert O.count_naive(w, n, "unbordered") == sum(1 for f in factors if n and not bordered_brute(list(f)))


def test_count_kind_checked():
    with pytest.raises(ValueError):
        O.count_naive("abc", 1, "squares")


@given(binary_words)
@settings(max_examples=150, deadline=None)
def test_word_structure(w):
    n = len(w)
    p = O.smallest_period(w)
    assert p == min(d for d in range(1, n + 1) if all(w[i] == w[i + d] for i in range(n - d)))
    ws = O.word_structure(w)
    assert ws.is_power == is_power_brute(w)
    root = ws.primitive_root
    assert root * (n // len(root)) == w
    assert not is_power_brute(root)
    assert O.is_conjugate(ws.lyndon_root, root)
    assert ws.lyndon_root == min(root[i:] + root[:i] for i in range(len(root)))
    assert O.exponent(w) == n // len(root)


def test_word_structure_examples():
    assert O.word_structure("murmur").primitive_root == "mur"
    assert O.word_structure("murmur").lyndon_root == "mur"
    assert O.word_structure("abab").lyndon_root == "ab"
    assert O.word_structure("baba").lyndon_root == "ab"
    assert O.smallest_period("alfalfa") == 3
    assert not O.word_structure("alfalfa").is_power
    assert O.is_conjugate("listen", "enlist")
    assert not O.is_conjugate("abc", "acb")
    with pytest.raises(ValueError):
        O.word_structure("")


def test_blocks():
    assert O.blocks_of([0, 1, 2, 5, 7, 8]) == [(0, 2), (5, 5), (7, 8)]
    assert O.count_blocks([0, 1, 2, 5, 7, 8]) == 3
    assert O.count_blocks([]) == 0


def test_novel_sets_of_thue_morse(tm):
    assert O.novel_set_naive(tm, 1).positions == (0, 1)
    s6 = O.novel_set_naive(tm, 6)
    assert len(s6.positions) == 16
    assert s6.block_count == 5
    assert O.appearance_naive(tm, 2) == 5
    assert O.count_naive(tm, 4) == 10


def test_table_agrees_with_single_n(tm, pf):
    for x in (tm, pf):
        t = O.oracle_table(x, 40)
        for n in (0, 1, 7, 23, 40):
            s = O.novel_set_naive(x, n)
            assert t.novel[n].tolist() == list(s.positions)
            assert t.factors[n] == O.count_naive(x, n)
            assert t.powers[n] == O.count_naive(x, n, "powers")
            assert t.primitive[n] == O.count_naive(x, n, "primitive")
            assert t.blocks[n] == s.block_count
            assert t.appearance[n] == O.appearance_naive(x, n)


def test_prefix_view_sources(tm):
    v = O.PrefixView(lambda L: np.arange(L) % 3, "mod3")
    assert v.prefix(5).tolist() == [0, 1, 2, 0, 1]
    assert v.name == "mod3" and not v.is_whole(10**6)
    f = O.PrefixView("abc")
    assert f.prefix(10).size == 3 and f.is_whole(3)
    assert O.PrefixView(tm).name == "thue_morse"


def test_instability_is_reported(monkeypatch):
    # every new prefix of the concatenation word reveals new factors
    monkeypatch.setattr(O, "MAX_PREFIX", 2**10)
    with pytest.raises(OracleInstability):
        O.novel_set_naive(binary_concatenation, 12)


def test_gap_check_and_power_positions():
    assert O.power_positions("aabaab", 2) == [0, 3]
    assert O.power_gap_check("aaaa", 2)
    # squares 'abab' at 0 and 'baba' at 1 share the Lyndon root 'ab'
    assert O.power_gap_check("ababab", 4)
    # 'aa' at 0 and 'bb' at 2 with 3*(2-0) > 2: not constrained
    assert O.power_gap_check("aabb", 2)
    with pytest.raises(ValueError):
        O.power_gap_check("ab", 1)


def test_invariant_checks_catch_injected_faults(tm):
    t = O.oracle_table(tm, 20)
    assert O.monotonicity_violations(t) == []
    assert O.block_bound_violations(t) == []
    t.novel[5] = np.append(t.novel[5], 1000)  # a position that disappears at n = 6
    assert O.monotonicity_violations(t)[0][:2] == (5, 1000)
    t.blocks[6] = 99
    assert O.block_bound_violations(t) == [6]
