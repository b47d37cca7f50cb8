"""Brute-force reference counts over finite prefixes, plus word utilities.

Windows of a prefix are identified exactly by iterated pairing of integer
ranks: two length-(a+b) windows are equal iff their length-a heads and
length-b tails are.  A prefix-based answer is trusted only when the prefix
of length L and the one of length 2L give the same set of novel positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .automata import Dfao
from .errors import OracleInstability

MAX_PREFIX = 2**22
KINDS = ("factors", "powers", "primitive", "unbordered")


class PrefixView:
    """Lazily materialised prefix of an infinite (or long finite) word.

    ``source`` is a Dfao, a callable ``length -> array``, or an explicit
    finite word (str or sequence of ints).
    """

    def __init__(self, source, name: str | None = None):
        self.name = name or getattr(source, "name", None)
        self.finite_length = None
        if isinstance(source, Dfao):
            self._make = source.prefix
        elif callable(source):
            self._make = source
        else:
            arr = _as_array(source)
            self.finite_length = arr.size
            self._make = lambda L: arr[:L]
        self._cache = np.zeros(0, dtype=np.int64)

    def prefix(self, length: int) -> np.ndarray:
        if self.finite_length is not None:
            length = min(length, self.finite_length)
        if length > self._cache.size:
            self._cache = np.asarray(self._make(length), dtype=np.int64)
        return self._cache[:length]

    def is_whole(self, length: int) -> bool:
        return self.finite_length is not None and length >= self.finite_length


def _as_array(word) -> np.ndarray:
    if isinstance(word, str):
        return np.frombuffer(word.encode(), dtype=np.uint8).astype(np.int64)
    return np.asarray(word, dtype=np.int64)


def _view(x) -> PrefixView:
    return x if isinstance(x, PrefixView) else PrefixView(x)


# -- window identities -----------------------------------------------------


def _relabel(keys: np.ndarray) -> np.ndarray:
    _, inv = np.unique(keys, return_inverse=True)
    return inv.ravel().astype(np.int64)


def _pair(A: np.ndarray, a: int, B: np.ndarray, count: int) -> np.ndarray:
    """Ids of windows formed by a length-a window (ids A) followed by the
    window with ids B starting a positions later; ``count`` windows."""
    return _relabel(A[:count] * (int(B.max()) + 1 if B.size else 1) + B[a:a + count])


def window_ids(arr: np.ndarray, n: int) -> np.ndarray:
    """ids[i] == ids[j] iff arr[i:i+n] == arr[j:j+n], for 0 <= i <= len-n."""
    L = arr.size
    if n == 0:
        return np.zeros(L + 1, dtype=np.int64)
    if n > L:
        return np.zeros(0, dtype=np.int64)
    table, p = _relabel(arr), 1  # windows of length p
    cur, cur_len = None, 0
    m = n
    while True:
        if m & 1:
            if cur is None:
                cur, cur_len = table, p
            else:
                cur = _pair(cur, cur_len, table, L - cur_len - p + 1)
                cur_len += p
        m >>= 1
        if not m:
            break
        table = _pair(table, p, table, L - 2 * p + 1)
        p *= 2
    return cur


def _first_positions(ids: np.ndarray) -> np.ndarray:
    _, first = np.unique(ids, return_index=True)
    return np.sort(first)


def count_blocks(positions: Sequence[int]) -> int:
    pos = np.asarray(positions)
    if pos.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(pos) != 1))


def blocks_of(positions: Sequence[int]) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers as (first, last) pairs."""
    runs = []
    for p in sorted(positions):
        if runs and runs[-1][1] == p - 1:
            runs[-1] = (runs[-1][0], p)
        else:
            runs.append((p, p))
    return runs


# -- stabilised single-n oracles -----------------------------------------------


@dataclass(frozen=True)
class NovelSet:
    n: int
    positions: tuple[int, ...]
    block_count: int
    prefix_length: int


def _novel_on(arr: np.ndarray, n: int) -> np.ndarray:
    return _first_positions(window_ids(arr, n))


def _stable_prefix(view: PrefixView, n: int) -> tuple[np.ndarray, np.ndarray]:
    L = 32 * (n + 1)
    while True:
        small = view.prefix(L)
        if view.is_whole(L):
            return small, _novel_on(small, n)
        big = view.prefix(2 * L)
        a, b = _novel_on(small, n), _novel_on(big, n)
        if np.array_equal(a, b):
            return big, b
        if 4 * L > MAX_PREFIX:
            raise OracleInstability(f"novel set for n={n} still changing at prefix length {2 * L}")
        L *= 2


def novel_set_naive(x, n: int) -> NovelSet:
    view = _view(x)
    arr, pos = _stable_prefix(view, n)
    return NovelSet(n, tuple(pos.tolist()), count_blocks(pos), arr.size)


def appearance_naive(x, n: int) -> int:
    _, pos = _stable_prefix(_view(x), n)
    return int(pos.max())


def count_naive(x, n: int, kind: str = "factors") -> int:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    arr, pos = _stable_prefix(_view(x), n)
    return _count_kind(arr, n, pos, kind)


def _count_kind(arr, n, pos, kind):
    if kind == "factors":
        return int(pos.size)
    if kind == "powers":
        return int(np.count_nonzero(_power_mask(arr, n, pos)))
    if kind == "primitive":
        return int(pos.size - np.count_nonzero(_power_mask(arr, n, pos)))
    return sum(1 for i in pos.tolist() if n > 0 and not _bordered(arr[i:i + n].tolist()))


def _power_mask(arr: np.ndarray, n: int, starts: np.ndarray) -> np.ndarray:
    """Which windows arr[i:i+n] (i in starts) are powers.  The empty word
    counts as primitive here so that factors = powers + primitive at n = 0."""
    out = np.zeros(starts.size, dtype=bool)
    if n < 2:
        return out
    for d in range(1, n // 2 + 1):
        if n % d:
            continue
        mism = np.concatenate([[0], np.cumsum(arr[:-d] != arr[d:])])
        # period d on [i, i+n) means no mismatch at positions i .. i+n-d-1
        out |= mism[starts + n - d] == mism[starts]
    return out


def _failure(w: Sequence) -> list[int]:
    """KMP failure function: fail[j] = longest proper border of w[:j]."""
    fail = [0] * (len(w) + 1)
    fail[0] = -1
    k = -1
    for j, c in enumerate(w):
        while k >= 0 and w[k] != c:
            k = fail[k]
        k += 1
        fail[j + 1] = k
    return fail


def _bordered(w: Sequence) -> bool:
    return len(w) > 1 and _failure(w)[-1] > 0


# -- sweeps ------------------------------------------------------------------


@dataclass
class OracleTable:
    """All oracle quantities for 0 <= n <= N from one stabilised prefix."""

    N: int
    prefix_length: int
    novel: list[np.ndarray]
    factors: np.ndarray
    powers: np.ndarray
    blocks: np.ndarray
    appearance: np.ndarray

    @property
    def primitive(self) -> np.ndarray:
        return self.factors - self.powers


def _sweep(arr: np.ndarray, N: int) -> list[np.ndarray]:
    out = [np.array([0])]
    letters = _relabel(arr)
    ids = letters
    for n in range(1, N + 1):
        if n > 1:
            ids = _pair(ids, n - 1, letters, arr.size - n + 1)
        out.append(_first_positions(ids))
    return out


def oracle_table(x, N: int, with_powers: bool = True) -> OracleTable:
    view = _view(x)
    L = 32 * (N + 1)
    while True:
        small = view.prefix(L)
        a = _sweep(small, N)
        if view.is_whole(L):
            arr, novel = small, a
            break
        big = view.prefix(2 * L)
        b = _sweep(big, N)
        if all(np.array_equal(u, v) for u, v in zip(a, b)):
            arr, novel = big, b
            break
        if 4 * L > MAX_PREFIX:
            raise OracleInstability(f"novel sets up to n={N} still changing at prefix length {2 * L}")
        L *= 2
    factors = np.array([p.size for p in novel])
    powers = np.array(
        [np.count_nonzero(_power_mask(arr, n, p)) if with_powers else 0 for n, p in enumerate(novel)]
    )
    return OracleTable(
        N,
        arr.size,
        novel,
        factors,
        powers,
        np.array([count_blocks(p) for p in novel]),
        np.array([int(p.max()) for p in novel]),
    )


# -- word structure ----------------------------------------------------------


class WordStructure(NamedTuple):
    period: int
    primitive_root: Sequence
    lyndon_root: Sequence
    is_power: bool


def smallest_period(w: Sequence) -> int:
    return len(w) - _failure(w)[-1]


def word_structure(w: Sequence) -> WordStructure:
    if len(w) == 0:
        raise ValueError("word_structure needs a nonempty word")
    n = len(w)
    p = smallest_period(w)
    root = w[:p] if n % p == 0 else w
    lyndon = min(root[i:] + root[:i] for i in range(len(root)))
    return WordStructure(p, root, lyndon, p < n and n % p == 0)


def is_conjugate(u: Sequence, v: Sequence) -> bool:
    return len(u) == len(v) and any(u[i:] + u[:i] == v for i in range(max(1, len(u))))


def power_positions(z: Sequence, n: int) -> list[int]:
    return [t for t in range(len(z) - n + 1) if word_structure(z[t:t + n]).is_power]


def power_gap_check(z: Sequence, n: int) -> bool:
    """For every pair of length-n power occurrences i < j with 3(j-i) <= n,
    every start t in [i, j] is a power with the same Lyndon root as at i."""
    if n < 2:
        raise ValueError("power_gap_check needs n >= 2")
    starts = power_positions(z, n)
    is_start = set(starts)
    for a, i in enumerate(starts):
        root = word_structure(z[i:i + n]).lyndon_root
        for j in starts[a + 1:]:
            if 3 * (j - i) > n:
                break
            for t in range(i, j + 1):
                if t not in is_start or word_structure(z[t:t + n]).lyndon_root != root:
                    return False
    return True


def exponent(w: Sequence) -> int:
    """Largest e with w = y^e."""
    return len(w) // len(word_structure(w).primitive_root)


# -- invariant checks used by verification ------------------------------------


def monotonicity_violations(table: OracleTable, limit: int | None = None) -> list[tuple]:
    """Witnesses against: i novel at n implies i and i-1 novel at n+1."""
    bad = []
    for n in range(table.N):
        cur = table.novel[n]
        nxt = set(table.novel[n + 1].tolist())
        for i in cur.tolist():
            if limit is not None and i > limit:
                continue
            if i not in nxt:
                bad.append((n, i, "same start"))
            if i >= 1 and i - 1 not in nxt:
                bad.append((n, i, "one left"))
    return bad


def block_bound_violations(table: OracleTable, rho: Callable[[int], int] | None = None) -> list[int]:
    """n where the block count exceeds rho(n) - rho(n-1) + 1."""
    r = rho or (lambda n: int(table.factors[n]))
    return [n for n in range(1, table.N + 1) if table.blocks[n] > r(n) - r(n - 1) + 1]
