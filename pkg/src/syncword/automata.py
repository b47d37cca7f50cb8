"""Multi-track automata over base-k digit tuples.

A :class:`Dfa` is a complete transition table ``delta[state, symbol]`` where
symbols index the tuples of a :class:`DigitAlphabet`.  All languages built by
this module are invariant under prepending the all-zero tuple, which is what
lets a tuple of integers be read with arbitrary padding.
"""

from __future__ import annotations

import contextlib
import io
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import AlphabetMismatch, MalformedInput
from .numeration import DigitAlphabet, TrackWord, encode_base_k, encode_tuple

DEFAULT_STATE_CAP = 10**6
_limits = {"states": DEFAULT_STATE_CAP}


def _cap(state_cap):
    return _limits["states"] if state_cap is None else state_cap


@contextlib.contextmanager
def state_cap(limit: int):
    """Temporarily change the state cap used by product and subset construction."""
    old = _limits["states"]
    _limits["states"] = int(limit)
    try:
        yield
    finally:
        _limits["states"] = old


def _frozen(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


class Dfa:
    """Complete deterministic automaton over ``DigitAlphabet(base, tracks)``."""

    __slots__ = ("base", "tracks", "delta", "accepting", "initial", "canonical")

    def __init__(self, base, tracks, delta, accepting, initial=0, canonical=False):
        self.base = int(base)
        self.tracks = int(tracks)
        self.delta = _frozen(delta, np.int32)
        self.accepting = _frozen(accepting, bool)
        self.initial = int(initial)
        self.canonical = canonical
        n, K = self.delta.shape
        if K != self.base**self.tracks:
            raise MalformedInput(f"table has {K} columns, alphabet has {self.base ** self.tracks}")
        if self.accepting.shape != (n,) or not 0 <= self.initial < n:
            raise MalformedInput("accepting vector or initial state does not match the table")
        if n and (self.delta.min() < 0 or self.delta.max() >= n):
            raise MalformedInput("transition target out of range")

    @property
    def alphabet(self) -> DigitAlphabet:
        return DigitAlphabet(self.base, self.tracks)

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    def run(self, symbols: Iterable[int], state: int | None = None) -> int:
        q = self.initial if state is None else state
        d = self.delta
        for a in symbols:
            q = d[q, a]
        return int(q)

    def accepts_values(self, *values: int) -> bool:
        if len(values) != self.tracks:
            raise AlphabetMismatch(f"expected {self.tracks} values, got {len(values)}")
        return accepts(self, encode_tuple(values, self.base))

    def __eq__(self, other):
        if not isinstance(other, Dfa):
            return NotImplemented
        return (
            self.base == other.base
            and self.tracks == other.tracks
            and self.initial == other.initial
            and np.array_equal(self.delta, other.delta)
            and np.array_equal(self.accepting, other.accepting)
        )

    def __hash__(self):
        return hash((self.base, self.tracks, self.initial, self.delta.tobytes(), self.accepting.tobytes()))

    def __repr__(self):
        return f"Dfa(base={self.base}, tracks={self.tracks}, states={self.n_states})"


class Nfa:
    """Nondeterministic automaton stored as per-(state, symbol) successor lists."""

    def __init__(self, base, tracks, n_states, ptr, idx, initial, accepting):
        self.base = base
        self.tracks = tracks
        self.n_states = n_states
        self.ptr = np.asarray(ptr, dtype=np.int64)
        self.idx = np.asarray(idx, dtype=np.int32)
        self.initial = np.unique(np.asarray(initial, dtype=np.int32))
        self.accepting = np.asarray(accepting, dtype=bool)
        K = base**tracks
        if self.ptr.shape != (n_states * K + 1,):
            raise MalformedInput("successor index has the wrong length")
        if self.idx.size and (self.idx.min() < 0 or self.idx.max() >= n_states):
            raise MalformedInput("successor refers to a missing state")
        if self.initial.size and self.initial.max() >= n_states:
            raise MalformedInput("initial state refers to a missing state")

    @classmethod
    def from_edges(cls, base, tracks, n_states, edges, initial, accepting):
        K = base**tracks
        edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 3)
        key = edges[:, 0] * K + edges[:, 1]
        order = np.argsort(key, kind="stable")
        ptr = np.searchsorted(key[order], np.arange(n_states * K + 1))
        return cls(base, tracks, n_states, ptr, edges[order, 2], initial, accepting)

    def successors(self, state, symbol):
        K = self.base**self.tracks
        s = state * K + symbol
        return self.idx[self.ptr[s]:self.ptr[s + 1]]

    def zero_closure(self) -> np.ndarray:
        """States reachable from an initial state by all-zero tuples."""
        seen = set(self.initial.tolist())
        todo = list(seen)
        while todo:
            q = todo.pop()
            for r in self.successors(q, 0).tolist():
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return np.array(sorted(seen), dtype=np.int32)

    def determinize(self, state_cap=None, leading_zeros=True) -> Dfa:
        """Subset construction.  With ``leading_zeros`` the start set is the
        zero-closure of the initial states, so a word is accepted iff some
        zero-padded version of it is accepted by the NFA."""
        init = self.zero_closure() if leading_zeros else self.initial
        K = self.base**self.tracks
        delta, acc = kernels.determinize(
            self.ptr, self.idx, self.n_states, K, init, self.accepting.astype(np.uint8), _cap(state_cap)
        )
        return Dfa(self.base, self.tracks, delta, acc.astype(bool))


class Dfao:
    """Single-track deterministic automaton with an output on every state."""

    __slots__ = ("base", "delta", "outputs", "initial", "name")

    def __init__(self, base, delta, outputs, initial=0, name=None):
        self.base = int(base)
        self.delta = _frozen(delta, np.int32)
        self.outputs = _frozen(outputs, np.int64)
        self.initial = int(initial)
        self.name = name
        n, K = self.delta.shape
        if K != self.base:
            raise MalformedInput(f"DFAO table has {K} columns for base {self.base}")
        if self.outputs.shape != (n,):
            raise MalformedInput("every state needs exactly one output")
        if n and (self.delta.min() < 0 or self.delta.max() >= n):
            raise MalformedInput("transition target out of range")

    @property
    def n_states(self):
        return self.delta.shape[0]

    @property
    def letters(self) -> list[int]:
        reach = kernels.bfs_order(self.delta, self.initial)
        return sorted(set(self.outputs[reach].tolist()))

    def __call__(self, n: int) -> int:
        return dfao_output(self, n)

    def prefix(self, length: int) -> np.ndarray:
        """``x[0..length-1]`` as an int array."""
        if length <= 0:
            return np.zeros(0, dtype=np.int64)
        ns = np.arange(length, dtype=np.int64)
        states = np.full(length, self.initial, dtype=np.int64)
        width = len(encode_base_k(length - 1, self.base)) if length > 1 else 0
        for pos in range(width - 1, -1, -1):
            states = self.delta[states, (ns // self.base**pos) % self.base]
        return self.outputs[states]

    def as_dfa(self, letter: int) -> Dfa:
        """Accepts ``(n)_k`` iff ``x[n] == letter``."""
        return Dfa(self.base, 1, self.delta, self.outputs == letter, self.initial)

    def __eq__(self, other):
        if not isinstance(other, Dfao):
            return NotImplemented
        return (
            self.base == other.base
            and self.initial == other.initial
            and np.array_equal(self.delta, other.delta)
            and np.array_equal(self.outputs, other.outputs)
        )

    def __hash__(self):
        return hash((self.base, self.initial, self.delta.tobytes(), self.outputs.tobytes()))

    def __repr__(self):
        return f"Dfao(base={self.base}, states={self.n_states}, name={self.name!r})"


def dfao_output(M: Dfao, n: int) -> int:
    q = M.initial
    for d in encode_base_k(n, M.base):
        q = M.delta[q, d]
    return int(M.outputs[q])


def _check_same_alphabet(A, B):
    if A.base != B.base or A.tracks != B.tracks:
        raise AlphabetMismatch(
            f"alphabets differ: base {A.base}/{B.base}, tracks {A.tracks}/{B.tracks}"
        )


def from_step(base, tracks, initial, accepting, step) -> Dfa:
    """Build a Dfa from a Python transition function over hashable states.

    ``step(state, digits)`` returns the next state, or None for the dead state.
    Only states reachable from ``initial`` are kept.
    """
    alpha = DigitAlphabet(base, tracks)
    syms = alpha.symbols()
    index = {initial: 0}
    order = [initial]
    rows = []
    i = 0
    while i < len(order):
        s = order[i]
        row = []
        for digits in syms:
            t = step(s, digits) if s is not _DEAD else _DEAD
            if t is None:
                t = _DEAD
            if t not in index:
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        rows.append(row)
        i += 1
    acc = [s is not _DEAD and accepting(s) for s in order]
    return Dfa(base, tracks, np.array(rows, dtype=np.int32), acc)


class _Dead:
    def __repr__(self):
        return "<dead>"


_DEAD = _Dead()


def empty(base, tracks) -> Dfa:
    return Dfa(base, tracks, np.zeros((1, base**tracks), dtype=np.int32), [False], canonical=True)


def universal(base, tracks) -> Dfa:
    return Dfa(base, tracks, np.zeros((1, base**tracks), dtype=np.int32), [True], canonical=True)


def accepts(A: Dfa, w: TrackWord) -> bool:
    if w.base != A.base or w.tracks != A.tracks:
        raise AlphabetMismatch(f"word over base {w.base}/{w.tracks} tracks, automaton base {A.base}/{A.tracks}")
    return bool(A.accepting[A.run(w.indices())])


def minimize(A: Dfa) -> Dfa:
    """Minimal complete DFA, states numbered in BFS order from the initial
    state with symbols scanned in increasing index order."""
    if A.canonical:
        return A
    order = kernels.bfs_order(A.delta, A.initial)
    rank = np.full(A.n_states, -1, dtype=np.int64)
    rank[order] = np.arange(order.size)
    d = rank[A.delta[order]]
    acc = A.accepting[order]
    classes, count = kernels.refine(d.astype(np.int32), acc.astype(np.int32))
    classes = np.asarray(classes, dtype=np.int64)
    qdelta = np.empty((count, d.shape[1]), dtype=np.int64)
    qdelta[classes] = classes[d]
    qacc = np.zeros(count, dtype=bool)
    qacc[classes] = acc
    q0 = int(classes[0])
    order2 = kernels.bfs_order(qdelta.astype(np.int32), q0)
    rank2 = np.empty(count, dtype=np.int64)
    rank2[order2] = np.arange(count)
    return Dfa(A.base, A.tracks, rank2[qdelta[order2]], qacc[order2], 0, canonical=True)


_OPS = {
    "and": np.logical_and,
    "or": np.logical_or,
    "andnot": lambda a, b: a & ~b,
    "xor": np.logical_xor,
}


def boolean_combine(A: Dfa, B: Dfa, op: str, state_cap=None) -> Dfa:
    _check_same_alphabet(A, B)
    try:
        f = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown boolean operation {op!r}") from None
    delta, pairs = kernels.product(A.delta, B.delta, A.initial, B.initial, _cap(state_cap))
    acc = f(A.accepting[pairs[:, 0]], B.accepting[pairs[:, 1]])
    return minimize(Dfa(A.base, A.tracks, delta, acc))


def complement(A: Dfa) -> Dfa:
    # every word over the alphabet is a valid padded encoding, so flipping
    # acceptance keeps leading-zero invariance
    return Dfa(A.base, A.tracks, A.delta, ~A.accepting, A.initial, canonical=A.canonical)


def erase_track(A: Dfa, i: int) -> Nfa:
    """NFA over the remaining tracks guessing the digit of track ``i`` (1-based)."""
    if A.tracks < 2:
        raise ValueError("cannot erase the only track")
    if not 1 <= i <= A.tracks:
        raise IndexError(f"track {i} out of range 1..{A.tracks}")
    k, t = A.base, A.tracks
    # full symbol index for each (projected symbol, erased digit)
    sub = DigitAlphabet(k, t - 1)
    full = np.empty((sub.size, k), dtype=np.int64)
    for ps in range(sub.size):
        rest = list(sub.digits(ps))
        for d in range(k):
            digits = rest[: i - 1] + [d] + rest[i - 1:]
            full[ps, d] = sum(x * k ** (t - 1 - j) for j, x in enumerate(digits))
    idx = A.delta[:, full].reshape(-1)
    ptr = np.arange(0, idx.size + 1, k)
    return Nfa(k, t - 1, A.n_states, ptr, idx, [A.initial], A.accepting)


def project_and_determinize(A: Dfa, i: int, state_cap=None) -> Dfa:
    """Existentially quantify track ``i`` (1-based)."""
    return minimize(erase_track(A, i).determinize(state_cap))


def zero_closure(A: Dfa, state_cap=None) -> Dfa:
    """Accepts w iff ``0^s w`` is accepted by A for some s >= 0."""
    idx = A.delta.reshape(-1)
    ptr = np.arange(idx.size + 1)
    nfa = Nfa(A.base, A.tracks, A.n_states, ptr, idx, [A.initial], A.accepting)
    return minimize(nfa.determinize(state_cap))


def is_leading_zero_invariant(A: Dfa) -> bool:
    M = minimize(A)
    return int(M.delta[M.initial, 0]) == M.initial


def insert_tracks(A: Dfa, total: int, positions: Sequence[int]) -> Dfa:
    """Cylindrify: the result has ``total`` tracks and the old track j sits at
    ``positions[j]`` (0-based); the other tracks are unconstrained."""
    if len(positions) != A.tracks or len(set(positions)) != A.tracks:
        raise ValueError("positions must name one distinct slot per existing track")
    k = A.base
    big = DigitAlphabet(k, total)
    digits = np.array(big.symbols(), dtype=np.int64).reshape(big.size, total)
    old = np.zeros(big.size, dtype=np.int64)
    for p in positions:
        old = old * k + digits[:, p]
    return Dfa(k, total, A.delta[:, old], A.accepting, A.initial)


def permute_tracks(A: Dfa, order: Sequence[int]) -> Dfa:
    """New track j is old track ``order[j]`` (0-based)."""
    if sorted(order) != list(range(A.tracks)):
        raise ValueError(f"{order} is not a permutation of {A.tracks} tracks")
    if list(order) == list(range(A.tracks)):
        return A
    k, t = A.base, A.tracks
    alpha = DigitAlphabet(k, t)
    digits = np.array(alpha.symbols(), dtype=np.int64).reshape(alpha.size, t)
    # column for new symbol s: old symbol whose track order[j] digit is s's digit j
    old = np.zeros(alpha.size, dtype=np.int64)
    inv = np.argsort(order)
    for j in range(t):
        old = old * k + digits[:, inv[j]]
    return minimize(Dfa(k, t, A.delta[:, old], A.accepting, A.initial))


def is_empty(A: Dfa) -> bool:
    reach = kernels.bfs_order(A.delta, A.initial)
    return not A.accepting[reach].any()


def equivalent(A: Dfa, B: Dfa) -> bool:
    _check_same_alphabet(A, B)
    return minimize(A) == minimize(B)


def shortest_witness(A: Dfa) -> TrackWord | None:
    """Shortest accepted word, lexicographically least among those."""
    parent = {A.initial: None}
    queue = deque([A.initial])
    K = A.delta.shape[1]
    hit = None
    while queue:
        q = queue.popleft()
        if A.accepting[q]:
            hit = q
            break
        for a in range(K):
            r = int(A.delta[q, a])
            if r not in parent:
                parent[r] = (q, a)
                queue.append(r)
    if hit is None:
        return None
    syms = []
    while parent[hit] is not None:
        hit, a = parent[hit]
        syms.append(a)
    alpha = A.alphabet
    return TrackWord(A.base, A.tracks, tuple(alpha.digits(a) for a in reversed(syms)))


def coaccessible(A: Dfa) -> np.ndarray:
    """Boolean mask of states from which an accepting state is reachable."""
    n = A.n_states
    good = A.accepting.copy()
    while True:
        nxt = good | good[A.delta].any(axis=1)
        if np.array_equal(nxt, good):
            return good
        good = nxt


def minimize_dfao(M: Dfao) -> Dfao:
    order = kernels.bfs_order(M.delta, M.initial)
    rank = np.full(M.n_states, -1, dtype=np.int64)
    rank[order] = np.arange(order.size)
    d = rank[M.delta[order]]
    out = M.outputs[order]
    _, lab = np.unique(out, return_inverse=True)
    classes, count = kernels.refine(d.astype(np.int32), lab.astype(np.int32).ravel())
    classes = np.asarray(classes, dtype=np.int64)
    qdelta = np.empty((count, d.shape[1]), dtype=np.int64)
    qdelta[classes] = classes[d]
    qout = np.zeros(count, dtype=np.int64)
    qout[classes] = out
    order2 = kernels.bfs_order(qdelta.astype(np.int32), int(classes[0]))
    rank2 = np.empty(count, dtype=np.int64)
    rank2[order2] = np.arange(count)
    return Dfao(M.base, rank2[qdelta[order2]], qout[order2], 0, name=M.name)


def dfao_is_leading_zero_invariant(M: Dfao) -> bool:
    m = minimize_dfao(M)
    return int(m.delta[m.initial, 0]) == m.initial


# -- text format ---------------------------------------------------------


def dumps(A, vars: Sequence[str] | None = None, meta: dict | None = None) -> str:
    """Serialise a Dfa or Dfao in the line-oriented text format."""
    out = io.StringIO()
    for key, value in (meta or {}).items():
        out.write(f"# {key} {value}\n")
    is_dfao = isinstance(A, Dfao)
    tracks = 1 if is_dfao else A.tracks
    out.write(f"base {A.base} tracks {tracks}\n")
    if vars is not None:
        out.write("vars " + " ".join(vars) + "\n")
    out.write(f"states {A.n_states} initial {A.initial}\n")
    if is_dfao:
        out.write("accepting\n")
    else:
        out.write(" ".join(["accepting"] + [str(q) for q in np.flatnonzero(A.accepting)]) + "\n")
    alpha = DigitAlphabet(A.base, tracks)
    labels = ["[" + ",".join(map(str, alpha.digits(a))) + "]" for a in range(alpha.size)]
    for q in range(A.n_states):
        for a, r in enumerate(A.delta[q].tolist()):
            out.write(f"{q} {labels[a]} {r}\n")
    if is_dfao:
        for q, v in enumerate(A.outputs.tolist()):
            out.write(f"output {q} {v}\n")
    return out.getvalue()


def loads(text: str):
    """Parse the text format.  Returns ``(automaton, vars, meta)`` where the
    automaton is a Dfao when ``output`` lines are present."""
    meta = {}
    base = tracks = n = initial = None
    vars = None
    accepting = None
    trans = []
    outputs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].strip().split(None, 1)
            if parts:
                meta[parts[0]] = parts[1] if len(parts) > 1 else ""
            continue
        fields = line.split()
        try:
            if fields[0] == "base":
                if len(fields) != 4 or fields[2] != "tracks":
                    raise MalformedInput("expected 'base k tracks t'")
                base, tracks = int(fields[1]), int(fields[3])
            elif fields[0] == "vars":
                vars = fields[1:]
            elif fields[0] == "states":
                if len(fields) != 4 or fields[2] != "initial":
                    raise MalformedInput("expected 'states N initial q0'")
                n, initial = int(fields[1]), int(fields[3])
            elif fields[0] == "accepting":
                accepting = [int(x) for x in fields[1:]]
            elif fields[0] == "output":
                outputs[int(fields[1])] = int(fields[2])
            else:
                if len(fields) != 3:
                    raise MalformedInput("expected 'q [d1,...,dt] q2'")
                label = fields[1]
                if not (label.startswith("[") and label.endswith("]")):
                    raise MalformedInput(f"bad symbol {label!r}")
                digits = tuple(int(x) for x in label[1:-1].split(","))
                trans.append((int(fields[0]), digits, int(fields[2])))
        except (ValueError, IndexError) as exc:
            raise MalformedInput(f"line {lineno}: {exc}") from None
    if base is None or n is None:
        raise MalformedInput("missing 'base' or 'states' header")
    alpha = DigitAlphabet(base, tracks)
    delta = np.full((n + 1, alpha.size), -1, dtype=np.int64)
    for q, digits, r in trans:
        if not (0 <= q < n and 0 <= r < n):
            raise MalformedInput(f"transition {q} -> {r} refers to a missing state")
        delta[q, alpha.index(digits)] = r
    if outputs:
        if tracks != 1:
            raise MalformedInput("a DFAO must have exactly one track")
        if (delta[:n] < 0).any():
            raise MalformedInput("DFAO transitions must be total")
        if sorted(outputs) != list(range(n)):
            raise MalformedInput("every DFAO state needs an output")
        out = [outputs[q] for q in range(n)]
        return Dfao(base, delta[:n], out, initial, name=meta.get("name")), vars, meta
    acc = np.zeros(n + 1, dtype=bool)
    for q in accepting or []:
        if not 0 <= q < n:
            raise MalformedInput(f"accepting state {q} does not exist")
        acc[q] = True
    if (delta[:n] < 0).any():
        # missing transitions go to an explicit sink
        delta[delta < 0] = n
        return Dfa(base, tracks, delta, acc, initial), vars, meta
    return Dfa(base, tracks, delta[:n], acc[:n], initial), vars, meta


def to_dot(A, name="M", vars: Sequence[str] | None = None) -> str:
    """Graphviz rendering; for a Dfa the dead states are left out."""
    is_dfao = isinstance(A, Dfao)
    tracks = 1 if is_dfao else A.tracks
    alpha = DigitAlphabet(A.base, tracks)
    keep = np.ones(A.n_states, dtype=bool) if is_dfao else coaccessible(A)
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=circle];', '  start [shape=point];']
    if vars:
        lines.append(f'  label="tracks: {", ".join(vars)}";')
    for q in range(A.n_states):
        if not keep[q]:
            continue
        if is_dfao:
            lines.append(f'  q{q} [label="{q}/{A.outputs[q]}"];')
        elif A.accepting[q]:
            lines.append(f"  q{q} [shape=doublecircle];")
        else:
            lines.append(f"  q{q};")
    if keep[A.initial]:
        lines.append(f"  start -> q{A.initial};")
    for q in range(A.n_states):
        if not keep[q]:
            continue
        by_target: dict[int, list[str]] = {}
        for a, r in enumerate(A.delta[q].tolist()):
            if keep[r]:
                by_target.setdefault(r, []).append("[" + ",".join(map(str, alpha.digits(a))) + "]")
        for r, labs in by_target.items():
            lines.append(f'  q{q} -> q{r} [label="{" ".join(labs)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
