"""Synchronized automata for counting functions of automatic sequences.

The central construction counts ``|{i : pos(n, i)}|`` for a position
predicate whose true positions form a bounded number of contiguous blocks:
blocks are chained left to right by a fixed-point iteration, summing their
lengths on an accumulator track.  Subword complexity is the count of novel
occurrences; the power count is the count of novel occurrences of powers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import automata as fa
from .automata import Dfa, Dfao
from .errors import BrokenInvariant, DomainError, IterationCapExceeded
from .numeration import decode_base_k, encode_base_k
from .predicates import (
    Relation,
    conj,
    disj,
    exists,
    negate,
    pred_factor_eq,
    pred_novel,
    pred_novel_power,
    rel_add,
    rel_compare,
    rel_const,
    rel_succ,
    rel_true,
)

log = logging.getLogger(__name__)

DEFAULT_ITER_CAP = 64


@dataclass
class SyncFunction:
    """Graph of f as a 2-track Dfa; track 1 is n, track 2 is f(n)."""

    graph: Dfa
    domain_floor: int = 0
    name: str | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.graph.tracks != 2:
            raise ValueError("a synchronized function graph has exactly two tracks")

    @property
    def base(self):
        return self.graph.base

    def relation(self, n="n", m="m") -> Relation:
        return Relation(self.graph, [n, m])

    def __call__(self, n: int) -> int:
        return eval_sync(self, n)


@dataclass
class BlockAutomaton:
    """``relation`` over (e, l, n, s): the first block of positions at or
    after s ends at e and has length l; (n, s, s, 0) when there is none.

    ``advance`` over (f, l, n, s) is the same block reported by the position
    just past its end (f = e + 1), restricted to l >= 1.  ``none_from`` over
    (a, n) says no position >= a satisfies the predicate.
    """

    relation: Relation
    advance: Relation
    none_from: Relation


@dataclass
class BlockCountDfao:
    dfao: Dfao
    bound: int


def _pos_vars(pos: Relation):
    if pos.vars != ("i", "n"):
        raise ValueError(f"position predicate must be over (i, n), got {pos.vars}")


def build_block_automaton(pos: Relation) -> BlockAutomaton:
    _pos_vars(pos)
    k = pos.base
    le = lambda a, b: rel_compare(k, "<=", a, b)  # noqa: E731
    lt = lambda a, b: rel_compare(k, "<", a, b)  # noqa: E731
    npos = negate(pos)
    # no position in [a, b) / every position in [a, b) / none at or after a
    none_in = negate(exists(conj(le("a", "i"), lt("i", "b"), pos), "i"))
    all_in = negate(exists(conj(le("a", "i"), lt("i", "b"), npos), "i"))
    none_from = negate(exists(conj(le("a", "i"), pos), "i"))

    start = conj(le("s", "b"), none_in.rename(a="s"))  # b is the first hit at/after s
    body = conj(lt("b", "f"), all_in.rename(a="b", b="f"), npos.rename(i="f"))
    advance = exists(conj(start, body, rel_add(k, "b", "l", "f")), "b")

    ends = exists(conj(advance, rel_succ(k, "e", "f")), "f")
    empty = conj(rel_const(k, 0, "l"), rel_compare(k, "=", "e", "s"), none_from.rename(a="s"))
    return BlockAutomaton(disj(ends, empty), advance, none_from)


def _graph_from(rel: Relation, zero_value: int | None, name=None, info=None) -> SyncFunction:
    """Wrap a relation over (m, n); optionally replace the n = 0 row."""
    k = rel.base
    if zero_value is not None:
        rest = conj(rel, negate(rel_const(k, 0, "n")))
        rel = disj(rest, conj(rel_const(k, 0, "n"), rel_const(k, zero_value, "m")))
    return SyncFunction(rel.to_dfa(["n", "m"]), 0, name, info or {})


def build_count_sync(
    pos: Relation,
    zero_value: int | None = None,
    iter_cap: int = DEFAULT_ITER_CAP,
    blocks: BlockAutomaton | None = None,
    name: str | None = None,
) -> SyncFunction:
    """Graph of n -> |{i : pos(n, i)}|.

    The chain relation M(n, S, p) holds when some run of whole blocks,
    starting from position 0, has total length S and resumes scanning at p.
    It starts as {(n, 0, 0)} and grows by one block per round until it stops
    changing.  The final count needs a certificate that nothing is left at or
    after p.
    """
    _pos_vars(pos)
    k = pos.base
    blocks = blocks or build_block_automaton(pos)
    step = blocks.advance.rename(s="p", f="q")
    adder = rel_add(k, "u", "l", "S")
    M = conj(rel_const(k, 0, "S"), rel_const(k, 0, "p"), rel_true(k, ["n"]))
    chain = [M]
    for it in range(1, iter_cap + 1):
        grown = exists(conj(M.rename(S="u"), step), "p")
        grown = exists(conj(grown, adder), "u", "l").rename(q="p")
        nxt = disj(M, grown)
        log.debug("count iteration %d: %d states", it, nxt.n_states)
        if nxt.equivalent(M):
            break
        M = nxt
        chain.append(M)
    else:
        raise IterationCapExceeded(
            f"block chaining did not stabilise within {iter_cap} iterations; the predicate "
            "probably has an unbounded number of blocks (as for the concatenation of all "
            "binary expansions 1 10 11 100 ...)"
        )
    final = exists(conj(M, blocks.none_from.rename(a="p")), "p").rename(S="m")
    info = {"iterations": it, "chain": chain, "chain_states": [r.n_states for r in chain]}
    return _graph_from(final, zero_value, name, info)


def build_rho_sync(x: Dfao, iter_cap: int = DEFAULT_ITER_CAP) -> SyncFunction:
    """Subword complexity: number of distinct length-n factors."""
    return build_count_sync(pred_novel(x), zero_value=1, iter_cap=iter_cap, name="complexity")


def build_power_count_sync(x: Dfao, iter_cap: int = DEFAULT_ITER_CAP) -> SyncFunction:
    return build_count_sync(pred_novel_power(x), zero_value=0, iter_cap=iter_cap, name="powers")


def build_primitive_count_sync(
    x: Dfao,
    rho: SyncFunction | None = None,
    powers: SyncFunction | None = None,
    iter_cap: int = DEFAULT_ITER_CAP,
) -> SyncFunction:
    """Number of distinct primitive length-n factors, as rho - powers."""
    rho = rho or build_rho_sync(x, iter_cap)
    powers = powers or build_power_count_sync(x, iter_cap)
    k = x.base
    both = conj(rho.relation("n", "a"), powers.relation("n", "b"), rel_add(k, "m", "b", "a"))
    return _graph_from(exists(both, "a", "b"), None, "primitive")


def build_appearance_sync(x: Dfao) -> SyncFunction:
    """alpha(n) = m iff every length-n factor occurs at some j <= m, and the
    occurrence at m is the first of its factor."""
    k = x.base
    seen_by_m = exists(conj(rel_compare(k, "<=", "j", "m"), pred_factor_eq(x)), "j")  # (i, m, n)
    covers = negate(exists(negate(seen_by_m), "i"))
    fresh = pred_novel(x).rename(i="m")
    return _graph_from(conj(covers, fresh), None, "appearance")


def build_block_count_dfao(
    x: Dfao, pos: Relation | None = None, iter_cap: int = DEFAULT_ITER_CAP
) -> BlockCountDfao:
    """DFAO whose output at n is the number of maximal blocks of {i : pos(n, i)}
    (novel occurrences by default)."""
    pos = pos if pos is not None else pred_novel(x)
    _pos_vars(pos)
    k = pos.base
    blocks = build_block_automaton(pos)
    step = exists(blocks.advance.rename(s="p", f="q"), "l")
    done = blocks.none_from.rename(a="p")
    K = conj(rel_const(k, 0, "p"), rel_true(k, ["n"]))  # (n, p): i blocks consumed, resume at p
    exact = []
    for i in range(iter_cap + 1):
        exact.append(exists(conj(K, done), "p").dfa)
        K = exists(conj(K, step), "p").rename(q="p")
        if K.is_empty():
            break
    else:
        raise IterationCapExceeded(f"more than {iter_cap} blocks; the block count is not bounded")
    bound = max(i for i, X in enumerate(exact) if not fa.is_empty(X))

    delta = exact[0].delta
    init = exact[0].initial
    labels = np.where(exact[0].accepting, 0, -1)
    for i, X in enumerate(exact[1:], 1):
        delta, pairs = fa.kernels.product(delta, X.delta, init, X.initial, fa._cap(None))
        init = 0
        old = labels[pairs[:, 0]]
        hit = X.accepting[pairs[:, 1]]
        if (hit & (old >= 0)).any():
            raise BrokenInvariant("block counts overlap; the exact-count languages must be disjoint")
        labels = np.where(hit, i, old)
    if (labels < 0).any():
        raise BrokenInvariant("some n has no block count")
    M = fa.minimize_dfao(Dfao(k, delta, labels, init, name="blockcount"))
    return BlockCountDfao(M, bound)


# -- evaluation --------------------------------------------------------------


class EvalStats:
    """Counts layered-graph edges examined by :func:`eval_sync`."""

    def __init__(self):
        self.edges = 0
        self.layers = 0


def eval_sync(F: SyncFunction, n: int, stats: EvalStats | None = None) -> int:
    """f(n) by a backward layered search over the graph automaton.

    Layer t holds the states from which the rest of the first-track word
    ``0^s (n)_k`` can be read into acceptance.  The padding s grows from 0
    until the initial state is reached; the second-track digits are then read
    off forwards and must be forced at every step.
    """
    if n < F.domain_floor:
        raise DomainError(f"{n} is below the domain floor {F.domain_floor}")
    G = F.graph
    k = G.base
    Q = G.n_states
    w = encode_base_k(n, k)
    cols = np.arange(k)
    layer = G.accepting.copy()
    layers = [layer]
    edges = 0
    for d in reversed(w):
        layer = layer[G.delta[:, d * k + cols]].any(axis=1)
        layers.append(layer)
        edges += Q * k
    pad = 0
    while not layer[G.initial]:
        if pad >= Q:
            raise DomainError(f"no value accepted for n={n}")
        layer = layer[G.delta[:, cols]].any(axis=1)
        layers.append(layer)
        edges += Q * k
        pad += 1
    first = (0,) * pad + w
    layers.reverse()  # layers[t] covers first[t:]
    q = G.initial
    digits = []
    for t, d in enumerate(first):
        nxt = G.delta[q, d * k + cols]
        ok = np.flatnonzero(layers[t + 1][nxt])
        edges += k
        if ok.size != 1:
            raise BrokenInvariant(f"{ok.size} admissible digits at position {t} for n={n}")
        digits.append(int(ok[0]))
        q = int(nxt[ok[0]])
    if stats is not None:
        stats.edges += edges
        stats.layers += len(first) + 1
    return decode_base_k(digits, k)


def values_at(F: SyncFunction, n: int) -> Dfa:
    """Single-track automaton for {m : (n, m) accepted}, obtained by
    intersecting the graph with the constraint fixing the first track."""
    fixed = fa.insert_tracks(rel_const(F.base, n, "n").dfa, 2, [0])
    return fa.project_and_determinize(fa.boolean_combine(F.graph, fixed, "and"), 1)


def value_by_intersection(F: SyncFunction, n: int) -> int:
    w = fa.shortest_witness(values_at(F, n))
    if w is None:
        raise DomainError(f"no value accepted for n={n}")
    return decode_base_k([s[0] for s in w.symbols], F.base)


def check_function_graph(F: SyncFunction, N: int) -> bool:
    """True iff every n in [domain_floor, N] has exactly one accepted value."""
    k = F.base
    for n in range(F.domain_floor, N + 1):
        vals = values_at(F, n)
        w = fa.shortest_witness(vals)
        if w is None:
            return False
        v = decode_base_k([s[0] for s in w.symbols], k)
        if not fa.is_empty(fa.boolean_combine(vals, rel_const(k, v, "m").dfa, "andnot")):
            return False
    return True


def ratio_extremes(F: SyncFunction, N: int) -> tuple[Fraction, Fraction]:
    """Exact (min, max) of f(n)/n over 1 <= n <= N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    ratios = [Fraction(eval_sync(F, n), n) for n in range(max(1, F.domain_floor), N + 1)]
    return min(ratios), max(ratios)


def sync_from_pairs(k: int, pairs, name=None) -> SyncFunction:
    """Graph of a finite partial function, mainly for tests and fault injection."""
    rels = [conj(rel_const(k, n, "n"), rel_const(k, m, "m")) for n, m in pairs]
    return SyncFunction(disj(*rels).to_dfa(["n", "m"]), 0, name)
