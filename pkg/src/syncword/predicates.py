"""First-order predicates over integer variables, compiled to automata.

A :class:`Relation` is a Dfa whose tracks are bound to variable names.  Tracks
are always kept in lexicographic order of the names, and every combinator
returns a minimized automaton, so equal predicates built along different
routes end up with identical tables.

The atoms are addition, comparison, constants and indexing into an automatic
sequence; :func:`combine`, :func:`negate` and :func:`quantify` close them
under the usual connectives.
"""

from __future__ import annotations

import functools
from typing import Sequence

import numpy as np

from . import automata as fa
from .automata import Dfa, Dfao
from .errors import AlphabetMismatch
from .numeration import encode_base_k


class Relation:
    __slots__ = ("dfa", "vars")

    def __init__(self, dfa: Dfa, vars: Sequence[str]):
        vars = list(vars)
        if len(vars) != dfa.tracks:
            raise ValueError(f"{len(vars)} names for {dfa.tracks} tracks")
        if len(set(vars)) != len(vars):
            dfa, vars = _merge_repeated(dfa, vars)
        order = sorted(range(len(vars)), key=vars.__getitem__)
        self.dfa = fa.permute_tracks(dfa, order) if order != list(range(len(vars))) else fa.minimize(dfa)
        self.vars = tuple(vars[j] for j in order)

    @property
    def base(self):
        return self.dfa.base

    def holds(self, **values: int) -> bool:
        if set(values) != set(self.vars):
            raise ValueError(f"need values for exactly {self.vars}, got {sorted(values)}")
        return self.dfa.accepts_values(*(values[v] for v in self.vars))

    __call__ = holds

    def rename(self, **mapping: str) -> "Relation":
        unknown = set(mapping) - set(self.vars)
        if unknown:
            raise KeyError(f"unknown variables {sorted(unknown)}")
        return Relation(self.dfa, [mapping.get(v, v) for v in self.vars])

    def to_dfa(self, order: Sequence[str]) -> Dfa:
        if sorted(order) != list(self.vars):
            raise ValueError(f"{order} is not an ordering of {self.vars}")
        return fa.permute_tracks(self.dfa, [self.vars.index(v) for v in order])

    def cylindrify(self, vars: Sequence[str]) -> Dfa:
        """The automaton over the sorted superset ``vars``."""
        vars = sorted(vars)
        return fa.insert_tracks(self.dfa, len(vars), [vars.index(v) for v in self.vars])

    def is_empty(self) -> bool:
        return fa.is_empty(self.dfa)

    def equivalent(self, other: "Relation") -> bool:
        return self.vars == other.vars and fa.equivalent(self.dfa, other.dfa)

    @property
    def n_states(self):
        return self.dfa.n_states

    def __repr__(self):
        return f"Relation({', '.join(self.vars)}; {self.dfa.n_states} states)"


def _merge_repeated(dfa: Dfa, vars: list[str]):
    """A name used on several tracks means those tracks carry equal values."""
    digits = np.array(dfa.alphabet.symbols(), dtype=np.int64).reshape(-1, dfa.tracks)
    ok = np.ones(digits.shape[0], dtype=bool)
    for v in set(vars):
        cols = [j for j, w in enumerate(vars) if w == v]
        ok &= (digits[:, cols] == digits[:, cols[:1]]).all(axis=1)
    dead = dfa.n_states
    delta = np.vstack([np.where(ok, dfa.delta, dead), np.full(ok.size, dead)])
    out = Dfa(dfa.base, dfa.tracks, delta, np.append(dfa.accepting, False), dfa.initial)
    keep = []
    for j in reversed(range(len(vars))):
        if vars[j] in vars[:j]:
            out = fa.project_and_determinize(out, j + 1)
        else:
            keep.append(vars[j])
    return out, keep[::-1]


# -- atoms -----------------------------------------------------------------


def rel_add(k: int, a="a", b="b", c="c") -> Relation:
    """a + b = c, read most significant digit first.  The state is the carry
    that the not-yet-read low-order digits must produce."""

    def step(carry, digits):
        da, db, dc = digits
        nxt = dc + k * carry - da - db
        return nxt if nxt in (0, 1) else None

    return Relation(fa.from_step(k, 3, 0, lambda r: r == 0, step), [a, b, c])


_CMP_ACCEPT = {
    "<": {"lt"},
    "<=": {"lt", "eq"},
    "=": {"eq"},
    "!=": {"lt", "gt"},
    ">": {"gt"},
    ">=": {"gt", "eq"},
}


def rel_compare(k: int, cmp: str, a="a", b="b") -> Relation:
    try:
        good = _CMP_ACCEPT[cmp]
    except KeyError:
        raise ValueError(f"unknown comparison {cmp!r}") from None

    def step(state, digits):
        if state != "eq":
            return state
        da, db = digits
        return "eq" if da == db else ("lt" if da < db else "gt")

    return Relation(fa.from_step(k, 2, "eq", lambda s: s in good, step), [a, b])


def rel_const(k: int, value: int, var="a") -> Relation:
    rep = encode_base_k(value, k)

    def step(i, digits):
        (d,) = digits
        if i == 0 and d == 0:
            return 0
        if i < len(rep) and rep[i] == d:
            return i + 1
        return None

    return Relation(fa.from_step(k, 1, 0, lambda i: i == len(rep), step), [var])


def rel_true(k: int, vars: Sequence[str]) -> Relation:
    return Relation(fa.universal(k, len(vars)), vars)


def rel_succ(k: int, a="a", b="b") -> Relation:
    """b = a + 1."""
    return exists(conj(rel_add(k, a, "_one", b), rel_const(k, 1, "_one")), "_one")


def seq_eq_positions(x: Dfao, u="u", v="v") -> Relation:
    """x[u] = x[v]: two copies of x run in lockstep."""
    k = x.base

    def step(pq, digits):
        p, q = pq
        return int(x.delta[p, digits[0]]), int(x.delta[q, digits[1]])

    out = x.outputs
    dfa = fa.from_step(k, 2, (x.initial, x.initial), lambda pq: out[pq[0]] == out[pq[1]], step)
    return Relation(dfa, [u, v])


def seq_letter_at(x: Dfao, u="u", a: int = 0) -> Relation:
    if a not in x.letters:
        raise ValueError(f"letter {a!r} is not an output of the automaton (outputs {x.letters})")
    return Relation(x.as_dfa(a), [u])


# -- connectives -------------------------------------------------------------


def combine(P: Relation, Q: Relation, op: str = "and") -> Relation:
    if P.base != Q.base:
        raise AlphabetMismatch(f"bases differ: {P.base} vs {Q.base}")
    if op not in ("and", "or", "andnot", "xor"):
        raise ValueError(f"unknown connective {op!r}")
    vars = sorted(set(P.vars) | set(Q.vars))
    dfa = fa.boolean_combine(P.cylindrify(vars), Q.cylindrify(vars), op)
    return Relation(dfa, vars)


def conj(*rels: Relation) -> Relation:
    out = rels[0]
    for r in rels[1:]:
        out = combine(out, r, "and")
    return out


def disj(*rels: Relation) -> Relation:
    out = rels[0]
    for r in rels[1:]:
        out = combine(out, r, "or")
    return out


def negate(P: Relation) -> Relation:
    return Relation(fa.complement(P.dfa), P.vars)


def quantify(P: Relation, v: str, q: str = "exists") -> Relation:
    if v not in P.vars:
        raise KeyError(f"{v!r} is not a variable of {P}")
    if len(P.vars) == 1:
        raise ValueError("quantifying the last variable leaves a sentence; use is_empty()")
    if q == "forall":
        return negate(quantify(negate(P), v, "exists"))
    if q != "exists":
        raise ValueError(f"unknown quantifier {q!r}")
    track = P.vars.index(v) + 1
    rest = [w for w in P.vars if w != v]
    return Relation(fa.project_and_determinize(P.dfa, track), rest)


def exists(P: Relation, *vs: str) -> Relation:
    for v in vs:
        P = quantify(P, v, "exists")
    return P


def forall(P: Relation, *vs: str) -> Relation:
    for v in vs:
        P = quantify(P, v, "forall")
    return P


def implies(P: Relation, Q: Relation) -> Relation:
    return combine(negate(P), Q, "or")


# -- sequence predicates ---------------------------------------------------


@functools.lru_cache(maxsize=64)
def pred_mismatch_exists(x: Dfao) -> Relation:
    """(i, j, n): some m < n has x[i+m] != x[j+m]."""
    k = x.base
    diff = negate(seq_eq_positions(x, "a", "b"))
    at_b = exists(conj(rel_add(k, "i", "m", "a"), diff), "a")  # x[i+m] != x[b]
    both = exists(conj(at_b, rel_add(k, "j", "m", "b")), "b")  # x[i+m] != x[j+m]
    return exists(conj(both, rel_compare(k, "<", "m", "n")), "m")


@functools.lru_cache(maxsize=64)
def pred_factor_eq(x: Dfao) -> Relation:
    """(i, j, n): x[i..i+n-1] = x[j..j+n-1]."""
    return negate(pred_mismatch_exists(x))


@functools.lru_cache(maxsize=64)
def pred_novel(x: Dfao, style: str = "exists") -> Relation:
    """(n, i): the occurrence x[i..i+n-1] is the leftmost one of its factor.

    ``style="exists"`` builds  not exists j < i with equal factors;
    ``style="forall"`` builds  forall j (j < i implies a mismatch below n).
    """
    k = x.base
    if style == "exists":
        earlier = conj(pred_factor_eq(x), rel_compare(k, "<", "j", "i"))
        return negate(exists(earlier, "j"))
    if style == "forall":
        body = implies(rel_compare(k, "<", "j", "i"), pred_mismatch_exists(x))
        return forall(body, "j")
    raise ValueError(f"unknown style {style!r}")


@functools.lru_cache(maxsize=64)
def pred_power_len(x: Dfao) -> Relation:
    """(i, n): x[i..i+n-1] is a power.

    Uses ``w = yz = zy`` with ``|y| = d``: w has period d and its length-d
    suffix equals its length-d prefix.
    """
    k = x.base
    feq = pred_factor_eq(x)
    # x[i..i+n-d-1] = x[i+d..i+n-1]
    shifted = exists(conj(feq.rename(j="p", n="l"), rel_add(k, "i", "d", "p")), "p")
    period = exists(conj(shifted, rel_add(k, "l", "d", "n")), "l")
    # x[i+n-d..i+n-1] = x[i..i+d-1]
    tail = exists(conj(feq.rename(i="q", j="i", n="d"), rel_add(k, "q", "d", "r")), "q")
    border = exists(conj(tail, rel_add(k, "i", "n", "r")), "r")
    bounds = conj(negate(rel_const(k, 0, "d")), rel_compare(k, "<", "d", "n"))
    return exists(conj(bounds, period, border), "d")


@functools.lru_cache(maxsize=64)
def pred_is_power(x: Dfao) -> Relation:
    """(i, j): x[i..j] is a power."""
    k = x.base
    ends = conj(pred_power_len(x), rel_add(k, "i", "n", "s"), rel_succ(k, "j", "s"))
    return exists(ends, "n", "s")


@functools.lru_cache(maxsize=64)
def pred_novel_power(x: Dfao) -> Relation:
    """(n, i): x[i..i+n-1] is a power and this is its leftmost occurrence."""
    return conj(pred_power_len(x), pred_novel(x))
