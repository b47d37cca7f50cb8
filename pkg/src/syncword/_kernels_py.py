"""Pure numpy/Python versions of the automaton kernels.

Every function here has a compiled twin in ``_kernels.pyx`` with the same
signature and the same results up to state numbering (``bfs_order`` and
``product`` numbering is identical; ``refine`` class ids may differ).
"""

import numpy as np

from .errors import StateCapExceeded


def product(d1, d2, i1, i2, cap):
    """Reachable part of the product of two complete transition tables.

    Returns ``(delta, pairs)`` with state 0 = ``(i1, i2)`` and states in
    BFS order.
    """
    d1 = np.ascontiguousarray(d1, dtype=np.int64)
    d2 = np.ascontiguousarray(d2, dtype=np.int64)
    n2 = d2.shape[0]
    start = i1 * n2 + i2
    seen = {start: 0}
    codes = [start]
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        p, q = np.divmod(frontier, n2)
        succ = (d1[p] * n2 + d2[q]).ravel()
        new = []
        for c in succ.tolist():
            if c not in seen:
                seen[c] = len(codes)
                codes.append(c)
                new.append(c)
        if len(codes) > cap:
            raise StateCapExceeded(f"product exceeded state cap {cap}")
        frontier = np.array(new, dtype=np.int64)
    codes = np.array(codes, dtype=np.int64)
    p, q = np.divmod(codes, n2)
    succ = d1[p] * n2 + d2[q]
    order = np.argsort(codes)
    ranks = order[np.searchsorted(codes[order], succ)]
    pairs = np.stack([p, q], axis=1)
    return ranks.astype(np.int32), pairs


def _bits(m):
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def determinize(ptr, idx, n, K, init, accepting, cap):
    """Subset construction from CSR successor lists.

    ``idx[ptr[s*K + a]:ptr[s*K + a + 1]]`` are the successors of state s on
    symbol a.  Returns ``(delta, acc)``; subset 0 is ``init``.
    """
    ptr = np.asarray(ptr).tolist()
    idx = np.asarray(idx).tolist()
    masks = [0] * (n * K)
    for sa in range(n * K):
        m = 0
        for t in idx[ptr[sa]:ptr[sa + 1]]:
            m |= 1 << t
        masks[sa] = m
    acc_mask = 0
    for s in np.flatnonzero(np.asarray(accepting)).tolist():
        acc_mask |= 1 << s
    start = 0
    for s in np.asarray(init).tolist():
        start |= 1 << s
    ids = {start: 0}
    subsets = [start]
    members = [_bits(start)]
    rows = []
    j = 0
    while j < len(subsets):
        mem = members[j]
        row = []
        for a in range(K):
            m = 0
            for s in mem:
                m |= masks[s * K + a]
            t = ids.get(m)
            if t is None:
                t = len(subsets)
                if t >= cap:
                    raise StateCapExceeded(f"subset construction exceeded state cap {cap}")
                ids[m] = t
                subsets.append(m)
                members.append(_bits(m))
            row.append(t)
        rows.append(row)
        j += 1
    delta = np.array(rows, dtype=np.int32).reshape(len(subsets), K)
    acc = np.array([(m & acc_mask) != 0 for m in subsets], dtype=np.uint8)
    return delta, acc


def refine(delta, labels):
    """Coarsest partition refining ``labels`` that is stable under ``delta``
    (Moore's iteration).  Returns ``(classes, count)``."""
    delta = np.asarray(delta)
    _, cls = np.unique(np.asarray(labels), return_inverse=True)
    cls = cls.ravel()
    count = int(cls.max()) + 1 if cls.size else 0
    while True:
        sig = np.column_stack([cls, cls[delta]])
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        c = int(new.max()) + 1 if new.size else 0
        if c == count:
            return new.astype(np.int32), c
        cls, count = new, c


def bfs_order(delta, initial):
    """Reachable states in breadth-first order, successors scanned by
    increasing symbol index."""
    delta = np.asarray(delta)
    seen = np.zeros(delta.shape[0], dtype=bool)
    seen[initial] = True
    frontier = np.array([initial], dtype=np.int64)
    levels = [frontier]
    while frontier.size:
        succ = delta[frontier].ravel()
        succ = succ[~seen[succ]]
        if not succ.size:
            break
        _, first = np.unique(succ, return_index=True)
        frontier = succ[np.sort(first)]
        seen[frontier] = True
        levels.append(frontier)
    return np.concatenate(levels).astype(np.int32)
