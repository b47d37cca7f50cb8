# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled automaton kernels; see ``_kernels_py`` for the reference versions."""

from libc.stdint cimport int32_t, int64_t, uint8_t
from libcpp.algorithm cimport sort
from libcpp.string cimport string
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from cython.operator cimport dereference as deref

import numpy as np

from .errors import StateCapExceeded


def product(d1, d2, Py_ssize_t i1, Py_ssize_t i2, Py_ssize_t cap):
    cdef const int32_t[:, ::1] a = np.ascontiguousarray(d1, dtype=np.int32)
    cdef const int32_t[:, ::1] b = np.ascontiguousarray(d2, dtype=np.int32)
    cdef Py_ssize_t K = a.shape[1]
    cdef int64_t n2 = b.shape[0]
    cdef unordered_map[int64_t, int32_t] ids
    cdef unordered_map[int64_t, int32_t].iterator it
    cdef vector[int64_t] codes
    cdef vector[int32_t] trans
    cdef int64_t code, c2, p, q
    cdef Py_ssize_t head = 0, s, m, i
    cdef int32_t t

    code = i1 * n2 + i2
    ids[code] = 0
    codes.push_back(code)
    while head < <Py_ssize_t>codes.size():
        code = codes[head]
        p = code // n2
        q = code % n2
        for s in range(K):
            c2 = <int64_t>a[p, s] * n2 + b[q, s]
            it = ids.find(c2)
            if it == ids.end():
                t = <int32_t>codes.size()
                if t >= cap:
                    raise StateCapExceeded(f"product exceeded state cap {cap}")
                ids[c2] = t
                codes.push_back(c2)
                trans.push_back(t)
            else:
                trans.push_back(deref(it).second)
        head += 1

    m = codes.size()
    out = np.empty((m, K), dtype=np.int32)
    pairs = np.empty((m, 2), dtype=np.int64)
    cdef int32_t[:, ::1] ov = out
    cdef int64_t[:, ::1] pv = pairs
    for i in range(m):
        pv[i, 0] = codes[i] // n2
        pv[i, 1] = codes[i] % n2
        for s in range(K):
            ov[i, s] = trans[i * K + s]
    return out, pairs


def determinize(ptr, idx, Py_ssize_t n, Py_ssize_t K, init, accepting, Py_ssize_t cap):
    cdef const int64_t[::1] P = np.ascontiguousarray(ptr, dtype=np.int64)
    cdef const int32_t[::1] I = np.ascontiguousarray(idx, dtype=np.int32)
    cdef const uint8_t[::1] acc_in = np.ascontiguousarray(accepting, dtype=np.uint8)
    cdef const int32_t[::1] start = np.ascontiguousarray(np.unique(init), dtype=np.int32)

    cdef vector[int32_t] store      # all subsets, concatenated
    cdef vector[int64_t] offsets    # subset j is store[offsets[j]:offsets[j+1]]
    cdef vector[int32_t] trans
    cdef vector[uint8_t] acc
    cdef vector[int32_t] buf
    cdef vector[int64_t] stamp
    cdef unordered_map[string, int32_t] ids
    cdef unordered_map[string, int32_t].iterator it
    cdef string key
    cdef Py_ssize_t j = 0, a, x, e, i, m
    cdef int32_t s, t, nid
    cdef int64_t mark = 0
    cdef uint8_t flag

    stamp.assign(n, -1)
    offsets.push_back(0)
    flag = 0
    for i in range(start.shape[0]):
        store.push_back(start[i])
        flag |= acc_in[start[i]]
    offsets.push_back(store.size())
    acc.push_back(flag)
    if start.shape[0]:
        key = string(<char*>&store[0], start.shape[0] * sizeof(int32_t))
    else:
        key = string()
    ids[key] = 0

    while j < <Py_ssize_t>offsets.size() - 1:
        for a in range(K):
            buf.clear()
            mark += 1
            for x in range(offsets[j], offsets[j + 1]):
                s = store[x]
                for e in range(P[s * K + a], P[s * K + a + 1]):
                    t = I[e]
                    if stamp[t] != mark:
                        stamp[t] = mark
                        buf.push_back(t)
            sort(buf.begin(), buf.end())
            if buf.size():
                key = string(<char*>&buf[0], buf.size() * sizeof(int32_t))
            else:
                key = string()
            it = ids.find(key)
            if it == ids.end():
                nid = <int32_t>(offsets.size() - 1)
                if nid >= cap:
                    raise StateCapExceeded(f"subset construction exceeded state cap {cap}")
                ids[key] = nid
                flag = 0
                for i in range(<Py_ssize_t>buf.size()):
                    store.push_back(buf[i])
                    flag |= acc_in[buf[i]]
                offsets.push_back(store.size())
                acc.push_back(flag)
                trans.push_back(nid)
            else:
                trans.push_back(deref(it).second)
        j += 1

    m = offsets.size() - 1
    out = np.empty((m, K), dtype=np.int32)
    acc_out = np.empty(m, dtype=np.uint8)
    cdef int32_t[:, ::1] ov = out
    cdef uint8_t[::1] av = acc_out
    for i in range(m):
        av[i] = acc[i]
        for a in range(K):
            ov[i, a] = trans[i * K + a]
    return out, acc_out


def refine(delta, labels):
    """Hopcroft partition refinement with block-level splitters."""
    cdef const int32_t[:, ::1] D = np.ascontiguousarray(delta, dtype=np.int32)
    lab = np.asarray(labels)
    cdef Py_ssize_t n = D.shape[0], K = D.shape[1]
    if n == 0:
        return np.zeros(0, dtype=np.int32), 0

    # inverse transitions, one CSR per symbol: preds of (a, q) are
    # src[iptr[a*(n+1)+q] : iptr[a*(n+1)+q+1]]
    iptr_np = np.zeros(K * (n + 1), dtype=np.int64)
    src_np = np.empty(n * K, dtype=np.int32)
    cdef int64_t[::1] iptr = iptr_np
    cdef int32_t[::1] src = src_np
    cdef Py_ssize_t a, q, p, i, base
    for a in range(K):
        base = a * (n + 1)
        for p in range(n):
            iptr[base + D[p, a] + 1] += 1
        for q in range(n):
            iptr[base + q + 1] += iptr[base + q]
    fill_np = iptr_np.copy()
    cdef int64_t[::1] fill = fill_np
    for a in range(K):
        base = a * (n + 1)
        for p in range(n):
            q = D[p, a]
            src[a * n + fill[base + q]] = <int32_t>p
            fill[base + q] += 1

    order_np = np.argsort(lab, kind="stable").astype(np.int32)
    sorted_lab = lab[order_np]
    cdef int32_t[::1] elems = order_np
    loc_np = np.empty(n, dtype=np.int32)
    blk_np = np.empty(n, dtype=np.int32)
    first_np = np.empty(n, dtype=np.int32)
    end_np = np.empty(n, dtype=np.int32)
    mark_np = np.empty(n, dtype=np.int32)
    inwl_np = np.zeros(n, dtype=np.uint8)
    cdef int32_t[::1] loc = loc_np
    cdef int32_t[::1] blk = blk_np
    cdef int32_t[::1] first = first_np
    cdef int32_t[::1] end = end_np
    cdef int32_t[::1] marked = mark_np
    cdef uint8_t[::1] inwl = inwl_np
    cdef Py_ssize_t nblocks = 0
    cdef vector[int32_t] worklist
    cdef vector[int32_t] splitter
    cdef vector[int32_t] touched

    starts = np.flatnonzero(np.r_[True, sorted_lab[1:] != sorted_lab[:-1]])
    bounds = np.r_[starts, n]
    for i in range(len(starts)):
        first[i] = bounds[i]
        end[i] = bounds[i + 1]
        marked[i] = bounds[i]
        inwl[i] = 1
        worklist.push_back(<int32_t>i)
        for p in range(bounds[i], bounds[i + 1]):
            blk[elems[p]] = <int32_t>i
    nblocks = len(starts)
    for i in range(n):
        loc[elems[i]] = <int32_t>i

    cdef int32_t B, C, Dn, s, pp, other
    cdef Py_ssize_t x, e, lo
    while worklist.size():
        B = worklist.back()
        worklist.pop_back()
        inwl[B] = 0
        splitter.clear()
        for x in range(first[B], end[B]):
            splitter.push_back(elems[x])
        for a in range(K):
            touched.clear()
            base = a * (n + 1)
            for x in range(<Py_ssize_t>splitter.size()):
                s = splitter[x]
                for e in range(iptr[base + s], iptr[base + s + 1]):
                    pp = src[a * n + e]
                    C = blk[pp]
                    if loc[pp] < marked[C]:
                        continue
                    if marked[C] == first[C]:
                        touched.push_back(C)
                    # swap pp into the marked prefix of its block
                    lo = marked[C]
                    other = elems[lo]
                    elems[loc[pp]] = other
                    loc[other] = loc[pp]
                    elems[lo] = pp
                    loc[pp] = <int32_t>lo
                    marked[C] += 1
            for x in range(<Py_ssize_t>touched.size()):
                C = touched[x]
                if marked[C] == end[C]:
                    marked[C] = first[C]
                    continue
                Dn = <int32_t>nblocks
                nblocks += 1
                first[Dn] = first[C]
                end[Dn] = marked[C]
                marked[Dn] = first[Dn]
                first[C] = marked[C]
                for e in range(first[Dn], end[Dn]):
                    blk[elems[e]] = Dn
                if inwl[C]:
                    inwl[Dn] = 1
                    worklist.push_back(Dn)
                elif end[Dn] - first[Dn] <= end[C] - first[C]:
                    inwl[Dn] = 1
                    worklist.push_back(Dn)
                else:
                    inwl[C] = 1
                    worklist.push_back(C)
    return blk_np, int(nblocks)


def bfs_order(delta, Py_ssize_t initial):
    cdef const int32_t[:, ::1] D = np.ascontiguousarray(delta, dtype=np.int32)
    cdef Py_ssize_t n = D.shape[0], K = D.shape[1], head = 0, a
    seen_np = np.zeros(n, dtype=np.uint8)
    order_np = np.empty(n, dtype=np.int32)
    cdef uint8_t[::1] seen = seen_np
    cdef int32_t[::1] order = order_np
    cdef Py_ssize_t tail = 1
    cdef int32_t s, t
    order[0] = <int32_t>initial
    seen[initial] = 1
    while head < tail:
        s = order[head]
        head += 1
        for a in range(K):
            t = D[s, a]
            if not seen[t]:
                seen[t] = 1
                order[tail] = t
                tail += 1
    return order_np[:tail].copy()
