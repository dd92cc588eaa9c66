# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``pure.py`` (same signatures)."""

from libc.stdlib cimport malloc, free


def compose(tuple p, tuple q):
    cdef Py_ssize_t n = len(q), i
    cdef list out = [0] * n
    for i in range(n):
        out[i] = p[<Py_ssize_t>q[i]]
    return tuple(out)


def inverse(tuple p):
    cdef Py_ssize_t n = len(p), i
    cdef list out = [0] * n
    for i in range(n):
        out[<Py_ssize_t>p[i]] = i
    return tuple(out)


cdef inline tuple _mul(int *g, int *s, int n, int *buf):
    cdef int i
    for i in range(n):
        buf[i] = g[s[i]]
    return tuple([buf[i] for i in range(n)])


def closure(list gens, Py_ssize_t cap):
    cdef int n = len(gens[0]) if gens else 0
    cdef int ng = len(gens)
    cdef int i, j
    cdef int *gs = <int *> malloc(sizeof(int) * (ng * n + 2 * n + 1))
    cdef int *cur = gs + ng * n
    cdef int *buf = cur + n
    cdef tuple g, h
    cdef set seen
    cdef list order
    cdef Py_ssize_t k = 0
    try:
        for j in range(ng):
            for i in range(n):
                gs[j * n + i] = gens[j][i]
        g = tuple(range(n))
        seen = {g}
        order = [g]
        while k < len(order):
            g = order[k]
            k += 1
            for i in range(n):
                cur[i] = g[i]
            for j in range(ng):
                h = _mul(cur, gs + j * n, n, buf)
                if h not in seen:
                    if len(order) >= cap:
                        return None
                    seen.add(h)
                    order.append(h)
        return order
    finally:
        free(gs)


def orbit(list gens, int start):
    cdef set seen = {start}
    cdef list stack = [start]
    cdef tuple g
    cdef object i, j
    while stack:
        i = stack.pop()
        for g in gens:
            j = g[i]
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def propagate(list crossings, list images):
    cdef bint changed = True
    cdef Py_ssize_t idx, n, i
    cdef int o, a, b, sign
    cdef object po, pa, pb
    cdef int *fwd
    cdef int *bwd
    cdef int *src
    cdef int *res
    cdef int *mem = NULL
    cdef Py_ssize_t cap = 0
    try:
        while changed:
            changed = False
            for idx in range(len(crossings)):
                o, a, b, sign = crossings[idx]
                po = images[o]
                if po is None:
                    continue
                pa = images[a]
                pb = images[b]
                if pa is None and pb is None:
                    continue
                n = len(po)
                if n > cap:
                    free(mem)
                    mem = <int *> malloc(sizeof(int) * 4 * n + 1)
                    cap = n
                fwd = mem
                bwd = mem + n
                src = mem + 2 * n
                res = mem + 3 * n
                for i in range(n):
                    if sign > 0:
                        bwd[i] = po[i]
                        fwd[<int>po[i]] = i
                    else:
                        fwd[i] = po[i]
                        bwd[<int>po[i]] = i
                if pa is not None:
                    for i in range(n):
                        src[i] = pa[i]
                    for i in range(n):
                        res[i] = fwd[src[bwd[i]]]
                    if pb is None:
                        images[b] = tuple([res[i] for i in range(n)])
                        changed = True
                    else:
                        for i in range(n):
                            if res[i] != <int>pb[i]:
                                return idx
                else:
                    for i in range(n):
                        src[i] = pb[i]
                    for i in range(n):
                        res[i] = bwd[src[fwd[i]]]
                    images[a] = tuple([res[i] for i in range(n)])
                    changed = True
        return -1
    finally:
        free(mem)


def canonical_form(list perms):
    cdef Py_ssize_t n = len(perms[0]), m = len(perms)
    cdef Py_ssize_t s, i, k, qlen, j, t
    cdef int *pm = <int *> malloc(sizeof(int) * (m * n + 2 * n + 1))
    cdef int *label = pm + m * n
    cdef int *queue = label + n
    cdef list cand
    cdef tuple best = None, ct
    try:
        for t in range(m):
            for i in range(n):
                pm[t * n + i] = perms[t][i]
        for s in range(n):
            for i in range(n):
                label[i] = -1
            label[s] = 0
            queue[0] = s
            qlen = 1
            k = 0
            while k < qlen:
                i = queue[k]
                k += 1
                for t in range(m):
                    j = pm[t * n + i]
                    if label[j] < 0:
                        label[j] = qlen
                        queue[qlen] = j
                        qlen += 1
            if qlen < n:
                return None
            cand = [label[pm[t * n + queue[i]]] for t in range(m) for i in range(n)]
            ct = tuple(cand)
            if best is None or ct < best:
                best = ct
        return best
    finally:
        free(pm)
