"""Pure-Python hot kernels.

Permutations here are 0-based tuples of images; ``compose(p, q)`` applies
``q`` first. The compiled module ``_ckernels`` exposes the same functions.
"""


def compose(p, q):
    return tuple([p[i] for i in q])


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def closure(gens, cap):
    """Breadth-first closure of ``gens`` under composition.

    Returns the element list (identity first, then discovery order), or
    ``None`` once more than ``cap`` elements have been found.
    """
    n = len(gens[0]) if gens else 0
    ident = tuple(range(n))
    seen = {ident}
    order = [ident]
    k = 0
    while k < len(order):
        g = order[k]
        k += 1
        for s in gens:
            h = tuple([g[i] for i in s])
            if h not in seen:
                if len(order) >= cap:
                    return None
                seen.add(h)
                order.append(h)
    return order


def orbit(gens, start):
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for g in gens:
            j = g[i]
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def propagate(crossings, images):
    """Fill unknown arc images through Wirtinger relations.

    ``crossings`` holds ``(over, under_in, under_out, sign)`` arc indices and
    ``images`` is a list of tuples or ``None`` (updated in place). Returns the
    index of the first violated crossing, or -1 if all determined crossings
    are consistent.
    """
    changed = True
    while changed:
        changed = False
        for idx, (o, a, b, sign) in enumerate(crossings):
            po = images[o]
            if po is None:
                continue
            pa = images[a]
            pb = images[b]
            if pa is None and pb is None:
                continue
            oinv = inverse(po)
            if sign > 0:
                fwd, bwd = oinv, po
            else:
                fwd, bwd = po, oinv
            if pa is not None:
                # out = fwd . in . bwd
                nb = tuple([fwd[pa[bwd[i]]] for i in range(len(pa))])
                if pb is None:
                    images[b] = nb
                    changed = True
                elif pb != nb:
                    return idx
            else:
                images[a] = tuple([bwd[pb[fwd[i]]] for i in range(len(pb))])
                changed = True
    return -1


def canonical_form(perms):
    """Lexicographically least relabeling of a transitive tuple of perms.

    Each start point seeds a breadth-first relabeling along the generators in
    order; the minimum over starts is a complete invariant for simultaneous
    conjugacy of transitive tuples.
    """
    n = len(perms[0])
    best = None
    for s in range(n):
        label = [-1] * n
        label[s] = 0
        queue = [s]
        k = 0
        while k < len(queue):
            i = queue[k]
            k += 1
            for p in perms:
                j = p[i]
                if label[j] < 0:
                    label[j] = len(queue)
                    queue.append(j)
        if len(queue) < n:
            return None
        cand = []
        for p in perms:
            cand.extend(label[p[queue[i]]] for i in range(n))
        cand = tuple(cand)
        if best is None or cand < best:
            best = cand
    return best
