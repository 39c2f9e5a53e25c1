"""Pure-Python enumeration kernels.

Hot loops of the whole package: order relations are passed in as flat
row-major 0/1 bytes (``rel[i*n + j] == 1`` iff ``i <= j``), maps as tuples of
codomain indices. The compiled twin in ``_kernel_cy.pyx`` implements the same
contract; ``domkit.kernel`` picks one at import time.
"""

BACKEND = "python"


def is_monotone(na, nb, la, lb, f):
    """True iff f (tuple of length na into range(nb)) preserves the order."""
    for i in range(na):
        row = i * na
        fi = f[i] * nb
        for j in range(na):
            if la[row + j] and not lb[fi + f[j]]:
                return False
    return True


def monotone_maps(na, nb, la, lb):
    """All monotone maps as index tuples, in lexicographic order.

    Depth-first with pruning: position i is only constrained by the already
    placed positions j < i, so partial assignments are rejected early.
    """
    if na == 0:
        return [()]
    if nb == 0:
        return []
    if nb == 1:
        return [(0,) * na]
    out = []
    f = [0] * na
    last = na - 1

    def place(i):
        icol = i
        irow = i * na
        for v in range(nb):
            vrow = v * nb
            ok = True
            for j in range(i):
                if la[j * na + icol] and not lb[f[j] * nb + v]:
                    ok = False
                    break
                if la[irow + j] and not lb[vrow + f[j]]:
                    ok = False
                    break
            if ok:
                f[i] = v
                if i == last:
                    out.append(tuple(f))
                else:
                    place(i + 1)

    place(0)
    return out


def ep_pairs(na, nb, la, lb):
    """All embedding-projection pairs as (emb, proj) index tuples.

    Exhaustive over every pair of monotone maps in both directions; this is
    the trust anchor the pointwise adjoint formula is checked against.
    Order: embedding-major lexicographic.
    """
    embs = [e for e in monotone_maps(na, nb, la, lb) if len(set(e)) == na]
    projs = monotone_maps(nb, na, lb, la)
    out = []
    for e in embs:
        for p in projs:
            ok = True
            for x in range(na):
                if p[e[x]] != x:
                    ok = False
                    break
            if ok:
                for y in range(nb):
                    if not lb[e[p[y]] * nb + y]:
                        ok = False
                        break
            if ok:
                out.append((e, p))
    return out


def transitivity_witness(n, rel):
    """First (i, j, k) with i<=j<=k but not i<=k, or None."""
    for i in range(n):
        irow = i * n
        for j in range(n):
            if not rel[irow + j]:
                continue
            jrow = j * n
            for k in range(n):
                if rel[jrow + k] and not rel[irow + k]:
                    return (i, j, k)
    return None


def transitive_closure(n, rel):
    """Reflexive-transitive closure of a flat relation, as bytes."""
    m = bytearray(rel)
    for i in range(n):
        m[i * n + i] = 1
    for k in range(n):
        krow = k * n
        for i in range(n):
            irow = i * n
            if m[irow + k]:
                for j in range(n):
                    if m[krow + j]:
                        m[irow + j] = 1
    return bytes(m)
