# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; same contract as ``_kernel_py``.

The enumeration kernels use fixed-size scratch arrays (posets they see are
tiny); calls beyond that size delegate to the pure-Python twin so behavior
stays total.
"""

from domkit import _kernel_py

BACKEND = "cython"

DEF MAXN = 64


def is_monotone(int na, int nb, const unsigned char[::1] la,
                const unsigned char[::1] lb, f):
    cdef int i, j
    cdef int fi[MAXN]
    if na > MAXN:
        return _kernel_py.is_monotone(na, nb, la, lb, f)
    for i in range(na):
        fi[i] = f[i]
    for i in range(na):
        for j in range(na):
            if la[i * na + j] and not lb[fi[i] * nb + fi[j]]:
                return False
    return True


def monotone_maps(int na, int nb, const unsigned char[::1] la,
                  const unsigned char[::1] lb):
    cdef int f[MAXN]
    cdef int i, j, v
    cdef bint ok
    if na == 0:
        return [()]
    if nb == 0:
        return []
    if nb == 1:
        return [(0,) * na]
    if na > MAXN:
        return _kernel_py.monotone_maps(na, nb, la, lb)
    out = []
    i = 0
    f[0] = -1
    while i >= 0:
        v = f[i] + 1
        while v < nb:
            ok = True
            for j in range(i):
                if la[j * na + i] and not lb[f[j] * nb + v]:
                    ok = False
                    break
                if la[i * na + j] and not lb[v * nb + f[j]]:
                    ok = False
                    break
            if ok:
                break
            v += 1
        if v == nb:
            f[i] = -1
            i -= 1
            continue
        f[i] = v
        if i == na - 1:
            out.append(tuple([f[j] for j in range(na)]))
        else:
            i += 1
            f[i] = -1
    return out


def ep_pairs(int na, int nb, const unsigned char[::1] la,
             const unsigned char[::1] lb):
    cdef int x, y
    cdef bint ok, seen_dup
    cdef int e[MAXN]
    cdef int p[MAXN]
    cdef unsigned char hit[MAXN]
    if na > MAXN or nb > MAXN:
        return _kernel_py.ep_pairs(na, nb, la, lb)
    embs = []
    for cand in monotone_maps(na, nb, la, lb):
        for x in range(nb):
            hit[x] = 0
        seen_dup = False
        for x in range(na):
            if hit[<int> cand[x]]:
                seen_dup = True
                break
            hit[<int> cand[x]] = 1
        if not seen_dup:
            embs.append(cand)
    projs = monotone_maps(nb, na, lb, la)
    out = []
    for ecand in embs:
        for x in range(na):
            e[x] = ecand[x]
        for pcand in projs:
            for y in range(nb):
                p[y] = pcand[y]
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
                out.append((ecand, pcand))
    return out


def transitivity_witness(int n, const unsigned char[::1] rel):
    cdef int i, j, k
    for i in range(n):
        for j in range(n):
            if not rel[i * n + j]:
                continue
            for k in range(n):
                if rel[j * n + k] and not rel[i * n + k]:
                    return (i, j, k)
    return None


def transitive_closure(int n, const unsigned char[::1] rel):
    cdef int i, j, k
    m = bytearray(n * n)
    cdef unsigned char[::1] mv = m
    for i in range(n * n):
        mv[i] = rel[i]
    for i in range(n):
        mv[i * n + i] = 1
    for k in range(n):
        for i in range(n):
            if mv[i * n + k]:
                for j in range(n):
                    if mv[k * n + j]:
                        mv[i * n + j] = 1
    return bytes(m)
