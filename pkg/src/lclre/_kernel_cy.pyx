# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for set-configuration domination and maximization.

Same API and semantics as `_kernel_py`, restricted to arity <= 8 and masks
below 2**64 (the selector in `kernel.py` enforces that before dispatching
here).  Configurations cross the boundary as tuples of ints; all hot loops
run on stack-allocated fixed-size arrays.
"""

import itertools

from libc.stdint cimport uint64_t

_PERM_CACHE = {}


def _perms(arity):
    perms = _PERM_CACHE.get(arity)
    if perms is None:
        perms = tuple(itertools.permutations(range(arity)))
        _PERM_CACHE[arity] = perms
    return perms


cdef inline void _load(tuple cfg, uint64_t* out, int n):
    cdef int i
    for i in range(n):
        out[i] = cfg[i]


cdef bint _match(uint64_t* c, uint64_t* d, int n, int i, int used,
                 bint seen_strict) noexcept:
    cdef int j
    cdef uint64_t ci, dj
    if i == n:
        return seen_strict
    ci = c[i]
    for j in range(n):
        if used >> j & 1:
            continue
        dj = d[j]
        if ci & ~dj:
            continue
        if _match(c, d, n, i + 1, used | (1 << j),
                  seen_strict or ci != dj):
            return True
    return False


def dominated_by(c, d):
    """True iff c is strictly dominated by d."""
    cdef int n = len(c)
    if n != len(d):
        raise ValueError("arity mismatch")
    cdef uint64_t cc[8]
    cdef uint64_t dd[8]
    _load(c, cc, n)
    _load(d, dd, n)
    return bool(_match(cc, dd, n, 0, 0, False))


def dominated_or_equal(c, d):
    cdef int n = len(c)
    if n != len(d):
        raise ValueError("arity mismatch")
    cdef uint64_t cc[8]
    cdef uint64_t dd[8]
    _load(c, cc, n)
    _load(d, dd, n)
    return bool(_match(cc, dd, n, 0, 0, True))


cdef inline void _sort_masks(uint64_t* v, int n) noexcept:
    cdef int i, j
    cdef uint64_t key
    for i in range(1, n):
        key = v[i]
        j = i - 1
        while j >= 0 and v[j] > key:
            v[j + 1] = v[j]
            j -= 1
        v[j + 1] = key


def maximize(base, arity, poll=None):
    """Fixpoint of pairwise combination; see the pure twin for the
    algorithm description."""
    cdef int n = arity
    cdef int u, j, ticks = 0
    cdef uint64_t cc[8]
    cdef uint64_t dd[8]
    cdef uint64_t rr[8]
    cdef uint64_t a, b, v
    cdef bint empty
    perms = _perms(arity)
    current = []
    alive = set()
    for cfg in sorted({tuple(sorted(x)) for x in base}):
        _py_insert(current, alive, cfg, n)
    queue = list(current)
    while queue:
        c = queue.pop()
        if c not in alive:
            continue
        _load(c, cc, n)
        for d in list(current):
            if d not in alive or c not in alive:
                continue
            for sigma in perms:
                if poll is not None:
                    ticks += 1
                    if not ticks % 256:
                        poll()
                for j in range(n):
                    dd[j] = d[sigma[j]]
                for u in range(n):
                    a = cc[u]
                    b = dd[u]
                    if not (a & ~b) or not (b & ~a):
                        continue
                    empty = False
                    for j in range(n):
                        if j == u:
                            rr[j] = cc[j] | dd[j]
                        else:
                            v = cc[j] & dd[j]
                            if not v:
                                empty = True
                                break
                            rr[j] = v
                    if empty:
                        continue
                    _sort_masks(rr, n)
                    r = tuple([rr[j] for j in range(n)])
                    if r in alive:
                        continue
                    if _py_insert(current, alive, r, n):
                        queue.append(r)
    return frozenset(alive)


cdef bint _py_insert(list current, set alive, tuple cfg, int n):
    """Insert unless dominated-or-equal by a live configuration; evict live
    configurations it strictly dominates."""
    cdef uint64_t cc[8]
    cdef uint64_t ee[8]
    cdef bint evicted = False
    if cfg in alive:
        return False
    _load(cfg, cc, n)
    for e in current:
        if e in alive:
            _load(e, ee, n)
            if _match(cc, ee, n, 0, 0, True):
                return False
    for e in current:
        if e in alive:
            _load(e, ee, n)
            if _match(ee, cc, n, 0, 0, False):
                alive.discard(e)
                evicted = True
    if evicted:
        current[:] = [e for e in current if e in alive]
    current.append(cfg)
    alive.add(cfg)
    return True
