"""Pure-Python kernel for set-configuration domination and maximization.

Set-configurations are tuples of integer bitmasks (one bit per base label),
kept sorted so tuple equality is multiset equality.  The compiled twin in
`_kernel_cy.pyx` implements the same API for masks that fit in 64 bits; the
selector in `kernel.py` picks an implementation at import time.
"""

import itertools

_PERM_CACHE = {}


def _perms(arity):
    perms = _PERM_CACHE.get(arity)
    if perms is None:
        perms = tuple(itertools.permutations(range(arity)))
        _PERM_CACHE[arity] = perms
    return perms


def dominated_by(c, d):
    """True iff c is strictly dominated by d: some position permutation maps
    every entry of c into a superset in d, at least one strictly."""
    if len(c) != len(d):
        raise ValueError("arity mismatch")
    return _match(c, d, 0, 0, False)


def dominated_or_equal(c, d):
    if len(c) != len(d):
        raise ValueError("arity mismatch")
    return _match(c, d, 0, 0, True)


def _match(c, d, i, used, seen_strict):
    """Backtracking matching of positions of c onto positions of d under
    subset inclusion; `used` is a bitmask over d's positions."""
    n = len(c)
    if i == n:
        return seen_strict
    ci = c[i]
    for j in range(n):
        if used >> j & 1:
            continue
        dj = d[j]
        if ci & ~dj:
            continue
        if _match(c, d, i + 1, used | (1 << j), seen_strict or ci != dj):
            return True
    return False


def combine(c, d, u, sigma):
    """Combination of c and d w.r.t. position u and permutation sigma:
    position u becomes the union c[u] | d[sigma[u]], every other position j
    the intersection c[j] & d[sigma[j]].  Returns the canonical (sorted)
    tuple, or None when an intersection is empty."""
    out = []
    for j in range(len(c)):
        if j == u:
            out.append(c[j] | d[sigma[j]])
        else:
            v = c[j] & d[sigma[j]]
            if not v:
                return None
            out.append(v)
    out.sort()
    return tuple(out)


def maximize(base, arity, poll=None):
    """Fixpoint of pairwise combination starting from the given
    configurations: returns the maximal configurations (an antichain)
    satisfying the same universal membership quantifier.

    Pairs are drawn from a worklist so only pairs involving fresh
    configurations are rescanned; combinations are only attempted where the
    union position pair is non-comparable (comparable pairs yield dominated
    results).  `poll`, when given, is called periodically and may raise to
    cancel.
    """
    perms = _perms(arity)
    current = []
    alive = set()
    for cfg in sorted({tuple(sorted(c)) for c in base}):
        _insert(current, alive, cfg)
    queue = [cfg for cfg in current]
    ticks = 0
    while queue:
        c = queue.pop()
        if c not in alive:
            continue
        for d in list(current):
            if d not in alive or c not in alive:
                continue
            for sigma in perms:
                if poll is not None:
                    ticks += 1
                    if not ticks % 256:
                        poll()
                for u in range(arity):
                    a = c[u]
                    b = d[sigma[u]]
                    if not (a & ~b) or not (b & ~a):
                        continue  # comparable union pair: result is dominated
                    r = combine(c, d, u, sigma)
                    if r is None or r in alive:
                        continue
                    if _insert(current, alive, r):
                        queue.append(r)
    return frozenset(alive)


def _insert(current, alive, cfg):
    """Insert cfg unless dominated by (or equal to) a live configuration;
    evict live configurations it dominates.  Returns True if inserted."""
    if cfg in alive:
        return False
    for e in current:
        if e in alive and dominated_or_equal(cfg, e):
            return False
    for e in current:
        if e in alive and dominated_by(e, cfg):
            alive.discard(e)
    current[:] = [e for e in current if e in alive]
    current.append(cfg)
    alive.add(cfg)
    return True
