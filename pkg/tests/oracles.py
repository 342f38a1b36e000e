"""Brute-force reference implementations used to cross-check the engine.

These are deliberately naive: full enumeration with no pruning beyond an
explicit budget.  Engine results must match them exactly.
"""

import itertools
import random

from lclre.problem import Problem, make_problem


def random_problem(rng, max_labels=4, delta=3, allow_empty=False):
    """A random problem over up to max_labels labels."""
    nlab = rng.randint(1, max_labels)
    labels = [chr(ord("a") + i) for i in range(nlab)]
    node_space = list(
        itertools.combinations_with_replacement(range(nlab), delta))
    edge_space = list(itertools.combinations_with_replacement(range(nlab), 2))
    lo = 0 if allow_empty else 1
    node = rng.sample(node_space, rng.randint(lo, len(node_space)))
    edge = rng.sample(edge_space, rng.randint(lo, len(edge_space)))
    return Problem(delta, labels, node, edge)


def _selections(cfg_masks):
    """All label-id choice tuples of a mask configuration, as sorted
    tuples."""
    choices = []
    for m in cfg_masks:
        ids = [i for i in range(m.bit_length()) if m >> i & 1]
        choices.append(ids)
    return {tuple(sorted(t)) for t in itertools.product(*choices)}


def _dominated_or_equal(c, d):
    for perm in itertools.permutations(range(len(c))):
        if all(c[i] & ~d[perm[i]] == 0 for i in range(len(c))):
            return True
    return False


def brute_maximize(p, which="edge"):
    """All maximal good set-configurations, by full enumeration: a
    configuration of label-set masks is good when every choice of one label
    per position lands in the (expanded) constraint."""
    arity = 2 if which == "edge" else p.delta
    constraint = p.edge if which == "edge" else p.node
    nlab = len(p.labels)
    masks = range(1, 1 << nlab)
    good = []
    for cfg in itertools.combinations_with_replacement(masks, arity):
        if _selections(cfg) <= constraint:
            good.append(cfg)
    maximal = set()
    for cfg in good:
        if not any(d != cfg and _dominated_or_equal(cfg, d) for d in good):
            maximal.add(cfg)
    return frozenset(maximal)


def relaxation_search_size(p, q):
    """Number of node-occurrence assignments a full enumeration visits."""
    positions = sum(len(c) for c in p.node)
    return len(q.labels) ** positions if positions else 1


def brute_relaxation_search(p, q, budget=10 ** 6):
    """Existence of a node-occurrence relaxation p ->0 q by full
    enumeration.  Returns True/False, or None when the search space
    exceeds the budget."""
    if relaxation_search_size(p, q) > budget:
        return None
    configs = p.sorted_node()
    slots = [(ci, pos) for ci, cfg in enumerate(configs)
             for pos in range(len(cfg))]
    src_of = {(ci, pos): configs[ci][pos] for ci, pos in slots}
    for images in itertools.product(range(len(q.labels)), repeat=len(slots)):
        assign = dict(zip(slots, images))
        if _relaxation_ok(assign, slots, src_of, p, q, configs):
            return True
    return False


def _relaxation_ok(assign, slots, src_of, p, q, configs):
    for ci, cfg in enumerate(configs):
        img = tuple(sorted(assign[(ci, pos)] for pos in range(len(cfg))))
        if img not in q.node:
            return False
    occs = [(src_of[s], assign[s]) for s in slots]
    for i in range(len(occs)):
        for j in range(i, len(occs)):
            pair = tuple(sorted((occs[i][0], occs[j][0])))
            if pair in p.edge:
                img = tuple(sorted((occs[i][1], occs[j][1])))
                if img not in q.edge:
                    return False
    return True


def make_rng(seed):
    return random.Random(seed)
