"""Relaxation search and verification.

A relaxation from p to q re-labels any valid p-solution into a valid
q-solution with no communication.  Three shapes are supported: mappings
indexed by node-constraint occurrences (the general form), by a single
label map (port-local), and by edge-constraint occurrences (the dual form).
"""

import itertools

from . import cancel
from .problem import Problem, product


class RelaxationFunction:
    """A witness mapping; `kind` selects the occurrence domain.

    assignments:
      node-occurrence: {(config_index, position): target label name} over
        p.sorted_node()
      port-local:      {source label name: target label name}
      edge-occurrence: {(config_index, position): target name} over
        p.sorted_edge()
    """

    __slots__ = ("kind", "assignments")

    KINDS = ("node-occurrence", "port-local", "edge-occurrence")

    def __init__(self, kind, assignments):
        if kind not in self.KINDS:
            raise ValueError("unknown relaxation kind %r" % kind)
        self.kind = kind
        self.assignments = dict(assignments)

    def serialize(self, p=None):
        lines = []
        if self.kind == "port-local":
            for src in sorted(self.assignments):
                lines.append("%s -> %s" % (src, self.assignments[src]))
        else:
            tag = "node" if self.kind == "node-occurrence" else "edge"
            configs = None
            if p is not None:
                configs = p.sorted_node() if tag == "node" else p.sorted_edge()
            for (ci, pos) in sorted(self.assignments):
                src = "?"
                if configs is not None:
                    src = p.labels[configs[ci][pos]]
                lines.append("%s[%d].pos[%d]: %s -> %s"
                             % (tag, ci, pos, src, self.assignments[(ci, pos)]))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "RelaxationFunction(%s, %d assignments)" % (
            self.kind, len(self.assignments))


def verify_relaxation(f, p, q):
    """Check a witness against both defining conditions."""
    if p.delta != q.delta:
        raise ValueError("delta mismatch")
    if f.kind == "port-local":
        return _verify_port_local(f.assignments, p, q)
    if f.kind == "node-occurrence":
        return _verify_occurrence(f.assignments, p, q,
                                  p.sorted_node(), q.node, p.edge, q.edge)
    return _verify_occurrence(f.assignments, p, q,
                              p.sorted_edge(), q.edge, p.node, q.node)


def _verify_occurrence(assignments, p, q, src_configs, img_constraint,
                       pair_src, pair_img):
    """Shared check: per-configuration images must satisfy `img_constraint`;
    every combination of occurrences whose source labels form a member of
    `pair_src` must have images in `pair_img`."""
    occs = []
    for ci, cfg in enumerate(src_configs):
        imgs = []
        for pos, lid in enumerate(cfg):
            name = assignments.get((ci, pos))
            if name is None or name not in q._index:
                return False
            imgs.append(q.id_of(name))
            occs.append((lid, q.id_of(name)))
        if tuple(sorted(imgs)) not in img_constraint:
            return False
    arity = len(next(iter(pair_src))) if pair_src else 2
    # combinations may reuse a position, so only distinct (source, image)
    # occurrence pairs matter
    distinct = sorted(set(occs))
    for combo in itertools.combinations_with_replacement(distinct, arity):
        cancel.checkpoint()
        srcs = tuple(sorted(c[0] for c in combo))
        if srcs in pair_src:
            imgs = tuple(sorted(c[1] for c in combo))
            if imgs not in pair_img:
                return False
    return True


def _verify_port_local(mapping, p, q):
    try:
        img = [q.id_of(mapping[name]) for name in p.labels]
    except KeyError:
        return False
    for cfg in p.node:
        if tuple(sorted(img[i] for i in cfg)) not in q.node:
            return False
    for cfg in p.edge:
        if tuple(sorted(img[i] for i in cfg)) not in q.edge:
            return False
    return True


# -- search -----------------------------------------------------------------


def find_relaxation(p, q):
    """Complete backtracking search for a node-occurrence relaxation;
    returns the lexicographically first witness (occurrences in sorted
    configuration order, values in target label-id order) or None."""
    if p.delta != q.delta:
        raise ValueError("delta mismatch")
    configs = p.sorted_node()
    assignment = _occurrence_search(
        configs, p.delta, p.edge, q, q.node, q.edge)
    if assignment is None:
        return None
    out = {}
    for idx, val in enumerate(assignment):
        out[(idx // p.delta, idx % p.delta)] = q.labels[val]
    return RelaxationFunction("node-occurrence", out)


def find_edge_based_relaxation(p, q):
    """Complete search for the dual witness: occurrences over the edge
    constraint, universal condition over the node constraint."""
    if p.delta != q.delta:
        raise ValueError("delta mismatch")
    configs = p.sorted_edge()
    assignment = _occurrence_search(
        configs, 2, p.node, q, q.edge, q.node)
    if assignment is None:
        return None
    out = {}
    for idx, val in enumerate(assignment):
        out[(idx // 2, idx % 2)] = q.labels[val]
    return RelaxationFunction("edge-occurrence", out)


def _occurrence_search(configs, width, pair_src, q, img_constraint, pair_img):
    """Backtracking core shared by the node- and edge-occurrence searches.

    configs: source configurations, each of `width` entries; occurrences are
    numbered config-major.  pair_src: the source constraint driving the
    universal pair/tuple condition; img_constraint: target constraint the
    per-configuration images must satisfy; pair_img: target constraint for
    the universal condition.
    """
    occ_labels = [lid for cfg in configs for lid in cfg]
    total = len(occ_labels)
    if total == 0:
        return []
    nq = len(q.labels)
    arity = len(next(iter(pair_src))) if pair_src else 2

    # Universal-condition groups: multisets of occurrence indices whose
    # source labels form a member of pair_src, indexed by their largest
    # occurrence so each group is checked as soon as it completes.
    groups_by_last = [[] for _ in range(total)]
    for combo in itertools.combinations_with_replacement(range(total), arity):
        srcs = tuple(sorted(occ_labels[i] for i in combo))
        if srcs in pair_src:
            groups_by_last[combo[-1]].append(combo)

    img_sorted = sorted(img_constraint)
    assignment = [0] * total
    counts = [0] * nq

    def feasible_partial(ci, upto):
        start = ci * width
        partial = sorted(assignment[start:upto + 1])
        for cfg in img_sorted:
            rest = list(cfg)
            ok = True
            for v in partial:
                if v in rest:
                    rest.remove(v)
                else:
                    ok = False
                    break
            if ok:
                return True
        return False

    def rec(i):
        cancel.checkpoint()
        if i == total:
            return True
        ci = i // width
        last_in_cfg = i % width == width - 1
        for v in range(nq):
            assignment[i] = v
            if last_in_cfg:
                start = ci * width
                if tuple(sorted(assignment[start:i + 1])) not in img_constraint:
                    continue
            elif not feasible_partial(ci, i):
                continue
            ok = True
            for combo in groups_by_last[i]:
                imgs = tuple(sorted(assignment[j] for j in combo))
                if imgs not in pair_img:
                    ok = False
                    break
            if ok and rec(i + 1):
                return True
        return False

    if rec(0):
        return list(assignment)
    return None


def find_port_local_relaxation(p, q):
    """Complete search over single label maps satisfying both constraint
    conditions; returns the lexicographically first map or None."""
    if p.delta != q.delta:
        raise ValueError("delta mismatch")
    nsrc = len(p.labels)
    nq = len(q.labels)
    node_sorted = sorted(p.node)
    edge_sorted = sorted(p.edge)
    q_node_sorted = sorted(q.node)
    img = [None] * nsrc

    def feasible(constraint_cfgs, target, target_sorted, src_width):
        for cfg in constraint_cfgs:
            imgs = [img[i] for i in cfg if img[i] is not None]
            if len(imgs) == len(cfg):
                if tuple(sorted(imgs)) not in target:
                    return False
            else:
                partial = sorted(imgs)
                if not any(_submultiset(partial, tcfg) for tcfg in target_sorted):
                    return False
        return True

    q_edge_sorted = sorted(q.edge)

    def rec(i):
        cancel.checkpoint()
        if i == nsrc:
            return True
        for v in range(nq):
            img[i] = v
            if feasible(node_sorted, q.node, q_node_sorted, p.delta) and \
               feasible(edge_sorted, q.edge, q_edge_sorted, 2):
                if rec(i + 1):
                    return True
        img[i] = None
        return False

    if not rec(0):
        return None
    return {p.labels[i]: q.labels[img[i]] for i in range(nsrc)}


def _submultiset(partial, cfg):
    rest = list(cfg)
    for v in partial:
        if v in rest:
            rest.remove(v)
        else:
            return False
    return True


def port_local_to_occurrence(mapping, p):
    """View a label map as a node-occurrence witness over p."""
    out = {}
    for ci, cfg in enumerate(p.sorted_node()):
        for pos, lid in enumerate(cfg):
            out[(ci, pos)] = mapping[p.labels[lid]]
    return RelaxationFunction("node-occurrence", out)


# -- fixed points -----------------------------------------------------------


def is_fixed_point(p, label_cap=None, config_cap=None):
    """True iff one easing step relaxes back to p."""
    from .roundelim import q as _q, DEFAULT_LABEL_CAP, DEFAULT_CONFIG_CAP

    eased = _q(p, label_cap or DEFAULT_LABEL_CAP,
               config_cap or DEFAULT_CONFIG_CAP)
    return find_relaxation(eased, p) is not None


def is_generalized_fixed_point(p, input_problem, label_cap=None,
                               config_cap=None):
    """True iff one easing step, given the input problem for free, relaxes
    back to p."""
    from .roundelim import q as _q, DEFAULT_LABEL_CAP, DEFAULT_CONFIG_CAP

    if p.delta != input_problem.delta:
        raise ValueError("delta mismatch")
    eased = _q(p, label_cap or DEFAULT_LABEL_CAP,
               config_cap or DEFAULT_CONFIG_CAP)
    return find_relaxation(product(eased, input_problem), p) is not None
