"""Zero-communication solvability in the port-numbering model.

A node sees only its own ports and, when an input problem is present, the
input labels on its incident half-edges.  Two nodes with identical views may
be wired port-to-port by an adversary, so a rule is valid only when every
cross-view, cross-port output pair whose input labels can share an edge
satisfies the target edge constraint.

Views are reduced to one representative per input multiset: permuting a
view's ports and its outputs together changes neither the node multiset nor
the set of outputs emitted on a given input label, so solvability over
sorted views coincides with solvability over all port-orderings.
"""

import itertools
import random

from . import cancel
from .errors import LclreError, PremiseError
from .problem import Problem


class LocalView:
    """What a degree-delta node can see in zero rounds: nothing beyond its
    ports, plus (when present) the input label on each port."""

    __slots__ = ("delta", "input_assignment")

    def __init__(self, delta, input_assignment=None):
        if input_assignment is not None:
            input_assignment = tuple(input_assignment)
            if len(input_assignment) != delta:
                raise ValueError("view arity mismatch")
        self.delta = delta
        self.input_assignment = input_assignment

    def key(self):
        return self.input_assignment

    def __eq__(self, other):
        return (isinstance(other, LocalView)
                and self.delta == other.delta
                and self.input_assignment == other.input_assignment)

    def __hash__(self):
        return hash((self.delta, self.input_assignment))

    def __repr__(self):
        return "LocalView(%d, %r)" % (self.delta, self.input_assignment)


class ZeroRoundRule:
    """A per-view port-to-output assignment.

    outputs: {view input tuple (or None): tuple of output label names},
    aligned positionally with the sorted view tuple.
    """

    __slots__ = ("delta", "outputs")

    def __init__(self, delta, outputs):
        self.delta = delta
        self.outputs = dict(outputs)

    def outputs_for(self, input_tuple=None):
        """Outputs for a node whose ports carry `input_tuple`, in the order
        given (ports with equal input labels get the rule's outputs for that
        label in rule order)."""
        if input_tuple is None:
            return self.outputs[None]
        key = tuple(sorted(input_tuple))
        assigned = self.outputs[key]
        pool = {}
        for inp, out in zip(key, assigned):
            pool.setdefault(inp, []).append(out)
        return tuple(pool[inp].pop(0) for inp in input_tuple)

    def serialize(self):
        lines = []
        for key in sorted(self.outputs, key=lambda k: (k is not None, k)):
            view = "view{}" if key is None else "view{%s}" % " ".join(key)
            for i, out in enumerate(self.outputs[key]):
                lines.append("%s : port %d -> %s" % (view, i + 1, out))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "ZeroRoundRule(%d views)" % len(self.outputs)


class CounterexampleGadget:
    """A two-node tree fragment on which a candidate rule fails: the shared
    edge's input labels are compatible but the rule's outputs are not."""

    __slots__ = ("view1", "port1", "view2", "port2", "out1", "out2",
                 "input_pair")

    def __init__(self, view1, port1, view2, port2, out1, out2, input_pair):
        self.view1 = view1
        self.port1 = port1
        self.view2 = view2
        self.port2 = port2
        self.out1 = out1
        self.out2 = out2
        self.input_pair = input_pair

    def serialize(self):
        def fmt(v):
            return "{}" if v is None else "{%s}" % " ".join(v)
        lines = ["# two adjacent internal nodes u, v; remaining ports lead "
                 "to leaves",
                 "u view %s" % fmt(self.view1),
                 "v view %s" % fmt(self.view2),
                 "edge u.port%d -- v.port%d" % (self.port1 + 1, self.port2 + 1)]
        if self.input_pair is not None:
            lines.append("input on edge: %s %s" % self.input_pair)
        lines.append("outputs on edge: %s %s  (not an allowed edge "
                     "configuration)" % (self.out1, self.out2))
        return "\n".join(lines) + "\n"


def _views(p, input_problem):
    """Sorted-representative views; None for the no-input case."""
    if input_problem is None:
        return [None]
    return sorted(tuple(sorted(input_problem.labels[i] for i in cfg))
                  for cfg in input_problem.sorted_node())


def solvable_zero_round(p, input_problem=None):
    """Complete search for a zero-round rule; lexicographically first rule
    (views in sorted order, outputs in target label-id order) or None."""
    if input_problem is not None and p.delta != input_problem.delta:
        raise ValueError("delta mismatch")
    views = _views(p, input_problem)
    delta = p.delta
    nq = len(p.labels)

    # Occurrences: (view index, port); each carries an input label id, or a
    # single shared pseudo-label when no input problem constrains the pairs.
    if input_problem is None:
        inp_of = [[0] * delta for _ in views]
        compatible = {(0, 0)}
    else:
        inp_of = [[input_problem.id_of(l) for l in v] for v in views]
        compatible = set(input_problem.edge)

    occ = [(vi, q) for vi in range(len(views)) for q in range(delta)]
    total = len(occ)
    assignment = [0] * total
    # outputs already emitted per input label id
    used = {}

    node_sorted = sorted(p.node)

    def feasible_partial(vi, upto):
        start = vi * delta
        partial = sorted(assignment[start:upto + 1])
        for cfg in node_sorted:
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
        vi, q = occ[i]
        lbl = inp_of[vi][q]
        last_in_view = q == delta - 1
        for v in range(nq):
            assignment[i] = v
            if last_in_view:
                start = vi * delta
                if tuple(sorted(assignment[start:i + 1])) not in p.node:
                    continue
            elif not feasible_partial(vi, i):
                continue
            ok = True
            for lbl2, outs in used.items():
                pair = tuple(sorted((lbl, lbl2)))
                if pair not in compatible:
                    continue
                for o2 in outs:
                    if tuple(sorted((v, o2))) not in p.edge:
                        ok = False
                        break
                if not ok:
                    break
            if ok and tuple(sorted((lbl, lbl))) in compatible:
                if tuple(sorted((v, v))) not in p.edge:
                    ok = False
            if ok:
                bucket = used.setdefault(lbl, [])
                bucket.append(v)
                if rec(i + 1):
                    return True
                bucket.pop()
                if not bucket:
                    del used[lbl]
        return False

    if not rec(0):
        return None
    outputs = {}
    for vi, view in enumerate(views):
        outs = tuple(p.labels[assignment[vi * delta + q]]
                     for q in range(delta))
        outputs[view] = outs
    return ZeroRoundRule(delta, outputs)


def counterexample_gadget(p, input_problem=None):
    """A realizable violating view/port pair for the canonical rule attempt:
    each view gets its lexicographically first valid node assignment
    (ignoring cross-node constraints), and the first broken compatible pair
    is reported.  Returns None when even that attempt has no violation or no
    per-view assignment exists."""
    views = _views(p, input_problem)
    delta = p.delta
    attempt = {}
    for view in views:
        best = None
        for cfg in sorted(p.node):
            best = tuple(p.labels[i] for i in cfg)
            break
        if best is None:
            return None
        attempt[view] = best
    for (v1, o1s), (v2, o2s) in itertools.combinations_with_replacement(
            sorted(attempt.items(), key=lambda kv: (kv[0] is not None, kv[0])), 2):
        for q1 in range(delta):
            for q2 in range(delta):
                if input_problem is not None:
                    pair = tuple(sorted((input_problem.id_of(v1[q1]),
                                         input_problem.id_of(v2[q2]))))
                    if pair not in input_problem.edge:
                        continue
                    ipair = (v1[q1], v2[q2])
                else:
                    ipair = None
                out = tuple(sorted((p.id_of(o1s[q1]), p.id_of(o2s[q2]))))
                if out not in p.edge:
                    return CounterexampleGadget(v1, q1, v2, q2,
                                                o1s[q1], o2s[q2], ipair)
    return None


# -- replay on random trees -------------------------------------------------


def random_internal_tree(n, delta, rng):
    """A tree in which every non-leaf node has degree exactly delta, with at
    most n nodes (at least one internal node).  Returns (adjacency list of
    neighbor lists); port of neighbor = position in the list."""
    adj = [[] for _ in range(delta + 1)]
    for i in range(1, delta + 1):
        adj[0].append(i)
        adj[i].append(0)
    while len(adj) + (delta - 1) <= n:
        leaves = [v for v in range(len(adj)) if len(adj[v]) == 1]
        if not leaves or rng.random() < 0.1:
            break
        v = rng.choice(leaves)
        for _ in range(delta - 1):
            w = len(adj)
            adj.append([v])
            adj[v].append(w)
    return adj


def orientation_input(adj, delta, rng):
    """Input labeling for the orientation problem: every edge directed, no
    internal sink; labels per (node, port)."""
    n = len(adj)
    labels = {}
    # orient every edge away from node 0 (root); internal nodes then have
    # all child edges outgoing
    seen = [False] * n
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for pi, w in enumerate(adj[v]):
            if seen[w]:
                continue
            seen[w] = True
            labels[(v, pi)] = "O"
            labels[(w, adj[w].index(v))] = "I"
            stack.append(w)
    return labels


def edge_coloring_input(adj, delta, rng):
    """Proper edge coloring of a tree with delta colors, greedy from the
    root; labels per (node, port) with both half-edges equal."""
    n = len(adj)
    labels = {}
    seen = [False] * n
    order = [0]
    seen[0] = True
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        taken = {labels[(v, pi)] for pi in range(len(adj[v]))
                 if (v, pi) in labels}
        free = [str(c) for c in range(1, delta + 1) if str(c) not in taken]
        fi = 0
        for pi, w in enumerate(adj[v]):
            if (v, pi) in labels:
                continue
            color = free[fi]
            fi += 1
            labels[(v, pi)] = color
            labels[(w, adj[w].index(v))] = color
            if not seen[w]:
                seen[w] = True
                order.append(w)
    return labels


INPUT_GENERATORS = {
    "so": orientation_input,
    "sinkless-orientation": orientation_input,
    "edge-coloring": edge_coloring_input,
    "ec": edge_coloring_input,
}


def replay_rule(rule, p, input_problem, adj, input_labels=None):
    """Apply a rule to every internal node of a tree and check the target
    constraints on internal nodes and on edges between labeled endpoints.
    Returns a list of violation strings (empty = clean replay)."""
    delta = p.delta
    out = {}
    for v in range(len(adj)):
        if len(adj[v]) != delta:
            continue
        if input_problem is None:
            view = None
            outs = rule.outputs_for(None)
        else:
            view = tuple(input_labels[(v, pi)] for pi in range(delta))
            outs = rule.outputs_for(view)
        for pi in range(delta):
            out[(v, pi)] = outs[pi]
    violations = []
    for v in range(len(adj)):
        if len(adj[v]) != delta:
            continue
        cfg = tuple(sorted(p.id_of(out[(v, pi)]) for pi in range(delta)))
        if cfg not in p.node:
            violations.append("node %d: %r not allowed" % (v, cfg))
    for v in range(len(adj)):
        for pi, w in enumerate(adj[v]):
            if v > w:
                continue
            a = out.get((v, pi))
            b = out.get((w, adj[w].index(v)))
            if a is None or b is None:
                continue
            pair = tuple(sorted((p.id_of(a), p.id_of(b))))
            if pair not in p.edge:
                violations.append("edge %d-%d: %s %s not allowed"
                                  % (v, w, a, b))
    return violations


# -- the fixed-point refuter ------------------------------------------------


def refute_sso_fixed_point(candidate):
    """Turn any fixed-point relaxation of the both-directions orientation
    problem into a zero-round rule that solves it given an orientation as
    input; returns (rule, trace dict).

    Raises PremiseError when the candidate is not a relaxation of the
    source problem or not a fixed point.
    """
    from .catalog import sso, sso_qk_closed_form, sinkless_orientation
    from .relaxation import find_relaxation, is_fixed_point

    if candidate.delta != 3:
        raise PremiseError("refuter requires delta = 3")
    base = sso(3)
    if find_relaxation(base, candidate) is None:
        raise PremiseError("candidate is not a relaxation of the "
                           "both-directions orientation problem")
    if not is_fixed_point(candidate):
        raise PremiseError("candidate is not a fixed point")

    nlabels = len(candidate.labels)
    y = nlabels + 2
    eased = sso_qk_closed_form(y)
    f = find_relaxation(eased, candidate)
    if f is None:
        raise LclreError(
            "no relaxation from the %d-times-eased problem to the candidate; "
            "this contradicts the easing-preserves-relaxations property and "
            "indicates an internal defect" % y)

    # occurrences of the distinguished configurations {A_i, D_i, D_y}
    configs = eased.sorted_node()
    dy = "D%d" % y
    a_image = {}
    d_image = {}
    dy_image = {}
    for ci, cfg in enumerate(configs):
        names = [eased.labels[l] for l in cfg]
        a_here = [nm for nm in names if nm.startswith("A")]
        if len(a_here) != 1:
            continue
        i = int(a_here[0][1:])
        for pos, nm in enumerate(names):
            img = f.assignments[(ci, pos)]
            if nm == a_here[0]:
                a_image[i] = img
            elif nm == dy:
                dy_image[i] = img
            else:
                d_image[i] = img

    pair = None
    for i in range(1, nlabels + 2):
        for j in range(i + 1, nlabels + 2):
            if a_image.get(i) is not None and a_image[i] == a_image.get(j):
                pair = (i, j)
                break
        if pair:
            break
    if pair is None:
        raise LclreError(
            "pigeonhole failure: %d distinct images for %d configurations"
            % (len(set(a_image.values())), nlabels + 1))
    i, j = pair
    out_a = a_image[j]
    out_d = d_image[j]
    out_dy = dy_image[j]

    so = sinkless_orientation(3)
    outputs = {}
    for view in _views(None, so):
        outs = []
        placed_a = False
        rest = [out_d, out_dy]
        for lbl in view:
            if lbl == "O" and not placed_a:
                outs.append(out_a)
                placed_a = True
            else:
                outs.append(rest.pop(0))
        outputs[view] = tuple(outs)
    rule = ZeroRoundRule(3, outputs)

    violations = _verify_rule_pairs(rule, candidate, so)
    if violations:
        raise LclreError("emitted rule fails verification: %s"
                         % "; ".join(violations))
    trace = {
        "y": y,
        "relaxation": f.serialize(eased),
        "i": i,
        "j": j,
        "images": {"a": out_a, "d": out_d, "d_last": out_dy},
        "rule": rule.serialize(),
    }
    return rule, trace


def _verify_rule_pairs(rule, p, input_problem):
    """solvable_zero_round-style validity check of an explicit rule."""
    violations = []
    views = _views(p, input_problem)
    for view in views:
        outs = rule.outputs[view]
        cfg = tuple(sorted(p.id_of(o) for o in outs))
        if cfg not in p.node:
            violations.append("view %r node multiset invalid" % (view,))
    for v1, v2 in itertools.combinations_with_replacement(views, 2):
        o1s, o2s = rule.outputs[v1], rule.outputs[v2]
        for q1 in range(p.delta):
            for q2 in range(p.delta):
                if input_problem is not None:
                    pair = tuple(sorted((input_problem.id_of(v1[q1]),
                                         input_problem.id_of(v2[q2]))))
                    if pair not in input_problem.edge:
                        continue
                out = tuple(sorted((p.id_of(o1s[q1]), p.id_of(o2s[q2]))))
                if out not in p.edge:
                    violations.append(
                        "views %r/%r ports %d/%d -> %s %s"
                        % (v1, v2, q1 + 1, q2 + 1, o1s[q1], o2s[q2]))
    return violations


def make_rng(seed):
    return random.Random(seed)
