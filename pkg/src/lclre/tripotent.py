"""Function-alphabet input construction and its calculus.

tau(p, pi) is the problem whose labels are functions from pi's alphabet into
the subset alphabet of p: a tuple of functions is a valid node configuration
when every configuration of pi, however arranged over the ports, maps
positionally into the subset problem's node constraint (edges analogous).
The module also provides the constructive witnesses that come with this
operator: the product-to-target relaxation, port-localization through the
subset problem, the easiest-input reduction, and the fixed-point
construction pipeline with machine-checked certificates.
"""

import itertools

from . import cancel
from .errors import CapExceeded, LclreError, PremiseError
from .problem import Problem, product
from .relaxation import (RelaxationFunction, find_relaxation,
                         verify_relaxation)
from .roundelim import (RStarImage, RStarView, mask_ids, q as q_op,
                        r_star, r_star_view)

DEFAULT_FUNCTION_CAP = 10 ** 7
FILTER_THRESHOLD = 512


class FunctionLabel:
    """A total map from a source alphabet to nonempty subsets of a target
    alphabet, stored as one bitmask per source label id."""

    __slots__ = ("table",)

    def __init__(self, table):
        self.table = tuple(table)
        if any(m == 0 for m in self.table):
            raise ValueError("images must be nonempty")

    def __eq__(self, other):
        return isinstance(other, FunctionLabel) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def render(self, src_labels, dst_labels):
        parts = []
        for lid, name in enumerate(src_labels):
            members = " ".join(dst_labels[i] for i in mask_ids(self.table[lid]))
            parts.append("%s->(%s)" % (name, members))
        return "{%s}" % ", ".join(parts)


class TauView:
    """Membership predicates of tau(p, pi) over explicit function tables,
    usable when the alphabet is too large to materialize."""

    def __init__(self, p_target, pi):
        if p_target.delta != pi.delta:
            raise ValueError("delta mismatch")
        self.p_target = p_target
        self.pi = pi
        self.rstar = r_star_view(p_target)
        self._pi_node_arrangements = _arrangements(pi.node)
        self._node_cache = {}
        self._edge_cache = {}

    def edge_pair_ok(self, f1, f2):
        key = (f1.table, f2.table)
        hit = self._edge_cache.get(key)
        if hit is None:
            hit = all(self.rstar.edge_has(f1.table[l1], f2.table[l2])
                      and self.rstar.edge_has(f1.table[l2], f2.table[l1])
                      for (l1, l2) in self.pi.edge)
            self._edge_cache[key] = hit
            self._edge_cache[(f2.table, f1.table)] = hit
        return hit

    def node_tuple_ok(self, fs):
        key = tuple(sorted(f.table for f in fs))
        hit = self._node_cache.get(key)
        if hit is None:
            hit = all(self.rstar.node_has(
                          tuple(f.table[l] for f, l in zip(fs, arr)))
                      for arr in self._pi_node_arrangements)
            self._node_cache[key] = hit
        return hit


def _arrangements(configs):
    out = set()
    for cfg in configs:
        for perm in itertools.permutations(cfg):
            out.add(perm)
    return sorted(out)


def _candidate_count(n_masks, n_src):
    return n_masks ** n_src


def _participation_sets(view, pi):
    """For each source label t, the family of per-partner-entry feasible
    witnesses: f edge-participates iff for every t there is a single target
    label s whose edge-neighborhood contains every image f(l) for l adjacent
    to t in pi's edge constraint."""
    p = view.base
    nbrs = {t: set() for t in range(len(pi.labels))}
    for (l1, l2) in pi.edge:
        nbrs[l1].add(l2)
        nbrs[l2].add(l1)
    adj_mask = []
    for s in range(len(p.labels)):
        m = 0
        for x in range(len(p.labels)):
            if tuple(sorted((s, x))) in p.edge:
                m |= 1 << x
        adj_mask.append(m)
    return nbrs, adj_mask


def tau(p_target, pi, function_cap=DEFAULT_FUNCTION_CAP,
        config_cap=None, label_cap=None, always_filter=False):
    """Materialize tau(p_target, pi).

    Above FILTER_THRESHOLD candidate functions, only labels participating
    in at least one valid edge configuration are retained; below it the full
    alphabet is kept.  Caps bound the candidate space, the retained
    alphabet, and the constraint enumeration.
    """
    from .roundelim import DEFAULT_CONFIG_CAP, DEFAULT_LABEL_CAP
    if config_cap is None:
        config_cap = DEFAULT_CONFIG_CAP
    if label_cap is None:
        label_cap = DEFAULT_LABEL_CAP
    if p_target.delta != pi.delta:
        raise ValueError("delta mismatch")
    view = r_star_view(p_target)
    n_masks = view.label_count()
    n_src = len(pi.labels)
    count = _candidate_count(n_masks, n_src)
    if count > function_cap:
        raise CapExceeded(
            "%d candidate functions exceed the cap %d; use TauView"
            % (count, function_cap))

    tv = TauView(p_target, pi)
    masks = list(view.subsets())

    if count <= FILTER_THRESHOLD and not always_filter:
        retained = [FunctionLabel(t)
                    for t in itertools.product(masks, repeat=n_src)]
    else:
        nbrs, adj_mask = _participation_sets(view, pi)
        retained = []
        table = [0] * n_src

        def feasible(upto):
            # every source label t must admit a partner-entry witness s
            # consistent with the images fixed so far
            for t in range(n_src):
                ok_t = False
                for s in range(len(p_target.labels)):
                    if all(table[l] & ~adj_mask[s] == 0
                           for l in nbrs[t] if l <= upto):
                        ok_t = True
                        break
                if not ok_t:
                    return False
            return True

        def rec(i):
            cancel.checkpoint()
            if i == n_src:
                retained.append(FunctionLabel(tuple(table)))
                return
            for m in masks:
                table[i] = m
                if feasible(i):
                    rec(i + 1)

        rec(0)

    if len(retained) > label_cap:
        raise CapExceeded(
            "%d retained functions exceed the label cap %d; use TauView"
            % (len(retained), label_cap))
    labels = ["f%d" % i for i in range(len(retained))]
    renames = tuple((labels[i], retained[i].render(pi.labels, p_target.labels))
                    for i in range(len(retained)))

    edge = []
    for i, j in itertools.combinations_with_replacement(range(len(retained)), 2):
        cancel.checkpoint()
        if tv.edge_pair_ok(retained[i], retained[j]):
            edge.append((i, j))
    node = []
    ncount = 0
    for combo in itertools.combinations_with_replacement(range(len(retained)),
                                                         pi.delta):
        cancel.checkpoint()
        ncount += 1
        if ncount > config_cap:
            raise CapExceeded(
                "node enumeration exceeded configuration cap %d" % config_cap)
        if tv.node_tuple_ok([retained[k] for k in combo]):
            node.append(combo)

    out = TauImage(pi.delta, labels, node, edge, renames)
    out.p_target = p_target
    out.pi = pi
    out.functions = tuple(retained)
    return out


class TauImage(Problem):
    """Materialized function-alphabet problem; remembers the generating pair
    and the table behind every label."""

    __slots__ = ("p_target", "pi", "functions")

    def function_of(self, name):
        return self.functions[self.id_of(name)]

    def name_of_table(self, table):
        table = tuple(table)
        for i, f in enumerate(self.functions):
            if f.table == table:
                return self.labels[i]
        return None


# -- constructive witnesses -------------------------------------------------


class TwoStageWitness:
    """Witness for product(pi, t) ->0 p: a single label map into the subset
    problem followed by a per-configuration selection, plus their
    composition as an occurrence-indexed relaxation."""

    __slots__ = ("stage1", "stage2", "composed", "source", "target")

    def __init__(self, stage1, stage2, composed, source, target):
        self.stage1 = stage1
        self.stage2 = stage2
        self.composed = composed
        self.source = source
        self.target = target

    def verify(self):
        return verify_relaxation(self.composed, self.source, self.target)


def check_tau_input_property(p_target, pi, function_cap=DEFAULT_FUNCTION_CAP):
    """Build the always-valid relaxation product(pi, tau(p_target, pi)) ->0
    p_target and verify it."""
    t = tau(p_target, pi, function_cap)
    prod = product(pi, t)
    view = r_star_view(p_target)

    stage1 = {}
    for name in prod.labels:
        lname, fname = name.split(".", 1)
        f = t.function_of(fname)
        stage1[name] = f.table[pi.id_of(lname)]

    composed = {}
    stage2 = {}
    for ci, cfg in enumerate(prod.sorted_node()):
        mask_tuple = tuple(stage1[prod.labels[l]] for l in cfg)
        choice = view.select_choice(mask_tuple)
        if choice is None:
            raise LclreError(
                "no valid selection for configuration %d; the function "
                "alphabet construction is defective" % ci)
        for pos, lid in enumerate(choice):
            composed[(ci, pos)] = p_target.labels[lid]
        stage2[ci] = tuple(p_target.labels[l] for l in choice)

    witness = TwoStageWitness(stage1, stage2,
                              RelaxationFunction("node-occurrence", composed),
                              prod, p_target)
    if not witness.verify():
        raise LclreError("constructed witness failed verification; "
                         "internal defect")
    return witness


def singleton_lift(p):
    """The label map p ->0 r_star(p): each label to its singleton set."""
    image = r_star(p)
    mapping = {}
    for i, name in enumerate(p.labels):
        target = image.label_masks.index(1 << i)
        mapping[name] = image.labels[target]
    return mapping, image


def port_localize(f, p, rstar_image):
    """Collapse an occurrence-indexed relaxation p ->0 rstar_image into a
    single label map by taking, per source label, the union of all its
    occurrence images.  Labels without node occurrences get the smallest
    mask keeping the map valid."""
    if not isinstance(rstar_image, RStarImage):
        raise PremiseError("target is not a materialized subset problem")
    if not verify_relaxation(f, p, rstar_image):
        raise PremiseError("input witness does not verify")
    union = [0] * len(p.labels)
    if f.kind == "port-local":
        for name, tgt in f.assignments.items():
            union[p.id_of(name)] |= rstar_image.label_masks[
                rstar_image.id_of(tgt)]
    else:
        configs = p.sorted_node()
        for (ci, pos), tgt in f.assignments.items():
            lid = configs[ci][pos]
            union[lid] |= rstar_image.label_masks[rstar_image.id_of(tgt)]

    mask_index = {m: i for i, m in enumerate(rstar_image.label_masks)}

    def to_map(u):
        return {p.labels[i]: rstar_image.labels[mask_index[u[i]]]
                for i in range(len(u))}

    missing = [i for i in range(len(p.labels)) if union[i] == 0]
    if not missing:
        g = to_map(union)
        if not verify_relaxation(RelaxationFunction("port-local", g),
                                 p, rstar_image):
            raise LclreError("union map failed verification; internal defect")
        return g

    # complete the map for labels absent from every node configuration
    def rec(k):
        if k == len(missing):
            g = to_map(union)
            if verify_relaxation(RelaxationFunction("port-local", g),
                                 p, rstar_image):
                return g
            return None
        for m in rstar_image.label_masks:
            union[missing[k]] = m
            got = rec(k + 1)
            if got is not None:
                return got
        union[missing[k]] = 0
        return None

    got = rec(0)
    if got is None:
        raise LclreError("no completion for occurrence-free labels")
    return got


def easiest_input_reduction(pi, p_target, i, f,
                            function_cap=DEFAULT_FUNCTION_CAP):
    """Turn a relaxation product(pi, i) ->0 p_target into a label map
    i ->0 tau(p_target, pi): first push the witness through the singleton
    lift and port-localize it over the subset problem, then read off one
    function per input label."""
    prod = product(pi, i)
    if not verify_relaxation(f, prod, p_target):
        raise PremiseError("input witness does not verify")
    lift, image = singleton_lift(p_target)
    if f.kind == "port-local":
        lifted = RelaxationFunction(
            "port-local", {k: lift[v] for k, v in f.assignments.items()})
    else:
        lifted = RelaxationFunction(
            f.kind, {k: lift[v] for k, v in f.assignments.items()})
    fpl = port_localize(lifted, prod, image)

    t = tau(p_target, pi, function_cap)
    n_src = len(pi.labels)
    g = {}
    for i_name in i.labels:
        table = [0] * n_src
        for lid, lname in enumerate(pi.labels):
            key = "%s.%s" % (lname, i_name)
            table[lid] = image.label_masks[image.id_of(fpl[key])]
        name = t.name_of_table(table)
        if name is None:
            name = _lift_to_retained(t, table)
        if name is None:
            raise LclreError(
                "function for input label %r was filtered from the "
                "materialized alphabet and admits no retained superset"
                % i_name)
        g[i_name] = name
    witness = RelaxationFunction("port-local", g)
    if not verify_relaxation(witness, i, t):
        raise LclreError("constructed reduction failed verification; "
                         "internal defect")
    return g, t


def _lift_to_retained(t, table):
    """A retained label pointwise above `table` (node membership is upward
    monotone in every image)."""
    for idx, f in enumerate(t.functions):
        if all(table[k] & ~f.table[k] == 0 for k in range(len(table))):
            return t.labels[idx]
    return None


def double_tau_witness(p_target, pi, t1=None,
                       function_cap=DEFAULT_FUNCTION_CAP):
    """The label map pi ->0 tau(p_target, tau(p_target, pi)): each source
    label L goes to the evaluation-at-L function over the first function
    alphabet.  Verified against the view of the double problem, so the
    (usually huge) double alphabet is never materialized.

    Returns (mapping {pi label: FunctionLabel}, t1)."""
    if t1 is None:
        t1 = tau(p_target, pi, function_cap)
    view = r_star_view(p_target)
    mapping = {}
    for lid, name in enumerate(pi.labels):
        mapping[name] = FunctionLabel(
            tuple(f.table[lid] for f in t1.functions))

    tv2 = TauView(p_target, t1)
    for cfg in pi.node:
        fs = [mapping[pi.labels[l]] for l in cfg]
        for perm in itertools.permutations(fs):
            if not tv2.node_tuple_ok(list(perm)):
                raise LclreError("double-tau witness failed a node check; "
                                 "internal defect")
    for cfg in pi.edge:
        f1, f2 = (mapping[pi.labels[l]] for l in cfg)
        if not (tv2.edge_pair_ok(f1, f2) and tv2.edge_pair_ok(f2, f1)):
            raise LclreError("double-tau witness failed an edge check; "
                             "internal defect")
    return mapping, t1


def tripotency_witnesses(p_target, pi, function_cap=DEFAULT_FUNCTION_CAP,
                         config_cap=None, label_cap=None,
                         search_seconds=0.5):
    """Materialize t1 = tau(p, pi), t2 = tau(p, t1), t3 = tau(p, t2) and
    build verified label maps t1 ->0 t3 and t3 ->0 t1, establishing their
    equivalence constructively.  Raises CapExceeded when the chain cannot
    be materialized.

    The chain is materialized with edge-participation filtering first; when
    the constructive maps are obstructed by a filtered-out label, fall back
    to searching for witnesses between the (small) filtered endpoints, and
    finally to the unfiltered chain under the same caps.
    """
    try:
        return _tripotency_constructive(p_target, pi, function_cap,
                                        config_cap, label_cap,
                                        always_filter=True)
    except CapExceeded:
        raise
    except LclreError:
        pass
    t1 = tau(p_target, pi, function_cap, config_cap, label_cap,
             always_filter=True)
    t2 = tau(p_target, t1, function_cap, config_cap, label_cap,
             always_filter=True)
    t3 = tau(p_target, t2, function_cap, config_cap, label_cap,
             always_filter=True)
    fwd = _bounded_search(t1, t3, search_seconds)
    bwd = _bounded_search(t3, t1, search_seconds)
    if fwd is not None and bwd is not None:
        return t1, t3, fwd, bwd
    return _tripotency_constructive(p_target, pi, function_cap,
                                    config_cap, label_cap,
                                    always_filter=False)


def _bounded_search(p, q, seconds=0.5):
    """Relaxation search with a wall-clock budget; None when not found in
    time."""
    import threading

    from .errors import OperationCancelled

    event = threading.Event()
    timer = threading.Timer(seconds, event.set)
    token = cancel.install(event)
    timer.start()
    try:
        return find_relaxation(p, q)
    except OperationCancelled:
        return None
    finally:
        timer.cancel()
        cancel.uninstall(token)


def _tripotency_constructive(p_target, pi, function_cap, config_cap,
                             label_cap, always_filter):
    t1 = tau(p_target, pi, function_cap, config_cap, label_cap,
             always_filter=always_filter)
    t2 = tau(p_target, t1, function_cap, config_cap, label_cap,
             always_filter=always_filter)
    t3 = tau(p_target, t2, function_cap, config_cap, label_cap,
             always_filter=always_filter)

    # forward: evaluation-at-h over the double alphabet
    fwd = {}
    for hid, hname in enumerate(t1.labels):
        table = tuple(g.table[hid] for g in t2.functions)
        name = t3.name_of_table(table)
        if name is None:
            name = _lift_to_retained(t3, table)
        if name is None:
            raise LclreError("forward tripotency image missing from the "
                             "retained triple alphabet")
        fwd[hname] = name

    # backward: compose with the evaluation-at-L map pi ->0 t2
    eval_at, _ = double_tau_witness(p_target, pi, t1, function_cap)
    bwd = {}
    for fid, fname in enumerate(t3.labels):
        big = t3.functions[fid]
        table = []
        for lname in pi.labels:
            inner = eval_at[lname]
            gid = t2.id_of(t2.name_of_table(inner.table)) \
                if t2.name_of_table(inner.table) is not None else None
            if gid is None:
                lifted = _lift_to_retained(t2, inner.table)
                if lifted is None:
                    raise LclreError("evaluation label missing from the "
                                     "retained double alphabet")
                gid = t2.id_of(lifted)
            table.append(big.table[gid])
        name = t1.name_of_table(tuple(table))
        if name is None:
            name = _lift_to_retained(t1, tuple(table))
        if name is None:
            raise LclreError("backward tripotency image missing from the "
                             "retained alphabet")
        bwd[fname] = name

    w_fwd = RelaxationFunction("port-local", fwd)
    w_bwd = RelaxationFunction("port-local", bwd)
    if not verify_relaxation(w_fwd, t1, t3):
        raise LclreError("forward tripotency witness failed verification")
    if not verify_relaxation(w_bwd, t3, t1):
        raise LclreError("backward tripotency witness failed verification")
    return t1, t3, w_fwd, w_bwd


# -- fixed-point construction ----------------------------------------------


class FixedPointConstruction:
    """Result of the input-elimination pipeline: the constructed problem and
    its machine-checked certificates."""

    __slots__ = ("problem", "pi_relaxation", "step_relaxation",
                 "input_unsolvable")

    def __init__(self, problem, pi_relaxation, step_relaxation,
                 input_unsolvable):
        self.problem = problem
        self.pi_relaxation = pi_relaxation
        self.step_relaxation = step_relaxation
        self.input_unsolvable = input_unsolvable


def construct_fixed_point_relaxation(pi, f_fp, i,
                                     function_cap=DEFAULT_FUNCTION_CAP,
                                     require_nontrivial=True):
    """Eliminate the auxiliary input: from premises product(pi, i) ->0 f_fp,
    i not->0 f_fp, and product(q(f_fp), i) ->0 f_fp, build G = tau(f_fp, i)
    with certificates pi ->0 G, q(G) ->0 G, and i not->0 G.

    With require_nontrivial=False the nontriviality premise is skipped;
    the fixed-point certificate alone still holds whenever f_fp is a
    generalized fixed point for i."""
    from .zeroround import solvable_zero_round

    prod = product(i, pi)
    w = find_relaxation(prod, f_fp)
    if w is None:
        raise PremiseError("product(pi, i) does not relax to the fixed "
                           "point")
    if require_nontrivial and solvable_zero_round(f_fp, i) is not None:
        raise PremiseError("the fixed point is zero-round solvable given "
                           "the input; the construction would be trivial")
    eased = q_op(f_fp)
    if find_relaxation(product(eased, i), f_fp) is None:
        raise PremiseError("the candidate is not a generalized fixed point "
                           "for this input")

    g_map, G = easiest_input_reduction(i, f_fp, pi, w, function_cap)
    pi_wit = RelaxationFunction("port-local", g_map)
    if not verify_relaxation(pi_wit, pi, G):
        raise LclreError("certificate pi ->0 G failed; internal defect")

    step = find_relaxation(q_op(G), G)
    if step is None:
        raise LclreError("certificate q(G) ->0 G failed; the premises "
                         "should guarantee it")
    unsolvable = solvable_zero_round(G, i) is None
    return FixedPointConstruction(G, pi_wit, step, unsolvable)
