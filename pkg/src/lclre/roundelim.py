"""Round-elimination operators over node-edge-checkable problems.

The two core transformers work on one constraint with a universal quantifier
(maximal set-configurations) and on the other with an existential quantifier
(superset replacement).  Composing them in both orders gives the one-round
easing operator `q`; `r_star` is the variant that keeps non-maximal edge
set-configurations and admits single-label-map relaxations into it.
"""

import itertools

from . import cancel, kernel
from .errors import CapExceeded
from .problem import Problem

DEFAULT_LABEL_CAP = 4096
DEFAULT_CONFIG_CAP = 10 ** 6


def mask_ids(mask):
    ids = []
    i = 0
    while mask:
        if mask & 1:
            ids.append(i)
        mask >>= 1
        i += 1
    return ids


def mask_of(ids):
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def dominates(c, d):
    """True iff configuration c is strictly dominated by configuration d."""
    return kernel.dominated_by(c, d)


def combine(c, d, u, sigma):
    """Combination of set-configurations w.r.t. union position u and
    permutation sigma; None signals an empty intersection."""
    return kernel.combine(c, d, u, sigma)


def maximize(base, arity):
    """Maximal set-configurations generated from singleton or set base
    configurations (tuples of bitmasks)."""
    return kernel.maximize(base, arity, poll=cancel.checkpoint)


def maximize_constraint(p, which="edge"):
    """Maximize one constraint of a problem, from its singleton lift."""
    configs = p.sorted_edge() if which == "edge" else p.sorted_node()
    arity = 2 if which == "edge" else p.delta
    return maximize([tuple(1 << i for i in cfg) for cfg in configs], arity)


def exists_step(configs, alphabet_masks, config_cap=DEFAULT_CONFIG_CAP):
    """Replace each entry of each configuration by every alphabet set
    containing it, expanding positional choices into multisets.

    `configs` are id tuples over the base alphabet, `alphabet_masks` bitmask
    sets over the same alphabet; returns a set of sorted mask tuples.
    """
    out = set()
    for cfg in sorted(configs):
        pools = []
        for lid in cfg:
            pool = [m for m in alphabet_masks if m >> lid & 1]
            if not pool:
                pools = None
                break
            pools.append(pool)
        if pools is None:
            continue
        for choice in itertools.product(*pools):
            cancel.checkpoint()
            out.add(tuple(sorted(choice)))
            if len(out) > config_cap:
                raise CapExceeded(
                    "existential step exceeded configuration cap %d" % config_cap)
    return out


def _sort_key(mask):
    return tuple(mask_ids(mask))


def _fresh_alphabet(masks, base_labels):
    """Deterministic fresh names for a list of set labels.

    When every member name is a single character and sets are small, the
    fresh name is the concatenation of member names (sorted by base id);
    otherwise names are L0, L1, ...  The structured sources are recorded for
    the sidecar rename map either way.
    """
    masks = sorted(masks, key=_sort_key)
    sources = []
    for m in masks:
        members = [base_labels[i] for i in mask_ids(m)]
        sources.append((members, frozenset(members)))
    short = all(len(name) == 1 for members, _ in sources for name in members) \
        and all(len(members) <= 6 for members, _ in sources)
    if short:
        names = ["".join(members) for members, _ in sources]
    else:
        names = ["L%d" % i for i in range(len(masks))]
    renames = tuple((names[i], sources[i][1]) for i in range(len(masks)))
    return masks, names, renames


def _build(delta, masks, names, renames, node_mask_cfgs, edge_mask_cfgs):
    index = {m: i for i, m in enumerate(masks)}
    node = [tuple(sorted(index[m] for m in cfg)) for cfg in node_mask_cfgs]
    edge = [tuple(sorted(index[m] for m in cfg)) for cfg in edge_mask_cfgs]
    return Problem(delta, names, node, edge, renames)


def re(p, config_cap=DEFAULT_CONFIG_CAP):
    """One edge-side elimination step: maximal edge set-configurations, then
    the existential node step over the sets that appear; fresh renaming with
    provenance."""
    emax = maximize_constraint(p, "edge")
    alphabet = sorted({m for cfg in emax for m in cfg}, key=_sort_key)
    node_cfgs = exists_step(p.sorted_node(), alphabet, config_cap)
    masks, names, renames = _fresh_alphabet(alphabet, p.labels)
    return _build(p.delta, masks, names, renames, sorted(node_cfgs), sorted(emax))


def rere(p, config_cap=DEFAULT_CONFIG_CAP):
    """The dual step: maximal node set-configurations, existential edge
    step."""
    nmax = maximize_constraint(p, "node")
    alphabet = sorted({m for cfg in nmax for m in cfg}, key=_sort_key)
    edge_cfgs = exists_step(p.sorted_edge(), alphabet, config_cap)
    masks, names, renames = _fresh_alphabet(alphabet, p.labels)
    return _build(p.delta, masks, names, renames, sorted(nmax), sorted(edge_cfgs))


def q(p, label_cap=DEFAULT_LABEL_CAP, config_cap=DEFAULT_CONFIG_CAP):
    """One full easing step: rere(re(p)), with resource caps."""
    step = re(p, config_cap)
    _check_caps(step, label_cap, config_cap)
    out = rere(step, config_cap)
    _check_caps(out, label_cap, config_cap)
    return out


def q_power(p, k, label_cap=DEFAULT_LABEL_CAP, config_cap=DEFAULT_CONFIG_CAP):
    """Iterate q k times (k = 0 is the identity); a cap failure reports how
    many full iterations completed."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = p
    for i in range(k):
        try:
            out = q(out, label_cap, config_cap)
        except CapExceeded as exc:
            raise CapExceeded(
                "cap exceeded during iteration %d of %d: %s" % (i + 1, k, exc),
                partial_index=i) from exc
    return out


def _check_caps(p, label_cap, config_cap):
    if len(p.labels) > label_cap:
        raise CapExceeded("label count %d exceeds cap %d"
                          % (len(p.labels), label_cap))
    total = len(p.node) + len(p.edge)
    if total > config_cap:
        raise CapExceeded("configuration count %d exceeds cap %d"
                          % (total, config_cap))


# -- the non-maximal set-alphabet operator ----------------------------------


class RStarView:
    """Membership view of the full-subset-alphabet problem over a base
    problem: labels are all nonempty subsets of the base alphabet, an edge
    pair is valid when its full cross product satisfies the base edge
    constraint, and a node tuple is valid when some positional choice
    satisfies the base node constraint."""

    def __init__(self, base):
        self.base = base
        self._edge_cache = {}
        self._node_cache = {}
        self._full = (1 << len(base.labels)) - 1

    def subsets(self):
        return range(1, self._full + 1)

    def label_count(self):
        return self._full

    def edge_has(self, m1, m2):
        key = (m1, m2) if m1 <= m2 else (m2, m1)
        hit = self._edge_cache.get(key)
        if hit is None:
            edge = self.base.edge
            hit = all(tuple(sorted((i, j))) in edge
                      for i in mask_ids(key[0]) for j in mask_ids(key[1]))
            self._edge_cache[key] = hit
        return hit

    def node_has(self, masks):
        key = tuple(sorted(masks))
        hit = self._node_cache.get(key)
        if hit is None:
            hit = any(self._aligns(cfg, key) for cfg in self.base.node)
            self._node_cache[key] = hit
        return hit

    @staticmethod
    def _aligns(cfg, masks):
        return _align(cfg, masks, 0, 0)

    def select_choice(self, masks):
        """Lexicographically first per-position choice from `masks` whose
        multiset satisfies the base node constraint, or None."""
        pools = [mask_ids(m) for m in masks]
        node = self.base.node
        for choice in itertools.product(*pools):
            if tuple(sorted(choice)) in node:
                return choice
        return None


def _align(cfg, masks, i, used):
    if i == len(cfg):
        return True
    lid = cfg[i]
    for j in range(len(masks)):
        if used >> j & 1 or not masks[j] >> lid & 1:
            continue
        if _align(cfg, masks, i + 1, used | (1 << j)):
            return True
    return False


class RStarImage(Problem):
    """Materialized full-subset problem; remembers its base and the bitmask
    behind every label so union maps can be re-localized against it."""

    __slots__ = ("base", "label_masks")


def r_star_view(p):
    return RStarView(p)


def r_star(p, config_cap=DEFAULT_CONFIG_CAP):
    """Materialize the full-subset-alphabet problem.  Only available for
    alphabets of at most 16 labels and while the constraint enumeration
    stays under the configuration cap; otherwise use r_star_view."""
    n = len(p.labels)
    if n > 16:
        raise CapExceeded(
            "alphabet of %d labels too large to materialize the subset "
            "problem; use the membership view" % n)
    view = RStarView(p)
    masks = list(view.subsets())
    masks, names, renames = _fresh_alphabet(masks, p.labels)

    edge_cfgs = []
    for m1, m2 in itertools.combinations_with_replacement(masks, 2):
        cancel.checkpoint()
        if view.edge_has(m1, m2):
            edge_cfgs.append((m1, m2))
    node_cfgs = []
    count = 0
    for cfg in itertools.combinations_with_replacement(masks, p.delta):
        cancel.checkpoint()
        count += 1
        if count > config_cap:
            raise CapExceeded(
                "subset node enumeration exceeded cap %d; use the "
                "membership view" % config_cap)
        if view.node_has(cfg):
            node_cfgs.append(cfg)

    index = {m: i for i, m in enumerate(masks)}
    out = RStarImage(p.delta, names,
                     [tuple(sorted(index[m] for m in cfg)) for cfg in node_cfgs],
                     [tuple(sorted(index[m] for m in cfg)) for cfg in edge_cfgs],
                     renames)
    out.base = p
    out.label_masks = tuple(masks)
    return out
