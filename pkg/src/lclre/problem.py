"""Core representation of node-edge-checkable labeling problems.

A problem is an alphabet of labels, a node constraint (multisets of delta
half-edge labels) and an edge constraint (multisets of 2 labels).
Configurations are stored expanded as sorted tuples of label ids; condensed
(alternative-group) notation is a parsing/rendering concern only.
"""

import itertools
import re as _re

from .errors import ParseError, LclreError

RESERVED_CHARS = set("(),<>#")

_LABEL_RE = _re.compile(r"[^\s(),<>#]+$")


def valid_label_name(name):
    return bool(name) and _LABEL_RE.match(name) is not None


class Problem:
    """Immutable problem value.

    labels: tuple of display names; a label's id is its index here.
    node/edge: frozensets of id-sorted tuples (arity delta resp. 2).
    renames: optional tuple of (fresh name, structured source) pairs
    recording how fresh labels were derived from an earlier alphabet.
    """

    __slots__ = ("delta", "labels", "node", "edge", "renames", "_index", "_hash")

    def __init__(self, delta, labels, node, edge, renames=None):
        labels = tuple(labels)
        if delta < 2:
            raise ValueError("delta must be >= 2, got %d" % delta)
        index = {}
        for name in labels:
            if not valid_label_name(name):
                raise ValueError("invalid label name %r" % name)
            if name in index:
                raise ValueError("duplicate label name %r" % name)
            index[name] = len(index)
        node = frozenset(tuple(sorted(c)) for c in node)
        edge = frozenset(tuple(sorted(c)) for c in edge)
        for c in node:
            if len(c) != delta:
                raise ValueError("node configuration %r has arity %d, expected %d"
                                 % (c, len(c), delta))
        for c in edge:
            if len(c) != 2:
                raise ValueError("edge configuration %r has arity %d, expected 2"
                                 % (c, len(c)))
        nlab = len(labels)
        for c in itertools.chain(node, edge):
            for i in c:
                if not 0 <= i < nlab:
                    raise ValueError("label id %d out of range" % i)
        self.delta = delta
        self.labels = labels
        self.node = node
        self.edge = edge
        self.renames = tuple(renames) if renames else None
        self._index = index
        self._hash = None

    # -- basic accessors ---------------------------------------------------

    def id_of(self, name):
        return self._index[name]

    def name_of(self, lid):
        return self.labels[lid]

    def sorted_node(self):
        return sorted(self.node)

    def sorted_edge(self):
        return sorted(self.edge)

    def config_names(self, config):
        return tuple(self.labels[i] for i in config)

    def node_names(self):
        return frozenset(tuple(sorted(self.config_names(c)))
                         for c in self.node)

    def edge_names(self):
        return frozenset(tuple(sorted(self.config_names(c)))
                         for c in self.edge)

    def used_labels(self):
        used = set()
        for c in itertools.chain(self.node, self.edge):
            used.update(c)
        return frozenset(self.labels[i] for i in used)

    # -- equality ignores label order and rename provenance ----------------

    def __eq__(self, other):
        if not isinstance(other, Problem):
            return NotImplemented
        return (self.delta == other.delta
                and set(self.labels) == set(other.labels)
                and self.node_names() == other.node_names()
                and self.edge_names() == other.edge_names())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.delta, frozenset(self.labels),
                               self.node_names(), self.edge_names()))
        return self._hash

    def __repr__(self):
        return ("Problem(delta=%d, labels=%d, node=%d, edge=%d)"
                % (self.delta, len(self.labels), len(self.node), len(self.edge)))


def make_problem(delta, labels, node, edge, renames=None):
    """Build a Problem from name-level configurations (iterables of names)."""
    labels = tuple(labels)
    index = {name: i for i, name in enumerate(labels)}
    try:
        node_ids = [tuple(index[n] for n in cfg) for cfg in node]
        edge_ids = [tuple(index[n] for n in cfg) for cfg in edge]
    except KeyError as exc:
        raise ValueError("configuration uses undeclared label %s" % exc)
    return Problem(delta, labels, node_ids, edge_ids, renames)


# -- condensed configurations ---------------------------------------------


def expand_condensed(positions):
    """Expand a positional list of label alternatives into the set of
    multisets obtainable by one choice per position.

    Entries may be names or ids; returns a set of sorted tuples.
    """
    pools = [tuple(dict.fromkeys(p)) for p in positions]
    if any(not p for p in pools):
        raise ValueError("condensed position must be nonempty")
    out = set()
    for choice in itertools.product(*pools):
        out.add(tuple(sorted(choice)))
    return out


# -- parsing ----------------------------------------------------------------

_ALPHABET_COMMENT = "# alphabet:"


def parse_problem(text):
    """Parse the problem file format.

    Format: optional `#` comment lines; a `[node]` header followed by one
    configuration per line; a `[edge]` header likewise.  A configuration
    line holds whitespace-separated entries; an entry is a bare label or a
    parenthesized alternative group `(L1 L2 ...)`.  A leading comment of the
    form `# alphabet: a b c` pins the full alphabet (used to round-trip
    labels that occur in no configuration).
    """
    section = None
    node_lines = []
    edge_lines = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.lower().startswith(_ALPHABET_COMMENT):
                declared = line[len(_ALPHABET_COMMENT):].split()
                for name in declared:
                    if not valid_label_name(name):
                        raise ParseError("invalid label name %r" % name, lineno)
            continue
        if line.lower() == "[node]":
            section = "node"
            continue
        if line.lower() == "[edge]":
            section = "edge"
            continue
        if line.startswith("["):
            raise ParseError("unknown section header %r" % line, lineno)
        if section is None:
            raise ParseError("configuration before any section header", lineno)
        positions = _parse_config_line(line, lineno)
        (node_lines if section == "node" else edge_lines).append((lineno, positions))

    if not node_lines:
        raise ParseError("missing or empty [node] section")
    if not edge_lines:
        raise ParseError("missing or empty [edge] section")

    delta = len(node_lines[0][1])
    for lineno, positions in node_lines:
        if len(positions) != delta:
            raise ParseError("node line has %d entries, expected %d"
                             % (len(positions), delta), lineno)
    if delta < 2:
        raise ParseError("node arity must be >= 2, got %d" % delta,
                         node_lines[0][0])
    for lineno, positions in edge_lines:
        if len(positions) != 2:
            raise ParseError("edge line has %d entries, expected 2"
                             % (len(positions), lineno), lineno)

    labels = []
    seen = set()

    def note(name):
        if name not in seen:
            seen.add(name)
            labels.append(name)

    if declared:
        for name in declared:
            note(name)
    for _, positions in itertools.chain(node_lines, edge_lines):
        for pos in positions:
            for name in pos:
                note(name)

    node = set()
    for _, positions in node_lines:
        node |= expand_condensed(positions)
    edge = set()
    for _, positions in edge_lines:
        edge |= expand_condensed(positions)
    return make_problem(delta, labels, node, edge)


def _parse_config_line(line, lineno):
    positions = []
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch.isspace():
            i += 1
        elif ch == "(":
            j = line.find(")", i)
            if j < 0:
                raise ParseError("unclosed '('", lineno)
            group = line[i + 1:j].split()
            if not group:
                raise ParseError("empty alternative group", lineno)
            for name in group:
                if not valid_label_name(name):
                    raise ParseError("invalid label token %r" % name, lineno)
            positions.append(tuple(group))
            i = j + 1
        elif ch in RESERVED_CHARS:
            raise ParseError("unexpected character %r" % ch, lineno)
        else:
            j = i
            while j < n and not line[j].isspace() and line[j] not in RESERVED_CHARS:
                j += 1
            name = line[i:j]
            if not valid_label_name(name):
                raise ParseError("invalid label token %r" % name, lineno)
            positions.append((name,))
            i = j
    if not positions:
        raise ParseError("empty configuration line", lineno)
    return positions


# -- serialization ----------------------------------------------------------


def serialize_problem(p):
    """Render a problem file.  Uses condensed alternative groups when a
    greedy grouping shortens the section; deterministic for equal inputs."""
    out = []
    unused = [name for name in p.labels if name not in p.used_labels()]
    if unused:
        out.append(_ALPHABET_COMMENT + " " + " ".join(p.labels))
    out.append("[node]")
    out.extend(_render_constraint(p, p.node, p.delta))
    out.append("[edge]")
    out.extend(_render_constraint(p, p.edge, 2))
    return "\n".join(out) + "\n"


def _render_constraint(p, configs, arity):
    expanded = sorted(configs)
    condensed = _greedy_condense(expanded, arity, len(p.labels))
    if condensed is not None and len(condensed) < len(expanded):
        lines = []
        for setcfg in condensed:
            parts = []
            for mask in setcfg:
                names = [p.labels[i] for i in _mask_ids(mask)]
                parts.append(names[0] if len(names) == 1
                             else "(" + " ".join(names) + ")")
            lines.append(" ".join(parts))
        return lines
    return [" ".join(p.labels[i] for i in cfg) for cfg in expanded]


def _mask_ids(mask):
    ids = []
    i = 0
    while mask:
        if mask & 1:
            ids.append(i)
        mask >>= 1
        i += 1
    return ids


def _greedy_condense(configs, arity, nlabels):
    """Cover the configuration list with alternative-group lines.

    Candidates are the maximal set-configurations whose full expansion stays
    inside the constraint, so any greedy cover expands to exactly the input.
    Returns a list of set-configurations (tuples of bitmasks) or None when
    condensing is pointless.
    """
    if len(configs) <= 1 or not configs:
        return None
    from .kernel import maximize as _maximize

    base = [tuple(1 << i for i in cfg) for cfg in configs]
    maximal = _maximize(base, arity)
    expansions = []
    for setcfg in sorted(maximal):
        cover = expand_condensed([_mask_ids(m) for m in setcfg])
        expansions.append((setcfg, cover))
    remaining = set(configs)
    lines = []
    while remaining:
        best = None
        for setcfg, cover in expansions:
            gain = len(cover & remaining)
            if gain == 0:
                continue
            key = (-gain, setcfg)
            if best is None or key < best[0]:
                best = (key, setcfg, cover)
        if best is None:
            return None
        lines.append(best[1])
        remaining -= best[2]
    return lines


# -- rename provenance ------------------------------------------------------


def render_source(source):
    """Render a structured source label: a name, or a (nested) frozenset of
    sources, shown as `<a,b>` with members sorted."""
    if isinstance(source, str):
        return source
    parts = sorted(render_source(m) for m in source)
    return "<" + ",".join(parts) + ">"


def serialize_renames(p):
    """Render the sidecar rename map as `fresh := <a,b>` lines."""
    if not p.renames:
        return ""
    lines = ["%s := %s" % (fresh, render_source(src))
             for fresh, src in sorted(p.renames)]
    return "\n".join(lines) + "\n"


# -- product ----------------------------------------------------------------


def product(p, q, sep="."):
    """The product problem: labels are pairs, a node configuration is any
    positional pairing of a node configuration of p with one of q (collected
    as a multiset of pairs); edges analogous."""
    if p.delta != q.delta:
        raise ValueError("delta mismatch: %d vs %d" % (p.delta, q.delta))
    nq = len(q.labels)
    labels = [a + sep + b for a in p.labels for b in q.labels]

    def pair(i, j):
        return i * nq + j

    def combine(cfgs_p, cfgs_q):
        out = set()
        for a in cfgs_p:
            for b in cfgs_q:
                for perm in set(itertools.permutations(b)):
                    out.add(tuple(sorted(pair(x, y) for x, y in zip(a, perm))))
        return out

    return Problem(p.delta, labels,
                   combine(p.node, q.node), combine(p.edge, q.edge))


def pair_components(name, sep="."):
    """Split a product label name produced by `product` (first separator)."""
    a, _, b = name.partition(sep)
    return a, b


# -- canonical form ---------------------------------------------------------

_CANON_PERM_CAP = 10 ** 6


def canonical_form(p):
    """The canonical presentation of p: invariant under label renaming.

    Signature refinement partitions the labels, then the remaining
    permutations are searched exhaustively for the lexicographically least
    encoding.  `canonical_form_with_map` also returns the rename map.
    """
    return canonical_form_with_map(p)[0]


def canonical_form_with_map(p):
    """(canonical problem, old-name -> new-name map)."""
    n = len(p.labels)
    node = sorted(p.node)
    edge = sorted(p.edge)

    colors = _refine_colors(n, node, edge)

    classes = {}
    for lid, c in enumerate(colors):
        classes.setdefault(c, []).append(lid)
    ordered_classes = [classes[c] for c in sorted(classes)]

    total = 1
    for cls in ordered_classes:
        for k in range(2, len(cls) + 1):
            total *= k
        if total > _CANON_PERM_CAP:
            raise LclreError("canonicalization search space too large")

    best = None
    for perm_parts in itertools.product(
            *(itertools.permutations(cls) for cls in ordered_classes)):
        order = [lid for part in perm_parts for lid in part]
        newid = [0] * n
        for pos, lid in enumerate(order):
            newid[lid] = pos
        enc_node = tuple(sorted(tuple(sorted(newid[i] for i in cfg))
                                for cfg in node))
        enc_edge = tuple(sorted(tuple(sorted(newid[i] for i in cfg))
                                for cfg in edge))
        enc = (enc_node, enc_edge)
        if best is None or enc < best[0]:
            best = (enc, newid)

    (enc_node, enc_edge), newid = best
    labels = ["x%d" % i for i in range(n)]
    canon = Problem(p.delta, labels, enc_node, enc_edge)
    mapping = {p.labels[lid]: labels[newid[lid]] for lid in range(n)}
    return canon, mapping


def _refine_colors(n, node, edge):
    """Iterated signature refinement; colors are canonical ranks."""
    sigs = []
    for lid in range(n):
        node_prof = sorted(cfg.count(lid) for cfg in node if lid in cfg)
        edge_prof = sorted(cfg.count(lid) for cfg in edge if lid in cfg)
        sigs.append((tuple(node_prof), tuple(edge_prof)))
    colors = _rank(sigs)
    while True:
        sigs = []
        for lid in range(n):
            node_prof = sorted(
                tuple(sorted(colors[i] for i in cfg))
                for cfg in node if lid in cfg)
            edge_prof = sorted(
                tuple(sorted(colors[i] for i in cfg))
                for cfg in edge if lid in cfg)
            sigs.append((colors[lid], tuple(node_prof), tuple(edge_prof)))
        new = _rank(sigs)
        if new == colors:
            return colors
        colors = new


def _rank(sigs):
    order = {s: r for r, s in enumerate(sorted(set(sigs)))}
    return [order[s] for s in sigs]


# -- equivalence ------------------------------------------------------------


def is_equivalent(p, q):
    """True iff each problem is a relaxation of the other."""
    if p.delta != q.delta:
        raise ValueError("delta mismatch: %d vs %d" % (p.delta, q.delta))
    from .relaxation import find_relaxation

    return (find_relaxation(p, q) is not None
            and find_relaxation(q, p) is not None)


# -- JSON form ---------------------------------------------------------------


def problem_to_json(p):
    """The wire form: {delta, labels, node, edge, renames?} with
    configurations as name lists in deterministic order."""
    data = {
        "delta": p.delta,
        "labels": list(p.labels),
        "node": [list(p.config_names(c)) for c in p.sorted_node()],
        "edge": [list(p.config_names(c)) for c in p.sorted_edge()],
    }
    if p.renames:
        data["renames"] = {fresh: render_source(src)
                           for fresh, src in sorted(p.renames)}
    return data


def problem_from_json(data):
    if not isinstance(data, dict):
        raise ParseError("problem payload must be an object")
    for key in ("delta", "labels", "node", "edge"):
        if key not in data:
            raise ParseError("problem payload missing %r" % key)
    delta = data["delta"]
    if not isinstance(delta, int):
        raise ParseError("delta must be an integer")
    labels = data["labels"]
    if (not isinstance(labels, list)
            or not all(isinstance(l, str) for l in labels)):
        raise ParseError("labels must be a list of strings")

    def configs(key, arity):
        out = []
        for cfg in data[key]:
            if (not isinstance(cfg, list) or len(cfg) != arity
                    or not all(isinstance(l, str) for l in cfg)):
                raise ParseError("%s configurations must be lists of %d "
                                 "label names" % (key, arity))
            out.append(tuple(cfg))
        return out

    renames = data.get("renames")
    ren = sorted(renames.items()) if renames else None
    try:
        return make_problem(delta, labels, configs("node", delta),
                            configs("edge", 2), ren)
    except (ValueError, KeyError) as exc:
        raise ParseError(str(exc))
