"""Generators for the named problems used throughout the workbench, with
label names matching the conventional presentations so outputs diff cleanly
against printed tables."""

import itertools

from .problem import Problem, make_problem, product
from .relaxation import RelaxationFunction


def trivial(delta=3):
    """One label, everything allowed."""
    return make_problem(delta, ["T"], [("T",) * delta], [("T", "T")])


def sinkless_orientation(delta=3):
    """Orient edges so no internal node is a sink: I/O half-edge labels,
    every node has at least one O, and at most one endpoint of an edge
    claims it as outgoing (an O must face an I; two I's may face each
    other)."""
    if delta < 2:
        raise ValueError("delta must be >= 2")
    labels = ["I", "O"]
    node = set()
    for cfg in itertools.product("IO", repeat=delta):
        if "O" in cfg:
            node.add(tuple(sorted(cfg)))
    return make_problem(delta, labels, node, [("I", "O"), ("I", "I")])


def sso(delta=3):
    """Sinkless-and-sourceless orientation: every node needs at least one I
    and at least one O."""
    if delta < 2:
        raise ValueError("delta must be >= 2")
    labels = ["I", "O"]
    node = set()
    for cfg in itertools.product("IO", repeat=delta):
        if "I" in cfg and "O" in cfg:
            node.add(tuple(sorted(cfg)))
    return make_problem(delta, labels, node, [("I", "O")])


def sso_qk_closed_form(k):
    """The closed form of k easing steps applied to sso(3).

    k = 0: labels B C; node = B C [B C]; edge = B C.
    k = 1: labels B C D; node = {B C D}; edge = [B D] [C D].
    k >= 2: labels B, C, D_1..D_k, A_1..A_{k-1} (2k+1 labels);
      node = B C D_k and A_i D_i D_k for 1 <= i <= k-1;
      edge = [B D_1..D_k] [C D_1..D_k] and A_i D_j for 1 <= i < j <= k.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return make_problem(3, ["B", "C"],
                            [("B", "B", "C"), ("B", "C", "C")],
                            [("B", "C")])
    if k == 1:
        return make_problem(3, ["B", "C", "D"],
                            [("B", "C", "D")],
                            [("B", "C"), ("B", "D"), ("C", "D"), ("D", "D")])
    labels = ["B", "C"]
    labels += ["A%d" % i for i in range(1, k)]
    labels += ["D%d" % i for i in range(1, k + 1)]
    dk = "D%d" % k
    node = [("B", "C", dk)]
    for i in range(1, k):
        node.append(("A%d" % i, "D%d" % i, dk))
    ds = ["D%d" % j for j in range(1, k + 1)]
    edge = set()
    for x in ["B"] + ds:
        for y in ["C"] + ds:
            edge.add(tuple(sorted((x, y))))
    for i in range(1, k):
        for j in range(i + 1, k + 1):
            edge.add(tuple(sorted(("A%d" % i, "D%d" % j))))
    return make_problem(3, labels, node, edge)


ORCX_UPPER = ("O", "R", "C", "X")
ORCX_LOWER = ("o", "r", "c", "x")


def orcx(delta=3):
    """The 8-label row/column/cross marking problem.

    Node configurations: exactly one upper-case entry, and there are two
    positions k != k' with every other entry in {O, o} such that either the
    k entry is X/x and the k' entry is O/o, or the k entry is R/r and the k'
    entry is C/c.  Edge constraint: the five alternative-group families.
    """
    if delta < 3:
        raise ValueError("delta must be >= 3")
    labels = list(ORCX_UPPER + ORCX_LOWER)
    node = set()
    for cfg in itertools.combinations_with_replacement(labels, delta):
        if _orcx_node_ok(cfg):
            node.add(tuple(sorted(cfg)))
    edge = set()
    for grp1, grp2 in [(("O",), ("O", "R", "C", "X")),
                       (("O", "R"), ("O", "R")),
                       (("O", "C"), ("O", "C")),
                       (("o",), ("o", "r", "c", "x")),
                       (("o", "r"), ("o", "c"))]:
        for a in grp1:
            for b in grp2:
                edge.add(tuple(sorted((a, b))))
    return make_problem(delta, labels, node, edge)


def _orcx_node_ok(cfg):
    uppers = [i for i, l in enumerate(cfg) if l in ORCX_UPPER]
    if len(uppers) != 1:
        return False
    n = len(cfg)
    for k in range(n):
        for kp in range(n):
            if k == kp:
                continue
            if any(cfg[m] not in ("O", "o") for m in range(n) if m not in (k, kp)):
                continue
            if cfg[k] in ("X", "x") and cfg[kp] in ("O", "o"):
                return True
            if cfg[k] in ("R", "r") and cfg[kp] in ("C", "c"):
                return True
    return False


def hom_problem(delta=3):
    """Row/column intersection encoding with labels (y,z) over {1..delta}^2,
    written `y-z`.  Nodes are constant; an edge pair (y,z)(y',z') is allowed
    when (1) y != 1 != z, y != y', z != z' (or the same with the roles of
    the two endpoints swapped), or (2) y = y' = 1, z != 1 != z', z != z',
    or (3) z = z' = 1, y != 1 != y', y != y'."""
    if delta < 3:
        raise ValueError("delta must be >= 3")
    pairs = [(y, z) for y in range(1, delta + 1) for z in range(1, delta + 1)]
    name = {p: "%d-%d" % p for p in pairs}
    labels = [name[p] for p in pairs]
    node = [tuple([name[p]] * delta) for p in pairs]
    edge = set()
    for a in pairs:
        for b in pairs:
            if _hom_edge_ok(a, b) or _hom_edge_ok(b, a):
                edge.add(tuple(sorted((name[a], name[b]))))
    return make_problem(delta, labels, node, edge)


def _hom_edge_ok(a, b):
    (y, z), (yp, zp) = a, b
    if y != 1 != z and y != yp and z != zp:
        return True
    if y == yp == 1 and z != 1 != zp and z != zp:
        return True
    if z == zp == 1 and y != 1 != yp and y != yp:
        return True
    return False


def edge_coloring(delta=3):
    """Proper edge coloring as a half-edge labeling: colors 1..delta, every
    node sees each color once, both half-edges of an edge agree."""
    if delta < 2:
        raise ValueError("delta must be >= 2")
    labels = [str(i) for i in range(1, delta + 1)]
    return make_problem(delta, labels,
                        [tuple(labels)],
                        [(l, l) for l in labels])


def marking_map(delta=3):
    """The port-local map from product(hom_problem, edge_coloring) onto orcx.

    A node labeled (y,z) marks its color-y edge as its row and its color-z
    edge as its column.  On the color-1 half-edge it outputs X/R/C/O for
    both/row-only/column-only/no marks; on a color-z' half-edge (z' > 1) it
    outputs the lower-case letters x/r/c/o the same way.
    """
    hom = hom_problem(delta)
    ec = edge_coloring(delta)
    prod = product(hom, ec)
    mapping = {}
    for name in prod.labels:
        yz, color = name.rsplit(".", 1)
        y, z = (int(t) for t in yz.split("-"))
        ccol = int(color)
        row = y == ccol
        col = z == ccol
        letters = ORCX_UPPER if ccol == 1 else ORCX_LOWER
        if row and col:
            out = letters[3]      # X / x
        elif row:
            out = letters[1]      # R / r
        elif col:
            out = letters[2]      # C / c
        else:
            out = letters[0]      # O / o
        mapping[name] = out
    return mapping


def marking_relaxation(delta=3):
    """marking_map packaged as a port-local relaxation witness."""
    return RelaxationFunction("port-local", marking_map(delta))


CATALOG = {
    "trivial": trivial,
    "so": sinkless_orientation,
    "sinkless-orientation": sinkless_orientation,
    "sso": sso,
    "sso-qk": None,  # needs k; handled by get()
    "orcx": orcx,
    "hom": hom_problem,
    "edge-coloring": edge_coloring,
    "ec": edge_coloring,
}


def get(name, delta=3, k=None):
    """Fetch a catalog problem by name."""
    if name == "sso-qk":
        if k is None:
            raise ValueError("sso-qk requires k")
        return sso_qk_closed_form(k)
    gen = CATALOG.get(name)
    if gen is None:
        raise KeyError("unknown catalog problem %r" % name)
    return gen(delta)


def names():
    return sorted(CATALOG)
