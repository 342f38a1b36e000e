"""Operation descriptors: one JSON-dict in, one JSON-dict out.

The HTTP endpoints, the CLI subcommands, and session-step replay all funnel
through `apply_descriptor`, which is what makes stored sessions replayable
byte-for-byte.
"""

from fractions import Fraction

from . import catalog, lifting, roundelim, tripotent, zeroround
from .errors import LclreError, ParseError, PremiseError
from .problem import (is_equivalent, problem_from_json, problem_to_json,
                      product)
from .relaxation import (RelaxationFunction, find_edge_based_relaxation,
                         find_port_local_relaxation, find_relaxation,
                         is_fixed_point, verify_relaxation)

PROBLEM_OPS = ("re", "rere", "q", "qpow", "rstar", "product", "tau")
VERDICT_OPS = ("relaxation", "fixedpoint", "zeroround", "refute-sso", "lift")
ALL_OPS = PROBLEM_OPS + VERDICT_OPS + ("catalog",)


def _caps(desc):
    out = {}
    if desc.get("label_cap") is not None:
        out["label_cap"] = int(desc["label_cap"])
    if desc.get("config_cap") is not None:
        out["config_cap"] = int(desc["config_cap"])
    return out


def _problem(desc, key="problem"):
    if key not in desc:
        raise ParseError("descriptor missing %r" % key)
    return problem_from_json(desc[key])


def relaxation_to_json(f, p=None):
    if f.kind == "port-local":
        assignments = dict(sorted(f.assignments.items()))
    else:
        assignments = [[ci, pos, name]
                       for (ci, pos), name in sorted(f.assignments.items())]
    return {"kind": f.kind, "assignments": assignments,
            "text": f.serialize(p)}


def relaxation_from_json(data):
    kind = data.get("kind")
    assignments = data.get("assignments")
    if kind == "port-local":
        if not isinstance(assignments, dict):
            raise ParseError("port-local assignments must be an object")
        return RelaxationFunction(kind, assignments)
    if kind in ("node-occurrence", "edge-occurrence"):
        try:
            mapping = {(int(ci), int(pos)): name
                       for ci, pos, name in assignments}
        except (TypeError, ValueError):
            raise ParseError("occurrence assignments must be "
                             "[index, position, name] triples")
        return RelaxationFunction(kind, mapping)
    raise ParseError("unknown relaxation kind %r" % kind)


_RELAX_KINDS = {"node": "node-occurrence", "portlocal": "port-local",
                "edgebased": "edge-occurrence"}
_RELAX_SEARCH = {"node": find_relaxation, "portlocal": find_port_local_relaxation,
                 "edgebased": find_edge_based_relaxation}


def _op_relaxation(desc):
    kind = desc.get("kind", "node")
    if kind not in _RELAX_KINDS:
        raise ParseError("relaxation kind must be one of %s"
                         % ", ".join(sorted(_RELAX_KINDS)))
    p = _problem(desc, "from")
    q_prob = _problem(desc, "to")
    if desc.get("mapping") is not None:
        mapping = desc["mapping"]
        if isinstance(mapping, dict) and "kind" not in mapping:
            mapping = {"kind": _RELAX_KINDS[kind], "assignments": mapping}
        f = relaxation_from_json(mapping)
        if f.kind != _RELAX_KINDS[kind]:
            raise ParseError("mapping kind does not match requested kind")
        return {"verified": bool(verify_relaxation(f, p, q_prob)),
                "relaxation": relaxation_to_json(f, p)}
    found = _RELAX_SEARCH[kind](p, q_prob)
    if found is None:
        return {"found": False}
    return {"found": True, "relaxation": relaxation_to_json(found, p)}


def _op_zeroround(desc):
    p = _problem(desc)
    input_problem = None
    if desc.get("input") is not None:
        input_problem = problem_from_json(desc["input"])
    rule = zeroround.solvable_zero_round(p, input_problem)
    if rule is not None:
        outputs = {("" if k is None else " ".join(k)): list(v)
                   for k, v in rule.outputs.items()}
        return {"solvable": True,
                "rule": {"delta": rule.delta, "outputs": outputs,
                         "text": rule.serialize()}}
    gadget = zeroround.counterexample_gadget(p, input_problem)
    return {"solvable": False,
            "counterexample": {"text": gadget.serialize()}}


def _op_refute_sso(desc):
    candidate = _problem(desc, "candidate")
    rule, trace = zeroround.refute_sso_fixed_point(candidate)
    return {"rule": rule.serialize(), "trace": trace}


def _fmt_probability(cp):
    value = cp.value
    log2 = value.log2_value
    frac = log2.as_fraction()
    return {"log2": {
                "exact_fraction": [frac.numerator, frac.denominator]
                                  if frac is not None else None,
                "approx": log2.to_float(),
                "text": log2.describe()},
            "capped": cp.capped}


def _op_lift(desc):
    which = desc.get("which", "bounds")
    if which == "bounds":
        report = lifting.lower_bounds(
            int(desc["k"]), int(desc["delta"]), desc["L"], desc["n"],
            thirteenth_variant=bool(desc.get("thirteenth_variant", False)))
        return {"which": "bounds", "report": report.as_dict()}
    if which == "failure-single":
        p1, p2 = lifting.single_step_failure(
            desc["p"], int(desc["delta"]), int(desc["n_in_labels"]),
            int(desc["out_labels"]), int(desc["out_labels_prime"]),
            int(desc["T"]))
        return {"which": "failure-single",
                "p_prime": _fmt_probability(p1),
                "p_double_prime": _fmt_probability(p2)}
    if which == "failure-multi":
        value = lifting.multi_step_failure(
            desc["p"], int(desc["j"]), int(desc["delta"]),
            int(desc["s"]), int(desc["L"]))
        return {"which": "failure-multi", "bound": _fmt_probability(value)}
    if which == "pn-floor":
        value = lifting.pn_lower_failure(
            int(desc["T"]), int(desc["L"]), int(desc["delta"]))
        log2 = value.log2_value
        frac = log2.as_fraction()
        return {"which": "pn-floor",
                "log2": {"exact_fraction": [frac.numerator, frac.denominator]
                                           if frac is not None else None,
                         "approx": log2.to_float(),
                         "text": log2.describe()}}
    raise ParseError("unknown lift computation %r" % which)


def _op_catalog(desc):
    name = desc.get("name")
    if not name:
        raise ParseError("catalog descriptor requires a name")
    try:
        p = catalog.get(name, delta=int(desc.get("delta", 3)),
                        k=desc.get("k"))
    except KeyError as exc:
        raise ParseError(str(exc))
    return {"problem": problem_to_json(p)}


def apply_descriptor(desc):
    """Execute one operation descriptor; returns a JSON-able result dict.

    Problem-producing operations return {"problem": ...}; verdict
    operations return their verdict payloads.
    """
    if not isinstance(desc, dict):
        raise ParseError("descriptor must be an object")
    op = desc.get("op")
    caps = _caps(desc)
    if op == "re":
        cc = caps.get("config_cap", roundelim.DEFAULT_CONFIG_CAP)
        return {"problem": problem_to_json(roundelim.re(_problem(desc), cc))}
    if op == "rere":
        cc = caps.get("config_cap", roundelim.DEFAULT_CONFIG_CAP)
        return {"problem": problem_to_json(roundelim.rere(_problem(desc), cc))}
    if op == "q":
        return {"problem": problem_to_json(
            roundelim.q(_problem(desc),
                        caps.get("label_cap", roundelim.DEFAULT_LABEL_CAP),
                        caps.get("config_cap", roundelim.DEFAULT_CONFIG_CAP)))}
    if op == "qpow":
        return {"problem": problem_to_json(
            roundelim.q_power(
                _problem(desc), int(desc.get("k", 1)),
                caps.get("label_cap", roundelim.DEFAULT_LABEL_CAP),
                caps.get("config_cap", roundelim.DEFAULT_CONFIG_CAP)))}
    if op == "rstar":
        cc = caps.get("config_cap", roundelim.DEFAULT_CONFIG_CAP)
        return {"problem": problem_to_json(
            roundelim.r_star(_problem(desc), cc))}
    if op == "product":
        return {"problem": problem_to_json(
            product(_problem(desc), _problem(desc, "other")))}
    if op == "tau":
        image = tripotent.tau(
            _problem(desc, "target"), _problem(desc),
            function_cap=int(desc.get("function_cap",
                                      tripotent.DEFAULT_FUNCTION_CAP)),
            config_cap=caps.get("config_cap"),
            label_cap=caps.get("label_cap"))
        return {"problem": problem_to_json(image)}
    if op == "relaxation":
        return _op_relaxation(desc)
    if op == "fixedpoint":
        verdict = is_fixed_point(_problem(desc),
                                 label_cap=caps.get("label_cap"),
                                 config_cap=caps.get("config_cap"))
        return {"fixed_point": bool(verdict)}
    if op == "zeroround":
        return _op_zeroround(desc)
    if op == "refute-sso":
        return _op_refute_sso(desc)
    if op == "lift":
        return _op_lift(desc)
    if op == "catalog":
        return _op_catalog(desc)
    raise ParseError("unknown operation %r" % op)
