"""Command-line interface mirroring the HTTP API one-to-one.

Problems are read in the text format (stdin by default) and written to
stdout; `--json` switches payloads to the wire JSON.  Exit codes: 0 for
positive answers, 2 for "none/unsolvable" answers so pipelines can branch,
1 for errors.
"""

import json
import os
import sys

import click

from . import catalog as _catalog
from .errors import LclreError, ParseError
from .ops import apply_descriptor, relaxation_to_json
from .problem import (parse_problem, problem_from_json, problem_to_json,
                      serialize_problem, serialize_renames)

NEGATIVE_EXIT = 2


def _read_problem(source):
    """Parse a problem from a path, '-' (stdin), or implicit stdin."""
    if source in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(source) as fh:
            text = fh.read()
    text = text.strip()
    if text.startswith("{"):
        return problem_from_json(json.loads(text))
    return parse_problem(text)


def _emit_problem(p, as_json, renames):
    if as_json:
        click.echo(json.dumps(problem_to_json(p), indent=2, sort_keys=True))
        return
    click.echo(serialize_problem(p), nl=False)
    if renames and p.renames:
        click.echo("# renames", nl=True)
        click.echo(serialize_renames(p), nl=False)


def _run(desc, as_json, renames=False):
    result = apply_descriptor(desc)
    if "problem" in result and set(result) == {"problem"}:
        _emit_problem(problem_from_json(result["problem"]), as_json, renames)
        return 0
    if as_json:
        click.echo(json.dumps(result, indent=2, sort_keys=True))
    return result


class _Fail(click.ClickException):
    exit_code = 1


def _guard(fn):
    def wrapped(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except (LclreError, ValueError, OSError, json.JSONDecodeError) as exc:
            click.echo("error: %s" % exc, err=True)
            sys.exit(1)
        sys.exit(code or 0)
    wrapped.__name__ = fn.__name__
    return wrapped


def _problem_op(op, source, as_json, renames=False, **extra):
    p = _read_problem(source)
    desc = {"op": op, "problem": problem_to_json(p)}
    desc.update(extra)
    return _run(desc, as_json, renames)


@click.group()
def main():
    """Round-elimination workbench."""


def _common(fn):
    fn = click.option("--json", "as_json", is_flag=True,
                      help="emit JSON payloads")(fn)
    fn = click.option("--renames", is_flag=True,
                      help="append the fresh-label rename sidecar")(fn)
    fn = click.argument("source", required=False)(fn)
    return fn


@main.command("re")
@_common
@click.option("--config-cap", type=int, default=None)
@_guard
def cmd_re(source, as_json, renames, config_cap):
    """One easing step: edge maximization then the node exists-step."""
    return _problem_op("re", source, as_json, renames, config_cap=config_cap)


@main.command("rere")
@_common
@click.option("--config-cap", type=int, default=None)
@_guard
def cmd_rere(source, as_json, renames, config_cap):
    """The dual easing step: node maximization then the edge exists-step."""
    return _problem_op("rere", source, as_json, renames,
                       config_cap=config_cap)


@main.command("q")
@_common
@click.option("--label-cap", type=int, default=None)
@click.option("--config-cap", type=int, default=None)
@_guard
def cmd_q(source, as_json, renames, label_cap, config_cap):
    """The two-step easing operator (edge step then node step)."""
    return _problem_op("q", source, as_json, renames,
                       label_cap=label_cap, config_cap=config_cap)


@main.command("qpow")
@_common
@click.option("--k", type=int, required=True)
@click.option("--label-cap", type=int, default=None)
@click.option("--config-cap", type=int, default=None)
@_guard
def cmd_qpow(source, as_json, renames, k, label_cap, config_cap):
    """k iterations of the two-step easing operator."""
    return _problem_op("qpow", source, as_json, renames, k=k,
                       label_cap=label_cap, config_cap=config_cap)


@main.command("rstar")
@_common
@click.option("--config-cap", type=int, default=None)
@_guard
def cmd_rstar(source, as_json, renames, config_cap):
    """The set-label closure (all nonempty subsets, full cross products)."""
    return _problem_op("rstar", source, as_json, renames,
                       config_cap=config_cap)


@main.command("product")
@_common
@click.option("--other", required=True, help="second operand problem file")
@_guard
def cmd_product(source, as_json, renames, other):
    """Pairwise product of two problems on the same delta."""
    q_prob = _read_problem(other)
    return _problem_op("product", source, as_json, renames,
                       other=problem_to_json(q_prob))


@main.command("tau")
@_common
@click.option("--target", required=True,
              help="the problem the function labels map into")
@click.option("--cap", "function_cap", type=int, default=None,
              help="candidate function budget")
@click.option("--label-cap", type=int, default=None)
@click.option("--config-cap", type=int, default=None)
@_guard
def cmd_tau(source, as_json, renames, target, function_cap, label_cap,
            config_cap):
    """The function-label operator toward a target problem."""
    t = _read_problem(target)
    extra = {"target": problem_to_json(t), "label_cap": label_cap,
             "config_cap": config_cap}
    if function_cap is not None:
        extra["function_cap"] = function_cap
    return _problem_op("tau", source, as_json, renames, **extra)


@main.command("relax")
@click.option("--kind", type=click.Choice(["node", "portlocal", "edgebased"]),
              default="node")
@click.option("--from", "src", required=True)
@click.option("--to", "dst", required=True)
@click.option("--mapping", default=None,
              help="JSON witness to verify instead of searching")
@click.option("--json", "as_json", is_flag=True)
@_guard
def cmd_relax(kind, src, dst, mapping, as_json):
    """Search for (or verify) a relaxation between two problems."""
    desc = {"op": "relaxation", "kind": kind,
            "from": problem_to_json(_read_problem(src)),
            "to": problem_to_json(_read_problem(dst))}
    if mapping is not None:
        with open(mapping) as fh:
            desc["mapping"] = json.load(fh)
    result = _run(desc, as_json)
    if as_json:
        verdict = result.get("verified", result.get("found"))
        return 0 if verdict else NEGATIVE_EXIT
    if "verified" in result:
        click.echo("verified: %s" % ("yes" if result["verified"] else "no"))
        return 0 if result["verified"] else NEGATIVE_EXIT
    if result["found"]:
        click.echo(result["relaxation"]["text"], nl=False)
        return 0
    click.echo("no relaxation found")
    return NEGATIVE_EXIT


@main.command("fixedpoint")
@click.argument("source", required=False)
@click.option("--label-cap", type=int, default=None)
@click.option("--config-cap", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
@_guard
def cmd_fixedpoint(source, label_cap, config_cap, as_json):
    """Does one two-step easing round relax back to the problem itself?"""
    desc = {"op": "fixedpoint",
            "problem": problem_to_json(_read_problem(source)),
            "label_cap": label_cap, "config_cap": config_cap}
    result = _run(desc, as_json)
    if not as_json:
        click.echo("fixed point: %s"
                   % ("yes" if result["fixed_point"] else "no"))
    return 0 if result["fixed_point"] else NEGATIVE_EXIT


@main.command("zeroround")
@click.argument("source", required=False)
@click.option("--input", "input_src", default=None,
              help="input problem: catalog name or file")
@click.option("--json", "as_json", is_flag=True)
@_guard
def cmd_zeroround(source, input_src, as_json):
    """Is the problem solvable with no communication (given the input)?"""
    desc = {"op": "zeroround",
            "problem": problem_to_json(_read_problem(source))}
    if input_src is not None:
        if os.path.exists(input_src) or input_src == "-":
            inp = _read_problem(input_src)
        else:
            inp = _catalog.get(input_src)
        desc["input"] = problem_to_json(inp)
    result = _run(desc, as_json)
    if not as_json:
        if result["solvable"]:
            click.echo("solvable; rule:")
            click.echo(result["rule"]["text"], nl=False)
        else:
            click.echo("none; counterexample gadget:")
            click.echo(result["counterexample"]["text"], nl=False)
    return 0 if result["solvable"] else NEGATIVE_EXIT


@main.command("refute-sso")
@click.argument("source", required=False)
@click.option("--json", "as_json", is_flag=True)
@_guard
def cmd_refute_sso(source, as_json):
    """Refute a claimed nontrivial fixed point of the orientation problem
    by emitting a zero-round rule that solves it given an orientation."""
    desc = {"op": "refute-sso",
            "candidate": problem_to_json(_read_problem(source))}
    result = _run(desc, as_json)
    if not as_json:
        click.echo("premises hold; zero-round rule:")
        click.echo(result["rule"], nl=False)
    return 0


@main.group("lift")
def cmd_lift():
    """Exact failure-probability and round lower-bound arithmetic."""


def _emit_lift(result, as_json):
    if as_json:
        click.echo(json.dumps(result, indent=2, sort_keys=True))
        return

    def prob(entry):
        cap = "  [capped at 1]" if entry["capped"] else ""
        frac = entry["log2"]["exact_fraction"]
        exact = (" = 2^(%d/%d)" % tuple(frac)) if frac else ""
        return "log2 = %s (~%.6g)%s%s" % (entry["log2"]["text"],
                                          entry["log2"]["approx"], exact, cap)

    which = result["which"]
    if which == "bounds":
        rep = result["report"]
        for tag in ("deterministic", "randomized"):
            raw = rep[tag]
            frac = raw["exact_fraction"]
            exact = "%d/%d" % tuple(frac) if frac else "irrational"
            click.echo("%s: raw = %s (~%.6g), rounds = %d, binding = %s"
                       % (tag, exact, raw["approx"], rep[tag + "_rounds"],
                          rep[tag + "_binding"]))
        if "deterministic_thirteenth" in rep:
            raw = rep["deterministic_thirteenth"]
            frac = raw["exact_fraction"]
            exact = "%d/%d" % tuple(frac) if frac else "irrational"
            click.echo("deterministic (/13 variant): raw = %s (~%.6g)"
                       % (exact, raw["approx"]))
    elif which == "failure-single":
        click.echo("p'  : " + prob(result["p_prime"]))
        click.echo("p'' : " + prob(result["p_double_prime"]))
    elif which == "failure-multi":
        click.echo("bound: " + prob(result["bound"]))
    elif which == "pn-floor":
        frac = result["log2"]["exact_fraction"]
        exact = " = %d/%d" % tuple(frac) if frac else ""
        click.echo("log2 failure floor%s (~%.6g)"
                   % (exact, result["log2"]["approx"]))


@cmd_lift.command("bounds")
@click.option("--k", type=int, required=True)
@click.option("--delta", type=int, required=True)
@click.option("--L", "big_l", required=True)
@click.option("--n", required=True)
@click.option("--thirteenth-variant", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
@_guard
def lift_bounds(k, delta, big_l, n, thirteenth_variant, as_json):
    """Deterministic and randomized round lower bounds."""
    _emit_lift(apply_descriptor({"op": "lift", "which": "bounds", "k": k,
                                 "delta": delta, "L": big_l, "n": n,
                                 "thirteenth_variant": thirteenth_variant}),
               as_json)
    return 0


@cmd_lift.command("failure")
@click.option("--p", required=True, help="probability: fraction or 2^e")
@click.option("--j", type=int, default=None,
              help="multi-step index; omit for the chained single step")
@click.option("--delta", type=int, required=True)
@click.option("--s", type=int, default=None)
@click.option("--L", "big_l", type=int, default=None)
@click.option("--n-in-labels", type=int, default=None)
@click.option("--out-labels", type=int, default=None)
@click.option("--out-labels-prime", type=int, default=None)
@click.option("--T", "t_rounds", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
@_guard
def lift_failure(p, j, delta, s, big_l, n_in_labels, out_labels,
                 out_labels_prime, t_rounds, as_json):
    """Failure-probability amplification bounds."""
    if j is not None:
        if s is None or big_l is None:
            raise ParseError("--j requires --s and --L")
        desc = {"op": "lift", "which": "failure-multi", "p": p, "j": j,
                "delta": delta, "s": s, "L": big_l}
    else:
        if None in (n_in_labels, out_labels, out_labels_prime, t_rounds):
            raise ParseError("single step requires --n-in-labels, "
                             "--out-labels, --out-labels-prime, --T")
        desc = {"op": "lift", "which": "failure-single", "p": p,
                "delta": delta, "n_in_labels": n_in_labels,
                "out_labels": out_labels,
                "out_labels_prime": out_labels_prime, "T": t_rounds}
    _emit_lift(apply_descriptor(desc), as_json)
    return 0


@cmd_lift.command("pn-floor")
@click.option("--T", "t_rounds", type=int, required=True)
@click.option("--L", "big_l", type=int, required=True)
@click.option("--delta", type=int, required=True)
@click.option("--json", "as_json", is_flag=True)
@_guard
def lift_pn_floor(t_rounds, big_l, delta, as_json):
    """Exact log2 of the T-round failure floor."""
    _emit_lift(apply_descriptor({"op": "lift", "which": "pn-floor",
                                 "T": t_rounds, "L": big_l,
                                 "delta": delta}), as_json)
    return 0


@main.command("catalog")
@click.argument("name", required=False)
@click.option("--delta", type=int, default=3)
@click.option("--k", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
@_guard
def cmd_catalog(name, delta, k, as_json):
    """Print a named problem (or list the catalog)."""
    if name is None:
        for entry in _catalog.names():
            click.echo(entry)
        return 0
    return _run({"op": "catalog", "name": name, "delta": delta, "k": k},
                as_json) and 0


@main.command("serve")
@click.option("--port", type=int, default=8800)
@click.option("--state-dir", default=None)
@_guard
def cmd_serve(port, state_dir):
    """Run the HTTP API."""
    from .service import main as serve_main
    serve_main(port=port, state_dir=state_dir)
    return 0


if __name__ == "__main__":
    main()
