"""Round-elimination workbench for node-edge-checkable labeling problems."""

__version__ = "0.1.0"

from .problem import (  # noqa: F401
    Problem, make_problem, parse_problem, serialize_problem, serialize_renames,
    expand_condensed, product, canonical_form,
    canonical_form_with_map, is_equivalent,
    problem_to_json, problem_from_json,
)
from .roundelim import (  # noqa: F401
    re, rere, q, q_power, r_star, r_star_view, maximize, exists_step,
    dominates, combine,
)
from .relaxation import (  # noqa: F401
    RelaxationFunction, verify_relaxation, find_relaxation,
    find_port_local_relaxation, find_edge_based_relaxation,
    is_fixed_point, is_generalized_fixed_point,
)
from .zeroround import (  # noqa: F401
    ZeroRoundRule, CounterexampleGadget, solvable_zero_round,
    counterexample_gadget, replay_rule, refute_sso_fixed_point,
    random_internal_tree, orientation_input, edge_coloring_input,
)
from .tripotent import (  # noqa: F401
    tau, check_tau_input_property, easiest_input_reduction,
    double_tau_witness, tripotency_witnesses,
    construct_fixed_point_relaxation,
)
from .lifting import (  # noqa: F401
    LogLin, ExtendedLogReal, CappedProbability, BoundReport,
    single_step_failure, multi_step_failure, pn_lower_failure,
    zero_round_failure_floor, lower_bounds, blowup_parameter,
    parse_quantity,
)
from .errors import (  # noqa: F401
    LclreError, ParseError, CapExceeded, PremiseError, OperationCancelled,
)
