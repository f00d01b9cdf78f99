import argparse
import json
import os
import sys

import pandas as pd

from appConfig import app_config
from counting import InconsistencyError, connected_counts
from invariants import (MIXED, PURE, degree_label, evaluate, factorize_invariant, generators, mixed_generators,
                        orbit_specs, spec_from_json)
from loggerConfig import log_manager
from permCore import BudgetExceededError, PermutationError, multiplicities, perm_tuple_to_json, to_covering_graph
from reportTracker import ReportTracker
from states import (MixedState, ShapeMismatchError, SystemShape, ghz_state, load_state, random_pure, reduce_last,
                    save_state)
from verify import SUITES, PreconditionError, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PRECONDITION = 2
EXIT_PARSE = 3

FORMATS = ["json", "csv", "plain", "dot"]
STATE_KINDS = ["ghz", "random"]


class CliConfig:
    def __init__(self, seed=app_config.DEFAULT_SEED, budget=None, format="plain", tolerances=None, jobs=1,
                 full_degree=False):
        """
        Settings shared by every command; echoed into the header of JSON output and the
        banner line of every other format.

        Parameters:
        - seed (int): Base seed for random states and unitaries.
        - budget (int): Cap on enumeration steps and contraction terms; None keeps the
          configured budgets of settings.json.
        - format (str): Output format, one of json, csv, plain, dot.
        - tolerances (dict): Per-check tolerance overrides.
        - jobs (int): Worker processes for enumeration.
        - full_degree (bool): Report degrees as 2m.
        """
        self.seed = seed
        self.budget = budget
        self.format = format
        self.tolerances = tolerances or {}
        self.jobs = jobs
        self.full_degree = full_degree

    @classmethod
    def from_args(cls, args):
        tolerances = dict(getattr(args, "tol", None) or [])
        return cls(seed=args.seed, budget=args.budget, format=args.format, tolerances=tolerances,
                   jobs=args.jobs, full_degree=args.full_degree)

    @property
    def enumeration_budget(self):
        return app_config.ENUMERATION_BUDGET if self.budget is None else self.budget

    @property
    def contraction_budget(self):
        return app_config.CONTRACTION_BUDGET if self.budget is None else self.budget

    def header(self, command):
        return {
            "command": command,
            "version": app_config.VERSION,
            "seed": self.seed,
            "enumeration_budget": self.enumeration_budget,
            "contraction_budget": self.contraction_budget,
            "jobs": self.jobs,
            "degree_convention": "2m" if self.full_degree else "m",
            "tolerances": {name: app_config.tolerance(name, self.tolerances.get(name)) for name in app_config.TOLERANCES},
        }

    def banner(self, command, **fields):
        """Comment line opening plain, csv and dot output."""
        extra = "".join(f" {name}={value}" for name, value in fields.items())
        prefix = "//" if self.format == "dot" else "#"
        return (f"{prefix} luinv {command}{extra} seed={self.seed} enumeration_budget={self.enumeration_budget} "
                f"contraction_budget={self.contraction_budget} version={app_config.VERSION}")


def _bounded_int(text, least):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < least:
        raise argparse.ArgumentTypeError(f"expected an integer >= {least}, got {value}")
    return value


def _positive_int(text):
    return _bounded_int(text, 1)


def _non_negative_int(text):
    return _bounded_int(text, 0)


def _party_count(text):
    return _bounded_int(text, 2)


def _tolerance_override(text):
    """Parse name=value, e.g. invariance=1e-9."""
    name, sep, value = text.partition("=")
    if not sep or name not in app_config.TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"expected name=value with name in {', '.join(app_config.TOLERANCES)}, got {text!r}")
    try:
        tol = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance of {name} is not a number: {value!r}")
    if tol < 0:
        raise argparse.ArgumentTypeError(f"tolerance of {name} must be non-negative, got {tol}")
    return name, tol


def _print_json(data):
    print(json.dumps(data, indent=2))


def _read_orbit(text):
    """Orbit JSON given inline or as a path to a file."""
    if os.path.exists(text):
        with open(text) as file:
            return json.load(file)
    return json.loads(text)


def cmd_orbits(args, config):
    """
    List the canonical orbits of degree m; with --connected only the generators.
    """
    if args.connected:
        listing = generators if args.kind == PURE else mixed_generators
        specs = listing(args.k, args.m, budget=config.enumeration_budget, jobs=config.jobs, min_m=args.m)
    else:
        specs = orbit_specs(args.k, args.m, budget=config.enumeration_budget, jobs=config.jobs, kind=args.kind)
    degree = degree_label(args.m, config.full_degree)
    if config.format == "json":
        _print_json({
            "header": config.header("orbits"),
            "k": args.k,
            "kind": args.kind,
            "degree": degree,
            "connected_only": args.connected,
            "count": len(specs),
            "orbits": [dict(spec.to_json(), connected=spec.orbit.is_connected) for spec in specs],
        })
        return EXIT_OK
    print(config.banner("orbits", k=args.k, kind=args.kind, degree=degree, orbits=len(specs)))
    if config.format == "csv":
        df = pd.DataFrame({
            "index": range(1, len(specs) + 1),
            "degree": [degree] * len(specs),
            "perms": [json.dumps(spec.orbit.tuple.to_lists()) for spec in specs],
            "cycle_types": [json.dumps([list(p.cycle_type()) for p in spec.orbit.tuple.perms]) for spec in specs],
            "connected": [spec.orbit.is_connected for spec in specs],
        })
        print(df.to_csv(index=False), end="")
    elif config.format == "dot":
        for index, spec in enumerate(specs, start=1):
            graph = to_covering_graph(spec.orbit.tuple)
            print(f"// orbit{index} connected={str(graph.is_connected()).lower()}")
            print(graph.to_dot(f"orbit{index}"))
    else:
        for index, spec in enumerate(specs, start=1):
            flag = "connected" if spec.orbit.is_connected else "disconnected"
            cycle_types = [list(p.cycle_type()) for p in spec.orbit.tuple.perms]
            print(f"{index}: {spec.orbit.tuple.to_lists()} {flag} cycle types {cycle_types}")
    return EXIT_OK


def cmd_count(args, config):
    """
    Print the graded dimensions and the connected counts, with the cross-check status.
    """
    max_m = app_config.default_max_m(args.k) if args.max_m is None else args.max_m
    table = connected_counts(args.k, max_m, budget=config.enumeration_budget, jobs=config.jobs)
    if config.format == "json":
        data = {"header": config.header("count")}
        data.update(table.to_json())
        _print_json(data)
        return EXIT_OK
    print(config.banner("count", k=args.k, max_m=max_m))
    if config.format == "csv":
        print(table.to_csv(full_degree=config.full_degree), end="")
    else:
        print(table.to_frame(config.full_degree).to_string(index=False))
        print(f"euler product check: {'ok' if table.euler_ok else 'FAILED'}; "
              f"enumeration confirmed degrees: {table.enumerated}")
    return EXIT_OK


def cmd_eval(args, config):
    """
    Evaluate one invariant on a state file.
    """
    try:
        state = load_state(args.state)
        orbit_data = _read_orbit(args.orbit)
    except (OSError, ValueError) as error:
        log_manager.main_logger.error(f"Cannot read inputs: {error}")
        print(f"error: {error}", file=sys.stderr)
        return EXIT_PARSE
    try:
        spec = spec_from_json(orbit_data, kind=args.kind)
    except PermutationError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_PARSE
    if (spec.kind == MIXED) != isinstance(state, MixedState):
        raise ShapeMismatchError(f"A {spec.kind} invariant cannot be evaluated on {state}")
    value = evaluate(spec, state, budget=config.contraction_budget)
    degree = degree_label(spec.degree, config.full_degree)
    if config.format == "json":
        _print_json({"header": config.header("eval"), "kind": spec.kind, "degree": degree,
                     "value": [value.real, value.imag]})
    elif config.format == "csv":
        print(config.banner("eval", kind=spec.kind, degree=degree))
        print(pd.DataFrame({"kind": [spec.kind], "degree": [degree], "re": [value.real],
                            "im": [value.imag]}).to_csv(index=False), end="")
    else:
        print(config.banner("eval", kind=spec.kind, degree=degree))
        print(f"[{value.real:.17g}, {value.imag:.17g}]")
    return EXIT_OK


def cmd_factor(args, config):
    """
    Print the connected components of an orbit with multiplicities.
    """
    try:
        spec = spec_from_json(_read_orbit(args.orbit), kind=args.kind)
    except (OSError, json.JSONDecodeError, PermutationError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_PARSE
    k = spec.parties
    factors = multiplicities(factorize_invariant(spec.orbit))
    if config.format == "json":
        _print_json({
            "header": config.header("factor"),
            "orbit": perm_tuple_to_json(spec.orbit.tuple, k),
            "factors": [dict(perm_tuple_to_json(key.tuple, k), multiplicity=count,
                             degree=degree_label(key.m, config.full_degree)) for key, count in factors],
        })
        return EXIT_OK
    print(config.banner("factor", k=k, degree=degree_label(spec.degree, config.full_degree)))
    if config.format == "csv":
        print(pd.DataFrame({
            "degree": [degree_label(key.m, config.full_degree) for key, _ in factors],
            "perms": [json.dumps(key.tuple.to_lists()) for key, _ in factors],
            "multiplicity": [count for _, count in factors],
        }).to_csv(index=False), end="")
    else:
        for key, count in factors:
            print(f"degree {degree_label(key.m, config.full_degree)}: {key.tuple.to_lists()} x{count}")
    return EXIT_OK


def cmd_state(args, config):
    """
    Write a GHZ or random state file; --mixed traces out the last party first.
    """
    shape = SystemShape.parse(args.shape)
    state = ghz_state(shape) if args.kind == "ghz" else random_pure(shape, config.seed)
    if args.mixed:
        state = reduce_last(state)
    try:
        save_state(state, args.output)
    except OSError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_PARSE
    log_manager.main_logger.info(f"Wrote {state} to {args.output}")
    if config.format == "json":
        _print_json({"header": config.header("state"), "kind": args.kind, "mixed": args.mixed,
                     "dims": list(state.shape.dims), "path": args.output})
    else:
        print(config.banner("state", kind=args.kind, shape=",".join(map(str, shape.dims))))
        print(f"wrote {state} to {args.output}")
    return EXIT_OK


def cmd_verify(args, config):
    """
    Run the selected verification suites; exit 0 iff every check passed.
    """
    suites = SUITES if args.all or not args.suite else args.suite
    max_m = args.m or args.max_m
    degrees = [args.m] if args.m else list(range(1, max_m + 1))
    shape = SystemShape.parse(args.shape) if args.shape else SystemShape([max_m] * args.k)
    log_manager.clear_cases()
    log_manager.set_run_info(f"verify-{config.seed}")

    tracker = ReportTracker()
    for suite in suites:
        log_manager.main_logger.info(f"Running suite {suite}")
        tracker.store_reports(run_suite(suite, args.k, degrees, shape, args.trials, config.seed,
                                        tolerances=config.tolerances, budget=config.budget,
                                        jobs=config.jobs, diagnose=args.diagnose))
    header = config.header("verify")
    json_path = tracker.save(header, args.output)
    log_manager.save_to_csv()
    if config.format == "json":
        _print_json(tracker.to_json(header))
    else:
        print(config.banner("verify", k=args.k, shape=",".join(map(str, shape.dims))))
        print(tracker.render_table())
        print(f"report: {json_path}")
    return EXIT_OK if tracker.all_passed() else EXIT_CHECK_FAILED


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=app_config.DEFAULT_SEED)
    common.add_argument("--budget", type=_positive_int, default=None,
                        help="cap on enumeration steps and contraction terms (default: settings.json)")
    common.add_argument("--format", choices=FORMATS, default="plain")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for orbit enumeration")
    common.add_argument("--full-degree", action="store_true", help="report degrees as 2m")

    parser = argparse.ArgumentParser(prog="luinv", description="Generators of the algebra of local unitary invariants")
    commands = parser.add_subparsers(dest="command", required=True)

    orbits = commands.add_parser("orbits", parents=[common], help="list canonical orbits of permutation tuples")
    orbits.add_argument("--k", type=_party_count, required=True)
    orbits.add_argument("--m", type=_positive_int, required=True)
    orbits.add_argument("--kind", choices=[PURE, MIXED], default=PURE,
                        help="pure: (k-1)-tuples, mixed: k-tuples")
    orbits.add_argument("--connected", action="store_true", help="only connected coverings (the generators)")
    orbits.set_defaults(handler=cmd_orbits)

    count = commands.add_parser("count", parents=[common], help="graded dimensions and connected counts")
    count.add_argument("--k", type=_party_count, required=True)
    count.add_argument("--max-m", type=_non_negative_int, default=None)
    count.set_defaults(handler=cmd_count)

    evaluate_cmd = commands.add_parser("eval", parents=[common], help="evaluate an invariant on a state")
    evaluate_cmd.add_argument("--state", required=True, help="state JSON file")
    evaluate_cmd.add_argument("--orbit", required=True, help="orbit JSON file or inline JSON")
    evaluate_cmd.add_argument("--kind", choices=[PURE, MIXED], default=None)
    evaluate_cmd.set_defaults(handler=cmd_eval)

    factor = commands.add_parser("factor", parents=[common], help="factor an orbit invariant into generators")
    factor.add_argument("--orbit", required=True, help="orbit JSON file or inline JSON")
    factor.add_argument("--kind", choices=[PURE, MIXED], default=None)
    factor.set_defaults(handler=cmd_factor)

    state = commands.add_parser("state", parents=[common], help="write a GHZ or random state file")
    state.add_argument("--kind", choices=STATE_KINDS, default="random")
    state.add_argument("--shape", required=True, help="comma separated local dimensions")
    state.add_argument("--mixed", action="store_true", help="trace out the last party")
    state.add_argument("--output", required=True, help="path of the state JSON file")
    state.set_defaults(handler=cmd_state)

    verify = commands.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("--all", action="store_true")
    verify.add_argument("--suite", action="append", choices=SUITES)
    verify.add_argument("--k", type=_party_count, required=True)
    verify.add_argument("--m", type=_positive_int, default=None, help="single degree")
    verify.add_argument("--max-m", type=_positive_int, default=3)
    verify.add_argument("--shape", default=None, help="comma separated local dimensions")
    verify.add_argument("--trials", type=_positive_int, default=20)
    verify.add_argument("--tol", action="append", type=_tolerance_override,
                        help="tolerance override, e.g. invariance=1e-9")
    verify.add_argument("--diagnose", action="store_true", help="record ranks below the stable range instead of refusing")
    verify.add_argument("--output", default=None, help="path of the JSON report")
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None):
    """
    Entry point; returns the exit status.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exit_request:
        # argparse exits 0 after --help and 2 on a usage error
        return EXIT_OK if not exit_request.code else EXIT_PARSE
    config = CliConfig.from_args(args)
    log_manager.main_logger.info(f"Command {args.command}: {vars(args)}")
    try:
        return args.handler(args, config)
    except (BudgetExceededError, ShapeMismatchError, PreconditionError) as error:
        log_manager.main_logger.error(f"{args.command} refused: {error}")
        print(f"refused: {error}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InconsistencyError as error:
        log_manager.main_logger.error(f"{args.command} found an inconsistency: {error}")
        print(f"inconsistency: {error}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except PermutationError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
