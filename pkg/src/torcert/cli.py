"""Command-line interface.

Exit codes: 0 when a command completes (UNKNOWN verdicts included),
1 for input errors, 2 when an internally built certificate fails its
own re-check.
"""

import argparse
import json
import sys

from .groups import DEFAULT_MAX_ORDER, GroupOrderError
from .lattice import VerificationError

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized searches")
    p.add_argument("--iso-bound", type=int, default=2, help="coefficient bound in basis searches")
    p.add_argument("--rank-budget", type=int, default=None,
                   help="total rank of added permutation summands (default 2*rank + |G|)")
    p.add_argument("--max-group-order", type=int, default=DEFAULT_MAX_ORDER)
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="torcert", description=(
        "Certify rationality obstructions for tori and conic bundles by exact lattice computation."))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cohomology", parents=[common], help="Tate cohomology over all subgroup classes")
    p.add_argument("--fixture", required=True)

    p = sub.add_parser("certify", parents=[common], help="flasque resolution and torus verdicts")
    p.add_argument("--fixture", required=True)
    p.add_argument("--no-resolution", action="store_true", help="omit the resolution matrices")

    p = sub.add_parser("resolve", parents=[common], help="emit a resolution certificate")
    p.add_argument("--fixture", required=True)
    p.add_argument("--kind", choices=["flasque", "coflasque", "coflasquify"], default="flasque")

    p = sub.add_parser("conic-bundle", parents=[common], help="minimal models and Picard lattice")
    p.add_argument("--fixture", required=True)

    p = sub.add_parser("local-cyclic", parents=[common], help="decomposition groups of Q(sqrt a_i)")
    p.add_argument("--radicands", required=True, help="comma-separated square-free integers")

    p = sub.add_parser("paper", parents=[common], help="reproduce every worked example")
    p.add_argument("--timings", action="store_true", help="add a non-canonical timings section")
    return parser


def _need_seed(args):
    if args.seed is None:
        raise InputError(f"{args.command} runs randomized searches and needs --seed")
    if args.seed < 0:
        raise InputError("--seed must be nonnegative")


def cmd_cohomology(args):
    from .cohomology import cohomology_report
    from .fixtures_io import load_lattice
    M = load_lattice(args.fixture, args.max_group_order)
    return cohomology_report(M).to_dict()


def cmd_certify(args):
    from .certify import certify_torus, local_rationality_report
    from .fixtures_io import load_lattice
    _need_seed(args)
    M = load_lattice(args.fixture, args.max_group_order)
    cert = certify_torus(M, iso_bound=args.iso_bound, rank_budget=args.rank_budget, seed=args.seed)
    out = cert.to_dict(include_resolution=not args.no_resolution)
    out["br_trivial"] = cert.br_trivial
    out["local_rationality"] = local_rationality_report(M).to_dict()
    return out


def cmd_resolve(args):
    from .fixtures_io import load_lattice
    from .resolutions import coflasque_resolution, coflasquify, flasque_resolution
    M = load_lattice(args.fixture, args.max_group_order)
    if args.kind == "flasque":
        return flasque_resolution(M).to_dict()
    if args.kind == "coflasque":
        return coflasque_resolution(M).to_dict()
    N, chain = coflasquify(M)
    return {"result_rank": N.rank, "chain": chain.to_dict()}


def cmd_conic(args):
    from .certify import is_stably_permutation
    from .cohomology import class_representatives
    from .conic import check_extension_invariance, conic_report, picard_lattice
    from .fixtures_io import load_conic
    _need_seed(args)
    A = load_conic(args.fixture, args.max_group_order)
    reps = class_representatives(A.group)
    gens = [A.generator_subgroup(k) for k in range(len(A.group.generators))]
    subgroups = reps + [H for H in gens if H.members not in {R.members for R in reps}]
    out = conic_report(A, subgroups)
    check_extension_invariance(A, reps)
    out["h1_independent_of_section_convention"] = True
    P = picard_lattice(A)
    out["stably_permutation"] = is_stably_permutation(
        P, rank_budget=args.rank_budget, bound=args.iso_bound, seed=args.seed).to_dict()
    return out


def parse_radicands(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"--radicands: {exc}") from exc


def cmd_local(args):
    from .localplaces import decomposition_report
    return decomposition_report(parse_radicands(args.radicands)).to_dict()


def cmd_paper(args):
    from .reproduce import reproduce_all
    _need_seed(args)
    report = reproduce_all(args.seed, iso_bound=args.iso_bound, rank_budget=args.rank_budget)
    args._report = report
    return report.to_dict(include_timings=args.timings)


COMMANDS = {
    "cohomology": cmd_cohomology,
    "certify": cmd_certify,
    "resolve": cmd_resolve,
    "conic-bundle": cmd_conic,
    "local-cyclic": cmd_local,
    "paper": cmd_paper,
}


def render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(f"{pad}{json.dumps(obj)}")
    return "\n".join(lines)


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _join_radicands(argv):
    """Glue "--radicands -1,2" into one token so a leading minus is not read as a flag."""
    out = []
    it = iter(argv)
    for a in it:
        if a == "--radicands":
            out.append(f"--radicands={next(it, '')}")
        else:
            out.append(a)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_radicands(argv))
    from .fixtures_io import FixtureError
    try:
        result = COMMANDS[args.command](args)
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InputError, FixtureError, GroupOrderError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        print(json.dumps(result, sort_keys=True, indent=2))
    elif args.command == "paper":
        from .reproduce import render_table
        print(render_table(args._report))
    else:
        print(render_text(result))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
