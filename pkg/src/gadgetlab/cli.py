"""Command-line front end.

Exit codes: 0 yes / success, 1 no / failure found, 2 search budget exhausted,
64 usage error, 65 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, io
from .errors import GadgetError, UnknownGadget, UnknownReduction

EXIT_YES, EXIT_NO, EXIT_BUDGET, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(args, doc, text: str | None = None) -> None:
    if text is not None and not text.endswith("\n"):
        text += "\n"
    out = text if (args.pretty and text is not None) else json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"
    if args.output:
        io._write(args.output, out)
    else:
        sys.stdout.write(out)


def resolve_gadget(ref: str):
    """A gadget from a ``gadget.json`` path or a catalog name."""
    if Path(ref).is_file():
        return io.load_gadget(ref)
    try:
        return catalog.catalog_get(ref).gadget
    except UnknownGadget:
        raise UnknownGadget(f"{ref!r} is neither a gadget file nor a catalog name") from None


def _decision_code(decision: str) -> int:
    return {"yes": EXIT_YES, "no": EXIT_NO}.get(decision, EXIT_BUDGET)


def cmd_classify(args) -> int:
    from .classify import complexity_labels

    report = complexity_labels(resolve_gadget(args.gadget))
    _emit(args, report.to_dict(), report.table())
    return EXIT_YES


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [{"name": e.key, "states": len(e.gadget.states), "provenance": e.provenance} for e in catalog.catalog_list()]
        text = "".join(f"{r['name']:<24} {r['states']:>3}  {r['provenance']}\n" for r in rows)
        _emit(args, rows, text)
        return EXIT_YES
    if not args.name:
        raise UsageError("catalog export needs a gadget name")
    entry = catalog.catalog_get(args.name)
    if args.output:
        io.save_gadget(entry.gadget, args.output)
    else:
        sys.stdout.write(io.dumps_gadget(entry.gadget))
    return EXIT_YES


def _match_state(gadget, raw: str):
    for s in gadget.states:
        if str(s) == raw:
            return s
    raise UsageError(f"{raw!r} is not a state of {gadget.name!r}")


def _component(system, raw) -> int:
    if isinstance(raw, int):
        return raw
    return io._component_ref(int(raw) if str(raw).isdigit() else raw, system.components, system.instances, system.component_of)


def parse_objective(system, kind: str | None, target: str | None, doc: dict):
    """Objective from flags, falling back to an ``objective`` entry in the system document."""
    from .solve import RECONFIG, REACH, TRAVERSE, Objective

    if kind is None:
        stored = doc.get("objective")
        if stored is None:
            raise UsageError("give --objective (the system document has no stored objective)")
        kind = stored["kind"]
        if kind == REACH:
            return Objective.reach(_component(system, stored["target"]))
        if kind == RECONFIG:
            states = [
                None if s is None else _match_state(inst.gadget, str(s))
                for inst, s in zip(system.instances, stored["target_states"])
            ]
            return Objective.reconfig(states, stored.get("target_agents"))
        return Objective.traverse()
    if kind == TRAVERSE:
        return Objective.traverse()
    if kind == REACH:
        if target is None and system.target is None:
            raise UsageError("reachability needs --target or a target in the system document")
        return Objective.reach(system.target if target is None else _component(system, target))
    if kind == RECONFIG:
        if target is None:
            raise UsageError("reconfiguration needs --target with one state per instance ('*' for any)")
        raw = target.split(",")
        if len(raw) != len(system.instances):
            raise UsageError(f"--target lists {len(raw)} states for {len(system.instances)} instances")
        states = [None if r == "*" else _match_state(inst.gadget, r) for inst, r in zip(system.instances, raw)]
        return Objective.reconfig(states)
    raise UsageError(f"unknown objective {kind!r}")


def cmd_solve(args) -> int:
    from .solve import oracle_solve, solve_auto, verify_path

    doc = io.load_json(args.system)
    system = io.system_from_dict(doc, Path(args.system).parent)
    objective = parse_objective(system, args.objective, args.target, doc)
    if args.algorithm == "auto" and args.agents == 1:
        result = solve_auto(system, objective, args.max_nodes)
    else:
        result = oracle_solve(system, objective, args.agents, args.max_nodes)
    out = result.to_dict()
    if result.witness is not None:
        out["witness_valid"] = bool(verify_path(system, objective, result.witness, args.agents))
    text = f"{result.decision} ({result.algorithm}, {len(result.witness or ())} moves)\n"
    _emit(args, out, text)
    return _decision_code(result.decision)


GRAPH_REDUCTIONS = {"stcon", "hampath-dir", "hampath-undir-close", "hampath-spiral"}
SYSTEM_REDUCTIONS = {"reach2traversal", "reach2reconfig", "shadow", "verified"}
DEFAULT_GADGETS = {
    "3sat": "one-state-3d0u",
    "stcon": "one-state-1d0u",
    "hampath-dir": "visiting-harder",
    "hampath-undir-close": "labeled-ttsu",
    "hampath-spiral": "two-single-use",
    "reach2traversal": "distant-opener",
}


def _reduce_gadget(args):
    if args.gadget:
        return resolve_gadget(args.gadget)
    name = DEFAULT_GADGETS[args.name]
    if name == "one-state-1d0u":
        return catalog.one_state_gadget(1, 0)
    return catalog.catalog_get(name).gadget


def _sole_gadget(system):
    gadgets = system.gadgets()
    if len(gadgets) != 1:
        raise UsageError("shadow and verified reductions need a system built from a single gadget")
    return gadgets[0]


def run_reduction(args):
    from . import reduce as rd
    from .classify import has_distant_opening

    if args.name == "3sat":
        return rd.reduce_3sat_to_traversal(rd.parse_dimacs(io._read(args.input)), _reduce_gadget(args))
    if args.name in GRAPH_REDUCTIONS:
        graph = rd.parse_edge_list(io._read(args.input), directed=args.name != "hampath-spiral")
        fn = {
            "stcon": rd.reduce_stcon_to_traversal,
            "hampath-dir": rd.reduce_hampath_directed,
            "hampath-undir-close": rd.reduce_hampath_undir_close,
            "hampath-spiral": rd.reduce_hampath_spiral,
        }[args.name]
        return fn(graph, _reduce_gadget(args))
    doc = io.load_json(args.input)
    system = io.system_from_dict(doc, Path(args.input).parent)
    if args.name == "reach2traversal":
        gadget = _reduce_gadget(args)
        if has_distant_opening(gadget):
            return rd.reduce_reach_to_traversal_distant_opening(system, gadget)
        return rd.reduce_reach_to_traversal_reversible_interacting(system, gadget)
    if args.name == "reach2reconfig":
        return rd.reduce_reach_to_reconfig_reversible(system, resolve_gadget(args.gadget) if args.gadget else None)
    shadow = rd.full_shadow(_sole_gadget(system))
    if args.name == "shadow":
        objective = parse_objective(system, args.objective, args.target, doc)
        return rd.apply_shadow_reduction(system, objective, shadow)
    return rd.apply_verified_reduction(system, rd.verified_gadget(shadow, args.scheme))


def cmd_reduce(args) -> int:
    out = run_reduction(args)
    doc = io.system_to_dict(out.system)
    doc["objective"] = out.objective.to_dict()
    doc["correspondence"] = {str(k): list(v) for k, v in out.correspondence.items()}
    doc["expected"] = out.expected
    doc["metadata"] = out.metadata
    text = f"{args.name}: {len(out.system.instances)} instances, {len(out.system.components)} components\n"
    _emit(args, doc, text if not args.output else None)
    if args.output and args.pretty:
        sys.stdout.write(text)
    return EXIT_YES


def cmd_netsim(args) -> int:
    from . import netsim

    if args.action == "interface":
        network = netsim.load_network(args.files[0])
        if args.cap is not None:
            network = netsim.GadgetNetwork(network.system, network.boundary, network.helpers, args.cap)
        lts = netsim.interface_lts(network, max_nodes=args.max_nodes)
        text = f"{lts.n_states} classes, {len(lts.transitions)} labelled transitions\n"
        _emit(args, lts.to_dict(), text)
        return EXIT_YES
    if args.action == "lts":
        gadget = resolve_gadget(args.files[0])
        initial = _match_state(gadget, args.state) if args.state else None
        _emit(args, netsim.gadget_to_lts(gadget, initial).to_dict())
        return EXIT_YES
    if len(args.files) != 2:
        raise UsageError("netsim bisim needs two LTS files")
    result = netsim.check_bisimulation(netsim.load_lts(args.files[0]), netsim.load_lts(args.files[1]))
    text = "bisimilar\n" if result else f"not bisimilar: {result.detail}; trace {result.trace}\n"
    _emit(args, result.to_dict(), text)
    return EXIT_YES if result else EXIT_NO


def cmd_verify(args) -> int:
    from .verify import run_verify

    report = run_verify(
        args.name,
        size=args.size,
        samples=args.samples,
        seed=args.seed,
        max_nodes=args.max_nodes,
        exhaustive=args.exhaustive,
        workers=args.workers,
    )
    text = (
        f"{report.reduction}: tried {report.tried}, agreed {report.agreements}, "
        f"disagreed {len(report.disagreements)}, budget {report.exhaustions}\n"
    )
    _emit(args, report.to_dict(), text)
    return EXIT_YES if report.ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    from .solve import DEFAULT_MAX_NODES

    def flags(suppress: bool) -> argparse.ArgumentParser:
        # Subcommands repeat the global flags without defaults so a flag given
        # before the subcommand is not reset by the subparser.
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--seed", type=int, default=d(0), help="random seed for sampling commands")
        p.add_argument("--max-nodes", type=int, default=d(DEFAULT_MAX_NODES), help="search budget")
        p.add_argument("--pretty", action="store_true", default=d(False), help="human-readable output")
        p.add_argument("-o", "--output", default=d(None), help="write output to this file")
        return p

    common = flags(True)
    parser = _Parser(prog="gadgetlab", description="Motion planning through gadgets.", parents=[flags(False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="classify a gadget")
    p.add_argument("gadget", help="gadget.json path or catalog name")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", parents=[common], help="decide a motion planning problem")
    p.add_argument("system", help="system.json path")
    p.add_argument("--objective", choices=["reach", "traverse", "reconfig"])
    p.add_argument("--target", help="component (index or i:loc) or comma-separated target states")
    p.add_argument("--algorithm", choices=["oracle", "auto"], default="auto")
    p.add_argument("--agents", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", parents=[common], help="compile a hardness reduction")
    p.add_argument("name", choices=["3sat", *sorted(GRAPH_REDUCTIONS), *sorted(SYSTEM_REDUCTIONS)])
    p.add_argument("--input", required=True, help="DIMACS CNF, edge list or system.json")
    p.add_argument("--gadget", help="gadget.json path or catalog name")
    p.add_argument("--objective", choices=["reach", "traverse", "reconfig"])
    p.add_argument("--target", help="target for the shadow reduction")
    p.add_argument("--scheme", choices=["closingPair", "openingPairs"], default="closingPair")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("netsim", parents=[common], help="gadget network interfaces and bisimulation")
    p.add_argument("action", choices=["interface", "bisim", "lts"])
    p.add_argument("files", nargs="+", help="network.json, two LTS files, or a gadget")
    p.add_argument("--cap", type=int, help="override the adjacency cap")
    p.add_argument("--state", help="initial state for 'lts'")
    p.set_defaults(func=cmd_netsim)

    p = sub.add_parser("catalog", parents=[common], help="list or export built-in gadgets")
    p.add_argument("action", choices=["list", "export"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", parents=[common], help="cross-check a reduction against the oracle")
    p.add_argument("name", help="registered reduction name")
    p.add_argument("--size", type=int, help="source size bound")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnknownGadget, UnknownReduction) as exc:
        print(f"gadgetlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GadgetError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"gadgetlab: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
