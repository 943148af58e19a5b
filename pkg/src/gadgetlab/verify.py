"""Cross-verification harness: run a reduction on many source instances and
compare oracle answers on both sides."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Callable, Iterable

from . import catalog, gen
from .core import System
from .errors import UnknownReduction
from .reduce import (
    CnfFormula,
    DigraphInstance,
    apply_shadow_reduction,
    apply_verified_reduction,
    collapse_system,
    full_shadow,
    reduce_3sat_to_traversal,
    reduce_hampath_directed,
    reduce_hampath_spiral,
    reduce_hampath_undir_close,
    reduce_reach_to_reconfig_reversible,
    reduce_reach_to_traversal_distant_opening,
    reduce_reach_to_traversal_reversible_interacting,
    reduce_stcon_to_traversal,
    verified_gadget,
)
from .solve import Objective, oracle_solve

DEFAULT_MAX_NODES = 2_000_000


@dataclass(frozen=True)
class SystemSource:
    """A motion-planning source instance; ``variant`` selects a reduction option."""

    system: System
    objective: Objective
    variant: str = ""

    def to_dict(self) -> dict:
        from .io import system_to_dict

        doc = {"system": system_to_dict(self.system), "objective": self.objective.to_dict()}
        if self.variant:
            doc["variant"] = self.variant
        return doc


def drop_instance(system: System, k: int) -> System:
    """Delete instance ``k``; its locations vanish from their components."""
    insts = system.instances[:k] + system.instances[k + 1 :]
    comps = tuple(
        tuple((i - (i > k), loc) for i, loc in group if i != k) for group in system.components
    )
    return System(insts, comps, system.start, system.target, dict(system.metadata))


def _drop_objective(objective: Objective, k: int) -> Objective:
    if objective.target_states is None:
        return objective
    states = objective.target_states[:k] + objective.target_states[k + 1 :]
    return Objective.reconfig(states, objective.target_agents)


@dataclass(frozen=True)
class ReductionSpec:
    name: str
    description: str
    sample: Callable  # (rng, size) -> source
    compile: Callable  # source -> ReductionOutput
    decide: Callable  # (source, max_nodes) -> "yes" | "no" | "budget"
    shrink: Callable  # source -> iterable of smaller sources
    exhaustive: Callable | None = None  # size -> iterable of sources
    default_size: int = 3


def _cnf_sample(rng: random.Random, size: int) -> CnfFormula:
    n = rng.randint(1, size)
    return CnfFormula(n, gen.random_cnf(rng, n, rng.randint(1, size + 1)))


def _cnf_all(size: int) -> Iterable[CnfFormula]:
    """Every formula with at most ``size`` variables and ``size`` clauses, up to clause order.

    Each formula is listed once, under the smallest variable count that covers it.
    """
    for n in range(1, size + 1):
        lits = [v for x in range(1, n + 1) for v in (x, -x)]
        clauses = list(combinations_with_replacement(lits, 3))
        for m in range(1, size + 1):
            for combo in combinations_with_replacement(clauses, m):
                if any(abs(l) == n for c in combo for l in c):
                    yield CnfFormula(n, combo)


def _cnf_shrink(cnf: CnfFormula) -> Iterable[CnfFormula]:
    for k in range(len(cnf.clauses)):
        if len(cnf.clauses) > 1:
            yield CnfFormula(cnf.variable_count, cnf.clauses[:k] + cnf.clauses[k + 1 :])


def _decide_cnf(cnf: CnfFormula, max_nodes: int) -> str:
    return "yes" if cnf.satisfiable() else "no"


def _digraphs_all(size: int) -> Iterable[DigraphInstance]:
    """Every loop-free digraph on 2..size vertices with ``s = 0`` and ``t = n - 1``."""
    for n in range(2, size + 1):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for bits in product((0, 1), repeat=len(pairs)):
            arcs = tuple(p for p, on in zip(pairs, bits) if on)
            yield DigraphInstance(n, arcs, 0, n - 1, True, "exhaustive")


def _graph_shrink(g: DigraphInstance) -> Iterable[DigraphInstance]:
    for k in range(len(g.arcs)):
        yield DigraphInstance(g.vertex_count, g.arcs[:k] + g.arcs[k + 1 :], g.s, g.t, g.directed, g.tag)


def _decide_stcon(g: DigraphInstance, max_nodes: int) -> str:
    return "yes" if g.has_st_path() else "no"


def _decide_hampath(g: DigraphInstance, max_nodes: int) -> str:
    return "yes" if g.has_hamiltonian_path() else "no"


def _even(rng: random.Random, size: int) -> int:
    return rng.choice([n for n in range(2, max(size, 2) + 1, 2)])


def _decide_system(src: SystemSource, max_nodes: int) -> str:
    return oracle_solve(src.system, src.objective, max_nodes=max_nodes).decision


def _system_shrink(src: SystemSource) -> Iterable[SystemSource]:
    n = len(src.system.instances)
    for k in range(n):
        if n > 1:
            yield SystemSource(drop_instance(src.system, k), _drop_objective(src.objective, k), src.variant)


def _reach_source(gadgets: list, reconfig: bool = False) -> Callable:
    def sample(rng: random.Random, size: int) -> SystemSource:
        n = rng.randint(1, size)
        system = gen.random_system(rng, gadgets, n, rng.randint(2, n + 2), "random", True)
        if reconfig:
            states = [rng.choice(inst.gadget.states) for inst in system.instances]
            return SystemSource(system, Objective.reconfig(states))
        return SystemSource(system, Objective.reach(system.target))

    return sample


def _verified_sample(rng: random.Random, size: int) -> SystemSource:
    src = _reach_source([catalog.two_toggle()])(rng, size)
    return SystemSource(src.system, src.objective, rng.choice(["closingPair", "openingPairs"]))


def _collapse_sample(rng: random.Random, size: int) -> SystemSource:
    from .classify import is_true_2_tunnel

    while True:
        g = gen.random_gadget(rng, 3, 2, 0.3)
        if not is_true_2_tunnel(g):
            break
    n = rng.randint(1, size)
    system = gen.random_system(rng, [g], n, rng.randint(2, n + 2), "random", True)
    obj = Objective.reach(system.target) if rng.random() < 0.5 else Objective.traverse()
    return SystemSource(system, obj)


def _collapse_compile(src: SystemSource):
    from .reduce import ReductionOutput

    return ReductionOutput(collapse_system(src.system), src.objective, {}, "same answer", {"reduction": "collapse"})


def _registry() -> dict:
    g3 = catalog.one_state_gadget(3, 0)
    g12 = catalog.one_state_gadget(1, 2)
    g1 = catalog.one_state_gadget(1, 0)
    vh = catalog.visiting_harder()
    tt = catalog.labeled_ttsu()
    tsu = catalog.two_single_use()
    opener = catalog.distant_opener()
    l2t = catalog.locking_2_toggle()
    t2 = catalog.two_toggle()
    shadow = full_shadow(t2)
    verified = {s: verified_gadget(shadow, s) for s in ("closingPair", "openingPairs")}
    specs = [
        ReductionSpec("3sat", "3SAT to universal traversal, one-state 3-tunnel directed gadget",
                      _cnf_sample, lambda c: reduce_3sat_to_traversal(c, g3), _decide_cnf, _cnf_shrink, _cnf_all, 3),
        ReductionSpec("3sat-1d2u", "3SAT to universal traversal, one directed and two undirected tunnels",
                      _cnf_sample, lambda c: reduce_3sat_to_traversal(c, g12), _decide_cnf, _cnf_shrink, _cnf_all, 3),
        ReductionSpec("stcon", "s-t connectivity to universal traversal with one-way tunnels",
                      lambda rng, n: gen.random_digraph(rng, rng.randint(2, n)),
                      lambda g: reduce_stcon_to_traversal(g, g1), _decide_stcon, _graph_shrink, _digraphs_all, 4),
        ReductionSpec("hampath-dir", "directed Hamiltonian path to universal traversal (visiting-harder)",
                      lambda rng, n: gen.random_legal_digraph(rng, rng.randint(2, n)),
                      lambda g: reduce_hampath_directed(g, vh), _decide_hampath, _graph_shrink, None, 6),
        ReductionSpec("hampath-undir-close", "Hamiltonian path to universal traversal (labeled TTSU)",
                      lambda rng, n: gen.random_legal_digraph(rng, rng.randint(2, n)),
                      lambda g: reduce_hampath_undir_close(g, tt), _decide_hampath, _graph_shrink, None, 6),
        ReductionSpec("hampath-spiral", "cubic Hamiltonian path to universal traversal (spiral vertex)",
                      lambda rng, n: gen.random_cubic_graph(rng, _even(rng, n)),
                      lambda g: reduce_hampath_spiral(g, tsu), _decide_hampath, _graph_shrink, None, 6),
        ReductionSpec("reach2traversal-opening", "reachability to universal traversal via a distant opening",
                      _reach_source([opener]), lambda s: reduce_reach_to_traversal_distant_opening(s.system, opener),
                      _decide_system, _system_shrink, None, 3),
        ReductionSpec("reach2traversal-reversible", "reachability to universal traversal, reversible interacting",
                      _reach_source([l2t]), lambda s: reduce_reach_to_traversal_reversible_interacting(s.system, l2t),
                      _decide_system, _system_shrink, None, 3),
        ReductionSpec("reach2reconfig", "reachability to reconfiguration for reversible gadgets",
                      _reach_source([l2t, t2, catalog.one_toggle()]),
                      lambda s: reduce_reach_to_reconfig_reversible(s.system),
                      _decide_system, _system_shrink, None, 4),
        ReductionSpec("shadow", "reconfiguration to reconfiguration through the full-shadow 2-toggle",
                      _reach_source([t2], reconfig=True), lambda s: apply_shadow_reduction(s.system, s.objective, shadow),
                      _decide_system, _system_shrink, None, 4),
        ReductionSpec("verified", "reachability preserved when every gadget is replaced by a verified gadget",
                      _verified_sample, lambda s: apply_verified_reduction(s.system, verified[s.variant]),
                      _decide_system, _system_shrink, None, 4),
        ReductionSpec("collapse", "collapsing gadgets that are not true 2-tunnel",
                      _collapse_sample, _collapse_compile, _decide_system, _system_shrink, None, 4),
    ]
    return {s.name: s for s in specs}


REGISTRY = _registry()


def reduction_names() -> list[str]:
    return list(REGISTRY)


def get_reduction(name: str) -> ReductionSpec:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownReduction(f"no reduction named {name!r}; known: {', '.join(REGISTRY)}") from None


@dataclass
class VerifyReport:
    reduction: str
    seed: int
    mode: str
    tried: int = 0
    agreements: int = 0
    disagreements: list = field(default_factory=list)
    exhaustions: int = 0
    yes_count: int = 0
    elapsed: float = 0.0

    def __post_init__(self) -> None:
        if self.tried and self.agreements + len(self.disagreements) + self.exhaustions != self.tried:
            raise ValueError("verify report counts do not add up")

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "reduction": self.reduction,
            "seed": self.seed,
            "mode": self.mode,
            "tried": self.tried,
            "agreements": self.agreements,
            "disagreements": list(self.disagreements),
            "exhaustions": self.exhaustions,
            "yes": self.yes_count,
            "elapsed": round(self.elapsed, 3),
        }


def check_instance(spec: ReductionSpec, source, max_nodes: int) -> tuple:
    """Return ``(source_decision, target_decision)``; either may be ``"budget"``."""
    want = spec.decide(source, max_nodes)
    out = spec.compile(source)
    got = oracle_solve(out.system, out.objective, max_nodes=max_nodes).decision
    return want, got


def _disagrees(spec: ReductionSpec, source, max_nodes: int) -> bool:
    try:
        want, got = check_instance(spec, source, max_nodes)
    except Exception:
        return False  # the candidate is not a valid input for this reduction
    return "budget" not in (want, got) and want != got


def shrink(spec: ReductionSpec, source, max_nodes: int):
    """Greedy deletion: keep taking any smaller candidate that still disagrees."""
    changed = True
    while changed:
        changed = False
        for cand in spec.shrink(source):
            if _disagrees(spec, cand, max_nodes):
                source, changed = cand, True
                break
    return source


def _work(args: tuple) -> tuple:
    name, index, source, max_nodes = args
    spec = get_reduction(name)
    want, got = check_instance(spec, source, max_nodes)
    payload = None
    if "budget" not in (want, got) and want != got:
        small = shrink(spec, source, max_nodes)
        payload = {"index": index, "source": source.to_dict(), "minimized": small.to_dict(),
                   "source_answer": want, "reduced_answer": got}
    return index, want, got, payload


def run_verify(
    name: str,
    size: int | None = None,
    samples: int = 100,
    seed: int = 0,
    max_nodes: int = DEFAULT_MAX_NODES,
    exhaustive: bool = False,
    workers: int = 1,
) -> VerifyReport:
    """Check a registered reduction on sampled (or all) source instances up to ``size``."""
    spec = get_reduction(name)
    size = spec.default_size if size is None else size
    t0 = time.perf_counter()
    if exhaustive:
        if spec.exhaustive is None:
            raise ValueError(f"reduction {name!r} has no exhaustive enumerator")
        sources = list(spec.exhaustive(size))
    else:
        rng = random.Random(seed)
        sources = [spec.sample(rng, size) for _ in range(samples)]
    jobs = [(name, k, src, max_nodes) for k, src in enumerate(sources)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_work, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_work(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    report = VerifyReport(name, seed, "exhaustive" if exhaustive else "sampled")
    for _, want, got, payload in results:
        report.tried += 1
        if "budget" in (want, got):
            report.exhaustions += 1
        elif payload is not None:
            report.disagreements.append(payload)
        else:
            report.agreements += 1
            report.yes_count += want == "yes"
    report.elapsed = time.perf_counter() - t0
    return report
