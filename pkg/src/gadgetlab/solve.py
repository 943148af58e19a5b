"""Decision procedures: exhaustive configuration search plus polynomial special cases.

Every solver returns a :class:`SolveResult`; a ``yes`` carries a witness
:class:`MovePath` that replays through :func:`gadgetlab.core.step`.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .core import Configuration, Move, MovePath, System, initial_configuration, step
from .errors import AgentNotAdjacent, IllegalTransition, InvalidTarget

DEFAULT_MAX_NODES = 10**7

REACH = "reach"
TRAVERSE = "traverse"
RECONFIG = "reconfig"


@dataclass(frozen=True)
class Objective:
    """What a solver must achieve.

    ``target`` is a component index for reachability.  For reconfiguration
    ``target_states`` is a full state vector where ``None`` means "any state",
    and ``target_agents`` optionally pins the final agent multiset.
    """

    kind: str
    target: int | None = None
    target_states: tuple | None = None
    target_agents: tuple | None = None

    @classmethod
    def reach(cls, target: int) -> "Objective":
        return cls(REACH, target=target)

    @classmethod
    def traverse(cls) -> "Objective":
        return cls(TRAVERSE)

    @classmethod
    def reconfig(cls, states: Sequence, agents: Sequence[int] | None = None) -> "Objective":
        return cls(
            RECONFIG,
            target_states=tuple(states),
            target_agents=None if agents is None else tuple(sorted(agents)),
        )

    def check(self, system: System) -> None:
        if self.kind == REACH:
            if self.target is None or not 0 <= self.target < len(system.components):
                raise InvalidTarget(f"reachability target {self.target!r} is not a component")
        elif self.kind == RECONFIG:
            if self.target_states is None or len(self.target_states) != len(system.instances):
                raise InvalidTarget("target state vector length does not match the instance count")
            for i, s in enumerate(self.target_states):
                if s is not None and s not in system.instances[i].gadget.state_index:
                    raise InvalidTarget(f"target state {s!r} is not a state of instance {i}")
            for c in self.target_agents or ():
                if not 0 <= c < len(system.components):
                    raise InvalidTarget(f"target agent component {c} does not exist")
        elif self.kind != TRAVERSE:
            raise InvalidTarget(f"unknown objective kind {self.kind!r}")

    def satisfied(self, system: System, config: Configuration, visited: set | None = None) -> bool:
        if self.kind == REACH:
            return self.target in config.agents
        if self.kind == TRAVERSE:
            return visited is not None and len(visited) == len(system.instances)
        if any(t is not None and t != s for s, t in zip(config.states, self.target_states)):
            return False
        return self.target_agents is None or tuple(config.agents) == self.target_agents

    def to_dict(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.target is not None:
            doc["target"] = self.target
        if self.target_states is not None:
            doc["target_states"] = list(self.target_states)
        if self.target_agents is not None:
            doc["target_agents"] = list(self.target_agents)
        return doc


@dataclass
class SolveResult:
    decision: str  # "yes" | "no" | "budget"
    witness: MovePath | None = None
    stats: dict = field(default_factory=dict)
    algorithm: str = "oracle"

    @property
    def yes(self) -> bool:
        return self.decision == "yes"

    def to_dict(self) -> dict:
        return {
            "decision": self.decision,
            "algorithm": self.algorithm,
            "witness": None
            if self.witness is None
            else [
                {"agent": m.agent, "instance": m.instance, "transition": list(m.transition)}
                for m in self.witness
            ],
            "stats": dict(self.stats),
        }


def _placement(system: System, agents) -> tuple:
    if isinstance(agents, int):
        if agents == 0:
            return ()
        if system.start is None:
            raise InvalidTarget("system has no start component")
        return (system.start,) * agents
    return tuple(sorted(agents))


class _Packer:
    """Little-endian bit packing of state vectors, ``ceil(log2(count))`` bits per instance."""

    def __init__(self, system: System) -> None:
        self.offsets = []
        self.widths = []
        off = 0
        for inst in system.instances:
            w = max(0, (len(inst.gadget.states) - 1).bit_length())
            self.offsets.append(off)
            self.widths.append(w)
            off += w
        self.system = system

    def pack(self, states: Sequence) -> int:
        key = 0
        for inst, s, off in zip(self.system.instances, states, self.offsets):
            key |= inst.gadget.state_index[s] << off
        return key

    def index(self, key: int, i: int) -> int:
        return (key >> self.offsets[i]) & ((1 << self.widths[i]) - 1)

    def unpack(self, key: int) -> tuple:
        return tuple(
            inst.gadget.states[self.index(key, i)] for i, inst in enumerate(self.system.instances)
        )


def _move_tables(system: System, packer: _Packer) -> list:
    """Per component: ``[(instance, location, by_state_index)]`` where each entry of
    ``by_state_index`` lists ``(transition, xor_delta, destination_component)``."""
    comp_of = system.component_of
    tables = []
    for group in system.components:
        rows = []
        for i, loc in group:
            g = system.instances[i].gadget
            off = packer.offsets[i]
            per_state = []
            for si, s in enumerate(g.states):
                opts = []
                for t in g.outgoing.get((s, loc), ()):
                    delta = (si ^ g.state_index[t[3]]) << off
                    opts.append((t, delta, comp_of[(i, t[2])]))
                per_state.append(tuple(opts))
            if any(per_state):
                rows.append((i, per_state))
        tables.append(rows)
    return tables


def oracle_solve(
    system: System,
    objective: Objective,
    agents: int | Sequence[int] = 1,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> SolveResult:
    """Breadth-first search over configurations; witnesses are shortest in moves.

    Universal traversal augments each node with the bitmask of instances
    already traversed.  Exceeding ``max_nodes`` yields decision ``"budget"``.
    """
    objective.check(system)
    t0 = time.perf_counter()
    placement = _placement(system, agents)
    packer = _Packer(system)
    tables = _move_tables(system, packer)
    traverse = objective.kind == TRAVERSE
    full = (1 << len(system.instances)) - 1
    root = (packer.pack(system.initial_states), placement, 0)

    def goal(node) -> bool:
        key, ags, mask = node
        if objective.kind == REACH:
            return objective.target in ags
        if traverse:
            return mask == full
        return objective.satisfied(system, Configuration(packer.unpack(key), ags))

    parent: dict = {root: None}
    stats = {"nodes": 1, "frontier_peak": 1}

    def finish(decision, node=None) -> SolveResult:
        witness = None
        if node is not None:
            moves = []
            while parent[node] is not None:
                node, mv = parent[node]
                moves.append(mv)
            witness = MovePath(tuple(reversed(moves)))
        stats["elapsed"] = round(time.perf_counter() - t0, 6)
        return SolveResult(decision, witness, stats, "oracle")

    if goal(root):
        return finish("yes", root)
    queue = deque([root])
    while queue:
        node = queue.popleft()
        key, ags, mask = node
        children = []
        seen_comp = set()
        for k, c in enumerate(ags):
            if c in seen_comp:
                continue
            seen_comp.add(c)
            for i, per_state in tables[c]:
                for t, delta, dest in per_state[packer.index(key, i)]:
                    new_ags = ags[:k] + ags[k + 1 :]
                    new_ags = tuple(sorted(new_ags + (dest,)))
                    bit = 1 << i
                    fresh = traverse and not mask & bit
                    child = (key ^ delta, new_ags, mask | bit if traverse else 0)
                    children.append((not fresh, child, Move(k, i, t)))
        if traverse:
            children.sort(key=lambda c: c[0])  # stable: unvisited-gadget moves first
        for _, child, mv in children:
            if child in parent:
                continue
            parent[child] = (node, mv)
            if goal(child):
                return finish("yes", child)
            if len(parent) > max_nodes:
                stats["nodes"] = len(parent)
                return finish("budget")
            queue.append(child)
        stats["nodes"] = len(parent)
        stats["frontier_peak"] = max(stats["frontier_peak"], len(queue))
    return finish("no")


@dataclass
class PathCheck:
    ok: bool
    failure_index: int | None = None
    reason: str = ""
    final: Configuration | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_path(
    system: System,
    objective: Objective | None,
    path,
    agents: int | Sequence[int] = 1,
    start: Configuration | None = None,
) -> PathCheck:
    """Replay ``path``; report the first illegal move or an unmet objective.

    ``objective=None`` checks legality only.
    """
    config = start if start is not None else Configuration(system.initial_states, _placement(system, agents))
    visited = set()
    for n, mv in enumerate(path):
        try:
            config = step(system, config, mv[0], mv[1], mv[2])
        except (IllegalTransition, AgentNotAdjacent) as exc:
            return PathCheck(False, n, str(exc), config)
        visited.add(mv[1])
    if objective is not None:
        try:
            objective.check(system)
        except InvalidTarget as exc:
            return PathCheck(False, len(path), str(exc), config)
        if not objective.satisfied(system, config, visited):
            return PathCheck(False, len(path), "objective not met at the end of the path", config)
    return PathCheck(True, None, "", config)


def returns_to_initial(system: System, agents: int = 1, max_nodes: int = 200_000) -> tuple | None:
    """Find a reachable configuration that cannot get back to the initial one.

    Returns that configuration or ``None`` when every reachable configuration can return.
    """
    from .core import configuration_graph

    graph = configuration_graph(system, agents, max_nodes)
    back: dict = {}
    for src, dst, _ in graph.edges:
        back.setdefault(dst, []).append(src)
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in back.get(v, ()):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    for i, node in enumerate(graph.nodes):
        if i not in seen:
            return node
    return None



# ---------------------------------------------------------------------------
# Polynomial special cases


def _result(decision: str, moves, algorithm: str, t0: float, **stats) -> SolveResult:
    stats["elapsed"] = round(time.perf_counter() - t0, 6)
    witness = MovePath(tuple(moves)) if decision == "yes" else None
    return SolveResult(decision, witness, stats, algorithm)


def _edges_by_component(system: System, states: Sequence | None = None) -> dict:
    """Movement edges ``component -> [(Move, destination)]`` for the given state vector."""
    states = system.initial_states if states is None else states
    comp_of = system.component_of
    out: dict = {c: [] for c in range(len(system.components))}
    for i, inst in enumerate(system.instances):
        for t in inst.gadget.by_state[states[i]]:
            out[comp_of[(i, t[1])]].append((Move(0, i, t), comp_of[(i, t[2])]))
    return out


def _require_start(system: System) -> int:
    if system.start is None:
        raise InvalidTarget("system has no start component")
    return system.start


def _one_state_check(system: System, max_tunnels: int | None, undirected_only: bool) -> None:
    from .classify import one_state_profile
    from .errors import WrongGadgetClass

    for g in system.gadgets():
        prof = one_state_profile(g)
        if prof is None:
            raise WrongGadgetClass(f"{g.name!r} is not a one-state tunnel gadget")
        if undirected_only and prof[0]:
            raise WrongGadgetClass(f"{g.name!r} has a directed tunnel")
        if max_tunnels is not None and sum(prof) > max_tunnels:
            raise WrongGadgetClass(f"{g.name!r} has more than {max_tunnels} traversable tunnels")


def solve_one_state_undirected(system: System) -> SolveResult:
    """Undirected one-state gadgets: every gadget must touch the start's graph component.

    The witness visits each gadget in turn: walk to it, cross, walk back.
    """
    from .graphs import bfs_path, reachable

    t0 = time.perf_counter()
    _one_state_check(system, None, True)
    start = _require_start(system)
    edges = _edges_by_component(system)
    reach = reachable(start, lambda c: [d for _, d in edges[c]])
    moves: list = []
    for i, inst in enumerate(system.instances):
        comps = {system.component_of[(i, loc)] for loc in inst.gadget.locations}
        if not comps & reach or not inst.gadget.transitions:
            return _result("no", (), "one-state-undirected", t0)
        out = bfs_path(start, lambda c, i=i: any(m.instance == i for m, _ in edges[c]), lambda c: edges[c])
        moves += out
        here = system.component_of[(out[-1].instance, out[-1].transition[2])] if out else start
        if not any(m.instance == i for m in out):
            mv, here = next((m, d) for m, d in edges[here] if m.instance == i)
            moves.append(mv)
        back = bfs_path(here, lambda c: c == start, lambda c: edges[c])
        moves += back
    return _result("yes", moves, "one-state-undirected", t0)


def solve_2sat(n_vars: int, clauses: Sequence[tuple]) -> list | None:
    """Literals are ``+v``/``-v`` with ``v`` in ``1..n_vars``; returns a boolean list or ``None``."""
    from .graphs import strongly_connected_components

    def node(lit: int) -> int:
        return 2 * (abs(lit) - 1) + (lit < 0)

    succ: dict = {k: [] for k in range(2 * n_vars)}
    for clause in clauses:
        a, b = (clause[0], clause[0]) if len(clause) == 1 else clause
        succ[node(-a)].append(node(b))
        succ[node(-b)].append(node(a))
    comps = strongly_connected_components(range(2 * n_vars), lambda v: succ[v])
    comp_index = {v: k for k, comp in enumerate(comps) for v in comp}
    values = []
    for v in range(n_vars):
        pos, neg = comp_index[2 * v], comp_index[2 * v + 1]
        if pos == neg:
            return None
        # Tarjan emits sinks first, so the literal in the earlier component wins.
        values.append(pos < neg)
    return values


def solve_one_state_2tunnel(system: System) -> SolveResult:
    """One-state gadgets with at most two tunnels, decided by 2SAT.

    One variable per traversable tunnel ("this tunnel is the one we use");
    each gadget needs one of its tunnels; two tunnels that cannot be used in
    either order exclude each other; a tunnel whose entrance the start cannot
    reach is excluded outright.
    """
    from .classify import traversable_tunnels
    from .core import tunnel_decomposition
    from .graphs import bfs_path, reachable

    t0 = time.perf_counter()
    _one_state_check(system, 2, False)
    start = _require_start(system)
    comp_of = system.component_of
    edges = _edges_by_component(system)
    ncomp = len(system.components)
    reach = [reachable(c, lambda x: [d for _, d in edges[x]]) for c in range(ncomp)]

    # variable -> (instance, [(entry_comp, exit_comp, transition), ...])
    variables: list = []
    per_instance: list = []
    for i, inst in enumerate(system.instances):
        g = inst.gadget
        tunnels = tunnel_decomposition(g)
        s = g.states[0]
        mine = []
        for k in sorted({k for k, _ in traversable_tunnels(g, tunnels, s)}):
            opts = [
                (comp_of[(i, t[1])], comp_of[(i, t[2])], t)
                for t in g.by_state[s]
                if tunnels.tunnel_of[t[1]] == k
            ]
            variables.append((i, opts))
            mine.append(len(variables))
        if not mine:
            return _result("no", (), "one-state-2sat", t0, variables=len(variables))
        per_instance.append(mine)

    def leads(x: int, y: int) -> bool:
        return any(ent in reach[ex] for _, ex, _ in variables[x - 1][1] for ent, _, _ in variables[y - 1][1])

    clauses = [tuple(m) for m in per_instance]
    n = len(variables)
    for x in range(1, n + 1):
        if not any(ent in reach[start] for ent, _, _ in variables[x - 1][1]):
            clauses.append((-x,))
        for y in range(x + 1, n + 1):
            if not leads(x, y) and not leads(y, x):
                clauses.append((-x, -y))
    values = solve_2sat(n, clauses)
    if values is None:
        return _result("no", (), "one-state-2sat", t0, variables=n, clauses=len(clauses))

    chosen = [next(x for x in mine if values[x - 1]) for mine in per_instance]
    # Linear extension of the "can be followed by" preorder, ties by declaration.
    order, left = [], list(chosen)
    while left:
        x = next((x for x in left if all(y == x or leads(x, y) for y in left)), None)
        if x is None:  # not a total preorder: cannot happen for a satisfying assignment
            raise AssertionError("2SAT assignment does not induce a total preorder")
        order.append(x)
        left.remove(x)

    # Layered search over exit positions so undirected tunnels get a workable orientation.
    layers = [{start: None}]
    for x in order:
        nxt: dict = {}
        for ent, ex, t in variables[x - 1][1]:
            src = next((p for p in layers[-1] if ent in reach[p]), None)
            if src is not None and ex not in nxt:
                nxt[ex] = (src, ent, t, variables[x - 1][0])
        if not nxt:
            raise AssertionError("chosen tunnels cannot be chained")
        layers.append(nxt)
    pos = next(iter(layers[-1]))
    plan = []
    for layer in reversed(layers[1:]):
        src, ent, t, i = layer[pos]
        plan.append((src, ent, i, t))
        pos = src
    moves: list = []
    for src, ent, i, t in reversed(plan):
        moves += bfs_path(src, lambda c, ent=ent: c == ent, lambda c: edges[c])
        moves.append(Move(0, i, t))
    return _result("yes", moves, "one-state-2sat", t0, variables=n, clauses=len(clauses))


def solve_reversible_noninteracting_traversal(system: System) -> SolveResult:
    """Reversible deterministic gadgets whose tunnels never affect each other.

    A tunnel's open directions only change when that tunnel itself is
    crossed, so the reachable locations are those reachable along initially
    open directions.  Witness: walk to each gadget, cross it, undo everything.
    """
    from .classify import has_interacting_tunnels, is_deterministic, is_reversible
    from .core import tunnel_decomposition
    from .errors import NotTunnelGadget, WrongGadgetClass
    from .graphs import bfs_path

    t0 = time.perf_counter()
    for g in system.gadgets():
        try:
            tunnel_decomposition(g)
        except NotTunnelGadget:
            raise WrongGadgetClass(f"{g.name!r} is not a tunnel gadget") from None
        if not (is_reversible(g) and is_deterministic(g)) or has_interacting_tunnels(g):
            raise WrongGadgetClass(f"{g.name!r} is not reversible, deterministic and non-interacting")
    start = _require_start(system)
    edges = _edges_by_component(system)
    moves: list = []
    for i in range(len(system.instances)):
        out = bfs_path(start, lambda c, i=i: any(m.instance == i for m, _ in edges[c]), lambda c: edges[c])
        if out is None:
            return _result("no", (), "reversible-noninteracting", t0)
        here = system.component_of[(out[-1].instance, out[-1].transition[2])] if out else start
        mv = next(m for m, _ in edges[here] if m.instance == i)
        trip = out + [mv]
        undo = [Move(0, m.instance, (m.transition[3], m.transition[2], m.transition[1], m.transition[0])) for m in reversed(trip)]
        moves += trip + undo
    return _result("yes", moves, "reversible-noninteracting", t0)


def ttsu_roles(gadget) -> tuple:
    """``(live_state, {terminal_state: tunnel_index}, tunnels)`` for a labeled TTSU gadget."""
    from .classify import is_labeled_ttsu
    from .core import tunnel_decomposition
    from .errors import WrongGadgetClass

    if not is_labeled_ttsu(gadget):
        raise WrongGadgetClass(f"{gadget.name!r} is not a labeled two-tunnel single-use gadget")
    tunnels = tunnel_decomposition(gadget)
    live = next(s for s in gadget.states if gadget.by_state[s])
    terminal = {t[3]: tunnels.tunnel_of[t[1]] for t in gadget.by_state[live]}
    return live, terminal, tunnels


def solve_ttsu_reconfiguration(system: System, target: Sequence) -> SolveResult:
    """Reconfiguration for labeled TTSU systems via an Euler trail from the start.

    Each gadget going from its open state to a terminal state contributes one
    required edge (the labeled tunnel); all other gadgets must stay put.
    """
    from .graphs import euler_trail

    t0 = time.perf_counter()
    start = _require_start(system)
    target = tuple(target)
    Objective.reconfig(target).check(system)
    if any(s is None for s in target):
        raise InvalidTarget("TTSU reconfiguration needs a fully specified target vector")
    comp_of = system.component_of
    required = []  # (u, v, instance, tunnel pair, terminal)
    for i, inst in enumerate(system.instances):
        live, terminal, tunnels = ttsu_roles(inst.gadget)
        s, t = inst.state, target[i]
        if s == t:
            continue
        if s != live or t not in terminal:
            return _result("no", (), "ttsu-euler", t0)
        a, b = tunnels.pairs[terminal[t]]
        required.append((comp_of[(i, a)], comp_of[(i, b)], i, (a, b), t))
    order = euler_trail([(u, v) for u, v, *_ in required], start)
    if order is None:
        return _result("no", (), "ttsu-euler", t0, required_edges=len(required))
    moves, here = [], start
    for k in order:
        u, v, i, (a, b), t = required[k]
        src, dst = (a, b) if u == here else (b, a)
        live = system.instances[i].state
        tr = next(x for x in system.instances[i].gadget.outgoing[(live, src)] if x[2] == dst and x[3] == t)
        moves.append(Move(0, i, tr))
        here = v if u == here else u
    return _result("yes", moves, "ttsu-euler", t0, required_edges=len(required))


def compress_one_state_witness(system: System, path) -> list:
    """Rebuild a one-state traversal witness from its first-use order.

    Each gadget, in the order it was first crossed, is reached by a shortest
    walk and crossed with the same transition.  Gadgets crossed incidentally
    along an earlier walk are skipped.
    """
    from .graphs import bfs_path

    start = _require_start(system)
    edges = _edges_by_component(system)
    firsts, seen = [], set()
    for mv in path:
        if mv[1] not in seen:
            seen.add(mv[1])
            firsts.append((mv[1], tuple(mv[2])))
    comp_of = system.component_of
    moves: list = []
    visited: set = set()
    here = start
    for i, t in firsts:
        if i in visited:
            continue
        walk = bfs_path(here, lambda c, e=comp_of[(i, t[1])]: c == e, lambda c: edges[c])
        if walk is None:
            raise IllegalTransition(f"instance {i} is not reachable when replaying the first-use order")
        moves += walk
        moves.append(Move(0, i, t))
        visited.update(m.instance for m in walk)
        visited.add(i)
        here = comp_of[(i, t[2])]
    return moves


# ---------------------------------------------------------------------------
# NPReDAG certificates
#
# A certificate is a list of items, each either
#   {"kind": "segment", "moves": [[agent, instance, [s, a, b, s2]], ...]}
# with moves that stay inside the current block of every gadget, or
#   {"kind": "dag", "move": [agent, instance, [s, a, b, s2]],
#    "before": [...state vector...], "after": [...state vector...]}
# for a single transition between blocks.


def _decomposition_for(decomposition, gadget):
    if isinstance(decomposition, dict):
        return decomposition[gadget]
    return decomposition


def _parse_move(raw) -> Move:
    from .errors import MalformedCertificate

    try:
        agent, instance, t = raw
        t = tuple(t)
        if len(t) != 4:
            raise ValueError
        return Move(int(agent), int(instance), t)
    except (TypeError, ValueError):
        raise MalformedCertificate(f"bad move {raw!r}") from None


def _block_system(system: System, decomposition, states) -> System:
    from .core import Instance

    insts = []
    for inst, s in zip(system.instances, states):
        dec = _decomposition_for(decomposition, inst.gadget)
        insts.append(Instance(dec.block_gadget(inst.gadget, s), s))
    return System(tuple(insts), system.components, system.start, system.target)


def extract_certificate(system: System, decomposition, path) -> list:
    """Split a witness into within-block segments and the between-block transitions."""
    config = initial_configuration(system)
    items: list = []
    segment: list = []
    for mv in path:
        g = system.instances[mv[1]].gadget
        dec = _decomposition_for(decomposition, g)
        t = tuple(mv[2])
        if dec.block_of[t[0]] != dec.block_of[t[3]]:
            if segment:
                items.append({"kind": "segment", "moves": segment})
                segment = []
            before = list(config.states)
            config = step(system, config, mv[0], mv[1], t)
            items.append(
                {"kind": "dag", "move": [mv[0], mv[1], list(t)], "before": before, "after": list(config.states)}
            )
        else:
            config = step(system, config, mv[0], mv[1], t)
            segment.append([mv[0], mv[1], list(t)])
    if segment:
        items.append({"kind": "segment", "moves": segment})
    return items


def verify_npredag_certificate(system: System, decomposition, certificate, objective: Objective) -> bool:
    """Check a certificate: segments replay inside blocks, DAG-like steps chain, target met.

    ``decomposition`` is one :class:`~gadgetlab.classify.Decomposition` shared by
    all instances or a mapping from gadget to decomposition.
    """
    from .errors import MalformedCertificate

    if not isinstance(certificate, (list, tuple)):
        raise MalformedCertificate("certificate must be a list of items")
    config = initial_configuration(system)
    for item in certificate:
        if not isinstance(item, dict) or item.get("kind") not in ("segment", "dag"):
            raise MalformedCertificate(f"bad certificate item {item!r}")
        if item["kind"] == "segment":
            if "moves" not in item:
                raise MalformedCertificate("segment without moves")
            moves = [_parse_move(m) for m in item["moves"]]
            restricted = _block_system(system, decomposition, config.states)
            check = verify_path(restricted, None, moves, start=config)
            if not check:
                return False
            config = check.final
        else:
            if not {"move", "before", "after"} <= item.keys():
                raise MalformedCertificate("dag item needs move, before and after")
            mv = _parse_move(item["move"])
            if not 0 <= mv.instance < len(system.instances):
                return False
            dec = _decomposition_for(decomposition, system.instances[mv.instance].gadget)
            s, s2 = mv.transition[0], mv.transition[3]
            if s not in dec.block_of or s2 not in dec.block_of or dec.block_of[s] == dec.block_of[s2]:
                return False
            if list(config.states) != list(item["before"]):
                return False
            try:
                config = step(system, config, mv.agent, mv.instance, mv.transition)
            except (IllegalTransition, AgentNotAdjacent):
                return False
            if list(config.states) != list(item["after"]):
                return False
    objective.check(system)
    return objective.satisfied(system, config)


# ---------------------------------------------------------------------------
# Dispatch


def solve_auto(system: System, objective: Objective, max_nodes: int = DEFAULT_MAX_NODES) -> SolveResult:
    """Use a polynomial special case when the system qualifies, else the oracle."""
    from .errors import WrongGadgetClass

    if objective.kind == TRAVERSE:
        for fn in (solve_one_state_undirected, solve_one_state_2tunnel, solve_reversible_noninteracting_traversal):
            try:
                return fn(system)
            except WrongGadgetClass:
                continue
    if (
        objective.kind == RECONFIG
        and objective.target_agents is None
        and objective.target_states is not None
        and None not in objective.target_states
        and system.instances
    ):
        try:
            return solve_ttsu_reconfiguration(system, objective.target_states)
        except WrongGadgetClass:
            pass
    return oracle_solve(system, objective, 1, max_nodes)
