"""Multi-agent search and the observable interface of a gadget network.

A network is a system with some helper agents inside and a list of boundary
components.  Its interface is a labelled transition system: a probe agent
enters at boundary ``a``, everything inside may move (probe and helpers), and
the probe leaves at boundary ``b``.  Moves made by helpers alone are silent.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .core import Gadget, Instance, System, make_gadget
from .errors import BudgetExceeded, InvalidSystem, IoFailure, TooManyAgentsPerConnection
from .solve import RECONFIG, REACH, Objective, SolveResult, oracle_solve

DEFAULT_MAX_NODES = 1_000_000


@dataclass(frozen=True)
class GadgetNetwork:
    system: System
    boundary: tuple
    helpers: tuple = ()
    cap: int | None = None

    def __post_init__(self) -> None:
        n = len(self.system.components)
        for label, comps in (("boundary", self.boundary), ("helper", self.helpers)):
            for c in comps:
                if not 0 <= c < n:
                    raise InvalidSystem(f"{label} component {c} does not exist")
        object.__setattr__(self, "boundary", tuple(self.boundary))
        object.__setattr__(self, "helpers", tuple(sorted(self.helpers)))
        if self.cap is not None and self.cap < 1:
            raise InvalidSystem("adjacency cap must be positive")

    @property
    def adjacent(self) -> list:
        """Per instance, the set of components touching it."""
        out = [set() for _ in self.system.instances]
        for c, group in enumerate(self.system.components):
            for i, _ in group:
                out[i].add(c)
        return out


def network_from_dict(doc: dict, base: Path | None = None) -> GadgetNetwork:
    from .io import component_refs, system_from_dict

    system = system_from_dict(doc, base)
    return GadgetNetwork(
        system,
        tuple(component_refs(doc, "boundary", system)),
        tuple(component_refs(doc, "helpers", system)),
        doc.get("cap"),
    )


def network_to_dict(network: GadgetNetwork) -> dict:
    from .io import system_to_dict

    doc = system_to_dict(network.system)
    doc["boundary"] = list(network.boundary)
    doc["helpers"] = list(network.helpers)
    if network.cap is not None:
        doc["cap"] = network.cap
    return doc


def load_network(path) -> GadgetNetwork:
    from .io import load_json

    return network_from_dict(load_json(path), Path(path).parent)


def multi_agent_oracle(
    system: System,
    objective: Objective,
    placement: Sequence[int],
    max_nodes: int = DEFAULT_MAX_NODES,
) -> SolveResult:
    """Oracle search with an explicit agent multiset (possibly empty)."""
    return oracle_solve(system, objective, tuple(placement), max_nodes)


@dataclass
class Lts:
    """Labelled transition system over integer states.

    ``transitions`` holds ``(s, a, b, s2)`` for "enter at ``a``, leave at
    ``b``"; ``tau`` holds silent steps ``(s, s2)``.  ``labels`` names the
    boundary positions.  ``witnesses`` maps a transition to a replayable move
    list and ``members`` maps a state to the raw configurations it stands for.
    """

    n_states: int
    initial: int
    transitions: tuple
    tau: tuple = ()
    labels: tuple = ()
    witnesses: dict = field(default_factory=dict)
    members: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "states": self.n_states,
            "initial": self.initial,
            "labels": [str(x) for x in self.labels],
            "transitions": [list(t) for t in sorted(self.transitions)],
            "tau": [list(t) for t in sorted(self.tau)],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Lts":
        try:
            n = int(doc["states"])
            trans = tuple(tuple(int(x) for x in t) for t in doc.get("transitions", []))
            tau = tuple(tuple(int(x) for x in t) for t in doc.get("tau", []))
            lts = cls(n, int(doc.get("initial", 0)), trans, tau, tuple(doc.get("labels", ())))
        except (KeyError, TypeError, ValueError) as exc:
            raise IoFailure(f"malformed LTS document: {exc}") from None
        for t in lts.transitions:
            if len(t) != 4 or not (0 <= t[0] < n and 0 <= t[3] < n):
                raise IoFailure(f"LTS transition {list(t)} is out of range")
        for t in lts.tau:
            if len(t) != 2 or not (0 <= t[0] < n and 0 <= t[1] < n):
                raise IoFailure(f"LTS silent step {list(t)} is out of range")
        if not 0 <= lts.initial < max(n, 1):
            raise IoFailure("LTS initial state is out of range")
        return lts


def dumps_lts(lts: Lts) -> str:
    return json.dumps(lts.to_dict(), sort_keys=True, indent=2) + "\n"


def load_lts(path) -> Lts:
    from .io import load_json

    return Lts.from_dict(load_json(path))


def _agent_moves(system: System, states: tuple, comp: int):
    """Yield ``(instance, transition, destination_component)`` for an agent at ``comp``."""
    comp_of = system.component_of
    for i, loc in system.components[comp]:
        for t in system.instances[i].gadget.outgoing.get((states[i], loc), ()):
            yield i, t, comp_of[(i, t[2])]


def _set_state(states: tuple, i: int, s) -> tuple:
    return states[:i] + (s,) + states[i + 1 :]


def _without(agents: tuple, k: int) -> tuple:
    return agents[:k] + agents[k + 1 :]


def _with(agents: tuple, c: int) -> tuple:
    return tuple(sorted(agents + (c,)))


def _cap_ok(adjacent: list, cap: int | None, agents: tuple) -> bool:
    if cap is None:
        return True
    return all(sum(1 for c in agents if c in adj) <= cap for adj in adjacent)


class _Budget:
    def __init__(self, max_nodes: int) -> None:
        self.max_nodes = max_nodes
        self.used = 0

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.max_nodes:
            raise BudgetExceeded(self.max_nodes)


def _silent_steps(network: GadgetNetwork, adjacent: list, config: tuple):
    """Moves made by helpers alone: yield ``(witness_move, next_config)``."""
    states, helpers = config
    seen = set()
    for k, c in enumerate(helpers):
        if c in seen:
            continue
        seen.add(c)
        for i, t, dest in _agent_moves(network.system, states, c):
            nxt = (_set_state(states, i, t[3]), _with(_without(helpers, k), dest))
            if _cap_ok(adjacent, network.cap, nxt[1]):
                yield (c, i, t), nxt


def _probe_runs(network: GadgetNetwork, adjacent: list, config: tuple, entry: int, budget: _Budget) -> dict:
    """All ``(exit, config_after)`` reachable by a probe entering at boundary ``entry``.

    Returns a dict mapping ``(exit, config_after)`` to the witness move list; a
    witness move is ``(who, instance, transition)`` with ``who`` either
    ``"probe"`` or the component of the helper that moved.
    """
    states, helpers = config
    origin = network.boundary[entry]
    root = (states, helpers, origin)
    if not _cap_ok(adjacent, network.cap, helpers + (origin,)):
        return {}
    exits: dict = {}
    for pos, c in enumerate(network.boundary):
        exits.setdefault(c, []).append(pos)
    parent = {root: None}
    queue = deque([root])
    found: dict = {}
    while queue:
        node = queue.popleft()
        st, hs, probe = node
        for b in exits.get(probe, ()):
            key = (b, (st, hs))
            if key not in found:
                found[key] = _trace(parent, node)
        children = []
        for i, t, dest in _agent_moves(network.system, st, probe):
            children.append((("probe", i, t), (_set_state(st, i, t[3]), hs, dest)))
        for mv, (st2, hs2) in _silent_steps(network, adjacent, (st, hs)):
            children.append((mv, (st2, hs2, probe)))
        for mv, child in children:
            if child in parent or not _cap_ok(adjacent, network.cap, child[1] + (child[2],)):
                continue
            budget.spend()
            parent[child] = (node, mv)
            queue.append(child)
    return found


def _trace(parent: dict, node) -> list:
    out = []
    while parent[node] is not None:
        node, mv = parent[node]
        out.append(mv)
    return out[::-1]


def _raw_interface(network: GadgetNetwork, max_nodes: int) -> tuple:
    adjacent = network.adjacent
    budget = _Budget(max_nodes)
    root = (network.system.initial_states, network.helpers)
    index = {root: 0}
    configs = [root]
    trans: dict = {}
    tau: set = set()

    def intern(config) -> int:
        j = index.get(config)
        if j is None:
            budget.spend()
            j = index[config] = len(configs)
            configs.append(config)
        return j

    k = 0
    while k < len(configs):
        config = configs[k]
        for _, nxt in _silent_steps(network, adjacent, config):
            j = intern(nxt)
            if j != k:
                tau.add((k, j))
        for a in range(len(network.boundary)):
            for (b, after), moves in _probe_runs(network, adjacent, config, a, budget).items():
                trans.setdefault((k, a, b, intern(after)), moves)
        k += 1
    return configs, trans, tau


def _closure(n: int, tau) -> list:
    succ = [[] for _ in range(n)]
    for s, t in tau:
        succ[s].append(t)
    out = []
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(seen)
    return out


def _saturate(lts: Lts) -> list:
    """Weak moves: ``out[s]`` is a set of ``(label, s2)`` with ``None`` for silence."""
    n = lts.n_states
    close = _closure(n, lts.tau)
    strong = [[] for _ in range(n)]
    for s, a, b, s2 in lts.transitions:
        strong[s].append(((a, b), s2))
    out = []
    for s in range(n):
        moves = {(None, t) for t in close[s]}
        for s1 in close[s]:
            for label, s2 in strong[s1]:
                moves.update((label, s3) for s3 in close[s2])
        out.append(moves)
    return out


def _refine(sat: list) -> tuple:
    """Coarsest partition stable under ``sat``; also the round each split happened."""
    n = len(sat)
    block = [0] * n
    history = [list(block)]
    while True:
        sigs: dict = {}
        new = []
        for s in range(n):
            sig = (block[s], frozenset((label, block[t]) for label, t in sat[s]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == len(set(block)):
            return block, history
        block = new
        history.append(list(block))


def quotient(lts: Lts) -> Lts:
    """Collapse weakly bisimilar states; classes are numbered by first member."""
    block, _ = _refine(_saturate(lts))
    order: dict = {}
    for s in range(lts.n_states):
        order.setdefault(block[s], len(order))
    cls = [order[block[s]] for s in range(lts.n_states)]
    trans: dict = {}
    for t in sorted(lts.transitions):
        key = (cls[t[0]], t[1], t[2], cls[t[3]])
        if key not in trans:
            trans[key] = lts.witnesses.get(t)
    tau = sorted({(cls[s], cls[t]) for s, t in lts.tau if cls[s] != cls[t]})
    members: dict = {}
    for s in range(lts.n_states):
        members.setdefault(cls[s], []).extend(lts.members.get(s, [s]))
    return Lts(
        len(order),
        cls[lts.initial] if lts.n_states else 0,
        tuple(sorted(trans)),
        tuple(tau),
        lts.labels,
        {k: v for k, v in trans.items() if v is not None},
        members,
    )


def interface_lts(network: GadgetNetwork, probe_agents: int = 1, max_nodes: int = DEFAULT_MAX_NODES) -> Lts:
    """Explore the network and return its interface, quotiented by weak bisimulation.

    Only a single probe is supported.  Raises ``BudgetExceeded`` once more
    than ``max_nodes`` configurations have been generated.
    """
    if probe_agents != 1:
        raise ValueError("interface exploration supports exactly one probe agent")
    configs, trans, tau = _raw_interface(network, max_nodes)
    raw = Lts(
        len(configs),
        0,
        tuple(sorted(trans)),
        tuple(sorted(tau)),
        tuple(network.boundary),
        dict(trans),
        {k: [c] for k, c in enumerate(configs)},
    )
    return quotient(raw)


def replay_probe(network: GadgetNetwork, config: tuple, entry: int, moves: Sequence) -> tuple:
    """Replay a probe witness from ``(states, helpers)``; return ``(exit_component, config)``."""
    states, helpers = config
    probe = network.boundary[entry]
    comp_of = network.system.component_of
    for who, i, t in moves:
        s, a, b, s2 = t
        if states[i] != s or tuple(t) not in network.system.instances[i].gadget.outgoing.get((s, a), ()):
            raise ValueError(f"witness move {t!r} is not available on instance {i}")
        here = probe if who == "probe" else who
        if comp_of[(i, a)] != here:
            raise ValueError(f"witness mover is not adjacent to {i}:{a!r}")
        states = _set_state(states, i, s2)
        if who == "probe":
            probe = comp_of[(i, b)]
        else:
            helpers = _with(_without(helpers, helpers.index(who)), comp_of[(i, b)])
    return probe, (states, helpers)


def gadget_to_lts(gadget: Gadget, initial=None, locations: Sequence | None = None) -> Lts:
    """The interface a lone agent sees when it may enter at and leave from ``locations``.

    Between entering and leaving, the agent may make any number of crossings
    (including none), so the result is directly comparable with
    :func:`interface_lts` of a one-gadget network.
    """
    labels = tuple(gadget.locations if locations is None else locations)
    pos = {loc: k for k, loc in enumerate(labels)}
    sidx = gadget.state_index
    trans = set()
    for s in gadget.states:
        for a in labels:
            seen = {(a, s)}
            stack = [(a, s)]
            while stack:
                loc, st = stack.pop()
                if loc in pos:
                    trans.add((sidx[s], pos[a], pos[loc], sidx[st]))
                for t in gadget.outgoing.get((st, loc), ()):
                    nxt = (t[2], t[3])
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
    init = gadget.states[0] if initial is None else initial
    return Lts(len(gadget.states), sidx[init], tuple(sorted(trans)), (), labels)


@dataclass
class BisimResult:
    equivalent: bool
    relation: list = field(default_factory=list)  # related (state_a, state_b) pairs
    trace: list = field(default_factory=list)  # labels leading to a visible difference
    detail: str = ""

    def __bool__(self) -> bool:
        return self.equivalent

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "relation": [list(p) for p in self.relation],
            "trace": [None if x is None else list(x) for x in self.trace],
            "detail": self.detail,
        }


def check_bisimulation(left: Lts, right: Lts) -> BisimResult:
    """Weak bisimulation over enter/exit labels, by partition refinement.

    On failure, ``trace`` is a label sequence both sides can follow up to a
    point where one side offers a move the other cannot match.
    """
    n = left.n_states
    union = Lts(
        n + right.n_states,
        0,
        tuple(left.transitions) + tuple((s + n, a, b, t + n) for s, a, b, t in right.transitions),
        tuple(left.tau) + tuple((s + n, t + n) for s, t in right.tau),
    )
    sat = _saturate(union)
    block, history = _refine(sat)
    p, q = left.initial, right.initial + n
    if block[p] == block[q]:
        rel = [(s, t - n) for s in range(n) for t in range(n, union.n_states) if block[s] == block[t]]
        return BisimResult(True, rel)
    return _distinguish(sat, history, p, q, n)


def _split_round(history: list, p: int, q: int) -> int:
    for r, block in enumerate(history):
        if block[p] != block[q]:
            return r
    return len(history)


def _distinguish(sat: list, history: list, p: int, q: int, n: int) -> BisimResult:
    trace: list = []
    while True:
        r = _split_round(history, p, q)
        prev = history[r - 1]
        for x, y, side in ((p, q, "left"), (q, p, "right")):
            for label, x2 in sorted(sat[x], key=repr):
                matches = [y2 for lab, y2 in sat[y] if lab == label]
                if all(prev[x2] != prev[y2] for y2 in matches):
                    break
            else:
                continue
            break
        trace.append(label)
        if not matches:
            other = "right" if side == "left" else "left"
            return BisimResult(False, [], trace, f"{side} side can take {label!r}; {other} side cannot")
        # Follow the matching move that stayed equivalent longest.
        y2 = max(matches, key=lambda z: _split_round(history, x2, z))
        p, q = (x2, y2) if side == "left" else (y2, x2)


def _toggle() -> Gadget:
    # State "A" lets an agent leave the hub; "B" lets it come back.
    return make_gadget(["A", "B"], ["hub", "far"], [("A", "hub", "far", "B"), ("B", "far", "hub", "A")], name="1-toggle")


def _stored(count: int) -> tuple:
    if count > 2:
        raise TooManyAgentsPerConnection(f"{count} agents on one connection; at most two can be simulated")
    return ("A" if count >= 1 else "B", "A" if count >= 2 else "B")


def simulate_extra_agents(system: System, placement: Sequence[int], objective: Objective):
    """Replace a multi-agent instance by a single agent plus memory toggles.

    Every component gets two 1-toggles to a new hub component.  A toggle that
    can be crossed away from the hub records one parked agent; the first
    toggle of a component always records the first agent.  The single agent
    starts at the hub.  Reachability maps to reachability; reconfiguration
    additionally pins the toggles (when agent positions are pinned) and
    requires the agent to be back at the hub.
    """
    from .reduce.output import ReductionOutput

    placement = tuple(sorted(placement))
    n = len(system.components)
    counts = [placement.count(c) for c in range(n)]
    toggle = _toggle()
    instances = list(system.instances)
    groups = [list(g) for g in system.components]
    hub = n
    groups.append([])
    memory: dict = {}
    for c in range(n):
        memory[c] = []
        for s in _stored(counts[c]):
            i = len(instances)
            instances.append(Instance(toggle, s))
            groups[hub].append((i, "hub"))
            groups[c].append((i, "far"))
            memory[c].append(i)
    out_system = System(
        tuple(instances),
        tuple(tuple(g) for g in groups),
        hub,
        system.target,
        {"simulated_agents": len(placement)},
    )
    if objective.kind == REACH:
        out_obj = Objective.reach(objective.target)
    elif objective.kind == RECONFIG:
        states = list(objective.target_states)
        if objective.target_agents is None:
            states += [None] * (2 * n)
        else:
            want = [objective.target_agents.count(c) for c in range(n)]
            for c in range(n):
                states += list(_stored(want[c]))
        out_obj = Objective.reconfig(states, (hub,))
    else:
        raise ValueError("agent simulation supports reachability and reconfiguration only")
    return ReductionOutput(
        out_system,
        out_obj,
        {f"memory:{c}": idxs for c, idxs in memory.items()},
        "single-agent answer equals the multi-agent answer while no connection holds more than two agents",
        {"hub": hub, "source_agents": list(placement)},
    )
