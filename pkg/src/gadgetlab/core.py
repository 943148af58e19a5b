"""Gadget and system-of-gadgets data model.

A gadget is a finite set of states and locations plus a set of transitions
``(from_state, from_location, to_location, to_state)``.  A system of gadgets is
a list of gadget instances, each with an initial state, and a partition of all
instance locations into connection components.  Agents live on components and
move only by traversing gadgets; movement inside a component is free.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    AgentNotAdjacent,
    BudgetExceeded,
    DuplicateTransition,
    EmptyGadget,
    IllegalTransition,
    InvalidSystem,
    NotTunnelGadget,
    UnknownId,
)

StateId = Hashable
LocationId = Hashable
Transition = tuple  # (from_state, from_location, to_location, to_state)
InstanceLocation = tuple  # (instance_index, location_id)


def id_key(value) -> tuple:
    """Total order over mixed int/str identifiers (ints first)."""
    if isinstance(value, bool):
        return (1, str(value))
    if isinstance(value, int):
        return (0, value, "")
    return (1, 0, str(value))


def transition_key(t: Transition) -> tuple:
    return tuple(id_key(x) for x in t)


@dataclass(frozen=True)
class Gadget:
    name: str
    states: tuple
    locations: tuple
    transitions: tuple
    metadata: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if not self.states or not self.locations:
            raise EmptyGadget(f"gadget {self.name!r} needs at least one state and one location")
        if len(set(self.states)) != len(self.states):
            raise DuplicateTransition(f"gadget {self.name!r} declares a state twice")
        if len(set(self.locations)) != len(self.locations):
            raise DuplicateTransition(f"gadget {self.name!r} declares a location twice")
        states, locations = set(self.states), set(self.locations)
        seen = set()
        for t in self.transitions:
            if len(t) != 4:
                raise UnknownId(f"transition {t!r} is not a 4-tuple")
            s, a, b, s2 = t
            if s not in states or s2 not in states:
                raise UnknownId(f"transition {t!r} references an undeclared state")
            if a not in locations or b not in locations:
                raise UnknownId(f"transition {t!r} references an undeclared location")
            if t in seen:
                raise DuplicateTransition(f"transition {t!r} listed twice")
            seen.add(t)

    @cached_property
    def state_index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def location_index(self) -> dict:
        return {a: i for i, a in enumerate(self.locations)}

    @cached_property
    def outgoing(self) -> dict:
        """Map ``(state, location)`` to the transitions leaving it, in declaration order."""
        table: dict = {}
        for t in self.transitions:
            table.setdefault((t[0], t[1]), []).append(t)
        return {k: tuple(v) for k, v in table.items()}

    @cached_property
    def by_state(self) -> dict:
        table: dict = {s: [] for s in self.states}
        for t in self.transitions:
            table[t[0]].append(t)
        return {k: tuple(v) for k, v in table.items()}

    def traversals(self, state) -> frozenset:
        """Location pairs ``(a, b)`` traversable in ``state``."""
        return frozenset((t[1], t[2]) for t in self.by_state[state])

    def renamed(self, name: str) -> "Gadget":
        return Gadget(name, self.states, self.locations, self.transitions, dict(self.metadata))


def make_gadget(
    states: Sequence,
    locations: Sequence,
    transitions: Iterable[Sequence],
    name: str = "gadget",
    metadata: dict | None = None,
) -> Gadget:
    """Validate and build a gadget; transitions are stored in canonical sorted order."""
    trans = [tuple(t) for t in transitions]
    if len(set(trans)) != len(trans):
        dup = next(t for t in trans if trans.count(t) > 1)
        raise DuplicateTransition(f"transition {dup!r} listed twice")
    trans.sort(key=transition_key)
    return Gadget(name, tuple(states), tuple(locations), tuple(trans), dict(metadata or {}))


@dataclass(frozen=True)
class TunnelStructure:
    pairs: tuple  # tuple of (location, location), first-declared location first

    @cached_property
    def tunnel_of(self) -> dict:
        return {loc: i for i, pair in enumerate(self.pairs) for loc in pair}

    def __len__(self) -> int:
        return len(self.pairs)


def tunnel_decomposition(gadget: Gadget) -> TunnelStructure:
    parent = {a: a for a in gadget.locations}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for t in gadget.transitions:
        ra, rb = find(t[1]), find(t[2])
        if ra != rb:
            parent[rb] = ra
    groups: dict = {}
    for a in gadget.locations:
        groups.setdefault(find(a), []).append(a)
    pairs, singles = [], []
    for members in groups.values():
        if len(members) > 2:
            raise NotTunnelGadget(f"locations {members!r} of {gadget.name!r} form one component")
        if len(members) == 2:
            pairs.append(tuple(members))
        else:
            singles.append(members[0])
    if len(singles) % 2:
        raise NotTunnelGadget(f"{gadget.name!r} has an odd number of locations")
    pairs.extend(tuple(singles[i : i + 2]) for i in range(0, len(singles), 2))
    index = gadget.location_index
    pairs.sort(key=lambda p: index[p[0]])
    return TunnelStructure(tuple(pairs))


@dataclass(frozen=True)
class Instance:
    gadget: Gadget
    state: StateId


@dataclass(frozen=True)
class System:
    """Gadget instances plus connection components.

    ``components`` is a tuple of location groups; each group is a tuple of
    ``(instance_index, location_id)`` pairs.  ``start`` and ``target`` are
    component indices.  Components may be empty (bare junctions).
    """

    instances: tuple
    components: tuple
    start: int | None = None
    target: int | None = None
    metadata: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        seen: dict = {}
        for ci, group in enumerate(self.components):
            for i, loc in group:
                if not 0 <= i < len(self.instances):
                    raise InvalidSystem(f"component {ci} names missing instance {i}")
                if loc not in self.instances[i].gadget.location_index:
                    raise InvalidSystem(f"component {ci} names unknown location {i}:{loc!r}")
                if (i, loc) in seen:
                    raise InvalidSystem(f"location {i}:{loc!r} appears in two components")
                seen[(i, loc)] = ci
        for i, inst in enumerate(self.instances):
            if inst.state not in inst.gadget.state_index:
                raise InvalidSystem(f"instance {i} starts in unknown state {inst.state!r}")
            for loc in inst.gadget.locations:
                if (i, loc) not in seen:
                    raise InvalidSystem(f"location {i}:{loc!r} belongs to no component")
        for label, c in (("start", self.start), ("target", self.target)):
            if c is not None and not 0 <= c < len(self.components):
                raise InvalidSystem(f"{label} component {c} does not exist")

    @cached_property
    def component_of(self) -> dict:
        return {il: ci for ci, group in enumerate(self.components) for il in group}

    @property
    def initial_states(self) -> tuple:
        return tuple(inst.state for inst in self.instances)

    def with_states(self, states: Sequence) -> "System":
        insts = tuple(Instance(inst.gadget, s) for inst, s in zip(self.instances, states))
        return System(insts, self.components, self.start, self.target, dict(self.metadata))

    def with_endpoints(self, start=..., target=...) -> "System":
        return System(
            self.instances,
            self.components,
            self.start if start is ... else start,
            self.target if target is ... else target,
            dict(self.metadata),
        )

    def gadgets(self) -> list:
        """Distinct gadget definitions in first-use order."""
        out = []
        for inst in self.instances:
            if inst.gadget not in out:
                out.append(inst.gadget)
        return out


class SystemBuilder:
    """Incremental construction of a system from named junction nodes.

    Nodes are merged with :meth:`join`; every instance location not attached to
    a node gets a private component of its own.
    """

    def __init__(self) -> None:
        self.instances: list[Instance] = []
        self._parent: list[int] = []
        self._attach: dict = {}
        self.labels: dict = {}

    def node(self, label=None) -> int:
        n = len(self._parent)
        self._parent.append(n)
        if label is not None:
            self.labels[label] = n
        return n

    def _find(self, n: int) -> int:
        while self._parent[n] != n:
            self._parent[n] = self._parent[self._parent[n]]
            n = self._parent[n]
        return n

    def join(self, a: int, b: int) -> int:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self._parent[max(ra, rb)] = min(ra, rb)
        return min(ra, rb)

    def add(self, gadget: Gadget, state) -> int:
        self.instances.append(Instance(gadget, state))
        return len(self.instances) - 1

    def attach(self, instance: int, location, node: int) -> None:
        key = (instance, location)
        if key in self._attach:
            self.join(self._attach[key], node)
        else:
            self._attach[key] = node

    def build(self, start: int | None = None, target: int | None = None, metadata=None) -> tuple:
        """Return ``(system, node_to_component)``."""
        for i, inst in enumerate(self.instances):
            for loc in inst.gadget.locations:
                if (i, loc) not in self._attach:
                    self._attach[(i, loc)] = self.node()
        roots: dict = {}
        for n in range(len(self._parent)):
            roots.setdefault(self._find(n), len(roots))
        groups: list[list] = [[] for _ in roots]
        for (i, loc), n in sorted(self._attach.items(), key=lambda kv: (kv[0][0], id_key(kv[0][1]))):
            groups[roots[self._find(n)]].append((i, loc))
        node_comp = [roots[self._find(n)] for n in range(len(self._parent))]
        system = System(
            tuple(self.instances),
            tuple(tuple(g) for g in groups),
            None if start is None else node_comp[start],
            None if target is None else node_comp[target],
            dict(metadata or {}),
        )
        return system, node_comp


@dataclass(frozen=True)
class Configuration:
    states: tuple
    agents: tuple  # sorted multiset of component indices

    def __post_init__(self) -> None:
        if list(self.agents) != sorted(self.agents):
            object.__setattr__(self, "agents", tuple(sorted(self.agents)))


class Move(NamedTuple):
    agent: int
    instance: int
    transition: Transition


@dataclass(frozen=True)
class MovePath:
    moves: tuple = ()

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def __getitem__(self, i):
        return self.moves[i]


def initial_configuration(system: System, agents: Sequence[int] | None = None) -> Configuration:
    if agents is None:
        if system.start is None:
            raise InvalidSystem("system has no start component")
        agents = (system.start,)
    return Configuration(system.initial_states, tuple(sorted(agents)))


def step(system: System, config: Configuration, agent: int, instance: int, transition) -> Configuration:
    """Apply one gadget traversal; pure."""
    transition = tuple(transition)
    if not 0 <= instance < len(system.instances):
        raise IllegalTransition(f"no instance {instance}")
    gadget = system.instances[instance].gadget
    s, a, b, s2 = transition
    if s != config.states[instance] or transition not in gadget.outgoing.get((s, a), ()):
        raise IllegalTransition(
            f"transition {transition!r} not available on instance {instance} "
            f"in state {config.states[instance]!r}"
        )
    if not 0 <= agent < len(config.agents):
        raise AgentNotAdjacent(f"no agent {agent}")
    comp_of = system.component_of
    if comp_of[(instance, a)] != config.agents[agent]:
        raise AgentNotAdjacent(f"agent {agent} is not at location {instance}:{a!r}")
    states = list(config.states)
    states[instance] = s2
    agents = list(config.agents)
    agents[agent] = comp_of[(instance, b)]
    return Configuration(tuple(states), tuple(sorted(agents)))


def replay(system: System, path: Iterable, start: Configuration | None = None) -> Configuration:
    config = start if start is not None else initial_configuration(system)
    for mv in path:
        config = step(system, config, mv[0], mv[1], mv[2])
    return config


def successors(system: System, config: Configuration) -> Iterator[tuple]:
    """Yield ``(move, next_configuration)`` in declaration order."""
    comps = system.components
    done = set()
    for k, c in enumerate(config.agents):
        if c in done:
            continue
        done.add(c)
        for i, loc in comps[c]:
            gadget = system.instances[i].gadget
            for t in gadget.outgoing.get((config.states[i], loc), ()):
                yield Move(k, i, t), step(system, config, k, i, t)


@dataclass
class ConfigurationGraph:
    nodes: list
    edges: list  # (source_index, target_index, Move)

    @cached_property
    def index(self) -> dict:
        return {c: i for i, c in enumerate(self.nodes)}


def configuration_graph(
    system: System,
    agent_count: int = 1,
    max_nodes: int = 1_000_000,
    placement: Sequence[int] | None = None,
) -> ConfigurationGraph:
    """Explicit reachable configuration graph from the initial configuration."""
    if placement is None:
        if agent_count < 1:
            raise ValueError("agent_count must be at least 1")
        placement = [system.start] * agent_count
    root = initial_configuration(system, placement)
    index = {root: 0}
    nodes, edges = [root], []
    queue = deque([root])
    while queue:
        config = queue.popleft()
        src = index[config]
        for move, nxt in successors(system, config):
            j = index.get(nxt)
            if j is None:
                if len(nodes) >= max_nodes:
                    raise BudgetExceeded(max_nodes)
                j = index[nxt] = len(nodes)
                nodes.append(nxt)
                queue.append(nxt)
            edges.append((src, j, move))
    return ConfigurationGraph(nodes, edges)
