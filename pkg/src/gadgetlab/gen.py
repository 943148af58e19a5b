"""Seeded random generators for gadgets, systems and source instances."""

from __future__ import annotations

import random
from typing import Sequence

from .catalog import labeled_ttsu, one_state_gadget, one_toggle
from .core import Gadget, Instance, System, make_gadget


def random_system(
    rng: random.Random,
    gadgets: Sequence[Gadget],
    n_instances: int,
    n_components: int,
    states: str | Sequence = "random",
    with_target: bool = False,
) -> System:
    """Scatter instance locations over ``n_components`` junctions.

    ``states`` is ``"random"``, ``"first"`` or an explicit initial state vector.
    """
    instances = []
    for k in range(n_instances):
        g = rng.choice(list(gadgets))
        if states == "random":
            s = rng.choice(g.states)
        elif states == "first":
            s = g.states[0]
        else:
            s = states[k]
        instances.append(Instance(g, s))
    groups: list[list] = [[] for _ in range(n_components)]
    for i, inst in enumerate(instances):
        for loc in inst.gadget.locations:
            groups[rng.randrange(n_components)].append((i, loc))
    start = rng.randrange(n_components)
    target = rng.randrange(n_components) if with_target else None
    return System(tuple(instances), tuple(tuple(g) for g in groups), start, target)


def random_one_state_gadget(rng: random.Random, max_tunnels: int, undirected_only: bool = False) -> Gadget:
    k = rng.randint(1, max_tunnels)
    directed = 0 if undirected_only else rng.randint(0, k)
    return one_state_gadget(directed, k - directed)


def one_state_undirected_system(rng: random.Random, max_gadgets: int = 8) -> System:
    gadgets = [random_one_state_gadget(rng, 3, True) for _ in range(3)]
    n = rng.randint(1, max_gadgets)
    return random_system(rng, gadgets, n, rng.randint(2, n + 3), "first")


def one_state_2tunnel_system(rng: random.Random, max_gadgets: int = 8) -> System:
    gadgets = [random_one_state_gadget(rng, 2) for _ in range(3)]
    n = rng.randint(1, max_gadgets)
    return random_system(rng, gadgets, n, rng.randint(2, n + 3), "first")


def toggle_system(rng: random.Random, max_gadgets: int = 8) -> System:
    n = rng.randint(1, max_gadgets)
    return random_system(rng, [one_toggle()], n, rng.randint(2, n + 2), "random")


def ttsu_system(rng: random.Random, max_gadgets: int = 8) -> tuple[System, tuple]:
    """A TTSU system plus a target vector (mostly reachable-looking)."""
    g = labeled_ttsu()
    n = rng.randint(1, max_gadgets)
    init = [1 if rng.random() < 0.85 else rng.choice([2, 3]) for _ in range(n)]
    system = random_system(rng, [g], n, rng.randint(2, n + 2), init)
    target = tuple(s if s != 1 else rng.choice([1, 2, 3, 2, 3]) for s in init)
    return system, target


def random_gadget(
    rng: random.Random,
    n_states: int,
    n_tunnels: int,
    density: float = 0.3,
    reversible: bool = False,
    deterministic: bool = False,
) -> Gadget:
    """Random tunnel gadget with locations ``t{k}a``/``t{k}b``."""
    states = list(range(1, n_states + 1))
    locs = [f"t{k}{e}" for k in range(n_tunnels) for e in "ab"]
    trans: set = set()
    used: set = set()
    for s in states:
        for k in range(n_tunnels):
            for a, b in ((f"t{k}a", f"t{k}b"), (f"t{k}b", f"t{k}a")):
                if rng.random() >= density:
                    continue
                s2 = rng.choice(states)
                if deterministic and ((s, a) in used or (reversible and (s2, b) in used)):
                    continue
                trans.add((s, a, b, s2))
                used.add((s, a))
                if reversible:
                    trans.add((s2, b, a, s))
                    used.add((s2, b))
    return make_gadget(states, locs, trans, name=f"random-{n_states}s{n_tunnels}t")


def random_dag_gadget(rng: random.Random, n_states: int, n_tunnels: int, density: float = 0.35) -> Gadget:
    """Random tunnel gadget whose transitions only go to higher-numbered states."""
    states = list(range(1, n_states + 1))
    locs = [f"t{k}{e}" for k in range(n_tunnels) for e in "ab"]
    trans = set()
    for s in states[:-1]:
        for k in range(n_tunnels):
            for a, b in ((f"t{k}a", f"t{k}b"), (f"t{k}b", f"t{k}a")):
                if rng.random() < density:
                    trans.add((s, a, b, rng.randint(s + 1, n_states)))
    return make_gadget(states, locs, trans, name=f"random-dag-{n_states}s{n_tunnels}t")


def random_cnf(rng: random.Random, n_vars: int, n_clauses: int) -> list[tuple]:
    return [
        tuple(rng.choice((1, -1)) * rng.randint(1, n_vars) for _ in range(3)) for _ in range(n_clauses)
    ]


def _pair_stubs(rng: random.Random, outs: list, ins: list, tries: int = 200) -> list | None:
    for _ in range(tries):
        rng.shuffle(ins)
        if all(u != v for u, v in zip(outs, ins)):
            return list(zip(outs, ins))
    return None


def random_legal_digraph(rng: random.Random, n: int):
    """Digraph with interior in/out degrees (1,2) or (2,1), ``s`` a source and ``t`` a sink
    of out/in degree 1 or 2.  ``s = 0`` and ``t = n - 1``; parallel arcs allowed."""
    from .reduce.sources import DigraphInstance

    if n < 2:
        raise ValueError("need at least two vertices")
    for _ in range(1000):
        out_deg = [0] * n
        in_deg = [0] * n
        out_deg[0] = rng.randint(1, 2)
        in_deg[n - 1] = rng.randint(1, 2)
        for v in range(1, n - 1):
            out_deg[v], in_deg[v] = rng.choice([(1, 2), (2, 1)])
        if sum(out_deg) != sum(in_deg):
            continue
        outs = [v for v in range(n) for _ in range(out_deg[v])]
        ins = [v for v in range(n) for _ in range(in_deg[v])]
        arcs = _pair_stubs(rng, outs, ins)
        if arcs is not None:
            return DigraphInstance(n, tuple(sorted(arcs)), 0, n - 1, True, "legal")
    raise ValueError(f"could not generate a legal digraph on {n} vertices")


def random_cubic_graph(rng: random.Random, n: int):
    """Undirected multigraph: interior degree 3, ``s = 0`` and ``t = n - 1`` degree 1."""
    from .reduce.sources import DigraphInstance

    if n < 2 or n % 2:
        raise ValueError("need an even number of vertices, at least two")
    for _ in range(1000):
        stubs = [0, n - 1] + [v for v in range(1, n - 1) for _ in range(3)]
        rng.shuffle(stubs)
        edges = list(zip(stubs[::2], stubs[1::2]))
        if all(u != v for u, v in edges):
            return DigraphInstance(n, tuple(sorted(tuple(sorted(e)) for e in edges)), 0, n - 1, False, "cubic")
    raise ValueError(f"could not generate a cubic graph on {n} vertices")


def random_digraph(rng: random.Random, n: int, p: float = 0.3):
    from .reduce.sources import DigraphInstance

    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    s, t = rng.sample(range(n), 2)
    return DigraphInstance(n, tuple(arcs), s, t, True, "random")
