"""Structural predicates on gadgets and the complexity labels they imply."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import Gadget, TunnelStructure, make_gadget, tunnel_decomposition
from .errors import NotDag, NotTunnelGadget
from .graphs import reachable, strongly_connected_components


@dataclass(frozen=True)
class Verdict:
    """A boolean with a witness explaining it (``None`` when nothing to show)."""

    value: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.value


def state_successors(gadget: Gadget, state) -> list:
    out = []
    for t in gadget.by_state[state]:
        if t[3] not in out:
            out.append(t[3])
    return out


def reachable_states(gadget: Gadget, state) -> set:
    return reachable(state, lambda s: state_successors(gadget, s))


def is_deterministic(gadget: Gadget) -> Verdict:
    for key, ts in gadget.outgoing.items():
        if len(ts) > 1:
            return Verdict(False, {"state": key[0], "location": key[1], "transitions": list(ts)})
    return Verdict(True)


def is_reversible(gadget: Gadget) -> Verdict:
    present = set(gadget.transitions)
    for s, a, b, s2 in gadget.transitions:
        if (s2, b, a, s) not in present:
            return Verdict(False, {"missing_reverse_of": (s, a, b, s2)})
    return Verdict(True)


def is_partial_matching(gadget: Gadget) -> bool:
    """Transition graph, read as a graph on (state, location) pairs, is a partial matching."""
    partner: dict = {}
    for s, a, b, s2 in gadget.transitions:
        u, v = (s, a), (s2, b)
        for x, y in ((u, v), (v, u)):
            if partner.setdefault(x, y) != y:
                return False
    return all((s2, b, a, s) in set(gadget.transitions) for s, a, b, s2 in gadget.transitions)


def is_dag(gadget: Gadget) -> Verdict:
    for comp in strongly_connected_components(gadget.states, lambda s: state_successors(gadget, s)):
        if len(comp) > 1:
            return Verdict(False, {"cycle_states": comp})
        s = comp[0]
        if s in state_successors(gadget, s):
            return Verdict(False, {"cycle_states": [s]})
    return Verdict(True)


def _tunnels(gadget: Gadget, tunnels: TunnelStructure | None) -> TunnelStructure:
    return tunnels if tunnels is not None else tunnel_decomposition(gadget)


def traversable_tunnels(gadget: Gadget, tunnels: TunnelStructure | None, state) -> frozenset:
    """``(tunnel_index, direction)`` pairs open in ``state``; direction 0 runs pair[0] -> pair[1]."""
    tunnels = _tunnels(gadget, tunnels)
    out = set()
    for _, a, b, _ in gadget.by_state[state]:
        k = tunnels.tunnel_of[a]
        out.add((k, 0 if tunnels.pairs[k][0] == a else 1))
    return frozenset(out)


def _ever_open(gadget: Gadget, tunnels: TunnelStructure, state) -> set:
    seen = set()
    for s in reachable_states(gadget, state):
        seen |= {k for k, _ in traversable_tunnels(gadget, tunnels, s)}
    return seen


def is_true_2_tunnel_state(gadget: Gadget, tunnels: TunnelStructure | None, state) -> bool:
    return len(_ever_open(gadget, _tunnels(gadget, tunnels), state)) >= 2


def is_true_2_tunnel(gadget: Gadget) -> Verdict:
    tunnels = tunnel_decomposition(gadget)
    for s in gadget.states:
        ever = _ever_open(gadget, tunnels, s)
        if len(ever) >= 2:
            return Verdict(True, {"state": s, "tunnels": sorted(ever)})
    return Verdict(False)


def final_true_2_tunnel_states(gadget: Gadget) -> set:
    if not is_dag(gadget):
        raise NotDag(f"{gadget.name!r} is not a DAG gadget")
    tunnels = tunnel_decomposition(gadget)
    true2 = {s for s in gadget.states if is_true_2_tunnel_state(gadget, tunnels, s)}
    out = set()
    for s in true2:
        later = reachable_states(gadget, s) - {s}
        if not later & true2:
            out.add(s)
    return out


def _opened(gadget, tunnels, t) -> set:
    before = traversable_tunnels(gadget, tunnels, t[0])
    after = traversable_tunnels(gadget, tunnels, t[3])
    return after - before


def _closed(gadget, tunnels, t) -> set:
    before = traversable_tunnels(gadget, tunnels, t[0])
    after = traversable_tunnels(gadget, tunnels, t[3])
    return before - after


def distant_openings(gadget: Gadget, from_states=None) -> list:
    """Transitions across one tunnel that open a direction of another; with what they open."""
    tunnels = tunnel_decomposition(gadget)
    out = []
    for t in gadget.transitions:
        if from_states is not None and t[0] not in from_states:
            continue
        own = tunnels.tunnel_of[t[1]]
        opened = sorted(d for d in _opened(gadget, tunnels, t) if d[0] != own)
        if opened:
            out.append((t, opened))
    return out


def has_distant_opening(gadget: Gadget) -> Verdict:
    found = distant_openings(gadget)
    if found:
        t, opened = found[0]
        return Verdict(True, {"transition": t, "opens": opened})
    return Verdict(False)


def has_interacting_tunnels(gadget: Gadget) -> Verdict:
    tunnels = tunnel_decomposition(gadget)
    for t in gadget.transitions:
        own = tunnels.tunnel_of[t[1]]
        before = {d for d in traversable_tunnels(gadget, tunnels, t[0]) if d[0] != own}
        after = {d for d in traversable_tunnels(gadget, tunnels, t[3]) if d[0] != own}
        if before != after:
            return Verdict(True, {"transition": t, "before": sorted(before), "after": sorted(after)})
    return Verdict(False)


def forced_distant_closings(gadget: Gadget, from_states=None) -> list:
    """``(state, (tunnel, direction), closed)`` where every crossing of that tunnel direction
    from ``state`` closes the other-tunnel direction ``closed``.

    The notion is borrowed from the reachability dichotomy for DAG gadgets and
    read literally from the forced-closing hypothesis used for the
    Hamiltonian-path reductions.
    """
    tunnels = tunnel_decomposition(gadget)
    out = []
    for s in gadget.states:
        if from_states is not None and s not in from_states:
            continue
        open_here = traversable_tunnels(gadget, tunnels, s)
        groups: dict = {}
        for t in gadget.by_state[s]:
            k = tunnels.tunnel_of[t[1]]
            d = (k, 0 if tunnels.pairs[k][0] == t[1] else 1)
            groups.setdefault(d, []).append(t)
        for d, ts in sorted(groups.items()):
            for other in sorted(open_here):
                if other[0] == d[0]:
                    continue
                if all(other not in traversable_tunnels(gadget, tunnels, t[3]) for t in ts):
                    out.append((s, d, other))
    return out


def has_forced_distant_closing(gadget: Gadget) -> Verdict:
    found = forced_distant_closings(gadget)
    if found:
        s, d, other = found[0]
        return Verdict(True, {"state": s, "crossing": d, "closes": other})
    return Verdict(False)


def is_monotonically_opening(gadget: Gadget) -> Verdict:
    for s in gadget.states:
        here = gadget.traversals(s)
        for t in reachable_states(gadget, s):
            lost = here - gadget.traversals(t)
            if lost:
                return Verdict(False, {"from": s, "to": t, "lost": sorted(lost, key=str)})
    return Verdict(True)


def is_monotonically_closing(gadget: Gadget) -> Verdict:
    for s in gadget.states:
        here = gadget.traversals(s)
        for t in reachable_states(gadget, s):
            gained = gadget.traversals(t) - here
            if gained:
                return Verdict(False, {"from": s, "to": t, "gained": sorted(gained, key=str)})
    return Verdict(True)


def without_untraversable_tunnels(gadget: Gadget) -> Gadget:
    """Drop locations of tunnels that no transition ever uses."""
    used = {t[1] for t in gadget.transitions} | {t[2] for t in gadget.transitions}
    locs = [a for a in gadget.locations if a in used]
    if not locs:
        return gadget
    return make_gadget(gadget.states, locs, gadget.transitions, name=gadget.name)


def one_state_profile(gadget: Gadget) -> tuple[int, int] | None:
    """``(directed, undirected)`` tunnel counts of a one-state tunnel gadget, else ``None``."""
    if len(gadget.states) != 1:
        return None
    try:
        tunnels = tunnel_decomposition(gadget)
    except NotTunnelGadget:
        return None
    s = gadget.states[0]
    dirs: dict = {}
    for k, _ in traversable_tunnels(gadget, tunnels, s):
        dirs[k] = dirs.get(k, 0) + 1
    directed = sum(1 for v in dirs.values() if v == 1)
    return directed, len(dirs) - directed


def is_labeled_ttsu(gadget: Gadget) -> bool:
    """Structural match for the labeled two-tunnel single-use gadget (any naming)."""
    try:
        tunnels = tunnel_decomposition(gadget)
    except NotTunnelGadget:
        return False
    if len(gadget.states) != 3 or len(tunnels) != 2:
        return False
    live = [s for s in gadget.states if gadget.by_state[s]]
    if len(live) != 1:
        return False
    start = live[0]
    if traversable_tunnels(gadget, tunnels, start) != {(0, 0), (0, 1), (1, 0), (1, 1)}:
        return False
    dest = {}
    for t in gadget.by_state[start]:
        dest.setdefault(tunnels.tunnel_of[t[1]], set()).add(t[3])
    return (
        all(len(v) == 1 for v in dest.values())
        and dest[0] != dest[1]
        and start not in dest[0] | dest[1]
    )


@dataclass
class Decomposition:
    blocks: list  # list of frozensets of states
    dag_transitions: list
    block_of: dict = field(default_factory=dict)

    def block_gadget(self, gadget: Gadget, state) -> Gadget:
        block = self.blocks[self.block_of[state]]
        return make_gadget(
            [s for s in gadget.states if s in block],
            gadget.locations,
            [t for t in gadget.transitions if t[0] in block and t[3] in block],
            name=f"{gadget.name}[{self.block_of[state]}]",
        )


def npredag_decomposition(gadget: Gadget, family: Callable[[Gadget], bool]) -> Decomposition | None:
    """Blocks are the SCCs of the state-transition graph; each must pass ``family``."""
    comps = strongly_connected_components(gadget.states, lambda s: state_successors(gadget, s))
    order = {s: i for i, s in enumerate(gadget.states)}
    comps = [sorted(c, key=order.__getitem__) for c in comps]
    comps.sort(key=lambda c: order[c[0]])
    blocks = [frozenset(c) for c in comps]
    block_of = {s: i for i, b in enumerate(blocks) for s in b}
    dec = Decomposition(
        blocks,
        [t for t in gadget.transitions if block_of[t[0]] != block_of[t[3]]],
        block_of,
    )
    for i, b in enumerate(blocks):
        if not family(dec.block_gadget(gadget, next(iter(b)))):
            return None
    return dec


def one_state_family(block: Gadget) -> bool:
    """Single-state blocks: their reconfiguration problem is trivial."""
    return len(block.states) == 1


PREDICATES: dict = {
    "deterministic": is_deterministic,
    "reversible": is_reversible,
    "dag": is_dag,
    "true_2_tunnel": is_true_2_tunnel,
    "distant_opening": has_distant_opening,
    "forced_distant_closing": has_forced_distant_closing,
    "interacting_tunnels": has_interacting_tunnels,
    "monotone_opening": is_monotonically_opening,
    "monotone_closing": is_monotonically_closing,
}

TUNNEL_PREDICATES = {"true_2_tunnel", "distant_opening", "forced_distant_closing", "interacting_tunnels"}


@dataclass
class ClassificationReport:
    gadget: str
    predicates: dict  # name -> Verdict (None if not applicable)
    labels: dict  # problem -> (label, rule)
    tunnels: list | None = None

    def to_dict(self) -> dict:
        return {
            "gadget": self.gadget,
            "tunnels": self.tunnels,
            "predicates": {
                k: None if v is None else {"value": v.value, "witness": _jsonable(v.witness)}
                for k, v in self.predicates.items()
            },
            "labels": {k: {"label": lab, "rule": rule} for k, (lab, rule) in self.labels.items()},
        }

    def table(self) -> str:
        rows = [f"gadget: {self.gadget}"]
        width = max(len(k) for k in list(self.predicates) + list(self.labels))
        for k, v in self.predicates.items():
            rows.append(f"  {k:<{width}}  {'n/a' if v is None else ('yes' if v else 'no')}")
        for k, (lab, rule) in self.labels.items():
            rows.append(f"  {k:<{width}}  {lab:<16} {rule}")
        return "\n".join(rows)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    return x


def complexity_labels(gadget: Gadget) -> ClassificationReport:
    try:
        tunnels = tunnel_decomposition(gadget)
    except NotTunnelGadget:
        tunnels = None
    preds: dict = {}
    for name, fn in PREDICATES.items():
        preds[name] = None if (tunnels is None and name in TUNNEL_PREDICATES) else fn(gadget)

    labels = {
        "universal_traversal": _traversal_label(gadget, tunnels, preds),
        "reachability": _reachability_label(gadget, tunnels, preds),
    }
    labels["reconfiguration"] = _reconfiguration_label(gadget, tunnels, preds, labels["reachability"][0])
    return ClassificationReport(
        gadget.name, preds, labels, None if tunnels is None else [list(p) for p in tunnels.pairs]
    )


def _traversal_label(gadget, tunnels, preds) -> tuple:
    if tunnels is None:
        return ("unknown", "not a tunnel gadget")
    profile = one_state_profile(gadget)
    if profile is not None:
        directed, undirected = profile
        k = directed + undirected
        if directed == 0:
            return ("L", "one-state, no directed tunnel")
        if k <= 2:
            return ("NL-complete", "one-state, directed tunnel, k<=2")
        return ("NP-complete", "one-state, directed tunnel, k>=3")
    if preds["dag"]:
        if preds["true_2_tunnel"]:
            return ("NP-complete", "true 2-tunnel DAG gadget")
        return ("unknown", "1-tunnel-like DAG gadget (open problem)")
    if preds["reversible"] and preds["deterministic"]:
        if preds["interacting_tunnels"]:
            return ("PSPACE-complete", "reversible deterministic with interacting tunnels")
        return ("NL", "reversible deterministic without interacting tunnels")
    return ("unknown", "outside the characterized classes")


def _reachability_label(gadget, tunnels, preds) -> tuple:
    if tunnels is None:
        return ("unknown", "not a tunnel gadget")
    if len(gadget.states) == 1:
        return ("NL", "one-state gadgets: plain graph reachability")
    if preds["dag"]:
        if preds["distant_opening"] or preds["forced_distant_closing"]:
            return ("NP-complete", "DAG gadget with distant opening or forced distant closing (prior work)")
        return ("unknown", "DAG gadget without distant opening or forced closing")
    if preds["reversible"] and preds["deterministic"]:
        if preds["interacting_tunnels"]:
            return ("PSPACE-complete", "reversible deterministic with interacting tunnels (prior work)")
        return ("NL", "reversible deterministic without interacting tunnels (prior work)")
    return ("unknown", "outside the characterized classes")


def _reconfiguration_label(gadget, tunnels, preds, reach_label) -> tuple:
    if is_labeled_ttsu(gadget):
        return ("P", "labeled two-tunnel single-use gadget: Eulerian trail")
    if preds["reversible"] and reach_label == "PSPACE-complete":
        return ("PSPACE-complete", "reversible gadget with PSPACE-complete reachability")
    if len(gadget.states) == 1:
        return ("L", "one-state gadgets never change state")
    if npredag_decomposition(gadget, one_state_family) is not None:
        return ("NP", "DAG-like over one-state blocks (NPReDAG membership)")
    return ("unknown", "outside the characterized classes")
