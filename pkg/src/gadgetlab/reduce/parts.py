"""Locating the states and tunnels that the reductions build with."""

from __future__ import annotations

from dataclasses import dataclass

from ..classify import (
    distant_openings,
    final_true_2_tunnel_states,
    forced_distant_closings,
    is_dag,
    traversable_tunnels,
)
from ..core import Gadget, TunnelStructure, tunnel_decomposition
from ..errors import NotTunnelGadget, WrongGadgetClass


@dataclass(frozen=True)
class Crossing:
    """One usable crossing of one copy of a gadget: start state and entry/exit location."""

    state: object
    entry: object
    exit: object


def tunnels_of(gadget: Gadget) -> TunnelStructure:
    try:
        return tunnel_decomposition(gadget)
    except NotTunnelGadget:
        raise WrongGadgetClass(f"{gadget.name!r} is not a tunnel gadget") from None


def ends(tunnels: TunnelStructure, k: int, direction: int) -> tuple:
    a, b = tunnels.pairs[k]
    return (a, b) if direction == 0 else (b, a)


def directed_one_state_tunnel(gadget: Gadget, min_tunnels: int = 1) -> tuple:
    """For a one-state gadget: ``(state, tunnels, directed_tunnel_index)``."""
    tunnels = tunnels_of(gadget)
    if len(gadget.states) != 1:
        raise WrongGadgetClass(f"{gadget.name!r} is not a one-state gadget")
    s = gadget.states[0]
    open_ = traversable_tunnels(gadget, tunnels, s)
    live = sorted({k for k, _ in open_})
    if len(live) < min_tunnels:
        raise WrongGadgetClass(f"{gadget.name!r} needs at least {min_tunnels} traversable tunnels")
    for k in live:
        if len({d for kk, d in open_ if kk == k}) == 1:
            return s, tunnels, k
    raise WrongGadgetClass(f"{gadget.name!r} has no directed tunnel")


def one_state_orientation(gadget: Gadget, tunnels: TunnelStructure, k: int) -> tuple:
    """Entry and exit of tunnel ``k`` in a one-state gadget (forward if directed)."""
    s = gadget.states[0]
    dirs = sorted(d for kk, d in traversable_tunnels(gadget, tunnels, s) if kk == k)
    if not dirs:
        raise WrongGadgetClass(f"tunnel {k} of {gadget.name!r} is never traversable")
    return ends(tunnels, k, dirs[0])


def single_use(gadget: Gadget, directed: bool) -> Crossing | None:
    """A state and tunnel that can be crossed exactly once (in one direction if ``directed``).

    Only that tunnel is ever reachable, so it suffices that every crossing
    lands in a state where the tunnel is closed both ways.
    """
    tunnels = tunnels_of(gadget)
    for s in gadget.states:
        open_ = traversable_tunnels(gadget, tunnels, s)
        for k in range(len(tunnels)):
            dirs = sorted(d for kk, d in open_ if kk == k)
            if not dirs or (directed and len(dirs) != 1):
                continue
            crossings = [t for t in gadget.by_state[s] if tunnels.tunnel_of[t[1]] == k]
            if all(not any(kk == k for kk, _ in traversable_tunnels(gadget, tunnels, t[3])) for t in crossings):
                a, b = ends(tunnels, k, dirs[0])
                return Crossing(s, a, b)
    return None


def one_way(gadget: Gadget) -> Crossing | None:
    """A state and tunnel open in exactly one direction whose reverse never opens."""
    from ..graphs import reachable

    tunnels = tunnels_of(gadget)
    for s in gadget.states:
        open_ = traversable_tunnels(gadget, tunnels, s)
        for k in range(len(tunnels)):
            dirs = [d for kk, d in open_ if kk == k]
            if len(dirs) != 1:
                continue
            later = reachable(
                s, lambda x: [t[3] for t in gadget.by_state[x] if tunnels.tunnel_of[t[1]] == k]
            )
            if all((k, 1 - dirs[0]) not in traversable_tunnels(gadget, tunnels, x) for x in later):
                a, b = ends(tunnels, k, dirs[0])
                return Crossing(s, a, b)
    return None


def single_use_directed_chain(gadget: Gadget) -> list[Crossing]:
    """Copies forming a single-use directed path: one copy if possible, else
    single-use, one-way, single-use in series."""
    direct = single_use(gadget, True)
    if direct is not None:
        return [direct]
    su, ow = single_use(gadget, False), one_way(gadget)
    if su is None or ow is None:
        raise WrongGadgetClass(f"{gadget.name!r} cannot form a single-use directed path")
    return [su, ow, su]


def _final_states(gadget: Gadget) -> list:
    if not is_dag(gadget):
        raise WrongGadgetClass(f"{gadget.name!r} is not a DAG gadget")
    finals = final_true_2_tunnel_states(gadget)
    return [s for s in gadget.states if s in finals]


def directed_vertex_parts(gadget: Gadget) -> tuple:
    """``(S, d, e)``: final true 2-tunnel state ``S`` without distant opening from it,
    a tunnel direction ``d`` open only one way in ``S`` and another tunnel ``e``
    open in ``S`` (``e`` is a list of its open directions)."""
    tunnels = tunnels_of(gadget)
    for s in _final_states(gadget):
        if distant_openings(gadget, from_states={s}):
            continue
        open_ = traversable_tunnels(gadget, tunnels, s)
        by_tunnel: dict = {}
        for k, d in sorted(open_):
            by_tunnel.setdefault(k, []).append(d)
        for k, dirs in by_tunnel.items():
            if len(dirs) != 1:
                continue
            for k2, dirs2 in by_tunnel.items():
                if k2 != k:
                    return s, tunnels, (k, dirs[0]), (k2, dirs2)
    raise WrongGadgetClass(
        f"{gadget.name!r} has no final true 2-tunnel state with a directed tunnel and no distant opening"
    )


def closing_vertex_parts(gadget: Gadget) -> tuple:
    """``(S, a, b)`` where every crossing of ``a`` from ``S`` closes ``b`` in one direction
    and ``b`` is open both ways in ``S``.  ``b``'s direction is the one that stays usable."""
    tunnels = tunnels_of(gadget)
    for s in _final_states(gadget):
        open_ = traversable_tunnels(gadget, tunnels, s)
        for s2, a, (kb, closed) in forced_distant_closings(gadget, from_states={s}):
            if (kb, 1 - closed) in open_:
                return s, tunnels, a, (kb, 1 - closed)
    raise WrongGadgetClass(f"{gadget.name!r} has no forced distant closing from a final true 2-tunnel state")


def spiral_parts(gadget: Gadget) -> tuple:
    """``(S, a, b)``: final true 2-tunnel state with tunnels ``a`` and ``b`` open both
    ways and no crossing of either forced to close the other."""
    tunnels = tunnels_of(gadget)
    for s in _final_states(gadget):
        open_ = traversable_tunnels(gadget, tunnels, s)
        both = [k for k in range(len(tunnels)) if (k, 0) in open_ and (k, 1) in open_]
        forced = forced_distant_closings(gadget, from_states={s})
        for i, a in enumerate(both):
            for b in both[i + 1 :]:
                if not any({d[0], c[0]} == {a, b} for _, d, c in forced):
                    return s, tunnels, a, b
    raise WrongGadgetClass(
        f"{gadget.name!r} has no final true 2-tunnel state with two open tunnels and no forced closing"
    )
