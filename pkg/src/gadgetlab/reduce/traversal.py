"""Compilers from source problems to universal traversal."""

from __future__ import annotations

from ..core import Gadget, SystemBuilder
from ..errors import WrongGadgetClass
from ..solve import Objective
from .output import ReductionOutput
from .parts import (
    Crossing,
    closing_vertex_parts,
    directed_one_state_tunnel,
    directed_vertex_parts,
    ends,
    one_state_orientation,
    single_use,
    single_use_directed_chain,
    spiral_parts,
)
from .sources import CnfFormula, DigraphInstance, check_cubic_degrees, check_directed_degrees


def _place(b: SystemBuilder, gadget: Gadget, state, entry, exit, u: int, v: int) -> int:
    """Add a copy whose ``entry``/``exit`` locations sit on nodes ``u``/``v``; the rest stay private."""
    i = b.add(gadget, state)
    b.attach(i, entry, u)
    b.attach(i, exit, v)
    return i


def reduce_stcon_to_traversal(graph: DigraphInstance, gadget: Gadget) -> ReductionOutput:
    """Add arcs ``t -> v`` and ``v -> s`` for every vertex, then one directed tunnel per arc."""
    s0, tunnels, k = directed_one_state_tunnel(gadget)
    entry, exit = one_state_orientation(gadget, tunnels, k)
    arcs = list(dict.fromkeys(graph.arcs))
    for v in range(graph.vertex_count):
        if v != graph.t:
            arcs.append((graph.t, v))
        if v != graph.s:
            arcs.append((v, graph.s))
    arcs = list(dict.fromkeys(arcs))
    b = SystemBuilder()
    nodes = [b.node(("v", v)) for v in range(graph.vertex_count)]
    corr = {}
    for u, v in arcs:
        corr[f"arc {u}->{v}"] = [_place(b, gadget, s0, entry, exit, nodes[u], nodes[v])]
    system, _ = b.build(nodes[graph.s], None, {"reduction": "stcon"})
    return ReductionOutput(
        system, Objective.traverse(), corr, "every gadget traversable iff s reaches t", {"reduction": "stcon"}
    )


def _clause_bundle(b: SystemBuilder, gadget: Gadget, state, tunnels, d: int) -> tuple[list, list]:
    """Six copies wired into three one-way passages; returns ``(instances, [(entry, exit)] * 3)``.

    Copy ``c`` puts its directed tunnel first (``c`` even) or last (``c`` odd) on
    passage ``c // 2`` and one other tunnel in the middle of each other passage.
    """
    others = [k for k in range(len(tunnels)) if k != d][:2]
    insts = [b.add(gadget, state) for _ in range(6)]
    sequence: list[list] = [[], [], []]  # per passage: (copy, tunnel)
    for p in range(3):
        sequence[p].append((2 * p, d))
        for c in range(6):
            if c // 2 != p:
                q = sorted(x for x in range(3) if x != c // 2)
                sequence[p].append((c, others[q.index(p)]))
        sequence[p].append((2 * p + 1, d))
    ports = []
    for p in range(3):
        here = b.node()
        first = here
        for c, k in sequence[p]:
            a, z = one_state_orientation(gadget, tunnels, k)
            nxt = b.node()
            b.attach(insts[c], a, here)
            b.attach(insts[c], z, nxt)
            here = nxt
        ports.append((first, here))
    return insts, ports


def reduce_3sat_to_traversal(cnf: CnfFormula, gadget: Gadget) -> ReductionOutput:
    """Variable chain with a positive and a negative branch per variable; each branch
    threads the clause passages of the literals it makes true."""
    state, tunnels, d = directed_one_state_tunnel(gadget, min_tunnels=3)
    b = SystemBuilder()
    branch = [b.node(("B", i)) for i in range(cnf.variable_count + 1)]
    corr = {}
    ports = []
    for ci, clause in enumerate(cnf.clauses):
        insts, p = _clause_bundle(b, gadget, state, tunnels, d)
        corr[f"clause {ci}"] = insts
        ports.append(p)
    for v in range(1, cnf.variable_count + 1):
        for sign in (1, -1):
            slots = [(ci, j) for ci, c in enumerate(cnf.clauses) for j, lit in enumerate(c) if lit == sign * v]
            if not slots:
                b.join(branch[v - 1], branch[v])
                continue
            here = branch[v - 1]
            for ci, j in slots:
                entry, exit = ports[ci][j]
                b.join(here, entry)
                here = exit
            b.join(here, branch[v])
    system, _ = b.build(branch[0], None, {"reduction": "3sat"})
    return ReductionOutput(
        system, Objective.traverse(), corr, "every gadget traversable iff the formula is satisfiable", {"reduction": "3sat"}
    )


def _chain(b: SystemBuilder, gadget: Gadget, parts: list[Crossing], u: int, v: int) -> list:
    out, here = [], u
    for n, c in enumerate(parts):
        nxt = v if n == len(parts) - 1 else b.node()
        out.append(_place(b, gadget, c.state, c.entry, c.exit, here, nxt))
        here = nxt
    return out


def _hampath_frame(graph: DigraphInstance):
    """Arcs actually used: drop arcs into ``s`` and out of ``t``."""
    return [(u, v) for u, v in graph.arcs if v != graph.s and u != graph.t]


def reduce_hampath_directed(graph: DigraphInstance, gadget: Gadget) -> ReductionOutput:
    """Each vertex: entry node, single-use directed path, exit node.  Out-degree two
    splits through one copy; in-degree two merges through one or two copies."""
    check_directed_degrees(graph)
    S, tunnels, (kd, dd), (ke, edirs) = directed_vertex_parts(gadget)
    d_in, d_out = ends(tunnels, kd, dd)
    e_in, e_out = ends(tunnels, ke, edirs[0])
    e_directed = len(edirs) == 1
    sudp = single_use_directed_chain(gadget)
    arcs = _hampath_frame(graph)
    b = SystemBuilder()
    P = [b.node(("P", v)) for v in range(graph.vertex_count)]
    Q = [b.node(("Q", v)) for v in range(graph.vertex_count)]
    arc_node = [b.node(("arc", k)) for k in range(len(arcs))]
    corr: dict = {}
    for v in range(graph.vertex_count):
        corr[f"vertex {v}"] = _chain(b, gadget, sudp, P[v], Q[v])
        outs = [k for k, (u, _) in enumerate(arcs) if u == v]
        ins = [k for k, (_, w) in enumerate(arcs) if w == v]
        if len(outs) == 1:
            b.join(Q[v], arc_node[outs[0]])
        elif len(outs) == 2:
            i = b.add(gadget, S)
            b.attach(i, d_in, Q[v])
            b.attach(i, d_out, arc_node[outs[0]])
            b.attach(i, e_in, Q[v])
            b.attach(i, e_out, arc_node[outs[1]])
            corr[f"vertex {v}"].append(i)
        if len(ins) == 1:
            b.join(arc_node[ins[0]], P[v])
        elif len(ins) == 2 and e_directed:
            i = b.add(gadget, S)
            b.attach(i, d_in, arc_node[ins[0]])
            b.attach(i, d_out, P[v])
            b.attach(i, e_in, arc_node[ins[1]])
            b.attach(i, e_out, P[v])
            corr[f"vertex {v}"].append(i)
        elif len(ins) == 2:
            A, B = b.add(gadget, S), b.add(gadget, S)
            m1, m2 = b.node(), b.node()
            b.attach(A, d_in, arc_node[ins[0]])
            b.attach(A, d_out, m1)
            b.attach(B, e_in, m1)
            b.attach(B, e_out, P[v])
            b.attach(B, d_in, arc_node[ins[1]])
            b.attach(B, d_out, m2)
            b.attach(A, e_in, m2)
            b.attach(A, e_out, P[v])
            corr[f"vertex {v}"] += [A, B]
    system, _ = b.build(P[graph.s], None, {"reduction": "hampath-dir"})
    return ReductionOutput(
        system,
        Objective.traverse(),
        corr,
        "every gadget traversable iff a Hamiltonian s-t path exists",
        {"reduction": "hampath-dir"},
    )


def reduce_hampath_undir_close(graph: DigraphInstance, gadget: Gadget) -> ReductionOutput:
    """Like the directed version, but vertex paths are undirected single-use paths and
    merges rely on a crossing of ``a`` closing the way back across ``b``."""
    check_directed_degrees(graph)
    S, tunnels, (ka, da), (kb, db) = closing_vertex_parts(gadget)
    a_in, a_out = ends(tunnels, ka, da)
    b_in, b_out = ends(tunnels, kb, db)
    su = single_use(gadget, False)
    if su is None:
        raise WrongGadgetClass(f"{gadget.name!r} has no single-use tunnel")
    arcs = _hampath_frame(graph)
    b = SystemBuilder()
    P = [b.node(("P", v)) for v in range(graph.vertex_count)]
    Q = [b.node(("Q", v)) for v in range(graph.vertex_count)]
    arc_node = [b.node(("arc", k)) for k in range(len(arcs))]
    corr: dict = {}
    for v in range(graph.vertex_count):
        corr[f"vertex {v}"] = _chain(b, gadget, [su], P[v], Q[v])
        outs = [k for k, (u, _) in enumerate(arcs) if u == v]
        ins = [k for k, (_, w) in enumerate(arcs) if w == v]
        if len(outs) == 1:
            b.join(Q[v], arc_node[outs[0]])
        elif len(outs) == 2:
            i = b.add(gadget, S)
            b.attach(i, a_in, Q[v])
            b.attach(i, a_out, arc_node[outs[0]])
            b.attach(i, b_in, Q[v])
            b.attach(i, b_out, arc_node[outs[1]])
            corr[f"vertex {v}"].append(i)
        if len(ins) == 1:
            b.join(arc_node[ins[0]], P[v])
        elif len(ins) == 2:
            A, B = b.add(gadget, S), b.add(gadget, S)
            m1, m2 = b.node(), b.node()
            b.attach(A, a_in, arc_node[ins[0]])
            b.attach(A, a_out, m1)
            b.attach(B, b_in, m1)
            b.attach(B, b_out, P[v])
            b.attach(B, a_in, arc_node[ins[1]])
            b.attach(B, a_out, m2)
            b.attach(A, b_in, m2)
            b.attach(A, b_out, P[v])
            corr[f"vertex {v}"] += [A, B]
    system, _ = b.build(P[graph.s], None, {"reduction": "hampath-undir-close"})
    return ReductionOutput(
        system,
        Objective.traverse(),
        corr,
        "every gadget traversable iff a Hamiltonian s-t path exists",
        {"reduction": "hampath-undir-close"},
    )


# Slot layout of the nine-copy vertex gadget.  Line ``x`` runs from port ``x`` to the
# centre through six tunnels; entry ``(d, i)`` is copy ``i`` of the three copies shared
# with line ``(x + d) % 3``.  The layout is rotation-symmetric and was chosen so that
# the vertex can be passed through at most once, and all nine copies cannot be used
# without passing through.
SPIRAL_SLOTS = ((1, 0), (1, 1), (2, 1), (1, 2), (2, 2), (2, 0))


def spiral_vertex(b: SystemBuilder, gadget: Gadget, state, a: int, bt: int, tunnels) -> tuple[list, list]:
    """Add one nine-copy vertex gadget; returns ``(instances, port_nodes)``."""
    copies = {}
    for x in range(3):
        for i in range(3):
            copies[(x, (x + 1) % 3, i)] = b.add(gadget, state)
    centre = b.node()
    ports = [b.node() for _ in range(3)]
    for x in range(3):
        here = ports[x]
        for j, (d, i) in enumerate(SPIRAL_SLOTS):
            y = (x + d) % 3
            key = (x, y, i) if (x, y, i) in copies else (y, x, i)
            k = a if key[0] == x else bt
            nxt = centre if j == len(SPIRAL_SLOTS) - 1 else b.node()
            p, q = tunnels.pairs[k]
            b.attach(copies[key], p, here)
            b.attach(copies[key], q, nxt)
            here = nxt
    return [copies[k] for k in sorted(copies)], ports


def reduce_hampath_spiral(graph: DigraphInstance, gadget: Gadget) -> ReductionOutput:
    """Undirected cubic graph with degree-one ``s`` and ``t``: a nine-copy vertex
    gadget per interior vertex and a single-use path in front of ``t``."""
    check_cubic_degrees(graph)
    S, tunnels, a, bt = spiral_parts(gadget)
    su = single_use(gadget, False)
    if su is None:
        raise WrongGadgetClass(f"{gadget.name!r} has no single-use tunnel")
    b = SystemBuilder()
    corr: dict = {}
    ports: dict = {}
    for v in range(graph.vertex_count):
        if v in (graph.s, graph.t):
            continue
        insts, vp = spiral_vertex(b, gadget, S, a, bt, tunnels)
        corr[f"vertex {v}"] = insts
        ports[v] = list(vp)
    start = None
    t_node = b.node(("t",))
    for u, v in graph.arcs:
        e = b.node()
        for w in (u, v):
            if w == graph.s:
                start = e
            elif w == graph.t:
                corr["t"] = [_place(b, gadget, su.state, su.entry, su.exit, e, t_node)]
            else:
                b.join(e, ports[w].pop(0))
    system, _ = b.build(start, None, {"reduction": "hampath-spiral"})
    return ReductionOutput(
        system,
        Objective.traverse(),
        corr,
        "every gadget traversable iff a Hamiltonian s-t path exists",
        {"reduction": "hampath-spiral"},
    )
