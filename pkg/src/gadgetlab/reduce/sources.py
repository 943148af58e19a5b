"""Source problem instances (CNF formulas, digraphs) with brute-force deciders."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

from ..errors import BadDegreeSequence, IoFailure


@dataclass(frozen=True)
class CnfFormula:
    variable_count: int
    clauses: tuple  # tuple of 3-tuples of nonzero ints

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for c in self.clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c!r} does not have exactly 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise ValueError(f"literal {lit} out of range")

    def satisfiable(self) -> bool:
        for bits in product((False, True), repeat=self.variable_count):
            if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses):
                return True
        return False

    def to_dict(self) -> dict:
        return {"variables": self.variable_count, "clauses": [list(c) for c in self.clauses]}


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; every clause must have exactly three literals."""
    n_vars = None
    lits: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise IoFailure(f"bad problem line {line!r}")
            n_vars = int(parts[2])
            continue
        lits += [int(x) for x in line.split()]
    if n_vars is None:
        raise IoFailure("missing 'p cnf' line")
    clauses, cur = [], []
    for x in lits:
        if x == 0:
            if cur:
                clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    if cur:
        clauses.append(tuple(cur))
    try:
        return CnfFormula(n_vars, tuple(clauses))
    except ValueError as exc:
        raise IoFailure(str(exc)) from None


def dumps_dimacs(cnf: CnfFormula) -> str:
    lines = [f"p cnf {cnf.variable_count} {len(cnf.clauses)}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DigraphInstance:
    """Vertices ``0..n-1``; ``arcs`` are ``(u, v)`` pairs (edges when undirected)."""

    vertex_count: int
    arcs: tuple
    s: int
    t: int
    directed: bool = True
    tag: str = ""
    extra: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(tuple(a) for a in self.arcs))
        for u, v in self.arcs:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"arc {(u, v)} out of range")
        for x in (self.s, self.t):
            if not 0 <= x < self.vertex_count:
                raise ValueError(f"endpoint {x} out of range")

    def degrees(self) -> tuple[list, list]:
        indeg = [0] * self.vertex_count
        outdeg = [0] * self.vertex_count
        for u, v in self.arcs:
            outdeg[u] += 1
            indeg[v] += 1
        return indeg, outdeg

    def has_st_path(self) -> bool:
        seen, stack = {self.s}, [self.s]
        while stack:
            u = stack.pop()
            for a, b in self.arcs:
                for x, y in ((a, b),) if self.directed else ((a, b), (b, a)):
                    if x == u and y not in seen:
                        seen.add(y)
                        stack.append(y)
        return self.t in seen

    def has_hamiltonian_path(self) -> bool:
        n = self.vertex_count
        adj = set(self.arcs)
        if not self.directed:
            adj |= {(v, u) for u, v in self.arcs}
        if n == 1:
            return self.s == self.t
        if self.s == self.t:
            return False
        middle = [v for v in range(n) if v not in (self.s, self.t)]
        for perm in permutations(middle):
            seq = (self.s, *perm, self.t)
            if all((a, b) in adj for a, b in zip(seq, seq[1:])):
                return True
        return False

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "arcs": [list(a) for a in self.arcs],
            "s": self.s,
            "t": self.t,
            "directed": self.directed,
        }


def parse_edge_list(text: str, directed: bool = True) -> DigraphInstance:
    """Edge-list text: ``n N``, ``s X``, ``t Y`` header lines, then ``u v`` per line.

    Lines starting with ``#`` are comments.
    """
    n = s = t = None
    arcs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] in ("n", "s", "t") and len(parts) == 2:
            val = int(parts[1])
            if parts[0] == "n":
                n = val
            elif parts[0] == "s":
                s = val
            else:
                t = val
            continue
        if len(parts) != 2:
            raise IoFailure(f"bad edge line {raw!r}")
        arcs.append((int(parts[0]), int(parts[1])))
    if n is None:
        n = 1 + max([x for a in arcs for x in a] + [s or 0, t or 0])
    if s is None or t is None:
        raise IoFailure("edge list needs 's' and 't' lines")
    try:
        return DigraphInstance(n, tuple(arcs), s, t, directed)
    except ValueError as exc:
        raise IoFailure(str(exc)) from None


def dumps_edge_list(g: DigraphInstance) -> str:
    lines = [f"n {g.vertex_count}", f"s {g.s}", f"t {g.t}"]
    lines += [f"{u} {v}" for u, v in g.arcs]
    return "\n".join(lines) + "\n"


def check_directed_degrees(g: DigraphInstance) -> None:
    """Interior vertices have (in, out) in {(1,2),(2,1)}; s has no in-arcs needed,
    t no out-arcs needed, and each has total degree at most 3; no self-loops."""
    indeg, outdeg = g.degrees()
    for u, v in g.arcs:
        if u == v:
            raise BadDegreeSequence(f"self-loop at vertex {u}")
    if g.s == g.t:
        raise BadDegreeSequence("s and t must differ")
    for v in range(g.vertex_count):
        if v in (g.s, g.t):
            if indeg[v] + outdeg[v] > 3:
                raise BadDegreeSequence(f"endpoint {v} has degree above 3")
            continue
        if (indeg[v], outdeg[v]) not in ((1, 2), (2, 1)):
            raise BadDegreeSequence(f"vertex {v} has in/out degree {(indeg[v], outdeg[v])}")


def check_cubic_degrees(g: DigraphInstance) -> None:
    """Undirected: interior vertices degree 3, s and t degree 1, no self-loops."""
    deg = [0] * g.vertex_count
    for u, v in g.arcs:
        if u == v:
            raise BadDegreeSequence(f"self-loop at vertex {u}")
        deg[u] += 1
        deg[v] += 1
    if g.s == g.t:
        raise BadDegreeSequence("s and t must differ")
    for v in range(g.vertex_count):
        want = 1 if v in (g.s, g.t) else 3
        if deg[v] != want:
            raise BadDegreeSequence(f"vertex {v} has degree {deg[v]}, expected {want}")
