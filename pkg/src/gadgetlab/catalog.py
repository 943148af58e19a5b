"""Built-in gadget definitions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Gadget, make_gadget
from .errors import EmptyGadget, UnknownGadget


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    gadget: Gadget
    provenance: str
    expected: dict = field(default_factory=dict)
    initial: object = None  # the state the gadget is normally used from


def one_toggle() -> Gadget:
    return make_gadget(["A", "B"], ["a", "b"], [("A", "a", "b", "B"), ("B", "b", "a", "A")], name="1-toggle")


def two_toggle() -> Gadget:
    return make_gadget(
        ["A", "B"],
        ["a1", "a2", "b1", "b2"],
        [
            ("A", "a1", "a2", "B"),
            ("A", "b1", "b2", "B"),
            ("B", "a2", "a1", "A"),
            ("B", "b2", "b1", "A"),
        ],
        name="2-toggle",
    )


def locking_2_toggle() -> Gadget:
    # State 3 is the unlocked top state; going down the left tunnel locks into
    # state 1, going down the right tunnel into state 2.
    return make_gadget(
        [1, 2, 3],
        ["L1", "L2", "R1", "R2"],
        [
            (3, "L1", "L2", 1),
            (1, "L2", "L1", 3),
            (3, "R1", "R2", 2),
            (2, "R2", "R1", 3),
        ],
        name="locking-2-toggle",
    )


def directed_single_use() -> Gadget:
    return make_gadget(["fresh", "used"], ["a", "b"], [("fresh", "a", "b", "used")], name="directed-single-use")


def undirected_single_use() -> Gadget:
    return make_gadget(
        ["fresh", "used"],
        ["a", "b"],
        [("fresh", "a", "b", "used"), ("fresh", "b", "a", "used")],
        name="undirected-single-use",
    )


def labeled_ttsu() -> Gadget:
    """Labeled two-tunnel single-use gadget: either crossing closes both tunnels."""
    return make_gadget(
        [1, 2, 3],
        ["a1", "a2", "b1", "b2"],
        [
            (1, "a1", "a2", 2),
            (1, "a2", "a1", 2),
            (1, "b1", "b2", 3),
            (1, "b2", "b1", 3),
        ],
        name="labeled-ttsu",
    )


def visiting_harder() -> Gadget:
    """Two directed single-use tunnels that do not affect each other."""
    return make_gadget(
        ["open", "a-used", "b-used", "closed"],
        ["a1", "a2", "b1", "b2"],
        [
            ("open", "a1", "a2", "a-used"),
            ("open", "b1", "b2", "b-used"),
            ("a-used", "b1", "b2", "closed"),
            ("b-used", "a1", "a2", "closed"),
        ],
        name="visiting-harder",
    )


def two_single_use() -> Gadget:
    """Two undirected single-use tunnels that do not affect each other."""
    return make_gadget(
        ["open", "a-used", "b-used", "closed"],
        ["a1", "a2", "b1", "b2"],
        [
            ("open", "a1", "a2", "a-used"),
            ("open", "a2", "a1", "a-used"),
            ("open", "b1", "b2", "b-used"),
            ("open", "b2", "b1", "b-used"),
            ("a-used", "b1", "b2", "closed"),
            ("a-used", "b2", "b1", "closed"),
            ("b-used", "a1", "a2", "closed"),
            ("b-used", "a2", "a1", "closed"),
        ],
        name="two-single-use",
    )


def distant_opener() -> Gadget:
    """Crossing tunnel ``a`` once opens tunnel ``b`` for one crossing."""
    return make_gadget(
        ["ready", "armed", "spent"],
        ["a1", "a2", "b1", "b2"],
        [("ready", "a1", "a2", "armed"), ("armed", "b1", "b2", "spent")],
        name="distant-opener",
    )


def not_true_2_tunnel() -> Gadget:
    """Two tunnels, but only tunnel ``a`` is ever traversable."""
    return make_gadget(
        [1, 2],
        ["a1", "a2", "b1", "b2"],
        [(1, "a1", "a2", 2), (1, "a2", "a1", 2)],
        name="not-true-2-tunnel",
    )


def one_state_gadget(directed: int, undirected: int) -> Gadget:
    """One-state gadget with ``directed`` one-way and ``undirected`` two-way tunnels.

    Tunnel ``k`` uses locations ``t{k}a`` and ``t{k}b``; directed tunnels come
    first and run from ``a`` to ``b``.
    """
    if directed < 0 or undirected < 0 or directed + undirected < 1:
        raise EmptyGadget("a one-state gadget needs at least one tunnel")
    locs, trans = [], []
    for k in range(directed + undirected):
        a, b = f"t{k}a", f"t{k}b"
        locs += [a, b]
        trans.append((0, a, b, 0))
        if k >= directed:
            trans.append((0, b, a, 0))
    return make_gadget([0], locs, trans, name=f"one-state-{directed}d{undirected}u")


def _entries() -> list[CatalogEntry]:
    from . import rdni

    out = [
        CatalogEntry(
            "1-toggle",
            one_toggle(),
            "2-state 1-tunnel reversible deterministic toggle",
            {"deterministic": True, "reversible": True, "dag": False, "true_2_tunnel": False},
            "A",
        ),
        CatalogEntry(
            "2-toggle",
            two_toggle(),
            "2-state 2-tunnel toggle; both tunnels flip together",
            {"deterministic": True, "reversible": True, "dag": False, "interacting_tunnels": True},
            "A",
        ),
        CatalogEntry(
            "locking-2-toggle",
            locking_2_toggle(),
            "locking 2-toggle, states 1,2,3 with 3 unlocked",
            {
                "deterministic": True,
                "reversible": True,
                "dag": False,
                "interacting_tunnels": True,
                "distant_opening": True,
                "monotone_opening": False,
                "monotone_closing": False,
            },
            3,
        ),
        CatalogEntry(
            "directed-single-use",
            directed_single_use(),
            "single-use directed path",
            {"dag": True, "reversible": False, "monotone_closing": True, "monotone_opening": False},
            "fresh",
        ),
        CatalogEntry(
            "undirected-single-use",
            undirected_single_use(),
            "single-use undirected path",
            {"dag": True, "reversible": False, "monotone_closing": True},
            "fresh",
        ),
        CatalogEntry(
            "labeled-ttsu",
            labeled_ttsu(),
            "labeled two-tunnel single-use gadget, terminal states 2 and 3",
            {"dag": True, "true_2_tunnel": True, "distant_opening": False, "interacting_tunnels": True},
            1,
        ),
        CatalogEntry(
            "visiting-harder",
            visiting_harder(),
            "DAG gadget with easy reachability and hard universal traversal",
            {
                "dag": True,
                "true_2_tunnel": True,
                "distant_opening": False,
                "interacting_tunnels": False,
                "deterministic": True,
            },
            "open",
        ),
        CatalogEntry(
            "two-single-use",
            two_single_use(),
            "DAG gadget with two independent undirected single-use tunnels",
            {"dag": True, "true_2_tunnel": True, "interacting_tunnels": False, "distant_opening": False},
            "open",
        ),
        CatalogEntry(
            "distant-opener",
            distant_opener(),
            "DAG gadget where one crossing opens the other tunnel",
            {"dag": True, "distant_opening": True, "true_2_tunnel": True},
            "ready",
        ),
        CatalogEntry(
            "not-true-2-tunnel",
            not_true_2_tunnel(),
            "2-tunnel DAG gadget that is not true 2-tunnel",
            {"dag": True, "true_2_tunnel": False},
            1,
        ),
        CatalogEntry(
            "one-state-0d1u",
            one_state_gadget(0, 1),
            "one-state undirected tunnel",
            {"dag": False, "monotone_opening": True, "monotone_closing": True, "distant_opening": False},
            0,
        ),
        CatalogEntry(
            "one-state-3d0u",
            one_state_gadget(3, 0),
            "one-state gadget with three directed tunnels (clause gadget)",
            {"monotone_opening": True, "monotone_closing": True, "interacting_tunnels": False},
            0,
        ),
        CatalogEntry(
            "one-state-1d2u",
            one_state_gadget(1, 2),
            "one-state 3-tunnel gadget with one directed tunnel",
            {"deterministic": True, "reversible": False},
            0,
        ),
    ]
    if rdni.RDNI_TRANSITIONS is not None:
        out.append(
            CatalogEntry(
                "rdni",
                rdni.rdni(),
                rdni.PROVENANCE,
                {"deterministic": True, "reversible": True, "interacting_tunnels": False, "dag": False},
                rdni.RDNI_CANONICAL,
            )
        )
    return out


def catalog_list() -> list[CatalogEntry]:
    return _entries()


def catalog_get(key: str) -> CatalogEntry:
    for entry in _entries():
        if entry.key == key:
            return entry
    raise UnknownGadget(f"no catalog gadget named {key!r}")


def catalog_names() -> list[str]:
    return [e.key for e in _entries()]


def self_check(entry: CatalogEntry) -> dict:
    """Run each expected classifier; return ``{name: (expected, actual)}`` for mismatches."""
    from .classify import PREDICATES

    bad = {}
    for name, want in entry.expected.items():
        got = bool(PREDICATES[name](entry.gadget))
        if got != want:
            bad[name] = (want, got)
    return bad
