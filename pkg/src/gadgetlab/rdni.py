"""The 12-state reversible deterministic gadget with non-interacting tunnels.

Its transition table and the multi-agent 1-toggle network built from it exist
only as drawings, so both are left untranscribed.  Everything that depends on
them (the catalog entry, its guard test and the multi-agent acceptance check)
stays disabled while these are ``None``.

``RDNI_TRANSITIONS`` is a list of ``(state, from, to, state)`` over states
``1..12`` and locations ``a1, a2, b1, b2``.  ``MULTI_AGENT_TOGGLE_NETWORK`` is a
network document as read by :func:`gadgetlab.netsim.network_from_dict` whose
gadgets are ``rdni`` instances.
"""

from __future__ import annotations

from .core import Gadget, make_gadget

RDNI_TRANSITIONS: list | None = None
RDNI_CANONICAL = None
MULTI_AGENT_TOGGLE_NETWORK: dict | None = None
PROVENANCE = "12-state reversible deterministic 2-tunnel gadget, non-interacting tunnels"


def rdni() -> Gadget:
    if RDNI_TRANSITIONS is None:
        raise LookupError("the RDNI transition table has not been transcribed")
    return make_gadget(list(range(1, 13)), ["a1", "a2", "b1", "b2"], RDNI_TRANSITIONS, name="rdni")
