from __future__ import annotations

import pytest

from gadgetlab import rdni
from gadgetlab.catalog import (
    catalog_get,
    catalog_list,
    labeled_ttsu,
    one_state_gadget,
    one_toggle,
    self_check,
    visiting_harder,
)
from gadgetlab.classify import has_interacting_tunnels, is_dag
from gadgetlab.core import tunnel_decomposition
from gadgetlab.errors import EmptyGadget, UnknownGadget


def test_every_entry_passes_self_check():
    for entry in catalog_list():
        assert self_check(entry) == {}, entry.key


def test_one_toggle_shape():
    g = one_toggle()
    assert len(g.states) == 2 and len(g.locations) == 2
    assert g.transitions == (("A", "a", "b", "B"), ("B", "b", "a", "A"))


def test_labeled_ttsu_shape():
    g = labeled_ttsu()
    assert g.states == (1, 2, 3)
    assert len(g.by_state[1]) == 4
    assert g.by_state[2] == () and g.by_state[3] == ()
    tunnels = tunnel_decomposition(g)
    for s, a, b, s2 in g.transitions:
        assert s2 == 2 + tunnels.tunnel_of[a]


def test_visiting_harder_shape():
    g = visiting_harder()
    assert is_dag(g)
    assert not has_interacting_tunnels(g)


def test_one_state_gadget_shapes():
    assert len(one_state_gadget(0, 1).transitions) == 2
    assert len(one_state_gadget(3, 0).transitions) == 3
    g = one_state_gadget(1, 2)
    assert len(tunnel_decomposition(g)) == 3
    assert len(g.transitions) == 5
    with pytest.raises(EmptyGadget):
        one_state_gadget(0, 0)


def test_catalog_get_unknown():
    with pytest.raises(UnknownGadget):
        catalog_get("door")


@pytest.mark.skipif(rdni.RDNI_TRANSITIONS is None, reason="RDNI transition table not transcribed")
def test_rdni_guard():
    from gadgetlab.classify import is_deterministic, is_reversible

    g = catalog_get("rdni").gadget
    assert len(g.states) == 12
    assert len(tunnel_decomposition(g)) == 2
    assert is_reversible(g) and is_deterministic(g)
    assert not has_interacting_tunnels(g)
