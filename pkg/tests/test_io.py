from __future__ import annotations

import json

import pytest

from gadgetlab import io
from gadgetlab.catalog import catalog_list, locking_2_toggle, one_toggle
from gadgetlab.core import Instance, System
from gadgetlab.errors import InvalidSystem, IoFailure


def test_gadget_round_trip_all_catalog():
    for entry in catalog_list():
        text = io.dumps_gadget(entry.gadget)
        back = io.loads_gadget(text)
        assert back == entry.gadget
        assert io.dumps_gadget(back) == text


def test_canonicalize_is_byte_stable():
    doc = {"transitions": [[1, "L2", "L1", 3], [3, "L1", "L2", 1]], "states": [1, 2, 3],
           "locations": ["L1", "L2"], "name": "x"}
    once = io.canonicalize(json.dumps(doc))
    assert io.canonicalize(once) == once


def test_system_round_trip(tmp_path):
    g = locking_2_toggle()
    system = System((Instance(g, 3), Instance(g, 1)), (((0, "L1"), (1, "L2")), ((0, "L2"),), ((0, "R1"), (0, "R2")),
                                                       ((1, "L1"), (1, "R1"), (1, "R2"))), 0, 3)
    path = tmp_path / "system.json"
    io.save_system(system, path)
    back = io.load_system(path)
    assert back == system
    assert io.dumps_system(back) == path.read_text()


def test_system_location_refs_and_file_gadgets(tmp_path):
    io.save_gadget(one_toggle(), tmp_path / "tog.json")
    doc = {"gadgets": {"t": "tog.json"}, "instances": [{"gadget": "t", "state": "A"}],
           "components": [["0:a"]], "start": "0:a", "target": "0:b"}
    (tmp_path / "s.json").write_text(json.dumps(doc))
    system = io.load_system(tmp_path / "s.json")
    assert system.start == 0
    assert system.target == 1  # the omitted location got its own component


def test_bad_documents():
    with pytest.raises(InvalidSystem):
        io.system_from_dict({"gadgets": {}, "instances": [{"gadget": "nope", "state": 1}]})
    with pytest.raises(IoFailure):
        io.gadget_from_dict({"states": [1]})
    with pytest.raises(IoFailure):
        io.load_gadget("/nonexistent/gadget.json")
