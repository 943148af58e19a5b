"""JSON documents: ``gadget.json``, ``system.json``, ``network.json`` and LTS files.

gadget.json::

    {"name": "locking-2-toggle",
     "states": [1, 2, 3],
     "locations": ["L1", "L2", "R1", "R2"],
     "transitions": [[3, "L1", "L2", 1], ...]}

system.json::

    {"gadgets": {"l2t": {...gadget.json...} | "relative/path/gadget.json"},
     "instances": [{"gadget": "l2t", "state": 3}, ...],
     "components": [["0:L1", "1:R2"], [], ...],
     "start": 0 | "0:L1",
     "target": 2 | "1:R1"}

Components list every instance location exactly once; locations omitted from
``components`` get a private component appended at the end.  ``start`` and
``target`` are a component index or an ``"instance:location"`` reference.

network.json extends system.json with ``"boundary"`` and ``"helpers"`` (lists of
component references) and an optional ``"cap"``.

Canonical output uses sorted keys and sorted transition tuples, so
``dumps(loads(text))`` is byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import Gadget, Instance, System, id_key, make_gadget
from .errors import InvalidSystem, IoFailure


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def gadget_to_dict(gadget: Gadget) -> dict:
    return {
        "name": gadget.name,
        "states": list(gadget.states),
        "locations": list(gadget.locations),
        "transitions": [list(t) for t in gadget.transitions],
    }


def gadget_from_dict(doc: dict) -> Gadget:
    try:
        return make_gadget(
            doc["states"], doc["locations"], doc.get("transitions", []), name=doc.get("name", "gadget")
        )
    except KeyError as exc:
        raise IoFailure(f"gadget document lacks {exc.args[0]!r}") from None


def dumps_gadget(gadget: Gadget) -> str:
    return _dumps(gadget_to_dict(gadget))


def loads_gadget(text: str) -> Gadget:
    return gadget_from_dict(json.loads(text))


def _loc_ref(i: int, loc) -> str:
    return f"{i}:{loc}"


def _parse_loc_ref(ref: str, instances) -> tuple:
    head, sep, tail = str(ref).partition(":")
    if not sep:
        raise InvalidSystem(f"bad location reference {ref!r}")
    try:
        i = int(head)
    except ValueError:
        raise InvalidSystem(f"bad location reference {ref!r}") from None
    if not 0 <= i < len(instances):
        raise InvalidSystem(f"location reference {ref!r} names a missing instance")
    for loc in instances[i].gadget.locations:
        if str(loc) == tail:
            return (i, loc)
    raise InvalidSystem(f"location reference {ref!r} names an unknown location")


def system_to_dict(system: System) -> dict:
    gadgets: dict = {}
    names: dict = {}
    for g in system.gadgets():
        name = g.name
        k = 2
        while name in gadgets:
            name = f"{g.name}#{k}"
            k += 1
        gadgets[name] = gadget_to_dict(g)
        names[g] = name
    doc = {
        "gadgets": gadgets,
        "instances": [{"gadget": names[inst.gadget], "state": inst.state} for inst in system.instances],
        "components": [[_loc_ref(i, loc) for i, loc in group] for group in system.components],
    }
    if system.start is not None:
        doc["start"] = system.start
    if system.target is not None:
        doc["target"] = system.target
    return doc


def _component_ref(ref, system_components, instances, comp_of) -> int:
    if isinstance(ref, int):
        if not 0 <= ref < len(system_components):
            raise InvalidSystem(f"component {ref} does not exist")
        return ref
    return comp_of[_parse_loc_ref(ref, instances)]


def system_from_dict(doc: dict, base: Path | None = None) -> System:
    gadgets = {}
    for name, spec in doc.get("gadgets", {}).items():
        if isinstance(spec, str):
            path = Path(spec) if base is None else base / spec
            gadgets[name] = load_gadget(path)
        else:
            gadgets[name] = gadget_from_dict(spec)
    instances = []
    for entry in doc.get("instances", []):
        if entry["gadget"] not in gadgets:
            raise InvalidSystem(f"instance refers to undefined gadget {entry['gadget']!r}")
        instances.append(Instance(gadgets[entry["gadget"]], entry["state"]))
    # JSON turns int states into ints already; string states stay strings.
    for i, inst in enumerate(instances):
        if inst.state not in inst.gadget.state_index:
            match = [s for s in inst.gadget.states if str(s) == str(inst.state)]
            if not match:
                raise InvalidSystem(f"instance {i} starts in unknown state {inst.state!r}")
            instances[i] = Instance(inst.gadget, match[0])
    groups = [[_parse_loc_ref(r, instances) for r in group] for group in doc.get("components", [])]
    covered = {il for g in groups for il in g}
    for i, inst in enumerate(instances):
        for loc in inst.gadget.locations:
            if (i, loc) not in covered:
                groups.append([(i, loc)])
    components = tuple(tuple(g) for g in groups)
    comp_of = {il: ci for ci, g in enumerate(components) for il in g}
    start = doc.get("start")
    target = doc.get("target")
    return System(
        tuple(instances),
        components,
        None if start is None else _component_ref(start, components, instances, comp_of),
        None if target is None else _component_ref(target, components, instances, comp_of),
    )


def component_refs(doc: dict, key: str, system: System) -> list:
    return [
        _component_ref(r, system.components, system.instances, system.component_of)
        for r in doc.get(key, [])
    ]


def dumps_system(system: System) -> str:
    return _dumps(system_to_dict(system))


def loads_system(text: str, base: Path | None = None) -> System:
    return system_from_dict(json.loads(text), base)


def canonicalize(text: str) -> str:
    """Re-emit a gadget or system document in canonical form."""
    doc = json.loads(text)
    if "instances" in doc:
        return dumps_system(system_from_dict(doc))
    return dumps_gadget(gadget_from_dict(doc))


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def load_gadget(path) -> Gadget:
    return loads_gadget(_read(path))


def save_gadget(gadget: Gadget, path) -> None:
    _write(path, dumps_gadget(gadget))


def load_system(path) -> System:
    return loads_system(_read(path), Path(path).parent)


def save_system(system: System, path) -> None:
    _write(path, dumps_system(system))


def load_json(path):
    return json.loads(_read(path))


def write_json(path, doc) -> None:
    _write(path, _dumps(doc))


def sort_ids(values) -> list:
    return sorted(values, key=id_key)
