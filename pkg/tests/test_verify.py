from __future__ import annotations

import pytest

from gadgetlab.catalog import one_toggle
from gadgetlab.core import Instance, System
from gadgetlab.errors import UnknownReduction
from gadgetlab.reduce import CnfFormula
from gadgetlab.verify import (
    ReductionSpec,
    SystemSource,
    VerifyReport,
    drop_instance,
    get_reduction,
    reduction_names,
    run_verify,
    shrink,
)


def test_unknown_reduction():
    with pytest.raises(UnknownReduction):
        run_verify("nope")


@pytest.mark.parametrize("name", ["3sat", "stcon", "hampath-dir", "shadow", "verified", "reach2reconfig"])
def test_small_sweeps_agree(name):
    report = run_verify(name, samples=15, seed=2)
    assert report.tried == 15
    assert report.agreements + len(report.disagreements) + report.exhaustions == report.tried
    assert report.ok


def test_reports_are_reproducible():
    a = run_verify("hampath-spiral", samples=10, seed=5).to_dict()
    b = run_verify("hampath-spiral", samples=10, seed=5).to_dict()
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b


def test_workers_merge_in_index_order():
    a = run_verify("stcon", size=3, exhaustive=True).to_dict()
    b = run_verify("stcon", size=3, exhaustive=True, workers=2).to_dict()
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b


def test_report_invariant():
    with pytest.raises(ValueError):
        VerifyReport("x", 0, "sampled", tried=3, agreements=1)


def test_shrink_finds_minimal_failure():
    # A deliberately wrong "reduction": claims every formula with a clause on
    # variable 2 is unsatisfiable.
    def decide(cnf, max_nodes):
        return "yes" if cnf.satisfiable() else "no"

    base = get_reduction("3sat")
    broken = ReductionSpec("broken", "", base.sample, base.compile, decide, base.shrink)

    def lying_check(src):
        return any(abs(l) == 2 for c in src.clauses for l in c)

    import gadgetlab.verify as v

    original = v._disagrees
    v._disagrees = lambda spec, src, max_nodes: lying_check(src)
    try:
        cnf = CnfFormula(3, [(1, 1, 1), (2, 3, 3), (3, 3, 3)])
        small = shrink(broken, cnf, 1000)
    finally:
        v._disagrees = original
    assert small.clauses == ((2, 3, 3),)


def test_drop_instance_renumbers():
    g = one_toggle()
    system = System((Instance(g, "A"), Instance(g, "B")), (((0, "a"), (1, "a")), ((0, "b"),), ((1, "b"),)), 0, 2)
    smaller = drop_instance(system, 0)
    assert len(smaller.instances) == 1
    assert smaller.components == (((0, "a"),), (), ((0, "b"),))
    assert SystemSource(smaller, None).system is smaller


def test_registry_names():
    names = reduction_names()
    for required in ("3sat", "stcon", "hampath-dir", "hampath-spiral", "reach2reconfig", "shadow", "verified"):
        assert required in names


def test_shadow_two_hundred_seeds():
    report = run_verify("shadow", size=4, samples=200, seed=0)
    assert report.tried == 200 and report.ok and report.exhaustions == 0
