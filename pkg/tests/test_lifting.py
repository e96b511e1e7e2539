import json

import pytest

from complicial import lifting, nerves, tdelta, twocat
from complicial.lifting import (AnodyneExtension, LiftingProblem,
                                anodyne_library, check_extension,
                                check_extension_generic, find_lift,
                                is_precomplicial)
from complicial.tdelta import BudgetExceeded, TruncatedTDeltaSet, inclusion_map


@pytest.fixture(scope="module")
def catalog():
    return twocat.standard_examples()


def test_library_counts():
    lib = anodyne_library(2, 5)
    families = {}
    for e in lib:
        families[e.family] = families.get(e.family, 0) + 1
    # horns: sum of m+1 for m in 1..5; thinness: m+1 for m in 2..5;
    # triviality: l in 3..5; saturation: l in -1..1
    assert families == {"horn": sum(m + 1 for m in range(1, 6)),
                        "thinness": sum(m + 1 for m in range(2, 6)),
                        "triviality": 3, "saturation": 3}
    assert len(lib) == 44


def test_library_at_other_triviality_index():
    lib0 = anodyne_library(0, 4)
    trivs = [dict(e.params)["l"] for e in lib0 if e.family == "triviality"]
    assert trivs == [1, 2, 3, 4]


def test_horn12_codomain_is_marked_simplex():
    lib = anodyne_library(2, 2)
    e = next(x for x in lib
             if x.family == "horn" and dict(x.params) == {"k": 1, "m": 2})
    assert e.B.same_as(tdelta.delta_t(2))


def test_non_horn_extensions_identity_on_underlying():
    for e in anodyne_library(2, 5):
        assert e.inclusion.is_mono()
        if e.family == "horn":
            continue
        for m in range(e.A.dim + 1):
            assert e.A.simplex_ids(m) == e.B.simplex_ids(m)


def test_find_lift_trivial_inclusion(catalog):
    X = nerves.rs_nerve(catalog["chain-1"], 3)
    A = tdelta.delta(1)
    ext = AnodyneExtension("horn-noop", (), A, A)
    f = tdelta.maps(A, X)[0]
    lift = find_lift(LiftingProblem(ext, f))
    assert lift.equals(f)


def test_horn_lift_in_natural_nerve_is_composite(catalog):
    C = catalog["oriental-2"]
    X = nerves.natural_nerve(C, 3)
    lib = anodyne_library(2, 2)
    ext = next(x for x in lib
               if x.family == "horn" and dict(x.params) == {"k": 1, "m": 2})
    # the horn picking the two generating edges of the oriental
    picked = None
    for f in tdelta.iter_maps(ext.A, X):
        if f.apply_simplex(1, "01") == "f01" and \
                f.apply_simplex(1, "12") == "f12":
            picked = f
            break
    lift = find_lift(LiftingProblem(ext, picked))
    assert lift is not None and lift.is_valid()
    assert lift.compose(inclusion_map(ext.A, ext.B)).equals(picked)
    _, info = nerves.nerve_with_info(C, 3, "natural")
    filler = lift.apply_simplex(2, "012")
    u, v, alpha = info.two_data[filler]
    assert (u, v) == ("f01", "f12")
    assert C.two_cells[alpha].tgt == C.comp("f12", "f01")


def test_saturation_failure_witness_matches_displayed_simplex(catalog):
    C = catalog["iso"]
    X = nerves.rs_nerve(C, 5)
    ext = next(e for e in anodyne_library(2, 5)
               if e.family == "saturation" and dict(e.params)["l"] == -1)
    res = check_extension(X, ext)
    assert not res.passed
    w = res.witness
    e01 = w.apply_simplex(1, "01")
    e12 = w.apply_simplex(1, "12")
    e23 = w.apply_simplex(1, "23")
    e03 = w.apply_simplex(1, "03")
    # the displayed simplex: f, f^-1, f, f with identity diagonals
    assert e01 == e23 == e03
    assert not C.one_cells[e01].identity
    assert C.comp(e12, e01) == C.identity_of(C.one_cells[e01].src)
    assert C.comp(e01, e12) == C.identity_of(C.one_cells[e01].tgt)
    assert C.one_cells[w.apply_simplex(1, "02")].identity
    assert C.one_cells[w.apply_simplex(1, "13")].identity
    _, info = nerves.nerve_with_info(C, 5, "rs")
    for tri in ("012", "013", "023", "123"):
        assert C.two_cells[info.witness(w.apply_simplex(2, tri))].identity


def test_sigma_iso_fails_degenerate_join_saturation(catalog):
    X = nerves.rs_nerve(catalog["sigma-iso"], 5)
    report = is_precomplicial(X, 2, 5)
    failed = {r.extension.label() for r in report.failures()}
    assert "saturation(l=0)" in failed
    assert "saturation(l=-1)" not in failed
    assert all(lab.startswith("saturation") for lab in failed)


def test_witness_replays(catalog):
    """A reported witness re-fails in isolation through the generic search."""
    X = nerves.rs_nerve(catalog["iso"], 4)
    ext = next(e for e in anodyne_library(2, 4)
               if e.family == "saturation" and dict(e.params)["l"] == -1)
    res = check_extension(X, ext)
    assert res.witness.is_valid()
    assert find_lift(LiftingProblem(ext, res.witness)) is None


def test_specialized_agrees_with_generic(catalog):
    X = nerves.natural_nerve(catalog["z2"], 4)
    for ext in anodyne_library(2, 4):
        a = check_extension(X, ext)
        b = check_extension_generic(X, ext)
        assert a.passed == b.passed, ext.label()


def test_absence_stable_under_search_order(catalog):
    X = nerves.rs_nerve(catalog["iso"], 4)
    ext = next(e for e in anodyne_library(2, 4)
               if e.family == "saturation" and dict(e.params)["l"] == -1)
    forward = check_extension(X, ext)
    backward = check_extension(X, ext, reverse=True)
    assert not forward.passed and not backward.passed
    problem = LiftingProblem(ext, forward.witness)
    assert find_lift(problem) is None
    assert find_lift(problem, reverse=True) is None


def test_lift_soundness(catalog):
    X = nerves.natural_nerve(catalog["chain-2"], 3)
    for ext in anodyne_library(2, 3):
        incl = ext.inclusion
        for f in tdelta.iter_maps(ext.A, X):
            lift = find_lift(LiftingProblem(ext, f))
            assert lift is not None
            assert lift.compose(incl).equals(f)


def test_budget_exhaustion_is_distinct(catalog):
    X = nerves.natural_nerve(catalog["oriental-2"], 4)
    ext = anodyne_library(2, 4)[0]
    with pytest.raises(BudgetExceeded):
        check_extension(X, ext, budget=2)


def _relabel(X, prefix):
    doc = X.to_json_dict()
    ren = lambda s: f"{prefix}{s}"
    doc["simplices"] = [[ren(s) for s in lvl] for lvl in doc["simplices"]]
    doc["faces"] = [[m, i, ren(s), ren(y)] for m, i, s, y in doc["faces"]]
    doc["degeneracies"] = [[m, i, ren(s), ren(y)]
                           for m, i, s, y in doc["degeneracies"]]
    doc["tokens"] = [[{"id": ren(d["id"]), "under": ren(d["under"])}
                      for d in lvl] for lvl in doc["tokens"]]
    doc["zeta"] = [[m, i, ren(s), ren(t)] for m, i, s, t in doc["zeta"]]
    return TruncatedTDeltaSet.from_json_dict(doc, name=f"{prefix}{X.name}")


def test_report_invariant_under_relabeling(catalog):
    X = nerves.rs_nerve(catalog["sigma-iso"], 4)
    Y = _relabel(X, "zz.")
    assert tdelta.find_isomorphism(X, Y) is not None
    ra = is_precomplicial(X, 2, 4)
    rb = is_precomplicial(Y, 2, 4)
    assert [(r.extension.label(), r.passed, r.maps_checked)
            for r in ra.results] == \
        [(r.extension.label(), r.passed, r.maps_checked) for r in rb.results]


def test_positive_fibrancy_small(catalog):
    X = nerves.natural_nerve(catalog["chain-1"], 4)
    report = is_precomplicial(X, 2, 4)
    assert report.passed
    doc = report.to_json_dict()
    assert doc["passed"] and set(doc["classes"]) == \
        {"horn", "thinness", "triviality", "saturation"}


def test_jobs_parameter_deterministic(catalog):
    X = nerves.natural_nerve(catalog["sigma-iso"], 4)
    r1 = is_precomplicial(X, 2, 4, jobs=1)
    r2 = is_precomplicial(X, 2, 4, jobs=3)
    assert json.dumps(r1.to_json_dict(), sort_keys=True) == \
        json.dumps(r2.to_json_dict(), sort_keys=True)


def test_rs_fibrancy_criterion_both_readings(catalog):
    """The strict and weak readings of the criterion agree on the catalog,
    and both predict the lifting outcome of the identity-marked nerve."""
    for name in ["chain-0", "chain-1", "chain-2", "sigma-iso",
                 "sigma-parallel", "inv-oriental-2", "oriental-2", "iso",
                 "z2"]:
        C = catalog[name]
        pred = lifting.rs_fibrancy_prediction(C)
        assert pred["fibrant_by_strict_reading"] == \
            pred["fibrant_by_weak_reading"], name
        X = nerves.rs_nerve(C, 5)
        actual = is_precomplicial(X, 2, 5).passed
        assert actual == pred["fibrant_by_strict_reading"], name
