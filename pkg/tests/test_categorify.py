import pytest

from complicial import categorify as cg
from complicial import nerves, tdelta, twocat
from complicial.categorify import (EvaluationRefused, Pasting, PastingFactor,
                                   TwoPolygraph, Word, categorify,
                                   counit_assignment, evaluate_free,
                                   evaluate_presentation, section_check)


@pytest.fixture(scope="module")
def catalog():
    return twocat.standard_examples()


def iso_two_categories(C, D):
    sizes = lambda E: (len(E.objects), len(E.one_cells), len(E.two_cells))
    if sizes(C) != sizes(D):
        return False
    for F in twocat.two_functors(C, D):
        ob, o1, o2 = dict(F.on_objects), dict(F.on_one), dict(F.on_two)
        if len(set(ob.values())) == len(ob) and \
                len(set(o1.values())) == len(o1) and \
                len(set(o2.values())) == len(o2):
            return True
    return False


# -- the defining table on representables ---------------------------------------

def test_marked_edge_gives_free_adjoint_equivalence_presentation():
    P = categorify(tdelta.delta_t(1))
    assert P.zero_gens == ("0", "1")
    assert P.one_gens == {"E|01": ("0", "1"), "G|t|01": ("1", "0")}
    assert set(P.two_gens) == {"Eta|t|01", "EtaInv|t|01",
                               "Eps|t|01", "EpsInv|t|01"}
    f, g = ("E|01",), ("G|t|01",)
    assert P.two_gens["Eta|t|01"] == (Word("0", "0"), Word("0", "0", f + g))
    assert P.two_gens["Eps|t|01"] == (Word("1", "1", g + f), Word("1", "1"))
    assert len(P.relations) == 6
    # the two swap relations, verbatim
    we = Word("0", "1", f)
    f_eta = Pasting(we, (PastingFactor((), "Eta|t|01", f),))
    epsinv_f = Pasting(we, (PastingFactor(f, "EpsInv|t|01", ()),))
    assert tuple(sorted((f_eta, epsinv_f))) in P.relations
    gfg = Word("1", "1", g + f + g)
    g_eps = Pasting(gfg, (PastingFactor((), "Eps|t|01", g),))
    etainv_g = Pasting(gfg, (PastingFactor(g, "EtaInv|t|01", ()),))
    assert tuple(sorted((g_eps, etainv_g))) in P.relations


def test_boundary_of_triangle_is_free(catalog):
    P = categorify(tdelta.boundary(2, dim=2))
    assert P.counts() == {"zero": 3, "one": 3, "two": 0, "relations": 0}
    C = evaluate_free(P)
    assert C.validate() == []
    nonid = [c for c in C.one_cells.values() if not c.identity]
    assert len(nonid) == 4
    assert not any(not c.identity for c in C.two_cells.values())
    # the two parallel morphisms from 0 to 2 stay distinct
    assert len(C.hom("0", "2")) == 2


def test_marked_triangle_evaluates_to_inverted_oriental(catalog):
    P = categorify(tdelta.delta_t(2))
    C, words, cid = evaluate_presentation(P)
    assert C.validate() == []
    assert iso_two_categories(C, catalog["inv-oriental-2"])


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_simplices_evaluate_to_orientals(m):
    P = categorify(tdelta.delta(m, dim=m))
    C, _, _ = evaluate_presentation(P)
    assert C.validate() == []
    assert iso_two_categories(C, twocat.oriental2(m))


def test_marked_simplex_counts_match_for_m3():
    assert categorify(tdelta.delta_t(3)).counts() == \
        categorify(tdelta.delta(3, dim=3)).counts()


def test_degenerate_simplices_contribute_nothing(catalog):
    X = nerves.natural_nerve(catalog["sigma-iso"], 4)
    P = categorify(X)
    for g in P.one_gens:
        kind, rest = g.split("|", 1)
        if kind == "E":
            assert not X.is_degenerate(1, rest)
    for g in P.two_gens:
        kind, rest = g.split("|", 1)
        if kind == "A":
            assert not X.is_degenerate(2, rest)


def test_polygraphs_validate(catalog):
    for name in ("chain-1", "sigma-iso", "z2", "inv-oriental-2"):
        X = nerves.natural_nerve(catalog[name], 4)
        assert categorify(X).validate() == []


def test_evaluation_refusals():
    loop = TwoPolygraph(("x",), {"a": ("x", "x")}, {}, ())
    with pytest.raises(EvaluationRefused):
        evaluate_free(loop)
    with pytest.raises(EvaluationRefused):
        evaluate_presentation(categorify(tdelta.delta_t(1)))
    with_rel = categorify(tdelta.delta(3, dim=3))
    with pytest.raises(EvaluationRefused):
        evaluate_free(with_rel)


def test_empty_presentation_evaluates_to_empty():
    C = evaluate_free(TwoPolygraph((), {}, {}, ()))
    assert C.objects == () and not C.one_cells


def test_endo_two_generator_budget_refusal():
    P = TwoPolygraph(("x", "y"), {"a": ("x", "y")},
                     {"phi": (Word("x", "y", ("a",)), Word("x", "y", ("a",)))},
                     ())
    with pytest.raises(EvaluationRefused):
        evaluate_free(P, budget=50)


def test_counit_assignment_relations_hold(catalog):
    for name in ("chain-1", "sigma-iso", "z2", "inv-oriental-2", "iso"):
        assignment = counit_assignment(catalog[name], 4)
        assert assignment.polygraph.validate() == []


def test_counit_detects_broken_transcription(catalog):
    C = catalog["z2"]
    assignment = counit_assignment(C, 4)
    bad_two = dict(assignment.on_two)
    swapped = False
    for g, val in bad_two.items():
        if g.startswith("Eta|") and val == "sg":
            bad_two[g] = "u"
            swapped = True
            break
    assert swapped
    failures = []
    for p1, p2 in assignment.polygraph.relations:
        try:
            v1 = cg._eval_pasting(C, assignment.on_one, bad_two, p1)
            v2 = cg._eval_pasting(C, assignment.on_one, bad_two, p2)
            if v1 != v2:
                failures.append((p1, p2))
        except KeyError:
            failures.append((p1, p2))
    assert failures


def test_section_check_parallel_pair(catalog):
    C = catalog["sigma-parallel"]
    res = section_check(C, "x", "y", 4)
    assert res.ok
    assert section_check(C, "x", "x", 4).ok


def test_section_check_inverted_oriental(catalog):
    C = catalog["inv-oriental-2"]
    assignment = counit_assignment(C, 4)
    for x in C.objects:
        for y in C.objects:
            assert section_check(C, x, y, 4, assignment).ok


def test_polygraph_json(catalog):
    P = categorify(tdelta.delta_t(2))
    doc = P.to_json_dict()
    assert set(doc) == {"zero_gens", "one_gens", "two_gens", "relations"}
    assert len(doc["relations"]) == len(P.relations)
