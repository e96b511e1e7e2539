import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complicial import tdelta, twocat, nerves
from complicial.tdelta import (BudgetExceeded, TruncatedTDeltaSet, boundary,
                               coproduct, delta, delta3_eq, delta3_sharp,
                               delta_k, delta_k_dprime, delta_k_prime, delta_t,
                               find_isomorphism, horn, identify_markings,
                               identity_map, inclusion_map, join, maps,
                               pushout, standard)


SHAPES = [delta(0), delta(2), delta_t(2), boundary(2), boundary(3),
          horn(1, 2), horn(0, 3), delta_k(1, 3), delta_k_prime(2, 3),
          delta_k_dprime(2, 3), delta3_eq(), delta3_sharp(), delta(2, dim=4)]


@pytest.mark.parametrize("X", SHAPES, ids=lambda X: X.name)
def test_standard_shapes_valid_and_stratified(X):
    assert X.validate() == []
    assert X.is_stratified()


@pytest.mark.parametrize("X", SHAPES, ids=lambda X: X.name)
def test_degenerate_simplices_carry_exactly_their_token(X):
    for m in range(1, X.dim + 1):
        for s in X.simplex_ids(m):
            toks = X.tokens_over(m, s)
            if X.is_degenerate(m, s):
                assert len(toks) == 1
            else:
                assert len(toks) <= 1


def test_delta1_of_2_equals_delta2_marked():
    assert delta_k(1, 2).same_as(delta_t(2))


def test_delta3_eq_marked_set():
    E = delta3_eq()
    nondeg_marked = {s for m in range(1, 4) for s in E.simplex_ids(m)
                     if not E.is_degenerate(m, s) and E.tokens_over(m, s)}
    assert nondeg_marked == {"02", "13", "012", "013", "023", "123", "0123"}


def test_boundary_of_point_is_empty():
    B = boundary(0)
    assert B.simplex_ids(0) == []


def test_standard_dispatcher():
    assert standard("Delta", m=2).same_as(delta(2))
    assert standard("Horn", k=1, m=2).same_as(horn(1, 2))
    with pytest.raises(twocat.InvalidInput):
        standard("Nope")
    with pytest.raises(twocat.InvalidInput):
        standard("Delta", m=9)


@given(st.integers(min_value=1, max_value=4), st.data())
@settings(max_examples=12, deadline=None)
def test_marking_rule_of_admissible_simplex(m, data):
    k = data.draw(st.integers(min_value=0, max_value=m))
    X = delta_k(k, m)
    need = {v for v in (k - 1, k, k + 1) if 0 <= v <= m}
    for lvl in range(1, m + 1):
        for s in X.simplex_ids(lvl):
            if X.is_degenerate(lvl, s):
                continue
            expected = need <= set(int(c) for c in s)
            assert bool(X.tokens_over(lvl, s)) == expected


def test_validate_reports_dropped_zeta():
    doc = delta_t(2).to_json_dict()
    doc["zeta"] = doc["zeta"][1:]  # drop one comarking entry
    X = TruncatedTDeltaSet.from_json_dict(doc)
    report = X.validate()
    assert any("zeta" in line for line in report)


# -- maps ---------------------------------------------------------------------

def test_maps_of_point_are_vertices():
    X = delta(2)
    assert len(maps(delta(0), X)) == len(X.simplex_ids(0))


def test_maps_of_edge_into_nerve_of_arrow():
    X = nerves.duskin_nerve(twocat.standard_examples()["chain-1"], 2)
    assert len(maps(delta(1), X)) == 3


def test_maps_yoneda_both_kinds():
    X = nerves.rs_nerve(twocat.standard_examples()["sigma-iso"], 3)
    for m in range(3):
        assert len(maps(delta(m, dim=m), X)) == len(X.simplex_ids(m))
    for m in range(1, 4):
        assert len(maps(delta_t(m, dim=m), X)) == len(X.token_ids(m))


def test_maps_budget_guard():
    with pytest.raises(BudgetExceeded):
        maps(delta(2), delta(2), budget=3)


def test_map_validity_and_composition():
    X, Y = delta(1), delta(2)
    fs = maps(X, Y)
    assert all(f.is_valid() for f in fs)
    g = maps(Y, Y)[0]
    for f in fs:
        assert g.compose(f).is_valid()


def test_map_json_round_trip_of_stored_part():
    f = maps(delta(1), delta(2))[0]
    doc = f.to_json_dict()
    assert {"simplices", "tokens"} <= set(doc)


# -- join ------------------------------------------------------------------------

def test_join_cone_is_simplex():
    J = join(delta(0, dim=4), delta(3, dim=4), out_dim=4)
    assert J.validate() == []
    assert find_isomorphism(J, delta(4)) is not None


def test_join_counts_binomial_oracle():
    a, b = 1, 3
    J = join(delta(a, dim=5), delta(b, dim=5), out_dim=5)

    def monotone(n, k):
        # weakly increasing (n+1)-sequences valued in 0..k
        return math.comb(n + k + 1, k)

    for m in range(6):
        expected = monotone(m, a) + monotone(m, b) + sum(
            monotone(p, a) * monotone(m - 1 - p, b) for p in range(m))
        assert len(J.simplex_ids(m)) == expected


def test_join_saturation_pair_same_underlying():
    A = join(delta(0, dim=4), delta3_eq(dim=4), out_dim=4)
    B = join(delta(0, dim=4), delta3_sharp(dim=4), out_dim=4)
    assert [A.simplex_ids(m) for m in range(5)] == \
        [B.simplex_ids(m) for m in range(5)]
    extra = [len(B.token_ids(m)) - len(A.token_ids(m)) for m in range(1, 5)]
    assert extra == [4, 4, 0, 0]


def test_join_associative_up_to_iso():
    A = delta(0, dim=3)
    B = delta(1, dim=3)
    C = delta(0, dim=3)
    left = join(join(A, B, out_dim=3), C, out_dim=3)
    right = join(A, join(B, C, out_dim=3), out_dim=3)
    assert find_isomorphism(left, right) is not None


def test_join_requires_padding():
    with pytest.raises(twocat.InvalidInput):
        join(delta(0), delta(3), out_dim=4)


# -- pushout and marking identification -------------------------------------------

def test_pushout_along_identity():
    X = delta_t(2)
    P, to_p, _ = pushout(identity_map(X), identity_map(X))
    assert P.same_as(X)
    assert to_p.is_valid()


def test_pushout_adds_marking_token():
    D2, D2t = delta(2), delta_t(2)
    P, xp, bp = pushout(identity_map(D2), inclusion_map(D2, D2t))
    assert P.counts()["tokens"] == [3, 10]
    assert P.validate() == []
    assert xp.is_valid() and bp.is_valid() and xp.is_mono()
    assert find_isomorphism(P, D2t) is not None


def test_pushout_of_empty_is_coproduct():
    empty = boundary(0)
    A = delta(0)
    f = tdelta.TDeltaMap(empty, A, {}, {})
    B = delta(0)
    i = tdelta.TDeltaMap(empty, B, {}, {})
    P, _, _ = pushout(f, i)
    assert len(P.simplex_ids(0)) == 2
    C = coproduct([A, B])
    assert find_isomorphism(P, C) is not None


def test_pushout_universal_property_small():
    """Every cocone factors uniquely through the pushout."""
    A = delta(0)
    X = delta(1, dim=1)
    B = delta(1, dim=1)
    f = [m for m in maps(A, X)][0]          # vertex 0 of X
    i = [m for m in maps(A, B) if m.apply_simplex(0, "0") == "0"][0]
    P, xp, bp = pushout(f, i)
    T = delta(2)
    cocones = [(u, v) for u in maps(X, T) for v in maps(B, T)
               if u.compose(f).simplex_table() == v.compose(i).simplex_table()
               and u.compose(f).token_table() == v.compose(i).token_table()]
    assert cocones
    for u, v in cocones:
        throughs = [w for w in maps(P, T)
                    if w.compose(xp).equals(u) and w.compose(bp).equals(v)]
        assert len(throughs) == 1


def test_identify_markings_idempotent():
    X = delta_t(2)
    Q1, _ = identify_markings(X)
    assert Q1.same_as(X)
    Z = nerves.natural_nerve(twocat.standard_examples()["z2"], 3)
    Q2, to_q = identify_markings(Z)
    assert Q2.is_stratified()
    assert to_q.is_valid()
    Q3, _ = identify_markings(Q2)
    assert Q3.same_as(Q2)


def test_tdelta_json_round_trip():
    for X in (delta_t(2), horn(0, 3), delta3_eq()):
        doc = X.to_json_dict()
        back = TruncatedTDeltaSet.from_json_dict(doc, name=X.name)
        assert back.same_as(X)
        assert back.to_json_dict() == doc


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("COMPLICIAL_BUDGET", "3")
    with pytest.raises(BudgetExceeded):
        maps(delta(2), delta(2))
    monkeypatch.delenv("COMPLICIAL_BUDGET")
    assert len(maps(delta(2), delta(2))) > 0


def test_two_category_loader_requires_total_tables():
    doc = twocat.standard_examples()["chain-1"].to_json_dict()
    doc["comp1"] = doc["comp1"][1:]
    C = twocat.FiniteTwoCategory.from_json_dict(doc)
    assert any("comp1 missing" in line for line in C.validate())
