import itertools

import pytest

from complicial import nerves, tdelta, twocat
from complicial.nerves import (duskin_nerve, natural_nerve, nerve_map,
                               nerve_with_info, rs_fully_faithful_check,
                               rs_nerve, rs_to_natural)


@pytest.fixture(scope="module")
def catalog():
    return twocat.standard_examples()


def test_nerve_of_point(catalog):
    X = duskin_nerve(catalog["chain-0"], 5)
    assert [len(X.simplex_ids(m)) for m in range(6)] == [1] * 6


def test_nerve_of_arrow_counts(catalog):
    X = duskin_nerve(catalog["chain-1"], 5)
    assert [len(X.simplex_ids(m)) for m in range(6)] == [2, 3, 4, 5, 6, 7]


@pytest.mark.parametrize("name", ["chain-2", "sigma-iso", "z2",
                                  "inv-oriental-2", "oriental-2"])
def test_nerve_counts_match_two_functor_oracle(name, catalog):
    C = catalog[name]
    X = duskin_nerve(C, 3)
    for m in range(4):
        functors = twocat.two_functors(twocat.oriental2(m), C)
        assert len(X.simplex_ids(m)) == len(functors), (name, m)


def test_nerves_validate(catalog):
    for name in ("chain-1", "sigma-iso", "z2"):
        for marking in ("street", "rs", "natural"):
            X = nerve_with_info(catalog[name], 4, marking)[0]
            assert X.validate() == [], (name, marking)


def test_three_coskeletality(catalog):
    """Every compatible family of 3-simplices fills uniquely at level 4."""
    C = catalog["z2"]
    X = duskin_nerve(C, 4)
    s3 = X.simplex_ids(3)
    families = []
    for y0 in s3:
        for y1 in s3:
            if X.face_of(3, 0, y1) != X.face_of(3, 0, y0):
                continue
            for y2 in s3:
                if X.face_of(3, 0, y2) != X.face_of(3, 1, y0) or \
                        X.face_of(3, 1, y2) != X.face_of(3, 1, y1):
                    continue
                for y3 in s3:
                    if X.face_of(3, 0, y3) != X.face_of(3, 2, y0) or \
                            X.face_of(3, 1, y3) != X.face_of(3, 2, y1) or \
                            X.face_of(3, 2, y3) != X.face_of(3, 2, y2):
                        continue
                    for y4 in s3:
                        if X.face_of(3, 0, y4) != X.face_of(3, 3, y0) or \
                                X.face_of(3, 1, y4) != X.face_of(3, 3, y1) or \
                                X.face_of(3, 2, y4) != X.face_of(3, 3, y2) or \
                                X.face_of(3, 3, y4) != X.face_of(3, 3, y3):
                            continue
                        families.append((y0, y1, y2, y3, y4))
    assert len(families) == len(X.simplex_ids(4))
    for fam in families:
        hits = [s for s in X.simplex_ids(4)
                if tuple(X.face_of(4, i, s) for i in range(5)) == fam]
        assert len(hits) == 1


def test_rs_marking_rules(catalog):
    X, info = nerve_with_info(catalog["chain-2"], 4, "rs")
    # nerve of a 1-category: every triangle witnessed by an identity
    for sid in X.simplex_ids(2):
        assert len(X.tokens_over(2, sid)) == 1
    S, sinfo = nerve_with_info(catalog["sigma-iso"], 4, "rs")
    for e in S.nondegenerate_ids(1):
        assert S.tokens_over(1, e) == []
    point = rs_nerve(catalog["chain-0"], 4)
    for m in range(1, 5):
        for s in point.simplex_ids(m):
            n = len(point.tokens_over(m, s))
            assert n == 1  # everything degenerate or dimension >= 3


def test_natural_marking_of_arrow(catalog):
    X = natural_nerve(catalog["chain-1"], 4)
    marked1 = [e for e in X.simplex_ids(1) if X.tokens_over(1, e)]
    assert marked1 == ["c00", "c11"]
    assert all(len(X.tokens_over(1, e)) == 1 for e in marked1)


def test_natural_marking_of_discrete_iso(catalog):
    X = natural_nerve(catalog["iso"], 4)
    for e in X.simplex_ids(1):
        assert len(X.tokens_over(1, e)) == 1
    assert X.is_stratified()


def test_natural_marking_multiplicity_z2(catalog):
    X = natural_nerve(catalog["z2"], 4)
    assert len(X.tokens_over(1, "e")) == 2
    assert not X.is_stratified()


def test_rs_to_natural_point_is_iso(catalog):
    f = rs_to_natural(catalog["chain-0"], 4)
    assert f.is_valid() and f.is_mono()
    for m in range(1, 5):
        assert len(f.src.token_ids(m)) == len(f.dst.token_ids(m))


def test_rs_to_natural_structure(catalog):
    for name in ("chain-1", "inv-oriental-2", "z2", "sigma-iso"):
        f = rs_to_natural(catalog[name], 4)
        assert f.is_valid(), name
        assert f.is_mono(), name


def test_rs_to_natural_token_diff_inverted_oriental(catalog):
    f = rs_to_natural(catalog["inv-oriental-2"], 4)
    rs, nat = f.src, f.dst
    image = {f.apply_token(2, t) for t in rs.token_ids(2)}
    added = [t for t in nat.token_ids(2) if t not in image]
    _, info = nerve_with_info(catalog["inv-oriental-2"], 4, "natural")
    witnesses = {info.witness(nat.under_of(2, t)) for t in added}
    assert witnesses == {"a02>012", "b012>02"}


def test_nerve_functoriality_naturality_square(catalog):
    C, D = catalog["chain-1"], catalog["sigma-iso"]
    F = twocat.two_functors(C, D)[1]
    rs_map = nerve_map(F, C, D, 4, "rs")
    nat_map = nerve_map(F, C, D, 4, "natural")
    assert rs_map.is_valid() and nat_map.is_valid()
    left = nat_map.compose(rs_to_natural(C, 4))
    right = rs_to_natural(D, 4).compose(rs_map)
    assert left.simplex_table() == right.simplex_table()
    assert left.token_table() == right.token_table()


def test_rs_fully_faithful_small(catalog):
    assert rs_fully_faithful_check(catalog["chain-0"], catalog["chain-0"], 4)
    assert rs_fully_faithful_check(catalog["chain-1"], catalog["sigma-iso"], 4)


def test_natural_stratified_iff_unique_completions(catalog):
    for name in ("chain-1", "iso", "sigma-iso", "oriental-2"):
        assert natural_nerve(catalog[name], 3).is_stratified(), name
    assert not natural_nerve(catalog["z2"], 3).is_stratified()
