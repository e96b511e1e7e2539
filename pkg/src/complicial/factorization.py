"""Replay of the anodyne factorization from the marked to the natural nerve.

Starting from the identity-marked nerve of a 2-category C, four gluing
stages produce the natural marking without touching the underlying
simplicial set:

* P1: for every non-identity invertible 2-cell, glue the degenerate-join
  saturation extension along the 4-simplex built from the cell, its inverse
  and identities; this marks the invertible triangles with degenerate 0th
  face, several times over.
* P2: collapse the multiple marks; a retract of P1 under the base nerve.
* P3: for every non-identity invertible 2-cell and every factorization of
  its target with a non-identity outer factor, glue a thinness extension;
  now every invertible triangle is marked exactly once.
* P4: for every adjoint-equivalence completion glue the bare saturation
  extension, marking equivalence edges four times per completion; the final
  quotient identifies the marks belonging to one completion and lands in
  the natural nerve, again as a retract.

Every stage checks its expected marking characterization and the final
object is compared for strict equality with the natural nerve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import nerves, tdelta, twocat
from .nerves import completion_token
from .tdelta import TDeltaMap, TruncatedTDeltaSet, inclusion_map
from .twocat import AdjointEquivalence


class StageError(AssertionError):
    """A stage assertion failed; the replay does not match the construction."""


def _subset_of_join_id(sid):
    """Vertex subset of a non-degenerate simplex of Delta[0] * Delta[3]."""
    left, right = sid.split("*")
    verts = [int(c) for c in left]
    verts += [int(c) + 1 for c in right]
    return tuple(verts)


def _face_at_subset(X, top_level, top_sid, subset):
    """Iterated face of a simplex at the given vertex subset."""
    sid = top_sid
    lvl = top_level
    for v in range(top_level, -1, -1):
        if v not in subset:
            sid = X.face_of(lvl, v, sid)
            lvl -= 1
    return sid


def _simplex_from_faces(X, m, face_sids):
    key = tuple(X._idx[m - 1][s] for s in face_sids)
    hits = X._by_boundary[m].get(key, [])
    if len(hits) != 1:
        raise StageError(
            f"expected exactly one {m}-simplex with the prescribed boundary, "
            f"found {len(hits)}")
    return X._ids[m][hits[0]]


def _map_from_top(A, X, top_level, top_sid, marked_only_token=True):
    """The map A -> X sending the top generator onto the given simplex.

    A must have simplex-shaped underlying set with digit ids (or join ids
    for the degenerate-join shapes); every free token goes to the unique
    token over its image, which must exist.
    """
    simp = {}
    for lvl in range(A.dim + 1):
        for sid in A.nondegenerate_ids(lvl):
            subset = _subset_of_join_id(sid) if "*" in sid \
                else tuple(int(c) for c in sid)
            simp[(lvl, sid)] = _face_at_subset(X, top_level, top_sid, subset)
    tok = {}
    for lvl in range(1, A.dim + 1):
        zwit = A._zeta_wit[lvl]
        for idx, w in enumerate(zwit):
            if w is not None:
                continue
            t = A._tok_ids[lvl][idx]
            under = A._ids[lvl][A._tok_under[lvl][idx]]
            image = simp[(lvl, under)] if (lvl, under) in simp else None
            if image is None:
                raise StageError(f"marked simplex {under} not resolved")
            cands = X.tokens_over(lvl, image)
            if not cands:
                raise StageError(
                    f"image simplex {image} of marked {under} is unmarked")
            tok[(lvl, t)] = cands[0]
    return TDeltaMap(A, X, simp, tok)


@dataclass
class StageReport:
    name: str
    gluings: int
    tokens_before: list
    tokens_after: list
    notes: dict = field(default_factory=dict)


def _invertible_nonidentity(C):
    inv = twocat.invertible_2cells(C)
    return {a: b for a, b in inv.items() if not C.two_cells[a].identity}


def stage_p1(C, N=5):
    """Glue degenerate-join saturation extensions, one per invertible 2-cell.

    Returns (P1, map rs -> P1, report).
    """
    if N < 4:
        raise twocat.InvalidInput("stage P1 needs dimension at least 4")
    X, info = nerves.nerve_with_info(C, N, "rs")
    inv = _invertible_nonidentity(C)
    pad = 4
    A = tdelta.join(tdelta.delta(0, dim=pad), tdelta.delta3_eq(dim=pad),
                    out_dim=pad, name="Delta[0]*Delta[3]_eq")
    B = tdelta.join(tdelta.delta(0, dim=pad), tdelta.delta3_sharp(dim=pad),
                    out_dim=pad, name="Delta[0]*Delta[3]#")
    incl = inclusion_map(A, B)
    gluings = []
    for alpha in sorted(inv):
        beta = inv[alpha]
        f = C.two_cells[alpha].src
        g = C.two_cells[alpha].tgt
        y = C.one_cells[f].tgt
        idy = C.identity_of(y)
        id2 = C.identity2_of
        edges = {(0, 1): f, (0, 2): g, (0, 3): f, (0, 4): g}
        wit = {(0, 1, 2): beta, (0, 1, 3): id2(f), (0, 1, 4): beta,
               (0, 2, 3): alpha, (0, 2, 4): id2(g), (0, 3, 4): beta}
        tri = {}
        for i in range(5):
            for j in range(i + 1, 5):
                for k in range(j + 1, 5):
                    u = edges.get((i, j), idy)
                    v = edges.get((j, k), idy)
                    w = wit.get((i, j, k), id2(idy))
                    try:
                        tri[(i, j, k)] = info.triangle(u, v, w)
                    except KeyError:
                        raise StageError(
                            f"2-skeleton of the gluing for {alpha} does not "
                            f"assemble at ({i},{j},{k})")
        tets = {}
        for drop in range(4, -1, -1):
            vs = [v for v in range(5) if v != drop]
            faces = []
            for d in range(4):
                tri_vs = tuple(v for idx, v in enumerate(vs) if idx != d)
                faces.append(tri[tri_vs])
            tets[drop] = _simplex_from_faces(X, 3, faces)
        top = _simplex_from_faces(X, 4, [tets[d] for d in range(5)])
        gluings.append((_map_from_top(A, X, 4, top), incl))
    P1, x_to_p1, _ = tdelta.pushout_family(X, gluings, prefix="p1.",
                                           name=f"P1({C.name})")
    _assert_same_underlying(X, P1)
    report = StageReport("P1", len(gluings), X.counts()["tokens"],
                         P1.counts()["tokens"])
    return P1, x_to_p1, report


def _assert_same_underlying(X, Y):
    if X._ids != Y._ids or X._face != Y._face or X._deg != Y._deg:
        raise StageError("stage changed the underlying simplicial set")


def _section_of_collapse(P, Q, to_q, prefer):
    """Section of an identify_markings collapse, choosing preferred members."""
    simp = {(m, s): s for m in range(Q.dim + 1)
            for s in Q.nondegenerate_ids(m)}
    classes = {}
    for m in range(1, P.dim + 1):
        for t in P.token_ids(m):
            classes.setdefault((m, to_q.apply_token(m, t)), []).append(t)
    tok = {}
    for m in range(1, Q.dim + 1):
        zwit = Q._zeta_wit[m]
        for idx, w in enumerate(zwit):
            if w is not None:
                continue
            q = Q._tok_ids[m][idx]
            members = sorted(classes[(m, q)])
            tok[(m, q)] = prefer(m, members)
    return TDeltaMap(Q, P, simp, tok)


def stage_p2(P1, x_to_p1):
    """Collapse repeated marks; exhibit the retract under the base nerve.

    Returns (P2, map rs -> P2, retraction P1 -> P2, section P2 -> P1,
    report).
    """
    X = x_to_p1.src
    P2, r = tdelta.identify_markings(P1, name=P1.name.replace("P1", "P2"))
    _assert_same_underlying(P1, P2)
    x_tokens = {m: set(X.token_ids(m)) for m in range(1, X.dim + 1)}

    def prefer(m, members):
        for t in members:
            if t in x_tokens[m]:
                return t
        return members[0]

    s = _section_of_collapse(P1, P2, r, prefer)
    x_to_p2 = r.compose(x_to_p1)
    if not s.is_valid():
        raise StageError("section of the marking collapse is not a map")
    if not r.compose(s).equals(tdelta.identity_map(P2)):
        raise StageError("collapse retraction fails")
    if not s.compose(x_to_p2).equals(x_to_p1):
        raise StageError("section does not restrict to the base nerve")
    report = StageReport("P2", 0, P1.counts()["tokens"], P2.counts()["tokens"])
    return P2, x_to_p2, r, s, report


def stage_p3(P2, C, N=5):
    """Glue thinness extensions until every invertible triangle is marked.

    Returns (P3, map P2 -> P3, report).
    """
    _, info = nerves.nerve_with_info(C, N, "rs")
    inv = _invertible_nonidentity(C)
    A = tdelta.delta_k_prime(2, 3, dim=3)
    B = tdelta.delta_k_dprime(2, 3, dim=3)
    incl = inclusion_map(A, B)
    gluings = []
    for alpha in sorted(inv):
        f = C.two_cells[alpha].src
        tgt = C.two_cells[alpha].tgt
        for (g2, g1), res in sorted(C.comp1.items()):
            if res != tgt or C.one_cells[g2].identity:
                continue
            z = C.one_cells[g2].tgt
            idz = C.identity_of(z)
            id2 = C.identity2_of
            try:
                t3 = info.triangle(g1, g2, id2(tgt))
                t2 = info.triangle(g1, g2, alpha)
                t1 = info.triangle(tgt, idz, alpha)
                t0 = info.triangle(g2, idz, id2(g2))
            except KeyError:
                raise StageError(f"P3 skeleton fails for {alpha},{g1},{g2}")
            top = _simplex_from_faces(P2, 3, [t0, t1, t2, t3])
            gluings.append((_map_from_top(A, P2, 3, top), incl))
    P3, p2_to_p3, _ = tdelta.pushout_family(P2, gluings, prefix="p3.",
                                            name=P2.name.replace("P2", "P3"))
    _assert_same_underlying(P2, P3)
    report = StageReport("P3", len(gluings), P2.counts()["tokens"],
                         P3.counts()["tokens"])
    return P3, p2_to_p3, report


def _all_completions(C):
    out = []
    for f in sorted(C.one_cells):
        out.extend(twocat.adjoint_equivalence_completions(C, f))
    return out


def stage_p4_and_retract(P3, C, N=5):
    """Glue saturation extensions for every completion, then identify marks.

    Returns (Q, map P3 -> Q, P4, map P3 -> P4, quotient P4 -> Q,
    section Q -> P4, report).  Q carries the natural-nerve token labels.
    """
    _, info = nerves.nerve_with_info(C, N, "rs")
    inv = twocat.invertible_2cells(C)
    completions = _all_completions(C)
    A = tdelta.delta3_eq(3)
    B = tdelta.delta3_sharp(3)
    incl = inclusion_map(A, B)
    gluings = []
    for ae in completions:
        f, g, eta, eps = ae.f, ae.g, ae.eta, ae.eps
        x = C.one_cells[f].src
        y = C.one_cells[f].tgt
        id2 = C.identity2_of
        try:
            t3 = info.triangle(f, g, eta)
            t2 = info.triangle(f, C.identity_of(y), id2(f))
            t1 = info.triangle(C.identity_of(x), f, id2(f))
            t0 = info.triangle(g, f, inv[eps])
        except KeyError:
            raise StageError(f"P4 skeleton fails for {ae}")
        top = _simplex_from_faces(P3, 3, [t0, t1, t2, t3])
        gluings.append((_map_from_top(A, P3, 3, top), incl))
    P4, p3_to_p4, b_maps = tdelta.pushout_family(
        P3, gluings, prefix="p4.", name=P3.name.replace("P3", "P4"))
    _assert_same_underlying(P3, P4)

    # classify the level-1 tokens of P4 by completion
    cls = {}
    for m in range(2, P4.dim + 1):
        for t in P4.token_ids(m):
            cls[(m, t)] = f"t|{P4.under_of(m, t)}"
    idmap = {x: C.identity_of(x) for x in C.objects}
    for t in P3.token_ids(1):
        idc = P3.under_of(1, t)
        x = C.one_cells[idc].src
        if idc != idmap[x]:
            raise StageError("P3 marks a non-identity 1-simplex")
        ae0 = AdjointEquivalence(idc, idc, C.identity2_of(idc),
                                 C.identity2_of(idc))
        cls[(1, t)] = completion_token(idc, ae0)
    for idx, ae in enumerate(completions):
        transpose = AdjointEquivalence(ae.g, ae.f, inv[ae.eps], inv[ae.eta])
        if transpose not in twocat.adjoint_equivalence_completions(C, ae.g):
            raise StageError(f"transpose of {ae} is not a completion")
        bmap = b_maps[idx]
        for edge, owner, key in (("01", ae.f, ae), ("23", ae.f, ae),
                                 ("03", ae.f, ae), ("12", ae.g, transpose)):
            t = bmap.apply_token(1, f"t|{edge}")
            if (1, t) in cls and cls[(1, t)] != completion_token(owner, key):
                raise StageError("conflicting completion classes")
            cls[(1, t)] = completion_token(owner, key)

    levels = {m: list(P4.simplex_ids(m)) for m in range(P4.dim + 1)}
    faces, degs, zeta = {}, {}, {}
    for m in range(1, P4.dim + 1):
        for s in P4.simplex_ids(m):
            for i in range(m + 1):
                faces[(m, i, s)] = P4.face_of(m, i, s)
    for m in range(P4.dim):
        for s in P4.simplex_ids(m):
            for i in range(m + 1):
                degs[(m, i, s)] = P4.degeneracy_of(m, i, s)
                zeta[(m, i, s)] = cls[(m + 1, P4.zeta_of(m, i, s))]
    tokens = {m: sorted({(cls[(m, t)], P4.under_of(m, t))
                         for t in P4.token_ids(m)})
              for m in range(1, P4.dim + 1)}
    Q = TruncatedTDeltaSet(P4.dim, levels, faces, degs, tokens, zeta,
                           name=P4.name.replace("P4", "Q"))
    q = TDeltaMap(P4, Q,
                  {(m, s): s for m in range(P4.dim + 1)
                   for s in P4.nondegenerate_ids(m)},
                  {(m, t): cls[(m, t)]
                   for m in range(1, P4.dim + 1)
                   for k, t in enumerate(P4._tok_ids[m])
                   if P4._zeta_wit[m][k] is None})
    p3_tokens = {m: set(P3.token_ids(m)) for m in range(1, P3.dim + 1)}

    def prefer(m, members):
        for t in members:
            if t in p3_tokens[m]:
                return t
        return members[0]

    s = _section_of_collapse(P4, Q, q, prefer)
    p3_to_q = q.compose(p3_to_p4)
    if not (q.is_valid() and s.is_valid()):
        raise StageError("quotient or section is not a map")
    if not q.compose(s).equals(tdelta.identity_map(Q)):
        raise StageError("completion-identification retraction fails")
    if not s.compose(p3_to_q).equals(p3_to_p4):
        raise StageError("section does not restrict to P3")
    report = StageReport("P4", len(gluings), P3.counts()["tokens"],
                         Q.counts()["tokens"],
                         notes={"p4_tokens": P4.counts()["tokens"]})
    return Q, p3_to_q, P4, p3_to_p4, q, s, report


def _check_p2_characterization(P2, C, N):
    _, info = nerves.nerve_with_info(C, N, "rs")
    inv = twocat.invertible_2cells(C)
    for sid, (u, v, alpha) in info.two_data.items():
        n = len(P2.tokens_over(2, sid))
        invertible = alpha in inv
        identity = C.two_cells[alpha].identity
        degenerate0 = C.one_cells[v].identity
        expected = 1 if (identity or (invertible and degenerate0)) else 0
        if n != expected:
            raise StageError(
                f"P2 marking off at {sid}: got {n}, expected {expected}")


def _check_p3_characterization(P3, C, N):
    _, info = nerves.nerve_with_info(C, N, "rs")
    inv = twocat.invertible_2cells(C)
    for sid, (u, v, alpha) in info.two_data.items():
        n = len(P3.tokens_over(2, sid))
        expected = 1 if alpha in inv else 0
        if n != expected:
            raise StageError(
                f"P3 marking off at {sid}: got {n}, expected {expected}")


def verify_factorization(C, N=5):
    """Run all stages and compare against the natural nerve on the nose."""
    X = nerves.rs_nerve(C, N)
    P1, x_to_p1, rep1 = stage_p1(C, N)
    P2, x_to_p2, r12, s21, rep2 = stage_p2(P1, x_to_p1)
    P3, p2_to_p3, rep3 = stage_p3(P2, C, N)
    _check_p2_characterization(P2, C, N)
    _check_p3_characterization(P3, C, N)
    Q, p3_to_q, P4, p3_to_p4, q, s, rep4 = stage_p4_and_retract(P3, C, N)
    for stage_map in (x_to_p1, x_to_p2, p2_to_p3, p3_to_p4, p3_to_q):
        if not stage_map.is_mono():
            raise StageError("stage map is not a monomorphism")
    nat = nerves.natural_nerve(C, N)
    if not Q.same_as(nat):
        raise StageError("final object differs from the natural nerve")
    composite = p3_to_q.compose(p2_to_p3).compose(x_to_p2)
    canonical = nerves.rs_to_natural(C, N)
    # same codomain up to the identical token labels, so compare tables
    if not (composite.simplex_table() == canonical.simplex_table() and
            composite.token_table() == canonical.token_table()):
        raise StageError("composite differs from the canonical comparison map")
    return {
        "category": C.name,
        "dim": N,
        "stages": [
            {"name": r.name, "gluings": r.gluings,
             "tokens_before": r.tokens_before, "tokens_after": r.tokens_after,
             **({"notes": r.notes} if r.notes else {})}
            for r in (rep1, rep2, rep3, rep4)],
        "final_equals_natural_nerve": True,
        "composite_equals_rs_to_natural": True,
    }
