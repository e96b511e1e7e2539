"""Finite strict 2-categories: validation, cell search, and a standard catalog.

Cells live in explicit finite tables.  Composition of 1-cells, vertical
composition of 2-cells and the two whiskerings are stored; horizontal
composition is derived through the interchange law.

Whiskering conventions (fixed once, used everywhere):

* ``whisker_l[(c, alpha)]`` is ``c * alpha``: for ``alpha: a => b`` in
  ``hom(x, y)`` and ``c: y -> z``, the result is ``c.a => c.b``.
* ``whisker_r[(alpha, c)]`` is ``alpha * c``: for ``alpha: a => b`` in
  ``hom(y, z)`` and ``c: x -> y``, the result is ``a.c => b.c``.

With these conventions the triangle identities of an adjunction
``(f, g, eta, eps)`` read ``(eps*f) . (f*eta) = id_f`` and
``(g*eps) . (eta*g) = id_g``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property


class InvalidInput(ValueError):
    """Malformed constructor data or JSON document."""


@dataclass(frozen=True, order=True)
class OneCell:
    id: str
    src: str
    tgt: str
    identity: bool = False


@dataclass(frozen=True, order=True)
class TwoCell:
    id: str
    src: str  # 1-cell id
    tgt: str  # 1-cell id, parallel to src
    identity: bool = False


@dataclass(frozen=True, order=True)
class AdjointEquivalence:
    """A completion (f, g, eta, eps) with invertible unit and counit."""

    f: str
    g: str
    eta: str
    eps: str


class FiniteTwoCategory:
    def __init__(self, objects, one_cells, comp1, two_cells, vcomp,
                 whisker_l, whisker_r, name=""):
        self.name = name
        self.objects = tuple(sorted(objects))
        self.one_cells = {c.id: c for c in one_cells}
        self.two_cells = {c.id: c for c in two_cells}
        self.comp1 = dict(comp1)
        self.vcomp = dict(vcomp)
        self.whisker_l = dict(whisker_l)
        self.whisker_r = dict(whisker_r)
        if len(self.one_cells) != len(list(one_cells)):
            raise InvalidInput("duplicate 1-cell ids")
        if len(self.two_cells) != len(list(two_cells)):
            raise InvalidInput("duplicate 2-cell ids")

    # -- basic accessors ---------------------------------------------------

    @cached_property
    def _identity_of(self):
        out = {}
        for c in self.one_cells.values():
            if c.identity:
                out[c.src] = c.id
        return out

    @cached_property
    def _identity2_of(self):
        out = {}
        for c in self.two_cells.values():
            if c.identity:
                out[c.src] = c.id
        return out

    def identity_of(self, obj):
        return self._identity_of[obj]

    def identity2_of(self, one_cell):
        return self._identity2_of[one_cell]

    def src_obj(self, two_cell):
        return self.one_cells[self.two_cells[two_cell].src].src

    def tgt_obj(self, two_cell):
        return self.one_cells[self.two_cells[two_cell].src].tgt

    def comp(self, g, f):
        """g after f."""
        return self.comp1[(g, f)]

    def vert(self, beta, alpha):
        """beta after alpha, vertically."""
        return self.vcomp[(beta, alpha)]

    def wl(self, c, alpha):
        """c * alpha, whiskering on the left 1-cell side."""
        return self.whisker_l[(c, alpha)]

    def wr(self, alpha, c):
        """alpha * c, whiskering on the right 1-cell side."""
        return self.whisker_r[(alpha, c)]

    def hcomp(self, beta, alpha):
        """Horizontal composite, derived: (d*alpha).(beta*a)."""
        a = self.two_cells[alpha].src
        d = self.two_cells[beta].tgt
        return self.vert(self.wl(d, alpha), self.wr(beta, a))

    @cached_property
    def _hom(self):
        out = {}
        for c in self.one_cells.values():
            out.setdefault((c.src, c.tgt), []).append(c.id)
        for v in out.values():
            v.sort()
        return out

    def hom(self, x, y):
        return list(self._hom.get((x, y), []))

    @cached_property
    def _two_between(self):
        out = {}
        for c in self.two_cells.values():
            out.setdefault((c.src, c.tgt), []).append(c.id)
        for v in out.values():
            v.sort()
        return out

    def two_cells_between(self, a, b):
        return list(self._two_between.get((a, b), []))

    def compose_word(self, x, cells):
        """Composite of 1-cells listed in application order, id_x if empty."""
        acc = self.identity_of(x)
        for c in cells:
            acc = self.comp(c, acc)
        return acc

    # -- validation --------------------------------------------------------

    def validate(self):
        """Exhaustive axiom check; returns the list of violations."""
        errs = []
        add = errs.append
        oc, tc = self.one_cells, self.two_cells
        for c in oc.values():
            if c.src not in self.objects or c.tgt not in self.objects:
                add(f"1-cell {c.id}: unknown endpoint")
            if c.identity and c.src != c.tgt:
                add(f"identity 1-cell {c.id} is not an endomorphism")
        for x in self.objects:
            ids = [c.id for c in oc.values() if c.identity and c.src == x]
            if len(ids) != 1:
                add(f"object {x}: expected one identity 1-cell, got {ids}")
        for c in tc.values():
            if c.src not in oc or c.tgt not in oc:
                add(f"2-cell {c.id}: unknown boundary 1-cell")
                continue
            s, t = oc[c.src], oc[c.tgt]
            if (s.src, s.tgt) != (t.src, t.tgt):
                add(f"2-cell {c.id}: boundary 1-cells not parallel")
            if c.identity and c.src != c.tgt:
                add(f"identity 2-cell {c.id} is not an endo 2-cell")
        for f in oc:
            ids = [c.id for c in tc.values() if c.identity and c.src == f]
            if len(ids) != 1:
                add(f"1-cell {f}: expected one identity 2-cell, got {ids}")
        if errs:
            return errs  # tables below assume well-typed cells

        comp_pairs = {(g, f) for g in oc for f in oc
                      if oc[f].tgt == oc[g].src}
        if set(self.comp1) != comp_pairs:
            for p in sorted(comp_pairs - set(self.comp1)):
                add(f"comp1 missing on composable pair {p}")
            for p in sorted(set(self.comp1) - comp_pairs):
                add(f"comp1 defined on non-composable pair {p}")
        for (g, f), r in sorted(self.comp1.items()):
            if r not in oc:
                add(f"comp1[{g},{f}] = {r}: unknown cell")
            elif (oc[r].src, oc[r].tgt) != (oc[f].src, oc[g].tgt):
                add(f"comp1[{g},{f}] = {r}: wrong endpoints")
        if errs:
            return errs

        for f in sorted(oc):
            ix = self.identity_of(oc[f].src)
            iy = self.identity_of(oc[f].tgt)
            if self.comp(f, ix) != f:
                add(f"right unit fails at {f}")
            if self.comp(iy, f) != f:
                add(f"left unit fails at {f}")
        for (g, f) in sorted(self.comp1):
            for h in sorted(oc):
                if oc[h].src == oc[g].tgt:
                    if self.comp(h, self.comp(g, f)) != \
                            self.comp(self.comp(h, g), f):
                        add(f"comp1 associativity fails at ({h},{g},{f})")

        vpairs = {(b, a) for b in tc for a in tc
                  if tc[a].tgt == tc[b].src}
        if set(self.vcomp) != vpairs:
            for p in sorted(vpairs - set(self.vcomp)):
                add(f"vcomp missing on pair {p}")
            for p in sorted(set(self.vcomp) - vpairs):
                add(f"vcomp defined on non-composable pair {p}")
        for (b, a), r in sorted(self.vcomp.items()):
            if r not in tc:
                add(f"vcomp[{b},{a}] = {r}: unknown cell")
            elif (tc[r].src, tc[r].tgt) != (tc[a].src, tc[b].tgt):
                add(f"vcomp[{b},{a}] = {r}: wrong boundary")
        lpairs = {(c, a) for c in oc for a in tc
                  if self.tgt_obj(a) == oc[c].src}
        if set(self.whisker_l) != lpairs:
            for p in sorted(lpairs - set(self.whisker_l)):
                add(f"whisker_l missing on {p}")
            for p in sorted(set(self.whisker_l) - lpairs):
                add(f"whisker_l defined on non-composable {p}")
        rpairs = {(a, c) for c in oc for a in tc
                  if self.src_obj(a) == oc[c].tgt}
        if set(self.whisker_r) != rpairs:
            for p in sorted(rpairs - set(self.whisker_r)):
                add(f"whisker_r missing on {p}")
            for p in sorted(set(self.whisker_r) - rpairs):
                add(f"whisker_r defined on non-composable {p}")
        if errs:
            return errs

        for (c, a), r in sorted(self.whisker_l.items()):
            want = (self.comp(c, tc[a].src), self.comp(c, tc[a].tgt))
            if (tc[r].src, tc[r].tgt) != want:
                add(f"whisker_l[{c},{a}] = {r}: wrong boundary")
        for (a, c), r in sorted(self.whisker_r.items()):
            want = (self.comp(tc[a].src, c), self.comp(tc[a].tgt, c))
            if (tc[r].src, tc[r].tgt) != want:
                add(f"whisker_r[{a},{c}] = {r}: wrong boundary")
        if errs:
            return errs

        for a in sorted(tc):
            i_s = self.identity2_of(tc[a].src)
            i_t = self.identity2_of(tc[a].tgt)
            if self.vert(a, i_s) != a or self.vert(i_t, a) != a:
                add(f"vertical unit fails at {a}")
        for (b, a) in sorted(self.vcomp):
            for c in sorted(tc):
                if tc[c].src == tc[b].tgt:
                    if self.vert(c, self.vert(b, a)) != \
                            self.vert(self.vert(c, b), a):
                        add(f"vcomp associativity fails at ({c},{b},{a})")

        for (c, a), r in sorted(self.whisker_l.items()):
            if self.one_cells[c].identity and r != a:
                add(f"whisker_l by identity changes {a}")
            if tc[a].identity and r != self.identity2_of(self.comp(c, tc[a].src)):
                add(f"whisker_l[{c},{a}] of identity not identity")
        for (a, c), r in sorted(self.whisker_r.items()):
            if self.one_cells[c].identity and r != a:
                add(f"whisker_r by identity changes {a}")
            if tc[a].identity and r != self.identity2_of(self.comp(tc[a].src, c)):
                add(f"whisker_r[{a},{c}] of identity not identity")
        for (b, a) in sorted(self.vcomp):
            for c in sorted(oc):
                if oc[c].src == self.tgt_obj(a):
                    if self.wl(c, self.vert(b, a)) != \
                            self.vert(self.wl(c, b), self.wl(c, a)):
                        add(f"whisker_l not functorial at ({c},{b},{a})")
                if oc[c].tgt == self.src_obj(a):
                    if self.wr(self.vert(b, a), c) != \
                            self.vert(self.wr(b, c), self.wr(a, c)):
                        add(f"whisker_r not functorial at ({b},{a},{c})")
        for (g, f) in sorted(self.comp1):
            for a in sorted(tc):
                if self.tgt_obj(a) == oc[f].src:
                    if self.wl(self.comp(g, f), a) != self.wl(g, self.wl(f, a)):
                        add(f"iterated whisker_l fails at ({g},{f},{a})")
                if self.src_obj(a) == oc[g].tgt:
                    if self.wr(a, self.comp(g, f)) != self.wr(self.wr(a, g), f):
                        add(f"iterated whisker_r fails at ({a},{g},{f})")
        for a in sorted(tc):
            for c in sorted(oc):
                for e in sorted(oc):
                    if oc[c].src == self.tgt_obj(a) and \
                            oc[e].tgt == self.src_obj(a):
                        if self.wr(self.wl(c, a), e) != self.wl(c, self.wr(a, e)):
                            add(f"whisker order mismatch at ({c},{a},{e})")

        for a in sorted(tc):
            for b in sorted(tc):
                if self.tgt_obj(a) != self.src_obj(b):
                    continue
                lhs = self.vert(self.wr(b, tc[a].tgt), self.wl(tc[b].src, a))
                rhs = self.vert(self.wl(tc[b].tgt, a), self.wr(b, tc[a].src))
                if lhs != rhs:
                    add(f"interchange fails at ({b},{a})")
        return errs

    @property
    def is_valid(self):
        return not self.validate()

    # -- JSON --------------------------------------------------------------

    def to_json_dict(self):
        return {
            "objects": list(self.objects),
            "one_cells": [
                {"id": c.id, "src": c.src, "tgt": c.tgt, "identity": c.identity}
                for _, c in sorted(self.one_cells.items())],
            "comp1": [
                {"g": g, "f": f, "result": r}
                for (g, f), r in sorted(self.comp1.items())],
            "two_cells": [
                {"id": c.id, "src": c.src, "tgt": c.tgt, "identity": c.identity}
                for _, c in sorted(self.two_cells.items())],
            "vcomp": [[b, a, r] for (b, a), r in sorted(self.vcomp.items())],
            "whisker_l": [[c, a, r] for (c, a), r in sorted(self.whisker_l.items())],
            "whisker_r": [[a, c, r] for (a, c), r in sorted(self.whisker_r.items())],
        }

    @classmethod
    def from_json_dict(cls, doc, name=""):
        try:
            objects = list(doc["objects"])
            one = [OneCell(d["id"], d["src"], d["tgt"], bool(d.get("identity", False)))
                   for d in doc["one_cells"]]
            two = [TwoCell(d["id"], d["src"], d["tgt"], bool(d.get("identity", False)))
                   for d in doc["two_cells"]]
            comp1 = {(d["g"], d["f"]): d["result"] for d in doc["comp1"]}
            vcomp = {(b, a): r for b, a, r in doc["vcomp"]}
            wl = {(c, a): r for c, a, r in doc["whisker_l"]}
            wr = {(a, c): r for a, c, r in doc["whisker_r"]}
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"bad 2-category document: {exc}") from exc
        return cls(objects, one, comp1, two, vcomp, wl, wr, name=name)


def validate(C):
    return C.validate()


# -- derived cell searches ---------------------------------------------------

def invertible_2cells(C):
    """Map each 2-cell to its vertical inverse where one exists."""
    out = {}
    for a in sorted(C.two_cells):
        sa, ta = C.two_cells[a].src, C.two_cells[a].tgt
        for b in C.two_cells_between(ta, sa):
            if C.vert(b, a) == C.identity2_of(sa) and \
                    C.vert(a, b) == C.identity2_of(ta):
                out[a] = b
                break
    return out


def adjoint_equivalence_completions(C, f):
    """All (g, eta, eps) completing f to an adjoint equivalence.

    Exhaustive over the finite tables; ordered lexicographically in
    (g, eta, eps) ids.
    """
    cell = C.one_cells[f]
    x, y = cell.src, cell.tgt
    inv = invertible_2cells(C)
    id_f = C.identity2_of(f)
    out = []
    for g in C.hom(y, x):
        gf = C.comp(g, f)
        fg = C.comp(f, g)
        id_g = C.identity2_of(g)
        for eta in C.two_cells_between(C.identity_of(x), gf):
            if eta not in inv:
                continue
            for eps in C.two_cells_between(fg, C.identity_of(y)):
                if eps not in inv:
                    continue
                if C.vert(C.wr(eps, f), C.wl(f, eta)) != id_f:
                    continue
                if C.vert(C.wl(g, eps), C.wr(eta, g)) != id_g:
                    continue
                out.append(AdjointEquivalence(f, g, eta, eps))
    return sorted(out)


def is_equivalence(C, f):
    return bool(adjoint_equivalence_completions(C, f))


def one_isomorphisms(C):
    """1-cells with a strict two-sided inverse (identities included)."""
    out = set()
    for f, cell in C.one_cells.items():
        for g in C.hom(cell.tgt, cell.src):
            if C.comp(g, f) == C.identity_of(cell.src) and \
                    C.comp(f, g) == C.identity_of(cell.tgt):
                out.add(f)
                break
    return out


def transpose_completion(C, ae):
    """The completion of g induced by (f, g, eta, eps): (g, f, eps^-1, eta^-1)."""
    inv = invertible_2cells(C)
    return AdjointEquivalence(ae.g, ae.f, inv[ae.eps], inv[ae.eta])


# -- 2-functor enumeration ----------------------------------------------------

@dataclass(frozen=True)
class TwoFunctor:
    """A strict 2-functor given by its three assignment tables."""

    on_objects: tuple
    on_one: tuple
    on_two: tuple

    def ob(self, x):
        return dict(self.on_objects)[x]

    def one(self, f):
        return dict(self.on_one)[f]

    def two(self, a):
        return dict(self.on_two)[a]


def two_functors(C, D):
    """Exhaustively enumerate strict 2-functors C -> D.

    Plain backtracking over object, 1-cell and 2-cell assignments with
    incremental consistency pruning against every table entry.  Candidate
    values for a composite cell are forced as soon as one decomposition
    has fully assigned factors.
    """
    obs = sorted(C.objects)
    one_free = sorted((f for f, c in C.one_cells.items() if not c.identity),
                      key=lambda i: (len(i), i))
    two_free = sorted((a for a, c in C.two_cells.items() if not c.identity),
                      key=lambda i: (len(i), i))
    comp_items = sorted(C.comp1.items())
    vcomp_items = sorted(C.vcomp.items())
    wl_items = sorted(C.whisker_l.items())
    wr_items = sorted(C.whisker_r.items())

    d_hom = {}
    for f, c in D.one_cells.items():
        d_hom.setdefault((c.src, c.tgt), []).append(f)
    for v in d_hom.values():
        v.sort()

    results = []

    def one_image(m1, f):
        return m1.get(f)

    def extend_two(mo, m1):
        m2 = {C.identity2_of(f): D.identity2_of(m1[f]) for f in C.one_cells}

        def ok2(m2):
            for (b, a), r in vcomp_items:
                ib, ia, ir = m2.get(b), m2.get(a), m2.get(r)
                if ib and ia and ir and D.vert(ib, ia) != ir:
                    return False
            for (c, a), r in wl_items:
                ia, ir = m2.get(a), m2.get(r)
                if ia and ir and D.wl(m1[c], ia) != ir:
                    return False
            for (a, c), r in wr_items:
                ia, ir = m2.get(a), m2.get(r)
                if ia and ir and D.wr(ia, m1[c]) != ir:
                    return False
            return True

        def rec2(i):
            if i == len(two_free):
                results.append(TwoFunctor(
                    tuple(sorted(mo.items())),
                    tuple(sorted(m1.items())),
                    tuple(sorted(m2.items()))))
                return
            a = two_free[i]
            cell = C.two_cells[a]
            cands = D.two_cells_between(m1[cell.src], m1[cell.tgt])
            for (b2, a2), r in vcomp_items:
                if r == a and b2 in m2 and a2 in m2:
                    cands = [D.vert(m2[b2], m2[a2])]
                    break
            for v in cands:
                if D.two_cells[v].src != m1[cell.src] or \
                        D.two_cells[v].tgt != m1[cell.tgt]:
                    continue
                m2[a] = v
                if ok2(m2):
                    rec2(i + 1)
                del m2[a]

        rec2(0)

    def ok1(m1):
        for (g, f), r in comp_items:
            vg, vf, vr = m1.get(g), m1.get(f), m1.get(r)
            if vg and vf and vr and D.comp(vg, vf) != vr:
                return False
        return True

    def rec1(i, mo, m1):
        if i == len(one_free):
            extend_two(mo, m1)
            return
        f = one_free[i]
        cell = C.one_cells[f]
        cands = d_hom.get((mo[cell.src], mo[cell.tgt]), [])
        for (g2, f2), r in comp_items:
            if r == f and g2 in m1 and f2 in m1:
                cands = [D.comp(m1[g2], m1[f2])]
                break
        for v in cands:
            dc = D.one_cells[v]
            if (dc.src, dc.tgt) != (mo[cell.src], mo[cell.tgt]):
                continue
            m1[f] = v
            if ok1(m1):
                rec1(i + 1, mo, m1)
            del m1[f]

    def rec0(i, mo):
        if i == len(obs):
            m1 = {C.identity_of(x): D.identity_of(mo[x]) for x in obs}
            rec1(0, mo, m1)
            return
        for y in D.objects:
            mo[obs[i]] = y
            rec0(i + 1, mo)
            del mo[obs[i]]

    rec0(0, {})
    return results


# -- finite 1-categories and standard 2-categories ----------------------------

@dataclass(frozen=True)
class FiniteCategory:
    """A finite 1-category: arrow table with identities flagged."""

    objects: tuple
    arrows: tuple  # of OneCell
    comp: tuple    # of ((g, f), result)

    def arrow_map(self):
        return {a.id: a for a in self.arrows}

    def comp_map(self):
        return dict(self.comp)


def chain_category(m):
    """The totally ordered set [m] as a category; m = -1 gives the empty one."""
    objs = [str(i) for i in range(m + 1)]
    arrows = []
    comp = {}
    for i in range(m + 1):
        for j in range(i, m + 1):
            ident = i == j
            arrows.append(OneCell(f"c{i}{j}", str(i), str(j), ident))
    for i in range(m + 1):
        for j in range(i, m + 1):
            for k in range(j, m + 1):
                comp[(f"c{j}{k}", f"c{i}{j}")] = f"c{i}{k}"
    return FiniteCategory(tuple(objs), tuple(arrows), tuple(sorted(comp.items())))


def iso_category():
    """The free isomorphism: x ~= y."""
    arrows = (
        OneCell("ix", "x", "x", True), OneCell("iy", "y", "y", True),
        OneCell("f", "x", "y"), OneCell("g", "y", "x"))
    comp = {
        ("ix", "ix"): "ix", ("iy", "iy"): "iy",
        ("f", "ix"): "f", ("iy", "f"): "f",
        ("g", "iy"): "g", ("ix", "g"): "g",
        ("g", "f"): "ix", ("f", "g"): "iy",
    }
    return FiniteCategory(("x", "y"), arrows, tuple(sorted(comp.items())))


def parallel_pair_category():
    """The free parallel pair of arrows x => y."""
    arrows = (
        OneCell("ix", "x", "x", True), OneCell("iy", "y", "y", True),
        OneCell("s", "x", "y"), OneCell("t", "x", "y"))
    comp = {
        ("ix", "ix"): "ix", ("iy", "iy"): "iy",
        ("s", "ix"): "s", ("iy", "s"): "s",
        ("t", "ix"): "t", ("iy", "t"): "t",
    }
    return FiniteCategory(("x", "y"), arrows, tuple(sorted(comp.items())))


def two_category_from_category(D, name=""):
    """Read a 1-category as a locally discrete 2-category."""
    arrows = D.arrow_map()
    two = [TwoCell(f"i2_{f}", f, f, True) for f in sorted(arrows)]
    vcomp = {(f"i2_{f}", f"i2_{f}"): f"i2_{f}" for f in arrows}
    wl, wr = {}, {}
    comp = D.comp_map()
    for c in arrows.values():
        for f in arrows.values():
            if f.tgt == c.src:
                wl[(c.id, f"i2_{f.id}")] = f"i2_{comp[(c.id, f.id)]}"
            if f.src == c.tgt:
                wr[(f"i2_{f.id}", c.id)] = f"i2_{comp[(f.id, c.id)]}"
    return FiniteTwoCategory(D.objects, list(D.arrows), comp, two, vcomp,
                             wl, wr, name=name)


def suspension(D, name=""):
    """Two objects x, y with hom(x, y) = D and no other non-identity cells."""
    arrows = D.arrow_map()
    comp = D.comp_map()
    one = [OneCell("ix", "x", "x", True), OneCell("iy", "y", "y", True)]
    one += [OneCell(f"s_{o}", "x", "y") for o in sorted(D.objects)]
    two = [TwoCell("i2_ix", "ix", "ix", True), TwoCell("i2_iy", "iy", "iy", True)]
    for a in sorted(arrows):
        cell = arrows[a]
        two.append(TwoCell(f"s_{a}", f"s_{cell.src}", f"s_{cell.tgt}",
                           cell.identity))
    comp1 = {("ix", "ix"): "ix", ("iy", "iy"): "iy"}
    for o in D.objects:
        comp1[(f"s_{o}", "ix")] = f"s_{o}"
        comp1[("iy", f"s_{o}")] = f"s_{o}"
    vcomp = {("i2_ix", "i2_ix"): "i2_ix", ("i2_iy", "i2_iy"): "i2_iy"}
    for (b, a), r in comp.items():
        vcomp[(f"s_{b}", f"s_{a}")] = f"s_{r}"
    wl = {("ix", "i2_ix"): "i2_ix", ("iy", "i2_iy"): "i2_iy"}
    wr = {("i2_ix", "ix"): "i2_ix", ("i2_iy", "iy"): "i2_iy"}
    for a in sorted(arrows):
        wl[("iy", f"s_{a}")] = f"s_{a}"
        wr[(f"s_{a}", "ix")] = f"s_{a}"
    for o in sorted(D.objects):
        wl[(f"s_{o}", "i2_ix")] = f"i2_s_{o}"
        wr[("i2_iy", f"s_{o}")] = f"i2_s_{o}"
    # identity 2-cells on the s_o 1-cells come from identity arrows of D;
    # rename those entries to the canonical flagged ids
    two_ids = {c.id for c in two}
    fix = {}
    for o in D.objects:
        ident = next(a for a, c in arrows.items()
                     if c.identity and c.src == o)
        fix[f"i2_s_{o}"] = f"s_{ident}"
    wl = {k: fix.get(v, v) for k, v in wl.items()}
    wr = {k: fix.get(v, v) for k, v in wr.items()}
    assert all(v in two_ids for v in wl.values())
    return FiniteTwoCategory(("x", "y"), one, comp1, two, vcomp, wl, wr,
                             name=name)


def oriental2(m):
    """The 2-truncated m-th oriental.

    Objects 0..m; 1-cells are strictly increasing vertex paths, composed by
    concatenation; hom(i, j) is the inclusion poset of sets of interior
    vertices, with the direct edge below every refinement.
    """
    if not 0 <= m <= 6:
        raise InvalidInput("oriental2 supports 0 <= m <= 6")
    objs = [str(i) for i in range(m + 1)]
    paths = []  # tuples of vertices, len >= 2
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            for r in range(j - i):
                for mid in itertools.combinations(range(i + 1, j), r):
                    paths.append((i, *mid, j))
    pid = lambda p: "f" + "".join(map(str, p))
    one = [OneCell(f"e{i}", str(i), str(i), True) for i in range(m + 1)]
    one += [OneCell(pid(p), str(p[0]), str(p[-1])) for p in sorted(paths)]
    comp1 = {}
    for i in range(m + 1):
        comp1[(f"e{i}", f"e{i}")] = f"e{i}"
    for p in paths:
        comp1[(pid(p), f"e{p[0]}")] = pid(p)
        comp1[(f"e{p[-1]}", pid(p))] = pid(p)
        for q in paths:
            if q[0] == p[-1]:
                comp1[(pid(q), pid(p))] = pid(p + q[1:])
    two = []
    vcomp, wl, wr = {}, {}, {}
    # 2-cells: P => Q between parallel paths with interior(P) <= interior(Q)
    cells2 = []
    for p in paths:
        for q in paths:
            if (p[0], p[-1]) == (q[0], q[-1]) and set(p) <= set(q):
                cells2.append((p, q))
    aid = lambda p, q: f"a{''.join(map(str, p))}>{''.join(map(str, q))}"
    for p, q in sorted(cells2):
        two.append(TwoCell(aid(p, q), pid(p), pid(q), p == q))
    two += [TwoCell(f"ie{i}", f"e{i}", f"e{i}", True) for i in range(m + 1)]
    for i in range(m + 1):
        vcomp[(f"ie{i}", f"ie{i}")] = f"ie{i}"
    for p, q in cells2:
        for q2, r in cells2:
            if q2 == q:
                vcomp[(aid(q, r), aid(p, q))] = aid(p, r)
    for p, q in cells2:
        a = aid(p, q)
        wl[(f"e{p[-1]}", a)] = a
        wr[(a, f"e{p[0]}")] = a
        for c in paths:
            if c[0] == p[-1]:
                wl[(pid(c), a)] = aid(p + c[1:], q + c[1:])
            if c[-1] == p[0]:
                wr[(a, pid(c))] = aid(c + p[1:], c + q[1:])
    for i in range(m + 1):
        for c in paths:
            if c[0] == i:
                wl[(pid(c), f"ie{i}")] = aid(c, c)
            if c[-1] == i:
                wr[(f"ie{i}", pid(c))] = aid(c, c)
        wl[(f"e{i}", f"ie{i}")] = f"ie{i}"
        wr[(f"ie{i}", f"e{i}")] = f"ie{i}"
    return FiniteTwoCategory(objs, one, comp1, two, vcomp, wl, wr,
                             name=f"O2[{m}]")


def inverted_oriental2():
    """O2[2] with a strict inverse adjoined to its unique non-identity 2-cell."""
    C = oriental2(2)
    two = list(C.two_cells.values())
    alpha = "a02>012"
    beta = "b012>02"
    two.append(TwoCell(beta, "f012", "f02"))
    vcomp = dict(C.vcomp)
    id_a, id_c = "a02>02", "a012>012"
    vcomp[(beta, alpha)] = id_a
    vcomp[(alpha, beta)] = id_c
    vcomp[(beta, id_c)] = beta
    vcomp[(id_a, beta)] = beta
    wl = dict(C.whisker_l)
    wr = dict(C.whisker_r)
    wl[("e2", beta)] = beta
    wr[(beta, "e0")] = beta
    return FiniteTwoCategory(C.objects, list(C.one_cells.values()), dict(C.comp1),
                             two, vcomp, wl, wr, name="IO2[2]")


def z2_two_cell_group():
    """One object, one 1-cell, 2-cell group {1, sigma} with sigma^2 = 1."""
    one = [OneCell("e", "*", "*", True)]
    two = [TwoCell("u", "e", "e", True), TwoCell("sg", "e", "e")]
    comp1 = {("e", "e"): "e"}
    vcomp = {("u", "u"): "u", ("u", "sg"): "sg",
             ("sg", "u"): "sg", ("sg", "sg"): "u"}
    wl = {("e", "u"): "u", ("e", "sg"): "sg"}
    wr = {("u", "e"): "u", ("sg", "e"): "sg"}
    return FiniteTwoCategory(("*",), one, comp1, two, vcomp, wl, wr, name="Z2")


class EffectiveTwoCategory:
    """Interface for 2-categories given by decision procedures, not tables."""

    def object_list(self):
        raise NotImplementedError

    def one_cells_upto(self, max_len):
        raise NotImplementedError

    def compose(self, w2, w1):
        raise NotImplementedError

    def unique_two_cell(self, a, b):
        raise NotImplementedError


class FreeAdjointEquivalence(EffectiveTwoCategory):
    """The free adjoint equivalence on f: x -> y, g: y -> x.

    1-cells are the alternating words in f and g, in normal form as plain
    strings read in application order ("fg" means g after f).  Between any
    two parallel words there is exactly one 2-cell: the hom-categories are
    contractible groupoids, which is what makes the decision procedure a
    constant.
    """

    name = "E"
    objects = ("x", "y")

    def object_list(self):
        return list(self.objects)

    def is_word(self, w):
        """Normal forms: anchored pairs (src, word) with alternating word."""
        o, a = w
        if o not in self.objects or any(ch not in "fg" for ch in a):
            return False
        if a and (o == "x") != (a[0] == "f"):
            return False
        return all(p != q for p, q in zip(a, a[1:]))

    def src(self, w):
        return w[0]

    def tgt(self, w):
        o, a = w
        if not a:
            return o
        return "y" if a[-1] == "f" else "x"

    def one_cells_upto(self, max_len, src=None, tgt=None):
        out = [("x", ""), ("y", "")]
        for n in range(1, max_len + 1):
            for first in "fg":
                a = "".join("fg"[(i + (first == "g")) % 2] for i in range(n))
                out.append((("x" if first == "f" else "y"), a))
        if src is not None:
            out = [w for w in out if self.src(w) == src and self.tgt(w) == tgt]
        return sorted(out)

    def compose(self, w2, w1):
        """w2 after w1, by concatenation of alternating words."""
        if self.tgt(w1) != self.src(w2):
            raise InvalidInput("words not composable")
        word = (w1[0], w1[1] + w2[1])
        if not self.is_word(word):
            raise InvalidInput("concatenation is not alternating")
        return word

    def unique_two_cell(self, w1, w2):
        """Total decision procedure; hom-categories are contractible groupoids."""
        if not (self.is_word(w1) and self.is_word(w2)):
            raise InvalidInput("not a normal form")
        return self.src(w1) == self.src(w2) and self.tgt(w1) == self.tgt(w2)


def standard_examples():
    """The bundled catalog, keyed by short names."""
    cat = {}
    cat["empty"] = two_category_from_category(chain_category(-1), name="[-1]")
    for m in range(7):
        cat[f"chain-{m}"] = two_category_from_category(
            chain_category(m), name=f"[{m}]")
    cat["iso"] = two_category_from_category(iso_category(), name="I")
    cat["sigma-iso"] = suspension(iso_category(), name="Sigma I")
    cat["sigma-arrow"] = suspension(chain_category(1), name="Sigma [1]")
    cat["sigma-parallel"] = suspension(parallel_pair_category(),
                                       name="Sigma parallel")
    cat["oriental-2"] = oriental2(2)
    cat["oriental-3"] = oriental2(3)
    cat["inv-oriental-2"] = inverted_oriental2()
    cat["z2"] = z2_two_cell_group()
    return cat


def free_adjoint_equivalence():
    return FreeAdjointEquivalence()
