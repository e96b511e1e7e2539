"""Truncated presheaves on the stratified simplex category.

A ``TruncatedTDeltaSet`` stores, for each level ``m`` up to a bound ``dim``,
a finite simplex set with face and degeneracy maps, and for ``m >= 1`` a
finite set of marking tokens with an underlying-simplex map.  Comarking
``zeta_i : S_m -> M_{m+1}`` picks the token of the i-th degeneracy, so the
presheaf relations are

    u(zeta_i(x)) = s_i(x)              and
    zeta_{j+1}(s_i(x)) = zeta_i(s_j(x))   for i <= j,

on top of the usual simplicial identities.  Tokens over one simplex need not
be unique; stratified means every ``u`` is injective.

Ids are strings; internally every level is compiled to integer arrays so the
enumeration kernels stay cheap.  Values are immutable after construction.
"""

from __future__ import annotations

import itertools
import os
from functools import cached_property

from .twocat import InvalidInput


DEFAULT_BUDGET = 50_000_000


def get_budget(budget=None):
    if budget is not None:
        return budget
    env = os.environ.get("COMPLICIAL_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class BudgetExceeded(RuntimeError):
    """Search budget exhausted; distinct from a definitive negative answer."""


class TruncatedTDeltaSet:
    def __init__(self, dim, simplices, faces, degeneracies, tokens, zeta,
                 name=""):
        if dim < 0:
            raise InvalidInput("dimension bound must be >= 0")
        self.dim = dim
        self.name = name
        self._ids = []
        self._idx = []
        for m in range(dim + 1):
            ids = sorted(simplices.get(m, ()))
            self._ids.append(ids)
            self._idx.append({s: i for i, s in enumerate(ids)})
            if len(self._idx[m]) != len(ids):
                raise InvalidInput(f"duplicate simplex ids at level {m}")
        self._face = [None]
        for m in range(1, dim + 1):
            self._face.append(
                [[self._lookup(m - 1, faces.get((m, i, s), None))
                  for s in self._ids[m]] for i in range(m + 1)])
        self._deg = []
        for m in range(dim):
            self._deg.append(
                [[self._lookup(m + 1, degeneracies.get((m, i, s), None))
                  for s in self._ids[m]] for i in range(m + 1)])
        self._deg.append(None)
        self._tok_ids = [None]
        self._tok_idx = [None]
        self._tok_under = [None]
        for m in range(1, dim + 1):
            pairs = sorted(tokens.get(m, ()))
            ids = [t for t, _ in pairs]
            self._tok_ids.append(ids)
            self._tok_idx.append({t: i for i, t in enumerate(ids)})
            if len(self._tok_idx[m]) != len(ids):
                raise InvalidInput(f"duplicate token ids at level {m}")
            self._tok_under.append([self._lookup(m, u) for _, u in pairs])
        self._zeta = []
        for m in range(dim):
            self._zeta.append(
                [[self._tok_lookup(m + 1, zeta.get((m, i, s), None))
                  for s in self._ids[m]] for i in range(m + 1)])
        self._zeta.append(None)

    def _lookup(self, m, sid):
        if sid is None:
            return -1
        try:
            return self._idx[m][sid]
        except KeyError:
            raise InvalidInput(f"unknown simplex {sid!r} at level {m}")

    def _tok_lookup(self, m, tid):
        if tid is None:
            return -1
        try:
            return self._tok_idx[m][tid]
        except KeyError:
            raise InvalidInput(f"unknown token {tid!r} at level {m}")

    # -- id-level accessors --------------------------------------------------

    def simplex_ids(self, m):
        return list(self._ids[m]) if 0 <= m <= self.dim else []

    def token_ids(self, m):
        return list(self._tok_ids[m]) if 1 <= m <= self.dim else []

    def face_of(self, m, i, sid):
        j = self._face[m][i][self._idx[m][sid]]
        if j < 0:
            raise InvalidInput(f"face d_{i} undefined on {sid!r}")
        return self._ids[m - 1][j]

    def degeneracy_of(self, m, i, sid):
        j = self._deg[m][i][self._idx[m][sid]]
        if j < 0:
            raise InvalidInput(f"degeneracy s_{i} undefined on {sid!r}")
        return self._ids[m + 1][j]

    def under_of(self, m, tid):
        return self._ids[m][self._tok_under[m][self._tok_idx[m][tid]]]

    def zeta_of(self, m, i, sid):
        j = self._zeta[m][i][self._idx[m][sid]]
        if j < 0:
            raise InvalidInput(f"zeta_{i} undefined on {sid!r}")
        return self._tok_ids[m + 1][j]

    def tokens_over(self, m, sid):
        return [self._tok_ids[m][t]
                for t in self._tokens_over_idx[m].get(self._idx[m][sid], [])]

    def is_degenerate(self, m, sid):
        return self._deg_wit[m][self._idx[m][sid]] is not None

    def nondegenerate_ids(self, m):
        if not 0 <= m <= self.dim:
            return []
        wit = self._deg_wit[m]
        return [s for i, s in enumerate(self._ids[m]) if wit[i] is None]

    def counts(self):
        return {
            "simplices": [len(self._ids[m]) for m in range(self.dim + 1)],
            "nondegenerate": [len(self.nondegenerate_ids(m))
                              for m in range(self.dim + 1)],
            "tokens": [len(self._tok_ids[m]) for m in range(1, self.dim + 1)],
        }

    def __repr__(self):
        return (f"TruncatedTDeltaSet({self.name or 'anonymous'}, dim={self.dim}, "
                f"sizes={[len(x) for x in self._ids]})")

    # -- derived structure ----------------------------------------------------

    @cached_property
    def _deg_wit(self):
        """Per level: smallest (i, preimage index) writing the simplex as s_i."""
        wit = [[None] * len(self._ids[m]) for m in range(self.dim + 1)]
        for m in range(self.dim):
            for i in range(m + 1):
                row = self._deg[m][i]
                for j, target in enumerate(row):
                    if target >= 0 and wit[m + 1][target] is None:
                        wit[m + 1][target] = (i, j)
        for m in range(self.dim):  # prefer smallest i deterministically
            for i in reversed(range(m + 1)):
                row = self._deg[m][i]
                for j, target in enumerate(row):
                    if target >= 0:
                        wit[m + 1][target] = (i, j)
        return wit

    @cached_property
    def _tokens_over_idx(self):
        out = [None]
        for m in range(1, self.dim + 1):
            d = {}
            for t, u in enumerate(self._tok_under[m]):
                d.setdefault(u, []).append(t)
            out.append(d)
        return out

    @cached_property
    def _zeta_wit(self):
        """Per token level: canonical (i, simplex index) witness, if comarked."""
        wit = [None] + [[None] * len(self._tok_ids[m])
                        for m in range(1, self.dim + 1)]
        for m in reversed(range(self.dim)):
            for i in reversed(range(m + 1)):
                for j, t in enumerate(self._zeta[m][i]):
                    if t >= 0:
                        wit[m + 1][t] = (i, j)
        return wit

    @cached_property
    def _zeta_simplex_determined(self):
        """True when zeta values depend only on the underlying simplex.

        Every construction in this library has the property; when the
        codomain of a map search has it, zeta-compatibility of derived
        token images is automatic and the kernel skips those checks.
        """
        for m in range(self.dim):
            chosen = {}
            for i in range(m + 1):
                deg = self._deg[m][i]
                zet = self._zeta[m][i]
                for j in range(len(self._ids[m])):
                    t = zet[j]
                    if t < 0:
                        continue
                    target = deg[j]
                    if chosen.setdefault(target, t) != t:
                        return False
        return True

    @cached_property
    def _lean_tables(self):
        """Degenerate-fill plan pruned to entries later slots actually read."""
        dfill, _, _ = self._lift_tables
        used = [set() for _ in range(self.dim + 1)]
        for m in range(1, self.dim + 1):
            wit = self._deg_wit[m]
            for j in range(len(self._ids[m])):
                if wit[j] is None:
                    for i in range(m + 1):
                        used[m - 1].add(self._face[m][i][j])
        for m in range(1, self.dim + 1):
            zwit = self._zeta_wit[m]
            for j in range(len(self._tok_ids[m])):
                if zwit[j] is None:
                    used[m].add(self._tok_under[m][j])
        out = [[] for _ in range(self.dim + 1)]
        for m in range(self.dim, 0, -1):
            keep = [e for e in dfill[m] if e[0] in used[m]]
            out[m] = keep
            for _, _, pre in keep:
                used[m - 1].add(pre)
        return out

    @cached_property
    def _lift_tables(self):
        """Per-level derivation plans for the enumeration kernel.

        dfill[m]: (index, i, preimage index) for each degenerate simplex;
        tderive[m]: (token, i, x) canonical zeta witness per comarked token;
        tcheck[m]: remaining zeta entries (token, i, x) to verify.
        """
        dfill = [[] for _ in range(self.dim + 1)]
        for m in range(1, self.dim + 1):
            wit = self._deg_wit[m]
            for j, w in enumerate(wit):
                if w is not None:
                    dfill[m].append((j, w[0], w[1]))
        tderive = [None] + [[] for _ in range(self.dim)]
        tcheck = [None] + [[] for _ in range(self.dim)]
        for m in range(1, self.dim + 1):
            zwit = self._zeta_wit[m]
            for t, w in enumerate(zwit):
                if w is not None:
                    tderive[m].append((t, w[0], w[1]))
            for i in range(m):
                row = self._zeta[m - 1][i]
                for x, t in enumerate(row):
                    if t >= 0 and zwit[t] != (i, x):
                        tcheck[m].append((t, i, x))
        return dfill, tderive, tcheck

    @cached_property
    def _by_boundary(self):
        out = [None]
        for m in range(1, self.dim + 1):
            d = {}
            rows = self._face[m]
            for j in range(len(self._ids[m])):
                key = tuple(rows[i][j] for i in range(m + 1))
                d.setdefault(key, []).append(j)
            out.append(d)
        return out

    # -- checks ----------------------------------------------------------------

    def validate(self):
        """Presheaf relation report; empty means valid."""
        errs = []
        add = errs.append
        for m in range(1, self.dim + 1):
            for i in range(m + 1):
                for j, v in enumerate(self._face[m][i]):
                    if v < 0:
                        add(f"d_{i} missing on {self._ids[m][j]} (level {m})")
        for m in range(self.dim):
            for i in range(m + 1):
                for j, v in enumerate(self._deg[m][i]):
                    if v < 0:
                        add(f"s_{i} missing on {self._ids[m][j]} (level {m})")
                for j, v in enumerate(self._zeta[m][i]):
                    if v < 0:
                        add(f"zeta_{i} missing on {self._ids[m][j]} (level {m})")
        if errs:
            return errs
        for m in range(2, self.dim + 1):
            for j in range(m + 1):
                for i in range(j):
                    for s in range(len(self._ids[m])):
                        lhs = self._face[m - 1][i][self._face[m][j][s]]
                        rhs = self._face[m - 1][j - 1][self._face[m][i][s]]
                        if lhs != rhs:
                            add(f"d_{i} d_{j} != d_{j-1} d_{i} "
                                f"at {self._ids[m][s]}")
        for m in range(self.dim - 1):
            for i in range(m + 1):
                for j in range(i, m + 1):
                    for s in range(len(self._ids[m])):
                        lhs = self._deg[m + 1][i][self._deg[m][j][s]]
                        rhs = self._deg[m + 1][j + 1][self._deg[m][i][s]]
                        if lhs != rhs:
                            add(f"s_{i} s_{j} != s_{j+1} s_{i} "
                                f"at {self._ids[m][s]}")
        for m in range(self.dim):
            for j in range(m + 1):
                for i in range(m + 2):
                    for s in range(len(self._ids[m])):
                        got = self._face[m + 1][i][self._deg[m][j][s]]
                        if i < j:
                            want = self._deg[m - 1][j - 1][self._face[m][i][s]] \
                                if m >= 1 else -2
                        elif i in (j, j + 1):
                            want = s
                        else:
                            want = self._deg[m - 1][j][self._face[m][i - 1][s]] \
                                if m >= 1 else -2
                        if got != want:
                            add(f"d_{i} s_{j} identity fails "
                                f"at {self._ids[m][s]}")
        for m in range(self.dim):
            for i in range(m + 1):
                for s in range(len(self._ids[m])):
                    t = self._zeta[m][i][s]
                    if self._tok_under[m + 1][t] != self._deg[m][i][s]:
                        add(f"u(zeta_{i}) != s_{i} at {self._ids[m][s]}")
        for m in range(self.dim - 1):
            for i in range(m + 1):
                for j in range(i, m + 1):
                    for s in range(len(self._ids[m])):
                        lhs = self._zeta[m + 1][j + 1][self._deg[m][i][s]]
                        rhs = self._zeta[m + 1][i][self._deg[m][j][s]]
                        if lhs != rhs:
                            add(f"zeta_{j+1} s_{i} != zeta_{i} s_{j} "
                                f"at {self._ids[m][s]}")
        return errs

    def is_stratified(self):
        for m in range(1, self.dim + 1):
            seen = set()
            for u in self._tok_under[m]:
                if u in seen:
                    return False
                seen.add(u)
        return True

    def same_as(self, other):
        return (self.dim == other.dim and self._ids == other._ids and
                self._face == other._face and self._deg == other._deg and
                self._tok_ids == other._tok_ids and
                self._tok_under == other._tok_under and
                self._zeta == other._zeta)

    # -- JSON -------------------------------------------------------------------

    def to_json_dict(self):
        faces = []
        for m in range(1, self.dim + 1):
            for i in range(m + 1):
                for j, s in enumerate(self._ids[m]):
                    faces.append([m, i, s, self._ids[m - 1][self._face[m][i][j]]])
        degs = []
        zeta = []
        for m in range(self.dim):
            for i in range(m + 1):
                for j, s in enumerate(self._ids[m]):
                    degs.append([m, i, s, self._ids[m + 1][self._deg[m][i][j]]])
                    zeta.append([m, i, s, self._tok_ids[m + 1][self._zeta[m][i][j]]])
        return {
            "dim": self.dim,
            "simplices": [list(self._ids[m]) for m in range(self.dim + 1)],
            "faces": faces,
            "degeneracies": degs,
            "tokens": [[{"id": t, "under": self._ids[m][self._tok_under[m][i]]}
                        for i, t in enumerate(self._tok_ids[m])]
                       for m in range(1, self.dim + 1)],
            "zeta": zeta,
        }

    @classmethod
    def from_json_dict(cls, doc, name=""):
        try:
            dim = int(doc["dim"])
            simplices = {m: list(v) for m, v in enumerate(doc["simplices"])}
            faces = {(m, i, s): y for m, i, s, y in doc["faces"]}
            degs = {(m, i, s): y for m, i, s, y in doc["degeneracies"]}
            tokens = {m + 1: [(d["id"], d["under"]) for d in lvl]
                      for m, lvl in enumerate(doc["tokens"])}
            zeta = {(m, i, s): t for m, i, s, t in doc["zeta"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad tDelta-set document: {exc}") from exc
        return cls(dim, simplices, faces, degs, tokens, zeta, name=name)


def validate(X):
    return X.validate()


def is_stratified(X):
    return X.is_stratified()


# -- maps of tDelta-sets --------------------------------------------------------

class TDeltaMap:
    """Levelwise map, stored on non-degenerate simplices and free tokens.

    Degenerate simplex values derive through the Eilenberg-Zilber witness;
    comarked token values derive through zeta.
    """

    def __init__(self, src, dst, simplex_map, token_map):
        self.src = src
        self.dst = dst
        self.simplex_map = dict(simplex_map)
        self.token_map = dict(token_map)

    def apply_simplex(self, m, sid):
        got = self.simplex_map.get((m, sid))
        if got is not None:
            return got
        wit = self.src._deg_wit[m][self.src._idx[m][sid]]
        if wit is None:
            raise InvalidInput(f"map undefined on non-degenerate {sid!r}")
        i, pre = wit
        below = self.apply_simplex(m - 1, self.src._ids[m - 1][pre])
        return self.dst.degeneracy_of(m - 1, i, below)

    def apply_token(self, m, tid):
        got = self.token_map.get((m, tid))
        if got is not None:
            return got
        wit = self.src._zeta_wit[m][self.src._tok_idx[m][tid]]
        if wit is None:
            raise InvalidInput(f"map undefined on free token {tid!r}")
        i, x = wit
        below = self.apply_simplex(m - 1, self.src._ids[m - 1][x])
        return self.dst.zeta_of(m - 1, i, below)

    def simplex_table(self):
        return {(m, s): self.apply_simplex(m, s)
                for m in range(self.src.dim + 1)
                for s in self.src.simplex_ids(m)}

    def token_table(self):
        return {(m, t): self.apply_token(m, t)
                for m in range(1, self.src.dim + 1)
                for t in self.src.token_ids(m)}

    def equals(self, other):
        return (self.src.same_as(other.src) and self.dst.same_as(other.dst)
                and self.simplex_table() == other.simplex_table()
                and self.token_table() == other.token_table())

    def compose(self, other):
        """self after other."""
        simp = {(m, s): self.apply_simplex(m, other.apply_simplex(m, s))
                for m in range(other.src.dim + 1)
                for s in other.src.nondegenerate_ids(m)}
        tok = {}
        for m in range(1, other.src.dim + 1):
            wit = other.src._zeta_wit[m]
            for i, t in enumerate(other.src._tok_ids[m]):
                if wit[i] is None:
                    tok[(m, t)] = self.apply_token(m, other.apply_token(m, t))
        return TDeltaMap(other.src, self.dst, simp, tok)

    def is_mono(self):
        for m in range(self.src.dim + 1):
            imgs = [self.apply_simplex(m, s) for s in self.src.simplex_ids(m)]
            if len(set(imgs)) != len(imgs):
                return False
        for m in range(1, self.src.dim + 1):
            imgs = [self.apply_token(m, t) for t in self.src.token_ids(m)]
            if len(set(imgs)) != len(imgs):
                return False
        return True

    def is_valid(self):
        """Full commutation check against both structures."""
        A, X = self.src, self.dst
        try:
            for m in range(1, A.dim + 1):
                for s in A.simplex_ids(m):
                    for i in range(m + 1):
                        if self.apply_simplex(m - 1, A.face_of(m, i, s)) != \
                                X.face_of(m, i, self.apply_simplex(m, s)):
                            return False
            for m in range(A.dim):
                for s in A.simplex_ids(m):
                    for i in range(m + 1):
                        if self.apply_simplex(m + 1, A.degeneracy_of(m, i, s)) != \
                                X.degeneracy_of(m, i, self.apply_simplex(m, s)):
                            return False
                        if self.apply_token(m + 1, A.zeta_of(m, i, s)) != \
                                X.zeta_of(m, i, self.apply_simplex(m, s)):
                            return False
            for m in range(1, A.dim + 1):
                for t in A.token_ids(m):
                    if self.apply_simplex(m, A.under_of(m, t)) != \
                            X.under_of(m, self.apply_token(m, t)):
                        return False
        except (KeyError, InvalidInput):
            return False
        return True

    def to_json_dict(self):
        return {
            "simplices": [[m, s, v] for (m, s), v in sorted(self.simplex_map.items())],
            "tokens": [[m, t, v] for (m, t), v in sorted(self.token_map.items())],
        }


def map_from_json_dict(src, dst, doc):
    try:
        simp = {(m, s): v for m, s, v in doc["simplices"]}
        tok = {(m, t): v for m, t, v in doc["tokens"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"bad map document: {exc}") from exc
    return TDeltaMap(src, dst, simp, tok)


def identity_map(X):
    simp = {(m, s): s for m in range(X.dim + 1) for s in X.nondegenerate_ids(m)}
    tok = {}
    for m in range(1, X.dim + 1):
        wit = X._zeta_wit[m]
        tok.update({(m, t): t for i, t in enumerate(X._tok_ids[m])
                    if wit[i] is None})
    return TDeltaMap(X, X, simp, tok)


def inclusion_map(A, X):
    """The inclusion when A's generators carry the same ids inside X."""
    simp = {(m, s): s for m in range(A.dim + 1) for s in A.nondegenerate_ids(m)}
    tok = {}
    for m in range(1, A.dim + 1):
        wit = A._zeta_wit[m]
        tok.update({(m, t): t for i, t in enumerate(A._tok_ids[m])
                    if wit[i] is None})
    return TDeltaMap(A, X, simp, tok)


# -- enumeration kernel -----------------------------------------------------------

def _iter_maps(A, X, budget, seed_simp=None, seed_tok=None, reverse=False):
    """Backtracking enumeration of tDelta-maps A -> X, canonical order.

    ``seed_simp``/``seed_tok`` pre-assign images (by integer index) and are
    used for lifting problems.  Yields (simg, timg) index arrays; the caller
    converts to TDeltaMap.  Raises BudgetExceeded when the node budget runs
    out.
    """
    if A.dim > X.dim:
        raise InvalidInput("domain truncation exceeds codomain truncation")
    steps = 0
    simg = [row[:] if row else [-1] * len(A._ids[m])
            for m, row in enumerate(seed_simp or [])] or \
        [[-1] * len(A._ids[m]) for m in range(A.dim + 1)]
    timg = [None] + [row[:] for row in (seed_tok or [None])[1:]] if seed_tok \
        else [None] + [[-1] * len(A._tok_ids[m]) for m in range(1, A.dim + 1)]

    slots = []
    for m in range(A.dim + 1):
        slots.append(("sfill", m))
        wit = A._deg_wit[m]
        for j in range(len(A._ids[m])):
            if wit[j] is None and simg[m][j] < 0:
                slots.append(("snd", m, j))
        if m >= 1:
            slots.append(("tfill", m))
            zwit = A._zeta_wit[m]
            for j in range(len(A._tok_ids[m])):
                if zwit[j] is None and timg[m][j] < 0:
                    slots.append(("tnd", m, j))

    x_tokens_over = X._tokens_over_idx
    x_boundary = X._by_boundary

    if X._zeta_simplex_determined:
        dfill = A._lean_tables
        tderive = tcheck = [()] * (A.dim + 1)
    else:
        dfill, tderive, tcheck = A._lift_tables

    def candidates(slot):
        kind = slot[0]
        if kind == "sfill":
            m = slot[1]
            below = simg[m - 1] if m else None
            here = simg[m]
            x_deg = X._deg[m - 1] if m else None
            writes = []
            for j, i, pre in dfill[m]:
                val = x_deg[i][below[pre]]
                cur = here[j]
                if cur < 0:
                    writes.append((m, j, val))
                elif cur != val:
                    return iter(())
            return iter([writes])
        if kind == "tfill":
            m = slot[1]
            below = simg[m - 1]
            here = timg[m]
            x_zeta = X._zeta[m - 1]
            writes = []
            vals = {}
            for t, i, x in tderive[m]:
                val = x_zeta[i][below[x]]
                cur = here[t]
                if cur < 0:
                    writes.append(("tok", m, t, val))
                    vals[t] = val
                elif cur != val:
                    return iter(())
                else:
                    vals[t] = val
            for t, i, x in tcheck[m]:
                if x_zeta[i][below[x]] != vals[t]:
                    return iter(())
            return iter([writes])
        if kind == "snd":
            _, m, j = slot
            if m == 0:
                cand = range(len(X._ids[0]))
            else:
                below = simg[m - 1]
                frow = A._face[m]
                key = tuple(below[frow[i][j]] for i in range(m + 1))
                cand = x_boundary[m].get(key, ())
            cand = list(cand)
            if reverse:
                cand.reverse()
            return iter([(m, j, v)] for v in cand)
        _, m, j = slot
        cand = list(x_tokens_over[m].get(simg[m][A._tok_under[m][j]], ()))
        if reverse:
            cand.reverse()
        return iter([("tok", m, j, v)] for v in cand)

    def write(ws):
        for w in ws:
            if w[0] == "tok":
                _, m, j, v = w
                timg[m][j] = v
            else:
                m, j, v = w
                simg[m][j] = v

    def erase(ws):
        for w in ws:
            if w[0] == "tok":
                _, m, j, _ = w
                timg[m][j] = -1
            else:
                m, j, _ = w
                simg[m][j] = -1

    if not slots:
        yield simg, timg
        return
    stack = [(candidates(slots[0]), None)]
    while stack:
        it, done = stack[-1]
        if done is not None:
            erase(done)
        try:
            ws = next(it)
        except StopIteration:
            stack.pop()
            continue
        steps += 1
        if steps > budget:
            raise BudgetExceeded(
                f"map search exceeded budget {budget} "
                f"({A.name or 'A'} -> {X.name or 'X'})")
        write(ws)
        stack[-1] = (it, ws)
        if len(stack) == len(slots):
            yield simg, timg
            continue
        stack.append((candidates(slots[len(stack)]), None))


def _to_map(A, X, simg, timg):
    simp = {}
    for m in range(A.dim + 1):
        wit = A._deg_wit[m]
        ids = A._ids[m]
        for j, w in enumerate(wit):
            if w is None:
                simp[(m, ids[j])] = X._ids[m][simg[m][j]]
    tok = {}
    for m in range(1, A.dim + 1):
        zwit = A._zeta_wit[m]
        ids = A._tok_ids[m]
        for j, w in enumerate(zwit):
            if w is None:
                tok[(m, ids[j])] = X._tok_ids[m][timg[m][j]]
    return TDeltaMap(A, X, simp, tok)


def count_generators(A):
    n = sum(len(A.nondegenerate_ids(m)) for m in range(A.dim + 1))
    for m in range(1, A.dim + 1):
        n += sum(1 for w in A._zeta_wit[m] if w is None)
    return n


def maps(A, X, budget=None, reverse=False):
    """Exhaustive, deterministic list of all tDelta-maps A -> X."""
    budget = get_budget(budget)
    if count_generators(A) > budget:
        raise BudgetExceeded("domain has more generators than the budget")
    return [_to_map(A, X, simg, timg)
            for simg, timg in _iter_maps(A, X, budget, reverse=reverse)]


def iter_maps(A, X, budget=None, reverse=False):
    budget = get_budget(budget)
    for simg, timg in _iter_maps(A, X, budget, reverse=reverse):
        yield _to_map(A, X, simg, timg)


def find_isomorphism(X, Y, budget=None):
    """First levelwise-bijective map X -> Y, or None."""
    if [len(r) for r in X._ids] != [len(r) for r in Y._ids]:
        return None
    if [len(r) for r in X._tok_ids[1:]] != [len(r) for r in Y._tok_ids[1:]]:
        return None
    for f in iter_maps(X, Y, budget=budget):
        if f.is_mono():
            return f
    return None


# -- standard stratified shapes -----------------------------------------------------

def _seq_id(seq):
    return "".join(map(str, seq))


def _build_simplicial(dim, level_seqs, marked, name):
    """Stratified object on monotone vertex sequences with minimal markings.

    ``level_seqs[m]`` lists the sequences present at level m (closed under
    faces and degeneracies); ``marked`` is a set of non-degenerate sequence
    ids to mark on top of the degenerate ones.
    """
    simplices = {m: [_seq_id(s) for s in level_seqs[m]] for m in range(dim + 1)}
    faces = {}
    degs = {}
    for m in range(1, dim + 1):
        for s in level_seqs[m]:
            for i in range(m + 1):
                faces[(m, i, _seq_id(s))] = _seq_id(s[:i] + s[i + 1:])
    for m in range(dim):
        for s in level_seqs[m]:
            for i in range(m + 1):
                degs[(m, i, _seq_id(s))] = _seq_id(s[:i + 1] + s[i:])
    tokens = {}
    for m in range(1, dim + 1):
        lvl = []
        for s in level_seqs[m]:
            sid = _seq_id(s)
            degenerate = any(a == b for a, b in zip(s, s[1:]))
            if degenerate or sid in marked:
                lvl.append((f"t|{sid}", sid))
        tokens[m] = lvl
    zeta = {}
    for m in range(dim):
        for s in level_seqs[m]:
            for i in range(m + 1):
                zeta[(m, i, _seq_id(s))] = f"t|{_seq_id(s[:i + 1] + s[i:])}"
    return TruncatedTDeltaSet(dim, simplices, faces, degs, tokens, zeta,
                              name=name)


def _monotone(m, k):
    """Monotone sequences of length k+1 with values in 0..m."""
    return list(itertools.combinations_with_replacement(range(m + 1), k + 1))


def _filtered_levels(m, dim, keep):
    return [[s for s in _monotone(m, k) if keep(frozenset(s))]
            for k in range(dim + 1)]


def delta(m, dim=None, marked=(), name=None):
    dim = m if dim is None else dim
    levels = [_monotone(m, k) for k in range(dim + 1)]
    return _build_simplicial(dim, levels, set(marked),
                             name or f"Delta[{m}]")


def delta_t(m, dim=None):
    dim = m if dim is None else dim
    if dim < m:
        raise InvalidInput("Delta[m]_t needs dim >= m")
    top = _seq_id(range(m + 1))
    return delta(m, dim, marked={top}, name=f"Delta[{m}]_t")


def boundary(m, dim=None):
    dim = max(m - 1, 0) if dim is None else dim
    full = frozenset(range(m + 1))
    levels = _filtered_levels(m, dim, lambda vs: vs != full)
    return _build_simplicial(dim, levels, set(), f"dDelta[{m}]")


def _admissible(k, m):
    return frozenset(v for v in (k - 1, k, k + 1) if 0 <= v <= m)


def _marked_for_delta_k(k, m, dim):
    need = _admissible(k, m)
    out = set()
    for lvl in range(1, dim + 1):
        for s in _monotone(m, lvl):
            if any(a == b for a, b in zip(s, s[1:])):
                continue
            if need <= frozenset(s):
                out.add(_seq_id(s))
    return out


def delta_k(k, m, dim=None):
    """The m-simplex with the k-admissible marking."""
    if not 0 <= k <= m:
        raise InvalidInput("need 0 <= k <= m")
    dim = m if dim is None else dim
    return delta(m, dim, marked=_marked_for_delta_k(k, m, dim),
                 name=f"Delta^{k}[{m}]")


def delta_k_prime(k, m, dim=None):
    dim = m if dim is None else dim
    marked = _marked_for_delta_k(k, m, dim)
    for v in (k - 1, k + 1):
        if 0 <= v <= m:
            marked.add(_seq_id([u for u in range(m + 1) if u != v]))
    return delta(m, dim, marked=marked, name=f"Delta^{k}[{m}]'")


def delta_k_dprime(k, m, dim=None):
    dim = m if dim is None else dim
    marked = _marked_for_delta_k(k, m, dim)
    for v in (k - 1, k, k + 1):
        if 0 <= v <= m:
            marked.add(_seq_id([u for u in range(m + 1) if u != v]))
    return delta(m, dim, marked=marked, name=f"Delta^{k}[{m}]''")


def horn(k, m, dim=None):
    """The k-horn of the m-simplex, marked as in the k-admissible simplex."""
    if not 0 <= k <= m:
        raise InvalidInput("need 0 <= k <= m")
    dim = m if dim is None else dim
    other = frozenset(v for v in range(m + 1) if v != k)
    levels = _filtered_levels(m, dim, lambda vs: not other <= vs)
    need = _admissible(k, m)
    marked = set()
    for lvl in range(1, dim + 1):
        for s in levels[lvl]:
            if any(a == b for a, b in zip(s, s[1:])):
                continue
            if need <= frozenset(s):
                marked.add(_seq_id(s))
    return _build_simplicial(dim, levels, marked, f"Horn^{k}[{m}]")


def delta3_eq(dim=3):
    marked = {"02", "13", "012", "013", "023", "123", "0123"}
    return delta(3, dim, marked=marked, name="Delta[3]_eq")


def delta3_sharp(dim=3):
    marked = set()
    for lvl in range(1, dim + 1):
        for s in _monotone(3, lvl):
            if all(a != b for a, b in zip(s, s[1:])):
                marked.add(_seq_id(s))
    return delta(3, dim, marked=marked, name="Delta[3]#")


def standard(name, **params):
    """Dispatcher for the named standard shapes."""
    table = {
        "Delta": delta, "Delta_t": delta_t, "Boundary": boundary,
        "Horn": horn, "Delta_k": delta_k, "Delta_k_prime": delta_k_prime,
        "Delta_k_dprime": delta_k_dprime, "Delta3_eq": delta3_eq,
        "Delta3_sharp": delta3_sharp,
    }
    if name not in table:
        raise InvalidInput(f"unknown standard shape {name!r}")
    limit = params.get("dim")
    if limit is not None and limit > 8:
        raise InvalidInput("standard shapes capped at dimension 8")
    if params.get("m", 0) > 8:
        raise InvalidInput("standard shapes capped at m = 8")
    return table[name](**params)


# -- join ------------------------------------------------------------------------

def join(A, B, out_dim=None, name=None):
    """Join of stratified sets; a*b is marked iff a or b is marked.

    Both inputs must be presented at truncation >= the output truncation so
    that mixed degeneracies stay inside the available levels; the standard
    shape constructors take a ``dim`` argument for exactly this padding.
    """
    if not A.is_stratified() or not B.is_stratified():
        raise InvalidInput("join requires stratified inputs")
    out_dim = min(A.dim, B.dim) if out_dim is None else out_dim
    if A.dim < out_dim or B.dim < out_dim:
        raise InvalidInput("join factors must be padded to the output "
                           "truncation")

    la = lambda a: f"{a}*"
    rb = lambda b: f"*{b}"
    jn = lambda a, b: f"{a}*{b}"

    simplices = {}
    faces = {}
    degs = {}
    marked = set()

    def a_marked(m, a):
        return bool(A.tokens_over(m, a))

    def b_marked(m, b):
        return bool(B.tokens_over(m, b))

    for m in range(out_dim + 1):
        lvl = [la(a) for a in A.simplex_ids(m)]
        lvl += [rb(b) for b in B.simplex_ids(m)]
        for p in range(m):
            q = m - 1 - p
            lvl += [jn(a, b) for a in A.simplex_ids(p)
                    for b in B.simplex_ids(q)]
        simplices[m] = lvl

    for m in range(1, out_dim + 1):
        for a in A.simplex_ids(m):
            for i in range(m + 1):
                faces[(m, i, la(a))] = la(A.face_of(m, i, a))
            if not A.is_degenerate(m, a) and a_marked(m, a):
                marked.add((m, la(a)))
        for b in B.simplex_ids(m):
            for i in range(m + 1):
                faces[(m, i, rb(b))] = rb(B.face_of(m, i, b))
            if not B.is_degenerate(m, b) and b_marked(m, b):
                marked.add((m, rb(b)))
        for p in range(m):
            q = m - 1 - p
            for a in A.simplex_ids(p):
                for b in B.simplex_ids(q):
                    s = jn(a, b)
                    for i in range(m + 1):
                        if i <= p:
                            faces[(m, i, s)] = rb(b) if p == 0 \
                                else jn(A.face_of(p, i, a), b)
                        else:
                            j = i - p - 1
                            faces[(m, i, s)] = la(a) if q == 0 \
                                else jn(a, B.face_of(q, j, b))
                    nd = not (A.is_degenerate(p, a) if p else False) and \
                        not (B.is_degenerate(q, b) if q else False)
                    if nd and ((p >= 1 and a_marked(p, a)) or
                               (q >= 1 and b_marked(q, b))):
                        marked.add((m, s))

    for m in range(out_dim):
        for a in A.simplex_ids(m):
            for i in range(m + 1):
                degs[(m, i, la(a))] = la(A.degeneracy_of(m, i, a))
        for b in B.simplex_ids(m):
            for i in range(m + 1):
                degs[(m, i, rb(b))] = rb(B.degeneracy_of(m, i, b))
        for p in range(m):
            q = m - 1 - p
            for a in A.simplex_ids(p):
                for b in B.simplex_ids(q):
                    s = jn(a, b)
                    for i in range(m + 1):
                        if i <= p:
                            degs[(m, i, s)] = jn(A.degeneracy_of(p, i, a), b)
                        else:
                            degs[(m, i, s)] = jn(a, B.degeneracy_of(q, i - p - 1, b))

    return _tokens_from_marks(out_dim, simplices, faces, degs, marked,
                              name or f"{A.name} * {B.name}")


def _tokens_from_marks(dim, simplices, faces, degs, marked, name):
    """Assemble a stratified object: minimal tokens plus the marked set."""
    deg_image = {}
    for (m, i, s), y in degs.items():
        deg_image.setdefault((m + 1, y), (m, i, s))
    tokens = {}
    for m in range(1, dim + 1):
        lvl = []
        for s in simplices.get(m, ()):
            if (m, s) in deg_image or (m, s) in marked:
                lvl.append((f"t|{s}", s))
        tokens[m] = lvl
    zeta = {(m, i, s): f"t|{y}" for (m, i, s), y in degs.items()}
    return TruncatedTDeltaSet(dim, simplices, faces, degs, tokens, zeta,
                              name=name)


# -- colimit-style operations ----------------------------------------------------

def coproduct(parts, name=""):
    """Disjoint union, ids prefixed by the part index."""
    if not parts:
        raise InvalidInput("empty coproduct needs an explicit dimension")
    dim = max(p.dim for p in parts)
    simplices = {m: [] for m in range(dim + 1)}
    faces, degs, zeta = {}, {}, {}
    tokens = {m: [] for m in range(1, dim + 1)}
    for idx, P in enumerate(parts):
        tag = lambda s: f"{idx}:{s}"
        for m in range(P.dim + 1):
            simplices[m] += [tag(s) for s in P.simplex_ids(m)]
            for s in P.simplex_ids(m):
                for i in range(m + 1):
                    if m >= 1:
                        faces[(m, i, tag(s))] = tag(P.face_of(m, i, s))
                    if m < P.dim:
                        degs[(m, i, tag(s))] = tag(P.degeneracy_of(m, i, s))
                        zeta[(m, i, tag(s))] = tag(P.zeta_of(m, i, s))
        for m in range(1, P.dim + 1):
            tokens[m] += [(tag(t), tag(P.under_of(m, t)))
                          for t in P.token_ids(m)]
    return TruncatedTDeltaSet(dim, simplices, faces, degs, tokens, zeta,
                              name=name)


def coproduct_injection(parts, k, P):
    """The k-th injection into coproduct(parts)."""
    part = parts[k]
    tag = lambda s: f"{k}:{s}"
    simp = {(m, s): tag(s) for m in range(part.dim + 1)
            for s in part.nondegenerate_ids(m)}
    tok = {}
    for m in range(1, part.dim + 1):
        wit = part._zeta_wit[m]
        tok.update({(m, t): tag(t) for i, t in enumerate(part._tok_ids[m])
                    if wit[i] is None})
    return TDeltaMap(part, P, simp, tok)


def pushout(f, i, prefix="B.", name=""):
    """Pushout of f: A -> X along a monomorphism i: A -> B.

    Returns (P, X -> P, B -> P).  X keeps its ids; elements of B outside the
    image of i enter with the given prefix.
    """
    A, X, B = f.src, f.dst, i.dst
    if not i.is_mono():
        raise InvalidInput("pushout implemented along monomorphisms only")
    dim = X.dim
    if B.dim > dim:
        raise InvalidInput("pushout target truncation too small")

    s_img = {}  # (m, B-id) -> (m, P-id) for the image of i
    for m in range(A.dim + 1):
        for s in A.simplex_ids(m):
            s_img[(m, i.apply_simplex(m, s))] = f.apply_simplex(m, s)
    t_img = {}
    for m in range(1, A.dim + 1):
        for t in A.token_ids(m):
            t_img[(m, i.apply_token(m, t))] = f.apply_token(m, t)

    def new_sid(m, b):
        return s_img.get((m, b)) or f"{prefix}{b}"

    def new_tid(m, t):
        return t_img.get((m, t)) or f"{prefix}{t}"

    simplices = {m: list(X.simplex_ids(m)) for m in range(dim + 1)}
    faces, degs, zeta = {}, {}, {}
    tokens = {m: [(t, X.under_of(m, t)) for t in X.token_ids(m)]
              for m in range(1, dim + 1)}
    for m in range(1, dim + 1):
        for s in X.simplex_ids(m):
            for k in range(m + 1):
                faces[(m, k, s)] = X.face_of(m, k, s)
    for m in range(dim):
        for s in X.simplex_ids(m):
            for k in range(m + 1):
                degs[(m, k, s)] = X.degeneracy_of(m, k, s)
                zeta[(m, k, s)] = X.zeta_of(m, k, s)

    for m in range(B.dim + 1):
        for b in B.simplex_ids(m):
            if (m, b) in s_img:
                continue
            sid = new_sid(m, b)
            simplices[m].append(sid)
            for k in range(m + 1):
                if m >= 1:
                    faces[(m, k, sid)] = new_sid(m - 1, B.face_of(m, k, b))
                if m < B.dim:
                    degs[(m, k, sid)] = new_sid(m + 1, B.degeneracy_of(m, k, b))
                    zeta[(m, k, sid)] = new_tid(m + 1, B.zeta_of(m, k, b))
    for m in range(1, B.dim + 1):
        for t in B.token_ids(m):
            if (m, t) in t_img:
                continue
            tokens[m].append((new_tid(m, t), new_sid(m, B.under_of(m, t))))

    P = TruncatedTDeltaSet(dim, simplices, faces, degs, tokens, zeta, name=name)
    x_to_p = TDeltaMap(X, P,
                       {(m, s): s for m in range(X.dim + 1)
                        for s in X.nondegenerate_ids(m)},
                       _free_token_identity(X))
    b_simp = {(m, b): new_sid(m, b) for m in range(B.dim + 1)
              for b in B.nondegenerate_ids(m)}
    b_tok = {}
    for m in range(1, B.dim + 1):
        wit = B._zeta_wit[m]
        b_tok.update({(m, t): new_tid(m, t)
                      for k, t in enumerate(B._tok_ids[m]) if wit[k] is None})
    b_to_p = TDeltaMap(B, P, b_simp, b_tok)
    return P, x_to_p, b_to_p


def _free_token_identity(X):
    out = {}
    for m in range(1, X.dim + 1):
        wit = X._zeta_wit[m]
        out.update({(m, t): t for k, t in enumerate(X._tok_ids[m])
                    if wit[k] is None})
    return out


def pushout_family(X, gluings, prefix="g", name=""):
    """Simultaneous pushout of a finite family of (f_k: A_k -> X, i_k: A_k -> B_k).

    Equivalent to one pushout along the coproducts; new ids carry the family
    index so the result is reproducible.
    """
    P = X
    x_to_p = identity_map(X)
    b_maps = []
    for k, (fk, ik) in enumerate(gluings):
        lifted = x_to_p.compose(fk)
        P, step, bk = pushout(lifted, ik, prefix=f"{prefix}{k}:", name=name)
        x_to_p = step.compose(x_to_p)
        b_maps = [step.compose(b) for b in b_maps]
        b_maps.append(bk)
    return P, x_to_p, b_maps


def identify_markings(X, name=None):
    """Collapse multiple tokens over one simplex; relabel by least member.

    Returns (Q, X -> Q); Q is stratified and the operation is idempotent.
    """
    rep = {}
    tokens = {}
    for m in range(1, X.dim + 1):
        lvl = {}
        for t in X.token_ids(m):
            u = X.under_of(m, t)
            if u not in lvl or t < lvl[u]:
                lvl[u] = t
        for t in X.token_ids(m):
            rep[(m, t)] = lvl[X.under_of(m, t)]
        tokens[m] = sorted((t, u) for u, t in lvl.items())
    simplices = {m: list(X.simplex_ids(m)) for m in range(X.dim + 1)}
    faces, degs, zeta = {}, {}, {}
    for m in range(1, X.dim + 1):
        for s in X.simplex_ids(m):
            for i in range(m + 1):
                faces[(m, i, s)] = X.face_of(m, i, s)
    for m in range(X.dim):
        for s in X.simplex_ids(m):
            for i in range(m + 1):
                degs[(m, i, s)] = X.degeneracy_of(m, i, s)
                zeta[(m, i, s)] = rep[(m + 1, X.zeta_of(m, i, s))]
    Q = TruncatedTDeltaSet(X.dim, simplices, faces, degs, tokens, zeta,
                           name=name or f"{X.name}/~")
    q_tok = {}
    for m in range(1, X.dim + 1):
        wit = X._zeta_wit[m]
        q_tok.update({(m, t): rep[(m, t)]
                      for k, t in enumerate(X._tok_ids[m]) if wit[k] is None})
    to_q = TDeltaMap(X, Q,
                     {(m, s): s for m in range(X.dim + 1)
                      for s in X.nondegenerate_ids(m)},
                     q_tok)
    return Q, to_q
