"""Elementary anodyne extensions and exhaustive right-lifting checks.

The four generating families, at triviality index n and dimension bound N:

* horn        Horn^k[m] -> Delta^k[m]          1 <= m <= N, 0 <= k <= m
* thinness    Delta^k[m]' -> Delta^k[m]''      2 <= m <= N, 0 <= k <= m
* triviality  Delta[l] -> Delta[l]_t           n <  l <= N
* saturation  Delta[l]*Delta[3]_eq -> Delta[l]*Delta[3]#   -1 <= l <= N-4
              (l = -1 means no join factor)

``is_precomplicial`` runs every map from every extension domain into X and
looks for lifts; a missing lift is reported with its witnessing map so the
failure can be replayed in isolation.  Budget exhaustion is a third outcome,
never conflated with a definitive "no lift".
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import tdelta
from .tdelta import (BudgetExceeded, TDeltaMap, get_budget, inclusion_map,
                     _iter_maps, _to_map)
from .twocat import InvalidInput


@dataclass(frozen=True)
class AnodyneExtension:
    family: str
    params: tuple  # sorted (key, value) pairs
    A: object
    B: object

    @property
    def inclusion(self):
        return inclusion_map(self.A, self.B)

    def label(self):
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.family}({inner})"


@dataclass(frozen=True)
class LiftingProblem:
    extension: AnodyneExtension
    along: TDeltaMap  # A -> X


def anodyne_library(n=2, N=5):
    """All elementary anodyne extensions up to dimension N, canonical order."""
    if N > 6:
        raise InvalidInput("anodyne library capped at dimension 6")
    out = []
    for m in range(1, N + 1):
        for k in range(m + 1):
            out.append(AnodyneExtension(
                "horn", (("k", k), ("m", m)),
                tdelta.horn(k, m, dim=m), tdelta.delta_k(k, m, dim=m)))
    for m in range(2, N + 1):
        for k in range(m + 1):
            out.append(AnodyneExtension(
                "thinness", (("k", k), ("m", m)),
                tdelta.delta_k_prime(k, m, dim=m),
                tdelta.delta_k_dprime(k, m, dim=m)))
    for l in range(n + 1, N + 1):
        out.append(AnodyneExtension(
            "triviality", (("l", l),),
            tdelta.delta(l, dim=l), tdelta.delta_t(l, dim=l)))
    for l in range(-1, N - 3):
        if l == -1:
            A, B = tdelta.delta3_eq(3), tdelta.delta3_sharp(3)
        else:
            pad = l + 4
            base = tdelta.delta(l, dim=pad)
            A = tdelta.join(base, tdelta.delta3_eq(dim=pad), out_dim=pad,
                            name=f"Delta[{l}]*Delta[3]_eq")
            B = tdelta.join(base, tdelta.delta3_sharp(dim=pad), out_dim=pad,
                            name=f"Delta[{l}]*Delta[3]#")
        out.append(AnodyneExtension("saturation", (("l", l),), A, B))
    return out


def _seed_from(f, i):
    """Index-level seed arrays on i's codomain from a map f on its domain."""
    A, X, B = f.src, f.dst, i.dst
    seed_simp = [[-1] * len(B._ids[m]) for m in range(B.dim + 1)]
    for m in range(A.dim + 1):
        for s in A.simplex_ids(m):
            b = B._idx[m][i.apply_simplex(m, s)]
            seed_simp[m][b] = X._idx[m][f.apply_simplex(m, s)]
    seed_tok = [None] + [[-1] * len(B._tok_ids[m]) for m in range(1, B.dim + 1)]
    for m in range(1, A.dim + 1):
        for t in A.token_ids(m):
            b = B._tok_idx[m][i.apply_token(m, t)]
            seed_tok[m][b] = X._tok_idx[m][f.apply_token(m, t)]
    return seed_simp, seed_tok


def find_lift(problem, budget=None, reverse=False):
    """A lift B -> X extending the problem's map along its inclusion.

    Returns the first lift in canonical search order, or None once the
    search space is exhausted.  Raises BudgetExceeded if the node budget
    runs out first.
    """
    budget = get_budget(budget)
    ext = problem.extension
    f = problem.along
    X = f.dst
    seed_simp, seed_tok = _seed_from(f, ext.inclusion)
    for simg, timg in _iter_maps(ext.B, X, budget, seed_simp=seed_simp,
                                 seed_tok=seed_tok, reverse=reverse):
        return _to_map(ext.B, X, simg, timg)
    return None


@dataclass
class ExtensionResult:
    extension: AnodyneExtension
    maps_checked: int
    witness: TDeltaMap | None  # a map with no lift, if any

    @property
    def passed(self):
        return self.witness is None


@dataclass
class FibrancyReport:
    n: int
    dim: int
    results: list

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def by_family(self):
        fam = {}
        for r in self.results:
            cur = fam.setdefault(r.extension.family,
                                 {"passed": True, "maps_checked": 0})
            cur["maps_checked"] += r.maps_checked
            cur["passed"] = cur["passed"] and r.passed
        return fam

    def failures(self):
        return [r for r in self.results if not r.passed]

    def to_json_dict(self):
        return {
            "n": self.n,
            "dim": self.dim,
            "passed": self.passed,
            "classes": self.by_family(),
            "extensions": [
                {
                    "family": r.extension.family,
                    "params": dict(r.extension.params),
                    "maps_checked": r.maps_checked,
                    "passed": r.passed,
                    "witness": None if r.witness is None
                    else r.witness.to_json_dict(),
                }
                for r in self.results],
        }


@dataclass
class _Plan:
    """Compiled shape data for one elementary extension.

    Every domain in the library has underlying simplicial set either a
    standard simplex or a horn; a map out of it is a top simplex of X,
    respectively a pairwise-compatible family of (m-1)-simplices.  Each
    non-degenerate domain simplex is reached from a slot by a chain of
    face operators, so domain marking constraints and the lift test reduce
    to indexed lookups.
    """

    kind: str           # "simplex" | "horn"
    m: int
    k: int | None
    slots: list         # face positions carrying the family ("horn" only)
    chains: dict        # A nondeg (level, idx) -> (slot_pos, drops)
    domain_marks: list  # (level, slot_pos, drops) that must be marked in X
    lift_marks: list    # same, for the extra marked simplices of B
    fk_faces: list | None  # ("horn") chains for the faces of the missing face


def _nondeg_chains(A, tops):
    """Reach every non-degenerate simplex of A from the top slots by faces."""
    chains = {}
    frontier = []
    for pos, (lvl, idx) in enumerate(tops):
        chains[(lvl, idx)] = (pos, ())
        frontier.append((lvl, idx))
    while frontier:
        lvl, idx = frontier.pop(0)
        pos, drops = chains[(lvl, idx)]
        if lvl == 0:
            continue
        for i in range(lvl + 1):
            tgt = A._face[lvl][i][idx]
            key = (lvl - 1, tgt)
            if key not in chains:
                chains[key] = (pos, drops + (i,))
                frontier.append(key)
    return chains


def _free_token_unders(S):
    out = []
    for m in range(1, S.dim + 1):
        zwit = S._zeta_wit[m]
        for idx, w in enumerate(zwit):
            if w is None:
                out.append((m, S._tok_under[m][idx]))
    return out


def _compile_plan(ext):
    A, B = ext.A, ext.B
    params = dict(ext.params)
    if ext.family == "horn":
        m, k = params["m"], params["k"]
        slots = [j for j in range(m + 1) if j != k]
        tops = []
        for j in slots:
            sid = "".join(str(v) for v in range(m + 1) if v != j)
            tops.append((m - 1, A._idx[m - 1][sid]))
        chains = _nondeg_chains(A, tops)
        fk_faces = None
        if m >= 2:
            vs = [v for v in range(m + 1) if v != k]
            fk_faces = []
            for i in range(m):
                sid = "".join(map(str, vs[:i] + vs[i + 1:]))
                fk_faces.append(chains[(m - 2, A._idx[m - 2][sid])])
    else:
        m, k, slots, fk_faces = A.dim, None, [None], None
        nd_top = A.nondegenerate_ids(m)
        assert len(nd_top) == 1, "expected a simplex-shaped domain"
        chains = _nondeg_chains(A, [(m, A._idx[m][nd_top[0]])])
    domain_marks = []
    for lvl, under in _free_token_unders(A):
        pos, drops = chains[(lvl, under)]
        domain_marks.append((lvl, pos, drops))
    lift_marks = []
    for lvl, under in _free_token_unders(B):
        bid = B._ids[lvl][under]
        tids = {B._tok_ids[lvl][t]
                for t in B._tokens_over_idx[lvl].get(under, ())}
        if tids <= set(A.token_ids(lvl)):
            continue  # every token here already lives in the domain
        if bid not in A._idx[lvl]:
            assert ext.family == "horn", "new simplex outside a horn extension"
            continue  # the horn top; its mark is checked by the fill search
        pos, drops = chains[(lvl, A._idx[lvl][bid])]
        lift_marks.append((lvl, pos, drops))
    return _Plan(ext.family if ext.family == "horn" else "simplex",
                 m, k, slots, chains, sorted(set(domain_marks)),
                 sorted(set(lift_marks)), fk_faces)


def _chase(X, values, lvl_from, pos, drops):
    v = values[pos]
    lvl = lvl_from
    for d in drops:
        v = X._face[lvl][d][v]
        lvl -= 1
    return v


def _plan_marks_ok(X, plan, values, lvl_from, marks):
    toks = X._tokens_over_idx
    for lvl, pos, drops in marks:
        if not toks[lvl].get(_chase(X, values, lvl_from, pos, drops)):
            return False
    return True


def _plan_lift_exists(X, plan, values, lvl_from):
    if not _plan_marks_ok(X, plan, values, lvl_from, plan.lift_marks):
        return False
    if plan.kind == "simplex":
        return True
    m, k = plan.m, plan.k
    if m >= 2:
        gkey = tuple(_chase(X, values, lvl_from, pos, drops)
                     for pos, drops in plan.fk_faces)
        cands = X._by_boundary[m - 1].get(gkey, ())
    else:
        cands = range(len(X._ids[0]))
    key = [-1] * (m + 1)
    for pos, j in enumerate(plan.slots):
        key[j] = values[pos]
    toks = X._tokens_over_idx[m]
    bb = X._by_boundary[m]
    for g in cands:
        key[k] = g
        for top in bb.get(tuple(key), ()):
            if toks.get(top):
                return True
    return False


def _iter_domain_parts(X, plan, budget, reverse=False):
    """Underlying simplicial maps out of the extension domain.

    Yields tuples of X simplex indices, one per slot: the single top for
    simplex-shaped domains, the face family for horns.
    """
    steps = 0
    if plan.kind == "simplex":
        rng = range(len(X._ids[plan.m]))
        for x in (reversed(rng) if reverse else rng):
            steps += 1
            if steps > budget:
                raise BudgetExceeded("domain enumeration budget exhausted")
            if _plan_marks_ok(X, plan, (x,), plan.m, plan.domain_marks):
                yield (x,)
        return
    # prefix indexes: slot p needs faces at positions slots[:p]
    m = plan.m
    slots = plan.slots
    level = m - 1
    size = len(X._ids[level])
    prefixes = []
    for p in range(1, len(slots)):
        d = {}
        rows = [X._face[level][i] for i in slots[:p]]
        for y in range(size):
            d.setdefault(tuple(r[y] for r in rows), []).append(y)
        prefixes.append(d)
    values = []

    def rec(p):
        nonlocal steps
        if p == len(slots):
            if _plan_marks_ok(X, plan, values, level, plan.domain_marks):
                yield tuple(values)
            return
        if p == 0:
            cand = range(size)
        else:
            j = slots[p]
            key = tuple(X._face[level][j - 1][values[q]] for q in range(p))
            cand = prefixes[p - 1].get(key, ())
        cand = list(cand)
        if reverse:
            cand.reverse()
        for y in cand:
            steps += 1
            if steps > budget:
                raise BudgetExceeded("domain enumeration budget exhausted")
            values.append(y)
            yield from rec(p + 1)
            values.pop()

    yield from rec(0)


def _part_to_map(X, ext, plan, values):
    """Materialize a witness TDeltaMap from a family of slot values."""
    A = ext.A
    lvl_from = plan.m if plan.kind == "simplex" else plan.m - 1
    simp = {}
    for (lvl, idx), (pos, drops) in plan.chains.items():
        if A._deg_wit[lvl][idx] is not None:
            continue
        sid = A._ids[lvl][idx]
        simp[(lvl, sid)] = X._ids[lvl][_chase(X, values, lvl_from, pos, drops)]
    tok = {}
    for m in range(1, A.dim + 1):
        zwit = A._zeta_wit[m]
        toks_over = X._tokens_over_idx[m]
        for idx, w in enumerate(zwit):
            if w is not None:
                continue
            t = A._tok_ids[m][idx]
            under = A._tok_under[m][idx]
            pos, drops = plan.chains[(m, under)]
            img = _chase(X, values, lvl_from, pos, drops)
            tok[(m, t)] = X._tok_ids[m][min(toks_over[img])]
    return TDeltaMap(A, X, simp, tok)


def check_extension(X, ext, budget=None, reverse=False):
    """Search every map ext.A -> X for a lift; stop at the first failure.

    Token images never influence liftability, so the search runs over
    underlying simplicial parts; ``maps_checked`` counts those.
    """
    budget = get_budget(budget)
    plan = _compile_plan(ext)
    lvl_from = plan.m if plan.kind == "simplex" else plan.m - 1
    checked = 0
    for values in _iter_domain_parts(X, plan, budget, reverse=reverse):
        checked += 1
        if not _plan_lift_exists(X, plan, values, lvl_from):
            return ExtensionResult(ext, checked, _part_to_map(X, ext, plan, values))
    return ExtensionResult(ext, checked, None)


def check_extension_generic(X, ext, budget=None, reverse=False):
    """Reference implementation through the generic map enumeration."""
    budget = get_budget(budget)
    checked = 0
    for f in tdelta.iter_maps(ext.A, X, budget=budget, reverse=reverse):
        checked += 1
        lift = find_lift(LiftingProblem(ext, f), budget=budget, reverse=reverse)
        if lift is None:
            return ExtensionResult(ext, checked, f)
    return ExtensionResult(ext, checked, None)


def rs_fibrancy_prediction(C):
    """Both readings of the fibrancy criterion for identity-marked nerves.

    The criterion can be stated with strictly invertible 1-cells or with
    weakly invertible ones; both predicates are computed and reported so the
    lifting results can be compared against each.
    """
    from . import twocat as tc
    strict_isos = {f for f in tc.one_isomorphisms(C)
                   if not C.one_cells[f].identity}
    equivalences = {f for f in C.one_cells
                    if not C.one_cells[f].identity and tc.is_equivalence(C, f)}
    two_isos = {a for a in tc.invertible_2cells(C)
                if not C.two_cells[a].identity}
    return {
        "non_identity_one_isomorphisms": sorted(strict_isos),
        "non_identity_equivalences": sorted(equivalences),
        "non_identity_two_isomorphisms": sorted(two_isos),
        "fibrant_by_strict_reading": not strict_isos and not two_isos,
        "fibrant_by_weak_reading": not equivalences and not two_isos,
    }


def is_precomplicial(X, n=2, N=None, budget=None, jobs=1):
    """Right-lifting report of X against the anodyne library."""
    N = X.dim if N is None else N
    if N > X.dim:
        raise InvalidInput("dimension bound exceeds the truncation of X")
    library = anodyne_library(n, N)
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(check_extension, X, ext, budget)
                       for ext in library]
            results = [fut.result() for fut in futures]
    else:
        results = [check_extension(X, ext, budget) for ext in library]
    return FibrancyReport(n, N, results)
