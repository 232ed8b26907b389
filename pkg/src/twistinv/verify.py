"""The verification battery behind ``twistinv verify``.

Every check takes an :class:`~twistinv.catalog.Instance` and a seed and
returns ``None`` on success or a short failure description.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

import numpy as np

from .catalog import Instance, load_instance
from .cellcomplex import (
    _subsets,
    check_boolean_intervals,
    check_h_identities,
    check_thin,
    component_cell,
    descent_polynomial,
    sample_weak_extensions,
    verify_shelling,
)
from .coxeter import CoxeterMatrix, build_group, bruhat_leq, two_sided_weak_poset
from .errors import TwistinvError
from .homology import verify_sphere_interval
from .poset import eulerian_intervals, matching_from_generator, verify_special_matching
from .twisted import (
    brute_force_twisted,
    bruhat_poset_twisted,
    enumerate_twisted,
    paired_element,
    swap_square,
    twisted_exchange_check,
    weak_poset_twisted,
)

SMALL_TWISTED = 200
SUBWORD_LIMIT = 120
LIFTING_LIMIT = 48


@dataclass(frozen=True)
class Check:
    name: str
    func: Callable[[Instance, int, str], str | None]
    suites: frozenset


CHECKS: list[Check] = []


def check(name: str, suites: Iterable[str] = ("quick", "full")):
    def register(func):
        CHECKS.append(Check(name, func, frozenset(suites)))
        return func

    return register


@check("group-tables")
def _group_tables(inst, seed, suite):
    g = inst.group
    gen_perm = [g.perms[g.right_mult[0][s]] for s in range(g.rank)]
    for w in range(g.order):
        if len(g.reduced_word[w]) != g.length[w] or g.evaluate(g.reduced_word[w]) != w:
            return f"stored reduced word of {g.label(w)} is wrong"
        if g.inverse[g.inverse[w]] != w or g.length[g.inverse[w]] != g.length[w]:
            return f"inverse table wrong at {g.label(w)}"
        for s in range(g.rank):
            ws, sw = g.right_mult[w][s], g.left_mult[w][s]
            if abs(g.length[ws] - g.length[w]) != 1 or abs(g.length[sw] - g.length[w]) != 1:
                return f"length of {g.label(w)} times s{s} does not change by one"
            if (s in g.right_descents[w]) != (g.length[ws] < g.length[w]):
                return f"right descent set wrong at {g.label(w)}"
            if (s in g.left_descents[w]) != (g.length[sw] < g.length[w]):
                return f"left descent set wrong at {g.label(w)}"
            if not np.array_equal(g.perms[ws], g.perms[w][gen_perm[s]]):
                return f"right multiplication disagrees with permutation composition at {g.label(w)}"
            if not np.array_equal(g.perms[sw], gen_perm[s][g.perms[w]]):
                return f"left multiplication disagrees with permutation composition at {g.label(w)}"
    if g.length[g.longest] != g.root_count or g.length.count(g.root_count) != 1:
        return "longest element is not unique of length root_count"
    return None


@check("root-certification")
def _root_certification(inst, seed, suite):
    g = inst.group
    ident = np.arange(2 * g.root_count)
    gens = [g.perms[g.right_mult[0][s]] for s in range(g.rank)]
    for i, p in enumerate(gens):
        if not np.array_equal(p[p], ident):
            return f"generator {i} not an involution"
        for j in range(i + 1, g.rank):
            q = p[gens[j]]
            r, k = q.copy(), 1
            while not np.array_equal(r, ident):
                r, k = q[r], k + 1
            if k != inst.cm.m[i][j]:
                return f"(s{i} s{j}) has order {k}, expected {inst.cm.m[i][j]}"
    return None


def _random_words(rng: random.Random, rank: int, max_len: int, count: int, value, size):
    """``count`` random words whose value has size below their length."""
    found = 0
    for _ in range(count * 50):
        k = rng.randint(2, max_len)
        word = [rng.randrange(rank) for _ in range(k)]
        if size(value(word)) < k:
            found += 1
            yield word
            if found == count:
                return


@check("group-deletion", suites=("full",))
def _group_deletion(inst, seed, suite):
    g = inst.group
    rng = random.Random(seed)
    for word in _random_words(rng, g.rank, g.root_count + 3, 200, g.evaluate, g.length.__getitem__):
        w = g.evaluate(word)
        if not any(
            g.evaluate(word[:i] + word[i + 1 : j] + word[j + 1 :]) == w for i, j in combinations(range(len(word)), 2)
        ):
            return f"no deletion pair for word {word}"
    return None


def lower_interval_by_subwords(g, w: int) -> set[int]:
    """Values of all subwords of the stored reduced word of w."""
    values = {0}
    for s in g.reduced_word[w]:
        values |= {g.right_mult[x][s] for x in values}
    return values


@check("bruhat-subword", suites=("full",))
def _bruhat_subword(inst, seed, suite):
    g = inst.group
    if g.order > SUBWORD_LIMIT:
        return None
    for w in range(g.order):
        below = lower_interval_by_subwords(g, w)
        for v in range(g.order):
            if bruhat_leq(g, v, w) != (v in below):
                return f"bruhat_leq({g.label(v)}, {g.label(w)}) disagrees with subword oracle"
    return None


@check("bruhat-lifting", suites=("full",))
def _bruhat_lifting(inst, seed, suite):
    g = inst.group
    if g.order > LIFTING_LIMIT:
        return None
    for v in range(g.order):
        for w in range(g.order):
            if not bruhat_leq(g, v, w):
                continue
            for s in g.right_descents[w]:
                vs, ws = g.right_mult[v][s], g.right_mult[w][s]
                if not bruhat_leq(g, vs, w):
                    return f"lifting (i) fails at {g.label(v)} <= {g.label(w)}, s{s}"
                if s in g.right_descents[v] and not bruhat_leq(g, vs, ws):
                    return f"lifting (ii) fails at {g.label(v)} <= {g.label(w)}, s{s}"
    return None


@check("twisted-oracle")
def _twisted_oracle(inst, seed, suite):
    t = inst.twisted
    brute = brute_force_twisted(inst.group, inst.theta)
    if set(t.members) != brute:
        return f"orbit has {len(t.members)} elements, brute-force filter has {len(brute)}"
    return None


@check("twisted-rank-law")
def _twisted_rank_law(inst, seed, suite):
    t = inst.twisted
    g = inst.group
    members = set(t.members)
    for m in range(t.size):
        if len(t.sbar_word[m]) != t.rho[m] or t.evaluate(t.sbar_word[m]) != m:
            return f"stored underline word of {t.label(m)} is wrong"
        for s in range(t.rank):
            u = t.act[m][s]
            if t.members[u] not in members or t.act[u][s] != m:
                return f"underline action not an involution at {t.label(m)}, s{s}"
            if abs(t.rho[u] - t.rho[m]) != 1:
                return f"rho({t.label(m)} * s{s}) - rho({t.label(m)}) = {t.rho[u] - t.rho[m]}"
            if t.twisted_descent_flag[m][s] != (s in g.right_descents[t.members[m]]):
                return f"rank drop and descent disagree at {t.label(m)}, s{s}"
    if t.rho[0] != 0 or t.rho[t.top] != max(t.rho) or t.rho.count(max(t.rho)) != 1:
        return "w0 is not the unique element of maximal rank"
    return None


@check("bruhat-graded")
def _bruhat_graded(inst, seed, suite):
    B = inst.bruhat  # construction asserts covers raise rho by one
    if B.minimal() != [B.index_of(0)] or B.maximal() != [B.index_of(inst.twisted.top)]:
        return "Bruhat order on twisted involutions is not bounded by e and w0"
    return None


@check("weak-order")
def _weak_order(inst, seed, suite):
    W, B = inst.weak, inst.bruhat
    if (W.leq & ~B.leq).any():
        return "weak order is not contained in the Bruhat order"
    return None


@check("twisted-lifting", suites=("full",))
def _twisted_lifting(inst, seed, suite):
    t, B = inst.twisted, inst.bruhat
    if t.size > SMALL_TWISTED:
        return None
    for v in range(t.size):
        for w in range(t.size):
            if not B.leq[v, w]:
                continue
            for s in t.descents(w):
                vs, ws = t.act[v][s], t.act[w][s]
                if not B.leq[vs, w]:
                    return f"twisted lifting (i) fails at {t.label(v)} <= {t.label(w)}, s{s}"
                if s in t.descents(v) and not B.leq[vs, ws]:
                    return f"twisted lifting (ii) fails at {t.label(v)} <= {t.label(w)}, s{s}"
    return None


@check("twisted-deletion", suites=("full",))
def _twisted_deletion(inst, seed, suite):
    t = inst.twisted
    rng = random.Random(seed)
    count = 0
    for word in _random_words(rng, t.rank, max(t.rho) + 3, 500, t.evaluate, t.rho.__getitem__):
        count += 1
        v = t.evaluate(word)
        if not any(
            t.evaluate(word[:i] + word[i + 1 : j] + word[j + 1 :]) == v for i, j in combinations(range(len(word)), 2)
        ):
            return f"no deletion pair for underline word {word}"
    if count < 500:
        return f"only {count} non-reduced words sampled"
    return None


@check("twisted-exchange", suites=("full",))
def _twisted_exchange(inst, seed, suite):
    t = inst.twisted
    for m in range(t.size):
        word = list(t.sbar_word[m])
        for s in range(t.rank):
            drops, i = twisted_exchange_check(t, word, s)
            if drops != (s in t.descents(m)):
                return f"exchange check misreports rank change at {t.label(m)}, s{s}"
            if drops and t.evaluate(word[: i - 1] + word[i:]) != t.act[m][s]:
                return f"exchange witness {i} invalid at {t.label(m)}, s{s}"
    return None


@check("special-matchings")
def _special_matchings(inst, seed, suite):
    t, B = inst.twisted, inst.bruhat
    if t.size > SMALL_TWISTED:
        return None
    for w in range(t.size):
        for s in sorted(t.descents(w)):
            iv, M = matching_from_generator(t, w, s, bruhat=B)
            ok, bad = verify_special_matching(iv, M)
            if not ok:
                return f"v -> v*s{s} on [e, {t.label(w)}] is not a special matching: {bad}"
    return None


@check("eulerian")
def _eulerian(inst, seed, suite):
    if inst.twisted.size > SMALL_TWISTED:
        return None
    rep = eulerian_intervals(inst.bruhat)
    return None if rep.ok else rep.reason


@check("sphere-homology")
def _sphere_homology(inst, seed, suite):
    t, B = inst.twisted, inst.bruhat
    if t.size > SMALL_TWISTED:
        return None
    limit = 4 if suite == "full" else 2
    for u in range(t.size):
        for v in range(t.size):
            if B.lt(u, v) and t.rho[v] - t.rho[u] <= limit:
                ok, prof = verify_sphere_interval(B, u, v)
                if not ok:
                    return f"open interval ({t.label(u)}, {t.label(v)}) has homology {prof.groups}"
    return None


@check("complex-structure")
def _complex_structure(inst, seed, suite):
    P, t = inst.faces, inst.twisted
    if len(P.facets) != t.size or any(P.cells[f].dimension != t.rank - 1 for f in P.facets):
        return "complex is not pure of dimension |S|-1 with one facet per twisted involution"
    if P.cells[P.bottom].vertex_set != frozenset(range(t.size)):
        return "bottom cell is not the whole labelled graph"
    thin = check_thin(P)
    if not thin:
        return thin.witness
    boolean = check_boolean_intervals(P)
    return None if boolean else boolean.witness


@check("cell-keys", suites=("full",))
def _cell_keys(inst, seed, suite):
    t, P, G = inst.twisted, inst.faces, inst.graph
    for J in _subsets(t.rank):
        keys = {}
        for w in range(t.size):
            c = component_cell(t, G, w, J)
            if P.cells[P.comp[J][w]] != c:
                return f"component of {t.label(w)} under {sorted(J)} differs from the face poset cell"
            keys.setdefault(c.key, set()).add(w)
        for key, ws in keys.items():
            if ws != set(P.cells[P.index[key]].vertex_set):
                return f"key {key} does not identify a single component"
    return None


@check("greedy-min", suites=("full",))
def _greedy_min(inst, seed, suite):
    t, G, P = inst.twisted, inst.graph, inst.faces
    rng = random.Random(seed)
    for J in _subsets(t.rank):
        for w in range(t.size):
            expect = P.cells[P.comp[J][w]].min_elem
            for _ in range(100):
                cur = w
                while True:
                    down = [s for s in J if t.twisted_descent_flag[cur][s]]
                    if not down:
                        break
                    cur = t.act[cur][rng.choice(down)]
                if cur != expect:
                    return f"greedy descent from {t.label(w)} under {sorted(J)} ends at {t.label(cur)}"
    return None


@check("shelling")
def _shelling(inst, seed, suite):
    t, P = inst.twisted, inst.faces
    samples = 100 if suite == "full" else 10
    expected = Counter(len(t.descents(m)) - 1 for m in range(t.size))
    for k, order in enumerate(sample_weak_extensions(t, samples, seed, inst.weak)):
        rep = verify_shelling(P, order)
        if not rep.ok:
            return f"linear extension #{k} is not a shelling: {rep.violation}"
        if Counter(rep.restriction_dims) != expected:
            return f"restriction dimensions of extension #{k} differ from descent statistics"
    return None


@check("h-identities")
def _h_identities(inst, seed, suite):
    rep = check_h_identities(inst.faces, inst.twisted, seed)
    if not rep.ok:
        return (
            f"h={rep.h} des={rep.des} h_shelling={rep.h_shelling} dehn_sommerville={rep.dehn_sommerville}"
            f" euler={rep.euler_sphere}"
        )
    if not rep.des.is_symmetric():
        return f"des = {rep.des} is not symmetric"
    return None


def swap_functor_failure(base: CoxeterMatrix) -> str | None:
    """Compare W x W with the swap involution against Br(W) and the two-sided weak order."""
    g = build_group(base)
    square, theta = swap_square(base)
    G2 = build_group(square)
    t = enumerate_twisted(G2, theta)
    phi = [t.index.get(paired_element(G2, g, w)) for w in range(g.order)]
    if None in phi or sorted(phi) != list(range(t.size)):
        return "w -> (w, w^-1) is not a bijection onto the twisted involutions"
    B = bruhat_poset_twisted(G2, t)
    Wk = weak_poset_twisted(t)
    two = two_sided_weak_poset(g)
    for v in range(g.order):
        if t.rho[phi[v]] != g.length[v]:
            return f"rho of the image of {g.label(v)} is not its length"
        for w in range(g.order):
            if B.leq[phi[v], phi[w]] != bruhat_leq(g, v, w):
                return f"Bruhat relation differs at ({g.label(v)}, {g.label(w)})"
            if Wk.leq[phi[v], phi[w]] != two.leq[v, w]:
                return f"weak order differs from two-sided weak order at ({g.label(v)}, {g.label(w)})"
    two_sided = [0] * (2 * base.rank + 1)
    for w in range(g.order):
        two_sided[len(g.right_descents[w]) + len(g.left_descents[w])] += 1
    if list(descent_polynomial(t).padded(len(two_sided))) != two_sided:
        return "descent polynomial differs from the two-sided descent polynomial"
    return None


GLOBAL_CHECKS = {
    "swap-functor-A2": lambda: swap_functor_failure(load_instance("A2").cm),
    "swap-functor-B2": lambda: swap_functor_failure(load_instance("B2").cm),
}


@dataclass(frozen=True)
class Outcome:
    check: str
    instance: str
    ok: bool
    detail: str = ""


def run_suite(instances: list[Instance], suite: str = "quick", seed: int = 0, include_global: bool = False):
    """Yield outcomes in order, stopping after the first failure."""
    if suite not in ("quick", "full"):
        raise ValueError(f"unknown suite {suite!r}")
    for inst in instances:
        for c in CHECKS:
            if suite not in c.suites:
                continue
            try:
                detail = c.func(inst, seed, suite)
            except TwistinvError as exc:
                detail = f"{type(exc).__name__}: {exc}"
            yield Outcome(c.name, inst.name, detail is None, detail or "")
            if detail is not None:
                return
    if include_global:
        for name, func in GLOBAL_CHECKS.items():
            detail = func()
            yield Outcome(name, "-", detail is None, detail or "")
            if detail is not None:
                return
