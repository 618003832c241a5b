"""Counterfactual updates for concept assertions.

Removal requests ``<C(x), rem>`` are answered by walking subsumption paths
backwards from each conjunct of ``C`` and collecting the concepts whose
assertions about ``x`` must go (:func:`find_candidates`), then turning every
collected set into an ABox delta.  Addition requests ``<C(x), add>`` are
answered constructively (:func:`create_candidates_pos`).

Candidates are scored by the edit distance between ``x``'s feature sets
before and after the update, and the cheapest ones are ranked by their
distance to individuals that already fail ``C`` (smaller is more plausible).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Optional

from .model import (
    Atomic, ChangeSet, ConceptAssertion, ConceptInclusion, CounterfactualRequest,
    Direction, Existential, Intersection, KnowledgeBase, RoleAssertion, Top,
    apply_changeset, conjuncts, feature_set, feature_sets, is_top, sort_key,
)
from .reasoner import (
    instance_check, materialize, negative_individuals, reachable_part, reasoner_for,
)


class RequestFulfilledError(ValueError):
    """The KB already fulfills the request, so there is nothing to explain."""


@dataclass(frozen=True)
class CandidateSet:
    concepts: frozenset
    origin: Optional[CounterfactualRequest] = None

    def ordered(self) -> list:
        return sorted(self.concepts, key=sort_key)


@dataclass(frozen=True)
class RankedCounterfactual:
    change_set: ChangeSet
    edit_distance: int
    l_min: Optional[int] = None
    l_mean: Optional[Fraction] = None
    rank: int = 0


@dataclass
class NegativeResult:
    """Everything :func:`create_candidates_neg` computes for one request."""

    candidate_sets: list                 # CandidateSet, in discovery order
    candidates: list                     # ChangeSet per distinct candidate set
    non_redundant: list                  # feasible, pruned ChangeSets
    by_min: list = field(default_factory=list)
    by_mean: list = field(default_factory=list)

    @property
    def infeasible(self) -> bool:
        return not self.non_redundant


# ---------------------------------------------------------------- hitting sets

def minimal_hitting_sets(families) -> list:
    """All subset-minimal sets meeting every family, in canonical order.

    An empty list of families yields no hitting sets at all.
    """
    fams = [frozenset(f) for f in families]
    if not fams:
        return []
    if any(not f for f in fams):
        return []
    # drop families that contain another one: hitting the smaller suffices
    fams = [f for f in set(fams) if not any(g < f for g in fams)]
    fams.sort(key=lambda f: (len(f), sorted(map(sort_key, f))))

    found = set()

    def grow(chosen: frozenset):
        for f in fams:
            if not (f & chosen):
                for e in sorted(f, key=sort_key):
                    grow(chosen | {e})
                return
        if all(any(not ((chosen - {e}) & f) for f in fams) for e in chosen):
            found.add(chosen)

    grow(frozenset())
    return sorted(found, key=lambda s: (len(s), sorted(map(sort_key, s))))


# ---------------------------------------------------------------- removal

class _Search:
    """State shared by one removal request's recursion."""

    def __init__(self, kb: KnowledgeBase, x: str):
        self.kb = kb
        self.x = x
        self.reasoner = reasoner_for(kb)
        lhs = {ax.lhs for ax in kb.tbox if isinstance(ax, ConceptInclusion)}
        self.lhs = sorted(lhs, key=sort_key)
        self._subsumees = {}
        self._holds = {}
        self._top = {}
        self.candidates = []
        self._seen = set()

    def subsumees(self, c) -> frozenset:
        """Left-hand sides ``E`` of TBox axioms with ``K ⊨ E ⊑ c``."""
        got = self._subsumees.get(c)
        if got is None:
            got = frozenset(e for e in self.lhs if self.reasoner.is_subsumed(e, c))
            self._subsumees[c] = got
        return got

    def holds(self, c) -> bool:
        got = self._holds.get(c)
        if got is None:
            got = self._holds[c] = self.reasoner.instance_check(c, self.x)
        return got

    def is_top(self, c) -> bool:
        got = self._top.get(c)
        if got is None:
            got = self._top[c] = self.reasoner.is_subsumed(Top, c)
        return got

    def emit(self, relevant: frozenset):
        if relevant not in self._seen:
            self._seen.add(relevant)
            self.candidates.append(relevant)


def find_candidates(search: _Search, c_set, visited: frozenset, relevant: frozenset) -> None:
    """Follow subsumption paths into ``c_set`` and record candidate sets on ``search``.

    ``visited`` holds every left-hand side examined further up this path;
    they are skipped here so the walk terminates.
    """
    relevant = relevant | frozenset(c_set)
    if any(search.is_top(c) for c in c_set):
        # a ⊤-equivalent member makes the whole set infeasible; stop early
        search.emit(relevant)
        return
    found = set()
    for c in c_set:
        found |= search.subsumees(c)
    found -= visited
    # only concepts that currently hold for x can be what derives C(x)
    active = [e for e in sorted(found, key=sort_key) if search.holds(e)]
    families = []
    for e in active:
        if isinstance(e, Intersection):
            families.append(frozenset(e.conjuncts))
        else:
            relevant = relevant | {e}
    visited = visited | found
    choices = minimal_hitting_sets(families)
    if not choices:
        search.emit(relevant)
        return
    for p in choices:
        find_candidates(search, p, visited, relevant)


def candidate_changeset(kb: KnowledgeBase, concepts, x: str, search: _Search = None) -> ChangeSet:
    """ABox removals realizing one candidate set for individual ``x``."""
    r = search.reasoner if search else reasoner_for(kb)
    removed = set()
    for c in sorted(concepts, key=sort_key):
        if (search.is_top(c) if search else r.is_subsumed(Top, c)):
            return ChangeSet.infeasible()
        if isinstance(c, Atomic):
            a = ConceptAssertion(c.name, x)
            if a in kb.abox:
                removed.add(a)
        elif isinstance(c, Existential):
            # sub-role edges must go too, or they re-entail the restriction
            for a in kb.abox:
                if (isinstance(a, RoleAssertion) and a.subject == x
                        and r.is_subrole(a.role, c.role)
                        and r.instance_check(c.filler, a.object)):
                    removed.add(a)
    return ChangeSet(removed=removed)


def verify_fulfillment(kb: KnowledgeBase, k_new: KnowledgeBase, request: CounterfactualRequest) -> bool:
    x = request.individual
    entailed = instance_check(reachable_part(k_new, x), request.concept, x)
    return entailed if request.direction is Direction.ADD else not entailed


def prune_redundant(kb: KnowledgeBase, request: CounterfactualRequest, candidates) -> list:
    """Keep the candidates none of whose changes can be reverted on its own."""
    kept = []
    for cs in candidates:
        if not cs.feasible:
            continue
        k_new = apply_changeset(kb, cs)
        if request.direction is Direction.REM:
            revertible = (k_new.with_abox(k_new.abox | {a}) for a in cs.removed)
        else:
            revertible = (k_new.with_abox(k_new.abox - {a}) for a in cs.added)
        if not any(verify_fulfillment(kb, k, request) for k in revertible):
            kept.append(cs)
    return kept


def edit_distance(k_orig: KnowledgeBase, k_new: KnowledgeBase, x: str) -> int:
    return feature_set(k_orig, x).distance(feature_set(k_new, x))


def likeliness(kb: KnowledgeBase, k_new: KnowledgeBase, c, x: str, negatives=None):
    """``(l_min, l_mean)`` of an update, or ``(None, None)`` with no negatives.

    Negative individuals are those failing ``c`` in the original ``kb``;
    their distance to ``x`` is measured in ``k_new``.
    """
    if negatives is None:
        negatives = negative_individuals(kb, c)
    negatives = [y for y in sorted(negatives) if y != x]
    if not negatives:
        return None, None
    fs = feature_sets(k_new)
    dists = [fs[x].distance(fs[y]) for y in negatives]
    return min(dists), Fraction(sum(dists), len(dists))


def _rank(ranked, measure: str) -> list:
    def key(rc):
        v = rc.l_min if measure == "min" else rc.l_mean
        return (v is None, v if v is not None else 0, rc.change_set.sort_key())

    out = sorted(ranked, key=key)
    return [RankedCounterfactual(rc.change_set, rc.edit_distance, rc.l_min, rc.l_mean, i)
            for i, rc in enumerate(out, start=1)]


def create_candidates_neg(kb: KnowledgeBase, c, x: str) -> NegativeResult:
    """All non-redundant local updates making ``C(x)`` fail, ranked.

    ``kb`` should already be materialized (see :func:`explain`).
    """
    request = CounterfactualRequest(c, x, Direction.REM)
    kb.require_individual(x)
    if not instance_check(kb, c, x):
        raise RequestFulfilledError(f"K does not entail the concept for {x!r}; nothing to remove")
    search = _Search(kb, x)
    for cj in conjuncts(c):
        find_candidates(search, {cj}, frozenset(), frozenset())

    sets = [CandidateSet(s, request) for s in search.candidates]
    changesets = []
    for s in sets:
        cs = candidate_changeset(kb, s.concepts, x, search)
        if cs not in changesets:
            changesets.append(cs)
    non_redundant = sorted(prune_redundant(kb, request, changesets), key=ChangeSet.sort_key)

    result = NegativeResult(sets, changesets, non_redundant)
    if not non_redundant:
        return result
    scored = []
    for cs in non_redundant:
        k_new = apply_changeset(kb, cs)
        scored.append((cs, k_new, edit_distance(kb, k_new, x)))
    best = min(d for _, _, d in scored)
    negatives = negative_individuals(kb, c)
    cfs = []
    for cs, k_new, d in scored:
        if d == best:
            lmin, lmean = likeliness(kb, k_new, c, x, negatives)
            cfs.append(RankedCounterfactual(cs, d, lmin, lmean))
    result.by_min = _rank(cfs, "min")
    result.by_mean = _rank(cfs, "mean")
    return result


# ---------------------------------------------------------------- addition

FRESH_PREFIX = "_cf_fresh_"


def create_candidates_pos(kb: KnowledgeBase, c, x: str) -> ChangeSet:
    """A non-redundant set of additions making ``C(x)`` hold.

    Existential conjuncts get a fresh witness ``_cf_fresh_<n>``.  Conjuncts
    the KB already entails are skipped, and a final pass drops any addition
    the others make unnecessary.
    """
    kb.require_individual(x)
    r = reasoner_for(kb)
    if r.instance_check(c, x):
        raise RequestFulfilledError(f"K already entails the concept for {x!r}")
    taken = kb.signature.concepts | kb.signature.roles | kb.signature.individuals
    numbers = count(1)

    def fresh() -> str:
        while True:
            name = f"{FRESH_PREFIX}{next(numbers)}"
            if name not in taken:
                return name

    added = []

    def make_hold(concept, y: str, is_new: bool):
        for cj in conjuncts(concept):
            if is_top(cj):
                continue
            if not is_new and r.instance_check(cj, y):
                continue
            if isinstance(cj, Existential):
                z = fresh()
                added.append(RoleAssertion(cj.role, y, z))
                make_hold(cj.filler, z, True)
            else:
                added.append(ConceptAssertion(cj.name, y))

    make_hold(c, x, False)

    def works(assertions) -> bool:
        return instance_check(reachable_part(kb.with_abox(kb.abox | set(assertions)), x), c, x)

    kept = list(added)
    for a in added:
        trial = [b for b in kept if b != a]
        if works(trial):
            kept = trial
    return ChangeSet(added=kept)


# ---------------------------------------------------------------- end to end

@dataclass
class Explanation:
    request: CounterfactualRequest
    kb: KnowledgeBase                    # the KB the updates apply to
    materialized: bool
    candidates_total: int
    counterfactuals: list                # RankedCounterfactual, in the chosen order
    infeasible: bool


def explain(kb: KnowledgeBase, request: CounterfactualRequest, rank: str = "min",
            materialized: bool = True) -> Explanation:
    if rank not in ("min", "mean"):
        raise ValueError(f"unknown ranking measure {rank!r}")
    base = materialize(kb) if materialized else kb
    x = request.individual
    if request.direction is Direction.REM:
        res = create_candidates_neg(base, request.concept, x)
        cfs = res.by_min if rank == "min" else res.by_mean
        return Explanation(request, base, materialized, len(res.candidates), cfs, res.infeasible)
    cs = create_candidates_pos(base, request.concept, x)
    k_new = apply_changeset(base, cs)
    rc = RankedCounterfactual(cs, edit_distance(base, k_new, x), None, None, 1)
    return Explanation(request, base, materialized, 1, [rc], False)
