"""Deliberately naive reference procedures used by the test-suite.

Nothing here shares code with :mod:`elhcf.reasoner` or
:mod:`elhcf.counterfactual`.  Entailment is decided on an explicit finite
structure built from the *original* axioms: named individuals plus one
anonymous witness per existential filler, with every axiom applied by
direct semantic evaluation until nothing changes.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .model import (
    Atomic, ChangeSet, ConceptAssertion, ConceptInclusion, Existential,
    Intersection, KnowledgeBase, RoleAssertion, RoleInclusion, Top, intersect,
    is_top,
)


class OracleBoundError(RuntimeError):
    """The instance is too large for brute force."""


MAX_NODES = 400
MAX_SUBJECT_ASSERTIONS = 12


@dataclass
class CanonicalStructure:
    domain: set = field(default_factory=set)
    concept_labels: dict = field(default_factory=dict)   # node -> set of names
    role_edges: set = field(default_factory=set)         # (node, role, node)
    successors: dict = field(default_factory=dict)       # (node, role) -> [node]

    def add_edge(self, n, r, m) -> bool:
        if (n, r, m) in self.role_edges:
            return False
        self.role_edges.add((n, r, m))
        self.successors.setdefault((n, r), []).append(m)
        return True

    def holds(self, c, node) -> bool:
        if isinstance(c, Atomic):
            return c.name in self.concept_labels[node]
        if isinstance(c, Intersection):
            for d in c.conjuncts:
                if not self.holds(d, node):
                    return False
            return True
        if isinstance(c, Existential):
            for m in self.successors.get((node, c.role), ()):
                if self.holds(c.filler, m):
                    return True
            return False
        return True  # Top


def _role_supers(tbox) -> dict:
    sups = {}
    changed = True
    pairs = {(ax.sub, ax.sup) for ax in tbox if isinstance(ax, RoleInclusion)}
    while changed:
        changed = False
        for (a, b) in list(pairs):
            for (c, d) in list(pairs):
                if b == c and (a, d) not in pairs:
                    pairs.add((a, d))
                    changed = True
    for a, b in pairs:
        sups.setdefault(a, set()).add(b)
    return sups


def build_structure(kb: KnowledgeBase, probes=()) -> CanonicalStructure:
    """Least structure satisfying ``kb``; each probe concept gets its own node."""
    st = CanonicalStructure()
    sups = _role_supers(kb.tbox)
    gcis = [ax for ax in kb.tbox if isinstance(ax, ConceptInclusion)]

    def node(n):
        if n not in st.domain:
            if len(st.domain) >= MAX_NODES:
                raise OracleBoundError("canonical structure too large")
            st.domain.add(n)
            st.concept_labels[n] = set()
        return n

    def edge(n, r, m):
        changed = False
        for s in {r} | sups.get(r, set()):
            changed |= st.add_edge(n, s, m)
        return changed

    def impose(c, n) -> bool:
        """Make ``c`` true at ``n``; returns whether anything changed."""
        if is_top(c):
            return False
        if isinstance(c, Atomic):
            if c.name in st.concept_labels[n]:
                return False
            st.concept_labels[n].add(c.name)
            return True
        if isinstance(c, Intersection):
            changed = False
            for d in c.conjuncts:
                changed |= impose(d, n)
            return changed
        w = ("witness", c.filler)
        fresh = w not in st.domain
        node(w)
        changed = edge(n, c.role, w)
        if fresh:
            impose(c.filler, w)
            changed = True
        return changed

    for x in kb.individuals:
        node(("ind", x))
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            impose(Atomic(a.concept), ("ind", a.individual))
        else:
            edge(("ind", a.subject), a.role, ("ind", a.object))
    for i, c in enumerate(probes):
        impose(c, node(("probe", i)))

    changed = True
    while changed:
        changed = False
        for n in list(st.domain):
            for ax in gcis:
                if st.holds(ax.lhs, n):
                    changed |= impose(ax.rhs, n)
    return st


def naive_instance_check(kb: KnowledgeBase, c, x: str) -> bool:
    kb.require_individual(x)
    return build_structure(kb).holds(c, ("ind", x))


def naive_is_subsumed(kb: KnowledgeBase, lhs, rhs) -> bool:
    st = build_structure(kb, probes=[lhs])
    return st.holds(rhs, ("probe", 0))


def naive_materialize(kb: KnowledgeBase) -> set:
    st = build_structure(kb)
    out = set()
    for x in kb.individuals:
        out.update(ConceptAssertion(a, x) for a in st.concept_labels[("ind", x)])
    for (n, r, m) in st.role_edges:
        if n[0] == "ind" and m[0] == "ind":
            out.add(RoleAssertion(r, n[1], m[1]))
    return out


def brute_force_neg_candidates(kb: KnowledgeBase, c, x: str) -> set:
    """All subset-minimal removals of ``x``-subject assertions that break ``C(x)``."""
    pool = sorted((a for a in kb.abox if a.subject == x), key=str)
    if len(pool) > MAX_SUBJECT_ASSERTIONS:
        raise OracleBoundError(f"{len(pool)} assertions about {x!r}; brute force is capped")
    found = []
    for k in range(len(pool) + 1):
        for combo in combinations(pool, k):
            s = frozenset(combo)
            if any(f <= s for f in found):
                continue
            if not naive_instance_check(kb.with_abox(kb.abox - s), c, x):
                found.append(s)
    return {ChangeSet(removed=s) for s in found}


def _apply(kb, added):
    return KnowledgeBase(kb.tbox, kb.abox | set(added), kb.signature)


def verify_theorem2(kb: KnowledgeBase, c, x: str, changeset: ChangeSet = None) -> bool:
    """Check an add-update: it entails ``C(x)`` and every added assertion is needed.

    With no ``changeset`` the engine's own output is checked.
    """
    if changeset is None:
        from .counterfactual import create_candidates_pos
        changeset = create_candidates_pos(kb, c, x)
    if changeset.removed or not changeset.feasible:
        return False
    if changeset.added & kb.abox:
        return False
    if not naive_instance_check(_apply(kb, changeset.added), c, x):
        return False
    for a in changeset.added:
        if naive_instance_check(_apply(kb, changeset.added - {a}), c, x):
            return False
    return True


# ---------------------------------------------------------------- random instances

@dataclass
class GeneratorConfig:
    concepts: int = 8
    roles: int = 3
    individuals: int = 6
    axioms: int = 10
    role_axioms: int = 2
    concept_assertions: int = 10
    role_assertions: int = 7
    max_width: int = 3
    max_depth: int = 2

    def __post_init__(self):
        # hard ceilings for the brute-force oracle
        assert self.concepts <= 15 and self.roles <= 4 and self.individuals <= 12
        assert self.axioms <= 25 and self.max_width <= 3 and self.max_depth <= 2


def random_concept(rng: random.Random, names, roles, depth: int, width: int, top_p=0.05):
    """A random concept of role depth at most ``depth``."""
    if rng.random() < top_p:
        return Top
    k = rng.choice([1, 1, 1, 2, 2, 3][: 2 + 2 * width])
    k = min(k, width)
    parts = []
    for _ in range(k):
        if depth > 0 and roles and rng.random() < 0.35:
            parts.append(Existential(rng.choice(roles),
                                     random_concept(rng, names, roles, depth - 1, width, top_p)))
        else:
            parts.append(Atomic(rng.choice(names)))
    return intersect(*parts)


def random_kb(rng: random.Random, cfg: GeneratorConfig = GeneratorConfig()) -> KnowledgeBase:
    names = [f"A{i}" for i in range(cfg.concepts)]
    roles = [f"r{i}" for i in range(cfg.roles)]
    inds = [f"i{i}" for i in range(cfg.individuals)]
    tbox = set()
    for _ in range(cfg.axioms):
        lhs = random_concept(rng, names, roles, cfg.max_depth, cfg.max_width, top_p=0.02)
        rhs = random_concept(rng, names, roles, 1, 2, top_p=0.0)
        if lhs != rhs:
            tbox.add(ConceptInclusion(lhs, rhs))
    for _ in range(cfg.role_axioms):
        r, s = rng.sample(roles, 2) if len(roles) > 1 else (roles[0], roles[0])
        if r != s:
            tbox.add(RoleInclusion(r, s))
    abox = set()
    for _ in range(cfg.concept_assertions):
        abox.add(ConceptAssertion(rng.choice(names), rng.choice(inds)))
    for _ in range(cfg.role_assertions):
        abox.add(RoleAssertion(rng.choice(roles), rng.choice(inds), rng.choice(inds)))
    return KnowledgeBase(tbox, abox)


def concept_holding_at(rng: random.Random, kb: KnowledgeBase, x: str, max_depth: int = 2):
    """A random concept satisfied by ``x`` in the materialized ABox ``kb``."""
    labels = {}
    edges = {}
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            labels.setdefault(a.individual, []).append(a.concept)
        else:
            edges.setdefault(a.subject, []).append((a.role, a.object))
    for v in labels.values():
        v.sort()
    for v in edges.values():
        v.sort()

    def build(y, depth):
        parts = []
        own = labels.get(y, [])
        out = edges.get(y, [])
        for _ in range(rng.choice([1, 1, 2, 3])):
            if depth > 0 and out and (not own or rng.random() < 0.45):
                r, z = rng.choice(out)
                parts.append(Existential(r, build(z, depth - 1)))
            elif own:
                parts.append(Atomic(rng.choice(own)))
        return intersect(*parts)

    return build(x, max_depth)
