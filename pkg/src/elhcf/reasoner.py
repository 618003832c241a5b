"""Polynomial ELH reasoning by completion-rule saturation.

The TBox is normalized into the four EL normal forms (n-ary conjunctions on
the left are kept as one axiom).  Saturation then runs over a graph whose
nodes are the named individuals plus one node per concept used as an
existential filler.  The result is the canonical model of the KB, so an
instance check is a structural evaluation of the query concept at the
individual's node, and ``C ⊑ D`` holds iff ``D`` evaluates true at a node
built for ``C``.

Rules applied (``S(n)`` are the labels of node ``n``):

* ``A ∈ S(n), A ⊑ B``                         ⇒ ``B ∈ S(n)``
* ``A1..Ak ∈ S(n), A1 ⊓ .. ⊓ Ak ⊑ B``          ⇒ ``B ∈ S(n)``
* ``A ∈ S(n), A ⊑ ∃r.B``                      ⇒ edge ``n -r-> node(B)``
* ``n -r-> m, A ∈ S(m), r ⊑* s, ∃s.A ⊑ B``     ⇒ ``B ∈ S(n)``
"""
from __future__ import annotations

import threading
import weakref
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import count

from .model import (
    Atomic, ConceptAssertion, ConceptInclusion, Existential, Intersection,
    KnowledgeBase, RoleAssertion, RoleInclusion, Top, conjuncts, is_top,
)

TOP = "⊤"  # label carried by every node


@dataclass(frozen=True)
class Fresh:
    """A name introduced by normalization; never part of the user signature."""

    index: int

    def __repr__(self) -> str:
        return f"X{self.index}"


@dataclass
class NormalizedTBox:
    subclass: list = field(default_factory=list)      # (A, B)
    conjunction: list = field(default_factory=list)   # (frozenset(A1..Ak), B)
    exists_rhs: list = field(default_factory=list)    # (A, r, B): A ⊑ ∃r.B
    exists_lhs: list = field(default_factory=list)    # (r, A, B): ∃r.A ⊑ B
    role_order: dict = field(default_factory=dict)    # r -> set of s with r ⊑* s
    fresh_names: dict = field(default_factory=dict)   # Fresh -> Concept

    def axioms(self) -> set:
        return ({("sub",) + p for p in self.subclass}
                | {("conj",) + p for p in self.conjunction}
                | {("ex-r",) + p for p in self.exists_rhs}
                | {("ex-l",) + p for p in self.exists_lhs})


def role_closure(tbox) -> dict:
    """Reflexive-transitive closure of the role inclusions: r -> {s | r ⊑* s}."""
    direct = defaultdict(set)
    roles = set()
    for ax in tbox:
        if isinstance(ax, RoleInclusion):
            direct[ax.sub].add(ax.sup)
            roles.update((ax.sub, ax.sup))
    closure = {}
    for r in roles:
        seen = {r}
        stack = [r]
        while stack:
            for s in direct[stack.pop()]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        closure[r] = seen
    return closure


class _Normalizer:
    def __init__(self, out: NormalizedTBox):
        self.out = out
        self.names = {}
        self.counter = count()
        self.done = set()  # (Fresh, polarity) already defined

    def _fresh(self, c) -> Fresh:
        if c not in self.names:
            f = Fresh(next(self.counter))
            self.names[c] = f
            self.out.fresh_names[f] = c
        return self.names[c]

    def name_pos(self, c):
        """A name N with N ⊑ c (used for right-hand sides and fillers)."""
        if is_top(c):
            return TOP
        if isinstance(c, Atomic):
            return c.name
        f = self._fresh(c)
        if (f, "+") not in self.done:
            self.done.add((f, "+"))
            self.add_rhs(f, c)
        return f

    def name_neg(self, c):
        """A name N with c ⊑ N (used for left-hand sides)."""
        if is_top(c):
            return TOP
        if isinstance(c, Atomic):
            return c.name
        f = self._fresh(c)
        if (f, "-") not in self.done:
            self.done.add((f, "-"))
            self.add_lhs(c, f)
        return f

    def add_rhs(self, a, c):
        """Emit axioms for ``a ⊑ c`` where ``a`` is a name."""
        for d in conjuncts(c):
            if is_top(d):
                continue
            if isinstance(d, Atomic):
                self.out.subclass.append((a, d.name))
            else:
                self.out.exists_rhs.append((a, d.role, self.name_pos(d.filler)))

    def add_lhs(self, c, b):
        """Emit axioms for ``c ⊑ b`` where ``b`` is a name."""
        if isinstance(c, Existential):
            self.out.exists_lhs.append((c.role, self.name_neg(c.filler), b))
            return
        parts = frozenset(self.name_neg(d) for d in conjuncts(c))
        if len(parts) == 1:
            (a,) = parts
            self.out.subclass.append((a, b))
        else:
            self.out.conjunction.append((parts, b))

    def add_inclusion(self, lhs, rhs):
        if is_top(rhs):
            return
        a = self.name_neg(lhs)
        self.add_rhs(a, rhs)


def normalize(tbox) -> NormalizedTBox:
    out = NormalizedTBox(role_order=role_closure(tbox))
    norm = _Normalizer(out)
    for ax in sorted((ax for ax in tbox if isinstance(ax, ConceptInclusion)), key=repr):
        norm.add_inclusion(ax.lhs, ax.rhs)
    return out


class Reasoner:
    """Saturated canonical model of one KB. Build once, query many times."""

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        self.ntbox = normalize(kb.tbox)
        self._lock = threading.RLock()
        self.sup_roles = self.ntbox.role_order

        self.labels = defaultdict(set)       # node -> labels
        self.succ = defaultdict(set)         # node -> {(role, node)}
        self.pred = defaultdict(set)         # node -> {(role, node)}
        self._concept_nodes = {}             # Concept -> node
        self._queue = []
        self._index()

        for x in kb.individuals:
            self._add_label(("ind", x), TOP)
        for a in kb.abox:
            if isinstance(a, ConceptAssertion):
                self._add_label(("ind", a.individual), a.concept)
            else:
                self._add_edge(("ind", a.subject), a.role, ("ind", a.object))
        self._run()

    # -- indexing of the normal form

    def _index(self):
        nt = self.ntbox
        self.told = defaultdict(list)
        self.conj_by_member = defaultdict(list)
        self.ex_rhs = defaultdict(list)
        self.ex_lhs = defaultdict(list)
        for a, b in nt.subclass:
            self.told[a].append(b)
        for parts, b in nt.conjunction:
            for a in parts:
                self.conj_by_member[a].append((parts, b))
        for a, r, b in nt.exists_rhs:
            self.ex_rhs[a].append((r, b))
        for r, a, b in nt.exists_lhs:
            self.ex_lhs[a].append((r, b))

    def is_subrole(self, r: str, s: str) -> bool:
        return r == s or s in self.sup_roles.get(r, ())

    def _supers(self, r):
        return self.sup_roles.get(r, {r})

    # -- saturation

    def _add_label(self, node, a):
        if a not in self.labels[node]:
            self.labels[node].add(a)
            self._queue.append(("label", node, a))

    def _add_edge(self, n, r, m):
        if (r, m) not in self.succ[n]:
            self.succ[n].add((r, m))
            self.pred[m].add((r, n))
            self._queue.append(("edge", n, r, m))

    def _filler_node(self, b):
        node = ("con", b)
        if node not in self.labels:
            self._add_label(node, TOP)
            self._add_label(node, b)
        return node

    def _run(self):
        q = self._queue
        while q:
            item = q.pop()
            if item[0] == "label":
                _, n, a = item
                labs = self.labels[n]
                for b in self.told[a]:
                    self._add_label(n, b)
                for parts, b in self.conj_by_member[a]:
                    if b not in labs and parts <= labs:
                        self._add_label(n, b)
                for r, b in self.ex_rhs[a]:
                    self._add_edge(n, r, self._filler_node(b))
                for s, b in self.ex_lhs[a]:
                    for r, p in list(self.pred[n]):
                        if s in self._supers(r):
                            self._add_label(p, b)
            else:
                _, n, r, m = item
                sups = self._supers(r)
                for a in list(self.labels[m]):
                    for s, b in self.ex_lhs[a]:
                        if s in sups:
                            self._add_label(n, b)

    # -- queries

    def _node_for(self, c):
        """Saturated node whose labels are exactly the subsumers of ``c``."""
        if is_top(c) or isinstance(c, Atomic):
            with self._lock:
                node = self._filler_node(TOP if is_top(c) else c.name)
                self._run()
            return node
        with self._lock:
            node = self._concept_nodes.get(c)
            if node is None:
                node = ("query", len(self._concept_nodes))
                self._concept_nodes[c] = node
                self._add_label(node, TOP)
                for d in conjuncts(c):
                    if isinstance(d, Atomic):
                        self._add_label(node, d.name)
                    elif isinstance(d, Existential):
                        self._add_edge(node, d.role, self._node_for(d.filler))
                self._run()
        return node

    def holds_at(self, c, node) -> bool:
        if is_top(c):
            return True
        if isinstance(c, Atomic):
            return c.name in self.labels.get(node, ())
        if isinstance(c, Intersection):
            return all(self.holds_at(d, node) for d in c.conjuncts)
        for r, m in self.succ.get(node, ()):
            if c.role in self._supers(r) and self.holds_at(c.filler, m):
                return True
        return False

    def instance_check(self, c, x: str) -> bool:
        self.kb.require_individual(x)
        return self.holds_at(c, ("ind", x))

    def is_subsumed(self, lhs, rhs) -> bool:
        if is_top(rhs) or lhs == rhs:
            return True
        return self.holds_at(rhs, self._node_for(lhs))

    def atomic_types(self, x: str) -> set:
        """Entailed concept names of ``x`` (user signature only)."""
        return {a for a in self.labels.get(("ind", x), ()) if isinstance(a, str) and a != TOP}

    def subsumers(self, name: str) -> set:
        node = self._node_for(Atomic(name))
        return {a for a in self.labels[node] if isinstance(a, str) and a != TOP}

    def materialize(self) -> KnowledgeBase:
        abox = set(self.kb.abox)
        for x in self.kb.individuals:
            abox.update(ConceptAssertion(a, x) for a in self.atomic_types(x))
        for a in self.kb.abox:
            if isinstance(a, RoleAssertion):
                abox.update(RoleAssertion(s, a.subject, a.object) for s in self._supers(a.role))
        return self.kb.with_abox(abox)


_cache: "weakref.WeakKeyDictionary[KnowledgeBase, Reasoner]" = weakref.WeakKeyDictionary()
_cache_lock = threading.Lock()


def reasoner_for(kb: KnowledgeBase) -> Reasoner:
    with _cache_lock:
        r = _cache.get(kb)
        if r is None or r.kb.signature != kb.signature:
            r = Reasoner(kb)
            _cache[kb] = r
        return r


def is_subsumed(kb: KnowledgeBase, lhs, rhs) -> bool:
    return reasoner_for(kb).is_subsumed(lhs, rhs)


def instance_check(kb: KnowledgeBase, c, x: str) -> bool:
    return reasoner_for(kb).instance_check(c, x)


def is_subrole(kb: KnowledgeBase, r: str, s: str) -> bool:
    return reasoner_for(kb).is_subrole(r, s)


def materialize(kb: KnowledgeBase) -> KnowledgeBase:
    return reasoner_for(kb).materialize()


def reachable_part(kb: KnowledgeBase, x: str) -> KnowledgeBase:
    """``kb`` cut down to the assertions about individuals reachable from ``x``.

    Completion only moves labels from role successors to their predecessors,
    so this smaller KB decides every instance check on ``x``.
    """
    out = {}
    for a in kb.abox:
        if isinstance(a, RoleAssertion):
            out.setdefault(a.subject, []).append(a.object)
    seen, todo = {x}, [x]
    while todo:
        for y in out.get(todo.pop(), ()):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return kb.with_abox({a for a in kb.abox if a.subject in seen})


def negative_individuals(kb: KnowledgeBase, c) -> set:
    """Individuals ``y`` with ``K ⊭ C(y)``."""
    r = reasoner_for(kb)
    return {y for y in kb.individuals if not r.holds_at(c, ("ind", y))}
