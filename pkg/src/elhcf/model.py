"""Immutable value types for ELH knowledge bases.

Concepts are built from ``Top``, ``Atomic``, ``Intersection`` and
``Existential``.  Use :func:`intersect` (or :func:`conj`) to build
intersections; it flattens, drops ``Top``, removes duplicates and sorts the
conjuncts so two equivalent spellings compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union


class SignatureError(ValueError):
    """A name is unknown or used with two different kinds."""


class InfeasibleChangeError(ValueError):
    pass


class ChangeConsistencyError(ValueError):
    pass


class SymbolKind(str, Enum):
    CONCEPT = "concept-name"
    ROLE = "role-name"
    INDIVIDUAL = "individual-name"


# ---------------------------------------------------------------- concepts

@dataclass(frozen=True)
class _TopType:
    def __repr__(self) -> str:
        return "Top"


Top = _TopType()


def is_top(c) -> bool:
    return isinstance(c, _TopType)


@dataclass(frozen=True)
class Atomic:
    name: str

    def __repr__(self) -> str:
        return f"Atomic({self.name!r})"


@dataclass(frozen=True)
class Existential:
    role: str
    filler: "Concept"

    def __repr__(self) -> str:
        return f"Existential({self.role!r}, {self.filler!r})"


@dataclass(frozen=True)
class Intersection:
    conjuncts: tuple

    def __post_init__(self):
        cs = self.conjuncts
        if len(cs) < 2:
            raise ValueError("an intersection needs at least two conjuncts")
        for c in cs:
            if isinstance(c, Intersection) or is_top(c):
                raise ValueError("intersection conjuncts must be flattened and Top-free")
        if tuple(sorted(set(cs), key=sort_key)) != cs:
            raise ValueError("intersection conjuncts must be unique and canonically ordered; use intersect()")

    def __repr__(self) -> str:
        return f"Intersection({list(self.conjuncts)!r})"


Concept = Union[_TopType, Atomic, Intersection, Existential]


def sort_key(c: Concept) -> tuple:
    """Total order on concepts: Top < atomic < existential < intersection."""
    if is_top(c):
        return (0,)
    if isinstance(c, Atomic):
        return (1, c.name)
    if isinstance(c, Existential):
        return (2, c.role, sort_key(c.filler))
    if isinstance(c, Intersection):
        return (3, tuple(sort_key(d) for d in c.conjuncts))
    raise TypeError(f"not a concept: {c!r}")


def intersect(*concepts: Concept) -> Concept:
    flat = set()
    for c in concepts:
        if isinstance(c, Intersection):
            flat.update(c.conjuncts)
        elif not is_top(c):
            flat.add(c)
    if not flat:
        return Top
    if len(flat) == 1:
        return flat.pop()
    return Intersection(tuple(sorted(flat, key=sort_key)))


def conj(concepts: Iterable[Concept]) -> Concept:
    return intersect(*concepts)


def conjuncts(c: Concept) -> tuple:
    """Top-level conjuncts of ``c``; ``Top`` yields ``(Top,)``."""
    if isinstance(c, Intersection):
        return c.conjuncts
    return (c,)


def some(role: str, filler: Concept) -> Existential:
    return Existential(role, filler)


def concept_names(c: Concept) -> set:
    if isinstance(c, Atomic):
        return {c.name}
    if isinstance(c, Existential):
        return concept_names(c.filler)
    if isinstance(c, Intersection):
        return set().union(*(concept_names(d) for d in c.conjuncts))
    return set()


def role_names(c: Concept) -> set:
    if isinstance(c, Existential):
        return {c.role} | role_names(c.filler)
    if isinstance(c, Intersection):
        return set().union(*(role_names(d) for d in c.conjuncts))
    return set()


def role_depth(c: Concept) -> int:
    if isinstance(c, Existential):
        return 1 + role_depth(c.filler)
    if isinstance(c, Intersection):
        return max(role_depth(d) for d in c.conjuncts)
    return 0


def subconcepts(c: Concept) -> set:
    out = {c}
    if isinstance(c, Existential):
        out |= subconcepts(c.filler)
    elif isinstance(c, Intersection):
        for d in c.conjuncts:
            out |= subconcepts(d)
    return out


# ---------------------------------------------------------------- axioms

@dataclass(frozen=True)
class ConceptInclusion:
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True)
class RoleInclusion:
    sub: str
    sup: str


TBoxAxiom = Union[ConceptInclusion, RoleInclusion]


@dataclass(frozen=True, order=True)
class ConceptAssertion:
    concept: str
    individual: str

    @property
    def subject(self) -> str:
        return self.individual

    def __str__(self) -> str:
        return f"{self.concept}({self.individual})"


@dataclass(frozen=True, order=True)
class RoleAssertion:
    role: str
    subject: str
    object: str

    def __str__(self) -> str:
        return f"{self.role}({self.subject}, {self.object})"


ABoxAssertion = Union[ConceptAssertion, RoleAssertion]


def assertion_key(a: ABoxAssertion) -> tuple:
    if isinstance(a, ConceptAssertion):
        return (0, a.individual, a.concept, "")
    return (1, a.subject, a.role, a.object)


def sorted_assertions(assertions: Iterable[ABoxAssertion]) -> list:
    return sorted(assertions, key=assertion_key)


# ---------------------------------------------------------------- signature

@dataclass(frozen=True)
class Signature:
    concepts: frozenset = frozenset()
    roles: frozenset = frozenset()
    individuals: frozenset = frozenset()

    def kind_of(self, name: str):
        for kind, names in ((SymbolKind.CONCEPT, self.concepts),
                            (SymbolKind.ROLE, self.roles),
                            (SymbolKind.INDIVIDUAL, self.individuals)):
            if name in names:
                return kind
        return None

    def __or__(self, other: "Signature") -> "Signature":
        return Signature(self.concepts | other.concepts,
                         self.roles | other.roles,
                         self.individuals | other.individuals)


def _collect_signature(tbox, abox) -> Signature:
    cs, rs, inds = set(), set(), set()
    for ax in tbox:
        if isinstance(ax, RoleInclusion):
            rs.update((ax.sub, ax.sup))
        else:
            for c in (ax.lhs, ax.rhs):
                cs |= concept_names(c)
                rs |= role_names(c)
    for a in abox:
        if isinstance(a, ConceptAssertion):
            cs.add(a.concept)
            inds.add(a.individual)
        else:
            rs.add(a.role)
            inds.update((a.subject, a.object))
    return Signature(frozenset(cs), frozenset(rs), frozenset(inds))


def check_disjoint(sig: Signature) -> None:
    for a, b in ((sig.concepts, sig.roles), (sig.concepts, sig.individuals),
                 (sig.roles, sig.individuals)):
        clash = a & b
        if clash:
            raise SignatureError(f"name used with two kinds: {sorted(clash)[0]!r}")


# ---------------------------------------------------------------- KB

@dataclass(frozen=True)
class KnowledgeBase:
    """An ELH knowledge base.

    ``declared`` carries symbols that belong to the signature without
    occurring in any axiom, e.g. an individual whose assertions were all
    removed.  It does not take part in equality.
    """

    tbox: frozenset = frozenset()
    abox: frozenset = frozenset()
    declared: Signature = field(default=Signature(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tbox", frozenset(self.tbox))
        object.__setattr__(self, "abox", frozenset(self.abox))
        for a in self.abox:
            if not isinstance(a, (ConceptAssertion, RoleAssertion)):
                raise TypeError(f"not an ABox assertion: {a!r}")
        for ax in self.tbox:
            if not isinstance(ax, (ConceptInclusion, RoleInclusion)):
                raise TypeError(f"not a TBox axiom: {ax!r}")
        sig = _collect_signature(self.tbox, self.abox) | self.declared
        check_disjoint(sig)
        object.__setattr__(self, "_signature", sig)

    @property
    def signature(self) -> Signature:
        return self._signature

    @property
    def individuals(self) -> frozenset:
        return self._signature.individuals

    def require_individual(self, x: str) -> None:
        if x not in self._signature.individuals:
            raise SignatureError(f"unknown individual: {x!r}")

    def assertions_about(self, x: str) -> set:
        """Assertions whose (concept or role) subject is ``x``."""
        return {a for a in self.abox if a.subject == x}

    def with_abox(self, abox) -> "KnowledgeBase":
        return KnowledgeBase(self.tbox, abox, self._signature)


# ---------------------------------------------------------------- requests and deltas

class Direction(str, Enum):
    ADD = "add"
    REM = "rem"


@dataclass(frozen=True)
class CounterfactualRequest:
    concept: Concept
    individual: str
    direction: Direction

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))


@dataclass(frozen=True)
class ChangeSet:
    removed: frozenset = frozenset()
    added: frozenset = frozenset()
    feasible: bool = True

    def __post_init__(self):
        object.__setattr__(self, "removed", frozenset(self.removed))
        object.__setattr__(self, "added", frozenset(self.added))
        if self.removed & self.added:
            raise ValueError("an assertion cannot be both removed and added")
        if not self.feasible and (self.removed or self.added):
            raise ValueError("an infeasible change set carries no changes")

    @classmethod
    def infeasible(cls) -> "ChangeSet":
        return cls(feasible=False)

    def inverse(self) -> "ChangeSet":
        return ChangeSet(self.added, self.removed, self.feasible)

    def is_empty(self) -> bool:
        return not self.removed and not self.added

    def touched(self) -> frozenset:
        return self.removed | self.added

    def sort_key(self) -> tuple:
        return (not self.feasible,
                tuple(str(a) for a in sorted_assertions(self.removed)),
                tuple(str(a) for a in sorted_assertions(self.added)))


@dataclass(frozen=True)
class FeatureSet:
    concept_names: frozenset = frozenset()
    role_names: frozenset = frozenset()

    def distance(self, other: "FeatureSet") -> int:
        """Size of the symmetric difference, concept and role names summed."""
        return (len(self.concept_names ^ other.concept_names)
                + len(self.role_names ^ other.role_names))


def feature_set(kb: KnowledgeBase, x: str) -> FeatureSet:
    kb.require_individual(x)
    cs, rs = set(), set()
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            if a.individual == x:
                cs.add(a.concept)
        elif a.subject == x:
            rs.add(a.role)
    return FeatureSet(frozenset(cs), frozenset(rs))


def feature_sets(kb: KnowledgeBase) -> dict:
    """``feature_set`` for every individual, in one pass over the ABox."""
    cs = {x: set() for x in kb.individuals}
    rs = {x: set() for x in kb.individuals}
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            cs[a.individual].add(a.concept)
        else:
            rs[a.subject].add(a.role)
    return {x: FeatureSet(frozenset(cs[x]), frozenset(rs[x])) for x in cs}


def apply_changeset(kb: KnowledgeBase, cs: ChangeSet) -> KnowledgeBase:
    if not cs.feasible:
        raise InfeasibleChangeError("cannot apply an infeasible change set")
    missing = cs.removed - kb.abox
    if missing:
        raise ChangeConsistencyError(
            f"removed assertion not in ABox: {sorted_assertions(missing)[0]}")
    present = cs.added & kb.abox
    if present:
        raise ChangeConsistencyError(
            f"added assertion already in ABox: {sorted_assertions(present)[0]}")
    return kb.with_abox((kb.abox - cs.removed) | cs.added)
