"""Template-based English sentences for ranked counterfactuals."""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .model import (
    Atomic, ConceptAssertion, CounterfactualRequest, Direction, RoleAssertion,
    sorted_assertions,
)
from .parser import format_concept


class VerbalizationError(ValueError):
    pass


@dataclass(frozen=True)
class Template:
    direction: Direction
    pattern: str
    language: str = "en"

    def render(self, **slots) -> str:
        return self.pattern.format(**slots)


TEMPLATES = {
    Direction.REM: Template(Direction.REM,
                            "{individual} would not have been classified as {concept} if {changes}."),
    Direction.ADD: Template(Direction.ADD,
                            "{individual} would have been classified as {concept} if {changes}."),
}

# "hasScales" reads as a possession ("did not have scales"), "Male" as a state
_POSSESSIVE = re.compile(r"^has[A-Z_]")


def load_labels(path) -> dict:
    """Read a ``symbol<TAB>display text`` file; ``#`` lines are comments."""
    labels = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        symbol, sep, text = line.partition("\t")
        if not sep:
            raise ValueError(f"labels line lacks a TAB: {line!r}")
        labels[symbol.strip()] = text.strip()
    return labels


def _join(items) -> str:
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + " and " + items[-1]


def _phrase(a, labels, negated: bool) -> str:
    label = lambda s: labels.get(s, s)
    if isinstance(a, ConceptAssertion):
        if _POSSESSIVE.match(a.concept):
            return f"did not have {label(a.concept)}" if negated else f"had {label(a.concept)}"
        return f"were not {label(a.concept)}" if negated else f"were {label(a.concept)}"
    obj = label(a.object)
    return (f"did not have {label(a.role)} {obj}" if negated
            else f"had {label(a.role)} {obj}")


def _clauses(assertions, labels, negated: bool, first: str) -> str:
    """Group predicates by subject, ``first`` subject leading."""
    by_subject = {}
    for a in sorted_assertions(assertions):
        by_subject.setdefault(a.subject, []).append(_phrase(a, labels, negated))
    order = [first] + sorted(s for s in by_subject if s != first)
    parts = [f"{labels.get(s, s)} {_join(by_subject[s])}" for s in order if s in by_subject]
    return parts[0] if len(parts) == 1 else ", ".join(parts[:-1]) + ", and " + parts[-1]


def concept_label(concept, labels: Mapping[str, str]) -> str:
    if isinstance(concept, Atomic):
        return labels.get(concept.name, concept.name)
    text = format_concept(concept)
    return labels.get(text, text)


def verbalize(rc, request: CounterfactualRequest, labels: Optional[Mapping[str, str]] = None) -> str:
    labels = labels or {}
    x = request.individual
    who = labels.get(x, x)
    what = concept_label(request.concept, labels)
    cs = rc.change_set
    if not cs.feasible:
        verb = "made to fail" if request.direction is Direction.REM else "made to hold"
        return (f"The classification of {who} as {what} cannot be {verb} "
                f"by changing assertions about {who}.")
    if request.direction is Direction.REM:
        if not cs.removed or cs.added:
            raise VerbalizationError("a removal counterfactual must remove, and only remove, assertions")
        removed = set(cs.removed)
        # "would not be C if x were not C" says nothing; keep it only if it is all there is
        if isinstance(request.concept, Atomic) and len(removed) > 1:
            removed.discard(ConceptAssertion(request.concept.name, x))
        changes = _clauses(removed, labels, True, x)
    else:
        if not cs.added or cs.removed:
            raise VerbalizationError("an addition counterfactual must add, and only add, assertions")
        changes = _clauses(cs.added, labels, False, x)
    return TEMPLATES[request.direction].render(individual=who, concept=what, changes=changes)
