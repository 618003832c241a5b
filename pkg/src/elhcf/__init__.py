"""Counterfactual explanations for ELH concept assertions.

Typical use::

    from elhcf import parse_kb, parse_concept, explain, CounterfactualRequest, Direction
    kb = parse_kb(open("family.kb").read())
    req = CounterfactualRequest(parse_concept("Brother"), "p004", Direction.REM)
    for rc in explain(kb, req).counterfactuals:
        print(verbalize(rc, req))
"""
from .counterfactual import (
    CandidateSet, Explanation, NegativeResult, RankedCounterfactual, RequestFulfilledError,
    create_candidates_neg, create_candidates_pos, edit_distance, explain, find_candidates,
    likeliness, minimal_hitting_sets, prune_redundant, verify_fulfillment,
)
from .model import (
    Atomic, ChangeConsistencyError, ChangeSet, ConceptAssertion, ConceptInclusion,
    CounterfactualRequest, Direction, Existential, FeatureSet, InfeasibleChangeError,
    Intersection, KnowledgeBase, RoleAssertion, RoleInclusion, Signature, SignatureError,
    Top, apply_changeset, feature_set, intersect, some,
)
from .parser import (
    ParseDiagnostic, ParseError, check_kb, format_concept, parse_concept, parse_kb,
    serialize_kb,
)
from .reasoner import (
    Reasoner, instance_check, is_subrole, is_subsumed, materialize, negative_individuals,
    normalize,
)
from .verbalizer import Template, VerbalizationError, load_labels, verbalize

__version__ = "0.1.0"
