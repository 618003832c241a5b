import pytest

from elhcf.model import (
    Atomic, ChangeConsistencyError, ChangeSet, ConceptAssertion, ConceptInclusion,
    Existential, FeatureSet, InfeasibleChangeError, Intersection, KnowledgeBase,
    RoleAssertion, RoleInclusion, Signature, SignatureError, Top, apply_changeset,
    conjuncts, feature_set, feature_sets, intersect, role_depth, some,
)

A, B, C, D = (Atomic(n) for n in "ABCD")


def example1():
    return KnowledgeBase({ConceptInclusion(intersect(B, C), D)},
                         {ConceptAssertion("B", "x"), ConceptAssertion("C", "x"),
                          ConceptAssertion("D", "x")})


def test_intersection_is_flat_sorted_and_top_free():
    c = intersect(D, intersect(B, Top), some("r", A), B)
    assert isinstance(c, Intersection)
    assert c.conjuncts == (B, D, Existential("r", A))
    assert intersect(B, Top) == B
    assert intersect() is Top
    assert intersect(C, B) == intersect(B, C)


def test_raw_intersection_rejects_non_canonical_input():
    with pytest.raises(ValueError):
        Intersection((B,))
    with pytest.raises(ValueError):
        Intersection((C, B))
    with pytest.raises(ValueError):
        Intersection((B, Top))


def test_conjuncts_and_depth():
    c = intersect(A, some("r", some("s", B)))
    assert conjuncts(c) == (A, some("r", some("s", B)))
    assert conjuncts(Top) == (Top,)
    assert role_depth(c) == 2


def test_symbol_kinds_must_be_disjoint():
    with pytest.raises(SignatureError):
        KnowledgeBase(set(), {ConceptAssertion("r", "x"), RoleAssertion("r", "x", "y")})
    with pytest.raises(SignatureError):
        KnowledgeBase({RoleInclusion("r", "s")}, {ConceptAssertion("A", "r")})


def test_require_individual():
    kb = example1()
    kb.require_individual("x")
    with pytest.raises(SignatureError):
        kb.require_individual("nobody")


def test_feature_set_example1():
    assert feature_set(example1(), "x") == FeatureSet(frozenset("BCD"), frozenset())


def test_feature_set_uses_subject_roles_only():
    kb = KnowledgeBase(set(), {ConceptAssertion("Male", "x"), RoleAssertion("hasSibling", "x", "a"),
                               ConceptAssertion("Female", "a")})
    assert feature_set(kb, "x") == FeatureSet(frozenset({"Male"}), frozenset({"hasSibling"}))
    assert feature_set(kb, "a") == FeatureSet(frozenset({"Female"}), frozenset())
    assert feature_sets(kb) == {"x": feature_set(kb, "x"), "a": feature_set(kb, "a")}


def test_feature_set_empty_abox():
    kb = KnowledgeBase(set(), set(), Signature(individuals=frozenset({"x"})))
    assert feature_set(kb, "x") == FeatureSet()


def test_feature_set_unknown_individual():
    with pytest.raises(SignatureError):
        feature_set(example1(), "y")


def test_distance_is_symmetric_difference():
    f = FeatureSet(frozenset("BCD"), frozenset())
    g = FeatureSet(frozenset("C"), frozenset({"r"}))
    assert f.distance(g) == g.distance(f) == 3


def test_apply_changeset_example1():
    kb = example1()
    k1 = apply_changeset(kb, ChangeSet(removed={ConceptAssertion("C", "x"), ConceptAssertion("D", "x")}))
    assert k1.abox == {ConceptAssertion("B", "x")}
    assert k1.tbox == kb.tbox
    assert len(kb.abox) == 3


def test_apply_empty_and_inverse_restore():
    kb = example1()
    assert apply_changeset(kb, ChangeSet()) == kb
    cs = ChangeSet(removed={ConceptAssertion("B", "x")}, added={ConceptAssertion("A", "x")})
    assert apply_changeset(apply_changeset(kb, cs), cs.inverse()) == kb


def test_apply_addition_on_empty_abox():
    kb = KnowledgeBase(set(), set(), Signature(individuals=frozenset({"x"})))
    k1 = apply_changeset(kb, ChangeSet(added={ConceptAssertion("Male", "x")}))
    assert k1.abox == {ConceptAssertion("Male", "x")}


def test_apply_errors():
    kb = example1()
    with pytest.raises(InfeasibleChangeError):
        apply_changeset(kb, ChangeSet.infeasible())
    with pytest.raises(ChangeConsistencyError):
        apply_changeset(kb, ChangeSet(removed={ConceptAssertion("A", "x")}))
    with pytest.raises(ChangeConsistencyError):
        apply_changeset(kb, ChangeSet(added={ConceptAssertion("B", "x")}))


def test_changeset_validation():
    a = ConceptAssertion("A", "x")
    with pytest.raises(ValueError):
        ChangeSet(removed={a}, added={a})
    with pytest.raises(ValueError):
        ChangeSet(removed={a}, feasible=False)
    assert ChangeSet().is_empty()
    assert ChangeSet(removed={a}).touched() == {a}


def test_feature_set_monotone_under_addition():
    kb = example1()
    before = feature_set(kb, "x")
    after = feature_set(kb.with_abox(kb.abox | {RoleAssertion("r", "x", "x")}), "x")
    assert before.concept_names <= after.concept_names
    assert before.role_names <= after.role_names
