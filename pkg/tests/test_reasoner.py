import random

from corpus import FIXTURES, random_kbs
from elhcf.model import (
    Atomic, ConceptAssertion, ConceptInclusion, KnowledgeBase, RoleAssertion, Top, intersect,
    some,
)
from elhcf.oracle import naive_instance_check, naive_is_subsumed, naive_materialize, random_concept
from elhcf.parser import parse_concept, parse_kb
from elhcf.reasoner import (
    Fresh, instance_check, is_subrole, is_subsumed, materialize, negative_individuals, normalize,
    reachable_part,
)

A, B, C, D = (Atomic(n) for n in "ABCD")


def load(name):
    return parse_kb((FIXTURES / name).read_text())


def test_example1():
    kb = load("example1.kb")
    assert is_subsumed(kb, intersect(B, C), D)
    assert not is_subsumed(kb, B, D)
    assert instance_check(kb, D, "x")
    assert negative_individuals(kb, D) == set()


def test_example1_without_d_assertion_still_entails_d():
    kb = parse_kb("B and C SubClassOf D\nB(x)\nC(x)")
    assert instance_check(kb, D, "x")


def test_top_and_reflexivity():
    kb = load("chain.kb")
    assert is_subsumed(kb, A, A)
    assert is_subsumed(kb, A, Top)
    assert instance_check(kb, Top, "x")
    assert not is_subsumed(kb, Top, A)


def test_chain():
    kb = load("chain.kb")
    assert is_subsumed(kb, A, D)
    assert not is_subsumed(kb, D, A)
    m = materialize(kb)
    assert {ConceptAssertion(n, "x") for n in "ABCD"} <= m.abox


def test_existential_subsumption():
    kb = parse_kb("A SubClassOf r some B\nr some B SubClassOf C\ns SubRoleOf r")
    assert is_subsumed(kb, A, C)
    assert is_subsumed(kb, some("s", B), C)
    assert not is_subsumed(kb, some("r", Top), C)
    assert is_subsumed(kb, some("r", intersect(B, D)), some("r", B))


def test_role_hierarchy():
    kb = load("roles.kb")
    assert is_subrole(kb, "hasSon", "hasRelative")
    assert not is_subrole(kb, "hasRelative", "hasSon")
    assert instance_check(kb, some("hasRelative", Atomic("Male")), "ann")
    m = materialize(kb)
    assert RoleAssertion("hasRelative", "ann", "bob") in m.abox
    assert RoleAssertion("hasChild", "ann", "bob") in m.abox
    assert ConceptAssertion("Parent", "ann") in m.abox


def test_normal_form_names_are_fresh():
    nt = normalize(parse_kb("A and r some (B and C) SubClassOf s some D").tbox)
    assert nt.fresh_names and all(isinstance(f, Fresh) for f in nt.fresh_names)
    simple = lambda n: isinstance(n, (str, Fresh))
    for ax in nt.axioms():
        shape, *parts = ax
        assert shape in {"sub", "conj", "ex-r", "ex-l"}
        names = list(parts[0]) + [parts[1]] if shape == "conj" else parts
        assert all(simple(n) for n in names)


def test_family_negatives_match_instance_checks():
    kb = load("family.kb")
    male = Atomic("Male")
    neg = negative_individuals(kb, male)
    assert neg == {y for y in kb.individuals if not instance_check(kb, male, y)}
    assert 0 < len(neg) < len(kb.individuals)


def test_family_sibling_query_matches_oracle():
    kb = load("family.kb")
    c = parse_concept("Male and hasSibling some Female")
    for y in sorted(kb.individuals)[:40]:
        assert instance_check(kb, c, y) == naive_instance_check(kb, c, y)


def test_reachable_part_decides_instance_checks():
    for seed, kb in enumerate(random_kbs(60)):
        rng = random.Random(seed)
        names = sorted(kb.signature.concepts) or ["A0"]
        roles = sorted(kb.signature.roles)
        for x in sorted(kb.individuals):
            c = random_concept(rng, names, roles, 2, 3)
            assert instance_check(reachable_part(kb, x), c, x) == instance_check(kb, c, x)


def test_random_instance_checks_agree_with_oracle():
    agree = 0
    for seed, kb in enumerate(random_kbs(100, start=500)):
        rng = random.Random(seed)
        names = sorted(kb.signature.concepts) or ["A0"]
        roles = sorted(kb.signature.roles)
        for x in sorted(kb.individuals)[:3]:
            c = random_concept(rng, names, roles, 2, 3)
            assert instance_check(kb, c, x) == naive_instance_check(kb, c, x), (seed, x, c)
            agree += 1
    assert agree >= 100


def test_random_subsumptions_agree_with_oracle():
    for seed, kb in enumerate(random_kbs(100, start=900)):
        rng = random.Random(seed)
        names = sorted(kb.signature.concepts) or ["A0"]
        roles = sorted(kb.signature.roles)
        lhs = random_concept(rng, names, roles, 2, 3)
        rhs = random_concept(rng, names, roles, 1, 2)
        assert is_subsumed(kb, lhs, rhs) == naive_is_subsumed(kb, lhs, rhs), (seed, lhs, rhs)


def test_materialize_laws():
    for kb in random_kbs(60, start=1300):
        m = materialize(kb)
        assert kb.abox <= m.abox                      # extensive
        assert materialize(m) == m                    # idempotent
        assert m.abox == naive_materialize(kb) | kb.abox
        if kb.abox:
            smaller = kb.with_abox(set(sorted(kb.abox, key=str)[1:]))
            assert materialize(smaller).abox <= m.abox  # monotone


def test_cache_tracks_distinct_kbs():
    k1 = KnowledgeBase({ConceptInclusion(A, B)}, {ConceptAssertion("A", "x")})
    k2 = k1.with_abox(set())
    assert instance_check(k1, B, "x")
    assert not instance_check(k2, B, "x")
