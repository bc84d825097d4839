import random

import pytest

from homforge.core import (
    Homomorphism,
    PhpInstance,
    Signature,
    Structure,
    binarize_unary,
    digraph,
    disjoint_union,
    parse,
    product,
    projection,
    serialize,
)
from homforge.errors import (
    GuardExceededError,
    InvalidStructureError,
    SignatureMismatchError,
)
from homforge.homsolver import decide_php

import helpers


ONE_EDGE = digraph(("a", "b"), (("a", "b"),))
LOOP = digraph(("v",), (("v", "v"),))


def test_signature_rejects_duplicates_and_bad_arity():
    with pytest.raises(InvalidStructureError):
        Signature((("E", 2), ("E", 1)))
    with pytest.raises(InvalidStructureError):
        Signature((("E", 0),))


def test_structure_invariants():
    sig = Signature((("E", 2),))
    with pytest.raises(InvalidStructureError):
        Structure(sig, ("a", "a"), {})
    with pytest.raises(InvalidStructureError):
        Structure(sig, ("a",), {"E": (("a",),)})  # wrong length
    with pytest.raises(InvalidStructureError):
        Structure(sig, ("a",), {"E": (("a", "x"),)})  # unknown element
    s = Structure(sig, ("b", "a"), {})
    assert s.domain == ("a", "b")
    assert s.relation("E") == ()


def test_single_factor_product_is_isomorphic_wrapping():
    p = product([ONE_EDGE])
    assert p.domain == (("a",), ("b",))
    assert p.relation("E") == (((("a",), ("b",)),))


def test_product_of_two_one_edge_digraphs():
    # derived by enumerating all 16 candidate pairs componentwise
    p = product([ONE_EDGE, ONE_EDGE])
    assert len(p.domain) == 4
    assert p.relation("E") == ((("a", "a"), ("b", "b")),)


def test_product_empty_relation_absorbs():
    empty = digraph(("x", "y"), ())
    p = product([ONE_EDGE, empty])
    assert p.relation("E") == ()


def test_product_signature_mismatch():
    other = Structure(Signature((("F", 2),)), ("a",), {})
    with pytest.raises(SignatureMismatchError):
        product([ONE_EDGE, other])


def test_product_guard_reports_cardinality():
    big = digraph(tuple(f"v{i}" for i in range(10)), ())
    with pytest.raises(GuardExceededError) as exc:
        product([big, big], guard=50)
    assert exc.value.cardinality == 100


def test_projections_are_homomorphisms():
    rng = random.Random(7)
    for _ in range(25):
        sig = helpers.random_signature(rng)
        factors = [helpers.random_structure(rng, sig) for _ in range(rng.randint(1, 3))]
        p = product(factors)
        for i, f in enumerate(factors):
            assert projection(p, i).is_valid(p, f)


def test_product_associative_up_to_rebracketing():
    rng = random.Random(11)
    for _ in range(10):
        sig = helpers.random_signature(rng)
        a, b, c = (helpers.random_structure(rng, sig, max_dom=2) for _ in range(3))
        left = product([product([a, b]), c])
        right = product([a, product([b, c])])
        flat = product([a, b, c])

        def flatten_left(e):
            return (e[0][0], e[0][1], e[1])

        def flatten_right(e):
            return (e[0], e[1][0], e[1][1])

        for name in sig.names():
            assert {
                tuple(flatten_left(x) for x in t) for t in left.relation(name)
            } == set(flat.relation(name))
            assert {
                tuple(flatten_right(x) for x in t) for t in right.relation(name)
            } == set(flat.relation(name))


def test_disjoint_union_counts():
    u = disjoint_union([ONE_EDGE, ONE_EDGE])
    assert len(u.domain) == 4
    assert len(u.relation("E")) == 2


def test_disjoint_union_preserves_hom_existence():
    isolated = digraph(("z",), ())
    u = disjoint_union([ONE_EDGE, isolated])
    before = helpers.exhaustive_hom_exists(ONE_EDGE, LOOP)
    after = helpers.exhaustive_hom_exists(u, LOOP)
    assert before and after


def test_binarize_unary_definition():
    sig = Signature((("P", 1), ("E", 2)))
    s = Structure(sig, ("a", "b"), {"P": (("a",),), "E": ()})
    b = binarize_unary(s)
    assert b.signature.arity("P") == 2
    assert b.relation("P") == (("a", "a"),)
    # no unary relations: unchanged
    assert binarize_unary(ONE_EDGE) == ONE_EDGE


def test_binarize_preserves_php_verdicts():
    rng = random.Random(23)
    sig = Signature((("P", 1), ("E", 2)))
    for _ in range(30):
        inst = helpers.random_php_instance(rng, sig, max_dom=3)
        binst = PhpInstance(
            tuple(binarize_unary(f) for f in inst.factors),
            binarize_unary(inst.target),
        )
        assert decide_php(inst).yes == decide_php(binst).yes


def test_empty_domain_product_and_hom():
    empty = digraph((), ())
    p = product([empty, ONE_EDGE])
    assert p.domain == ()
    assert Homomorphism({}).is_valid(p, ONE_EDGE)


def test_serialize_parse_round_trips():
    s = Structure(
        Signature((("E", 2), ("P", 1))),
        ("b", "a"),
        {"E": (("a", "b"),), "P": (("b",),)},
    )
    text = serialize(s)
    again = parse(text)
    assert again == s
    assert serialize(again) == text  # byte-level fixpoint on canonical text


def test_parse_rejects_bad_files():
    with pytest.raises(InvalidStructureError):
        parse("not json")
    with pytest.raises(InvalidStructureError):
        parse('{"domain": ["a"]}')
    with pytest.raises(InvalidStructureError):
        parse('{"domain": ["a", "a"], "relations": {}}')
    with pytest.raises(InvalidStructureError):
        parse(
            '{"domain": ["a"], "relations":'
            ' {"E": {"arity": 2, "tuples": [["a","a"],["a","a"]]}}}'
        )
