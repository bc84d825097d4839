"""Shared test utilities: random structure corpora and the exhaustive oracle.

The oracle enumerates every |target|^|source| map directly from the
definition and never touches the backtracking solver, so solver tests check
against an independent implementation.
"""

import itertools
import random

from homforge.core import PhpInstance, Signature, Structure


def exhaustive_homs(source, target):
    """All homomorphisms by checking every possible total map."""
    rel_sets = {name: set(target.relation(name)) for name in target.signature.names()}
    out = []
    for values in itertools.product(target.domain, repeat=len(source.domain)):
        mapping = dict(zip(source.domain, values))
        ok = True
        for name in source.signature.names():
            for t in source.relation(name):
                if tuple(mapping[c] for c in t) not in rel_sets[name]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(mapping)
    return out


def exhaustive_hom_exists(source, target):
    for _ in exhaustive_homs(source, target):
        return True
    return False


def random_structure(rng, sig, max_dom=3, min_dom=1, density=0.4, nonempty_relations=False):
    """A random structure over sig with a domain of size min_dom..max_dom."""
    n = rng.randint(min_dom, max_dom)
    dom = tuple(f"e{i}" for i in range(n))
    interp = {}
    for name, arity in sig.relations:
        candidates = list(itertools.product(dom, repeat=arity))
        chosen = [t for t in candidates if rng.random() < density]
        if nonempty_relations and not chosen and candidates:
            chosen = [rng.choice(candidates)]
        interp[name] = tuple(chosen)
    return Structure(sig, dom, interp)


def random_signature(rng, max_relations=2, max_arity=2):
    k = rng.randint(1, max_relations)
    return Signature(
        tuple((f"R{i}", rng.randint(1, max_arity)) for i in range(k))
    )


def random_php_instance(rng, sig, n_factors=None, max_dom=3, **kwargs):
    if n_factors is None:
        n_factors = rng.randint(1, 2)
    factors = tuple(
        random_structure(rng, sig, max_dom=max_dom, **kwargs) for _ in range(n_factors)
    )
    target = random_structure(rng, sig, max_dom=max_dom, **kwargs)
    return PhpInstance(factors, target)


def random_single_relation_instance(rng, max_arity=2, max_dom=3, max_factors=2):
    """Single-relation instance with nonempty relations (digraph pipeline corpus)."""
    sig = Signature((("R", rng.randint(1, max_arity)),))
    n = rng.randint(1, max_factors)
    dom = max_dom if n == 1 else 2
    return random_php_instance(
        rng, sig, n_factors=n, max_dom=dom, nonempty_relations=True
    )
