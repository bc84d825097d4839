"""Finite relational structures: signatures, products, unions, and the JSON file format.

Element identifiers are strings; composite elements (products, unions, gadget
nodes) are nested tuples of strings.  All constructors normalize domains and
relation interpretations into canonical sorted order so that equal structures
compare equal and every traversal is deterministic.
"""

import itertools
import json
import math
from dataclasses import dataclass

from .errors import GuardExceededError, InvalidStructureError, SignatureMismatchError

DEFAULT_PRODUCT_GUARD = 10**6


def element_key(e):
    """Total order on elements: plain strings before tuples, recursively."""
    if isinstance(e, str):
        return (0, e)
    return (1, tuple(element_key(c) for c in e))


def tuple_key(t):
    return tuple(element_key(c) for c in t)


def element_label(e):
    """Canonical string form of an element, for serialization and CLI output."""
    if isinstance(e, str):
        return e
    return json.dumps(_to_lists(e), separators=(",", ":"))


def _to_lists(e):
    if isinstance(e, str):
        return e
    return [_to_lists(c) for c in e]


@dataclass(frozen=True)
class Signature:
    """Ordered list of (relation name, arity) pairs."""

    relations: tuple

    def __post_init__(self):
        rels = tuple((str(n), int(a)) for n, a in self.relations)
        object.__setattr__(self, "relations", rels)
        names = [n for n, _ in rels]
        if len(set(names)) != len(names):
            raise InvalidStructureError("relation names must be pairwise distinct")
        for n, a in rels:
            if a < 1:
                raise InvalidStructureError(f"arity of {n!r} must be >= 1, got {a}")

    def names(self):
        return [n for n, _ in self.relations]

    def arity(self, name):
        for n, a in self.relations:
            if n == name:
                return a
        raise KeyError(name)

    def as_dict(self):
        return dict(self.relations)

    def same_as(self, other):
        """Signature compatibility ignores declaration order."""
        return self.as_dict() == other.as_dict()


@dataclass(frozen=True)
class Structure:
    """A finite relational structure with canonically sorted domain and relations."""

    signature: Signature
    domain: tuple
    interp: dict

    def __post_init__(self):
        dom = sorted(self.domain, key=element_key)
        for a, b in zip(dom, dom[1:]):
            if a == b:
                raise InvalidStructureError(f"duplicate domain element {a!r}")
        dom = tuple(dom)
        object.__setattr__(self, "domain", dom)
        domset = set(dom)
        names = set(self.signature.names())
        unknown = set(self.interp) - names
        if unknown:
            raise InvalidStructureError(f"relations not in signature: {sorted(unknown)}")
        interp = {}
        for name, arity in self.signature.relations:
            tuples = set(tuple(t) for t in self.interp.get(name, ()))
            for t in tuples:
                if len(t) != arity:
                    raise InvalidStructureError(
                        f"tuple {t!r} in {name!r} has length {len(t)}, arity is {arity}"
                    )
                for c in t:
                    if c not in domset:
                        raise InvalidStructureError(
                            f"tuple {t!r} in {name!r} uses unknown element {c!r}"
                        )
            interp[name] = tuple(sorted(tuples, key=tuple_key))
        object.__setattr__(self, "interp", interp)

    def relation(self, name):
        return self.interp[name]

    def tuple_count(self):
        return sum(len(ts) for ts in self.interp.values())


@dataclass(frozen=True)
class PointedStructure:
    """A structure together with a distinguished tuple of its elements."""

    structure: Structure
    distinguished: tuple

    def __post_init__(self):
        object.__setattr__(self, "distinguished", tuple(self.distinguished))
        domset = set(self.structure.domain)
        for e in self.distinguished:
            if e not in domset:
                raise InvalidStructureError(f"distinguished element {e!r} not in domain")


@dataclass(frozen=True)
class PhpInstance:
    """Factors A_1..A_n and a target B over one shared signature."""

    factors: tuple
    target: Structure

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InvalidStructureError("a PHP instance needs at least one factor")
        for f in self.factors:
            if not f.signature.same_as(self.target.signature):
                raise SignatureMismatchError("factors and target must share a signature")


@dataclass(frozen=True)
class Homomorphism:
    """A total element map; validity is checked explicitly, never assumed."""

    mapping: dict

    def __call__(self, e):
        return self.mapping[e]

    def is_valid(self, source, target):
        try:
            self.validate(source, target)
        except InvalidStructureError:
            return False
        return True

    def validate(self, source, target):
        """Raise InvalidStructureError describing the first violation found."""
        tdom = set(target.domain)
        for e in source.domain:
            if e not in self.mapping:
                raise InvalidStructureError(f"element {e!r} is unmapped")
            if self.mapping[e] not in tdom:
                raise InvalidStructureError(
                    f"{e!r} maps to {self.mapping[e]!r}, not a target element"
                )
        for name, _ in source.signature.relations:
            ttuples = set(target.relation(name))
            for t in source.relation(name):
                image = tuple(self.mapping[c] for c in t)
                if image not in ttuples:
                    raise InvalidStructureError(
                        f"tuple {t!r} of {name!r} maps to {image!r}, missing in target"
                    )

    def compose(self, other):
        """self after other: (self.compose(g))(x) = self(g(x))."""
        return Homomorphism({k: self.mapping[v] for k, v in other.mapping.items()})


def digraph(domain, edges):
    """Convenience constructor for a structure with a single binary relation E."""
    return Structure(Signature((("E", 2),)), tuple(domain), {"E": tuple(edges)})


def _require_shared_signature(structures):
    sig = structures[0].signature
    for s in structures[1:]:
        if not s.signature.same_as(sig):
            raise SignatureMismatchError("structures do not share a signature")
    return sig


def product(factors, guard=DEFAULT_PRODUCT_GUARD):
    """Direct product: domain is the cartesian product, tuples hold componentwise.

    Elements are n-tuples of factor elements in factor order.  A hard size
    guard rejects blowups instead of truncating.
    """
    factors = list(factors)
    if not factors:
        raise InvalidStructureError("product of zero factors is undefined")
    sig = _require_shared_signature(factors)
    size = math.prod(len(f.domain) for f in factors)
    if size > guard:
        raise GuardExceededError(
            f"product domain would have {size} elements (guard {guard})", size
        )
    domain = tuple(itertools.product(*(f.domain for f in factors)))
    interp = {}
    for name, arity in sig.relations:
        combos = math.prod(len(f.relation(name)) for f in factors)
        if combos > guard:
            raise GuardExceededError(
                f"product relation {name!r} would have {combos} tuples (guard {guard})",
                combos,
            )
        tuples = []
        for combo in itertools.product(*(f.relation(name) for f in factors)):
            tuples.append(tuple(tuple(t[p] for t in combo) for p in range(arity)))
        interp[name] = tuple(tuples)
    return Structure(sig, domain, interp)


def projection(product_structure, i):
    """The i-th projection map out of a product structure."""
    return Homomorphism({e: e[i] for e in product_structure.domain})


def disjoint_union(parts):
    """Tagged union: element e of part i becomes (str(i), e)."""
    parts = list(parts)
    if not parts:
        raise InvalidStructureError("disjoint union of zero parts is undefined")
    sig = _require_shared_signature(parts)
    domain = []
    interp = {name: [] for name in sig.names()}
    for i, part in enumerate(parts):
        tag = str(i)
        domain.extend((tag, e) for e in part.domain)
        for name in sig.names():
            interp[name].extend(
                tuple((tag, c) for c in t) for t in part.relation(name)
            )
    return Structure(sig, tuple(domain), interp)


def binarize_unary(s):
    """Replace every unary relation P by the binary {(a, a) : a in P}."""
    rels = []
    interp = {}
    for name, arity in s.signature.relations:
        if arity == 1:
            rels.append((name, 2))
            interp[name] = tuple((t[0], t[0]) for t in s.relation(name))
        else:
            rels.append((name, arity))
            interp[name] = s.relation(name)
    return Structure(Signature(tuple(rels)), s.domain, interp)


# --- JSON file format -------------------------------------------------------
#
# {"domain": ["a", "b"], "relations": {"E": {"arity": 2, "tuples": [["a","b"]]}}}
#
# Canonical serialization sorts the domain, the relation names, and the tuples.


def structure_to_dict(s):
    return {
        "domain": [element_label(e) for e in s.domain],
        "relations": {
            name: {
                "arity": s.signature.arity(name),
                "tuples": [[element_label(c) for c in t] for t in s.relation(name)],
            }
            for name in sorted(s.signature.names())
        },
    }


def serialize(s):
    """Canonical JSON text for a structure (stable byte-for-byte)."""
    return json.dumps(structure_to_dict(s), sort_keys=True, indent=2) + "\n"


def structure_from_dict(data):
    if not isinstance(data, dict) or "domain" not in data or "relations" not in data:
        raise InvalidStructureError("structure file needs 'domain' and 'relations'")
    domain = data["domain"]
    if not isinstance(domain, list) or not all(isinstance(e, str) for e in domain):
        raise InvalidStructureError("'domain' must be a list of strings")
    if len(set(domain)) != len(domain):
        raise InvalidStructureError("duplicate domain elements")
    relations = data["relations"]
    if not isinstance(relations, dict):
        raise InvalidStructureError("'relations' must be an object")
    sig = []
    interp = {}
    for name in sorted(relations):
        spec = relations[name]
        if not isinstance(spec, dict) or "arity" not in spec or "tuples" not in spec:
            raise InvalidStructureError(f"relation {name!r} needs 'arity' and 'tuples'")
        arity = spec["arity"]
        if not isinstance(arity, int) or arity < 1:
            raise InvalidStructureError(f"relation {name!r} has bad arity {arity!r}")
        seen = set()
        tuples = []
        for t in spec["tuples"]:
            if not isinstance(t, list) or not all(isinstance(c, str) for c in t):
                raise InvalidStructureError(f"tuple {t!r} in {name!r} must be strings")
            tt = tuple(t)
            if tt in seen:
                raise InvalidStructureError(f"duplicate tuple {t!r} in {name!r}")
            seen.add(tt)
            tuples.append(tt)
        sig.append((name, arity))
        interp[name] = tuple(tuples)
    return Structure(Signature(tuple(sig)), tuple(domain), interp)


def parse(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidStructureError(f"not valid JSON: {exc}") from exc
    return structure_from_dict(data)


def load_structure(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save_structure(s, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(s))
