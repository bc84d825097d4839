"""Reductions to few relations and to digraphs, with explicit homomorphism lifts.

Two instance-level pipelines live here: the star/merge transform collapsing
any signature into a single relation (adding one fresh zero element per
structure), and the digraph transform encoding a single-relation instance as
digraphs built from per-tuple chain gadgets, with sink chains on the target
side.  Both directions of the digraph correspondence are constructive:
lift_hom_digraph builds the transformed witness from an original one, and
restrict_hom_digraph reads an original witness back off a transformed one.
"""

import itertools

from .core import Homomorphism, PhpInstance, Signature, Structure, product
from .errors import (
    CyclicStructureError,
    InvalidStructureError,
    NotAHomomorphismError,
)

# Reserved fresh element added by the star transform; namespaced to avoid
# collisions with user identifiers.
ZERO = "__zero__"

STAR_DOMAIN_RELATION = "P"
STAR_MERGED_RELATION = "R"


def star_transform(s):
    """Two-relation form: unary P = old domain, one wide relation R.

    R has arity sum of the old arities and contains the all-zeroes tuple plus,
    for each old tuple, its zero-padded embedding at the corresponding block.
    """
    if not s.signature.relations:
        raise InvalidStructureError("star transform needs at least one relation")
    if ZERO in s.domain:
        raise InvalidStructureError(f"domain already contains the reserved {ZERO!r}")
    arities = [a for _, a in s.signature.relations]
    total = sum(arities)
    tuples = [(ZERO,) * total]
    offset = 0
    for (name, arity) in s.signature.relations:
        for t in s.relation(name):
            padded = (ZERO,) * offset + t + (ZERO,) * (total - offset - arity)
            tuples.append(padded)
        offset += arity
    sig = Signature(((STAR_DOMAIN_RELATION, 1), (STAR_MERGED_RELATION, total)))
    interp = {
        STAR_DOMAIN_RELATION: tuple((e,) for e in s.domain),
        STAR_MERGED_RELATION: tuple(tuples),
    }
    return Structure(sig, s.domain + (ZERO,), interp)


def merge_relations(s):
    """Collapse a two-relation structure into one relation: cartesian product P x R."""
    if len(s.signature.relations) != 2:
        raise InvalidStructureError("merge needs exactly two relations")
    (n1, a1), (n2, a2) = s.signature.relations
    tuples = tuple(p + r for p in s.relation(n1) for r in s.relation(n2))
    sig = Signature(((STAR_MERGED_RELATION, a1 + a2),))
    return Structure(sig, s.domain, {STAR_MERGED_RELATION: tuples})


def single_relation_transform(inst):
    """Apply star then merge uniformly to every factor and the target."""
    convert = lambda s: merge_relations(star_transform(s))
    return PhpInstance(tuple(convert(f) for f in inst.factors), convert(inst.target))


def star_instance(inst):
    """The intermediate two-relation instance (star applied, not yet merged)."""
    return PhpInstance(
        tuple(star_transform(f) for f in inst.factors), star_transform(inst.target)
    )


def lift_hom_star(hom, inst):
    """Extend a PHP witness to the starred instance.

    Zero-free product elements keep their image; every element with a zero
    component is sent to the fresh zero.  The same mapping also validates for
    the merged (single-relation) instance, whose domains are unchanged.
    """
    prod = product(inst.factors)
    try:
        hom.validate(prod, inst.target)
    except InvalidStructureError as exc:
        raise NotAHomomorphismError(str(exc)) from exc
    starred = [star_transform(f) for f in inst.factors]
    mapping = {}
    for e in itertools.product(*(f.domain for f in starred)):
        mapping[e] = ZERO if ZERO in e else hom.mapping[e]
    return Homomorphism(mapping)


def _single_relation(s):
    rels = s.signature.relations
    if len(rels) != 1:
        raise InvalidStructureError(f"expected a single relation, got {len(rels)}")
    return rels[0]


def pad_first_coordinate(s):
    """Raise the arity by one so the first coordinate projects onto the domain."""
    name, arity = _single_relation(s)
    tuples = tuple((c,) + t for c in s.domain for t in s.relation(name))
    return Structure(Signature(((name, arity + 1),)), s.domain, {name: tuples})


def pad_instance(inst):
    return PhpInstance(
        tuple(pad_first_coordinate(f) for f in inst.factors),
        pad_first_coordinate(inst.target),
    )


# --- gadget digraphs --------------------------------------------------------
#
# Nodes are tagged tuples so base elements, per-tuple chain nodes, and sink
# nodes can never collide: ("elem", x), ("tup", t, j), ("sink", j).  Chain
# indices j are stored as strings to keep all leaves strings.


def base_node(x):
    return ("elem", x)


def tuple_node(t, j):
    return ("tup", tuple(t), str(j))


def sink_node(j):
    return ("sink", str(j))


def is_base(v):
    return isinstance(v, tuple) and len(v) == 2 and v[0] == "elem"


def is_tuple_node(v):
    return isinstance(v, tuple) and len(v) == 3 and v[0] == "tup"


def is_sink(v):
    return isinstance(v, tuple) and len(v) == 2 and v[0] == "sink"


def node_index(v):
    return int(v[2]) if is_tuple_node(v) else int(v[1])


def gadget_digraph(s, with_sinks=False):
    """Digraph encoding of a single-relation structure.

    Per tuple t of the r-ary relation: chain nodes t^1..t^r with edges
    t^j -> t^{j+1} and t[j] -> t^j.  With sinks: a chain s^1..s^{r-1} plus an
    edge from every base element to every sink node.
    """
    name, r = _single_relation(s)
    if with_sinks and r < 2:
        raise InvalidStructureError("sink chain needs arity >= 2")
    nodes = [base_node(x) for x in s.domain]
    edges = []
    for t in s.relation(name):
        chain = [tuple_node(t, j) for j in range(1, r + 1)]
        nodes.extend(chain)
        edges.extend((chain[j], chain[j + 1]) for j in range(r - 1))
        edges.extend((base_node(t[j - 1]), tuple_node(t, j)) for j in range(1, r + 1))
    if with_sinks:
        sinks = [sink_node(j) for j in range(1, r)]
        nodes.extend(sinks)
        edges.extend((sinks[j], sinks[j + 1]) for j in range(r - 2))
        edges.extend((base_node(x), sk) for x in s.domain for sk in sinks)
    return Structure(Signature((("E", 2),)), tuple(nodes), {"E": tuple(edges)})


def digraph_transform(inst):
    """Pad then gadget every structure; only the target receives sink nodes."""
    padded = pad_instance(inst)
    return PhpInstance(
        tuple(gadget_digraph(f, with_sinks=False) for f in padded.factors),
        gadget_digraph(padded.target, with_sinks=True),
    )


def lift_hom_digraph(hom, inst):
    """Build a transformed-instance witness from an original-instance witness.

    Padding is applied internally; the given map must validate for the padded
    instance (its domains equal the original ones).  Product nodes are
    classified into four types: all-base nodes follow the original map,
    aligned all-chain nodes follow the image tuple's chain, misaligned
    all-chain nodes go to the sink with the least index, and every remaining
    node borrows the image of a base node chosen so that all its edges into
    aligned chain nodes are preserved.
    """
    padded = pad_instance(inst)
    prod = product(padded.factors)
    try:
        hom.validate(prod, padded.target)
    except InvalidStructureError as exc:
        raise NotAHomomorphismError(str(exc)) from exc
    name, r = _single_relation(padded.target)
    gadgets = [gadget_digraph(f, with_sinks=False) for f in padded.factors]

    least_base = tuple(f.domain[0] for f in padded.factors) if all(
        f.domain for f in padded.factors
    ) else None

    def image_tuple(tuples):
        # componentwise image of the product tuple assembled from factor tuples
        return tuple(hom.mapping[tuple(t[p] for t in tuples)] for p in range(r))

    mapping = {}
    for v in itertools.product(*(g.domain for g in gadgets)):
        if all(is_base(c) for c in v):
            mapping[v] = base_node(hom.mapping[tuple(c[1] for c in v)])
        elif all(is_tuple_node(c) for c in v):
            indices = {node_index(c) for c in v}
            if len(indices) == 1:
                j = indices.pop()
                mapping[v] = tuple_node(image_tuple([c[1] for c in v]), j)
            else:
                mapping[v] = sink_node(min(indices))
        else:
            # type 4: mixed base/chain components
            indices = {node_index(c) for c in v if is_tuple_node(c)}
            if len(indices) > 1 or r in indices:
                u = least_base
            else:
                j = indices.pop()
                u = tuple(
                    c[1] if is_base(c) else c[1][j] for c in v
                )  # t[j+1], 1-based
            mapping[v] = base_node(hom.mapping[u])
    return Homomorphism(mapping)


def restrict_hom_digraph(hom, inst):
    """Read a padded-instance witness off a transformed-instance witness."""
    transformed = digraph_transform(inst)
    prod = product(transformed.factors)
    try:
        hom.validate(prod, transformed.target)
    except InvalidStructureError as exc:
        raise NotAHomomorphismError(str(exc)) from exc
    padded = pad_instance(inst)
    mapping = {}
    for e in itertools.product(*(f.domain for f in padded.factors)):
        v = tuple(base_node(c) for c in e)
        image = hom.mapping[v]
        if not is_base(image):
            raise NotAHomomorphismError(
                f"base product element {e!r} maps to non-base node {image!r}"
            )
        mapping[e] = image[1]
    return Homomorphism(mapping)


# --- path-length utilities --------------------------------------------------


def out_path_lengths(s):
    """Longest outgoing path length from each element of a single-binary digraph.

    Raises CyclicStructureError if the digraph has a directed cycle.
    """
    name, arity = _single_relation(s)
    if arity != 2:
        raise InvalidStructureError("path lengths are defined for binary relations")
    succ = {e: [] for e in s.domain}
    for a, b in s.relation(name):
        succ[a].append(b)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {e: WHITE for e in s.domain}
    depth = {}

    def visit(v):
        color[v] = GRAY
        best = 0
        for w in succ[v]:
            if color[w] == GRAY:
                raise CyclicStructureError(f"cycle through {w!r}")
            if color[w] == WHITE:
                visit(w)
            best = max(best, 1 + depth[w])
        color[v] = BLACK
        depth[v] = best

    for e in s.domain:
        if color[e] == WHITE:
            visit(e)
    return depth


def max_path_length(s):
    lengths = out_path_lengths(s)
    return max(lengths.values(), default=0)
