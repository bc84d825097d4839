"""Backtracking homomorphism solver with optional arc consistency.

One CSP variable per source element, one constraint per source tuple; the
constraint's allowed assignments are the target tuples of the same relation.
This keeps the solver independent of arity.  All choice points are broken
lexicographically so that results are deterministic for a fixed config.
"""

import itertools
import math
from collections import deque
from dataclasses import dataclass

from .core import Homomorphism, element_key, product
from .errors import EnumerationCapError, GuardExceededError, SignatureMismatchError

VARIABLE_ORDERS = ("most-constrained-first", "input-order")
PROPAGATIONS = ("arc-consistency", "none")


@dataclass(frozen=True)
class SolverConfig:
    variable_order: str = "most-constrained-first"
    propagation: str = "arc-consistency"
    enumeration_cap: int | None = None
    product_guard: int = 10**6
    materialize_product: bool = True

    def __post_init__(self):
        if self.variable_order not in VARIABLE_ORDERS:
            raise ValueError(f"variable_order must be one of {VARIABLE_ORDERS}")
        if self.propagation not in PROPAGATIONS:
            raise ValueError(f"propagation must be one of {PROPAGATIONS}")
        if self.enumeration_cap is not None and self.enumeration_cap < 1:
            raise ValueError("enumeration_cap must be >= 1")
        if self.product_guard < 1:
            raise ValueError("product_guard must be >= 1")


@dataclass(frozen=True)
class PhpVerdict:
    """Outcome of a PHP decision; the witness maps product elements to target elements."""

    yes: bool
    witness: Homomorphism | None


class _Csp:
    """Variables, per-variable candidate values, and tuple constraints."""

    def __init__(self, variables, values, constraints):
        self.variables = list(variables)
        self.domains = {v: list(values) for v in self.variables}
        # constraint: (scope tuple of variables, allowed set of value tuples)
        self.constraints = [(tuple(scope), set(allowed)) for scope, allowed in constraints]
        self.var_cons = {v: [] for v in self.variables}
        for ci, (scope, _) in enumerate(self.constraints):
            for v in set(scope):
                self.var_cons[v].append(ci)

    def pin(self, var, value):
        """Restrict a variable to a single value; False if impossible."""
        if value not in self.domains[var]:
            return False
        self.domains[var] = [value]
        return True


def _revise(csp, ci, domains):
    """One generalized-arc-consistency pass over constraint ci.

    Returns the list of variables whose domains shrank, or None on wipeout.
    """
    scope, allowed = csp.constraints[ci]
    support = {v: set() for v in set(scope)}
    domsets = {v: set(domains[v]) for v in set(scope)}
    for u in allowed:
        partial = {}
        ok = True
        for pos, v in enumerate(scope):
            val = u[pos]
            if val not in domsets[v] or partial.setdefault(v, val) != val:
                ok = False
                break
        if ok:
            for v, val in partial.items():
                support[v].add(val)
    changed = []
    for v in support:
        if not domsets[v] <= support[v]:
            domains[v] = [val for val in domains[v] if val in support[v]]
            if not domains[v]:
                return None
            changed.append(v)
    return changed


def _propagate(csp, domains, seed=None):
    """AC-3 style fixpoint over tuple constraints; False on a domain wipeout."""
    if seed is None:
        queue = deque(range(len(csp.constraints)))
    else:
        queue = deque(ci for v in seed for ci in csp.var_cons[v])
    queued = set(queue)
    while queue:
        ci = queue.popleft()
        queued.discard(ci)
        changed = _revise(csp, ci, domains)
        if changed is None:
            return False
        for v in changed:
            for cj in csp.var_cons[v]:
                if cj != ci and cj not in queued:
                    queue.append(cj)
                    queued.add(cj)
    return True


def _consistent(csp, assignment, var):
    """Check every constraint over var whose scope is fully assigned."""
    for ci in csp.var_cons[var]:
        scope, allowed = csp.constraints[ci]
        if all(v in assignment for v in scope):
            if tuple(assignment[v] for v in scope) not in allowed:
                return False
    return True


def _solutions(csp, cfg):
    """Yield complete assignments (dicts); deterministic for a fixed config."""
    domains = {v: list(d) for v, d in csp.domains.items()}
    if cfg.propagation == "arc-consistency":
        if not _propagate(csp, domains):
            return
    elif any(not d for d in domains.values()):
        return

    order = csp.variables

    def pick(assignment, domains):
        unassigned = [v for v in order if v not in assignment]
        if cfg.variable_order == "input-order":
            return unassigned[0]
        return min(unassigned, key=lambda v: (len(domains[v]), element_key(v)))

    def search(assignment, domains):
        if len(assignment) == len(order):
            yield dict(assignment)
            return
        var = pick(assignment, domains)
        for val in domains[var]:
            assignment[var] = val
            if _consistent(csp, assignment, var):
                sub = {v: (d if v != var else [val]) for v, d in domains.items()}
                if cfg.propagation != "arc-consistency" or _propagate(
                    csp, sub, seed=[var]
                ):
                    yield from search(assignment, sub)
            del assignment[var]

    yield from search({}, domains)


def _hom_csp(source, target):
    if not source.signature.same_as(target.signature):
        raise SignatureMismatchError("source and target must share a signature")
    constraints = []
    for name, _ in source.signature.relations:
        allowed = target.relation(name)
        for t in source.relation(name):
            constraints.append((t, allowed))
    return _Csp(source.domain, target.domain, constraints)


def find_homomorphism(source, target, cfg=SolverConfig()):
    """First homomorphism found under the config's deterministic search, or None."""
    csp = _hom_csp(source, target)
    for assignment in _solutions(csp, cfg):
        return Homomorphism(assignment)
    return None


def _mapping_key(source_domain, mapping):
    return tuple(element_key(mapping[v]) for v in source_domain)


def enumerate_homomorphisms(source, target, cfg=SolverConfig()):
    """All homomorphisms, in lexicographic order of their mappings."""
    csp = _hom_csp(source, target)
    results = []
    for assignment in _solutions(csp, cfg):
        results.append(assignment)
        if cfg.enumeration_cap is not None and len(results) > cfg.enumeration_cap:
            raise EnumerationCapError(
                f"more than {cfg.enumeration_cap} homomorphisms exist"
            )
    results.sort(key=lambda m: _mapping_key(source.domain, m))
    return [Homomorphism(m) for m in results]


def image_set(source, target, cfg=SolverConfig()):
    """All tuples the distinguished tuple of a pointed source can map to."""
    return set(image_witnesses(source, target, cfg))


def image_witnesses(source, target, cfg=SolverConfig()):
    """Map from each achievable image tuple to one witnessing homomorphism."""
    s = source.structure
    dist = source.distinguished
    csp = _hom_csp(s, target)
    out = {}
    if not dist:
        for assignment in _solutions(csp, cfg):
            out[()] = Homomorphism(assignment)
            break
        return out
    # one shared arc-consistency pass; pinning below only shrinks domains further
    if cfg.propagation == "arc-consistency":
        if not _propagate(csp, csp.domains):
            return out
    for cand in itertools.product(target.domain, repeat=len(dist)):
        pinned = _Csp([], [], [])
        pinned.variables = csp.variables
        pinned.constraints = csp.constraints
        pinned.var_cons = csp.var_cons
        pinned.domains = {v: list(d) for v, d in csp.domains.items()}
        ok = True
        for d, b in zip(dist, cand):
            if not pinned.pin(d, b):
                ok = False
                break
        if not ok:
            continue
        for assignment in _solutions(pinned, cfg):
            out[cand] = Homomorphism(assignment)
            break
    return out


def decide_php(inst, cfg=SolverConfig()):
    """Decide whether the direct product of the factors maps into the target."""
    if cfg.materialize_product:
        prod = product(inst.factors, guard=cfg.product_guard)
        hom = find_homomorphism(prod, inst.target, cfg)
        return PhpVerdict(hom is not None, hom)
    return _decide_php_lazy(inst, cfg)


def _decide_php_lazy(inst, cfg):
    """Same verdict without materializing the product structure.

    Constraints are generated directly from combinations of factor tuples;
    these are exactly the tuples of the product relation.
    """
    factors = inst.factors
    target = inst.target
    size = math.prod(len(f.domain) for f in factors)
    if size > cfg.product_guard:
        raise GuardExceededError(
            f"product domain would have {size} elements (guard {cfg.product_guard})",
            size,
        )
    variables = list(itertools.product(*(f.domain for f in factors)))
    constraints = []
    for name, arity in target.signature.relations:
        allowed = target.relation(name)
        for combo in itertools.product(*(f.relation(name) for f in factors)):
            scope = tuple(tuple(t[p] for t in combo) for p in range(arity))
            constraints.append((scope, allowed))
    csp = _Csp(variables, target.domain, constraints)
    for assignment in _solutions(csp, cfg):
        return PhpVerdict(True, Homomorphism(assignment))
    return PhpVerdict(False, None)


def validate_php_witness(inst, hom, cfg=SolverConfig()):
    """Check a PHP witness against the materialized product (independent of search)."""
    prod = product(inst.factors, guard=cfg.product_guard)
    hom.validate(prod, inst.target)


__all__ = [
    "SolverConfig",
    "PhpVerdict",
    "find_homomorphism",
    "enumerate_homomorphisms",
    "image_set",
    "image_witnesses",
    "decide_php",
    "validate_php_witness",
]
