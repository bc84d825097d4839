"""Conjunctive queries, canonical structures/queries, and evaluation.

Evaluation goes through the homomorphism solver: the answers of a query on a
structure are exactly the images of the canonical structure's distinguished
tuple (the Chandra-Merlin correspondence).  Boolean queries are ordinary
queries with an empty free-variable tuple.
"""

import json
from dataclasses import dataclass

from .core import PointedStructure, Signature, Structure, element_label
from .errors import InvalidStructureError, UnsafeQueryError
from .homsolver import SolverConfig, image_set


@dataclass(frozen=True)
class ConjunctiveQuery:
    free_vars: tuple
    bound_vars: tuple
    atoms: tuple  # of (relation name, variable tuple)

    def __post_init__(self):
        object.__setattr__(self, "free_vars", tuple(self.free_vars))
        object.__setattr__(self, "bound_vars", tuple(self.bound_vars))
        object.__setattr__(
            self, "atoms", tuple((name, tuple(vs)) for name, vs in self.atoms)
        )
        free = set(self.free_vars)
        bound = set(self.bound_vars)
        if free & bound:
            raise InvalidStructureError("free and bound variables must be disjoint")
        declared = free | bound
        used = set()
        for name, vs in self.atoms:
            for v in vs:
                if v not in declared:
                    raise InvalidStructureError(f"atom uses undeclared variable {v!r}")
                used.add(v)
        missing = free - used
        if missing:
            raise UnsafeQueryError(
                f"free variables occur in no atom: {sorted(missing)}"
            )

    def variables(self):
        return self.free_vars + self.bound_vars


def check_well_formed(q, sig):
    """Verify every atom matches the signature's relation names and arities."""
    arities = sig.as_dict()
    for name, vs in q.atoms:
        if name not in arities:
            raise InvalidStructureError(f"atom relation {name!r} not in signature")
        if len(vs) != arities[name]:
            raise InvalidStructureError(
                f"atom {name}{vs!r} has {len(vs)} variables, arity is {arities[name]}"
            )


def canonical_structure(q, sig):
    """One element per variable, one tuple per atom, pointed at the free tuple."""
    check_well_formed(q, sig)
    interp = {name: [] for name in sig.names()}
    for name, vs in q.atoms:
        interp[name].append(vs)
    s = Structure(sig, tuple(set(q.variables())), interp)
    return PointedStructure(s, q.free_vars)


def canonical_query(p):
    """One variable per element, one atom per tuple, free at the distinguished tuple.

    Raises UnsafeQueryError when a distinguished element occurs in no tuple;
    the caller must pre-pad the structure in that case.
    """
    s = p.structure
    names = {e: element_label(e) for e in s.domain}
    free = tuple(names[e] for e in p.distinguished)
    bound = tuple(names[e] for e in s.domain if e not in set(p.distinguished))
    atoms = []
    for name, _ in s.signature.relations:
        for t in s.relation(name):
            atoms.append((name, tuple(names[c] for c in t)))
    return ConjunctiveQuery(free, bound, tuple(atoms))


def evaluate(q, s, cfg=SolverConfig()):
    """The set of answer tuples of q on s; {()} or set() for Boolean q."""
    pointed = canonical_structure(q, s.signature)
    return image_set(pointed, s, cfg)


def path_fan_query(r):
    """q(x_1..x_r) = exists y_1..y_r: E(x_i, y_i) for all i, E(y_i, y_{i+1}) for i < r."""
    if r < 1:
        raise InvalidStructureError("path fan needs r >= 1")
    xs = tuple(f"x{i}" for i in range(1, r + 1))
    ys = tuple(f"y{i}" for i in range(1, r + 1))
    atoms = [("E", (x, y)) for x, y in zip(xs, ys)]
    atoms += [("E", (ys[i], ys[i + 1])) for i in range(r - 1)]
    return ConjunctiveQuery(xs, ys, tuple(atoms))


# --- JSON file format -------------------------------------------------------
#
# {"free": ["x"], "bound": ["y"], "atoms": [["E", ["x","y"]]]}


def query_to_dict(q):
    return {
        "free": list(q.free_vars),
        "bound": list(q.bound_vars),
        "atoms": [[name, list(vs)] for name, vs in q.atoms],
    }


def query_from_dict(data):
    if not isinstance(data, dict) or not {"free", "bound", "atoms"} <= set(data):
        raise InvalidStructureError("query file needs 'free', 'bound', and 'atoms'")
    atoms = []
    for atom in data["atoms"]:
        if (
            not isinstance(atom, list)
            or len(atom) != 2
            or not isinstance(atom[0], str)
            or not isinstance(atom[1], list)
        ):
            raise InvalidStructureError(f"malformed atom {atom!r}")
        atoms.append((atom[0], tuple(atom[1])))
    return ConjunctiveQuery(tuple(data["free"]), tuple(data["bound"]), tuple(atoms))


def load_query(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidStructureError(f"not valid JSON: {exc}") from exc
    return query_from_dict(data)
