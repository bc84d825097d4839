"""Exponential tiling instances and their encoding as PHP over domain {0,1}.

A tiling instance fixes a tile system plus a prefix t_1..t_m of the first row;
the question is whether the 2^m-by-2^m grid admits a valid tiling.  The
encoding produces 2m two-element factor structures whose product realizes the
horizontal/vertical successor relations as unions of decomposable pieces, and
a target whose domain is the tile set.

Two encoding modes exist.  "exact" realizes each successor piece with
equality, using the one-directional bit relations s01/s10; "paper-literal"
uses the symmetric difference relation throughout, which realizes a strict
superset of the successor pieces and is kept for study only.
"""

import itertools
import json
from dataclasses import dataclass

from .core import PhpInstance, Signature, Structure
from .errors import GuardExceededError, InvalidStructureError, NotAHomomorphismError

MODES = ("exact", "paper-literal")

# Bit relations over {0,1}; elements are the strings "0" and "1".
ID = (("0", "0"), ("1", "1"))
DIFF = (("0", "1"), ("1", "0"))
S01 = (("0", "1"),)
S10 = (("1", "0"),)

BIT_RELATIONS = {"id": ID, "diff": DIFF, "s01": S01, "s10": S10}

BRUTE_FORCE_MAX_M = 3


@dataclass(frozen=True)
class TileSystem:
    tiles: tuple
    hcompat: frozenset  # ordered pairs (left, right)
    vcompat: frozenset  # ordered pairs (below, above)

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))
        object.__setattr__(self, "hcompat", frozenset(tuple(p) for p in self.hcompat))
        object.__setattr__(self, "vcompat", frozenset(tuple(p) for p in self.vcompat))
        declared = set(self.tiles)
        if len(declared) != len(self.tiles):
            raise InvalidStructureError("duplicate tile names")
        for pair in self.hcompat | self.vcompat:
            if len(pair) != 2 or not set(pair) <= declared:
                raise InvalidStructureError(f"compatibility pair {pair!r} is malformed")


@dataclass(frozen=True)
class TilingInstance:
    system: TileSystem
    prefix: tuple  # t_1..t_m; m is the grid exponent

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if not self.prefix:
            raise InvalidStructureError("prefix must be nonempty")
        if not set(self.prefix) <= set(self.system.tiles):
            raise InvalidStructureError("prefix uses undeclared tiles")

    @property
    def m(self):
        return len(self.prefix)


def bits(k, m):
    """Most-significant-first binary encoding of k as m bits."""
    if not 0 <= k < 2**m:
        raise InvalidStructureError(f"{k} is not in [0, 2^{m})")
    return tuple((k >> (m - 1 - i)) & 1 for i in range(m))


def check_tiling(assignment, inst):
    """True iff the assignment is total, compatible, and matches the prefix."""
    n = 2**inst.m
    sys = inst.system
    for x in range(n):
        for y in range(n):
            if (x, y) not in assignment:
                return False
    for k, tile in enumerate(inst.prefix):
        if assignment[(k, 0)] != tile:
            return False
    for x in range(n):
        for y in range(n):
            if x + 1 < n and (assignment[(x, y)], assignment[(x + 1, y)]) not in sys.hcompat:
                return False
            if y + 1 < n and (assignment[(x, y)], assignment[(x, y + 1)]) not in sys.vcompat:
                return False
    return True


def brute_force_tiling(inst):
    """Exhaustive backtracking oracle over all grid assignments (m <= 3 only)."""
    if inst.m > BRUTE_FORCE_MAX_M:
        raise GuardExceededError(
            f"brute-force oracle is limited to m <= {BRUTE_FORCE_MAX_M}", 4**inst.m
        )
    n = 2**inst.m
    sys = inst.system
    cells = [(x, y) for y in range(n) for x in range(n)]
    assignment = {}

    def candidates(x, y):
        if y == 0 and x < inst.m:
            return (inst.prefix[x],)
        return sys.tiles

    def fits(x, y, tile):
        if x > 0 and (assignment[(x - 1, y)], tile) not in sys.hcompat:
            return False
        if y > 0 and (assignment[(x, y - 1)], tile) not in sys.vcompat:
            return False
        return True

    def search(i):
        if i == len(cells):
            return True
        x, y = cells[i]
        for tile in candidates(x, y):
            if fits(x, y, tile):
                assignment[(x, y)] = tile
                if search(i + 1):
                    return True
                del assignment[(x, y)]
        return False

    if search(0):
        return dict(assignment)
    return None


def tiling_signature(m):
    rels = [(f"H{k}", 2) for k in range(1, m + 1)]
    rels += [(f"V{k}", 2) for k in range(1, m + 1)]
    rels += [(f"P{k}", 1) for k in range(1, m + 1)]
    return Signature(tuple(rels))


def _h_piece(k, ell, m, mode):
    """Bit relation of H_k in factor ell (1-based, ell in [1, 2m])."""
    if mode == "paper-literal":
        return DIFF if k <= ell <= m else ID
    if ell == k:
        return S01
    if k < ell <= m:
        return S10
    return ID


def _v_piece(k, ell, m, mode):
    if mode == "paper-literal":
        return DIFF if m + k <= ell <= 2 * m else ID
    if ell == m + k:
        return S01
    if m + k < ell <= 2 * m:
        return S10
    return ID


def encode_tiling_php(inst, mode="exact"):
    """The 2m-factor PHP instance whose product maps to the target iff a tiling exists.

    Factor ell holds bit ell of the horizontal coordinate (ell <= m) or bit
    ell-m of the vertical coordinate.  P_k pins grid position (k-1, 0) to the
    k-th prefix tile; the P relations are kept unary here and can be
    binarized on demand with core.binarize_unary.
    """
    if mode not in MODES:
        raise InvalidStructureError(f"mode must be one of {MODES}")
    m = inst.m
    sig = tiling_signature(m)
    factors = []
    for ell in range(1, 2 * m + 1):
        interp = {}
        for k in range(1, m + 1):
            interp[f"H{k}"] = _h_piece(k, ell, m, mode)
            interp[f"V{k}"] = _v_piece(k, ell, m, mode)
            if ell <= m:
                interp[f"P{k}"] = ((str(bits(k - 1, m)[ell - 1]),),)
            else:
                interp[f"P{k}"] = (("0",),)
        factors.append(Structure(sig, ("0", "1"), interp))
    sys = inst.system
    target_interp = {}
    for k in range(1, m + 1):
        target_interp[f"H{k}"] = tuple(sys.hcompat)
        target_interp[f"V{k}"] = tuple(sys.vcompat)
        target_interp[f"P{k}"] = ((inst.prefix[k - 1],),)
    target = Structure(sig, sys.tiles, target_interp)
    return PhpInstance(tuple(factors), target)


def coordinate_element(x, y, m):
    """The product element (bit tuple) encoding grid position (x, y)."""
    return tuple(str(b) for b in bits(x, m) + bits(y, m))


def decode_hom_to_tiling(hom, inst, mode="exact", validate=True):
    """Read a PHP witness back as a grid assignment.

    With validate=True the map is first checked against the encoded instance;
    an invalid map raises NotAHomomorphismError.
    """
    from .core import product  # local import to keep module load light

    if validate:
        enc = encode_tiling_php(inst, mode)
        prod = product(enc.factors)
        try:
            hom.validate(prod, enc.target)
        except InvalidStructureError as exc:
            raise NotAHomomorphismError(str(exc)) from exc
    m = inst.m
    n = 2**m
    return {
        (x, y): hom.mapping[coordinate_element(x, y, m)]
        for x in range(n)
        for y in range(n)
    }


def successor_relations(m):
    """The horizontal and vertical successor relations on 2m-bit coordinate pairs."""
    n = 2**m
    h = set()
    v = set()
    for x, y in itertools.product(range(n), repeat=2):
        if x + 1 < n:
            h.add((coordinate_element(x, y, m), coordinate_element(x + 1, y, m)))
        if y + 1 < n:
            v.add((coordinate_element(x, y, m), coordinate_element(x, y + 1, m)))
    return h, v


# --- JSON file format -------------------------------------------------------
#
# {"tiles": ["t","u"], "hcompat": [["t","u"]], "vcompat": [["t","t"]]}


def tile_system_from_dict(data):
    if not isinstance(data, dict) or not {"tiles", "hcompat", "vcompat"} <= set(data):
        raise InvalidStructureError(
            "tile system file needs 'tiles', 'hcompat', and 'vcompat'"
        )
    return TileSystem(
        tuple(data["tiles"]),
        frozenset(tuple(p) for p in data["hcompat"]),
        frozenset(tuple(p) for p in data["vcompat"]),
    )


def load_tile_system(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidStructureError(f"not valid JSON: {exc}") from exc
    return tile_system_from_dict(data)
