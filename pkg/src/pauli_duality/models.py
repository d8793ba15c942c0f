"""Deterministic generators for the lattice Hamiltonians under study.

Every model is emitted as H = -sum_t J_t P_t: each tableau row stores the
Pauli string P_t with magnitude |J_t| and sign bit set when J_t > 0 (so the
row represents -J_t P_t). Spins are indexed lexicographically by coordinate.

Coordinate conventions:
- toric2d: spins (i, j, 'h'|'v') on the L x L torus; i grows downward,
  j rightward; (i,j,h) sits right of vertex (i,j), (i,j,v) below it.
- cubic-lattice models: edge spins (x, y, z, axis) with axis 0/1/2 = x/y/z;
  the edge runs from vertex (x,y,z) toward +axis.
- color_honeycomb: sites (r, c, s) with unit cell (r,c) on a
  2(L+1) x 2(L+1) torus of hexagons and sublattice s in {0,1}; site (r,c,1)
  neighbors (r,c,0), (r,c+1,0) and (r+1,c,0).
- rotated_surface: vertex spins (i, j) on [0,L]^2, i down, j right. Square
  (i,j) spans vertices {i,i+1} x {j,j+1} and is red iff i+j is even; red
  squares carry 4-spin sigma-x terms, blue ones 4-spin sigma-z terms.
  Boundary 2-spin terms continue the chessboard past the lattice edge:
  sigma-x pairs on left/right edges of blue squares, sigma-z pairs on
  top/bottom edges of red squares.
- haah: two spins (x, y, z, q), q in {0,1}, per vertex of the L^3 torus.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSize
from .tableau import PauliTerm, SignedTableau

MODEL_NAMES = (
    "ising_chain_open",
    "toric2d",
    "toric3d",
    "color_honeycomb",
    "rotated_surface",
    "haah",
    "xcube",
    "subsystem_stabilizer",
    "subsystem_checks",
)

# above this many terms the O(m^2) all-pairs commutation check is skipped
# (generators produce commuting sets by construction; small sizes stay checked)
_VALIDATE_LIMIT = 600


@dataclass
class LatticeModel:
    name: str
    L: int
    spin_coords: list
    terms: list
    term_labels: list  # (species, coordinate) per term
    couplings: dict = field(default_factory=dict)
    zero_couplings: int = 0

    @property
    def n(self):
        return len(self.spin_coords)

    @property
    def m(self):
        return len(self.terms)

    def coord_index(self, coord):
        return self._index[coord]

    def __post_init__(self):
        self._index = {c: i for i, c in enumerate(self.spin_coords)}

    def tableau(self, validate=None):
        if validate is None:
            validate = self.m <= _VALIDATE_LIMIT
        return SignedTableau.from_terms(self.terms, validate=validate)

    def spin_coordinates(self):
        return list(zip(self.spin_coords, range(self.n)))


def label_str(label):
    species, coord = label
    if isinstance(coord, tuple):
        return f"{species}:" + ",".join(str(c) for c in coord)
    return f"{species}:{coord}"


class _Assembler:
    """Collects (label, pauli_char, spin-coordinate set) into a LatticeModel."""

    def __init__(self, name, L, spin_coords, couplings):
        self.name = name
        self.L = L
        self.spin_coords = sorted(spin_coords)
        self.index = {c: i for i, c in enumerate(self.spin_coords)}
        self.couplings = dict(couplings or {})
        self.terms = []
        self.labels = []
        self.zero = 0

    def add(self, species, coord, pauli_char, support):
        label = (species, coord)
        J = self.couplings.get(label_str(label), 1.0)
        if J == 0.0:
            self.zero += 1
            return
        n = len(self.spin_coords)
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        tgt = x if pauli_char == "X" else z
        for c in support:
            tgt[self.index[c]] ^= 1
        # term represents -J * P
        self.terms.append(PauliTerm(x, z, sign=1 if J > 0 else 0, coeff=abs(J)))
        self.labels.append(label)

    def build(self):
        return LatticeModel(
            name=self.name,
            L=self.L,
            spin_coords=self.spin_coords,
            terms=self.terms,
            term_labels=self.labels,
            couplings=self.couplings,
            zero_couplings=self.zero,
        )


def _gen_ising_chain_open(L, couplings):
    if L < 2:
        raise InvalidSize("ising_chain_open", L, "need L >= 2")
    a = _Assembler("ising_chain_open", L, [(i,) for i in range(L)], couplings)
    for i in range(L - 1):
        a.add("bond", (i,), "Z", [(i,), (i + 1,)])
    return a.build()


def _gen_toric2d(L, couplings):
    if L < 2:
        raise InvalidSize("toric2d", L, "need L >= 2")
    spins = [(i, j, d) for i in range(L) for j in range(L) for d in ("h", "v")]
    a = _Assembler("toric2d", L, spins, couplings)
    for i in range(L):
        for j in range(L):
            a.add(
                "star", (i, j), "X",
                [(i, j, "h"), (i, j, "v"), ((i - 1) % L, j, "v"), (i, (j - 1) % L, "h")],
            )
    for i in range(L):
        for j in range(L):
            a.add(
                "plaquette", (i, j), "Z",
                [(i, j, "h"), (i, j, "v"), ((i + 1) % L, j, "h"), (i, (j + 1) % L, "v")],
            )
    return a.build()


def _cubic_edges(L):
    return [
        (x, y, z, ax)
        for x in range(L)
        for y in range(L)
        for z in range(L)
        for ax in range(3)
    ]


def _shift(v, ax, d, L):
    w = list(v)
    w[ax] = (w[ax] + d) % L
    return tuple(w)


def _gen_toric3d(L, couplings):
    if L < 2:
        raise InvalidSize("toric3d", L, "need L >= 2")
    a = _Assembler("toric3d", L, _cubic_edges(L), couplings)
    for x in range(L):
        for y in range(L):
            for z in range(L):
                v = (x, y, z)
                support = []
                for ax in range(3):
                    support.append((*v, ax))
                    support.append((*_shift(v, ax, -1, L), ax))
                a.add("star", v, "X", support)
    planes = [(0, 1), (1, 2), (0, 2)]
    for x in range(L):
        for y in range(L):
            for z in range(L):
                v = (x, y, z)
                for pi, (ax1, ax2) in enumerate(planes):
                    support = [
                        (*v, ax1),
                        (*v, ax2),
                        (*_shift(v, ax1, 1, L), ax2),
                        (*_shift(v, ax2, 1, L), ax1),
                    ]
                    a.add("plaquette", (*v, pi), "Z", support)
    return a.build()


def _gen_color_honeycomb(L, couplings):
    if L < 0:
        raise InvalidSize("color_honeycomb", L, "need L >= 0")
    G = 2 * (L + 1)
    spins = [(r, c, s) for r in range(G) for c in range(G) for s in (0, 1)]
    a = _Assembler("color_honeycomb", L, spins, couplings)

    def hexagon(r, c):
        r1, c1 = (r + 1) % G, (c + 1) % G
        return [(r, c, 1), (r, c1, 0), (r, c1, 1), (r1, c, 0), (r1, c, 1), (r1, c1, 0)]

    for r in range(G):
        for c in range(G):
            a.add("hex_x", (r, c), "X", hexagon(r, c))
    for r in range(G):
        for c in range(G):
            a.add("hex_z", (r, c), "Z", hexagon(r, c))
    return a.build()


def _gen_rotated_surface(L, couplings):
    if L < 2:
        raise InvalidSize("rotated_surface", L, "need L >= 2")
    spins = [(i, j) for i in range(L + 1) for j in range(L + 1)]
    a = _Assembler("rotated_surface", L, spins, couplings)

    def red(i, j):
        return (i + j) % 2 == 0

    for i in range(L):
        for j in range(L):
            sq = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
            if red(i, j):
                a.add("plaq_x", (i, j), "X", sq)
            else:
                a.add("plaq_z", (i, j), "Z", sq)
    # boundary pairs: the virtual square across the boundary continues the
    # chessboard, so sigma-x pairs sit on left/right edges of blue squares
    # and sigma-z pairs on top/bottom edges of red squares
    for i in range(L):
        if not red(i, 0):
            a.add("bound_x", (i, 0, "left"), "X", [(i, 0), (i + 1, 0)])
        if not red(i, L - 1):
            a.add("bound_x", (i, L, "right"), "X", [(i, L), (i + 1, L)])
    for j in range(L):
        if red(0, j):
            a.add("bound_z", (0, j, "top"), "Z", [(0, j), (0, j + 1)])
        if red(L - 1, j):
            a.add("bound_z", (L, j, "bottom"), "Z", [(L, j), (L, j + 1)])
    return a.build()


def haah_valid_size(L):
    if L < 2 or L % 2 == 0:
        return False
    q = 15
    while q <= L:
        if L % q == 0:
            return False
        q = 4 * q + 3  # next 4^p - 1
    return True


_HAAH_X1 = [(0, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 1)]
_HAAH_X2 = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
_HAAH_Z1 = [(1, 1, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
_HAAH_Z2 = [(1, 1, 1), (0, 0, 1), (1, 0, 0), (0, 1, 0)]


def _gen_haah(L, couplings):
    if not haah_valid_size(L):
        raise InvalidSize("haah", L, "need odd L with L mod (4^p - 1) != 0")
    spins = [(x, y, z, q) for x in range(L) for y in range(L) for z in range(L) for q in (0, 1)]
    a = _Assembler("haah", L, spins, couplings)

    def corner(v, d, q):
        return ((v[0] + d[0]) % L, (v[1] + d[1]) % L, (v[2] + d[2]) % L, q)

    for x in range(L):
        for y in range(L):
            for z in range(L):
                v = (x, y, z)
                a.add(
                    "cube_x", v, "X",
                    [corner(v, d, 0) for d in _HAAH_X1] + [corner(v, d, 1) for d in _HAAH_X2],
                )
    for x in range(L):
        for y in range(L):
            for z in range(L):
                v = (x, y, z)
                a.add(
                    "cube_z", v, "Z",
                    [corner(v, d, 0) for d in _HAAH_Z1] + [corner(v, d, 1) for d in _HAAH_Z2],
                )
    return a.build()


def _cube_edges(v, wrap):
    """12 edge spins of the cube whose lowest corner is v; wrap: per-axis mod."""
    x, y, z = v
    out = []
    for dy in (0, 1):
        for dz in (0, 1):
            out.append((x, wrap(1, y + dy), wrap(2, z + dz), 0))
    for dx in (0, 1):
        for dz in (0, 1):
            out.append((wrap(0, x + dx), y, wrap(2, z + dz), 1))
    for dx in (0, 1):
        for dy in (0, 1):
            out.append((wrap(0, x + dx), wrap(1, y + dy), z, 2))
    return out


def _gen_xcube(L, couplings):
    if L < 2:
        raise InvalidSize("xcube", L, "need L >= 2")
    # periodic in x, y; open in z (z-layers 0..L for xy-edges, 0..L-1 for z-edges)
    spins = []
    for x in range(L):
        for y in range(L):
            for z in range(L + 1):
                spins.append((x, y, z, 0))
                spins.append((x, y, z, 1))
            for z in range(L):
                spins.append((x, y, z, 2))
    a = _Assembler("xcube", L, spins, couplings)

    def wrap(ax, c):
        return c % L if ax in (0, 1) else c

    for x in range(L):
        for y in range(L):
            for z in range(L):
                a.add("cube", (x, y, z), "X", _cube_edges((x, y, z), wrap))
    for x in range(L):
        for y in range(L):
            for z in range(1, L):
                v = (x, y, z)
                xm, ym = (x - 1) % L, (y - 1) % L
                ex = [(x, y, z, 0), (xm, y, z, 0)]
                ey = [(x, y, z, 1), (x, ym, z, 1)]
                ez = [(x, y, z, 2), (x, y, z - 1, 2)]
                a.add("cross_yz", v, "Z", ey + ez)
                a.add("cross_xy", v, "Z", ex + ey)
                a.add("cross_xz", v, "Z", ex + ez)
    return a.build()


def _gen_subsystem_stabilizer(L, couplings):
    if L < 2 or L % 2:
        raise InvalidSize("subsystem_stabilizer", L, "need even L >= 2")
    a = _Assembler("subsystem_stabilizer", L, _cubic_edges(L), couplings)

    def wrap(ax, c):
        return c % L

    for x in range(L):
        for y in range(L):
            for z in range(L):
                edges = _cube_edges((x, y, z), wrap)
                if (x + y + z) % 2 == 0:
                    a.add("cube_x", (x, y, z), "X", edges)
    for x in range(L):
        for y in range(L):
            for z in range(L):
                edges = _cube_edges((x, y, z), wrap)
                if (x + y + z) % 2 == 1:
                    a.add("cube_z", (x, y, z), "Z", edges)
    return a.build()


def _gen_subsystem_checks(L, couplings):
    if L < 2 or L % 2:
        raise InvalidSize("subsystem_checks", L, "need even L >= 2")
    a = _Assembler("subsystem_checks", L, _cubic_edges(L), couplings)

    def corner_edges(v, delta):
        # the three cube edges meeting the corner v + delta
        out = []
        for ax in range(3):
            w = list(v)
            for k in range(3):
                w[k] = (w[k] + delta[k]) % L
            if delta[ax] == 1:
                w[ax] = (w[ax] - 1) % L
            out.append((w[0], w[1], w[2], ax))
        return out

    deltas_even = [d for d in np.ndindex(2, 2, 2) if sum(d) % 2 == 0]  # V1 class
    deltas_odd = [d for d in np.ndindex(2, 2, 2) if sum(d) % 2 == 1]  # V2 class
    for x in range(L):
        for y in range(L):
            for z in range(L):
                v = (x, y, z)
                if (x + y + z) % 2 == 0:  # red cube: checks on V2 corners
                    for d in deltas_odd:
                        a.add("check_x", (*v, *d), "X", corner_edges(v, d))
    for x in range(L):
        for y in range(L):
            for z in range(L):
                v = (x, y, z)
                if (x + y + z) % 2 == 1:  # blue cube: checks on V1 corners
                    for d in deltas_even:
                        a.add("check_z", (*v, *d), "Z", corner_edges(v, d))
    return a.build()


_GENERATORS = {
    "ising_chain_open": _gen_ising_chain_open,
    "toric2d": _gen_toric2d,
    "toric3d": _gen_toric3d,
    "color_honeycomb": _gen_color_honeycomb,
    "rotated_surface": _gen_rotated_surface,
    "haah": _gen_haah,
    "xcube": _gen_xcube,
    "subsystem_stabilizer": _gen_subsystem_stabilizer,
    "subsystem_checks": _gen_subsystem_checks,
}


def generate(name, L, couplings=None):
    if name not in _GENERATORS:
        raise InvalidSize(name, L, "unknown model")
    return _GENERATORS[name](L, couplings)


def load_couplings(path):
    out = {}
    with open(path) as f:
        for ln in f:
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            key, val = ln.rsplit(None, 1)
            out[key] = float(val)
    return out
