"""Structure analysis of classical (X == 0) tableaus.

decompose() splits the dual Hamiltonian into connected components of the
spin-term incidence graph; classify() matches each component against a small
taxonomy of exactly samplable models (1-body, Ising chains with end fields,
lasso chains, 3-spin chains, blocked nearest-neighbor 1D systems) with a
bounded-degree-local fallback. Recognition works up to row/column
permutation: components whose Z block is an identity plus one or two
covering rows are implicitly conjugated by a CX ladder (ladder_normalize)
that turns single-site terms into consecutive bonds, which reduces chain and
lasso recognition to plain graph checks.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .circuit import OP_CX, CliffordCircuit
from .errors import NotApplicable, PatternMismatch, XBlockNonZero
from .tableau import SignedTableau

NON_INTERACTING = "NonInteracting1Body"
ISING_CHAIN = "IsingChainEndFields"
LASSO_CHAIN = "LassoIsingChain"
THREE_SPIN_CHAIN = "ThreeSpinChain"
NEAREST_NEIGHBOR_1D = "NearestNeighbor1D"
BOUNDED_DEGREE = "BoundedDegreeLocal"
ALL_TO_ALL_FIELDS = "AllToAllPlusFields"
UNKNOWN = "Unknown"

# components falling through to the bounded-degree fallback are accepted only
# while term weight and spin degree stay at most this large (measured on the
# pre-elimination rows when available); anything bigger is Unknown
BOUNDED_DEGREE_LIMIT = 16


@dataclass
class Classification:
    kind: str
    params: dict = field(default_factory=dict)

    def __str__(self):
        if not self.params:
            return self.kind
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind}({inner})"


@dataclass
class Component:
    spins: list  # global column indices (sorted)
    terms: list  # global row indices (sorted)
    Z: np.ndarray  # local (len(terms), len(spins)) submatrix
    signs: np.ndarray
    coeffs: np.ndarray
    n_global: int
    pre_Z: np.ndarray = None  # same rows before pseudo-Gaussian elimination

    @property
    def n(self):
        return len(self.spins)

    @property
    def m(self):
        return len(self.terms)

    def signed_coeffs(self):
        return np.where(self.signs == 1, -self.coeffs, self.coeffs)


def free_columns(t):
    """Indices of all-zero Z columns (free spins) of a classical tableau."""
    if not t.x_is_zero:
        raise XBlockNonZero("free spins are defined for classical tableaus")
    return [int(c) for c in np.nonzero(~t.Z.any(axis=0))[0]]


def decompose(t, pre=None):
    """Split a classical tableau into spin-term connected components.

    pre, if given, is the tableau holding the same rows before the
    pseudo-Gaussian elimination; each component then carries the matching
    pre-elimination submatrix (used by the bounded-degree fallback).
    """
    if not t.x_is_zero:
        raise XBlockNonZero("decompose requires a classical tableau")
    Z = t.Z
    s = t.s
    m, n = Z.shape
    # bipartite graph on (terms | spins); labels 0..m-1 terms, m..m+n-1 spins
    ti, si = np.nonzero(Z)
    rows = np.concatenate([ti, si + m])
    cols = np.concatenate([si + m, ti])
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(m + n, m + n))
    _, labels = connected_components(graph, directed=False)

    zero_cols = set(free_columns(t))
    comps = {}
    for r in range(m):
        comps.setdefault(labels[r], [[], []])[0].append(r)
    for c in range(n):
        if c not in zero_cols:
            comps.setdefault(labels[c + m], [[], []])[1].append(c)

    pre_Z = pre.Z if pre is not None else None
    out = []
    for key in sorted(comps, key=lambda k: (comps[k][1] or [n])[0]):
        terms, spins = comps[key]
        sub = Z[np.ix_(terms, spins)] if spins else np.zeros((len(terms), 0), np.uint8)
        pz = None
        if pre_Z is not None and terms:
            block = pre_Z[terms]
            pz = block[:, block.any(axis=0)]
        out.append(
            Component(
                spins=spins,
                terms=terms,
                Z=sub,
                signs=s[terms],
                coeffs=t.coeffs[terms],
                n_global=n,
                pre_Z=pz,
            )
        )
    return out


# ---- pattern helpers ----


def is_all_to_all_plus_fields(Z):
    """Identity block (one single-site row per spin) plus one full-support row."""
    m, k = Z.shape
    if k < 1 or m != k + 1:
        return False
    w = Z.sum(axis=1)
    singles = np.nonzero(w == 1)[0]
    full = np.nonzero(w == k)[0]
    if k == 1:
        return m == 2  # single column: field + "full" row coincide in weight
    if len(singles) != k or len(full) != 1:
        return False
    return bool((Z[singles].sum(axis=0) == 1).all())


def ladder_normalize(component):
    """Turn an identity-plus-full-row component into an explicit Ising chain.

    Emits the CX ladder CX(s_0,s_1)...CX(s_{k-2},s_{k-1}) over the
    component's global spin indices; conjugation maps the single-site row on
    the i-th spin (i >= 1) to a bond on spins (i-1, i), keeps the first
    single-site row as an end field, and collapses the full-support row to a
    field on the last spin.
    """
    Z = component.Z
    k = component.n
    circuit = CliffordCircuit(component.n_global)
    if k <= 1:
        return circuit, component
    if not is_all_to_all_plus_fields(Z):
        raise PatternMismatch(
            "ladder_normalize needs one full-support row plus single-site rows"
        )
    for i in range(k - 1):
        circuit.cx(component.spins[i], component.spins[i + 1])
    local = SignedTableau.from_bits(
        np.zeros_like(Z), Z, component.signs, component.coeffs, validate=False
    )
    local_gates = np.array(
        [[OP_CX, i, i + 1] for i in range(k - 1)], dtype=np.int64
    )
    local.apply_gates_inplace(local_gates)
    out = Component(
        spins=component.spins,
        terms=component.terms,
        Z=local.Z,
        signs=local.s,
        coeffs=local.coeffs,
        n_global=component.n_global,
        pre_Z=component.pre_Z,
    )
    return circuit, out


def _ladder_image(Z):
    """Z after conjugation by the ascending CX ladder over its columns."""
    out = Z.copy()
    if Z.shape[1] >= 2:
        out[:, :-1] ^= Z[:, 1:]
    return out


def _interval_order(k, supports):
    """Column order making each of <= 2 supports a contiguous interval."""
    s1 = supports[0]
    s2 = supports[1] if len(supports) > 1 else set()
    neither = [c for c in range(k) if c not in s1 and c not in s2]
    only1 = sorted(s1 - s2)
    both = sorted(s1 & s2)
    only2 = sorted(s2 - s1)
    return neither + only1 + both + only2


def _graph_classify(Z):
    """Chain / lasso / NN-1D checks for components with all weights <= 2."""
    m, k = Z.shape
    w = Z.sum(axis=1)
    if (w > 2).any():
        return None
    edges = set()
    fields = set()
    for i in range(m):
        cols = np.nonzero(Z[i])[0]
        if len(cols) == 1:
            fields.add(int(cols[0]))
        elif len(cols) == 2:
            edges.add((int(cols[0]), int(cols[1])))
    deg = np.zeros(k, dtype=int)
    adj = [[] for _ in range(k)]
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
        adj[a].append(b)
        adj[b].append(a)

    def connected():
        seen = {0}
        stack = [0]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == k

    if len(edges) == k - 1 and deg.max() <= 2 and connected():
        ends = {int(c) for c in np.nonzero(deg <= 1)[0]}
        if fields <= ends:
            if k == 3:
                return Classification(THREE_SPIN_CHAIN, {"len": k})
            return Classification(ISING_CHAIN, {"len": k})
        # path with interior fields: still a nearest-neighbor 1D system
        return Classification(NEAREST_NEIGHBOR_1D, {"len": k})
    if (
        len(edges) == k
        and connected()
        and sorted(deg.tolist()) == [1] + [2] * (k - 2) + [3]
    ):
        junction = int(np.nonzero(deg == 3)[0][0])
        tail_end = int(np.nonzero(deg == 1)[0][0])
        # tail length via BFS from the free end to the junction
        dist = {tail_end: 0}
        stack = [tail_end]
        while stack:
            v = stack.pop()
            if v == junction:
                break
            for nb in adj[v]:
                if nb not in dist:
                    dist[nb] = dist[v] + 1
                    stack.append(nb)
        cycle = k - dist[junction]
        return Classification(
            LASSO_CHAIN, {"len": k, "junction": junction, "cycle": cycle}
        )
    if len(edges) == k - 1 and deg.max() <= 2 and connected():
        return Classification(NEAREST_NEIGHBOR_1D, {"len": k})
    return None


def _identity_plus_heavy_classify(Z):
    """Implicit-ladder route: identity singles plus <= 2 heavy covering rows."""
    m, k = Z.shape
    w = Z.sum(axis=1)
    if (w == 2).any() or (w == 0).any():
        return None
    singles = np.nonzero(w == 1)[0]
    heavy = np.nonzero(w >= 3)[0]
    if len(singles) != k or not 1 <= len(heavy) <= 2:
        return None
    if not (Z[singles].sum(axis=0) == 1).all():
        return None
    supports = [set(np.nonzero(Z[i])[0].tolist()) for i in heavy]
    order = _interval_order(k, supports)
    return _graph_classify(_ladder_image(Z[:, order]))


def _blocked_nn1d_classify(Z):
    """Nearest-neighbor 1D after blocking spin pairs joined by 2-body terms."""
    m, k = Z.shape
    w = Z.sum(axis=1)
    pair_rows = np.nonzero(w == 2)[0]
    heavy = np.nonzero(w >= 3)[0]
    if len(heavy) > 2 or len(pair_rows) == 0:
        return None
    block_of = -np.ones(k, dtype=int)
    blocks = []
    for i in pair_rows:
        a, b = (int(c) for c in np.nonzero(Z[i])[0])
        if block_of[a] >= 0 and block_of[a] == block_of[b]:
            continue
        if block_of[a] >= 0 or block_of[b] >= 0:
            return None  # overlapping pairings
        block_of[a] = block_of[b] = len(blocks)
        blocks.append((a, b))
    for c in range(k):
        if block_of[c] < 0:
            block_of[c] = len(blocks)
            blocks.append((c,))
    # heavy rows must pick exactly one column per block they touch, and all
    # heavy rows must agree on that column (the ladder then runs over the
    # picked representatives, leaving every term on <= 2 consecutive blocks)
    picked = {}
    supports = []
    for i in heavy:
        cols = np.nonzero(Z[i])[0]
        bset = set()
        for c in cols:
            b = int(block_of[c])
            if b in bset:
                return None
            bset.add(b)
            if picked.setdefault(b, int(c)) != int(c):
                return None
        supports.append(bset)
    if supports and not _interval_orderable_ok(len(blocks), supports):
        return None
    return Classification(NEAREST_NEIGHBOR_1D, {"len": len(blocks)})


def _interval_orderable_ok(nblocks, supports):
    # any two sets can be interval-ordered by the neither/only/both/only split
    return len(supports) <= 2


def classify(component):
    """First matching class in the fixed taxonomy order; Unknown as fallback."""
    if isinstance(component, Component):
        Z, pre_Z = component.Z, component.pre_Z
    else:
        Z, pre_Z = np.asarray(component, dtype=np.uint8), None
    m, k = Z.shape
    if k <= 1:
        return Classification(NON_INTERACTING, {"len": k})
    result = _graph_classify(Z)
    if result is None:
        result = _identity_plus_heavy_classify(Z)
    if result is None:
        result = _blocked_nn1d_classify(Z)
    if result is not None:
        return result
    ref = pre_Z if pre_Z is not None else Z
    max_weight = int(ref.sum(axis=1).max(initial=0))
    max_degree = int(ref.sum(axis=0).max(initial=0))
    if max_weight <= BOUNDED_DEGREE_LIMIT and max_degree <= BOUNDED_DEGREE_LIMIT:
        return Classification(
            BOUNDED_DEGREE, {"max_weight": max_weight, "max_degree": max_degree}
        )
    return Classification(UNKNOWN, {})


# ---- report ----


@dataclass
class DualityReport:
    components: list  # (Component, Classification) pairs
    free_spins: int
    gate_counts: dict
    species_map: dict

    def classifications(self):
        return [c for _, c in self.components]

    def kind_counts(self):
        out = {}
        for _, c in self.components:
            out[c.kind] = out.get(c.kind, 0) + 1
        return out

    def to_dict(self):
        return {
            "free_spins": self.free_spins,
            "gate_counts": self.gate_counts,
            "species_map": {
                sp: sorted(ids) for sp, ids in sorted(self.species_map.items())
            },
            "components": [
                {
                    "spins": comp.spins,
                    "terms": comp.terms,
                    "classification": cls.kind,
                    "parameters": cls.params,
                }
                for comp, cls in self.components
            ],
        }


def build_report(circuit, dual, pre=None, term_species=None):
    """Assemble the DualityReport for a dualized Hamiltonian.

    circuit: the witness circuit (original -> dual); dual: the classical
    tableau it produces; pre: optional tableau before pseudo-Gaussian
    elimination (row-aligned with dual); term_species: optional list of
    per-term species labels from the generating model.
    """
    comps = decompose(dual, pre=pre)
    pairs = [(comp, classify(comp)) for comp in comps]
    counts = dict(circuit.gate_counts())
    counts["total"] = len(circuit)
    counts["depth"] = circuit.depth()
    species_map = {}
    if term_species is not None:
        for cid, comp in enumerate(comps):
            for r in comp.terms:
                species_map.setdefault(term_species[r], set()).add(cid)
    return DualityReport(
        components=pairs,
        free_spins=len(free_columns(dual)),
        gate_counts=counts,
        species_map=species_map,
    )


def free_spin_degeneracy(report, zero_couplings=0):
    """log2 ground-state degeneracy: free spins plus dropped-coupling count.

    Valid when every component has a unique ground state once its couplings
    are fixed (the ferromagnetic-chain situation); components we could not
    classify make the count unreliable, so they raise.
    """
    for _, cls in report.components:
        if cls.kind == UNKNOWN:
            raise NotApplicable("degeneracy undefined with Unknown components")
    return report.free_spins + zero_couplings
