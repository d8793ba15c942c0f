"""Exact classical Gibbs samplers for the recognized dual models.

The workhorse is a transfer sweep over a path of spin blocks: every term must
live on at most two consecutive blocks, suffix partial partition functions
are accumulated right-to-left in log space, and the configuration is then
drawn left-to-right from the exact marginal/conditionals. Chains are paths of
single-spin blocks; lassos add one long-range bond handled by enumerating the
four joint values of its endpoints and clamping them during the sweeps;
blocked nearest-neighbor systems use two-spin blocks. beta = inf selects the
deterministic limit (argmax of each conditional, ties broken toward +1).

prepare_gibbs runs the duality pipeline, appends explicit CX ladders that
turn implicit chain/lasso components into nearest-neighbor form, samples each
component classically, and emits the inverse circuit: applying it to the
computational-basis state of a sampled configuration prepares the quantum
Gibbs state, since sigma_beta(H) = C^dag sigma_beta(classical) C.
"""

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .circuit import CliffordCircuit
from .diagonalizer import diagonalize, pseudo_gaussian
from .errors import (
    BadTopology,
    NonFinite,
    TemperatureOutOfRange,
    TooLarge,
    UnsupportedClassification,
)
from .structure import (
    BOUNDED_DEGREE,
    NON_INTERACTING,
    UNKNOWN,
    _interval_order,
    _ladder_image,
    classify,
    decompose,
    free_columns,
)
from .tableau import SignedTableau, apply_circuit

__all__ = [
    "ClassicalChain",
    "ClassicalGibbsSample",
    "LassoChain",
    "sample_chain",
    "sample_lasso",
    "sample_glauber",
    "chain_distribution",
    "lasso_distribution",
    "classical_energies",
    "enumerate_configs",
    "prepare_gibbs",
    "PreparedGibbs",
    "GibbsShot",
]

DENSE_CONFIG_LIMIT = 20  # guard for 2^N enumeration helpers
GLAUBER_BETA_DEFAULT = 1.0  # high-temperature gate for approximate components


def _check_beta(beta):
    beta = float(beta)
    if math.isnan(beta) or beta == -math.inf:
        raise NonFinite(f"inverse temperature {beta!r} is not usable")
    if beta < 0:
        raise TemperatureOutOfRange(f"beta must be >= 0, got {beta}")
    return beta


@dataclass
class ClassicalGibbsSample:
    configuration: np.ndarray  # +-1 vector
    energy: float
    approximate: bool = False


@dataclass
class ClassicalChain:
    """H = sum_i J_i x_i x_{i+1} + sum_i h_i x_i over x_i in {-1,+1}."""

    bonds: np.ndarray  # J_1..J_{N-1}
    fields: np.ndarray  # h_1..h_N

    def __post_init__(self):
        self.bonds = np.asarray(self.bonds, dtype=np.float64).reshape(-1)
        self.fields = np.asarray(self.fields, dtype=np.float64).reshape(-1)
        if len(self.fields) < 1 or len(self.bonds) != len(self.fields) - 1:
            raise BadTopology("need N >= 1 fields and N-1 bonds")
        if not (np.isfinite(self.bonds).all() and np.isfinite(self.fields).all()):
            raise NonFinite("couplings must be finite")

    @property
    def N(self):
        return len(self.fields)

    def energy(self, configuration):
        x = np.asarray(configuration, dtype=np.float64)
        return float(self.bonds @ (x[:-1] * x[1:]) + self.fields @ x)

    def terms(self):
        out = [((i, i + 1), float(j)) for i, j in enumerate(self.bonds)]
        out += [((i,), float(h)) for i, h in enumerate(self.fields)]
        return out


@dataclass
class LassoChain:
    """Chain plus one extra bond from the last spin N-1 to interior spin t."""

    chain: ClassicalChain
    junction: int
    junction_coeff: float

    def __post_init__(self):
        n = self.chain.N
        if n < 3 or not 0 <= self.junction <= n - 3:
            raise BadTopology(
                "lasso needs N >= 3 with the extra bond ending on an interior spin"
            )
        if not math.isfinite(self.junction_coeff):
            raise NonFinite("junction coupling must be finite")

    @property
    def N(self):
        return self.chain.N

    def energy(self, configuration):
        x = np.asarray(configuration, dtype=np.float64)
        return self.chain.energy(x) + float(
            self.junction_coeff * x[self.junction] * x[-1]
        )


# ---- exact transfer sweep over a path of spin blocks ----


class _PathEngine:
    """Exact sampler for terms living on <= 2 consecutive blocks of a path.

    blocks: ordered list of tuples of spin ids (any hashables); terms: list of
    (spin-id tuple, coefficient). Clamping fixes selected spins, restricting
    their block's state set during the sweep.
    """

    def __init__(self, blocks, terms):
        self.blocks = [tuple(b) for b in blocks]
        self.K = len(self.blocks)
        self.pos = {}
        for w, b in enumerate(self.blocks):
            for p, s in enumerate(b):
                if s in self.pos:
                    raise BadTopology(f"spin {s!r} appears in two blocks")
                self.pos[s] = (w, p)
        self.window_terms = [[] for _ in range(self.K)]
        self.all_terms = [(tuple(c), float(v)) for c, v in terms]
        for cols, coeff in self.all_terms:
            ws = sorted({self.pos[c][0] for c in cols})
            if ws and ws[0] < ws[-1] - 1:
                raise BadTopology("term spans non-adjacent blocks")
            self.window_terms[ws[-1] if ws else 0].append((cols, coeff))
        self._cache = {}

    def _states(self, w, clamp):
        out = []
        for vals in itertools.product((1, -1), repeat=len(self.blocks[w])):
            if all(clamp.get(s, v) == v for s, v in zip(self.blocks[w], vals)):
                out.append(vals)
        return out

    def _window_energy(self, w, prev_states, states):
        """(len(prev_states), len(states)) energies of window-w terms."""
        out = np.zeros((len(prev_states), len(states)))
        for cols, coeff in self.window_terms[w]:
            a = np.ones(len(prev_states))
            b = np.ones(len(states))
            for c in cols:
                bw, bp = self.pos[c]
                if bw == w:
                    b = b * np.array([st[bp] for st in states], dtype=np.float64)
                else:
                    a = a * np.array([st[bp] for st in prev_states], dtype=np.float64)
            out += coeff * np.outer(a, b)
        return out

    def _sweep(self, beta, clamp):
        """Right-to-left pass; returns per-block state lists, transition
        energy matrices, and suffix tables (log partial partition functions
        at finite beta, minimal suffix energies at beta=inf). Cached per
        (beta, clamp) so repeated shots only pay for the forward pass."""
        key = (beta, tuple(sorted(clamp.items())))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        states = [self._states(w, clamp) for w in range(self.K)]
        ground = math.isinf(beta)
        energies = [self._window_energy(0, [()], states[0])[0]]
        for w in range(1, self.K):
            energies.append(self._window_energy(w, states[w - 1], states[w]))
        suffix = [None] * self.K
        suffix[self.K - 1] = np.zeros(len(states[self.K - 1]))
        for w in range(self.K - 2, -1, -1):
            E = energies[w + 1]
            if ground:
                suffix[w] = (E + suffix[w + 1][None, :]).min(axis=1)
            else:
                suffix[w] = logsumexp(-beta * E + suffix[w + 1][None, :], axis=1)
        self._cache[key] = (states, energies, suffix)
        return self._cache[key]

    @staticmethod
    def _draw(weights, rng):
        p = np.exp(weights - weights.max())
        p /= p.sum()
        return int(rng.choice(len(p), p=p))

    def sample(self, beta, rng, clamp=None):
        states, energies, suffix = self._sweep(beta, clamp or {})
        ground = math.isinf(beta)
        cfg = {}
        i = None
        for w in range(self.K):
            E = energies[w] if w == 0 else energies[w][i]
            if ground:
                i = int(np.argmin(E + suffix[w]))
            else:
                i = self._draw(-beta * E + suffix[w], rng)
            for s, v in zip(self.blocks[w], states[w][i]):
                cfg[s] = v
        return cfg

    def log_z(self, beta, clamp=None):
        _, energies, suffix = self._sweep(beta, clamp or {})
        return float(logsumexp(-beta * energies[0] + suffix[0]))

    def min_energy(self, clamp=None):
        _, energies, suffix = self._sweep(math.inf, clamp or {})
        return float((energies[0] + suffix[0]).min())

    def config_logprob(self, configuration, beta, clamp=None):
        """log of the product of implemented conditionals for one config."""
        states, energies, suffix = self._sweep(beta, clamp or {})
        ground = math.isinf(beta)
        logp = 0.0
        prev = None
        for w in range(self.K):
            want = tuple(configuration[s] for s in self.blocks[w])
            if want not in states[w]:
                return -math.inf
            j = states[w].index(want)
            E = energies[0] if w == 0 else energies[w][prev]
            if ground:
                if j != int(np.argmin(E + suffix[w])):
                    return -math.inf
            else:
                wts = -beta * E + suffix[w]
                logp += float(wts[j] - logsumexp(wts))
            prev = j
        return logp

    def energy(self, configuration):
        e = 0.0
        for cols, coeff in self.all_terms:
            p = coeff
            for c in cols:
                p *= configuration[c]
            e += p
        return float(e)


_PAIR_ORDER = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def _junction_log_weights(engine, junction, beta):
    t, e, coeff = junction
    out = []
    for a, b in _PAIR_ORDER:
        clamp = {t: a, e: b}
        if math.isinf(beta):
            out.append(coeff * a * b + engine.min_energy(clamp))
        else:
            out.append(-beta * coeff * a * b + engine.log_z(beta, clamp))
    return np.array(out)


def _sample_exact(engine, junction, beta, rng):
    if junction is None:
        return engine.sample(beta, rng)
    wts = _junction_log_weights(engine, junction, beta)
    if math.isinf(beta):
        i = int(np.argmin(wts))
    else:
        i = _PathEngine._draw(wts, rng)
    a, b = _PAIR_ORDER[i]
    t, e, _ = junction
    return engine.sample(beta, rng, clamp={t: a, e: b})


def _exact_logprob(engine, junction, beta, configuration):
    if junction is None:
        return engine.config_logprob(configuration, beta)
    t, e, _ = junction
    wts = _junction_log_weights(engine, junction, beta)
    i = _PAIR_ORDER.index((configuration[t], configuration[e]))
    clamp = {t: configuration[t], e: configuration[e]}
    if math.isinf(beta):
        if wts[i] > wts.min() or i != int(np.argmin(wts)):
            return -math.inf
        return engine.config_logprob(configuration, beta, clamp)
    return float(wts[i] - logsumexp(wts)) + engine.config_logprob(
        configuration, beta, clamp
    )


# ---- public samplers ----


def _chain_engine(chain):
    return _PathEngine([(i,) for i in range(chain.N)], chain.terms())


def sample_chain(chain, beta, rng, shots=None):
    """Exact sample(s) from p proportional to exp(-beta H) for an open chain.

    Returns one ClassicalGibbsSample, or a list of `shots` samples drawn from
    a single cached transfer sweep.
    """
    beta = _check_beta(beta)
    engine = _chain_engine(chain)

    def one():
        cfg = engine.sample(beta, rng)
        x = np.array([cfg[i] for i in range(chain.N)], dtype=np.int8)
        return ClassicalGibbsSample(x, chain.energy(x))

    return one() if shots is None else [one() for _ in range(shots)]


def sample_lasso(lasso, beta, rng, shots=None):
    """Exact sample(s) for a lasso: enumerate the junction pair, then sweep."""
    beta = _check_beta(beta)
    engine = _chain_engine(lasso.chain)
    junction = (lasso.junction, lasso.N - 1, lasso.junction_coeff)

    def one():
        cfg = _sample_exact(engine, junction, beta, rng)
        x = np.array([cfg[i] for i in range(lasso.N)], dtype=np.int8)
        return ClassicalGibbsSample(x, lasso.energy(x))

    return one() if shots is None else [one() for _ in range(shots)]


def enumerate_configs(N):
    """(2^N, N) matrix of +-1 configs; bit i of the row index set <=> x_i=-1."""
    if N > DENSE_CONFIG_LIMIT:
        raise TooLarge(N, DENSE_CONFIG_LIMIT)
    idx = np.arange(1 << N)[:, None]
    bits = (idx >> np.arange(N)[None, :]) & 1
    return (1 - 2 * bits).astype(np.int8)


def _distribution(engine, junction, beta, N):
    configs = enumerate_configs(N)
    out = np.zeros(len(configs))
    for b, row in enumerate(configs):
        cfg = {i: int(v) for i, v in enumerate(row)}
        out[b] = math.exp(_exact_logprob(engine, junction, beta, cfg))
    return out


def chain_distribution(chain, beta):
    """Sampler distribution (product of implemented conditionals) over 2^N."""
    beta = _check_beta(beta)
    return _distribution(_chain_engine(chain), None, beta, chain.N)


def lasso_distribution(lasso, beta):
    beta = _check_beta(beta)
    junction = (lasso.junction, lasso.N - 1, lasso.junction_coeff)
    return _distribution(_chain_engine(lasso.chain), junction, beta, lasso.N)


def classical_energies(t):
    """Energies of all 2^n configs of a classical tableau (enumerate_configs
    row order: bit i of the index set means spin i is -1)."""
    if not t.x_is_zero:
        raise BadTopology("classical energies need an X == 0 tableau")
    if t.n > DENSE_CONFIG_LIMIT:
        raise TooLarge(t.n, DENSE_CONFIG_LIMIT)
    configs = enumerate_configs(t.n).astype(np.float64)
    parity = (((1 - configs) / 2) @ t.Z.T.astype(np.float64)) % 2
    sc = np.where(t.s == 1, -t.coeffs, t.coeffs)
    return (1 - 2 * parity) @ sc


def _glauber_core(Z, signed_coeffs, beta, sweeps, rng):
    m, n = Z.shape
    rows_of = [np.nonzero(Z[:, i])[0] for i in range(n)]
    x = (1 - 2 * rng.integers(0, 2, size=n)).astype(np.int8)
    supports = [np.nonzero(Z[r])[0] for r in range(m)]
    for _ in range(sweeps):
        for i in range(n):
            a = 0.0
            for r in rows_of[i]:
                p = signed_coeffs[r]
                for j in supports[r]:
                    if j != i:
                        p *= x[j]
                a += p
            if math.isinf(beta):
                x[i] = 1 if a <= 0 else -1
            else:
                with np.errstate(over="ignore"):
                    p_plus = 1.0 / (1.0 + math.exp(min(2 * beta * a, 700.0)))
                x[i] = 1 if rng.random() < p_plus else -1
    return x


def sample_glauber(model, beta, sweeps=None, rng=None, beta_threshold=None):
    """Approximate heat-bath sampler for a bounded-degree classical model.

    model: classical (X == 0) SignedTableau. Runs `sweeps` full passes of
    single-site heat-bath updates from a uniform start; default sweep count
    is 64 * n * ceil(beta). Emits a warning when beta exceeds the caller's
    threshold; the returned sample is flagged approximate.
    """
    beta = _check_beta(beta)
    if not model.x_is_zero:
        raise BadTopology("Glauber dynamics needs a classical tableau")
    if rng is None:
        rng = np.random.default_rng()
    if beta_threshold is not None and beta > beta_threshold:
        warnings.warn(
            f"beta={beta} exceeds the high-temperature threshold {beta_threshold}; "
            "Glauber output may be far from equilibrium",
            stacklevel=2,
        )
    n = model.n
    if sweeps is None:
        sweeps = max(1, 64 * n * (1 if math.isinf(beta) else math.ceil(beta)))
    sc = np.where(model.s == 1, -model.coeffs, model.coeffs)
    Z = model.Z
    x = _glauber_core(Z, sc, beta, sweeps, rng)
    parity = (((1 - x.astype(np.float64)) / 2) @ Z.T.astype(np.float64)) % 2
    return ClassicalGibbsSample(x, float((1 - 2 * parity) @ sc), approximate=True)


# ---- component plans for the end-to-end pipeline ----


@dataclass
class _ComponentPlan:
    kind: str  # "exact" | "glauber" | "const"
    spin_map: list  # local spin id -> global column
    Z: np.ndarray  # local rows after any normalization gates
    signed_coeffs: np.ndarray
    engine: object = None
    junction: tuple = None

    def component_energy(self, local_cfg):
        if len(self.spin_map) == 0:
            return float(self.signed_coeffs.sum())
        x = np.array([local_cfg[i] for i in range(len(self.spin_map))], np.float64)
        parity = (((1 - x) / 2) @ self.Z.T.astype(np.float64)) % 2
        return float((1 - 2 * parity) @ self.signed_coeffs)


def _edges_and_fields(Z, sc):
    edge = {}
    fld = {}
    for r in range(Z.shape[0]):
        cols = np.nonzero(Z[r])[0]
        if len(cols) == 1:
            c = int(cols[0])
            fld[c] = fld.get(c, 0.0) + sc[r]
        elif len(cols) == 2:
            key = (int(cols[0]), int(cols[1]))
            edge[key] = edge.get(key, 0.0) + sc[r]
    return edge, fld


def _walk_path(k, adj, start):
    order = [start]
    seen = {start}
    while len(order) < k:
        nxt = [v for v in adj[order[-1]] if v not in seen]
        if not nxt:
            break
        v = min(nxt)
        order.append(v)
        seen.add(v)
    return order


def _exact_plan(comp):
    """Sampling plan for chain/lasso/3-spin/NN-1D components, emitting the CX
    ladder gates (global index pairs) that expose nearest-neighbor form."""
    Z = comp.Z.astype(np.uint8).copy()
    sc = comp.signed_coeffs().astype(np.float64)
    k = comp.n
    w = Z.sum(axis=1)
    gates = []
    spin_map = list(comp.spins)

    if (w >= 3).any():
        heavy = np.nonzero(w >= 3)[0]
        singles = np.nonzero(w == 1)[0]
        identity_like = (
            not (w == 2).any()
            and len(singles) == k
            and len(heavy) <= 2
            and bool((Z[singles].sum(axis=0) == 1).all())
        )
        if identity_like:
            supports = [set(np.nonzero(Z[i])[0].tolist()) for i in heavy]
            order = _interval_order(k, supports)
            gates = [
                (comp.spins[order[i]], comp.spins[order[i + 1]])
                for i in range(k - 1)
            ]
            Z = _ladder_image(Z[:, order])
            spin_map = [comp.spins[o] for o in order]
        else:
            return _blocked_plan(comp)

    edge, fld = _edges_and_fields(Z, sc)
    adj = [[] for _ in range(k)]
    deg = np.zeros(k, dtype=int)
    for a, b in edge:
        adj[a].append(b)
        adj[b].append(a)
        deg[a] += 1
        deg[b] += 1

    junction = None
    if len(edge) == k - 1 and deg.max() <= 2:
        start = int(min(np.nonzero(deg <= 1)[0]))
        order = _walk_path(k, adj, start)
    elif len(edge) == k and sorted(deg.tolist()) == [1] + [2] * (k - 2) + [3]:
        tail_end = int(np.nonzero(deg == 1)[0][0])
        jspin = int(np.nonzero(deg == 3)[0][0])
        # walk tail to the junction, then once around the cycle
        order = [tail_end]
        seen = {tail_end}
        while order[-1] != jspin:
            nxt = [v for v in adj[order[-1]] if v not in seen]
            order.append(min(nxt))
            seen.add(order[-1])
        while len(order) < k:
            nxt = [v for v in adj[order[-1]] if v not in seen]
            order.append(min(nxt))
            seen.add(order[-1])
        t = order.index(jspin)
        key = (min(order[-1], jspin), max(order[-1], jspin))
        junction = (jspin, order[-1], edge.pop(key))
    else:
        raise UnsupportedClassification(
            "component is not a chain, lasso, or nearest-neighbor path"
        )

    if len(order) != k:
        raise UnsupportedClassification("component bond graph is not connected")
    terms = [(key, v) for key, v in edge.items()] + [((c,), v) for c, v in fld.items()]
    engine = _PathEngine([(s,) for s in order], terms)
    return gates, _ComponentPlan("exact", spin_map, Z, sc, engine, junction)


def _blocked_plan(comp):
    """Plan for pair-blocked nearest-neighbor components: ladder over the
    column picked by the covering rows in each block."""
    Z = comp.Z.astype(np.uint8).copy()
    sc = comp.signed_coeffs().astype(np.float64)
    k = comp.n
    w = Z.sum(axis=1)
    pair_rows = np.nonzero(w == 2)[0]
    heavy = np.nonzero(w >= 3)[0]
    if len(heavy) > 2:
        raise UnsupportedClassification("more than two covering rows")
    block_of = -np.ones(k, dtype=int)
    blocks = []
    for r in pair_rows:
        a, b = (int(c) for c in np.nonzero(Z[r])[0])
        if block_of[a] >= 0 and block_of[a] == block_of[b]:
            continue
        if block_of[a] >= 0 or block_of[b] >= 0:
            raise UnsupportedClassification("overlapping spin pairings")
        block_of[a] = block_of[b] = len(blocks)
        blocks.append([a, b])
    for c in range(k):
        if block_of[c] < 0:
            block_of[c] = len(blocks)
            blocks.append([c])
    picked = {}
    supports = []
    for r in heavy:
        cols = np.nonzero(Z[r])[0]
        bset = set()
        for c in cols:
            b = int(block_of[c])
            if b in bset or picked.setdefault(b, int(c)) != int(c):
                raise UnsupportedClassification("covering rows disagree on blocks")
            bset.add(b)
        supports.append(bset)
    border = _interval_order(len(blocks), supports or [set()])
    reps = [picked[b] for b in border if b in picked]
    gates = [(comp.spins[reps[i]], comp.spins[reps[i + 1]]) for i in range(len(reps) - 1)]
    Z2 = Z.copy()
    for i in range(len(reps) - 1):
        Z2[:, reps[i]] ^= Z[:, reps[i + 1]]

    # block-level bond graph of the transformed rows
    nb = len(blocks)
    bedges = set()
    for r in range(Z2.shape[0]):
        bset = sorted({int(block_of[c]) for c in np.nonzero(Z2[r])[0]})
        if len(bset) == 2:
            bedges.add(tuple(bset))
        elif len(bset) > 2:
            raise UnsupportedClassification("term spans more than two blocks")
    adj = [[] for _ in range(nb)]
    deg = np.zeros(nb, dtype=int)
    for a, b in bedges:
        adj[a].append(b)
        adj[b].append(a)
        deg[a] += 1
        deg[b] += 1
    if len(bedges) != nb - 1 or deg.max() > 2:
        raise UnsupportedClassification("blocked structure is not a path")
    start = int(min(np.nonzero(deg <= 1)[0]))
    border2 = _walk_path(nb, adj, start)
    if len(border2) != nb:
        raise UnsupportedClassification("blocked structure is not connected")
    terms = []
    for r in range(Z2.shape[0]):
        cols = tuple(int(c) for c in np.nonzero(Z2[r])[0])
        if cols:
            terms.append((cols, sc[r]))
    engine = _PathEngine([tuple(blocks[b]) for b in border2], terms)
    return gates, _ComponentPlan("exact", list(comp.spins), Z2, sc, engine)


def _component_plans(comps, circuit_n):
    extra = CliffordCircuit(circuit_n)
    plans = []
    approximate = False
    for comp in comps:
        cls = classify(comp)
        if cls.kind == UNKNOWN:
            raise UnsupportedClassification(
                f"cannot sample component with spins {comp.spins[:8]}..."
            )
        if cls.kind == NON_INTERACTING:
            plan = _ComponentPlan(
                "exact",
                list(comp.spins),
                comp.Z.astype(np.uint8),
                comp.signed_coeffs().astype(np.float64),
            )
            if comp.n == 1:
                _, fld = _edges_and_fields(plan.Z, plan.signed_coeffs)
                plan.engine = _PathEngine([(0,)], [((0,), fld.get(0, 0.0))])
            else:
                plan.kind = "const"
            plans.append(plan)
        elif cls.kind == BOUNDED_DEGREE:
            approximate = True
            plans.append(
                _ComponentPlan(
                    "glauber",
                    list(comp.spins),
                    comp.Z.astype(np.uint8),
                    comp.signed_coeffs().astype(np.float64),
                )
            )
        else:
            gates, plan = _exact_plan(comp)
            for a, b in gates:
                extra.cx(a, b)
            plans.append(plan)
    return extra, plans, approximate


@dataclass
class GibbsShot:
    configuration: np.ndarray  # +-1 over all dual spins
    energy: float
    component_energies: list

    @property
    def bitstring(self):
        return "".join("0" if v == 1 else "1" for v in self.configuration)

    @property
    def pm_string(self):
        return "".join("+" if v == 1 else "-" for v in self.configuration)


@dataclass
class PreparedGibbs:
    circuit: CliffordCircuit  # forward witness: C H C^dag is classical
    inverse_circuit: CliffordCircuit  # preparation circuit C^dag
    dual: SignedTableau  # classical dual (after normalization gates)
    free_spins: list
    beta: float
    shots: list = field(default_factory=list)
    approximate: bool = False

    def bitstrings(self):
        return [s.bitstring for s in self.shots]

    def energies(self):
        return np.array([s.energy for s in self.shots])


def _shot_rngs(rng, shots):
    """Independent per-shot streams split from a master seed or generator."""
    if isinstance(rng, np.random.Generator):
        return rng.spawn(shots)
    seq = rng if isinstance(rng, np.random.SeedSequence) else np.random.SeedSequence(rng)
    return [np.random.default_rng(child) for child in seq.spawn(shots)]


def prepare_gibbs(
    model,
    beta,
    shots,
    rng,
    free_spins="random",
    glauber_threshold=GLAUBER_BETA_DEFAULT,
    glauber_sweeps=None,
):
    """Classical sampling plus the inverse duality circuit for Gibbs prep.

    model: LatticeModel or classical-izable SignedTableau. Applies the full
    duality pipeline (plus per-component CX ladders where needed), samples
    each dual component at inverse temperature beta, and returns the inverse
    circuit: preparing sigma_beta(H) means applying it to the basis state of
    each sampled configuration. free_spins: "random" draws each free spin
    uniformly per shot; otherwise a +-1 sequence (or "+"/"-" string) pins
    them. Components needing Glauber dynamics require beta <= the threshold
    and mark the result approximate.
    """
    beta = _check_beta(beta)
    t = model.tableau() if hasattr(model, "tableau") else model
    c1, mid = diagonalize(t)
    c2, dual = pseudo_gaussian(mid)
    circuit = CliffordCircuit(t.n, c1.gate_array).extend(c2)
    comps = decompose(dual, pre=mid)
    extra, plans, approximate = _component_plans(comps, t.n)
    if approximate and beta > glauber_threshold:
        raise TemperatureOutOfRange(
            f"beta={beta} exceeds the Glauber threshold {glauber_threshold} "
            "and this dual has components without an exact sampler"
        )
    circuit.extend(extra)
    dual2 = apply_circuit(dual, extra)
    free = free_columns(dual2)

    pinned = None
    if isinstance(free_spins, str) and free_spins != "random":
        pinned = [1 if ch == "+" else -1 for ch in free_spins.replace("0", "+").replace("1", "-")]
        if len(pinned) == 1:
            pinned = pinned * len(free)
    elif not isinstance(free_spins, str):
        pinned = [int(v) for v in free_spins]
    if pinned is not None and len(pinned) != len(free):
        raise BadTopology(f"need {len(free)} free-spin values, got {len(pinned)}")

    out = PreparedGibbs(
        circuit=circuit,
        inverse_circuit=circuit.inverse(),
        dual=dual2,
        free_spins=free,
        beta=beta,
        approximate=approximate,
    )
    for shot_rng in _shot_rngs(rng, shots):
        x = np.zeros(t.n, dtype=np.int8)
        if pinned is not None:
            x[free] = pinned
        elif free:
            x[free] = 1 - 2 * shot_rng.integers(0, 2, size=len(free)).astype(np.int8)
        comp_energies = []
        for comp, plan in zip(comps, plans):
            if plan.kind == "const":
                local = {}
            elif plan.kind == "glauber":
                n_loc = len(plan.spin_map)
                sweeps = glauber_sweeps
                if sweeps is None:
                    sweeps = max(1, 64 * n_loc * math.ceil(beta) if beta else 64 * n_loc)
                xloc = _glauber_core(plan.Z, plan.signed_coeffs, beta, sweeps, shot_rng)
                local = {i: int(v) for i, v in enumerate(xloc)}
            else:
                local = _sample_exact(plan.engine, plan.junction, beta, shot_rng)
            e = plan.component_energy(local)
            comp_energies.append(e)
            for i, g in enumerate(plan.spin_map):
                x[g] = local[i]
        parity = (((1 - x.astype(np.float64)) / 2) @ dual2.Z.T.astype(np.float64)) % 2
        sc = np.where(dual2.s == 1, -dual2.coeffs, dual2.coeffs)
        energy = float((1 - 2 * parity) @ sc)
        assert abs(energy - sum(comp_energies)) < 1e-9 * max(1.0, abs(energy))
        out.shots.append(GibbsShot(x, energy, comp_energies))
    return out
