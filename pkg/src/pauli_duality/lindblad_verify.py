"""Numerical verification that unitary conjugation of a GKSL generator
preserves its fixed point (conjugated), spectrum and gap, entropy production,
and trace-distance decay curves.

Everything is dense and small-d: superoperators are built by column-stacking
vectorization (vec stacks columns, so vec(A X B) = (B^T kron A) vec(X)), and
spectra/semigroups come from plain eigendecompositions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPrimitive, NotUnitary, TooLarge

SUPEROP_DIM_LIMIT = 16
HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-10
LOG_EIGENVALUE_FLOOR = 1e-14
ZERO_EIGENVALUE_TOL = 1e-10


def _vec(x):
    return np.asarray(x, dtype=complex).reshape(-1, order="F")


def _unvec(v, d):
    return np.asarray(v, dtype=complex).reshape(d, d, order="F")


def _hermitize(a):
    return 0.5 * (a + a.conj().T)


def trace_distance(a, b):
    return 0.5 * float(np.abs(np.linalg.eigvalsh(_hermitize(a - b))).sum())


@dataclass
class GKSLGenerator:
    """L(rho) = -i[H, rho] + sum_k gamma_k (L_k rho L_k^dag
    - 1/2 {L_k^dag L_k, rho})."""

    hamiltonian: np.ndarray
    jumps: list  # (rate gamma_k > 0, operator L_k) pairs

    def __post_init__(self):
        self.hamiltonian = np.asarray(self.hamiltonian, dtype=complex)
        d = self.hamiltonian.shape[0]
        if self.hamiltonian.shape != (d, d):
            raise DimensionMismatch("Hamiltonian must be square")
        if np.abs(self.hamiltonian - self.hamiltonian.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("Hamiltonian must be Hermitian to 1e-12")
        checked = []
        for gamma, op in self.jumps:
            op = np.asarray(op, dtype=complex)
            if op.shape != (d, d):
                raise DimensionMismatch("jump operator shape mismatch")
            if not gamma > 0:
                raise ValueError("jump rates must be positive")
            checked.append((float(gamma), op))
        self.jumps = checked

    @property
    def d(self):
        return self.hamiltonian.shape[0]

    def apply(self, rho):
        h = self.hamiltonian
        out = -1j * (h @ rho - rho @ h)
        for gamma, op in self.jumps:
            ldl = op.conj().T @ op
            out += gamma * (op @ rho @ op.conj().T - 0.5 * (ldl @ rho + rho @ ldl))
        return out


def to_superoperator(g):
    """d^2 x d^2 matrix acting on column-stacked density operators."""
    d = g.d
    if d > SUPEROP_DIM_LIMIT:
        raise TooLarge(d, SUPEROP_DIM_LIMIT)
    eye = np.eye(d)
    h = g.hamiltonian
    s = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for gamma, op in g.jumps:
        ldl = op.conj().T @ op
        s += gamma * (
            np.kron(op.conj(), op)
            - 0.5 * (np.kron(eye, ldl) + np.kron(ldl.T, eye))
        )
    return s


def conjugate(g, u):
    """Generator of Ad_U . L . Ad_{U^dag}: H -> UHU^dag, L_k -> UL_kU^dag."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (g.d, g.d):
        raise DimensionMismatch("unitary shape mismatch")
    if np.abs(u.conj().T @ u - np.eye(g.d)).max() > UNITARITY_TOL:
        raise NotUnitary("conjugation needs a unitary to 1e-10")
    return GKSLGenerator(
        u @ g.hamiltonian @ u.conj().T,
        [(gamma, u @ op @ u.conj().T) for gamma, op in g.jumps],
    )


def fixed_point(g, superop=None):
    """Unique full-rank stationary state; NotPrimitive when 0 is a degenerate
    eigenvalue or the stationary state is rank-deficient."""
    s = to_superoperator(g) if superop is None else superop
    w, v = np.linalg.eig(s)
    zero = np.nonzero(np.abs(w) < ZERO_EIGENVALUE_TOL)[0]
    if len(zero) == 0:
        raise NotPrimitive("no stationary state within tolerance")
    if len(zero) > 1:
        raise NotPrimitive(f"0 is a degenerate eigenvalue (multiplicity {len(zero)})")
    rho = _hermitize(_unvec(v[:, zero[0]], g.d))
    rho = rho / np.trace(rho).real
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < 1e-12:
        raise NotPrimitive("stationary state is rank-deficient")
    return rho


def density_log(rho, floor=LOG_EIGENVALUE_FLOOR):
    """Matrix log via eigendecomposition with an eigenvalue floor."""
    w, v = np.linalg.eigh(_hermitize(rho))
    return (v * np.log(np.maximum(w, floor))[None, :]) @ v.conj().T


def entropy_production(g, rho, sigma):
    """-Tr[L(rho) (log rho - log sigma)] for stationary state sigma."""
    return float(
        -np.trace(g.apply(rho) @ (density_log(rho) - density_log(sigma))).real
    )


def spectral_gap(eigenvalues):
    """min |Re mu| over the nonzero spectrum."""
    nz = eigenvalues[np.abs(eigenvalues) > ZERO_EIGENVALUE_TOL]
    return float(np.abs(nz.real).min()) if len(nz) else 0.0


def _sorted_spectrum(s):
    w = np.linalg.eigvals(s)
    return w[np.lexsort((w.imag, w.real))]


def _spectrum_deviation(w1, w2):
    """Max pairing distance between two eigenvalue multisets (optimal
    matching, so numerically jittered orderings of near-degenerate complex
    pairs do not masquerade as spectral differences)."""
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(w1[:, None] - w2[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def random_density(rng, d, rank=None):
    a = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    rho = a @ a.conj().T + 1e-6 * np.eye(d)
    return rho / np.trace(rho).real


def random_unitary(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


def random_primitive_generator(rng, d, rate_range=(0.5, 1.5)):
    """Random Hermitian H plus jumps spanning a complete matrix basis with
    positive rates; primitivity is checked, not assumed."""
    for _ in range(20):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = _hermitize(a)
        jumps = []
        for i in range(d):
            for j in range(d):
                op = np.zeros((d, d), dtype=complex)
                op[i, j] = 1.0
                jumps.append((float(rng.uniform(*rate_range)), op))
        g = GKSLGenerator(h, jumps)
        try:
            fixed_point(g)
        except NotPrimitive:  # pragma: no cover - complete bases are primitive
            continue
        return g
    raise NotPrimitive("could not draw a primitive generator")  # pragma: no cover


def _propagator_factory(s):
    w, v = np.linalg.eig(s)
    vinv = np.linalg.inv(v)

    def propagate(t, vec_rho):
        return v @ (np.exp(w * t) * (vinv @ vec_rho))

    return propagate


DEFAULT_T_GRID = (0.1, 0.25, 0.5, 1.0, 2.0, 4.0)


def verify_theorem4(g, u, trials=10, rng=0, t_grid=DEFAULT_T_GRID, tol=1e-8):
    """Check the four conjugation-invariance claims at the given tolerance.

    Returns a report dict with per-check max deviations and pass flags:
    (i) the conjugated generator's fixed point equals U sigma U^dag; (ii) the
    sorted eigenvalue multisets (hence gaps) of both superoperators agree;
    (iii) entropy production matches on mirrored random full-rank states;
    (iv) trace-distance decay curves match on mirrored initial states over
    t_grid.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    s = to_superoperator(g)
    g2 = conjugate(g, u)
    s2 = to_superoperator(g2)
    sigma = fixed_point(g, superop=s)
    sigma2 = fixed_point(g2, superop=s2)
    u = np.asarray(u, dtype=complex)

    dev_fixed = trace_distance(sigma2, u @ sigma @ u.conj().T)

    w1, w2 = _sorted_spectrum(s), _sorted_spectrum(s2)
    dev_spec = _spectrum_deviation(w1, w2)
    gap1, gap2 = spectral_gap(w1), spectral_gap(w2)

    prop1, prop2 = _propagator_factory(s), _propagator_factory(s2)
    dev_ep = 0.0
    dev_curve = 0.0
    for _ in range(trials):
        rho = random_density(rng, g.d)
        mirrored = u @ rho @ u.conj().T
        dev_ep = max(
            dev_ep,
            abs(
                entropy_production(g, rho, sigma)
                - entropy_production(g2, mirrored, sigma2)
            ),
        )
        for t in t_grid:
            c1 = trace_distance(_unvec(prop1(t, _vec(rho)), g.d), sigma)
            c2 = trace_distance(_unvec(prop2(t, _vec(mirrored)), g.d), sigma2)
            dev_curve = max(dev_curve, abs(c1 - c2))

    checks = {
        "fixed_point": {"max_dev": dev_fixed, "pass": dev_fixed < tol},
        "spectrum": {
            "max_dev": dev_spec,
            "gap": gap1,
            "gap_conjugated": gap2,
            "pass": dev_spec < tol and abs(gap1 - gap2) < tol,
        },
        "entropy_production": {"max_dev": dev_ep, "pass": dev_ep < tol},
        "decay_curves": {"max_dev": dev_curve, "pass": dev_curve < tol},
    }
    return {
        "dim": g.d,
        "trials": trials,
        "tolerance": tol,
        "checks": checks,
        "passed": all(c["pass"] for c in checks.values()),
    }
