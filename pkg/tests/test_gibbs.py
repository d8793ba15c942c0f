import math

import numpy as np
import pytest

from pauli_duality.dense import dense_matrix, dense_unitary
from pauli_duality.errors import (
    BadTopology,
    NonFinite,
    TemperatureOutOfRange,
    UnsupportedClassification,
)
from pauli_duality.gibbs_sampler import (
    ClassicalChain,
    LassoChain,
    chain_distribution,
    classical_energies,
    enumerate_configs,
    lasso_distribution,
    prepare_gibbs,
    sample_chain,
    sample_glauber,
    sample_lasso,
)
from pauli_duality.models import generate
from pauli_duality.stabilizer import pauli_expectation, stabilizer_run
from pauli_duality.tableau import PauliTerm, SignedTableau, apply_circuit


def brute_probs(energy_fn, N, beta):
    configs = enumerate_configs(N)
    E = np.array([energy_fn(c) for c in configs])
    if math.isinf(beta):
        p = (E == E.min()).astype(float)
    else:
        w = np.exp(-beta * (E - E.min()))
        p = w
    return p / p.sum(), E


def random_chain(rng, N):
    return ClassicalChain(rng.uniform(-2, 2, N - 1), rng.uniform(-2, 2, N))


def random_lasso(rng, N):
    chain = random_chain(rng, N)
    t = int(rng.integers(0, N - 2))
    return LassoChain(chain, t, float(rng.uniform(-2, 2)))


class TestChain:
    def test_single_spin_marginal(self):
        h, beta = 0.7, 1.3
        p = chain_distribution(ClassicalChain([], [h]), beta)
        z = math.exp(-beta * h) + math.exp(beta * h)
        assert abs(p[0] - math.exp(-beta * h) / z) < 1e-14
        assert abs(p[1] - math.exp(beta * h) / z) < 1e-14

    def test_beta_zero_uniform(self, rng):
        chain = random_chain(rng, 5)
        p = chain_distribution(chain, 0.0)
        assert np.abs(p - 1 / 32).max() < 1e-14

    @pytest.mark.parametrize("trial", range(10))
    def test_tv_vs_brute_force(self, rng, trial):
        N = int(rng.integers(2, 13))
        beta = float(rng.uniform(0, 3))
        chain = random_chain(rng, N)
        p = chain_distribution(chain, beta)
        q, _ = brute_probs(chain.energy, N, beta)
        assert 0.5 * np.abs(p - q).sum() < 1e-12

    def test_ground_state_ferromagnetic(self, rng):
        # J < 0 favors aligned neighbors; the +1 tie-break picks all-up
        chain = ClassicalChain([-1.0] * 5, [0.0] * 6)
        s = sample_chain(chain, math.inf, rng)
        assert (s.configuration == 1).all()
        assert s.energy == -5.0
        # a field makes the ground state unique; distribution is one-hot on it
        chain = ClassicalChain([-1.0] * 4, [-0.5] + [0.0] * 4)
        p = chain_distribution(chain, math.inf)
        q, E = brute_probs(chain.energy, 5, math.inf)
        assert p[int(np.argmin(E))] == 1.0 and p.sum() == 1.0

    @pytest.mark.parametrize("trial", range(5))
    def test_ground_state_random(self, rng, trial):
        N = int(rng.integers(2, 10))
        chain = random_chain(rng, N)
        s = sample_chain(chain, math.inf, rng)
        _, E = brute_probs(chain.energy, N, math.inf)
        assert abs(s.energy - E.min()) < 1e-12

    def test_two_point_three_sigma(self):
        rng = np.random.default_rng(7)
        chain = ClassicalChain([1.0, 1.0], [0.0, 0.0, 0.0])
        beta, shots = 1.0, 20000
        samples = sample_chain(chain, beta, rng, shots=shots)
        emp = np.mean([s.configuration[0] * s.configuration[1] for s in samples])
        q, _ = brute_probs(chain.energy, 3, beta)
        cfgs = enumerate_configs(3)
        exact = float(q @ (cfgs[:, 0] * cfgs[:, 1]))
        sigma = math.sqrt((1 - exact**2) / shots)
        assert abs(emp - exact) < 3 * sigma

    def test_energy_recomputable(self, rng):
        chain = random_chain(rng, 6)
        s = sample_chain(chain, 0.8, rng)
        assert abs(s.energy - chain.energy(s.configuration)) < 1e-12

    def test_bad_beta(self, rng):
        chain = random_chain(rng, 4)
        with pytest.raises(NonFinite):
            sample_chain(chain, math.nan, rng)
        with pytest.raises(NonFinite):
            sample_chain(chain, -math.inf, rng)
        with pytest.raises(TemperatureOutOfRange):
            sample_chain(chain, -0.5, rng)

    def test_nonfinite_couplings(self):
        with pytest.raises(NonFinite):
            ClassicalChain([math.inf], [0.0, 0.0])

    def test_seeded_reproducibility(self, rng):
        chain = random_chain(rng, 8)
        a = sample_chain(chain, 0.9, np.random.default_rng(5), shots=20)
        b = sample_chain(chain, 0.9, np.random.default_rng(5), shots=20)
        assert all(
            np.array_equal(x.configuration, y.configuration) for x, y in zip(a, b)
        )


class TestLasso:
    def test_zero_junction_equals_chain(self, rng):
        chain = random_chain(rng, 7)
        lasso = LassoChain(chain, 2, 0.0)
        p = lasso_distribution(lasso, 0.8)
        q = chain_distribution(chain, 0.8)
        assert 0.5 * np.abs(p - q).sum() < 1e-12

    def test_seven_spin_marginals(self):
        chain = ClassicalChain([1.0] * 6, [1.0] * 7)
        lasso = LassoChain(chain, 2, 1.0)
        p = lasso_distribution(lasso, 0.7)
        q, _ = brute_probs(lasso.energy, 7, 0.7)
        cfgs = enumerate_configs(7).astype(float)
        assert np.abs(p @ cfgs - q @ cfgs).max() < 1e-12

    @pytest.mark.parametrize("trial", range(10))
    def test_tv_vs_brute_force(self, rng, trial):
        N = int(rng.integers(4, 12))
        beta = float(rng.uniform(0, 3))
        lasso = random_lasso(rng, N)
        p = lasso_distribution(lasso, beta)
        q, _ = brute_probs(lasso.energy, N, beta)
        assert 0.5 * np.abs(p - q).sum() < 1e-12

    def test_beta_zero_uniform(self, rng):
        lasso = random_lasso(rng, 6)
        p = lasso_distribution(lasso, 0.0)
        assert np.abs(p - 1 / 64).max() < 1e-14

    def test_ground_state(self, rng):
        for _ in range(5):
            lasso = random_lasso(rng, 8)
            s = sample_lasso(lasso, math.inf, rng)
            _, E = brute_probs(lasso.energy, 8, math.inf)
            assert abs(s.energy - E.min()) < 1e-12

    def test_bad_topology(self):
        chain = ClassicalChain([1.0, 1.0], [0.0] * 3)
        with pytest.raises(BadTopology):
            LassoChain(chain, 1, 1.0)  # junction must be interior
        with pytest.raises(BadTopology):
            LassoChain(ClassicalChain([], [0.0]), 0, 1.0)
        with pytest.raises(NonFinite):
            LassoChain(ClassicalChain([1.0] * 3, [0.0] * 4), 0, math.nan)


def _classical(paulis_coeffs, n):
    terms = [PauliTerm.from_string(p, c) for p, c in paulis_coeffs]
    return SignedTableau.from_terms(terms)


class TestGlauber:
    def test_beta_zero_uniform(self):
        rng = np.random.default_rng(3)
        t = _classical([("ZZI", 1.0), ("IZZ", -0.5)], 3)
        shots = 3000
        means = np.zeros(3)
        for _ in range(shots):
            s = sample_glauber(t, 0.0, sweeps=1, rng=rng)
            means += s.configuration
        means /= shots
        assert np.abs(means).max() < 3 / math.sqrt(shots)

    def test_single_spin_exact_after_one_sweep(self):
        rng = np.random.default_rng(4)
        h, beta, shots = 0.8, 1.1, 4000
        t = _classical([("Z", h)], 1)
        up = sum(
            sample_glauber(t, beta, sweeps=1, rng=rng).configuration[0] == 1
            for _ in range(shots)
        )
        z = math.exp(-beta * h) + math.exp(beta * h)
        p = math.exp(-beta * h) / z
        assert abs(up / shots - p) < 3 * math.sqrt(p * (1 - p) / shots)

    def test_two_spin_correlation(self):
        rng = np.random.default_rng(5)
        beta, shots = 0.3, 3000
        t = _classical([("ZZ", 1.0)], 2)
        emp = np.mean(
            [
                np.prod(sample_glauber(t, beta, sweeps=100, rng=rng).configuration)
                for _ in range(shots)
            ]
        )
        exact = -math.tanh(beta)
        assert abs(emp - exact) < 3 * math.sqrt((1 - exact**2) / shots)

    def test_threshold_warning_and_flag(self):
        rng = np.random.default_rng(6)
        t = _classical([("ZZ", 1.0)], 2)
        with pytest.warns(UserWarning):
            s = sample_glauber(t, 2.0, sweeps=1, rng=rng, beta_threshold=1.0)
        assert s.approximate


def _trace_distance(a, b):
    return 0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum()


def _mixture(prep, beta):
    """Sum_x p_beta(x) Cdag|x><x|C as a dense matrix."""
    n = prep.dual.n
    E = classical_energies(prep.dual)
    if math.isinf(beta):
        p = (E == E.min()).astype(float)
    else:
        p = np.exp(-beta * (E - E.min()))
    p /= p.sum()
    # enumerate_configs row b has spin i down iff bit i of b is set; dense
    # basis index uses qubit 0 as the most significant bit
    shift = n - 1 - np.arange(n)
    diag = np.zeros(1 << n)
    for b in range(1 << n):
        bits = (b >> np.arange(n)) & 1
        diag[int((bits << shift).sum())] = p[b]
    U = dense_unitary(prep.inverse_circuit)
    return (U * diag[None, :]) @ U.conj().T


class TestPrepareGibbs:
    def test_exact_mixture_toric2d(self):
        model = generate("toric2d", 2)
        H = dense_matrix(model.tableau())
        evals, V = np.linalg.eigh(H)
        beta = 0.5
        w = np.exp(-beta * (evals - evals.min()))
        sigma = (V * (w / w.sum())[None, :]) @ V.conj().T
        prep = prepare_gibbs(model, beta, 0, 1)
        assert _trace_distance(_mixture(prep, beta), sigma) < 1e-10

    def test_beta_zero_maximally_mixed(self):
        model = generate("toric2d", 2)
        prep = prepare_gibbs(model, 0.0, 0, 1)
        rho = _mixture(prep, 0.0)
        assert np.abs(rho - np.eye(256) / 256).max() < 1e-12

    @pytest.mark.parametrize("name,L", [("toric2d", 2), ("xcube", 2)])
    def test_energy_invariant(self, name, L):
        model = generate(name, L)
        t = model.tableau()
        prep = prepare_gibbs(model, 0.7, 3, 11)
        rows = t.rows
        for shot in prep.shots:
            state = stabilizer_run(prep.inverse_circuit, shot.bitstring)
            e = 0.0
            for term in rows:
                # v is the expectation of the signed operator (-1)^s P, so the
                # energy contribution of the term coeff*(-1)^s P is coeff*v
                v = pauli_expectation(state, term)
                assert v in (-1, 1)
                e += term.coeff * v
            assert abs(e - shot.energy) < 1e-9

    def test_ground_sector_toric2d(self):
        model = generate("toric2d", 2)
        t = model.tableau()
        prep = prepare_gibbs(model, math.inf, 1, 1, free_spins=[1, 1])
        state = stabilizer_run(prep.inverse_circuit, prep.shots[0].bitstring)
        # every bare Pauli P has expectation +1 (the Hamiltonian stores -P)
        for term in t.rows:
            bare = PauliTerm(term.x_bits, term.z_bits, sign=0)
            assert pauli_expectation(state, bare) == 1

    def test_free_spin_pinning(self):
        model = generate("toric2d", 3)
        prep = prepare_gibbs(model, 0.4, 5, 2, free_spins=[1, -1])
        a, b = prep.free_spins
        for shot in prep.shots:
            assert shot.configuration[a] == 1 and shot.configuration[b] == -1

    def test_free_spins_random_by_default(self):
        model = generate("toric2d", 2)
        prep = prepare_gibbs(model, 0.4, 64, 3)
        a, b = prep.free_spins
        vals = {(int(s.configuration[a]), int(s.configuration[b])) for s in prep.shots}
        assert len(vals) == 4  # all four sectors show up in 64 shots

    def test_glauber_gate(self):
        model = generate("toric3d", 2)
        with pytest.raises(TemperatureOutOfRange):
            prepare_gibbs(model, 2.0, 1, 1)
        prep = prepare_gibbs(model, 0.3, 2, 1, glauber_sweeps=8)
        assert prep.approximate
        assert len(prep.shots) == 2

    @pytest.mark.parametrize("name,L", [("color_honeycomb", 2), ("haah", 3), ("xcube", 2)])
    def test_exact_models_not_approximate(self, name, L):
        prep = prepare_gibbs(generate(name, L), 0.6, 2, 5)
        assert not prep.approximate

    def test_ground_energy_constant_across_shots(self):
        prep = prepare_gibbs(
            generate("color_honeycomb", 2), math.inf, 4, 9, free_spins=[1, 1, 1, 1]
        )
        energies = prep.energies()
        assert np.abs(energies - energies[0]).max() == 0.0

    def test_seeded_reproducibility(self):
        model = generate("toric2d", 3)
        a = prepare_gibbs(model, 0.8, 6, 42)
        b = prepare_gibbs(model, 0.8, 6, 42)
        assert a.bitstrings() == b.bitstrings()
        assert np.array_equal(a.energies(), b.energies())

    def test_generator_rng_accepted(self):
        prep = prepare_gibbs(generate("toric2d", 2), 0.5, 2, np.random.default_rng(0))
        assert len(prep.shots) == 2

    def test_circuit_is_inverse_pair(self):
        model = generate("toric2d", 2)
        prep = prepare_gibbs(model, 0.5, 0, 1)
        round_trip = apply_circuit(
            apply_circuit(model.tableau(), prep.circuit), prep.inverse_circuit
        )
        assert round_trip == model.tableau()

    def test_ising_chain_open(self):
        prep = prepare_gibbs(generate("ising_chain_open", 6), 0.9, 3, 4)
        assert not prep.approximate
        assert len(prep.free_spins) == 1
