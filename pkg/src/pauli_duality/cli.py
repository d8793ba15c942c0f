"""Command-line surface: generation, dualization, classification, sampling,
Lindbladian checks, the structure regression harness, and dense oracles.

Reports are line-delimited JSON records (a header embedding the tool version
and seed, one record per entry, and a summary) plus a human-readable summary
on stdout. All commands are deterministic given their inputs and seed.
"""

import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from . import __version__
from .circuit import CliffordCircuit
from .dense import dense_matrix
from .diagonalizer import diagonalize, full_pipeline, pseudo_gaussian
from .errors import MismatchReport, NonCommutingTerms, TooLarge
from .gibbs_sampler import classical_energies, prepare_gibbs
from .models import MODEL_NAMES, generate, load_couplings
from .structure import (
    BOUNDED_DEGREE,
    ISING_CHAIN,
    LASSO_CHAIN,
    NEAREST_NEIGHBOR_1D,
    NON_INTERACTING,
    THREE_SPIN_CHAIN,
    UNKNOWN,
    build_report,
)
from .tableau import apply_circuit, dump_hamiltonian, load_hamiltonian

ORACLE_QUBIT_LIMIT = 14


def _pool_size(n_tasks):
    cap = os.environ.get("PAULI_DUALITY_THREADS")
    cap = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(cap, n_tasks))


def _write_records(path, records):
    if path:
        with open(path, "w") as f:
            for rec in records:
                f.write(json.dumps(rec) + "\n")


def _header(seed=None, **extra):
    rec = {"record": "header", "tool": "pauli-duality", "version": __version__,
           "schema": 1}
    if seed is not None:
        rec["seed"] = seed
    rec.update(extra)
    return rec


@click.group()
def main():
    """Clifford compiler and Gibbs sampler for commuting-Pauli Hamiltonians."""


@main.command()
@click.argument("model", type=click.Choice(sorted(MODEL_NAMES)))
@click.argument("size", type=int)
@click.option("-o", "--output", type=click.Path(), required=True)
@click.option("--couplings", type=click.Path(exists=True), default=None)
def gen(model, size, output, couplings):
    """Generate a lattice model instance and write it as PAULI-HAM."""
    cpl = load_couplings(couplings) if couplings else None
    m = generate(model, size, couplings=cpl)
    dump_hamiltonian(m.tableau(), output)
    click.echo(f"{model} L={size}: n={m.n} spins, m={m.m} terms -> {output}")


@main.command()
@click.option("-i", "--input", "input_path", type=click.Path(exists=True), required=True)
@click.option("-o", "--circuit", "circuit_path", type=click.Path(), required=True)
@click.option("-o2", "--dual", "dual_path", type=click.Path(), required=True)
@click.option("--skip-gauss", is_flag=True, help="stop after diagonalization")
def dualize(input_path, circuit_path, dual_path, skip_gauss):
    """Synthesize the duality circuit and write the classical dual."""
    try:
        t = load_hamiltonian(input_path)
    except NonCommutingTerms as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    if skip_gauss:
        circuit, dual = diagonalize(t, validate=False)
    else:
        circuit, dual = full_pipeline(t, validate=False)
    circuit.dump(circuit_path)
    dump_hamiltonian(dual, dual_path)
    counts = circuit.gate_counts()
    click.echo(
        f"dualized {t.m} terms on {t.n} qubits: "
        + " ".join(f"{k}={v}" for k, v in counts.items() if v)
    )


@main.command()
@click.option("-i", "--input", "input_path", type=click.Path(exists=True), required=True)
@click.option("--report", "report_path", type=click.Path(), default=None)
def classify(input_path, report_path):
    """Classify the components of a classical (dual) Hamiltonian."""
    t = load_hamiltonian(input_path, validate=False)
    rep = build_report(CliffordCircuit(t.n), t)
    if report_path:
        with open(report_path, "w") as f:
            json.dump({"header": _header(), "report": rep.to_dict()}, f, indent=2)
    click.echo(f"free spins: {rep.free_spins}")
    for kind, count in sorted(rep.kind_counts().items()):
        click.echo(f"  {kind}: {count}")
    if UNKNOWN in rep.kind_counts():
        sys.exit(1)


@main.command("toric-explicit")
@click.option("--L", "size", type=int, required=True)
@click.option("-o", "--output", type=click.Path(), required=True)
@click.option("--validate", is_flag=True, help="cross-check against the generic pipeline")
def toric_explicit_cmd(size, output, validate):
    """Emit the closed-form toric-code duality circuit."""
    from .toric_explicit import build_circuit, cross_validate

    c = build_circuit(size)
    c.dump(output)
    counts = c.gate_counts()
    click.echo(f"L={size}: CX={counts['CX']} H={counts['H']} -> {output}")
    if validate:
        try:
            rep = cross_validate(size)
        except MismatchReport as e:
            click.echo(f"cross-validation FAILED: {e}", err=True)
            sys.exit(1)
        click.echo(f"cross-validation ok: {rep['kinds']}")


@main.command()
@click.option("--model", type=click.Choice(sorted(MODEL_NAMES)), required=True)
@click.option("--L", "size", type=int, required=True)
@click.option("--beta", type=str, required=True, help="inverse temperature, or 'inf'")
@click.option("--shots", type=int, default=16)
@click.option("--seed", type=int, default=0)
@click.option("-o", "--output", type=click.Path(), required=True)
@click.option("--circuit", "circuit_path", type=click.Path(), default=None,
              help="write the preparation circuit (the inverse witness)")
@click.option("--free-spins", default="random", help="'random' or a +/- string")
def sample(model, size, beta, shots, seed, output, circuit_path, free_spins):
    """Sample the classical dual Gibbs distribution; emit prep instructions."""
    beta_val = math.inf if beta in ("inf", "INF", "Inf") else float(beta)
    m = generate(model, size)
    prep = prepare_gibbs(m, beta_val, shots, seed, free_spins=free_spins)
    with open(output, "w") as f:
        for shot in prep.shots:
            f.write(json.dumps({
                "config": shot.pm_string,
                "energy": shot.energy,
                "component_energies": shot.component_energies,
            }) + "\n")
    if circuit_path:
        prep.inverse_circuit.dump(circuit_path)
    tag = "approximate" if prep.approximate else "exact"
    click.echo(
        f"{model} L={size} beta={beta} seed={seed} version={__version__}: "
        f"{shots} {tag} shots -> {output}"
    )


@main.command("lindblad-verify")
@click.option("--dim", type=int, default=4)
@click.option("--trials", type=int, default=10)
@click.option("--seed", type=int, default=0)
@click.option("-o", "--output", type=click.Path(), default=None)
def lindblad_verify_cmd(dim, trials, seed, output):
    """Conjugation-invariance checks on random primitive GKSL generators."""
    from .lindblad_verify import (
        random_primitive_generator,
        random_unitary,
        verify_theorem4,
    )

    rng = np.random.default_rng(seed)
    records = [_header(seed=seed, dim=dim, trials=trials)]
    worst = {}
    failed = 0
    for i in range(trials):
        g = random_primitive_generator(rng, dim)
        u = random_unitary(rng, dim)
        rep = verify_theorem4(g, u, trials=5, rng=rng)
        records.append({"record": "instance", "index": i, **rep})
        for name, chk in rep["checks"].items():
            worst[name] = max(worst.get(name, 0.0), chk["max_dev"])
        failed += 0 if rep["passed"] else 1
    records.append({"record": "summary", "failed": failed, "max_devs": worst})
    _write_records(output, records)
    for name, dev in sorted(worst.items()):
        click.echo(f"  {name}: max deviation {dev:.3e}")
    click.echo(f"{trials - failed}/{trials} instances passed (d={dim}, seed={seed})")
    if failed:
        sys.exit(1)


# ---- regression harness ----


def _chain_kind(length):
    return THREE_SPIN_CHAIN if length == 3 else ISING_CHAIN


def _expected(name, L):
    """(expected kind-count dict or None for predicate-only, free spins)."""
    if name == "toric2d":
        return {_chain_kind(L * L - 1): 2}, 2
    if name == "toric3d":
        return {ISING_CHAIN: 1, BOUNDED_DEGREE: 1}, 3
    if name == "color_honeycomb":
        if L % 3 == 2:
            return {LASSO_CHAIN: 2}, 4
        return None, 0  # every component 1-body
    if name == "haah":
        return {_chain_kind(L**3 - 1): 2}, 2
    if name == "xcube":
        return {_chain_kind(L * L - 1): L, NEAREST_NEIGHBOR_1D: L - 1}, 4 * L * L + 2 * L - 1
    if name == "rotated_surface":
        return None, 1  # every component 1-body
    if name == "subsystem_stabilizer":
        return {_chain_kind((L**3 - 2) // 2): 2}, 2 * (L**3 + 1)
    if name == "subsystem_checks":
        return {THREE_SPIN_CHAIN: L**3}, 0
    raise ValueError(name)


def run_entry(name, L):
    """Generate, dualize, classify one suite entry; returns a record dict."""
    start = time.perf_counter()
    model = generate(name, L)
    t = model.tableau()
    c1, mid = diagonalize(t, validate=False)
    c2, dual = pseudo_gaussian(mid)
    circuit = CliffordCircuit(t.n, c1.gate_array).extend(c2)
    rep = build_report(circuit, dual, pre=mid,
                       term_species=[sp for sp, _ in model.term_labels])
    kinds = rep.kind_counts()
    mismatches = []
    want_kinds, want_free = _expected(name, L)
    if want_kinds is None:
        if set(kinds) != {NON_INTERACTING}:
            mismatches.append(f"expected only 1-body components, got {kinds}")
    elif kinds != want_kinds:
        mismatches.append(f"expected {want_kinds}, got {kinds}")
    if rep.free_spins != want_free:
        mismatches.append(f"expected {want_free} free spins, got {rep.free_spins}")
    if UNKNOWN in kinds:
        mismatches.append("Unknown component present")
    if name == "toric2d":
        for cid in range(len(rep.components)):
            owners = [sp for sp, ids in rep.species_map.items() if cid in ids]
            if len(owners) != 1:
                mismatches.append(f"component {cid} mixes species {owners}")
    return {
        "record": "entry",
        "model": name,
        "L": L,
        "n": t.n,
        "m": t.m,
        "status": "fail" if mismatches else "pass",
        "mismatches": mismatches,
        "kinds": kinds,
        "free_spins": rep.free_spins,
        "gates": rep.gate_counts["total"],
        "seconds": round(time.perf_counter() - start, 3),
    }


def default_suite(paper_scale=False):
    suite = []
    suite += [("toric2d", L) for L in range(2, 21)]
    suite += [("toric3d", L) for L in range(2, 7)]
    suite += [("color_honeycomb", L) for L in range(2, 11)]
    suite += [("haah", L) for L in (3, 5, 7, 9)]
    suite += [("xcube", L) for L in range(2, 7)]
    suite += [("rotated_surface", L) for L in range(2, 13)]
    suite += [("subsystem_stabilizer", L) for L in (2, 4, 6)]
    suite += [("subsystem_checks", L) for L in (2, 4, 6)]
    if paper_scale:
        suite += [("toric2d", 90), ("toric3d", 20)]
    return suite


def _run_entry_tuple(args):
    try:
        return run_entry(*args)
    except Exception as e:  # pragma: no cover - defensive
        return {"record": "entry", "model": args[0], "L": args[1],
                "status": "fail", "mismatches": [f"error: {e}"], "seconds": 0.0}


@main.command()
@click.option("--suite", "suite_path", type=click.Path(exists=True), default=None,
              help="JSON list of [model, L] pairs overriding the default suite")
@click.option("--paper-scale", is_flag=True)
@click.option("-o", "--output", type=click.Path(), default=None)
def regress(suite_path, paper_scale, output):
    """Run the structure regression suite against the expected fingerprints."""
    if suite_path:
        with open(suite_path) as f:
            suite = [(name, int(L)) for name, L in json.load(f)]
    else:
        suite = default_suite(paper_scale)
    records = [_header(suite_size=len(suite))]
    workers = _pool_size(len(suite))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_entry_tuple, suite))
    else:
        results = [_run_entry_tuple(e) for e in suite]
    failed = [r for r in results if r["status"] != "pass"]
    records += results
    records.append({"record": "summary", "entries": len(results),
                    "failed": len(failed)})
    _write_records(output, records)
    for r in results:
        kinds = " ".join(f"{k}x{v}" for k, v in sorted(r.get("kinds", {}).items()))
        line = (f"{r['status']:4s} {r['model']:>22s} L={r['L']:<3d} "
                f"free={r.get('free_spins', '?'):<5} {r['seconds']:7.2f}s  {kinds}")
        click.echo(line)
        for msg in r["mismatches"]:
            click.echo(f"       - {msg}")
    click.echo(f"{len(results) - len(failed)}/{len(results)} entries passed")
    if failed:
        sys.exit(1)


@main.command()
@click.option("--model", type=click.Choice(sorted(MODEL_NAMES)), required=True)
@click.option("--L", "size", type=int, required=True)
@click.option("-o", "--output", type=click.Path(), default=None)
def oracle(model, size, output):
    """Dense verification: isospectrality, mixture check, mutation test."""
    m = generate(model, size)
    t = m.tableau()
    if t.n > ORACLE_QUBIT_LIMIT:
        raise click.ClickException(str(TooLarge(t.n, ORACLE_QUBIT_LIMIT)))
    circuit, dual = full_pipeline(t, validate=False)
    evals = np.sort(np.linalg.eigvalsh(dense_matrix(t)))
    dual_evals = np.sort(classical_energies(dual))
    iso_dev = float(np.abs(evals - dual_evals).max())
    checks = {"isospectral": {"max_dev": iso_dev, "pass": iso_dev < 1e-10}}

    if model == "toric2d" and size == 2:
        checks["exact_mixture"] = _mixture_check(m, beta=0.5)

    # mutation self-test: deleting a gate must change the conjugated tableau
    if len(circuit):
        tampered = CliffordCircuit(
            t.n, np.delete(circuit.gate_array, len(circuit) // 2, axis=0)
        )
        mutated = apply_circuit(t, tampered)
        checks["mutation_detected"] = {"pass": not (mutated == dual)}

    passed = all(c["pass"] for c in checks.values())
    _write_records(output, [_header(model=model, L=size),
                            {"record": "oracle", "checks": checks, "passed": passed}])
    for name, c in checks.items():
        dev = f" (max dev {c['max_dev']:.3e})" if "max_dev" in c else ""
        click.echo(f"  {name}: {'pass' if c['pass'] else 'FAIL'}{dev}")
    if not passed:
        sys.exit(1)


def _mixture_check(model, beta):
    from .dense import dense_unitary

    t = model.tableau()
    n = t.n
    prep = prepare_gibbs(model, beta, 0, 1)
    evals, v = np.linalg.eigh(dense_matrix(t))
    w = np.exp(-beta * (evals - evals.min()))
    sigma = (v * (w / w.sum())[None, :]) @ v.conj().T
    e_cl = classical_energies(prep.dual)
    p = np.exp(-beta * (e_cl - e_cl.min()))
    p /= p.sum()
    shift = n - 1 - np.arange(n)
    diag = np.zeros(1 << n)
    for b in range(1 << n):
        bits = (b >> np.arange(n)) & 1
        diag[int((bits << shift).sum())] = p[b]
    u = dense_unitary(prep.inverse_circuit)
    rho = (u * diag[None, :]) @ u.conj().T
    dev = 0.5 * float(np.abs(np.linalg.eigvalsh(rho - sigma)).sum())
    return {"max_dev": dev, "pass": dev < 1e-10}


if __name__ == "__main__":
    main()
