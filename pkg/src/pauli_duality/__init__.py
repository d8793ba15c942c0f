"""Compiler-and-sampler toolkit for commuting-Pauli Hamiltonians."""

from .circuit import CliffordCircuit
from .tableau import (
    PauliTerm,
    SignedTableau,
    apply_circuit,
    apply_gate,
    dump_hamiltonian,
    kernel_backend,
    load_hamiltonian,
    loads_hamiltonian,
    tableau_from_terms,
)

__version__ = "0.1.0"

__all__ = [
    "CliffordCircuit",
    "PauliTerm",
    "SignedTableau",
    "apply_circuit",
    "apply_gate",
    "dump_hamiltonian",
    "kernel_backend",
    "load_hamiltonian",
    "loads_hamiltonian",
    "tableau_from_terms",
    "__version__",
]
