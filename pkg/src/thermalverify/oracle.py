"""Dense brute-force ground truth at small qubit counts.

Pure states are built by applying the CZ/CCZ sign pattern to the uniform
superposition; thermal states are assembled two independent ways (explicit
phase-flip mixture, and the Gibbs exponential of the generator Hamiltonian)
so the equivalence between the two pictures is something this package
verifies rather than assumes.

Operators apply to statevectors as index-permutation + sign maps, never as
dense matrices, which keeps checks feasible up to n = 24. Dense matrices
appear only in the Hamiltonian route (n <= 10) and density operators
(n <= 12; note n = 12 allocates ~0.5 GB).

Computational-basis index convention: bit i-1 of the index is the state of
site i (site 1 is the least significant bit).
"""
from __future__ import annotations

import math

import numpy as np

from .pauli import PauliString, StabilizerProduct, hypergraph_stabilizer
from .thermal import flip_probability

MAX_STATEVECTOR_N = 24
MAX_DENSITY_N = 12
MAX_HAMILTONIAN_N = 10


def _indices(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.uint32)


def _parity(values: np.ndarray, mask: int) -> np.ndarray:
    return (np.bitwise_count(values & np.uint32(mask)) & 1).astype(np.int8)


def _phase_poly_parity(op: StabilizerProduct, idx: np.ndarray) -> np.ndarray:
    """Evaluate (-1)-exponent f over all basis indices; returns 0/1 array."""
    acc = np.bitwise_count(idx & np.uint32(op.linear)).astype(np.uint32)
    for (a, b) in op.quadratic:
        acc += (idx >> np.uint32(a - 1)) & (idx >> np.uint32(b - 1)) & np.uint32(1)
    return (acc & 1).astype(np.int8)


class DenseState:
    """A normalized statevector on n qubits."""

    def __init__(self, amplitudes, n: int):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << n,):
            raise ValueError(f"expected 2^{n} amplitudes, got shape {amplitudes.shape}")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        self.amplitudes = amplitudes
        self.n = n


class DenseMixedState:
    """A density operator on n qubits (Hermitian, unit trace, PSD).

    Positivity is eigenvalue-checked only up to dimension 1024; beyond that
    the check is skipped at construction for cost reasons.
    """

    def __init__(self, matrix, n: int):
        matrix = np.asarray(matrix, dtype=np.complex128)
        dim = 1 << n
        if matrix.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got shape {matrix.shape}")
        herm = np.max(np.abs(matrix - matrix.conj().T))
        if herm > 1e-10:
            raise ValueError(f"matrix is not Hermitian: max deviation {herm:.3e}")
        tr = matrix.trace()
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"matrix does not have unit trace: {tr}")
        if dim <= 1024:
            lowest = np.linalg.eigvalsh(matrix)[0]
            if lowest < -1e-10:
                raise ValueError(f"matrix is not PSD: lowest eigenvalue {lowest:.3e}")
        self.matrix = matrix
        self.n = n


def build_pure_state(spec) -> DenseState:
    """Statevector of the (hyper)graph state: uniform superposition with a
    sign flip wherever an edge's (or hyperedge's) bits are all 1."""
    h = spec.as_hypergraph()
    if h.n > MAX_STATEVECTOR_N:
        raise ValueError(f"statevector limited to n <= {MAX_STATEVECTOR_N}, got {h.n}")
    idx = _indices(h.n)
    amps = np.full(1 << h.n, 2.0 ** (-h.n / 2.0), dtype=np.complex128)
    for (i, j) in sorted(h.e2):
        both = (idx >> np.uint32(i - 1)) & (idx >> np.uint32(j - 1)) & np.uint32(1)
        amps[both == 1] *= -1.0
    for (i, j, k) in sorted(h.e3):
        trip = ((idx >> np.uint32(i - 1)) & (idx >> np.uint32(j - 1))
                & (idx >> np.uint32(k - 1)) & np.uint32(1))
        amps[trip == 1] *= -1.0
    return DenseState(amps, h.n)


def apply_operator(op, amplitudes: np.ndarray) -> np.ndarray:
    """Apply a PauliString or StabilizerProduct to a statevector array."""
    n = op.n
    if n > MAX_STATEVECTOR_N:
        raise ValueError(f"statevector maps limited to n <= {MAX_STATEVECTOR_N}, got {n}")
    if amplitudes.shape != (1 << n,):
        raise ValueError(f"operator on {n} sites cannot act on shape {amplitudes.shape}")
    idx = _indices(n)
    if isinstance(op, PauliString):
        prefactor = op.sign * (1j) ** ((op.x_mask & op.z_mask).bit_count())
        coeff = np.where(_parity(idx, op.z_mask) == 1, -1.0, 1.0)
        vals = prefactor * coeff * amplitudes
    elif isinstance(op, StabilizerProduct):
        coeff = np.where(_phase_poly_parity(op, idx) == 1, -1.0, 1.0)
        vals = op.sign * coeff * amplitudes
    else:
        raise TypeError(f"cannot apply operator of type {type(op).__name__}")
    return vals[idx ^ np.uint32(op.x_mask)]


def dense_matrix(op) -> np.ndarray:
    """Materialize a PauliString or StabilizerProduct as a 2^n x 2^n array."""
    n = op.n
    if n > MAX_HAMILTONIAN_N:
        raise ValueError(f"dense matrices limited to n <= {MAX_HAMILTONIAN_N}, got {n}")
    idx = _indices(n)
    out = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    if isinstance(op, PauliString):
        prefactor = op.sign * (1j) ** ((op.x_mask & op.z_mask).bit_count())
        coeff = prefactor * np.where(_parity(idx, op.z_mask) == 1, -1.0, 1.0)
    elif isinstance(op, StabilizerProduct):
        coeff = op.sign * np.where(_phase_poly_parity(op, idx) == 1, -1.0, 1.0)
    else:
        raise TypeError(f"cannot materialize operator of type {type(op).__name__}")
    out[idx ^ np.uint32(op.x_mask), idx] = coeff
    return out


def thermal_density(spec, beta: float) -> DenseMixedState:
    """Thermal state as the explicit phase-flip mixture: sum over all error
    masks of Pr(mask) * Z_mask |psi><psi| Z_mask."""
    h = spec.as_hypergraph()
    if h.n > MAX_DENSITY_N:
        raise ValueError(f"density mixture limited to n <= {MAX_DENSITY_N}, got {h.n}")
    psi = build_pure_state(h).amplitudes
    p = flip_probability(beta)
    dim = 1 << h.n
    if p == 0.0:
        return DenseMixedState(np.outer(psi, psi.conj()), h.n)
    idx = _indices(h.n)
    weights = np.empty(dim)
    flipped = np.empty((dim, dim), dtype=np.complex128)
    for mask in range(dim):
        m = int(np.bitwise_count(np.uint32(mask)))
        weights[mask] = p**m * (1.0 - p) ** (h.n - m)
        signs = np.where(_parity(idx, mask) == 1, -1.0, 1.0)
        flipped[mask] = signs * psi
    v = np.sqrt(weights)[:, None] * flipped
    rho = v.T @ v.conj()  # sum over masks of w * |flipped><flipped|
    return DenseMixedState(rho, h.n)


def boltzmann_density(spec, beta: float) -> DenseMixedState:
    """Thermal state as exp(-beta * H)/Z with H = -(sum of generators),
    via eigendecomposition of the dense Hamiltonian."""
    h = spec.as_hypergraph()
    if h.n > MAX_HAMILTONIAN_N:
        raise ValueError(f"Hamiltonian route limited to n <= {MAX_HAMILTONIAN_N}, got {h.n}")
    beta = float(beta)
    if math.isnan(beta) or beta < 0:
        raise ValueError(f"inverse temperature must be >= 0, got {beta}")
    dim = 1 << h.n
    ham = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(1, h.n + 1):
        ham -= dense_matrix(hypergraph_stabilizer(h, i))
    if np.max(np.abs(ham.imag)) > 1e-12:
        raise RuntimeError("generator Hamiltonian acquired an imaginary part")
    evals, evecs = np.linalg.eigh(ham.real)
    if math.isinf(beta):
        ground = evals <= evals[0] + 1e-9
        weights = ground.astype(float)
    else:
        weights = np.exp(-beta * (evals - evals[0]))
    rho = (evecs * weights) @ evecs.conj().T / weights.sum()
    return DenseMixedState(rho, h.n)


def dense_expectation(state, op) -> float:
    """Tr[rho * Op] for a DenseMixedState, or <psi|Op|psi> for a DenseState."""
    if isinstance(state, DenseState):
        if op.n != state.n:
            raise ValueError(f"dimension mismatch: state n={state.n}, op n={op.n}")
        value = np.vdot(state.amplitudes, apply_operator(op, state.amplitudes))
    elif isinstance(state, DenseMixedState):
        if op.n != state.n:
            raise ValueError(f"dimension mismatch: state n={state.n}, op n={op.n}")
        idx = _indices(op.n)
        if isinstance(op, PauliString):
            prefactor = op.sign * (1j) ** ((op.x_mask & op.z_mask).bit_count())
            coeff = prefactor * np.where(_parity(idx, op.z_mask) == 1, -1.0, 1.0)
        elif isinstance(op, StabilizerProduct):
            coeff = op.sign * np.where(_phase_poly_parity(op, idx) == 1, -1.0, 1.0)
        else:
            raise TypeError(f"cannot apply operator of type {type(op).__name__}")
        value = np.sum(state.matrix[idx, idx ^ np.uint32(op.x_mask)] * coeff)
    else:
        raise TypeError(f"unsupported state type {type(state).__name__}")
    if abs(value.imag) > 1e-10:
        raise RuntimeError(f"expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def stabilizer_check(state: DenseState, op) -> bool:
    """True iff Op|psi> = |psi> within 1e-10 (max norm)."""
    applied = apply_operator(op, state.amplitudes)
    return bool(np.max(np.abs(applied - state.amplitudes)) <= 1e-10)


def hadamard_transform(amplitudes: np.ndarray) -> np.ndarray:
    """Normalized Walsh-Hadamard transform (X-basis change) of a statevector."""
    size = amplitudes.shape[0]
    if size & (size - 1):
        raise ValueError(f"length must be a power of two, got {size}")
    out = amplitudes.astype(np.complex128, copy=True)
    span = 1
    while span < size:
        out = out.reshape(-1, 2 * span)
        left = out[:, :span].copy()
        right = out[:, span:].copy()
        out[:, :span] = left + right
        out[:, span:] = left - right
        out = out.reshape(-1)
        span *= 2
    return out / math.sqrt(size)
