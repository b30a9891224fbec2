"""Complex state vectors over n qubits and the kernels that act on them.

Conventions: qubit j is bit j of the basis index (qubit 0 = least
significant), so a gate on qubit q pairs amplitudes at stride 2**q.
Gate application mutates the buffer in place and returns the same
StateVector; callers that need the input afterwards copy() first.
"""

import math

import numpy as np

from . import kernels

# dense matrices above this qubit count are refused unless the caller
# raises the cap explicitly (2^12 x 2^12 complex128 ~ 256 MB)
DENSE_CAP_DEFAULT = 12

# above this dimension unitarity is checked on random probe vectors
# instead of a full G^dag G product
_FULL_UNITARITY_DIM = 1024


class DomainError(ValueError):
    """Input outside an operation's documented domain."""


class StateVector:
    """Amplitudes of an n-qubit register: complex128 array of length 2**n."""

    __slots__ = ("num_qubits", "amps")

    def __init__(self, num_qubits, amps):
        if num_qubits < 1:
            raise DomainError(f"need at least one qubit, got {num_qubits}")
        amps = np.ascontiguousarray(amps, dtype=np.complex128)
        if amps.shape != (1 << num_qubits,):
            raise DomainError(
                f"expected {1 << num_qubits} amplitudes for {num_qubits} qubits, "
                f"got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise DomainError("amplitudes must be finite")
        self.num_qubits = num_qubits
        self.amps = amps

    def __len__(self):
        return self.amps.shape[0]

    def copy(self):
        return StateVector(self.num_qubits, self.amps.copy())

    def norm(self):
        return float(np.linalg.norm(self.amps))


def basis_state(num_qubits, idx):
    """State with amplitude 1 at basis index idx and 0 elsewhere."""
    size = 1 << num_qubits
    if not 0 <= idx < size:
        raise DomainError(f"basis index {idx} out of range for {num_qubits} qubits")
    amps = np.zeros(size, dtype=np.complex128)
    amps[idx] = 1.0
    return StateVector(num_qubits, amps)


def inner_product(a, b):
    """<a|b> = sum conj(a_i) * b_i."""
    if a.num_qubits != b.num_qubits:
        raise DomainError(
            f"qubit counts differ: {a.num_qubits} vs {b.num_qubits}"
        )
    return complex(np.vdot(a.amps, b.amps))


def apply_single_qubit_gate(state, gate, qubit):
    """Strided in-place 2x2 gate pass on one qubit.

    Accepts a unitaries.SingleQubitGate or a raw 2x2 array; unitarity is
    the gate constructor's job, not rechecked here.
    """
    if not 0 <= qubit < state.num_qubits:
        raise DomainError(
            f"qubit {qubit} out of range for {state.num_qubits}-qubit state"
        )
    matrix = np.asarray(getattr(gate, "matrix", gate), dtype=np.complex128)
    kernels.apply_single(state.amps, qubit, matrix)
    return state


def apply_two_qubit_block(state, gate4, qubit):
    """Fused in-place 4x4 pass on adjacent qubits (qubit, qubit+1)."""
    if not 0 <= qubit < state.num_qubits - 1:
        raise DomainError(
            f"qubit pair ({qubit},{qubit + 1}) out of range for "
            f"{state.num_qubits}-qubit state"
        )
    kernels.apply_pair(state.amps, qubit, np.asarray(gate4, dtype=np.complex128))
    return state


def _check_unitary_dense(matrix, atol):
    dim = matrix.shape[0]
    if dim <= _FULL_UNITARITY_DIM:
        err = np.abs(matrix.conj().T @ matrix - np.eye(dim)).max()
        if err > atol:
            raise DomainError(f"matrix is not unitary (deviation {err:.3e})")
        return
    # randomized probe: ||G^dag G v - v|| small for seeded random v
    rng = np.random.default_rng(0)
    for _ in range(4):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v /= np.linalg.norm(v)
        err = np.linalg.norm(matrix.conj().T @ (matrix @ v) - v)
        if err > atol * math.sqrt(dim):
            raise DomainError(f"matrix is not unitary (probe deviation {err:.3e})")


def apply_dense(state, matrix, dense_cap=DENSE_CAP_DEFAULT):
    """Reference path: full matrix-vector product (validates structured kernels)."""
    if state.num_qubits > dense_cap:
        raise DomainError(
            f"dense path refused at n={state.num_qubits} (cap {dense_cap}); "
            "raise dense_cap to override"
        )
    matrix = np.asarray(matrix, dtype=np.complex128)
    size = len(state)
    if matrix.shape != (size, size):
        raise DomainError(
            f"matrix shape {matrix.shape} does not match state size {size}"
        )
    _check_unitary_dense(matrix, atol=1e-8)
    state.amps[:] = matrix @ state.amps
    return state


def probability(state, idx):
    """|amplitude|^2 at a basis index."""
    if not 0 <= idx < len(state):
        raise DomainError(f"basis index {idx} out of range")
    amp = state.amps[idx]
    return float(amp.real * amp.real + amp.imag * amp.imag)


def sample(state, rng, size=None):
    """Draw basis indices with probability |amps_i|^2 (deterministic per seed)."""
    probs = np.abs(state.amps) ** 2
    cum = np.cumsum(probs)
    cum /= cum[-1]
    if size is None:
        idx = int(np.searchsorted(cum, rng.random(), side="right"))
        return min(idx, len(state) - 1)
    draws = np.searchsorted(cum, rng.random(size), side="right")
    return np.minimum(draws, len(state) - 1)
