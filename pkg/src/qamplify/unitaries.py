"""Gate construction and symbolic composition of unitaries.

Expression nodes (Dense, TensorPerQubit, Seq, Adjoint, OraclePhase) are
immutable after construction and evaluate against a StateVector with the
cheapest kernel available: strided passes for per-qubit tensor products,
marked-index phase multiplies for oracles, matrix-vector for dense leaves.
Seq applies left to right: the first element acts on the state first.
"""

import math

import numpy as np

from .qstate import (
    DENSE_CAP_DEFAULT,
    DomainError,
    StateVector,
    _check_unitary_dense,
    apply_single_qubit_gate,
    apply_two_qubit_block,
    basis_state,
)

GATE_ATOL = 1e-10

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)


class SingleQubitGate:
    """Unitary 2x2 matrix; non-unitary input is rejected at construction."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=np.complex128)
        if matrix.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {matrix.shape}")
        err = np.abs(matrix.conj().T @ matrix - np.eye(2)).max()
        if err > GATE_ATOL:
            raise DomainError(f"gate is not unitary (deviation {err:.3e})")
        matrix.flags.writeable = False
        self.matrix = matrix

    def adjoint(self):
        return SingleQubitGate(self.matrix.conj().T)

    def __repr__(self):
        return f"SingleQubitGate({self.matrix.tolist()!r})"


def hadamard_gate():
    r = math.sqrt(0.5)
    return SingleQubitGate([[r, r], [r, -r]])


def biased_gate(alpha):
    """Per-qubit transform favouring bit agreement; alpha=2 recovers Hadamard.

    Matrix [[sqrt(1-1/a), sqrt(1/a)], [sqrt(1/a), -sqrt(1-1/a)]]; the minus
    sign sits bottom-right so the alpha=2 case matches hadamard_gate exactly.
    """
    if not alpha > 1:
        raise DomainError(f"bias parameter must exceed 1, got {alpha}")
    keep = math.sqrt(1.0 - 1.0 / alpha)
    flip = math.sqrt(1.0 / alpha)
    return SingleQubitGate([[keep, flip], [flip, -keep]])


def rotation_gate(axis, angle):
    """Rotation about a Bloch axis: cos(a/2) I - i sin(a/2) (axis . sigma)."""
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    half = 0.5 * angle
    mat = math.cos(half) * np.eye(2) - 1j * math.sin(half) * (
        axis[0] * _SX + axis[1] * _SY + axis[2] * _SZ
    )
    return SingleQubitGate(mat)


def perturb_gate(gate, delta, rng):
    """Compose a gate with small random rotations on both sides.

    Angles are uniform in [-delta, delta] about independent random axes, so
    the result is exactly unitary (never re-normalized from a noisy matrix).
    """
    if delta < 0:
        raise DomainError(f"perturbation angle must be nonnegative, got {delta}")

    def draw():
        axis = rng.normal(size=3)
        return rotation_gate(axis, rng.uniform(-delta, delta))

    left = draw()
    right = draw()
    return SingleQubitGate(left.matrix @ gate.matrix @ right.matrix)


def random_single_qubit_gate(rng):
    """Haar-random 2x2 unitary (QR of a complex Gaussian, phases fixed)."""
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return SingleQubitGate(q * (d / np.abs(d)))


class PhaseOracle:
    """Marked basis indices whose amplitudes pick up e^{i phase}.

    phase defaults to pi (a sign flip, applied as an exact -1 multiply).
    """

    __slots__ = ("marked", "phase", "_indices")

    def __init__(self, marked, phase=math.pi):
        self.marked = frozenset(int(i) for i in marked)
        if any(i < 0 for i in self.marked):
            raise DomainError("marked indices must be nonnegative")
        self.phase = float(phase)
        self._indices = np.fromiter(sorted(self.marked), dtype=np.int64,
                                    count=len(self.marked))

    def factor(self):
        if self.phase == 0.0:
            return 1.0 + 0.0j
        if abs(self.phase) == math.pi:
            return -1.0 + 0.0j
        return complex(math.cos(self.phase), math.sin(self.phase))

    def __repr__(self):
        return f"PhaseOracle(marked={sorted(self.marked)}, phase={self.phase!r})"


def selective_phase(state, oracle):
    """Multiply marked amplitudes by e^{i phase}; all probabilities preserved."""
    idx = oracle._indices
    if idx.size and idx[-1] >= len(state):
        raise DomainError(
            f"marked index {idx[-1]} out of range for {state.num_qubits} qubits"
        )
    fac = oracle.factor()
    if fac != 1.0:
        state.amps[idx] *= fac
    return state


def ancilla_oracle_apply(state, predicate):
    """Oracle via an ancilla target bit: |x, b> -> |x, b XOR f(x)>.

    The ancilla is the most significant qubit. With the ancilla prepared in
    (|0> - |1>)/sqrt(2) the top register sees a sign flip exactly on
    {x : f(x) = 1}.
    """
    n = state.num_qubits - 1
    if n < 1:
        raise DomainError("need at least one data qubit beside the ancilla")
    size = 1 << n
    marked = np.fromiter(
        (x for x in range(size) if predicate(x)), dtype=np.int64
    )
    if marked.size:
        top = marked + size
        low_amps = state.amps[marked].copy()
        state.amps[marked] = state.amps[top]
        state.amps[top] = low_amps
    return state


# ---------------------------------------------------------------------------
# expression nodes


class UnitaryExpr:
    __slots__ = ("num_qubits",)


class Dense(UnitaryExpr):
    """Explicit matrix leaf; checked unitary and capped at construction."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, dense_cap=DENSE_CAP_DEFAULT):
        matrix = np.array(matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 2:
            raise DomainError(f"expected a square matrix, got shape {matrix.shape}")
        dim = matrix.shape[0]
        n = dim.bit_length() - 1
        if 1 << n != dim:
            raise DomainError(f"matrix dimension {dim} is not a power of two")
        if n > dense_cap:
            raise DomainError(f"dense matrix refused at n={n} (cap {dense_cap})")
        _check_unitary_dense(matrix, atol=GATE_ATOL)
        matrix.flags.writeable = False
        self.matrix = matrix
        self.num_qubits = n


class TensorPerQubit(UnitaryExpr):
    """One optional gate per qubit; None slots mean identity (skipped)."""

    __slots__ = ("gates",)

    def __init__(self, gates):
        gates = tuple(gates)
        if not gates:
            raise DomainError("need at least one qubit slot")
        for g in gates:
            if g is not None and not isinstance(g, SingleQubitGate):
                raise DomainError(f"slot holds {type(g).__name__}, not a gate")
        self.gates = gates
        self.num_qubits = len(gates)


class Seq(UnitaryExpr):
    """Composition applied left to right; empty Seq is the identity."""

    __slots__ = ("parts",)

    def __init__(self, parts, num_qubits=None):
        parts = tuple(parts)
        for p in parts:
            if not isinstance(p, UnitaryExpr):
                raise DomainError(f"Seq element {type(p).__name__} is not a unitary")
        counts = {p.num_qubits for p in parts}
        if len(counts) > 1:
            raise DomainError(f"Seq mixes qubit counts {sorted(counts)}")
        if counts:
            inferred = counts.pop()
            if num_qubits is not None and num_qubits != inferred:
                raise DomainError(
                    f"Seq declared n={num_qubits} but parts act on n={inferred}"
                )
            num_qubits = inferred
        elif num_qubits is None:
            raise DomainError("empty Seq needs an explicit qubit count")
        self.parts = parts
        self.num_qubits = num_qubits


class Adjoint(UnitaryExpr):
    """Lazy adjoint marker; evaluation uses the structural adjoint."""

    __slots__ = ("inner",)

    def __init__(self, inner):
        if not isinstance(inner, UnitaryExpr):
            raise DomainError(f"cannot take adjoint of {type(inner).__name__}")
        self.inner = inner
        self.num_qubits = inner.num_qubits


class OraclePhase(UnitaryExpr):
    __slots__ = ("oracle",)

    def __init__(self, oracle, num_qubits):
        if oracle._indices.size and oracle._indices[-1] >= (1 << num_qubits):
            raise DomainError("marked index out of range for the qubit count")
        self.oracle = oracle
        self.num_qubits = num_qubits


def walsh_hadamard(num_qubits):
    if num_qubits < 1:
        raise DomainError("need at least one qubit")
    h = hadamard_gate()
    return TensorPerQubit((h,) * num_qubits)


def biased_transform(num_qubits, alpha):
    if num_qubits < 1:
        raise DomainError("need at least one qubit")
    g = biased_gate(alpha)
    return TensorPerQubit((g,) * num_qubits)


def adjoint(expr):
    """Structural adjoint: Seq reverses with adjointed members."""
    if isinstance(expr, Dense):
        return Dense(expr.matrix.conj().T, dense_cap=expr.num_qubits)
    if isinstance(expr, TensorPerQubit):
        return TensorPerQubit(
            tuple(None if g is None else g.adjoint() for g in expr.gates)
        )
    if isinstance(expr, Seq):
        return Seq(
            tuple(adjoint(p) for p in reversed(expr.parts)), expr.num_qubits
        )
    if isinstance(expr, Adjoint):
        return expr.inner
    if isinstance(expr, OraclePhase):
        return OraclePhase(
            PhaseOracle(expr.oracle.marked, -expr.oracle.phase), expr.num_qubits
        )
    raise DomainError(f"unknown expression node {type(expr).__name__}")


def _apply_tensor(expr, state):
    gates = expr.gates
    n = len(gates)
    q = 0
    while q < n:
        g = gates[q]
        if g is None:
            q += 1
        elif q + 1 < n and gates[q + 1] is not None:
            fused = np.kron(gates[q + 1].matrix, g.matrix)
            apply_two_qubit_block(state, fused, q)
            q += 2
        else:
            apply_single_qubit_gate(state, g, q)
            q += 1


def apply(expr, state):
    """Evaluate the expression tree against the state, in place."""
    if expr.num_qubits != state.num_qubits:
        raise DomainError(
            f"expression acts on {expr.num_qubits} qubits, state has "
            f"{state.num_qubits}"
        )
    if isinstance(expr, TensorPerQubit):
        _apply_tensor(expr, state)
    elif isinstance(expr, Seq):
        for part in expr.parts:
            apply(part, state)
    elif isinstance(expr, OraclePhase):
        selective_phase(state, expr.oracle)
    elif isinstance(expr, Adjoint):
        apply(adjoint(expr.inner), state)
    elif isinstance(expr, Dense):
        state.amps[:] = expr.matrix @ state.amps
    else:
        raise DomainError(f"unknown expression node {type(expr).__name__}")
    return state


def materialize(expr, dense_cap=DENSE_CAP_DEFAULT):
    """Expand an expression to its full matrix (reference/testing path)."""
    n = expr.num_qubits
    if n > dense_cap:
        raise DomainError(f"materialize refused at n={n} (cap {dense_cap})")
    if isinstance(expr, Dense):
        return expr.matrix.copy()
    if isinstance(expr, TensorPerQubit):
        out = np.eye(1, dtype=np.complex128)
        eye = np.eye(2, dtype=np.complex128)
        for g in expr.gates:  # qubit 0 is the fastest (least significant) index
            out = np.kron(eye if g is None else g.matrix, out)
        return out
    if isinstance(expr, Seq):
        out = np.eye(1 << n, dtype=np.complex128)
        for part in expr.parts:
            out = materialize(part, dense_cap) @ out
        return out
    if isinstance(expr, Adjoint):
        return materialize(expr.inner, dense_cap).conj().T
    if isinstance(expr, OraclePhase):
        diag = np.ones(1 << n, dtype=np.complex128)
        diag[expr.oracle._indices] = expr.oracle.factor()
        return np.diag(diag)
    raise DomainError(f"unknown expression node {type(expr).__name__}")


def transition_amplitude(expr, start, target):
    """<target| expr |start> for basis indices start, target."""
    size = 1 << expr.num_qubits
    if not 0 <= start < size or not 0 <= target < size:
        raise DomainError("basis index out of range for the expression")
    state = apply(expr, basis_state(expr.num_qubits, start))
    return complex(state.amps[target])


# ---------------------------------------------------------------------------
# gate-list text format
#
#   H q                        Hadamard on qubit q
#   GATE q a b c d e f g h     row-major 2x2, entries as re,im pairs
#   BIAS q alpha               biased gate on qubit q
#   PHASE idx... : phi         phase oracle over marked indices
#   # comment


def parse_index(token):
    """Basis index as a decimal or binary (0b...) literal."""
    try:
        if token.lower().startswith(("0b", "-0b")):
            return int(token, 2)
        return int(token, 10)
    except ValueError:
        raise DomainError(f"bad basis index literal {token!r}") from None


def _single_gate_expr(gate, qubit, num_qubits):
    if not 0 <= qubit < num_qubits:
        raise DomainError(f"qubit {qubit} out of range for n={num_qubits}")
    slots = [None] * num_qubits
    slots[qubit] = gate
    return TensorPerQubit(slots)


def parse_gate_list(text, num_qubits):
    """Parse the gate-list format into a tuple of unitary expressions."""
    ops = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0].upper()
        try:
            if kind == "H":
                if len(tokens) != 2:
                    raise DomainError("H takes exactly one qubit")
                ops.append(
                    _single_gate_expr(hadamard_gate(), int(tokens[1]), num_qubits)
                )
            elif kind == "GATE":
                if len(tokens) != 10:
                    raise DomainError("GATE takes a qubit and 8 entries")
                vals = [float(t) for t in tokens[2:]]
                mat = [
                    [complex(vals[0], vals[1]), complex(vals[2], vals[3])],
                    [complex(vals[4], vals[5]), complex(vals[6], vals[7])],
                ]
                ops.append(
                    _single_gate_expr(
                        SingleQubitGate(mat), int(tokens[1]), num_qubits
                    )
                )
            elif kind == "BIAS":
                if len(tokens) != 3:
                    raise DomainError("BIAS takes a qubit and alpha")
                ops.append(
                    _single_gate_expr(
                        biased_gate(float(tokens[2])), int(tokens[1]), num_qubits
                    )
                )
            elif kind == "PHASE":
                if ":" not in tokens:
                    raise DomainError("PHASE needs ': phi' after the indices")
                sep = tokens.index(":")
                if sep < 2 or sep != len(tokens) - 2:
                    raise DomainError("PHASE takes indices, ':', then one angle")
                marked = [parse_index(t) for t in tokens[1:sep]]
                oracle = PhaseOracle(marked, float(tokens[sep + 1]))
                ops.append(OraclePhase(oracle, num_qubits))
            else:
                raise DomainError(f"unknown operation {tokens[0]!r}")
        except DomainError as exc:
            raise DomainError(f"gate list line {lineno}: {exc}") from None
        except ValueError as exc:
            raise DomainError(f"gate list line {lineno}: {exc}") from None
    return tuple(ops)
