"""Concrete search algorithms built on the amplification engine.

Covers exhaustive search from the all-zeros state, search from an arbitrary
start, Hamming-constrained search with the biased per-qubit transform, and
boosting of an arbitrary gate sequence.
"""

import math
from dataclasses import dataclass

import numpy as np

from .amplify import make_plan
from .qstate import DomainError
from .unitaries import (
    Seq,
    UnitaryExpr,
    biased_transform,
    parse_gate_list,
    walsh_hadamard,
)


def search_wh(num_qubits, target):
    """Exhaustive search: start at 0, transform is the full Hadamard product."""
    return make_plan(walsh_hadamard(num_qubits), 0, target)


def search_from(num_qubits, start, target):
    """Exhaustive search from any start state; |transition| is still N^-1/2."""
    return make_plan(walsh_hadamard(num_qubits), start, target)


def inversion_about_average(state):
    """Map every component x_i to 2A - x_i, A the mean component.

    Direct O(N) form of the operator -W I_0 W, in place.
    """
    mean = state.amps.mean()
    np.negative(state.amps, out=state.amps)
    state.amps += 2.0 * mean
    return state


@dataclass(frozen=True)
class NearSearchSpec:
    """Search for a word at exact Hamming distance k from a known word.

    alpha is the biased-gate parameter; when None it defaults to the
    optimum n/k.
    """

    num_qubits: int
    known_word: int
    k: int
    alpha: float | None = None

    def __post_init__(self):
        if not 0 <= self.known_word < (1 << self.num_qubits):
            raise DomainError(
                f"known word {self.known_word} out of range for "
                f"n={self.num_qubits}"
            )
        if not 1 <= self.k <= self.num_qubits:
            raise DomainError(
                f"distance k={self.k} must lie in [1, {self.num_qubits}]"
            )

    def resolved_alpha(self):
        if self.alpha is not None:
            return float(self.alpha)
        return self.num_qubits / self.k


def biased_transition_magnitude(num_qubits, k, alpha):
    """|<target|U|start>| for words k bits apart under the biased transform.

    Closed form (1 - 1/alpha)^((n-k)/2) * (1/alpha)^(k/2).
    """
    if not alpha > 1:
        raise DomainError(f"bias parameter must exceed 1, got {alpha}")
    return (1.0 - 1.0 / alpha) ** ((num_qubits - k) / 2.0) * (
        1.0 / alpha
    ) ** (k / 2.0)


def search_near(spec, target):
    """Hamming-constrained search: start at the known word, biased transform."""
    n = spec.num_qubits
    if not 0 <= target < (1 << n):
        raise DomainError(f"target {target} out of range for n={n}")
    actual = (spec.known_word ^ target).bit_count()
    if actual != spec.k:
        raise DomainError(
            f"target is {actual} bits from the known word, spec promises {spec.k}"
        )
    if spec.alpha is None and spec.k == spec.num_qubits:
        raise DomainError(
            "k = n leaves no matching bits (alpha = n/k = 1 is out of the "
            "biased gate's domain); use exhaustive search instead"
        )
    alpha = spec.resolved_alpha()
    return make_plan(biased_transform(n, alpha), spec.known_word, target)


def optimal_alpha(num_qubits, k):
    """The bias that maximizes the transition magnitude: n/k."""
    if not 1 <= k <= num_qubits - 1:
        raise DomainError(
            f"distance k={k} must lie in [1, {num_qubits - 1}] for a "
            "nondegenerate optimum"
        )
    return num_qubits / k


def entropy_scaling_check(num_qubits, k):
    """Compare -2 ln|transition| at the optimal bias against ln C(n, k).

    Returns (lhs, rhs, gap). lhs equals n * H(k/n) (natural-log binary
    entropy) exactly; the gap is the Stirling correction
    ~ 0.5 ln(2 pi k (n-k) / n).
    """
    n = num_qubits
    if not 2 <= k <= n - 2:
        raise DomainError(f"need 2 <= k <= n-2, got k={k}, n={n}")
    p = k / n
    lhs = -(n - k) * math.log(1.0 - p) - k * math.log(p)
    rhs = math.log(math.comb(n, k))
    return lhs, rhs, lhs - rhs


@dataclass(frozen=True)
class GateSequence:
    """An algorithm as an ordered list of elementary unitary operations."""

    num_qubits: int
    ops: tuple

    def __post_init__(self):
        for op in self.ops:
            if not isinstance(op, UnitaryExpr):
                raise DomainError(
                    f"sequence element {type(op).__name__} is not a unitary"
                )
            if op.num_qubits != self.num_qubits:
                raise DomainError("sequence element acts on a different size")

    @classmethod
    def from_text(cls, text, num_qubits):
        return cls(num_qubits, parse_gate_list(text, num_qubits))

    def __len__(self):
        return len(self.ops)

    def as_expr(self):
        return Seq(self.ops, self.num_qubits)


def boost_algorithm(circuit, start, target):
    """Wrap a gate sequence in the amplification loop.

    The inverse side is synthesized structurally (adjoints in reverse
    order), never as a dense matrix, so any register size works.
    """
    if len(circuit) < 1:
        raise DomainError("the boosted algorithm needs at least one operation")
    return make_plan(circuit.as_expr(), start, target)
