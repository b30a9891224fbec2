"""The amplification engine: iterate Q = -I_start U^-1 I_target U.

A plan fixes the transform U (optionally conjugated to V.U), the start and
target basis indices, and the oracle phases. The derived quantities are the
transition amplitude of the effective transform, its rotation half-angle
theta = arcsin|amp|, and the iteration count m_star that maximizes
sin^2((2m+1) theta).

The global -1 in Q is applied literally so the two-level recurrence holds
as an exact vector identity, not just up to phase.
"""

import math
from dataclasses import dataclass

import numpy as np

from .qstate import DomainError, StateVector, basis_state, probability
from .unitaries import (
    PhaseOracle,
    Seq,
    adjoint,
    apply,
    selective_phase,
    transition_amplitude,
)

# transitions weaker than this make the target unreachable in practice
MIN_TRANSITION = 1e-14


def predicted_success(theta, m):
    """Closed-form success model sin^2((2m+1) theta)."""
    if not 0 < theta <= math.pi / 2:
        raise DomainError(f"theta must lie in (0, pi/2], got {theta}")
    return math.sin((2 * m + 1) * theta) ** 2


def _best_iteration_count(theta):
    # floor/ceil candidates of (pi/4)/theta - 1/2; ties go to fewer steps
    x = (math.pi / 4) / theta - 0.5
    lo = max(0, math.floor(x))
    hi = max(0, math.ceil(x))
    if predicted_success(theta, hi) > predicted_success(theta, lo) + 1e-12:
        return hi
    return lo


class AmplificationPlan:
    """Frozen inputs plus derived quantities for one search instance."""

    __slots__ = (
        "unitary",
        "start",
        "target",
        "conjugator",
        "phase_start",
        "phase_target",
        "effective",
        "effective_adjoint",
        "transition",
        "theta",
        "m_star",
        "_start_oracle",
        "_target_oracle",
        "_pulled_target",
    )

    def __init__(self, unitary, start, target, conjugator=None,
                 phase_start=math.pi, phase_target=math.pi):
        n = unitary.num_qubits
        size = 1 << n
        if not 0 <= start < size:
            raise DomainError(f"start index {start} out of range for n={n}")
        if not 0 <= target < size:
            raise DomainError(f"target index {target} out of range for n={n}")
        if conjugator is not None and conjugator.num_qubits != n:
            raise DomainError("conjugator acts on a different qubit count")
        self.unitary = unitary
        self.start = start
        self.target = target
        self.conjugator = conjugator
        self.phase_start = float(phase_start)
        self.phase_target = float(phase_target)
        if conjugator is None:
            self.effective = unitary
        else:
            self.effective = Seq((unitary, conjugator))
        self.effective_adjoint = adjoint(self.effective)
        amp = transition_amplitude(self.effective, start, target)
        if abs(amp) <= MIN_TRANSITION:
            raise DomainError(
                f"unreachable target: |<target|U|start>| = {abs(amp):.3e}"
            )
        self.transition = amp
        self.theta = math.asin(min(1.0, abs(amp)))
        self.m_star = _best_iteration_count(self.theta)
        self._start_oracle = PhaseOracle({start}, self.phase_start)
        self._target_oracle = PhaseOracle({target}, self.phase_target)
        self._pulled_target = None

    @property
    def num_qubits(self):
        return self.effective.num_qubits

    def inversion_phases(self):
        return (
            abs(self.phase_start) == math.pi and abs(self.phase_target) == math.pi
        )

    def pulled_target(self):
        """U^-1 |target> for the effective transform (cached)."""
        if self._pulled_target is None:
            state = basis_state(self.num_qubits, self.target)
            self._pulled_target = apply(self.effective_adjoint, state)
        return self._pulled_target.copy()


def make_plan(unitary, start, target, conjugator=None,
              phase_start=math.pi, phase_target=math.pi):
    return AmplificationPlan(
        unitary, start, target, conjugator, phase_start, phase_target
    )


def q_apply(state, plan):
    """One application of Q, in place: U, I_target, U^-1, I_start, then -1."""
    if state.num_qubits != plan.num_qubits:
        raise DomainError("state and plan qubit counts differ")
    apply(plan.effective, state)
    selective_phase(state, plan._target_oracle)
    apply(plan.effective_adjoint, state)
    selective_phase(state, plan._start_oracle)
    state.amps *= -1.0
    return state


def run(plan, m):
    """Final state U . Q^m |start> and the success probability at the target."""
    if m < 0:
        raise DomainError(f"iteration count must be nonnegative, got {m}")
    state = basis_state(plan.num_qubits, plan.start)
    for _ in range(m):
        q_apply(state, plan)
    apply(plan.effective, state)
    return state, probability(state, plan.target)


@dataclass(frozen=True)
class TwoLevelCoeffs:
    """Coefficients on |start> (a) and on U^-1|target> (b).

    The pair spans the invariant plane of Q; note the basis is not
    orthogonal (overlap conj(transition)).
    """

    a: complex
    b: complex


def two_level_step(coeffs, transition):
    """Exact one-step recurrence for inversion phases.

    a' = (1 - 4|t|^2) a - 2 conj(t) b
    b' = 2 t a + b
    """
    t = complex(transition)
    mag2 = t.real * t.real + t.imag * t.imag
    return TwoLevelCoeffs(
        a=(1.0 - 4.0 * mag2) * coeffs.a - 2.0 * t.conjugate() * coeffs.b,
        b=2.0 * t * coeffs.a + coeffs.b,
    )


def two_level_reconstruct(coeffs, plan):
    """Expand a |start> + b U^-1|target> into a full state vector."""
    pulled = plan.pulled_target()
    amps = coeffs.b * pulled.amps
    amps[plan.start] += coeffs.a
    return StateVector(plan.num_qubits, amps)


def _trace_two_level(plan, m_max):
    # success after m steps is |t a_m + b_m|^2: the amplitude at the target
    # after the final application of U
    t = plan.transition
    coeffs = TwoLevelCoeffs(1.0 + 0.0j, 0.0 + 0.0j)
    out = []
    for m in range(m_max + 1):
        if m > 0:
            coeffs = two_level_step(coeffs, t)
        out.append((m, abs(t * coeffs.a + coeffs.b) ** 2))
    return out

def _trace_simulate(plan, m_max):
    # <target| U s> = <U^-1 target | s>, so one dot per step replaces a
    # full probe application of U
    probe = plan.pulled_target().amps
    state = basis_state(plan.num_qubits, plan.start)
    out = []
    for m in range(m_max + 1):
        if m > 0:
            q_apply(state, plan)
        out.append((m, abs(np.vdot(probe, state.amps)) ** 2))
    return out


def success_trace(plan, m_max, method="auto"):
    """Success probability after every iteration count 0..m_max.

    method: "two_level" (exact O(1)-per-step recurrence, inversion phases
    only), "simulate" (full state evolution with strided kernels), or
    "auto" (two_level when the phases are inversions, else simulate).
    """
    if m_max < 0:
        raise DomainError(f"m_max must be nonnegative, got {m_max}")
    if method == "auto":
        method = "two_level" if plan.inversion_phases() else "simulate"
    if method == "two_level":
        if not plan.inversion_phases():
            raise DomainError(
                "the two-level recurrence only holds for inversion phases"
            )
        return _trace_two_level(plan, m_max)
    if method == "simulate":
        return _trace_simulate(plan, m_max)
    raise DomainError(f"unknown trace method {method!r}")
