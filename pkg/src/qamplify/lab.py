"""Reproducible experiments: sweeps, perturbation and phase studies.

Every study takes explicit parameters (including the seed), records them in
the result, and draws randomness from counter-keyed generators so identical
inputs give bit-identical series regardless of evaluation order.
"""

import datetime
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .amplify import make_plan, predicted_success, q_apply, run, success_trace, two_level_reconstruct, two_level_step, TwoLevelCoeffs
from .qstate import DENSE_CAP_DEFAULT, DomainError, basis_state, probability
from .unitaries import (
    Dense,
    Seq,
    TensorPerQubit,
    adjoint,
    apply,
    hadamard_gate,
    materialize,
    perturb_gate,
    random_single_qubit_gate,
    selective_phase,
    walsh_hadamard,
)


@dataclass
class ExperimentRecord:
    experiment: str
    params: dict
    meta: dict
    series: list
    summary: dict = field(default_factory=dict)

    def as_dict(self, include_timestamp=False):
        meta = dict(self.meta)
        if not include_timestamp:
            meta.pop("timestamp", None)
        out = {"experiment": self.experiment, "params": self.params, "meta": meta}
        if self.summary:
            out["summary"] = self.summary
        out["series"] = self.series
        return out


def _meta():
    return {
        "tool": "qamplify",
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _check_finite(series):
    for row in series:
        for key, value in row.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise DomainError(f"non-finite value in column {key!r}")


def _record(experiment, params, series, summary=None):
    _check_finite(series)
    return ExperimentRecord(
        experiment=experiment,
        params=params,
        meta=_meta(),
        series=series,
        summary=summary or {},
    )


def to_json(record, include_timestamp=False):
    """One JSON document; stable key order, round-trip float repr."""
    return json.dumps(record.as_dict(include_timestamp), indent=2)


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def to_tsv(record):
    """The series as a tab-separated table (headers, 17-digit floats)."""
    columns = []
    for row in record.series:
        for key in row:
            if key not in columns:
                columns.append(key)
    lines = ["\t".join(columns)]
    for row in record.series:
        lines.append("\t".join(_format_cell(row.get(col)) for col in columns))
    return "\n".join(lines) + "\n"


def write_record(record, fmt, stream, include_timestamp=False):
    if fmt == "json":
        stream.write(to_json(record, include_timestamp) + "\n")
    elif fmt == "tsv":
        stream.write(to_tsv(record))
    else:
        raise DomainError(f"unknown output format {fmt!r}")


def _rng(*key):
    return np.random.default_rng(key)


def _estimate_period(values):
    """Mean spacing of local maxima, refined by quadratic interpolation."""
    peaks = []
    for i in range(1, len(values) - 1):
        left, mid, right = values[i - 1], values[i], values[i + 1]
        if mid >= left and mid >= right and (mid > left or mid > right):
            denom = left - 2.0 * mid + right
            offset = 0.0 if denom == 0 else 0.5 * (left - right) / denom
            peaks.append(i + offset)
    if len(peaks) < 2:
        return None
    return float(np.mean(np.diff(peaks)))


def sweep_iterations(plan, m_max):
    """Simulated vs closed-form success for every m in 0..m_max."""
    if m_max < 1:
        raise DomainError(f"m_max must be at least 1, got {m_max}")
    trace = success_trace(plan, m_max, method="simulate")
    series = []
    for m, measured in trace:
        model = predicted_success(plan.theta, m)
        series.append(
            {
                "m": m,
                "success_sim": measured,
                "success_model": model,
                "abs_err": abs(measured - model),
            }
        )
    period = _estimate_period([row["success_sim"] for row in series])
    summary = {
        "period_estimate": period,
        "period_model": math.pi / (2.0 * plan.theta),
        "max_abs_err": max(row["abs_err"] for row in series),
    }
    params = {
        "n": plan.num_qubits,
        "gamma": plan.start,
        "tau": plan.target,
        "m_max": m_max,
    }
    return _record("sweep", params, series, summary)


def _perturbed_gates(num_qubits, delta, seed_key):
    base = hadamard_gate()
    return [
        perturb_gate(base, delta, _rng(*seed_key, qubit))
        for qubit in range(num_qubits)
    ]


def sensitivity_study(num_qubits, target, deltas, trials, seed):
    """Perturb the per-qubit transform and rerun the search.

    Consistent rows perturb once and use the exact adjoint at every step;
    inconsistent rows redraw the perturbation at every application,
    breaking the fixed-transform assumption on purpose.
    """
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    series = []
    for d_idx, delta in enumerate(deltas):
        if delta < 0:
            raise DomainError(f"perturbation angle must be nonnegative: {delta}")
        for trial in range(trials):
            gates = _perturbed_gates(num_qubits, delta, (seed, d_idx, trial, 0))
            plan = make_plan(TensorPerQubit(gates), 0, target)
            _, consistent = run(plan, plan.m_star)

            # fresh perturbation for every forward and adjoint application
            counter = [0]

            def fresh_transform():
                counter[0] += 1
                return TensorPerQubit(
                    _perturbed_gates(
                        num_qubits, delta, (seed, d_idx, trial, counter[0])
                    )
                )

            state = basis_state(num_qubits, 0)
            for _ in range(plan.m_star):
                apply(fresh_transform(), state)
                selective_phase(state, plan._target_oracle)
                apply(adjoint(fresh_transform()), state)
                selective_phase(state, plan._start_oracle)
                state.amps *= -1.0
            apply(fresh_transform(), state)
            inconsistent = probability(state, target)

            series.append(
                {
                    "delta": float(delta),
                    "trial": trial,
                    "u_tg_mag": abs(plan.transition),
                    "m_star": plan.m_star,
                    "success_consistent": consistent,
                    "success_inconsistent": inconsistent,
                }
            )
    params = {
        "n": num_qubits,
        "tau": target,
        "deltas": [float(d) for d in deltas],
        "trials": trials,
        "seed": seed,
    }
    summary = {}
    for d_idx, delta in enumerate(deltas):
        rows = [r for r in series if r["delta"] == float(delta)]
        summary[f"median_consistent_delta_{d_idx}"] = float(
            np.median([r["success_consistent"] for r in rows])
        )
        summary[f"median_inconsistent_delta_{d_idx}"] = float(
            np.median([r["success_inconsistent"] for r in rows])
        )
    return _record("sensitivity", params, series, summary)


def phase_study(num_qubits, target, phis, m_max):
    """Oracle phases other than a sign flip: slower progress to the target."""
    if not phis:
        raise DomainError("need at least one phase")
    series = []
    for phi in phis:
        plan = make_plan(
            walsh_hadamard(num_qubits),
            0,
            target,
            phase_start=phi,
            phase_target=phi,
        )
        trace = success_trace(plan, m_max, method="simulate")
        best_m, best_success = max(trace, key=lambda t: t[1])
        row = {
            "phi": float(phi),
            "best_m": best_m,
            "best_success": best_success,
        }
        for m, value in trace:
            if value >= 0.5:
                row["first_m_half"] = m
                break
        series.append(row)
    params = {"n": num_qubits, "tau": target, "phis": [float(p) for p in phis],
              "m_max": m_max}
    return _record("phases", params, series)


def conjugator_study(num_qubits, start, target, seed, m_max=None,
                     dense_cap=DENSE_CAP_DEFAULT):
    """Conjugating the target oracle equals amplifying the composed transform.

    Compares the conjugator plan against a plan built on the dense product
    of the two transforms (an independent evaluation path) when the size
    allows, else on their symbolic composition.
    """
    base = walsh_hadamard(num_qubits)
    conj = TensorPerQubit(
        [random_single_qubit_gate(_rng(seed, q)) for q in range(num_qubits)]
    )
    plan_conj = make_plan(base, start, target, conjugator=conj)
    if num_qubits <= dense_cap:
        effective = Dense(
            materialize(conj, dense_cap) @ materialize(base, dense_cap),
            dense_cap=dense_cap,
        )
    else:
        effective = Seq((base, conj))
    plan_eff = make_plan(effective, start, target)
    if m_max is None:
        m_max = 2 * plan_conj.m_star + 2
    trace_conj = success_trace(plan_conj, m_max, method="simulate")
    trace_eff = success_trace(plan_eff, m_max, method="simulate")
    series = []
    for (m, a), (_, b) in zip(trace_conj, trace_eff):
        series.append(
            {
                "m": m,
                "success_conjugated": a,
                "success_effective": b,
                "abs_diff": abs(a - b),
            }
        )
    params = {"n": num_qubits, "gamma": start, "tau": target, "seed": seed,
              "m_max": m_max}
    summary = {
        "max_abs_diff": max(r["abs_diff"] for r in series),
        "u_tg_mag_conjugated": abs(plan_conj.transition),
        "u_tg_mag_effective": abs(plan_eff.transition),
    }
    return _record("conjugator", params, series, summary)


def _haar_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def residual_suite(num_qubits, trials, seed, m_max=200):
    """Residuals of the two-level identities against full simulation.

    For random dense transforms and random start/target pairs: the one-step
    identities for Q|start> and Q(U^-1|target>), and the worst per-component
    error of the recurrence-reconstructed state over a full trajectory.
    """
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    series = []
    for trial in range(trials):
        rng = _rng(seed, trial)
        expr = Dense(_haar_unitary(1 << num_qubits, rng))
        start = int(rng.integers(1 << num_qubits))
        target = int(rng.integers(1 << num_qubits))
        plan = make_plan(expr, start, target)
        t = plan.transition
        pulled = plan.pulled_target()

        # Q|start> = (1 - 4|t|^2)|start> + 2 t U^-1|target>
        got = q_apply(basis_state(num_qubits, start), plan)
        want = (2.0 * t) * pulled.amps
        want[start] += 1.0 - 4.0 * abs(t) ** 2
        eq3 = float(np.abs(got.amps - want).max())

        # Q(U^-1|target>) = U^-1|target> - 2 conj(t) |start>
        got = q_apply(pulled.copy(), plan)
        want = pulled.amps.copy()
        want[start] -= 2.0 * t.conjugate()
        eq5 = float(np.abs(got.amps - want).max())

        m = int(rng.integers(1, m_max + 1))
        state = basis_state(num_qubits, start)
        coeffs = TwoLevelCoeffs(1.0 + 0.0j, 0.0 + 0.0j)
        recon_err = 0.0
        for _ in range(m):
            q_apply(state, plan)
            coeffs = two_level_step(coeffs, t)
            rebuilt = two_level_reconstruct(coeffs, plan)
            recon_err = max(
                recon_err, float(np.abs(rebuilt.amps - state.amps).max())
            )
        series.append(
            {
                "trial": trial,
                "u_tg_mag": abs(t),
                "m": m,
                "eq3_residual": eq3,
                "eq5_residual": eq5,
                "recon_max_err": recon_err,
            }
        )
    params = {"n": num_qubits, "trials": trials, "seed": seed, "m_max": m_max}
    summary = {
        "max_eq3_residual": max(r["eq3_residual"] for r in series),
        "max_eq5_residual": max(r["eq5_residual"] for r in series),
        "max_recon_err": max(r["recon_max_err"] for r in series),
    }
    return _record("verify", params, series, summary)
