"""Command line front end.

One command per search algorithm or experiment; stdout carries exactly one
JSON document or one TSV table, diagnostics go to stderr. Runs with a fixed
--seed are byte-identical. Basis indices are decimal or binary (0b...)
literals; angles accept plain floats or pi fractions like 5pi/6.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .amplify import make_plan, run
from .lab import (
    conjugator_study,
    phase_study,
    residual_suite,
    sensitivity_study,
    sweep_iterations,
    to_tsv,
    ExperimentRecord,
    to_json,
)
from .qstate import DomainError, sample
from .searches import (
    GateSequence,
    NearSearchSpec,
    boost_algorithm,
    search_from,
    search_near,
    search_wh,
)
from .unitaries import parse_index, walsh_hadamard

RESIDUAL_LIMIT = 1e-9


def parse_angle(text):
    """Float radians, or a pi fraction: pi, -pi, 2pi/3, 5pi/6, pi/2."""
    t = text.strip().lower().replace(" ", "")
    if "pi" not in t:
        return float(t)
    head, _, tail = t.partition("pi")
    head = head.rstrip("*")
    if head in ("", "+"):
        num = 1.0
    elif head == "-":
        num = -1.0
    else:
        num = float(head)
    if tail == "":
        den = 1.0
    elif tail.startswith("/"):
        den = float(tail[1:])
    else:
        raise ValueError(f"bad angle literal {text!r}")
    return num * math.pi / den


def _angle_list(text):
    return [parse_angle(tok) for tok in text.split(",") if tok.strip()]


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _index(text):
    return parse_index(text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qamplify",
        description="generalized amplitude amplification at desk scale",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, gamma=False, word=False):
        p.add_argument("--n", type=int, required=True, help="qubit count")
        p.add_argument("--seed", type=int, default=0, help="rng seed")
        p.add_argument("--format", choices=("json", "tsv"), default="json")
        p.add_argument("--out", default="-", help="output path, - for stdout")
        p.add_argument("--dense-cap", type=int, default=12, dest="dense_cap")
        if gamma:
            p.add_argument("--gamma", type=_index, default=0,
                           help="start basis index")
        if word:
            p.add_argument("--word", type=_index, required=True,
                           help="known word (start basis index)")

    p = sub.add_parser("search-wh", help="exhaustive search from the 0 state")
    common(p)
    p.add_argument("--tau", type=_index, required=True, help="target index")
    p.add_argument("--m", type=int, default=None,
                   help="iterations (default: the optimum)")

    p = sub.add_parser("search-from", help="exhaustive search from any state")
    common(p, gamma=True)
    p.add_argument("--tau", type=_index, required=True)
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("search-near",
                       help="search at a known Hamming distance")
    common(p, word=True)
    p.add_argument("--tau", type=_index, required=True)
    p.add_argument("--k", type=int, required=True,
                   help="exact Hamming distance to the target")
    p.add_argument("--alpha", type=float, default=None,
                   help="bias parameter (default: n/k)")
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("boost", help="amplify a gate-list circuit")
    common(p, gamma=True)
    p.add_argument("--tau", type=_index, required=True)
    p.add_argument("--circuit", required=True, help="gate-list file")
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("sweep", help="success vs iteration count")
    common(p, gamma=True)
    p.add_argument("--tau", type=_index, required=True)
    p.add_argument("--m-max", type=int, required=True, dest="m_max")

    p = sub.add_parser("sensitivity", help="perturbed-transform study")
    common(p)
    p.add_argument("--tau", type=_index, required=True)
    p.add_argument("--deltas", type=_float_list, required=True,
                   help="comma-separated perturbation angles")
    p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("phases", help="non-inversion oracle phases")
    common(p)
    p.add_argument("--tau", type=_index, required=True)
    p.add_argument("--phis", type=_angle_list, required=True,
                   help="comma-separated phases (pi fractions allowed)")
    p.add_argument("--m-max", type=int, default=100, dest="m_max")

    p = sub.add_parser("conjugator", help="conjugated-oracle equivalence")
    common(p, gamma=True)
    p.add_argument("--tau", type=_index, required=True)
    p.add_argument("--m-max", type=int, default=None, dest="m_max")

    p = sub.add_parser("verify", help="two-level identity residual suite")
    common(p)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--m-max", type=int, default=200, dest="m_max")

    return parser


def _search_result(plan, m, seed):
    iterations = plan.m_star if m is None else m
    final, success = run(plan, iterations)
    outcome = sample(final, np.random.default_rng(seed))
    return iterations, {
        "u_tg_mag": abs(plan.transition),
        "theta": plan.theta,
        "m_star": plan.m_star,
        "success": success,
        "sampled_outcome": int(outcome),
    }


def _emit_result(args, params, result, stream):
    if args.format == "json":
        doc = {
            "experiment": args.command,
            "params": params,
            "meta": {"tool": "qamplify", "version": __version__},
            "result": result,
        }
        stream.write(json.dumps(doc, indent=2) + "\n")
    else:
        record = ExperimentRecord(args.command, params, {}, [result])
        stream.write(to_tsv(record))


def _emit_record(args, record, stream):
    record.params.setdefault("command", args.command)
    record.params.setdefault("seed", args.seed)
    if args.format == "json":
        stream.write(to_json(record) + "\n")
    else:
        stream.write(to_tsv(record))


def _run_command(args, stream):
    cmd = args.command
    if cmd == "search-wh":
        plan = search_wh(args.n, args.tau)
        m, result = _search_result(plan, args.m, args.seed)
        params = {"command": cmd, "n": args.n, "gamma": 0, "tau": args.tau,
                  "m": m, "seed": args.seed}
        _emit_result(args, params, result, stream)
        return 0
    if cmd == "search-from":
        plan = search_from(args.n, args.gamma, args.tau)
        m, result = _search_result(plan, args.m, args.seed)
        params = {"command": cmd, "n": args.n, "gamma": args.gamma,
                  "tau": args.tau, "m": m, "seed": args.seed}
        _emit_result(args, params, result, stream)
        return 0
    if cmd == "search-near":
        spec = NearSearchSpec(args.n, args.word, args.k, args.alpha)
        try:
            plan = search_near(spec, args.tau)
        except DomainError as exc:
            if spec.alpha is None and spec.k == spec.num_qubits:
                raise DomainError(
                    f"{exc} (try search-wh or search-from)"
                ) from None
            raise
        m, result = _search_result(plan, args.m, args.seed)
        params = {"command": cmd, "n": args.n, "word": args.word,
                  "tau": args.tau, "k": args.k,
                  "alpha": spec.resolved_alpha(), "m": m, "seed": args.seed}
        _emit_result(args, params, result, stream)
        return 0
    if cmd == "boost":
        with open(args.circuit) as handle:
            circuit = GateSequence.from_text(handle.read(), args.n)
        plan = boost_algorithm(circuit, args.gamma, args.tau)
        m, result = _search_result(plan, args.m, args.seed)
        params = {"command": cmd, "n": args.n, "gamma": args.gamma,
                  "tau": args.tau, "circuit": args.circuit, "m": m,
                  "seed": args.seed}
        _emit_result(args, params, result, stream)
        return 0
    if cmd == "sweep":
        plan = make_plan(walsh_hadamard(args.n), args.gamma, args.tau)
        record = sweep_iterations(plan, args.m_max)
        _emit_record(args, record, stream)
        return 0
    if cmd == "sensitivity":
        record = sensitivity_study(args.n, args.tau, args.deltas, args.trials,
                                   args.seed)
        _emit_record(args, record, stream)
        return 0
    if cmd == "phases":
        record = phase_study(args.n, args.tau, args.phis, args.m_max)
        _emit_record(args, record, stream)
        return 0
    if cmd == "conjugator":
        record = conjugator_study(args.n, args.gamma, args.tau, args.seed,
                                  args.m_max, dense_cap=args.dense_cap)
        _emit_record(args, record, stream)
        return 0
    if cmd == "verify":
        record = residual_suite(args.n, args.trials, args.seed, args.m_max)
        _emit_record(args, record, stream)
        worst = max(record.summary.values())
        if worst > RESIDUAL_LIMIT:
            print(f"verify: residual {worst:.3e} exceeds {RESIDUAL_LIMIT:.0e}",
                  file=sys.stderr)
            return 1
        return 0
    raise DomainError(f"unknown command {cmd!r}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.out == "-":
            return _run_command(args, sys.stdout)
        with open(args.out, "w") as stream:
            return _run_command(args, stream)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
