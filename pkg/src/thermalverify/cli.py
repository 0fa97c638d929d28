"""Command-line surface: reproducible runs emitting JSON records and CSV sweeps.

Single-value subcommands print a JSON document {"manifest": ..., "result": ...};
sweep subcommands write plain CSV (schema documented in the README, column
order stable) and put the manifest in a sidecar file next to the output, or
on stderr when writing CSV to stdout. Given the same parameters and seed,
outputs are reproducible byte for byte, timestamps excluded.

Exit codes: 0 success, 2 invalid input, 3 internal check failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .graphs import GraphSpec, load_hypergraph, ring_graph
from .identities import check_alternating, check_even, check_odd
from .oracle import dense_expectation, thermal_density
from .pauli import (leading_half_setting, parse_setting, stabilizer_product,
                    generalized_product, try_to_pauli)
from .sampler import ProtocolConfig, run_protocol
from .supremacy import build_family, certify, optimal_setting
from .thermal import (beta_from_temperature, deviation_leading_order, error_bounds,
                      fidelity, flip_probability, half_weight_expectation,
                      invert_temperature, sample_size, setting_expectation,
                      union_bound)

WORKERS_ENV = "THERMALVERIFY_WORKERS"


class CheckFailure(RuntimeError):
    """An internal consistency check did not hold (exit code 3)."""


@dataclass(frozen=True)
class RunManifest:
    """Provenance block serialized alongside every output."""

    subcommand: str
    parameters: dict
    seed: int | None
    version: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "seed": self.seed,
            "version": self.version,
            "timestamp": self.timestamp,
        }


def _manifest(args: argparse.Namespace) -> RunManifest:
    params = {}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "output", "subcommand"):
            continue
        if isinstance(value, Path):
            value = str(value)
        if isinstance(value, float) and math.isinf(value):
            value = "infinity"
        params[key] = value
    return RunManifest(
        subcommand=args.subcommand,
        parameters=params,
        seed=getattr(args, "seed", None),
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit_json(args, result: dict) -> None:
    doc = {"manifest": _manifest(args).to_dict(), "result": result}
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)


def _emit_csv(args, schema: str, header: list[str], rows: list[list]) -> None:
    doc = _manifest(args).to_dict()
    doc["csv_schema"] = schema
    manifest = json.dumps(doc, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
        Path(str(args.output) + ".manifest.json").write_text(manifest + "\n")
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        print(manifest, file=sys.stderr)


def _resolve_beta(args) -> float:
    if args.beta is not None:
        if args.beta < 0:
            raise ValueError(f"--beta must be >= 0, got {args.beta}")
        return float(args.beta)
    return beta_from_temperature(args.temperature)


def _add_thermal_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta", type=float, default=None,
                       help="inverse temperature (k_B = 1); 'inf' means T = 0")
    group.add_argument("--temperature", type=float, default=None,
                       help="temperature (k_B = 1); 0 means the ideal state")


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    if workers < 1:
        raise ValueError(f"{WORKERS_ENV} must be >= 1, got {workers}")
    return workers


def _setting_for(spec, selector_bits) -> "PauliString":
    """Reduce a selector to the measured Pauli word for a (hyper)graph."""
    h = spec.as_hypergraph()
    if not h.e3:
        graph = GraphSpec(h.n, edges=h.e2)
        return stabilizer_product(graph, selector_bits)
    word = try_to_pauli(generalized_product(h, selector_bits))
    if word is None:
        raise ValueError(
            "selector does not reduce to a Pauli word on this hypergraph; "
            "choose a selector whose CZ tails cancel (e.g. 0101...01 on the "
            "restricted family)"
        )
    return word


def cmd_expectation(args) -> int:
    spec = load_hypergraph(args.graph)
    beta = _resolve_beta(args)
    n = spec.n
    if args.setting is not None:
        bits = parse_setting(args.setting, n)
        wt = sum(bits)
    elif args.wt is not None:
        wt = args.wt
    else:
        if n % 2:
            raise ValueError("default half-weight mode requires even n; pass --wt or --setting")
        wt = n // 2
    expectation = setting_expectation(n, wt, beta)
    fid = fidelity(n, beta)
    result = {
        "n": n,
        "wt": wt,
        "beta": "infinity" if math.isinf(beta) else beta,
        "p_flip": flip_probability(beta),
        "expectation": expectation,
        "fidelity": fid,
        "deviation": abs(fid - expectation),
        "deviation_leading_order": deviation_leading_order(n, wt, beta),
    }
    if n >= 4 and n % 2 == 0:
        bounds = error_bounds(n, beta, args.epsilon, wt=wt)
        result["fine_bound"] = bounds.fine_bound
        result["coarse_bound"] = bounds.coarse_bound
        result["union_bound"] = bounds.union_bound
    _emit_json(args, result)
    return 0


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise ValueError(f"need at least one trial, got {args.trials}")
    spec = load_hypergraph(args.graph)
    beta = _resolve_beta(args)
    n = spec.n
    if args.setting is not None:
        bits = parse_setting(args.setting, n)
    else:
        bits = leading_half_setting(n)
    setting = _setting_for(spec, bits)
    expectation = setting_expectation(n, setting.xy_support, beta)
    fid = fidelity(n, beta)

    header = ["row", "trial", "seed", "f_est", "n_samples", "plus_count", "minus_count",
              "expectation", "fidelity", "fine_bound", "within_epsilon",
              "within_fine_bound", "pass_rate_epsilon", "pass_rate_fine_bound",
              "target_rate"]
    rows = []
    hits_epsilon = 0
    hits_bound = 0
    for trial in range(args.trials):
        config = ProtocolConfig(epsilon=args.epsilon, delta=args.delta,
                                n_samples=args.samples, seed=args.seed + trial,
                                workers=args.workers)
        report = run_protocol(spec, setting, beta, config)
        fine = report.bound_report.fine_bound if report.bound_report else None
        within_eps = abs(report.f_est - expectation) <= args.epsilon
        within_bound = (abs(fid - report.f_est) <= fine) if fine is not None else None
        hits_epsilon += within_eps
        hits_bound += bool(within_bound)
        rows.append(["trial", trial, args.seed + trial, report.f_est, report.n_samples,
                     report.plus_count, report.minus_count, expectation, fid, fine,
                     within_eps, within_bound, None, None, None])
    rows.append(["summary", None, None, None, None, None, None, expectation, fid, None,
                 None, None, hits_epsilon / args.trials, hits_bound / args.trials,
                 1.0 - args.delta])
    _emit_csv(args, "verify-v1", header, rows)
    return 0


def cmd_curves(args) -> int:
    if not args.sizes:
        raise ValueError("need at least one size")
    for n in args.sizes:
        if n < 4 or n % 2:
            raise ValueError(f"curve sizes must be even and >= 4, got {n}")
    if args.points < 2:
        raise ValueError(f"need at least 2 grid points, got {args.points}")
    if not 0 < args.tmin < args.tmax:
        raise ValueError(f"need 0 < tmin < tmax, got {args.tmin}, {args.tmax}")
    header = ["n", "T", "p_beta", "F", "F_est_infinite", "F_ub"]
    rows = []
    step = (args.tmax - args.tmin) / (args.points - 1)
    for n in args.sizes:
        for k in range(args.points):
            temperature = args.tmin + k * step
            beta = 1.0 / temperature
            rows.append([n, temperature, flip_probability(beta), fidelity(n, beta),
                         half_weight_expectation(n, beta), union_bound(n, beta)])
    _emit_csv(args, "curves-v1", header, rows)
    return 0


def cmd_sweep_wt(args) -> int:
    n = args.n
    if n < 2 or n % 2 or n > 40:
        raise ValueError(f"sweep requires even n in [2, 40], got {n}")
    if not args.betas:
        raise ValueError("need at least one beta")
    header = ["n", "beta", "wt", "expectation", "fidelity", "deviation",
              "leading_term", "is_argmin"]
    rows = []
    for beta in args.betas:
        if beta < 0:
            raise ValueError(f"beta must be >= 0, got {beta}")
        fid = fidelity(n, beta)
        deviations = []
        for wt in range(n + 1):
            expectation = setting_expectation(n, wt, beta)
            deviations.append((abs(expectation - fid), wt, expectation))
        argmin_wt = min(deviations)[1]
        for dev, wt, expectation in deviations:
            rows.append([n, beta, wt, expectation, fid, dev,
                         deviation_leading_order(n, wt, beta), wt == argmin_wt])
    _emit_csv(args, "sweep-wt-v1", header, rows)
    return 0


def cmd_identities(args) -> int:
    reports = {
        "odd": check_odd(args.kmax),
        "even": check_even(args.kmax),
        "alternating": check_alternating(args.kmax),
    }
    failures = [list(f) for rep in reports.values() for f in rep.failures]
    result = {
        "k_max": args.kmax,
        "ok": not failures,
        "failures": failures,
        "checks": {name: rep.ok for name, rep in reports.items()},
    }
    _emit_json(args, result)
    if failures:
        raise CheckFailure(f"{len(failures)} identity checks failed")
    return 0


def cmd_oracle_check(args) -> int:
    if args.nmax < 2 or args.nmax > 10:
        raise ValueError(f"oracle check supports nmax in [2, 10], got {args.nmax}")
    worst = 0.0
    checked = 0
    for n in range(2, args.nmax + 1):
        graph = ring_graph(n) if n >= 3 else GraphSpec(2, edges=frozenset({(1, 2)}))
        for beta in args.betas:
            rho = thermal_density(graph, beta)
            for selector in range(1 << n):
                bits = [(selector >> b) & 1 for b in range(n)]
                word = stabilizer_product(graph, bits)
                exact = dense_expectation(rho, word)
                closed = setting_expectation(n, sum(bits), beta)
                worst = max(worst, abs(exact - closed))
                checked += 1
    result = {
        "n_max": args.nmax,
        "betas": args.betas,
        "settings_checked": checked,
        "max_abs_error": worst,
        "tolerance": args.tolerance,
        "ok": worst <= args.tolerance,
    }
    _emit_json(args, result)
    if worst > args.tolerance:
        raise CheckFailure(
            f"closed form deviates from the dense oracle by {worst:.3e} "
            f"(tolerance {args.tolerance:.1e})"
        )
    return 0


def _estimate_from_report(path: str) -> float:
    """Pull f_est out of a previously emitted JSON document (a serialized
    VerificationReport, or any record nesting one under "result"/"report")."""
    doc = json.loads(Path(path).read_text())
    node = doc
    for key in ("result", "report"):
        if isinstance(node, dict) and "f_est" not in node and key in node:
            node = node[key]
    if not isinstance(node, dict) or "f_est" not in node:
        raise ValueError(f"no f_est field found in report {path}")
    return float(node["f_est"])


def cmd_certify_iqp(args) -> int:
    result: dict = {}
    if args.report is not None:
        decision = certify(_estimate_from_report(args.report), args.n,
                           allow_small_n=args.allow_small_n)
    elif args.f_est is not None:
        decision = certify(args.f_est, args.n, allow_small_n=args.allow_small_n)
    else:
        beta = _resolve_beta(args)
        inst = build_family(args.n)
        setting = optimal_setting(inst)
        config = ProtocolConfig(epsilon=args.epsilon, delta=args.delta,
                                n_samples=args.samples, seed=args.seed,
                                workers=args.workers)
        report = run_protocol(inst.spec, setting, beta, config)
        decision = certify(report.f_est, args.n, allow_small_n=args.allow_small_n)
        result["report"] = report.to_dict()
    result["decision"] = decision.to_dict()
    result["l1_target"] = 1.0 / 192.0
    _emit_json(args, result)
    return 0


def cmd_estimate_temperature(args) -> int:
    beta = invert_temperature(args.n, args.f_est, from_fidelity=args.from_fidelity)
    result = {
        "n": args.n,
        "observed": args.f_est,
        "mode": "fidelity" if args.from_fidelity else "expectation",
        "beta": "infinity" if math.isinf(beta) else beta,
        "temperature": 0.0 if math.isinf(beta) else 1.0 / beta,
        "p_flip": flip_probability(beta),
    }
    _emit_json(args, result)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermalverify",
        description="Single-setting fidelity estimation for thermal graph and "
                    "hypergraph states: closed forms, Monte-Carlo protocol runs, "
                    "brute-force oracles, and certified-sampling decisions.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("expectation", help="closed-form expectation, fidelity, and bounds")
    p.add_argument("--graph", required=True, help="JSON graph/hypergraph file")
    p.add_argument("--setting", default=None, help="selector bits, e.g. 1100")
    p.add_argument("--wt", type=int, default=None, help="selector Hamming weight")
    p.add_argument("--epsilon", type=float, default=0.0, help="statistical accuracy for bounds")
    _add_thermal_arguments(p)
    p.add_argument("--output", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_expectation)

    p = sub.add_parser("verify", help="Monte-Carlo protocol trials, CSV per trial")
    p.add_argument("--graph", required=True, help="JSON graph/hypergraph file")
    p.add_argument("--setting", default=None, help="selector bits (default 1..10..0 at half weight)")
    _add_thermal_arguments(p)
    p.add_argument("--epsilon", type=float, required=True, help="accuracy target")
    p.add_argument("--delta", type=float, required=True, help="failure probability")
    p.add_argument("--samples", type=int, default=None,
                   help="samples per trial (default: derived from epsilon and delta)")
    p.add_argument("--seed", type=int, default=0, help="base seed; trial t uses seed + t")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--output", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("curves", help="fidelity / estimator limit / union bound over a T grid")
    p.add_argument("--sizes", type=_int_list, default=[50, 100],
                   help="comma-separated even qubit counts (default 50,100)")
    p.add_argument("--tmin", type=float, default=0.01)
    p.add_argument("--tmax", type=float, default=2.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("sweep-wt", help="deviation from fidelity per setting weight")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--betas", type=_float_list, required=True,
                   help="comma-separated inverse temperatures")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_sweep_wt)

    p = sub.add_parser("identities", help="exact combinatorial identity checks")
    p.add_argument("--kmax", type=int, default=40)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("oracle-check", help="closed forms vs dense thermal oracle")
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--betas", type=_float_list, default=[0.2, 0.5, 1.0, 2.0])
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("certify-iqp", help="accept/reject rule for certified sampling")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f-est", dest="f_est", type=float, default=None,
                   help="evaluate the rule on a given estimate (no simulation)")
    p.add_argument("--report", default=None,
                   help="evaluate the rule on the f_est of a JSON report file")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--beta", type=float, default=None)
    group.add_argument("--temperature", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--delta", type=float, default=1e-2)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--allow-small-n", action="store_true",
                   help="evaluate below the full-scale regime n >= 4e5")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_certify_iqp)

    p = sub.add_parser("estimate-temperature", help="invert an estimate back to beta and T")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f-est", dest="f_est", type=float, required=True)
    p.add_argument("--from-fidelity", action="store_true",
                   help="interpret the value as a fidelity instead of a setting expectation")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_estimate_temperature)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "certify-iqp":
        given = [v is not None for v in (args.f_est, args.report,
                                         args.beta if args.temperature is None else args.temperature)]
        if sum(given) != 1:
            parser.error("certify-iqp needs exactly one of --f-est, --report, "
                         "or --beta/--temperature")
    try:
        return args.func(args)
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 3
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
