"""Command line entry point.

Every subcommand prints one JSON report per line on standard output and a
short table on standard error.  Exit status 0 means a report was produced
(its ``pass`` field carries the verdict), 2 means the input was rejected
and 3 means a numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Sequence

import numpy as np

from . import experiments as ex
from .discrim import INDETERMINATE, NO, YES, cost_threshold_bisection, perfect_ppt_feasibility
from .errors import InvalidState, PptError
from .hssh import catalysis_transform_check, ensemble_from_json, hssh_detect, random_detector_ensemble
from .jsonio import instance_from_json, load, state_from_json
from .multicopy import unambiguous_multicopy_value
from .povm import check_construction, thm15_povm, thm16_povm, thm19_povm, three_bell_povm
from .states import DiscriminationInstance, PureState, schmidt_form, tensor_with_resource

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

SPECTRUM_TOL = 1e-9


class NumericalFailure(Exception):
    """A solver finished without a usable answer."""


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}") from None


def _report(name: str, parameters: dict, result: dict, passed: bool, start: float, seed: int | None) -> ex.ExperimentReport:
    return ex.ExperimentReport(name, parameters, result, bool(passed), (time.perf_counter() - start) * 1000.0, seed)


def validated_spectrum(values: Sequence[float]) -> np.ndarray:
    """A Schmidt spectrum given on the command line: nonnegative,
    descending and summing to one."""
    lam = np.asarray(values, dtype=float)
    if lam.size < 1:
        raise InvalidState("the spectrum is empty")
    if np.any(lam < -SPECTRUM_TOL):
        raise InvalidState(f"spectrum {lam.tolist()} has negative entries")
    if np.any(np.diff(lam) > SPECTRUM_TOL):
        raise InvalidState(f"spectrum {lam.tolist()} is not in descending order")
    if abs(lam.sum() - 1.0) > SPECTRUM_TOL:
        raise InvalidState(f"spectrum {lam.tolist()} sums to {lam.sum():.12g}, not 1")
    lam = np.clip(lam, 0.0, None)
    return lam / lam.sum()


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> list[ex.ExperimentReport]:
    start = time.perf_counter()
    instance = instance_from_json(load(args.instance))
    params = {"instance": args.instance}
    if args.resource:
        resource = state_from_json(load(args.resource))
        if not isinstance(resource, PureState):
            raise InvalidState("the resource must be a pure state")
        instance = tensor_with_resource(instance, resource)
        params["resource"] = args.resource
    report = perfect_ppt_feasibility(instance)
    if report.feasible == INDETERMINATE:
        raise NumericalFailure(f"solver status {report.solver_status}: feasibility undecided")
    result = report.to_json(include_witness=args.witness)
    if args.expect:
        params["expect"] = args.expect
        passed = report.feasible == args.expect
    else:
        passed = report.feasible in (YES, NO)
    return [_report("check", params, result, passed, start, args.seed)]


THRESHOLD_FAMILIES: dict[str, tuple[Callable[[float], DiscriminationInstance], float, float, float]] = {
    "three-bell": (ex.three_bell_instance, 0.5, 1.0, ex.THREE_BELL_THRESHOLD),
}


def cmd_threshold(args) -> list[ex.ExperimentReport]:
    start = time.perf_counter()
    builder, lo, hi, expected = THRESHOLD_FAMILIES[args.family]
    if args.tol < 1e-5:
        raise InvalidState(f"--tol must be at least 1e-5, got {args.tol}")
    result = cost_threshold_bisection(builder, lo, hi, args.tol)
    err = abs(result.value - expected)
    payload = {**result.to_json(), "expected": expected, "error": err}
    passed = result.has_boundary and err <= max(args.tol, 1e-3)
    return [_report("threshold", {"family": args.family, "tol": args.tol}, payload, passed, start, args.seed)]


def _verify_payload(construction) -> tuple[dict, bool]:
    check = check_construction(construction)
    res = check.residuals
    payload = {
        "iota": construction.iota,
        "checks": {"povm": check.is_povm, "ppt": check.is_ppt, "perfect": check.perfect},
        "residuals": {
            "hermiticity": res.hermiticity,
            "completeness": res.completeness,
            "min_effect_eigenvalue": res.min_effect_eigenvalue,
            "min_transposed_eigenvalue": res.min_transposed_eigenvalue,
            "discrimination_error": check.discrimination_error,
        },
        "scalars": {k: float(v) for k, v in construction.params.scalars.items()},
    }
    return payload, check.passed


def cmd_verify(args) -> list[ex.ExperimentReport]:
    start = time.perf_counter()
    params: dict = {"construction": args.construction}
    if args.construction == "thm10":
        construction = three_bell_povm()
    elif args.construction == "thm19":
        dims = args.d or [2]
        if len(dims) != 1:
            raise InvalidState("thm19 takes a single --d")
        params["d"] = dims[0]
        construction = thm19_povm(dims[0])
    else:
        if args.lambdas:
            lam = validated_spectrum(args.lambdas)
        else:
            dims = args.d or [3]
            if len(dims) != 1 or dims[0] < 2:
                raise InvalidState("give --lambda or a single --d of at least 2")
            lam = ex.random_spectrum(np.random.default_rng(args.seed), dims[0])
        params["lambda"] = lam.tolist()
        psi = schmidt_form(lam)
        construction = thm15_povm(psi) if args.construction == "thm15" else thm16_povm(psi)
    payload, passed = _verify_payload(construction)
    return [_report(f"verify-{args.construction}", params, payload, passed, start, args.seed)]


def cmd_multicopy(args) -> list[ex.ExperimentReport]:
    out = []
    for d in args.d or [2, 3, 4]:
        for m in args.m or list(range(1, 9)):
            start = time.perf_counter()
            value = unambiguous_multicopy_value(d, m)
            out.append(_report("multicopy", {"d": d, "m": m}, {"value": value}, abs(value) <= 1e-8, start, args.seed))
    return out


def cmd_hssh(args) -> list[ex.ExperimentReport]:
    start = time.perf_counter()
    data = load(args.states)
    if not isinstance(data, dict) or "states" not in data:
        raise InvalidState("the states file needs a 'states' list")
    states = [state_from_json(s) for s in data["states"]]
    if not all(isinstance(s, PureState) for s in states):
        raise InvalidState("the flagged-superposition test needs pure states")
    ens = ensemble_from_json(load(args.ensemble))
    detected = hssh_detect(states, ens)
    params = {"states": args.states, "ensemble": args.ensemble}
    return [_report("hssh", params, {"detected": detected}, True, start, args.seed)]


def cmd_catalysis(args) -> list[ex.ExperimentReport]:
    start = time.perf_counter()
    base = args.seed
    failures = [base + k for k in range(args.samples) if not catalysis_transform_check(random_detector_ensemble(base + k))]
    payload = {"samples": args.samples, "failures": failures, "all_pass": not failures}
    return [_report("catalysis", {"samples": args.samples}, payload, not failures, start, args.seed)]


def cmd_entropy(args) -> list[ex.ExperimentReport]:
    out = []
    for d in args.d or [8, 16, 32, 64]:
        start = time.perf_counter()
        entropy = ex.resource_entropy(d)
        bound = float(2 * np.log2(d) / d)
        out.append(_report("entropy", {"d": d}, {"entropy": entropy, "bound": bound}, entropy <= bound, start, args.seed))
    return out


def cmd_sweep17(args) -> list[ex.ExperimentReport]:
    report = ex.maximal_resource_necessity(tuple(args.iota or (0.30, 0.40, 0.45, 0.49, 0.5)))
    report.seed = args.seed
    return [report]


def cmd_reproduce_all(args) -> list[ex.ExperimentReport]:
    chosen = set(args.only) if args.only else None
    out = []
    for criterion in ex.CRITERIA:
        if chosen is not None and criterion.number not in chosen:
            continue
        report = ex.run_criterion(criterion)
        report.result["claim"] = criterion.title
        out.append(report)
    return out


# ---------------------------------------------------------------------------
# plumbing


def build_parser() -> argparse.ArgumentParser:
    # The global flags are accepted before or after the subcommand.  The
    # subcommand copies suppress their defaults so they never overwrite a
    # value given before the subcommand name.
    parser = argparse.ArgumentParser(prog="ppt-discrim", description="PPT discrimination experiments")
    parser.add_argument("--seed", type=int, default=0, help="seed for every random draw (default 0)")
    parser.add_argument("--out", help="also write the reports to this file, one JSON object per line")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="perfect PPT discrimination of an instance file")
    p.add_argument("instance")
    p.add_argument("--resource", help="pure resource state file tensored onto every member")
    p.add_argument("--expect", choices=(YES, NO), help="expected verdict; sets the pass flag")
    p.add_argument("--witness", action="store_true", help="include the witness POVM in the report")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("threshold", parents=[common], help="bisect the resource threshold of a family")
    p.add_argument("--family", choices=sorted(THRESHOLD_FAMILIES), default="three-bell")
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("verify", parents=[common], help="build and verify an explicit PPT POVM")
    p.add_argument("construction", choices=("thm10", "thm15", "thm16", "thm19"))
    p.add_argument("--lambda", dest="lambdas", type=_floats, help="descending Schmidt spectrum, comma separated")
    p.add_argument("--d", type=_ints, help="local dimension")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("multicopy", parents=[common], help="many-copy unambiguous values")
    p.add_argument("--d", type=_ints)
    p.add_argument("--m", type=_ints)
    p.set_defaults(func=cmd_multicopy)

    p = sub.add_parser("hssh", parents=[common], help="flagged-superposition indistinguishability test")
    p.add_argument("--states", required=True, help="instance file of pure states")
    p.add_argument("--ensemble", required=True, help="detector ensemble file")
    p.set_defaults(func=cmd_hssh)

    p = sub.add_parser("catalysis", parents=[common], help="ququad transformation checks with and without a catalyst")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_catalysis)

    p = sub.add_parser("entropy", parents=[common], help="entropy of the dimension-d resource family")
    p.add_argument("--d", type=_ints)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("sweep17", parents=[common], help="two-qubit resource weight sweep")
    p.add_argument("--iota", type=_floats)
    p.set_defaults(func=cmd_sweep17)

    p = sub.add_parser("reproduce-all", parents=[common], help="run every acceptance criterion")
    p.add_argument("--only", type=_ints, help="criterion numbers to run")
    p.set_defaults(func=cmd_reproduce_all)
    return parser


def _table(reports: Sequence[ex.ExperimentReport]) -> str:
    rows = []
    for r in reports:
        label = r.result.get("claim") or json.dumps(r.parameters, default=str)[:60]
        number = r.result.get("criterion")
        tag = f"{number:>2} " if number is not None else ""
        rows.append(f"{tag}{'PASS' if r.passed else 'FAIL'}  {r.experiment:<24} {r.elapsed_ms:>10.1f} ms  {label}")
    return "\n".join(rows)


def _encode(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot encode {type(obj).__name__}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        reports = args.func(args)
    except (ArithmeticError, NumericalFailure, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PptError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    lines = [json.dumps(r.to_json(), default=_encode) for r in reports]
    for line in lines:
        print(line)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    print(_table(reports), file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
