"""Command-line front end.

    entact robustness STATE.json [--tol T]
    entact teleport STATE.json [--dim D] [--samples N] [--seed S]
    entact activate RHO.json SIGMA.json [--seed S] [--restarts K]
    entact verify [--seed S] [--quick]

Exit codes: 0 success, 1 numerical or solver failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import activation, robustness, teleport
from .io import InputError, dumps, encode_matrix, load_state, report_document
from .states import DensityMatrix

EXIT_OK, EXIT_NUMERICAL, EXIT_INPUT = 0, 1, 2
RATIO_SLACK = 1e-5


class NumericalError(RuntimeError):
    pass


def robustness_results(sigma: DensityMatrix, tol: float, restarts: int = 100, seed: int = 0):
    try:
        res = robustness.robustness_ppt(sigma, tolerance=tol)
    except robustness.SolverFailure as exc:
        raise NumericalError(str(exc)) from exc
    wit = robustness.witness_from_dual(sigma, res, restarts=restarts, seed=seed)
    sol = res.solution
    results = {
        "value": res.value,
        "relaxation": res.relaxation,
        "status": res.status,
        "solverGap": res.solver_gap,
        "primalValue": sol.primal_value,
        "dualValue": sol.dual_value,
        "optimalNoise": encode_matrix(res.optimal_noise.matrix),
        "witness": {
            "matrix": encode_matrix(wit.operator),
            "normalizationBound": wit.normalization_bound,
            "valueOnTarget": wit.value_on_target,
        },
        "tolerance": tol,
    }
    return results, {"iterations": sol.iterations, "seeds": {"seesaw": seed}}


def teleport_results(rho: DensityMatrix, d: int | None, samples: int | None, seed: int):
    try:
        rep = teleport.teleport_report(rho, d)
    except ValueError as exc:
        raise InputError("dims", str(exc)) from exc
    results = {
        "d": rep.d,
        "entanglementFidelity": rep.entanglement_fidelity,
        "teleportFidelity": rep.teleport_fidelity,
        "classicalThreshold": rep.classical_threshold,
        "beatsClassical": rep.beats_classical,
    }
    if samples is not None:
        try:
            mean, err = teleport.mc_average_fidelity(rho, rep.d, samples, seed)
        except ValueError as exc:
            raise InputError("samples", str(exc)) from exc
        results["monteCarlo"] = {"mean": mean, "stderr": err, "samples": samples}
    return results, {"seeds": {"monteCarlo": seed} if samples else {}}


def activate_results(rho: DensityMatrix, sigma: DensityMatrix, fp, tol: float,
                     restarts: int, seed: int):
    if fp is not None and fp.m * fp.m != sigma.dim:
        raise InputError("fourParty", f"rho declares m = {fp.m} but sigma has dimension {sigma.dim}")
    d = fp.d if fp is not None else None
    try:
        rep = activation.build_activation_report(rho, sigma, d, restarts=restarts, seed=seed)
    except activation.DegenerateSpreadError:
        raise
    except ValueError as exc:  # dimension mismatch
        raise InputError("dims", str(exc)) from exc
    try:
        res = robustness.robustness_ppt(sigma, tolerance=tol)
    except robustness.SolverFailure as exc:
        raise NumericalError(str(exc)) from exc
    wit = activation.protocol_witness(rho, rep.d, rep.gd, m=rep.m, sigma=sigma,
                                      restarts=restarts, seed=seed)
    results = {
        "m": rep.m,
        "d": rep.d,
        "successProbability": rep.success_probability,
        "fidelityWithSigma": rep.fidelity_with_sigma,
        "fidelityFailureBranch": rep.fidelity_failure_branch,
        "teleportFidelity": rep.teleport_fidelity,
        "classicalThreshold": rep.classical_threshold,
        "gd": rep.gd,
        "activationRatio": rep.activation_ratio,
        "detectionValue": rep.detection_value,
        "witnessValueOnSigma": wit.value_on_target,
        "robustnessOfSigma": res.value,
        "relaxation": res.relaxation,
        "ratioWithinRobustness": bool(rep.activation_ratio <= res.value + RATIO_SLACK),
        "rhoIsPPT": bool(rho.is_ppt()),
    }
    return results, {"iterations": res.solution.iterations,
                     "seeds": {"seesaw": seed}, "restarts": restarts}


def _emit(doc: dict, out: str | None) -> None:
    text = dumps(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_robustness(args) -> int:
    sigma, _ = load_state(args.input)
    t0 = time.perf_counter()
    results, prov = robustness_results(sigma, args.tol, seed=args.seed)
    prov["wallTime"] = time.perf_counter() - t0
    inputs = {"input": args.input, "dims": [sigma.space.dimA, sigma.space.dimB], "tol": args.tol}
    _emit(report_document("robustness", inputs, results, prov), args.out)
    return EXIT_OK


def _cmd_teleport(args) -> int:
    rho, _ = load_state(args.input)
    t0 = time.perf_counter()
    results, prov = teleport_results(rho, args.dim, args.samples, args.seed)
    prov["wallTime"] = time.perf_counter() - t0
    inputs = {"input": args.input, "d": results["d"], "samples": args.samples, "seed": args.seed}
    _emit(report_document("teleport", inputs, results, prov), args.out)
    return EXIT_OK


def _cmd_activate(args) -> int:
    rho, fp = load_state(args.rho)
    sigma, _ = load_state(args.sigma)
    t0 = time.perf_counter()
    results, prov = activate_results(rho, sigma, fp, args.tol, args.restarts, args.seed)
    prov["wallTime"] = time.perf_counter() - t0
    inputs = {"rho": args.rho, "sigma": args.sigma, "tol": args.tol,
              "restarts": args.restarts, "seed": args.seed}
    _emit(report_document("activate", inputs, results, prov), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_all

    outcomes = run_all(seed=args.seed, quick=args.quick, echo=print)
    failed = [o.name for o in outcomes if not o.passed]
    results = {
        "passed": not failed,
        "failed": failed,
        "criteria": [{"id": o.ident, "name": o.name, "passed": o.passed, "detail": o.detail}
                     for o in outcomes],
    }
    doc = report_document("verify", {"seed": args.seed, "quick": args.quick}, results,
                          {"seeds": {"verify": args.seed}})
    if args.out:
        _emit(doc, args.out)
    if failed:
        print("FAILED: " + ", ".join(failed), file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entact", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol=True):
        if tol:
            p.add_argument("--tol", type=float, default=robustness.ROBUSTNESS_TOL,
                           help="SDP gap tolerance")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = sub.add_parser("robustness", help="PPT-relaxed robustness and optimal witness")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=_cmd_robustness)

    p = sub.add_parser("teleport", help="teleportation fidelity of a d x d resource")
    p.add_argument("input")
    p.add_argument("--dim", "-d", type=int, default=None)
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo cross-check samples")
    common(p, tol=False)
    p.set_defaults(func=_cmd_teleport)

    p = sub.add_parser("activate", help="activation report for a (rho, sigma) pair")
    p.add_argument("rho")
    p.add_argument("sigma")
    p.add_argument("--restarts", type=int, default=50)
    common(p)
    p.set_defaults(func=_cmd_activate)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true")
    common(p, tol=False)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except activation.DegenerateSpreadError as exc:
        print(f"numerical error [degenerate-gd]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NumericalError as exc:
        print(f"numerical error [solver]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
