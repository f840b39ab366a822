"""Acceptance suite: every criterion as a function returning a pass/fail outcome.

Used by ``entact verify`` and by ``tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from . import activation as act
from .io import parse_state_document, state_document
from .linalg import BipartiteSpace, make_rng, max_entangled_projector
from .robustness import pure_state_robustness, robustness_ppt, witness_from_dual
from .states import DensityMatrix, isotropic, pure_from_schmidt, random_density, random_product
from .teleport import entanglement_fidelity, mc_average_fidelity, tele_fidelity_from_F

QUBITS = BipartiteSpace(2, 2)

# Pass thresholds, one entry per check; tests/test_acceptance.py pins these values.
TOL = {
    "classical_threshold": 1e-12,
    "classical_threshold_seconds": 1.0,
    "monte_carlo_stderrs": 4.0,
    "monte_carlo_floor": 1e-12,
    "monte_carlo_seconds": 60.0,
    "pure_state": 1e-6,
    "pure_state_seconds": 10.0,
    "separable": 1e-8,
    "duality_gap": 1e-7,
    "witness_value": 1e-6,
    "witness_normalization": 1e-6,
    "trace_identity": 1e-10,
    "detection_zero": 1e-12,
    "ratio_slack": 1e-5,
    "witness_path": 1e-9,
    "convexity": 1e-6,
    "mixing_path_end": 1e-6,
    "mixing_path_rise": 1e-7,
    "suite_seconds": 300.0,
    "quick_suite_seconds": 30.0,
}


@dataclass
class Outcome:
    ident: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def _random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def entangled_qubit_states(count: int, seed: int) -> list[DensityMatrix]:
    """Seeded random two-qubit states with PT min eigenvalue below -1e-3."""
    out, k = [], 0
    while len(out) < count:
        s = random_density(4, seed * 7919 + k, QUBITS)
        k += 1
        if s.pt_min_eigenvalue() < -1e-3:
            out.append(s)
    return out


def brute_force_swap_output(rho: DensityMatrix, sigma: DensityMatrix, m: int, d: int):
    """(A x B)(rho x sigma)(A x B)^dag with explicit projection matrices."""
    phi = np.sqrt(m) * max_entangled_projector(m)[:, 0].conj()  # unnormalized
    phi = phi / np.linalg.norm(phi)
    # A: A1 A2 A3 -> A3,  <phi_{A1A2}| (x) I_{A3}
    a_op = np.kron(phi.conj()[None, :], np.eye(d))
    full = np.kron(rho.matrix, sigma.matrix)  # order A2 A3 B2 B3 A1 B1
    dims = [m, d, m, d, m, m]
    perm = [4, 0, 1, 5, 2, 3]  # -> A1 A2 A3 B1 B2 B3
    t = full.reshape(dims + dims).transpose(perm + [p + 6 for p in perm])
    n = m * m * d
    full = t.reshape(n * n, n * n)
    ab = np.kron(a_op, a_op)
    return ab @ full @ ab.conj().T


def crit_classical_threshold(seed: int, quick: bool) -> Outcome:
    from .cli import teleport_results

    t0 = time.perf_counter()
    errs = []
    for d in (2, 3, 4):
        doc = json.loads(json.dumps(state_document(isotropic(d, 1.0 / d))))
        rho, _ = parse_state_document(doc)
        res, _ = teleport_results(rho, d, None, seed)
        errs.append(abs(res["teleportFidelity"] - 2.0 / (d + 1)))
    dt = time.perf_counter() - t0
    fast = dt < TOL["classical_threshold_seconds"]
    ok = max(errs) <= TOL["classical_threshold"] and fast
    return Outcome(1, "classical threshold", ok,
                   f"max |f - 2/(d+1)| = {max(errs):.2e}, within time limit: {fast}")


def crit_fidelity_law(seed: int, quick: bool) -> Outcome:
    samples = 10_000 if quick else 100_000
    t0 = time.perf_counter()
    worst = 0.0
    for d in (2, 3):
        for k in range(10):
            rho = random_density(d * d, seed * 1000 + 100 * d + k, BipartiteSpace(d, d))
            expected = tele_fidelity_from_F(entanglement_fidelity(rho), d)
            for twirl in (True, False):
                mean, err = mc_average_fidelity(rho, d, samples, seed + k, twirl=twirl)
                # twirled channel is depolarizing: per-sample spread is rounding only
                allowed = max(TOL["monte_carlo_stderrs"] * err, TOL["monte_carlo_floor"])
                worst = max(worst, abs(mean - expected) / allowed)
    dt = time.perf_counter() - t0
    fast = dt < TOL["monte_carlo_seconds"]
    ok = worst <= 1.0 and fast
    return Outcome(2, "fidelity law (Monte Carlo)", ok,
                   f"max |mean - law| / (4 stderr) = {worst:.3f}, {samples} samples, "
                   f"within time limit: {fast}")


def crit_pure_state_oracle(seed: int, quick: bool) -> Outcome:
    t0 = time.perf_counter()
    angles = np.arange(9) * np.pi / 32  # last point is the Bell state
    worst = 0.0
    for theta in angles:
        a, b = np.cos(theta), np.sin(theta)
        oracle = pure_state_robustness([a, b])
        worst = max(worst, abs(oracle - 2 * a * b))
        worst = max(worst, abs(robustness_ppt(pure_from_schmidt([a, b])).value - oracle))
    dt = time.perf_counter() - t0
    fast = dt < TOL["pure_state_seconds"]
    ok = worst <= TOL["pure_state"] and fast
    return Outcome(3, "pure-state robustness oracle", ok,
                   f"max error {worst:.2e}, within time limit: {fast}")


def crit_separable_baseline(seed: int, quick: bool) -> Outcome:
    worst = 0.0
    for k in range(20):
        space = QUBITS if k % 2 == 0 else BipartiteSpace(2, 3)
        worst = max(worst, robustness_ppt(random_product(space, seed * 100 + k)).value)
    return Outcome(4, "separable baseline", worst <= TOL["separable"], f"max robustness {worst:.2e}")


def _witness_data(seed: int):
    data = []
    for sigma in entangled_qubit_states(20, seed):
        res = robustness_ppt(sigma)
        wit = witness_from_dual(sigma, res, restarts=100, seed=seed)
        data.append((sigma, res, wit))
    return data


def crit_strong_duality(seed: int, quick: bool, data=None) -> Outcome:
    data = data or _witness_data(seed)
    gap = max(r.solution.gap for _, r, _ in data)
    mismatch = max(abs(w.value_on_target + r.value) for _, r, w in data)
    ok = gap <= TOL["duality_gap"] and mismatch <= TOL["witness_value"]
    return Outcome(5, "strong duality", ok,
                   f"max gap {gap:.2e}, max |tr(W sigma) + R| {mismatch:.2e}")


def crit_witness_normalization(seed: int, quick: bool, data=None) -> Outcome:
    data = data or _witness_data(seed)
    bound = max(w.normalization_bound for _, _, w in data)
    return Outcome(6, "witness normalization", bound <= 1 + TOL["witness_normalization"],
                   f"max see-saw tr(W pi) = {bound:.9f}")


def crit_swap_identity(seed: int, quick: bool) -> Outcome:
    rng = make_rng(seed + 17)
    m = d = 2
    worst = 0.0
    for k in range(20):
        rho = random_density(16, seed * 31 + k, BipartiteSpace(4, 4))
        sigma = random_density(4, seed * 37 + k, QUBITS)
        z = _random_hermitian(rng, d * d)
        lhs, rhs, _ = act.verify_swap_identity(rho, sigma, z)
        brute = float(np.trace(brute_force_swap_output(rho, sigma, m, d) @ z).real)
        worst = max(worst, abs(lhs - rhs / m**2), abs(brute - lhs))
    return Outcome(7, "swap trace identity (1/m^2)", worst <= TOL["trace_identity"],
                   f"max deviation {worst:.2e}")


def detection_pairs(seed: int, count: int = 20):
    rng = make_rng(seed + 23)
    pairs = []
    for k in range(count):
        sigma = random_density(4, seed * 41 + k, QUBITS)
        if k % 2 == 0:
            weight = 0.5 + 0.5 * k / count
            sigma = DensityMatrix(weight * max_entangled_projector(2)
                                  + (1 - weight) * sigma.matrix, QUBITS)
        if k % 3 == 0:
            rho = random_density(16, seed * 43 + k, BipartiteSpace(4, 4))
        elif k % 3 == 1:
            rho = act.swapping_resource(2, 2, noise=0.05 * (k % 5))
        else:
            rho = act.ppt_activator(0.25, _random_unitary(rng, 2), _random_unitary(rng, 2))
        pairs.append((rho, sigma))
    return pairs


def _sign(x: float) -> int:
    return 0 if abs(x) < TOL["detection_zero"] else (1 if x > 0 else -1)


def crit_detection(seed: int, quick: bool) -> Outcome:
    bad = 0
    signs = set()
    for rho, sigma in detection_pairs(seed):
        dv = act.detection_value(rho, sigma)
        fid = act.locc_lambda_fidelity(rho, sigma)
        signs.add(_sign(dv))
        bad += _sign(dv) != _sign(0.5 - fid)  # 1/d with d = 2
    return Outcome(8, "detection equivalence", bad == 0,
                   f"{bad} sign mismatches over 20 pairs; signs seen {sorted(signs)}")


def crit_upper_bound(seed: int, quick: bool) -> Outcome:
    rng = make_rng(seed + 29)
    excess, mismatch, n, positive = -np.inf, 0.0, 0, 0
    for sigma in entangled_qubit_states(10, seed + 1):
        R = robustness_ppt(sigma).value
        for _ in range(2):
            rho = act.ppt_activator(0.25, _random_unitary(rng, 2), _random_unitary(rng, 2))
            assert rho.is_ppt()  # PPT resources cannot beat the classical fidelity
            rep = act.build_activation_report(rho, sigma, restarts=50, seed=seed)
            wit = act.protocol_witness(rho, 2, rep.gd, sigma=sigma, restarts=50, seed=seed)
            excess = max(excess, rep.activation_ratio - R)
            mismatch = max(mismatch, abs(-wit.value_on_target - rep.activation_ratio))
            positive += rep.activation_ratio > 0
            n += 1
    ok = excess <= TOL["ratio_slack"] and mismatch <= TOL["witness_path"]
    return Outcome(9, "activation ratio <= robustness", ok,
                   f"max(ratio - R) = {excess:.3e} over {n} instances ({positive} with ratio > 0), "
                   f"witness path mismatch {mismatch:.2e}")


def crit_convexity(seed: int, quick: bool) -> Outcome:
    worst = -np.inf
    for k in range(20):
        s1 = random_density(4, seed * 53 + 2 * k, QUBITS)
        s2 = random_density(4, seed * 53 + 2 * k + 1, QUBITS)
        r1, r2 = robustness_ppt(s1).value, robustness_ppt(s2).value
        for lam in (0.25, 0.5, 0.75):
            mix = DensityMatrix(lam * s1.matrix + (1 - lam) * s2.matrix, QUBITS)
            worst = max(worst, robustness_ppt(mix).value - lam * r1 - (1 - lam) * r2)
    path_ok, path_end, path_rise = True, 0.0, 0.0
    for sigma in entangled_qubit_states(3, seed + 2):
        res = robustness_ppt(sigma)
        s, pi = res.value, res.optimal_noise.matrix
        values = []
        for t in np.linspace(0.0, s, 6):
            mix = DensityMatrix((sigma.matrix + t * pi) / (1 + t), QUBITS)
            values.append(robustness_ppt(mix).value)
        path_rise = max(path_rise, float(np.max(np.diff(values))))
        path_end = max(path_end, values[-1])
        path_ok &= (path_rise <= TOL["mixing_path_rise"]
                    and path_end <= TOL["mixing_path_end"])
    ok = worst <= TOL["convexity"] and path_ok
    return Outcome(10, "convexity and mixing path", ok,
                   f"max convexity excess {worst:.2e}; path max rise {path_rise:.2e}, "
                   f"end value {path_end:.2e}")


def run_all(seed: int = 0, quick: bool = False, echo=None) -> list[Outcome]:
    t_start = time.perf_counter()
    outcomes = []
    data = None

    def record(fn, *extra):
        t0 = time.perf_counter()
        out = fn(seed, quick, *extra)
        out.seconds = time.perf_counter() - t0
        outcomes.append(out)
        if echo is not None:
            echo(f"{'PASS' if out.passed else 'FAIL'} [{out.ident:2d}] {out.name}: "
                 f"{out.detail} ({out.seconds:.2f}s)")

    record(crit_classical_threshold)
    record(crit_fidelity_law)
    record(crit_pure_state_oracle)
    record(crit_separable_baseline)
    data = _witness_data(seed)
    record(crit_strong_duality, data)
    record(crit_witness_normalization, data)
    record(crit_swap_identity)
    record(crit_detection)
    record(crit_upper_bound)
    record(crit_convexity)
    total = time.perf_counter() - t_start
    limit = TOL["quick_suite_seconds"] if quick else TOL["suite_seconds"]
    outcomes.append(Outcome(11, "suite runtime", total < limit,
                            f"{'quick' if quick else 'full'} run under {limit:.0f}s"))
    if echo is not None:
        echo(f"{'PASS' if total < limit else 'FAIL'} [11] suite runtime: {total:.1f}s "
             f"(limit {limit:.0f}s)")
    return outcomes
