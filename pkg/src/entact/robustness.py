"""Robustness of entanglement under the PPT relaxation, optimal witnesses, see-saw."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    BipartiteSpace,
    check_hermitian,
    haar_vectors,
    kron,
    make_rng,
    min_eigenvalue,
    partial_transpose,
)
from .sdp import DEFAULT_MAX_ITER, SdpBlock, SdpProblem, SdpSolution, solve
from .states import DensityMatrix, maximally_mixed

PPT_EXACT = "ppt-exact"
PPT_LOWER_BOUND = "ppt-lower-bound"

ROBUSTNESS_TOL = 1e-9


class SolverFailure(RuntimeError):
    def __init__(self, solution: SdpSolution):
        super().__init__(
            f"SDP solver returned {solution.status} after {solution.iterations} iterations "
            f"({solution.message}; gap={solution.gap:.3e})"
        )
        self.solution = solution


@dataclass
class RobustnessResult:
    value: float
    optimal_noise: DensityMatrix
    relaxation: str
    solver_gap: float
    solution: SdpSolution | None = None

    @property
    def status(self) -> str:
        return "optimal" if self.solution is None else self.solution.status


@dataclass
class Witness:
    operator: np.ndarray
    normalization_bound: float
    value_on_target: float
    space: BipartiteSpace


def relaxation_kind(space: BipartiteSpace) -> str:
    return PPT_EXACT if space.dimA * space.dimB <= 6 else PPT_LOWER_BOUND


def hermitian_basis(n: int) -> np.ndarray:
    """Orthonormal basis of n x n Hermitian matrices (trace inner product)."""
    basis = []
    for k in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[k, k] = 1.0
        basis.append(e)
    r = 1.0 / np.sqrt(2.0)
    for k in range(n):
        for l in range(k + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[k, l] = e[l, k] = r
            basis.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[k, l] = -1j * r
            e[l, k] = 1j * r
            basis.append(e)
    return np.array(basis)


def pure_state_robustness(schmidt) -> float:
    """Closed-form robustness (sum_i a_i)^2 - 1 of a pure state with Schmidt amplitudes a_i."""
    a = np.asarray(schmidt, dtype=float)
    return float(np.sum(a) ** 2 - 1.0)


def robustness_problem(sigma: DensityMatrix) -> SdpProblem:
    """minimize tr(P) s.t. P >= 0, P^TB >= 0, (sigma + P)^TB >= 0."""
    space = sigma.space
    n = space.dim
    basis = hermitian_basis(n)
    basis_pt = np.array([partial_transpose(b, space) for b in basis])
    c = np.array([np.trace(b).real for b in basis])
    zero = np.zeros((n, n), dtype=complex)
    blocks = [
        SdpBlock(zero, basis),
        SdpBlock(zero, basis_pt),
        SdpBlock(sigma.partial_transpose(), basis_pt),
    ]
    return SdpProblem(len(basis), c, blocks)


def robustness_ppt(sigma: DensityMatrix, tolerance: float = ROBUSTNESS_TOL,
                   max_iterations: int = DEFAULT_MAX_ITER) -> RobustnessResult:
    problem = robustness_problem(sigma)
    sol = solve(problem, tolerance=tolerance, max_iterations=max_iterations)
    if not sol.optimal:
        raise SolverFailure(sol)
    noise = sol.primal_blocks[0]
    noise = (noise + noise.conj().T) / 2
    s = max(0.0, float(np.trace(noise).real))
    if s > 0.0:
        pi = DensityMatrix(noise / np.trace(noise).real, sigma.space)
    else:
        pi = maximally_mixed(sigma.space)
    return RobustnessResult(s, pi, relaxation_kind(sigma.space), sol.gap, sol)


def relative_robustness(sigma: DensityMatrix, pi: DensityMatrix, tol: float = 1e-12) -> float:
    """Least s >= 0 with (sigma + s pi)^TB >= 0, or ``inf`` when none exists.

    The noise state must be PPT (it stands in for a separable state).
    """
    if sigma.space != pi.space:
        raise ValueError(f"space mismatch: {sigma.space} vs {pi.space}")
    a = sigma.partial_transpose()
    q = pi.partial_transpose()
    a = (a + a.conj().T) / 2
    q = (q + q.conj().T) / 2
    if min_eigenvalue(a) >= -tol:
        return 0.0
    qw, qv = np.linalg.eigh(q)
    if qw[0] < -1e-9:
        raise ValueError(f"noise state is not PPT (min PT eigenvalue {qw[0]:.3e})")
    scale = max(1.0, float(qw[-1]))
    rng_mask = qw > 1e-12 * scale
    if np.all(rng_mask):
        # generalized eigenproblem a v = -s q v via q^{-1/2} a q^{-1/2}
        q_isqrt = (qv / np.sqrt(qw)) @ qv.conj().T
        lam = np.linalg.eigvalsh(q_isqrt @ a @ q_isqrt)[0]
        return max(0.0, float(-lam))
    # singular noise: a must already be PSD on ker(q); then bisect on the range
    kernel = qv[:, ~rng_mask]
    if min_eigenvalue(kernel.conj().T @ a @ kernel) < -1e-10:
        return float("inf")
    hi = 1.0
    while min_eigenvalue(a + hi * q) < -1e-10:
        hi *= 2.0
        if hi > 1e12:
            return float("inf")
    lo = 0.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if min_eigenvalue(a + mid * q) >= -1e-13:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-13 * max(1.0, hi):
            break
    return hi


def _top_eigvec(h: np.ndarray):
    w, v = np.linalg.eigh(h)
    top = w[-1]
    cands = np.nonzero(w >= top - 1e-12 * max(1.0, abs(top)))[0]
    if cands.size > 1:
        k = cands[np.argmax(np.abs(v[0, cands]))]
    else:
        k = cands[0]
    vec = v[:, k]
    nz = np.nonzero(np.abs(vec) > 1e-14)[0]
    if nz.size:
        vec = vec * (abs(vec[nz[0]]) / vec[nz[0]])
    return float(top), vec


def seesaw_max_product(h, space: BipartiteSpace, restarts: int = 100, seed: int = 0,
                       max_iter: int = 1000):
    """Lower bound on max <a,b| h |a,b> over product vectors, by alternating eigenvectors.

    Returns ``(value, argmax)``; ``argmax`` is the best product state found.
    Restarts draw their starting vectors from one seeded stream in order, so a
    larger ``restarts`` only extends the search.
    """
    h = check_hermitian(h)
    space.check(h)
    t = h.reshape(space.dimA, space.dimB, space.dimA, space.dimB)
    rng = make_rng(seed)
    best_val, best_a, best_b = -np.inf, None, None
    for _ in range(max(1, restarts)):
        b = haar_vectors(space.dimB, 1, rng)[0]
        val = -np.inf
        for _ in range(max_iter):
            ha = np.einsum("ijkl,j,l->ik", t, b.conj(), b)
            _, a = _top_eigvec((ha + ha.conj().T) / 2)
            hb = np.einsum("ijkl,i,k->jl", t, a.conj(), a)
            new_val, b = _top_eigvec((hb + hb.conj().T) / 2)
            improved = new_val - val
            val = new_val
            if improved < 1e-12:
                break
        if val > best_val:
            best_val, best_a, best_b = val, a, b
    rho = kron(np.outer(best_a, best_a.conj()), np.outer(best_b, best_b.conj()))
    return float(best_val), DensityMatrix((rho + rho.conj().T) / 2, space)


def witness_from_dual(sigma: DensityMatrix, result: RobustnessResult,
                      restarts: int = 100, seed: int = 0) -> Witness:
    """Optimal PPT witness W = Z^TB from the dual block of (sigma + P)^TB >= 0.

    Dual stationarity gives I - W = Z_1 + Z_2^TB with Z_1, Z_2 >= 0, so
    tr(W pi) <= 1 on PPT states; tr(W sigma) equals minus the robustness at
    optimality.  The see-saw bound is recorded as an independent check.
    """
    space = sigma.space
    if sigma.is_ppt() or result.solution is None:
        zero = np.zeros((space.dim, space.dim), dtype=complex)
        return Witness(zero, 0.0, 0.0, space)
    if not result.solution.optimal:
        raise SolverFailure(result.solution)
    z = result.solution.dual_matrices[2]
    w = partial_transpose(z, space)
    w = (w + w.conj().T) / 2
    value = float(np.trace(w @ sigma.matrix).real)
    bound, _ = seesaw_max_product(w, space, restarts=restarts, seed=seed)
    return Witness(w, bound, value, space)
