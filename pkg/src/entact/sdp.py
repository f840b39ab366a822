"""Dense primal-dual interior-point solver for small semidefinite programs.

Problems are posed in linear-matrix-inequality form::

    minimize    c^T y
    subject to  F0_b + sum_i y_i F_ib  >= 0     for every block b

with Hermitian (possibly complex) block data.  The conic dual is::

    maximize    -sum_b tr(F0_b Z_b)
    subject to  sum_b tr(F_ib Z_b) = c_i,   Z_b >= 0

and the returned :class:`SdpSolution` carries both ``y`` and the dual
matrices ``Z_b``, so that weak/strong duality can be checked directly.

The iteration is an infeasible-start path-following method with the
HKM search direction and a Mehrotra predictor-corrector step.  Complex
blocks are mapped to real symmetric ones through :func:`real_embedding`
(scaled by 1/2 so that the trace pairing is preserved) and their dual
certificates are mapped back by averaging the two real copies.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
NUMERICAL_FAILURE = "numerical-failure"

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200
INFEASIBILITY_BOUND = 1e8
FEAS_TOL = 1e-8
STEP_FRACTION = 0.95


@dataclass
class SdpBlock:
    """One affine PSD constraint F0 + sum_i y_i F[i] >= 0."""

    f0: np.ndarray
    fs: np.ndarray  # shape (variable_dim, n, n)

    def __post_init__(self):
        self.f0 = as_matrix(self.f0)
        self.fs = np.asarray(self.fs, dtype=complex)
        n = self.f0.shape[0]
        if self.f0.shape != (n, n) or self.fs.ndim != 3 or self.fs.shape[1:] != (n, n):
            raise ValueError(f"inconsistent block shapes {self.f0.shape} and {self.fs.shape}")
        for k, mat in enumerate([self.f0, *self.fs]):
            dev = float(np.max(np.abs(mat - mat.conj().T))) if n else 0.0
            if dev > 1e-10:
                raise ValueError(f"block matrix {k} is not Hermitian (deviation {dev:.2e})")

    @property
    def size(self) -> int:
        return self.f0.shape[0]

    @property
    def is_complex(self) -> bool:
        return bool(np.any(np.abs(self.f0.imag) > 0) or np.any(np.abs(self.fs.imag) > 0))

    def evaluate(self, y: np.ndarray) -> np.ndarray:
        return self.f0 + np.tensordot(y, self.fs, axes=1)


@dataclass
class SdpProblem:
    variable_dim: int
    objective: np.ndarray
    blocks: list[SdpBlock]

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        if self.objective.shape != (self.variable_dim,):
            raise ValueError("objective length must equal variable_dim")
        for b in self.blocks:
            if b.fs.shape[0] != self.variable_dim:
                raise ValueError("every block needs one matrix per variable")


@dataclass
class SdpSolution:
    status: str
    primal_value: float
    dual_value: float
    y: np.ndarray
    dual_matrices: list[np.ndarray]
    gap: float
    iterations: int = 0
    primal_infeasibility: float = 0.0
    dual_infeasibility: float = 0.0
    complementarity: float = 0.0
    message: str = ""
    primal_blocks: list[np.ndarray] = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def real_embedding(h) -> np.ndarray:
    """[[Re h, -Im h], [Im h, Re h]] for Hermitian ``h``."""
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ValueError("real_embedding needs a square matrix")
    dev = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if dev > 1e-10:
        raise ValueError(f"real_embedding needs a Hermitian matrix (deviation {dev:.2e})")
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def _embed_stack(fs: np.ndarray) -> np.ndarray:
    re, im = fs.real, fs.imag
    top = np.concatenate([re, -im], axis=2)
    bot = np.concatenate([im, re], axis=2)
    return np.concatenate([top, bot], axis=1) / 2.0


def _unembed(z: np.ndarray) -> np.ndarray:
    n = z.shape[0] // 2
    z11, z12 = z[:n, :n], z[:n, n:]
    z21, z22 = z[n:, :n], z[n:, n:]
    out = ((z11 + z22) + 1j * (z21 - z12)) / 2.0
    return (out + out.conj().T) / 2


@dataclass
class _RealBlock:
    f0: np.ndarray
    fs: np.ndarray
    embedded: bool


def _realify(problem: SdpProblem) -> list[_RealBlock]:
    out = []
    for b in problem.blocks:
        if b.is_complex:
            f0 = _embed_stack(b.f0[None])[0]
            fs = _embed_stack(b.fs)
            out.append(_RealBlock(f0, fs, True))
        else:
            out.append(_RealBlock(b.f0.real.copy(), b.fs.real.copy(), False))
    return out


def _sym(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2


def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    """Largest alpha with x + alpha dx >= 0 (x positive definite)."""
    try:
        chol = np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        return 0.0
    linv = np.linalg.inv(chol)
    lam = np.linalg.eigvalsh(_sym(linv @ dx @ linv.T))[0]
    if lam >= 0:
        return np.inf
    return -1.0 / lam


def _lmi(blocks, y):
    return [b.f0 + np.tensordot(y, b.fs, axes=1) for b in blocks]


def _adjoint(blocks, mats):
    return sum(np.einsum("iab,ab->i", b.fs, m) for b, m in zip(blocks, mats))


def _residuals(blocks, c, y, s, z, norm_f0, norm_c):
    lmi = _lmi(blocks, y)
    r_s = [l - si for l, si in zip(lmi, s)]
    r_c = c - _adjoint(blocks, z)
    pobj = float(c @ y)
    dobj = -float(sum(np.sum(b.f0 * zi) for b, zi in zip(blocks, z)))
    comp = float(sum(np.sum(zi * si) for zi, si in zip(z, s)))
    p_inf = float(np.sqrt(sum(np.sum(r**2) for r in r_s)) / norm_f0)
    d_inf = float(np.linalg.norm(r_c) / norm_c)
    return r_s, r_c, pobj, dobj, comp, p_inf, d_inf


def solve(problem: SdpProblem, tolerance: float = DEFAULT_TOL,
          max_iterations: int = DEFAULT_MAX_ITER,
          feasibility_tolerance: float = FEAS_TOL) -> SdpSolution:
    """Solve ``problem`` to an absolute duality gap of ``tolerance``.

    Convergence needs the gap and the complementarity <Z, S> below
    ``tolerance`` and both relative infeasibilities below
    ``feasibility_tolerance``.  If the dual objective runs past 1e8 along an
    improving direction the LMI is declared infeasible and ``dual_matrices``
    holds the normalized improving ray.  Exhausting ``max_iterations`` (or a
    collapsed step) gives ``"numerical-failure"`` with the best iterate seen.
    """
    blocks = _realify(problem)
    c = problem.objective
    m = problem.variable_dim
    sizes = [b.f0.shape[0] for b in blocks]
    total = sum(sizes)

    scale = 1.0
    for b in blocks:
        if b.f0.size:
            scale = max(scale, float(np.max(np.abs(b.f0))))
        if b.fs.size:
            scale = max(scale, float(np.max(np.abs(b.fs))))
    if c.size:
        scale = max(scale, float(np.max(np.abs(c))))
    mu0 = 10.0 * (1.0 + scale)

    y = np.zeros(m)
    s = [mu0 * np.eye(n) for n in sizes]
    z = [mu0 * np.eye(n) for n in sizes]
    norm_f0 = 1.0 + np.sqrt(sum(np.sum(b.f0**2) for b in blocks))
    norm_c = 1.0 + np.linalg.norm(c)

    status = NUMERICAL_FAILURE
    message = "iteration limit reached"
    best, best_merit = None, np.inf
    it = 0
    for it in range(1, max_iterations + 1):
        r_s, r_c, pobj, dobj, comp, p_inf, d_inf = _residuals(
            blocks, c, y, s, z, norm_f0, norm_c)
        merit = max(abs(pobj - dobj) / tolerance, comp / tolerance,
                    p_inf / feasibility_tolerance, d_inf / feasibility_tolerance)
        if merit < best_merit:
            best, best_merit = (y, s, z, it), merit
        if merit <= 1.0:
            status, message = OPTIMAL, "converged"
            break
        if dobj > INFEASIBILITY_BOUND * max(1.0, np.linalg.norm(c)) and d_inf < 1e-3:
            status, message = INFEASIBLE, "dual objective unbounded: LMI infeasible"
            break
        if pobj < -INFEASIBILITY_BOUND * norm_f0 and p_inf < 1e-3:
            message = "primal objective unbounded below"
            break

        mu = comp / total
        try:
            s_inv = [_inv_pd(si) for si in s]
            # Schur complement M_ij = <F_i, Z F_j S^-1>
            schur = np.zeros((m, m))
            for b, zi, si_inv in zip(blocks, z, s_inv):
                t = np.einsum("ab,jbc,cd->jad", zi, b.fs, si_inv)
                schur += np.einsum("iab,jba->ij", b.fs, t)
            schur = (schur + schur.T) / 2
            chol = _factor(schur)
        except np.linalg.LinAlgError as exc:
            message = f"linear algebra failure: {exc}"
            break

        def direction(rc_mats):
            g = [rc @ si_inv - zi @ r @ si_inv
                 for rc, zi, r, si_inv in zip(rc_mats, z, r_s, s_inv)]
            rhs = _adjoint(blocks, g) - r_c
            dy = _chol_solve(chol, rhs)
            for _ in range(2):
                dy = dy + _chol_solve(chol, rhs - schur @ dy)
            ds = [np.tensordot(dy, b.fs, axes=1) + r for b, r in zip(blocks, r_s)]
            dz = [_sym(rc @ si_inv - zi @ dsi @ si_inv)
                  for rc, zi, dsi, si_inv in zip(rc_mats, z, ds, s_inv)]
            return dy, ds, dz

        def steps(ds, dz, frac):
            a_s = min([_max_step(si, dsi) for si, dsi in zip(s, ds)] + [np.inf])
            a_z = min([_max_step(zi, dzi) for zi, dzi in zip(z, dz)] + [np.inf])
            return min(1.0, frac * a_s), min(1.0, frac * a_z)

        # predictor
        zs = [zi @ si for zi, si in zip(z, s)]
        _, ds_a, dz_a = direction([-x for x in zs])
        a_s, a_z = steps(ds_a, dz_a, 1.0)
        mu_aff = sum(np.sum((zi + a_z * dzi) * (si + a_s * dsi))
                     for zi, dzi, si, dsi in zip(z, dz_a, s, ds_a)) / total
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0

        # corrector
        rc = [sigma * mu * np.eye(n) - x - dza @ dsa
              for n, x, dza, dsa in zip(sizes, zs, dz_a, ds_a)]
        dy, ds, dz = direction(rc)
        a_s, a_z = steps(ds, dz, STEP_FRACTION)
        log.debug("it %d p=%.10e d=%.10e comp=%.2e pinf=%.2e dinf=%.2e as=%.3f az=%.3f",
                  it, pobj, dobj, comp, p_inf, d_inf, a_s, a_z)
        if a_s <= 1e-14 and a_z <= 1e-14:
            message = "step length collapsed"
            break

        y = y + a_s * dy
        s = [_sym(si + a_s * dsi) for si, dsi in zip(s, ds)]
        z = [_sym(zi + a_z * dzi) for zi, dzi in zip(z, dz)]

    if status == NUMERICAL_FAILURE and best is not None:
        y, s, z, _ = best
    _, r_c, pobj, dobj, comp, p_inf, d_inf = _residuals(blocks, c, y, s, z, norm_f0, norm_c)

    dual_mats = []
    for b, zi in zip(blocks, z):
        zz = zi
        if status == INFEASIBLE:
            zz = zi / max(np.trace(zi), 1e-300)
        dual_mats.append(_unembed(zz) if b.embedded else zz.astype(complex))
    primal_blocks = [blk.evaluate(y) for blk in problem.blocks]
    log.debug("sdp %s after %d iterations: p=%.3e d=%.3e", status, it, pobj, dobj)
    return SdpSolution(
        status=status,
        primal_value=pobj,
        dual_value=dobj,
        y=y,
        dual_matrices=dual_mats,
        gap=abs(pobj - dobj),
        iterations=it,
        primal_infeasibility=p_inf,
        dual_infeasibility=d_inf,
        complementarity=comp,
        message=message,
        primal_blocks=primal_blocks,
    )


def _inv_pd(a: np.ndarray) -> np.ndarray:
    chol = np.linalg.cholesky(a)
    linv = np.linalg.inv(chol)
    return linv.T @ linv


def _factor(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if n == 0:
        return a
    reg = 0.0
    base = max(1.0, float(np.max(np.abs(np.diag(a)))))
    for _ in range(8):
        try:
            return np.linalg.cholesky(a + reg * np.eye(n))
        except np.linalg.LinAlgError:
            reg = base * 1e-14 if reg == 0.0 else reg * 100
    raise np.linalg.LinAlgError("Schur complement is not positive definite")


def _chol_solve(chol: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if chol.size == 0:
        return rhs
    w = np.linalg.solve(chol, rhs)
    return np.linalg.solve(chol.T, w)
