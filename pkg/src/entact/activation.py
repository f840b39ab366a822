"""Activation protocol: the SLOCC swap map, its trace identity, the fixed LOCC map
built from it, the detection functional, the protocol witness and the spread G_d.

Layout: sigma acts on A1 B1 (m x m); rho acts on A2 A3 B2 B3 in that factor
order, with dim A2 = dim B2 = m and dim A3 = dim B3 = d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import BipartiteSpace, as_matrix, max_entangled_projector, permute_subsystems
from .robustness import Witness, seesaw_max_product
from .states import DensityMatrix, FourPartySpace
from .teleport import classical_threshold, tele_fidelity_from_F

DEGENERATE_SPREAD = 1e-10


class DegenerateSpreadError(ValueError):
    """G_d is not positive, so the activation quotient is undefined."""

    def __init__(self, gd: float):
        super().__init__(f"degenerate G_d = {gd:.3e}: no separable helper pushes the "
                         "fidelity below the classical threshold")
        self.gd = gd


@dataclass
class ActivationReport:
    m: int
    d: int
    success_probability: float
    fidelity_with_sigma: float
    fidelity_failure_branch: float
    teleport_fidelity: float
    classical_threshold: float
    gd: float
    activation_ratio: float
    detection_value: float
    restarts: int


def _infer_split(rho: DensityMatrix, sigma: DensityMatrix | None, d: int | None,
                 space: FourPartySpace | None) -> FourPartySpace:
    if sigma is not None:
        m = int(round(np.sqrt(sigma.dim)))
        if m * m != sigma.dim or sigma.space.dimA != m:
            raise ValueError(f"sigma of dimension {sigma.dim} is not an m x m state")
        if space is not None and space.m != m:
            raise ValueError(f"sigma has m = {m} but rho declares m = {space.m}")
    elif space is not None:
        m = space.m
    else:
        raise ValueError("need sigma or an explicit four-party space to fix m")
    if space is not None:
        if d is not None and d != space.d:
            raise ValueError(f"d = {d} conflicts with the declared d = {space.d}")
        d = space.d
    if d is None:
        side = int(round(np.sqrt(rho.dim)))
        if side * side != rho.dim or side % m:
            raise ValueError(f"rho of dimension {rho.dim} does not split for m = {m}")
        d = side // m
    split = FourPartySpace(m, d)
    if rho.dim != split.dim:
        raise ValueError(f"rho has dimension {rho.dim}, expected {split.dim} for m={m}, d={d}")
    return split


def pair_to_four_party(op, m: int, d: int) -> np.ndarray:
    """Reorder an operator on (A2 B2)(A3 B3) to the A2 A3 B2 B3 layout."""
    return permute_subsystems(op, [m, m, d, d], [0, 2, 1, 3])


def slocc_activation_apply(rho: DensityMatrix, sigma: DensityMatrix, d: int | None = None,
                           space: FourPartySpace | None = None):
    """Project A1A2 and B1B2 onto normalized maximally entangled states.

    Returns the unnormalized A3 B3 output and its trace (the success
    probability).
    """
    fp = _infer_split(rho, sigma, d, space)
    m, d = fp.m, fp.d
    r = rho.matrix.reshape(m, d, m, d, m, d, m, d)
    s = sigma.matrix.reshape(m, m, m, m)
    out = np.einsum("kalbKcLe,klKL->abce", r, s).reshape(d * d, d * d) / (m * m)
    out = (out + out.conj().T) / 2
    return out, float(np.trace(out).real)


def embed_sigma_transpose(sigma: DensityMatrix, z, m: int, d: int) -> np.ndarray:
    """sigma^T (x) z placed on A2 A3 B2 B3."""
    z = as_matrix(z)
    return pair_to_four_party(np.kron(sigma.matrix.T, z), m, d)


def verify_swap_identity(rho: DensityMatrix, sigma: DensityMatrix, z,
                            d: int | None = None):
    """Both sides of tr[A x B (rho x sigma) A^dag x B^dag z] = c tr[rho (sigma^T x z)].

    Returns ``(lhs, rhs, constant)``; the constant is ``nan`` when rhs vanishes.
    """
    fp = _infer_split(rho, sigma, d, None)
    z = as_matrix(z)
    if z.shape != (fp.d**2, fp.d**2):
        raise ValueError(f"z must be {fp.d**2}x{fp.d**2}, got {z.shape}")
    out, _ = slocc_activation_apply(rho, sigma, fp.d)
    lhs = complex(np.trace(out @ z))
    rhs = complex(np.trace(rho.matrix @ embed_sigma_transpose(sigma, z, fp.m, fp.d)))
    if abs(lhs.imag) < 1e-12 and abs(rhs.imag) < 1e-12:
        lhs, rhs = lhs.real, rhs.real
    constant = lhs / rhs if abs(rhs) > 1e-14 else float("nan")
    if isinstance(constant, complex) and abs(constant.imag) < 1e-12:
        constant = constant.real
    return lhs, rhs, constant


def failure_branch_state(d: int) -> np.ndarray:
    """|00>, a product state with overlap 1/d with phi_d."""
    out = np.zeros((d * d, d * d), dtype=complex)
    out[0, 0] = 1.0
    return out


def lambda_output(rho: DensityMatrix, sigma: DensityMatrix, d: int | None = None) -> np.ndarray:
    """Normalized output of the trace-preserving map: success branch plus failure branch."""
    out, p = slocc_activation_apply(rho, sigma, d)
    dd = int(round(np.sqrt(out.shape[0])))
    return out + (1.0 - p) * failure_branch_state(dd)


def locc_lambda_fidelity(rho: DensityMatrix, sigma: DensityMatrix, d: int | None = None) -> float:
    out, p = slocc_activation_apply(rho, sigma, d)
    dd = int(round(np.sqrt(out.shape[0])))
    return float(np.trace(out @ max_entangled_projector(dd)).real) + (1.0 - p) / dd


def detection_value(rho: DensityMatrix, sigma: DensityMatrix, d: int | None = None) -> float:
    """tr[rho (sigma^T (x) (I/d - phi_d))]; negative exactly when the map beats 1/d."""
    fp = _infer_split(rho, sigma, d, None)
    y = np.eye(fp.d**2) / fp.d - max_entangled_projector(fp.d)
    return float(np.trace(rho.matrix @ embed_sigma_transpose(sigma, y, fp.m, fp.d)).real)


def detection_operator(rho: DensityMatrix, m: int, d: int) -> np.ndarray:
    """Operator D on A1 B1 with tr(D s) = tr[rho (s^T (x) (I/d - phi_d))] for every s.

    Partial contraction of rho against I/d - phi_d on A3 B3, transposed on A2 B2.
    """
    fp = _infer_split(rho, None, d, FourPartySpace(m, d))
    y = (np.eye(d * d) / d - max_entangled_projector(d)).reshape(d, d, d, d)
    r = rho.matrix.reshape(m, d, m, d, m, d, m, d)
    # D[(k' l'), (k l)] = sum rho[k a l b; k' a' l' b'] y[a' b'; a b]
    dmat = np.einsum("kalbKcLe,ceab->KLkl", r, y).reshape(fp.m**2, fp.m**2)
    return (dmat + dmat.conj().T) / 2


def _spread_operator(rho: DensityMatrix, m: int, d: int) -> np.ndarray:
    # tr(h pi) = f_class - f_d(rho x pi, Lambda) for unit-trace pi
    return d / ((d + 1) * m * m) * detection_operator(rho, m, d)


def spread_gd(rho: DensityMatrix, d: int, restarts: int = 50, seed: int = 0,
              m: int | None = None) -> float:
    """See-saw lower bound on G_d = max over separable pi of f_class - f_d(rho x pi, Lambda)."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if m is None:
        side = int(round(np.sqrt(rho.dim)))
        m = side // d
    h = _spread_operator(rho, m, d)
    value, _ = seesaw_max_product(h, BipartiteSpace(m, m), restarts=restarts, seed=seed)
    return value


def protocol_witness(rho: DensityMatrix, d: int, gd: float, m: int | None = None,
                     sigma: DensityMatrix | None = None, restarts: int = 50,
                     seed: int = 0) -> Witness:
    """W on A1 B1 with tr(W s) = -(f_d(rho x s, Lambda) - f_class) / G_d for states s."""
    if gd <= 0:
        raise DegenerateSpreadError(gd)
    if m is None:
        side = int(round(np.sqrt(rho.dim)))
        m = side // d
    w = _spread_operator(rho, m, d) / gd
    space = BipartiteSpace(m, m)
    bound, _ = seesaw_max_product(w, space, restarts=restarts, seed=seed)
    target = float("nan") if sigma is None else float(np.trace(w @ sigma.matrix).real)
    return Witness(w, bound, target, space)


def build_activation_report(rho: DensityMatrix, sigma: DensityMatrix, d: int | None = None,
                            restarts: int = 50, seed: int = 0) -> ActivationReport:
    fp = _infer_split(rho, sigma, d, None)
    m, d = fp.m, fp.d
    gd = spread_gd(rho, d, restarts=restarts, seed=seed, m=m)
    if gd <= DEGENERATE_SPREAD:
        raise DegenerateSpreadError(gd)
    _, p = slocc_activation_apply(rho, sigma, d)
    F = locc_lambda_fidelity(rho, sigma, d)
    f = tele_fidelity_from_F(min(1.0, max(0.0, F)), d)
    fc = classical_threshold(d)
    return ActivationReport(
        m=m,
        d=d,
        success_probability=p,
        fidelity_with_sigma=F,
        fidelity_failure_branch=1.0 / d,
        teleport_fidelity=f,
        classical_threshold=fc,
        gd=gd,
        activation_ratio=(f - fc) / gd,
        detection_value=detection_value(rho, sigma, d),
        restarts=restarts,
    )


def swapping_resource(m: int = 2, d: int = 2, noise: float = 0.0) -> DensityMatrix:
    """phi_m on A2B2 times phi_d on A3B3, optionally mixed with I/m^2 (x) |01><01|.

    The admixture gives separable helpers a way to push the fidelity below
    the classical threshold, which keeps G_d positive.
    """
    core = np.kron(max_entangled_projector(m), max_entangled_projector(d))
    ket = np.zeros(d * d)
    ket[1] = 1.0
    off = np.kron(np.eye(m * m) / (m * m), np.outer(ket, ket))
    op = pair_to_four_party((1 - noise) * core + noise * off, m, d)
    return DensityMatrix(op, FourPartySpace(m, d).bipartite)


def ppt_activator(alpha: float, u=None, v=None) -> DensityMatrix:
    """PPT (hence useless-alone) four-party resource for m = d = 2.

    alpha phi (x) phi + (1 - alpha) Q (x) Q with Q = (I - phi)/3 on the pairs
    A2B2 and A3B3, followed by local unitaries u on A2 and v on B2.  The
    partial transpose is PSD for 0 <= alpha <= 1/4.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    phi = max_entangled_projector(2)
    q = (np.eye(4) - phi) / 3
    pair = alpha * np.kron(phi, phi) + (1 - alpha) * np.kron(q, q)
    if u is not None or v is not None:
        u = np.eye(2) if u is None else as_matrix(u)
        v = np.eye(2) if v is None else as_matrix(v)
        loc = np.kron(np.kron(u, v), np.eye(4))
        pair = loc @ pair @ loc.conj().T
    op = pair_to_four_party(pair, 2, 2)
    return DensityMatrix((op + op.conj().T) / 2, FourPartySpace(2, 2).bipartite)
