"""Teleportation pipeline: isotropic twirl, standard d-dimensional teleportation,
fidelity law and its Monte Carlo cross-check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    BipartiteSpace,
    PureState,
    haar_vectors,
    make_rng,
    max_entangled,
    max_entangled_projector,
)
from .states import DensityMatrix, isotropic


@dataclass
class TeleportReport:
    d: int
    entanglement_fidelity: float
    teleport_fidelity: float
    classical_threshold: float
    beats_classical: bool


def classical_threshold(d: int) -> float:
    if d < 2:
        raise ValueError("classical threshold needs d >= 2")
    return 2.0 / (d + 1)


def _square_dim(rho: DensityMatrix, d: int | None) -> int:
    n = rho.dim
    if d is None:
        d = int(round(np.sqrt(n)))
    if d * d != n or rho.space.dimA * rho.space.dimB != d * d:
        raise ValueError(f"state of dimension {n} is not a {d}x{d} system")
    return d


def entanglement_fidelity(rho: DensityMatrix, d: int | None = None) -> float:
    d = _square_dim(rho, d)
    return float(np.trace(rho.matrix @ max_entangled_projector(d)).real)


def tele_fidelity_from_F(F: float, d: int) -> float:
    if not -1e-12 <= F <= 1 + 1e-12:
        raise ValueError(f"entanglement fidelity {F} outside [0, 1]")
    if d < 2:
        raise ValueError("d must be >= 2")
    return (F * d + 1.0) / (d + 1.0)


def teleport_report(rho: DensityMatrix, d: int | None = None) -> TeleportReport:
    d = _square_dim(rho, d)
    F = min(1.0, max(0.0, entanglement_fidelity(rho, d)))
    f = tele_fidelity_from_F(F, d)
    fc = classical_threshold(d)
    return TeleportReport(d, F, f, fc, f > fc + 1e-12)


def twirl_isotropic(rho: DensityMatrix, d: int | None = None) -> DensityMatrix:
    """U x U* twirl, in closed form: the isotropic state with the same overlap with phi_d."""
    d = _square_dim(rho, d)
    F = min(1.0, max(0.0, entanglement_fidelity(rho, d)))
    return isotropic(d, F)


def weyl_operators(d: int) -> list[np.ndarray]:
    """X^a Z^b for a, b in range(d), ordered by (a, b)."""
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    ops = []
    for a in range(d):
        xa = np.linalg.matrix_power(shift, a)
        for b in range(d):
            ops.append(xa @ np.linalg.matrix_power(clock, b))
    return ops


def _teleport_operator(resource: np.ndarray, inp: np.ndarray, d: int) -> np.ndarray:
    # Input C, resource A (Alice) B (Bob); Bell measurement on C A with
    # |Phi_ab> = (X^a Z^b x I)|phi_d>, correction X^a Z^b on B.
    phi = max_entangled(d).amplitudes.reshape(d, d)
    joint = np.einsum("ij,klmn->ikljmn", inp, resource.reshape(d, d, d, d))
    out = np.zeros((d, d), dtype=complex)
    for u in weyl_operators(d):
        bell = u @ phi  # bell[c, a] = <c a|Phi_ab>
        t = np.einsum("ca,cabdef->bdef", bell.conj(), joint)
        branch = np.einsum("bdef,de->bf", t, bell)
        out += u @ branch @ u.conj().T
    return out


def standard_teleport_channel(resource: DensityMatrix, psi: PureState) -> np.ndarray:
    d = _square_dim(resource, None)
    if psi.dim != d:
        raise ValueError(f"input of dimension {psi.dim} does not match resource d={d}")
    out = _teleport_operator(resource.matrix, psi.projector(), d)
    return (out + out.conj().T) / 2


def teleport_transfer_matrix(resource: DensityMatrix) -> np.ndarray:
    """Matrix T with vec(out) = T vec(in) for the standard protocol (row-major vec)."""
    d = _square_dim(resource, None)
    cols = []
    for k in range(d * d):
        e = np.zeros(d * d, dtype=complex)
        e[k] = 1.0
        cols.append(_teleport_operator(resource.matrix, e.reshape(d, d), d).reshape(-1))
    return np.array(cols).T


def mc_average_fidelity(resource: DensityMatrix, d: int, samples: int, seed: int,
                        streams: int = 8, twirl: bool = True):
    """Haar-averaged fidelity of twirl + standard teleportation, by Monte Carlo.

    After the twirl the channel is depolarizing, so every input has the same
    fidelity and the standard error is at rounding level.  ``twirl=False``
    teleports through the raw resource instead, which has the same average
    but a genuine spread over inputs.

    The sample budget is split over ``streams`` independent seeded streams that
    are reduced in a fixed order.  Returns ``(mean, stderr)``.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    d = _square_dim(resource, d)
    if twirl:
        resource = twirl_isotropic(resource, d)
    transfer = teleport_transfer_matrix(resource)
    children = np.random.SeedSequence(seed).spawn(streams)
    counts = [samples // streams + (1 if k < samples % streams else 0) for k in range(streams)]
    parts = []
    for child, count in zip(children, counts):
        if count == 0:
            continue
        rng = make_rng(int(child.generate_state(1, dtype=np.uint64)[0]))
        psi = haar_vectors(d, count, rng)
        vec_in = np.einsum("ni,nj->nij", psi, psi.conj()).reshape(count, d * d)
        vec_out = vec_in @ transfer.T
        fid = np.einsum("nk,nk->n", vec_in.conj(), vec_out).real
        parts.append(fid)
    fid = np.concatenate(parts)
    return float(np.mean(fid)), float(np.std(fid, ddof=1) / np.sqrt(samples))


def bipartite_square(d: int) -> BipartiteSpace:
    return BipartiteSpace(d, d)
