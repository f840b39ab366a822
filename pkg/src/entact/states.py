"""Named bipartite states and density-matrix validation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    BipartiteSpace,
    as_matrix,
    eig_hermitian,
    gaussian_complex,
    haar_vectors,
    kron,
    make_rng,
    max_entangled_projector,
    min_eigenvalue,
    partial_transpose,
)

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-9


class InvalidDensityError(ValueError):
    """A matrix failed one of the density-matrix invariants.

    ``invariant`` is one of ``"hermitian"``, ``"trace"``, ``"psd"`` and
    ``magnitude`` carries the offending number (deviation, trace, or
    smallest eigenvalue).
    """

    def __init__(self, invariant: str, magnitude: float, message: str):
        super().__init__(message)
        self.invariant = invariant
        self.magnitude = magnitude


class NotHermitianError(InvalidDensityError):
    pass


class TraceError(InvalidDensityError):
    pass


class NegativityError(InvalidDensityError):
    pass


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    space: BipartiteSpace

    @property
    def dim(self) -> int:
        return self.space.dim

    def partial_transpose(self, which="B") -> np.ndarray:
        return partial_transpose(self.matrix, self.space, which)

    def pt_min_eigenvalue(self) -> float:
        return min_eigenvalue(self.partial_transpose())

    def is_ppt(self, tol: float = 1e-9) -> bool:
        return self.pt_min_eigenvalue() >= -tol


@dataclass(frozen=True)
class FourPartySpace:
    """Split A2 A3 | B2 B3 with dim A2 = dim B2 = m and dim A3 = dim B3 = d.

    Operators on this space are ordered A2, A3, B2, B3.
    """

    m: int
    d: int

    @property
    def dim(self) -> int:
        return (self.m * self.d) ** 2

    @property
    def bipartite(self) -> BipartiteSpace:
        return BipartiteSpace(self.m * self.d, self.m * self.d)


def validate_density(m, space: BipartiteSpace) -> DensityMatrix:
    m = as_matrix(m)
    space.check(m)
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > HERMITIAN_TOL:
        raise NotHermitianError("hermitian", dev, f"not Hermitian: max |m - m^dag| = {dev:.3e}")
    m = (m + m.conj().T) / 2
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceError("trace", tr, f"trace is {tr:.12g}, expected 1")
    lam = float(eig_hermitian(m)[0][0])
    if lam < PSD_TOL:
        raise NegativityError("psd", lam, f"negative eigenvalue {lam:.6g}")
    return DensityMatrix(m, space)


def isotropic(d: int, fidelity: float) -> DensityMatrix:
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {fidelity}")
    phi = max_entangled_projector(d)
    if d == 1:
        if fidelity != 1.0:
            raise ValueError("d = 1 admits only fidelity 1")
        return DensityMatrix(phi, BipartiteSpace(1, 1))
    rest = (np.eye(d * d) - phi) / (d * d - 1)
    return DensityMatrix(fidelity * phi + (1.0 - fidelity) * rest, BipartiteSpace(d, d))


def pure_from_schmidt(amplitudes) -> DensityMatrix:
    a = np.asarray(amplitudes, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("amplitudes must be a non-empty 1-d array")
    if np.any(a < 0):
        raise ValueError("Schmidt amplitudes must be non-negative")
    norm = float(np.sum(a**2))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"squared amplitudes sum to {norm!r}, not 1")
    n = a.size
    psi = np.zeros(n * n, dtype=complex)
    psi[np.arange(n) * (n + 1)] = a
    return DensityMatrix(np.outer(psi, psi.conj()), BipartiteSpace(n, n))


def random_density(dim: int, seed: int, space: BipartiteSpace | None = None) -> DensityMatrix:
    """Hilbert-Schmidt random state G G^dag / tr(G G^dag)."""
    if space is None:
        space = BipartiteSpace(dim, 1)
    if space.dim != dim:
        raise ValueError(f"space {space} does not have total dimension {dim}")
    g = gaussian_complex(make_rng(seed), (dim, dim))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return DensityMatrix((rho + rho.conj().T) / 2, space)


def random_product(space: BipartiteSpace, seed: int) -> DensityMatrix:
    rng = make_rng(seed)
    a = haar_vectors(space.dimA, 1, rng)[0]
    b = haar_vectors(space.dimB, 1, rng)[0]
    rho = kron(np.outer(a, a.conj()), np.outer(b, b.conj()))
    return DensityMatrix((rho + rho.conj().T) / 2, space)


def maximally_mixed(space: BipartiteSpace) -> DensityMatrix:
    return DensityMatrix(np.eye(space.dim, dtype=complex) / space.dim, space)


def product_state(a, b) -> DensityMatrix:
    a = as_matrix(a)
    b = as_matrix(b)
    return DensityMatrix(kron(a, b), BipartiteSpace(a.shape[0], b.shape[0]))
