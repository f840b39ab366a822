"""Dense complex-matrix kernels for small bipartite Hilbert spaces.

Index convention: the basis ket |i>_A |j>_B sits at flat index ``i * dimB + j``.
Every other module relies on this ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-12


@dataclass(frozen=True)
class BipartiteSpace:
    dimA: int
    dimB: int

    def __post_init__(self):
        if self.dimA < 1 or self.dimB < 1:
            raise ValueError(f"factor dimensions must be positive, got {self.dimA}, {self.dimB}")

    @property
    def dim(self) -> int:
        return self.dimA * self.dimB

    def check(self, m: np.ndarray) -> None:
        if m.ndim != 2 or m.shape != (self.dim, self.dim):
            raise ValueError(
                f"matrix of shape {m.shape} does not match space {self.dimA}x{self.dimB}"
            )


@dataclass(frozen=True)
class PureState:
    dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} amplitudes, got shape {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"squared norm is {norm!r}, not 1")
        object.__setattr__(self, "amplitudes", amps)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got {a.ndim}-d")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product; the first factor indexes the coarse blocks."""
    a = as_matrix(a)
    b = as_matrix(b)
    ra, ca = a.shape
    rb, cb = b.shape
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)


def _which(which) -> int:
    if which in (0, "A", "a"):
        return 0
    if which in (1, "B", "b"):
        return 1
    raise ValueError(f"subsystem selector must be 'A' or 'B', got {which!r}")


def partial_trace(m, space: BipartiteSpace, which="B") -> np.ndarray:
    """Trace out subsystem ``which`` and return the operator on the other factor."""
    m = as_matrix(m)
    space.check(m)
    t = m.reshape(space.dimA, space.dimB, space.dimA, space.dimB)
    if _which(which) == 1:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def partial_transpose(m, space: BipartiteSpace, which="B") -> np.ndarray:
    m = as_matrix(m)
    space.check(m)
    t = m.reshape(space.dimA, space.dimB, space.dimA, space.dimB)
    if _which(which) == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        t = t.transpose(2, 1, 0, 3)
    return t.reshape(space.dim, space.dim)


def permute_subsystems(m, dims, perm) -> np.ndarray:
    """Reorder the tensor factors of a square operator.

    ``dims`` lists the factor dimensions in the current order; factor ``perm[k]``
    of the input becomes factor ``k`` of the output.
    """
    m = as_matrix(m)
    dims = list(dims)
    n = len(dims)
    t = m.reshape(dims + dims)
    axes = list(perm) + [p + n for p in perm]
    total = int(np.prod(dims))
    return t.transpose(axes).reshape(total, total)


def hermitian_part(h) -> np.ndarray:
    h = as_matrix(h)
    return (h + h.conj().T) / 2


def check_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"matrix is not square: {h.shape}")
    dev = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: max |h - h^dag| = {dev:.3e}")
    return (h + h.conj().T) / 2


def _jacobi_rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    # 2x2 unitary G with G^dag [[app, apq], [apq*, aqq]] G diagonal.
    c = abs(apq)
    phase = apq / c
    tau = (aqq - app) / (2.0 * c)
    if abs(tau) > 1e150:
        t = 0.5 / tau
    else:
        t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    cs = 1.0 / np.sqrt(1.0 + t * t)
    sn = t * cs
    pc = np.conj(phase)
    return np.array([[cs, sn], [-sn * pc, cs * pc]], dtype=complex)


def eig_hermitian(h, tol: float = JACOBI_TOL, max_sweeps: int = 100):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and the
    eigenvectors as the columns of a unitary matrix.
    """
    a = check_hermitian(h).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                g = _jacobi_rotation(a[p, p].real, a[q, q].real, apq)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        raise RuntimeError("Jacobi sweeps did not converge")
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def min_eigenvalue(h) -> float:
    """Smallest eigenvalue of the Hermitian part (LAPACK; used on hot paths)."""
    return float(np.linalg.eigvalsh(hermitian_part(h))[0])


def trace_inner(a, b) -> complex:
    """tr(a^dag b)."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def gaussian_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def haar_vectors(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-random unit vectors in C^d, one per row."""
    g = gaussian_complex(rng, (n, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def haar_random_pure(d: int, seed: int) -> PureState:
    if d < 1:
        raise ValueError("d must be >= 1")
    psi = haar_vectors(d, 1, make_rng(seed))[0]
    if d == 1:
        psi = np.ones(1, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return PureState(d, psi)


def max_entangled(d: int) -> PureState:
    if d < 1:
        raise ValueError("d must be >= 1")
    amps = np.zeros(d * d, dtype=complex)
    amps[np.arange(d) * (d + 1)] = 1.0 / np.sqrt(d)
    return PureState(d * d, amps)


def max_entangled_projector(d: int) -> np.ndarray:
    return max_entangled(d).projector()
