"""Complex matrices, density matrices and seeded random quantum objects.

Matrices are plain ``complex128`` numpy arrays.  Eigendecompositions use a
cyclic Jacobi method in round-robin order: every round applies ``n // 2``
disjoint plane rotations at once, so one round is a single similarity
transform by a block-diagonal unitary.

Bipartite indexing is A-major: basis state ``(i_a, i_b)`` sits at row
``i_a * dim_b + i_b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError, ValidationError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
UNITARY_TOL = 1e-9

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

_SEED_MASK = (1 << 64) - 1


def as_matrix(m) -> np.ndarray:
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {arr.shape}")
    return arr


def hermitian_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings of a round-robin tournament on ``n`` indices.

    Every unordered pair appears exactly once across the ``m - 1`` rounds
    (``m`` is ``n`` rounded up to even); pairs touching the padding index
    are dropped.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            p, q = players[k], players[m - 1 - k]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


_ROUNDS_CACHE: dict[int, list[tuple[np.ndarray, np.ndarray]]] = {}


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(m, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Square Hermitian matrix.
    tol : float
        Sweeps stop once the Frobenius norm of the off-diagonal part is at
        most ``tol * max(1, ||m||_F)``.
    max_sweeps : int
        Upper bound on the number of full sweeps.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in the (unsorted) order produced by the rotations.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    sweeps : int
        Number of sweeps performed.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"matrix must be square, got shape {a.shape}")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    if n == 1:
        return a.real.diagonal().copy(), v, 0

    rounds = _ROUNDS_CACHE.get(n)
    if rounds is None:
        rounds = _ROUNDS_CACHE.setdefault(n, _round_robin(n))
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    while sweeps < max_sweeps and _off_norm(a) > threshold:
        sweeps += 1
        for ps, qs in rounds:
            apq = a[ps, qs]
            mag = np.abs(apq)
            active = mag > 0
            if not np.any(active):
                continue
            ps_, qs_, apq, mag = ps[active], qs[active], apq[active], mag[active]
            app = a[ps_, ps_].real
            aqq = a[qs_, qs_].real
            phase = apq / mag
            theta = (aqq - app) / (2.0 * mag)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rot = np.eye(n, dtype=complex)
            rot[ps_, ps_] = c
            rot[ps_, qs_] = s
            rot[qs_, ps_] = -s * phase.conj()
            rot[qs_, qs_] = c * phase.conj()
            a = rot.conj().T @ a @ rot
            v = v @ rot
        a = 0.5 * (a + a.conj().T)
    return a.real.diagonal().copy(), v, sweeps


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues (descending) with the unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_spectrum(m) -> Spectrum:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending.

    Raises
    ------
    DimensionError
        If ``m`` is not square.
    ValidationError
        If ``m`` deviates from its adjoint by more than ``1e-10``.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {a.shape}")
    defect = hermitian_defect(a)
    if defect > HERMITIAN_TOL:
        raise ValidationError(
            f"matrix is not Hermitian (max |M - M^dagger| = {defect:.3g})",
            invariant="hermitian",
            magnitude=defect,
        )
    values, vectors, _ = jacobi_eigh(a)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    values.setflags(write=False)
    vectors.setflags(write=False)
    return Spectrum(values, vectors)


class DensityMatrix:
    """Validated quantum state: Hermitian, unit trace, positive semidefinite.

    The stored matrix is the Hermitian part of the input.  Eigenvalues in
    ``[-1e-10, 0)`` are clipped to zero and the spectrum rescaled to sum to
    one; anything more negative is rejected.
    """

    def __init__(self, matrix):
        m = as_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValidationError(f"density matrix must be square, got shape {m.shape}", invariant="square")
        if not np.all(np.isfinite(m)):
            raise ValidationError("density matrix has non-finite entries", invariant="finite")
        defect = hermitian_defect(m)
        if defect > HERMITIAN_TOL:
            raise ValidationError(
                f"not Hermitian: max |M - M^dagger| = {defect:.3g} exceeds {HERMITIAN_TOL:g}",
                invariant="hermitian",
                magnitude=defect,
            )
        m = 0.5 * (m + m.conj().T)
        trace_error = abs(complex(np.trace(m)) - 1.0)
        if trace_error > TRACE_TOL:
            raise ValidationError(
                f"trace differs from 1 by {trace_error:.3g} (tolerance {TRACE_TOL:g})",
                invariant="unit-trace",
                magnitude=trace_error,
            )
        m.setflags(write=False)
        self.matrix = m
        self.dim = m.shape[0]
        # validates positivity eagerly
        _ = self.spectrum

    @cached_property
    def spectrum(self) -> Spectrum:
        raw = hermitian_spectrum(self.matrix)
        values = np.array(raw.eigenvalues)
        lowest = float(values[-1])
        if lowest < -PSD_TOL:
            raise ValidationError(
                f"not positive semidefinite: eigenvalue {lowest:.3g} below -{PSD_TOL:g}",
                invariant="positive-semidefinite",
                magnitude=-lowest,
            )
        values[values < 0] = 0.0
        values /= values.sum()
        values.setflags(write=False)
        return Spectrum(values, raw.eigenvectors)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, eigenvalues={np.round(self.eigenvalues, 6)})"

    @classmethod
    def pure(cls, vector) -> "DensityMatrix":
        psi = np.asarray(vector, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def diagonal(cls, probs) -> "DensityMatrix":
        return cls(np.diag(np.asarray(probs, dtype=complex)))


@dataclass(frozen=True)
class BipartiteDims:
    """Subsystem dimensions; ``dim_c`` is only set for tripartite states."""

    dim_a: int
    dim_b: int
    dim_c: int | None = None

    def __post_init__(self):
        for d in (self.dim_a, self.dim_b, self.dim_c):
            if d is not None and int(d) < 1:
                raise DimensionError(f"subsystem dimensions must be positive, got {self}")

    @property
    def total(self) -> int:
        total = self.dim_a * self.dim_b
        return total * self.dim_c if self.dim_c is not None else total

    @property
    def sizes(self) -> tuple[int, ...]:
        if self.dim_c is None:
            return (self.dim_a, self.dim_b)
        return (self.dim_a, self.dim_b, self.dim_c)


def tensor(a, b) -> np.ndarray:
    """Kronecker product; accepts density matrices or plain arrays.

    Two density matrices give a :class:`DensityMatrix`.
    """
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix))
    ma = a.matrix if isinstance(a, DensityMatrix) else as_matrix(a)
    mb = b.matrix if isinstance(b, DensityMatrix) else as_matrix(b)
    return np.kron(ma, mb)


def _keep_index(keep) -> int:
    if isinstance(keep, str):
        key = keep.upper()
        if key in ("A", "B"):
            return 0 if key == "A" else 1
    elif keep in (0, 1):
        return int(keep)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_trace(rho: DensityMatrix, dims: BipartiteDims, keep="A") -> DensityMatrix:
    """Reduced state on one half of a bipartite system.

    For tripartite work group subsystems: ``BipartiteDims(dim_a * dim_b, dim_c)``
    traces out C, ``BipartiteDims(dim_a, dim_b * dim_c)`` traces out A.
    """
    da, db = dims.dim_a, dims.dim_b
    if rho.dim != da * db:
        raise DimensionError(f"state of dimension {rho.dim} does not split as {da} x {db}")
    t = rho.matrix.reshape(da, db, da, db)
    if _keep_index(keep) == 0:
        reduced = np.einsum("ijkj->ik", t)
    else:
        reduced = np.einsum("ijil->jl", t)
    return DensityMatrix(reduced)


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) <= tol


def conjugate_by_unitary(rho: DensityMatrix, u) -> DensityMatrix:
    """The rotated state ``U rho U^dagger``."""
    u = as_matrix(u)
    if u.shape != (rho.dim, rho.dim):
        raise DimensionError(f"unitary of shape {u.shape} for a state of dimension {rho.dim}")
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(rho.dim))))
    if defect > UNITARY_TOL:
        raise ValidationError(
            f"matrix is not unitary (max |U^dagger U - I| = {defect:.3g})",
            invariant="unitary",
            magnitude=defect,
        )
    return DensityMatrix(u @ rho.matrix @ u.conj().T)


def spectral_function(m, func) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    spec = hermitian_spectrum(m)
    v = spec.eigenvectors
    return (v * func(np.asarray(spec.eigenvalues))) @ v.conj().T


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; any Python int is folded into 64 bits."""
    return np.random.Generator(np.random.PCG64(int(seed) & _SEED_MASK))


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_density(dim: int, rank: int, seed: int) -> DensityMatrix:
    """Random state ``G G^dagger / Tr(G G^dagger)`` from a dim x rank Ginibre matrix."""
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    g = ginibre(dim, rank, make_rng(seed))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-random unitary from the QR factorization of a Ginibre matrix.

    Column phases are fixed so that ``R`` has a positive diagonal, which makes
    the distribution exactly Haar.
    """
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    q, r = np.linalg.qr(ginibre(dim, dim, make_rng(seed)))
    d = np.diag(r)
    return q * (d / np.abs(d))
