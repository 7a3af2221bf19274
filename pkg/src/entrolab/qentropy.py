"""Quantum entropies: von Neumann, subentropy, Holevo, relative entropy.

Every quantity is computed from eigenvalues returned by
:func:`entrolab.qlinalg.hermitian_spectrum`.  Natural logarithms are the
default unit here; pass ``base="bits"`` to convert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import mpmath
import numpy as np

from .errors import DimensionError, ValidationError
from .probdist import Distribution, Joint2, LogBase, _entropy_nats, mutual_information
from .qlinalg import (
    BipartiteDims,
    DensityMatrix,
    as_matrix,
    hermitian_defect,
    hermitian_spectrum,
    partial_trace,
)

SUPPORT_TOL = 1e-10
KERNEL_OVERLAP_TOL = 1e-9
SUBENTROPY_SPREAD = 1e-7
POVM_PSD_TOL = 1e-10
POVM_SUM_TOL = 1e-9

NATS = LogBase.NATS


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Mixture ``{p_i, rho_i}`` of equal-dimension quantum states."""

    probs: Distribution
    states: tuple[DensityMatrix, ...]

    def __post_init__(self):
        probs = self.probs if isinstance(self.probs, Distribution) else Distribution(self.probs)
        states = tuple(s if isinstance(s, DensityMatrix) else DensityMatrix(s) for s in self.states)
        if len(states) != len(probs):
            raise DimensionError(f"{len(probs)} probabilities for {len(states)} states")
        if not states:
            raise DimensionError("an ensemble needs at least one state")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise DimensionError(f"ensemble states have differing dimensions {sorted(dims)}")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self) -> int:
        return len(self.states)

    def average(self) -> DensityMatrix:
        m = sum(p * s.matrix for p, s in zip(self.probs.probs, self.states))
        return DensityMatrix(m)


@dataclass(frozen=True, eq=False)
class POVM:
    """Measurement ``{E_j}``: positive semidefinite elements summing to identity."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        elements = tuple(as_matrix(e) for e in self.elements)
        if not elements:
            raise DimensionError("a POVM needs at least one element")
        shapes = {e.shape for e in elements}
        if len(shapes) != 1 or elements[0].shape[0] != elements[0].shape[1]:
            raise DimensionError(f"POVM elements must be square and equal-sized, got {shapes}")
        for k, e in enumerate(elements):
            defect = hermitian_defect(e)
            if defect > POVM_PSD_TOL:
                raise ValidationError(
                    f"POVM element {k} is not Hermitian (defect {defect:.3g})",
                    invariant="hermitian",
                    magnitude=defect,
                )
            lowest = float(hermitian_spectrum(e).eigenvalues[-1])
            if lowest < -POVM_PSD_TOL:
                raise ValidationError(
                    f"POVM element {k} has negative eigenvalue {lowest:.3g}",
                    invariant="positive-semidefinite",
                    magnitude=-lowest,
                )
        total = sum(elements)
        completeness = float(np.max(np.abs(total - np.eye(total.shape[0]))))
        if completeness > POVM_SUM_TOL:
            raise ValidationError(
                f"POVM elements sum to identity only within {completeness:.3g}",
                invariant="completeness",
                magnitude=completeness,
            )
        for e in elements:
            e.setflags(write=False)
        object.__setattr__(self, "elements", elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def projective(cls, basis) -> "POVM":
        """Rank-one projectors onto the columns of a unitary ``basis``."""
        u = as_matrix(basis)
        return cls(tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(u.shape[1])))


def _spectral_entropy_nats(rho: DensityMatrix) -> float:
    return _entropy_nats(rho.eigenvalues)


def von_neumann(rho: DensityMatrix, base=NATS) -> float:
    """Von Neumann entropy ``-sum lambda_i log lambda_i`` over the spectrum of ``rho``."""
    return LogBase.parse(base).from_nats(_spectral_entropy_nats(rho))


def spread_clusters(eigenvalues, spacing: float = SUBENTROPY_SPREAD) -> np.ndarray:
    """Separate nearly equal eigenvalues to a fixed spacing.

    Runs of sorted eigenvalues with consecutive gaps below ``spacing`` are
    replaced by evenly spaced points ``spacing`` apart, centred on the run's
    mean, so the trace is unchanged.  Runs that collide after spreading are
    merged and spread again.
    """
    values = np.sort(np.asarray(eigenvalues, dtype=float))[::-1]
    clusters = [[float(v)] for v in values]
    changed = True
    while changed:
        changed = False
        merged = [clusters[0]]
        for cluster in clusters[1:]:
            prev = merged[-1]
            if prev[-1] - cluster[0] < spacing * (1 - 1e-9):
                merged[-1] = prev + cluster
                changed = True
            else:
                merged.append(cluster)
        clusters = []
        for cluster in merged:
            m = len(cluster)
            if m > 1:
                mean = sum(cluster) / m
                cluster = [mean + (0.5 * (m - 1) - k) * spacing for k in range(m)]
            clusters.append(cluster)
    return np.array([v for cluster in clusters for v in cluster])


def _subentropy_terms(points: Sequence[float]) -> float:
    # -sum_j lambda_j^n ln|lambda_j| / prod_{k != j} (lambda_j - lambda_k); evaluated in
    # extended precision because clustered points make the terms cancel heavily.
    n = len(points)
    gaps = [abs(a - b) for i, a in enumerate(points) for b in points[i + 1:]]
    smallest = min(gaps) if gaps else 1.0
    digits = 30 + int(max(0.0, -math.log10(smallest)) * max(n - 1, 1))
    with mpmath.workdps(digits):
        lam = [mpmath.mpf(x) for x in points]
        total = mpmath.mpf(0)
        for j, lj in enumerate(lam):
            if lj == 0:
                continue
            denom = mpmath.mpf(1)
            for k, lk in enumerate(lam):
                if k != j:
                    denom *= lj - lk
            total += lj ** n * mpmath.log(abs(lj)) / denom
        return float(-total)


def subentropy(rho: DensityMatrix, base=NATS, spread: float = SUBENTROPY_SPREAD) -> float:
    """Subentropy ``Q(rho)`` over the full spectrum, zeros included.

    Degenerate eigenvalues (gaps below ``spread``) are first separated by
    :func:`spread_clusters`; the result is then within ``O(spread log spread)``
    of the confluent limit.
    """
    values = rho.eigenvalues if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=float)
    points = spread_clusters(values, spread)
    return LogBase.parse(base).from_nats(_subentropy_terms(points))


class JointEntropies(NamedTuple):
    s_ab: float
    s_a: float
    s_b: float


def _check_dims(rho: DensityMatrix, dims: BipartiteDims) -> None:
    if dims.dim_c is not None:
        raise DimensionError("bipartite operation given tripartite dimensions")
    if rho.dim != dims.total:
        raise DimensionError(
            f"state of dimension {rho.dim} does not split as {dims.dim_a} x {dims.dim_b}"
        )


def quantum_joint_marginals(rho_ab: DensityMatrix, dims: BipartiteDims, base=NATS) -> JointEntropies:
    """Entropies of a bipartite state and of both of its reductions."""
    _check_dims(rho_ab, dims)
    unit = LogBase.parse(base)
    return JointEntropies(
        s_ab=unit.from_nats(_spectral_entropy_nats(rho_ab)),
        s_a=unit.from_nats(_spectral_entropy_nats(partial_trace(rho_ab, dims, "A"))),
        s_b=unit.from_nats(_spectral_entropy_nats(partial_trace(rho_ab, dims, "B"))),
    )


def s_conditional(rho_ab: DensityMatrix, dims: BipartiteDims, base=NATS, given="B") -> float:
    """Conditional entropy ``S(A,B) - S(given)``; negative for some entangled states."""
    e = quantum_joint_marginals(rho_ab, dims, base)
    key = given.upper() if isinstance(given, str) else given
    if key in ("B", 1):
        return e.s_ab - e.s_b
    if key in ("A", 0):
        return e.s_ab - e.s_a
    raise ValueError(f"given must be 'A' or 'B', got {given!r}")


def s_mutual(rho_ab: DensityMatrix, dims: BipartiteDims, base=NATS) -> float:
    """Quantum mutual entropy ``S(A) + S(B) - S(A,B)``."""
    e = quantum_joint_marginals(rho_ab, dims, base)
    return e.s_a + e.s_b - e.s_ab


class TripartiteEntropies(NamedTuple):
    s_abc: float
    s_ab: float
    s_bc: float
    s_b: float
    s_a: float
    s_c: float


def tripartite_entropies(rho_abc: DensityMatrix, dims: BipartiteDims, base=NATS) -> TripartiteEntropies:
    """Entropies of a three-party state and of its one- and two-party reductions."""
    if dims.dim_c is None:
        raise DimensionError("tripartite operation needs dim_c")
    da, db, dc = dims.sizes
    if rho_abc.dim != da * db * dc:
        raise DimensionError(f"state of dimension {rho_abc.dim} does not split as {da}x{db}x{dc}")
    rho_ab = partial_trace(rho_abc, BipartiteDims(da * db, dc), "A")
    rho_bc = partial_trace(rho_abc, BipartiteDims(da, db * dc), "B")
    rho_a = partial_trace(rho_ab, BipartiteDims(da, db), "A")
    rho_b = partial_trace(rho_ab, BipartiteDims(da, db), "B")
    rho_c = partial_trace(rho_bc, BipartiteDims(db, dc), "B")
    unit = LogBase.parse(base)
    return TripartiteEntropies(
        *(unit.from_nats(_spectral_entropy_nats(r)) for r in (rho_abc, rho_ab, rho_bc, rho_b, rho_a, rho_c))
    )


def quantum_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix, base=NATS) -> float:
    """Relative entropy ``Tr(rho ln rho) - Tr(rho ln sigma)``.

    Returns ``math.inf`` when the support of ``rho`` is not contained in the
    support of ``sigma``: some eigenvector ``w`` of ``sigma`` with eigenvalue
    at most ``1e-10`` has ``<w|rho|w> > 1e-9``.
    """
    if rho.dim != sigma.dim:
        raise DimensionError(f"states of dimension {rho.dim} and {sigma.dim}")
    spec = sigma.spectrum
    v = spec.eigenvectors
    overlaps = np.einsum("ik,ij,jk->k", v.conj(), rho.matrix, v).real
    mu = np.asarray(spec.eigenvalues)
    in_support = mu > SUPPORT_TOL
    if np.any(overlaps[~in_support] > KERNEL_OVERLAP_TOL):
        return math.inf
    cross = float(np.sum(np.log(mu[in_support]) * overlaps[in_support]))
    return LogBase.parse(base).from_nats(-_spectral_entropy_nats(rho) - cross)


def holevo_chi(e: Ensemble, base=NATS) -> float:
    """Holevo quantity ``S(sum p_i rho_i) - sum p_i S(rho_i)``."""
    avg = _spectral_entropy_nats(e.average())
    mean = sum(p * _spectral_entropy_nats(s) for p, s in zip(e.probs.probs, e.states))
    return LogBase.parse(base).from_nats(avg - mean)


def measurement_joint(e: Ensemble, m: POVM) -> Joint2:
    """Classical joint ``p_ij = p_i Tr(rho_i E_j)`` of preparation and outcome."""
    if e.dim != m.dim:
        raise DimensionError(f"ensemble of dimension {e.dim} measured by a POVM of dimension {m.dim}")
    table = np.array(
        [[p * np.trace(s.matrix @ el).real for el in m.elements] for p, s in zip(e.probs.probs, e.states)]
    )
    # rounding can leave entries of order -1e-17
    table[(table < 0) & (table > -1e-12)] = 0.0
    return Joint2(table / table.sum())


def measured_mutual_info(e: Ensemble, m: POVM, base=NATS) -> float:
    """Mutual information between preparation label and measurement outcome."""
    return mutual_information(measurement_joint(e, m), base)


class MixingTerms(NamedTuple):
    s_avg: float
    h_p: float
    avg_s: float


def mixing_bound_terms(e: Ensemble, base=NATS) -> MixingTerms:
    """The three terms of ``S(sum p_i rho_i) <= H(p) + sum p_i S(rho_i)``."""
    unit = LogBase.parse(base)
    return MixingTerms(
        s_avg=unit.from_nats(_spectral_entropy_nats(e.average())),
        h_p=unit.from_nats(_entropy_nats(e.probs.probs)),
        avg_s=unit.from_nats(
            sum(p * _spectral_entropy_nats(s) for p, s in zip(e.probs.probs, e.states))
        ),
    )


def orthogonal_embedding(e: Ensemble) -> DensityMatrix:
    """Block-diagonal state ``sum_i p_i |i><i| (x) rho_i`` with a classical flag first."""
    n, d = len(e), e.dim
    m = np.zeros((n * d, n * d), dtype=complex)
    for i, (p, s) in enumerate(zip(e.probs.probs, e.states)):
        m[i * d:(i + 1) * d, i * d:(i + 1) * d] = p * s.matrix
    return DensityMatrix(m)


def sanov_confusion_probability(rho: DensityMatrix, sigma: DensityMatrix, n: int) -> float:
    """Estimate ``exp(-n S(rho||sigma))``; zero when the relative entropy is infinite."""
    if int(n) < 1:
        raise ValueError(f"number of copies must be positive, got {n}")
    d = quantum_relative_entropy(rho, sigma)
    if math.isinf(d):
        return 0.0
    # rounding can push d a few ulps below zero
    return math.exp(-int(n) * max(d, 0.0))
