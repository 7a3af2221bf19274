"""Classical distributions and the Shannon entropy calculus.

All entropies are computed from plain probability arrays with the convention
``0 log 0 = 0``.  Conditional and mutual entropies are assembled as
differences of joint and marginal entropies, which never divides by a zero
marginal; the summand forms (``-sum p_ij log p_{i|j}`` and friends) are kept
as :func:`conditional_entropy_direct` and :func:`mutual_information_direct`
for cross-checking on strictly positive joints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, ValidationError

SUM_TOL = 1e-12
_EPS = float(np.finfo(float).eps)

_AXIS_NAMES = {"A": 0, "B": 1, "C": 2}


class LogBase(enum.Enum):
    """Unit in which entropies are reported."""

    BITS = "bits"
    NATS = "nats"

    @classmethod
    def parse(cls, base) -> "LogBase":
        if isinstance(base, cls):
            return base
        try:
            return cls(str(base).lower())
        except ValueError:
            raise ValueError(f"unknown log base {base!r}; use 'bits' or 'nats'") from None

    def from_nats(self, value: float) -> float:
        """Convert a value expressed in nats into this unit."""
        if self is LogBase.BITS:
            return value / math.log(2)
        return value

    @property
    def unit(self) -> str:
        return self.value


def _entropy_nats(probs: np.ndarray) -> float:
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > 0]
    if p.size == 0:
        return 0.0
    h = float(-np.sum(p * np.log(p)))
    # avoid reporting -0.0 for point masses
    return h if h != 0.0 else 0.0


def _validated_array(values, ndim: int, what: str) -> tuple[np.ndarray, float]:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValidationError(
            f"{what} must be {ndim}-dimensional, got shape {arr.shape}", invariant="shape"
        )
    if arr.size == 0:
        raise ValidationError(f"{what} must have at least one entry", invariant="shape")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} contains non-finite entries", invariant="finite")
    most_negative = float(arr.min())
    if most_negative < 0:
        raise ValidationError(
            f"{what} has a negative entry {most_negative:.3g}",
            invariant="non-negative",
            magnitude=-most_negative,
        )
    total = float(arr.sum())
    adjustment = total - 1.0
    if abs(adjustment) > SUM_TOL:
        raise ValidationError(
            f"{what} sums to {total!r}, not 1 (off by {adjustment:.3g})",
            invariant="normalization",
            magnitude=abs(adjustment),
        )
    # deviations at summation-rounding level are left alone so re-reads are idempotent
    if abs(adjustment) > arr.size * _EPS:
        arr = arr / total
    arr.setflags(write=False)
    return arr, adjustment


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over a finite set of outcomes.

    Inputs whose sum is within ``1e-12`` of one are rescaled once at
    construction; the size of that correction is kept in ``adjustment``.
    """

    probs: np.ndarray
    labels: tuple[str, ...] | None = None
    adjustment: float = field(default=0.0, init=False)

    def __post_init__(self):
        arr, adjustment = _validated_array(self.probs, 1, "distribution")
        object.__setattr__(self, "probs", arr)
        object.__setattr__(self, "adjustment", adjustment)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != arr.size:
                raise ValidationError(
                    f"{len(labels)} labels for {arr.size} outcomes", invariant="labels"
                )
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        return cls(np.full(n, 1.0 / n))


@dataclass(frozen=True, eq=False)
class Joint2:
    """Joint distribution ``p_ij`` of two variables A (rows) and B (columns)."""

    probs: np.ndarray
    adjustment: float = field(default=0.0, init=False)

    def __post_init__(self):
        arr, adjustment = _validated_array(self.probs, 2, "joint distribution")
        object.__setattr__(self, "probs", arr)
        object.__setattr__(self, "adjustment", adjustment)

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def transpose(self) -> "Joint2":
        return Joint2(self.probs.T)

    @classmethod
    def product(cls, p: Distribution, q: Distribution) -> "Joint2":
        return cls(np.outer(p.probs, q.probs))


@dataclass(frozen=True, eq=False)
class Joint3:
    """Joint distribution ``p_ijk`` of three variables A, B, C."""

    probs: np.ndarray
    adjustment: float = field(default=0.0, init=False)

    def __post_init__(self):
        arr, adjustment = _validated_array(self.probs, 3, "joint distribution")
        object.__setattr__(self, "probs", arr)
        object.__setattr__(self, "adjustment", adjustment)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.probs.shape


@dataclass(frozen=True, eq=False)
class MarkovChain3:
    """Markov chain A -> B -> C given by a source and two row-stochastic matrices."""

    source: Distribution
    trans_ab: np.ndarray
    trans_bc: np.ndarray

    def __post_init__(self):
        if not isinstance(self.source, Distribution):
            object.__setattr__(self, "source", Distribution(self.source))
        ab = _stochastic(self.trans_ab, "A->B")
        bc = _stochastic(self.trans_bc, "B->C")
        if ab.shape[0] != len(self.source):
            raise DimensionError(
                f"A->B matrix has {ab.shape[0]} rows, source has {len(self.source)} outcomes"
            )
        if bc.shape[0] != ab.shape[1]:
            raise DimensionError(
                f"B->C matrix has {bc.shape[0]} rows, B has {ab.shape[1]} outcomes"
            )
        object.__setattr__(self, "trans_ab", ab)
        object.__setattr__(self, "trans_bc", bc)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (len(self.source), self.trans_ab.shape[1], self.trans_bc.shape[1])


def _stochastic(matrix, name: str) -> np.ndarray:
    arr = np.array(matrix, dtype=float)
    if arr.ndim != 2:
        raise ValidationError(f"transition {name} must be a matrix", invariant="shape")
    rows = [Distribution(row).probs for row in arr]
    out = np.array(rows)
    out.setflags(write=False)
    return out


def _axis(selector, ndim: int) -> int:
    if isinstance(selector, str):
        key = selector.upper()
        if key not in _AXIS_NAMES:
            raise ValueError(f"unknown axis {selector!r}")
        axis = _AXIS_NAMES[key]
    else:
        axis = int(selector)
    if not 0 <= axis < ndim:
        raise ValueError(f"axis {selector!r} out of range for {ndim} variables")
    return axis


def shannon_entropy(p: Distribution, base=LogBase.BITS) -> float:
    """Shannon entropy ``-sum p_i log p_i`` of a distribution."""
    if not isinstance(p, Distribution):
        p = Distribution(p)
    return LogBase.parse(base).from_nats(_entropy_nats(p.probs))


def marginal(j, keep):
    """Marginal distribution of the variables in ``keep``.

    Parameters
    ----------
    j : Joint2 or Joint3
    keep : axis selector or pair of selectors
        ``"A"``/``"B"``/``"C"`` or integer axes.  Keeping one axis returns a
        :class:`Distribution`; keeping two axes of a :class:`Joint3` returns a
        :class:`Joint2` ordered as the axes appear in ``j``.
    """
    ndim = j.probs.ndim
    if isinstance(keep, (str, int)):
        kept = (_axis(keep, ndim),)
    else:
        kept = tuple(sorted(_axis(k, ndim) for k in keep))
        if len(set(kept)) != len(kept):
            raise ValueError(f"repeated axis in {keep!r}")
    drop = tuple(ax for ax in range(ndim) if ax not in kept)
    summed = j.probs.sum(axis=drop) if drop else j.probs
    if len(kept) == 1:
        return Distribution(summed)
    if len(kept) == 2:
        return Joint2(summed)
    return Joint3(summed)


def joint_entropy(j, base=LogBase.BITS) -> float:
    """Entropy of all variables of a joint distribution taken together."""
    return LogBase.parse(base).from_nats(_entropy_nats(j.probs))


def conditional_entropy(j: Joint2, given="B", base=LogBase.BITS) -> float:
    """H(X|Y) of a two-variable joint, where Y is the ``given`` axis.

    Evaluated as ``H(A,B) - H(Y)``.
    """
    axis = _axis(given, 2)
    h_joint = _entropy_nats(j.probs)
    h_given = _entropy_nats(j.probs.sum(axis=1 - axis))
    return LogBase.parse(base).from_nats(h_joint - h_given)


def mutual_information(j: Joint2, base=LogBase.BITS) -> float:
    """H(A:B) = H(A) + H(B) - H(A,B)."""
    h_a = _entropy_nats(j.probs.sum(axis=1))
    h_b = _entropy_nats(j.probs.sum(axis=0))
    h_ab = _entropy_nats(j.probs)
    return LogBase.parse(base).from_nats(h_a + h_b - h_ab)


def conditional_entropy_direct(j: Joint2, given="B", base=LogBase.BITS) -> float:
    """Summand form ``-sum p_ij log p_{i|j}``; needs nonzero marginals of ``given``."""
    axis = _axis(given, 2)
    p = j.probs
    cond = p / p.sum(axis=1 - axis, keepdims=True)
    mask = p > 0
    return LogBase.parse(base).from_nats(float(-np.sum(p[mask] * np.log(cond[mask]))))


def mutual_information_direct(j: Joint2, base=LogBase.BITS) -> float:
    """Summand form ``-sum p_ij log p_{i:j}`` with ``p_{i:j} = p_i p_j / p_ij``."""
    p = j.probs
    outer = np.outer(p.sum(axis=1), p.sum(axis=0))
    mask = p > 0
    ratio = outer[mask] / p[mask]
    return LogBase.parse(base).from_nats(float(-np.sum(p[mask] * np.log(ratio))))


def relative_entropy(p: Distribution, q: Distribution, base=LogBase.BITS) -> float:
    """Relative entropy ``sum p_i log(p_i / q_i)``.

    Returns ``math.inf`` when some outcome has ``p_i > 0`` but ``q_i = 0``.
    """
    if len(p) != len(q):
        raise DimensionError(f"distributions of length {len(p)} and {len(q)}")
    pp, qq = p.probs, q.probs
    mask = pp > 0
    if np.any(qq[mask] == 0):
        return math.inf
    d = float(np.sum(pp[mask] * (np.log(pp[mask]) - np.log(qq[mask]))))
    return LogBase.parse(base).from_nats(d)


def merge_axes(j: Joint3, axes: Sequence) -> Joint2:
    """Treat two variables of a tripartite joint as one.

    The merged variable takes the position of the earlier of the two axes and
    is indexed row-major (earlier axis major).  So merging (B, C) gives a joint
    of A against BC, (A, B) gives AB against C, and (A, C) gives AC against B.
    """
    if len(axes) != 2:
        raise ValueError("merge_axes needs exactly two axes")
    first, second = sorted(_axis(a, 3) for a in axes)
    if first == second:
        raise ValueError(f"cannot merge axis {axes[0]!r} with itself")
    other = 3 - first - second
    p = j.probs
    if other < first:
        moved = np.transpose(p, (other, first, second))
        merged = moved.reshape(p.shape[other], p.shape[first] * p.shape[second])
    else:
        moved = np.transpose(p, (first, second, other))
        merged = moved.reshape(p.shape[first] * p.shape[second], p.shape[other])
    return Joint2(merged)


def markov_joint(c: MarkovChain3) -> Joint3:
    """Joint ``p(a, b, c) = p(a) p(b|a) p(c|b)`` of a Markov chain."""
    probs = (
        c.source.probs[:, None, None]
        * c.trans_ab[:, :, None]
        * c.trans_bc[None, :, :]
    )
    return Joint3(probs)
