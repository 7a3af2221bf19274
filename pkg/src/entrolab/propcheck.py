"""Seeded randomized checks of the classical and quantum entropy inequalities.

Each registered :class:`Check` has a generator that builds random inputs from
a per-trial seed and an evaluator that turns those inputs into relations
``lhs <= rhs`` or ``lhs == rhs``.  A relation fails when it is violated by more
than the check's tolerance.  Trial seeds depend only on the master seed, the
check name and the trial index, so reports do not depend on scheduling.
"""

from __future__ import annotations

import hashlib
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple

import numpy as np

from . import formats
from .probdist import (
    Distribution,
    Joint2,
    Joint3,
    LogBase,
    MarkovChain3,
    conditional_entropy,
    conditional_entropy_direct,
    joint_entropy,
    marginal,
    markov_joint,
    merge_axes,
    mutual_information,
    mutual_information_direct,
    shannon_entropy,
)
from .qentropy import (
    POVM,
    Ensemble,
    holevo_chi,
    measured_mutual_info,
    mixing_bound_terms,
    orthogonal_embedding,
    quantum_joint_marginals,
    quantum_relative_entropy,
    s_conditional,
    s_mutual,
    subentropy,
    tripartite_entropies,
    von_neumann,
)
from .qlinalg import (
    BipartiteDims,
    DensityMatrix,
    conjugate_by_unitary,
    ginibre,
    hermitian_spectrum,
    make_rng,
    random_density,
    random_unitary,
    tensor,
)

BITS = LogBase.BITS
NATS = LogBase.NATS

DEFAULT_TRIALS = {"classical": 1000, "quantum": 300}


# --------------------------------------------------------------------------
# random instances


def random_distribution(n: int, seed: int) -> Distribution:
    """Uniform draw from the probability simplex on ``n`` outcomes."""
    if n < 1:
        raise ValueError(f"need at least one outcome, got {n}")
    x = make_rng(seed).standard_exponential(n)
    return Distribution(x / x.sum())


def random_joint(shape, seed: int):
    """Uniform draw from the simplex over all cells of a 2- or 3-axis table."""
    shape = tuple(int(s) for s in shape)
    if len(shape) not in (2, 3):
        raise ValueError(f"joint distributions have 2 or 3 axes, got shape {shape}")
    if min(shape) < 1:
        raise ValueError(f"axis sizes must be positive, got {shape}")
    x = make_rng(seed).standard_exponential(shape)
    return (Joint2 if len(shape) == 2 else Joint3)(x / x.sum())


def _stochastic_rows(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_exponential((rows, cols))
    return x / x.sum(axis=1, keepdims=True)


def random_markov_chain(sizes, seed: int) -> MarkovChain3:
    na, nb, nc = (int(s) for s in sizes)
    if min(na, nb, nc) < 1:
        raise ValueError(f"sizes must be positive, got {sizes}")
    rng = make_rng(seed)
    source = rng.standard_exponential(na)
    return MarkovChain3(
        Distribution(source / source.sum()),
        _stochastic_rows(na, nb, rng),
        _stochastic_rows(nb, nc, rng),
    )


def _subseed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63))


def random_ensemble(n_states: int, dim: int, max_rank: int, seed: int) -> Ensemble:
    """Random mixing probabilities with random states of rank at most ``max_rank``."""
    if min(n_states, dim, max_rank) < 1 or max_rank > dim:
        raise ValueError(f"invalid ensemble parameters {(n_states, dim, max_rank)}")
    rng = make_rng(seed)
    probs = random_distribution(n_states, _subseed(rng))
    states = []
    for _ in range(n_states):
        rank = int(rng.integers(1, max_rank + 1))
        states.append(random_density(dim, rank, _subseed(rng)))
    return Ensemble(probs, tuple(states))


def random_povm(dim: int, outcomes: int, seed: int) -> POVM:
    """POVM ``E_j = S^{-1/2} G_j S^{-1/2}`` with ``S = sum_j G_j`` and Ginibre ``G_j``.

    Works for any number of outcomes, including more than ``dim``.
    """
    if dim < 1 or outcomes < 1:
        raise ValueError(f"invalid POVM parameters {(dim, outcomes)}")
    rng = make_rng(seed)
    gs = []
    for _ in range(outcomes):
        g = ginibre(dim, dim, rng)
        gs.append(g @ g.conj().T)
    spec = hermitian_spectrum(sum(gs))
    v = spec.eigenvectors
    inv_sqrt = (v / np.sqrt(np.asarray(spec.eigenvalues))) @ v.conj().T
    elements = []
    for g in gs:
        e = inv_sqrt @ g @ inv_sqrt
        elements.append(0.5 * (e + e.conj().T))
    return POVM(tuple(elements))


# --------------------------------------------------------------------------
# configuration and report types


@dataclass(frozen=True)
class DimCaps:
    """Size limits used by the instance generators."""

    classical_max: int = 5
    quantum_min: int = 2
    quantum_max: int = 4
    tripartite: tuple[int, int, int] = (2, 2, 2)
    max_states: int = 4
    max_outcomes: int = 6


@dataclass(frozen=True)
class TrialConfig:
    """Parameters of a suite run.

    ``trials_per_check=None`` uses 1000 trials for classical checks and 300
    for quantum ones.
    """

    master_seed: int = 0
    trials_per_check: int | None = None
    dims: DimCaps = field(default_factory=DimCaps)
    tolerance_overrides: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.trials_per_check is not None and int(self.trials_per_check) < 1:
            raise ValueError(f"trials_per_check must be at least 1, got {self.trials_per_check}")

    def trials_for(self, check: "Check") -> int:
        if self.trials_per_check is not None:
            return int(self.trials_per_check)
        return DEFAULT_TRIALS[check.kind]

    def tolerance_for(self, check: "Check") -> float:
        return float(self.tolerance_overrides.get(check.name, check.tolerance))


class Relation(NamedTuple):
    label: str
    lhs: float
    rhs: float
    kind: str  # "le" or "eq"


def le(label: str, lhs: float, rhs: float) -> Relation:
    return Relation(label, float(lhs), float(rhs), "le")


def eq(label: str, lhs: float, rhs: float) -> Relation:
    return Relation(label, float(lhs), float(rhs), "eq")


def violation(rel: Relation, tol: float) -> float:
    """Amount by which a relation misses its tolerance; zero when it holds."""
    if rel.kind == "le":
        excess = rel.lhs - rel.rhs
    else:
        excess = abs(rel.lhs - rel.rhs)
    if math.isnan(excess):
        return math.inf
    return max(0.0, excess - tol)


@dataclass(frozen=True)
class Check:
    name: str
    eq: str
    kind: str
    tolerance: float
    generate: Callable[[np.random.Generator, DimCaps], dict]
    evaluate: Callable[[dict], list[Relation]]
    description: str = ""


@dataclass(frozen=True)
class CheckResult:
    name: str
    eq: str
    trials: int
    failures: int
    worst_violation: float
    elapsed: float


@dataclass(frozen=True)
class CounterexampleRecord:
    check: str
    trial: int
    inputs: dict
    violation: float

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "trial": self.trial,
            "violation": self.violation,
            "inputs": self.inputs,
        }

    @classmethod
    def from_json(cls, obj) -> "CounterexampleRecord":
        return cls(obj["check"], int(obj["trial"]), obj["inputs"], float(obj["violation"]))


@dataclass(frozen=True)
class CheckReport:
    seed: int
    results: tuple[CheckResult, ...]
    counterexamples: tuple[CounterexampleRecord, ...]

    @property
    def passed(self) -> bool:
        return all(r.failures == 0 for r in self.results)

    def to_json(self, timings: bool = True) -> dict:
        checks = []
        for r in self.results:
            entry = {
                "name": r.name,
                "eq": r.eq,
                "trials": r.trials,
                "failures": r.failures,
                "worst_violation": r.worst_violation,
            }
            if timings:
                entry["elapsed_s"] = r.elapsed
            checks.append(entry)
        return {
            "seed": self.seed,
            "checks": checks,
            "pass": self.passed,
            "counterexamples": [c.to_json() for c in self.counterexamples],
        }


# --------------------------------------------------------------------------
# classical checks


def _sizes(rng, caps: DimCaps, count: int, low: int = 1) -> list[int]:
    return [int(rng.integers(low, caps.classical_max + 1)) for _ in range(count)]


def _gen_distribution_n3(rng, caps):
    n = int(rng.integers(3, max(3, caps.classical_max) + 1))
    return {"p": random_distribution(n, _subseed(rng))}


def _eval_grouping(x):
    p = x["p"].probs
    head = p[0] + p[1]
    rest = Distribution(np.concatenate([[head], p[2:]]))
    rhs = shannon_entropy(rest, BITS)
    if head > 0:
        rhs += head * shannon_entropy(Distribution([p[0] / head, p[1] / head]), BITS)
    return [eq("H(p) = H(p1+p2, ...) + (p1+p2) H(p1/s, p2/s)", shannon_entropy(x["p"], BITS), rhs)]


def _gen_joint2(rng, caps):
    return {"j": random_joint(_sizes(rng, caps, 2), _subseed(rng))}


def _gen_joint3(rng, caps):
    return {"j": random_joint(_sizes(rng, caps, 3), _subseed(rng))}


def _eval_symmetry(x):
    j = x["j"]
    t = j.transpose()
    return [
        eq("H(A,B) = H(B,A)", joint_entropy(j, BITS), joint_entropy(t, BITS)),
        eq("H(A:B) = H(B:A)", mutual_information(j, BITS), mutual_information(t, BITS)),
    ]


def _eval_conditional_nonneg(x):
    j = x["j"]
    h_b = shannon_entropy(marginal(j, "B"), BITS)
    return [
        le("0 <= H(B|A)", 0.0, conditional_entropy(j, "A", BITS)),
        le("H(A:B) <= H(B)", mutual_information(j, BITS), h_b),
    ]


def _gen_functional(rng, caps):
    na, nb = _sizes(rng, caps, 2)
    p = random_distribution(na, _subseed(rng))
    f = rng.integers(0, nb, size=na)
    table = np.zeros((na, nb))
    table[np.arange(na), f] = p.probs
    return {"j": Joint2(table)}


def _eval_functional(x):
    j = x["j"]
    return [
        eq("B = f(A) => H(A:B) = H(B)", mutual_information(j, BITS), shannon_entropy(marginal(j, "B"), BITS)),
        eq("B = f(A) => H(A) = H(A,B)", shannon_entropy(marginal(j, "A"), BITS), joint_entropy(j, BITS)),
    ]


def _eval_monotonicity(x):
    j = x["j"]
    return [le("H(A) <= H(A,B)", shannon_entropy(marginal(j, "A"), BITS), joint_entropy(j, BITS))]


def _gen_subadditivity(rng, caps):
    na, nb = _sizes(rng, caps, 2)
    return {
        "j": random_joint((na, nb), _subseed(rng)),
        "u": random_distribution(na, _subseed(rng)),
        "v": random_distribution(nb, _subseed(rng)),
    }


def _eval_subadditivity(x):
    j = x["j"]
    h_a = shannon_entropy(marginal(j, "A"), BITS)
    h_b = shannon_entropy(marginal(j, "B"), BITS)
    prod = Joint2.product(x["u"], x["v"])
    return [
        le("H(A,B) <= H(A) + H(B)", joint_entropy(j, BITS), h_a + h_b),
        eq(
            "H(u x v) = H(u) + H(v)",
            joint_entropy(prod, BITS),
            shannon_entropy(x["u"], BITS) + shannon_entropy(x["v"], BITS),
        ),
    ]


def _eval_conditioning(x):
    j = x["j"]
    return [
        le("H(B|A) <= H(B)", conditional_entropy(j, "A", BITS), shannon_entropy(marginal(j, "B"), BITS)),
        le("0 <= H(A:B)", 0.0, mutual_information(j, BITS)),
    ]


def _eval_classical_ssa(x):
    j = x["j"]
    h_abc = joint_entropy(j, BITS)
    h_ab = joint_entropy(marginal(j, ("A", "B")), BITS)
    h_bc = joint_entropy(marginal(j, ("B", "C")), BITS)
    h_b = shannon_entropy(marginal(j, "B"), BITS)
    return [
        le("H(A,B,C) + H(B) <= H(A,B) + H(B,C)", h_abc + h_b, h_ab + h_bc),
        eq("H(merged) = H(A,B,C)", joint_entropy(merge_axes(j, ("B", "C")), BITS), h_abc),
    ]


def _eval_conditioning3(x):
    j = x["j"]
    h_a_given_bc = conditional_entropy(merge_axes(j, ("B", "C")), 1, BITS)
    h_a_given_b = conditional_entropy(marginal(j, ("A", "B")), "B", BITS)
    return [le("H(A|B,C) <= H(A|B)", h_a_given_bc, h_a_given_b)]


def _eval_chain_rule(x):
    # A1 = axis A, A2 = axis C, conditioning variable B
    j = x["j"]
    lhs = conditional_entropy(merge_axes(j, ("A", "C")), 1, BITS)
    first = conditional_entropy(marginal(j, ("A", "B")), "B", BITS)
    second = conditional_entropy(merge_axes(j, ("A", "B")), 0, BITS)
    return [eq("H(A1,A2|B) = H(A1|B) + H(A2|B,A1)", lhs, first + second)]


def _gen_chain(rng, caps):
    return {"chain": random_markov_chain(_sizes(rng, caps, 3), _subseed(rng))}


def _chain_informations(chain: MarkovChain3):
    j = markov_joint(chain)
    i_ab = mutual_information(marginal(j, ("A", "B")), BITS)
    i_ac = mutual_information(marginal(j, ("A", "C")), BITS)
    i_bc = mutual_information(marginal(j, ("B", "C")), BITS)
    return shannon_entropy(marginal(j, "A"), BITS), i_ab, i_ac, i_bc


def _eval_data_processing(x):
    h_a, i_ab, i_ac, _ = _chain_informations(x["chain"])
    return [le("H(A:B) <= H(A)", i_ab, h_a), le("H(A:C) <= H(A:B)", i_ac, i_ab)]


def _eval_data_pipelining(x):
    _, _, i_ac, i_bc = _chain_informations(x["chain"])
    return [le("H(C:A) <= H(C:B)", i_ac, i_bc)]


def _gen_positive_joint2(rng, caps):
    return {"j": random_joint(_sizes(rng, caps, 2), _subseed(rng))}


def _eval_summand_forms(x):
    j = x["j"]
    h_a = shannon_entropy(marginal(j, "A"), BITS)
    h_b = shannon_entropy(marginal(j, "B"), BITS)
    mi = mutual_information(j, BITS)
    return [
        eq("H(A|B) difference = summand form", conditional_entropy(j, "B", BITS), conditional_entropy_direct(j, "B", BITS)),
        eq("H(A:B) difference = summand form", mi, mutual_information_direct(j, BITS)),
        eq("H(A:B) = H(A) - H(A|B)", mi, h_a - conditional_entropy(j, "B", BITS)),
        eq("H(A:B) = H(B) - H(B|A)", mi, h_b - conditional_entropy(j, "A", BITS)),
    ]


# --------------------------------------------------------------------------
# quantum checks


def _qdim(rng, caps: DimCaps) -> int:
    return int(rng.integers(caps.quantum_min, caps.quantum_max + 1))


def _rand_state(rng, dim: int, full_rank: bool = False) -> DensityMatrix:
    rank = dim if full_rank else int(rng.integers(1, dim + 1))
    return random_density(dim, rank, _subseed(rng))


def _gen_unitary(rng, caps):
    d = _qdim(rng, caps)
    return {"rho": _rand_state(rng, d), "u": random_unitary(d, _subseed(rng))}


def _eval_unitary(x):
    rotated = conjugate_by_unitary(x["rho"], x["u"])
    return [eq("S(rho) = S(U rho U^dagger)", von_neumann(x["rho"]), von_neumann(rotated))]


def _bipartite(rng, caps):
    return BipartiteDims(_qdim(rng, caps), _qdim(rng, caps))


def _dims_input(dims: BipartiteDims) -> list[int]:
    return list(dims.sizes)


def _gen_pure_bipartite(rng, caps):
    dims = _bipartite(rng, caps)
    return {"rho": random_density(dims.total, 1, _subseed(rng)), "dims": _dims_input(dims)}


def _eval_pure_symmetry(x):
    e = quantum_joint_marginals(x["rho"], BipartiteDims(*x["dims"]))
    return [eq("pure AB => S(A) = S(B)", e.s_a, e.s_b)]


def _gen_ensemble(rng, caps):
    d = _qdim(rng, caps)
    n = int(rng.integers(1, caps.max_states + 1))
    return {"e": random_ensemble(n, d, d, _subseed(rng))}


def _eval_mixing(x):
    t = mixing_bound_terms(x["e"])
    return [le("S(sum p rho) <= H(p) + sum p S(rho)", t.s_avg, t.h_p + t.avg_s)]


def _eval_embedding(x):
    t = mixing_bound_terms(x["e"])
    return [eq("S(sum p |i><i| x rho_i) = H(p) + sum p S(rho)", von_neumann(orthogonal_embedding(x["e"])), t.h_p + t.avg_s)]


def _eval_concavity(x):
    t = mixing_bound_terms(x["e"])
    return [le("sum p S(rho) <= S(sum p rho)", t.avg_s, t.s_avg)]


def _gen_ensemble_povm(rng, caps):
    d = _qdim(rng, caps)
    n = int(rng.integers(1, caps.max_states + 1))
    k = int(rng.integers(1, caps.max_outcomes + 1))
    return {"e": random_ensemble(n, d, d, _subseed(rng)), "m": random_povm(d, k, _subseed(rng))}


def _eval_holevo(x):
    e, m = x["e"], x["m"]
    measured = measured_mutual_info(e, m)
    chi = holevo_chi(e)
    h_p = shannon_entropy(e.probs, NATS)
    return [le("H(A:B) <= chi", measured, chi), le("chi <= H(p)", chi, h_p)]


def _eval_entropy_bound(x):
    e, m = x["e"], x["m"]
    measured = measured_mutual_info(e, m)
    s = von_neumann(e.average())
    return [le("H(A:B) <= S(rho)", measured, s), le("S(rho) <= ln d", s, math.log(e.dim))]


def _gen_mixed_bipartite(rng, caps):
    dims = _bipartite(rng, caps)
    return {"rho": _rand_state(rng, dims.total), "dims": _dims_input(dims)}


def _eval_mutual_forms(x):
    dims = BipartiteDims(*x["dims"])
    rho = x["rho"]
    e = quantum_joint_marginals(rho, dims)
    mi = s_mutual(rho, dims)
    return [
        eq("S(A:B) = S(A) - S(A|B)", mi, e.s_a - s_conditional(rho, dims, given="B")),
        eq("S(A:B) = S(B) - S(B|A)", mi, e.s_b - s_conditional(rho, dims, given="A")),
    ]


def _gen_product(rng, caps):
    return {"rho_a": _rand_state(rng, _qdim(rng, caps)), "rho_b": _rand_state(rng, _qdim(rng, caps))}


def _eval_additivity(x):
    a, b = x["rho_a"], x["rho_b"]
    return [eq("S(A x B) = S(A) + S(B)", von_neumann(tensor(a, b)), von_neumann(a) + von_neumann(b))]


def _gen_tripartite(rng, caps):
    dims = BipartiteDims(*caps.tripartite)
    return {"rho": _rand_state(rng, dims.total), "dims": _dims_input(dims)}


def _eval_quantum_ssa(x):
    t = tripartite_entropies(x["rho"], BipartiteDims(*x["dims"]))
    return [le("S(A,B,C) + S(B) <= S(A,B) + S(B,C)", t.s_abc + t.s_b, t.s_ab + t.s_bc)]


def _eval_subadditivity_q(x):
    e = quantum_joint_marginals(x["rho"], BipartiteDims(*x["dims"]))
    return [le("S(A,B) <= S(A) + S(B)", e.s_ab, e.s_a + e.s_b)]


def _eval_triangle(x):
    e = quantum_joint_marginals(x["rho"], BipartiteDims(*x["dims"]))
    return [le("|S(A) - S(B)| <= S(A,B)", abs(e.s_a - e.s_b), e.s_ab)]


def _gen_convexity(rng, caps):
    d = _qdim(rng, caps)
    return {
        "p": random_distribution(2, _subseed(rng)),
        "rho1": _rand_state(rng, d),
        "rho2": _rand_state(rng, d),
        "sigma1": _rand_state(rng, d, full_rank=True),
        "sigma2": _rand_state(rng, d, full_rank=True),
    }


def _mix(p: Distribution, a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    p1, p2 = p.probs
    return DensityMatrix(p1 * a.matrix + p2 * b.matrix)


def _eval_joint_convexity(x):
    p1, p2 = x["p"].probs
    rho = _mix(x["p"], x["rho1"], x["rho2"])
    sigma = _mix(x["p"], x["sigma1"], x["sigma2"])
    rhs = p1 * quantum_relative_entropy(x["rho1"], x["sigma1"]) + p2 * quantum_relative_entropy(
        x["rho2"], x["sigma2"]
    )
    return [le("S(rho||sigma) <= p1 S(rho1||sigma1) + p2 S(rho2||sigma2)", quantum_relative_entropy(rho, sigma), rhs)]


def _eval_convexity(x):
    p1, p2 = x["p"].probs
    rho = _mix(x["p"], x["rho1"], x["rho2"])
    sigma1 = x["sigma1"]
    sigma = _mix(x["p"], x["sigma1"], x["sigma2"])
    first = p1 * quantum_relative_entropy(x["rho1"], sigma1) + p2 * quantum_relative_entropy(x["rho2"], sigma1)
    second = p1 * quantum_relative_entropy(x["rho1"], x["sigma1"]) + p2 * quantum_relative_entropy(
        x["rho1"], x["sigma2"]
    )
    return [
        le("S(p1 rho1 + p2 rho2 || sigma) <= p1 S(rho1||sigma) + p2 S(rho2||sigma)", quantum_relative_entropy(rho, sigma1), first),
        le("S(rho || p1 sigma1 + p2 sigma2) <= p1 S(rho||sigma1) + p2 S(rho||sigma2)", quantum_relative_entropy(x["rho1"], sigma), second),
    ]


def _gen_pair(rng, caps):
    d = _qdim(rng, caps)
    return {"rho": _rand_state(rng, d), "sigma": _rand_state(rng, d)}


def _eval_klein(x):
    return [
        le("0 <= S(rho||sigma)", 0.0, quantum_relative_entropy(x["rho"], x["sigma"])),
        le("S(rho||rho) <= 0", quantum_relative_entropy(x["rho"], x["rho"]), 0.0),
    ]


def _gen_state(rng, caps):
    return {"rho": _rand_state(rng, _qdim(rng, caps))}


def _eval_subentropy(x):
    q = subentropy(x["rho"])
    return [le("Q(rho) <= S(rho)", q, von_neumann(x["rho"])), le("0 <= Q(rho)", 0.0, q)]


def _gen_orthogonal_mixture(rng, caps):
    d = int(rng.integers(1, 2 * caps.quantum_max + 1))
    return {"p": random_distribution(d, _subseed(rng)), "u": random_unitary(d, _subseed(rng))}


def _eval_shannon_reduction(x):
    p, u = x["p"], x["u"]
    h = shannon_entropy(p, NATS)
    diag = DensityMatrix.diagonal(p.probs)
    rotated = DensityMatrix((u * p.probs) @ u.conj().T)
    return [
        eq("S(diag p) = H(p)", von_neumann(diag), h),
        eq("S(sum p_i |u_i><u_i|) = H(p)", von_neumann(rotated), h),
    ]


def _gen_witness(rng, caps):
    dims = _bipartite(rng, caps)
    return {
        "pure": random_density(dims.total, 1, _subseed(rng)),
        "rho_a": _rand_state(rng, dims.dim_a),
        "rho_b": _rand_state(rng, dims.dim_b),
        "dims": _dims_input(dims),
    }


def _eval_witness(x):
    dims = BipartiteDims(*x["dims"])
    pure = quantum_joint_marginals(x["pure"], dims)
    cond_pure = s_conditional(x["pure"], dims)
    product = tensor(x["rho_a"], x["rho_b"])
    cond_product = s_conditional(product, dims)
    s_a = von_neumann(x["rho_a"])
    rels = [
        eq("pure AB: S(A|B) = -S(A)", cond_pure, -pure.s_a),
        eq("product: S(A|B) = S(A)", cond_product, s_a),
        le("product: 0 <= S(A|B)", 0.0, cond_product),
    ]
    if pure.s_a > 1e-6:
        rels.append(le("entangled pure AB: S(A|B) < 0", cond_pure, -pure.s_a / 2))
    return rels


def _gen_full_rank_bipartite(rng, caps):
    dims = _bipartite(rng, caps)
    return {"rho": _rand_state(rng, dims.total, full_rank=True), "dims": _dims_input(dims)}


def _eval_reversed_subadditivity(x):
    e = quantum_joint_marginals(x["rho"], BipartiteDims(*x["dims"]))
    return [le("S(A) + S(B) <= S(A,B)  [deliberately wrong]", e.s_a + e.s_b, e.s_ab)]


def _check(name, eq_label, kind, tol, gen, ev, description):
    return Check(name, eq_label, kind, tol, gen, ev, description)


_CLASSICAL = [
    _check("eq2_grouping", "eq2", "classical", 1e-12, _gen_distribution_n3, _eval_grouping,
           "grouping of the first two outcomes"),
    _check("item1_symmetry", "item1", "classical", 1e-12, _gen_joint2, _eval_symmetry,
           "joint and mutual entropy are symmetric"),
    _check("item2_conditional_nonnegative", "item2", "classical", 1e-12, _gen_joint2, _eval_conditional_nonneg,
           "H(B|A) >= 0 and H(A:B) <= H(B)"),
    _check("item2_functional_equality", "item2", "classical", 1e-12, _gen_functional, _eval_functional,
           "B = f(A) saturates H(A:B) <= H(B)"),
    _check("item3_monotonicity", "item3", "classical", 1e-12, _gen_joint2, _eval_monotonicity,
           "H(A) <= H(A,B)"),
    _check("item4_subadditivity", "item4", "classical", 1e-12, _gen_subadditivity, _eval_subadditivity,
           "H(A,B) <= H(A) + H(B), equality for products"),
    _check("item5_conditioning", "item5", "classical", 1e-12, _gen_joint2, _eval_conditioning,
           "H(B|A) <= H(B) and H(A:B) >= 0"),
    _check("item6_strong_subadditivity", "item6", "classical", 1e-12, _gen_joint3, _eval_classical_ssa,
           "H(A,B,C) + H(B) <= H(A,B) + H(B,C)"),
    _check("eq11_conditioning_reduces_entropy", "eq11", "classical", 1e-12, _gen_joint3, _eval_conditioning3,
           "H(A|B,C) <= H(A|B)"),
    _check("eq12_chain_rule", "eq12", "classical", 1e-12, _gen_joint3, _eval_chain_rule,
           "H(A1,A2|B) = H(A1|B) + H(A2|B,A1)"),
    _check("eq13_data_processing", "eq13", "classical", 1e-12, _gen_chain, _eval_data_processing,
           "H(A) >= H(A:B) >= H(A:C) on A -> B -> C"),
    _check("eq14_data_pipelining", "eq14", "classical", 1e-12, _gen_chain, _eval_data_pipelining,
           "H(C:B) >= H(C:A) on A -> B -> C"),
    _check("eq6_9_entropy_forms", "eq6-9", "classical", 1e-10, _gen_positive_joint2, _eval_summand_forms,
           "difference and summand forms agree"),
]

_QUANTUM = [
    _check("eq17_unitary_invariance", "eq17", "quantum", 1e-8, _gen_unitary, _eval_unitary,
           "S(rho) = S(U rho U^dagger)"),
    _check("pure_state_marginal_symmetry", "pure_symmetry", "quantum", 1e-8, _gen_pure_bipartite, _eval_pure_symmetry,
           "S(A) = S(B) for pure AB"),
    _check("eq18_mixing_bound", "eq18", "quantum", 1e-9, _gen_ensemble, _eval_mixing,
           "S(sum p rho) <= H(p) + sum p S(rho)"),
    _check("eq19_orthogonal_embedding", "eq19", "quantum", 1e-8, _gen_ensemble, _eval_embedding,
           "orthogonal flags saturate the mixing bound"),
    _check("eq20_concavity", "eq20", "quantum", 1e-9, _gen_ensemble, _eval_concavity,
           "S(sum p rho) >= sum p S(rho)"),
    _check("eq22_holevo_bound", "eq22", "quantum", 1e-9, _gen_ensemble_povm, _eval_holevo,
           "H(A:B) <= chi <= H(p)"),
    _check("eq23_entropy_bound", "eq23", "quantum", 1e-9, _gen_ensemble_povm, _eval_entropy_bound,
           "H(A:B) <= S(rho) <= ln d"),
    _check("eq24_conditional_entropy_sign", "eq24", "quantum", 1e-8, _gen_witness, _eval_witness,
           "S(A|B) negative for entangled pure states, S(A) for products"),
    _check("eq25_27_mutual_forms", "eq25-27", "quantum", 1e-10, _gen_mixed_bipartite, _eval_mutual_forms,
           "three forms of S(A:B) agree"),
    _check("eq28_additivity", "eq28", "quantum", 1e-8, _gen_product, _eval_additivity,
           "S(A x B) = S(A) + S(B)"),
    _check("eq29_strong_subadditivity", "eq29", "quantum", 1e-8, _gen_tripartite, _eval_quantum_ssa,
           "S(A,B,C) + S(B) <= S(A,B) + S(B,C)"),
    _check("eq30_subadditivity", "eq30", "quantum", 1e-9, _gen_mixed_bipartite, _eval_subadditivity_q,
           "S(A,B) <= S(A) + S(B)"),
    _check("eq31_triangle", "eq31", "quantum", 1e-9, _gen_mixed_bipartite, _eval_triangle,
           "S(A,B) >= |S(A) - S(B)|"),
    _check("eq33_joint_convexity", "eq33", "quantum", 1e-8, _gen_convexity, _eval_joint_convexity,
           "relative entropy is jointly convex"),
    _check("eq34_convexity", "eq34", "quantum", 1e-8, _gen_convexity, _eval_convexity,
           "relative entropy is convex in each argument"),
    _check("klein_nonnegativity", "klein", "quantum", 1e-9, _gen_pair, _eval_klein,
           "S(rho||sigma) >= 0 and S(rho||rho) = 0"),
    _check("eq21_subentropy_bound", "eq21", "quantum", 1e-9, _gen_state, _eval_subentropy,
           "0 <= Q(rho) <= S(rho)"),
    _check("shannon_reduction", "shannon_reduction", "quantum", 1e-10, _gen_orthogonal_mixture, _eval_shannon_reduction,
           "S of orthogonal mixtures equals H(p)"),
]

REGISTRY: dict[str, Check] = {c.name: c for c in _CLASSICAL + _QUANTUM}

# Not part of any suite; exercised explicitly to confirm the harness detects failures.
MUTANTS: dict[str, Check] = {
    c.name: c
    for c in [
        _check("mutant_reversed_subadditivity", "mutant", "quantum", 1e-9, _gen_full_rank_bipartite,
               _eval_reversed_subadditivity, "subadditivity with the inequality reversed"),
    ]
}

SUITES = ("all", "classical", "quantum")


def select_checks(selector: str | Iterable[str] = "all") -> list[Check]:
    """Resolve a suite name, a check name, or a list of check names.

    Raises
    ------
    KeyError
        For names that are neither suites nor registered checks.
    """
    if isinstance(selector, str):
        if selector == "all":
            return list(REGISTRY.values())
        if selector in ("classical", "quantum"):
            return [c for c in REGISTRY.values() if c.kind == selector]
        selector = [selector]
    out = []
    for name in selector:
        check = REGISTRY.get(name) or MUTANTS.get(name)
        if check is None:
            raise KeyError(name)
        out.append(check)
    return out


def trial_seed(master_seed: int, check_name: str, trial: int) -> int:
    """Stable 64-bit seed for one trial of one check."""
    key = f"{int(master_seed)}:{check_name}:{int(trial)}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def _evaluate(check: Check, inputs: dict, tol: float) -> float:
    return max((violation(r, tol) for r in check.evaluate(inputs)), default=0.0)


def run_trial(check: Check, config: TrialConfig, trial: int):
    """Run one trial; returns ``(violation, inputs)``."""
    rng = make_rng(trial_seed(config.master_seed, check.name, trial))
    inputs = check.generate(rng, config.dims)
    return _evaluate(check, inputs, config.tolerance_for(check)), inputs


def _run_check(check: Check, config: TrialConfig):
    start = time.perf_counter()
    failures, worst, records = 0, 0.0, []
    for trial in range(config.trials_for(check)):
        v, inputs = run_trial(check, config, trial)
        worst = max(worst, v)
        if v > 0:
            failures += 1
            encoded = {k: formats.encode_value(val) for k, val in inputs.items()}
            records.append(CounterexampleRecord(check.name, trial, encoded, v))
    result = CheckResult(
        check.name, check.eq, config.trials_for(check), failures, worst, time.perf_counter() - start
    )
    return result, records


def run_suite(config: TrialConfig, checks="all", workers: int = 1) -> CheckReport:
    """Run the selected checks and collect a :class:`CheckReport`.

    Parameters
    ----------
    config : TrialConfig
    checks : str, iterable of str, or iterable of Check
        Suite name (``"all"``, ``"classical"``, ``"quantum"``), check names,
        or :class:`Check` objects.
    workers : int
        Number of threads; the report is identical for any value.
    """
    if isinstance(checks, str):
        selected = select_checks(checks)
    else:
        selected = [c if isinstance(c, Check) else select_checks(c)[0] for c in checks]
    if workers <= 1:
        outcomes = [_run_check(c, config) for c in selected]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda c: _run_check(c, config), selected))
    results = tuple(r for r, _ in outcomes)
    records = tuple(rec for _, recs in outcomes for rec in recs)
    return CheckReport(int(config.master_seed), results, records)


def replay(record: CounterexampleRecord, tolerance_overrides: Mapping[str, float] | None = None) -> float:
    """Recompute the violation of a stored counterexample from its serialized inputs."""
    check = select_checks(record.check)[0]
    inputs = {k: formats.decode_value(v) for k, v in record.inputs.items()}
    tol = (tolerance_overrides or {}).get(check.name, check.tolerance)
    return _evaluate(check, inputs, tol)
