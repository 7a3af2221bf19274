"""Independent reference computations used to freeze expected values.

Nothing here touches entrolab: entropies are plain mpmath loops and spectra
come from LAPACK (``numpy.linalg.eigvalsh``) rather than the Jacobi solver.
"""

import itertools

import mpmath
import numpy as np

mpmath.mp.dps = 50


def entropy(probs, base=2):
    total = mpmath.mpf(0)
    for p in probs:
        p = mpmath.mpf(p)
        if p > 0:
            total -= p * mpmath.log(p)
    return total / mpmath.log(base)


def joint_entropy(table, base=2):
    return entropy(np.asarray(table, dtype=float).ravel().tolist(), base)


def brute_conditional(table, base=2):
    """H(A|B) from conditional probabilities p(a|b), cell by cell."""
    t = np.asarray(table, dtype=float)
    total = mpmath.mpf(0)
    for i, j in itertools.product(range(t.shape[0]), range(t.shape[1])):
        p = mpmath.mpf(t[i, j])
        if p > 0:
            col = mpmath.fsum(mpmath.mpf(t[k, j]) for k in range(t.shape[0]))
            total -= p * mpmath.log(p / col)
    return total / mpmath.log(base)


def brute_mutual(table, base=2):
    """Sum of p(a,b) log(p(a,b) / (p(a) p(b))) over cells."""
    t = np.asarray(table, dtype=float)
    rows = [mpmath.fsum(mpmath.mpf(x) for x in t[i]) for i in range(t.shape[0])]
    cols = [mpmath.fsum(mpmath.mpf(x) for x in t[:, j]) for j in range(t.shape[1])]
    total = mpmath.mpf(0)
    for i, j in itertools.product(range(t.shape[0]), range(t.shape[1])):
        p = mpmath.mpf(t[i, j])
        if p > 0:
            total += p * mpmath.log(p / (rows[i] * cols[j]))
    return total / mpmath.log(base)


def kl(p, q, base=2):
    total = mpmath.mpf(0)
    for a, b in zip(p, q):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        if a > 0:
            if b == 0:
                return mpmath.inf
            total += a * mpmath.log(a / b)
    return total / mpmath.log(base)


def markov_cells(source, t_ab, t_bc):
    """Dictionary (a, b, c) -> probability, enumerated cell by cell."""
    cells = {}
    for a, b, c in itertools.product(range(len(source)), range(len(t_bc)), range(len(t_bc[0]))):
        cells[a, b, c] = mpmath.mpf(source[a]) * mpmath.mpf(t_ab[a][b]) * mpmath.mpf(t_bc[b][c])
    return cells


def pair_mutual(cells, axes, base=2):
    pair = {}
    for key, v in cells.items():
        k = tuple(key[a] for a in axes)
        pair[k] = pair.get(k, 0) + v
    left, right = {}, {}
    for (x, y), v in pair.items():
        left[x] = left.get(x, 0) + v
        right[y] = right.get(y, 0) + v
    total = mpmath.mpf(0)
    for (x, y), v in pair.items():
        if v > 0:
            total += v * mpmath.log(v / (left[x] * right[y]))
    return total / mpmath.log(base)


def spectrum(m):
    return np.linalg.eigvalsh(np.asarray(m, dtype=complex))


def von_neumann(m):
    """Entropy in nats of the LAPACK spectrum, tiny negatives dropped."""
    return entropy([x for x in spectrum(m) if x > 0], base=mpmath.e)


def subentropy_two_level(l1, l2):
    """Closed form for two distinct eigenvalues."""
    l1, l2 = mpmath.mpf(l1), mpmath.mpf(l2)
    return -(l1**2 * mpmath.log(l1) - l2**2 * mpmath.log(l2)) / (l1 - l2)


def subentropy_perturbation_sequence(epsilons):
    """Q at eigenvalues 1/2 +- eps for a decreasing sequence of eps."""
    half = mpmath.mpf(1) / 2
    return [subentropy_two_level(half + mpmath.mpf(e), half - mpmath.mpf(e)) for e in epsilons]


def subentropy_maximally_mixed(d):
    """Q(I/d) = ln d - (1/2 + 1/3 + ... + 1/d)."""
    return mpmath.log(d) - mpmath.fsum(mpmath.mpf(1) / k for k in range(2, d + 1))
