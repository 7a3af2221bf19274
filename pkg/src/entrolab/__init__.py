"""Classical and quantum entropy calculus with a randomized inequality checker."""

from .errors import DimensionError, EntrolabError, ValidationError
from .probdist import (
    Distribution,
    Joint2,
    Joint3,
    LogBase,
    MarkovChain3,
    conditional_entropy,
    joint_entropy,
    marginal,
    markov_joint,
    merge_axes,
    mutual_information,
    relative_entropy,
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
    sanov_confusion_probability,
    subentropy,
    von_neumann,
)
from .qlinalg import (
    BipartiteDims,
    DensityMatrix,
    Spectrum,
    conjugate_by_unitary,
    hermitian_spectrum,
    partial_trace,
    random_density,
    random_unitary,
    tensor,
)

__version__ = "0.1.0"
