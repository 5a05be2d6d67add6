"""Arnoldi-Tikhonov regularization of discretized ill-posed problems.

An Arnoldi decomposition ``A V_l = V_{l+1} H`` gives the low-rank
approximation ``A_l = V_{l+1} H V_l^T`` of a large matrix. Tikhonov
regularization is applied to ``A_l`` and the regularization parameter is
chosen by a discrepancy equation that accounts for both the data noise and
the gap ``||A - A_l||``.
"""

from .arnoldi import ArnoldiDecomposition, arnoldi, is_symmetric
from .discrepancy import (
    DiscrepancyConfig,
    DiscrepancySpectrum,
    build_spectrum,
    feasibility_check,
    lhs,
    solve_alpha,
)
from .errors import (
    ArnoldiTikhonovError,
    BreakdownError,
    ConvergenceError,
    DegenerateProblemError,
    DimensionError,
    InfeasibleError,
    InvalidInputError,
    MatrixFormatError,
)
from .experiments import ExperimentOptions, ExperimentRecord, emit_profile, reproduce_table, run_experiment
from .lowrank import (
    ApproximationGap,
    GapMethod,
    LowRankApproximation,
    apply_lowrank,
    approximation_gap,
    lowrank_approximation,
    projector_apply,
)
from .mmio import load_matrix, load_vector, save_matrix
from .numerics import SmallSvd, Weight, frobenius_norm, small_svd, spectral_norm_estimate, weighted_dot
from .problems import (
    NoisyData,
    ProblemKind,
    TestProblem,
    add_noise,
    baart_galerkin,
    make_problem,
    phillips_galerkin,
    phillips_nystrom,
)
from .tikhonov import RegularizedSolution, relative_error, solve_full, solve_reduced

__version__ = "0.1.0"
