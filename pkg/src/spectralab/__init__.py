"""Predict and validate energy spectra of entanglement-compressed states.

The library builds spin-1/2 Pauli Hamiltonians, measures entanglement by
stable Schmidt rank, predicts the eigenstate-overlap spectrum of a
rank-budgeted state by convex duality, tightens that prediction with
pairwise coefficient-matrix data, and validates everything against exact
diagonalization plus bond-limited compression of exact states.
"""

__version__ = "0.1.0"

from .compress import (
    MatrixProductState,
    OverlapSpectrum,
    compress_state,
    designated_cut,
    fidelity,
    overlap_spectrum,
    slack_table,
    snake_path,
    sweep_refine,
)
from .ensembles import (
    ConcentrationReport,
    HaarBasisSample,
    ab_statistics,
    haar_unitary,
    norm_scaling_check,
    sample_basis,
    sample_ginibre,
)
from .entanglement import (
    Bipartition,
    EntropyProfile,
    SchmidtData,
    entropy_profile,
    eigenstate_stable_ranks,
    reshape_state,
    schmidt_data,
    stable_rank,
    stable_rank_inequality_check,
    stable_schmidt_rank,
    unreshape_state,
)
from .hamiltonian import (
    EigenSystem,
    PauliHamiltonian,
    SzSector,
    build_afhm_1d,
    build_afhm_2d,
    full_eigensystem,
    ground_state,
    sector_matrix,
)
from .linalg import (
    ConvergenceFailure,
    HermitianEigenResult,
    frobenius_norm,
    hermitian_eig,
    lanczos_ground,
    spectral_norm,
    svd_truncate,
)
from .predictor import (
    Classification,
    DualFunction,
    InfeasibleProblem,
    NonTrivialityReport,
    PredictedSpectrum,
    SpectrumProblem,
    bin_means,
    broaden,
    classify,
    harmonic_mean,
    predict,
    primal_optimum_check,
    solve_nu_star,
)
from .relaxation import (
    CRPlusSolution,
    GammaMatrix,
    concavity_check,
    gamma_matrix,
    rank_one_gamma,
    slack_chain,
    solve_cr_plus,
)
from .twolevel import (
    AdvantageReport,
    TwoLevelSystem,
    advantage,
    cross_check_predictor,
    m_from_p,
    spectrum_from_mu,
)
