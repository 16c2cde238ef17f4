"""Shot-frugal regime-switching optimization for variational quantum circuits."""

from .objectives import (
    PlateauLandscape,
    QaoaObjective,
    QuadraticObjective,
    estimate_direction_probability,
    plateau_landscape,
    standard_start,
)
from .optimizer import (
    BudgetError,
    PtrConfig,
    ShotLedger,
    SpartaConfig,
    TrialResult,
    gcans_allocate,
    gcans_step,
    pilot,
    ptr_explore,
    run_gcans_baseline,
    run_trial,
    sparta_step,
)
from .pauli import PauliSum, PauliTerm, commutator, lie_proxy
from .regime import (
    Decision,
    GradientEstimate,
    RegimeTestConfig,
    RegimeTestState,
    default_lambda1,
    llr_step,
    thresholds,
    update,
    whiten,
)
from .sim import (
    QaoaCircuit,
    ShotNoiseModel,
    build_tfim_chain,
    exact_cost,
    exact_gradient,
    expectation,
    ground_energy,
    param_shift_gradient,
)
from .stats import (
    ConfidenceBound,
    chi2_cdf,
    chi2_pdf,
    clopper_pearson_upper,
    cohens_d,
    ks_test,
    noncentral_chi2_cdf,
    noncentral_chi2_pdf,
    one_sided_ucb,
    paired_t_test,
    t_quantile,
    welch_ucb,
    wilcoxon_signed_rank,
)

__version__ = "0.1.0"
