"""Numerical measures of Bell non-locality.

The recurring finding across every measure here: the states scoring highest
are not the maximally entangled ones.  Modules cover the CHSH curve for
partially entangled qubit pairs, detection-efficiency thresholds, the
three-outcome qutrit combination, Kullback-Leibler distance to the local
polytope, Hardy's all-or-nothing argument, and the no-signaling box above
every quantum value.
"""

__version__ = "0.1.0"

from .behavior import BehaviorTable, behavior, correlator, pauli_expectation
from .chsh import (
    LOCAL_BOUND,
    TSIRELSON_BOUND,
    ChshSettings,
    analytic_chsh_maximum,
    chsh_local_bound,
    chsh_optimal_settings,
    chsh_value,
    optimize_chsh,
    settings_from_params,
)
from .cglmp import (
    CANONICAL_PHASES,
    CglmpScenario,
    analytic_behavior,
    analytic_cglmp_value,
    analytic_probability,
    cglmp_value,
    diagonal_amplitudes,
    event_probability,
    optimize_cglmp,
    optimize_cglmp_state_and_settings,
    scenario_behavior,
    scenario_measurements,
)
from .detection import (
    LOCAL_MODEL_EFFICIENCY,
    DetectionModel,
    DetectionProbabilities,
    NoViolationError,
    ch_value,
    critical_efficiency_at,
    detection_probabilities,
    optimize_critical_efficiency,
)
from .hardy import (
    HardyCertificate,
    HardyScanRow,
    LhvAnalysis,
    hardy_certificate,
    hardy_scan,
    lhv_contradiction,
    optimize_hardy_probability,
)
from .kernels import backend_name
from .measurements import (
    BlochMeasurement,
    GeneralMeasurement,
    PhaseSetting,
    bloch_from_angles,
    bloch_x,
    bloch_z,
    cglmp_projectors,
)
from .optimize import OptimizationResult
from .polytope import (
    KlResult,
    LocalPolytope,
    enumerate_vertices,
    kl_divergence,
    kl_to_local,
    local_membership,
    optimize_kl,
    separating_functional,
)
from .prbox import (
    SampleLog,
    chsh_of_behavior,
    empirical_behavior,
    pr_box_behavior,
    sample_pr_box,
)
from .reproduce import (
    ClaimResult,
    ReproduceConfig,
    ReproductionReport,
    run_claims,
)
from .states import (
    BipartitePureState,
    entanglement_entropy,
    make_gamma_state,
    make_hardy_state,
    make_max_entangled,
    make_theta_state,
    schmidt_coefficients,
)

