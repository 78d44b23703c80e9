"""Spin correlations and Bell-inequality violation for massive spin-1 boson pairs."""

from .correlations import (
    CmfConfig,
    ProbabilityTable,
    cmf_correlation,
    cmf_probabilities,
    correlation_general,
    extremum_scan,
    nonrel_probabilities,
    normalized_correlation,
    probabilities_general,
    ultrarel_probabilities,
)
from .kinematics import minkowski_dot, on_shell, standard_boost, wigner_rotation
from .observables import probability_oracle
from .states import scalar_state

__version__ = "0.1.0"
