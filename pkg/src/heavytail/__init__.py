"""Causal order discovery for heavy-tailed linear structural causal models.

Provides closed-form population causal tail coefficients, their rank-based
estimators, extremal ancestral search over coefficient matrices, and a
seeded simulation and benchmark harness, plus a CLI (``heavytail``).
"""

__version__ = "0.1.0"

from .errors import (CapacityError, ConfigError, DomainError, HeavytailError,
                     ModeError, ValidationError)
from .noise import (HillEstimate, NoiseSpec, hill_tail_index, max_sum_tail_ratio,
                    sample_noise, symmetric_pareto_survival)
from .graph import (CausalOrder, Dag, GeneratorConfig, OrderValidation, PathWeights,
                    Scm, all_causal_orders, check_path_faithful, path_weights,
                    random_scm, validate_order)
from .oracle import (COMMON_CAUSE, I_CAUSES_J, INDETERMINATE, J_CAUSES_I,
                     NO_CAUSAL_LINK, CoefMatrix, classify_pair, gamma_population,
                     mistake_bound_margin, psi_population)
from .estimators import (Dataset, EstimatorConfig, coefficient_matrix, ecdf_values,
                         empirical_cdf_column, gamma_estimate, psi_estimate, resolve_k)
from .ease import EaseStep, MistakeRate, ease, ease_trace, mistake_rate
from .simulate import (GridSpec, Scenario, SimSetting, SimulationResult,
                       simulate, simulate_grid)
from .evaluate import (BenchmarkRow, OrderScore, SensitivityRow, benchmark,
                       k_sensitivity, score_order, sensitivity_rows_to_csv)

__all__ = [name for name in dir() if not name.startswith("_")]
