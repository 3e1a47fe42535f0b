"""Global optimisation by iterated minimisation over random affine sections.

The Solar method draws a random low-dimensional affine section through the
incumbent best point, minimises the restriction with a budgeted simplex
solver, and jumps whenever the record improves. The package also ships the
baselines it is benchmarked against and a reproducible experiment harness.
"""

from .baselines import (
    BaselineParams,
    cg,
    momentum_three_point,
    msbh,
    simulated_annealing,
    zo_gd,
    zo_gd_linesearch,
)
from .best_store import BestStore
from .harness import (
    AlgorithmSummary,
    ConfigError,
    ExperimentConfig,
    aggregate,
    fit_linear_rate,
    run_experiment,
    run_single,
    sweep_b,
)
from .inner_solver import NMConfig, RestrictedProblem, initial_simplex, nelder_mead
from .oracle import INFEASIBLE, BoxSet, BudgetExceededError, Objective, penalised
from .solar import SolarConfig, SolarResult, inner_iteration, solar_run
from .subspace import (
    BaseIndexSet,
    ConeParams,
    RayMap,
    SamplingVariant,
    beta_schedule,
    choose_base,
    dominant_direction,
    ray_eval,
    sample_cone,
    sample_vanilla,
)
from .testbed import (
    ProblemInstance,
    QuadraticInstance,
    catalogue,
    catalogue_by_name,
    devilliers_glasser_02,
    make_quadratic,
    rastrigin,
    rosenbrock_skokov,
)
from .trace import Trace

__version__ = "0.1.0"
