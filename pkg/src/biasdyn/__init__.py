"""Biased-derivative dynamics: operator, simulation, bubble case study and regime estimation."""

__version__ = "0.1.0"

from .bubbles import (
    AccumulationResult,
    CaseStudyResult,
    accumulate_positive_periods,
    bubble_enhancement,
    case_study_grid,
    case_study_states,
    sphere_radius,
)
from .calculus import (
    BiasedDerivative,
    biased_derivative_series,
    biased_difference,
    biased_from_ordinary,
    forward_difference,
    positive_part_integral,
)
from .exceptions import (
    BiasdynError,
    DivergenceError,
    GridMismatchError,
    InsufficientDataError,
    SpecSyntaxError,
    ValidationError,
)
from .integrators import (
    OdeSystem,
    biased_euler_step,
    ordinary_form,
    simulate_biased,
    simulate_reference,
)
from .models import (
    ModelSpec,
    first_order_lag_biased,
    first_order_step_response,
    logistic_biased,
    logistic_solution,
    lotka_volterra_invariant,
    parse_model,
    predator_prey_biased,
)
from .regime import (
    BiasRegimeClassifier,
    RegimeLabel,
    RegimeReport,
    classify,
    fit_bias_regime,
    residual_bias_series,
)
from .serialize import read_csv, write_csv
from .signal import (
    Constant,
    ConstantValue,
    Harmonic,
    ProportionalToState,
    QuadraticInState,
    Step,
    Tabulated,
    TabulatedInput,
    TimeGrid,
    Trajectory,
    Zero,
    eval_bias,
    make_grid,
    sample_input,
)
