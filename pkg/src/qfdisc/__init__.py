"""qfdisc: number-threshold discrimination of quasi-free fermionic states.

Builds finite Toeplitz restrictions of [0,1]-valued symbols on the circle,
projects onto Fourier modes inside a plateau window, and evaluates the
exact type I / type II errors of the particle-number threshold test in log
domain, together with trace-only bounds that certify super-exponential
error decay.  A dense Jordan-Wigner oracle at small mode counts certifies
every analytic formula used by the fast path.
"""

__version__ = "0.1.0"

from .errors import (
    NumericalFailure,
    QfdiscError,
    ValidationError,
    WindowTooNarrowError,
)
from .symbols import (
    FejerWindow,
    Segment,
    Symbol,
    cesaro_mean,
    cesaro_mean_grid,
    evaluate,
    fejer_bound_margin,
    fourier_coefficient,
    fourier_coefficients,
    parse_angle,
)
from .toeplitz import (
    CompressedSymbol,
    OccupationSpectrum,
    PositivityReport,
    SpectralWindowProjection,
    ToeplitzRestriction,
    certified_min_eigenvalue,
    compress,
    dft_diagonal_entries,
    dft_diagonal_entry,
    hermitian_occupations,
    min_eigenvalue_positivity,
    restrict,
    window_projection,
)
from .quasifree import (
    ModeOccupations,
    NumberThresholdTest,
    PoissonBinomialDist,
    log_prob_at_most,
    log_prob_greater,
    log_sum_exp,
    poisson_binomial,
    threshold_test_log_bound,
    type1_log_error,
    type2_log_error,
)
from .jw_oracle import (
    DenseFermionOps,
    DenseQuasifreeState,
    build_ops,
    dense_error_probs,
    dense_state,
    functional_check,
    number_operator,
)
from .discrimination import (
    CSV_COLUMNS,
    PointReport,
    ScenarioConfig,
    SweepResult,
    run_point,
    run_sweep,
    scenario_from_dict,
    scenario_to_dict,
    sweep_summary,
    validate_scenario,
    write_csv,
    write_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
