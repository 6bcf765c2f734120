"""Sum-of-squares synthesis of safety barrier certificates for polynomial
dynamical systems: discrete/continuous time, deterministic/stochastic."""

__version__ = "0.1.0"

import os as _os

# Degree-search workers are forked processes; multi-threaded BLAS pools are
# not fork-safe (a child can deadlock at its first BLAS call) and the Gram
# blocks here are far too small to benefit from threading. Only effective if
# this package is imported before numpy initializes.
for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    _os.environ.setdefault(_var, "1")

from .errors import (  # noqa: F401
    BarrierCertError,
    ConfigError,
    DimensionMismatchError,
    EmptyBoxError,
    InvalidCertificateError,
    InvalidProblemError,
    MomentOrderExceededError,
    NonpositiveLambdaError,
    NonPolynomialError,
    NotSymmetricError,
    OddDegreeError,
    PolynomialSyntaxError,
    UnknownSymbolError,
)
from .poly import (  # noqa: F401
    Monomial,
    Polynomial,
    VariableTable,
    monomial_basis,
    parse_polynomial,
)
from .moments import NoiseSpec, expect_over_noise, raw_moment  # noqa: F401
from .sos import (  # noqa: F401
    SemiAlgebraicSet,
    SosProgram,
    box_to_semialgebraic,
    compile_to_sdp,
    dump_problem_text,
)
from .sdp import SdpSolution, SolveOptions, SolveStatus, check_gram_psd, solve_sdp  # noqa: F401
from .systems import (  # noqa: F401
    Box,
    Certificate,
    CtDs,
    CtSs,
    DtDs,
    DtSs,
    Mode,
    SafetyProblem,
    SynthOutcome,
    SynthStatus,
    ValidationReport,
)
from .synth import (  # noqa: F401
    SynthOptions,
    confidence_bound,
    expected_next,
    infinitesimal_generator,
    lie_derivative,
    synth_ct_ds,
    synth_ct_ss,
    synth_dt_ds,
    synth_dt_ss,
    synthesize,
    validate_certificate,
)
from .engine import SearchPlan, SearchResult, parallel_search, serial_search  # noqa: F401
from .config import RunConfig, build_system, dump_config, load_config, load_config_file  # noqa: F401
from .results import RunResult, execute_config, run_config  # noqa: F401
