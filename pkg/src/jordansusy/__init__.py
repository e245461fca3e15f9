"""Jordan chains, confluent SUSY transformations and Wronskian integral identities."""

from . import specfun, jordan, susy, wronskid, models
from .errors import (
    JordanSusyError,
    LimitNotResolved,
    NonConvergence,
    PoleError,
    QuadFailure,
    SingularIntegrand,
    StepFailure,
    WronskianNotUnit,
    WronskianZero,
)
from .jordan import (
    ConnectionCoeffs,
    EnergyPotential,
    GridSpec,
    JordanPair,
    SolutionFamily,
    connection_coeffs,
    second_solution,
    solve_u_numeric,
    v_df,
    v_vc,
)
from .models import BoxModel, EDHOModel, RadialOscillatorModel
from .susy import (
    RegularityReport,
    SusyTransform,
    check_regular,
    partner_potential,
    regularity_range,
    transform_state,
)
from .wronskid import (
    NormResult,
    cross_integral,
    double_integral,
    integrate_u2,
    integrate_u2_energy,
    norm_energy,
)

__version__ = "0.1.0"
