"""Air-sea interface statistics and ergodic capacity of vertical water-to-air optical links."""

__version__ = "0.1.0"

from .capacity import (  # noqa: E402
    CapacityEstimate,
    LinkScenario,
    QuadratureError,
    capacity_sweep,
    ergodic_capacity,
    ergodic_capacity_angle,
    ergodic_capacity_gain,
    gain_density_h,
    instantaneous_capacity,
    make_scenario,
    monte_carlo_capacity,
)
from .channel import (  # noqa: E402
    Environment,
    LinkGeometry,
    NoiseCoeffs,
    RxModel,
    TxModel,
    background_current,
    channel_gain,
    concentrator_gain,
    k_eff,
    lambertian_order_from_half_angle,
    link_budget,
    noise_coeffs,
    path_loss,
    snr,
    solid_angle,
)
from .eckv import EckvParams, mean_square_slope, omnidirectional_spectrum, psi, spreading  # noqa: E402
from .empirical import EmpiricalPdf, EmpiricalPdfError, parse_empirical_csv, read_empirical_csv  # noqa: E402
from .fitting import (  # noqa: E402
    Family,
    FitError,
    FitResult,
    RegressionModel,
    fit_family,
    mae,
    mse_curve,
    rank_families,
    regress_linear,
    regress_power,
)
from .surface import (  # noqa: E402
    CoxMunkModel,
    EmpiricalSlopeModel,
    ModifiedWeibullModel,
    RxTiltModel,
    cm_pdf,
    cm_sample,
    mw_params,
    mw_pdf,
    mw_sample,
    p_in,
    rx_sample,
)
