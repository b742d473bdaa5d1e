"""Error-rate analysis and simulation for line-of-sight THz links."""

from .atmosphere import (
    AbsorptionBreakdown,
    AtmosphericConditions,
    absorption_coefficient,
    absorption_gain,
    saturated_water_vapor_pressure,
    volume_mixing_ratio,
)
from .channel import (
    DeterministicGains,
    JitterInterpretation,
    LinkConfig,
    MisalignmentModel,
    build_misalignment_model,
    deterministic_gains,
    fspl_gain,
    misalignment_gain,
    misalignment_model,
    misalignment_pdf,
    sample_pointing_error,
)
from .experiments import Method, SweepRow, SweepSpec, run_sweep, snr_gap_at_ser, validity_check
from .montecarlo import McConfig, McEstimate, McMode, run_mc
from .ser import (
    ModulationScheme,
    QMode,
    SerParams,
    avg_ser_bpsk_closed,
    avg_ser_closed,
    avg_ser_qpsk_closed,
    avg_ser_quadrature,
    instantaneous_ser,
    instantaneous_snr,
    ser_params,
)
from .special import lower_incomplete_gamma

__version__ = "0.1.0"
