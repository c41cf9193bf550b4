"""Full-duplex AF relay OFDM simulator with an IIR equivalent channel."""

from ._core import (
    Channel,
    Coefficients,
    DegenerateChannel,
    Error,
    InvalidInput,
    SingularSubcarrier,
    StabilityError,
    __version__,
    beta_from_alpha,
    budget,
    compute_coeffs,
    dft,
    idft,
    is_stable,
    measure_snr,
    optimize_gain,
    optimize_prefilter_gain,
    run_figure,
    simulate_frame,
)

__all__ = [
    "Channel",
    "Coefficients",
    "DegenerateChannel",
    "Error",
    "InvalidInput",
    "SingularSubcarrier",
    "StabilityError",
    "__version__",
    "beta_from_alpha",
    "budget",
    "compute_coeffs",
    "dft",
    "idft",
    "is_stable",
    "measure_snr",
    "optimize_gain",
    "optimize_prefilter_gain",
    "run_figure",
    "simulate_frame",
]
