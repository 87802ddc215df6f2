"""Spreading speeds, thresholds and decay rates for reaction-diffusion
fields coupled to a line with nonlocal dispersal, with a direct
finite-difference simulator of the coupled systems."""

from ._core import (  # noqa: F401
    BenchmarkSpeed,
    BumpSpec,
    DecayFit,
    DecayResult,
    DispersionResult,
    FrontCrossing,
    FrontTrace,
    GridSpec,
    Kernel,
    ModelParams,
    Nonlinearity,
    SimState,
    Snapshot,
    SpeedFit,
    SpeedRegime,
    SteadyStateResult,
    Trajectory,
    TransportSpeeds,
    XBoundary,
    YTop,
    __version__,
    a_plus_infty,
    a_zero,
    apply_J,
    c_benchmark,
    c_field,
    c_star,
    D_threshold,
    decay_rates,
    estimate_decay,
    estimate_speed,
    front_position,
    G1,
    init_invasion,
    init_sirt,
    kappa_star,
    omega_sirt_reduced,
    run,
    steady_state,
    step,
    track_front,
    transport_speeds,
    w_star_reduced,
)
