"""Wave packet transforms and wave front detection for linearized KdV."""

from ._core import (
    Coefficient,
    DataSource,
    Grid,
    Thresholds,
    WfkdvError,
    WindowSpec,
    airy_propagate,
    backward_evolved_jump_datum,
    calibrate,
    config_digest,
    detect,
    gaussian_datum,
    geometric_lambdas,
    jump_gaussian_datum,
    kdv_residual,
    l2_norm,
    escape_bound_lambda0,
    run_acceptance,
    run_command,
    soliton_from_ratio,
    solve,
    to_physical,
    to_spectral,
    trace,
    window_evolve,
    wpt,
)

__version__ = "0.1.0"
