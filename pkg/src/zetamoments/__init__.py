"""Numerical experiments on moments, mean values and phases of the Riemann
zeta function in the strip 1/2 < sigma < 1."""

from .approximants import (
    PhaseSeries,
    p_n_line,
    partial_sum_line,
    theta_p_line,
    wrap_phase,
    z_n_line,
)
from .constants import arithmetic_factor, barnes_g_factor, dk_series, moment_prediction
from .meanvalue import EstimateRecord, besicovitch_dist2, fourier_coeff, mean_inner, moment
from .series import LineSeries, TGrid, pow_line
from .stats import (
    density_profile,
    mass_on_set,
    phase_exceedance,
    sin2_identity_residual,
    zero_one_ratio,
)
from .zeros import IntervalSet, ZeroTable, count_zeros, load_zero_table, neighborhoods
from .zeta_eval import zeta_line, zeta_point

__version__ = "0.1.0"
