"""Numerical laboratory for one-dimensional ergodic Schrodinger
operators at large coupling: Lyapunov exponents, density of states,
log-potential cross-validation, explicit exceptional-set bounds, and
resonance analysis for kicked-rotor and skew-shift potentials.
"""

__version__ = "0.1.0"

from .dynamics import (SkewShiftState, StdMapState, reduce_angle,
                       skew_shift_orbit, skew_shift_step,
                       skew_shift_step_inverse, std_map_orbit, std_map_step,
                       std_map_step_inverse)
from .operators import (ComplexEnergy, ConfigurationError, NumericalFailure,
                        OperatorSpec, PotentialWindow, det_bound,
                        det_recursion, det_recursion_scaled, green_entry,
                        sample_potential, sturm_count, sturm_counts_array)
from .lyapunov import (LyapunovEstimate, constant_oracle, initial_state,
                       lyapunov_avg, lyapunov_single, periodic_oracle,
                       transfer_step, upper_bound)
from .dos import (SpectralHistogram, WindowBound, dos_histogram, empirical_g,
                  frac_moment_bound, green_avg, green_samples, stieltjes,
                  window_mass_samples)
from .thouless import (ThoulessRow, log_potential, thouless_gamma,
                       thouless_scan)
from .bounds import (BoundReport, LowGammaBoundInputs, density_integral_check,
                     det_moment_mc, det_moment_rhs, low_gamma_measure_bound,
                     measure_low_gamma)
from .resonance import (LambdaClass, classify_coupling, det3,
                        det3_moment_integral, inner_resonance_integral,
                        kick_phase, kick_phase_roots, phase_proximity_integral,
                        phase_roots)
from .quad import (QuadResult, integrate_adaptive,
                   scaled_pair_singularity_integral)

__all__ = [
    "__version__",
    "SkewShiftState", "StdMapState", "reduce_angle", "skew_shift_orbit",
    "skew_shift_step", "skew_shift_step_inverse", "std_map_orbit",
    "std_map_step", "std_map_step_inverse",
    "ComplexEnergy", "ConfigurationError", "NumericalFailure",
    "OperatorSpec", "PotentialWindow", "det_bound", "det_recursion",
    "det_recursion_scaled", "green_entry", "sample_potential", "sturm_count",
    "sturm_counts_array",
    "LyapunovEstimate", "constant_oracle", "initial_state", "lyapunov_avg",
    "lyapunov_single", "periodic_oracle", "transfer_step", "upper_bound",
    "SpectralHistogram", "WindowBound", "dos_histogram", "empirical_g",
    "frac_moment_bound", "green_avg", "green_samples", "stieltjes",
    "window_mass_samples",
    "ThoulessRow", "log_potential", "thouless_gamma", "thouless_scan",
    "BoundReport", "LowGammaBoundInputs", "density_integral_check",
    "det_moment_mc", "det_moment_rhs", "low_gamma_measure_bound",
    "measure_low_gamma",
    "LambdaClass", "classify_coupling", "det3", "det3_moment_integral",
    "inner_resonance_integral", "kick_phase", "kick_phase_roots",
    "phase_proximity_integral", "phase_roots",
    "QuadResult", "integrate_adaptive", "scaled_pair_singularity_integral",
]
