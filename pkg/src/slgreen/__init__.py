"""Exact 1D frequency-domain Schrodinger Green's functions with point
interactions (delta and delta-derivative couplings) on smooth, variable-mass
backgrounds, plus scattering extraction, wave-packet synthesis, and a
mollifier-regularization oracle."""

__version__ = "0.1.0"

from .profiles import (MassProfile, Potential, constant_mass, free_potential,
                       gaussian_bump_mass, harmonic_potential, linear_potential,
                       square_well, tabulated_mass, tabulated_potential)
from .slcore import (BoundaryData, G0Evaluator, HomogeneousPair,
                     HomogeneousSolution, ProblemSpec, asymptotic_wavenumber,
                     build_g0, build_pair, effective_coefficient, g0,
                     g0_partials, ode_residual, reduced_constant,
                     solve_homogeneous, wronskian)
from .dressing import (DressedGreen, SingularParams, assemble_general, dress,
                       dress_delta, dress_delta_prime, dressed_boundary,
                       limit_derivative_boundary)
from .scattering import (AsymptoticChannel, ScatteringResult, channel_for,
                         transmission_from_green)
from .wavepacket import (GaussianPacket, OmegaGrid, calibrate_propagator,
                         free_gaussian_evolution, norm_l2, omega_quadrature,
                         propagate_wavepacket, synthesize)
from .reglab import (RegularizationSpec, ScanResult, build_regularized_potential,
                     epsilon_scan, extrapolate_to_zero, mollifier, oracle_green,
                     regularized_profile, transfer_matrix_scatter)
from .config import ScenarioConfig, load_config, parse_config
from .tables import ResultTable, data_rows_equal, read_csv, write_csv
from .runner import GreenFamily, run_scenario
