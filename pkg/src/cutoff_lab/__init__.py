"""Cut-off analysis for small Gaussian perturbations of linear recurrences."""

from .cutoff import (CutoffSchedule, TVCurve, c3_ratio, centered_curve, cutoff_time,
                     distance_curve, window_cutoff_check)
from .errors import (CutoffLabError, DomainError, IllConditioned, NonConvergence,
                     OutOfRange, Unstable, ValidationError, ZeroSolution)
from .gaussian_metrics import std_normal_cdf, tv_general, tv_mean_shift, tv_variance_only
from .moments import GaussianLaw, law_at, limit_law, psi_weights, sigma_inf_sq, sigma_t_sq
from .montecarlo import SimConfig, SimResult, simulate_paths, validate_moments
from .oscillator import classify_roots, discretize, stability_range
from .polyroots import (PolyCoeffs, RecurrenceSpec, RootDecomposition, characteristic_polynomial,
                        check_stability, find_roots, spec_roots)
from .recurrence import (AsymptoticProfile, SolutionRepresentation, Verdict, asymptotic_profile,
                         iterate_deterministic, maximal_set_membership, scan_liminf,
                         solve_representation)

__all__ = [name for name in dir() if not name.startswith("_")]
