"""sheetpde: a numerical laboratory for first-order stochastic PDEs driven
by Brownian-sheet noise.

Construct sheet samples and diagonal noise, build closed-form solutions
of the transport SPDE, verify them in the weak sense against smooth
bump test functions, estimate quadratic variation and Holder exponents
of the fields the existence criterion hinges on, and simulate forward
yield curves.
"""

__version__ = "0.1.0"

from .grids import GridError, GridSpec, ScalarField, make_grid
from .calculus import SmoothFunction, central_diff, integrate_2d, integrate_time
from .coefficients import (CoeffFn, CoefficientSet, const, coord_sum, coord_t,
                           coord_x, polynomial)
from .bumps import TestFunction, bump_eval, interior_bump, standard_bump_battery
from .rng import stream_for_path
from .sheet import (DiagonalPath, RectRegion, SheetSample, diagonal_noise,
                    empirical_covariance, rect_measure, restrict_sheet,
                    sample_sheet, sample_sheets)
from .operators import (OperatorD, adjoint_identity_residual, apply_D,
                        apply_adjoint, weak_residual_time_equation,
                        weak_residual_transport)
from .solver import (ExistenceCriterionError, InitialCurve, Provenance,
                     SolutionField, flat_curve, ito_integral,
                     nelson_siegel_curve, polynomial_curve, solve_b_zero,
                     solve_ito_form, solve_transport, integral_identity_sides,
                     transport_solution)
from .diagnostics import (ExistenceReport, HolderReport, LineField, QVReport,
                          build_Z, build_Z_characteristic, equal_slab_partition,
                          existence_check, holder_estimate, partition_sup_check,
                          partition_product_check, qv_characteristic_theoretical,
                          qv_estimate, qv_report, qv_slicewise, qv_theoretical,
                          separability_residual, weak_bracket_field)
from .yield_curve import (CompareReport, EnsembleResult, YieldScenario,
                          compare_models, drift_decomposition_residual,
                          ms_simulate, sheet_increment_covariance,
                          simulate_yield, transport_baseline)

__all__ = [name for name in dir() if not name.startswith("_")]
