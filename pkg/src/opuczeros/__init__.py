"""Zero intensity of random combinations of orthogonal polynomials on the unit circle."""

from .errors import OpucError
from .intensity import (
    IntensityGrid,
    convergence_profile,
    intensity,
    intensity_cd,
    intensity_general,
    intensity_grid,
    limit_intensity,
)
from .kernels import KernelTriple, kernel_cd, kernel_direct
from .opuc import OpucBasis, PointEval, build_basis, eval_all, verblunsky
from .randompoly import (
    MonteCarloReport,
    find_roots,
    monte_carlo_expected_zeros,
    sample_coefficients,
    to_monomial,
)
from .regions import AnnularSector, Annulus, Disk, Rectangle, contains, integrate_intensity
from .weights import (
    MomentSequence,
    WeightSpec,
    compute_moments,
    evaluate_weight,
    geometric_mean,
    szego_function,
)

__version__ = "0.1.0"
