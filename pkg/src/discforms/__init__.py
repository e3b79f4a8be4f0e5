"""Poincare series, weighted Bergman kernels and very-ampleness
certificates on the unit disc with its Bergman metric."""

__version__ = "0.1.0"

from .errors import (
    DiscformsError, BoundaryPoint, NonUnitary, BudgetExceeded,
    InsufficientBall, UnboundedSeed, QuadratureDiverged, TargetNotReached,
    OrbitSingularity, DegenerateBasis, EquivalentPoints, ConfigError,
)
from .geometry import (
    bergman_kernel, bergman_metric, distance, mobius, mobius_jacobian,
    dbar_log_kernel_norm_sq, df_constant,
)
from .group import (
    GroupElement, FuchsianGroup, OrbitBall, enumerate_ball, orbit_count,
    orbit_counts, preset_genus2_octagon, load_group,
)
from .domain import FundamentalDomain, dirichlet_domain, disc_domain
from .series import (
    SeedFunction, SeriesValue, weight_sum, poincare_eval, poincare_values,
    norm_pl, lemma22_check, polynomial_approx, schwarz_bound_check,
)
from .kernels import (
    weighted_kernel, weighted_kernel_series, kernel_transformation_check,
    reproducing_check, cm_constant, relative_poincare, roundtrip_check,
)
from .seshadri import (
    injectivity_radius, density, cutoff_a, psi_x, psi_values,
    quasi_psh_check, seshadri_lower_bound, SeshadriReport,
    ampleness_thresholds,
)
from .embedding import (
    SectionBasis, build_basis, eval_sections, jet_separation_test,
    point_separation_test, very_ampleness_scan,
)
