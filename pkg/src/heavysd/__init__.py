"""Heavy-tailed loss distributions, the subadditive class H, and numerical
checks of the stochastic dominance ``X <=_st sum_i theta_i X_i``."""
from __future__ import annotations

from .combinators import (check_stochastic_ordering, convex_transform, generalized_r_mean,
                          max_of, mixture, power, recentre, scale_shift)
from .dependence import (DependenceModel, clayton, comonotone, countermonotone, gaussian,
                         independent, sample_joint, verify_nlod_empirical)
from .distributions import (Burr, Deadly, Distribution, DomainError, Frechet, GeneralizedPareto,
                            InverseBurr, InverseGeometric, LogPareto, Pareto, QuantileError,
                            Stoppa, cdf, h_f, quantile, sample, sf)
from .dominance import (DominanceReport, asymptotic_var_ratio, check_dominance_empirical,
                        check_product_bound, check_random_weight_bound,
                        check_var_superadditivity, majorization_experiment, var)
from .expressions import parse_dep, parse_dist, parse_dists, parse_weights
from .grid import Grid
from .membership import (MembershipReport, check_subadditive, check_sufficient_conditions,
                         check_super_frechet, check_super_pareto)
from .quadrature import QuadratureError, sum_cdf_independent, sum_sf_independent

__version__ = "0.1.0"
