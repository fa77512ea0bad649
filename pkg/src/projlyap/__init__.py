"""Top Lyapunov exponents of random SL2 cocycles by discretizing the
transfer operator on the projective line, with an a-posteriori error bound."""
from .cocycle import Cocycle, GeneratorSpec, iterate_cocycle, make_generator, max_norm
from .contraction import KappaCertificate, h_alpha, h_alpha_deriv_bound, kappa_alpha, select_alpha_n
from .discretizer import (Discretization, Mesh, MixingReport, StationaryVector, check_mixing,
                          discretize, nearest, stationary, uniform_mesh)
from .errors import (BadParam, CapExceeded, ConfigError, DegeneratePair, NoContraction,
                     NoConvergence, NonInvertible, NotMixing, NotSl2, ProjLyapError)
from .estimator import (EstimateReport, delta_alpha, full_estimate, holder_constant, l1_estimate,
                        phi_j, psi_j, v_alpha_avg)
from .mc import McEstimate, mc_l1
from .projgeom import (ProjPoint, dphi_norm_bound, dphi_norm_sl2, increment_ratio, proj_action,
                       proj_metric)

__version__ = "0.1.0"
