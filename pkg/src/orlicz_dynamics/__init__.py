"""Hyperbolicity and shadowing for composition operators on Orlicz spaces
over atomic dissipative systems."""
from .kernels import BACKEND
from .errors import (DomainExceeded, InvalidConfig, InvalidYoungFunction, NotAttained,
                     NotHyperbolic, OrliczDynamicsError, SplitLeak, UnboundedConjugate,
                     UnboundedDistortion, WeightUnbounded, WindowOverflow)
from .young import (YoungFunction, check_delta2, check_delta_prime, complementary, custom,
                    exp_minus_linear, power, power_scaled)
from .space import (DissipativeSystem, build_system, geometric, rn_profile,
                    table_with_tails, two_sided_geometric)
from .norms import SimpleFunction, indicator_norm, luxemburg, modular, orlicz_norm
from .operator import (SequenceVector, WeightedShift, apply, factor_weights, project,
                       selector, shift_apply, shift_norm, split)
from .classify import (DistortionReport, HyperbolicityCertificate, certify,
                       distortion, nu, rate_table, rn_conditions, spectral_bounds)
from .shadow import (PseudoOrbit, ShadowResult, make_pseudo_orbit, shadow_bound,
                     shadow_on_shift)

__version__ = "0.1.0"
