"""normlab: weighted L^2 norms of SL(2,R) principal-series data.

Layers, bottom to top: group charts and measures (group), principal
series and K-types (principal), Fourier engine (fourier), intertwining
operators and norms (norms), Whittaker expansions against periodic
distributions (automorphic), region norms over K N_{T1} A (siegel),
coefficient models (coeffs), and the verification CLI (cli).
"""

from .coeffs import CoeffModel, generate, parse_model_spec, ramanujan_tau_table
from .errors import NormlabError
from .fourier import (fourier_transform, fourier_transform_batch,
                      regularized_pairing, signed_sin_power_series,
                      sin_power_series)
from .group import (GroupElement, KanCoords, KnaCoords, decompose_kan,
                    decompose_kna, measure_weight, random_elements,
                    weyl_flip, weyl_flip_closed_form)
from .norms import (comp_norm, g_normalizer, intertwine_apply,
                    intertwine_constant, intertwine_pair, kirillov_norm,
                    triple_norm)
from .principal import CayleySum, ReprParams, SmoothVector, act, ktype_eval
from .automorphic import (PeriodicDistribution, l2p_bound_check,
                          p0_weighted_norm, t_average_sq, whittaker_eval)
from .siegel import (ConstantFunction, RegionSpec, WhittakerModel,
                     floor_sandwich, main2_check, main_bound_check,
                     main_constant, omega_a_norm, region_norm_full,
                     region_norm_minus, region_norm_plus_via_weyl)
from .modular import CuspProfile, delta_profile

__version__ = "0.1.0"

__all__ = [
    "CayleySum", "CoeffModel", "ConstantFunction", "CuspProfile",
    "GroupElement", "KanCoords", "KnaCoords", "NormlabError",
    "PeriodicDistribution", "RegionSpec", "ReprParams", "SmoothVector",
    "WhittakerModel", "act", "comp_norm", "decompose_kan", "decompose_kna",
    "delta_profile", "floor_sandwich", "fourier_transform",
    "fourier_transform_batch", "g_normalizer", "generate",
    "intertwine_apply", "intertwine_constant", "intertwine_pair",
    "kirillov_norm", "ktype_eval", "l2p_bound_check", "main2_check",
    "main_bound_check", "main_constant", "measure_weight", "omega_a_norm",
    "p0_weighted_norm", "parse_model_spec", "ramanujan_tau_table",
    "random_elements", "region_norm_full", "region_norm_minus",
    "region_norm_plus_via_weyl", "regularized_pairing",
    "signed_sin_power_series", "sin_power_series", "t_average_sq",
    "triple_norm", "weyl_flip", "weyl_flip_closed_form", "whittaker_eval",
]
