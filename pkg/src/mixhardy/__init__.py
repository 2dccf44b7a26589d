"""Sharp constants of Hardy-type operators on mixed radial-angular spaces, checked by quadrature."""

from .errors import DomainError, QuadratureError, UnsupportedDimensionError
from .fields import (
    SeparableField,
    chi_ball_norm,
    f_eps_norm,
    make_chi_ball,
    make_f0_fractional,
    make_f_eps,
    make_g0_dual_fractional,
    make_separable,
)
from .norms import MixedExponents, mixed_norm_radial, mixed_norm_separable, weak_mixed_norm_monotone
from .operators import (
    FractionalOrder,
    dual_fractional_hardy_radial,
    dual_hardy_radial,
    fractional_hardy_radial,
    hardy_direct_oracle,
    hardy_radial,
    spherical_average,
)
from .profiles import AngularProfile, RadialProfile
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_radial, integrate_sphere
from .sharpness import (
    FractionalConfig,
    HardyConfig,
    ReportRow,
    dual_eps_rows,
    dual_fractional_row,
    eps_lower_bound,
    fractional_core_constant,
    fractional_row,
    hardy_eps_rows,
    random_bound_rows,
    ratio_experiment,
    sharp_dual_constant,
    sharp_dual_fractional_constant,
    sharp_fractional_constant,
    sharp_hardy_constant,
    sharp_weak_constant,
    weak_rows,
)
from .specfun import Dimension, ball_volume, beta_fn, gamma_fn, log_gamma_fn, sphere_measure

__version__ = "0.1.0"
