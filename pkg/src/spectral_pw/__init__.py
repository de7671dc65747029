"""
Sobolev, Besov and Paley-Wiener vectors of a self-adjoint operator, computed
on finite-dimensional models (circle, 2-sphere, graph Laplacian).
"""

from .besov import (
    BesovParams,
    BesovReport,
    besov_approx,
    besov_derivative,
    besov_frame,
    besov_kfun,
    besov_lp,
    besov_modulus,
    besov_zygmund,
    equivalence_report,
)
from .core import (
    SpectralModel,
    apply_multiplier,
    bernstein_verify,
    best_approx_error,
    in_paley_wiener,
    load_model,
    pw_project,
    riesz_boas_apply,
    save_model,
    sobolev_norm,
)
from .errors import (
    CapabilityError,
    CoverageError,
    DomainError,
    PreconditionError,
    SizeError,
    SpectralError,
    UndersampledError,
)
from .frames import (
    FrameSystem,
    build_frame_system,
    build_sampling_set,
    calibrate_constant,
    dual_frame,
    poincare_calibrate,
    pw_frame,
    reconstruct,
)
from .models import (
    CircleSpec,
    GraphSpec,
    SphereSpec,
    build_circle_model,
    build_graph_model,
    build_sphere_model,
)
from .partition import build_partition, lp_decompose, lp_reconstruct, required_levels
from .rng import SplitMix64, random_ensemble, rng_stream
from .semigroups import (
    ModulusGrid,
    build_group_cache,
    group_apply,
    hardy_steklov,
    k_functional,
    mixed_modulus,
)

__version__ = "0.1.0"
