"""Elliptic Demazure-Lusztig operators and elliptic Schubert classes, evaluated
numerically on random sample panels."""

from .algebra import (
    MUTATION_SITES,
    AlgebraElement,
    DemazureLusztig,
    alg_identity,
    alg_mul,
    alg_zero,
    algebra_equals,
    anti_involution,
    bernstein_residual,
    delta,
    delta_dyn,
    dl_simple,
    dl_word,
    monomial,
    scalar,
    transition_a,
    transition_b,
)
from .config import RunConfig, load_config, parse_config
from .duals import (
    QDualElement,
    StarDualElement,
    aux_dual_class,
    bullet_q,
    bullet_star,
    elliptic_class,
    embed_phi,
    f_basis,
    opposite_class,
    pairing,
    poincare_scalar,
    project_pi,
    q_unit,
    restriction_table,
    right_dl_action,
    star_product,
    star_unit,
    t_star_dual,
    y_full,
    y_prime,
)
from .errors import (
    ConfigurationError,
    ConsistencyError,
    EllschubError,
    InvalidArgumentError,
    InvalidParamsError,
    PanelConstructionError,
    PoleError,
)
from .field import FieldElement, FunctionField, build_field, equals, sample_panel
from .kernels import BACKEND
from .roots import CartanDatum, WeylElement, WeylGroup, build_root_system
from .theta import ModularParams, theta, theta_series_oracle

__version__ = "0.1.0"
