"""Weil algebras, k-jets of maps and alpha-jets as finitely represented algebra morphisms."""

from .alpha_jet import AlphaJet, chi, chi_inverse, lab_morphism_apply, pushforward, source, target
from .alpha_jet import evaluate as alpha_eval
from .bundle_charts import (
    AutomorphismFamily,
    ChartTransition,
    cocycle_check,
    compose_transitions,
    double_trivialization_check,
    family_action,
    family_at,
    smoothness_probe,
    transition_apply,
)
from .errors import (
    AlgebraNotJetTypeError,
    ArityError,
    DomainError,
    InvalidMorphismError,
    NotAutomorphismError,
    ParseError,
    PointMismatchError,
    SpecMismatchError,
    WeilJetError,
)
from .map_jet import MapJet, jet_compose, jets_equivalent
from .smooth_expr import Expr, SmoothMap, evaluate, parse_expr, taylor, taylor_map
from .weil_algebra import (
    AlgebraElement,
    AlgebraMorphism,
    AlgebraSpec,
    algebra_dim,
    augmentation,
    is_automorphism,
    jet_spec,
    maximal_ideal_part,
    morphism_apply,
    morphism_compose,
)

__version__ = "0.1.0"
