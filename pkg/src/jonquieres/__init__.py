"""Exact computations in the Jonquieres and Cremona groups of the plane."""

from .centralizer import (
    additive_telescope_split,
    cent0_structure,
    cent_membership,
    char_p_translation_member,
    delta,
    diagonal_kk,
    diagonalize_over_Kx,
    elliptic_normal_form_recognize,
    involution_curve,
    is_elliptic,
    is_elliptic_fiberwise,
    telescope_split,
)
from .cremona import (
    CremonaMap,
    GrowthType,
    HomPoly,
    classify_growth,
    compose,
    degree_sequence,
    jonq_to_cremona,
)
from .errors import *  # noqa: F401,F403
from .fields import (
    QQ,
    GF,
    Cyclotomic,
    field_from_string,
    format_scalar,
    multiplicative_order,
    nth_root_in_field,
    parse_scalar,
    relation_lattice,
    root_of_unity,
)
from .formal import (
    LocalModel,
    diagonal_commutant_check,
    fixed_formal_section_check,
    fixed_formal_sections,
    solve_efgh,
)
from .grouplab import (
    classify_pair,
    degree_profile,
    example_centb,
    example_deserti,
    example_torsion_additive,
    example_torsion_multiplicative,
)
from .jonq import (
    JonqMap,
    base_order_report,
    centralizer_persistence_report,
    commutes,
    fiber_events,
    jonq_compose,
    jonq_equal,
    jonq_inverse,
)
from .mobius import INF, Mobius, normalizing_coordinate
from .parser import parse_corpus, parse_map, parse_ratfunc, render_map
from .poly import Poly, RatFunc, is_square_ratfunc, squarefree_decomposition, substitute_mobius
from .series import LaurentSeries, TruncSeries

__version__ = "0.1.0"
