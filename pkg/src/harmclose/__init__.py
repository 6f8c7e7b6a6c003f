"""Coefficient and geometric checks for close-to-convex harmonic maps of the unit disk."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConstraintError,
    CuspProximityError,
    DomainError,
    HarmcloseError,
    ParameterError,
    SingularDerivativeError,
    SpecParseError,
    SpecValidationError,
)
from .series import (  # noqa: E402
    CoeffSeq,
    HarmonicMap,
    couple_g_from_h,
    coupled_map,
    derivative,
    eval_analytic,
    eval_harmonic,
    eval_tail_bound,
    for_sampling,
)
from .tails import TailDescriptor  # noqa: E402
from .families import FAMILIES, closed_form, from_family  # noqa: E402
from .criteria import (  # noqa: E402
    ConditionReport,
    SampledPositivityReport,
    SampledVerdict,
    Verdict,
    best_phi,
    check_binomial_convexity,
    check_curvature_bound,
    curvature_quantity,
    check_fejer_positivity,
    check_linear_sum,
    check_local_univalence,
    check_rotated_difference,
    check_rotated_halfplane,
    check_square_sum,
    check_weighted_difference,
    generalized_binomial,
)
from .nullseq import (  # noqa: E402
    ConvexNullSeq,
    construct_cumulative,
    construct_primitive,
    validate_convex_null,
)
from .geometry import (  # noqa: E402
    CurveSample,
    GridSpec,
    concavity_indicator,
    cusp_detect,
    local_univalence_margin,
    parabola_profile,
    parabola_region_check,
    trace_circle_image,
)
from .render_io import (  # noqa: E402
    MapSpec,
    ReportDocument,
    build_map,
    parse_map_spec,
    write_curve_csv,
    write_report_json,
    write_svg,
)
