"""Weighted descent metrics, variational points and equilibrium certificates
on finite asymmetric distance spaces.

The library materializes the rescaled distance
e(x, y) = B(w(x) + d(x, y)) - B(w(x)) from a base almost metric d, a
nonexpansive weight w and a decreasing rate profile b (with running
integral B), finds maximal points of the induced quasi-order by ordered
descent, finds equilibrium points of bifunctions, and emits certificates
carrying every checked inequality with its numeric slack.
"""

from .almost_metric import (
    TAU_AXIOM,
    AlmostMetricTable,
    CauchyResult,
    FinitePrefixSequence,
    PseudometricTable,
    StrasyResult,
    e_limits,
    is_cauchy,
    is_strasy,
    metric_closure,
    triangle_slacks,
    validate_almost_metric,
    validate_pseudometric,
)
from .equilibrium import (
    Bifunction,
    Marginal,
    bkp_point,
    equilibrium_via_e,
    equilibrium_zhong,
    marginal,
    potential_to_bifunction,
    validate_bifunction,
)
from .errors import (
    DivergenceError,
    DomainError,
    MalformedInputError,
    PreconditionError,
    PremiseError,
    ScenarioError,
    SufficiencyError,
    UndeterminedError,
)
from .normal_fn import (
    TAU_INV,
    TAU_QUAD,
    NormalFunction,
    check_integral_properties,
    check_normality,
    integrate_b,
    normal_function,
    quadrature_B,
    reparametrization_gap,
    sample_property_triples,
)
from .reporting import Certificate, Inequality, ValidationReport, Violation
from .solver import (
    Potential,
    evp_local,
    evp_point,
    leq,
    maximal_elements,
    successor_set,
    variational_point_report,
    zvp_local,
    zvp_point,
)
from .zhong import (
    TAU_ROUNDTRIP,
    CompatibilityCertificate,
    Weight,
    ZhongMetric,
    build_zhong,
    compatibility_certificate,
    recover_d,
    sandwich_bounds,
    validate_weight,
    weight_from_anchor,
    weight_infimal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
