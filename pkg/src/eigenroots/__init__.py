"""Exact eigenpolynomials of degenerate exactly-solvable operators,
multiprecision root clouds and the asymptotics built on them."""
from importlib import resources

from .exact import (
    BigComplex,
    GaussianRational,
    Polynomial,
    falling_factorial,
    poly_derivative,
    poly_eval,
    poly_scale_arg,
)
from .operators import (
    Classification,
    Operator,
    attainment_set,
    check_b_equals_d,
    classify,
    exponent_b,
    exponent_d,
    load_operator,
    save_operator,
)
from .eigensolver import (
    Eigenpair,
    diagonal_entry,
    eigenpolynomial,
    eigenpolynomial_range,
    eigenvalue,
)
from .rootfinder import RootCloud, hull_contains, largest_modulus, roots
from .analysis import (
    CauchyEquation,
    GrowthReport,
    ResidualReport,
    cauchy_equation,
    cauchy_residual,
    cloud_hausdorff,
    derivative_measure_distance,
    empirical_cauchy,
    growth_report,
    interlace_real,
    lemma2_margin,
    lemma3_rhs,
    scaled_cloud,
)

__all__ = [name for name in dir() if not name.startswith("_")]


def bundled_operator(name: str) -> Operator:
    """Load one of the packaged reference operators (t1..t6, t4_tilde,
    t5_tilde, t6_tilde, t7, laguerre, hermite, singular3)."""
    ref = resources.files("eigenroots").joinpath("testdata", f"{name}.json")
    import json

    return Operator.from_dict(json.loads(ref.read_text()))
