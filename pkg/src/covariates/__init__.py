"""Document covariates: year splines, journal dummies and team characteristics."""

from src.covariates.design import (
    DesignMatrix,
    align_documents,
    build_design_matrix,
    design_frame,
    load_design,
    save_design,
)
from src.covariates.splines import (
    SplineSpec,
    bspline_basis,
    bspline_matrix,
    make_spline_spec,
)

__all__ = [
    "DesignMatrix",
    "SplineSpec",
    "align_documents",
    "bspline_basis",
    "bspline_matrix",
    "build_design_matrix",
    "design_frame",
    "load_design",
    "make_spline_spec",
    "save_design",
]
