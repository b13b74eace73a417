//! Explicit determinantal expressions: a verified catalog, branching-program
//! conversion, coefficient equations of parametrized matrices and the case
//! analysis for the cubic surface.

mod abp;
mod catalog;
mod cubic;
mod template;

pub use abp::{abp_to_determinant, grenet_abp, Abp, AbpEdge, MAX_GRENET_SIZE};
pub use catalog::{catalog_get, catalog_names, cubic_surface, CatalogEntry, CUBIC_SURFACE};
pub use cubic::{
    analyze_system, cubic_case_analysis, cubic_case_analysis_for, cubic_rank3_template, cubic_six_equations,
    cubic_template_params, residual_check, six_equation_filter, BranchResult, BranchStatus, CaseBranch,
    CubicCaseReport, ResidualCheck, SystemKind, SystemResult, CUBIC_CASE_CLAIM,
};
pub use template::{extract_coefficient_equations, CoefficientEquation, ParamTemplate};

use crate::algebra::Polynomial;

pub(crate) fn poly_text<S: serde::Serializer>(p: &Polynomial, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}
