//! Circle-method pipeline for `r_Ω(N)`: exact congruence sums, fitted
//! coefficient tables, the major-arc approximation `𝔣`, the truncated
//! singular series, and arc integrals.

pub mod arcs;
pub mod coeffs;
pub mod series;
pub mod summatory;

pub use arcs::{
    arc_integral_exact, cube_coefficients, default_arc_nodes, major_arc_integral, minor_arc_integral, u_cube_integral,
    ArcIntegral, MajorArcReport,
};
pub use coeffs::{
    fit_coeffs, fit_model, fit_standard, log_grid, standard_grid, Coeff, CoeffTable, FitReport, Provenance, Sample,
    STANDARD_FIT_LIMIT,
};
pub use series::{frak_f, predict_r, singular_series, tail_estimate, SingularSeriesResult};
pub use summatory::{coprime_omega_sums, coprime_omega_sums_many, summatory_omega_ap, OmegaTable};
