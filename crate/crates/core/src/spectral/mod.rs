//! Spectral analysis of degree growth: cone spectral radii along model
//! towers, eigenclass approximants, asymptotic fits and recurrences.

mod cone;
mod fit;
mod identity;
mod recurrence;
mod tower;

pub use cone::{rho_cone, ConeRadius, EXACT_CHECK_MAX};
pub use fit::{
    estimate_lambda1, fit_main_theorem, hypothesis_holds, Divergence, FitReport, Lambda1Estimate,
    ResidualRow, HYPOTHESIS_TOL, MIN_FIT_WINDOW,
};
pub use identity::{
    spectral_identity_suite, IdentityCheck, IdentityLedger, EIGEN_TOL, RANDOM_PAIRS,
};
pub use recurrence::{detect_recurrence, detect_recurrence_with, Recurrence, DEFAULT_MAX_ORDER};
pub use tower::{
    approx_class, eigenclass_residual, monomial_lambda1, rho_tower, spectral_data, ApproxClass,
    EigenResidual, RhoLevel, SpectralData, Tower, DEFAULT_TOWER_RAY_CAP, MAX_TOWER_DEPTH,
};
