//! Special functions underlying the closed-form link analytics.
//!
//! Every function here is pure and deterministic; callers may share them
//! freely across threads. Evaluation strategies differ per function (Lanczos,
//! series/continued fractions, Temme + CF2, double-exponential quadrature);
//! the test suites check each one against an independent adaptive
//! Gauss–Kronrod oracle built on [`quad`].

mod bessel;
mod gamma;
mod incgamma;
pub mod quad;
mod qfunc;
mod hyperu;

pub use bessel::bessel_k;
pub use gamma::{gamma, ln_gamma};
pub use hyperu::hyper_u;
pub use incgamma::{
    exp1, lower_incomplete_gamma, regularized_lower_gamma, regularized_upper_gamma,
    upper_incomplete_gamma,
};
pub(crate) use incgamma::upper_incomplete_gamma_scaled;
pub use qfunc::{normal_cdf, q_function};
