//! Link-level simulator and closed-form analytics for monostatic and
//! multistatic backscatter (scatter-radio) sensor networks.
//!
//! The crate is organized around the pipeline of a scatter-radio link study:
//!
//! * [`specfun`] — special functions (Gamma family, modified Bessel K,
//!   Tricomi U, Gaussian tail) plus an adaptive quadrature module used as an
//!   independent oracle by the test suites.
//! * [`channel`] — path loss, Nakagami fading samplers, and the power
//!   distributions of monostatic (roundtrip) and dyadic (two-hop) links.
//! * [`signal`] — FSK tag symbols, received-vector synthesis, energy per bit,
//!   subcarrier orthogonality and adjacent-channel interference coefficients.
//! * [`detect`] — coherent ML, noncoherent envelope, and square-law bit
//!   decisions.
//! * [`analytic`] — closed-form BER, diversity order, SINR, information and
//!   energy outage expressions.
//! * [`topology`] — square-grid geometry and placement ensembles.
//! * [`simkernel`] — seeded, shard-parallel Monte-Carlo engine tying the
//!   above together.

pub mod analytic;
pub mod channel;
pub mod detect;
mod error;
pub mod signal;
pub mod simkernel;
pub mod specfun;
pub mod topology;

pub use error::{Error, Result};
