//! Distributed-order and distributed-order-Prabhakar memory kernels, the
//! Volterra and Volterra-Prabhakar special functions, and the diffusion
//! observables they generate (mean squared displacement, higher even
//! moments, kurtosis, probability density functions), each closed form
//! cross-checked against independent quadrature, Laplace-inversion, or
//! PDE-discretization oracles.
//!
//! Layout mirrors the math:
//! - [`specfun`]: Gamma family, exponential integrals, three-parameter
//!   Mittag-Leffler / Prabhakar functions, pFq series.
//! - [`volterra`]: Volterra mu/nu functions and the Volterra-Prabhakar
//!   family with its spectral (Bromwich) representation.
//! - [`lapinv`]: Laplace-domain objects and Gaver-Stehfest / shifted-Talbot
//!   inversion used as cross-route oracles.
//! - [`kernels`]: time-domain memory kernels k1, k2 and Sonnine partners
//!   M1, M2, with Tauberian asymptotics.
//! - [`moments`]: MSD, fourth moment, kurtosis, and the auxiliary
//!   convolution integrals.
//! - [`pdf`]: fundamental solution p(x, t) by inverse Laplace transform and
//!   by the Volterra-Prabhakar series.
//! - [`fdoracle`]: independent product-integration solver for the integral
//!   form of the generalized Fokker-Planck equation.
//! - [`cmcheck`]: numerical complete-monotonicity / Bernstein /
//!   log-convexity certification.

pub mod cmcheck;
pub mod config;
pub mod error;
pub mod fdoracle;
pub mod kernels;
pub mod lapinv;
pub mod moments;
pub mod pdf;
pub mod quad;
pub mod specfun;
pub mod volterra;
pub mod xprec;

pub use config::{EvalConfig, EvalResult, Precision, SeriesConfig};
pub use error::{Error, Result};
