//! Evaluation configuration and the common value-plus-error result type.

use serde::Serialize;

/// Accumulator width for series summation. `Extended` runs term recurrences
/// and sums in double-double; `Double` uses compensated f64.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended,
}

impl Precision {
    /// Reads PRABHAKAR_PRECISION ("double"/"extended"), defaulting to
    /// extended; unknown values fall back to the default.
    pub fn from_env() -> Precision {
        match std::env::var("PRABHAKAR_PRECISION").as_deref() {
            Ok("double") => Precision::Double,
            _ => Precision::Extended,
        }
    }
}

/// Truncation and tolerance knobs for a single series evaluation.
#[derive(Clone, Copy, Debug)]
pub struct SeriesConfig {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            max_terms: 2000,
            abs_tol: 1e-14,
            rel_tol: 1e-14,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.max_terms < 1 || self.abs_tol <= 0.0 || self.rel_tol <= 0.0 {
            return Err(crate::Error::Domain(
                "series config requires max_terms >= 1 and positive tolerances".into(),
            ));
        }
        Ok(())
    }

    /// Either tolerance satisfies; series with zero crossings need abs_tol.
    pub fn met(&self, err: f64, value: f64) -> bool {
        err <= self.abs_tol || err <= self.rel_tol * value.abs()
    }
}

/// Global evaluation configuration threaded through the library.
#[derive(Clone, Copy, Debug)]
pub struct EvalConfig {
    pub series: SeriesConfig,
    /// Quadrature target for adaptive rules (absolute, per integral).
    pub quad_tol: f64,
    /// Maximum adaptive subdivisions per integral.
    pub quad_max_depth: usize,
    /// |z| above which the three-parameter Mittag-Leffler switches to the
    /// algebraic large-argument expansion (negative real axis).
    pub ml_asymptotic_crossover: f64,
    pub precision: Precision,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            series: SeriesConfig::default(),
            quad_tol: 1e-11,
            quad_max_depth: 48,
            ml_asymptotic_crossover: 50.0,
            precision: Precision::Extended,
        }
    }
}

/// Value with an estimated absolute error and convergence diagnostics.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl EvalResult {
    pub fn exact(value: f64) -> EvalResult {
        EvalResult {
            value,
            abs_err: f64::EPSILON * value.abs(),
            terms_used: 0,
            converged: true,
        }
    }

    pub fn new(value: f64, abs_err: f64, terms_used: usize, converged: bool) -> EvalResult {
        EvalResult {
            value,
            abs_err,
            terms_used,
            converged,
        }
    }
}
