//! Time-domain memory kernels (single-order and distributed-order, plain
//! and Prabhakar), their Sonnine partners, exact series forms, Tauberian
//! asymptotics, and the time-domain Sonnine residual used as an identity
//! oracle.

use crate::config::{EvalConfig, EvalResult, Precision};
use crate::error::{Error, Result};
use crate::quad::{adaptive_gk, adaptive_singular, integrate_real_line_atan};
use crate::specfun::{
    digamma, e1_scaled_cf, exp_integral_e1, prabhakar_e, rgamma, PrabhakarParams,
    EULER_GAMMA,
};
use crate::volterra::{nu, vp_epsilon, VPArgs, VpRoute};
use crate::xprec::Dd;

/// Kernel family selector of the generalized Fokker-Planck equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelKind {
    /// K1(mu; t) = t^-mu / Gamma(1-mu).
    SingleCaputo { mu: f64 },
    /// K2(alpha, mu, gamma; lambda; t) = e^-gamma_{alpha,1-mu}(lambda; t).
    SinglePrabhakar {
        alpha: f64,
        mu: f64,
        gamma: f64,
        lambda: f64,
    },
    /// k1(t) = int_0^1 t^-mu/Gamma(1-mu) dmu.
    DistributedOrder,
    /// k2(alpha, gamma; lambda; t) = int_0^1 e^-gamma_{alpha,1-mu}(lambda; t) dmu.
    DistributedPrabhakar { alpha: f64, gamma: f64, lambda: f64 },
}

/// A memory kernel together with the diffusion coefficient B.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemoryKernel {
    pub kind: KernelKind,
    /// Diffusion coefficient B > 0.
    pub b: f64,
}

impl MemoryKernel {
    pub fn new(kind: KernelKind, b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::Domain("diffusion coefficient B must be > 0".into()));
        }
        match kind {
            KernelKind::SingleCaputo { mu } => {
                if !(mu > 0.0 && mu < 1.0) {
                    return Err(Error::Domain("mu must lie in (0,1)".into()));
                }
            }
            KernelKind::SinglePrabhakar {
                alpha,
                mu,
                gamma,
                lambda,
            } => {
                if !(mu > 0.0 && mu < 1.0 && alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::Domain("mu, alpha must lie in (0,1)".into()));
                }
                if !(gamma > 0.0 && gamma < 1.0) || !(lambda > 0.0) {
                    return Err(Error::Domain(
                        "gamma in (0,1) and lambda > 0 required".into(),
                    ));
                }
            }
            KernelKind::DistributedOrder => {}
            KernelKind::DistributedPrabhakar {
                alpha,
                gamma,
                lambda,
            } => {
                if !(alpha > 0.0 && alpha < 1.0 && gamma > 0.0 && gamma < 1.0) {
                    return Err(Error::Domain("alpha, gamma must lie in (0,1)".into()));
                }
                if !(lambda > 0.0) {
                    return Err(Error::Domain("lambda must be > 0".into()));
                }
            }
        }
        Ok(MemoryKernel { kind, b })
    }

    pub fn distributed_order(b: f64) -> Result<Self> {
        Self::new(KernelKind::DistributedOrder, b)
    }

    pub fn distributed_prabhakar(alpha: f64, gamma: f64, lambda: f64, b: f64) -> Result<Self> {
        Self::new(
            KernelKind::DistributedPrabhakar {
                alpha,
                gamma,
                lambda,
            },
            b,
        )
    }
}

/// Evaluation route for k2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K2Route {
    /// k1 * (delta + Prabhakar series) time-domain convolution.
    Convolution,
    /// Series of Volterra nu-differences.
    NuSeries,
    /// Difference of two Volterra-Prabhakar functions.
    EpsilonDiff,
}

/// Evaluation route for M2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum M2Route {
    /// M1 * (delta + Prabhakar series) time-domain convolution.
    Convolution,
    /// Double series in t with digamma weights.
    ExactSeries,
}

// ---------------------------------------------------------------------------
// k1 and M1
// ---------------------------------------------------------------------------

/// k1(t) = nu(t,-1) - nu(t). Positive, completely monotone.
pub fn k1_time(t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if !(t > 0.0) {
        return Err(Error::Domain("k1 requires t > 0".into()));
    }
    if t > 50.0 {
        return k1_time_spectral(t, cfg);
    }
    let a = nu(t, -1.0, cfg)?;
    let b = nu(t, 0.0, cfg)?;
    Ok(EvalResult::new(
        a.value - b.value,
        a.abs_err + b.abs_err,
        0,
        true,
    ))
}

/// Spectral route: k1(t) = int_0^inf e^{-rt} (1 + 1/r)/(pi^2 + ln^2 r) dr.
/// Valid for every t > 0; the nu-difference loses all digits once the
/// cancelling e^t parts dominate, so this is the large-t workhorse.
pub fn k1_time_spectral(t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if !(t > 0.0) {
        return Err(Error::Domain("k1 requires t > 0".into()));
    }
    let pi2 = std::f64::consts::PI.powi(2);
    let g = move |y: f64| {
        // (e^y + 1) e^{-t e^y} / (pi^2 + y^2), written overflow-safe
        let a = t * y.exp(); // inf is fine: both exps flush to 0
        ((y - a).exp() + (-a).exp()) / (pi2 + y * y)
    };
    let (v, e) = integrate_real_line_atan(&g, cfg.quad_tol)?;
    Ok(EvalResult::new(v, e, 0, true))
}

/// Cumulative integral of k1 near zero: int_0^tau k1 = nu(tau) - nu(tau, 1).
/// Stable down to tau = e^-600; this carries the fat logarithmic tail
/// (~ 1/ln(1/tau)) that panel quadrature cannot chase.
pub fn k1_cumulative(tau: f64, cfg: &EvalConfig) -> Result<f64> {
    let a = nu(tau, 0.0, cfg)?;
    let b = nu(tau, 1.0, cfg)?;
    Ok(a.value - b.value)
}

/// M1(t) = -e^t Ei(-t) = e^t E1(t) > 0.
pub fn m1_time(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("M1 requires t > 0".into()));
    }
    if t >= 1.0 {
        Ok(e1_scaled_cf(t))
    } else {
        Ok(t.exp() * exp_integral_e1(t)?)
    }
}

/// int_0^tau M1 = C + ln(tau) + M1(tau); series form below 1e-4 where the
/// logarithms cancel.
pub fn m1_cumulative(tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain("m1_cumulative requires tau > 0".into()));
    }
    if tau < 1e-4 {
        let l = tau.ln();
        let a = 1.0 - EULER_GAMMA - l;
        Ok(tau * a + tau * tau * (0.5 * a + 0.25 - 0.5) + tau.powi(3) / 3.0 * (a - 1.0 + 5.0 / 6.0) / 2.0)
    } else {
        Ok(EULER_GAMMA + tau.ln() + m1_time(tau)?)
    }
}

// ---------------------------------------------------------------------------
// The Prabhakar dressing series (the non-delta part of e^{+-gamma}_{alpha,0})
// ---------------------------------------------------------------------------

/// Series part of L^-1[(1 + lambda s^-alpha)^g] = delta(t) + dress(t):
/// dress(t) = sum_{n>=1} (-g)_n (-lambda)^n t^{alpha n - 1}/(n! Gamma(alpha n)),
/// i.e. the beta = 0 Prabhakar kernel e^{-g}_{alpha,0}(lambda; t) whose r=0
/// term vanishes by the reciprocal-Gamma convention.
fn dressing(alpha: f64, g: f64, lambda: f64, t: f64, cfg: &EvalConfig) -> Result<f64> {
    let params = PrabhakarParams::new_signed(alpha, 0.0, -g, lambda)?;
    Ok(prabhakar_e(&params, t, cfg)?.value)
}

// ---------------------------------------------------------------------------
// k2
// ---------------------------------------------------------------------------

/// k2(alpha, gamma; lambda; t) by the selected route.
pub fn k2_time(
    alpha: f64,
    gamma_p: f64,
    lambda: f64,
    t: f64,
    route: K2Route,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    if !(t > 0.0) {
        return Err(Error::Domain("k2 requires t > 0".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0 && gamma_p > 0.0 && gamma_p < 1.0 && lambda >= 0.0) {
        return Err(Error::Domain(
            "k2 requires alpha, gamma in (0,1), lambda >= 0".into(),
        ));
    }
    match route {
        K2Route::NuSeries => {
            // sum_n ((-lambda)^n (-gamma)_n / n!) [nu(t, an-1) - nu(t, an)]
            let mut coef = 1.0f64;
            let mut sum = 0.0;
            let mut err = 0.0;
            let mut n = 0usize;
            loop {
                let d1 = nu(t, alpha * n as f64 - 1.0, cfg)?;
                let d0 = nu(t, alpha * n as f64, cfg)?;
                let term = coef * (d1.value - d0.value);
                sum += term;
                err += coef.abs() * (d1.abs_err + d0.abs_err);
                if term.abs() < cfg.series.abs_tol.max(1e-13) && n > 1 {
                    err += term.abs();
                    break;
                }
                n += 1;
                if n >= cfg.series.max_terms.min(300) {
                    return Ok(EvalResult::new(sum, err + term.abs(), n, false));
                }
                coef *= -lambda * (-gamma_p + (n - 1) as f64) / n as f64;
            }
            Ok(EvalResult::new(sum, err, n + 1, true))
        }
        K2Route::EpsilonDiff => {
            let params = PrabhakarParams::new(alpha, 0.0, -gamma_p, lambda)?;
            let e2 = vp_epsilon(&VPArgs::new(params, -2.0, 0.0)?, t, VpRoute::UIntegral, cfg)?;
            let e1 = vp_epsilon(&VPArgs::new(params, -1.0, 0.0)?, t, VpRoute::UIntegral, cfg)?;
            Ok(EvalResult::new(
                e2.value - e1.value,
                e2.abs_err + e1.abs_err,
                0,
                true,
            ))
        }
        K2Route::Convolution => {
            // k2 = k1 + int_0^t k1(tau) dress(t - tau) dtau; the dressing has
            // a (t-tau)^(alpha-1) end and k1 the fat-log end at tau = 0.
            let base = k1_time(t, cfg)?;
            let phi = |xi: f64| dressing(alpha, -gamma_p, lambda, xi, cfg).unwrap_or(f64::NAN);
            let conv = conv_k_fat_end(
                &|tau| k1_any(tau, cfg),
                &|tau| k1_cumulative(tau, cfg).unwrap_or(f64::NAN),
                &phi,
                t,
                true,
                cfg,
            )?;
            Ok(EvalResult::new(
                base.value + conv.0,
                base.abs_err + conv.1,
                0,
                true,
            ))
        }
    }
}

fn k1_any(tau: f64, cfg: &EvalConfig) -> f64 {
    k1_time(tau, cfg).map(|r| r.value).unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// M2
// ---------------------------------------------------------------------------

/// Exact double series of M2. The Prabhakar functions that enter carry the
/// positive series t^{a} sum_m t^m/Gamma(1+a+m) (the lambda = -1
/// convention forced by the derivation through 1/(s-1) = sum s^{-m-1}), and
/// the digamma double sum keeps its r = 0 term as the delta-limit
/// 1/Gamma(0) * 1/(0)_j -> 1/Gamma(j), which reproduces M1 exactly at
/// gamma = 0. Both normalizations are pinned by the convolution oracle.
fn m2_exact_series(
    alpha: f64,
    gamma_p: f64,
    lambda: f64,
    t: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let extended = cfg.precision == Precision::Extended;
    let lnt_inv = -t.ln();
    let tol = cfg.series.abs_tol.max(1e-16);
    let mut outer = Dd::ZERO;
    let mut coef = Dd::ONE; // (gamma)_r (-lambda)^r / r!
    let mut max_abs = 0.0f64;
    let mut r = 0usize;
    let mut converged = false;
    while r < cfg.series.max_terms.min(400) {
        let a = alpha * r as f64;
        // first piece: ln(1/t) t^a E_{1,1+a}(t)
        let mut e_pos = Dd::ZERO;
        let mut tp = Dd::from_f64(t.powf(a));
        let mut m = 0usize;
        loop {
            let term = tp.mul_f64(rgamma(1.0 + a + m as f64));
            e_pos = e_pos + term;
            if term.to_f64().abs() < tol * 1e-3 && m > 2 {
                break;
            }
            m += 1;
            if m > 4000 {
                break;
            }
            tp = tp.mul_f64(t);
        }
        // second piece: sum_{j>=1} psi(j+a) t^{a+j-1} / Gamma(j+a)
        let mut psi_sum = Dd::ZERO;
        let mut tq = Dd::from_f64(t.powf(a));
        let mut j = 1usize;
        loop {
            let x = j as f64 + a;
            let term = tq.mul_f64(rgamma(x) * digamma(x).unwrap_or(0.0));
            psi_sum = psi_sum + term;
            if term.to_f64().abs() < tol * 1e-3 && j > 3 {
                break;
            }
            j += 1;
            if j > 4000 {
                break;
            }
            tq = tq.mul_f64(t);
        }
        // tq started at t^a, so the psi sum already carries t^{a+j-1}
        let bracket = e_pos.mul_f64(lnt_inv) + psi_sum;
        let term = coef * bracket;
        outer = outer + term;
        max_abs = max_abs.max(term.to_f64().abs());
        if term.to_f64().abs() < tol && r > 1 {
            converged = true;
            break;
        }
        r += 1;
        coef = coef.mul_f64(-lambda * (gamma_p + (r - 1) as f64) / r as f64);
    }
    let value = outer.to_f64();
    let noise = max_abs * if extended { 1e-26 } else { 1e-15 };
    let err = noise + if converged { tol } else { max_abs * 1e-3 };
    if !converged {
        return Err(Error::NonConvergence(
            "M2 exact series outside its practical radius".into(),
        ));
    }
    Ok(EvalResult::new(value, err, r + 1, true))
}

/// M2(alpha, gamma; lambda; t) by the selected route. The exact series
/// falls back to the convolution automatically when it cannot converge.
pub fn m2_time(
    alpha: f64,
    gamma_p: f64,
    lambda: f64,
    t: f64,
    route: M2Route,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    if !(t > 0.0) {
        return Err(Error::Domain("M2 requires t > 0".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0 && gamma_p > 0.0 && gamma_p < 1.0 && lambda >= 0.0) {
        return Err(Error::Domain(
            "M2 requires alpha, gamma in (0,1), lambda >= 0".into(),
        ));
    }
    match route {
        M2Route::ExactSeries => match m2_exact_series(alpha, gamma_p, lambda, t, cfg) {
            Ok(r) => Ok(r),
            Err(Error::NonConvergence(_)) => {
                m2_time(alpha, gamma_p, lambda, t, M2Route::Convolution, cfg)
            }
            Err(e) => Err(e),
        },
        M2Route::Convolution => {
            // M2 = M1 + int_0^t M1(t-xi) dress(xi) dxi; xi^(alpha-1) at the
            // left end, ln(1/(t-xi)) at the right end.
            let base = m1_time(t)?;
            let f = |xi: f64| {
                if xi <= 0.0 || xi >= t {
                    return 0.0;
                }
                m1_time(t - xi).unwrap_or(f64::NAN)
                    * dressing(alpha, gamma_p, lambda, xi, cfg).unwrap_or(f64::NAN)
            };
            let (v, e) = adaptive_singular(&f, 0.0, t, cfg.quad_tol.max(1e-12), true, true)?;
            Ok(EvalResult::new(base + v, e, 0, true))
        }
    }
}

// ---------------------------------------------------------------------------
// Convolution with a fat-log left end (the 1/(tau ln^2 tau) profile of k1/k2)
// ---------------------------------------------------------------------------

/// Computes int_0^t k(tau) phi(t - tau) dtau for kernels behaving like
/// 1/(tau ln^2(1/tau)) near tau = 0.
///
/// The mass below any panel cutoff decays only like 1/ln(1/cutoff), so the
/// left end is integrated in v = 1/ln(1/tau) down to tau = e^-600 and the
/// remainder is added analytically as phi(t) * int_0^taumin k (a stable
/// Volterra evaluation). `phi_singular_end` marks an integrable
/// singularity of phi at its own zero argument (tau -> t).
fn conv_k_fat_end(
    k: &dyn Fn(f64) -> f64,
    k_cum: &dyn Fn(f64) -> f64,
    phi: &dyn Fn(f64) -> f64,
    t: f64,
    phi_singular_end: bool,
    cfg: &EvalConfig,
) -> Result<(f64, f64)> {
    let tol = cfg.quad_tol.max(1e-12);
    let tau_split = (0.5 * t).min(0.05);
    let tau_min = (-600.0f64).exp();
    let mut val = 0.0;
    let mut err = 0.0;
    // analytic fat tail
    let tail = phi(t) * k_cum(tau_min);
    if !tail.is_finite() {
        return Err(Error::QuadratureFailure("fat-tail evaluation failed".into()));
    }
    val += tail;
    // v-substitution region: tau = e^{-1/v}
    let v_min = 1.0 / 600.0;
    let v_split = 1.0 / (1.0 / tau_split).ln();
    if v_split > v_min {
        let h = |v: f64| {
            let tau = (-1.0 / v).exp();
            k(tau) * tau / (v * v) * phi(t - tau)
        };
        let (v1, e1) = adaptive_gk(&h, v_min, v_split, tol, 30)?;
        val += v1;
        err += e1;
    }
    // regular region tau in (tau_split, t)
    if t > tau_split {
        let f = |tau: f64| {
            if tau >= t {
                return 0.0;
            }
            k(tau) * phi(t - tau)
        };
        let (v2, e2) = adaptive_singular(&f, tau_split, t, tol, false, phi_singular_end)?;
        val += v2;
        err += e2;
    }
    Ok((val, err))
}

// ---------------------------------------------------------------------------
// Generic kernel/partner evaluation and Sonnine residual
// ---------------------------------------------------------------------------

/// Time-domain memory kernel k(t) (or K for the single-order kinds).
pub fn kernel_time(kernel: &MemoryKernel, t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    match kernel.kind {
        KernelKind::SingleCaputo { mu } => {
            if !(t > 0.0) {
                return Err(Error::Domain("kernel requires t > 0".into()));
            }
            Ok(EvalResult::exact(t.powf(-mu) * rgamma(1.0 - mu)))
        }
        KernelKind::SinglePrabhakar {
            alpha,
            mu,
            gamma,
            lambda,
        } => {
            let p = PrabhakarParams::new(alpha, 1.0 - mu, -gamma, lambda)?;
            prabhakar_e(&p, t, cfg)
        }
        KernelKind::DistributedOrder => k1_time(t, cfg),
        KernelKind::DistributedPrabhakar {
            alpha,
            gamma,
            lambda,
        } => k2_time(alpha, gamma, lambda, t, K2Route::NuSeries, cfg),
    }
}

/// Sonnine partner M(t) of the kernel.
pub fn partner_time(kernel: &MemoryKernel, t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    match kernel.kind {
        KernelKind::SingleCaputo { mu } => {
            if !(t > 0.0) {
                return Err(Error::Domain("partner requires t > 0".into()));
            }
            Ok(EvalResult::exact(t.powf(mu - 1.0) * rgamma(mu)))
        }
        KernelKind::SinglePrabhakar {
            alpha,
            mu,
            gamma,
            lambda,
        } => {
            let p = PrabhakarParams::new(alpha, mu, gamma, lambda)?;
            prabhakar_e(&p, t, cfg)
        }
        KernelKind::DistributedOrder => Ok(EvalResult::exact(m1_time(t)?)),
        KernelKind::DistributedPrabhakar {
            alpha,
            gamma,
            lambda,
        } => m2_time(alpha, gamma, lambda, t, M2Route::ExactSeries, cfg),
    }
}

/// |(k * M)(t) - 1| by direct time-domain quadrature; zero in exact
/// arithmetic by the Sonnine equation.
pub fn sonnine_residual(kernel: &MemoryKernel, t: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("sonnine_residual requires t > 0".into()));
    }
    let conv = match kernel.kind {
        KernelKind::SingleCaputo { .. } | KernelKind::SinglePrabhakar { .. } => {
            // both endpoint singularities are plain powers
            let f = |tau: f64| {
                if tau <= 0.0 || tau >= t {
                    return 0.0;
                }
                let kv = kernel_time(kernel, tau, cfg).map(|r| r.value).unwrap_or(f64::NAN);
                let mv = partner_time(kernel, t - tau, cfg)
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN);
                kv * mv
            };
            adaptive_singular(&f, 0.0, t, cfg.quad_tol.max(1e-12), true, true)?.0
        }
        KernelKind::DistributedOrder => {
            let m = |xi: f64| m1_time(xi).unwrap_or(f64::NAN);
            conv_k_fat_end(
                &|tau| k1_any(tau, cfg),
                &|tau| k1_cumulative(tau, cfg).unwrap_or(f64::NAN),
                &m,
                t,
                true,
                cfg,
            )?
            .0
        }
        KernelKind::DistributedPrabhakar {
            alpha,
            gamma,
            lambda,
        } => {
            let m = |xi: f64| {
                m2_time(alpha, gamma, lambda, xi, M2Route::ExactSeries, cfg)
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN)
            };
            let kf = |tau: f64| {
                k2_time(alpha, gamma, lambda, tau, K2Route::NuSeries, cfg)
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN)
            };
            // k2's cumulative equals k1's at tau = e^-600 to superexponential
            // accuracy (the dressing contributes O(tau^alpha))
            conv_k_fat_end(
                &kf,
                &|tau| k1_cumulative(tau, cfg).unwrap_or(f64::NAN),
                &m,
                t,
                true,
                cfg,
            )?
            .0
        }
    };
    Ok((conv - 1.0).abs())
}

// ---------------------------------------------------------------------------
// Tauberian asymptotics
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    ShortTime,
    LongTime,
}

/// Which observable the asymptote describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymptoteOf {
    Kernel,
    Partner,
    Msd,
}

/// Leading-order evaluator (power law times slowly varying factor).
pub struct AsymptoticForm {
    pub regime: Regime,
    pub description: String,
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl AsymptoticForm {
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

/// The paper-backed leading asymptotics of k1, k2, M1, M2, msd1, msd2.
/// Regimes where the Tauberian theorem does not apply (rho <= 0) return
/// `Inapplicable`.
pub fn tauberian_asymptote(
    kernel: &MemoryKernel,
    of: AsymptoteOf,
    regime: Regime,
) -> Result<AsymptoticForm> {
    let b = kernel.b;
    let mk = |description: &str, f: Box<dyn Fn(f64) -> f64 + Send + Sync>| AsymptoticForm {
        regime,
        description: description.to_string(),
        eval: f,
    };
    match (kernel.kind, of, regime) {
        (KernelKind::DistributedOrder, AsymptoteOf::Kernel, Regime::LongTime) => {
            Ok(mk("1/ln t", Box::new(|t: f64| 1.0 / t.ln())))
        }
        (KernelKind::DistributedOrder, AsymptoteOf::Kernel, Regime::ShortTime) => {
            Err(Error::Inapplicable(
                "k1-hat(s to inf) ~ 1/ln s has no power factor".into(),
            ))
        }
        (KernelKind::DistributedOrder, AsymptoteOf::Partner, Regime::ShortTime) => {
            Ok(mk("ln(1/t)", Box::new(|t: f64| (1.0 / t).ln())))
        }
        (KernelKind::DistributedOrder, AsymptoteOf::Partner, Regime::LongTime) => Err(
            Error::Inapplicable("M1-hat(s to 0) ~ ln(1/s) has rho = 0".into()),
        ),
        (KernelKind::DistributedOrder, AsymptoteOf::Msd, Regime::ShortTime) => Ok(mk(
            "2 B t ln(1/t)",
            Box::new(move |t: f64| 2.0 * b * t * (1.0 / t).ln()),
        )),
        (KernelKind::DistributedOrder, AsymptoteOf::Msd, Regime::LongTime) => {
            Ok(mk("2 B ln t", Box::new(move |t: f64| 2.0 * b * t.ln())))
        }
        (
            KernelKind::DistributedPrabhakar {
                alpha,
                gamma,
                lambda,
            },
            of,
            regime,
        ) => match (of, regime) {
            (AsymptoteOf::Kernel, Regime::LongTime) => Ok(mk(
                "lambda^g t^(a g) / (Gamma(1 + a g) ln t)",
                Box::new(move |t: f64| {
                    lambda.powf(gamma) * t.powf(alpha * gamma) * rgamma(1.0 + alpha * gamma)
                        / t.ln()
                }),
            )),
            (AsymptoteOf::Kernel, Regime::ShortTime) => Err(Error::Inapplicable(
                "k2-hat(s to inf) ~ 1/ln s has no power factor".into(),
            )),
            (AsymptoteOf::Partner, Regime::ShortTime) => {
                Ok(mk("ln(1/t)", Box::new(|t: f64| (1.0 / t).ln())))
            }
            (AsymptoteOf::Partner, Regime::LongTime) => Err(Error::Inapplicable(
                "M2-hat(s to 0) ~ s^(a g) ln(1/s) has rho = -a g < 0".into(),
            )),
            (AsymptoteOf::Msd, Regime::ShortTime) => Ok(mk(
                "2 B t ln(1/t)",
                Box::new(move |t: f64| 2.0 * b * t * (1.0 / t).ln()),
            )),
            (AsymptoteOf::Msd, Regime::LongTime) => Ok(mk(
                "2 B lambda^-g t^(-a g) ln t / Gamma(1 - a g)",
                Box::new(move |t: f64| {
                    2.0 * b * lambda.powf(-gamma) * t.powf(-alpha * gamma) * t.ln()
                        * rgamma(1.0 - alpha * gamma)
                }),
            )),
        },
        (KernelKind::SingleCaputo { mu }, of, _) => match of {
            // exact power laws, no slowly varying factor
            AsymptoteOf::Kernel => Ok(mk(
                "t^-mu / Gamma(1-mu)",
                Box::new(move |t: f64| t.powf(-mu) * rgamma(1.0 - mu)),
            )),
            AsymptoteOf::Partner => Ok(mk(
                "t^(mu-1) / Gamma(mu)",
                Box::new(move |t: f64| t.powf(mu - 1.0) * rgamma(mu)),
            )),
            AsymptoteOf::Msd => Ok(mk(
                "2 B t^mu / Gamma(1+mu)",
                Box::new(move |t: f64| 2.0 * b * t.powf(mu) * rgamma(1.0 + mu)),
            )),
        },
        (KernelKind::SinglePrabhakar { .. }, _, _) => Err(Error::Inapplicable(
            "single Prabhakar asymptotes are not tabulated here".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lapinv::{ilt, make_kernel_laplace, make_partner_laplace, IltConfig};

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn k2_kernel() -> MemoryKernel {
        MemoryKernel::distributed_prabhakar(0.5, 0.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn k1_value_and_ilt_oracle() {
        let c = cfg();
        // k1(1) = integral_0^1 dx/Gamma(x), via Fransen-Robinson minus nu(1)
        let v = k1_time(1.0, &c).unwrap();
        assert!((v.value - 0.541_235_735_029_529).abs() < 1e-7, "k1(1)={}", v.value);
        let kernel = MemoryKernel::distributed_order(1.0).unwrap();
        let f = make_kernel_laplace(&kernel);
        let r = ilt(&f, 1.0, &IltConfig::default()).unwrap();
        assert!((r.value - v.value).abs() < 1e-5 * v.value);
        // positivity
        for t in [0.1, 1.0, 10.0] {
            assert!(k1_time(t, &c).unwrap().value > 0.0);
        }
    }

    #[test]
    fn k1_spectral_matches_direct_and_tauberian() {
        let c = cfg();
        for t in [0.5, 2.0, 20.0] {
            let a = k1_time_spectral(t, &c).unwrap().value;
            let b = {
                let x = nu(t, -1.0, &c).unwrap().value - nu(t, 0.0, &c).unwrap().value;
                x
            };
            assert!((a - b).abs() < 1e-7 * b.abs().max(1e-3), "t={t}: {a} vs {b}");
        }
        // k1(t) ln t -> 1 within 10% at t = 1e6
        let t = 1e6;
        let v = k1_time(t, &c).unwrap().value;
        assert!((v * t.ln() - 1.0).abs() < 0.1, "ratio={}", v * t.ln());
    }

    #[test]
    fn m1_values() {
        // M1(1) = e E1(1)
        let v = m1_time(1.0).unwrap();
        assert!((v - 0.596_347_362_323_194_1).abs() < 1e-12, "M1(1)={v}");
        // ILT of ln s/(s-1)
        let kernel = MemoryKernel::distributed_order(1.0).unwrap();
        let f = make_partner_laplace(&kernel);
        let r = ilt(&f, 2.0, &IltConfig::default()).unwrap();
        assert!((r.value - m1_time(2.0).unwrap()).abs() < 1e-6);
        // short-time: M1(t)/ln(1/t) -> 1 within 5% at t = 1e-6
        let t = 1e-6;
        let ratio = m1_time(t).unwrap() / (1.0 / t).ln();
        assert!((ratio - 1.0).abs() < 0.05, "ratio={ratio}");
    }

    #[test]
    fn m1_cumulative_consistency() {
        let c = cfg();
        // d/dtau check via quadrature on [0, 1]
        let (q, _) = adaptive_singular(
            &|u: f64| m1_time(u).unwrap_or(f64::NAN),
            0.0,
            1.0,
            1e-12,
            true,
            false,
        )
        .unwrap();
        assert!((q - m1_cumulative(1.0).unwrap()).abs() < 1e-9);
        let _ = c;
    }

    #[test]
    fn k2_routes_agree() {
        let c = cfg();
        let (a, g, l, t) = (0.5, 0.5, 1.0, 1.0);
        let v1 = k2_time(a, g, l, t, K2Route::NuSeries, &c).unwrap();
        let v2 = k2_time(a, g, l, t, K2Route::EpsilonDiff, &c).unwrap();
        let v3 = k2_time(a, g, l, t, K2Route::Convolution, &c).unwrap();
        assert!((v1.value - v2.value).abs() < 1e-4, "{} {}", v1.value, v2.value);
        assert!((v1.value - v3.value).abs() < 1e-4, "{} {}", v1.value, v3.value);
        // and the ILT oracle
        let f = make_kernel_laplace(&k2_kernel());
        let r = ilt(&f, t, &IltConfig::default()).unwrap();
        assert!((r.value - v1.value).abs() < 1e-5 * v1.value.abs().max(1.0));
    }

    #[test]
    fn k2_lambda_zero_is_k1() {
        let c = cfg();
        for t in [0.3, 1.0, 4.0] {
            let v = k2_time(0.5, 0.5, 0.0, t, K2Route::NuSeries, &c).unwrap();
            let w = k1_time(t, &c).unwrap();
            assert!((v.value - w.value).abs() < 1e-10 * w.value.abs().max(1.0));
        }
    }

    #[test]
    fn k2_longtime_tauberian() {
        let c = cfg();
        let t = 1e6;
        let (a, g, l) = (0.5, 0.5, 1.0);
        let v = k2_time(a, g, l, t, K2Route::Convolution, &c).unwrap();
        let asym = tauberian_asymptote(&k2_kernel(), AsymptoteOf::Kernel, Regime::LongTime)
            .unwrap()
            .eval(t);
        assert!(
            (v.value / asym - 1.0).abs() < 0.15,
            "k2={} asym={asym}",
            v.value
        );
    }

    #[test]
    fn m2_routes_agree_and_reduce() {
        let c = cfg();
        let (a, g, l, t) = (0.5, 0.5, 1.0, 1.0);
        let v1 = m2_time(a, g, l, t, M2Route::ExactSeries, &c).unwrap();
        let v2 = m2_time(a, g, l, t, M2Route::Convolution, &c).unwrap();
        assert!(
            (v1.value - v2.value).abs() < 1e-5,
            "{} vs {}",
            v1.value,
            v2.value
        );
        // gamma -> 0 collapses to M1 exactly
        let v0 = m2_time(a, 1e-300, 0.0, t, M2Route::ExactSeries, &c).unwrap();
        assert!((v0.value - m1_time(t).unwrap()).abs() < 1e-12);
        // lambda = 0 same
        let vl = m2_time(a, g, 0.0, t, M2Route::ExactSeries, &c).unwrap();
        assert!((vl.value - m1_time(t).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn m2_short_time_tauberian() {
        let c = cfg();
        let t = 1e-6;
        let v = m2_time(0.5, 0.5, 1.0, t, M2Route::ExactSeries, &c).unwrap();
        let ratio = v.value / (1.0 / t).ln();
        assert!((ratio - 1.0).abs() < 0.05, "ratio={ratio}");
    }

    #[test]
    fn m2_ilt_oracle() {
        let c = cfg();
        let f = make_partner_laplace(&k2_kernel());
        for t in [0.5, 1.0, 2.0] {
            let r = ilt(&f, t, &IltConfig::default()).unwrap();
            let v = m2_time(0.5, 0.5, 1.0, t, M2Route::ExactSeries, &c).unwrap();
            assert!(
                (r.value - v.value).abs() < 1e-5 * v.value.abs().max(0.1),
                "t={t}: ilt={} series={}",
                r.value,
                v.value
            );
        }
    }

    #[test]
    fn sonnine_residual_pairs() {
        let c = cfg();
        let pair1 = MemoryKernel::distributed_order(1.0).unwrap();
        let r = sonnine_residual(&pair1, 1.0, &c).unwrap();
        assert!(r < 1e-6, "k1 residual {r}");
        let r = sonnine_residual(&k2_kernel(), 0.5, &c).unwrap();
        assert!(r < 1e-5, "k2 residual {r}");
        // empty convolution at t -> 0+
        let r = sonnine_residual(&pair1, 1e-8, &c).unwrap();
        assert!((r - 1.0).abs() < 0.2, "tiny-t residual {r}");
    }

    #[test]
    fn sonnine_residual_single_kinds() {
        let c = cfg();
        let caputo = MemoryKernel::new(KernelKind::SingleCaputo { mu: 0.6 }, 1.0).unwrap();
        let r = sonnine_residual(&caputo, 0.8, &c).unwrap();
        assert!(r < 1e-8, "caputo residual {r}");
        let sp = MemoryKernel::new(
            KernelKind::SinglePrabhakar {
                alpha: 0.5,
                mu: 0.6,
                gamma: 0.4,
                lambda: 1.0,
            },
            1.0,
        )
        .unwrap();
        let r = sonnine_residual(&sp, 0.8, &c).unwrap();
        assert!(r < 1e-6, "single prabhakar residual {r}");
    }

    #[test]
    fn tauberian_table() {
        let k1 = MemoryKernel::distributed_order(2.0).unwrap();
        let a = tauberian_asymptote(&k1, AsymptoteOf::Kernel, Regime::LongTime).unwrap();
        assert!((a.eval(100.0) - 1.0 / 100.0f64.ln()).abs() < 1e-15);
        assert!(matches!(
            tauberian_asymptote(&k1, AsymptoteOf::Kernel, Regime::ShortTime),
            Err(Error::Inapplicable(_))
        ));
        assert!(matches!(
            tauberian_asymptote(&k1, AsymptoteOf::Partner, Regime::LongTime),
            Err(Error::Inapplicable(_))
        ));
        let m2s = tauberian_asymptote(&k2_kernel(), AsymptoteOf::Partner, Regime::ShortTime)
            .unwrap();
        assert!((m2s.eval(1e-4) - 1e4f64.ln()).abs() < 1e-12);
        // msd2 short time: 2 B t ln(1/t)
        let ms = tauberian_asymptote(&k2_kernel(), AsymptoteOf::Msd, Regime::ShortTime).unwrap();
        let t = 1e-4;
        assert!((ms.eval(t) - 2.0 * t * (1.0 / t).ln()).abs() < 1e-15);
    }
}
