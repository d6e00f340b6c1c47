//! The Volterra function family mu(t, beta, alpha) and the
//! Volterra-Prabhakar functions, each with at least two independent
//! evaluation routes (order-integral, nu-series, Bromwich spectral form).

use crate::config::{EvalConfig, EvalResult};
use crate::error::{Error, Result};
use crate::quad::{adaptive_gk, integrate_real_line_atan};
use crate::specfun::{gamma, mittag_leffler_3p, rgamma, PrabhakarParams};

/// Arguments of Volterra's mu(t, beta, alpha_shift).
#[derive(Clone, Copy, Debug)]
pub struct VolterraArgs {
    pub t: f64,
    pub beta: f64,
    pub alpha_shift: f64,
}

impl VolterraArgs {
    pub fn new(t: f64, beta: f64, alpha_shift: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::Domain("volterra mu requires t > 0".into()));
        }
        if !(beta > -1.0) {
            return Err(Error::Domain("volterra mu requires beta > -1".into()));
        }
        Ok(VolterraArgs {
            t,
            beta,
            alpha_shift,
        })
    }
}

/// Arguments of the Volterra-Prabhakar function eps^gamma_{alpha,(beta),p}.
/// `beta_weight` is the u-power of the generalized form, 0 for the plain one.
#[derive(Clone, Copy, Debug)]
pub struct VPArgs {
    pub params: PrabhakarParams,
    pub p: f64,
    pub beta_weight: f64,
}

impl VPArgs {
    pub fn new(params: PrabhakarParams, p: f64, beta_weight: f64) -> Result<Self> {
        if !(params.alpha > 0.0 && params.alpha <= 1.0) {
            return Err(Error::Domain(
                "volterra-prabhakar guarantees need alpha in (0, 1]".into(),
            ));
        }
        if !(beta_weight > -1.0) {
            return Err(Error::Domain("beta_weight must exceed -1".into()));
        }
        Ok(VPArgs {
            params,
            p,
            beta_weight,
        })
    }
}

/// Evaluation route of the plain Volterra-Prabhakar function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VpRoute {
    /// Order-integral over u of Prabhakar kernels.
    UIntegral,
    /// Series over n of nu(t, alpha n + p).
    NuSeries,
    /// Residue + branch-cut integral; lambda = 1 only.
    Bromwich,
}

/// Truncation point past the peak of t^(u+a)/Gamma(u+a+1): doubling scan
/// then bisection to where the envelope drops below `thresh`.
fn envelope_cutoff(t: f64, a: f64, thresh: f64) -> f64 {
    let env = |u: f64| t.powf(u + a).abs() * rgamma(u + a + 1.0).abs();
    // past the peak the envelope decreases; peak is near u + a ~ t
    let mut lo = (t - a).max(0.0) + 2.0;
    let mut hi = lo.max(4.0);
    for _ in 0..120 {
        if env(hi) < thresh && env(hi + 1.0) < thresh {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if env(mid) < thresh {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 0.5 {
            break;
        }
    }
    hi
}

/// Core u-integral shared by mu and the generalized Volterra-Prabhakar:
/// int_0^inf u^beta g(u) du, where g decays superexponentially and the
/// u^beta endpoint weight (beta in (-1,0)) is removed exactly by the
/// substitution w = u^(1+beta).
fn u_integral<G: Fn(f64) -> f64 + Copy>(
    g: G,
    beta: f64,
    u_max: f64,
    split_points: &[f64],
    tol: f64,
) -> Result<(f64, f64)> {
    let mut val = 0.0;
    let mut err = 0.0;
    let head = 1.0f64.min(u_max);
    let weighted = |u: f64| if beta == 0.0 { g(u) } else { u.powf(beta) * g(u) };
    // cheap magnitude scan so the adaptive tolerance is relative to the
    // integral scale (these integrands reach e^t magnitudes at large t)
    let mut scale = 0.0f64;
    for i in 1..=8 {
        let u = u_max * i as f64 / 8.0;
        scale = scale.max(weighted(u).abs() * u_max / 8.0);
    }
    let tol = tol * scale.max(1.0);
    if beta == 0.0 {
        let (v, e) = adaptive_gk(&g, 0.0, head, tol / 3.0, 30)?;
        val += v;
        err += e;
    } else {
        // int_0^1 u^beta g(u) du = 1/(1+beta) int_0^1 g(w^(1/(1+beta))) dw
        let q = 1.0 + beta;
        let mapped = |w: f64| g(w.powf(1.0 / q));
        let (v, e) = adaptive_gk(&mapped, 0.0, head.powf(q), tol / 3.0, 30)?;
        val += v / q;
        err += e / q;
    }
    if u_max > head {
        let mut edges: Vec<f64> = vec![head, u_max];
        for &p in split_points {
            if p > head && p < u_max {
                edges.push(p);
            }
        }
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup();
        for win in edges.windows(2) {
            let (v, e) =
                adaptive_gk(&weighted, win[0], win[1], tol / (3 * edges.len()) as f64, 26)?;
            val += v;
            err += e;
        }
    }
    Ok((val, err))
}

/// Volterra's function mu(t, beta, alpha) =
/// (1/Gamma(1+beta)) int_0^inf t^(u+alpha) u^beta / Gamma(u+alpha+1) du.
/// The alpha_shift may be any real (reciprocal Gamma is entire); for
/// shifts <= -1 the panels are split at the Gamma zeros.
pub fn volterra_mu(args: &VolterraArgs, cfg: &EvalConfig) -> Result<EvalResult> {
    let VolterraArgs {
        t,
        beta,
        alpha_shift: a,
    } = *args;
    let lnt = t.ln();
    let g = move |u: f64| ((u + a) * lnt).exp() * rgamma(u + a + 1.0);
    let u_max = envelope_cutoff(t, a, cfg.quad_tol * 1e-2);
    // 1/Gamma zeros at u = -(a+1) - k introduce sign changes; give the
    // panels clean edges there
    let mut splits = Vec::new();
    if a < -1.0 {
        let mut z = -(a + 1.0);
        while z > 0.0 {
            splits.push(z);
            z -= 1.0;
        }
    }
    splits.push((t - a).max(1.5)); // integrand peak region
    let (v, e) = u_integral(g, beta, u_max, &splits, cfg.quad_tol)?;
    let norm = rgamma(1.0 + beta);
    // superexponential tail beyond u_max
    let tail = g(u_max).abs() * 2.0;
    Ok(EvalResult::new(
        v * norm,
        (e + tail) * norm.abs(),
        0,
        true,
    ))
}

/// nu(t, q) = mu(t, 0, q); q may be <= -1.
pub fn nu(t: f64, q: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if !(t > 0.0) {
        return Err(Error::Domain("nu requires t > 0".into()));
    }
    volterra_mu(
        &VolterraArgs {
            t,
            beta: 0.0,
            alpha_shift: q,
        },
        cfg,
    )
}

/// nu(t) = mu(t, 0, 0).
pub fn nu0(t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    nu(t, 0.0, cfg)
}

/// nu(t) through the Ramanujan spectral form
/// e^t - int_0^inf e^{-rt}/(r (pi^2 + ln^2 r)) dr, an independent route.
pub fn nu_spectral(t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if !(t > 0.0) {
        return Err(Error::Domain("nu requires t > 0".into()));
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let g = move |y: f64| {
        let arg = t * y.exp();
        if arg > 700.0 {
            0.0
        } else {
            (-arg).exp() / (pi2 + y * y)
        }
    };
    let (v, e) = integrate_real_line_atan(&g, cfg.quad_tol)?;
    Ok(EvalResult::new(t.exp() - v, e, 0, true))
}

// ---------------------------------------------------------------------------
// Spectral kernel of the Bromwich representation (lambda = 1)
// ---------------------------------------------------------------------------

/// Continuous branch of theta_alpha(r) = arctan[sin(pi alpha) /
/// (cos(pi alpha) + r^-alpha)], taking values in (0, pi).
fn theta_alpha(alpha: f64, r_pow_neg_alpha: f64) -> f64 {
    let pa = std::f64::consts::PI * alpha;
    pa.sin().atan2(pa.cos() + r_pow_neg_alpha)
}

/// Spectral function kernel K^gamma_{alpha,p}(r) of the branch-cut density.
pub fn spectral_kernel(alpha: f64, gamma_p: f64, p: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain("spectral kernel requires r > 0".into()));
    }
    if !(alpha > 0.0 && alpha <= 1.0 && gamma_p > 0.0) {
        return Err(Error::Domain(
            "spectral kernel requires alpha in (0,1] and gamma > 0".into(),
        ));
    }
    Ok(spectral_kernel_log(alpha, gamma_p, p, r.ln()) / r)
}

/// K~ = -K, the positive density in the CM parameter regime.
pub fn spectral_kernel_tilde(alpha: f64, gamma_p: f64, p: f64, r: f64) -> Result<f64> {
    Ok(-spectral_kernel(alpha, gamma_p, p, r)?)
}

/// r * K^gamma_{alpha,p}(r) expressed through y = ln r; stable over the
/// full real line in y.
pub fn spectral_kernel_log(alpha: f64, gamma_p: f64, p: f64, y: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let pa = pi * alpha;
    let r_neg_alpha = (-alpha * y).exp(); // may be +inf; atan2 copes
    let theta = theta_alpha(alpha, r_neg_alpha);
    let phase = pi * (alpha * gamma_p - p) - gamma_p * theta;
    let bracket = y * phase.sin() - pi * phase.cos();
    // D = r^2a + 2 r^a cos(pi a) + 1, in log form
    let ra = (alpha * y).exp();
    let d = if alpha * y > 300.0 {
        // r^2a dominates: D^(g/2) = r^(a g) (1 + ...)^(g/2)
        (alpha * gamma_p * y).exp()
            * (1.0 + 2.0 * pa.cos() * (-alpha * y).exp()).powf(gamma_p / 2.0)
    } else {
        (ra * ra + 2.0 * ra * pa.cos() + 1.0).powf(gamma_p / 2.0)
    };
    let power = ((alpha * gamma_p - p) * y).exp();
    power / pi * bracket / (d * (pi * pi + y * y))
}

/// int_0^inf K~^gamma_{alpha,p}(r) e^{-rt} dr (t = 0 gives the pure
/// normalization integral, which equals 2^-gamma at p = alpha gamma).
pub fn spectral_tilde_integral(
    alpha: f64,
    gamma_p: f64,
    p: f64,
    t: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    if p > alpha * gamma_p {
        return Err(Error::RouteUnavailable(
            "branch-cut integral diverges at r -> 0 for p > alpha*gamma".into(),
        ));
    }
    if t == 0.0 && p <= 0.0 {
        return Err(Error::RouteUnavailable(
            "normalization integral needs p > 0 for large-r decay".into(),
        ));
    }
    let g = move |y: f64| {
        let damp = if t == 0.0 {
            1.0
        } else {
            let a = t * y.exp();
            if a > 700.0 {
                return 0.0;
            }
            (-a).exp()
        };
        -spectral_kernel_log(alpha, gamma_p, p, y) * damp
    };
    let (v, e) = integrate_real_line_atan(&g, cfg.quad_tol)?;
    Ok(EvalResult::new(v, e, 0, true))
}

// ---------------------------------------------------------------------------
// Volterra-Prabhakar functions
// ---------------------------------------------------------------------------

/// eps^gamma_{alpha,p}(lambda; t) by the requested route.
pub fn vp_epsilon(args: &VPArgs, t: f64, route: VpRoute, cfg: &EvalConfig) -> Result<EvalResult> {
    if !(t > 0.0) {
        return Err(Error::Domain("vp_epsilon requires t > 0".into()));
    }
    match route {
        VpRoute::UIntegral => vp_u_integral(args, t, cfg),
        VpRoute::NuSeries => vp_nu_series(args, t, cfg),
        VpRoute::Bromwich => vp_bromwich(args, t, cfg),
    }
}

fn vp_u_integral(args: &VPArgs, t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    let PrabhakarParams {
        alpha,
        gamma: gp,
        lambda,
        ..
    } = args.params;
    let p = args.p;
    let beta_w = args.beta_weight;
    let z = -lambda * t.powf(alpha);
    let lnt = t.ln();
    let g = |u: f64| {
        let params = PrabhakarParams {
            alpha,
            beta: u + p + 1.0,
            gamma: gp,
            lambda,
        };
        match mittag_leffler_3p(&params, z, cfg) {
            Ok(r) => ((u + p) * lnt).exp() * r.value,
            Err(_) => f64::NAN,
        }
    };
    // the E factor is O(e^max(z,0)) uniformly in u; fold it into the cutoff
    let thresh = cfg.quad_tol * 1e-2 * (-z.max(0.0)).exp();
    let u_max = envelope_cutoff(t, p, thresh);
    let splits = [(t - p).max(1.5)];
    let (v, e) = u_integral(g, beta_w, u_max, &splits, cfg.quad_tol)?;
    let tail = ((u_max + p) * lnt).exp() * rgamma(u_max + p + 1.0).abs() * 2.0;
    Ok(EvalResult::new(v, e + tail, 0, true))
}

fn vp_nu_series(args: &VPArgs, t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if args.beta_weight != 0.0 {
        return Err(Error::RouteUnavailable(
            "nu-series route applies to the plain (beta = 0) function".into(),
        ));
    }
    let PrabhakarParams {
        alpha,
        gamma: gp,
        lambda,
        ..
    } = args.params;
    let p = args.p;
    let mut coef = 1.0f64; // (-lambda)^n (gamma)_n / n!
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut small = 0usize;
    let tol = cfg.series.abs_tol.max(1e-13);
    let max_n = cfg.series.max_terms.min(400);
    let mut last_term: f64;
    let mut n = 0usize;
    loop {
        let nu_n = nu(t, alpha * n as f64 + p, cfg)?;
        let term = coef * nu_n.value;
        sum += term;
        err += coef.abs() * nu_n.abs_err;
        last_term = term;
        if term.abs() < tol {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
        n += 1;
        if n >= max_n {
            return Ok(EvalResult::new(sum, err + term.abs(), n, false));
        }
        coef *= -lambda * (gp + (n - 1) as f64) / n as f64;
    }
    // alternating-series style remainder
    Ok(EvalResult::new(sum, err + last_term.abs(), n + 1, true))
}

fn vp_bromwich(args: &VPArgs, t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    let PrabhakarParams {
        alpha,
        gamma: gp,
        lambda,
        ..
    } = args.params;
    if (lambda - 1.0).abs() > 1e-14 {
        return Err(Error::RouteUnavailable(
            "bromwich route is derived for lambda = 1".into(),
        ));
    }
    if args.beta_weight != 0.0 {
        return Err(Error::RouteUnavailable(
            "bromwich route applies to the plain (beta = 0) function".into(),
        ));
    }
    if !(gp > 0.0) {
        return Err(Error::RouteUnavailable(
            "bromwich route needs gamma > 0".into(),
        ));
    }
    let cut = spectral_tilde_integral(alpha, gp, args.p, t, cfg)?;
    let value = t.exp() / 2.0f64.powf(gp) - cut.value;
    Ok(EvalResult::new(value, cut.abs_err, 0, true))
}

/// Generalized Volterra-Prabhakar
/// eps^gamma_{alpha,beta,p}(lambda; t) = int_0^inf u^beta
/// e^gamma_{alpha,u+p+1}(lambda; t) du, beta > -1.
pub fn vp_epsilon_gen(args: &VPArgs, t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if !(t > 0.0) {
        return Err(Error::Domain("vp_epsilon_gen requires t > 0".into()));
    }
    vp_u_integral(args, t, cfg)
}

/// Same object through mu-functions:
/// Gamma(1+beta) sum_n (-lambda)^n (gamma)_n mu(t, beta, alpha n + p)/n!.
/// Used as the independent cross-check of `vp_epsilon_gen`.
pub fn vp_epsilon_gen_mu_series(args: &VPArgs, t: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    let PrabhakarParams {
        alpha,
        gamma: gp,
        lambda,
        ..
    } = args.params;
    let beta = args.beta_weight;
    let p = args.p;
    let mut coef = 1.0f64;
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut small = 0usize;
    let tol = cfg.series.abs_tol.max(1e-13);
    let mut n = 0usize;
    let mut last: f64;
    loop {
        let m = volterra_mu(
            &VolterraArgs {
                t,
                beta,
                alpha_shift: alpha * n as f64 + p,
            },
            cfg,
        )?;
        let term = coef * m.value;
        sum += term;
        err += coef.abs() * m.abs_err;
        last = term;
        if term.abs() < tol {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
        n += 1;
        if n >= cfg.series.max_terms.min(400) {
            return Ok(EvalResult::new(
                gamma(1.0 + beta) * sum,
                gamma(1.0 + beta) * (err + last.abs()),
                n,
                false,
            ));
        }
        coef *= -lambda * (gp + (n - 1) as f64) / n as f64;
    }
    let g = gamma(1.0 + beta);
    Ok(EvalResult::new(g * sum, g.abs() * (err + last.abs()), n + 1, true))
}
