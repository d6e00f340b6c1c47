//! Laplace-domain representation of the kernel and transform objects plus
//! the numerical inverse-transform engines (Gaver-Stehfest on the real
//! axis, shifted fixed-Talbot in the complex plane) used throughout the
//! library as cross-route oracles.

use crate::config::EvalResult;
use crate::error::{Error, Result};
use crate::kernels::{KernelKind, MemoryKernel};
use crate::xprec::Dd;
use num_complex::Complex64;
use std::sync::Mutex;

/// Singularity metadata of a transform on the cut plane.
#[derive(Clone, Debug, Default)]
pub struct Singularities {
    pub branch_cut_negative_axis: bool,
    /// s = 1 is a removable point patched by series expansion
    /// ((s-1)/ln s objects).
    pub removable_at_one: bool,
    pub poles: Vec<f64>,
}

/// A Laplace-domain function F(s), evaluable on the cut complex plane,
/// with its rightmost-singularity abscissa.
pub struct LaplaceFn {
    eval: Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub abscissa: f64,
    pub singularities: Singularities,
}

impl LaplaceFn {
    pub fn new<F>(f: F, abscissa: f64) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        LaplaceFn {
            eval: Box::new(f),
            abscissa,
            singularities: Singularities {
                branch_cut_negative_axis: true,
                ..Default::default()
            },
        }
    }

    pub fn with_singularities(mut self, s: Singularities) -> Self {
        self.singularities = s;
        self
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        (self.eval)(s)
    }

    /// Evaluation on the positive real axis (the primary contract).
    pub fn eval_real(&self, s: f64) -> f64 {
        (self.eval)(Complex64::new(s, 0.0)).re
    }
}

/// Inversion method selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IltMethod {
    GaverStehfest,
    ShiftedTalbot,
}

/// Engine configuration. `talbot_shift` defaults to abscissa + 1; the
/// Gaver-Stehfest sampler shifts by the abscissa itself whenever it is
/// positive (samples must stay right of every singularity).
#[derive(Clone, Copy, Debug)]
pub struct IltConfig {
    pub method: IltMethod,
    pub gs_terms: usize,
    pub talbot_nodes: usize,
    pub talbot_shift: Option<f64>,
}

impl Default for IltConfig {
    fn default() -> Self {
        IltConfig {
            method: IltMethod::GaverStehfest,
            gs_terms: 16,
            talbot_nodes: 32,
            talbot_shift: None,
        }
    }
}

impl IltConfig {
    fn validate(&self) -> Result<()> {
        if self.gs_terms < 4 || self.gs_terms % 2 != 0 {
            return Err(Error::Domain("gs_terms must be even and >= 4".into()));
        }
        if self.talbot_nodes < 4 {
            return Err(Error::Domain("talbot_nodes must be >= 4".into()));
        }
        Ok(())
    }
}

/// Stehfest weights V_k, k = 1..n (n even), in double-double: the
/// alternating sum sheds most of its leading digits for n >= 12.
fn stehfest_weights(n: usize) -> Vec<Dd> {
    static CACHE: Mutex<Vec<(usize, Vec<Dd>)>> = Mutex::new(Vec::new());
    let mut cache = CACHE.lock().unwrap();
    if let Some((_, w)) = cache.iter().find(|(m, _)| *m == n) {
        return w.clone();
    }
    let half = n / 2;
    let mut fact = vec![Dd::ONE; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1].mul_f64(k as f64);
    }
    let mut v = Vec::with_capacity(n);
    for k in 1..=n {
        let mut sum = Dd::ZERO;
        let j0 = k.div_ceil(2);
        let j1 = k.min(half);
        for j in j0..=j1 {
            let num = Dd::from_f64(j as f64).powi(half as i32) * fact[2 * j];
            let den = fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k];
            sum = sum + num / den;
        }
        if (k + half) % 2 == 1 {
            sum = -sum;
        }
        v.push(sum);
    }
    cache.push((n, v.clone()));
    v
}

fn gs_once(f: &LaplaceFn, t: f64, n: usize, shift: f64) -> Result<f64> {
    let ln2 = std::f64::consts::LN_2;
    let weights = stehfest_weights(n);
    let mut acc = Dd::ZERO;
    for (k, w) in weights.iter().enumerate() {
        let s = shift + (k as f64 + 1.0) * ln2 / t;
        let fs = f.eval_real(s);
        if !fs.is_finite() {
            return Err(Error::SingularSample(format!("F({s}) is not finite")));
        }
        acc = acc + w.mul_f64(fs);
    }
    let bare = acc.to_f64() * ln2 / t;
    Ok(if shift != 0.0 {
        (shift * t).exp() * bare
    } else {
        bare
    })
}

/// Abate-Valko fixed-Talbot evaluation with `m` nodes after shifting the
/// transform by sigma0 (writes F(s) = G(s - sigma0) and multiplies by
/// e^{sigma0 t}); the deformed contour then wraps the shifted cut.
fn talbot_once(f: &LaplaceFn, t: f64, m: usize, sigma0: f64) -> Result<f64> {
    let r = 2.0 * m as f64 / (5.0 * t);
    let g = |z: Complex64| f.eval_complex(z + sigma0);
    let mut sum = 0.5 * (g(Complex64::new(r, 0.0)) * (r * t).exp()).re;
    for k in 1..m {
        let theta = k as f64 * std::f64::consts::PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let z = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let w = Complex64::new(1.0, sigma);
        let e = (z * t).exp();
        let val = (e * g(z) * w).re;
        if !val.is_finite() {
            return Err(Error::SingularSample(
                "talbot contour sample not finite".into(),
            ));
        }
        sum += val;
    }
    Ok((sigma0 * t).exp() * (r / m as f64) * sum)
}

/// Numerical inverse Laplace transform at t > 0 with an error estimate
/// from inter-order (Gaver-Stehfest) or node-halving (Talbot) agreement.
pub fn ilt(f: &LaplaceFn, t: f64, cfg: &IltConfig) -> Result<EvalResult> {
    if !(t > 0.0) {
        return Err(Error::Domain("ilt requires t > 0".into()));
    }
    cfg.validate()?;
    match cfg.method {
        IltMethod::GaverStehfest => {
            let shift = if f.abscissa > 0.0 { f.abscissa } else { 0.0 };
            let v1 = gs_once(f, t, cfg.gs_terms, shift)?;
            let v0 = gs_once(f, t, cfg.gs_terms - 2, shift)?;
            let err = (v1 - v0).abs();
            Ok(EvalResult::new(
                v1,
                err,
                cfg.gs_terms,
                err <= 1e-6 * v1.abs().max(1.0),
            ))
        }
        IltMethod::ShiftedTalbot => {
            let sigma0 = cfg.talbot_shift.unwrap_or(f.abscissa + 1.0);
            if sigma0 <= f.abscissa {
                return Err(Error::Domain(
                    "talbot_shift must exceed the abscissa".into(),
                ));
            }
            let v1 = talbot_once(f, t, cfg.talbot_nodes, sigma0)?;
            let v0 = talbot_once(f, t, cfg.talbot_nodes / 2, sigma0)?;
            let err = (v1 - v0).abs();
            Ok(EvalResult::new(
                v1,
                err,
                cfg.talbot_nodes,
                err <= 1e-6 * v1.abs().max(1.0),
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// Transforms of the paper's kernel objects
// ---------------------------------------------------------------------------

/// (s - 1)/ln s with the removable point s = 1 patched by the series of
/// ln(1+w)/w inside |s - 1| < 1e-3 (raw evaluation there cancels badly).
pub fn ratio_s_minus_1_ln_s(s: Complex64) -> Complex64 {
    let w = s - 1.0;
    if w.norm() < 1e-3 {
        // q(w) = ln(1+w)/w = sum (-w)^k/(k+1)
        let mut q = Complex64::new(0.0, 0.0);
        let mut wp = Complex64::new(1.0, 0.0);
        for k in 0..8 {
            q += wp / (k as f64 + 1.0);
            wp *= -w;
        }
        1.0 / q
    } else {
        w / s.ln()
    }
}

/// (1 + lambda s^-alpha)^gamma on the principal branch.
fn prabhakar_factor(s: Complex64, alpha: f64, lambda: f64, gamma: f64) -> Complex64 {
    (Complex64::new(1.0, 0.0) + lambda * s.powf(-alpha)).powf(gamma)
}

/// Laplace transform of the memory kernel k (or K) itself.
pub fn make_kernel_laplace(kernel: &MemoryKernel) -> LaplaceFn {
    let kind = kernel.kind;
    match kind {
        KernelKind::SingleCaputo { mu } => LaplaceFn::new(move |s| s.powf(mu - 1.0), 0.0),
        KernelKind::SinglePrabhakar {
            alpha,
            mu,
            gamma,
            lambda,
        } => LaplaceFn::new(
            move |s| s.powf(mu - 1.0) * prabhakar_factor(s, alpha, lambda, gamma),
            0.0,
        ),
        KernelKind::DistributedOrder => LaplaceFn::new(
            move |s| ratio_s_minus_1_ln_s(s) / s,
            0.0,
        )
        .with_singularities(Singularities {
            branch_cut_negative_axis: true,
            removable_at_one: true,
            poles: vec![],
        }),
        KernelKind::DistributedPrabhakar {
            alpha,
            gamma,
            lambda,
        } => LaplaceFn::new(
            move |s| ratio_s_minus_1_ln_s(s) / s * prabhakar_factor(s, alpha, lambda, gamma),
            0.0,
        )
        .with_singularities(Singularities {
            branch_cut_negative_axis: true,
            removable_at_one: true,
            poles: vec![],
        }),
    }
}

/// Laplace transform of the Sonnine partner M = 1/(s k^hat).
pub fn make_partner_laplace(kernel: &MemoryKernel) -> LaplaceFn {
    let kind = kernel.kind;
    match kind {
        KernelKind::SingleCaputo { mu } => LaplaceFn::new(move |s| s.powf(-mu), 0.0),
        KernelKind::SinglePrabhakar {
            alpha,
            mu,
            gamma,
            lambda,
        } => LaplaceFn::new(
            move |s| s.powf(-mu) * prabhakar_factor(s, alpha, lambda, -gamma),
            0.0,
        ),
        KernelKind::DistributedOrder => LaplaceFn::new(
            move |s| 1.0 / ratio_s_minus_1_ln_s(s),
            0.0,
        )
        .with_singularities(Singularities {
            branch_cut_negative_axis: true,
            removable_at_one: true,
            poles: vec![],
        }),
        KernelKind::DistributedPrabhakar {
            alpha,
            gamma,
            lambda,
        } => LaplaceFn::new(
            move |s| prabhakar_factor(s, alpha, lambda, -gamma) / ratio_s_minus_1_ln_s(s),
            0.0,
        )
        .with_singularities(Singularities {
            branch_cut_negative_axis: true,
            removable_at_one: true,
            poles: vec![],
        }),
    }
}

/// Levy exponent Psi^hat(s) = s k^hat(s).
pub fn make_levy_laplace(kernel: &MemoryKernel) -> LaplaceFn {
    let k = make_kernel_laplace(kernel);
    let sing = k.singularities.clone();
    LaplaceFn::new(move |s| s * k.eval_complex(s), 0.0).with_singularities(sing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{KernelKind, MemoryKernel};
    use crate::specfun::gamma;

    fn k1() -> MemoryKernel {
        MemoryKernel::new(KernelKind::DistributedOrder, 1.0).unwrap()
    }

    fn k2() -> MemoryKernel {
        MemoryKernel::new(
            KernelKind::DistributedPrabhakar {
                alpha: 0.5,
                gamma: 0.5,
                lambda: 1.0,
            },
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn stehfest_weight_identities() {
        // exact identities: sum_k V_k = 0 and sum_k V_k / k = 1; summed in
        // double-double they must hold to the V-magnitude times ~1e-30
        for n in [8usize, 12, 16] {
            let w = stehfest_weights(n);
            let mut s = Dd::ZERO;
            let mut h = Dd::ZERO;
            for (k, v) in w.iter().enumerate() {
                s = s + *v;
                h = h + *v / Dd::from_f64(k as f64 + 1.0);
            }
            let scale: f64 = w.iter().map(|d| d.to_f64().abs()).sum();
            assert!(s.to_f64().abs() < 1e-20 * scale.max(1.0), "n={n} sum={:?}", s);
            assert!((h.to_f64() - 1.0).abs() < 1e-20 * scale.max(1.0), "n={n}");
        }
    }

    #[test]
    fn gs_trivia() {
        let f = LaplaceFn::new(|s| 1.0 / s, 0.0);
        let cfg = IltConfig::default();
        // the f64 transform samples are amplified by sum |V_k| ~ 1e10, so
        // ~5e-8 is the honest floor of the real-axis engine
        for t in [0.2, 1.0, 7.3] {
            let r = ilt(&f, t, &cfg).unwrap();
            assert!((r.value - 1.0).abs() < 3e-7, "t={t} v={}", r.value);
        }
        let ramp = LaplaceFn::new(|s| 1.0 / (s * s), 0.0);
        for t in [0.2, 1.0, 7.3] {
            let r = ilt(&ramp, t, &cfg).unwrap();
            assert!((r.value - t).abs() < 3e-7 * t.max(1.0));
        }
    }

    #[test]
    fn gs_talbot_agree_with_truth() {
        // 1/(s+a): a chosen so the inverse stays clear of the
        // exponentially-small regime where any real-axis sampler loses
        // relative accuracy; Talbot is additionally checked at a faster
        // decay where it keeps ~1e-11.
        let a = 0.15;
        let f = LaplaceFn::new(move |s| 1.0 / (s + a), 0.0);
        let nu = 0.6;
        let g = LaplaceFn::new(move |s| s.powf(-nu), 0.0);
        let gs = IltConfig::default();
        let tb = IltConfig {
            method: IltMethod::ShiftedTalbot,
            ..IltConfig::default()
        };
        let mut t = 0.1;
        while t <= 10.0 {
            let truth = (-a * t).exp();
            for c in [&gs, &tb] {
                let r = ilt(&f, t, c).unwrap();
                assert!(
                    (r.value - truth).abs() < 1e-6,
                    "exp t={t} {:?} got {} want {truth}",
                    c.method,
                    r.value
                );
            }
            let truth_p = t.powf(nu - 1.0) / gamma(nu);
            for c in [&gs, &tb] {
                let r = ilt(&g, t, c).unwrap();
                assert!(
                    (r.value - truth_p).abs() < 1e-6 * truth_p.max(1.0),
                    "pow t={t} {:?} got {} want {}",
                    c.method,
                    r.value,
                    truth_p
                );
            }
            t *= 2.3;
        }
        let fast = LaplaceFn::new(move |s| 1.0 / (s + 0.7), 0.0);
        for t in [0.5, 3.0, 10.0] {
            let r = ilt(&fast, t, &tb).unwrap();
            assert!(((r.value - (-0.7 * t).exp()).abs()) < 1e-7, "talbot t={t}");
        }
    }

    #[test]
    fn shifted_methods_handle_abscissa_one() {
        // F(s) = 1/(s-1): inverse e^t; abscissa 1 forces the GS shift
        let f = LaplaceFn::new(|s| 1.0 / (s - 1.0), 1.0);
        let gs = IltConfig::default();
        let tb = IltConfig {
            method: IltMethod::ShiftedTalbot,
            ..IltConfig::default()
        };
        for t in [0.5f64, 1.0, 2.0] {
            let truth = t.exp();
            let r = ilt(&f, t, &gs).unwrap();
            assert!((r.value - truth).abs() < 1e-7 * truth, "gs t={t}");
            let r = ilt(&f, t, &tb).unwrap();
            assert!((r.value - truth).abs() < 1e-6 * truth, "talbot t={t}");
        }
    }

    #[test]
    fn kernel_transform_values_and_patch() {
        let k = make_kernel_laplace(&k1());
        // removable point: k1^hat(1) = 1 exactly
        assert!((k.eval_real(1.0) - 1.0).abs() < 1e-14);
        assert!((k.eval_real(1.0 + 1e-9) - 1.0).abs() < 1e-8);
        let m = make_partner_laplace(&k1());
        assert!((m.eval_real(1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sonnine_identity_in_s() {
        for kernel in [k1(), k2()] {
            let kh = make_kernel_laplace(&kernel);
            let mh = make_partner_laplace(&kernel);
            let mut s = 1e-3;
            while s <= 1e3 {
                let prod = s * kh.eval_real(s) * mh.eval_real(s);
                assert!(
                    (prod - 1.0).abs() < 1e-12,
                    "kind {:?} s={s} prod={prod}",
                    kernel.kind
                );
                s *= 3.7;
            }
            // a few points straddling the patch radius
            for s in [0.999, 0.9999, 1.0, 1.0001, 1.001] {
                let prod = s * kh.eval_real(s) * mh.eval_real(s);
                assert!((prod - 1.0).abs() < 1e-12, "s={s}");
            }
        }
    }

    #[test]
    fn k2_small_s_asymptote() {
        let (alpha, gamma_p, lambda) = (0.5f64, 0.5f64, 1.0f64);
        let kh = make_kernel_laplace(&k2());
        let s = 1e-6f64;
        let asym = lambda.powf(gamma_p) * s.powf(-(1.0 + alpha * gamma_p)) / (1.0 / s).ln();
        let ratio = kh.eval_real(s) / asym;
        assert!((ratio - 1.0).abs() < 0.05, "ratio={ratio}");
    }

    #[test]
    fn kochubei_fading_memory_limits() {
        for kernel in [k1(), k2()] {
            let kh = make_kernel_laplace(&kernel);
            let s = 1e8;
            let v = 1.0 / (s * kh.eval_real(s));
            assert!(v.abs() < 1e-4, "kind {:?} v={v}", kernel.kind);
        }
    }
}
