//! Numerical certification of qualitative function classes: complete
//! monotonicity ((-1)^n f^(n) >= 0), Bernstein behavior (f >= 0 with CM
//! derivative), and log-convexity. Finite real samples can only falsify,
//! so a clean report is evidence, not proof, and says so.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ConsistentWithCm,
    ViolationFound,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub point: f64,
    pub order: usize,
    pub signed_value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmReport {
    pub function_id: String,
    pub grid: Vec<f64>,
    pub max_order_checked: usize,
    pub violations: Vec<Violation>,
    pub verdict: Verdict,
    /// Largest finite-difference noise amplification encountered; order-n
    /// differences divide the evaluation noise by h^n.
    pub noise_floor: f64,
    pub note: String,
}

impl CmReport {
    fn finish(mut self) -> CmReport {
        self.verdict = if self.violations.is_empty() {
            Verdict::ConsistentWithCm
        } else {
            Verdict::ViolationFound
        };
        self.note = "numerical alternation check: a pass is evidence, not proof".into();
        self
    }
}

// central-difference stencils of orders 1..6 (offsets in units of h)
fn stencil(order: usize) -> (&'static [f64], &'static [f64]) {
    match order {
        1 => (&[-1.0, 1.0], &[-0.5, 0.5]),
        2 => (&[-1.0, 0.0, 1.0], &[1.0, -2.0, 1.0]),
        3 => (&[-2.0, -1.0, 1.0, 2.0], &[-0.5, 1.0, -1.0, 0.5]),
        4 => (&[-2.0, -1.0, 0.0, 1.0, 2.0], &[1.0, -4.0, 6.0, -4.0, 1.0]),
        5 => (
            &[-3.0, -2.0, -1.0, 1.0, 2.0, 3.0],
            &[-0.5, 2.0, -2.5, 2.5, -2.0, 0.5],
        ),
        6 => (
            &[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0],
            &[1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0],
        ),
        _ => unreachable!(),
    }
}

fn diff_once<F: Fn(f64) -> Result<f64>>(f: &F, x: f64, order: usize, h: f64) -> Result<f64> {
    let (offs, coefs) = stencil(order);
    let mut acc = 0.0;
    for (o, c) in offs.iter().zip(coefs) {
        acc += c * f(x + o * h)?;
    }
    Ok(acc / h.powi(order as i32))
}

/// Richardson-refined central difference of the given order.
fn derivative<F: Fn(f64) -> Result<f64>>(f: &F, x: f64, order: usize, h: f64) -> Result<f64> {
    let d1 = diff_once(f, x, order, h)?;
    let d2 = diff_once(f, x, order, 0.5 * h)?;
    // central stencils carry O(h^2) error
    Ok((4.0 * d2 - d1) / 3.0)
}

fn chebyshev_open(a: f64, b: f64, m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| {
            let c = (std::f64::consts::PI * (2.0 * j as f64 + 1.0) / (2.0 * m as f64)).cos();
            0.5 * (a + b) + 0.5 * (b - a) * c
        })
        .collect()
}

fn step_for(x: f64, order: usize, a: f64) -> f64 {
    let base = (1e-2 * x).max(1e-3);
    // higher orders need wider stencils to climb over evaluation noise
    let widened = base * (1.0 + 0.8 * (order.saturating_sub(2)) as f64);
    // the full stencil (up to 3h, doubled-once Richardson) must stay
    // inside the domain
    widened.min((x - a).abs() / 3.5).max(1e-6)
}

/// Alternation check of orders 0..max_order on a Chebyshev grid of [a, b],
/// a > 0. `eval_noise` is the caller's estimate of the absolute evaluation
/// error of `f`; the per-order tolerance grows with the h^-n amplification.
pub fn check_cm<F: Fn(f64) -> Result<f64>>(
    id: &str,
    f: F,
    a: f64,
    b: f64,
    max_order: usize,
    tol: f64,
    eval_noise: f64,
) -> Result<CmReport> {
    if !(a > 0.0 && b > a) {
        return Err(Error::Domain("check_cm requires 0 < a < b".into()));
    }
    if max_order > 6 {
        return Err(Error::Domain("max_order is capped at 6".into()));
    }
    let grid = chebyshev_open(a, b, 15);
    let mut report = CmReport {
        function_id: id.to_string(),
        grid: grid.clone(),
        max_order_checked: max_order,
        violations: Vec::new(),
        verdict: Verdict::ConsistentWithCm,
        noise_floor: 0.0,
        note: String::new(),
    };
    for &x in &grid {
        for order in 0..=max_order {
            let (d, noise) = if order == 0 {
                (f(x)?, eval_noise)
            } else {
                let h = step_for(x, order, a);
                let amp: f64 = stencil(order).1.iter().map(|c| c.abs()).sum();
                let noise = 2.0 * eval_noise * amp / (0.5f64 * h).powi(order as i32);
                (derivative(&f, x, order, h)?, noise)
            };
            report.noise_floor = report.noise_floor.max(noise);
            let signed = if order % 2 == 0 { d } else { -d };
            if signed < -(tol + noise) {
                report.violations.push(Violation {
                    point: x,
                    order,
                    signed_value: signed,
                });
            }
        }
    }
    Ok(report.finish())
}

/// Midpoint log-convexity test over nested triples of a Chebyshev grid.
pub fn check_log_convex<F: Fn(f64) -> Result<f64>>(
    id: &str,
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<CmReport> {
    if !(a > 0.0 && b > a) {
        return Err(Error::Domain("check_log_convex requires 0 < a < b".into()));
    }
    let mut grid = Vec::new();
    let mut report = CmReport {
        function_id: id.to_string(),
        grid: Vec::new(),
        max_order_checked: 0,
        violations: Vec::new(),
        verdict: Verdict::ConsistentWithCm,
        noise_floor: tol,
        note: String::new(),
    };
    // nested triples (x, (x+y)/2, y) at several scales
    let mut span = b - a;
    while span > (b - a) * 1e-3 {
        let mut x = a;
        while x + span <= b {
            let y = x + span;
            let m = 0.5 * (x + y);
            grid.push(m);
            let (fx, fy, fm) = (f(x)?, f(y)?, f(m)?);
            if fx <= 0.0 || fy <= 0.0 || fm <= 0.0 {
                return Err(Error::Domain(format!(
                    "log-convexity undefined: {id} non-positive on [{x}, {y}]"
                )));
            }
            if fm.ln() > 0.5 * (fx.ln() + fy.ln()) + tol {
                report.violations.push(Violation {
                    point: m,
                    order: 0,
                    signed_value: 0.5 * (fx.ln() + fy.ln()) - fm.ln(),
                });
            }
            x += 0.5 * span;
        }
        span *= 0.5;
    }
    report.grid = grid;
    Ok(report.finish())
}

/// Bernstein test: positivity plus complete monotonicity of the first
/// derivative, i.e. (-1)^(n-1) f^(n) >= 0 for n = 1..max_order.
pub fn check_bernstein<F: Fn(f64) -> Result<f64>>(
    id: &str,
    f: F,
    a: f64,
    b: f64,
    max_order: usize,
    tol: f64,
    eval_noise: f64,
) -> Result<CmReport> {
    if !(a > 0.0 && b > a) {
        return Err(Error::Domain("check_bernstein requires 0 < a < b".into()));
    }
    let grid = chebyshev_open(a, b, 15);
    let mut report = CmReport {
        function_id: id.to_string(),
        grid: grid.clone(),
        max_order_checked: max_order,
        violations: Vec::new(),
        verdict: Verdict::ConsistentWithCm,
        noise_floor: 0.0,
        note: String::new(),
    };
    for &x in &grid {
        let v = f(x)?;
        if v < -(tol + eval_noise) {
            report.violations.push(Violation {
                point: x,
                order: 0,
                signed_value: v,
            });
        }
        for order in 1..=max_order.min(6) {
            let h = step_for(x, order, a);
            let amp: f64 = stencil(order).1.iter().map(|c| c.abs()).sum();
            let noise = 2.0 * eval_noise * amp / (0.5f64 * h).powi(order as i32);
            report.noise_floor = report.noise_floor.max(noise);
            let d = derivative(&f, x, order, h)?;
            let signed = if order % 2 == 1 { d } else { -d };
            if signed < -(tol + noise) {
                report.violations.push(Violation {
                    point: x,
                    order,
                    signed_value: signed,
                });
            }
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::EvalConfig;
    use crate::kernels::{k1_time, m1_time};
    use crate::volterra::nu0;

    #[test]
    fn canonical_cmf_passes_all_orders() {
        let r = check_cm("1/s", |s| Ok(1.0 / s), 0.1, 10.0, 6, 1e-9, 1e-14).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithCm, "{:?}", r.violations);
        // self-consistency: lower orders on the same grid also pass
        for n in 0..6 {
            let r = check_cm("1/s", |s| Ok(1.0 / s), 0.1, 10.0, n, 1e-9, 1e-14).unwrap();
            assert_eq!(r.verdict, Verdict::ConsistentWithCm);
        }
    }

    #[test]
    fn increasing_function_flagged() {
        let r = check_cm("exp", |t| Ok(t.exp()), 0.1, 2.0, 1, 1e-9, 1e-14).unwrap();
        assert_eq!(r.verdict, Verdict::ViolationFound);
        assert!(r.violations.iter().any(|v| v.order == 1));
    }

    #[test]
    fn m1_is_cm_order_4() {
        let r = check_cm(
            "M1",
            |t| m1_time(t),
            0.1,
            5.0,
            4,
            1e-7,
            1e-13,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithCm, "{:?}", r.violations);
    }

    #[test]
    fn k1_is_cm_order_4() {
        let cfg = EvalConfig::default();
        let r = check_cm(
            "k1",
            |t| k1_time(t, &cfg).map(|v| v.value),
            0.1,
            5.0,
            4,
            1e-6,
            1e-10,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithCm, "{:?}", r.violations);
    }

    #[test]
    fn exp_minus_nu_is_cm_and_log_convex() {
        let cfg = EvalConfig::default();
        // e^t - nu(t) = int_0^inf e^{-rt}/(r(pi^2+ln^2 r)) dr
        let f = |t: f64| Ok(t.exp() - nu0(t, &cfg)?.value);
        let r = check_cm("exp - nu", f, 0.1, 3.0, 4, 1e-6, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithCm, "{:?}", r.violations);
        let r = check_log_convex("exp - nu", f, 0.1, 3.0, 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithCm);
    }

    #[test]
    fn levy_exponent_is_bernstein() {
        // Psi1(s) = (s-1)/ln s is CBF, hence BF
        use num_complex::Complex64;
        let f = |s: f64| {
            Ok(crate::lapinv::ratio_s_minus_1_ln_s(Complex64::new(s, 0.0)).re)
        };
        let r = check_bernstein("Psi1", f, 0.1, 10.0, 4, 1e-8, 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithCm, "{:?}", r.violations);
    }

    #[test]
    fn report_serializes() {
        let r = check_cm("1/s", |s| Ok(1.0 / s), 0.5, 2.0, 2, 1e-9, 1e-14).unwrap();
        let j = serde_json::to_string(&r).unwrap();
        assert!(j.contains("ConsistentWithCm"));
    }
}
