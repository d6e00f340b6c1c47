//! Independent discretized solver for the integral (Sonnine-partner) form
//! of the generalized Fokker-Planck equation,
//! p(x,t) = p0(x) + int_0^t M(t-xi) B d2p/dx2(x,xi) dxi,
//! used to validate PDFs and moments without sharing any code path with
//! the analytic routes. Explicit product-integration in time (exact panel
//! weights of M, which absorb the integrable log singularity at 0),
//! second-order centered Laplacian, Dirichlet far field.

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::kernels::{m1_cumulative, partner_time, KernelKind, MemoryKernel};
use crate::quad::{adaptive_gk, adaptive_singular};
use crate::specfun::{prabhakar_e, rgamma, PrabhakarParams};

/// Space-time grid of the solver.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub x_half_width: f64,
    pub nx: usize,
    pub t_final: f64,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(x_half_width: f64, nx: usize, t_final: f64, nt: usize) -> Result<Self> {
        if nx % 2 == 0 || nx < 3 {
            return Err(Error::Domain("nx must be odd and >= 3".into()));
        }
        if !(x_half_width > 0.0 && t_final > 0.0) || nt == 0 {
            return Err(Error::Domain("grid extents must be positive".into()));
        }
        Ok(GridSpec {
            x_half_width,
            nx,
            t_final,
            nt,
        })
    }

    /// Picks the half width from the stability heuristic
    /// dt <= dx^2 / (4 B M(dt) t_final) (explicit scheme) and the far-field
    /// requirement x_half >= 10 sqrt(<x^2>(t_final)), whichever is larger.
    pub fn auto(kernel: &MemoryKernel, t_final: f64, nx: usize, nt: usize, cfg: &EvalConfig) -> Result<Self> {
        let dt = t_final / nt as f64;
        let m_dt = partner_time(kernel, dt, cfg)?.value;
        let dx_stab = (4.0 * kernel.b * m_dt * dt * t_final).sqrt();
        let msd_tf = crate::moments::msd(kernel, t_final, cfg)?.value;
        let x_half = (10.0 * msd_tf.sqrt()).max(dx_stab * (nx - 1) as f64 / 2.0);
        GridSpec::new(x_half, nx, t_final, nt)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.x_half_width / (self.nx - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.nt as f64
    }
}

/// Full space-time field with the per-step mass report.
pub struct FpSolution {
    pub xs: Vec<f64>,
    pub dt: f64,
    /// field[j][i] = p(x_i, j dt); row 0 is the initial condition.
    pub field: Vec<Vec<f64>>,
    pub mass: Vec<f64>,
}

impl FpSolution {
    pub fn msd_at_step(&self, j: usize) -> f64 {
        let dx = self.xs[1] - self.xs[0];
        self.field[j]
            .iter()
            .zip(&self.xs)
            .map(|(p, x)| x * x * p * dx)
            .sum()
    }

    pub fn final_msd(&self) -> f64 {
        self.msd_at_step(self.field.len() - 1)
    }
}

/// Exact panel weights w_j = int_{(j-1)dt}^{j dt} M: closed cumulative for
/// the kernels that have one, product-integration quadrature otherwise
/// (with the first panel handled as a singular endpoint).
fn partner_panel_weights(kernel: &MemoryKernel, dt: f64, nt: usize, cfg: &EvalConfig) -> Result<Vec<f64>> {
    let mut w = Vec::with_capacity(nt + 1);
    w.push(0.0); // unused index 0
    match kernel.kind {
        KernelKind::DistributedOrder => {
            let mut prev = 0.0;
            for j in 1..=nt {
                let cum = m1_cumulative(j as f64 * dt)?;
                w.push(cum - prev);
                prev = cum;
            }
        }
        KernelKind::SingleCaputo { mu } => {
            let c = rgamma(1.0 + mu);
            let mut prev = 0.0;
            for j in 1..=nt {
                let cum = c * (j as f64 * dt).powf(mu);
                w.push(cum - prev);
                prev = cum;
            }
        }
        KernelKind::SinglePrabhakar {
            alpha,
            mu,
            gamma,
            lambda,
        } => {
            let p = PrabhakarParams::new(alpha, mu + 1.0, gamma, lambda)?;
            let mut prev = 0.0;
            for j in 1..=nt {
                let cum = prabhakar_e(&p, j as f64 * dt, cfg)?.value;
                w.push(cum - prev);
                prev = cum;
            }
        }
        KernelKind::DistributedPrabhakar { .. } => {
            let m = |u: f64| {
                partner_time(kernel, u, cfg)
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN)
            };
            let (first, _) = adaptive_singular(&m, 0.0, dt, 1e-11, true, false)?;
            w.push(first);
            for j in 2..=nt {
                let (panel, _) =
                    adaptive_gk(&m, (j - 1) as f64 * dt, j as f64 * dt, 1e-11, 12)?;
                w.push(panel);
            }
        }
    }
    Ok(w)
}

/// Time-marches the integral form with a delta initial condition
/// approximated by a normalized triangle of half-width 1.5 dx.
pub fn solve_fp_integral(
    kernel: &MemoryKernel,
    grid: &GridSpec,
    cfg: &EvalConfig,
) -> Result<FpSolution> {
    let nx = grid.nx;
    let nt = grid.nt;
    let dx = grid.dx();
    let dt = grid.dt();
    let xs: Vec<f64> = (0..nx)
        .map(|i| -grid.x_half_width + i as f64 * dx)
        .collect();
    // triangle of total width 3 dx
    let w_tri = 1.5 * dx;
    let mut p0: Vec<f64> = xs
        .iter()
        .map(|&x| (1.0 - x.abs() / w_tri).max(0.0))
        .collect();
    let norm: f64 = p0.iter().sum::<f64>() * dx;
    p0.iter_mut().for_each(|v| *v /= norm);

    let weights = partner_panel_weights(kernel, dt, nt, cfg)?;
    let b = kernel.b;
    let inv_dx2 = 1.0 / (dx * dx);

    let laplacian = |p: &[f64]| -> Vec<f64> {
        let mut l = vec![0.0; nx];
        for i in 1..nx - 1 {
            l[i] = (p[i - 1] - 2.0 * p[i] + p[i + 1]) * inv_dx2;
        }
        l
    };

    let mut field = Vec::with_capacity(nt + 1);
    let mut laps = Vec::with_capacity(nt + 1);
    let mut mass = Vec::with_capacity(nt + 1);
    mass.push(p0.iter().sum::<f64>() * dx);
    laps.push(laplacian(&p0));
    field.push(p0.clone());

    let mut acc = vec![0.0f64; nx];
    for n in 1..=nt {
        acc.iter_mut().for_each(|v| *v = 0.0);
        for m in 0..n {
            let w = weights[n - m];
            let lap = &laps[m];
            for i in 1..nx - 1 {
                acc[i] += w * lap[i];
            }
        }
        let mut pn = vec![0.0f64; nx];
        for i in 1..nx - 1 {
            pn[i] = p0[i] + b * acc[i];
        }
        let m_step = pn.iter().sum::<f64>() * dx;
        if (m_step - 1.0).abs() > 0.01 {
            return Err(Error::Instability(format!(
                "mass drift {:.3e} at step {n}",
                m_step - 1.0
            )));
        }
        mass.push(m_step);
        laps.push(laplacian(&pn));
        field.push(pn);
    }
    Ok(FpSolution {
        xs,
        dt,
        field,
        mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::msd1;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(10.0, 200, 1.0, 100).is_err()); // even nx
        assert!(GridSpec::new(-1.0, 201, 1.0, 100).is_err());
    }

    #[test]
    fn mass_conserved_and_symmetric_k1() {
        let c = cfg();
        let kernel = MemoryKernel::distributed_order(1.0).unwrap();
        let grid = GridSpec::auto(&kernel, 1.0, 201, 600, &c).unwrap();
        let sol = solve_fp_integral(&kernel, &grid, &c).unwrap();
        for m in &sol.mass {
            assert!((m - 1.0).abs() < 1e-3, "mass {m}");
        }
        // symmetric initial data stays symmetric to round-off
        let last = sol.field.last().unwrap();
        let nx = last.len();
        for i in 0..nx {
            assert!(
                (last[i] - last[nx - 1 - i]).abs() < 1e-13,
                "asymmetry at {i}"
            );
        }
        // nonnegativity within undershoot allowance
        for row in &sol.field {
            for &v in row {
                assert!(v >= -1e-6, "undershoot {v}");
            }
        }
    }

    #[test]
    fn msd_matches_closed_form_k1() {
        let c = cfg();
        let kernel = MemoryKernel::distributed_order(1.0).unwrap();
        let grid = GridSpec::auto(&kernel, 1.0, 201, 600, &c).unwrap();
        let sol = solve_fp_integral(&kernel, &grid, &c).unwrap();
        let have = sol.final_msd();
        let want = msd1(1.0, 1.0).unwrap();
        assert!(
            ((have - want) / want).abs() < 0.03,
            "discrete {have} vs closed {want}"
        );
    }

    #[test]
    fn refinement_improves_msd() {
        let c = cfg();
        let kernel = MemoryKernel::distributed_order(1.0).unwrap();
        let want = msd1(1.0, 1.0).unwrap();
        let coarse = solve_fp_integral(
            &kernel,
            &GridSpec::new(30.0, 101, 1.0, 250).unwrap(),
            &c,
        )
        .unwrap();
        let fine = solve_fp_integral(
            &kernel,
            &GridSpec::new(30.0, 201, 1.0, 500).unwrap(),
            &c,
        )
        .unwrap();
        let e_coarse = (coarse.final_msd() - want).abs();
        let e_fine = (fine.final_msd() - want).abs();
        assert!(
            e_coarse >= 2.0 * e_fine,
            "coarse {e_coarse} vs fine {e_fine}"
        );
    }
}
