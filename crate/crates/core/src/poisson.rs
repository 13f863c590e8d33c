//! Exact inverse of the scalar discrete mixed derivative ∂_ζ∂_ζ̄ with zero
//! Dirichlet rings, used entrywise as the preconditioner of the linearized
//! solver.
//!
//! The θ direction is diagonalized by an FFT; each angular mode leaves a real
//! tridiagonal system over the radial line (with the across-origin coupling
//! (−1)^k at the innermost disc ring), solved by a prefactored Thomas sweep.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::{Chart, Grid};

/// Prefactored Thomas solve of a real tridiagonal system.
struct Tridiag {
    sub: Vec<f64>,
    cprime: Vec<f64>,
    denom: Vec<f64>,
}

impl Tridiag {
    /// Factor the system with subdiagonal `a` (a[0] unused), diagonal `b`,
    /// superdiagonal `c` (c[last] unused).
    fn factor(a: &[f64], b: &[f64], c: &[f64]) -> Tridiag {
        let n = b.len();
        let mut cprime = vec![0.0; n];
        let mut denom = vec![0.0; n];
        denom[0] = 1.0 / b[0];
        cprime[0] = c[0] * denom[0];
        for j in 1..n {
            denom[j] = 1.0 / (b[j] - a[j] * cprime[j - 1]);
            cprime[j] = c[j] * denom[j];
        }
        Tridiag { sub: a.to_vec(), cprime, denom }
    }

    fn solve(&self, rhs: &mut [Complex64]) {
        let n = rhs.len();
        rhs[0] *= self.denom[0];
        for j in 1..n {
            rhs[j] = (rhs[j] - rhs[j - 1] * self.sub[j]) * self.denom[j];
        }
        for j in (0..n - 1).rev() {
            let t = rhs[j + 1] * self.cprime[j];
            rhs[j] -= t;
        }
    }
}

/// Fast solver for d_mixed(u) = g at interior nodes, u = 0 on boundary rings.
pub struct MixedPoissonSolver {
    grid: Grid,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    modes: Vec<Tridiag>,
    first_interior: usize,
    n_interior_rad: usize,
}

impl MixedPoissonSolver {
    pub fn new(grid: &Grid) -> Self {
        let n_ang = grid.n_ang();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n_ang);
        let ifft = planner.plan_fft_inverse(n_ang);
        let d_th = grid.d_theta();

        let (first_interior, n_interior_rad) = match grid.chart() {
            Chart::LogPolar => (1, grid.n_rad() - 2),
            Chart::PolarHalfOffset => (0, grid.n_rad() - 1),
        };

        let mut modes = Vec::with_capacity(n_ang);
        for k in 0..n_ang {
            let phi = std::f64::consts::TAU * k as f64 / n_ang as f64;
            let mu = (2.0 * phi.cos() - 2.0) / (d_th * d_th);
            let mut a = vec![0.0; n_interior_rad];
            let mut b = vec![0.0; n_interior_rad];
            let mut c = vec![0.0; n_interior_rad];
            match grid.chart() {
                Chart::LogPolar => {
                    let inv_ds2 = 1.0 / (grid.d_rad() * grid.d_rad());
                    for j in 0..n_interior_rad {
                        a[j] = inv_ds2;
                        b[j] = -2.0 * inv_ds2 + mu;
                        c[j] = inv_ds2;
                    }
                }
                Chart::PolarHalfOffset => {
                    let h = grid.d_rad();
                    let inv_h2 = 1.0 / (h * h);
                    let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
                    for j in 0..n_interior_rad {
                        let r = grid.rad(j);
                        a[j] = inv_h2 - 1.0 / (2.0 * h * r);
                        b[j] = -2.0 * inv_h2 + mu / (r * r);
                        c[j] = inv_h2 + 1.0 / (2.0 * h * r);
                        if j == 0 {
                            // x_{-1} = (−1)^k x_0 across the origin.
                            b[j] += parity * a[j];
                        }
                    }
                }
            }
            modes.push(Tridiag::factor(&a, &b, &c));
        }
        MixedPoissonSolver {
            grid: grid.clone(),
            fft,
            ifft,
            modes,
            first_interior,
            n_interior_rad,
        }
    }

    /// Solve d_mixed(u) = rhs at interior nodes with u = 0 on the boundary
    /// rings. `rhs` is a full node array; its boundary entries are ignored.
    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let grid = &self.grid;
        let n_ang = grid.n_ang();
        let n_rad = grid.n_rad();
        debug_assert_eq!(rhs.len(), grid.node_count());

        // d_mixed = ¼(...); move the ¼ to the right-hand side.
        let mut hat = vec![Complex64::new(0.0, 0.0); grid.node_count()];
        let mut row = vec![Complex64::new(0.0, 0.0); n_ang];
        for j in 0..n_rad {
            if j < self.first_interior || j >= self.first_interior + self.n_interior_rad {
                continue;
            }
            row.copy_from_slice(&rhs[j * n_ang..(j + 1) * n_ang]);
            for v in row.iter_mut() {
                *v *= 4.0;
            }
            self.fft.process(&mut row);
            hat[j * n_ang..(j + 1) * n_ang].copy_from_slice(&row);
        }

        let mut col = vec![Complex64::new(0.0, 0.0); self.n_interior_rad];
        for k in 0..n_ang {
            for (jj, slot) in col.iter_mut().enumerate() {
                *slot = hat[(self.first_interior + jj) * n_ang + k];
            }
            self.modes[k].solve(&mut col);
            for (jj, slot) in col.iter().enumerate() {
                hat[(self.first_interior + jj) * n_ang + k] = *slot;
            }
        }

        let mut out = vec![Complex64::new(0.0, 0.0); grid.node_count()];
        let scale = 1.0 / n_ang as f64;
        for j in self.first_interior..self.first_interior + self.n_interior_rad {
            row.copy_from_slice(&hat[j * n_ang..(j + 1) * n_ang]);
            self.ifft.process(&mut row);
            for (i, v) in row.iter().enumerate() {
                out[j * n_ang + i] = v * scale;
            }
        }
        out
    }
}
