//! The linearized operator 𝓛 at a background metric P, its Dirichlet solve,
//! the barrier function, and the explicit C⁰ certificate.
//!
//! On a chart, 𝓛h = h_ζζ̄ − A*h_ζ − h_ζ̄A + A*hA with A = P⁻¹P_ζ. The solve is
//! matrix-free restarted GMRES on the real parameters of the Hermitian
//! unknown, right-preconditioned by the exact scalar ∂_ζ∂_ζ̄ inverse applied
//! entrywise, with a damped Jacobi sweep as a stagnation fallback.

use num_complex::Complex64;

use crate::calculus::{connection, d_mixed, d_zeta, d_zetabar, ConnectionField};
use crate::error::{Error, Result};
use crate::field::{BoundaryValues, HermitianField, MatrixField, MetricField, ScalarField};
use crate::grid::{Chart, Grid};
use crate::linalg::{self, CMat};
use crate::poisson::MixedPoissonSolver;

/// Default algebraic tolerance of the linear solve.
pub const TOL_LIN: f64 = 1e-10;
/// Default tolerance of the C⁰ certificate.
pub const TOL_CERT: f64 = 1e-8;

/// A background metric with its cached connection and ∂_ζ̄P.
pub struct LinearizedContext {
    p: MetricField,
    a: ConnectionField,
    p_zetabar: MatrixField,
    a_adj: Vec<CMat>,
}

impl LinearizedContext {
    pub fn new(p: &MetricField) -> Result<Self> {
        let a = connection(p)?;
        let p_zetabar = d_zetabar(p.as_field());
        let a_adj = a.as_field().values().iter().map(|m| m.adjoint()).collect();
        Ok(LinearizedContext { p: p.clone(), a, p_zetabar, a_adj })
    }

    pub fn p(&self) -> &MetricField {
        &self.p
    }

    pub fn connection(&self) -> &ConnectionField {
        &self.a
    }

    pub fn p_zetabar(&self) -> &MatrixField {
        &self.p_zetabar
    }

    pub fn grid(&self) -> &Grid {
        self.p.grid()
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    /// 𝓛 applied to a raw field: interior nodes carry 𝓛h, boundary nodes
    /// carry h's own value (the Dirichlet rows of the discrete system).
    fn apply_raw(&self, h: &MatrixField) -> MatrixField {
        let grid = self.grid().clone();
        let hz = d_zeta(h);
        let hzb = d_zetabar(h);
        let hm = d_mixed(h);
        h.map(|k, hval| {
            if grid.is_boundary_node(k) {
                hval.clone()
            } else {
                let a = self.a.as_field().value(k);
                let a_adj = &self.a_adj[k];
                hm.value(k) - a_adj * hz.value(k) - hzb.value(k) * a + a_adj * hval * a
            }
        })
    }
}

/// 𝓛h at interior nodes; boundary nodes carry h's own value.
pub fn apply_l(ctx: &LinearizedContext, h: &HermitianField) -> Result<HermitianField> {
    ctx.p.as_field().check_compatible(h.as_field())?;
    Ok(HermitianField::from_hermitized(&ctx.apply_raw(h.as_field())))
}

/// Options of the inner linear solve.
#[derive(Debug, Clone)]
pub struct LinearOptions {
    /// Algebraic residual target, relative to 1 + ‖f₁‖.
    pub tol_lin: f64,
    /// Total inner-iteration cap; `None` means 10·√(unknowns) + 500.
    pub max_lin_iters: Option<usize>,
    /// GMRES restart length.
    pub restart: usize,
    /// Damping of the fixed-point fallback sweep.
    pub fallback_omega: f64,
}

impl Default for LinearOptions {
    fn default() -> Self {
        LinearOptions { tol_lin: TOL_LIN, max_lin_iters: None, restart: 60, fallback_omega: 0.8 }
    }
}

/// Solve 𝓛h = f₁ at interior nodes, h = f₂ at boundary nodes (exactly).
pub fn solve_dirichlet_l(
    ctx: &LinearizedContext,
    f1: &HermitianField,
    f2: &BoundaryValues,
    opts: &LinearOptions,
) -> Result<HermitianField> {
    ctx.p.as_field().check_compatible(f1.as_field())?;
    if f2.dim() != ctx.dim() {
        return Err(Error::invalid("boundary values dimension mismatch"));
    }
    let grid = ctx.grid().clone();
    let h_bnd = f2.embed(&grid)?;

    // Subtract the boundary lift: solve for the zero-boundary part.
    let l_bnd = ctx.apply_raw(&h_bnd);
    let rhs = f1.as_field().zip(&l_bnd, |a, b| a - b)?;

    let packing = HermPacking::new(&grid, ctx.dim());
    let b = packing.pack(&rhs);
    let scale = 1.0 + f1.as_field().sup_norm_interior();
    let tol_abs = opts.tol_lin * scale;
    let max_iters =
        opts.max_lin_iters.unwrap_or_else(|| 10 * (packing.len() as f64).sqrt() as usize + 500);

    let poisson = MixedPoissonSolver::new(&grid);
    let apply = |v: &[f64]| -> Vec<f64> {
        let h = packing.unpack(v);
        packing.pack(&ctx.apply_raw(&h))
    };
    let precond = |v: &[f64]| -> Vec<f64> { packing.precondition(v, &poisson) };

    let mut x = vec![0.0; packing.len()];
    let mut history = Vec::new();
    let mut iters_used = 0usize;
    let mut converged = false;
    let mut last_sup = f64::INFINITY;
    let mut stagnant = 0usize;

    // Residual in the sup operator norm over interior nodes.
    let sup_residual = |x: &[f64]| -> f64 {
        let ax = apply(x);
        let diff: Vec<f64> = ax.iter().zip(b.iter()).map(|(a, b)| a - b).collect();
        packing.unpack(&diff).sup_norm_interior()
    };

    let r0 = sup_residual(&x);
    history.push(r0);
    if r0 <= tol_abs {
        converged = true;
    }

    while !converged && iters_used < max_iters && stagnant < 2 {
        let budget = (max_iters - iters_used).min(opts.restart);
        let (dx, used) = gmres_cycle(&apply, &precond, &b, &x, budget, 0.05 * tol_abs);
        iters_used += used.max(1);
        for (xi, di) in x.iter_mut().zip(dx.iter()) {
            *xi += di;
        }
        let r = sup_residual(&x);
        history.push(r);
        if r <= tol_abs {
            converged = true;
            break;
        }
        if r > 0.9 * last_sup {
            stagnant += 1;
        } else {
            stagnant = 0;
        }
        last_sup = r;
    }

    if !converged && iters_used < max_iters {
        // Fallback: damped fixed-point sweep h ← h + ω·D⁻¹(f₁ − 𝓛h).
        let diag = packing.mixed_diagonal();
        while iters_used < max_iters {
            let ax = apply(&x);
            let mut r_norm2 = 0.0;
            for k in 0..x.len() {
                let r = b[k] - ax[k];
                r_norm2 += r * r;
                x[k] += opts.fallback_omega * r / diag[k];
            }
            iters_used += 1;
            if iters_used % 50 == 0 || r_norm2.sqrt() < tol_abs {
                let r = sup_residual(&x);
                history.push(r);
                if r <= tol_abs {
                    converged = true;
                    break;
                }
            }
        }
    }

    if !converged {
        return Err(Error::LinearSolve {
            iterations: iters_used,
            residual: *history.last().unwrap_or(&f64::NAN),
            history,
        });
    }

    let h = packing.unpack(&x).zip(&h_bnd, |a, b| a + b)?;
    Ok(HermitianField::from_hermitized(&h))
}

/// The barrier Φ: zero on ∂M, Φ_ζζ̄ = −1 at interior nodes.
///
/// Annulus: Φ(σ) = 2(σ − σ₁)(σ₂ − σ). Disc: Φ = r_outer² − |w|².
pub fn barrier(grid: &Grid) -> ScalarField {
    let values = match grid.chart() {
        Chart::LogPolar => {
            let s1 = grid.sigma_min();
            let s2 = grid.sigma_max();
            (0..grid.node_count())
                .map(|k| {
                    let s = grid.rad(grid.rad_of(k));
                    2.0 * (s - s1) * (s2 - s)
                })
                .collect()
        }
        Chart::PolarHalfOffset => {
            let r_out = grid.domain().r_outer();
            (0..grid.node_count())
                .map(|k| {
                    let r = grid.rad(grid.rad_of(k));
                    r_out * r_out - r * r
                })
                .collect()
        }
    };
    ScalarField::new(grid.clone(), values).expect("barrier length matches the grid")
}

/// Outcome of the explicit C⁰ comparison of Theorem-style barriers.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub passes: bool,
    /// Worst over nodes and signs of λ_max(P^{-1/2}(±h − ‖𝓛h‖₀Φ‖P⁻¹‖₀P)P^{-1/2}).
    pub worst_margin: f64,
    pub sup_lh: f64,
    pub sup_p_inv: f64,
}

/// Check ±h ≤ Φ·‖P⁻¹‖₀·‖𝓛h‖₀·P at every node, for h with zero boundary.
pub fn c0_certificate(ctx: &LinearizedContext, h: &HermitianField) -> Result<CertificateReport> {
    c0_certificate_with_tol(ctx, h, TOL_CERT)
}

pub fn c0_certificate_with_tol(
    ctx: &LinearizedContext,
    h: &HermitianField,
    tol_cert: f64,
) -> Result<CertificateReport> {
    ctx.p.as_field().check_compatible(h.as_field())?;
    let bnd = h.as_field().sup_norm_boundary();
    if bnd > 1e-12 * (1.0 + h.sup_norm()) {
        return Err(Error::invalid(format!(
            "certificate requires zero boundary values, got sup {bnd:.3e}"
        )));
    }
    let lh = apply_l(ctx, h)?;
    let sup_lh = lh.as_field().sup_norm_interior();
    let sup_p_inv = 1.0 / ctx.p.min_eigenvalue();
    let phi = barrier(ctx.grid());

    let mut worst = f64::NEG_INFINITY;
    for k in 0..ctx.grid().node_count() {
        let inv_sqrt = linalg::herm_inv_sqrt(ctx.p.value(k))?;
        let m = &inv_sqrt * h.value(k) * &inv_sqrt;
        let bound = sup_lh * phi.value(k) * sup_p_inv;
        let plus = linalg::max_eig_herm(&m) - bound;
        let minus = -linalg::min_eig_herm(&m) - bound;
        worst = worst.max(plus).max(minus);
    }
    Ok(CertificateReport { passes: worst <= tol_cert, worst_margin: worst, sup_lh, sup_p_inv })
}

/// Real-parameter packing of Hermitian fields over interior nodes.
struct HermPacking {
    grid: Grid,
    dim: usize,
    interior: Vec<usize>,
}

impl HermPacking {
    fn new(grid: &Grid, dim: usize) -> Self {
        HermPacking { grid: grid.clone(), dim, interior: grid.interior_nodes() }
    }

    fn params_per_node(&self) -> usize {
        self.dim * self.dim
    }

    fn len(&self) -> usize {
        self.interior.len() * self.params_per_node()
    }

    /// Interior values → packed reals (diagonal, then lower-triangle re/im).
    fn pack(&self, f: &MatrixField) -> Vec<f64> {
        let n = self.dim;
        let mut out = Vec::with_capacity(self.len());
        for &k in &self.interior {
            let m = f.value(k);
            for p in 0..n {
                out.push(m[(p, p)].re);
            }
            for q in 1..n {
                for p in 0..q {
                    out.push(m[(q, p)].re);
                    out.push(m[(q, p)].im);
                }
            }
        }
        out
    }

    /// Packed reals → Hermitian field with zero boundary values.
    fn unpack(&self, v: &[f64]) -> MatrixField {
        let n = self.dim;
        let mut field = MatrixField::zeros(self.grid.clone(), n);
        let stride = self.params_per_node();
        for (slot, &k) in self.interior.iter().enumerate() {
            let chunk = &v[slot * stride..(slot + 1) * stride];
            let mut m = linalg::zeros(n);
            for p in 0..n {
                m[(p, p)] = Complex64::new(chunk[p], 0.0);
            }
            let mut pos = n;
            for q in 1..n {
                for p in 0..q {
                    let z = Complex64::new(chunk[pos], chunk[pos + 1]);
                    pos += 2;
                    m[(q, p)] = z;
                    m[(p, q)] = z.conj();
                }
            }
            field.set_value(k, m);
        }
        field
    }

    /// Entrywise scalar Poisson inverse of a packed vector.
    fn precondition(&self, v: &[f64], poisson: &MixedPoissonSolver) -> Vec<f64> {
        let n = self.dim;
        let stride = self.params_per_node();
        let node_count = self.grid.node_count();
        let mut out = vec![0.0; v.len()];
        let mut scratch = vec![Complex64::new(0.0, 0.0); node_count];

        // One scalar solve per Hermitian parameter pair (p ≤ q).
        let mut offset_of = vec![vec![0usize; n]; n];
        {
            let mut pos = n;
            for q in 1..n {
                for p in 0..q {
                    offset_of[q][p] = pos;
                    pos += 2;
                }
            }
        }
        for q in 0..n {
            for p in 0..=q {
                for z in scratch.iter_mut() {
                    *z = Complex64::new(0.0, 0.0);
                }
                for (slot, &k) in self.interior.iter().enumerate() {
                    let chunk = &v[slot * stride..(slot + 1) * stride];
                    scratch[k] = if p == q {
                        Complex64::new(chunk[p], 0.0)
                    } else {
                        Complex64::new(chunk[offset_of[q][p]], chunk[offset_of[q][p] + 1])
                    };
                }
                let sol = poisson.solve(&scratch);
                for (slot, &k) in self.interior.iter().enumerate() {
                    let base = slot * stride;
                    if p == q {
                        out[base + p] = sol[k].re;
                    } else {
                        out[base + offset_of[q][p]] = sol[k].re;
                        out[base + offset_of[q][p] + 1] = sol[k].im;
                    }
                }
            }
        }
        out
    }

    /// Diagonal of the mixed-derivative stencil per packed component.
    fn mixed_diagonal(&self) -> Vec<f64> {
        let grid = &self.grid;
        let stride = self.params_per_node();
        let mut out = vec![0.0; self.len()];
        for (slot, &k) in self.interior.iter().enumerate() {
            let d = match grid.chart() {
                Chart::LogPolar => {
                    let ds = grid.d_rad();
                    let dt = grid.d_theta();
                    0.25 * (-2.0 / (ds * ds) - 2.0 / (dt * dt))
                }
                Chart::PolarHalfOffset => {
                    let h = grid.d_rad();
                    let dt = grid.d_theta();
                    let r = grid.rad(grid.rad_of(k));
                    0.25 * (-2.0 / (h * h) - 2.0 / (dt * dt * r * r))
                }
            };
            for s in 0..stride {
                out[slot * stride + s] = d;
            }
        }
        out
    }
}

/// One restarted GMRES cycle for the correction A·dx ≈ r = b − A(x₀ + ·),
/// right-preconditioned. Returns (M⁻¹-applied correction, iterations used).
fn gmres_cycle(
    apply: &impl Fn(&[f64]) -> Vec<f64>,
    precond: &impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    x0: &[f64],
    max_steps: usize,
    tol_l2: f64,
) -> (Vec<f64>, usize) {
    let n = b.len();
    let ax0 = apply(x0);
    let r0: Vec<f64> = b.iter().zip(ax0.iter()).map(|(b, a)| b - a).collect();
    let beta = norm2(&r0);
    if beta == 0.0 || max_steps == 0 {
        return (vec![0.0; n], 0);
    }

    let m = max_steps;
    let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    v.push(r0.iter().map(|x| x / beta).collect());
    let mut hess = vec![vec![0.0f64; m]; m + 1];
    let mut cs = vec![0.0f64; m];
    let mut sn = vec![0.0f64; m];
    let mut g = vec![0.0f64; m + 1];
    g[0] = beta;
    let mut used = 0;

    for j in 0..m {
        used = j + 1;
        let z = precond(&v[j]);
        let mut w = apply(&z);
        // Modified Gram-Schmidt.
        for i in 0..=j {
            let hij = dot(&w, &v[i]);
            hess[i][j] = hij;
            for (wk, vk) in w.iter_mut().zip(v[i].iter()) {
                *wk -= hij * vk;
            }
        }
        let hj1 = norm2(&w);
        hess[j + 1][j] = hj1;
        // Apply previous Givens rotations to the new column.
        for i in 0..j {
            let t = cs[i] * hess[i][j] + sn[i] * hess[i + 1][j];
            hess[i + 1][j] = -sn[i] * hess[i][j] + cs[i] * hess[i + 1][j];
            hess[i][j] = t;
        }
        let denom = (hess[j][j] * hess[j][j] + hj1 * hj1).sqrt();
        if denom == 0.0 {
            break;
        }
        cs[j] = hess[j][j] / denom;
        sn[j] = hj1 / denom;
        hess[j][j] = denom;
        g[j + 1] = -sn[j] * g[j];
        g[j] *= cs[j];

        let res_est = g[j + 1].abs();
        if hj1 == 0.0 || res_est <= tol_l2 {
            break;
        }
        v.push(w.iter().map(|x| x / hj1).collect());
    }

    // Back substitution for the Krylov coefficients.
    let k = used;
    let mut y = vec![0.0f64; k];
    for i in (0..k).rev() {
        let mut s = g[i];
        for l in i + 1..k {
            s -= hess[i][l] * y[l];
        }
        y[i] = s / hess[i][i];
    }
    let mut z = vec![0.0f64; n];
    for (i, yi) in y.iter().enumerate() {
        for (zk, vk) in z.iter_mut().zip(v[i].iter()) {
            *zk += yi * vk;
        }
    }
    (precond(&z), used)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
