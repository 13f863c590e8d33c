//! Matrix-valued fields over a grid, boundary data, norms, and interpolation.
//!
//! A [`MatrixField`] stores one complex n×n matrix per grid node. The
//! constrained wrappers [`HermitianField`] (Hermitian values) and
//! [`MetricField`] (Hermitian positive-definite values) validate their
//! invariants on construction. Fields are immutable values; operations build
//! new fields.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Circle, DomainSpec, Grid};
use crate::linalg::{self, CMat};

/// Relative Hermiticity tolerance: ‖X − X*‖ ≤ TOL_HERM·‖X‖.
pub const TOL_HERM: f64 = 1e-10;

/// One complex n×n matrix per node.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    grid: Grid,
    dim: usize,
    values: Vec<CMat>,
}

impl MatrixField {
    pub fn new(grid: Grid, dim: usize, values: Vec<CMat>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("fiber dimension must be at least 1"));
        }
        if values.len() != grid.node_count() {
            return Err(Error::invalid(format!(
                "value count {} does not match node count {}",
                values.len(),
                grid.node_count()
            )));
        }
        if values.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::invalid(format!("all values must be {dim}x{dim} matrices")));
        }
        Ok(MatrixField { grid, dim, values })
    }

    pub fn zeros(grid: Grid, dim: usize) -> Self {
        let n = grid.node_count();
        MatrixField { grid, dim, values: vec![linalg::zeros(dim); n] }
    }

    pub fn constant(grid: Grid, value: CMat) -> Result<Self> {
        if value.nrows() != value.ncols() || value.nrows() == 0 {
            return Err(Error::invalid("constant value must be a nonempty square matrix"));
        }
        let dim = value.nrows();
        let n = grid.node_count();
        Ok(MatrixField { grid, dim, values: vec![value; n] })
    }

    /// Sample a function of the chart coordinates at every node. The closure
    /// receives (ζ, w).
    pub fn from_fn(
        grid: Grid,
        dim: usize,
        mut f: impl FnMut(Complex64, Complex64) -> CMat,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.node_count());
        for k in 0..grid.node_count() {
            let (zeta, w) = grid.node_coordinates(k)?;
            values.push(f(zeta, w));
        }
        MatrixField::new(grid, dim, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn value(&self, index: usize) -> &CMat {
        &self.values[index]
    }

    pub fn values(&self) -> &[CMat] {
        &self.values
    }

    pub fn set_value(&mut self, index: usize, value: CMat) {
        debug_assert_eq!(value.nrows(), self.dim);
        self.values[index] = value;
    }

    pub fn map(&self, mut f: impl FnMut(usize, &CMat) -> CMat) -> MatrixField {
        let values = self.values.iter().enumerate().map(|(k, m)| f(k, m)).collect();
        MatrixField { grid: self.grid.clone(), dim: self.dim, values }
    }

    pub fn zip(
        &self,
        other: &MatrixField,
        mut f: impl FnMut(&CMat, &CMat) -> CMat,
    ) -> Result<MatrixField> {
        self.check_compatible(other)?;
        let values =
            self.values.iter().zip(other.values.iter()).map(|(a, b)| f(a, b)).collect();
        Ok(MatrixField { grid: self.grid.clone(), dim: self.dim, values })
    }

    pub fn check_compatible(&self, other: &MatrixField) -> Result<()> {
        if !self.grid.same_layout(&other.grid) || self.dim != other.dim {
            return Err(Error::invalid("fields live on different grids or dimensions"));
        }
        Ok(())
    }

    /// (X + X*)/2 at every node.
    pub fn re_hermitized(&self) -> MatrixField {
        self.map(|_, m| linalg::hermitize(m))
    }

    /// Max over nodes of the operator norm.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(linalg::op_norm).fold(0.0, f64::max)
    }

    /// Max over interior nodes of the operator norm.
    pub fn sup_norm_interior(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(k, _)| !self.grid.is_boundary_node(*k))
            .map(|(_, m)| linalg::op_norm(m))
            .fold(0.0, f64::max)
    }

    /// Max over boundary nodes of the operator norm.
    pub fn sup_norm_boundary(&self) -> f64 {
        self.grid
            .boundary_nodes()
            .iter()
            .map(|(k, _)| linalg::op_norm(&self.values[*k]))
            .fold(0.0, f64::max)
    }

    /// Entrywise bicubic interpolation at a chart point (ζ on the annulus, w
    /// on the disc). Exact at nodes, periodic in θ, radial window clamped at
    /// the ends (the disc ladder continues across the origin).
    pub fn interpolate(&self, point: Complex64) -> Result<CMat> {
        let (tr, tt) = self.chart_fractions(point)?;
        let (jw, wr) = radial_window(&self.grid, tr);
        let (iw, wt) = angular_window(&self.grid, tt);
        let n_ang = self.grid.n_ang();
        let mut out = linalg::zeros(self.dim);
        for (a, &j) in jw.iter().enumerate() {
            for (b, &i) in iw.iter().enumerate() {
                let coeff = wr[a] * wt[b];
                let (jj, ii) = if j < 0 {
                    // Disc only: ladder continues through the origin at θ+π.
                    ((-1 - j) as usize, (i + n_ang / 2) % n_ang)
                } else {
                    (j as usize, i)
                };
                let v = &self.values[self.grid.index(jj, ii)];
                out.zip_apply(v, |o, x| *o += coeff * x);
            }
        }
        Ok(out)
    }

    /// Chart point → (radial fraction in node units, angular fraction in node
    /// units), with range checks.
    fn chart_fractions(&self, point: Complex64) -> Result<(f64, f64)> {
        let eps = 1e-9;
        match self.grid.domain() {
            DomainSpec::Annulus { .. } => {
                let sigma = point.re;
                let lo = self.grid.sigma_min();
                let hi = self.grid.sigma_max();
                if sigma < lo - eps * (hi - lo) || sigma > hi + eps * (hi - lo) {
                    return Err(Error::invalid(format!(
                        "interpolation point sigma={sigma} outside [{lo}, {hi}]"
                    )));
                }
                let tr = ((sigma - lo) / self.grid.d_rad())
                    .clamp(0.0, (self.grid.n_rad() - 1) as f64);
                let tt = point.im.rem_euclid(std::f64::consts::TAU) / self.grid.d_theta();
                Ok((tr, tt))
            }
            DomainSpec::Disc { r_outer } => {
                let r = point.norm();
                if r > r_outer * (1.0 + eps) {
                    return Err(Error::invalid(format!(
                        "interpolation point |w|={r} outside the disc of radius {r_outer}"
                    )));
                }
                let theta = point.arg().rem_euclid(std::f64::consts::TAU);
                let tr = (r / self.grid.d_rad() - 0.5).min((self.grid.n_rad() - 1) as f64);
                let tt = theta / self.grid.d_theta();
                Ok((tr, tt))
            }
        }
    }
}

/// Radial 4-point window and Lagrange weights at fractional node position `t`.
/// Window indices may be negative on the disc (across-origin).
fn radial_window(grid: &Grid, t: f64) -> ([i64; 4], [f64; 4]) {
    let n = grid.n_rad() as i64;
    let mut j0 = t.floor() as i64;
    // Keep the window inside the ladder: [j0-1, j0+2] ⊂ [lo, n-1], where the
    // disc ladder extends below 0 across the origin.
    let lo = match grid.domain() {
        DomainSpec::Annulus { .. } => 0,
        DomainSpec::Disc { .. } => -(n.min(2)), // across-origin nodes exist
    };
    if j0 - 1 < lo {
        j0 = lo + 1;
    }
    if j0 + 2 > n - 1 {
        j0 = n - 3;
    }
    let base = j0 - 1;
    let x = t - base as f64;
    ([base, base + 1, base + 2, base + 3], lagrange4(x))
}

/// Angular 4-point window (periodic) and weights at fractional node position.
fn angular_window(grid: &Grid, t: f64) -> ([usize; 4], [f64; 4]) {
    let n = grid.n_ang();
    let i0 = t.floor() as i64;
    let base = i0 - 1;
    let x = t - base as f64;
    let idx = |k: i64| -> usize { (k.rem_euclid(n as i64)) as usize };
    ([idx(base), idx(base + 1), idx(base + 2), idx(base + 3)], lagrange4(x))
}

/// Cubic Lagrange weights for nodes at positions 0,1,2,3 evaluated at x.
fn lagrange4(x: f64) -> [f64; 4] {
    let w0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
    let w1 = x * (x - 2.0) * (x - 3.0) / 2.0;
    let w2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
    let w3 = x * (x - 1.0) * (x - 2.0) / 6.0;
    [w0, w1, w2, w3]
}

/// A [`MatrixField`] whose values are Hermitian (to [`TOL_HERM`]).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianField(MatrixField);

impl HermitianField {
    pub fn new(field: MatrixField) -> Result<Self> {
        for (k, m) in field.values.iter().enumerate() {
            let defect = linalg::hermitian_defect(m);
            if defect > TOL_HERM {
                return Err(Error::invalid(format!(
                    "value at node {k} is not Hermitian (relative defect {defect:.3e})"
                )));
            }
        }
        Ok(HermitianField(field))
    }

    /// Symmetrize, then wrap without re-checking.
    pub fn from_hermitized(field: &MatrixField) -> Self {
        HermitianField(field.re_hermitized())
    }

    pub fn zeros(grid: Grid, dim: usize) -> Self {
        HermitianField(MatrixField::zeros(grid, dim))
    }

    pub fn as_field(&self) -> &MatrixField {
        &self.0
    }

    pub fn into_field(self) -> MatrixField {
        self.0
    }

    pub fn grid(&self) -> &Grid {
        self.0.grid()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn value(&self, index: usize) -> &CMat {
        self.0.value(index)
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.sup_norm()
    }
}

/// A [`MatrixField`] whose values are Hermitian positive definite; houses the
/// metric P.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField(MatrixField);

impl MetricField {
    pub fn new(field: MatrixField) -> Result<Self> {
        for (k, m) in field.values.iter().enumerate() {
            let defect = linalg::hermitian_defect(m);
            if defect > TOL_HERM {
                return Err(Error::invalid(format!(
                    "metric value at node {k} is not Hermitian (relative defect {defect:.3e})"
                )));
            }
            let lam = linalg::min_eig_herm(m);
            if lam <= 0.0 {
                return Err(Error::invalid(format!(
                    "metric value at node {k} is not positive definite (lambda_min = {lam:.3e})"
                )));
            }
        }
        Ok(MetricField(field))
    }

    pub fn identity(grid: Grid, dim: usize) -> Self {
        MetricField(
            MatrixField::constant(grid, linalg::identity(dim)).expect("identity is square"),
        )
    }

    pub fn as_field(&self) -> &MatrixField {
        &self.0
    }

    pub fn into_field(self) -> MatrixField {
        self.0
    }

    pub fn grid(&self) -> &Grid {
        self.0.grid()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn value(&self, index: usize) -> &CMat {
        self.0.value(index)
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.sup_norm()
    }

    pub fn interpolate(&self, point: Complex64) -> Result<CMat> {
        self.0.interpolate(point)
    }

    /// Min over nodes of λ_min of the value.
    pub fn min_eigenvalue(&self) -> f64 {
        self.0.values.iter().map(linalg::min_eig_herm).fold(f64::INFINITY, f64::min)
    }

    /// λ_min per node (used by the positivity-preserving damping rule).
    pub fn min_eigs(&self) -> Vec<f64> {
        self.0.values.iter().map(linalg::min_eig_herm).collect()
    }

    /// Pointwise inverse as a plain field.
    pub fn inverse_field(&self) -> Result<MatrixField> {
        let mut values = Vec::with_capacity(self.0.values.len());
        for m in &self.0.values {
            values.push(linalg::inverse(m)?);
        }
        MatrixField::new(self.0.grid.clone(), self.0.dim, values)
    }

    /// Nodal values on the boundary rings, in [`Grid::boundary_nodes`] order.
    pub fn restrict_boundary(&self) -> BoundaryData {
        let grid = self.grid();
        let collect = |ring: usize| -> Vec<CMat> {
            (0..grid.n_ang()).map(|i| self.0.values[grid.index(ring, i)].clone()).collect()
        };
        let inner = grid.domain().is_annulus().then(|| collect(0));
        let outer = collect(grid.n_rad() - 1);
        BoundaryData {
            domain: grid.domain(),
            dim: self.dim(),
            n_ang: grid.n_ang(),
            inner,
            outer,
        }
    }
}

/// Per-boundary-circle angular samples of positive Hermitian matrices; houses
/// the Dirichlet data F and the path values φ_t.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    domain: DomainSpec,
    dim: usize,
    n_ang: usize,
    inner: Option<Vec<CMat>>,
    outer: Vec<CMat>,
}

impl BoundaryData {
    pub fn new(
        domain: DomainSpec,
        n_ang: usize,
        inner: Option<Vec<CMat>>,
        outer: Vec<CMat>,
    ) -> Result<Self> {
        if domain.is_annulus() != inner.is_some() {
            return Err(Error::invalid(
                "annulus boundary data needs both circles, disc data only the outer one",
            ));
        }
        let dim = outer.first().map(|m| m.nrows()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::invalid("boundary data must contain at least one sample"));
        }
        let check = |samples: &[CMat], name: &str| -> Result<()> {
            if samples.len() != n_ang {
                return Err(Error::invalid(format!(
                    "{name} circle has {} samples, expected n_ang = {n_ang}",
                    samples.len()
                )));
            }
            for (i, m) in samples.iter().enumerate() {
                if m.nrows() != dim || m.ncols() != dim {
                    return Err(Error::invalid(format!(
                        "{name} sample {i} is not {dim}x{dim}"
                    )));
                }
                if linalg::hermitian_defect(m) > TOL_HERM {
                    return Err(Error::invalid(format!(
                        "{name} sample {i} is not Hermitian"
                    )));
                }
                if linalg::min_eig_herm(m) <= 0.0 {
                    return Err(Error::invalid(format!(
                        "{name} sample {i} is not positive definite"
                    )));
                }
            }
            Ok(())
        };
        if let Some(ref samples) = inner {
            check(samples, "inner")?;
        }
        check(&outer, "outer")?;
        Ok(BoundaryData { domain, dim, n_ang, inner, outer })
    }

    /// Constant boundary data C on every circle.
    pub fn constant(domain: DomainSpec, n_ang: usize, value: CMat) -> Result<Self> {
        let inner = domain.is_annulus().then(|| vec![value.clone(); n_ang]);
        BoundaryData::new(domain, n_ang, inner, vec![value; n_ang])
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_ang(&self) -> usize {
        self.n_ang
    }

    pub fn circle(&self, circle: Circle) -> Option<&[CMat]> {
        match circle {
            Circle::Inner => self.inner.as_deref(),
            Circle::Outer => Some(&self.outer),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        let outer = self.outer.iter().map(linalg::op_norm).fold(0.0, f64::max);
        let inner = self
            .inner
            .iter()
            .flat_map(|v| v.iter())
            .map(linalg::op_norm)
            .fold(0.0, f64::max);
        outer.max(inner)
    }

    /// Min over all samples of λ_min.
    pub fn min_eigenvalue(&self) -> f64 {
        self.outer
            .iter()
            .chain(self.inner.iter().flat_map(|v| v.iter()))
            .map(linalg::min_eig_herm)
            .fold(f64::INFINITY, f64::min)
    }

    /// Drop the positivity constraint.
    pub fn to_values(&self) -> BoundaryValues {
        BoundaryValues {
            domain: self.domain,
            dim: self.dim,
            n_ang: self.n_ang,
            inner: self.inner.clone(),
            outer: self.outer.clone(),
        }
    }

    /// Embed as nodal values on a grid, zero at interior nodes.
    pub fn embed(&self, grid: &Grid) -> Result<MatrixField> {
        self.to_values().embed(grid)
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        if grid.domain() != self.domain || grid.n_ang() != self.n_ang {
            return Err(Error::invalid(
                "boundary data does not match the grid's domain or angular count",
            ));
        }
        Ok(())
    }
}

/// Hermitian (not necessarily positive) boundary samples; houses the
/// inhomogeneous boundary term f₂ of the linearized Dirichlet problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryValues {
    domain: DomainSpec,
    dim: usize,
    n_ang: usize,
    inner: Option<Vec<CMat>>,
    outer: Vec<CMat>,
}

impl BoundaryValues {
    pub fn new(
        domain: DomainSpec,
        n_ang: usize,
        inner: Option<Vec<CMat>>,
        outer: Vec<CMat>,
    ) -> Result<Self> {
        if domain.is_annulus() != inner.is_some() {
            return Err(Error::invalid(
                "annulus boundary values need both circles, disc values only the outer one",
            ));
        }
        let dim = outer.first().map(|m| m.nrows()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::invalid("boundary values must contain at least one sample"));
        }
        for samples in inner.iter().chain(std::iter::once(&outer)) {
            if samples.len() != n_ang {
                return Err(Error::invalid("boundary sample count must equal n_ang"));
            }
            for m in samples.iter() {
                if m.nrows() != dim || m.ncols() != dim {
                    return Err(Error::invalid("boundary samples must share one dimension"));
                }
                if linalg::hermitian_defect(m) > TOL_HERM {
                    return Err(Error::invalid("boundary samples must be Hermitian"));
                }
            }
        }
        Ok(BoundaryValues { domain, dim, n_ang, inner, outer })
    }

    pub fn zeros(domain: DomainSpec, n_ang: usize, dim: usize) -> Self {
        let z = vec![linalg::zeros(dim); n_ang];
        BoundaryValues {
            domain,
            dim,
            n_ang,
            inner: domain.is_annulus().then(|| z.clone()),
            outer: z,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn circle(&self, circle: Circle) -> Option<&[CMat]> {
        match circle {
            Circle::Inner => self.inner.as_deref(),
            Circle::Outer => Some(&self.outer),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.outer
            .iter()
            .chain(self.inner.iter().flat_map(|v| v.iter()))
            .map(linalg::op_norm)
            .fold(0.0, f64::max)
    }

    /// Embed as nodal values on a grid, zero at interior nodes.
    pub fn embed(&self, grid: &Grid) -> Result<MatrixField> {
        if grid.domain() != self.domain || grid.n_ang() != self.n_ang {
            return Err(Error::invalid(
                "boundary values do not match the grid's domain or angular count",
            ));
        }
        let mut field = MatrixField::zeros(grid.clone(), self.dim);
        if let Some(ref inner) = self.inner {
            for (i, m) in inner.iter().enumerate() {
                field.set_value(grid.index(0, i), m.clone());
            }
        }
        for (i, m) in self.outer.iter().enumerate() {
            field.set_value(grid.index(grid.n_rad() - 1, i), m.clone());
        }
        Ok(field)
    }
}

/// One real value per node (barriers, the maximum-principle functional S).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::invalid("scalar value count must equal node count"));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_boundary(&self) -> f64 {
        self.grid
            .boundary_nodes()
            .iter()
            .map(|(k, _)| self.values[*k])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small_annulus() -> Grid {
        build_grid(DomainSpec::annulus(0.5, 1.0).unwrap(), 8, 8).unwrap()
    }

    #[test]
    fn sup_norm_examples() {
        let g = small_annulus();
        assert_eq!(MatrixField::zeros(g.clone(), 2).sup_norm(), 0.0);
        let d = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_relative_eq!(
            MatrixField::constant(g.clone(), d).unwrap().sup_norm(),
            2.0,
            epsilon = 1e-12
        );
        let n = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_relative_eq!(
            MatrixField::constant(g, n).unwrap().sup_norm(),
            3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn min_eigenvalue_examples() {
        let g = small_annulus();
        let d = CMat::from_row_slice(2, 2, &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let p = MetricField::new(MatrixField::constant(g.clone(), d).unwrap()).unwrap();
        assert_relative_eq!(p.min_eigenvalue(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(MetricField::identity(g.clone(), 3).min_eigenvalue(), 1.0);
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let p = MetricField::new(MatrixField::constant(g, m).unwrap()).unwrap();
        assert_relative_eq!(p.min_eigenvalue(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn non_hermitian_metric_is_rejected() {
        let g = small_annulus();
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(MetricField::new(MatrixField::constant(g.clone(), m).unwrap()).is_err());
        let neg = CMat::from_row_slice(1, 1, &[c(-1.0, 0.0)]);
        assert!(MetricField::new(MatrixField::constant(g, neg).unwrap()).is_err());
    }

    #[test]
    fn restrict_boundary_picks_nodal_values() {
        let g = small_annulus();
        let p = MetricField::identity(g.clone(), 2);
        let b = p.restrict_boundary();
        assert_eq!(b.circle(Circle::Inner).unwrap().len(), 8);
        for m in b.circle(Circle::Outer).unwrap() {
            assert!(linalg::op_norm(&(m - linalg::identity(2))) < 1e-15);
        }

        // A marked value at (outer ring, θ = 0) shows up as outer sample 0.
        let mut f = MatrixField::constant(g.clone(), linalg::identity(2)).unwrap();
        let marked = CMat::from_row_slice(
            2,
            2,
            &[c(3.0, 0.0), c(0.5, 0.2), c(0.5, -0.2), c(2.0, 0.0)],
        );
        f.set_value(g.index(g.n_rad() - 1, 0), marked.clone());
        let p = MetricField::new(f).unwrap();
        let b = p.restrict_boundary();
        assert!(linalg::op_norm(&(&b.circle(Circle::Outer).unwrap()[0] - &marked)) < 1e-15);

        // Disc data has no inner circle.
        let gd = build_grid(DomainSpec::disc(1.0).unwrap(), 8, 8).unwrap();
        let b = MetricField::identity(gd, 2).restrict_boundary();
        assert!(b.circle(Circle::Inner).is_none());
    }

    #[test]
    fn embed_then_restrict_is_identity() {
        let g = small_annulus();
        let p = MetricField::new(
            MatrixField::from_fn(g.clone(), 1, |zeta, _| {
                CMat::from_row_slice(1, 1, &[c((zeta.re + 2.0 + zeta.im.sin() * 0.1).exp(), 0.0)])
            })
            .unwrap(),
        )
        .unwrap();
        let b = p.restrict_boundary();
        let embedded = b.embed(&g).unwrap();
        // Boundary rings of the embedding carry the samples.
        for (k, circle) in g.boundary_nodes() {
            let i = g.ang_of(k);
            let expect = &b.circle(circle).unwrap()[i];
            assert!(linalg::op_norm(&(embedded.value(k) - expect)) == 0.0);
        }
        // And the round trip reproduces the data.
        let p2 = MetricField::new(
            embedded.map(|k, m| {
                if g.is_boundary_node(k) {
                    m.clone()
                } else {
                    linalg::identity(1)
                }
            }),
        )
        .unwrap();
        assert_eq!(p2.restrict_boundary(), b);
    }

    #[test]
    fn interpolation_reproduces_nodes_constants_and_linears() {
        let g = build_grid(DomainSpec::annulus(0.5, 1.0).unwrap(), 10, 12).unwrap();
        let f = MatrixField::from_fn(g.clone(), 1, |zeta, _| {
            CMat::from_row_slice(1, 1, &[c(0.3 + 2.0 * zeta.re, 0.0)])
        })
        .unwrap();
        // Exact at a node.
        let (zeta, _) = g.node_coordinates(g.index(4, 5)).unwrap();
        let v = f.interpolate(zeta).unwrap();
        assert!((v[(0, 0)] - f.value(g.index(4, 5))[(0, 0)]).norm() < 1e-13);
        // Midpoint between two σ-adjacent nodes = arithmetic mean (linear in σ).
        let mid = Complex64::new(g.rad(4) + 0.5 * g.d_rad(), g.theta(5));
        let v = f.interpolate(mid).unwrap();
        let mean = 0.5 * (f.value(g.index(4, 5))[(0, 0)] + f.value(g.index(5, 5))[(0, 0)]);
        assert!((v[(0, 0)] - mean).norm() < 1e-13);
        // Constants are reproduced anywhere.
        let cfield = MatrixField::constant(g.clone(), linalg::identity(2).scale(1.7)).unwrap();
        let v = cfield.interpolate(Complex64::new(-0.31, 2.11)).unwrap();
        assert!(linalg::op_norm(&(v - linalg::identity(2).scale(1.7))) < 1e-13);
        // Outside the chart → error.
        assert!(f.interpolate(Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn disc_interpolation_crosses_the_origin() {
        let g = build_grid(DomainSpec::disc(1.0).unwrap(), 8, 8).unwrap();
        // Entries linear in the real part of w: smooth through the origin.
        let f = MatrixField::from_fn(g.clone(), 1, |_, w| {
            CMat::from_row_slice(1, 1, &[c(1.0 + 0.5 * w.re, 0.0)])
        })
        .unwrap();
        let v = f.interpolate(Complex64::new(0.01, 0.0)).unwrap();
        assert!((v[(0, 0)] - c(1.005, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn path_free_inverse_norm_identity() {
        // sup_norm(P⁻¹) = 1 / min λ_min(P): pointwise inversion.
        let g = small_annulus();
        let p = MetricField::new(
            MatrixField::from_fn(g, 2, |zeta, _| {
                let s = (0.4 * zeta.re).exp();
                CMat::from_row_slice(
                    2,
                    2,
                    &[c(2.0 * s, 0.0), c(0.3, 0.1), c(0.3, -0.1), c(1.0 * s, 0.0)],
                )
            })
            .unwrap(),
        )
        .unwrap();
        let inv = p.inverse_field().unwrap();
        assert_relative_eq!(inv.sup_norm(), 1.0 / p.min_eigenvalue(), epsilon = 1e-10);
    }
}
