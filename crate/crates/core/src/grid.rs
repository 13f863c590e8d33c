//! Computational domains and structured grids.
//!
//! Two domains are supported, each with a fixed working chart:
//!
//! * annulus r_inner < |w| < r_outer, in the log-polar chart
//!   ζ = σ + iθ with σ ∈ [log r_inner, log r_outer], θ ∈ [0, 2π) periodic,
//!   and w = e^ζ;
//! * disc |w| < r_outer, in the identity chart, on a polar grid with
//!   half-offset radial nodes r_j = (j + ½)·h so no node sits at the origin.
//!
//! Nodes are indexed row-major: `index = i_rad * n_ang + i_ang`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A disc or an annulus with its radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainSpec {
    Disc { r_outer: f64 },
    Annulus { r_inner: f64, r_outer: f64 },
}

impl DomainSpec {
    pub fn disc(r_outer: f64) -> Result<Self> {
        if !(r_outer > 0.0) || !r_outer.is_finite() {
            return Err(Error::invalid(format!("disc radius must be positive, got {r_outer}")));
        }
        Ok(DomainSpec::Disc { r_outer })
    }

    pub fn annulus(r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(r_inner > 0.0) || !(r_outer > r_inner) || !r_inner.is_finite() || !r_outer.is_finite()
        {
            return Err(Error::invalid(format!(
                "annulus radii must satisfy 0 < r_inner < r_outer, got ({r_inner}, {r_outer})"
            )));
        }
        Ok(DomainSpec::Annulus { r_inner, r_outer })
    }

    pub fn is_annulus(&self) -> bool {
        matches!(self, DomainSpec::Annulus { .. })
    }

    pub fn r_outer(&self) -> f64 {
        match *self {
            DomainSpec::Disc { r_outer } => r_outer,
            DomainSpec::Annulus { r_outer, .. } => r_outer,
        }
    }
}

/// Which boundary circle a node sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Circle {
    Inner,
    Outer,
}

/// The working chart of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Annulus: ζ = σ + iθ on [log r₁, log r₂] × [0, 2π).
    LogPolar,
    /// Disc: identity chart w = r·e^{iθ} with half-offset radial ladder.
    PolarHalfOffset,
}

/// Structured grid over a [`DomainSpec`]. Immutable after construction; all
/// queries are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    domain: DomainSpec,
    n_rad: usize,
    n_ang: usize,
}

/// Build a grid. `n_rad` ≥ 8, `n_ang` ≥ 8 and even.
pub fn build_grid(domain: DomainSpec, n_rad: usize, n_ang: usize) -> Result<Grid> {
    if n_rad < 8 {
        return Err(Error::invalid(format!("n_rad must be at least 8, got {n_rad}")));
    }
    if n_ang < 8 || n_ang % 2 != 0 {
        return Err(Error::invalid(format!("n_ang must be even and at least 8, got {n_ang}")));
    }
    Ok(Grid { domain, n_rad, n_ang })
}

impl Grid {
    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn chart(&self) -> Chart {
        match self.domain {
            DomainSpec::Disc { .. } => Chart::PolarHalfOffset,
            DomainSpec::Annulus { .. } => Chart::LogPolar,
        }
    }

    pub fn n_rad(&self) -> usize {
        self.n_rad
    }

    pub fn n_ang(&self) -> usize {
        self.n_ang
    }

    pub fn node_count(&self) -> usize {
        self.n_rad * self.n_ang
    }

    #[inline]
    pub fn index(&self, i_rad: usize, i_ang: usize) -> usize {
        debug_assert!(i_rad < self.n_rad && i_ang < self.n_ang);
        i_rad * self.n_ang + i_ang
    }

    #[inline]
    pub fn rad_of(&self, index: usize) -> usize {
        index / self.n_ang
    }

    #[inline]
    pub fn ang_of(&self, index: usize) -> usize {
        index % self.n_ang
    }

    /// Angular spacing Δθ = 2π / n_ang.
    pub fn d_theta(&self) -> f64 {
        std::f64::consts::TAU / self.n_ang as f64
    }

    pub fn theta(&self, i_ang: usize) -> f64 {
        i_ang as f64 * self.d_theta()
    }

    /// σ of the innermost ring (annulus chart).
    pub fn sigma_min(&self) -> f64 {
        match self.domain {
            DomainSpec::Annulus { r_inner, .. } => r_inner.ln(),
            DomainSpec::Disc { .. } => unreachable!("sigma_min on a disc grid"),
        }
    }

    /// σ of the outermost ring (annulus chart).
    pub fn sigma_max(&self) -> f64 {
        match self.domain {
            DomainSpec::Annulus { r_outer, .. } => r_outer.ln(),
            DomainSpec::Disc { .. } => unreachable!("sigma_max on a disc grid"),
        }
    }

    /// Radial spacing: Δσ on the annulus, Δr on the disc.
    pub fn d_rad(&self) -> f64 {
        match self.domain {
            DomainSpec::Annulus { .. } => {
                (self.sigma_max() - self.sigma_min()) / (self.n_rad - 1) as f64
            }
            DomainSpec::Disc { r_outer } => r_outer / (self.n_rad as f64 - 0.5),
        }
    }

    /// Radial coordinate of ring `i_rad`: σ_j on the annulus, r_j = (j+½)·Δr
    /// on the disc.
    pub fn rad(&self, i_rad: usize) -> f64 {
        match self.domain {
            DomainSpec::Annulus { .. } => self.sigma_min() + i_rad as f64 * self.d_rad(),
            DomainSpec::Disc { .. } => (i_rad as f64 + 0.5) * self.d_rad(),
        }
    }

    /// Chart coordinate ζ and physical coordinate w of a node.
    ///
    /// Annulus: ζ = σ + iθ, w = e^ζ. Disc: ζ = w = r·e^{iθ}.
    pub fn node_coordinates(&self, index: usize) -> Result<(Complex64, Complex64)> {
        if index >= self.node_count() {
            return Err(Error::invalid(format!(
                "node index {index} out of range (node count {})",
                self.node_count()
            )));
        }
        let (j, i) = (self.rad_of(index), self.ang_of(index));
        let theta = self.theta(i);
        match self.domain {
            DomainSpec::Annulus { .. } => {
                let zeta = Complex64::new(self.rad(j), theta);
                Ok((zeta, zeta.exp()))
            }
            DomainSpec::Disc { .. } => {
                let w = Complex64::from_polar(self.rad(j), theta);
                Ok((w, w))
            }
        }
    }

    /// Is this ring a boundary ring?
    pub fn is_boundary_ring(&self, i_rad: usize) -> bool {
        match self.domain {
            DomainSpec::Annulus { .. } => i_rad == 0 || i_rad == self.n_rad - 1,
            DomainSpec::Disc { .. } => i_rad == self.n_rad - 1,
        }
    }

    pub fn is_boundary_node(&self, index: usize) -> bool {
        self.is_boundary_ring(self.rad_of(index))
    }

    /// All boundary nodes with their circle, inner ring first (annulus only),
    /// each circle in angular order.
    pub fn boundary_nodes(&self) -> Vec<(usize, Circle)> {
        let mut out = Vec::with_capacity(2 * self.n_ang);
        if self.domain.is_annulus() {
            for i in 0..self.n_ang {
                out.push((self.index(0, i), Circle::Inner));
            }
        }
        for i in 0..self.n_ang {
            out.push((self.index(self.n_rad - 1, i), Circle::Outer));
        }
        out
    }

    /// Indices of all interior (non-boundary) nodes, ascending.
    pub fn interior_nodes(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&k| !self.is_boundary_node(k)).collect()
    }

    pub fn same_layout(&self, other: &Grid) -> bool {
        self == other
    }
}
