//! Chart-level differential operators: ∂_ζ, ∂_ζ̄, the mixed second derivative,
//! the Chern connection A = P⁻¹∂_ζP, the curvature residual, and the
//! holomorphy defect of the connection.
//!
//! Stencils are second-order: centered in the interior and in θ (periodic),
//! one-sided at the radial boundary rings. On the disc the first radial
//! derivative at the innermost ring reaches across the origin to (r₀, θ+π).

use num_complex::Complex64;

use crate::error::Result;
use crate::field::{HermitianField, MatrixField, MetricField};
use crate::grid::{Chart, Grid};
use crate::linalg::{self, CMat};

/// The dζ-coefficient A = P⁻¹∂_ζP of the Chern connection.
#[derive(Debug, Clone)]
pub struct ConnectionField(MatrixField);

impl ConnectionField {
    pub fn as_field(&self) -> &MatrixField {
        &self.0
    }

    pub fn into_field(self) -> MatrixField {
        self.0
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// First radial derivative: ∂_σ on the annulus, ∂_r on the disc.
pub(crate) fn d_rad1(f: &MatrixField) -> MatrixField {
    let grid = f.grid().clone();
    let d = grid.d_rad();
    let n_rad = grid.n_rad();
    let n_ang = grid.n_ang();
    let half = n_ang / 2;
    let across_origin = grid.chart() == Chart::PolarHalfOffset;
    f.map(|k, _| {
        let (j, i) = (grid.rad_of(k), grid.ang_of(k));
        let at = |jj: usize, ii: usize| f.value(grid.index(jj, ii));
        if j == 0 {
            if across_origin {
                // Ladder continues through the origin: node at (r₀, θ+π).
                (at(1, i) - at(0, (i + half) % n_ang)).scale(1.0 / (2.0 * d))
            } else {
                (at(1, i).scale(4.0) - at(0, i).scale(3.0) - at(2, i)).scale(1.0 / (2.0 * d))
            }
        } else if j == n_rad - 1 {
            (at(j, i).scale(3.0) - at(j - 1, i).scale(4.0) + at(j - 2, i)).scale(1.0 / (2.0 * d))
        } else {
            (at(j + 1, i) - at(j - 1, i)).scale(1.0 / (2.0 * d))
        }
    })
}

/// First angular derivative ∂_θ (periodic centered).
pub(crate) fn d_ang1(f: &MatrixField) -> MatrixField {
    let grid = f.grid().clone();
    let d = grid.d_theta();
    let n_ang = grid.n_ang();
    f.map(|k, _| {
        let (j, i) = (grid.rad_of(k), grid.ang_of(k));
        let ip = (i + 1) % n_ang;
        let im = (i + n_ang - 1) % n_ang;
        (f.value(grid.index(j, ip)) - f.value(grid.index(j, im))).scale(1.0 / (2.0 * d))
    })
}

/// Second radial derivative, one-sided 4-point at the radial boundary rings.
pub(crate) fn d_rad2(f: &MatrixField) -> MatrixField {
    let grid = f.grid().clone();
    let d2 = grid.d_rad() * grid.d_rad();
    let n_rad = grid.n_rad();
    let n_ang = grid.n_ang();
    let half = n_ang / 2;
    let across_origin = grid.chart() == Chart::PolarHalfOffset;
    f.map(|k, _| {
        let (j, i) = (grid.rad_of(k), grid.ang_of(k));
        let at = |jj: usize, ii: usize| f.value(grid.index(jj, ii));
        if j == 0 {
            if across_origin {
                (at(1, i) - at(0, i).scale(2.0) + at(0, (i + half) % n_ang)).scale(1.0 / d2)
            } else {
                (at(0, i).scale(2.0) - at(1, i).scale(5.0) + at(2, i).scale(4.0) - at(3, i))
                    .scale(1.0 / d2)
            }
        } else if j == n_rad - 1 {
            (at(j, i).scale(2.0) - at(j - 1, i).scale(5.0) + at(j - 2, i).scale(4.0)
                - at(j - 3, i))
            .scale(1.0 / d2)
        } else {
            (at(j + 1, i) - at(j, i).scale(2.0) + at(j - 1, i)).scale(1.0 / d2)
        }
    })
}

/// Second angular derivative ∂_θθ (periodic centered).
pub(crate) fn d_ang2(f: &MatrixField) -> MatrixField {
    let grid = f.grid().clone();
    let d2 = grid.d_theta() * grid.d_theta();
    let n_ang = grid.n_ang();
    f.map(|k, m| {
        let (j, i) = (grid.rad_of(k), grid.ang_of(k));
        let ip = (i + 1) % n_ang;
        let im = (i + n_ang - 1) % n_ang;
        (f.value(grid.index(j, ip)) - m.scale(2.0) + f.value(grid.index(j, im))).scale(1.0 / d2)
    })
}

/// ∂_ζ. Annulus: ½(∂_σ − i∂_θ). Disc: ½e^{−iθ}(∂_r − (i/r)∂_θ).
pub fn d_zeta(f: &MatrixField) -> MatrixField {
    let dr = d_rad1(f);
    let dt = d_ang1(f);
    combine_first(f.grid(), &dr, &dt, false)
}

/// ∂_ζ̄, the conjugate-coefficient partner of [`d_zeta`].
pub fn d_zetabar(f: &MatrixField) -> MatrixField {
    let dr = d_rad1(f);
    let dt = d_ang1(f);
    combine_first(f.grid(), &dr, &dt, true)
}

fn combine_first(grid: &Grid, dr: &MatrixField, dt: &MatrixField, bar: bool) -> MatrixField {
    let sign = if bar { 1.0 } else { -1.0 };
    match grid.chart() {
        Chart::LogPolar => dr
            .zip(dt, |a, b| (a + b * (I * sign)).scale(0.5))
            .expect("derivatives share the grid"),
        Chart::PolarHalfOffset => {
            let g = grid.clone();
            dr.map(|k, a| {
                let (j, i) = (g.rad_of(k), g.ang_of(k));
                let r = g.rad(j);
                let theta = g.theta(i);
                let phase = Complex64::from_polar(0.5, sign * theta);
                (a + dt.value(k) * (I * (sign / r))).map(|x| phase * x)
            })
        }
    }
}

/// Mixed second derivative ∂_ζ∂_ζ̄. Annulus: ¼(∂_σσ + ∂_θθ). Disc:
/// ¼(∂_rr + (1/r)∂_r + (1/r²)∂_θθ), the flat Laplacian quarter.
pub fn d_mixed(f: &MatrixField) -> MatrixField {
    match f.grid().chart() {
        Chart::LogPolar => {
            let drr = d_rad2(f);
            let dtt = d_ang2(f);
            drr.zip(&dtt, |a, b| (a + b).scale(0.25)).expect("derivatives share the grid")
        }
        Chart::PolarHalfOffset => {
            let drr = d_rad2(f);
            let dr = d_rad1(f);
            let dtt = d_ang2(f);
            let g = f.grid().clone();
            drr.map(|k, a| {
                let r = g.rad(g.rad_of(k));
                (a + dr.value(k).scale(1.0 / r) + dtt.value(k).scale(1.0 / (r * r))).scale(0.25)
            })
        }
    }
}

/// Chern connection A = P⁻¹∂_ζP.
pub fn connection(p: &MetricField) -> Result<ConnectionField> {
    let dz = d_zeta(p.as_field());
    let mut values = Vec::with_capacity(dz.values().len());
    for (k, m) in dz.values().iter().enumerate() {
        let inv = linalg::hermitize(&linalg::inverse(p.value(k))?);
        values.push(&inv * m);
    }
    Ok(ConnectionField(MatrixField::new(p.grid().clone(), p.dim(), values)?))
}

/// The un-normalized Hermitian curvature residual 𝓡(P) = P_ζζ̄ − P_ζ̄P⁻¹P_ζ,
/// without symmetrization (exactly Hermitian up to floating-point noise).
pub fn curvature_residual_raw(p: &MetricField) -> Result<MatrixField> {
    let mixed = d_mixed(p.as_field());
    let pz = d_zeta(p.as_field());
    let pzb = d_zetabar(p.as_field());
    let mut values = Vec::with_capacity(mixed.values().len());
    for k in 0..mixed.values().len() {
        let inv = linalg::hermitize(&linalg::inverse(p.value(k))?);
        values.push(mixed.value(k) - pzb.value(k) * inv * pz.value(k));
    }
    MatrixField::new(p.grid().clone(), p.dim(), values)
}

/// Symmetrized curvature residual; 𝓡 ≡ 0 (to truncation) iff the metric is
/// flat in this chart.
pub fn curvature_residual(p: &MetricField) -> Result<HermitianField> {
    Ok(HermitianField::from_hermitized(&curvature_residual_raw(p)?))
}

/// sup‖∂_ζ̄A‖: zero (to truncation) iff the connection is holomorphic, i.e.
/// iff the metric is flat.
pub fn holomorphy_defect(a: &ConnectionField) -> f64 {
    d_zetabar(a.as_field()).sup_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::MatrixField;
    use crate::grid::{build_grid, DomainSpec, Grid};

    fn scalar(v: Complex64) -> CMat {
        CMat::from_row_slice(1, 1, &[v])
    }

    fn annulus_grid(n_rad: usize, n_ang: usize) -> Grid {
        build_grid(DomainSpec::annulus(0.5, 1.0).unwrap(), n_rad, n_ang).unwrap()
    }

    /// sup error away from the θ seam (for test fields that are not
    /// θ-periodic, stencils are only meaningful on the periodic cover within
    /// one stencil).
    fn sup_err_off_seam(f: &MatrixField, expect: impl Fn(Complex64) -> CMat) -> f64 {
        let g = f.grid().clone();
        let mut worst = 0.0f64;
        for k in 0..g.node_count() {
            let i = g.ang_of(k);
            if i < 2 || i + 2 >= g.n_ang() {
                continue;
            }
            let (zeta, _) = g.node_coordinates(k).unwrap();
            worst = worst.max(linalg::op_norm(&(f.value(k) - expect(zeta))));
        }
        worst
    }

    #[test]
    fn d_zeta_of_constant_is_exactly_zero() {
        let g = annulus_grid(8, 8);
        let c = MatrixField::constant(g, linalg::identity(2).scale(3.25)).unwrap();
        assert_eq!(d_zeta(&c).sup_norm(), 0.0);
        assert_eq!(d_mixed(&c).sup_norm(), 0.0);
    }

    #[test]
    fn d_zeta_of_exponential_is_second_order() {
        // f = e^{ζ+ζ̄}·I = e^{2σ}·I (θ-independent, so fully periodic).
        let make = |g: Grid| {
            MatrixField::from_fn(g, 1, |zeta, _| scalar((zeta + zeta.conj()).exp())).unwrap()
        };
        let err = |g: Grid| {
            let f = make(g);
            let df = d_zeta(&f);
            df.zip(&f, |a, b| a - b).unwrap().sup_norm()
        };
        let e1 = err(annulus_grid(16, 8));
        let e2 = err(annulus_grid(32, 8));
        assert!(e1 < 2e-3, "coarse error {e1}");
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn d_zetabar_kills_holomorphic_fields() {
        let g = annulus_grid(12, 16);
        let f = MatrixField::from_fn(g, 1, |zeta, _| scalar(zeta)).unwrap();
        let defect = sup_err_off_seam(&d_zetabar(&f), |_| linalg::zeros(1));
        assert!(defect < 1e-12, "defect {defect}");
    }

    #[test]
    fn connection_of_constant_metric_vanishes() {
        let g = annulus_grid(8, 8);
        let c = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.3, 0.1),
                Complex64::new(0.3, -0.1),
                Complex64::new(1.5, 0.0),
            ],
        );
        let p = MetricField::new(MatrixField::constant(g, c).unwrap()).unwrap();
        assert_eq!(connection(&p).unwrap().as_field().sup_norm(), 0.0);
    }

    #[test]
    fn connection_of_commuting_exponential_is_the_exponent() {
        // P = exp(a(ζ+ζ̄)) with a = diag(0.25, −0.1): A ≈ a to O(h²).
        let g = annulus_grid(32, 8);
        let a_diag = [0.25, -0.1];
        let p = MetricField::new(
            MatrixField::from_fn(g, 2, |zeta, _| {
                let s = zeta.re * 2.0;
                CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                    2,
                    a_diag.iter().map(|&a| Complex64::new((a * s).exp(), 0.0)),
                ))
            })
            .unwrap(),
        )
        .unwrap();
        let a = connection(&p).unwrap();
        let expect = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            2,
            a_diag.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        let defect = a
            .as_field()
            .map(|_, m| m - &expect)
            .sup_norm();
        assert!(defect < 5e-4, "defect {defect}");
        // Flatness: the connection of a flat metric is holomorphic.
        assert!(holomorphy_defect(&a) < 5e-4);
    }

    #[test]
    fn curvature_of_identity_vanishes_exactly() {
        let g = annulus_grid(8, 8);
        let p = MetricField::identity(g, 2);
        assert_eq!(curvature_residual(&p).unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn curvature_of_harmonic_scalar_exponential_is_second_order() {
        // log P = ζ+ζ̄ is harmonic → flat; residual is pure truncation.
        let make = |g: Grid| {
            MetricField::new(
                MatrixField::from_fn(g, 1, |zeta, _| scalar((zeta + zeta.conj()).exp()))
                    .unwrap(),
            )
            .unwrap()
        };
        let e1 = curvature_residual(&make(annulus_grid(16, 8))).unwrap().sup_norm();
        let e2 = curvature_residual(&make(annulus_grid(32, 8))).unwrap().sup_norm();
        assert!(e1 < 2e-3, "coarse residual {e1}");
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn curvature_of_gauss_weight_matches_symbolic_oracle() {
        // Scalar P = e^{ζζ̄}: for P = e^u, 𝓡 = P·u_ζζ̄ and u = ζζ̄ gives
        // u_ζζ̄ = 1, so 𝓡(ζ) = e^{|ζ|²}. Not θ-periodic: check off the seam.
        let g = annulus_grid(48, 96);
        let p = MetricField::new(
            MatrixField::from_fn(g, 1, |zeta, _| scalar((zeta * zeta.conj()).exp())).unwrap(),
        )
        .unwrap();
        let r = curvature_residual(&p).unwrap();
        let defect = sup_err_off_seam(r.as_field(), |zeta| {
            scalar((zeta * zeta.conj()).exp())
        });
        assert!(defect < 2e-2, "defect {defect}");

        // Holomorphy defect of the connection ≈ 1 (A = ζ̄ in the scalar case).
        let a = connection(&p).unwrap();
        let dz = d_zetabar(a.as_field());
        let defect = sup_err_off_seam(&dz, |_| scalar(Complex64::new(1.0, 0.0)));
        assert!(defect < 2e-2, "defect {defect}");
    }

    #[test]
    fn residual_is_hermitian_before_symmetrization() {
        let g = annulus_grid(16, 16);
        // A flat synthetic-style metric with genuinely complex entries.
        let n = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let p = MetricField::new(
            MatrixField::from_fn(g, 2, |zeta, w| {
                let gmat = linalg::identity(2) + n.scale(0.3).map(|x| x * w);
                let e = Complex64::new((0.3 * (zeta + zeta.conj()).re).exp(), 0.0);
                gmat.adjoint() * gmat.map(|x| x * e)
            })
            .unwrap(),
        )
        .unwrap();
        let raw = curvature_residual_raw(&p).unwrap();
        let sup = raw.sup_norm();
        let herm_defect = raw
            .values()
            .iter()
            .map(|m| linalg::op_norm(&(m - m.adjoint())))
            .fold(0.0, f64::max);
        assert!(herm_defect <= 1e-12 * sup.max(1e-30), "defect {herm_defect} vs sup {sup}");
    }

    #[test]
    fn curvature_is_gauge_covariant_under_constant_conjugation() {
        let g = annulus_grid(12, 12);
        let p = MetricField::new(
            MatrixField::from_fn(g.clone(), 2, |zeta, _| {
                let s = (0.4 * zeta.re).exp();
                CMat::from_row_slice(
                    2,
                    2,
                    &[
                        Complex64::new(1.5 * s, 0.0),
                        Complex64::new(0.2 * s, 0.1),
                        Complex64::new(0.2 * s, -0.1),
                        Complex64::new(1.0, 0.0),
                    ],
                )
            })
            .unwrap(),
        )
        .unwrap();
        let t = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.4, -0.3),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.8, 0.1),
            ],
        );
        let pt = MetricField::new(p.as_field().map(|_, m| t.adjoint() * m * &t)).unwrap();
        let r = curvature_residual(&p).unwrap();
        let rt = curvature_residual(&pt).unwrap();
        let defect = rt
            .as_field()
            .zip(&r.as_field().map(|_, m| t.adjoint() * m * &t), |a, b| a - b)
            .unwrap()
            .sup_norm();
        assert!(defect <= 1e-12 * r.sup_norm().max(1.0), "defect {defect}");
    }

    #[test]
    fn disc_mixed_derivative_of_smooth_field_is_second_order() {
        // f = e^{w+w̄}: ∂_w∂_w̄ f = f, single-valued and smooth through 0.
        let make = |n_rad: usize, n_ang: usize| {
            let g = build_grid(DomainSpec::disc(1.0).unwrap(), n_rad, n_ang).unwrap();
            MatrixField::from_fn(g, 1, |_, w| scalar((w + w.conj()).exp())).unwrap()
        };
        let err = |f: &MatrixField| {
            d_mixed(f).zip(f, |a, b| a - b).unwrap().sup_norm()
        };
        let e1 = err(&make(16, 32));
        let e2 = err(&make(32, 64));
        assert!(e1 < 0.05, "coarse error {e1}");
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }
}
