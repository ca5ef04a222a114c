//! Fourier-side checks of the operator: the exponential pairing
//! `⟨u, h_z⟩ = Σ_x u(x) e^{−i⟨x,z⟩}`, the Plancherel identity, the symbol form
//! `⟨u, L u⟩ = (2π)^{−d} ∫ Φ^{α/2} |⟨u, h_z⟩|²`, and the bound
//! `|⟨h_z, L h_z⟩| ≤ Φ(z)^{α/2}|Ω| + |∂^αΩ|`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::kernel::{phi_symbol, symbol_1d, QuadratureSpec, FOURIER_GRID_LIMIT};
use crate::operator::{BoundaryMeasure, OperatorMatrix};

const LEVELS: usize = 4;

/// A cube point with the pairing of a vector against `h_z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierProbe {
    pub z: Vec<f64>,
    pub pairing: Complex64,
}

impl FourierProbe {
    pub fn new(domain: &Domain, u: &[Complex64], z: &[f64]) -> Result<Self> {
        Ok(Self {
            z: z.to_vec(),
            pairing: pairing(domain, u, z)?,
        })
    }
}

fn check_vector(domain: &Domain, len: usize) -> Result<()> {
    if len != domain.len() {
        return Err(Error::domain(format!(
            "vector has length {len}, the domain has {} vertices",
            domain.len()
        )));
    }
    Ok(())
}

/// `Σ_{x∈Ω} u(x) e^{−i⟨x,z⟩}`.
pub fn pairing(domain: &Domain, u: &[Complex64], z: &[f64]) -> Result<Complex64> {
    check_vector(domain, u.len())?;
    if z.len() != domain.dim() {
        return Err(Error::domain("z and the domain have different dimensions"));
    }
    phi_symbol(z)?;
    Ok(domain
        .vertices()
        .iter()
        .zip(u)
        .map(|(x, &ux)| {
            let phase: f64 = x.iter().zip(z).map(|(&c, &zc)| c as f64 * zc).sum();
            ux * Complex64::from_polar(1.0, -phase)
        })
        .sum())
}

/// Evaluates `|⟨u, h_z⟩|²`-weighted sums on the uniform grid `z_j = 2πj/n`
/// in every axis; `weight` receives the per-axis grid indices.
struct GridPairing<'a> {
    u: &'a [Complex64],
    n: usize,
    dim: usize,
    /// `slots[v][a]`: position of vertex `v`'s coordinate `a` among the
    /// distinct values of that coordinate.
    slots: Vec<Vec<usize>>,
    /// `phases[a][j][s] = e^{−i c z_j}` for the `s`-th distinct value `c`.
    phases: Vec<Vec<Vec<Complex64>>>,
}

impl<'a> GridPairing<'a> {
    fn new(domain: &'a Domain, u: &'a [Complex64], n: usize) -> Result<Self> {
        let dim = domain.dim();
        let points = (n as f64).powi(dim as i32);
        if points > FOURIER_GRID_LIMIT as f64 {
            return Err(Error::domain(format!(
                "a grid of {n}^{dim} points exceeds the limit of {FOURIER_GRID_LIMIT}"
            )));
        }
        let h = 2.0 * PI / n as f64;
        let distinct: Vec<Vec<i64>> = (0..dim)
            .map(|a| {
                let set: BTreeSet<i64> = domain.vertices().iter().map(|x| x[a]).collect();
                set.into_iter().collect()
            })
            .collect();
        let slots = domain
            .vertices()
            .iter()
            .map(|x| (0..dim).map(|a| distinct[a].binary_search(&x[a]).expect("value collected")).collect())
            .collect();
        let phases = distinct
            .iter()
            .map(|values| {
                (0..n)
                    .map(|j| {
                        values
                            .iter()
                            .map(|&c| Complex64::from_polar(1.0, -((c * j as i64).rem_euclid(n as i64) as f64) * h))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            u,
            n,
            dim,
            slots,
            phases,
        })
    }

    fn squared(&self, idx: &[usize]) -> f64 {
        let mut p = Complex64::new(0.0, 0.0);
        for (slot, &ux) in self.slots.iter().zip(self.u) {
            let mut term = ux;
            for a in 0..idx.len() {
                term *= self.phases[a][idx[a]][slot[a]];
            }
            p += term;
        }
        p.norm_sqr()
    }

    /// Grid mean of `w(idx) · |⟨u, h_z⟩|²`; parallel over the first axis.
    fn mean<W: Fn(&[usize]) -> f64 + Sync>(&self, w: W) -> f64 {
        let d = self.dim;
        let n = self.n;
        let inner = n.pow(d as u32 - 1);
        let slabs: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|j0| {
                let mut idx = vec![0usize; d];
                idx[0] = j0;
                let mut acc = 0.0;
                for flat in 0..inner {
                    let mut rest = flat;
                    for a in (1..d).rev() {
                        idx[a] = rest % n;
                        rest /= n;
                    }
                    acc += w(&idx) * self.squared(&idx);
                }
                acc
            })
            .collect();
        slabs.iter().sum::<f64>() / (n.pow(d as u32)) as f64
    }
}

fn norm_sqr(u: &[Complex64]) -> f64 {
    u.iter().map(|c| c.norm_sqr()).sum()
}

/// `|(2π)^{−d}∫|⟨u,h_z⟩|² − ⟨u,u⟩| / ⟨u,u⟩`, with the integral taken on a
/// grid of `2·extent + 3` points per axis, which integrates the
/// trigonometric polynomial `|⟨u,h_z⟩|²` exactly.
pub fn plancherel_check(domain: &Domain, u: &[Complex64]) -> Result<f64> {
    check_vector(domain, u.len())?;
    let uu = norm_sqr(u);
    if uu == 0.0 {
        return Err(Error::domain("plancherel_check needs a nonzero vector"));
    }
    let n = 2 * domain.extent() + 3;
    let grid = GridPairing::new(domain, u, n)?.mean(|_| 1.0);
    Ok((grid - uu).abs() / uu)
}

/// Outcome of [`form_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormCheck {
    /// `⟨L u, u⟩` through the matrix.
    pub form: f64,
    /// Extrapolated `(2π)^{−d}∫Φ^{α/2}|⟨u,h_z⟩|²`.
    pub quadrature: f64,
    pub relative_error: f64,
    /// Grid points per axis at each refinement level.
    pub grids: Vec<usize>,
    /// Relative error of the plain trapezoid value at each level.
    pub level_errors: Vec<f64>,
}

/// Relative level error below which trapezoid values are at rounding level.
pub const FORM_ROUNDING_FLOOR: f64 = 1e-13;

impl FormCheck {
    /// Errors shrink with every refinement until they reach rounding level.
    pub fn refines(&self) -> bool {
        self.level_errors.windows(2).all(|w| w[1] < w[0] || w[1] <= FORM_ROUNDING_FLOOR)
    }
}

/// Compares the matrix form with the symbol integral, evaluated by the
/// periodic trapezoid rule on the same nested grids as the kernel
/// coefficients (coarsest grid raised with the domain extent) and
/// Richardson extrapolation in `h^{d+α+2j}`.
pub fn form_check(op: &OperatorMatrix, u: &[Complex64], quad: &QuadratureSpec) -> Result<FormCheck> {
    let domain = op.domain();
    check_vector(domain, u.len())?;
    if norm_sqr(u) == 0.0 {
        return Err(Error::domain("form_check needs a nonzero vector"));
    }
    let form = op.quadratic_form(u, u)?.re;
    let dim = domain.dim();
    let a = op.alpha().value();
    let coarsest = crate::kernel::fourier_grid(dim, domain.extent(), quad.fourier_grid_per_dim);
    let grids: Vec<usize> = (0..LEVELS).map(|l| coarsest << l).collect();
    let levels: Vec<f64> = grids
        .iter()
        .map(|&n| {
            let h = 2.0 * PI / n as f64;
            let sym: Vec<f64> = (0..n).map(|j| symbol_1d(j as f64 * h)).collect();
            Ok(GridPairing::new(domain, u, n)?.mean(|idx| idx.iter().map(|&j| sym[j]).sum::<f64>().powf(0.5 * a)))
        })
        .collect::<Result<_>>()?;
    let exponents: Vec<f64> = (0..LEVELS - 1).map(|j| dim as f64 + a + 2.0 * j as f64).collect();
    let (quadrature, _) = crate::kernel::richardson_extrapolate(&levels, &exponents);
    let scale = form.abs().max(f64::MIN_POSITIVE);
    Ok(FormCheck {
        form,
        quadrature,
        relative_error: (quadrature - form).abs() / scale,
        grids,
        level_errors: levels.iter().map(|l| (l - form).abs() / scale).collect(),
    })
}

/// Both sides of `|⟨h_z, L h_z⟩| ≤ Φ(z)^{α/2}|Ω| + |∂^αΩ|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HzCheck {
    pub z: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
}

/// Evaluates the `h_z` bound at `z` with the assembled matrix.
pub fn hz_bound_check(op: &OperatorMatrix, boundary: &BoundaryMeasure, z: &[f64]) -> Result<HzCheck> {
    let domain = op.domain();
    if z.len() != domain.dim() {
        return Err(Error::domain("z and the domain have different dimensions"));
    }
    let phi = phi_symbol(z)?;
    let h: Vec<Complex64> = domain
        .vertices()
        .iter()
        .map(|x| {
            let phase: f64 = x.iter().zip(z).map(|(&c, &zc)| c as f64 * zc).sum();
            Complex64::from_polar(1.0, phase)
        })
        .collect();
    let lhs = op.quadratic_form(&h, &h)?.norm();
    let rhs = phi.powf(0.5 * op.alpha().value()) * domain.len() as f64 + boundary.value;
    Ok(HzCheck {
        z: z.to_vec(),
        lhs,
        rhs,
        slack: rhs - lhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{make_box, make_l_shape};
    use crate::kernel::AlphaParam;
    use crate::operator::assemble;
    use crate::spectrum::eigen_decompose;

    fn c(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn path(n: i64) -> Domain {
        Domain::new(1, (0..n).map(|i| vec![i]).collect()).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let d = make_box(2, &[3, 2]).unwrap();
        let z = [0.3, -1.1];
        let mut delta = vec![Complex64::new(0.0, 0.0); d.len()];
        let x0 = d.index_of(&[2, 1]).unwrap();
        delta[x0] = Complex64::new(1.0, 0.0);
        let p = pairing(&d, &delta, &z).unwrap();
        assert!((p - Complex64::from_polar(1.0, -(2.0 * 0.3 - 1.1))).norm() < 1e-15);

        let u: Vec<Complex64> = (0..d.len()).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let sum: Complex64 = u.iter().sum();
        assert!((pairing(&d, &u, &[0.0, 0.0]).unwrap() - sum).norm() < 1e-14);
        // pairing(u, −z) = conj(pairing(conj u, z))
        let uc: Vec<Complex64> = u.iter().map(|v| v.conj()).collect();
        let lhs = pairing(&d, &u, &[-0.3, 1.1]).unwrap();
        let rhs = pairing(&d, &uc, &z).unwrap().conj();
        assert!((lhs - rhs).norm() < 1e-13);
        assert!(pairing(&d, &u, &[4.0, 0.0]).is_err());
    }

    #[test]
    fn plancherel_is_exact() {
        let d = make_box(2, &[8, 8]).unwrap();
        let u: Vec<Complex64> = (0..64).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64).cos())).collect();
        assert!(plancherel_check(&d, &u).unwrap() < 1e-12);
        let mut delta = vec![Complex64::new(0.0, 0.0); 64];
        delta[5] = Complex64::new(1.0, 0.0);
        assert!(plancherel_check(&d, &delta).unwrap() < 1e-15);
    }

    #[test]
    fn form_matches_ground_state() {
        let op = assemble(&path(10), &AlphaParam::new(1.0).unwrap(), &QuadratureSpec::for_dim(1)).unwrap();
        let s = eigen_decompose(&op).unwrap();
        let f = form_check(&op, &c(&s.eigenvector(0)), &QuadratureSpec::for_dim(1)).unwrap();
        assert!((f.form - s.eigenvalues[0]).abs() < 1e-12);
        assert!(f.relative_error < 1e-6, "{f:?}");
        assert!(f.level_errors.windows(2).all(|w| w[1] < w[0]), "{f:?}");
    }

    #[test]
    fn form_constant_two_points() {
        let op = assemble(&path(2), &AlphaParam::new(1.0).unwrap(), &QuadratureSpec::for_dim(1)).unwrap();
        let f = form_check(&op, &c(&[1.0, 1.0]), &QuadratureSpec::for_dim(1)).unwrap();
        assert!((f.quadrature - 16.0 / (3.0 * PI)).abs() < 1e-6);
    }

    #[test]
    fn form_complex_l_shape() {
        let d = make_l_shape(2).unwrap();
        let q = QuadratureSpec::for_dim(2);
        let op = assemble(&d, &AlphaParam::new(0.5).unwrap(), &q).unwrap();
        let u: Vec<Complex64> = (0..d.len())
            .map(|i| Complex64::new((i as f64 * 1.3).cos(), (i as f64 * 0.4).sin()))
            .collect();
        let f = form_check(&op, &u, &q).unwrap();
        assert!(f.relative_error < 1e-6, "{f:?}");
    }

    #[test]
    fn hz_bound_at_origin_is_tight() {
        let op = assemble(&path(5), &AlphaParam::new(1.0).unwrap(), &QuadratureSpec::for_dim(1)).unwrap();
        let b = op.boundary_term();
        let at0 = hz_bound_check(&op, &b, &[0.0]).unwrap();
        assert!(at0.slack.abs() < 1e-12 * at0.rhs);
        let at_pi = hz_bound_check(&op, &b, &[PI]).unwrap();
        assert!(at_pi.slack >= 0.0);
    }
}
