//! The dense Dirichlet matrix `L = S_α·I − [Q_α(x, y)]_{x≠y ∈ Ω}`, the
//! boundary term `|∂^αΩ| = Σ_{x∈Ω, y∉Ω} Q_α(x, y)`, quadratic forms and the
//! Poisson solve.

use std::collections::BTreeSet;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::kernel::{
    fourier_feasible, total_mass_estimate, total_mass_time_integral, AlphaParam, Estimate, KernelMethod, KernelTable,
    QuadratureSpec, SymbolCoefficients,
};
use crate::report::fmt_full;
use crate::special::gamma;

/// Assembled operator on a fixed domain.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    domain: Domain,
    alpha: AlphaParam,
    matrix: DMatrix<f64>,
    total_mass: Estimate,
    kernel: KernelTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMethod {
    Identity,
    TruncatedDirect,
}

/// `|∂^αΩ|` with the method used and an error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryMeasure {
    pub value: f64,
    pub method: BoundaryMethod,
    pub error_bound: f64,
}

/// Assembles the operator with kernel values from the Fourier route, or
/// from the time integral when the domain is too spread out for the
/// Fourier grid to fit [`FOURIER_GRID_LIMIT`](crate::kernel::FOURIER_GRID_LIMIT).
pub fn assemble(domain: &Domain, alpha: &AlphaParam, quad: &QuadratureSpec) -> Result<OperatorMatrix> {
    assemble_with(domain, alpha, quad, preferred_method(domain, quad))
}

/// The kernel route [`assemble`] uses for `domain`.
pub fn preferred_method(domain: &Domain, quad: &QuadratureSpec) -> KernelMethod {
    let magnitudes: BTreeSet<u64> = domain
        .difference_keys()
        .iter()
        .flat_map(|k| k.coords().iter().map(|c| c.unsigned_abs()).collect::<Vec<_>>())
        .collect();
    let max_offset = magnitudes.last().copied().unwrap_or(0) as usize;
    if fourier_feasible(domain.dim(), max_offset, magnitudes.len() + 1, quad) {
        KernelMethod::Fourier
    } else {
        KernelMethod::TimeIntegral
    }
}

/// Assembles the operator with kernel values from the chosen route.
pub fn assemble_with(
    domain: &Domain,
    alpha: &AlphaParam,
    quad: &QuadratureSpec,
    method: KernelMethod,
) -> Result<OperatorMatrix> {
    quad.validate()?;
    let dim = domain.dim();
    let keys = domain.difference_keys();
    let mut kernel = KernelTable::new(dim, *alpha);
    let offsets = keys.iter().map(|k| k.coords());
    let total_mass = match method {
        KernelMethod::Fourier => match kernel.fill_fourier(offsets, quad)? {
            Some(coeffs) => coeffs.total_mass(),
            None => total_mass_estimate(dim, alpha, quad)?,
        },
        KernelMethod::TimeIntegral => {
            kernel.fill_time_integral(offsets, quad)?;
            total_mass_time_integral(dim, alpha, quad)?
        }
    };

    let n = domain.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = domain.vertex(i);
            let mut diff = vec![0i64; dim];
            (i + 1..n)
                .map(|j| {
                    let y = domain.vertex(j);
                    for a in 0..dim {
                        diff[a] = x[a] - y[a];
                    }
                    kernel.get(&diff).expect("every difference was filled")
                })
                .collect()
        })
        .collect();

    let mut matrix = DMatrix::from_element(n, n, 0.0);
    for (i, row) in upper.iter().enumerate() {
        matrix[(i, i)] = total_mass.value;
        for (off, &q) in row.iter().enumerate() {
            let j = i + 1 + off;
            matrix[(i, j)] = -q;
            matrix[(j, i)] = -q;
        }
    }
    Ok(OperatorMatrix {
        domain: domain.clone(),
        alpha: *alpha,
        matrix,
        total_mass,
        kernel,
    })
}

/// `|∂^αΩ|` by the complement identity `|Ω|·S_α − Σ_{x≠y ∈ Ω} Q_α(x, y)`.
pub fn boundary_term(domain: &Domain, alpha: &AlphaParam, quad: &QuadratureSpec) -> Result<BoundaryMeasure> {
    Ok(assemble(domain, alpha, quad)?.boundary_term())
}

/// `|∂^αΩ|` by summing `Q_α(x, y)` over `y ∉ Ω` with `|y|_∞ ≤ shell`.
///
/// The error bound covers the omitted `|y|_∞ > shell` part using the decay
/// `Q_α(v) ≤ 2 c_{d,α} |v|^{−d−α}`, `c_{d,α} = 2^α Γ((d+α)/2) / (π^{d/2}|Γ(−α/2)|)`,
/// and a radial integral over `|v| ≥ shell + 1 − |x|_∞ − √d`.
pub fn boundary_term_truncated(
    domain: &Domain,
    alpha: &AlphaParam,
    quad: &QuadratureSpec,
    shell: usize,
) -> Result<BoundaryMeasure> {
    let dim = domain.dim();
    let reach = shell + domain.max_norm();
    let coeffs = SymbolCoefficients::compute(dim, alpha, reach, quad)?;
    let side = 2 * shell + 1;
    let count = side.pow(dim as u32);
    let partial: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .filter_map(|flat| {
            let mut rem = flat;
            let mut y = vec![0i64; dim];
            for a in (0..dim).rev() {
                y[a] = (rem % side) as i64 - shell as i64;
                rem /= side;
            }
            if domain.contains(&y) {
                return None;
            }
            let mut diff = vec![0i64; dim];
            let mut value = 0.0;
            let mut error = 0.0;
            for x in domain.vertices() {
                for a in 0..dim {
                    diff[a] = x[a] - y[a];
                }
                let q = coeffs.kernel(&diff).expect("offset inside computed range");
                value += q.value;
                error += q.error;
            }
            Some((value, error))
        })
        .collect();
    let value: f64 = partial.iter().map(|p| p.0).sum();
    let quad_error: f64 = partial.iter().map(|p| p.1).sum();

    let a = alpha.value();
    let d = dim as f64;
    let c = 2f64.powf(a) * gamma(0.5 * (d + a)) * alpha.inv_gamma() / std::f64::consts::PI.powf(0.5 * d);
    let ball = crate::bounds::unit_ball_volume(dim);
    let tail: f64 = domain
        .vertices()
        .iter()
        .map(|x| {
            let norm = x.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0) as f64;
            let rho = shell as f64 + 1.0 - norm - d.sqrt();
            if rho <= 0.0 {
                f64::INFINITY
            } else {
                2.0 * c * d * ball * rho.powf(-a) / a
            }
        })
        .sum();
    Ok(BoundaryMeasure {
        value,
        method: BoundaryMethod::TruncatedDirect,
        error_bound: tail + quad_error,
    })
}

impl OperatorMatrix {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn alpha(&self) -> &AlphaParam {
        &self.alpha
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// `S_α`, the diagonal entry.
    pub fn total_mass(&self) -> f64 {
        self.total_mass.value
    }

    pub fn kernel_table(&self) -> &KernelTable {
        &self.kernel
    }

    /// Row sums `Σ_{y∉Ω} Q_α(x_i, y) = S_α − Σ_{j≠i} Q_α(x_i, x_j)`.
    pub fn row_sums(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let off: f64 = (0..n).filter(|&j| j != i).map(|j| self.matrix[(i, j)]).sum();
                self.matrix[(i, i)] + off
            })
            .collect()
    }

    /// `|∂^αΩ|` from the assembled entries (complement identity).
    pub fn boundary_term(&self) -> BoundaryMeasure {
        let value = self.row_sums().iter().sum();
        let n = self.len() as f64;
        let kernel_error: f64 = {
            let mut err = 0.0;
            let d = self.domain.dim();
            let mut diff = vec![0i64; d];
            for (i, x) in self.domain.vertices().iter().enumerate() {
                for y in &self.domain.vertices()[i + 1..] {
                    for a in 0..d {
                        diff[a] = x[a] - y[a];
                    }
                    err += 2.0 * self.kernel.entry(&diff).map_or(0.0, |e| e.error);
                }
            }
            err
        };
        BoundaryMeasure {
            value,
            method: BoundaryMethod::Identity,
            error_bound: n * self.total_mass.error + kernel_error,
        }
    }

    fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.len() {
            return Err(Error::domain(format!(
                "{what} has length {len}, the domain has {} vertices",
                self.len()
            )));
        }
        Ok(())
    }

    /// `L u` for a real vector on Ω.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u.len(), "u")?;
        let v = &self.matrix * DVector::from_column_slice(u);
        Ok(v.as_slice().to_vec())
    }

    /// `L u` for a complex vector on Ω (real and imaginary parts separately).
    pub fn apply_complex(&self, u: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(u.len(), "u")?;
        let re = DVector::from_iterator(u.len(), u.iter().map(|c| c.re));
        let im = DVector::from_iterator(u.len(), u.iter().map(|c| c.im));
        let lr = &self.matrix * re;
        let li = &self.matrix * im;
        Ok(lr.iter().zip(li.iter()).map(|(&r, &i)| Complex64::new(r, i)).collect())
    }

    /// `⟨L u, v⟩ = Σ_x (L u)(x) · conj(v(x))` through the matrix.
    pub fn quadratic_form(&self, u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
        self.check_len(v.len(), "v")?;
        let lu = self.apply_complex(u)?;
        Ok(lu.iter().zip(v).map(|(a, b)| a * b.conj()).sum())
    }

    /// The same form through pair differences:
    /// `½ Σ_{x≠y} Q(x,y)(u(x)−u(y))·conj(v(x)−v(y)) + Σ_x r(x) u(x) conj(v(x))`
    /// with `r` the row sums.
    pub fn quadratic_form_double_sum(&self, u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
        self.check_len(u.len(), "u")?;
        self.check_len(v.len(), "v")?;
        let n = self.len();
        let mut pairs = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                let q = -self.matrix[(i, j)];
                pairs += q * (u[i] - u[j]) * (v[i] - v[j]).conj();
            }
        }
        let residual: Complex64 = self
            .row_sums()
            .iter()
            .zip(u.iter().zip(v))
            .map(|(&r, (a, b))| r * a * b.conj())
            .sum();
        Ok(pairs + residual)
    }

    /// Solves `L u = f` by Cholesky factorisation, checking the residual.
    pub fn solve_poisson(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_len(f.len(), "f")?;
        let rhs = DVector::from_column_slice(f);
        let f_norm = rhs.norm();
        if f_norm == 0.0 {
            return Ok(vec![0.0; f.len()]);
        }
        let chol = self.matrix.clone().cholesky().ok_or_else(|| Error::Numeric {
            what: "Cholesky factorisation of the Dirichlet matrix".into(),
            residual: f64::INFINITY,
        })?;
        let u = chol.solve(&rhs);
        let residual = (&self.matrix * &u - &rhs).norm();
        if !(residual <= 1e-10 * f_norm) {
            return Err(Error::Numeric {
                what: "Poisson solve".into(),
                residual: residual / f_norm,
            });
        }
        Ok(u.as_slice().to_vec())
    }

    /// Writes the matrix as CSV, row-major, 17 significant digits.
    pub fn write_matrix_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for i in 0..self.len() {
            let row: Vec<String> = (0..self.len()).map(|j| fmt_full(self.matrix[(i, j)])).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}
