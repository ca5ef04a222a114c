//! Full eigendecomposition of the Dirichlet matrix by cyclic Jacobi rotations,
//! and validation of the ground-state structure.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::report::{fmt_full, Check, VerificationReport};

/// Off-diagonal Frobenius norm at which the iteration stops, relative to ‖A‖_F.
pub const JACOBI_TOL: f64 = 1e-13;
/// Sweep cap.
pub const MAX_SWEEPS: usize = 100;

/// Ascending eigenvalues with orthonormal eigenvectors (as matrix columns).
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    /// `max_j ‖L φ_j − λ_j φ_j‖_2`.
    pub residual_norm: f64,
    pub sweeps: usize,
}

/// Eigenvalues and eigenvectors of the symmetric matrix of `op`.
pub fn eigen_decompose(op: &OperatorMatrix) -> Result<SpectrumResult> {
    let (values, vectors, sweeps) = jacobi_eigen(op.matrix())?;
    let a = op.matrix();
    let residual_norm = (0..values.len())
        .map(|j| {
            let v = vectors.column(j);
            (a * v - v * values[j]).norm()
        })
        .fold(0.0, f64::max);
    Ok(SpectrumResult {
        eigenvalues: values,
        eigenvectors: vectors,
        residual_norm,
        sweeps,
    })
}

/// Cyclic Jacobi on a symmetric matrix.
///
/// The first three sweeps only rotate entries above `0.2·off/n²`; later
/// sweeps rotate every nonzero entry and zero those negligible against both
/// diagonal entries. Eigenvalues are returned ascending with a stable sort
/// over the diagonal order; each eigenvector's first entry of magnitude at
/// least `1e-6·max|v|` is made positive.
pub fn jacobi_eigen(matrix: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>, usize)> {
    let n = matrix.nrows();
    if n != matrix.ncols() {
        return Err(Error::domain("matrix must be square"));
    }
    // Row-major working copy; rows of `vt` are the eigenvectors.
    let mut a: Vec<f64> = (0..n * n).map(|k| matrix[(k / n, k % n)]).collect();
    let mut vt = vec![0.0; n * n];
    for i in 0..n {
        vt[i * n + i] = 1.0;
    }
    let frob = matrix.norm();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= JACOBI_TOL * frob || off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence {
                what: format!("Jacobi eigensolver after {MAX_SWEEPS} sweeps"),
                achieved: off / frob,
            });
        }
        sweeps += 1;
        let threshold = if sweeps <= 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                if apq.abs() <= threshold || apq == 0.0 {
                    continue;
                }
                let h = aqq - app;
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = akp - s * (akq + tau * akp);
                    let new_kq = akq + s * (akp - tau * akq);
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                let (row_p, row_q) = if p < q {
                    let (lo, hi) = vt.split_at_mut(q * n);
                    (&mut lo[p * n..p * n + n], &mut hi[..n])
                } else {
                    unreachable!("p < q by construction")
                };
                for k in 0..n {
                    let vp = row_p[k];
                    let vq = row_q[k];
                    row_p[k] = vp - s * (vq + tau * vp);
                    row_q[k] = vq + s * (vp - tau * vq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let row = &vt[i * n..(i + 1) * n];
        let max = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lead = row.iter().find(|v| v.abs() >= 1e-6 * max).copied().unwrap_or(1.0);
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        for k in 0..n {
            vectors[(k, col)] = sign * row[k];
        }
    }
    Ok((values, vectors, sweeps))
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `φ_j` (zero-based `j`) as a plain vector.
    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j).iter().copied().collect()
    }

    /// `max_{i,j} |⟨φ_i, φ_j⟩ − δ_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.eigenvectors.transpose() * &self.eigenvectors;
        let n = self.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// Per-eigenpair residual `‖L φ_j − λ_j φ_j‖_2`.
    pub fn residuals(&self, op: &OperatorMatrix) -> Vec<f64> {
        (0..self.len())
            .map(|j| {
                let v: DVector<f64> = self.eigenvectors.column(j).into();
                (op.matrix() * &v - &v * self.eigenvalues[j]).norm()
            })
            .collect()
    }

    /// CSV with columns `k,lambda_k`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,lambda_k")?;
        for (k, l) in self.eigenvalues.iter().enumerate() {
            writeln!(out, "{},{}", k + 1, fmt_full(*l))?;
        }
        Ok(())
    }

    /// Eigenvector matrix CSV: row `i` holds the vertex-`i` entries of
    /// `φ_1 … φ_n`.
    pub fn write_eigenvectors_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for i in 0..self.len() {
            let row: Vec<String> = (0..self.len()).map(|j| fmt_full(self.eigenvectors[(i, j)])).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Options for [`validate_spectrum`].
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SpectrumValidation {
    /// Skip the simplicity and positivity checks on the ground state.
    pub skip_ground_state: bool,
}

/// Checks `λ_1 > 0`, `λ_2 − λ_1 > 1e−9·λ_1`, and strict positivity of `φ_1`
/// after making its entry at the first (lexicographically smallest) vertex
/// positive.
pub fn validate_spectrum(spec: &SpectrumResult, options: SpectrumValidation) -> VerificationReport {
    let mut report = VerificationReport::new();
    let l1 = spec.eigenvalues.first().copied().unwrap_or(f64::NAN);
    report.push(Check::new("lambda_1_positive", l1 > 0.0, l1, 0.0));
    if options.skip_ground_state {
        return report;
    }
    if spec.len() >= 2 {
        let gap = spec.eigenvalues[1] - l1;
        let tol = 1e-9 * l1;
        report.push(Check::new("ground_state_simple", gap > tol, gap, tol));
    }
    let mut phi = spec.eigenvector(0);
    if phi[0] < 0.0 {
        phi.iter_mut().for_each(|v| *v = -*v);
    }
    let max = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = phi.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * max;
    report.push(Check::new("ground_state_positive", min > tol, min, tol));
    report
}
