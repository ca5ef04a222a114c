use crate::error::{Error, Result};
use crate::special::scaled_bessel_i;

/// Heat kernel of ℤ between points `m` apart: `e^{-2t} I_{|m|}(2t)`.
pub fn heat_kernel_1d(t: f64, m: i64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("heat kernel time must be >= 0, got {t}")));
    }
    Ok(scaled_bessel_i(m.unsigned_abs() as usize, 2.0 * t))
}

/// Heat kernel of ℤ^d as the product of one-dimensional kernels.
pub fn heat_kernel(t: f64, x: &[i64], y: &[i64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "dimension mismatch: x has {} coordinates, y has {}",
            x.len(),
            y.len()
        )));
    }
    let mut p = 1.0;
    for (xi, yi) in x.iter().zip(y) {
        p *= heat_kernel_1d(t, xi - yi)?;
    }
    Ok(p)
}

/// Smallest `M` with `Σ_{|y|_∞ > M} p(t, x, y) ≤ tol` in dimension `dim`,
/// from the Chernoff bound `P(|X_t| ≥ M) ≤ 2 exp(2t(cosh θ − 1) − θM)`
/// at `θ = asinh(M/(2t))` for each coordinate walk.
pub fn mass_cutoff(t: f64, dim: usize, tol: f64) -> usize {
    let mut m = 1usize;
    loop {
        let mf = (m + 1) as f64;
        let theta = (mf / (2.0 * t)).asinh();
        let tail = 2.0 * (2.0 * t * (theta.cosh() - 1.0) - theta * mf).exp();
        if t == 0.0 || dim as f64 * tail <= tol {
            return m;
        }
        m += 1;
    }
}
