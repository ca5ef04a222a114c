//! Fourier coefficients of `Φ^{α/2}` on the torus `[−π, π]^d`.
//!
//! `c(m) = (2π)^{−d} ∫ Φ(ξ)^{α/2} cos⟨m, ξ⟩ dξ`, so that `S_α = c(0)` and
//! `Q_α(m) = −c(m)` for `m ≠ 0`.
//!
//! The periodic trapezoid rule on `N` points per dimension has an error
//! expansion in powers `h^{d+α+2j}` (the only non-smooth point of the
//! integrand is the `|ξ|^α` corner at the origin). Four nested grids
//! `N, 2N, 4N, 8N` remove `j = 0, 1, 2` by Richardson extrapolation.

use rayon::prelude::*;

use super::{symbol_1d, AlphaParam, Estimate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::tensor::contract_axes;

pub(crate) const LEVELS: usize = 4;

/// Largest number of points in the finest folded grid, or in its cosine
/// table, that the Fourier route will allocate (about 512 MiB of `f64`).
pub const FOURIER_GRID_LIMIT: usize = 1 << 26;

/// Coefficients `c(m)` for every `m` whose coordinate magnitudes all lie in
/// a given set of axis values (always containing 0).
#[derive(Debug, Clone)]
pub struct SymbolCoefficients {
    dim: usize,
    /// Sorted distinct coordinate magnitudes.
    axis_values: Vec<usize>,
    max_offset: usize,
    coarsest_grid: usize,
    values: Vec<f64>,
    errors: Vec<f64>,
}

impl SymbolCoefficients {
    /// Coefficients on the full box `{0..=max_offset}^d`.
    pub fn compute(dim: usize, alpha: &AlphaParam, max_offset: usize, quad: &QuadratureSpec) -> Result<Self> {
        Self::compute_for_values(dim, alpha, 0..=max_offset, quad)
    }

    /// Coefficients on `V^d`, where `V` is `axis_values` plus 0. Cheaper
    /// than the full box when the offsets are sparse.
    pub fn compute_for_values<I>(dim: usize, alpha: &AlphaParam, axis_values: I, quad: &QuadratureSpec) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        quad.validate()?;
        if dim == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        let mut axis: Vec<usize> = axis_values.into_iter().chain([0]).collect();
        axis.sort_unstable();
        axis.dedup();
        let max_offset = *axis.last().expect("contains 0");
        if !fourier_feasible(dim, max_offset, axis.len(), quad) {
            return Err(Error::domain(format!(
                "the Fourier grid for offsets up to {max_offset} in dimension {dim} exceeds the limit of \
                 {FOURIER_GRID_LIMIT} points"
            )));
        }
        let coarsest = coarsest_grid(dim, max_offset, quad.fourier_grid_per_dim);
        let levels: Vec<Vec<f64>> = (0..LEVELS)
            .map(|l| trapezoid_level(dim, alpha.value(), &axis, coarsest << l))
            .collect();
        let exponents: Vec<f64> = (0..LEVELS - 1)
            .map(|j| dim as f64 + alpha.value() + 2.0 * j as f64)
            .collect();
        let count = levels[0].len();
        let mut values = Vec::with_capacity(count);
        let mut errors = Vec::with_capacity(count);
        for idx in 0..count {
            let column: Vec<f64> = levels.iter().map(|l| l[idx]).collect();
            let (v, e) = richardson(&column, &exponents);
            values.push(v);
            errors.push(e);
        }
        Ok(Self {
            dim,
            axis_values: axis,
            max_offset,
            coarsest_grid: coarsest,
            values,
            errors,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_offset(&self) -> usize {
        self.max_offset
    }

    /// Points per dimension of the coarsest grid actually used.
    pub fn coarsest_grid(&self) -> usize {
        self.coarsest_grid
    }

    /// `c(m)` with its extrapolation error estimate; `None` outside the computed box.
    pub fn coefficient(&self, offset: &[i64]) -> Option<Estimate> {
        if offset.len() != self.dim {
            return None;
        }
        let stride = self.axis_values.len();
        let mut idx = 0;
        for &c in offset {
            let pos = self.axis_values.binary_search(&(c.unsigned_abs() as usize)).ok()?;
            idx = idx * stride + pos;
        }
        Some(Estimate {
            value: self.values[idx],
            error: self.errors[idx],
        })
    }

    /// `Q_α(m) = −c(m)` for `m ≠ 0`.
    pub fn kernel(&self, offset: &[i64]) -> Option<Estimate> {
        self.coefficient(offset).map(|e| Estimate {
            value: -e.value,
            error: e.error,
        })
    }

    /// `S_α = c(0)`.
    pub fn total_mass(&self) -> Estimate {
        self.coefficient(&vec![0; self.dim]).expect("origin is always present")
    }
}

/// Coarsest grid: the configured size, raised so that the largest offset
/// is resolved by enough points per period.
pub(crate) fn coarsest_grid(dim: usize, max_offset: usize, configured: usize) -> usize {
    let per_period = match dim {
        1 => 32,
        2 => 12,
        _ => 8,
    };
    let needed = per_period * (max_offset + 1);
    let n = configured.max(needed);
    n + n % 2
}

/// Whether the finest grid and its cosine table fit [`FOURIER_GRID_LIMIT`].
pub fn fourier_feasible(dim: usize, max_offset: usize, axis_values: usize, quad: &QuadratureSpec) -> bool {
    let finest = coarsest_grid(dim, max_offset, quad.fourier_grid_per_dim) << (LEVELS - 1);
    let half = (finest / 2 + 1) as f64;
    let limit = FOURIER_GRID_LIMIT as f64;
    half.powi(dim as i32) <= limit && half * axis_values as f64 <= limit
}

/// Plain trapezoid values of `c(m)` on an `n`-point grid per dimension.
///
/// `Φ^{α/2}` is even in every coordinate, so only the folded half-grid
/// `ξ_k = 2πk/n`, `k = 0..=n/2` is evaluated, with weight 1 at the two ends
/// and 2 in between.
fn trapezoid_level(dim: usize, alpha: f64, axis_values: &[usize], n: usize) -> Vec<f64> {
    let half = n / 2 + 1;
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let sym: Vec<f64> = (0..half).map(|k| symbol_1d(k as f64 * h)).collect();
    let weight = |k: usize| (if k == 0 || k == n / 2 { 1.0 } else { 2.0 }) / n as f64;

    let total = half.pow(dim as u32);
    let exponent = 0.5 * alpha;
    let grid: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let mut s = 0.0;
            for _ in 0..dim {
                s += sym[rest % half];
                rest /= half;
            }
            s.powf(exponent)
        })
        .collect();

    let rows = axis_values.len();
    let n_i = n as u64;
    let cosines: Vec<f64> = axis_values
        .iter()
        .flat_map(|&m| (0..half).map(move |k| (m, k)))
        .map(|(m, k)| weight(k) * (((m as u64 * k as u64) % n_i) as f64 * h).cos())
        .collect();
    let shape = vec![half; dim];
    contract_axes(grid, &shape, &cosines, rows)
}

/// Richardson table over levels with step ratio 2; returns the final value
/// and `|final − best value of the previous stage|`.
pub(crate) fn richardson(levels: &[f64], exponents: &[f64]) -> (f64, f64) {
    let mut table = levels.to_vec();
    let mut previous_best = table[table.len() - 1];
    for &p in exponents.iter().take(levels.len() - 1) {
        previous_best = table[table.len() - 1];
        let factor = 2f64.powf(p);
        table = table
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
    }
    let value = table[0];
    (value, (value - previous_best).abs())
}

/// `Q_α` at a nonzero offset by the Fourier route.
pub fn q_alpha_fourier(offset: &[i64], alpha: &AlphaParam, quad: &QuadratureSpec) -> Result<f64> {
    if offset.is_empty() {
        return Err(Error::domain("offset has no coordinates"));
    }
    if offset.iter().all(|&c| c == 0) {
        return Err(Error::domain("Q_alpha is defined only for nonzero offsets"));
    }
    let magnitudes = offset.iter().map(|c| c.unsigned_abs() as usize);
    let coeffs = SymbolCoefficients::compute_for_values(offset.len(), alpha, magnitudes, quad)?;
    Ok(coeffs.kernel(offset).expect("offset inside computed set").value)
}

/// Total kernel mass `S_α = Σ_{y≠x} Q_α(x, y)`, the cube average of `Φ^{α/2}`.
pub fn total_mass(dim: usize, alpha: &AlphaParam, quad: &QuadratureSpec) -> Result<f64> {
    total_mass_estimate(dim, alpha, quad).map(|e| e.value)
}

pub fn total_mass_estimate(dim: usize, alpha: &AlphaParam, quad: &QuadratureSpec) -> Result<Estimate> {
    Ok(SymbolCoefficients::compute(dim, alpha, 0, quad)?.total_mass())
}
