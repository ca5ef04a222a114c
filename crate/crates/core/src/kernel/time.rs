//! `Q_α` through the heat semigroup:
//! `Q_α(x, y) = (1/|Γ(−α/2)|) ∫_0^∞ t^{-1-α/2} p(t, x, y) dt`.
//!
//! The integral is split in three pieces, with `n = |x − y|_1` and
//! `h(t) = p(t) / t^n` (finite at 0):
//!
//! * `(0, t_s]`: `h(0) t_s^ε / ε + ∫ t^{ε−1} (h(t) − h(0)) dt`, `ε = n − α/2`,
//!   so only a bounded integrand reaches the adaptive rule;
//! * `[t_s, T]`: `∫ e^{−sα/2} p(e^s) ds` in the logarithmic variable;
//! * `[T, ∞)`: term-by-term integration of the large-time expansion
//!   `p(t) = (4πt)^{−d/2} Σ_j b_j t^{−j}`, with `T` large enough that the
//!   expansion has converged far below double precision.

use std::f64::consts::PI;

use super::{AlphaParam, Estimate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::special::{bessel_i0_minus_one, scaled_bessel_i_over_power, scaled_bessel_i_seq};

const TAIL_TERMS: usize = 32;

/// `Q_α` at a nonzero lattice offset by the time integral.
pub fn q_alpha_time_integral(offset: &[i64], alpha: &AlphaParam, quad: &QuadratureSpec) -> Result<f64> {
    q_alpha_time_integral_estimate(offset, alpha, quad).map(|e| e.value)
}

/// As [`q_alpha_time_integral`], with the accumulated error estimate.
pub fn q_alpha_time_integral_estimate(
    offset: &[i64],
    alpha: &AlphaParam,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    quad.validate()?;
    if offset.is_empty() {
        return Err(Error::domain("offset has no coordinates"));
    }
    let orders: Vec<usize> = offset.iter().map(|c| c.unsigned_abs() as usize).collect();
    let n: usize = orders.iter().sum();
    if n == 0 {
        return Err(Error::domain("Q_alpha is defined only for nonzero offsets"));
    }
    let a = alpha.value();
    let eps = n as f64 - 0.5 * a;
    let ts = quad.time_split;
    let m_max = *orders.iter().max().expect("nonempty");
    let big_t = tail_start(m_max).max(4.0 * ts);

    // Absolute tolerance on the raw integral, before the normaliser.
    let abs = quad.abs_tol / alpha.inv_gamma() / 3.0;
    let tol = Tolerance {
        abs,
        rel: quad.rel_tol,
        max_intervals: 4000,
    };

    let h = |t: f64| -> f64 {
        orders
            .iter()
            .map(|&m| scaled_bessel_i_over_power(m, t))
            .product()
    };
    let h0: f64 = orders.iter().map(|&m| 1.0 / factorial(m)).product();
    let near_main = h0 * ts.powf(eps) / eps;
    let near_rest = integrate(
        |t: f64| t.powf(eps - 1.0) * (h(t) - h0),
        0.0,
        ts,
        Tolerance {
            abs: tol.abs.max(quad.rel_tol * near_main.abs() * 1e-2),
            ..tol
        },
    )
    .map_err(|e| annotate(e, offset))?;

    let heat = |t: f64| -> f64 {
        let seq = scaled_bessel_i_seq(m_max, 2.0 * t);
        orders.iter().map(|&m| seq[m]).product()
    };
    let mid = integrate(
        |s: f64| {
            let t = s.exp();
            (-0.5 * a * s).exp() * heat(t)
        },
        ts.ln(),
        big_t.ln(),
        tol,
    )
    .map_err(|e| annotate(e, offset))?;

    let tail = large_time_tail(&orders, a, big_t);

    let raw = near_main + near_rest.value + mid.value + tail.value;
    let err = near_rest.abs_error + mid.abs_error + tail.error;
    Ok(Estimate {
        value: alpha.inv_gamma() * raw,
        error: alpha.inv_gamma() * err,
    })
}

/// `S_α = (1/|Γ(−α/2)|) ∫_0^∞ (1 − p(t, x, x)) t^{-1-α/2} dt` in dimension `dim`.
///
/// Independent of the Fourier-side cube average; used as a cross-check.
pub fn total_mass_time_integral(dim: usize, alpha: &AlphaParam, quad: &QuadratureSpec) -> Result<Estimate> {
    quad.validate()?;
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let a = alpha.value();
    let d = dim as i32;
    let ts = quad.time_split;
    let big_t = tail_start(0).max(4.0 * ts);
    let tol = Tolerance {
        abs: quad.abs_tol / alpha.inv_gamma() / 3.0,
        rel: quad.rel_tol,
        max_intervals: 4000,
    };
    // 1 − p(t) = 1 − e^{−2dt} I_0(2t)^d vanishes linearly at 0.
    let one_minus_p = |t: f64| -> f64 {
        let log_p = -2.0 * dim as f64 * t + d as f64 * bessel_i0_minus_one(2.0 * t).ln_1p();
        -log_p.exp_m1()
    };
    let near = integrate(
        |t: f64| one_minus_p(t) * t.powf(-1.0 - 0.5 * a),
        0.0,
        ts,
        tol,
    )?;
    let mid = integrate(
        |s: f64| {
            let t = s.exp();
            let p = scaled_bessel_i_seq(0, 2.0 * t)[0].powi(d);
            (1.0 - p) * (-0.5 * a * s).exp()
        },
        ts.ln(),
        big_t.ln(),
        tol,
    )?;
    // ∫_T^∞ t^{-1-α/2} dt minus the heat-kernel part.
    let ones = 2.0 / a * big_t.powf(-0.5 * a);
    let heat_tail = large_time_tail(&vec![0; dim], a, big_t);
    let raw = near.value + mid.value + ones - heat_tail.value;
    Ok(Estimate {
        value: alpha.inv_gamma() * raw,
        error: alpha.inv_gamma() * (near.abs_error + mid.abs_error + heat_tail.error),
    })
}

/// Start of the analytic tail: the large-argument expansion of
/// `e^{−z} I_m(z)` at `z = 2T` must converge with the first ratio ≤ 1/8.
fn tail_start(m_max: usize) -> f64 {
    let m2 = (m_max * m_max) as f64;
    (2.0 * m2 + 30.0).max(250.0)
}

/// `∫_T^∞ t^{-1-α/2} Π_i e^{−2t} I_{m_i}(2t) dt` from the large-time expansion.
fn large_time_tail(orders: &[usize], alpha: f64, big_t: f64) -> Estimate {
    // Per dimension: e^{−2t} I_m(2t) = (4πt)^{−1/2} Σ_k c_k t^{−k},
    // c_k = (−1)^k a_k(m) / 2^k, a_k(m) = Π_{j≤k} (4m² − (2j−1)²) / (k! 8^k).
    let mut product = vec![0.0; TAIL_TERMS];
    product[0] = 1.0;
    for &m in orders {
        let mu = 4.0 * (m * m) as f64;
        let mut coeffs = vec![0.0; TAIL_TERMS];
        coeffs[0] = 1.0;
        for k in 1..TAIL_TERMS {
            let odd = (2 * k - 1) as f64;
            coeffs[k] = -coeffs[k - 1] * (mu - odd * odd) / (k as f64 * 16.0);
        }
        let mut next = vec![0.0; TAIL_TERMS];
        for (i, &p) in product.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for (j, &c) in coeffs.iter().enumerate().take(TAIL_TERMS - i) {
                next[i + j] += p * c;
            }
        }
        product = next;
    }
    let d = orders.len() as f64;
    let base = 0.5 * (alpha + d);
    let prefactor = (4.0 * PI).powf(-0.5 * d);
    let mut sum = 0.0;
    let mut last = 0.0;
    for (j, &b) in product.iter().enumerate() {
        let e = base + j as f64;
        let term = b * big_t.powf(-e) / e;
        sum += term;
        last = term.abs();
        if j > 2 && last < 1e-20 * sum.abs() {
            break;
        }
    }
    Estimate {
        value: prefactor * sum,
        error: prefactor * last,
    }
}

fn factorial(m: usize) -> f64 {
    (1..=m).fold(1.0, |acc, k| acc * k as f64)
}

fn annotate(err: Error, offset: &[i64]) -> Error {
    match err {
        Error::Convergence { what, achieved } => Error::Convergence {
            what: format!("time integral for offset {offset:?}: {what}"),
            achieved,
        },
        other => other,
    }
}
