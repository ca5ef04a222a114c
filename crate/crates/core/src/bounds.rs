//! Upper and lower bounds on Dirichlet eigenvalue averages, their eligible
//! ranges, the radial minorant of `Φ^{α/2}`, and the integrated projection
//! inequality behind the upper bound.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::kernel::{phi_symbol, symbol_1d, AlphaParam};
use crate::operator::BoundaryMeasure;
use crate::quadrature::{gauss_legendre, integrate, Tolerance};
use crate::report::{fmt_report, round_sig, REPORT_DIGITS};
use crate::spectrum::SpectrumResult;

/// Relative slack applied to every bound comparison.
pub const BOUND_SLACK: f64 = 1e-8;

/// `1e−8·max(1, |bound|)`.
pub fn slack(bound: f64) -> f64 {
    BOUND_SLACK * bound.abs().max(1.0)
}

/// `V_d = π^{d/2} / Γ(d/2 + 1)`, through `V_d = (2π/d)·V_{d−2}` from
/// `V_0 = 1`, `V_1 = 2`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    let mut v = if dim % 2 == 0 { 1.0 } else { 2.0 };
    let mut d = if dim % 2 == 0 { 2 } else { 3 };
    while d <= dim {
        v *= 2.0 * PI / d as f64;
        d += 2;
    }
    v
}

/// Largest eligible `k` for each bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Eligibility {
    pub upper_avg: usize,
    pub upper_next: usize,
    pub lower: usize,
}

/// Radius of the minorant's cap, `√3·2^{1−1/α}`; the maximum point of
/// `r^α − 12^{−α/2} r^{2α}`.
pub fn minorant_radius(alpha: f64) -> f64 {
    3f64.sqrt() * 2f64.powf(1.0 - 1.0 / alpha)
}

/// `⌊min{1, c}·|Ω|⌋` for `c = V_d/2^d`, `V_d/2^{d+1}` and
/// `(√3·2^{1−1/α}/(2π))^d V_d`.
pub fn eligibility(dim: usize, alpha: &AlphaParam, omega_size: usize) -> Eligibility {
    let vd = unit_ball_volume(dim);
    let n = omega_size as f64;
    let cap = |c: f64| ((c.min(1.0) * n).floor().max(0.0) as usize).min(omega_size);
    let two_d = 2f64.powi(dim as i32);
    let lower_c = (minorant_radius(alpha.value()) / (2.0 * PI)).powi(dim as i32) * vd;
    Eligibility {
        upper_avg: cap(vd / two_d),
        upper_next: cap(vd / (2.0 * two_d)),
        lower: cap(lower_c),
    }
}

fn density(k: usize, dim: usize, omega_size: usize) -> f64 {
    k as f64 / (unit_ball_volume(dim) * omega_size as f64)
}

/// `(2π)^α · d/(d+α) · (k/(V_d|Ω|))^{α/d}`, shared by all three bounds.
pub fn leading_term(k: usize, dim: usize, alpha: &AlphaParam, omega_size: usize) -> f64 {
    let a = alpha.value();
    let d = dim as f64;
    (2.0 * PI).powf(a) * d / (d + a) * density(k, dim, omega_size).powf(a / d)
}

fn check_range(k: usize, k_max: usize, which: &'static str) -> Result<()> {
    if k == 0 || k > k_max {
        return Err(Error::Range { k, k_max, which });
    }
    Ok(())
}

/// Upper bound on `(1/k)Σ_{j≤k} λ_j`.
pub fn upper_avg_bound(
    k: usize,
    dim: usize,
    alpha: &AlphaParam,
    omega_size: usize,
    boundary: &BoundaryMeasure,
) -> Result<f64> {
    check_range(k, eligibility(dim, alpha, omega_size).upper_avg, "upper_avg: min{1, V_d/2^d}|Omega|")?;
    Ok(leading_term(k, dim, alpha, omega_size) + boundary.value / omega_size as f64)
}

/// Upper bound on `λ_{k+1}`.
pub fn upper_next_bound(
    k: usize,
    dim: usize,
    alpha: &AlphaParam,
    omega_size: usize,
    boundary: &BoundaryMeasure,
) -> Result<f64> {
    check_range(
        k,
        eligibility(dim, alpha, omega_size).upper_next,
        "upper_next: min{1, V_d/2^(d+1)}|Omega|",
    )?;
    let d = dim as f64;
    let factor = 2f64.powf((d + alpha.value()) / d);
    Ok(factor * leading_term(k, dim, alpha, omega_size) + 2.0 * boundary.value / omega_size as f64)
}

/// Lower bound on `(1/k)Σ_{j≤k} λ_j`.
pub fn lower_avg_bound(k: usize, dim: usize, alpha: &AlphaParam, omega_size: usize) -> Result<f64> {
    check_range(
        k,
        eligibility(dim, alpha, omega_size).lower,
        "lower: min{1, (sqrt(3) 2^(1-1/alpha)/(2 pi))^d V_d}|Omega|",
    )?;
    let a = alpha.value();
    let d = dim as f64;
    let second = (2.0 * PI).powf(2.0 * a) * 12f64.powf(-0.5 * a) * d / (d + 2.0 * a)
        * density(k, dim, omega_size).powf(2.0 * a / d);
    Ok(leading_term(k, dim, alpha, omega_size) - second)
}

/// Radial minorant of `Φ^{α/2}` on the cube: `|z|^α − 12^{−α/2}|z|^{2α}`
/// up to [`minorant_radius`], constant `12^{α/2}/4` beyond.
pub fn phi_minorant(z: &[f64], alpha: &AlphaParam) -> Result<f64> {
    phi_symbol(z)?;
    let a = alpha.value();
    let r = z.iter().map(|c| c * c).sum::<f64>().sqrt();
    if r <= minorant_radius(a) {
        Ok(r.powf(a) - 12f64.powf(-0.5 * a) * r.powf(2.0 * a))
    } else {
        Ok(0.25 * 12f64.powf(0.5 * a))
    }
}

/// One row of a [`BoundReport`]. Bounds and margins are `None` where `k` is
/// not eligible. Margins are oriented so that a nonnegative value means the
/// inequality holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub k: usize,
    pub lambda_k: f64,
    pub avg_k: f64,
    pub lambda_next: f64,
    pub upper_avg: Option<f64>,
    pub upper_next: Option<f64>,
    pub lower_avg: Option<f64>,
    pub eligible_upper_avg: bool,
    pub eligible_upper_next: bool,
    pub eligible_lower: bool,
    pub margin_upper_avg: Option<f64>,
    pub margin_upper_next: Option<f64>,
    pub margin_lower: Option<f64>,
    /// `λ_k − avg_k`.
    pub margin_chain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub dim: usize,
    pub alpha: f64,
    pub omega_size: usize,
    pub boundary: f64,
    pub eligibility: Eligibility,
    /// True when no `k` is eligible for the lower bound (vacuous pass).
    pub no_eligible_lower: bool,
    pub passed: bool,
    pub rows: Vec<BoundRow>,
}

/// Evaluates every bound for `k = 1..|Ω|` against the computed spectrum.
pub fn verify_bounds(
    domain: &Domain,
    alpha: &AlphaParam,
    spectrum: &SpectrumResult,
    boundary: &BoundaryMeasure,
) -> Result<BoundReport> {
    let n = domain.len();
    let dim = domain.dim();
    if spectrum.len() != n {
        return Err(Error::domain(format!(
            "spectrum has {} eigenvalues, the domain has {n} vertices",
            spectrum.len()
        )));
    }
    let elig = eligibility(dim, alpha, n);
    let lambda = &spectrum.eigenvalues;
    let mut rows = Vec::with_capacity(n);
    let mut passed = true;
    let mut partial = 0.0;
    for k in 1..=n {
        partial += lambda[k - 1];
        let avg = partial / k as f64;
        let next = if k < n { lambda[k] } else { 0.0 };
        let ua = (k <= elig.upper_avg).then(|| upper_avg_bound(k, dim, alpha, n, boundary)).transpose()?;
        let un = (k <= elig.upper_next).then(|| upper_next_bound(k, dim, alpha, n, boundary)).transpose()?;
        let lo = (k <= elig.lower).then(|| lower_avg_bound(k, dim, alpha, n)).transpose()?;
        let m_ua = ua.map(|b| b - avg);
        let m_un = un.map(|b| b - next);
        let m_lo = lo.map(|b| avg - b);
        let m_chain = lambda[k - 1] - avg;
        let ok = |margin: Option<f64>, bound: Option<f64>| match (margin, bound) {
            (Some(m), Some(b)) => m >= -slack(b),
            _ => true,
        };
        passed &= ok(m_ua, ua) && ok(m_un, un) && ok(m_lo, lo) && m_chain >= -slack(avg);
        rows.push(BoundRow {
            k,
            lambda_k: lambda[k - 1],
            avg_k: avg,
            lambda_next: next,
            upper_avg: ua,
            upper_next: un,
            lower_avg: lo,
            eligible_upper_avg: ua.is_some(),
            eligible_upper_next: un.is_some(),
            eligible_lower: lo.is_some(),
            margin_upper_avg: m_ua,
            margin_upper_next: m_un,
            margin_lower: m_lo,
            margin_chain: m_chain,
        });
    }
    Ok(BoundReport {
        dim,
        alpha: alpha.value(),
        omega_size: n,
        boundary: boundary.value,
        eligibility: elig,
        no_eligible_lower: elig.lower == 0,
        passed,
        rows,
    })
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "k,avg_k,upper_avg,lower_avg,lambda_next,upper_next,\
eligible_upper_avg,eligible_upper_next,eligible_lower,margin_upper_avg,margin_upper_next,margin_lower";

    /// CSV with 12 significant digits; ineligible cells are empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let opt = |v: Option<f64>| v.map(fmt_report).unwrap_or_default();
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.k,
                fmt_report(r.avg_k),
                opt(r.upper_avg),
                opt(r.lower_avg),
                fmt_report(r.lambda_next),
                opt(r.upper_next),
                r.eligible_upper_avg,
                r.eligible_upper_next,
                r.eligible_lower,
                opt(r.margin_upper_avg),
                opt(r.margin_upper_next),
                opt(r.margin_lower),
            )?;
        }
        Ok(())
    }

    /// JSON with every real rounded to 12 significant digits.
    pub fn to_json(&self) -> String {
        let mut rounded = self.clone();
        let r = |x: f64| round_sig(x, REPORT_DIGITS);
        let ro = |x: Option<f64>| x.map(r);
        rounded.alpha = r(rounded.alpha);
        rounded.boundary = r(rounded.boundary);
        for row in &mut rounded.rows {
            row.lambda_k = r(row.lambda_k);
            row.avg_k = r(row.avg_k);
            row.lambda_next = r(row.lambda_next);
            row.upper_avg = ro(row.upper_avg);
            row.upper_next = ro(row.upper_next);
            row.lower_avg = ro(row.lower_avg);
            row.margin_upper_avg = ro(row.margin_upper_avg);
            row.margin_upper_next = ro(row.margin_upper_next);
            row.margin_lower = ro(row.margin_lower);
            row.margin_chain = r(row.margin_chain);
        }
        serde_json::to_string_pretty(&rounded).expect("report serializes")
    }

    /// Rows where an eligible inequality fails beyond slack.
    pub fn violations(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| {
                let bad = |m: Option<f64>, b: Option<f64>| matches!((m, b), (Some(m), Some(b)) if m < -slack(b));
                bad(r.margin_upper_avg, r.upper_avg)
                    || bad(r.margin_upper_next, r.upper_next)
                    || bad(r.margin_lower, r.lower_avg)
                    || r.margin_chain < -slack(r.avg_k)
            })
            .map(|r| r.k)
            .collect()
    }
}

/// Both sides of
/// `λ_{k+1}(|Ω||B| − (2π)^d k) ≤ |Ω|∫_B Φ^{α/2} − (2π)^d Σ_{j≤k} λ_j + |B||∂^αΩ|`
/// for the centred ball `B` of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionCheck {
    pub k: usize,
    pub radius: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    /// Largest magnitude among the terms, for relative comparisons.
    pub scale: f64,
    pub ball_integral: f64,
    pub ball_integral_error: f64,
    /// `d V_d R^{d+α} / (d+α)`, an upper bound on the ball integral.
    pub ball_majorant: f64,
}

/// Evaluates the integrated projection inequality at `(k, R)`; `λ_{k+1}` is
/// taken as 0 when `k = |Ω|`.
pub fn lemma5_check(
    domain: &Domain,
    alpha: &AlphaParam,
    spectrum: &SpectrumResult,
    boundary: &BoundaryMeasure,
    k: usize,
    radius: f64,
) -> Result<ProjectionCheck> {
    let n = domain.len();
    let dim = domain.dim();
    if !(radius > 0.0 && radius <= PI) {
        return Err(Error::domain(format!("ball radius must lie in (0, pi], got {radius}")));
    }
    check_range(k, n, "projection inequality: 1..=|Omega|")?;
    if spectrum.len() != n {
        return Err(Error::domain("spectrum and domain sizes differ"));
    }
    let ball = ball_integral(dim, alpha, radius)?;
    let a = alpha.value();
    let d = dim as f64;
    let vol = unit_ball_volume(dim) * radius.powi(dim as i32);
    let cube = (2.0 * PI).powi(dim as i32);
    let next = if k < n { spectrum.eigenvalues[k] } else { 0.0 };
    let sum: f64 = spectrum.eigenvalues[..k].iter().sum();
    let lhs = next * (n as f64 * vol - cube * k as f64);
    let terms = [n as f64 * ball.0, cube * sum, vol * boundary.value];
    let rhs = terms[0] - terms[1] + terms[2];
    let scale = terms.iter().chain([&lhs]).fold(1.0f64, |m, t| m.max(t.abs()));
    Ok(ProjectionCheck {
        k,
        radius,
        lhs,
        rhs,
        slack: rhs - lhs,
        scale,
        ball_integral: ball.0,
        ball_integral_error: ball.1,
        ball_majorant: d * unit_ball_volume(dim) * radius.powf(d + a) / (d + a),
    })
}

/// `∫_{|z| ≤ R} Φ(z)^{α/2} dz` for `R ≤ π`, with an error estimate.
///
/// Radial shells: adaptive Gauss–Kronrod in `r` over `r^{d−1} A(r)`, where
/// `A(r)` integrates over the unit sphere (trapezoid in the azimuth,
/// Gauss–Legendre in `cos θ` for each further polar angle).
pub fn ball_integral(dim: usize, alpha: &AlphaParam, radius: f64) -> Result<(f64, f64)> {
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let a = alpha.value();
    let tol = Tolerance {
        abs: 1e-14,
        rel: 1e-12,
        max_intervals: 2000,
    };
    let result = if dim == 1 {
        integrate(|r: f64| 2.0 * (2.0 * (0.5 * r).sin()).powf(a), 0.0, radius, tol)?
    } else {
        let sphere = SphereRule::new(dim);
        integrate(
            |r: f64| {
                if r == 0.0 {
                    return 0.0;
                }
                let on_sphere = sphere.average(|w| w.iter().map(|&c| symbol_1d(r * c)).sum::<f64>().powf(0.5 * a));
                r.powi(dim as i32 - 1) * on_sphere
            },
            0.0,
            radius,
            tol,
        )?
    };
    Ok((result.value, result.abs_error))
}

/// Product quadrature on `S^{d−1}`: unit directions with weights summing
/// to the sphere's surface area.
struct SphereRule {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

const AZIMUTH_POINTS: usize = 128;
const POLAR_POINTS: usize = 48;

impl SphereRule {
    fn new(dim: usize) -> Self {
        // Circle: equally spaced azimuths.
        let mut points: Vec<Vec<f64>> = (0..AZIMUTH_POINTS)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / AZIMUTH_POINTS as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let mut weights = vec![2.0 * PI / AZIMUTH_POINTS as f64; AZIMUTH_POINTS];
        // Sphere in ℝ^m from the one in ℝ^{m−1}: z = (t, √(1−t²)·ω),
        // dσ = (1−t²)^{(m−3)/2} dt dω.
        let (nodes, gl) = gauss_legendre(POLAR_POINTS);
        for m in 3..=dim {
            let mut next_points = Vec::with_capacity(points.len() * POLAR_POINTS);
            let mut next_weights = Vec::with_capacity(points.len() * POLAR_POINTS);
            for (&t, &w) in nodes.iter().zip(&gl) {
                let s = (1.0 - t * t).sqrt();
                let jac = (1.0 - t * t).powf(0.5 * (m as f64 - 3.0));
                for (p, &pw) in points.iter().zip(&weights) {
                    let mut z = Vec::with_capacity(m);
                    z.push(t);
                    z.extend(p.iter().map(|c| s * c));
                    next_points.push(z);
                    next_weights.push(w * jac * pw);
                }
            }
            points = next_points;
            weights = next_weights;
        }
        Self { points, weights }
    }

    /// `∫_{S^{d−1}} f(ω) dσ(ω)`.
    fn average<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::symbol_power;

    fn alpha(a: f64) -> AlphaParam {
        AlphaParam::new(a).unwrap()
    }

    fn decomposed(domain: &Domain, a: f64) -> (SpectrumResult, BoundaryMeasure) {
        let op = crate::operator::assemble(domain, &alpha(a), &crate::kernel::QuadratureSpec::for_dim(domain.dim()))
            .unwrap();
        (crate::spectrum::eigen_decompose(&op).unwrap(), op.boundary_term())
    }

    #[test]
    fn projection_inequality_below_full_rank() {
        for (domain, a) in [
            (crate::domain::make_box(1, &[12]).unwrap(), 0.7),
            (crate::domain::make_box(2, &[4, 5]).unwrap(), 1.4),
        ] {
            let (spec, b) = decomposed(&domain, a);
            let n = domain.len();
            for k in [1, n / 2, n - 1] {
                for r in [0.3, 1.5, PI] {
                    let c = lemma5_check(&domain, &alpha(a), &spec, &b, k, r).unwrap();
                    assert!(c.slack >= -1e-8 * c.scale, "k {k} R {r}: {c:?}");
                    assert!(c.ball_integral <= c.ball_majorant * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn projection_inequality_at_full_rank() {
        // With λ_{k+1} = 0 the inequality reads Σλ_j ≤ |Ω|∫_B Φ^{α/2}/(2π)^d + |B||∂Ω|/(2π)^d.
        // It holds when B covers the cube (d = 1, R = π), where the right side
        // is |Ω|S_α + |∂Ω| = trace + |∂Ω|.
        let path = crate::domain::make_box(1, &[10]).unwrap();
        let (spec, b) = decomposed(&path, 1.0);
        let c = lemma5_check(&path, &alpha(1.0), &spec, &b, 10, PI).unwrap();
        assert!(c.slack >= 0.0, "{c:?}");
        // A small ball leaves out most of the symbol mass, and the
        // inequality fails: the sum of all eigenvalues is |Ω|S_α.
        let square = crate::domain::make_box(2, &[4, 4]).unwrap();
        let (spec, b) = decomposed(&square, 1.0);
        let c = lemma5_check(&square, &alpha(1.0), &spec, &b, 16, 1.0).unwrap();
        assert!(c.slack < 0.0, "{c:?}");
    }

    #[test]
    fn projection_inequality_argument_checks() {
        let path = crate::domain::make_box(1, &[4]).unwrap();
        let (spec, b) = decomposed(&path, 1.0);
        assert!(lemma5_check(&path, &alpha(1.0), &spec, &b, 2, 3.2).is_err());
        assert!(lemma5_check(&path, &alpha(1.0), &spec, &b, 0, 1.0).is_err());
        assert!(lemma5_check(&path, &alpha(1.0), &spec, &b, 5, 1.0).is_err());
    }

    fn boundary(value: f64) -> BoundaryMeasure {
        BoundaryMeasure {
            value,
            method: crate::operator::BoundaryMethod::Identity,
            error_bound: 0.0,
        }
    }

    #[test]
    fn ball_volumes() {
        for d in 1..=7usize {
            let h = 0.5 * d as f64;
            let want = PI.powf(h) / crate::special::gamma(h + 1.0);
            assert!(((unit_ball_volume(d) - want) / want).abs() < 1e-13);
        }
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn eligibility_examples() {
        assert_eq!(
            eligibility(1, &alpha(1.0), 50),
            Eligibility {
                upper_avg: 50,
                upper_next: 25,
                lower: 27
            }
        );
        assert_eq!(eligibility(2, &alpha(1.0), 64).upper_avg, 50);
        assert_eq!(eligibility(1, &alpha(1.0), 1).lower, 0);
    }

    #[test]
    fn bound_formula_examples() {
        let a = alpha(1.0);
        assert!((leading_term(10, 1, &a, 50) - PI / 10.0).abs() < 1e-15);
        let single = upper_avg_bound(1, 1, &a, 1, &boundary(4.0 / PI)).unwrap();
        assert!((single - (PI / 2.0 + 4.0 / PI)).abs() < 1e-14);
        let b = boundary(1.7);
        let next = upper_next_bound(1, 1, &a, 50, &b).unwrap();
        assert!((next - (4.0 * PI / 100.0 + 2.0 * 1.7 / 50.0)).abs() < 1e-14);
        assert!(matches!(upper_next_bound(26, 1, &a, 50, &b), Err(Error::Range { k: 26, k_max: 25, .. })));
        let lo = lower_avg_bound(10, 1, &a, 50).unwrap();
        let second = 4.0 * PI * PI / 12f64.sqrt() / 3.0 * 0.01;
        assert!((lo - (PI / 10.0 - second)).abs() < 1e-14);
        assert!((lo - 0.27617).abs() < 1e-5);
        let lo = lower_avg_bound(1, 1, &a, 10).unwrap();
        assert!((lo - (PI / 20.0 - 4.0 * PI * PI / (3.0 * 12f64.sqrt()) / 400.0)).abs() < 1e-14);
        assert!((lo - 0.14758).abs() < 1e-5);
    }

    #[test]
    fn near_two_leading_term() {
        // Graph-Laplacian limit (2π)²·(1/3)·(k/(2|Ω|))².
        let k = 7;
        let n = 40;
        let lead = leading_term(k, 1, &alpha(1.999), n);
        let limit = 4.0 * PI * PI / 3.0 * (k as f64 / (2.0 * n as f64)).powi(2);
        assert!((lead - limit).abs() < 1e-2);
    }

    #[test]
    fn minorant_values() {
        let a = alpha(1.0);
        assert_eq!(phi_minorant(&[0.0, 0.0], &a).unwrap(), 0.0);
        assert!((phi_minorant(&[1.0], &a).unwrap() - (1.0 - 1.0 / 12f64.sqrt())).abs() < 1e-15);
        assert!((phi_minorant(&[2.0], &a).unwrap() - 12f64.sqrt() / 4.0).abs() < 1e-15);
        // Continuity at the cap radius.
        let r = minorant_radius(1.0);
        let inside = phi_minorant(&[r * (1.0 - 1e-12)], &a).unwrap();
        assert!((inside - 12f64.sqrt() / 4.0).abs() < 1e-10);
        assert!(phi_minorant(&[4.0], &a).is_err());
    }

    #[test]
    fn ball_integral_closed_forms() {
        // d = 1, α = 1: 2∫_0^R 2 sin(r/2) dr = 8(1 − cos(R/2)).
        let (v, _) = ball_integral(1, &alpha(1.0), 2.0).unwrap();
        assert!((v - 8.0 * (1.0 - 1f64.cos())).abs() < 1e-13);
        // Small R: Φ^{α/2} ≈ |z|^α, so ∫_B ≈ d V_d R^{d+α}/(d+α).
        for dim in [2usize, 3] {
            let r = 1e-3;
            let (v, _) = ball_integral(dim, &alpha(1.0), r).unwrap();
            let lead = dim as f64 * unit_ball_volume(dim) * r.powf(dim as f64 + 1.0) / (dim as f64 + 1.0);
            assert!(((v - lead) / lead).abs() < 1e-6, "d = {dim}");
        }
        // d = 2 against an independent polar tensor rule.
        let r = 2.5;
        let (v, _) = ball_integral(2, &alpha(1.999), r).unwrap();
        let (nodes, w) = gauss_legendre(64);
        let mut direct = 0.0;
        for (&x, &wx) in nodes.iter().zip(&w) {
            let rho = 0.5 * r * (x + 1.0);
            for j in 0..256 {
                let t = 2.0 * PI * j as f64 / 256.0;
                direct += 0.5 * r * wx * rho * (2.0 * PI / 256.0)
                    * symbol_power(&[rho * t.cos(), rho * t.sin()], 1.999);
            }
        }
        assert!(((v - direct) / direct).abs() < 1e-10);
    }
}
