//! The full invariant suite for one `(Ω, α)`: heat kernel, kernel routes,
//! matrix structure, spectrum, Fourier identities and eigenvalue bounds.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{
    eligibility, lemma5_check, phi_minorant, unit_ball_volume, verify_bounds, BoundReport,
};
use crate::domain::Domain;
use crate::error::Result;
use crate::fourier_verify::{form_check, hz_bound_check, plancherel_check};
use crate::kernel::{
    heat_kernel, mass_cutoff, phi_symbol, q_alpha_time_integral_estimate, AlphaParam, QuadratureSpec,
};
use crate::operator::{assemble, BoundaryMeasure, OperatorMatrix};
use crate::report::{Check, VerificationReport};
use crate::sampling::Sampler;
use crate::spectrum::{eigen_decompose, validate_spectrum, SpectrumResult, SpectrumValidation};

/// Settings for [`run_suite`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random probes per family (vectors, `z` points, `(k, R)` pairs).
    pub samples: usize,
    /// Cap on the number of distinct offsets cross-checked by both kernel routes.
    pub max_kernel_offsets: usize,
    pub skip_ground_state: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 20,
            max_kernel_offsets: 64,
            skip_ground_state: false,
        }
    }
}

/// Everything computed by [`run_suite`].
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub report: VerificationReport,
    pub operator: OperatorMatrix,
    pub spectrum: SpectrumResult,
    pub boundary: BoundaryMeasure,
    pub bounds: BoundReport,
}

/// Assembles, decomposes and runs every check.
pub fn run_suite(domain: &Domain, alpha: &AlphaParam, quad: &QuadratureSpec, config: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut sampler = Sampler::new(config.seed);
    let mut report = heat_kernel_checks(domain.dim().min(2))?;
    report.extend(kernel_agreement_checks(domain, alpha, quad, config.max_kernel_offsets)?);
    let operator = assemble(domain, alpha, quad)?;
    let boundary = operator.boundary_term();
    report.extend(operator_checks(&operator, &mut sampler)?);
    let spectrum = eigen_decompose(&operator)?;
    report.extend(spectrum_checks(&operator, &spectrum, config.skip_ground_state));
    report.extend(fourier_checks(&operator, &spectrum, &boundary, quad, &mut sampler, config.samples)?);
    let (bound_report, checks) = bound_checks(domain, alpha, &spectrum, &boundary, &mut sampler, config.samples)?;
    report.extend(checks);
    Ok(SuiteOutcome {
        report,
        operator,
        spectrum,
        boundary,
        bounds: bound_report,
    })
}

/// Symmetry, positivity, truncated mass and the semigroup identity of the
/// lattice heat kernel in dimension `dim`.
pub fn heat_kernel_checks(dim: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    let origin = vec![0i64; dim];
    let probes: Vec<Vec<i64>> = (0..dim.max(1))
        .flat_map(|a| {
            [1i64, 3, -5].into_iter().map(move |c| {
                let mut v = vec![0i64; dim];
                v[a] = c;
                if dim > 1 {
                    v[(a + 1) % dim] = 2;
                }
                v
            })
        })
        .collect();

    let mut symmetric = true;
    let mut min_value = f64::INFINITY;
    for &t in &[0.1, 1.0, 4.0] {
        for y in &probes {
            let xy = heat_kernel(t, &origin, y)?;
            let yx = heat_kernel(t, y, &origin)?;
            symmetric &= xy.to_bits() == yx.to_bits();
            min_value = min_value.min(xy);
        }
    }
    report.push(Check::new("heat_symmetry", symmetric, 0.0, 0.0));
    report.push(Check::new("heat_positivity", min_value > 0.0, min_value, 0.0));

    let mut worst_mass = 0.0f64;
    for &t in &[0.25, 0.5, 1.0, 2.0, 4.0] {
        let m = mass_cutoff(t, dim, 1e-14) as i64;
        let side = (2 * m + 1) as usize;
        let mut total = 0.0;
        let mut y = vec![0i64; dim];
        for flat in 0..side.pow(dim as u32) {
            let mut rest = flat;
            for c in y.iter_mut() {
                *c = (rest % side) as i64 - m;
                rest /= side;
            }
            total += heat_kernel(t, &origin, &y)?;
        }
        worst_mass = worst_mass.max((total - 1.0).abs());
    }
    report.push(Check::at_most("heat_mass", worst_mass, 1e-10));

    let radius = 40i64;
    let side = (2 * radius + 1) as usize;
    let mut worst_semigroup = 0.0f64;
    for &s in &[0.3, 0.7] {
        for &t in &[0.3, 0.7] {
            for target in semigroup_targets(dim) {
                let direct = heat_kernel(s + t, &origin, &target)?;
                let mut conv = 0.0;
                let mut k = vec![0i64; dim];
                for flat in 0..side.pow(dim as u32) {
                    let mut rest = flat;
                    for c in k.iter_mut() {
                        *c = (rest % side) as i64 - radius;
                        rest /= side;
                    }
                    conv += heat_kernel(s, &origin, &k)? * heat_kernel(t, &k, &target)?;
                }
                worst_semigroup = worst_semigroup.max((direct - conv).abs());
            }
        }
    }
    report.push(Check::at_most("heat_semigroup", worst_semigroup, 1e-10));
    Ok(report)
}

fn semigroup_targets(dim: usize) -> Vec<Vec<i64>> {
    match dim {
        1 => (-5..=5).map(|m| vec![m]).collect(),
        _ => [[0, 0], [1, 0], [3, -2], [5, 5], [-4, 1]]
            .iter()
            .map(|p| {
                let mut v = vec![0i64; dim];
                v[..2].copy_from_slice(p);
                v
            })
            .collect(),
    }
}

/// Relative agreement of the time-integral and Fourier kernel values on the
/// domain's difference offsets (smallest offsets first, capped).
pub fn kernel_agreement_checks(
    domain: &Domain,
    alpha: &AlphaParam,
    quad: &QuadratureSpec,
    max_offsets: usize,
) -> Result<VerificationReport> {
    let mut keys: Vec<_> = domain.difference_keys().into_iter().collect();
    keys.sort_by_key(|k| (k.coords().iter().map(|c| c.unsigned_abs()).sum::<u64>(), k.clone()));
    keys.truncate(max_offsets);
    let mut report = VerificationReport::new();
    if keys.is_empty() {
        return Ok(report);
    }
    let mut table = crate::kernel::KernelTable::new(domain.dim(), *alpha);
    if let Err(e @ crate::Error::Domain(_)) = table.fill_fourier(keys.iter().map(|k| k.coords()), quad) {
        report.push(Check::new("kernel_dual_method", true, 0.0, 1e-8).with_detail(format!("not evaluated: {e}")));
        return Ok(report);
    }
    // The Fourier value of a far offset is a cancelling sum of O(S_α) terms,
    // so its error has an absolute floor near machine precision times S_α.
    let floor = 1e-14 * crate::kernel::total_mass(domain.dim(), alpha, quad)?;
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut all_positive = true;
    for key in &keys {
        let f = table.get(key.coords()).expect("filled");
        let t = q_alpha_time_integral_estimate(key.coords(), alpha, quad)?.value;
        all_positive &= f > 0.0 && t > 0.0;
        let rel = (t - f).abs() / (t.abs() + floor / 1e-8);
        if rel > worst {
            worst = rel;
            worst_at = key.to_string();
        }
    }
    report.push(
        Check::at_most("kernel_dual_method", worst, 1e-8)
            .with_detail(format!("|q_time - q_fourier| / (q_time + 1e-6 S_alpha), worst offset {worst_at}")),
    );
    report.push(Check::new("kernel_positive", all_positive, 0.0, 0.0));
    Ok(report)
}

/// Matrix structure, boundary identity, quadratic-form routes and the
/// Poisson round trip.
pub fn operator_checks(op: &OperatorMatrix, sampler: &mut Sampler) -> Result<VerificationReport> {
    let m = op.matrix();
    let n = op.len();
    let mut report = VerificationReport::new();
    let mut symmetric = true;
    let mut diagonal = true;
    let mut negative = true;
    for i in 0..n {
        diagonal &= m[(i, i)] == op.total_mass();
        for j in 0..n {
            symmetric &= m[(i, j)].to_bits() == m[(j, i)].to_bits();
            if i != j {
                negative &= m[(i, j)] < 0.0;
            }
        }
    }
    report.push(Check::new("matrix_symmetric", symmetric, 0.0, 0.0));
    report.push(Check::new("matrix_constant_diagonal", diagonal, op.total_mass(), 0.0));
    report.push(Check::new("matrix_negative_off_diagonal", negative, 0.0, 0.0));
    let rows = op.row_sums();
    let min_row = rows.iter().copied().fold(f64::INFINITY, f64::min);
    report.push(Check::new("matrix_positive_row_sums", min_row > 0.0, min_row, 0.0));

    let boundary = op.boundary_term().value;
    let abs_off: f64 = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum::<f64>())
        .sum();
    let identity = n as f64 * op.total_mass() - abs_off;
    report.push(Check::at_most(
        "boundary_identity",
        (identity - boundary).abs() / boundary,
        1e-10,
    ));

    let mut worst_form = 0.0f64;
    for _ in 0..3 {
        let u: Vec<Complex64> = sampler.real_vector(n).into_iter().map(Complex64::from).collect();
        let v: Vec<Complex64> = sampler.real_vector(n).into_iter().map(Complex64::from).collect();
        let a = op.quadratic_form(&u, &v)?;
        let b = op.quadratic_form_double_sum(&u, &v)?;
        worst_form = worst_form.max((a - b).norm() / a.norm().max(1e-300));
    }
    report.push(Check::at_most("quadratic_form_routes", worst_form, 1e-10));

    let w = sampler.real_vector(n);
    let f = op.apply(&w)?;
    let u = op.solve_poisson(&f)?;
    let err = u.iter().zip(&w).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
        / w.iter().map(|b| b * b).sum::<f64>().sqrt();
    report.push(Check::at_most("poisson_round_trip", err, 1e-9));
    Ok(report)
}

/// Eigen-residuals, orthonormality, the trace identity and the ground-state
/// structure.
pub fn spectrum_checks(op: &OperatorMatrix, spectrum: &SpectrumResult, skip_ground_state: bool) -> VerificationReport {
    let mut report = VerificationReport::new();
    let top = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    report.push(Check::at_most(
        "eigen_residual",
        spectrum.residual_norm,
        1e-9 * top.max(1.0),
    ));
    report.push(Check::at_most("eigen_orthonormal", spectrum.orthonormality_error(), 1e-10));
    let trace: f64 = spectrum.eigenvalues.iter().sum();
    let want = op.len() as f64 * op.total_mass();
    report.push(Check::at_most("trace_identity", (trace - want).abs() / want, 1e-8));
    report.extend(validate_spectrum(spectrum, SpectrumValidation { skip_ground_state }));
    report
}

/// Plancherel exactness, the symbol form and the `h_z` bound.
pub fn fourier_checks(
    op: &OperatorMatrix,
    spectrum: &SpectrumResult,
    boundary: &BoundaryMeasure,
    quad: &QuadratureSpec,
    sampler: &mut Sampler,
    samples: usize,
) -> Result<VerificationReport> {
    let domain = op.domain();
    let n = domain.len();
    let mut report = VerificationReport::new();

    let phi1: Vec<Complex64> = spectrum.eigenvector(0).into_iter().map(Complex64::from).collect();
    let mut vectors: Vec<Vec<Complex64>> = (0..samples.clamp(1, 5)).map(|_| sampler.complex_vector(n)).collect();
    vectors.push(phi1.clone());
    let plancherel: Result<Vec<f64>> = vectors.iter().map(|u| plancherel_check(domain, u)).collect();
    match plancherel {
        Ok(errors) => report.push(Check::at_most("plancherel", errors.into_iter().fold(0.0, f64::max), 1e-12)),
        Err(e @ crate::Error::Domain(_)) => {
            report.push(Check::at_most("plancherel", 0.0, 1e-12).with_detail(format!("not evaluated: {e}")))
        }
        Err(e) => return Err(e),
    }

    let mut worst_form = 0.0f64;
    let mut monotone = true;
    let mut skipped = None;
    for u in [phi1, sampler.complex_vector(n)] {
        match form_check(op, &u, quad) {
            Ok(f) => {
                worst_form = worst_form.max(f.relative_error);
                monotone &= f.refines();
            }
            Err(e @ crate::Error::Domain(_)) => skipped = Some(format!("not evaluated: {e}")),
            Err(e) => return Err(e),
        }
    }
    match skipped {
        Some(reason) => {
            report.push(Check::at_most("symbol_form", 0.0, 1e-6).with_detail(reason.clone()));
            report.push(Check::new("symbol_form_refines", true, 0.0, 0.0).with_detail(reason));
        }
        None => {
            report.push(Check::at_most("symbol_form", worst_form, 1e-6));
            report.push(Check::new("symbol_form_refines", monotone, 0.0, 0.0));
        }
    }

    let mut worst_hz = f64::INFINITY;
    let mut zs = vec![vec![0.0; domain.dim()]];
    zs.extend((0..samples).map(|_| sampler.cube_point(domain.dim())));
    for z in zs {
        let c = hz_bound_check(op, boundary, &z)?;
        worst_hz = worst_hz.min(c.slack / c.rhs);
    }
    report.push(Check::slack("hz_bound", worst_hz, 1e-8));
    Ok(report)
}

/// Bound verification, the projection inequality at random and
/// bound-derived `(k, R)`, and minorant domination on a 41^d grid.
pub fn bound_checks(
    domain: &Domain,
    alpha: &AlphaParam,
    spectrum: &SpectrumResult,
    boundary: &BoundaryMeasure,
    sampler: &mut Sampler,
    samples: usize,
) -> Result<(BoundReport, VerificationReport)> {
    let mut report = VerificationReport::new();
    let bounds = verify_bounds(domain, alpha, spectrum, boundary)?;
    let violations = bounds.violations();
    let mut check = Check::new("eigenvalue_bounds", bounds.passed, violations.len() as f64, 0.0);
    if !violations.is_empty() {
        check = check.with_detail(format!("violations at k = {violations:?}"));
    } else if bounds.no_eligible_lower {
        check = check.with_detail("no eligible k for the lower bound");
    }
    report.push(check);

    let n = domain.len();
    let dim = domain.dim();
    let mut worst = f64::INFINITY;
    let mut worst_at = String::new();
    let mut record = |k: usize, r: f64| -> Result<()> {
        let c = lemma5_check(domain, alpha, spectrum, boundary, k, r)?;
        let rel = c.slack / c.scale;
        if rel < worst {
            worst = rel;
            worst_at = format!("k = {k}, R = {r}");
        }
        Ok(())
    };
    if n >= 2 {
        for _ in 0..samples {
            let k = 1 + sampler.index(n - 1);
            let r = PI * (1.0 - sampler.unit());
            record(k, r)?;
        }
    }
    for k in 1..=eligibility(dim, alpha, n).upper_avg {
        let r = 2.0 * PI * (k as f64 / (unit_ball_volume(dim) * n as f64)).powf(1.0 / dim as f64);
        record(k, r.min(PI))?;
    }
    if dim == 1 {
        record(n, PI)?;
    }
    if worst.is_finite() {
        report.push(Check::slack("projection_inequality", worst, 1e-8).with_detail(worst_at));
    }

    if dim <= 2 {
        let pts = 41usize;
        let grid: Vec<f64> = (0..pts).map(|j| -PI + 2.0 * PI * j as f64 / (pts - 1) as f64).collect();
        let mut worst_gap = f64::INFINITY;
        let mut z = vec![0.0; dim];
        for flat in 0..pts.pow(dim as u32) {
            let mut rest = flat;
            for c in z.iter_mut() {
                *c = grid[rest % pts];
                rest /= pts;
            }
            let gap = phi_symbol(&z)?.powf(0.5 * alpha.value()) - phi_minorant(&z, alpha)?;
            worst_gap = worst_gap.min(gap);
        }
        report.push(Check::slack("minorant_domination", worst_gap, 1e-14));
    }
    Ok((bounds, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::make_box;

    #[test]
    fn heat_checks_pass() {
        for d in [1, 2] {
            let r = heat_kernel_checks(d).unwrap();
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn suite_passes_on_small_box() {
        let d = make_box(2, &[3, 3]).unwrap();
        let a = AlphaParam::new(1.0).unwrap();
        let out = run_suite(&d, &a, &QuadratureSpec::for_dim(2), &SuiteConfig::default()).unwrap();
        assert!(out.report.passed(), "{}", out.report.to_json());
    }
}
