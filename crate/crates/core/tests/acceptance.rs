//! Acceptance run: nine criteria, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines are always printed; exits non-zero if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;

use fraclap::bounds::{lemma5_check, phi_minorant, verify_bounds};
use fraclap::domain::{make_box, make_l_shape, make_random_connected, Domain};
use fraclap::fourier_verify::{form_check, hz_bound_check, plancherel_check};
use fraclap::kernel::{
    heat_kernel, heat_kernel_1d, phi_symbol, q_alpha_fourier, q_alpha_time_integral, total_mass_time_integral,
    AlphaParam, QuadratureSpec, SymbolCoefficients,
};
use fraclap::operator::{assemble, OperatorMatrix};
use fraclap::report::{round_sig, REPORT_DIGITS};
use fraclap::sampling::Sampler;
use fraclap::spectrum::{eigen_decompose, SpectrumResult};
use fraclap::verify::heat_kernel_checks;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

struct Case {
    label: String,
    alpha: AlphaParam,
    op: OperatorMatrix,
    spectrum: SpectrumResult,
}

fn standard_domains() -> Vec<(String, Domain)> {
    vec![
        ("path 10".into(), make_box(1, &[10]).unwrap()),
        ("path 20".into(), make_box(1, &[20]).unwrap()),
        ("path 50".into(), make_box(1, &[50]).unwrap()),
        ("box 6x6".into(), make_box(2, &[6, 6]).unwrap()),
        ("box 8x8".into(), make_box(2, &[8, 8]).unwrap()),
        ("L-shape 3".into(), make_l_shape(3).unwrap()),
        ("L-shape 4".into(), make_l_shape(4).unwrap()),
        ("random 2d 30 seed 7".into(), make_random_connected(2, 30, 7).unwrap()),
    ]
}

fn standard_suite() -> Vec<Case> {
    let jobs: Vec<(String, Domain, f64)> = standard_domains()
        .into_iter()
        .flat_map(|(l, d)| [0.5, 1.0, 1.5].into_iter().map(move |a| (l.clone(), d.clone(), a)))
        .collect();
    jobs.into_par_iter()
        .map(|(label, domain, a)| {
            let alpha = AlphaParam::new(a).unwrap();
            let quad = QuadratureSpec::for_dim(domain.dim());
            let op = assemble(&domain, &alpha, &quad).unwrap();
            let spectrum = eigen_decompose(&op).unwrap();
            Case {
                label: format!("{label}, alpha {a}"),
                alpha,
                op,
                spectrum,
            }
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let alpha = AlphaParam::new(1.0).unwrap();
    let quad = QuadratureSpec::for_dim(1);
    let mut worst = 0.0f64;
    for m in 1..=20i64 {
        let exact = 4.0 / (PI * (4.0 * (m * m) as f64 - 1.0));
        let t = q_alpha_time_integral(&[m], &alpha, &quad).unwrap();
        let f = q_alpha_fourier(&[m], &alpha, &quad).unwrap();
        worst = worst.max((t - exact).abs()).max((f - exact).abs());
    }
    outcome(worst <= 1e-10, format!("max |q - 4/(pi(4m^2-1))| = {worst:.3e} (tol 1e-10)"))
}

/// Offsets with nonnegative, nondecreasing coordinates and `|·|∞ ≤ r`,
/// one per orbit of the coordinate sign and permutation symmetries.
fn canonical_offsets(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                let lo = v.last().copied().unwrap_or(0);
                (lo..=r).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&c| c != 0));
    out
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut count = 0;
    for dim in 1..=3usize {
        let r = if dim <= 2 { 8 } else { 4 };
        let quad = QuadratureSpec::for_dim(dim);
        for a in [0.5, 1.0, 1.5] {
            let alpha = AlphaParam::new(a).unwrap();
            let coeffs = SymbolCoefficients::compute(dim, &alpha, r as usize, &quad).unwrap();
            let offsets = canonical_offsets(dim, r);
            let results: Vec<(Vec<i64>, f64)> = offsets
                .par_iter()
                .map(|m| {
                    let t = q_alpha_time_integral(m, &alpha, &quad).unwrap();
                    let f = coeffs.kernel(m).unwrap().value;
                    (m.clone(), (t - f).abs() / t.abs())
                })
                .collect();
            count += results.len();
            for (m, rel) in results {
                if rel > worst {
                    worst = rel;
                    worst_at = format!("d {dim}, alpha {a}, offset {m:?}");
                }
            }
        }
    }
    outcome(
        worst <= 1e-8,
        format!("{count} offset orbits, max relative difference {worst:.3e} at {worst_at} (tol 1e-8)"),
    )
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_mass = 0.0f64;
    let mut worst_semigroup = 0.0f64;
    for dim in [1, 2, 3] {
        let report = heat_kernel_checks(dim).unwrap();
        for c in &report.checks {
            if !c.passed {
                failures.push(format!("d {dim} {}", c.name));
            }
        }
        worst_mass = worst_mass.max(report.get("heat_mass").unwrap().measured);
        worst_semigroup = worst_semigroup.max(report.get("heat_semigroup").unwrap().measured);
    }
    // Independent anchors: e^{-2}I_3(2) and the return probability in d = 2.
    let i3 = (heat_kernel_1d(1.0, 3).unwrap() - 0.028791222639470898).abs();
    let p2 = (heat_kernel(1.0, &[0, 0], &[0, 0]).unwrap() - 0.09517738508487993).abs();
    let anchors_ok = i3 <= 1e-15 && p2 <= 1e-15;
    if !anchors_ok {
        failures.push(format!("reference values off by {i3:.1e}, {p2:.1e}"));
    }
    outcome(
        failures.is_empty(),
        format!(
            "d = 1,2,3: max |mass - 1| = {worst_mass:.3e}, max semigroup defect = {worst_semigroup:.3e}{}",
            if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
        ),
    )
}

fn criterion_4(suite: &[Case]) -> Outcome {
    let mut failures = Vec::new();
    let mut worst_res = 0.0f64;
    let mut worst_trace = 0.0f64;
    for case in suite {
        let lambda = &case.spectrum.eigenvalues;
        let n = lambda.len();
        let mut bad = Vec::new();
        if !(lambda[0] > 0.0) {
            bad.push("lambda_1 <= 0");
        }
        if n > 1 && !(lambda[1] - lambda[0] > 1e-9 * lambda[0]) {
            bad.push("ground state not simple");
        }
        let phi = case.spectrum.eigenvector(0);
        let sign = if phi.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        if !phi.iter().all(|&v| sign * v > 0.0) {
            bad.push("ground state changes sign");
        }
        let res = case.spectrum.residuals(&case.op).into_iter().fold(0.0f64, f64::max);
        worst_res = worst_res.max(res);
        if res > 1e-9 {
            bad.push("eigen-residual above 1e-9");
        }
        let trace = case.op.matrix().trace();
        // S from the time integral, independent of the Fourier value on the diagonal.
        let quad = QuadratureSpec::for_dim(case.op.domain().dim());
        let s_time = total_mass_time_integral(case.op.domain().dim(), &case.alpha, &quad).unwrap().value;
        let expected = n as f64 * s_time;
        let rel = (trace - expected).abs() / expected;
        worst_trace = worst_trace.max(rel);
        if rel > 1e-8 {
            bad.push("trace differs from |Omega| S");
        }
        if !bad.is_empty() {
            failures.push(format!("{}: {}", case.label, bad.join(", ")));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} cases, max residual {worst_res:.3e}, max trace error {worst_trace:.3e}{}",
            suite.len(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn criterion_5(suite: &[Case]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for case in suite {
        let report = verify_bounds(case.op.domain(), &case.alpha, &case.spectrum, &case.op.boundary_term()).unwrap();
        checked += report
            .rows
            .iter()
            .map(|r| r.eligible_upper_avg as usize + r.eligible_upper_next as usize + r.eligible_lower as usize + 1)
            .sum::<usize>();
        let v = report.violations();
        if !v.is_empty() {
            failures.push(format!("{} at k = {v:?}", case.label));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} cases, {checked} inequalities checked{}",
            suite.len(),
            if failures.is_empty() { String::new() } else { format!("; violations: {}", failures.join("; ")) }
        ),
    )
}

fn criterion_6(suite: &[Case]) -> Outcome {
    let mut sampler = Sampler::new(2024);
    let mut worst_proj = f64::INFINITY;
    let mut worst_hz = f64::INFINITY;
    let mut worst_minorant = f64::INFINITY;
    for case in suite {
        let domain = case.op.domain();
        let n = domain.len();
        let boundary = case.op.boundary_term();
        // k = |Ω| is excluded: there the inequality needs B to cover the cube.
        for _ in 0..20 {
            let k = 1 + sampler.index(n - 1);
            let r = PI * (1.0 - sampler.unit());
            let c = lemma5_check(domain, &case.alpha, &case.spectrum, &boundary, k, r).unwrap();
            worst_proj = worst_proj.min(c.slack / c.scale);
        }
        for _ in 0..20 {
            let z = sampler.cube_point(domain.dim());
            let c = hz_bound_check(&case.op, &boundary, &z).unwrap();
            worst_hz = worst_hz.min(c.slack / c.rhs);
        }
    }
    for dim in [1usize, 2] {
        for a in [0.5, 1.0, 1.5] {
            let alpha = AlphaParam::new(a).unwrap();
            let pts = 41usize;
            let grid: Vec<f64> = (0..pts).map(|j| -PI + 2.0 * PI * j as f64 / (pts - 1) as f64).collect();
            for flat in 0..pts.pow(dim as u32) {
                let z: Vec<f64> = (0..dim).map(|i| grid[(flat / pts.pow(i as u32)) % pts]).collect();
                let gap = phi_symbol(&z).unwrap().powf(0.5 * a) - phi_minorant(&z, &alpha).unwrap();
                worst_minorant = worst_minorant.min(gap);
            }
        }
    }
    let passed = worst_proj >= -1e-8 && worst_hz >= -1e-8 && worst_minorant >= 0.0;
    outcome(
        passed,
        format!(
            "min projection slack/scale {worst_proj:.3e}, min h_z slack/rhs {worst_hz:.3e}, min Phi^(a/2) - minorant {worst_minorant:.3e}"
        ),
    )
}

fn path_spectrum(a: f64) -> Vec<f64> {
    let domain = make_box(1, &[10]).unwrap();
    let alpha = AlphaParam::new(a).unwrap();
    let op = assemble(&domain, &alpha, &QuadratureSpec::for_dim(1)).unwrap();
    eigen_decompose(&op).unwrap().eigenvalues
}

fn criterion_7() -> Outcome {
    let exact: Vec<f64> = (1..=10).map(|j| 4.0 * (j as f64 * PI / 22.0).sin().powi(2)).collect();
    let deviations: Vec<f64> = [1.9, 1.99, 1.999]
        .iter()
        .map(|&a| {
            path_spectrum(a)
                .iter()
                .zip(&exact)
                .map(|(l, e)| (l - e).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let monotone = deviations.windows(2).all(|w| w[1] < w[0]);
    let near_identity = path_spectrum(0.01).iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max);
    outcome(
        deviations[2] <= 0.02 && monotone && near_identity <= 0.05,
        format!(
            "max |lambda_j - 4 sin^2(j pi/22)| at alpha 1.9, 1.99, 1.999: {:.3e}, {:.3e}, {:.3e}; alpha 0.01: max |lambda_j - 1| = {near_identity:.3e}",
            deviations[0], deviations[1], deviations[2]
        ),
    )
}

fn criterion_8(suite: &[Case]) -> Outcome {
    let mut sampler = Sampler::new(99);
    let mut worst_plancherel = 0.0f64;
    let domains = standard_domains();
    for i in 0..100 {
        let domain = &domains[i % domains.len()].1;
        let u = sampler.complex_vector(domain.len());
        worst_plancherel = worst_plancherel.max(plancherel_check(domain, &u).unwrap());
    }
    let checks: Vec<(f64, bool)> = suite
        .par_iter()
        .enumerate()
        .map(|(i, case)| {
            let mut s = Sampler::new(1000 + i as u64);
            let u: Vec<Complex64> = s.complex_vector(case.op.len());
            let quad = QuadratureSpec::for_dim(case.op.domain().dim());
            let f = form_check(&case.op, &u, &quad).unwrap();
            (f.relative_error, f.level_errors.windows(2).all(|w| w[1] < w[0]))
        })
        .collect();
    let worst_form = checks.iter().map(|c| c.0).fold(0.0, f64::max);
    let refining = checks.iter().all(|c| c.1);
    outcome(
        worst_plancherel <= 1e-12 && worst_form <= 1e-6 && refining,
        format!(
            "100 vectors: max Plancherel error {worst_plancherel:.3e}; {} form checks: max relative error {worst_form:.3e}, errors decrease under refinement: {refining}",
            checks.len()
        ),
    )
}

fn run_sweep() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_fraclap"))
        .args(["sweep", "--family", "random", "--dim", "2", "--sizes", "10,20,30", "--alphas", "0.5,1,1.5", "--seed", "7"])
        .output()
        .expect("run fraclap");
    assert!(out.status.success(), "sweep failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn criterion_9(suite: &[Case]) -> Outcome {
    let first = run_sweep();
    let second = run_sweep();
    let identical = first == second && !first.is_empty();

    // Every reported number carries 12 significant digits and re-rounds to itself.
    let mut rounding_ok = true;
    for case in suite.iter().take(6) {
        let report = verify_bounds(case.op.domain(), &case.alpha, &case.spectrum, &case.op.boundary_term()).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        report.write_csv(&mut a).unwrap();
        report.write_csv(&mut b).unwrap();
        rounding_ok &= a == b && report.to_json() == report.to_json();
        let text = String::from_utf8(a).unwrap();
        for cell in text.lines().skip(1).flat_map(|l| l.split(',')) {
            if let Ok(v) = cell.parse::<f64>() {
                if cell.contains('e') {
                    let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
                    rounding_ok &= mantissa.chars().filter(|c| c.is_ascii_digit()).count() == REPORT_DIGITS;
                    rounding_ok &= round_sig(v, REPORT_DIGITS) == v;
                }
            }
        }
    }
    outcome(
        identical && rounding_ok,
        format!(
            "two sweep runs byte-identical: {identical} ({} bytes); report cells carry {REPORT_DIGITS} significant digits: {rounding_ok}",
            first.len()
        ),
    )
}

fn main() {
    let total = Instant::now();
    let mut results: Vec<(usize, Outcome, Duration, Duration)> = Vec::new();
    let mut timed = |id: usize, limit: Duration, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        results.push((id, o, start.elapsed(), limit));
    };
    timed(1, Duration::from_secs(5), &criterion_1);
    timed(2, Duration::from_secs(120), &criterion_2);
    timed(3, Duration::from_secs(30), &criterion_3);

    let start = Instant::now();
    let suite = standard_suite();
    let setup = start.elapsed();
    println!("standard suite: {} cases assembled and decomposed in {:.2?}", suite.len(), setup);

    // Criteria 4 and 5 share the suite setup, so their budget includes it.
    let start = Instant::now();
    let c4 = criterion_4(&suite);
    results.push((4, c4, setup + start.elapsed(), Duration::from_secs(120)));
    let start = Instant::now();
    let c5 = criterion_5(&suite);
    results.push((5, c5, setup + start.elapsed(), Duration::from_secs(120)));
    let start = Instant::now();
    let c6 = criterion_6(&suite);
    results.push((6, c6, start.elapsed(), Duration::from_secs(60)));
    let mut timed = |id: usize, limit: Duration, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        results.push((id, o, start.elapsed(), limit));
    };
    timed(7, Duration::from_secs(30), &criterion_7);
    timed(8, Duration::from_secs(60), &|| criterion_8(&suite));
    timed(9, Duration::from_secs(60), &|| criterion_9(&suite));

    let mut all = true;
    for (id, o, elapsed, limit) in &results {
        let in_time = elapsed <= limit;
        let passed = o.passed && in_time;
        all &= passed;
        println!(
            "criterion {id}: {} ({:.2?}, limit {:?}) {}{}",
            if passed { "PASS" } else { "FAIL" },
            elapsed,
            limit,
            o.detail,
            if in_time { "" } else { " [over time limit]" }
        );
    }
    println!("acceptance total {:.2?}: {}", total.elapsed(), if all { "all criteria pass" } else { "FAILURES" });
    if !all {
        std::process::exit(1);
    }
}
