//! Small domains (|Ω| ≤ 6): eigenvalues against the characteristic
//! polynomial from the Faddeev–LeVerrier recursion, with roots located by
//! sign changes and bisection where the spectrum is simple.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use fraclap::domain::{make_box, make_random_connected, Domain};
use fraclap::kernel::{AlphaParam, QuadratureSpec};
use fraclap::operator::assemble;
use fraclap::spectrum::jacobi_eigen;

/// Coefficients `c_0..=c_n` of `det(λI − A) = Σ c_j λ^j`.
fn characteristic_polynomial(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        m = a * &m + DMatrix::<f64>::identity(n, n) * c[n + 1 - k];
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    c
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &cj| acc * x + cj)
}

/// Roots of a polynomial with simple real roots in `[lo, hi]`.
fn real_roots(c: &[f64], lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (hi - lo) / samples as f64;
    let mut a = lo;
    let mut fa = horner(c, a);
    for i in 1..=samples {
        let b = lo + h * i as f64;
        let fb = horner(c, b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            let (mut x0, mut x1, mut f0) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (x0 + x1);
                let fm = horner(c, mid);
                if fm == 0.0 || x1 - x0 < 1e-15 {
                    x0 = mid;
                    x1 = mid;
                    break;
                }
                if f0 * fm < 0.0 {
                    x1 = mid;
                } else {
                    x0 = mid;
                    f0 = fm;
                }
            }
            roots.push(0.5 * (x0 + x1));
        }
        a = b;
        fa = fb;
    }
    roots
}

/// Elementary symmetric polynomials `e_0..=e_n`.
fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (i, &v) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e
}

fn check_against_charpoly(domain: &Domain, a: f64, expect_simple: bool) {
    let alpha = AlphaParam::new(a).unwrap();
    let op = assemble(domain, &alpha, &QuadratureSpec::for_dim(domain.dim())).unwrap();
    let matrix = op.matrix().clone();
    let n = matrix.nrows();
    let (lambda, _, _) = jacobi_eigen(&matrix).unwrap();
    let c = characteristic_polynomial(&matrix);

    // Vieta: c_{n−k} = (−1)^k e_k(λ).
    let e = elementary_symmetric(&lambda);
    for k in 1..=n {
        let expected = if k % 2 == 0 { e[k] } else { -e[k] };
        let scale = e[k].abs().max(1.0);
        assert!(
            (c[n - k] - expected).abs() <= 1e-10 * scale,
            "{n} vertices, alpha {a}: coefficient {k}: {} vs {expected}",
            c[n - k]
        );
    }

    if expect_simple {
        let gershgorin = (0..n)
            .map(|i| matrix.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let roots = real_roots(&c, 0.0, gershgorin * 1.01, 20_000);
        assert_eq!(roots.len(), n, "alpha {a}: roots {roots:?}");
        for (r, l) in roots.iter().zip(&lambda) {
            assert!((r - l).abs() <= 1e-8, "alpha {a}: root {r} vs eigenvalue {l}");
        }
    }
}

#[test]
fn paths_match_characteristic_polynomial() {
    for n in 1..=6 {
        let d = make_box(1, &[n]).unwrap();
        for a in [0.3, 1.0, 1.7] {
            check_against_charpoly(&d, a, true);
        }
    }
}

#[test]
fn small_two_and_three_dimensional_domains() {
    let square = make_box(2, &[2, 2]).unwrap();
    let strip = make_box(2, &[3, 2]).unwrap();
    for a in [0.5, 1.5] {
        check_against_charpoly(&square, a, false);
        check_against_charpoly(&strip, a, false);
        for seed in 0..4 {
            check_against_charpoly(&make_random_connected(2, 6, seed).unwrap(), a, false);
            check_against_charpoly(&make_random_connected(3, 5, seed).unwrap(), a, false);
        }
    }
}

#[test]
fn path_matrix_at_alpha_one_has_closed_form_entries() {
    // Off-diagonal entries −4/(π(4m²−1)), diagonal 4/π.
    let n = 6;
    let exact = DMatrix::from_fn(n, n, |i, j| {
        let m = i.abs_diff(j) as f64;
        if i == j {
            4.0 / PI
        } else {
            -4.0 / (PI * (4.0 * m * m - 1.0))
        }
    });
    let domain = make_box(1, &[n]).unwrap();
    let alpha = AlphaParam::new(1.0).unwrap();
    let op = assemble(&domain, &alpha, &QuadratureSpec::for_dim(1)).unwrap();
    assert!((op.matrix() - &exact).amax() < 1e-12);

    let c = characteristic_polynomial(&exact);
    let roots = real_roots(&c, 0.0, 4.0, 40_000);
    let (lambda, _, _) = jacobi_eigen(op.matrix()).unwrap();
    assert_eq!(roots.len(), n);
    for (r, l) in roots.iter().zip(&lambda) {
        assert!((r - l).abs() <= 1e-8, "{r} vs {l}");
    }
}
