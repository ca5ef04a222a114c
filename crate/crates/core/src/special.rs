//! Special functions needed by the kernel: the gamma function and
//! exponentially scaled modified Bessel functions of the first kind.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real arguments (Lanczos, g = 7).
///
/// Arguments in (0, 1/2) go through `Γ(x) = Γ(x + 1) / x`, negative
/// non-integers through the reflection formula.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.0 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x < 0.5 {
        return gamma(x + 1.0) / x;
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Below this argument the power series is used.
const SERIES_LIMIT: f64 = 1.0;
/// Above `ASYMPTOTIC_MIN` (and above `4ν² + 60`) the Hankel expansion is used.
const ASYMPTOTIC_MIN: f64 = 500.0;

/// `e^{-z} I_k(z)` for `k = 0..=max_order`, `z ≥ 0`.
///
/// Power series for `z < 1`, the large-argument expansion once `z` dominates
/// the squared order, and Miller's backward recurrence normalised by
/// `e^z = I_0(z) + 2 Σ_{k≥1} I_k(z)` in between.
pub fn scaled_bessel_i_seq(max_order: usize, z: f64) -> Vec<f64> {
    assert!(z >= 0.0, "scaled_bessel_i_seq: negative argument {z}");
    if z == 0.0 {
        let mut out = vec![0.0; max_order + 1];
        out[0] = 1.0;
        return out;
    }
    if z < SERIES_LIMIT {
        return (0..=max_order).map(|k| scaled_series(k, z)).collect();
    }
    let nu = max_order as f64;
    if z >= ASYMPTOTIC_MIN && z >= 4.0 * nu * nu + 60.0 {
        return (0..=max_order).map(|k| scaled_asymptotic(k, z)).collect();
    }
    miller(max_order, z)
}

/// `e^{-z} I_k(z)` for a single order.
pub fn scaled_bessel_i(order: usize, z: f64) -> f64 {
    if z < SERIES_LIMIT {
        assert!(z >= 0.0, "scaled_bessel_i: negative argument {z}");
        return scaled_series(order, z);
    }
    let nu = order as f64;
    if z >= ASYMPTOTIC_MIN && z >= 4.0 * nu * nu + 60.0 {
        return scaled_asymptotic(order, z);
    }
    miller(order, z)[order]
}

/// `e^{-2t} I_m(2t) / t^m`, finite as `t → 0` (limit `1/m!`).
pub fn scaled_bessel_i_over_power(order: usize, t: f64) -> f64 {
    if 2.0 * t < SERIES_LIMIT {
        // Σ_j t^{2j} / (j! (j+m)!)
        let mut term = 1.0;
        for k in 1..=order {
            term /= k as f64;
        }
        let t2 = t * t;
        let mut sum = term;
        for j in 1..200 {
            term *= t2 / (j as f64 * (j + order) as f64);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        return (-2.0 * t).exp() * sum;
    }
    scaled_bessel_i(order, 2.0 * t) / t.powi(order as i32)
}

/// `I_0(z) − 1` without cancellation for small `z`.
pub fn bessel_i0_minus_one(z: f64) -> f64 {
    if z < 2.0 {
        let q = 0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 0.0;
        for j in 1..100 {
            term *= q / (j * j) as f64;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        return sum;
    }
    scaled_bessel_i(0, z) * z.exp() - 1.0
}

fn scaled_series(order: usize, z: f64) -> f64 {
    let half = 0.5 * z;
    let mut lead = 1.0;
    for k in 1..=order {
        lead *= half / k as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..200 {
        term *= q / (j as f64 * (j + order) as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    (-z).exp() * lead * sum
}

fn scaled_asymptotic(order: usize, z: f64) -> f64 {
    let mu = 4.0 * (order as f64).powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * z);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * z).sqrt()
}

fn miller(max_order: usize, z: f64) -> Vec<f64> {
    const BIG: f64 = 1e200;
    let start = max_order + (10.0 * z.sqrt()).ceil() as usize + 20;
    let mut out = vec![0.0; max_order + 1];
    let mut next = 0.0; // f_{k+1}
    let mut cur = 1e-200; // f_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        if k <= max_order {
            out[k] = cur;
        }
        norm += 2.0 * cur;
        let prev = 2.0 * k as f64 / z * cur + next;
        next = cur;
        cur = prev;
        if cur.abs() > BIG {
            cur /= BIG;
            next /= BIG;
            norm /= BIG;
            for v in out.iter_mut().skip(k) {
                *v /= BIG;
            }
        }
    }
    out[0] = cur;
    norm += cur;
    for v in &mut out {
        *v /= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        let cases = [
            (0.5, PI.sqrt()),
            (0.25, 3.625_609_908_221_908_3),
            (0.75, 1.225_416_702_465_177_6),
            (1.0, 1.0),
            (2.5, 1.329_340_388_179_137),
            (5.0, 24.0),
            (1e-3, 999.423_772_484_595_5),
        ];
        for (x, want) in cases {
            let got = gamma(x);
            assert!(((got - want) / want).abs() < 1e-13, "Γ({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn gamma_reflection_negative_half() {
        // Γ(−1/2) = −2√π
        let got = gamma(-0.5);
        assert!((got + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bessel_regimes_agree_at_switch_points() {
        // Each pair straddles a switch between evaluation methods.
        for order in [0usize, 1, 3, 7] {
            let series = scaled_series(order, SERIES_LIMIT);
            let mil = miller(order, SERIES_LIMIT)[order];
            assert!(((series - mil) / mil).abs() <= 1e-14, "order {order}: {series} vs {mil}");
        }
        for order in [0usize, 2, 5, 11] {
            let z = (4.0 * (order * order) as f64 + 60.0).max(ASYMPTOTIC_MIN);
            let asym = scaled_asymptotic(order, z);
            let mil = miller(order, z)[order];
            assert!(((asym - mil) / mil).abs() < 1e-13, "order {order}: {asym} vs {mil}");
        }
    }

    #[test]
    fn bessel_sequence_sums_to_one() {
        for z in [0.3, 2.0, 17.0, 240.0, 3000.0] {
            let seq = scaled_bessel_i_seq(800, z);
            let total: f64 = seq[0] + 2.0 * seq[1..].iter().sum::<f64>();
            assert!((total - 1.0).abs() < 1e-13, "z = {z}: {total}");
        }
    }

    #[test]
    fn i0_minus_one_small_argument() {
        // I_0(z) − 1 = z²/4 + z⁴/64 + …
        let z = 1e-6;
        assert!((bessel_i0_minus_one(z) - (z * z / 4.0 + z.powi(4) / 64.0)).abs() < 1e-30);
        let z = 1.7;
        let direct = scaled_bessel_i(0, z) * z.exp() - 1.0;
        assert!((bessel_i0_minus_one(z) - direct).abs() < 1e-14);
    }

    #[test]
    fn bessel_over_power_small_t_limit() {
        assert!((scaled_bessel_i_over_power(3, 1e-12) - 1.0 / 6.0).abs() < 1e-12);
        let t = 0.9;
        let direct = scaled_bessel_i(4, 2.0 * t) / t.powi(4);
        assert!((scaled_bessel_i_over_power(4, t) - direct).abs() < 1e-15);
    }
}
