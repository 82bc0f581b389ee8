//! Bessel functions of the first kind J_k and their zeros, for the disk
//! spectra: orders 0..=20, arguments 0..=200, absolute error <= 1e-12.
//!
//! Two regimes: the ascending power series for small arguments, and Bessel's
//! integral J_k(x) = (1/pi) int_0^pi cos(k t - x sin t) dt evaluated by the
//! trapezoid rule elsewhere (the integrand extends to a smooth 2pi-periodic
//! function, so the rule converges spectrally once the oscillations are
//! resolved).

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 20;
pub const MAX_ARG: f64 = 200.0;

const SERIES_CUTOFF: f64 = 9.0;

/// J_k(x) and J_k'(x). The derivative comes from the recurrence
/// J_k' = (J_{k-1} - J_{k+1})/2 for k >= 1 and J_0' = -J_1.
pub fn bessel_j(k: usize, x: f64) -> Result<(f64, f64)> {
    if k > MAX_ORDER {
        return Err(Error::OutOfRange(format!("Bessel order {k} > {MAX_ORDER}")));
    }
    if !(0.0..=MAX_ARG).contains(&x) {
        return Err(Error::OutOfRange(format!("Bessel argument {x} outside [0, {MAX_ARG}]")));
    }
    if x == 0.0 {
        let j = if k == 0 { 1.0 } else { 0.0 };
        let jp = match k {
            0 => 0.0,
            1 => 0.5,
            _ => 0.0,
        };
        return Ok((j, jp));
    }
    let eval = |order: usize| -> f64 {
        if x <= SERIES_CUTOFF {
            series_jk(order, x)
        } else {
            integral_jk(order, x)
        }
    };
    let jk = eval(k);
    let jp = if k == 0 {
        -eval(1)
    } else {
        0.5 * (eval(k - 1) - eval(k + 1))
    };
    Ok((jk, jp))
}

/// Ascending series: sum_j (-1)^j (x/2)^{k+2j} / (j! (k+j)!).
fn series_jk(k: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    // leading coefficient (x/2)^k / k!
    let mut term = 1.0;
    for i in 1..=k {
        term *= half / i as f64;
    }
    let mut sum = term;
    let x2 = half * half;
    let mut j = 1.0;
    loop {
        term *= -x2 / (j * (j + k as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-3) {
            break;
        }
        j += 1.0;
        if j > 400.0 {
            break;
        }
    }
    sum
}

/// Bessel's integral by the trapezoid rule on [0, pi].
fn integral_jk(k: usize, x: f64) -> f64 {
    // resolve roughly (x + k)/(2 pi) oscillations, with generous margin
    let n = (1.4 * (x + k as f64)) as usize + 60;
    let h = PI / n as f64;
    let kf = k as f64;
    let f = |t: f64| (kf * t - x * t.sin()).cos();
    let mut sum = 0.5 * (f(0.0) + f(PI));
    for i in 1..n {
        sum += f(i as f64 * h);
    }
    sum * h / PI
}

/// s-th positive zero of J_k (s >= 1), via a McMahon-seeded Newton ladder:
/// the k = 0 row comes from McMahon + Newton, and higher orders are bracketed
/// by the interlacing property j_{k-1,s} < j_{k,s} < j_{k-1,s+1}.
pub fn bessel_zero(k: usize, s: usize) -> Result<f64> {
    if s < 1 {
        return Err(Error::OutOfRange("zero index must be >= 1".into()));
    }
    let zeros = bessel_zeros(k, s)?;
    Ok(zeros[s - 1])
}

/// First `count` positive zeros of J_k, ascending.
pub fn bessel_zeros(k: usize, count: usize) -> Result<Vec<f64>> {
    if k > MAX_ORDER {
        return Err(Error::OutOfRange(format!("Bessel order {k} > {MAX_ORDER}")));
    }
    // row 0 needs count + k zeros to feed the interlacing ladder
    let mut row: Vec<f64> = (1..=count + k).map(mcmahon_j0_seed).collect();
    for z in row.iter_mut() {
        *z = newton_zero(0, *z, None)?;
    }
    for order in 1..=k {
        let needed = count + k - order;
        let mut next_row = Vec::with_capacity(needed);
        for s in 0..needed {
            let (lo, hi) = (row[s], row[s + 1]);
            let z = bracketed_zero(order, lo, hi)?;
            next_row.push(z);
        }
        row = next_row;
    }
    row.truncate(count);
    Ok(row)
}

/// McMahon's expansion for the s-th zero of J_0.
fn mcmahon_j0_seed(s: usize) -> f64 {
    let beta = (s as f64 - 0.25) * PI;
    let b8 = 8.0 * beta;
    beta + 1.0 / b8 - 124.0 / (3.0 * b8.powi(3)) + 120928.0 / (15.0 * b8.powi(5))
}

fn newton_zero(k: usize, seed: f64, bracket: Option<(f64, f64)>) -> Result<f64> {
    let mut x = seed;
    for _ in 0..60 {
        let (j, jp) = bessel_j(k, x.clamp(1e-12, MAX_ARG))?;
        if jp == 0.0 {
            break;
        }
        let mut next = x - j / jp;
        if let Some((lo, hi)) = bracket {
            if !(lo..=hi).contains(&next) {
                next = 0.5 * (lo + hi);
            }
        }
        if (next - x).abs() < 1e-14 * x.max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NoConvergence(60))
}

fn bracketed_zero(k: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    let inset = 1e-10 * hi;
    lo += inset;
    hi -= inset;
    let flo = bessel_j(k, lo)?.0;
    let fhi = bessel_j(k, hi)?.0;
    if flo * fhi > 0.0 {
        return Err(Error::BracketFailure { lo, hi, flo, fhi });
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = bessel_j(k, mid)?.0;
        if fm * flo.signum() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-6 {
            break;
        }
    }
    newton_zero(k, 0.5 * (lo + hi), Some((lo, hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), (1.0, 0.0));
        assert_eq!(bessel_j(1, 0.0).unwrap(), (0.0, 0.5));
        assert_eq!(bessel_j(5, 0.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn first_j0_zero() {
        let (j, jp) = bessel_j(0, 2.404825557695773).unwrap();
        assert!(j.abs() < 1e-10, "J_0 at its first zero: {j}");
        assert!(jp < 0.0);
        assert_abs_diff_eq!(jp, -0.5191474972894667, epsilon = 1e-12);
    }

    #[test]
    fn reference_values() {
        // frozen reference table
        let table: &[(usize, f64, f64, f64)] = &[
            (0, 1.0, 0.7651976865579666, -0.44005058574493355),
            (1, 0.5, 0.2422684576748739, 0.45393289189106517),
            (5, 10.0, -0.2340615281867936, -0.10257192200861184),
            (20, 30.0, 0.004831019993404039, 0.12570536685880937),
            (2, 100.0, -0.02152875734450536, -0.07671477686722206),
            (10, 150.0, -0.020612788945218587, -0.06167003761237515),
            (0, 200.0, -0.015437439930565088, 0.05430453818237823),
            (20, 200.0, 0.03745093871086004, 0.042078850536124826),
            (7, 12.0, -0.17025380412720795, -0.14441004815466194),
            (12, 3.0, 2.275725448320573e-7, 8.836994830192167e-7),
        ];
        for &(k, x, jv, jpv) in table {
            let (j, jp) = bessel_j(k, x).unwrap();
            assert_abs_diff_eq!(j, jv, epsilon = 1e-12);
            assert_abs_diff_eq!(jp, jpv, epsilon = 1e-12);
        }
    }

    #[test]
    fn series_and_integral_agree_in_overlap() {
        for k in [0usize, 1, 3, 9, 17] {
            for x in [5.0, 7.0, 8.9] {
                let a = series_jk(k, x);
                let b = integral_jk(k, x);
                assert_abs_diff_eq!(a, b, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn recurrence_residual_small() {
        // 2k/x J_k = J_{k-1} + J_{k+1} probes the quadrature path
        for k in [1usize, 5, 15] {
            for x in [15.0, 60.0, 199.0] {
                let jm = bessel_j(k - 1, x).unwrap().0;
                let j = bessel_j(k, x).unwrap().0;
                let jp = bessel_j(k + 1, x).unwrap().0;
                let res = jm + jp - 2.0 * k as f64 / x * j;
                assert!(res.abs() < 1e-12, "k={k} x={x} residual {res}");
            }
        }
    }

    #[test]
    fn squared_sum_identity_small_x() {
        // J_0^2 + 2 sum_{k>=1} J_k^2 = 1; the tail above order 20 is
        // negligible for x <= 6
        for x in [0.5, 2.0, 6.0] {
            let mut sum = bessel_j(0, x).unwrap().0.powi(2);
            for k in 1..=MAX_ORDER {
                sum += 2.0 * bessel_j(k, x).unwrap().0.powi(2);
            }
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn j0_zeros_match_mcmahon_newton() {
        let zeros = bessel_zeros(0, 6).unwrap();
        let expected = [
            2.404825557695773,
            5.520078110286311,
            8.653727912911013,
            11.791534439014281,
            14.930917708487787,
            18.071063967910924,
        ];
        for (z, e) in zeros.iter().zip(expected) {
            assert_abs_diff_eq!(*z, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn zeros_interlace() {
        for k in 1..=8usize {
            let prev = bessel_zeros(k - 1, 5).unwrap();
            let cur = bessel_zeros(k, 4).unwrap();
            for s in 0..4 {
                assert!(prev[s] < cur[s] && cur[s] < prev[s + 1]);
            }
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(bessel_j(21, 1.0).is_err());
        assert!(bessel_j(0, 201.0).is_err());
        assert!(bessel_j(0, -1.0).is_err());
    }
}
