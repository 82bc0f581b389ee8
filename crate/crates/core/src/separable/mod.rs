//! Machine-precision Robin/Dirichlet spectra on rectangles (tensor products
//! of 1D modes) and disks (Bessel secular equations), plus the closed-form
//! boundary Gram integrals on rectangles.
//!
//! Rectangle Robin separability: a product u(x) v(y) of 1D Robin
//! eigenfunctions on (0,lx) and (0,ly) with the same parameter satisfies the
//! 2D weak Robin formulation on the rectangle, and such products exhaust
//! L2; see docs/theory.md for the two-line integration-by-parts argument.

pub mod bessel;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exact1d;

pub use bessel::{bessel_j, bessel_zero, bessel_zeros};

/// Tensor eigenmode of the rectangle (0, lx) x (0, ly).
#[derive(Debug, Clone, PartialEq)]
pub struct RectMode {
    /// x-index (>= 1).
    pub n: usize,
    /// y-index (>= 1).
    pub m: usize,
    pub lambda: f64,
    pub alpha: Option<f64>,
    pub lx: f64,
    pub ly: f64,
}

/// Eigenmode of the disk of radius r: angular index k, radial index s.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskMode {
    pub k: usize,
    pub s: usize,
    pub lambda: f64,
    pub alpha: Option<f64>,
    pub r: f64,
    /// 1 for k = 0, 2 otherwise.
    pub multiplicity: usize,
}

fn check_sides(lx: f64, ly: f64, count: usize) -> Result<()> {
    if !(lx > 0.0 && ly > 0.0) {
        return Err(Error::OutOfRange("rectangle sides must be positive".into()));
    }
    if count < 1 {
        return Err(Error::OutOfRange("count must be >= 1".into()));
    }
    Ok(())
}

/// First `count` Dirichlet eigenvalues of the rectangle, ascending, ties
/// ordered by (n, m) lexicographically.
pub fn rect_dirichlet_spectrum(lx: f64, ly: f64, count: usize) -> Result<Vec<RectMode>> {
    check_sides(lx, ly, count)?;
    let lam = |n: usize, m: usize| {
        (n as f64 * PI / lx).powi(2) + (m as f64 * PI / ly).powi(2)
    };
    let modes = enumerate_sorted(count, lam)?;
    Ok(modes
        .into_iter()
        .map(|(lambda, n, m)| RectMode { n, m, lambda, alpha: None, lx, ly })
        .collect())
}

/// First `count` Robin eigenvalues of the rectangle: sums of 1D Robin
/// eigenvalues on the two sides via the interval scaling law.
pub fn rect_robin_spectrum(lx: f64, ly: f64, alpha: f64, count: usize) -> Result<Vec<RectMode>> {
    check_sides(lx, ly, count)?;
    if !(alpha > 0.0) {
        return Err(Error::OutOfRange("alpha must be positive".into()));
    }
    // memoized 1D eigenvalues per index
    let mut cache_x: Vec<f64> = Vec::new();
    let mut cache_y: Vec<f64> = Vec::new();
    let get = |idx: usize, axis: usize, cache_x: &mut Vec<f64>, cache_y: &mut Vec<f64>| -> Result<f64> {
        let (cache, len) = if axis == 0 { (cache_x, lx) } else { (cache_y, ly) };
        while cache.len() < idx {
            let n = cache.len() + 1;
            cache.push(exact1d::robin_eigen_interval(n, alpha, len, 1e-14)?);
        }
        Ok(cache[idx - 1])
    };
    // the Robin value lies above the previous Dirichlet value, which gives a
    // safe lower bound for the no-missed-eigenvalue enumeration
    let mut err: Option<Error> = None;
    let lam = |n: usize, m: usize| -> f64 {
        match (
            get(n, 0, &mut cache_x, &mut cache_y),
            get(m, 1, &mut cache_x, &mut cache_y),
        ) {
            (Ok(a), Ok(b)) => a + b,
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                f64::INFINITY
            }
        }
    };
    let modes = enumerate_sorted(count, lam)?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(modes
        .into_iter()
        .map(|(lambda, n, m)| RectMode { n, m, lambda, alpha: Some(alpha), lx, ly })
        .collect())
}

/// Enumerates (n, m) index boxes until the smallest excluded candidate
/// exceeds the largest included one, then returns the `count` smallest
/// values sorted ascending with lexicographic tie order.
fn enumerate_sorted(
    count: usize,
    mut lam: impl FnMut(usize, usize) -> f64,
) -> Result<Vec<(f64, usize, usize)>> {
    // grow a square index box; the eigenvalue is increasing in each index,
    // so the box (1..=side)^2 misses nothing below min(lam(side+1,1), lam(1,side+1))
    let mut side = 2usize;
    loop {
        let mut vals: Vec<(f64, usize, usize)> = Vec::with_capacity(side * side);
        for n in 1..=side {
            for m in 1..=side {
                vals.push((lam(n, m), n, m));
            }
        }
        vals.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        if vals.len() >= count {
            let kth = vals[count - 1].0;
            let excluded = lam(side + 1, 1).min(lam(1, side + 1));
            if excluded > kth {
                vals.truncate(count);
                return Ok(vals);
            }
        }
        side *= 2;
        if side > 4096 {
            return Err(Error::Invalid("eigenvalue enumeration box overflow".into()));
        }
    }
}

/// Closed-form boundary Gram integral of two Dirichlet rectangle modes:
/// the L2(boundary) product of their outward normal derivatives.
///
/// Diagonal: 4 pi^2 (m^2/ly^3 + n^2/lx^3). It vanishes whenever both index
/// pairs differ, and in general
/// 2 pi^2 [ n i (1 + (-1)^{n+i}) / lx^3 delta_{mj} +
///          m j (1 + (-1)^{m+j}) / ly^3 delta_{ni} ].
pub fn rect_boundary_gram(a: &RectMode, b: &RectMode) -> Result<f64> {
    if a.alpha.is_some() || b.alpha.is_some() {
        return Err(Error::Invalid("boundary Gram is defined for Dirichlet modes".into()));
    }
    if a.lx != b.lx || a.ly != b.ly {
        return Err(Error::Invalid("modes live on different rectangles".into()));
    }
    let (lx, ly) = (a.lx, a.ly);
    let parity = |p: usize, q: usize| if (p + q) % 2 == 0 { 2.0 } else { 0.0 };
    let mut g = 0.0;
    if a.m == b.m {
        g += 2.0 * PI * PI * (a.n * b.n) as f64 * parity(a.n, b.n) / lx.powi(3);
    }
    if a.n == b.n {
        g += 2.0 * PI * PI * (a.m * b.m) as f64 * parity(a.m, b.m) / ly.powi(3);
    }
    Ok(g)
}

/// First `count` disk eigenvalues (Dirichlet when `alpha` is `None`), with
/// k >= 1 modes listed twice. Ties are ordered by (lambda, k, s).
pub fn disk_spectrum(r: f64, alpha: Option<f64>, count: usize) -> Result<Vec<DiskMode>> {
    if !(r > 0.0) {
        return Err(Error::OutOfRange("disk radius must be positive".into()));
    }
    if count < 1 {
        return Err(Error::OutOfRange("count must be >= 1".into()));
    }
    if let Some(a) = alpha {
        if !(a > 0.0) {
            return Err(Error::OutOfRange("alpha must be positive".into()));
        }
    }
    // Every eigenvalue of the (k, s) branch, Robin or Dirichlet, exceeds the
    // previous Dirichlet level (j_{k,s-1}/r)^2, so collecting all branches
    // whose previous level is at most the (count+1)-th k=0 Dirichlet level
    // misses nothing below the returned values.
    let smax = count + 1;
    let j0 = bessel_zeros(0, smax)?;
    let cutoff = (j0[smax - 1] / r).powi(2);
    let mut modes: Vec<DiskMode> = Vec::new();
    for k in 0..=bessel::MAX_ORDER {
        let mut want = smax.max(2);
        let mut zeros = bessel_zeros(k, want)?;
        while (zeros[zeros.len() - 2] / r).powi(2) <= cutoff {
            want *= 2;
            if want > 512 {
                return Err(Error::Invalid("disk spectrum enumeration overflow".into()));
            }
            zeros = bessel_zeros(k, want)?;
        }
        for s in 1..=zeros.len() {
            let prev = if s == 1 { 0.0 } else { zeros[s - 2] };
            if (prev / r).powi(2) > cutoff {
                break;
            }
            let lambda = match alpha {
                None => (zeros[s - 1] / r).powi(2),
                Some(a) => disk_robin_root(k, s, a, r, &zeros)?,
            };
            let mult = if k == 0 { 1 } else { 2 };
            for _ in 0..mult {
                modes.push(DiskMode { k, s, lambda, alpha, r, multiplicity: mult });
            }
        }
    }
    modes.sort_by(|a, b| {
        a.lambda
            .partial_cmp(&b.lambda)
            .unwrap()
            .then(a.k.cmp(&b.k))
            .then(a.s.cmp(&b.s))
    });
    if modes.len() < count {
        return Err(Error::Invalid("disk spectrum enumeration shortfall".into()));
    }
    modes.truncate(count);
    // branches above the order cap start at Neumann level >= (k/r)^2
    let order_bound = ((bessel::MAX_ORDER + 1) as f64 / r).powi(2);
    if modes[count - 1].lambda > order_bound {
        return Err(Error::OutOfRange(format!(
            "count {count} needs angular orders beyond {}",
            bessel::MAX_ORDER
        )));
    }
    Ok(modes)
}

/// Robin secular root for the disk: x J_k'(x) + alpha r J_k(x) = 0 with
/// x = sqrt(lambda) r, bracketed between consecutive zeros of J_k.
fn disk_robin_root(k: usize, s: usize, alpha: f64, r: f64, zeros: &[f64]) -> Result<f64> {
    let hi = zeros[s - 1];
    let lo = if s == 1 { 0.0 } else { zeros[s - 2] };
    let g = |x: f64| -> Result<f64> {
        let (j, jp) = bessel_j(k, x)?;
        Ok(x * jp + alpha * r * j)
    };
    let inset = 1e-9 * hi;
    let (mut a, mut b) = (lo + inset, hi - inset);
    let (fa, fb) = (g(a)?, g(b)?);
    if fa * fb > 0.0 {
        return Err(Error::BracketFailure { lo: a, hi: b, flo: fa, fhi: fb });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = g(mid)?;
        if fm * fa.signum() > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-13 * hi {
            break;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x / r).powi(2))
}

/// Radial part data of a normalized disk Dirichlet mode: the constant
/// normalizing c J_k(j_{k,s} r'/r) to unit L2(disk) norm, and the normal
/// derivative magnitude on the boundary circle.
///
/// For the L2-normalized mode, |d_nu phi| on the boundary equals
/// |c| (j/r) |J_k'(j)| times the angular factor (1 for k = 0,
/// sqrt(2) cos/sin(k theta) otherwise).
pub fn disk_mode_flux_amplitude(mode: &DiskMode) -> Result<f64> {
    let z = bessel_zero(mode.k, mode.s)?;
    let (_, jp) = bessel_j(mode.k, z)?;
    // int_0^r J_k(z t/r)^2 t dt = r^2 J_k'(z)^2 / 2 at a zero of J_k
    let radial_sq = mode.r * mode.r * jp * jp / 2.0;
    // angular: int cos^2(k th) dth = pi (k >= 1) or 2 pi (k = 0)
    let angular = if mode.k == 0 { 2.0 * PI } else { PI };
    let c = 1.0 / (radial_sq * angular).sqrt();
    Ok(c * (z / mode.r) * jp.abs())
}

/// L2(boundary) norm squared of the normal derivative of a normalized disk
/// Dirichlet mode, evaluated by trapezoid quadrature over the circle.
pub fn disk_flux_sq_integral(mode: &DiskMode, quad_points: usize) -> Result<f64> {
    if mode.alpha.is_some() {
        return Err(Error::Invalid("flux integral is defined for Dirichlet modes".into()));
    }
    let amp = disk_mode_flux_amplitude(mode)?;
    let k = mode.k as f64;
    let n = quad_points.max(16);
    let mut sum = 0.0;
    for i in 0..n {
        let theta = 2.0 * PI * i as f64 / n as f64;
        let ang = if mode.k == 0 {
            1.0
        } else {
            std::f64::consts::SQRT_2 * (k * theta).cos()
        };
        sum += (amp * ang).powi(2);
    }
    Ok(sum * 2.0 * PI * mode.r / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rect_dirichlet_degenerate_pair() {
        // on (0,1)x(0,2): (1,4) and (2,2) both give 5 pi^2
        let spec = rect_dirichlet_spectrum(1.0, 2.0, 12).unwrap();
        let five_pi2 = 5.0 * PI * PI;
        let pair: Vec<&RectMode> = spec
            .iter()
            .filter(|m| (m.lambda - five_pi2).abs() < 1e-9)
            .collect();
        assert_eq!(pair.len(), 2);
        assert_eq!((pair[0].n, pair[0].m), (1, 4));
        assert_eq!((pair[1].n, pair[1].m), (2, 2));
    }

    #[test]
    fn rect_dirichlet_ground_state() {
        let spec = rect_dirichlet_spectrum(1.0, 2.0, 1).unwrap();
        assert_eq!((spec[0].n, spec[0].m), (1, 1));
        assert_abs_diff_eq!(spec[0].lambda, PI * PI * 1.25, epsilon = 1e-12);
    }

    #[test]
    fn square_symmetry() {
        let spec = rect_dirichlet_spectrum(1.0, 1.0, 4).unwrap();
        // (1,2) and (2,1) coincide
        assert_abs_diff_eq!(spec[1].lambda, spec[2].lambda, epsilon = 1e-12);
        assert_eq!((spec[1].n, spec[1].m), (1, 2));
        assert_eq!((spec[2].n, spec[2].m), (2, 1));
    }

    #[test]
    fn no_missed_eigenvalue_on_elongated_rectangle() {
        // on (0,1)x(0,10) many y-modes precede the first x-excited mode
        let spec = rect_dirichlet_spectrum(1.0, 10.0, 25).unwrap();
        let brute: Vec<f64> = {
            let mut v = Vec::new();
            for n in 1..=40 {
                for m in 1..=400 {
                    v.push((n as f64 * PI).powi(2) + (m as f64 * PI / 10.0).powi(2));
                }
            }
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v.truncate(25);
            v
        };
        for (mode, want) in spec.iter().zip(brute) {
            assert_abs_diff_eq!(mode.lambda, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn robin_tensor_below_dirichlet_and_converging() {
        let dir = rect_dirichlet_spectrum(1.0, 2.0, 6).unwrap();
        let mut prev: Option<Vec<f64>> = None;
        for alpha in [1.0, 10.0, 100.0, 1000.0] {
            let rob = rect_robin_spectrum(1.0, 2.0, alpha, 6).unwrap();
            for (r, d) in rob.iter().zip(dir.iter()) {
                assert!(r.lambda < d.lambda + 1e-12);
            }
            if let Some(p) = prev {
                for (r, pl) in rob.iter().zip(p) {
                    assert!(r.lambda > pl, "spectrum must increase with alpha");
                }
            }
            prev = Some(rob.iter().map(|m| m.lambda).collect());
        }
    }

    #[test]
    fn robin_square_tensor_symmetry() {
        let rob = rect_robin_spectrum(1.0, 1.0, 17.0, 4).unwrap();
        assert_abs_diff_eq!(rob[1].lambda, rob[2].lambda, epsilon = 1e-11);
    }

    #[test]
    fn robin_splitting_of_degenerate_pair() {
        // the 5 pi^2 pair splits, (2,2) below (1,4)
        let rob = rect_robin_spectrum(1.0, 2.0, 1e4, 12).unwrap();
        let l14 = rob.iter().find(|m| (m.n, m.m) == (1, 4)).unwrap().lambda;
        let l22 = rob.iter().find(|m| (m.n, m.m) == (2, 2)).unwrap().lambda;
        assert!(l22 < l14);
    }

    #[test]
    fn boundary_gram_closed_forms() {
        let spec = rect_dirichlet_spectrum(1.0, 2.0, 12).unwrap();
        let m14 = spec.iter().find(|m| (m.n, m.m) == (1, 4)).unwrap();
        let m22 = spec.iter().find(|m| (m.n, m.m) == (2, 2)).unwrap();
        // diagonal: 4 pi^2 (m^2/ly^3 + n^2/lx^3)
        assert_abs_diff_eq!(
            rect_boundary_gram(m14, m14).unwrap(),
            12.0 * PI * PI,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            rect_boundary_gram(m22, m22).unwrap(),
            18.0 * PI * PI,
            epsilon = 1e-10
        );
        assert_eq!(rect_boundary_gram(m14, m22).unwrap(), 0.0);
    }

    #[test]
    fn boundary_gram_off_diagonal_vanishes_up_to_index_six() {
        // all degenerate-type pairs with n != i and m != j
        for n in 1..=6usize {
            for m in 1..=6usize {
                for i in 1..=6usize {
                    for j in 1..=6usize {
                        if n != i && m != j {
                            let a = RectMode { n, m, lambda: 0.0, alpha: None, lx: 1.0, ly: 2.0 };
                            let b = RectMode { n: i, m: j, lambda: 0.0, alpha: None, lx: 1.0, ly: 2.0 };
                            let g = rect_boundary_gram(&a, &b).unwrap();
                            assert!(g.abs() < 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn disk_dirichlet_ground_state() {
        let spec = disk_spectrum(1.0, None, 6).unwrap();
        let j01 = 2.4048255576957724f64;
        assert_abs_diff_eq!(spec[0].lambda, j01 * j01, epsilon = 1e-10);
        assert_eq!((spec[0].k, spec[0].s, spec[0].multiplicity), (0, 1, 1));
        // the next level is the k=1 doublet
        assert_eq!(spec[1].k, 1);
        assert_eq!(spec[2].k, 1);
        assert_abs_diff_eq!(spec[1].lambda, spec[2].lambda, epsilon = 1e-12);
    }

    #[test]
    fn disk_first_levels_ordering() {
        // frozen from the zero ladder: (k,s) levels in ascending order
        let spec = disk_spectrum(1.0, None, 10).unwrap();
        let labels: Vec<(usize, usize)> = spec.iter().map(|m| (m.k, m.s)).collect();
        assert_eq!(
            labels,
            vec![
                (0, 1),
                (1, 1),
                (1, 1),
                (2, 1),
                (2, 1),
                (0, 2),
                (3, 1),
                (3, 1),
                (1, 2),
                (1, 2)
            ]
        );
    }

    #[test]
    fn disk_robin_bracket_and_monotonicity() {
        let j01 = 2.4048255576957724f64;
        let lam_d = j01 * j01;
        let mut prev = 0.0;
        for alpha in [1.0, 10.0, 100.0, 1000.0] {
            let spec = disk_spectrum(1.0, Some(alpha), 1).unwrap();
            let lam = spec[0].lambda;
            assert!(lam < lam_d && lam > prev);
            prev = lam;
        }
        // paper-style first-order bracket at alpha = 1e3
        let spec = disk_spectrum(1.0, Some(1e3), 1).unwrap();
        assert!(spec[0].lambda > lam_d - 2.0 * (2.0 * lam_d) / 1e3);
    }

    #[test]
    fn disk_robin_doublet_multiplicity() {
        let spec = disk_spectrum(1.0, Some(25.0), 4).unwrap();
        let k1: Vec<&DiskMode> = spec.iter().filter(|m| m.k == 1).collect();
        assert_eq!(k1.len(), 2);
        assert_abs_diff_eq!(k1[0].lambda, k1[1].lambda, epsilon = 1e-12);
        assert_eq!(k1[0].multiplicity, 2);
    }

    #[test]
    fn disk_flux_integral_matches_rellich() {
        // on the unit disk the ground-mode flux integral is 2 lambda_1
        let spec = disk_spectrum(1.0, None, 1).unwrap();
        let quad = disk_flux_sq_integral(&spec[0], 256).unwrap();
        let rellich = 2.0 * spec[0].lambda;
        assert_abs_diff_eq!(quad, rellich, epsilon = 1e-9 * rellich);
        // and for a k=1 mode the identity still holds
        let spec = disk_spectrum(1.0, None, 3).unwrap();
        let quad = disk_flux_sq_integral(&spec[1], 512).unwrap();
        assert_abs_diff_eq!(quad, 2.0 * spec[1].lambda, epsilon = 1e-8 * spec[1].lambda);
    }

    #[test]
    fn scaled_disk_flux() {
        // Rellich on radius r: int (x . nu)(d_nu phi)^2 = 2 lambda, x . nu = r
        let spec = disk_spectrum(2.0, None, 1).unwrap();
        let quad = disk_flux_sq_integral(&spec[0], 256).unwrap();
        assert_abs_diff_eq!(
            quad,
            2.0 * spec[0].lambda / 2.0,
            epsilon = 1e-9 * spec[0].lambda
        );
    }
}
