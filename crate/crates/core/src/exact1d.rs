//! Closed-form 1D backend on the unit interval: Dirichlet modes, Robin
//! eigenvalues from the secular equation, the three-term large-parameter
//! expansion, and the exact boundary torsion solve.
//!
//! Sign convention, fixed once for the whole crate: the outward normal
//! derivative at x = 0 is -d/dx and at x = 1 it is +d/dx.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One eigenmode of the interval (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Mode1D {
    /// Mode index, starting at 1.
    pub n: usize,
    /// Eigenvalue: n^2 pi^2 for Dirichlet, the secular root for Robin.
    pub lambda: f64,
    /// Robin parameter; `None` marks a Dirichlet mode.
    pub alpha: Option<f64>,
    /// Outward normal derivative of the L2-normalized eigenfunction at the
    /// two endpoints: (-phi'(0), +phi'(1)).
    pub trace_derivative: (f64, f64),
}

impl Mode1D {
    /// Boundary values (phi(0), phi(1)) of the L2-normalized eigenfunction.
    /// Zero for Dirichlet modes; recovered from the Robin condition
    /// d_nu phi = -alpha phi otherwise.
    pub fn boundary_values(&self) -> (f64, f64) {
        match self.alpha {
            None => (0.0, 0.0),
            Some(alpha) => (
                -self.trace_derivative.0 / alpha,
                -self.trace_derivative.1 / alpha,
            ),
        }
    }

    /// Squared L2 norm of the normal derivative over the two-point boundary.
    pub fn flux_sq(&self) -> f64 {
        self.trace_derivative.0.powi(2) + self.trace_derivative.1.powi(2)
    }
}

/// Secular function of the Robin problem on (0,1):
/// alpha^2 + 2 alpha sqrt(lambda) cot sqrt(lambda) - lambda.
pub fn secular(lambda: f64, alpha: f64) -> f64 {
    let s = lambda.sqrt();
    alpha * alpha + 2.0 * alpha * s * (s.cos() / s.sin()) - lambda
}

fn secular_prime(lambda: f64, alpha: f64) -> f64 {
    let s = lambda.sqrt();
    let cot = s.cos() / s.sin();
    // d/dlambda [sqrt(l) cot sqrt(l)] = (cot s - s (1 + cot^2 s)) / (2 s)
    alpha * (cot - s * (1.0 + cot * cot)) / s - 1.0
}

/// n-th Robin eigenvalue of (0,1): the unique secular root in
/// ((n-1)^2 pi^2, n^2 pi^2). Bisection to width 1e-8, then Newton polish.
pub fn robin_eigen_1d(n: usize, alpha: f64, tol: f64) -> Result<Mode1D> {
    if n < 1 {
        return Err(Error::OutOfRange("mode index must be >= 1".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::OutOfRange("alpha must be positive".into()));
    }
    if !(tol >= 1e-14) {
        return Err(Error::OutOfRange("tol must be >= 1e-14".into()));
    }
    let nf = n as f64;
    let upper = nf * nf * PI * PI;
    let lower = (nf - 1.0) * (nf - 1.0) * PI * PI;
    // inset dodges the cotangent poles at the cluster endpoints
    let eps = 1e-9 * upper;
    let (mut lo, mut hi) = (lower + eps, upper - eps);
    let (flo, fhi) = (secular(lo, alpha), secular(hi, alpha));
    if !(flo.is_finite() && fhi.is_finite()) || flo * fhi > 0.0 {
        return Err(Error::BracketFailure { lo, hi, flo, fhi });
    }
    // flo > 0 > fhi: the secular function decreases across the root
    let mut iter = 0usize;
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if secular(mid, alpha) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
        if iter > 200 {
            return Err(Error::NoConvergence(iter));
        }
    }
    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..50 {
        let f = secular(lambda, alpha);
        let fp = secular_prime(lambda, alpha);
        let step = f / fp;
        let next = (lambda - step).clamp(lower + eps, upper - eps);
        if (next - lambda).abs() <= tol * lambda.max(1.0) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    // residual check in the tol-scaled sense: the secular function has slope
    // ~ alpha^2/lambda near the root, so scale by that
    let scale = (alpha * alpha + lambda).max(1.0);
    if secular(lambda, alpha).abs() > 1e6 * tol * scale {
        return Err(Error::NoConvergence(50));
    }
    Ok(robin_mode_from_lambda(n, alpha, lambda))
}

/// Builds the normalized Robin mode phi(x) = c0 (cos(sx) + (alpha/s) sin(sx)).
fn robin_mode_from_lambda(n: usize, alpha: f64, lambda: f64) -> Mode1D {
    let s = lambda.sqrt();
    let q = alpha / s;
    // closed-form squared L2 norm of cos(sx) + q sin(sx) on (0,1)
    let sin2 = (2.0 * s).sin();
    let norm_sq = 0.5 + sin2 / (4.0 * s) + q * q * (0.5 - sin2 / (4.0 * s))
        + q * s.sin().powi(2) / s;
    let c0 = 1.0 / norm_sq.sqrt();
    let phi0 = c0;
    let phi1 = c0 * (s.cos() + q * s.sin());
    Mode1D {
        n,
        lambda,
        alpha: Some(alpha),
        trace_derivative: (-alpha * phi0, -alpha * phi1),
    }
}

/// n-th Dirichlet mode of (0,1): lambda = n^2 pi^2, phi = sqrt(2) sin(n pi x).
pub fn dirichlet_mode_1d(n: usize) -> Result<Mode1D> {
    if n < 1 {
        return Err(Error::OutOfRange("mode index must be >= 1".into()));
    }
    let nf = n as f64;
    let d = std::f64::consts::SQRT_2 * nf * PI;
    let sign1 = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Mode1D {
        n,
        lambda: nf * nf * PI * PI,
        alpha: None,
        trace_derivative: (-d, sign1 * d),
    })
}

/// Partial sums of the large-alpha expansion of the n-th Robin eigenvalue:
/// (n^2 pi^2,  n^2 pi^2 - 4 n^2 pi^2/alpha,  ... + 12 n^2 pi^2/alpha^2).
pub fn expansion_1d(n: usize, alpha: f64) -> (f64, f64, f64) {
    let l = (n * n) as f64 * PI * PI;
    let first = l - 4.0 * l / alpha;
    (l, first, first + 12.0 * l / (alpha * alpha))
}

/// Robin eigenvalue on a general interval (0, len) by the scaling law
/// lambda_{(0,len)}^alpha = lambda_{(0,1)}^{alpha len} / len^2.
pub fn robin_eigen_interval(n: usize, alpha: f64, len: f64, tol: f64) -> Result<f64> {
    if !(len > 0.0) {
        return Err(Error::OutOfRange("interval length must be positive".into()));
    }
    Ok(robin_eigen_1d(n, alpha * len, tol)?.lambda / (len * len))
}

/// Exact solution of the boundary torsion problem on (0,1): the minimizer is
/// affine, U(x) = a + b x, fixed by the two Robin endpoint conditions
/// -b + alpha a = f(0) and b + alpha (a + b) = f(1).
#[derive(Debug, Clone, PartialEq)]
pub struct Torsion1D {
    pub alpha: f64,
    /// Boundary datum (f(0), f(1)).
    pub f: (f64, f64),
    /// Affine coefficients (a, b) of the minimizer.
    pub u: (f64, f64),
    /// Torsion value f(0) U(0) + f(1) U(1).
    pub t: f64,
}

impl Torsion1D {
    pub fn u_at(&self, x: f64) -> f64 {
        self.u.0 + self.u.1 * x
    }

    /// Boundary values of the minimizer.
    pub fn u_boundary(&self) -> (f64, f64) {
        (self.u.0, self.u.0 + self.u.1)
    }

    /// Dirichlet energy of the minimizer: integral of |U'|^2 = b^2.
    pub fn grad_energy(&self) -> f64 {
        self.u.1 * self.u.1
    }

    /// alpha * (U(0)^2 + U(1)^2).
    pub fn boundary_energy(&self) -> f64 {
        let (u0, u1) = self.u_boundary();
        self.alpha * (u0 * u0 + u1 * u1)
    }

    /// Squared L2(0,1) norm of the minimizer.
    pub fn u_l2_sq(&self) -> f64 {
        let (a, b) = self.u;
        a * a + a * b + b * b / 3.0
    }
}

/// Solves the 2x2 endpoint system exactly; nonsingular for every alpha > 0.
pub fn torsion_1d(alpha: f64, f: (f64, f64)) -> Result<Torsion1D> {
    if !(alpha > 0.0) {
        return Err(Error::OutOfRange("alpha must be positive".into()));
    }
    // [alpha, -1; alpha, 1 + alpha] (a, b)^T = (f0, f1)^T, det = alpha (2 + alpha)
    let det = alpha * (2.0 + alpha);
    let a = ((1.0 + alpha) * f.0 + f.1) / det;
    let b = (-alpha * f.0 + alpha * f.1) / det;
    let t = f.0 * a + f.1 * (a + b);
    Ok(Torsion1D { alpha, f, u: (a, b), t })
}
