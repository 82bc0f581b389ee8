//! Dense symmetric eigensolver used by the FEM backend: Householder
//! tridiagonalization, implicit-shift QL for the eigenvalues, and inverse
//! iteration (with cluster reorthogonalization) for the requested lowest
//! eigenvectors. Deterministic, no iterative/sparse machinery.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Lowest `k` eigenpairs of the generalized problem S u = lambda M u with
/// M symmetric positive definite. Returned eigenvectors are M-orthonormal.
pub fn sym_generalized_eigs(
    s: &DMatrix<f64>,
    m: &DMatrix<f64>,
    k: usize,
) -> Result<(Vec<f64>, Vec<DVector<f64>>)> {
    let n = s.nrows();
    if s.ncols() != n || m.nrows() != n || m.ncols() != n {
        return Err(Error::SolverFailure("matrix dimensions mismatch".into()));
    }
    if k > n {
        return Err(Error::SolverFailure(format!("requested {k} eigenpairs of a {n}-dim problem")));
    }
    let chol = nalgebra::Cholesky::new(m.clone())
        .ok_or_else(|| Error::SolverFailure("mass matrix not positive definite".into()))?;
    let l = chol.l();
    // A = L^{-1} S L^{-T}
    let mut a = l
        .solve_lower_triangular(s)
        .ok_or_else(|| Error::SolverFailure("singular Cholesky factor".into()))?;
    a.transpose_mut();
    a = l
        .solve_lower_triangular(&a)
        .ok_or_else(|| Error::SolverFailure("singular Cholesky factor".into()))?;
    // a is now L^{-1} S L^{-T} up to roundoff; symmetrize
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let (values, vectors) = sym_eigs_lowest(&mut a, k)?;
    // back-substitute u = L^{-T} y and M-orthonormalize
    let lt = l.transpose();
    let mut out = Vec::with_capacity(k);
    for y in vectors {
        let u = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::SolverFailure("singular Cholesky factor".into()))?;
        out.push(u);
    }
    m_orthonormalize(&mut out, &values, m);
    Ok((values, out))
}

/// Modified Gram-Schmidt in the M inner product, applied within groups of
/// close eigenvalues (discretely split multiplicities).
fn m_orthonormalize(vecs: &mut [DVector<f64>], values: &[f64], m: &DMatrix<f64>) {
    let k = vecs.len();
    let mut group_start = 0usize;
    for i in 0..k {
        let close = i > 0 && (values[i] - values[i - 1]).abs() <= 1e-6 * (1.0 + values[i].abs());
        if !close {
            group_start = i;
        }
        for j in group_start..i {
            let mv = m * &vecs[i];
            let c = vecs[j].dot(&mv);
            let prev = vecs[j].clone();
            vecs[i] -= prev * c;
        }
        let norm = (vecs[i].dot(&(m * &vecs[i]))).sqrt();
        vecs[i] /= norm;
    }
}

/// Lowest `k` eigenpairs of a dense symmetric matrix (destroyed in place).
pub fn sym_eigs_lowest(a: &mut DMatrix<f64>, k: usize) -> Result<(Vec<f64>, Vec<DVector<f64>>)> {
    let n = a.nrows();
    if k == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let (mut d, mut e) = householder_tridiag(a);
    let mut dq = d.clone();
    let mut eq = e.clone();
    ql_eigenvalues(&mut dq, &mut eq)?;
    dq.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let wanted = &dq[..k];
    // inverse iteration on the tridiagonal, orthogonalizing within clusters
    let mut tnorm = 0.0f64;
    for i in 0..n {
        tnorm = tnorm.max(d[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 });
    }
    if tnorm == 0.0 {
        tnorm = 1.0;
    }
    let mut tri_vecs: Vec<DVector<f64>> = Vec::with_capacity(k);
    let mut cluster_start = 0usize;
    for (idx, &lam) in wanted.iter().enumerate() {
        let close = idx > 0 && (lam - wanted[idx - 1]).abs() <= 1e-10 * tnorm;
        if !close {
            cluster_start = idx;
        }
        // shift perturbation separates exactly coincident shifts
        let shift = lam + (idx - cluster_start) as f64 * 1e-12 * tnorm;
        let v = tridiag_inverse_iteration(&d, &e, shift, &tri_vecs[cluster_start..idx], tnorm)?;
        tri_vecs.push(v);
    }
    // back-transform through the stored Householder reflectors
    let vectors: Vec<DVector<f64>> = tri_vecs
        .into_iter()
        .map(|v| apply_householder(a, v))
        .collect();
    // keep d, e alive for clarity of ownership
    let _ = (&mut d, &mut e);
    Ok((wanted.to_vec(), vectors))
}

/// Householder reduction to symmetric tridiagonal form. Returns the diagonal
/// and subdiagonal; the reflectors stay packed in the lower triangle of `a`
/// with their scalar factors on the superdiagonal side of row storage.
fn householder_tridiag(a: &mut DMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = a.nrows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut work = vec![0.0; n];
    for col in 0..n.saturating_sub(2) {
        // reflect rows col+1..n of column col
        let mut scale = 0.0;
        for i in col + 1..n {
            scale += a[(i, col)].abs();
        }
        if scale == 0.0 {
            e[col] = 0.0;
            continue;
        }
        let mut h = 0.0;
        for i in col + 1..n {
            a[(i, col)] /= scale;
            h += a[(i, col)] * a[(i, col)];
        }
        let mut f = a[(col + 1, col)];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[col] = scale * g;
        h -= f * g;
        a[(col + 1, col)] = f - g;
        // p = A v / h, accumulate K = v^T p / (2h)
        let mut kacc = 0.0;
        for i in col + 1..n {
            let mut s = 0.0;
            for j in col + 1..=i {
                s += a[(i, j)] * a[(j, col)];
            }
            for j in i + 1..n {
                s += a[(j, i)] * a[(j, col)];
            }
            work[i] = s / h;
            kacc += work[i] * a[(i, col)];
        }
        kacc /= 2.0 * h;
        // q = p - K v; A <- A - v q^T - q v^T
        for i in col + 1..n {
            work[i] -= kacc * a[(i, col)];
        }
        for i in col + 1..n {
            f = a[(i, col)];
            let q = work[i];
            for j in col + 1..=i {
                a[(i, j)] -= f * work[j] + q * a[(j, col)];
            }
        }
        // store h for the back transform
        work[col] = h;
        a[(col, col + 1)] = h; // stash in upper triangle
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1, n - 2)];
    }
    for i in 0..n {
        d[i] = a[(i, i)];
    }
    (d, e)
}

/// Applies the stored Householder reflectors to a tridiagonal-basis vector.
fn apply_householder(a: &DMatrix<f64>, mut v: DVector<f64>) -> DVector<f64> {
    let n = a.nrows();
    if n < 3 {
        return v;
    }
    for col in (0..n - 2).rev() {
        let h = a[(col, col + 1)];
        if h == 0.0 {
            continue;
        }
        let mut s = 0.0;
        for i in col + 1..n {
            s += a[(i, col)] * v[i];
        }
        s /= h;
        for i in col + 1..n {
            v[i] -= s * a[(i, col)];
        }
    }
    v
}

/// Implicit-shift QL sweep for all eigenvalues of a symmetric tridiagonal
/// matrix (diagonal d, subdiagonal e). Eigenvalues land in `d`, unsorted.
fn ql_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let mut ework = vec![0.0; n];
    ework[..n - 1].copy_from_slice(&e[..n.saturating_sub(1)]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if ework[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NoConvergence(50));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * ework[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + ework[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * ework[i];
                let b = c * ework[i];
                r = f.hypot(g);
                ework[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    ework[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if i == l {
                    d[l] -= p;
                    ework[l] = g;
                    ework[m] = 0.0;
                }
            }
        }
    }
    Ok(())
}

/// Inverse iteration for one eigenvector of the tridiagonal (d, e) at the
/// given shift, orthogonalized against earlier vectors of the same cluster.
fn tridiag_inverse_iteration(
    d: &[f64],
    e: &[f64],
    shift: f64,
    cluster: &[DVector<f64>],
    tnorm: f64,
) -> Result<DVector<f64>> {
    let n = d.len();
    // deterministic seed vector
    let mut v = DVector::from_fn(n, |i, _| {
        let x = (i as f64 + 1.0) * 0.754877666246693;
        2.0 * (x - x.floor()) - 1.0
    });
    normalize(&mut v);
    let mut last_norm = 0.0;
    for _ in 0..8 {
        let mut w = v.clone();
        solve_shifted_tridiag(d, e, shift, tnorm, &mut w)?;
        for q in cluster {
            let c = q.dot(&w);
            w -= q * c;
        }
        let norm = w.norm();
        if norm == 0.0 {
            // seed happened to be orthogonal to the target space
            v = DVector::from_fn(n, |i, _| ((i * 2654435761 + 1) % 1000) as f64 / 1000.0 - 0.5);
            normalize(&mut v);
            continue;
        }
        w /= norm;
        v = w;
        // growth factor ~ 1/(eps * separation); stop once amplification saturates
        if norm > 1.0 / (f64::EPSILON * 100.0) || (norm - last_norm).abs() < 1e-3 * norm {
            break;
        }
        last_norm = norm;
    }
    for q in cluster {
        let c = q.dot(&v);
        v -= q * c;
    }
    normalize(&mut v);
    Ok(v)
}

fn normalize(v: &mut DVector<f64>) {
    let n = v.norm();
    if n > 0.0 {
        *v /= n;
    }
}

/// Gaussian elimination with partial pivoting on (T - shift I) w = rhs for a
/// tridiagonal T; tiny pivots are perturbed, as usual for inverse iteration.
fn solve_shifted_tridiag(
    d: &[f64],
    e: &[f64],
    shift: f64,
    tnorm: f64,
    rhs: &mut DVector<f64>,
) -> Result<()> {
    let n = d.len();
    if n == 1 {
        let mut p = d[0] - shift;
        if p.abs() < f64::EPSILON * tnorm {
            p = f64::EPSILON * tnorm;
        }
        rhs[0] /= p;
        return Ok(());
    }
    // rows: (a_i, b_i, c_i) around the diagonal, with fill-in from pivoting
    let mut diag: Vec<f64> = d.iter().map(|&x| x - shift).collect();
    let mut upper = vec![0.0; n];
    let mut upper2 = vec![0.0; n];
    let mut lower = vec![0.0; n];
    upper[..n - 1].copy_from_slice(&e[..n - 1]);
    lower[..n - 1].copy_from_slice(&e[..n - 1]);
    // forward elimination with row swaps
    for i in 0..n - 1 {
        if lower[i].abs() > diag[i].abs() {
            // swap row i and i+1
            let (ri0, ri1, ri2) = (diag[i], upper[i], upper2[i]);
            diag[i] = lower[i];
            upper[i] = diag[i + 1];
            upper2[i] = upper[i + 1];
            diag[i + 1] = ri1;
            upper[i + 1] = ri2;
            diag.swap(i, i); // no-op, keeps shape explicit
            let tmp = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = tmp;
            // the eliminated row now is (ri0, ...) stored via multiplier below
            let mut piv = diag[i];
            if piv.abs() < f64::EPSILON * tnorm {
                piv = f64::EPSILON * tnorm;
                diag[i] = piv;
            }
            let mult = ri0 / piv;
            diag[i + 1] -= mult * upper[i];
            if i + 1 < n - 1 {
                upper[i + 1] -= mult * upper2[i];
            }
            let r = rhs[i];
            rhs[i + 1] -= mult * r;
        } else {
            let mut piv = diag[i];
            if piv.abs() < f64::EPSILON * tnorm {
                piv = f64::EPSILON * tnorm;
                diag[i] = piv;
            }
            let mult = lower[i] / piv;
            diag[i + 1] -= mult * upper[i];
            if i + 1 < n - 1 {
                // upper2[i] is zero here
            }
            let r = rhs[i];
            rhs[i + 1] -= mult * r;
        }
    }
    if diag[n - 1].abs() < f64::EPSILON * tnorm {
        diag[n - 1] = f64::EPSILON * tnorm;
    }
    // back substitution
    rhs[n - 1] /= diag[n - 1];
    if n >= 2 {
        rhs[n - 2] = (rhs[n - 2] - upper[n - 2] * rhs[n - 1]) / diag[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1] - upper2[i] * rhs[i + 2]) / diag[i];
    }
    Ok(())
}
