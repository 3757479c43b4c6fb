//! Eigen-solvers for Hermitian matrices: cyclic complex Jacobi (values and
//! vectors) and, for values only, Householder tridiagonalization of the real
//! symmetric embedding followed by implicit QL.

use alloc::vec;
use alloc::vec::Vec;

use super::{CMatrix, C64};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) and the matching eigenvectors as columns.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix required");
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if libm::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q, scale);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    let sorted_vals = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (sorted_vals, sorted_vecs)
}

fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, scale: f64) {
    let n = m.rows();
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag <= 1e-300 || mag <= 1e-18 * scale {
        return;
    }
    // Phase step: conjugate by diag(.., e^{-i phi} at q, ..) so a_pq is real.
    let ph = apq.conj() / mag;
    for k in 0..n {
        m[(k, q)] *= ph;
        v[(k, q)] *= ph;
    }
    for k in 0..n {
        m[(q, k)] *= ph.conj();
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 { 1.0 } else { -1.0 } / (theta.abs() + libm::sqrt(theta * theta + 1.0));
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;
    for k in 0..n {
        let (akp, akq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = akp * c - akq * s;
        m[(k, q)] = akp * s + akq * c;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
    for k in 0..n {
        let (apk, aqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = apk * c - aqk * s;
        m[(q, k)] = apk * s + aqk * c;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
}

/// Eigenvalues of a Hermitian matrix in descending order (no vectors).
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix required");
    if n == 0 {
        return Vec::new();
    }
    // [[Re, -Im], [Im, Re]] has every eigenvalue of A twice.
    let m = 2 * n;
    let mut s = vec![0.0f64; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = a[(r, c)];
            s[r * m + c] = z.re;
            s[(r + n) * m + c + n] = z.re;
            s[r * m + c + n] = -z.im;
            s[(r + n) * m + c] = z.im;
        }
    }
    let (mut d, mut e) = tridiagonalize(&mut s, m);
    tql(&mut d, &mut e);
    d.sort_by(|x, y| y.total_cmp(x));
    d.into_iter().step_by(2).collect()
}

/// Householder reduction of a real symmetric matrix (row-major, destroyed)
/// to tridiagonal form: returns (diagonal, sub-diagonal with `e[0] = 0`).
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let idx = |r: usize, c: usize| r * n + c;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[idx(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[idx(i, l)];
            } else {
                for k in 0..=l {
                    a[idx(i, k)] /= scale;
                    h += a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                let g = if f >= 0.0 { -libm::sqrt(h) } else { libm::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                a[idx(i, l)] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in j + 1..=l {
                        g += a[idx(k, j)] * a[idx(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * a[idx(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[idx(j, k)] -= f * e[k] + g * a[idx(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[idx(i, l)];
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for (i, di) in d.iter_mut().enumerate() {
        *di = a[idx(i, i)];
    }
    (d, e)
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
fn tql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Schatten 1-norm of a Hermitian matrix. Returns the bound
/// `sqrt(n) * ||A||_F` directly when that is already below `1e-12`.
pub fn hermitian_trace_norm(a: &CMatrix) -> f64 {
    let bound = libm::sqrt(a.rows() as f64) * a.frobenius_norm();
    if bound < 1e-12 {
        return bound;
    }
    hermitian_eigenvalues(a).iter().map(|x| x.abs()).sum()
}
