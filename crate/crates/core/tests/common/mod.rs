//! Reference computations that avoid the library's eigen path: a cyclic
//! Jacobi solver on the real `2d x 2d` embedding of a complex Hermitian matrix.

#![allow(dead_code)]

use qdiv_core::{ComplexMatrix, C64};

pub type Real = Vec<Vec<f64>>;

/// `[[Re, -Im], [Im, Re]]`.
pub fn embed(c: &ComplexMatrix) -> Real {
    let n = c.nrows();
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = c[(i, j)];
            m[i][j] = z.re;
            m[i + n][j + n] = z.re;
            m[i + n][j] = z.im;
            m[i][j + n] = -z.im;
        }
    }
    m
}

pub fn unembed(m: &Real) -> ComplexMatrix {
    let n = m.len() / 2;
    ComplexMatrix::from_fn(n, n, |i, j| C64::new(m[i][j], m[i + n][j]))
}

/// Eigenvalues and eigenvector columns of a real symmetric matrix.
pub fn jacobi(a: &Real) -> (Vec<f64>, Real) {
    let n = a.len();
    let mut a = a.clone();
    let mut v: Real = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let norm: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if off <= 1e-17 * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// `f(H)` for Hermitian `H`.
pub fn herm_fn(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let (vals, v) = jacobi(&embed(h));
    let n = vals.len();
    let fv: Vec<f64> = vals.iter().map(|&l| f(l)).collect();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = (0..n).map(|k| v[i][k] * fv[k] * v[j][k]).sum();
        }
    }
    unembed(&out)
}

/// Eigenvalues of a Hermitian matrix, each once, ascending.
pub fn herm_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let (mut vals, _) = jacobi(&embed(h));
    vals.sort_by(f64::total_cmp);
    vals.into_iter().step_by(2).collect()
}

/// Power on the support, zero on eigenvalues below `cut`.
pub fn pseudo_pow(h: &ComplexMatrix, p: f64, cut: f64) -> ComplexMatrix {
    herm_fn(h, |l| if l > cut { l.powf(p) } else { 0.0 })
}

pub fn trace(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

pub fn herm(m: ComplexMatrix) -> ComplexMatrix {
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn from_real(d: usize, rows: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_iterator(d, d, rows.iter().map(|&x| C64::new(x, 0.0)))
}

/// Row-major `vec` of `X`, so that `vec(A X C) = (A ⊗ C^T) vec(X)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = (a.nrows(), b.nrows());
    ComplexMatrix::from_fn(n * m, n * m, |i, j| a[(i / m, j / m)] * b[(i % m, j % m)])
}

pub fn vec_rows(x: &ComplexMatrix) -> Vec<C64> {
    let n = x.nrows();
    (0..n * n).map(|k| x[(k / n, k % n)]).collect()
}
