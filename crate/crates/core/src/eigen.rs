//! Eigenvalues of dense real symmetric matrices.
//!
//! Matrices are row-major `n * n` slices. Two independent routes exist:
//! cyclic Jacobi, which keeps small eigenvalues of graded matrices
//! accurate, and Householder tridiagonalization followed by implicit QL,
//! which is much faster for large `n`.

use crate::error::{Error, Result};

/// Size up to which [`symmetric_eigenvalues`] uses Jacobi.
pub const JACOBI_MAX_DIM: usize = 256;

const MAX_SWEEPS: usize = 100;
const MAX_QL_ITERATIONS: usize = 60;

fn check_square(a: &[f64], n: usize) -> Result<()> {
    if a.len() != n * n {
        return Err(Error::InvalidArgument(format!(
            "matrix has {} entries, expected {n} x {n}",
            a.len()
        )));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    for i in 0..n {
        for j in 0..i {
            let (x, y) = (a[i * n + j], a[j * n + i]);
            if (x - y).abs() > 1e-12 * (1.0 + x.abs().max(y.abs())) {
                return Err(Error::InvalidArgument(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

fn sorted(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// Eigenvalues in ascending order, choosing the route by size.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    if n <= JACOBI_MAX_DIM {
        jacobi_eigenvalues(a, n)
    } else {
        tridiagonal_ql_eigenvalues(a, n)
    }
}

/// Cyclic Jacobi rotations, ascending eigenvalues.
///
/// A rotation is skipped once `|a_pq| <= eps * sqrt(|a_pp a_qq|)`, a relative
/// test that preserves tiny eigenvalues of diagonally graded matrices.
pub fn jacobi_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    check_square(a, n)?;
    let mut a = a.to_vec();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq == 0.0 || apq.abs() <= f64::EPSILON * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
        if !rotated {
            return Ok(sorted((0..n).map(|i| a[i * n + i]).collect()));
        }
    }
    Err(Error::Invariant("Jacobi iteration did not converge".into()))
}

/// Householder reduction to tridiagonal form, then implicit QL with Wilkinson
/// shifts. Ascending eigenvalues.
pub fn tridiagonal_ql_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    check_square(a, n)?;
    let (mut d, mut e) = tridiagonalize(a.to_vec(), n);
    ql_implicit(&mut d, &mut e)?;
    Ok(sorted(d))
}

/// Diagonal and subdiagonal (`e[i]` couples `i` and `i + 1`, last entry 0).
fn tridiagonalize(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    // shift so that e[i] sits between i and i + 1
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    (d, e)
}

fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
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
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::Invariant("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
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
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Symmetric test matrix with a known spectrum: Q diag(values) Q^T with
    /// Q a product of Householder reflections.
    fn with_spectrum(values: &[f64], seed: u64) -> Vec<f64> {
        let n = values.len();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = values[i];
        }
        let mut state = seed;
        for _ in 0..3 {
            let v: Vec<f64> = (0..n)
                .map(|_| {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                })
                .collect();
            let norm2: f64 = v.iter().map(|x| x * x).sum();
            // H = I - 2 v v^T / |v|^2, A <- H A H
            let mut ha = a.clone();
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| v[k] * a[k * n + j]).sum();
                for i in 0..n {
                    ha[i * n + j] = a[i * n + j] - 2.0 * v[i] * dot / norm2;
                }
            }
            for i in 0..n {
                let dot: f64 = (0..n).map(|k| ha[i * n + k] * v[k]).sum();
                for j in 0..n {
                    a[i * n + j] = ha[i * n + j] - 2.0 * dot * v[j] / norm2;
                }
            }
            for i in 0..n {
                for j in 0..i {
                    let m = 0.5 * (a[i * n + j] + a[j * n + i]);
                    a[i * n + j] = m;
                    a[j * n + i] = m;
                }
            }
        }
        a
    }

    #[test]
    fn two_by_two() {
        let a = [2.0, 1.0, 1.0, 2.0];
        assert!(close(
            &jacobi_eigenvalues(&a, 2).unwrap(),
            &[1.0, 3.0],
            1e-14
        ));
        assert!(close(
            &tridiagonal_ql_eigenvalues(&a, 2).unwrap(),
            &[1.0, 3.0],
            1e-14
        ));
    }

    #[test]
    fn trivial_sizes() {
        assert!(jacobi_eigenvalues(&[], 0).unwrap().is_empty());
        assert_eq!(jacobi_eigenvalues(&[5.0], 1).unwrap(), vec![5.0]);
        assert_eq!(tridiagonal_ql_eigenvalues(&[5.0], 1).unwrap(), vec![5.0]);
    }

    #[test]
    fn known_spectrum_both_routes() {
        let values: Vec<f64> = (0..24).map(|i| (i as f64 - 7.5) * 0.37).collect();
        let a = with_spectrum(&values, 11);
        let mut expect = values.clone();
        expect.sort_by(|a, b| a.total_cmp(b));
        assert!(close(&jacobi_eigenvalues(&a, 24).unwrap(), &expect, 1e-12));
        assert!(close(
            &tridiagonal_ql_eigenvalues(&a, 24).unwrap(),
            &expect,
            1e-12
        ));
    }

    #[test]
    fn repeated_eigenvalues() {
        let values = [1.0, 1.0, 1.0, 0.5, 0.5, 0.0, 2.0];
        let a = with_spectrum(&values, 3);
        let mut expect = values.to_vec();
        expect.sort_by(|a, b| a.total_cmp(b));
        assert!(close(&jacobi_eigenvalues(&a, 7).unwrap(), &expect, 1e-13));
        assert!(close(
            &tridiagonal_ql_eigenvalues(&a, 7).unwrap(),
            &expect,
            1e-13
        ));
    }

    #[test]
    fn path_laplacian() {
        // eigenvalues 2 - 2 cos(k pi / n), k = 0..n-1
        let n = 40;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            let deg = if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
            a[i * n + i] = deg;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        let mut expect: Vec<f64> = (0..n)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / n as f64).cos())
            .collect();
        expect.sort_by(|a, b| a.total_cmp(b));
        assert!(close(&jacobi_eigenvalues(&a, n).unwrap(), &expect, 1e-12));
        assert!(close(
            &tridiagonal_ql_eigenvalues(&a, n).unwrap(),
            &expect,
            1e-12
        ));
    }

    #[test]
    fn graded_matrix_keeps_small_eigenvalue() {
        // [[1, -1], [-1, 1 + d]] has smallest eigenvalue ~ d/2 for tiny d,
        // but a diagonal similarity exposes it through tiny entries:
        // [[e, -sqrt(e f)], [-sqrt(e f), f]] with e = 1e-20, f = 1 has
        // determinant 0, eigenvalues {0, 1 + 1e-20}.
        let (e, f) = (1e-20f64, 1.0f64);
        let g = 1e-30;
        let a = [e + g, -(e * f).sqrt(), -(e * f).sqrt(), f + g];
        let vals = jacobi_eigenvalues(&a, 2).unwrap();
        // exact smallest eigenvalue ~ g (1 + e) / (1 + e) ~ 1e-30 up to O(g^2)
        assert!((vals[0] - g).abs() < 1e-3 * g, "{vals:?}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(jacobi_eigenvalues(&[1.0, 2.0, 3.0], 2).is_err());
        assert!(jacobi_eigenvalues(&[1.0, 2.0, 0.0, 1.0], 2).is_err());
        assert!(tridiagonal_ql_eigenvalues(&[f64::NAN], 1).is_err());
    }
}
