//! Dense helpers shared by the structured eigensolvers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;

/// Largest absolute entry, 0 for an empty matrix.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// `max|a - b|` over entries.
pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter().zip(b.iter()).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Standard symplectic form `[[0, I], [-I, 0]]` on `2n` dimensions.
pub fn standard_omega(n: usize) -> Mat {
    let mut m = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = 1.0;
        m[(n + i, i)] = -1.0;
    }
    m
}

/// `(A + A^T) / 2`.
pub fn symmetrize(a: &Mat) -> Mat {
    (a + a.transpose()) * 0.5
}

/// `(A - A^T) / 2`.
pub fn antisymmetrize(a: &Mat) -> Mat {
    (a - a.transpose()) * 0.5
}

/// Ratio of extreme singular values; `inf` for a rank-deficient matrix.
pub fn condition_number(m: &Mat) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse of a square matrix, refusing when the condition estimate exceeds
/// `max_condition`.
pub fn guarded_inverse(m: &Mat, max_condition: f64) -> Result<Mat> {
    let condition = condition_number(m);
    if !(condition <= max_condition) {
        return Err(Error::SingularBasis { condition });
    }
    m.clone().try_inverse().ok_or(Error::SingularBasis { condition })
}

/// Square root and inverse square root of a symmetric positive-definite matrix.
pub fn spd_sqrt(m: &Mat) -> Option<(Mat, Mat)> {
    let eig = SymmetricEigen::new(symmetrize(m));
    let max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    if eig.eigenvalues.iter().any(|&e| !(e > 1e-14 * max.max(f64::MIN_POSITIVE))) {
        return None;
    }
    let v = &eig.eigenvectors;
    let sqrt = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|e| e.sqrt()));
    let inv_sqrt = sqrt.map(|s| 1.0 / s);
    let root = v * Mat::from_diagonal(&sqrt) * v.transpose();
    let inv_root = v * Mat::from_diagonal(&inv_sqrt) * v.transpose();
    Some((root, inv_root))
}

/// Square root of a symmetric positive-semidefinite matrix (negative roundoff
/// eigenvalues are clipped to zero).
pub fn psd_sqrt(m: &Mat) -> Mat {
    let eig = SymmetricEigen::new(symmetrize(m));
    let v = &eig.eigenvectors;
    let sqrt = eig.eigenvalues.map(|e| e.max(0.0).sqrt());
    v * Mat::from_diagonal(&sqrt) * v.transpose()
}

/// Orthonormal basis of the column space of `m`, dropping singular values
/// below `rel_tol * sigma_max`.
pub fn column_space(m: &Mat, rel_tol: f64) -> Mat {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > rel_tol * max).collect();
    Mat::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Orthonormal basis of the orthogonal complement of the column space of `m`
/// (`m` is `d x k` with full column rank).
pub fn orthogonal_complement(m: &Mat) -> Mat {
    let d = m.nrows();
    let q = column_space(m, 1e-12);
    let projector = Mat::identity(d, d) - &q * q.transpose();
    let eig = SymmetricEigen::new(symmetrize(&projector));
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let keep = d - q.ncols();
    Mat::from_fn(d, keep, |r, c| eig.eigenvectors[(r, idx[c])])
}

/// Real invariant-plane decomposition of a skew-symmetric matrix.
///
/// `basis` is orthogonal with columns ordered `(u_1, v_1, u_2, v_2, ...)`
/// such that `S u_k = -lambda_k v_k` and `S v_k = lambda_k u_k`, i.e. in that
/// basis `S` is block diagonal with blocks `[[0, lambda], [-lambda, 0]]`.
/// `lambdas` are non-negative and sorted descending.
#[derive(Debug, Clone)]
pub struct SkewPlanes {
    pub basis: Mat,
    pub lambdas: Vec<f64>,
}

impl SkewPlanes {
    /// Column indices `(u, v)` of plane `k` in `basis`.
    pub fn plane(&self, k: usize) -> (DVector<f64>, DVector<f64>) {
        (self.basis.column(2 * k).into_owned(), self.basis.column(2 * k + 1).into_owned())
    }
}

/// Decomposes a real skew-symmetric matrix through the Hermitian eigenproblem
/// of `iS`.
///
/// Eigenvalues below `1e-13 * max|lambda|` are treated as exact zero modes;
/// their real null space is orthonormalised and paired into planes with
/// `lambda = 0`.
pub fn skew_planes(s: &Mat) -> SkewPlanes {
    let d = s.nrows();
    assert_eq!(d, s.ncols(), "skew_planes needs a square matrix");
    assert!(d.is_multiple_of(2), "skew_planes needs an even dimension");
    let n = d / 2;
    let s = antisymmetrize(s);
    let h = DMatrix::<Complex64>::from_fn(d, d, |r, c| Complex64::new(0.0, s[(r, c)]));
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |a, e| a.max(e.abs()));
    let zero_tol = 1e-13 * scale.max(f64::MIN_POSITIVE);

    let mut basis = Mat::zeros(d, d);
    let mut lambdas = Vec::with_capacity(n);
    let sqrt2 = std::f64::consts::SQRT_2;
    for &i in order.iter().take(n) {
        let mu = eig.eigenvalues[i];
        if mu <= zero_tol {
            break;
        }
        let w = eig.eigenvectors.column(i);
        let mut u = DVector::from_iterator(d, w.iter().map(|z| sqrt2 * z.im));
        let mut v = DVector::from_iterator(d, w.iter().map(|z| sqrt2 * z.re));
        if leading_sign(&u) < 0.0 {
            u.neg_mut();
            v.neg_mut();
        }
        let k = lambdas.len();
        basis.set_column(2 * k, &u);
        basis.set_column(2 * k + 1, &v);
        lambdas.push(mu);
    }

    let found = lambdas.len();
    if found < n {
        // Null space: the remaining eigenvectors have |mu| <= zero_tol.
        let rest: Vec<usize> = order.iter().cloned().filter(|&i| eig.eigenvalues[i].abs() <= zero_tol).collect();
        let mut real = Mat::zeros(d, 2 * rest.len());
        for (j, &i) in rest.iter().enumerate() {
            let w = eig.eigenvectors.column(i);
            for r in 0..d {
                real[(r, 2 * j)] = w[r].re;
                real[(r, 2 * j + 1)] = w[r].im;
            }
        }
        let null = column_space(&real, 1e-8);
        let need = 2 * (n - found);
        // Fall back to the orthogonal complement of the found planes if the
        // eigenvector split was not clean.
        let null =
            if null.ncols() >= need { null } else { orthogonal_complement(&basis.columns(0, 2 * found).into_owned()) };
        for j in 0..need {
            basis.set_column(2 * found + j, &null.column(j));
        }
        lambdas.extend(std::iter::repeat_n(0.0, n - found));
    }
    SkewPlanes { basis, lambdas }
}

fn leading_sign(v: &DVector<f64>) -> f64 {
    let max = v.amax();
    v.iter().find(|x| x.abs() > 1e-8 * max).map(|x| x.signum()).unwrap_or(1.0)
}

/// Block-diagonal matrix `⊕_k [[a_k, b_k], [-b_k, a_k]]` in the interleaved
/// plane ordering used by [`SkewPlanes`].
pub fn plane_blocks(coeffs: &[(f64, f64)]) -> Mat {
    let d = 2 * coeffs.len();
    let mut m = Mat::zeros(d, d);
    for (k, &(a, b)) in coeffs.iter().enumerate() {
        m[(2 * k, 2 * k)] = a;
        m[(2 * k + 1, 2 * k + 1)] = a;
        m[(2 * k, 2 * k + 1)] = b;
        m[(2 * k + 1, 2 * k)] = -b;
    }
    m
}

/// Largest `|Re mu| / max|mu|` over the eigenvalues of a general real matrix,
/// computed with an unstructured Schur solver.
pub fn imaginary_axis_residual(m: &Mat) -> f64 {
    let ev = m.clone().complex_eigenvalues();
    let scale = ev.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    if scale == 0.0 {
        return 0.0;
    }
    ev.iter().fold(0.0_f64, |a, z| a.max(z.re.abs())) / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_planes_reconstructs_with_degeneracy() {
        // Two degenerate planes and one distinct one, rotated by an orthogonal matrix.
        let blocks = plane_blocks(&[(0.0, 2.0), (0.0, 2.0), (0.0, 0.7)]);
        let q = nalgebra::linalg::QR::new(Mat::from_fn(6, 6, |r, c| {
            ((r * 7 + c * 3) % 5) as f64 - 1.7 + (r == c) as u8 as f64
        }))
        .q();
        let s = &q * &blocks * q.transpose();
        let planes = skew_planes(&s);
        assert!((planes.lambdas[0] - 2.0).abs() < 1e-12);
        assert!((planes.lambdas[1] - 2.0).abs() < 1e-12);
        assert!((planes.lambdas[2] - 0.7).abs() < 1e-12);
        let d = plane_blocks(&planes.lambdas.iter().map(|&l| (0.0, l)).collect::<Vec<_>>());
        let rebuilt = &planes.basis * d * planes.basis.transpose();
        assert!(max_abs_diff(&rebuilt, &s) < 1e-12);
        let gram = planes.basis.transpose() * &planes.basis;
        assert!(max_abs_diff(&gram, &Mat::identity(6, 6)) < 1e-12);
    }

    #[test]
    fn skew_planes_handles_null_space() {
        let blocks = plane_blocks(&[(0.0, 1.5), (0.0, 0.0)]);
        let planes = skew_planes(&blocks);
        assert_eq!(planes.lambdas, vec![1.5, 0.0]);
        let gram = planes.basis.transpose() * &planes.basis;
        assert!(max_abs_diff(&gram, &Mat::identity(4, 4)) < 1e-12);
    }

    #[test]
    fn complement_is_orthogonal() {
        let m = Mat::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.0]);
        let c = orthogonal_complement(&m);
        assert_eq!(c.ncols(), 2);
        assert!(max_abs(&(m.transpose() * &c)) < 1e-12);
    }
}
