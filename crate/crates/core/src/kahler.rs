//! Phase spaces, Lie-algebra generators and their matrix functions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

/// Condition-number ceiling for every basis change in the crate.
pub const MAX_CONDITION: f64 = 1e12;

/// Relative threshold below which an eigenvalue counts as a zero mode.
pub const ZERO_MODE_TOL: f64 = 1e-10;

/// Particle statistics of a phase space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bosonic,
    Fermionic,
}

impl Statistics {
    /// Lie algebra of the quadratic generators.
    pub fn algebra(self) -> Algebra {
        match self {
            Statistics::Bosonic => Algebra::Symplectic,
            Statistics::Fermionic => Algebra::Orthogonal,
        }
    }

    pub fn partner(self) -> Statistics {
        match self {
            Statistics::Bosonic => Statistics::Fermionic,
            Statistics::Fermionic => Statistics::Bosonic,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Bosonic => "bosonic",
            Statistics::Fermionic => "fermionic",
        }
    }
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A `2N`-dimensional real phase space in the canonical basis
/// `(x_1..x_N, k_1..k_N)`, where `(x, k)` is `(q, p)` for bosons and
/// `(gamma, eta)` for fermions.
///
/// In this basis the symplectic form is `[[0, I], [-I, 0]]` and the metric is
/// the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct KahlerSpace {
    n_modes: usize,
    omega: Mat,
    gmetric: Mat,
}

impl KahlerSpace {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ParamOutOfRange("a phase space needs at least one mode".into()));
        }
        Ok(Self { n_modes, omega: linalg::standard_omega(n_modes), gmetric: Mat::identity(2 * n_modes, 2 * n_modes) })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Real dimension `2N`.
    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn omega(&self) -> &Mat {
        &self.omega
    }

    pub fn gmetric(&self) -> &Mat {
        &self.gmetric
    }

    /// Index of `x_site` in the canonical basis.
    pub fn x_index(&self, site: usize) -> usize {
        site
    }

    /// Index of `k_site` in the canonical basis.
    pub fn k_index(&self, site: usize) -> usize {
        self.n_modes + site
    }
}

/// The Lie algebra a generator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algebra {
    /// `K Omega = -Omega K^T`.
    Symplectic,
    /// `K G = -G K^T`.
    Orthogonal,
}

/// A generator `K` of the symplectic or orthogonal algebra, validated on
/// construction.
#[derive(Debug, Clone)]
pub struct Generator {
    matrix: Mat,
    algebra: Algebra,
}

impl Generator {
    /// Validates `‖K F + F K^T‖_max <= 1e-10 ‖K‖_max` for the fixed form `F`.
    pub fn new(matrix: Mat, algebra: Algebra) -> Result<Self> {
        let d = matrix.nrows();
        if d != matrix.ncols() || !d.is_multiple_of(2) || d == 0 {
            return Err(Error::DimensionMismatch(format!(
                "generator must be square with even dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let residual = algebra_residual(&matrix, algebra);
        if residual > 1e-10 * linalg::max_abs(&matrix) {
            return Err(Error::AlgebraViolation { residual });
        }
        Ok(Self { matrix, algebra })
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }
}

/// `‖K F + F K^T‖_max` with `F = Omega` or `G = I`.
pub fn algebra_residual(k: &Mat, algebra: Algebra) -> f64 {
    match algebra {
        Algebra::Symplectic => {
            let omega = linalg::standard_omega(k.nrows() / 2);
            linalg::max_abs(&(k * &omega + &omega * k.transpose()))
        }
        Algebra::Orthogonal => linalg::max_abs(&(k + k.transpose())),
    }
}

/// Whether zero modes abort a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroModePolicy {
    Reject,
    Allow,
}

/// `K = basis · ⊕_k λ_k [[0,1],[-1,0]] · inverse` with planes ordered by
/// descending `λ_k`.
#[derive(Debug, Clone)]
pub struct PlaneDecomposition {
    pub lambdas: Vec<f64>,
    /// Columns `(u_1, v_1, u_2, v_2, ...)`.
    pub basis: Mat,
    pub inverse: Mat,
    /// `‖K - basis·D·inverse‖_max / ‖K‖_max`.
    pub reconstruction_residual: f64,
}

impl PlaneDecomposition {
    pub fn n_modes(&self) -> usize {
        self.lambdas.len()
    }

    /// Plane `k` as a `2N x 2` matrix `[u_k | v_k]`.
    pub fn plane(&self, k: usize) -> Mat {
        self.basis.columns(2 * k, 2).into_owned()
    }
}

/// Decomposes a generator into invariant planes.
///
/// Orthogonal generators are skew in the canonical basis and are decomposed
/// directly. A symplectic generator `K = Omega h` must have `h` positive
/// definite; it is reduced to the skew matrix `h^{1/2} Omega h^{1/2}` and the
/// planes are mapped back through `h^{-1/2}`.
pub fn decompose_generator(k: &Generator, policy: ZeroModePolicy) -> Result<PlaneDecomposition> {
    match k.algebra {
        Algebra::Orthogonal => {
            let planes = linalg::skew_planes(&k.matrix);
            let inverse = planes.basis.transpose();
            finish(k, planes.lambdas, planes.basis, inverse, policy)
        }
        Algebra::Symplectic => {
            let h = linalg::symmetrize(&(-(linalg::standard_omega(k.n_modes()) * &k.matrix)));
            let Some((root, inv_root)) = linalg::spd_sqrt(&h) else {
                let lambdas = generator_spectrum(k)?;
                let (index, lambda) = smallest(&lambdas);
                return Err(if lambda <= ZERO_MODE_TOL * lambdas[0] {
                    Error::ZeroMode { index, lambda }
                } else {
                    Error::Incompatible("symplectic generator with indefinite quadratic form".into())
                });
            };
            let omega = linalg::standard_omega(k.n_modes());
            let planes = linalg::skew_planes(&(&root * &omega * &root));
            let basis = &inv_root * &planes.basis;
            let inverse = planes.basis.transpose() * &root;
            finish(k, planes.lambdas, basis, inverse, policy)
        }
    }
}

fn finish(
    k: &Generator,
    lambdas: Vec<f64>,
    basis: Mat,
    inverse: Mat,
    policy: ZeroModePolicy,
) -> Result<PlaneDecomposition> {
    let max = lambdas.first().copied().unwrap_or(0.0);
    if policy == ZeroModePolicy::Reject {
        let (index, lambda) = smallest(&lambdas);
        if !(lambda > ZERO_MODE_TOL * max) {
            return Err(Error::ZeroMode { index, lambda });
        }
    }
    let d = linalg::plane_blocks(&lambdas.iter().map(|&l| (0.0, l)).collect::<Vec<_>>());
    let rebuilt = &basis * d * &inverse;
    let scale = linalg::max_abs(&k.matrix).max(f64::MIN_POSITIVE);
    let reconstruction_residual = linalg::max_abs_diff(&rebuilt, &k.matrix) / scale;
    Ok(PlaneDecomposition { lambdas, basis, inverse, reconstruction_residual })
}

fn smallest(lambdas: &[f64]) -> (usize, f64) {
    let index = lambdas.len() - 1;
    (index, lambdas[index])
}

/// The `λ_k` of a generator without building planes.
///
/// Works for positive *semi*-definite `h` in the symplectic case, so zero
/// modes are reported rather than rejected; the spectrum of `Omega h`
/// coincides with that of the skew matrix `h^{1/2} Omega h^{1/2}`.
pub fn generator_spectrum(k: &Generator) -> Result<Vec<f64>> {
    match k.algebra {
        Algebra::Orthogonal => Ok(linalg::skew_planes(&k.matrix).lambdas),
        Algebra::Symplectic => {
            let omega = linalg::standard_omega(k.n_modes());
            let h = linalg::symmetrize(&(-(&omega * &k.matrix)));
            let eig = nalgebra::SymmetricEigen::new(h.clone());
            let max = eig.eigenvalues.amax();
            if eig.eigenvalues.iter().any(|&e| e < -1e-10 * max) {
                return Err(Error::Incompatible("symplectic generator with indefinite quadratic form".into()));
            }
            let root = linalg::psd_sqrt(&h);
            Ok(linalg::skew_planes(&(&root * omega * &root)).lambdas)
        }
    }
}

/// Applies a scalar function to a decomposed generator.
///
/// `f` receives `λ` and returns `f(iλ)`; on each plane the result is
/// `Re f(iλ)·I + Im f(iλ)·[[0,1],[-1,0]]`. For example `|λ| ↦ i` yields the
/// complex structure `J = |K^{-1}| K`.
pub fn matrix_function<F>(dec: &PlaneDecomposition, f: F) -> Result<Mat>
where
    F: Fn(f64) -> Complex64,
{
    let mut coeffs = Vec::with_capacity(dec.lambdas.len());
    for &lambda in &dec.lambdas {
        let value = f(lambda);
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::SingularFunction { lambda });
        }
        coeffs.push((value.re, value.im));
    }
    Ok(&dec.basis * linalg::plane_blocks(&coeffs) * &dec.inverse)
}

/// How a matrix transforms under a change of basis `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexType {
    /// Two upper indices (acts on `V*`, e.g. `Omega`, `G`): `M X M^T`.
    Upper,
    /// Two lower indices (e.g. `h`): `M^{-T} X M^{-1}`.
    Lower,
    /// One up, one down (e.g. `J`, `K`): `M X M^{-1}`.
    Mixed,
}

/// Transforms `x` by the basis change `m`, refusing ill-conditioned `m`.
pub fn basis_change(m: &Mat, x: &Mat, index: IndexType) -> Result<Mat> {
    if m.nrows() != m.ncols() || m.nrows() != x.nrows() || x.nrows() != x.ncols() {
        return Err(Error::DimensionMismatch("basis change needs matching square matrices".into()));
    }
    if index == IndexType::Upper {
        // No inverse needed, but the guard still applies.
        let condition = linalg::condition_number(m);
        if !(condition <= MAX_CONDITION) {
            return Err(Error::SingularBasis { condition });
        }
        return Ok(m * x * m.transpose());
    }
    let inv = linalg::guarded_inverse(m, MAX_CONDITION)?;
    Ok(match index {
        IndexType::Lower => inv.transpose() * x * inv,
        IndexType::Mixed => m * x * inv,
        IndexType::Upper => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rotated(blocks: &Mat, seed: u64) -> Mat {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = blocks.nrows();
        let q = nalgebra::linalg::QR::new(Mat::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0))).q();
        &q * blocks * q.transpose()
    }

    #[test]
    fn unit_rotation_has_one_plane() {
        let k = Generator::new(Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]), Algebra::Symplectic).unwrap();
        let dec = decompose_generator(&k, ZeroModePolicy::Reject).unwrap();
        assert_eq!(dec.lambdas.len(), 1);
        assert!((dec.lambdas[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_generator_is_a_zero_mode() {
        let k = Generator::new(Mat::zeros(2, 2), Algebra::Orthogonal).unwrap();
        assert!(matches!(decompose_generator(&k, ZeroModePolicy::Reject), Err(Error::ZeroMode { .. })));
        let k = Generator::new(Mat::zeros(2, 2), Algebra::Symplectic).unwrap();
        assert!(matches!(decompose_generator(&k, ZeroModePolicy::Reject), Err(Error::ZeroMode { .. })));
    }

    #[test]
    fn planes_come_out_sorted() {
        let blocks = linalg::plane_blocks(&[(0.0, 0.5), (0.0, 3.0)]);
        let k = Generator::new(rotated(&blocks, 3), Algebra::Orthogonal).unwrap();
        let dec = decompose_generator(&k, ZeroModePolicy::Reject).unwrap();
        assert!((dec.lambdas[0] - 3.0).abs() < 1e-12 && (dec.lambdas[1] - 0.5).abs() < 1e-12);
        assert!(dec.reconstruction_residual < 1e-12);
    }

    #[test]
    fn algebra_violation_is_detected() {
        let k = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(Generator::new(k.clone(), Algebra::Orthogonal), Err(Error::AlgebraViolation { .. })));
        assert!(matches!(Generator::new(k, Algebra::Symplectic), Err(Error::AlgebraViolation { .. })));
    }

    #[test]
    fn identity_function_reproduces_k() {
        let k = Generator::new(Mat::from_row_slice(2, 2, &[0.0, 2.0, -2.0, 0.0]), Algebra::Symplectic).unwrap();
        let dec = decompose_generator(&k, ZeroModePolicy::Reject).unwrap();
        let back = matrix_function(&dec, |l| Complex64::new(0.0, l)).unwrap();
        assert!(linalg::max_abs_diff(&back, k.matrix()) < 1e-14);
    }

    #[test]
    fn complex_structure_of_oscillator_is_j0() {
        for omega in [0.3, 1.0, 7.5] {
            let k = Generator::new(Mat::from_row_slice(2, 2, &[0.0, omega, -omega, 0.0]), Algebra::Symplectic).unwrap();
            let dec = decompose_generator(&k, ZeroModePolicy::Reject).unwrap();
            let j = matrix_function(&dec, |_| Complex64::i()).unwrap();
            assert!(linalg::max_abs_diff(&j, &linalg::standard_omega(1)) < 1e-14);
        }
    }

    #[test]
    fn thermal_function_scales_plane() {
        let k = Generator::new(Mat::from_row_slice(2, 2, &[0.0, 2.0, -2.0, 0.0]), Algebra::Symplectic).unwrap();
        let dec = decompose_generator(&k, ZeroModePolicy::Reject).unwrap();
        let j = matrix_function(&dec, |l| Complex64::new(0.0, 1.0 / (l / 2.0).tanh())).unwrap();
        // coth(1) to 16 digits.
        assert!((j[(0, 1)] - 1.313_035_285_499_331_3).abs() < 1e-12);
    }

    #[test]
    fn singular_function_is_reported() {
        let k = Generator::new(Mat::zeros(2, 2), Algebra::Orthogonal).unwrap();
        let dec = decompose_generator(&k, ZeroModePolicy::Allow).unwrap();
        let err = matrix_function(&dec, |l| Complex64::new(0.0, 1.0 / l)).unwrap_err();
        assert!(matches!(err, Error::SingularFunction { .. }));
    }

    #[test]
    fn symplectic_planes_map_back() {
        // K = Omega h with a generic positive-definite h.
        let a = Mat::from_row_slice(
            4,
            4,
            &[2.0, 0.3, 0.1, 0.0, 0.3, 1.0, 0.2, 0.4, 0.1, 0.2, 3.0, 0.5, 0.0, 0.4, 0.5, 1.5],
        );
        let k = Generator::new(linalg::standard_omega(2) * &a, Algebra::Symplectic).unwrap();
        let dec = decompose_generator(&k, ZeroModePolicy::Reject).unwrap();
        assert!(dec.reconstruction_residual < 1e-12);
        assert!(dec.lambdas.iter().all(|&l| l > 0.0));
        let spectrum = generator_spectrum(&k).unwrap();
        for (a, b) in spectrum.iter().zip(&dec.lambdas) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(linalg::imaginary_axis_residual(k.matrix()) < 1e-9);
    }

    #[test]
    fn psd_spectrum_reports_zero_modes() {
        let h = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, 4.0, 0.0]));
        let k = Generator::new(linalg::standard_omega(2) * h, Algebra::Symplectic).unwrap();
        let spectrum = generator_spectrum(&k).unwrap();
        assert!((spectrum[0] - 2.0).abs() < 1e-12 && spectrum[1].abs() < 1e-12);
    }

    #[test]
    fn basis_change_identity_and_round_trip() {
        let x = Mat::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        for idx in [IndexType::Upper, IndexType::Lower, IndexType::Mixed] {
            assert_eq!(basis_change(&Mat::identity(2, 2), &x, idx).unwrap(), x);
        }
        let m = Mat::from_row_slice(2, 2, &[2.0, 1.0, 0.5, 1.0]);
        let there = basis_change(&m, &x, IndexType::Mixed).unwrap();
        let back = basis_change(&m.clone().try_inverse().unwrap(), &there, IndexType::Mixed).unwrap();
        assert!(linalg::max_abs_diff(&back, &x) < 1e-12);
    }

    #[test]
    fn singular_basis_is_rejected() {
        let m = Mat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0 + 1e-14]);
        let x = Mat::identity(2, 2);
        assert!(matches!(basis_change(&m, &x, IndexType::Mixed), Err(Error::SingularBasis { .. })));
    }

    #[test]
    fn omega_survives_symplectic_basis_change() {
        // M = exp(Omega S) with S symmetric is symplectic.
        let s = Mat::from_row_slice(
            4,
            4,
            &[0.3, 0.1, 0.0, 0.2, 0.1, -0.2, 0.4, 0.0, 0.0, 0.4, 0.1, -0.3, 0.2, 0.0, -0.3, 0.5],
        );
        let omega = linalg::standard_omega(2);
        let m = (&omega * s).exp();
        let out = basis_change(&m, &omega, IndexType::Upper).unwrap();
        assert!(linalg::max_abs_diff(&out, &omega) < 1e-9);
    }

    fn poly(dec: &PlaneDecomposition, c: &[f64]) -> Mat {
        matrix_function(dec, |l| {
            let z = Complex64::new(0.0, l);
            c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * z + ci)
        })
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn matrix_function_is_multiplicative(
            seed in 0u64..1000,
            f in proptest::collection::vec(-2.0f64..2.0, 4),
            g in proptest::collection::vec(-2.0f64..2.0, 4),
        ) {
            let blocks = linalg::plane_blocks(&[(0.0, 1.7), (0.0, 0.9), (0.0, 0.4)]);
            let k = Generator::new(rotated(&blocks, seed), Algebra::Orthogonal).unwrap();
            let dec = decompose_generator(&k, ZeroModePolicy::Reject).unwrap();
            let mut fg = vec![0.0; 7];
            for (i, a) in f.iter().enumerate() {
                for (j, b) in g.iter().enumerate() {
                    fg[i + j] += a * b;
                }
            }
            let lhs = poly(&dec, &f) * poly(&dec, &g);
            let rhs = poly(&dec, &fg);
            prop_assert!(linalg::max_abs_diff(&lhs, &rhs) < 1e-9 * linalg::max_abs(&rhs).max(1.0));
        }

        #[test]
        fn positive_definite_h_gives_positive_lambdas(entries in proptest::collection::vec(-1.0f64..1.0, 36)) {
            let a = Mat::from_vec(6, 6, entries);
            let h = a.transpose() * &a + Mat::identity(6, 6) * 0.1;
            let k = Generator::new(linalg::standard_omega(3) * h, Algebra::Symplectic).unwrap();
            let dec = decompose_generator(&k, ZeroModePolicy::Reject).unwrap();
            prop_assert!(dec.lambdas.iter().all(|&l| l > 0.0));
            prop_assert!(dec.reconstruction_residual < 1e-9);
        }
    }
}
