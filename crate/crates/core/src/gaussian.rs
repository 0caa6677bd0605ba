//! Gaussian states represented by their linear complex structure `J`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahler::{KahlerSpace, Statistics};
use crate::linalg::{self, Mat};

pub type CMat = DMatrix<Complex64>;

/// A pure Gaussian state: statistics plus a complex structure `J` compatible
/// with the fixed canonical form (`Omega` for bosons, `G = I` for fermions).
#[derive(Debug, Clone)]
pub struct GaussianState {
    statistics: Statistics,
    space: KahlerSpace,
    jmat: Mat,
}

impl GaussianState {
    /// Validates `J^2 = -I` and compatibility with the fixed form.
    pub fn new(statistics: Statistics, jmat: Mat) -> Result<Self> {
        Self::with_tolerance(statistics, jmat, 1e-9)
    }

    /// As [`new`](Self::new) with a custom relative tolerance on `J^2 + I`.
    pub fn with_tolerance(statistics: Statistics, jmat: Mat, tol: f64) -> Result<Self> {
        let d = jmat.nrows();
        if d != jmat.ncols() || !d.is_multiple_of(2) || d == 0 {
            return Err(Error::DimensionMismatch(format!("J must be 2N x 2N, got {}x{}", jmat.nrows(), jmat.ncols())));
        }
        let space = KahlerSpace::new(d / 2)?;
        let scale = linalg::max_abs(&jmat).max(1.0);
        let residual = linalg::max_abs(&(&jmat * &jmat + Mat::identity(d, d)));
        if residual > tol * scale * scale {
            return Err(Error::NotGaussian { residual });
        }
        match statistics {
            Statistics::Bosonic => {
                let g = -(&jmat * space.omega());
                let asym = linalg::max_abs(&(&g - g.transpose()));
                if asym > 1e-9 * scale * scale {
                    return Err(Error::Incompatible(format!("-J Omega is not symmetric (residual {asym:.3e})")));
                }
                if linalg::spd_sqrt(&g).is_none() {
                    return Err(Error::Incompatible("-J Omega is not positive definite".into()));
                }
            }
            Statistics::Fermionic => {
                let sym = linalg::max_abs(&(&jmat + jmat.transpose()));
                if sym > 1e-9 * scale {
                    return Err(Error::Incompatible(format!("J G is not antisymmetric (residual {sym:.3e})")));
                }
            }
        }
        Ok(Self { statistics, space, jmat })
    }

    /// The reference state `J_0 = Omega` of the canonical basis (vacuum
    /// for bosons, `|0>` with `J_+` for fermions).
    pub fn vacuum(statistics: Statistics, n_modes: usize) -> Result<Self> {
        Self::new(statistics, linalg::standard_omega(n_modes))
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn space(&self) -> &KahlerSpace {
        &self.space
    }

    pub fn jmat(&self) -> &Mat {
        &self.jmat
    }

    pub fn n_modes(&self) -> usize {
        self.space.n_modes()
    }

    /// State-dependent metric: `G = -J Omega` for bosons, the identity for
    /// fermions.
    pub fn gmetric(&self) -> Mat {
        match self.statistics {
            Statistics::Bosonic => -(&self.jmat * self.space.omega()),
            Statistics::Fermionic => self.space.gmetric().clone(),
        }
    }

    /// State-dependent symplectic form: `Omega = J G = J` for fermions, the
    /// canonical form for bosons.
    pub fn omega(&self) -> Mat {
        match self.statistics {
            Statistics::Bosonic => self.space.omega().clone(),
            Statistics::Fermionic => self.jmat.clone(),
        }
    }
}

/// Splits `C_2 = (G' + i Omega') / 2` into its real parts, checking their
/// symmetry.
fn split_moments(c2: &CMat) -> Result<(Mat, Mat)> {
    let d = c2.nrows();
    if d != c2.ncols() || !d.is_multiple_of(2) || d == 0 {
        return Err(Error::DimensionMismatch(format!(
            "second moments must be 2N x 2N, got {}x{}",
            c2.nrows(),
            c2.ncols()
        )));
    }
    let g = c2.map(|z| 2.0 * z.re);
    let o = c2.map(|z| 2.0 * z.im);
    let scale = linalg::max_abs(&g).max(linalg::max_abs(&o)).max(1.0);
    let residual = linalg::max_abs(&(&g - g.transpose())).max(linalg::max_abs(&(&o + o.transpose())));
    if residual > 1e-9 * scale {
        return Err(Error::Asymmetry { residual });
    }
    Ok((linalg::symmetrize(&g), linalg::antisymmetrize(&o)))
}

/// The structure `J` encoded in measured second moments, without the purity
/// check: `-G' Omega^{-1}` for bosons, `Omega' G^{-1}` for fermions.
///
/// For pure states these equal `Omega' G'^{-1}`. For mixed (e.g. thermal)
/// states the result is not a complex structure but has eigenvalue pairs
/// `±iλ` with `λ ≥ 1` (bosons) or `λ ≤ 1` (fermions), as for restrictions.
pub fn structure_from_moments(statistics: Statistics, c2: &CMat) -> Result<Mat> {
    let (g, o) = split_moments(c2)?;
    let n = c2.nrows() / 2;
    Ok(match statistics {
        // Omega^{-1} = -Omega
        Statistics::Bosonic => g * linalg::standard_omega(n),
        Statistics::Fermionic => o,
    })
}

/// Reconstructs a pure Gaussian state from measured second moments.
///
/// Bosons take the measured metric against the canonical symplectic form,
/// fermions the measured symplectic form against the canonical metric.
pub fn state_from_covariance(statistics: Statistics, c2: &CMat) -> Result<GaussianState> {
    let j = structure_from_moments(statistics, c2)?;
    GaussianState::with_tolerance(statistics, j, 1e-6)
}

/// `C_2 = (G + i Omega) / 2` of a state.
pub fn two_point_function(state: &GaussianState) -> CMat {
    let g = state.gmetric();
    let o = state.omega();
    CMat::from_fn(g.nrows(), g.ncols(), |r, c| Complex64::new(0.5 * g[(r, c)], 0.5 * o[(r, c)]))
}

/// A Bogoliubov transformation `a' = alpha a + beta a^†` with its real
/// phase-space form `xi' = M xi`.
#[derive(Debug, Clone)]
pub struct BogoliubovTransform {
    statistics: Statistics,
    alpha: CMat,
    beta: CMat,
    mmat: Mat,
}

impl BogoliubovTransform {
    /// Assembles `M = [[Re(α+β), -Im(α-β)], [Im(α+β), Re(α-β)]]` and checks
    /// group membership.
    pub fn new(statistics: Statistics, alpha: CMat, beta: CMat) -> Result<Self> {
        let n = alpha.nrows();
        if alpha.shape() != (n, n) || beta.shape() != (n, n) {
            return Err(Error::DimensionMismatch("alpha and beta must be square and equal-sized".into()));
        }
        let plus = &alpha + &beta;
        let minus = &alpha - &beta;
        let mut m = Mat::zeros(2 * n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = plus[(r, c)].re;
                m[(r, n + c)] = -minus[(r, c)].im;
                m[(n + r, c)] = plus[(r, c)].im;
                m[(n + r, n + c)] = minus[(r, c)].re;
            }
        }
        check_group(statistics, &m)?;
        Ok(Self { statistics, alpha, beta, mmat: m })
    }

    /// Wraps a real phase-space matrix, recovering `alpha`, `beta`.
    pub fn from_matrix(statistics: Statistics, m: Mat) -> Result<Self> {
        let d = m.nrows();
        if d != m.ncols() || !d.is_multiple_of(2) || d == 0 {
            return Err(Error::DimensionMismatch("M must be 2N x 2N".into()));
        }
        check_group(statistics, &m)?;
        let n = d / 2;
        let block = |r0: usize, c0: usize| m.view((r0, c0), (n, n)).into_owned();
        let (a, b, c, e) = (block(0, 0), block(0, n), block(n, 0), block(n, n));
        // plus = a + i c, minus = e - i b.
        let plus = CMat::from_fn(n, n, |r, k| Complex64::new(a[(r, k)], c[(r, k)]));
        let minus = CMat::from_fn(n, n, |r, k| Complex64::new(e[(r, k)], -b[(r, k)]));
        let alpha = (&plus + &minus).map(|z| z * 0.5);
        let beta = (&plus - &minus).map(|z| z * 0.5);
        Ok(Self { statistics, alpha, beta, mmat: m })
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn alpha(&self) -> &CMat {
        &self.alpha
    }

    pub fn beta(&self) -> &CMat {
        &self.beta
    }

    pub fn mmat(&self) -> &Mat {
        &self.mmat
    }
}

/// Symplectic (bosons) or orthogonal (fermions) to `1e-9`.
fn check_group(statistics: Statistics, m: &Mat) -> Result<()> {
    let d = m.nrows();
    let (lhs, rhs) = match statistics {
        Statistics::Bosonic => {
            let omega = linalg::standard_omega(d / 2);
            (m * &omega * m.transpose(), omega)
        }
        Statistics::Fermionic => (m * m.transpose(), Mat::identity(d, d)),
    };
    let residual = linalg::max_abs_diff(&lhs, &rhs);
    if residual > 1e-9 * linalg::max_abs(m).powi(2).max(1.0) {
        return Err(Error::GroupViolation { residual });
    }
    Ok(())
}

/// Transforms a state by a Bogoliubov transformation.
///
/// `M` maps the mode operators, `xi' = M xi`; the transformed state is the one
/// annihilated by the new `a'`, whose complex structure is `M^{-1} J M`.
pub fn apply_bogoliubov(state: &GaussianState, t: &BogoliubovTransform) -> Result<GaussianState> {
    if t.statistics != state.statistics() {
        return Err(Error::Incompatible(format!(
            "{} transformation applied to a {} state",
            t.statistics,
            state.statistics()
        )));
    }
    if t.mmat.nrows() != state.jmat().nrows() {
        return Err(Error::DimensionMismatch("transformation and state sizes differ".into()));
    }
    check_group(t.statistics, &t.mmat)?;
    let inv = linalg::guarded_inverse(&t.mmat, crate::kahler::MAX_CONDITION)?;
    GaussianState::new(state.statistics(), inv * state.jmat() * &t.mmat)
}
