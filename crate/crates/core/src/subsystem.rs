//! Subsystems, complements and restricted complex structures.
//!
//! A subsystem `A ⊂ V` is given by a `2N x 2N_A` basis matrix `E`. Its
//! complement `B` is the symplectic complement (null space of `E^T Omega^{-1}`)
//! for bosons and the orthogonal complement (null space of `E^T G^{-1}`) for
//! fermions. The restricted structure `J_A` is the top-left block of `J` in
//! the adapted basis `(E | E_B)`.

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::kahler::{PlaneDecomposition, Statistics, MAX_CONDITION};
use crate::linalg::{self, Mat};

/// Relative singular-value floor for a non-degenerate restricted form.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Limit on `max|Re μ| / max|μ|` over the eigenvalues of `J_A`.
pub const OFF_AXIS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Subsystem {
    statistics: Statistics,
    n_modes: usize,
    basis: Mat,
    /// Set for canonical site subsystems.
    sites: Option<Vec<usize>>,
    label: String,
}

impl Subsystem {
    /// Canonical site subsystem with basis `(x_{s_1}..x_{s_m}, k_{s_1}..k_{s_m})`.
    pub fn from_sites(statistics: Statistics, n_modes: usize, sites: &[usize]) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidSubsystem("empty site list".into()));
        }
        let mut seen = vec![false; n_modes];
        for &s in sites {
            if s >= n_modes {
                return Err(Error::InvalidSubsystem(format!("site {s} outside 0..{n_modes}")));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidSubsystem(format!("site {s} listed twice")));
            }
        }
        let m = sites.len();
        let mut basis = Mat::zeros(2 * n_modes, 2 * m);
        for (c, &s) in sites.iter().enumerate() {
            basis[(s, c)] = 1.0;
            basis[(n_modes + s, m + c)] = 1.0;
        }
        let label = format!("sites {:?}", sites);
        Ok(Self { statistics, n_modes, basis, sites: Some(sites.to_vec()), label })
    }

    /// Arbitrary basis; columns must be independent and even in number, and
    /// bosonic subsystems need a non-degenerate restricted symplectic form.
    pub fn from_basis(statistics: Statistics, basis: Mat, label: impl Into<String>) -> Result<Self> {
        let d = basis.nrows();
        let k = basis.ncols();
        if !d.is_multiple_of(2) || d == 0 {
            return Err(Error::DimensionMismatch(format!("basis vectors must have even dimension, got {d}")));
        }
        if k == 0 || !k.is_multiple_of(2) || k > d {
            return Err(Error::InvalidSubsystem(format!("need an even number (<= {d}) of basis vectors, got {k}")));
        }
        if linalg::column_space(&basis, 1e-12).ncols() < k {
            return Err(Error::InvalidSubsystem("basis vectors are linearly dependent".into()));
        }
        let sub = Self { statistics, n_modes: d / 2, basis, sites: None, label: label.into() };
        if statistics == Statistics::Bosonic {
            sub.restricted_form_inverse()?;
        }
        Ok(sub)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// Parent `N`.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// `N_A`.
    pub fn n_sub_modes(&self) -> usize {
        self.basis.ncols() / 2
    }

    pub fn sites(&self) -> Option<&[usize]> {
        self.sites.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `E^T Omega^{-1} E` (bosons) or `E^T G^{-1} E` (fermions): the fixed
    /// form pulled back to `A`, i.e. the inverse of `Omega_A` or `G_A`.
    fn restricted_form_inverse(&self) -> Result<Mat> {
        let e = &self.basis;
        let m = match self.statistics {
            // Omega^{-1} = -Omega in the canonical basis.
            Statistics::Bosonic => -(e.transpose() * linalg::standard_omega(self.n_modes) * e),
            Statistics::Fermionic => e.transpose() * e,
        };
        let sv = m.clone().singular_values();
        let max = sv.max();
        let smallest = sv.min();
        if !(smallest > DEGENERACY_TOL * max) {
            return Err(Error::DegenerateRestriction { smallest: smallest / max.max(f64::MIN_POSITIVE) });
        }
        Ok(m)
    }

    /// `Omega_A` for bosons, `G_A` for fermions.
    pub fn restricted_form(&self) -> Result<Mat> {
        let m = self.restricted_form_inverse()?;
        let inv = linalg::guarded_inverse(&m, MAX_CONDITION)?;
        Ok(match self.statistics {
            Statistics::Bosonic => linalg::antisymmetrize(&inv),
            Statistics::Fermionic => linalg::symmetrize(&inv),
        })
    }
}

/// Symplectic (bosons) or orthogonal (fermions) complement.
pub fn complement(sub: &Subsystem) -> Result<Subsystem> {
    if let Some(sites) = sub.sites() {
        let rest: Vec<usize> = (0..sub.n_modes).filter(|s| !sites.contains(s)).collect();
        if rest.is_empty() {
            return Err(Error::InvalidSubsystem("subsystem is the whole system".into()));
        }
        return Subsystem::from_sites(sub.statistics, sub.n_modes, &rest);
    }
    sub.restricted_form_inverse()?;
    let e = &sub.basis;
    if e.ncols() == e.nrows() {
        return Err(Error::InvalidSubsystem("subsystem is the whole system".into()));
    }
    let f = match sub.statistics {
        // null(E^T Omega^{-1}) = (Omega^{-T} E)^⊥ = (Omega E)^⊥
        Statistics::Bosonic => linalg::orthogonal_complement(&(linalg::standard_omega(sub.n_modes) * e)),
        Statistics::Fermionic => linalg::orthogonal_complement(e),
    };
    Subsystem::from_basis(sub.statistics, f, format!("complement of {}", sub.label))
}

/// Restricted complex structure with its normal modes.
#[derive(Debug, Clone)]
pub struct RestrictedStructure {
    pub statistics: Statistics,
    /// `J_A` in the subsystem basis.
    pub j_a: Mat,
    /// `Omega_A` (bosons) or `G_A` (fermions) in the subsystem basis.
    pub form: Mat,
    /// `λ_i`, descending, clamped onto `[1, ∞)` or `[0, 1]`.
    pub lambdas: Vec<f64>,
    /// Normal-mode planes in subsystem coordinates, columns `(u_i, v_i)`.
    pub modes: Mat,
    /// `max|Re μ| / max|μ|` over eigenvalues from a general eigensolver.
    pub residual: f64,
}

/// Plane decomposition of a restricted structure `J_A` given its compatible
/// fixed form (`Omega_A` for bosons, `G_A` for fermions).
///
/// With `P = G_A^{1/2}` the similarity `P^{-1} J_A P` is skew-symmetric, so the
/// `λ_i` come from a structured skew eigenproblem.
pub fn restricted_planes(statistics: Statistics, j_a: &Mat, form: &Mat) -> Result<PlaneDecomposition> {
    let d = j_a.nrows();
    if d != j_a.ncols() || form.shape() != (d, d) || !d.is_multiple_of(2) || d == 0 {
        return Err(Error::DimensionMismatch("J_A and its form must be equal even-sized squares".into()));
    }
    let (root, inv_root, s) = match statistics {
        Statistics::Bosonic => {
            let g = linalg::symmetrize(&(-(j_a * form)));
            let (p, p_inv) = linalg::spd_sqrt(&g)
                .ok_or_else(|| Error::Incompatible("restricted metric -J_A Omega_A is not positive definite".into()))?;
            let form_inv = linalg::guarded_inverse(form, f64::INFINITY)?;
            let s = -(&p * form_inv * &p);
            (p, p_inv, s)
        }
        Statistics::Fermionic => {
            let (p, p_inv) = linalg::spd_sqrt(form)
                .ok_or_else(|| Error::Incompatible("restricted metric G_A is not positive definite".into()))?;
            let omega_a = j_a * form;
            let s = &p_inv * omega_a * &p_inv;
            (p, p_inv, s)
        }
    };
    let planes = linalg::skew_planes(&s);
    let basis = &root * &planes.basis;
    let inverse = planes.basis.transpose() * &inv_root;
    let blocks = linalg::plane_blocks(&planes.lambdas.iter().map(|&l| (0.0, l)).collect::<Vec<_>>());
    let rebuilt = &basis * blocks * &inverse;
    let reconstruction_residual = linalg::max_abs_diff(&rebuilt, j_a) / linalg::max_abs(j_a).max(f64::MIN_POSITIVE);
    Ok(PlaneDecomposition { lambdas: planes.lambdas, basis, inverse, reconstruction_residual })
}

/// Top-left block of `B^{-1} J B` with `B = (E | E_B)`.
///
/// Since `E_B` is the complement of `E` under the fixed form `Q` (`Omega^{-1}`
/// for bosons, `G^{-1}` for fermions), the `A`-coordinates of a vector `v`
/// are `(E^T Q E)^{-1} E^T Q v`; so `J_A = (E^T Q E)^{-1} E^T Q J E` without
/// ever building the complement.
pub fn restricted_matrix(state: &GaussianState, sub: &Subsystem) -> Result<Mat> {
    check_match(state, sub)?;
    let e = &sub.basis;
    if sub.sites().is_some() {
        // B is orthogonal with E as its first block, so J_A = E^T J E.
        return Ok(e.transpose() * state.jmat() * e);
    }
    let m = sub.restricted_form_inverse()?;
    // E^T Q with Q = Omega^{-1} = -Omega, i.e. (Omega E)^T.
    let et_q = match sub.statistics {
        Statistics::Bosonic => (linalg::standard_omega(sub.n_modes) * e).transpose(),
        Statistics::Fermionic => e.transpose(),
    };
    let m_inv = linalg::guarded_inverse(&m, MAX_CONDITION)?;
    Ok(m_inv * et_q * state.jmat() * e)
}

fn check_match(state: &GaussianState, sub: &Subsystem) -> Result<()> {
    if state.statistics() != sub.statistics {
        return Err(Error::Incompatible(format!("{} subsystem of a {} state", sub.statistics, state.statistics())));
    }
    if state.n_modes() != sub.n_modes {
        return Err(Error::DimensionMismatch(format!(
            "subsystem lives in N = {}, state has N = {}",
            sub.n_modes,
            state.n_modes()
        )));
    }
    Ok(())
}

/// Restricts a state to a subsystem and extracts its entanglement spectrum.
pub fn restrict(state: &GaussianState, sub: &Subsystem) -> Result<RestrictedStructure> {
    let j_a = restricted_matrix(state, sub)?;
    let form = sub.restricted_form()?;
    let dec = restricted_planes(sub.statistics, &j_a, &form)?;
    let residual = linalg::imaginary_axis_residual(&j_a);
    if residual > OFF_AXIS_TOL {
        return Err(Error::SpectrumOffAxis { residual });
    }
    // Eigenvalues are accurate to ~eps·‖J_A‖, so widen the clamp for
    // spectra containing huge bosonic λ.
    let tol = crate::entropy::CLAMP_TOL * dec.lambdas.first().copied().unwrap_or(1.0).max(1.0);
    let lambdas = dec
        .lambdas
        .iter()
        .map(|&l| crate::entropy::clamp_lambda_with_tol(sub.statistics, l, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(RestrictedStructure { statistics: sub.statistics, j_a, form, lambdas, modes: dec.basis, residual })
}

/// `Ã = J(A)`.
pub fn tilde_subsystem(state: &GaussianState, sub: &Subsystem) -> Result<Subsystem> {
    check_match(state, sub)?;
    Subsystem::from_basis(sub.statistics, state.jmat() * &sub.basis, format!("J({})", sub.label))
}

/// A non-pure normal mode of `A` and its purifying partner in the complement.
#[derive(Debug, Clone)]
pub struct ModePartner {
    /// `2N x 2` plane inside `A`.
    pub mode: Mat,
    /// `2N x 2` plane inside the complement.
    pub partner: Mat,
    pub lambda: f64,
}

/// Pairs each entangled normal mode of `A` with its partner mode in the
/// complement: the complement component of `J` applied to the mode plane.
pub fn mode_partners(state: &GaussianState, sub: &Subsystem) -> Result<Vec<ModePartner>> {
    let rs = restrict(state, sub)?;
    let e = &sub.basis;
    let f = complement(sub)?;
    let (d, k) = e.shape();
    let mut b = Mat::zeros(d, d);
    b.columns_mut(0, k).copy_from(e);
    b.columns_mut(k, d - k).copy_from(f.basis());
    let b_inv = linalg::guarded_inverse(&b, MAX_CONDITION)?;
    let mut out = Vec::new();
    for (i, &lambda) in rs.lambdas.iter().enumerate() {
        let entangled = match sub.statistics {
            Statistics::Bosonic => lambda > 1.0 + 1e-9,
            Statistics::Fermionic => lambda < 1.0 - 1e-9,
        };
        if !entangled {
            continue;
        }
        let mode = e * rs.modes.columns(2 * i, 2);
        let coords = &b_inv * state.jmat() * &mode;
        let partner_raw = f.basis() * coords.rows(k, d - k);
        let partner = normalize_plane(sub.statistics, &partner_raw);
        out.push(ModePartner { mode, partner, lambda });
    }
    Ok(out)
}

/// Rescales a `2N x 2` plane so its restricted form is standard.
fn normalize_plane(statistics: Statistics, plane: &Mat) -> Mat {
    match statistics {
        Statistics::Bosonic => symplectic_gram_schmidt(plane).unwrap_or_else(|_| plane.clone()),
        Statistics::Fermionic => gram_schmidt(plane),
    }
}

/// Modified Gram–Schmidt with respect to `G = I`, preserving column order and
/// orientation.
fn gram_schmidt(e: &Mat) -> Mat {
    let mut out = e.clone();
    for c in 0..out.ncols() {
        for p in 0..c {
            let proj = out.column(p).dot(&out.column(c));
            let prev = out.column(p).into_owned();
            out.column_mut(c).axpy(-proj, &prev, 1.0);
        }
        let norm = out.column(c).norm();
        out.column_mut(c).scale_mut(1.0 / norm);
    }
    out
}

/// Pivoted symplectic Gram–Schmidt on columns ordered `(x_1..x_m, k_1..k_m)`;
/// the result satisfies `E'^T Omega^{-1} E' = -Omega_std`, i.e. `Omega_A` is
/// standard.
fn symplectic_gram_schmidt(e: &Mat) -> Result<Mat> {
    let d = e.nrows();
    let m = e.ncols() / 2;
    let omega_inv = -linalg::standard_omega(d / 2);
    let w = |a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>| a.dot(&(&omega_inv * b));
    let mut pool: Vec<nalgebra::DVector<f64>> = (0..2 * m).map(|c| e.column(c).into_owned()).collect();
    // Preferred partner order: x_i pairs with k_i.
    let mut xs = Vec::with_capacity(m);
    let mut ks = Vec::with_capacity(m);
    let scale = linalg::max_abs(e).powi(2).max(f64::MIN_POSITIVE);
    for i in 0..m {
        // Columns i..m and m+i..2m have not been consumed yet.
        let unused = |j: usize| (j >= i && j < m) || j >= m + i;
        let x = pool[i].clone();
        let k_default = m + i;
        let mut best = k_default;
        let mut best_val = w(&x, &pool[k_default]).abs();
        if best_val < 1e-6 * scale {
            for (j, v) in pool.iter().enumerate() {
                if !unused(j) || j == i {
                    continue;
                }
                let val = w(&x, v).abs();
                if val > best_val {
                    best = j;
                    best_val = val;
                }
            }
        }
        if !(best_val > DEGENERACY_TOL * scale) {
            return Err(Error::DegenerateRestriction { smallest: best_val / scale });
        }
        let k = pool[best].clone();
        pool.swap(best, k_default);
        // ω(x, k) should be -1 for the standard form Omega_A = Omega_std.
        let c = w(&x, &k);
        let s = c.abs().sqrt();
        let xn = &x / s;
        let kn = &k * (-c.signum() / s);
        // Project the pair out of the remaining vectors.
        for (j, v) in pool.iter_mut().enumerate() {
            if !unused(j) || j == i || j == k_default {
                continue;
            }
            let (a, b) = (w(v, &kn), w(v, &xn));
            *v += &xn * a - &kn * b;
        }
        xs.push(xn);
        ks.push(kn);
    }
    let mut out = Mat::zeros(d, 2 * m);
    for i in 0..m {
        out.set_column(i, &xs[i]);
        out.set_column(m + i, &ks[i]);
    }
    Ok(out)
}

/// Basis of `span(E)` with `E'^T Omega^{-1} E' = -Omega_std`, built from the
/// skew normal form of `M = E^T Omega^{-1} E`: an orthogonal change of basis
/// and one scaling per plane. Unlike symplectic Gram–Schmidt this never
/// subtracts nearly parallel vectors, so it keeps full precision on large
/// subspaces.
fn symplectic_normal_basis(e: &Mat) -> Result<Mat> {
    let m_half = e.ncols() / 2;
    let m = -(e.transpose() * linalg::standard_omega(e.nrows() / 2) * e);
    let planes = linalg::skew_planes(&m);
    let max = planes.lambdas.first().copied().unwrap_or(0.0);
    let smallest = planes.lambdas.last().copied().unwrap_or(0.0);
    if !(smallest > DEGENERACY_TOL * max) {
        return Err(Error::DegenerateRestriction { smallest: smallest / max.max(f64::MIN_POSITIVE) });
    }
    // u^T M v = mu, so x = v / sqrt(mu), k = u / sqrt(mu) gives x^T M k = -1.
    let mut t = Mat::zeros(2 * m_half, 2 * m_half);
    for (i, &mu) in planes.lambdas.iter().enumerate() {
        let s = mu.sqrt();
        t.set_column(i, &(planes.basis.column(2 * i + 1) / s));
        t.set_column(m_half + i, &(planes.basis.column(2 * i) / s));
    }
    Ok(e * t)
}

/// Re-normalises an image basis so that its restricted form is standard:
/// Gram–Schmidt for a fermionic target, the skew normal form of the pulled
/// back symplectic form for a bosonic target. The restricted spectrum is
/// unchanged.
pub fn normalize_dual_basis(image: &Subsystem) -> Result<Subsystem> {
    let basis = match image.statistics {
        Statistics::Fermionic => gram_schmidt(&image.basis),
        Statistics::Bosonic => symplectic_normal_basis(&image.basis).map_err(|e| match e {
            Error::DegenerateRestriction { smallest } => Error::MaximallyEntangledObstruction { lambda: smallest },
            other => other,
        })?,
    };
    let mut out = Subsystem::from_basis(image.statistics, basis, image.label.clone())?;
    out.sites = None;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn site_complements() {
        for stats in [Statistics::Bosonic, Statistics::Fermionic] {
            let a = Subsystem::from_sites(stats, 2, &[0]).unwrap();
            let b = complement(&a).unwrap();
            assert_eq!(b.sites(), Some(&[1usize][..]));
        }
        assert!(Subsystem::from_sites(Statistics::Bosonic, 2, &[2]).is_err());
        assert!(Subsystem::from_sites(Statistics::Bosonic, 2, &[0, 0]).is_err());
        assert!(complement(&Subsystem::from_sites(Statistics::Bosonic, 1, &[0]).unwrap()).is_err());
    }

    #[test]
    fn tilted_bosonic_complement() {
        // span{q1, p1 + 0.5 q2} in N = 2; basis order (q1, q2, p1, p2).
        let e = Mat::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 0.5, 0.0, 1.0, 0.0, 0.0]);
        let a = Subsystem::from_basis(Statistics::Bosonic, e.clone(), "tilted").unwrap();
        let b = complement(&a).unwrap();
        let omega_inv = -linalg::standard_omega(2);
        assert!(linalg::max_abs(&(b.basis().transpose() * omega_inv * &e)) < 1e-12);
        let mut full = Mat::zeros(4, 4);
        full.columns_mut(0, 2).copy_from(&e);
        full.columns_mut(2, 2).copy_from(b.basis());
        assert!(linalg::condition_number(&full) < 1e6);
    }

    #[test]
    fn degenerate_bosonic_basis_is_rejected() {
        // span{q1, q2} is isotropic.
        let e = Mat::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            Subsystem::from_basis(Statistics::Bosonic, e.clone(), "iso"),
            Err(Error::DegenerateRestriction { .. })
        ));
        // Fermions accept it.
        assert!(Subsystem::from_basis(Statistics::Fermionic, e, "iso").is_ok());
        let odd = Mat::from_row_slice(4, 1, &[1.0, 0.0, 0.0, 0.0]);
        assert!(Subsystem::from_basis(Statistics::Fermionic, odd, "odd").is_err());
    }

    #[test]
    fn product_state_restrictions_are_pure() {
        for stats in [Statistics::Bosonic, Statistics::Fermionic] {
            let s = GaussianState::vacuum(stats, 3).unwrap();
            let sub = Subsystem::from_sites(stats, 3, &[0, 2]).unwrap();
            let rs = restrict(&s, &sub).unwrap();
            assert!(rs.lambdas.iter().all(|&l| (l - 1.0).abs() < 1e-12));
            assert!(mode_partners(&s, &sub).unwrap().is_empty());
            let t = tilde_subsystem(&s, &sub).unwrap();
            // Same span.
            let stacked = Mat::from_fn(6, 8, |r, c| if c < 4 { sub.basis()[(r, c)] } else { t.basis()[(r, c - 4)] });
            assert_eq!(linalg::column_space(&stacked, 1e-10).ncols(), 4);
        }
    }

    #[test]
    fn general_basis_matches_site_restriction() {
        // Squeezed two-mode-like state built from a symplectic transformation.
        let r = 0.3f64;
        let (c, s) = ((r).cosh(), (r).sinh());
        // Two-mode squeeze: q1' = c q1 + s q2, p1' = c p1 - s p2, etc.
        let m = Mat::from_row_slice(4, 4, &[c, s, 0.0, 0.0, s, c, 0.0, 0.0, 0.0, 0.0, c, -s, 0.0, 0.0, -s, c]);
        let j = m.clone().try_inverse().unwrap() * linalg::standard_omega(2) * &m;
        let state = GaussianState::new(Statistics::Bosonic, j).unwrap();
        let site = Subsystem::from_sites(Statistics::Bosonic, 2, &[0]).unwrap();
        let generic = Subsystem::from_basis(Statistics::Bosonic, site.basis() * 2.0, "scaled").unwrap();
        let a = restrict(&state, &site).unwrap();
        let b = restrict(&state, &generic).unwrap();
        assert!((a.lambdas[0] - (2.0 * r).cosh()).abs() < 1e-12);
        assert!((b.lambdas[0] - a.lambdas[0]).abs() < 1e-12);
        // Partner purifies the mode.
        let partners = mode_partners(&state, &site).unwrap();
        assert_eq!(partners.len(), 1);
        let joint =
            Mat::from_fn(4, 4, |r, c| if c < 2 { partners[0].mode[(r, c)] } else { partners[0].partner[(r, c - 2)] });
        let joint = Subsystem::from_basis(Statistics::Bosonic, joint, "joint").unwrap();
        let rs = restrict(&state, &joint).unwrap();
        assert!(rs.lambdas.iter().all(|&l| (l - 1.0).abs() < 1e-8));
        // The tilde subsystem is different but isospectral.
        let t = tilde_subsystem(&state, &site).unwrap();
        let rt = restrict(&state, &t).unwrap();
        assert!((rt.lambdas[0] - a.lambdas[0]).abs() < 1e-9);
    }

    #[test]
    fn normalisation_makes_forms_standard() {
        let e = Mat::from_row_slice(4, 2, &[0.7, 0.1, 0.2, 0.0, 0.3, 1.4, 0.0, -0.2]);
        let sub = Subsystem::from_basis(Statistics::Bosonic, e, "raw").unwrap();
        let n = normalize_dual_basis(&sub).unwrap();
        assert!(linalg::max_abs_diff(&n.restricted_form().unwrap(), &linalg::standard_omega(1)) < 1e-12);
        let e = Mat::from_row_slice(4, 2, &[0.7, 0.1, 0.2, 0.0, 0.3, 1.4, 0.0, -0.2]);
        let sub = Subsystem::from_basis(Statistics::Fermionic, e, "raw").unwrap();
        let n = normalize_dual_basis(&sub).unwrap();
        assert!(linalg::max_abs_diff(&n.restricted_form().unwrap(), &Mat::identity(2, 2)) < 1e-12);
        // Already canonical stays put.
        let site = Subsystem::from_sites(Statistics::Bosonic, 2, &[1]).unwrap();
        let n = normalize_dual_basis(&site).unwrap();
        assert!(linalg::max_abs_diff(n.basis(), site.basis()) < 1e-15);
    }

    #[test]
    fn mismatched_statistics_are_rejected() {
        let s = GaussianState::vacuum(Statistics::Bosonic, 2).unwrap();
        let sub = Subsystem::from_sites(Statistics::Fermionic, 2, &[0]).unwrap();
        assert!(matches!(restrict(&s, &sub), Err(Error::Incompatible(_))));
    }
}
