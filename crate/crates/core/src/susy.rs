//! Supersymmetric quadratic systems built from a supercharge matrix `R`.
//!
//! The supercharge `Q̂ = R_{αa} ξ_f^α ξ_b^a` couples fermionic rows to bosonic
//! columns. It yields `h_b = R^T R`, `h_f = R Omega R^T`, the generators
//! `K_b = Omega R^T R = T_2 T_1` and `K_f = R Omega R^T = T_1 T_2`, and the
//! normalised identification maps
//! `L_1 = |K_f^{-1}|^{1/2} T_1 : V_b → V_f` and
//! `L_2 = |K_b^{-1}|^{1/2} T_2 : V_f → V_b`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::kahler::{
    decompose_generator, matrix_function, Algebra, Generator, PlaneDecomposition, Statistics, ZeroModePolicy,
    MAX_CONDITION,
};
use crate::linalg::{self, Mat};
use crate::subsystem::restricted_planes;

/// Relative tolerance for the invariant suite run by [`build_susy`].
pub const INVARIANT_TOL: f64 = 1e-9;

/// A real supercharge matrix in the canonical bases of both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Supercharge {
    r: Mat,
}

impl Supercharge {
    pub fn new(r: Mat) -> Result<Self> {
        let d = r.nrows();
        if d != r.ncols() || !d.is_multiple_of(2) || d == 0 {
            return Err(Error::DimensionMismatch(format!("R must be 2N x 2N, got {}x{}", r.nrows(), r.ncols())));
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::ParamOutOfRange("R has non-finite entries".into()));
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> &Mat {
        &self.r
    }

    pub fn n_modes(&self) -> usize {
        self.r.nrows() / 2
    }

    /// `h_b = R^T G R` (symmetric, positive semidefinite).
    pub fn h_b(&self) -> Mat {
        linalg::symmetrize(&(self.r.transpose() * &self.r))
    }

    /// `h_f = R Omega R^T` (antisymmetric).
    pub fn h_f(&self) -> Mat {
        let omega = linalg::standard_omega(self.n_modes());
        linalg::antisymmetrize(&(&self.r * omega * self.r.transpose()))
    }

    pub fn k_b(&self) -> Mat {
        linalg::standard_omega(self.n_modes()) * self.h_b()
    }

    pub fn k_f(&self) -> Mat {
        self.h_f()
    }

    /// `T_1 = G R`.
    pub fn t1(&self) -> Mat {
        self.r.clone()
    }

    /// `T_2 = Omega R^T`.
    pub fn t2(&self) -> Mat {
        linalg::standard_omega(self.n_modes()) * self.r.transpose()
    }
}

/// One named identity of the invariant suite.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCheck {
    pub identity: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl InvariantCheck {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Which identification map to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapChoice {
    L1,
    L2,
    L1Inv,
    L2Inv,
}

impl MapChoice {
    /// Statistics of the space the map acts on.
    pub fn source(self) -> Statistics {
        match self {
            MapChoice::L1 | MapChoice::L2Inv => Statistics::Bosonic,
            MapChoice::L2 | MapChoice::L1Inv => Statistics::Fermionic,
        }
    }

    pub fn target(self) -> Statistics {
        self.source().partner()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MapChoice::L1 => "L1",
            MapChoice::L2 => "L2",
            MapChoice::L1Inv => "L1_inv",
            MapChoice::L2Inv => "L2_inv",
        }
    }
}

impl std::str::FromStr for MapChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L1" | "l1" => Ok(MapChoice::L1),
            "L2" | "l2" => Ok(MapChoice::L2),
            "L1_inv" | "l1_inv" | "L1inv" => Ok(MapChoice::L1Inv),
            "L2_inv" | "l2_inv" | "L2inv" => Ok(MapChoice::L2Inv),
            other => Err(Error::ParamOutOfRange(format!("unknown map {other:?}"))),
        }
    }
}

impl std::fmt::Display for MapChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything derived from a supercharge, with its invariants verified.
#[derive(Debug, Clone)]
pub struct SusySystem {
    supercharge: Supercharge,
    dec_b: PlaneDecomposition,
    dec_f: PlaneDecomposition,
    j_b: GaussianState,
    j_f: GaussianState,
    t1: Mat,
    t2: Mat,
    l1: Mat,
    l2: Mat,
    l1_inv: Mat,
    l2_inv: Mat,
    invariants: Vec<InvariantCheck>,
}

/// Builds the full SUSY system and verifies its invariant suite.
///
/// ```
/// use susyent::{build_susy, Supercharge};
/// use nalgebra::DMatrix;
/// let sys = build_susy(&Supercharge::new(DMatrix::identity(2, 2)).unwrap()).unwrap();
/// assert!((sys.spectrum()[0] - 1.0).abs() < 1e-14);
/// ```
pub fn build_susy(q: &Supercharge) -> Result<SusySystem> {
    let sys = assemble(q)?;
    if let Some(bad) = sys.invariants.iter().find(|c| !c.passed()) {
        return Err(Error::InvariantViolation { identity: bad.identity, residual: bad.residual });
    }
    Ok(sys)
}

/// Builds the system and records the invariant residuals without failing on
/// them.
pub fn assemble(q: &Supercharge) -> Result<SusySystem> {
    let n = q.n_modes();
    let kb = Generator::new(q.k_b(), Algebra::Symplectic)?;
    let kf = Generator::new(q.k_f(), Algebra::Orthogonal)?;
    let zero_mode = |e: Error| match e {
        Error::ZeroMode { lambda, .. } => Error::ZeroModePresent { smallest: lambda },
        other => other,
    };
    // The skew K_f resolves small λ to absolute precision, so zero modes are
    // detected there; h_b = R^T R only knows them up to eps·‖h_b‖.
    let dec_f = decompose_generator(&kf, ZeroModePolicy::Reject).map_err(zero_mode)?;
    let h_b = q.h_b();
    let eig = nalgebra::SymmetricEigen::new(h_b);
    let condition = eig.eigenvalues.max() / eig.eigenvalues.min().max(f64::MIN_POSITIVE);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let dec_b = decompose_generator(&kb, ZeroModePolicy::Reject).map_err(zero_mode)?;

    let complex = |_: f64| Complex64::i();
    let inv_sqrt = |l: f64| Complex64::new(1.0 / l.sqrt(), 0.0);
    let j_b_mat = matrix_function(&dec_b, complex)?;
    let j_f_mat = matrix_function(&dec_f, complex)?;
    let t1 = q.t1();
    let t2 = q.t2();
    let l1 = matrix_function(&dec_f, inv_sqrt)? * &t1;
    let l2 = matrix_function(&dec_b, inv_sqrt)? * &t2;
    let l1_inv = -(&l2 * &j_f_mat);
    let l2_inv = -(&j_f_mat * &l1);

    let omega = linalg::standard_omega(n);
    let id = Mat::identity(2 * n, 2 * n);
    let g_b = -(&j_b_mat * &omega);
    let rel = |lhs: &Mat, rhs: &Mat| linalg::max_abs_diff(lhs, rhs) / linalg::max_abs(rhs).max(1.0);
    let spectral_gap =
        dec_b.lambdas.iter().zip(&dec_f.lambdas).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / dec_b.lambdas[0];
    let energy = (dec_b.lambdas.iter().sum::<f64>() - dec_f.lambdas.iter().sum::<f64>()).abs()
        / dec_b.lambdas.iter().sum::<f64>();
    let mk = |identity, residual| InvariantCheck { identity, residual, tolerance: INVARIANT_TOL };
    let invariants = vec![
        mk("K_b = T2 T1", rel(&(&t2 * &t1), kb.matrix())),
        mk("K_f = T1 T2", rel(&(&t1 * &t2), kf.matrix())),
        mk("L1 L2 = J_f", rel(&(&l1 * &l2), &j_f_mat)),
        mk("L2 L1 = J_b", rel(&(&l2 * &l1), &j_b_mat)),
        mk("L1^-1 = -L2 J_f", rel(&(&l1_inv * &l1), &id)),
        mk("L1^-1 = -J_b L2", rel(&(-(&j_b_mat * &l2)), &l1_inv)),
        mk("L2^-1 = -J_f L1", rel(&(&l2_inv * &l2), &id)),
        mk("L2^-1 = -L1 J_b", rel(&(-(&l1 * &j_b_mat)), &l2_inv)),
        mk("L2 G_f L2^T = G_b", rel(&(&l2 * l2.transpose()), &g_b)),
        mk("L1 Omega_b L1^T = Omega_f", rel(&(&l1 * &omega * l1.transpose()), &j_f_mat)),
        mk("K_b, K_f isospectral", spectral_gap),
        mk("ground-state energy cancels", energy),
    ];

    let j_b = GaussianState::new(Statistics::Bosonic, j_b_mat)?;
    let j_f = GaussianState::new(Statistics::Fermionic, j_f_mat)?;
    Ok(SusySystem { supercharge: q.clone(), dec_b, dec_f, j_b, j_f, t1, t2, l1, l2, l1_inv, l2_inv, invariants })
}

impl SusySystem {
    pub fn supercharge(&self) -> &Supercharge {
        &self.supercharge
    }

    pub fn n_modes(&self) -> usize {
        self.supercharge.n_modes()
    }

    pub fn j_b(&self) -> &GaussianState {
        &self.j_b
    }

    pub fn j_f(&self) -> &GaussianState {
        &self.j_f
    }

    /// Ground state of the given side.
    pub fn ground_state(&self, statistics: Statistics) -> &GaussianState {
        match statistics {
            Statistics::Bosonic => &self.j_b,
            Statistics::Fermionic => &self.j_f,
        }
    }

    pub fn t1(&self) -> &Mat {
        &self.t1
    }

    pub fn t2(&self) -> &Mat {
        &self.t2
    }

    pub fn l1(&self) -> &Mat {
        &self.l1
    }

    pub fn l2(&self) -> &Mat {
        &self.l2
    }

    pub fn decomposition(&self, statistics: Statistics) -> &PlaneDecomposition {
        match statistics {
            Statistics::Bosonic => &self.dec_b,
            Statistics::Fermionic => &self.dec_f,
        }
    }

    pub fn invariants(&self) -> &[InvariantCheck] {
        &self.invariants
    }

    /// Largest invariant residual.
    pub fn max_invariant_residual(&self) -> f64 {
        self.invariants.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    /// Matrix of an identification map.
    pub fn map(&self, choice: MapChoice) -> &Mat {
        match choice {
            MapChoice::L1 => &self.l1,
            MapChoice::L2 => &self.l2,
            MapChoice::L1Inv => &self.l1_inv,
            MapChoice::L2Inv => &self.l2_inv,
        }
    }

    /// One-particle energies `ω_i` read from `K_b`, descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.dec_b.lambdas
    }
}

/// `ω_i` from both generators; errors if they disagree beyond `1e-9`.
pub fn one_particle_spectrum(sys: &SusySystem) -> Result<Vec<f64>> {
    let b = &sys.dec_b.lambdas;
    let f = &sys.dec_f.lambdas;
    let residual = b.iter().zip(f).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / b[0];
    if residual > INVARIANT_TOL {
        return Err(Error::InvariantViolation { identity: "K_b, K_f isospectral", residual });
    }
    Ok(b.clone())
}

/// Applies an identification map to vectors (columns) of its source space.
pub fn identify(choice: MapChoice, sys: &SusySystem, vectors: &Mat) -> Result<Mat> {
    let m = sys.map(choice);
    if vectors.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{} expects {}-dimensional vectors, got {}",
            choice,
            m.ncols(),
            vectors.nrows()
        )));
    }
    let condition = linalg::condition_number(m);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    Ok(m * vectors)
}

/// The four identification maps built from the fermionic side alone.
///
/// `L1 = |K_f|^{-1/2} T1` and `L1^{-1} = T1^{-1} |K_f|^{1/2}`, after which
/// `L2 = L1^{-1} J_f` and `L2^{-1} = -J_f L1`. Unlike [`build_susy`] this
/// never forms `J_b`, so it stays usable when an edge mode squeezes the
/// bosonic ground state beyond representable precision.
#[derive(Debug, Clone)]
pub struct IdentificationMaps {
    pub l1: Mat,
    pub l2: Mat,
    pub l1_inv: Mat,
    pub l2_inv: Mat,
}

impl IdentificationMaps {
    pub fn get(&self, choice: MapChoice) -> &Mat {
        match choice {
            MapChoice::L1 => &self.l1,
            MapChoice::L2 => &self.l2,
            MapChoice::L1Inv => &self.l1_inv,
            MapChoice::L2Inv => &self.l2_inv,
        }
    }
}

pub fn identification_maps(q: &Supercharge) -> Result<IdentificationMaps> {
    let kf = Generator::new(q.k_f(), Algebra::Orthogonal)?;
    let dec_f = decompose_generator(&kf, ZeroModePolicy::Reject).map_err(|e| match e {
        Error::ZeroMode { lambda, .. } => Error::ZeroModePresent { smallest: lambda },
        other => other,
    })?;
    let j_f = matrix_function(&dec_f, |_| Complex64::i())?;
    let t1 = q.t1();
    let t1_inv = linalg::guarded_inverse(&t1, MAX_CONDITION)?;
    let l1 = matrix_function(&dec_f, |l| Complex64::new(1.0 / l.sqrt(), 0.0))? * &t1;
    let l1_inv = t1_inv * matrix_function(&dec_f, |l| Complex64::new(l.sqrt(), 0.0))?;
    let l2 = &l1_inv * &j_f;
    let l2_inv = -(&j_f * &l1);
    Ok(IdentificationMaps { l1, l2, l1_inv, l2_inv })
}

/// Thermal states of both sides at inverse temperature `beta`.
#[derive(Debug, Clone)]
pub struct ThermalStructures {
    /// `-cot(β K_b / 2)`.
    pub j_b: Mat,
    /// `tan(β K_f / 2)`.
    pub j_f: Mat,
    /// `λ_b` re-extracted from `j_b`, descending.
    pub lambdas_b: Vec<f64>,
    /// `λ_f` re-extracted from `j_f`, ascending (so that rows pair up).
    pub lambdas_f: Vec<f64>,
    /// `‖L_1 J_b L_1^{-1} + J_f^{-1}‖_max`, relative.
    pub duality_residual: f64,
}

/// Gibbs-state complex structures and the thermal duality check.
pub fn thermal_structures(sys: &SusySystem, beta: f64) -> Result<ThermalStructures> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::ParamOutOfRange(format!("beta must be positive, got {beta}")));
    }
    let j_b = matrix_function(&sys.dec_b, |l| Complex64::new(0.0, 1.0 / (beta * l / 2.0).tanh()))?;
    let j_f = matrix_function(&sys.dec_f, |l| Complex64::new(0.0, (beta * l / 2.0).tanh()))?;
    let n = sys.n_modes();
    let dec_b = restricted_planes(Statistics::Bosonic, &j_b, &linalg::standard_omega(n))?;
    let dec_f = restricted_planes(Statistics::Fermionic, &j_f, &Mat::identity(2 * n, 2 * n))?;
    let mut lambdas_f = dec_f.lambdas;
    lambdas_f.reverse();
    let j_f_inv = linalg::guarded_inverse(&j_f, f64::INFINITY)?;
    let lhs = &sys.l1 * &j_b * &sys.l1_inv;
    let duality_residual = linalg::max_abs_diff(&lhs, &(-&j_f_inv)) / linalg::max_abs(&j_f_inv).max(1.0);
    Ok(ThermalStructures { j_b, j_f, lambdas_b: dec_b.lambdas, lambdas_f, duality_residual })
}
