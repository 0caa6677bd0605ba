//! Dual subsystems and the bosonic/fermionic entanglement duality
//! `λ_b = 1/λ_f`.

use crate::error::{Error, Result};
use crate::kahler::Statistics;
use crate::linalg;
use crate::subsystem::{normalize_dual_basis, restrict, RestrictedStructure, Subsystem};
use crate::susy::{identify, MapChoice, SusySystem};

/// Fermionic `λ_f` below this has no bosonic dual.
pub const OBSTRUCTION_TOL: f64 = 1e-10;

/// Image of a subsystem under an identification map, as a subsystem of the
/// partner side (not yet normalised; see [`normalize_dual_basis`]).
pub fn dual_subsystem(sys: &SusySystem, sub: &Subsystem, map: MapChoice) -> Result<Subsystem> {
    if map.source() != sub.statistics() {
        return Err(Error::Incompatible(format!(
            "{map} acts on {} vectors, subsystem is {}",
            map.source(),
            sub.statistics()
        )));
    }
    if sub.statistics() == Statistics::Fermionic {
        // The restricted Omega_f is singular exactly when some λ_f vanishes.
        let rs = restrict(sys.j_f(), sub)?;
        let smallest = rs.lambdas.last().copied().unwrap_or(1.0);
        if smallest < OBSTRUCTION_TOL {
            return Err(Error::MaximallyEntangledObstruction { lambda: smallest });
        }
    }
    let image = identify(map, sys, sub.basis())?;
    Subsystem::from_basis(map.target(), image, format!("{map}({})", sub.label())).map_err(|e| match e {
        Error::DegenerateRestriction { smallest } => Error::MaximallyEntangledObstruction { lambda: smallest },
        other => other,
    })
}

/// Outcome of comparing a subsystem with its dual.
#[derive(Debug, Clone)]
pub struct DualityReport {
    pub map: MapChoice,
    pub source: RestrictedStructure,
    /// Restriction to the normalised dual subsystem.
    pub dual: RestrictedStructure,
    pub dual_subsystem: Subsystem,
    /// `(λ_f ascending, λ_b descending, λ_f λ_b)`.
    pub pairs: Vec<(f64, f64, f64)>,
    pub max_product_deviation: f64,
    /// Relative residual of `J^{dual}_{L(A)} = -(J^{src}_A)^{-1}`, both in
    /// the bases `L E` and `E`.
    pub matrix_residual: f64,
    /// Whether the spectrum has (near-)degenerate values, in which case the
    /// pairing is only defined up to reordering within a cluster.
    pub degenerate: bool,
}

impl DualityReport {
    pub fn lambdas_f(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn lambdas_b(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.1).collect()
    }
}

/// Restricts both ground states to `A` and its dual and checks the duality.
pub fn check_duality(sys: &SusySystem, sub: &Subsystem, map: MapChoice) -> Result<DualityReport> {
    let source = restrict(sys.ground_state(sub.statistics()), sub)?;
    let image = dual_subsystem(sys, sub, map)?;
    let target_state = sys.ground_state(map.target());
    let raw = restrict(target_state, &image)?;
    let src_inv = linalg::guarded_inverse(&source.j_a, f64::INFINITY)?;
    let matrix_residual = linalg::max_abs_diff(&raw.j_a, &(-&src_inv)) / linalg::max_abs(&src_inv).max(1.0);

    let dual_subsystem = normalize_dual_basis(&image)?;
    let dual = restrict(target_state, &dual_subsystem)?;

    let (mut lf, mut lb) = match sub.statistics() {
        Statistics::Fermionic => (source.lambdas.clone(), dual.lambdas.clone()),
        Statistics::Bosonic => (dual.lambdas.clone(), source.lambdas.clone()),
    };
    lf.sort_by(|a, b| a.total_cmp(b));
    lb.sort_by(|a, b| b.total_cmp(a));
    let pairs: Vec<(f64, f64, f64)> = lf.iter().zip(&lb).map(|(&f, &b)| (f, b, f * b)).collect();
    let max_product_deviation = pairs.iter().map(|p| (p.2 - 1.0).abs()).fold(0.0, f64::max);
    let degenerate = lf.windows(2).any(|w| (w[1] - w[0]).abs() < 1e-8);
    Ok(DualityReport { map, source, dual, dual_subsystem, pairs, max_product_deviation, matrix_residual, degenerate })
}
