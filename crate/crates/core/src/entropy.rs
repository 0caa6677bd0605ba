//! Entanglement entropies and reduced-state spectra from restricted
//! eigenvalues `λ_i`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahler::Statistics;
use crate::linalg::Mat;

/// Eigenvalues this far outside their legal interval are clamped onto it.
pub const CLAMP_TOL: f64 = 1e-9;

/// Bosonic `λ` above this is reported as saturated.
pub const BOSONIC_SATURATION: f64 = 1e12;

/// Fermionic restricted enumeration limit for [`rho_spectrum`].
pub const MAX_FERMIONIC_ENUMERATION: usize = 20;

/// Von Neumann and Rényi entropies (nats) of a Gaussian reduced state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub statistics: Statistics,
    /// Clamped eigenvalues, in input order.
    pub lambdas: Vec<f64>,
    pub von_neumann: f64,
    pub per_mode: Vec<f64>,
    /// `(k, S_k)` pairs in request order.
    pub renyi: Vec<(f64, f64)>,
    /// Set when some bosonic `λ` exceeded [`BOSONIC_SATURATION`].
    pub saturated: bool,
}

/// `x ln x` with the `x → 0` limit.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Single-mode bosonic entropy, `λ >= 1`.
pub fn s_b(x: f64) -> f64 {
    xlnx((x + 1.0) / 2.0) - xlnx((x - 1.0) / 2.0)
}

/// Single-mode fermionic entropy, `λ ∈ [0, 1]`.
pub fn s_f(x: f64) -> f64 {
    -xlnx((1.0 + x) / 2.0) - xlnx((1.0 - x) / 2.0)
}

/// Single-mode bosonic Rényi entropy of order `k`.
pub fn r_b(x: f64, k: f64) -> f64 {
    let a = ((x + 1.0) / 2.0).powf(k);
    let b = ((x - 1.0) / 2.0).max(0.0).powf(k);
    (a - b).ln() / (k - 1.0)
}

/// Single-mode fermionic Rényi entropy of order `k`.
pub fn r_f(x: f64, k: f64) -> f64 {
    let a = ((1.0 + x) / 2.0).powf(k);
    let b = ((1.0 - x) / 2.0).max(0.0).powf(k);
    -(a + b).ln() / (k - 1.0)
}

/// Clamps `λ` into its statistics-dependent domain.
pub fn clamp_lambda(statistics: Statistics, lambda: f64) -> Result<f64> {
    clamp_lambda_with_tol(statistics, lambda, CLAMP_TOL)
}

/// [`clamp_lambda`] with an explicit absolute tolerance, for spectra whose
/// accuracy is limited by a large norm.
pub fn clamp_lambda_with_tol(statistics: Statistics, lambda: f64, tol: f64) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::Domain { value: lambda });
    }
    match statistics {
        Statistics::Bosonic if lambda >= 1.0 => Ok(lambda),
        Statistics::Bosonic if lambda >= 1.0 - tol => Ok(1.0),
        Statistics::Fermionic if (0.0..=1.0).contains(&lambda) => Ok(lambda),
        Statistics::Fermionic if (-tol..0.0).contains(&lambda) => Ok(0.0),
        Statistics::Fermionic if (1.0..=1.0 + tol).contains(&lambda) => Ok(1.0),
        _ => Err(Error::Domain { value: lambda }),
    }
}

/// Entropies from restricted eigenvalues.
///
/// ```
/// use susyent::{entropy::entropy_from_lambdas, Statistics};
/// let rep = entropy_from_lambdas(Statistics::Fermionic, &[0.5], &[2.0]).unwrap();
/// assert!((rep.von_neumann - 0.562335).abs() < 1e-6);
/// assert!((rep.renyi[0].1 - 0.470004).abs() < 1e-6);
/// ```
pub fn entropy_from_lambdas(statistics: Statistics, lambdas: &[f64], renyi_orders: &[f64]) -> Result<EntropyReport> {
    for &k in renyi_orders {
        if !(k > 0.0) || k == 1.0 || !k.is_finite() {
            return Err(Error::ParamOutOfRange(format!("Rényi order must be positive and != 1, got {k}")));
        }
    }
    let lambdas = lambdas.iter().map(|&l| clamp_lambda(statistics, l)).collect::<Result<Vec<_>>>()?;
    type PerMode = (fn(f64) -> f64, fn(f64, f64) -> f64);
    let (single, renyi_single): PerMode = match statistics {
        Statistics::Bosonic => (s_b, r_b),
        Statistics::Fermionic => (s_f, r_f),
    };
    let per_mode: Vec<f64> = lambdas.iter().map(|&l| single(l)).collect();
    let von_neumann = per_mode.iter().sum();
    let renyi = renyi_orders.iter().map(|&k| (k, lambdas.iter().map(|&l| renyi_single(l, k)).sum())).collect();
    let saturated = statistics == Statistics::Bosonic && lambdas.iter().any(|&l| l > BOSONIC_SATURATION);
    Ok(EntropyReport { statistics, lambdas, von_neumann, per_mode, renyi, saturated })
}

/// `½ |Tr[((1 + iJ_A)/2) ln((1 + iJ_A)/2)^2]|`, evaluated from the
/// eigenvalues of `J_A` found by a general (Schur) eigensolver.
///
/// Valid for both statistics; it does not use the plane decomposition, so it
/// serves as an independent check on [`entropy_from_lambdas`].
pub fn entropy_trace_formula(j_a: &Mat) -> f64 {
    let eigenvalues = j_a.clone().complex_eigenvalues();
    let sum: Complex64 = eigenvalues
        .iter()
        .map(|z| {
            let mu = (Complex64::new(1.0, 0.0) + Complex64::i() * z) * 0.5;
            if mu.norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                mu * (mu * mu).ln()
            }
        })
        .sum();
    0.5 * sum.re.abs()
}

/// Eigenvalues of `ρ_A` labelled by occupation numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoSpectrum {
    pub weights: Vec<(Vec<usize>, f64)>,
    /// `1 - Σ weights`; zero up to roundoff for fermions.
    pub tail_mass: f64,
}

impl RhoSpectrum {
    /// Shannon entropy `-Σ μ ln μ` of the enumerated weights.
    pub fn shannon(&self) -> f64 {
        self.weights.iter().map(|(_, w)| -xlnx(*w)).sum()
    }
}

/// Enumerates the spectrum of `ρ_A`.
///
/// Fermions enumerate all `2^{N_A}` occupations; bosons enumerate
/// `n_i <= bosonic_cutoff` and report the rest as tail mass.
pub fn rho_spectrum(statistics: Statistics, lambdas: &[f64], bosonic_cutoff: usize) -> Result<RhoSpectrum> {
    let lambdas = lambdas.iter().map(|&l| clamp_lambda(statistics, l)).collect::<Result<Vec<_>>>()?;
    let n = lambdas.len();
    // Per-mode occupation weights.
    let (levels, per_mode): (usize, Vec<Vec<f64>>) = match statistics {
        Statistics::Fermionic => {
            if n > MAX_FERMIONIC_ENUMERATION {
                return Err(Error::TooLarge(format!("2^{n} fermionic occupations")));
            }
            let w = lambdas
                .iter()
                .map(|&l| {
                    let r = 0.5 * l.acos();
                    vec![r.cos().powi(2), r.sin().powi(2)]
                })
                .collect();
            (2, w)
        }
        Statistics::Bosonic => {
            let levels = bosonic_cutoff + 1;
            let total = (levels as f64).powi(n as i32);
            if total > 5e7 {
                return Err(Error::TooLarge(format!("{levels}^{n} bosonic occupations")));
            }
            let w = lambdas
                .iter()
                .map(|&l| {
                    let r = 0.5 * l.acosh();
                    let t2 = r.tanh().powi(2);
                    let c2 = r.cosh().powi(2);
                    (0..levels).map(|k| t2.powi(k as i32) / c2).collect()
                })
                .collect();
            (levels, w)
        }
    };
    let count = levels.pow(n as u32);
    let mut weights = Vec::with_capacity(count);
    let mut occ = vec![0usize; n];
    for _ in 0..count {
        let w: f64 = occ.iter().zip(&per_mode).map(|(&k, m)| m[k]).product();
        weights.push((occ.clone(), w));
        for slot in occ.iter_mut() {
            *slot += 1;
            if *slot < levels {
                break;
            }
            *slot = 0;
        }
    }
    let tail_mass = match statistics {
        Statistics::Fermionic => 0.0,
        Statistics::Bosonic => (1.0 - per_mode.iter().map(|m| m.iter().sum::<f64>()).product::<f64>()).max(0.0),
    };
    Ok(RhoSpectrum { weights, tail_mass })
}
