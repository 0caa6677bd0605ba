//! Scan drivers behind the command-line tool: spectra, locality profiles,
//! duality and thermal tables, and the Fock-space oracle comparison.
//!
//! Every driver returns rows in a deterministic order; parallel work is
//! collected in input order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::duality::check_duality;
use crate::entropy::{entropy_from_lambdas, EntropyReport};
use crate::error::{Error, Result};
use crate::fock;
use crate::kahler::{generator_spectrum, Algebra, Generator, Statistics, ZERO_MODE_TOL};
use crate::linalg::Mat;
use crate::models::{build_two_mode, random_supercharge, TwoModeParams};
use crate::subsystem::{restrict, Subsystem};
use crate::susy::{build_susy, thermal_structures, MapChoice, Supercharge, SusySystem};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub index: usize,
    pub omega_b: f64,
    pub omega_f: f64,
    /// `|ω_b - ω_f| / ω_max`.
    pub residual: f64,
}

/// `ω_i` from both generators, descending. Zero modes are reported, not
/// rejected; see [`has_zero_mode`].
pub fn spectrum_rows(q: &Supercharge) -> Result<Vec<SpectrumRow>> {
    let b = generator_spectrum(&Generator::new(q.k_b(), Algebra::Symplectic)?)?;
    let f = generator_spectrum(&Generator::new(q.k_f(), Algebra::Orthogonal)?)?;
    let max = b[0].max(f[0]).max(f64::MIN_POSITIVE);
    Ok(b.iter()
        .zip(&f)
        .enumerate()
        .map(|(index, (&omega_b, &omega_f))| SpectrumRow {
            index,
            omega_b,
            omega_f,
            residual: (omega_b - omega_f).abs() / max,
        })
        .collect())
}

/// Whether the smallest `ω` is a zero mode by the decomposition tolerance.
pub fn has_zero_mode(rows: &[SpectrumRow]) -> Option<f64> {
    let max = rows.first()?.omega_f;
    let min = rows.last()?.omega_f;
    (min <= ZERO_MODE_TOL * max).then_some(min)
}

/// Weight of the image of site `site` on every target site: the sum of
/// squared entries of the map columns `x_site`, `k_site` restricted to the
/// rows `x_j`, `k_j`.
pub fn locality_profile(map: &Mat, site: usize) -> Result<Vec<f64>> {
    let d = map.nrows();
    let n = d / 2;
    if site >= n {
        return Err(Error::OutOfBounds(format!("site {site} outside 0..{n}")));
    }
    Ok((0..n).map(|j| [site, n + site].iter().map(|&c| map[(j, c)].powi(2) + map[(n + j, c)].powi(2)).sum()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalRow {
    pub mode: usize,
    pub omega: f64,
    pub lambda_f: f64,
    pub lambda_b: f64,
    pub product: f64,
}

/// Per-mode thermal eigenvalues, paired so that both belong to the same `ω`
/// (ascending), plus the matrix-level duality residual.
pub fn thermal_rows(sys: &SusySystem, beta: f64) -> Result<(Vec<ThermalRow>, f64)> {
    let t = thermal_structures(sys, beta)?;
    let mut omegas = sys.spectrum().to_vec();
    omegas.reverse();
    let rows = omegas
        .iter()
        .zip(t.lambdas_f.iter().zip(&t.lambdas_b))
        .enumerate()
        .map(|(mode, (&omega, (&lambda_f, &lambda_b)))| ThermalRow {
            mode,
            omega,
            lambda_f,
            lambda_b,
            product: lambda_f * lambda_b,
        })
        .collect();
    Ok((rows, t.duality_residual))
}

/// Outcome of one subsystem in a duality scan.
#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    /// Flagged and skipped: some `λ_f` vanishes, so no bosonic dual exists.
    Obstruction {
        lambda: f64,
    },
    Failed(Error),
}

#[derive(Debug, Clone)]
pub struct DualityRow {
    /// Scan parameter, e.g. the side length `m`.
    pub m: usize,
    pub label: String,
    pub status: RowStatus,
    pub fermionic: Option<EntropyReport>,
    pub bosonic: Option<EntropyReport>,
    /// `λ_f` ascending paired with `λ_b` descending.
    pub pairs: Vec<(f64, f64, f64)>,
    pub max_product_deviation: f64,
    pub matrix_residual: f64,
}

impl DualityRow {
    fn failed(m: usize, label: String, e: Error) -> Self {
        let status = match e {
            Error::MaximallyEntangledObstruction { lambda } => RowStatus::Obstruction { lambda },
            other => RowStatus::Failed(other),
        };
        Self {
            m,
            label,
            status,
            fermionic: None,
            bosonic: None,
            pairs: vec![],
            max_product_deviation: f64::NAN,
            matrix_residual: f64::NAN,
        }
    }

    /// `S_b / S_f`.
    pub fn ratio(&self) -> Option<f64> {
        Some(self.bosonic.as_ref()?.von_neumann / self.fermionic.as_ref()?.von_neumann)
    }
}

/// Restricts both ground states to each subsystem and its dual. Failures
/// are recorded per row and never abort the scan.
pub fn duality_scan(
    sys: &SusySystem,
    subsystems: &[(usize, Subsystem)],
    map: MapChoice,
    renyi: &[f64],
) -> Vec<DualityRow> {
    subsystems
        .par_iter()
        .map(|(m, sub)| {
            let label = sub.label().to_string();
            let run = || -> Result<DualityRow> {
                let rep = check_duality(sys, sub, map)?;
                // λ_f ascending and λ_b descending both list the same modes in
                // the same order, so per-mode entries line up.
                let fermionic = entropy_from_lambdas(Statistics::Fermionic, &rep.lambdas_f(), renyi)?;
                let bosonic = entropy_from_lambdas(Statistics::Bosonic, &rep.lambdas_b(), renyi)?;
                Ok(DualityRow {
                    m: *m,
                    label: label.clone(),
                    status: RowStatus::Ok,
                    fermionic: Some(fermionic),
                    bosonic: Some(bosonic),
                    pairs: rep.pairs,
                    max_product_deviation: rep.max_product_deviation,
                    matrix_residual: rep.matrix_residual,
                })
            };
            run().unwrap_or_else(|e| DualityRow::failed(*m, label.clone(), e))
        })
        .collect()
}

/// One exact-vs-Gaussian entropy comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub label: String,
    pub exact: f64,
    pub gaussian: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub tail_mass: f64,
}

impl OracleCase {
    pub fn passed(&self) -> bool {
        self.deviation < self.tolerance
    }
}

pub const FERMIONIC_ORACLE_TOL: f64 = 1e-8;
pub const BOSONIC_ORACLE_TOL: f64 = 1e-5;

/// All contiguous site ranges `[i, j)` of an `n`-site system.
pub fn contiguous_cuts(n: usize) -> Vec<Vec<usize>> {
    let mut cuts = Vec::new();
    for len in 1..=n {
        for start in 0..=n - len {
            cuts.push((start..start + len).collect());
        }
    }
    cuts
}

/// `1,2,3`-style site list for labels.
fn one_based(sites: &[usize]) -> String {
    sites.iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// Fermionic ground state of a random supercharge: exact reduced-state
/// entropies against the Gaussian ones for each cut (all contiguous cuts if
/// `cuts` is `None`).
pub fn fermionic_oracle(seed: u64, n: usize, cuts: Option<Vec<Vec<usize>>>) -> Result<Vec<OracleCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_supercharge(n, &mut rng)?;
    fermionic_oracle_for(&q, cuts, &format!("seed={seed}"))
}

pub fn fermionic_oracle_for(q: &Supercharge, cuts: Option<Vec<Vec<usize>>>, tag: &str) -> Result<Vec<OracleCase>> {
    let n = q.n_modes();
    let state = fock::ground_state_exact(Statistics::Fermionic, &q.h_f(), 1)?;
    let sys = build_susy(q)?;
    let cuts = cuts.unwrap_or_else(|| contiguous_cuts(n));
    cuts.into_iter()
        .map(|cut| {
            let exact = fock::entropy_exact(&fock::reduced_density_exact(&state, &cut)?);
            let sub = Subsystem::from_sites(Statistics::Fermionic, n, &cut)?;
            let lambdas = restrict(sys.j_f(), &sub)?.lambdas;
            let gaussian = entropy_from_lambdas(Statistics::Fermionic, &lambdas, &[])?.von_neumann;
            Ok(OracleCase {
                label: format!("fermionic {tag} n={n} sites={}", one_based(&cut)),
                exact,
                gaussian,
                deviation: (exact - gaussian).abs(),
                tolerance: FERMIONIC_ORACLE_TOL,
                tail_mass: 0.0,
            })
        })
        .collect()
}

/// Two-mode bosonic ground state, keeping mode 1.
pub fn bosonic_oracle(r_b: f64, cutoff: usize) -> Result<OracleCase> {
    let q = build_two_mode(&TwoModeParams { r_b, r_f: 0.0 })?;
    let state = fock::ground_state_exact(Statistics::Bosonic, &q.h_b(), cutoff)?;
    let exact = fock::entropy_exact(&fock::reduced_density_exact(&state, &[0])?);
    let sys = build_susy(&q)?;
    let sub = Subsystem::from_sites(Statistics::Bosonic, 2, &[0])?;
    let lambdas = restrict(sys.j_b(), &sub)?.lambdas;
    let gaussian = entropy_from_lambdas(Statistics::Bosonic, &lambdas, &[])?.von_neumann;
    Ok(OracleCase {
        label: format!("bosonic two-mode r_b={r_b} cutoff={}", state.space.cutoff()),
        exact,
        gaussian,
        deviation: (exact - gaussian).abs(),
        tolerance: BOSONIC_ORACLE_TOL,
        tail_mass: state.tail_mass,
    })
}
