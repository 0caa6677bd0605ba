use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::susy::Supercharge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::ParamOutOfRange(format!("unknown boundary {other:?}"))),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChainParams {
    pub n_sites: usize,
    pub t: f64,
    pub mu: f64,
    pub boundary: Boundary,
}

/// Kitaev chain supercharge
/// `Q̂ = √μ Σ_i (γ_i q_i + η_i p_i) + (2t/√μ) Σ_i γ_{i+1} q_i`.
///
/// The `γ–q` block is `√μ I + (2t/√μ) S` with the lower shift
/// `S_{i+1,i} = 1` (plus `S_{1,N}` when periodic); the `η–p` block is `√μ I`.
/// The fermionic side is the Kitaev chain at equal hopping and pairing; the
/// bosonic side is a Kane–Lubensky chain.
pub fn build_kitaev_chain(p: &ChainParams) -> Result<Supercharge> {
    if !(p.mu > 0.0) || !p.mu.is_finite() {
        return Err(Error::ParamOutOfRange(format!("mu must be > 0, got {}", p.mu)));
    }
    if !p.t.is_finite() {
        return Err(Error::ParamOutOfRange(format!("t must be finite, got {}", p.t)));
    }
    if p.n_sites == 0 {
        return Err(Error::ParamOutOfRange("chain needs at least one site".into()));
    }
    let n = p.n_sites;
    let s = p.mu.sqrt();
    let hop = 2.0 * p.t / s;
    let mut r = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        r[(i, i)] = s;
        r[(n + i, n + i)] = s;
        if i + 1 < n {
            r[(i + 1, i)] += hop;
        }
    }
    if p.boundary == Boundary::Periodic && n > 1 {
        r[(0, n - 1)] += hop;
    }
    Supercharge::new(r)
}
