//! Supercharge builders for the concrete systems: the SUSY oscillator, the
//! two-mode squeezing pair, the Kitaev/Kane–Lubensky chain and the Kitaev
//! honeycomb / triangular lattice pair.

mod chain;
mod honeycomb;

pub use chain::{build_kitaev_chain, Boundary, ChainParams};
pub use honeycomb::{
    boundary_link_census, build_honeycomb, honeycomb_coupling_matrix, momentum_spectrum, parallelogram_cells,
    parallelogram_subsystem, HoneycombParams, LinkCensus,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::susy::Supercharge;

/// `Q̂ = q γ + p η`, i.e. `R = I` at `N = 1`.
pub fn build_susy_oscillator() -> Supercharge {
    Supercharge::new(Mat::identity(2, 2)).expect("identity is a valid supercharge")
}

/// Squeezing parameters of the two-mode pair.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TwoModeParams {
    pub r_b: f64,
    /// Must stay below `π/4`, where the fermionic site mode becomes maximally
    /// entangled.
    pub r_f: f64,
}

/// Two-mode squeezing supercharge.
///
/// In the canonical bases (rows `γ_1, γ_2, η_1, η_2`, columns
/// `q_1, q_2, p_1, p_2`):
///
/// ```text
/// R = [[ a,  c, 0,  0],
///      [-d,  b, 0,  0],
///      [ 0,  0, a, -c],
///      [ 0,  0, d,  b]]
/// a = ch cf - sh sf,  b = ch cf + sh sf,
/// c = ch sf - sh cf,  d = ch sf + sh cf
/// ```
/// with `ch = cosh r_b`, `sh = sinh r_b`, `cf = cos r_f`, `sf = sin r_f`.
pub fn build_two_mode(p: &TwoModeParams) -> Result<Supercharge> {
    if !(p.r_b >= 0.0) || !p.r_b.is_finite() {
        return Err(Error::ParamOutOfRange(format!("r_b must be >= 0, got {}", p.r_b)));
    }
    if !(p.r_f >= 0.0 && p.r_f < std::f64::consts::FRAC_PI_4) {
        return Err(Error::ParamOutOfRange(format!("r_f must lie in [0, π/4), got {}", p.r_f)));
    }
    let (ch, sh) = (p.r_b.cosh(), p.r_b.sinh());
    let (cf, sf) = (p.r_f.cos(), p.r_f.sin());
    let a = ch * cf - sh * sf;
    let b = ch * cf + sh * sf;
    let c = ch * sf - sh * cf;
    let d = ch * sf + sh * cf;
    #[rustfmt::skip]
    let r = Mat::from_row_slice(4, 4, &[
        a, c, 0.0, 0.0,
        -d, b, 0.0, 0.0,
        0.0, 0.0, a, -c,
        0.0, 0.0, d, b,
    ]);
    Supercharge::new(r)
}

/// Smallest singular value accepted by [`random_supercharge`].
pub const RANDOM_MIN_SINGULAR: f64 = 1e-3;

/// Entries i.i.d. uniform on `[-1, 1]`, resampled until the smallest singular
/// value is at least [`RANDOM_MIN_SINGULAR`].
pub fn random_supercharge<R: Rng + ?Sized>(n_modes: usize, rng: &mut R) -> Result<Supercharge> {
    if n_modes == 0 {
        return Err(Error::ParamOutOfRange("need at least one mode".into()));
    }
    loop {
        let r = Mat::from_fn(2 * n_modes, 2 * n_modes, |_, _| rng.random_range(-1.0..=1.0));
        if r.clone().singular_values().min() >= RANDOM_MIN_SINGULAR {
            return Supercharge::new(r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::susy::build_susy;

    #[test]
    fn oscillator_forms() {
        let q = build_susy_oscillator();
        assert_eq!(q.h_b(), Mat::identity(2, 2));
        assert_eq!(q.k_b(), linalg::standard_omega(1));
    }

    #[test]
    fn untwisted_two_mode_is_identity() {
        let q = build_two_mode(&TwoModeParams { r_b: 0.0, r_f: 0.0 }).unwrap();
        assert_eq!(q.r(), &Mat::identity(4, 4));
        assert!(build_two_mode(&TwoModeParams { r_b: 0.0, r_f: 0.8 }).is_err());
        assert!(build_two_mode(&TwoModeParams { r_b: -0.1, r_f: 0.0 }).is_err());
    }

    #[test]
    fn two_mode_hamiltonians() {
        let (rb, rf) = (0.3f64, 0.2f64);
        let q = build_two_mode(&TwoModeParams { r_b: rb, r_f: rf }).unwrap();
        // H_b = cosh(2r_b)/2 Σ(q²+p²) + sinh(2r_b)(p1 p2 - q1 q2) as ½ ξ^T h_b ξ.
        let (c2, s2) = ((2.0 * rb).cosh(), (2.0 * rb).sinh());
        #[rustfmt::skip]
        let hb = Mat::from_row_slice(4, 4, &[
            c2, -s2, 0.0, 0.0,
            -s2, c2, 0.0, 0.0,
            0.0, 0.0, c2, s2,
            0.0, 0.0, s2, c2,
        ]);
        assert!(linalg::max_abs_diff(&q.h_b(), &hb) < 1e-14);
        let sys = build_susy(&q).unwrap();
        assert!(sys.spectrum().iter().all(|&w| (w - 1.0).abs() < 1e-12));
    }

    #[test]
    fn random_supercharges_are_well_conditioned() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..5 {
            let q = random_supercharge(n, &mut rng).unwrap();
            assert!(q.r().clone().singular_values().min() >= RANDOM_MIN_SINGULAR);
            assert!(q.r().iter().all(|x| x.abs() <= 1.0));
        }
    }
}
