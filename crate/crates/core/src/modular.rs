//! Modular (entanglement) Hamiltonians `ρ_A = e^{-Q̂}`.
//!
//! In the subsystem basis `ξ^r`, bosons have `Q̂ = q_rs ξ^r ξ^s + c_0` and
//! fermions `Q̂ = i q_rs ξ^r ξ^s + c_0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahler::{matrix_function, Statistics};
use crate::linalg::{self, Mat};
use crate::subsystem::restricted_planes;

/// Modes closer than this to `λ = 1` make `q` singular.
pub const PURE_MODE_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ModularHamiltonian {
    /// Symmetric for bosons, antisymmetric for fermions.
    pub q: Mat,
    pub c0: f64,
    pub lambdas: Vec<f64>,
}

/// Builds `q` and `c_0` from a restricted complex structure.
///
/// `form` is `Omega_A` for bosons and `G_A` for fermions. Bosons use
/// `q = -Omega_A^{-1} arccot(J_A)`, fermions `q = G_A^{-1} arctan(J_A)`; on a
/// plane with eigenvalue `λ` these have coefficients `arctanh(1/λ)` and
/// `arctanh(λ)`. `c_0 = ±¼ ln det((I + J_A²)/4)` normalises the trace.
pub fn modular_hamiltonian(statistics: Statistics, j_a: &Mat, form: &Mat) -> Result<ModularHamiltonian> {
    let dec = restricted_planes(statistics, j_a, form)?;
    for &lambda in &dec.lambdas {
        if (lambda - 1.0).abs() < PURE_MODE_TOL {
            return Err(Error::PureModeInModularHamiltonian { lambda });
        }
    }
    let form_inv = linalg::guarded_inverse(form, crate::kahler::MAX_CONDITION)?;
    let log_det: f64 = dec.lambdas.iter().map(|&l| 2.0 * ((1.0 - l * l) / 4.0).abs().ln()).sum();
    let (q, c0) = match statistics {
        Statistics::Bosonic => {
            // arccot(iλ) = -i arctanh(1/λ)
            let f = matrix_function(&dec, |l| Complex64::new(0.0, -(1.0 / l).atanh()))?;
            (-(form_inv * f), 0.25 * log_det)
        }
        Statistics::Fermionic => {
            // arctan(iλ) = i arctanh(λ)
            let f = matrix_function(&dec, |l| Complex64::new(0.0, l.atanh()))?;
            (form_inv * f, -0.25 * log_det)
        }
    };
    let q = match statistics {
        Statistics::Bosonic => linalg::symmetrize(&q),
        Statistics::Fermionic => linalg::antisymmetrize(&q),
    };
    Ok(ModularHamiltonian { q, c0, lambdas: dec.lambdas })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(l: f64) -> Mat {
        Mat::from_row_slice(2, 2, &[0.0, l, -l, 0.0])
    }

    #[test]
    fn fermionic_plane_coefficient() {
        let m = modular_hamiltonian(Statistics::Fermionic, &plane(0.6), &Mat::identity(2, 2)).unwrap();
        assert!((m.q[(0, 1)] - 0.6f64.atanh()).abs() < 1e-12);
        // -ln((1-λ)/(1+λ))/2
        assert!((m.q[(0, 1)] + (0.4f64 / 1.6).ln() / 2.0).abs() < 1e-14);
        // Tr e^{-Q} = e^{-c0} 2 cosh(arctanh λ) = 1
        let a = 0.6f64.atanh();
        assert!(((-m.c0).exp() * 2.0 * a.cosh() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bosonic_normalisation() {
        let l = 1.7f64;
        let m = modular_hamiltonian(Statistics::Bosonic, &plane(l), &linalg::standard_omega(1)).unwrap();
        let a = (1.0 / l).atanh();
        assert!((m.q[(0, 0)] - a).abs() < 1e-12 && (m.q[(1, 1)] - a).abs() < 1e-12);
        // Q = a(q² + p²) + c0 = a(2n + 1) + c0
        let trace = (-m.c0).exp() * (-a).exp() / (1.0 - (-2.0 * a).exp());
        assert!((trace - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_modes_are_singular() {
        let err =
            modular_hamiltonian(Statistics::Bosonic, &plane(1.0 + 1e-12), &linalg::standard_omega(1)).unwrap_err();
        assert!(matches!(err, Error::PureModeInModularHamiltonian { .. }));
        let err = modular_hamiltonian(Statistics::Fermionic, &plane(1.0), &Mat::identity(2, 2)).unwrap_err();
        assert!(matches!(err, Error::PureModeInModularHamiltonian { .. }));
    }
}
