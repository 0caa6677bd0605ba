//! Gaussian states as Kähler structures, supersymmetric quadratic systems
//! and the bosonic/fermionic entanglement duality.
//!
//! Phase spaces use the canonical basis `(x_1..x_N, k_1..k_N)`: `(q, p)` for
//! bosons, Majorana pairs `(γ, η)` for fermions. A pure Gaussian state is a
//! linear complex structure `J` with `J² = -1`; everything else — entropies,
//! modular Hamiltonians, dual subsystems — is computed from `J` restricted to
//! a subsystem.
//!
//! ```
//! use susyent::{build_susy, models, Statistics, Subsystem, MapChoice};
//! use susyent::duality::check_duality;
//!
//! let q = models::build_two_mode(&models::TwoModeParams { r_b: 0.3, r_f: 0.2 }).unwrap();
//! let sys = build_susy(&q).unwrap();
//! let site = Subsystem::from_sites(Statistics::Fermionic, 2, &[0]).unwrap();
//! let report = check_duality(&sys, &site, MapChoice::L1Inv).unwrap();
//! let (lf, lb, product) = report.pairs[0];
//! assert!((lf - 0.4f64.cos()).abs() < 1e-10);
//! assert!((lb - 1.0 / 0.4f64.cos()).abs() < 1e-10);
//! assert!((product - 1.0).abs() < 1e-10);
//! ```

pub mod descriptor;
pub mod duality;
pub mod entropy;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod kahler;
pub mod linalg;
pub mod models;
pub mod modular;
pub mod scan;
pub mod subsystem;
pub mod susy;

pub use error::{Error, Result};
pub use gaussian::{apply_bogoliubov, state_from_covariance, two_point_function, BogoliubovTransform, GaussianState};
pub use kahler::{decompose_generator, matrix_function, Algebra, Generator, KahlerSpace, Statistics};
pub use subsystem::{complement, restrict, RestrictedStructure, Subsystem};
pub use susy::{build_susy, identify, MapChoice, Supercharge, SusySystem};
