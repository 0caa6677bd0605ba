//! Brute-force Fock-space oracle for tiny systems.
//!
//! Quadratic Hamiltonians are assembled literally from ladder operators and
//! diagonalised in the many-body space, so every quantity here is independent
//! of the complex-structure machinery it is used to check. Only
//! basis-independent outputs (two-point functions, spectra, entropies) should
//! be compared against the Gaussian formulas; amplitudes carry an arbitrary
//! global phase.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::CMat;
use crate::kahler::Statistics;
use crate::linalg::Mat;

/// Largest many-body dimension the oracle will build.
pub const MAX_DIMENSION: usize = 20_000;
pub const MAX_FERMIONIC_MODES: usize = 6;
pub const MAX_BOSONIC_MODES: usize = 3;
pub const DEFAULT_CUTOFF: usize = 60;
/// Truncation weight above which the bosonic cutoff is doubled once.
pub const TAIL_TOL: f64 = 1e-8;
/// Gap below which a ground state counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Dense diagonalisation up to this dimension, Lanczos above.
const DENSE_LIMIT: usize = 512;

type C = Complex64;

/// Tensor-product Fock basis: occupation `n_k` of mode `k` has stride
/// `(cutoff + 1)^k`. Fermions use `cutoff = 1` and Jordan–Wigner ordering
/// `|n⟩ = (c_0^†)^{n_0} (c_1^†)^{n_1} ⋯ |0⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    statistics: Statistics,
    n_modes: usize,
    cutoff: usize,
    dim: usize,
}

impl FockSpace {
    pub fn new(statistics: Statistics, n_modes: usize, cutoff: usize) -> Result<Self> {
        let (limit, cutoff) = match statistics {
            Statistics::Fermionic => (MAX_FERMIONIC_MODES, 1),
            Statistics::Bosonic => (MAX_BOSONIC_MODES, cutoff),
        };
        if n_modes == 0 || cutoff == 0 {
            return Err(Error::ParamOutOfRange("Fock space needs at least one mode and one level".into()));
        }
        let dim = (cutoff + 1).checked_pow(n_modes as u32).unwrap_or(usize::MAX);
        if n_modes > limit {
            return Err(Error::DimensionGuard { quantity: "mode count", value: n_modes, max: limit });
        }
        if dim > MAX_DIMENSION {
            return Err(Error::DimensionGuard { quantity: "Fock dimension", value: dim, max: MAX_DIMENSION });
        }
        Ok(Self { statistics, n_modes, cutoff, dim })
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow(mode as u32)
    }

    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % (self.cutoff + 1)
    }

    /// `a_k` (or `c_k`) applied to a state vector.
    fn lower(&self, psi: &DVector<C>, mode: usize) -> DVector<C> {
        let stride = self.stride(mode);
        let mut out = DVector::zeros(self.dim);
        for (i, &amp) in psi.iter().enumerate() {
            let n = self.occupation(i, mode);
            if n == 0 || amp == C::new(0.0, 0.0) {
                continue;
            }
            let factor = match self.statistics {
                Statistics::Bosonic => (n as f64).sqrt(),
                Statistics::Fermionic => self.jw_sign(i, mode),
            };
            out[i - stride] += amp * factor;
        }
        out
    }

    /// `(-1)^{Σ_{k<mode} n_k}`.
    fn jw_sign(&self, index: usize, mode: usize) -> f64 {
        let below = (index & ((1 << mode) - 1)).count_ones();
        if below.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Dense `c_k` in the Jordan–Wigner basis (fermions only).
    fn fermionic_lowering(&self, mode: usize) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            if (i >> mode) & 1 == 1 {
                m[(i - (1 << mode), i)] = C::new(self.jw_sign(i, mode), 0.0);
            }
        }
        m
    }
}

/// Quadrature coefficients: `ξ_r = Σ_k (c_rk a_k + conj(c_rk) a_k^†)` with
/// `q_k, γ_k = (a_k + a_k^†)/√2` and `p_k, η_k = -i(a_k - a_k^†)/√2`.
fn quadrature_coefficients(n: usize) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut c = CMat::zeros(2 * n, n);
    for k in 0..n {
        c[(k, k)] = C::new(s, 0.0);
        c[(n + k, k)] = C::new(0.0, -s);
    }
    c
}

/// Row-wise sparse Hermitian operator.
struct SparseOp {
    rows: Vec<Vec<(usize, C)>>,
}

impl SparseOp {
    fn apply(&self, v: &DVector<C>) -> DVector<C> {
        DVector::from_iterator(
            self.rows.len(),
            self.rows.iter().map(|row| row.iter().map(|&(j, a)| a * v[j]).sum::<C>()),
        )
    }

    fn to_dense(&self) -> CMat {
        let d = self.rows.len();
        let mut m = CMat::zeros(d, d);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, a) in row {
                m[(i, j)] += a;
            }
        }
        m
    }
}

/// Normal-ordered bosonic Hamiltonian `½ ξ^T h ξ`, truncated to the space.
///
/// Normal ordering keeps the truncation exact: the result equals `P H P`
/// with `P` the projector onto the retained occupations.
fn bosonic_hamiltonian(space: &FockSpace, h: &Mat) -> SparseOp {
    let n = space.n_modes;
    let c = quadrature_coefficients(n);
    let hc = h.map(|x| C::new(x, 0.0));
    // coefficient blocks of a a, a a^†, a^† a, a^† a^†
    let aa = c.transpose() * &hc * &c * C::new(0.5, 0.0);
    let a_ad = c.transpose() * &hc * c.conjugate() * C::new(0.5, 0.0);
    let ad_a = c.adjoint() * &hc * &c * C::new(0.5, 0.0);
    let adad = c.adjoint() * &hc * c.conjugate() * C::new(0.5, 0.0);
    // a_k a_l^† = a_l^† a_k + δ_kl
    let constant: C = (0..n).map(|k| a_ad[(k, k)]).sum();
    let mut hop = ad_a.clone();
    for k in 0..n {
        for l in 0..n {
            hop[(l, k)] += a_ad[(k, l)];
        }
    }

    let mut rows: Vec<std::collections::BTreeMap<usize, C>> = vec![Default::default(); space.dim];
    for j in 0..space.dim {
        *rows[j].entry(j).or_default() += constant;
        for k in 0..n {
            for l in 0..n {
                // a_k^† a_l |j⟩
                let w = hop[(k, l)];
                if w.norm() > 0.0 {
                    if let Some((i, amp)) = step(space, j, &[(l, false), (k, true)]) {
                        *rows[i].entry(j).or_default() += w * amp;
                    }
                }
                // a_k a_l |j⟩
                let w = aa[(k, l)];
                if w.norm() > 0.0 {
                    if let Some((i, amp)) = step(space, j, &[(l, false), (k, false)]) {
                        *rows[i].entry(j).or_default() += w * amp;
                    }
                }
                // a_k^† a_l^† |j⟩
                let w = adad[(k, l)];
                if w.norm() > 0.0 {
                    if let Some((i, amp)) = step(space, j, &[(l, true), (k, true)]) {
                        *rows[i].entry(j).or_default() += w * amp;
                    }
                }
            }
        }
    }
    SparseOp { rows: rows.into_iter().map(|r| r.into_iter().filter(|(_, a)| a.norm() > 0.0).collect()).collect() }
}

/// Applies bosonic ladder operators right to left (`(mode, raise)` pairs in
/// application order); `None` if the result leaves the truncated space.
fn step(space: &FockSpace, index: usize, ops: &[(usize, bool)]) -> Option<(usize, f64)> {
    let mut i = index;
    let mut amp = 1.0;
    for &(mode, raise) in ops {
        let n = space.occupation(i, mode);
        let stride = space.stride(mode);
        if raise {
            if n == space.cutoff {
                return None;
            }
            amp *= ((n + 1) as f64).sqrt();
            i += stride;
        } else {
            if n == 0 {
                return None;
            }
            amp *= (n as f64).sqrt();
            i -= stride;
        }
    }
    Some((i, amp))
}

/// Dense fermionic Hamiltonian `(i/2) ξ^T h ξ` with `h` antisymmetric.
fn fermionic_hamiltonian(space: &FockSpace, h: &Mat) -> CMat {
    let n = space.n_modes;
    let majoranas = fermionic_majoranas(space);
    let mut out = CMat::zeros(space.dim, space.dim);
    for r in 0..2 * n {
        for s in 0..2 * n {
            if h[(r, s)] != 0.0 {
                out += (&majoranas[r] * &majoranas[s]) * C::new(0.0, 0.5 * h[(r, s)]);
            }
        }
    }
    out
}

fn fermionic_majoranas(space: &FockSpace) -> Vec<CMat> {
    let n = space.n_modes;
    let c = quadrature_coefficients(n);
    let lowering: Vec<CMat> = (0..n).map(|k| space.fermionic_lowering(k)).collect();
    (0..2 * n)
        .map(|r| {
            let mut m = CMat::zeros(space.dim, space.dim);
            for k in 0..n {
                if c[(r, k)].norm() > 0.0 {
                    m += &lowering[k] * c[(r, k)] + lowering[k].adjoint() * c[(r, k)].conj();
                }
            }
            m
        })
        .collect()
}

/// A many-body state vector.
#[derive(Debug, Clone)]
pub struct DenseState {
    pub space: FockSpace,
    pub amplitudes: DVector<C>,
    pub energy: f64,
    /// Gap to the next level found by the solver (for Lanczos: within the
    /// symmetry sector reachable from the vacuum).
    pub gap: f64,
    /// Weight on the outermost retained occupation of any mode; zero for
    /// fermions.
    pub tail_mass: f64,
}

fn check_form(statistics: Statistics, h: &Mat) -> Result<usize> {
    let d = h.nrows();
    if d != h.ncols() || !d.is_multiple_of(2) || d == 0 {
        return Err(Error::DimensionMismatch(format!(
            "quadratic form must be 2N x 2N, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let residual = match statistics {
        Statistics::Bosonic => crate::linalg::max_abs(&(h - h.transpose())),
        Statistics::Fermionic => crate::linalg::max_abs(&(h + h.transpose())),
    };
    if residual > 1e-12 * crate::linalg::max_abs(h).max(1.0) {
        return Err(Error::Asymmetry { residual });
    }
    Ok(d / 2)
}

/// Ground state of `½ ξ^T h ξ` (bosons) or `(i/2) ξ^T h ξ` (fermions).
///
/// For bosons the cutoff is doubled once if the truncation tail exceeds
/// [`TAIL_TOL`].
pub fn ground_state_exact(statistics: Statistics, h: &Mat, cutoff: usize) -> Result<DenseState> {
    let n = check_form(statistics, h)?;
    if statistics == Statistics::Bosonic && nalgebra::Cholesky::new(crate::linalg::symmetrize(h)).is_none() {
        return Err(Error::Incompatible("bosonic quadratic form must be positive definite".into()));
    }
    let state = ground_state_in(&FockSpace::new(statistics, n, cutoff)?, h)?;
    if statistics == Statistics::Bosonic && state.tail_mass > TAIL_TOL {
        if let Ok(larger) = FockSpace::new(statistics, n, 2 * cutoff) {
            return ground_state_in(&larger, h);
        }
    }
    Ok(state)
}

fn ground_state_in(space: &FockSpace, h: &Mat) -> Result<DenseState> {
    let (energy, next, amplitudes) = match space.statistics {
        Statistics::Fermionic => lowest_dense(fermionic_hamiltonian(space, h)),
        Statistics::Bosonic => {
            let op = bosonic_hamiltonian(space, h);
            if space.dim <= DENSE_LIMIT {
                lowest_dense(op.to_dense())
            } else {
                let mut start = DVector::zeros(space.dim);
                start[0] = C::new(1.0, 0.0);
                lanczos_lowest(&op, start)?
            }
        }
    };
    let gap = next - energy;
    if !(gap > DEGENERACY_GAP) {
        return Err(Error::DegenerateGroundState { gap });
    }
    let tail_mass = match space.statistics {
        Statistics::Fermionic => 0.0,
        Statistics::Bosonic => amplitudes
            .iter()
            .enumerate()
            .filter(|&(i, _)| (0..space.n_modes).any(|k| space.occupation(i, k) == space.cutoff))
            .map(|(_, a)| a.norm_sqr())
            .sum(),
    };
    Ok(DenseState { space: space.clone(), amplitudes, energy, gap, tail_mass })
}

fn lowest_dense(h: CMat) -> (f64, f64, DVector<C>) {
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let e1 = order.get(1).map_or(f64::INFINITY, |&i| eig.eigenvalues[i]);
    (e0, e1, eig.eigenvectors.column(order[0]).into_owned())
}

/// Lowest eigenpair by explicitly restarted Lanczos with full
/// re-orthogonalisation.
fn lanczos_lowest(op: &SparseOp, start: DVector<C>) -> Result<(f64, f64, DVector<C>)> {
    const KRYLOV: usize = 160;
    const RESTARTS: usize = 30;
    let dim = start.len();
    let mut v0 = start.normalize();
    for _ in 0..RESTARTS {
        let m = KRYLOV.min(dim);
        let mut basis: Vec<DVector<C>> = vec![v0.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            let mut w = op.apply(&basis[j]);
            alpha.push(basis[j].dotc(&w).re);
            // two passes of classical Gram–Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let overlap = b.dotc(&w);
                    w -= b * overlap;
                }
            }
            let norm = w.norm();
            if j + 1 == m || norm < 1e-13 {
                beta.push(norm);
                break;
            }
            beta.push(norm);
            basis.push(w / C::new(norm, 0.0));
        }
        let k = alpha.len();
        let mut t = Mat::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let y = eig.eigenvectors.column(order[0]);
        let mut x = DVector::zeros(dim);
        for (i, b) in basis.iter().enumerate().take(k) {
            x += b * C::new(y[i], 0.0);
        }
        let e0 = eig.eigenvalues[order[0]];
        let e1 = order.get(1).map_or(f64::INFINITY, |&i| eig.eigenvalues[i]);
        let residual = (op.apply(&x) - &x * C::new(e0, 0.0)).norm();
        if residual < 1e-10 * e0.abs().max(1.0) {
            return Ok((e0, e1, x.normalize()));
        }
        v0 = x.normalize();
    }
    Err(Error::TooLarge("Lanczos did not converge".into()))
}

/// `⟨ξ^a ξ^b⟩` of a pure state.
pub fn two_point_exact(state: &DenseState) -> CMat {
    match state.space.statistics {
        Statistics::Fermionic => {
            let xi = fermionic_majoranas(&state.space);
            let psi = &state.amplitudes;
            let images: Vec<DVector<C>> = xi.iter().map(|m| m * psi).collect();
            // ⟨ψ|ξ_a ξ_b|ψ⟩ = (ξ_a ψ)^† (ξ_b ψ) since ξ_a is Hermitian
            CMat::from_fn(xi.len(), xi.len(), |a, b| images[a].dotc(&images[b]))
        }
        Statistics::Bosonic => bosonic_moments(&state.space, &[(1.0, state.amplitudes.clone())]),
    }
}

/// `Σ_i p_i ⟨ψ_i|ξ^a ξ^b|ψ_i⟩` using lowering operators only, which are exact
/// on the truncated space.
fn bosonic_moments(space: &FockSpace, mixture: &[(f64, DVector<C>)]) -> CMat {
    let n = space.n_modes;
    let c = quadrature_coefficients(n);
    let mut aa = CMat::zeros(n, n); // ⟨a_k a_l⟩
    let mut ada = CMat::zeros(n, n); // ⟨a_k^† a_l⟩
    for (p, psi) in mixture {
        let lowered: Vec<DVector<C>> = (0..n).map(|k| space.lower(psi, k)).collect();
        for k in 0..n {
            let twice = |l: usize| space.lower(&lowered[l], k);
            for l in 0..n {
                aa[(k, l)] += psi.dotc(&twice(l)) * *p;
                ada[(k, l)] += lowered[k].dotc(&lowered[l]) * *p;
            }
        }
    }
    // ξ_a ξ_b = Σ_kl [c_ak c_bl a_k a_l + c_ak c̄_bl a_k a_l^† + c̄_ak c_bl a_k^† a_l + c̄_ak c̄_bl a_k^† a_l^†]
    let d = 2 * n;
    CMat::from_fn(d, d, |a, b| {
        let mut s = C::new(0.0, 0.0);
        for k in 0..n {
            for l in 0..n {
                let (cak, cbl) = (c[(a, k)], c[(b, l)]);
                let a_ad = ada[(l, k)] + if k == l { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) };
                s += cak * cbl * aa[(k, l)]
                    + cak * cbl.conj() * a_ad
                    + cak.conj() * cbl * ada[(k, l)]
                    + cak.conj() * cbl.conj() * aa[(l, k)].conj();
            }
        }
        s
    })
}

/// `⟨ξ^a ξ^b⟩` in the Gibbs state `e^{-βH}/Z` of the quadratic Hamiltonian.
pub fn thermal_two_point_exact(statistics: Statistics, h: &Mat, beta: f64, cutoff: usize) -> Result<CMat> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::ParamOutOfRange(format!("beta must be positive, got {beta}")));
    }
    let n = check_form(statistics, h)?;
    let space = FockSpace::new(statistics, n, cutoff)?;
    if space.dim > DENSE_LIMIT {
        return Err(Error::DimensionGuard { quantity: "dense Fock dimension", value: space.dim, max: DENSE_LIMIT });
    }
    let hmat = match statistics {
        Statistics::Fermionic => fermionic_hamiltonian(&space, h),
        Statistics::Bosonic => bosonic_hamiltonian(&space, h).to_dense(),
    };
    let eig = SymmetricEigen::new(hmat);
    let e_min = eig.eigenvalues.min();
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&e| (-beta * (e - e_min)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mixture: Vec<(f64, DVector<C>)> =
        weights.iter().enumerate().map(|(i, &w)| (w / z, eig.eigenvectors.column(i).into_owned())).collect();
    Ok(match statistics {
        Statistics::Bosonic => bosonic_moments(&space, &mixture),
        Statistics::Fermionic => {
            let xi = fermionic_majoranas(&space);
            let mut rho = CMat::zeros(space.dim, space.dim);
            for (p, v) in &mixture {
                rho += v * v.adjoint() * C::new(*p, 0.0);
            }
            CMat::from_fn(2 * n, 2 * n, |a, b| (&rho * &xi[a] * &xi[b]).trace())
        }
    })
}

/// Reduced density matrix on the given modes, in their own Fock basis with
/// the kept modes in ascending order.
pub fn reduced_density_exact(state: &DenseState, kept: &[usize]) -> Result<CMat> {
    let space = &state.space;
    let mut kept = kept.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.iter().any(|&k| k >= space.n_modes) {
        return Err(Error::OutOfBounds(format!("kept modes {kept:?} outside 0..{}", space.n_modes)));
    }
    let traced: Vec<usize> = (0..space.n_modes).filter(|k| !kept.contains(k)).collect();
    let levels = space.cutoff + 1;
    let dim_a = levels.pow(kept.len() as u32);
    let dim_b = levels.pow(traced.len() as u32);
    if dim_a > MAX_DIMENSION {
        return Err(Error::DimensionGuard { quantity: "reduced Fock dimension", value: dim_a, max: MAX_DIMENSION });
    }
    let mut psi = CMat::zeros(dim_a, dim_b);
    for (i, &amp) in state.amplitudes.iter().enumerate() {
        let (mut a, mut b) = (0, 0);
        for (pos, &k) in kept.iter().enumerate() {
            a += space.occupation(i, k) * levels.pow(pos as u32);
        }
        for (pos, &k) in traced.iter().enumerate() {
            b += space.occupation(i, k) * levels.pow(pos as u32);
        }
        let sign = match space.statistics {
            Statistics::Bosonic => 1.0,
            Statistics::Fermionic => reorder_sign(i, &kept),
        };
        psi[(a, b)] = amp * sign;
    }
    Ok(&psi * psi.adjoint())
}

/// Sign from reordering creation operators so that kept modes precede traced
/// ones: one factor of −1 per occupied (traced, kept) pair with the traced
/// mode first.
fn reorder_sign(index: usize, kept: &[usize]) -> f64 {
    let occupied = |k: usize| (index >> k) & 1 == 1;
    let mut swaps = 0;
    for &k in kept {
        if occupied(k) {
            swaps += (0..k).filter(|&t| !kept.contains(&t) && occupied(t)).count();
        }
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `-Σ p ln p` over eigenvalues `p ≥ 1e-14`, floored at zero (a pure state's
/// eigenvalue `1 + ε` would otherwise give `-ε`).
pub fn entropy_exact(rho: &CMat) -> f64 {
    SymmetricEigen::new(rho.clone())
        .eigenvalues
        .iter()
        .filter(|&&p| p >= 1e-14)
        .map(|&p| -p * p.ln())
        .sum::<f64>()
        .max(0.0)
}

/// Eigenvalues of a density matrix, descending.
pub fn density_spectrum(rho: &CMat) -> Vec<f64> {
    let mut p: Vec<f64> = SymmetricEigen::new(rho.clone()).eigenvalues.iter().copied().collect();
    p.sort_by(|a, b| b.total_cmp(a));
    p
}
