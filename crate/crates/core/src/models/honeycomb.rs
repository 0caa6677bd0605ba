//! Supersymmetric Kitaev honeycomb: Majorana hopping on the honeycomb lattice
//! paired with harmonic oscillators on the triangular lattice.
//!
//! Unit cells live on an `l1 × l2` periodic Bravais lattice, cell `(x, y)`
//! having index `x + l1·y`. Each cell carries one site (one `γ`, one `η`
//! Majorana; one `q`, one `p` quadrature). The coupling matrix is
//! `𝒜 = j_x I + j_y T₁ + j_z T₂` with `(T_a)_{i, i+e_a} = 1`, so the `x`-link
//! joins `γ_i` and `η_i` inside a cell while `y`/`z`-links join `γ_i` to
//! `η_{i+e₁}` / `η_{i+e₂}`.

use crate::error::{Error, Result};
use crate::kahler::Statistics;
use crate::linalg::Mat;
use crate::subsystem::Subsystem;
use crate::susy::Supercharge;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HoneycombParams {
    pub l1: usize,
    pub l2: usize,
    /// `(j_x, j_y, j_z)`.
    pub j: (f64, f64, f64),
}

impl HoneycombParams {
    pub fn validate(&self) -> Result<()> {
        if self.l1 < 2 || self.l2 < 2 {
            return Err(Error::ParamOutOfRange(format!("lattice extents must be >= 2, got {}x{}", self.l1, self.l2)));
        }
        let (a, b, c) = self.j;
        if ![a, b, c].iter().all(|v| v.is_finite()) {
            return Err(Error::ParamOutOfRange("couplings must be finite".into()));
        }
        Ok(())
    }

    pub fn n_cells(&self) -> usize {
        self.l1 * self.l2
    }

    pub fn cell_index(&self, x: usize, y: usize) -> usize {
        (x % self.l1) + self.l1 * (y % self.l2)
    }

    /// Infinite-lattice classifier: gapless iff each `|j_a|` is at most the
    /// sum of the other two.
    pub fn is_gapless(&self) -> bool {
        let (x, y, z) = (self.j.0.abs(), self.j.1.abs(), self.j.2.abs());
        x <= y + z && y <= z + x && z <= x + y
    }
}

/// The `N × N` matrix `𝒜` (rows: `γ`, columns: `q`).
pub fn honeycomb_coupling_matrix(p: &HoneycombParams) -> Result<Mat> {
    p.validate()?;
    let n = p.n_cells();
    let (jx, jy, jz) = p.j;
    let mut a = Mat::zeros(n, n);
    for y in 0..p.l2 {
        for x in 0..p.l1 {
            let i = p.cell_index(x, y);
            a[(i, i)] += jx;
            a[(i, p.cell_index(x + 1, y))] += jy;
            a[(i, p.cell_index(x, y + 1))] += jz;
        }
    }
    Ok(a)
}

/// `R = blockdiag(𝒜, I)`.
pub fn build_honeycomb(p: &HoneycombParams) -> Result<Supercharge> {
    let a = honeycomb_coupling_matrix(p)?;
    let n = p.n_cells();
    let mut r = Mat::zeros(2 * n, 2 * n);
    r.view_mut((0, 0), (n, n)).copy_from(&a);
    r.view_mut((n, n), (n, n)).fill_with_identity();
    Supercharge::new(r)
}

/// Normal-mode frequencies `|j_x + j_y e^{ik₁} + j_z e^{ik₂}|` over the
/// discrete momentum grid, sorted descending.
pub fn momentum_spectrum(p: &HoneycombParams) -> Result<Vec<f64>> {
    p.validate()?;
    let (jx, jy, jz) = p.j;
    let tau = std::f64::consts::TAU;
    let mut out = Vec::with_capacity(p.n_cells());
    for n2 in 0..p.l2 {
        for n1 in 0..p.l1 {
            let k1 = tau * n1 as f64 / p.l1 as f64;
            let k2 = tau * n2 as f64 / p.l2 as f64;
            let re = jx + jy * k1.cos() + jz * k2.cos();
            let im = jy * k1.sin() + jz * k2.sin();
            out.push(re.hypot(im));
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Cells `(ax + a, ay + b)` for `0 ≤ a, b < m`, wrapped periodically.
pub fn parallelogram_cells(p: &HoneycombParams, m: usize, anchor: (usize, usize)) -> Result<Vec<usize>> {
    p.validate()?;
    let limit = p.l1.min(p.l2) - 1;
    if m == 0 || m > limit {
        return Err(Error::OutOfBounds(format!("parallelogram side {m} outside 1..={limit}")));
    }
    let mut cells = Vec::with_capacity(m * m);
    for b in 0..m {
        for a in 0..m {
            cells.push(p.cell_index(anchor.0 + a, anchor.1 + b));
        }
    }
    cells.sort_unstable();
    Ok(cells)
}

/// Fermionic subsystem holding both Majoranas of every cell in an `m × m`
/// parallelogram. Whole cells are kept, so no `x`-link is ever cut.
pub fn parallelogram_subsystem(p: &HoneycombParams, m: usize, anchor: (usize, usize)) -> Result<Subsystem> {
    let cells = parallelogram_cells(p, m, anchor)?;
    Ok(Subsystem::from_sites(Statistics::Fermionic, p.n_cells(), &cells)?
        .with_label(format!("parallelogram m={m} at ({},{})", anchor.0, anchor.1)))
}

/// Number of links of each type with exactly one end inside a cell set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LinkCensus {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

pub fn boundary_link_census(p: &HoneycombParams, cells: &[usize]) -> Result<LinkCensus> {
    p.validate()?;
    let n = p.n_cells();
    let mut inside = vec![false; n];
    for &c in cells {
        if c >= n {
            return Err(Error::OutOfBounds(format!("cell {c} outside lattice of {n}")));
        }
        inside[c] = true;
    }
    let mut census = LinkCensus::default();
    for y in 0..p.l2 {
        for x in 0..p.l1 {
            let i = p.cell_index(x, y);
            // x-links are intra-cell and can never be cut by whole-cell sets.
            if inside[i] != inside[p.cell_index(x + 1, y)] {
                census.y += 1;
            }
            if inside[i] != inside[p.cell_index(x, y + 1)] {
                census.z += 1;
            }
        }
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::susy::build_susy;

    fn params(l: usize, j: (f64, f64, f64)) -> HoneycombParams {
        HoneycombParams { l1: l, l2: l, j }
    }

    #[test]
    fn dimer_limit() {
        let sys = build_susy(&build_honeycomb(&params(3, (1.3, 0.0, 0.0))).unwrap()).unwrap();
        assert!(sys.spectrum().iter().all(|&w| (w - 1.3).abs() < 1e-12));
    }

    #[test]
    fn classifier() {
        assert!(!params(2, (2.5, 1.0, 1.0)).is_gapless());
        assert!(!params(2, (1.0, 1.0, 2.5)).is_gapless());
        assert!(params(2, (1.0, 1.0, 1.0)).is_gapless());
        assert!(params(2, (1.0, 0.5, 0.5)).is_gapless());
    }

    #[test]
    fn triangular_couplings() {
        let p = HoneycombParams { l1: 4, l2: 4, j: (1.0, 0.7, 0.4) };
        let a = honeycomb_coupling_matrix(&p).unwrap();
        let ata = a.transpose() * &a;
        let (jx, jy, jz) = p.j;
        let mut sparse = Mat::zeros(16, 16);
        for y in 0..4 {
            for x in 0..4 {
                let i = p.cell_index(x, y);
                sparse[(i, i)] += jx * jx + jy * jy + jz * jz;
                for (dx, dy, w) in [(1, 0, jx * jy), (0, 1, jx * jz), (1, 3, jy * jz)] {
                    let k = p.cell_index(x + dx, y + dy);
                    sparse[(i, k)] += w;
                    sparse[(k, i)] += w;
                }
            }
        }
        assert!(crate::linalg::max_abs_diff(&ata, &sparse) < 1e-14);
        for i in 0..16 {
            let nonzero = (0..16).filter(|&k| k != i && ata[(i, k)].abs() > 0.0).count();
            assert_eq!(nonzero, 6);
        }
    }

    #[test]
    fn matches_momentum_grid() {
        let p = HoneycombParams { l1: 4, l2: 3, j: (1.0, 0.6, 1.4) };
        let sys = build_susy(&build_honeycomb(&p).unwrap()).unwrap();
        let grid = momentum_spectrum(&p).unwrap();
        for (a, b) in sys.spectrum().iter().zip(&grid) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn parallelogram_guards_and_census() {
        let p = params(15, (1.0, 1.0, 2.5));
        assert!(matches!(parallelogram_subsystem(&p, 15, (0, 0)), Err(Error::OutOfBounds(_))));
        assert!(matches!(parallelogram_subsystem(&p, 0, (0, 0)), Err(Error::OutOfBounds(_))));
        let one = parallelogram_subsystem(&p, 1, (3, 4)).unwrap();
        assert_eq!(one.n_sub_modes(), 1);
        let cells = parallelogram_cells(&p, 4, (0, 0)).unwrap();
        let census = boundary_link_census(&p, &cells).unwrap();
        assert_eq!(census, LinkCensus { x: 0, y: 8, z: 8 });
        // wrapping anchors give the same census
        let wrapped = parallelogram_cells(&p, 4, (13, 12)).unwrap();
        assert_eq!(boundary_link_census(&p, &wrapped).unwrap(), census);
    }
}
