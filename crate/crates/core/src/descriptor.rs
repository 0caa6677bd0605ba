//! Model descriptors: a TOML document recording how a supercharge was built
//! together with its matrix `R`.
//!
//! `R` is written row-major with 17 significant digits, which round-trips
//! every `f64` exactly, so reading a descriptor back reproduces `R`
//! bit-for-bit.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::models::{
    build_honeycomb, build_kitaev_chain, build_susy_oscillator, build_two_mode, ChainParams, HoneycombParams,
    TwoModeParams,
};
use crate::susy::Supercharge;

pub const FORMAT_VERSION: u32 = 1;

pub const BASIS_CONVENTION: &str =
    "rows (gamma_1..gamma_N, eta_1..eta_N), columns (q_1..q_N, p_1..p_N); H_b = 1/2 xi^T R^T R xi, H_f = i/2 xi^T R Omega R^T xi";
pub const HONEYCOMB_CONVENTION: &str =
    "cell (x, y) has index x + l1*y; A = j_x I + j_y T1 + j_z T2 with (T_a)_{i, i+e_a} = 1, periodic; \
parallelograms are m x m blocks of whole cells, cutting 2m y-links and 2m z-links and no x-links";

/// Which builder produced a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum BuilderSpec {
    Oscillator,
    TwoMode(TwoModeParams),
    KitaevChain(ChainParams),
    Honeycomb(HoneycombParams),
    /// `R` supplied directly.
    Custom,
}

impl BuilderSpec {
    pub fn name(&self) -> &'static str {
        match self {
            BuilderSpec::Oscillator => "oscillator",
            BuilderSpec::TwoMode(_) => "two-mode",
            BuilderSpec::KitaevChain(_) => "kitaev-chain",
            BuilderSpec::Honeycomb(_) => "honeycomb",
            BuilderSpec::Custom => "custom",
        }
    }

    pub fn build(&self) -> Result<Supercharge> {
        match self {
            BuilderSpec::Oscillator => Ok(build_susy_oscillator()),
            BuilderSpec::TwoMode(p) => build_two_mode(p),
            BuilderSpec::KitaevChain(p) => build_kitaev_chain(p),
            BuilderSpec::Honeycomb(p) => build_honeycomb(p),
            BuilderSpec::Custom => Err(Error::Descriptor("custom models have no builder".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub n_modes: usize,
    /// Both sides of a supercharge, listed for readers of the file.
    pub statistics: Vec<String>,
    pub basis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    /// Truncated SHA-256 of the serialised `R` rows.
    pub hash: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelDescriptor {
    pub format_version: u32,
    pub builder: BuilderSpec,
    pub metadata: Metadata,
    pub r: Mat,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format_version: u32,
    builder: BuilderSpec,
    metadata: Metadata,
}

#[derive(Deserialize)]
struct Document {
    format_version: u32,
    builder: BuilderSpec,
    metadata: Metadata,
    supercharge: Rows,
}

#[derive(Deserialize)]
struct Rows {
    r: Vec<Vec<f64>>,
}

fn format_rows(r: &Mat) -> String {
    let mut out = String::from("r = [\n");
    for i in 0..r.nrows() {
        out.push_str("  [");
        for j in 0..r.ncols() {
            if j > 0 {
                out.push_str(", ");
            }
            write!(out, "{:.16e}", r[(i, j)]).expect("writing to a String");
        }
        out.push_str("],\n");
    }
    out.push_str("]\n");
    out
}

/// First 16 hex digits of the SHA-256 of the serialised rows.
pub fn model_hash(r: &Mat) -> String {
    Sha256::digest(format_rows(r).as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

impl ModelDescriptor {
    pub fn from_builder(builder: BuilderSpec) -> Result<Self> {
        let q = builder.build()?;
        Ok(Self::new(builder, q.r().clone()))
    }

    pub fn new(builder: BuilderSpec, r: Mat) -> Self {
        let lattice = matches!(builder, BuilderSpec::Honeycomb(_)).then(|| HONEYCOMB_CONVENTION.to_string());
        let metadata = Metadata {
            n_modes: r.nrows() / 2,
            statistics: vec!["bosonic".into(), "fermionic".into()],
            basis: BASIS_CONVENTION.into(),
            lattice,
            hash: model_hash(&r),
        };
        Self { format_version: FORMAT_VERSION, builder, metadata, r }
    }

    pub fn supercharge(&self) -> Result<Supercharge> {
        Supercharge::new(self.r.clone())
    }

    pub fn hash(&self) -> &str {
        &self.metadata.hash
    }

    pub fn to_toml(&self) -> Result<String> {
        let header = Header {
            format_version: self.format_version,
            builder: self.builder.clone(),
            metadata: self.metadata.clone(),
        };
        let mut text = toml::to_string(&header).map_err(|e| Error::Descriptor(e.to_string()))?;
        text.push_str("\n[supercharge]\n");
        text.push_str(&format_rows(&self.r));
        Ok(text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let version: toml::Table = toml::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))?;
        match version.get("format_version").and_then(|v| v.as_integer()) {
            Some(v) if v == FORMAT_VERSION as i64 => {}
            Some(v) => return Err(Error::Descriptor(format!("unsupported format_version {v}"))),
            None => return Err(Error::Descriptor("missing format_version".into())),
        }
        let doc: Document = toml::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))?;
        let n = doc.supercharge.r.len();
        if n == 0 || !n.is_multiple_of(2) || doc.supercharge.r.iter().any(|row| row.len() != n) {
            return Err(Error::Descriptor(format!("R must be a square matrix of even size, got {n} rows")));
        }
        let r = Mat::from_fn(n, n, |i, j| doc.supercharge.r[i][j]);
        let hash = model_hash(&r);
        if hash != doc.metadata.hash {
            return Err(Error::Descriptor(format!("hash mismatch: file says {}, R gives {hash}", doc.metadata.hash)));
        }
        if doc.metadata.n_modes != n / 2 {
            return Err(Error::Descriptor(format!("n_modes = {} but R is {n}x{n}", doc.metadata.n_modes)));
        }
        Ok(Self { format_version: doc.format_version, builder: doc.builder, metadata: doc.metadata, r })
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?).map_err(|e| Error::Descriptor(format!("{}: {e}", path.display())))
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Descriptor(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Boundary;

    #[test]
    fn round_trip_is_bit_exact() {
        let specs = [
            BuilderSpec::Oscillator,
            BuilderSpec::TwoMode(TwoModeParams { r_b: 0.3, r_f: 0.2 }),
            BuilderSpec::KitaevChain(ChainParams { n_sites: 7, t: 0.35, mu: 1.3, boundary: Boundary::Periodic }),
            BuilderSpec::Honeycomb(HoneycombParams { l1: 3, l2: 4, j: (1.0, 1.0 / 3.0, 2.5) }),
        ];
        for spec in specs {
            let d = ModelDescriptor::from_builder(spec.clone()).unwrap();
            let back = ModelDescriptor::from_toml(&d.to_toml().unwrap()).unwrap();
            assert_eq!(back, d);
            let rebuilt = back.builder.build().unwrap();
            assert!(rebuilt.r().iter().zip(d.r.iter()).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }

    #[test]
    fn rejects_bad_documents() {
        let d = ModelDescriptor::from_builder(BuilderSpec::Oscillator).unwrap();
        let text = d.to_toml().unwrap();
        let bumped = text.replace("format_version = 1", "format_version = 2");
        assert!(matches!(ModelDescriptor::from_toml(&bumped), Err(Error::Descriptor(_))));
        let tampered = text.replace("1.0000000000000000e0", "1.0000000000000002e0");
        assert!(matches!(ModelDescriptor::from_toml(&tampered), Err(Error::Descriptor(_))));
        assert!(ModelDescriptor::from_toml("builder = 3").is_err());
    }

    #[test]
    fn oscillator_file_shape() {
        let text = ModelDescriptor::from_builder(BuilderSpec::Oscillator).unwrap().to_toml().unwrap();
        assert!(text.contains("name = \"oscillator\""));
        assert!(text.contains("[1.0000000000000000e0, 0.0000000000000000e0]"));
    }
}
