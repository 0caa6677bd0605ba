use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context as _, Result};
use rayon::prelude::*;
use susyent::descriptor::{BuilderSpec, ModelDescriptor};
use susyent::entropy::{r_b, r_f};
use susyent::models::{
    boundary_link_census, parallelogram_cells, ChainParams, HoneycombParams, LinkCensus, TwoModeParams,
};
use susyent::scan::{self, DualityRow, RowStatus};
use susyent::susy::{assemble, identification_maps};
use susyent::{build_susy, Error, Statistics, Subsystem};

use crate::table::{fmt_float, fmt_list, Table};
use crate::{BuilderName, Context, DualityArgs, LocalityArgs, ModelArgs, OracleArgs, SpectrumArgs, ThermalArgs};

/// Default cap on the phase-space dimension `2N` of dense problems.
pub const DEFAULT_MAX_DIM: usize = 2048;
pub const MAX_DIM_ENV: &str = "SUSYENT_MAX_DIM";

/// Honeycomb extent used when `--l1/--l2` are not given.
const DESK_EXTENT: usize = 15;
const FULL_EXTENT: usize = 45;

/// One-line machine-readable failure report.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub code: String,
    pub exit: u8,
    pub message: String,
}

impl ErrorRecord {
    pub fn from_anyhow(e: &anyhow::Error) -> Self {
        if let Some(lib) = e.chain().find_map(|c| c.downcast_ref::<Error>()) {
            return Self::from_library(lib, &format!("{e:#}"));
        }
        if let Some(f) = e.downcast_ref::<Failure>() {
            return Self { code: f.code.into(), exit: 2, message: f.message.clone() };
        }
        let code = if e.chain().any(|c| c.is::<std::io::Error>()) { "Io" } else { "Usage" };
        Self { code: code.into(), exit: 2, message: format!("{e:#}") }
    }

    fn from_library(e: &Error, message: &str) -> Self {
        Self { code: e.code().into(), exit: if e.is_numerical_guard() { 3 } else { 2 }, message: message.into() }
    }
}

impl fmt::Display for ErrorRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let message = self.message.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
        write!(f, "error code={} exit={} message=\"{message}\"", self.code, self.exit)
    }
}

/// A validation failure detected by the tool itself.
#[derive(Debug)]
struct Failure {
    code: &'static str,
    message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

fn max_dim(ctx: &Context) -> Result<usize> {
    match std::env::var(MAX_DIM_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow!(Failure { code: "Usage", message: format!("{MAX_DIM_ENV}={v:?} is not a size") })),
        Err(_) if ctx.full_scale => Ok(usize::MAX),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn check_dim(ctx: &Context, n_modes: usize) -> Result<()> {
    let (dim, max) = (2 * n_modes, max_dim(ctx)?);
    if dim > max {
        return Err(Error::DimensionGuard { quantity: "phase-space dimension", value: dim, max })
            .context(format!("raise {MAX_DIM_ENV} or pass --full-scale"));
    }
    Ok(())
}

fn load(ctx: &Context, path: &Path) -> Result<ModelDescriptor> {
    let d = ModelDescriptor::read(path)?;
    check_dim(ctx, d.metadata.n_modes)?;
    Ok(d)
}

fn pool(ctx: &Context) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(ctx.jobs).build()?)
}

pub fn model(ctx: &Context, a: ModelArgs) -> Result<()> {
    let &[jx, jy, jz] = a.j.as_slice() else {
        return Err(Error::ParamOutOfRange(format!("--j needs three couplings, got {}", a.j.len())).into());
    };
    let extent = if ctx.full_scale { FULL_EXTENT } else { DESK_EXTENT };
    let spec = match a.builder {
        BuilderName::Oscillator => BuilderSpec::Oscillator,
        BuilderName::TwoMode => BuilderSpec::TwoMode(TwoModeParams { r_b: a.r_b, r_f: a.r_f }),
        BuilderName::KitaevChain => {
            BuilderSpec::KitaevChain(ChainParams { n_sites: a.n, t: a.t, mu: a.mu, boundary: a.boundary })
        }
        BuilderName::Honeycomb => BuilderSpec::Honeycomb(HoneycombParams {
            l1: a.l1.unwrap_or(extent),
            l2: a.l2.unwrap_or(extent),
            j: (jx, jy, jz),
        }),
    };
    let n_modes = match &spec {
        BuilderSpec::KitaevChain(p) => p.n_sites,
        BuilderSpec::Honeycomb(p) => p.l1 * p.l2,
        BuilderSpec::TwoMode(_) => 2,
        _ => 1,
    };
    check_dim(ctx, n_modes)?;
    let d = ModelDescriptor::from_builder(spec)?;
    match &a.out {
        Some(p) => d.write(p)?,
        None => print!("{}", d.to_toml()?),
    }
    if a.validate {
        let sys = assemble(&d.supercharge()?)?;
        let mut failed = Vec::new();
        for c in sys.invariants() {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            eprintln!(
                "invariant=\"{}\" residual={:.3e} tolerance={:.1e} {verdict}",
                c.identity, c.residual, c.tolerance
            );
            if !c.passed() {
                failed.push(c.identity);
            }
        }
        if let Some(first) = failed.first() {
            let residual = sys.invariants().iter().find(|c| c.identity == *first).map_or(f64::NAN, |c| c.residual);
            return Err(Error::InvariantViolation { identity: first, residual })
                .context(format!("{} invariant(s) failed", failed.len()));
        }
        eprintln!("model hash={} validated", d.hash());
    }
    Ok(())
}

pub fn spectrum(ctx: &Context, a: SpectrumArgs) -> Result<()> {
    let d = load(ctx, &a.model)?;
    let rows = scan::spectrum_rows(&d.supercharge()?)?;
    let mut t = Table::new(["model_hash", "index", "omega", "omega_b", "residual"]);
    for r in &rows {
        t.push(vec![
            d.hash().into(),
            (r.index + 1).to_string(),
            fmt_float(r.omega_f),
            fmt_float(r.omega_b),
            fmt_float(r.residual),
        ]);
    }
    t.emit(a.out.as_deref())?;
    // The table is still meaningful with a zero mode, but nothing built on
    // the ground states is, so report it through the exit status.
    if let Some(smallest) = scan::has_zero_mode(&rows) {
        return Err(Error::ZeroModePresent { smallest }.into());
    }
    Ok(())
}

pub fn locality(ctx: &Context, a: LocalityArgs) -> Result<()> {
    let d = load(ctx, &a.model)?;
    let q = d.supercharge()?;
    let n = q.n_modes();
    if a.site == 0 || a.site > n {
        return Err(Error::OutOfBounds(format!("site {} outside 1..={n}", a.site)).into());
    }
    let maps = identification_maps(&q)?;
    let weights = scan::locality_profile(maps.get(a.map), a.site - 1)?;
    let total: f64 = weights.iter().sum();
    let mut t = Table::new(["model_hash", "map", "source_site", "site", "weight", "fraction"]);
    for (j, &w) in weights.iter().enumerate() {
        t.push(vec![
            d.hash().into(),
            a.map.to_string(),
            a.site.to_string(),
            (j + 1).to_string(),
            fmt_float(w),
            fmt_float(w / total),
        ]);
    }
    t.emit(a.out.as_deref())
}

/// Parses `a..b` (inclusive), `a..=b` or `a`.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let bad = || anyhow!(Failure { code: "Usage", message: format!("bad range {s:?}; expected a..b or a") });
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (s, s),
    };
    let (lo, hi): (usize, usize) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

struct Plan {
    subsystems: Vec<(usize, Subsystem)>,
    census: Vec<Option<LinkCensus>>,
}

fn plan_subsystems(d: &ModelDescriptor, a: &DualityArgs) -> Result<Plan> {
    let n = d.metadata.n_modes;
    let stats: Statistics = a.map.source();
    let mut subsystems = Vec::new();
    let mut census = Vec::new();
    match &d.builder {
        BuilderSpec::Honeycomb(p) => {
            let range = parse_range(a.m.as_deref().unwrap_or(&format!("1..{}", (p.l1.min(p.l2) - 1).min(7))))?;
            let &[x, y] = a.anchor.as_slice() else {
                return Err(Error::ParamOutOfRange(format!("--anchor needs x,y, got {} values", a.anchor.len())).into());
            };
            let anchor = (x, y);
            for m in range {
                let cells = parallelogram_cells(p, m, anchor)?;
                let label = format!("parallelogram m={m} anchor=({},{})", anchor.0, anchor.1);
                subsystems.push((m, Subsystem::from_sites(stats, n, &cells)?.with_label(label)));
                census.push(Some(boundary_link_census(p, &cells)?));
            }
        }
        _ => {
            let range = parse_range(a.m.as_deref().unwrap_or(&format!("1..{}", n.saturating_sub(1).max(1))))?;
            if a.start == 0 {
                return Err(Error::OutOfBounds("sites are 1-based".into()).into());
            }
            for m in range {
                let first = a.start - 1;
                if m == 0 || first + m > n {
                    return Err(Error::OutOfBounds(format!(
                        "block of {m} sites from site {} exceeds N = {n}",
                        a.start
                    ))
                    .into());
                }
                let sites: Vec<usize> = (first..first + m).collect();
                let label = format!("sites {}..{}", first + 1, first + m);
                subsystems.push((m, Subsystem::from_sites(stats, n, &sites)?.with_label(label)));
                census.push(None);
            }
        }
    }
    Ok(Plan { subsystems, census })
}

pub fn duality_scan(ctx: &Context, a: DualityArgs) -> Result<()> {
    let d = load(ctx, &a.model)?;
    let plan = plan_subsystems(&d, &a)?;
    let sys = build_susy(&d.supercharge()?)?;
    let rows = pool(ctx)?.install(|| scan::duality_scan(&sys, &plan.subsystems, a.map, &a.renyi));
    let unit = if a.bits { std::f64::consts::LN_2 } else { 1.0 };

    let mut agg_header: Vec<String> =
        ["model_hash", "map", "m", "label", "status", "cut_x", "cut_y", "cut_z", "n_modes", "s_f", "s_b"]
            .map(String::from)
            .to_vec();
    let mut mode_header: Vec<String> =
        ["model_hash", "m", "mode", "lambda_f", "lambda_b", "product", "s_f", "s_b"].map(String::from).to_vec();
    for k in &a.renyi {
        for side in ["f", "b"] {
            agg_header.push(format!("renyi_{side}_{k}"));
            mode_header.push(format!("renyi_{side}_{k}"));
        }
    }
    agg_header
        .extend(["ratio", "max_product_deviation", "matrix_residual", "lambdas_f", "lambdas_b"].map(String::from));
    let mut agg = Table::new(agg_header);
    let mut modes = Table::new(mode_header);

    let mut first_failure = None;
    for (row, census) in rows.iter().zip(&plan.census) {
        let (status, flagged) = match &row.status {
            RowStatus::Ok => ("ok".to_string(), None),
            RowStatus::Obstruction { lambda } => (format!("obstruction lambda_f={}", fmt_float(*lambda)), None),
            RowStatus::Failed(e) => (format!("failed {}", e.code()), Some(e.clone())),
        };
        if let (Some(e), None) = (flagged, &first_failure) {
            first_failure = Some(e);
        }
        push_duality_rows(&mut agg, &mut modes, &d, a.map.to_string(), row, status, census, &a.renyi, unit);
    }
    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let agg_path = a.out_dir.join(format!("{}_aggregate.csv", a.name));
    let modes_path = a.out_dir.join(format!("{}_modes.csv", a.name));
    agg.emit(Some(&agg_path))?;
    modes.emit(Some(&modes_path))?;
    println!("{} ({} rows)", agg_path.display(), agg.len());
    println!("{} ({} rows)", modes_path.display(), modes.len());
    match first_failure {
        Some(e) => Err(anyhow::Error::new(e).context("scan finished with failed rows")),
        None => Ok(()),
    }
}

#[allow(clippy::too_many_arguments)]
fn push_duality_rows(
    agg: &mut Table,
    modes: &mut Table,
    d: &ModelDescriptor,
    map: String,
    row: &DualityRow,
    status: String,
    census: &Option<LinkCensus>,
    renyi: &[f64],
    unit: f64,
) {
    let hash = d.hash().to_string();
    let cut = |f: fn(&LinkCensus) -> usize| census.as_ref().map_or(String::new(), |c| f(c).to_string());
    let (Some(fr), Some(br)) = (&row.fermionic, &row.bosonic) else {
        let mut cells =
            vec![hash, map, row.m.to_string(), row.label.clone(), status, cut(|c| c.x), cut(|c| c.y), cut(|c| c.z)];
        cells.resize(agg_width(renyi), String::new());
        agg.push(cells);
        return;
    };
    let mut cells = vec![
        hash.clone(),
        map,
        row.m.to_string(),
        row.label.clone(),
        status,
        cut(|c| c.x),
        cut(|c| c.y),
        cut(|c| c.z),
        fr.lambdas.len().to_string(),
        fmt_float(fr.von_neumann / unit),
        fmt_float(br.von_neumann / unit),
    ];
    for (&(_, sf), &(_, sb)) in fr.renyi.iter().zip(&br.renyi) {
        cells.push(fmt_float(sf / unit));
        cells.push(fmt_float(sb / unit));
    }
    cells.extend([
        fmt_float(br.von_neumann / fr.von_neumann),
        fmt_float(row.max_product_deviation),
        fmt_float(row.matrix_residual),
        fmt_list(&fr.lambdas),
        fmt_list(&br.lambdas),
    ]);
    agg.push(cells);

    for (i, (&lf, &lb)) in fr.lambdas.iter().zip(&br.lambdas).enumerate() {
        let mut cells = vec![
            hash.clone(),
            row.m.to_string(),
            (i + 1).to_string(),
            fmt_float(lf),
            fmt_float(lb),
            fmt_float(lf * lb),
            fmt_float(fr.per_mode[i] / unit),
            fmt_float(br.per_mode[i] / unit),
        ];
        for &k in renyi {
            cells.push(fmt_float(r_f(lf, k) / unit));
            cells.push(fmt_float(r_b(lb, k) / unit));
        }
        modes.push(cells);
    }
}

fn agg_width(renyi: &[f64]) -> usize {
    11 + 2 * renyi.len() + 5
}

pub fn thermal(ctx: &Context, a: ThermalArgs) -> Result<()> {
    let d = load(ctx, &a.model)?;
    let sys = build_susy(&d.supercharge()?)?;
    let results: Vec<_> = pool(ctx)?
        .install(|| a.beta.par_iter().map(|&beta| scan::thermal_rows(&sys, beta).map(|r| (beta, r))).collect());
    let mut t =
        Table::new(["model_hash", "beta", "mode", "omega", "lambda_f", "lambda_b", "product", "matrix_residual"]);
    for result in results {
        let (beta, (rows, residual)) = result?;
        for r in rows {
            t.push(vec![
                d.hash().into(),
                fmt_float(beta),
                (r.mode + 1).to_string(),
                fmt_float(r.omega),
                fmt_float(r.lambda_f),
                fmt_float(r.lambda_b),
                fmt_float(r.product),
                fmt_float(residual),
            ]);
        }
    }
    t.emit(a.out.as_deref())
}

fn parse_cut(s: &str, n: usize) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            let site: usize =
                x.trim().parse().map_err(|_| anyhow!(Failure { code: "Usage", message: format!("bad cut {s:?}") }))?;
            if site == 0 || site > n {
                return Err(Error::OutOfBounds(format!("site {site} outside 1..={n}")).into());
            }
            Ok(site - 1)
        })
        .collect()
}

pub fn oracle_check(_ctx: &Context, a: OracleArgs) -> Result<()> {
    let cases = if a.bosonic {
        vec![scan::bosonic_oracle(a.r_b, a.cutoff)?]
    } else {
        let cuts = if a.cut.is_empty() {
            None
        } else {
            Some(a.cut.iter().map(|c| parse_cut(c, a.n)).collect::<Result<Vec<_>>>()?)
        };
        scan::fermionic_oracle(a.seed, a.n, cuts)?
    };
    let mut worst = 0.0f64;
    let mut failures = 0;
    for c in &cases {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!(
            "case=\"{}\" exact={} gaussian={} deviation={:.3e} tolerance={:.0e} tail_mass={:.1e} {verdict}",
            c.label,
            fmt_float(c.exact),
            fmt_float(c.gaussian),
            c.deviation,
            c.tolerance,
            c.tail_mass
        );
        worst = worst.max(c.deviation);
        failures += usize::from(!c.passed());
    }
    println!("cases={} failed={failures} max_deviation={worst:.3e}", cases.len());
    if failures > 0 {
        bail!(Failure {
            code: "OracleMismatch",
            message: format!("{failures} of {} cases above tolerance", cases.len())
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..7").unwrap(), 1..=7);
        assert_eq!(parse_range("2..=3").unwrap(), 2..=3);
        assert_eq!(parse_range("4").unwrap(), 4..=4);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn records_classify_library_errors() {
        let guard = anyhow::Error::new(Error::ZeroModePresent { smallest: 0.0 });
        let r = ErrorRecord::from_anyhow(&guard);
        assert_eq!((r.code.as_str(), r.exit), ("ZeroModePresent", 3));
        let bad = anyhow::Error::new(Error::ParamOutOfRange("r_f".into())).context("building");
        let r = ErrorRecord::from_anyhow(&bad);
        assert_eq!((r.code.as_str(), r.exit), ("ParamOutOfRange", 2));
        assert!(r.to_string().starts_with("error code=ParamOutOfRange exit=2 message=\"building: "));
    }

    #[test]
    fn cuts_are_one_based() {
        assert_eq!(parse_cut("1,3", 4).unwrap(), vec![0, 2]);
        assert!(parse_cut("0", 4).is_err());
        assert!(parse_cut("5", 4).is_err());
    }
}
