//! Command-line front end. `run` takes the argument list and an output
//! sink and returns the process exit code.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::bound_state::{self, C1Variant, Channel, TABLE1_QUOTED};
use crate::fock::{run_oracle, OracleConfig};
use crate::model::{self, BareParams, ModelScheme, SpectrumBranch};
use crate::numerics::grid;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_SOLUTION: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cxc", version, about = "Two-component fermion model: spectra, phases, bound states and a Fock-space oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// (k, E) samples for the A, Ã and B branches
    Spectrum,
    /// Particle masses, gaps and regime
    Masses,
    /// Vacuum energy density and preferred phase
    Vacuum,
    /// Coupling where the vacuum energy changes sign
    Critical,
    /// Two-particle bound state in one isospin channel
    Bound,
    /// (G, z) table beside the published values
    Table1,
    /// Next-order coefficients of the renormalization series
    Series,
    /// Verification report of the finite-mode oracle
    Oracle,
    /// Every acceptance criterion, nonzero exit on any failure
    VerifyAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Physical,
    Bare,
}

/// Every parameter is optional here; `--config` fills gaps, then defaults.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// physical mass M
    #[arg(long = "M", global = true, allow_negative_numbers = true)]
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// dimensionless coupling G = 2g/Mc²
    #[arg(long = "G", global = true, allow_negative_numbers = true)]
    #[serde(rename = "G", skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// bare coupling λ; with it the scheme comes from renormalizing (m, c, λ)
    #[arg(long, global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// bare mass m
    #[arg(long, global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[arg(long = "omega-volume", global = true, allow_negative_numbers = true)]
    #[serde(rename = "omega-volume", skip_serializing_if = "Option::is_none")]
    pub omega_volume: Option<f64>,
    /// lattice spacing of the oracle's momentum grid
    #[arg(long, global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    /// lo:hi:n[:log]
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[arg(long, value_enum, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
    #[arg(long = "c1-variant", global = true)]
    #[serde(rename = "c1-variant", skip_serializing_if = "Option::is_none")]
    pub c1_variant: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// wavefunction samples for `bound`
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// json file with any of the parameters above
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// json-lines result cache
    #[arg(long, global = true)]
    #[serde(skip)]
    pub cache: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($f:ident),*) => { $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )* };
}

impl Params {
    /// Fill unset fields from `other`.
    pub fn or(mut self, other: &Params) -> Params {
        overlay!(self, other, mass, coupling, c, lambda, m, channel, modes, omega_volume, spacing, grid, format, out, units, c1_variant, jobs, samples);
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NoSolution(String),
    #[error("{0}")]
    Tolerance(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::NoSolution(_) => EXIT_NO_SOLUTION,
            CliError::Tolerance(_) => EXIT_TOLERANCE,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl std::str::FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("grid '{s}' is not lo:hi:n[:log]");
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let n: usize = parts[2].parse().map_err(|_| bad())?;
        let log = match parts.get(3) {
            None => false,
            Some(&"log") => true,
            Some(_) => return Err(bad()),
        };
        if !(lo.is_finite() && hi.is_finite() && hi >= lo && n >= 1) || (log && lo <= 0.0) {
            return Err(bad());
        }
        Ok(GridSpec { lo, hi, n, log })
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            vec![self.lo]
        } else {
            grid(self.lo, self.hi, self.n, self.log)
        }
    }
}

/// Resolved settings after precedence and validation.
struct Resolved {
    params: Params,
    format: Format,
    units: Units,
    grid: Option<GridSpec>,
}

fn resolve(flags: &Params) -> Result<Resolved, CliError> {
    let mut params = flags.clone();
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let file: Params = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        params = params.or(&file);
    }
    for (name, v) in [
        ("M", params.mass),
        ("G", params.coupling),
        ("c", params.c),
        ("lambda", params.lambda),
        ("m", params.m),
        ("omega-volume", params.omega_volume),
        ("spacing", params.spacing),
    ] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0) {
                return Err(usage(format!("--{name} must be positive, got {v}")));
            }
        }
    }
    if params.m.is_some() && params.lambda.is_none() {
        return Err(usage("--m is the bare mass and needs --lambda"));
    }
    if params.lambda.is_some() && (params.mass.is_some() || params.coupling.is_some()) {
        return Err(usage("give either bare (--m, --lambda) or physical (--M, --G) parameters"));
    }
    if params.jobs == Some(0) {
        return Err(usage("--jobs must be at least 1"));
    }
    let grid = params.grid.as_deref().map(str::parse::<GridSpec>).transpose().map_err(usage)?;
    Ok(Resolved {
        format: params.format.unwrap_or(Format::Json),
        units: params.units.unwrap_or(Units::Physical),
        grid,
        params,
    })
}

impl Resolved {
    fn scheme_at(&self, coupling: Option<f64>) -> Result<ModelScheme, CliError> {
        let c = self.params.c.unwrap_or(1.0);
        match (self.params.lambda, coupling) {
            (Some(lambda), None) => {
                let bare = BareParams::new(self.params.m.unwrap_or(1.0), c, lambda).map_err(usage)?;
                model::renormalize(&bare).map_err(|e| CliError::NoSolution(e.to_string()))
            }
            (_, g) => model::scheme_from_physical(
                self.params.mass.unwrap_or(1.0),
                g.or(self.params.coupling).unwrap_or(5.0),
                c,
            )
            .map_err(usage),
        }
    }

    fn scheme(&self) -> Result<ModelScheme, CliError> {
        self.scheme_at(None)
    }

    fn channel(&self) -> Result<Channel, CliError> {
        self.params.channel.as_deref().unwrap_or("isoscalar").parse().map_err(usage)
    }

    fn c1_variant(&self) -> Result<C1Variant, CliError> {
        self.params.c1_variant.as_deref().unwrap_or("corrected").parse().map_err(usage)
    }

    /// Coupling scan; only physical parameters can be scanned.
    fn coupling_scan(&self) -> Result<Option<Vec<f64>>, CliError> {
        match self.grid {
            Some(_) if self.params.lambda.is_some() => Err(usage("coupling scans need physical parameters")),
            Some(g) if g.lo <= 0.0 => Err(usage("coupling grid must be positive")),
            Some(g) => Ok(Some(g.points())),
            None => Ok(None),
        }
    }

    fn energy_unit(&self, s: &ModelScheme) -> f64 {
        match self.units {
            Units::Physical => s.rest_energy(),
            Units::Bare => 1.0,
        }
    }

    fn momentum_unit(&self, s: &ModelScheme) -> f64 {
        match self.units {
            Units::Physical => s.mass * s.c(),
            Units::Bare => 1.0,
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.params.jobs {
            b = b.num_threads(j);
        }
        b.build().map_err(|e| usage(e.to_string()))
    }
}

/// Output of one command before formatting.
pub struct Artifact {
    pub records: Vec<Value>,
    /// header used when `records` is empty
    pub columns: Vec<String>,
    pub scheme: Option<ModelScheme>,
    pub outcome: Result<(), CliError>,
}

impl Artifact {
    fn ok(records: Vec<Value>, scheme: Option<ModelScheme>) -> Self {
        Artifact { records, columns: Vec::new(), scheme, outcome: Ok(()) }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("records serialize")
}

fn flatten_into(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten_into(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten_into(&key(&i.to_string()), x, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

/// Nested records become dotted columns.
pub fn flatten(v: &Value) -> Map<String, Value> {
    let mut out = Map::new();
    flatten_into("", v, &mut out);
    out
}

fn csv_cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:?}"),
            _ => n.to_string(),
        },
        Some(other) => other.to_string(),
    }
}

pub fn emit_csv(records: &[Value], columns: &[String], sink: &mut dyn Write) -> Result<(), CliError> {
    let rows: Vec<Map<String, Value>> = records.iter().map(flatten).collect();
    let mut header: Vec<String> = columns.to_vec();
    for r in &rows {
        for k in r.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(&header).map_err(|e| CliError::Io(e.into()))?;
    for r in &rows {
        w.write_record(header.iter().map(|h| csv_cell(r.get(h)))).map_err(|e| CliError::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_json(
    command: Command,
    params: &Params,
    scheme: Option<&ModelScheme>,
    records: &[Value],
    sink: &mut dyn Write,
) -> Result<(), CliError> {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let doc = json!({
        "metadata": {
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": params,
            "scheme": scheme,
            "timestamp": timestamp,
        },
        "data": records,
    });
    serde_json::to_writer_pretty(&mut *sink, &doc).map_err(|e| CliError::Io(e.into()))?;
    writeln!(sink)?;
    Ok(())
}

fn spectrum(r: &Resolved) -> Result<Artifact, CliError> {
    let scheme = r.scheme()?;
    let (eu, ku) = (r.energy_unit(&scheme), r.momentum_unit(&scheme));
    let ks = r.grid.unwrap_or(GridSpec { lo: 0.0, hi: 3.0, n: 61, log: false }).points();
    let mut records = Vec::new();
    for branch in SpectrumBranch::ALL {
        for &k in &ks {
            let p = model::spectrum(branch, k * ku, &scheme);
            records.push(json!({
                "branch": branch.name(),
                "k": k,
                "energy": p.energy / eu,
                "gap": p.gap / eu,
                "infinite_mass": p.infinite_mass,
            }));
        }
    }
    Ok(Artifact::ok(records, Some(scheme)))
}

fn masses(r: &Resolved) -> Result<Artifact, CliError> {
    let scheme = r.scheme()?;
    let eu = r.energy_unit(&scheme);
    let mu = eu / (scheme.c() * scheme.c());
    let mut rep = model::masses_and_gaps(&scheme);
    rep.m_a /= mu;
    rep.m_atilde /= mu;
    for e in [&mut rep.e_a0, &mut rep.e_atilde0, &mut rep.gap_sum, &mut rep.gap_sum_identity, &mut rep.gap_sum_quoted] {
        *e /= eu;
    }
    Ok(Artifact::ok(vec![to_value(&rep)], Some(scheme)))
}

fn vacuum(r: &Resolved) -> Result<Artifact, CliError> {
    let record = |s: &ModelScheme| {
        json!({
            "G": s.coupling,
            "energy_density": model::vacuum_energy_density(s) / r.energy_unit(s),
            "phase": model::classify_phase(s.coupling),
            "scheme": s,
        })
    };
    match r.coupling_scan()? {
        Some(gs) => {
            let records = gs.iter().map(|&g| r.scheme_at(Some(g)).map(|s| record(&s))).collect::<Result<_, _>>()?;
            Ok(Artifact::ok(records, Some(r.scheme()?)))
        }
        None => {
            let s = r.scheme()?;
            Ok(Artifact::ok(vec![record(&s)], Some(s)))
        }
    }
}

fn critical(r: &Resolved) -> Result<Artifact, CliError> {
    let g = model::critical_coupling();
    if r.params.lambda.is_some() {
        return Err(usage("critical takes physical parameters"));
    }
    Ok(Artifact::ok(vec![json!({ "G_cr": g })], Some(r.scheme_at(Some(g))?)))
}

fn bound_record(r: &Resolved, s: &ModelScheme, channel: Channel) -> Result<(Value, bool), CliError> {
    let res = bound_state::solve(s, channel).map_err(|e| CliError::NoSolution(e.to_string()))?;
    let (eu, ku) = (r.energy_unit(s), r.momentum_unit(s));
    let mut v = to_value(&res);
    v["G"] = json!(s.coupling);
    v["chi"] = json!(res.chi / ku);
    v["mu0"] = json!(res.mu0 / eu);
    v["scheme"] = to_value(s);
    Ok((v, res.exists))
}

fn bound(r: &Resolved) -> Result<Artifact, CliError> {
    let channel = r.channel()?;
    if let Some(gs) = r.coupling_scan()? {
        let pool = r.pool()?;
        let records: Vec<Value> = pool.install(|| {
            gs.par_iter()
                .map(|&g| r.scheme_at(Some(g)).and_then(|s| bound_record(r, &s, channel)).map(|x| x.0))
                .collect::<Result<_, _>>()
        })?;
        return Ok(Artifact::ok(records, Some(r.scheme()?)));
    }
    let scheme = r.scheme()?;
    let (mut record, exists) = bound_record(r, &scheme, channel)?;
    let outcome = if exists {
        Ok(())
    } else {
        Err(CliError::NoSolution(record["diagnostics"]["note"].as_str().unwrap_or("no bound state").to_string()))
    };
    if let (Some(n), true) = (r.params.samples, exists) {
        let res = bound_state::solve(&scheme, channel).map_err(|e| CliError::NoSolution(e.to_string()))?;
        let wf = bound_state::wavefunction(&scheme, &res).map_err(|e| CliError::NoSolution(e.to_string()))?;
        let ku = r.momentum_unit(&scheme);
        let samples: Vec<Value> = grid(0.0, scheme.cutoff, n.max(2), false)
            .into_iter()
            .map(|k| json!({ "k": k / ku, "amplitude": wf.amplitude(k), "form_factor": wf.form_factor(k) }))
            .collect();
        if r.format == Format::Csv {
            return Ok(Artifact { records: samples, columns: Vec::new(), scheme: Some(scheme), outcome });
        }
        record["wavefunction"] = to_value(&wf);
        record["samples"] = Value::Array(samples);
    }
    Ok(Artifact { records: vec![record], columns: Vec::new(), scheme: Some(scheme), outcome })
}

fn table1(r: &Resolved) -> Result<Artifact, CliError> {
    let variant = r.c1_variant()?;
    let gs = r.coupling_scan()?.unwrap_or_else(|| TABLE1_QUOTED.iter().map(|x| x.0).collect());
    let pool = r.pool()?;
    let rows = pool.install(|| {
        gs.par_iter()
            .map(|&g| bound_state::table1(&[g], variant).map(|mut v| v.remove(0)))
            .collect::<Result<Vec<_>, _>>()
    });
    let rows = rows.map_err(|e| CliError::NoSolution(e.to_string()))?;
    let mut records = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut v = to_value(row);
        v["scheme"] = to_value(&r.scheme_at(Some(row.coupling))?);
        records.push(v);
    }
    Ok(Artifact {
        records,
        columns: ["coupling", "z", "z_quoted", "deviation"].map(String::from).to_vec(),
        scheme: None,
        outcome: Ok(()),
    })
}

fn series(r: &Resolved) -> Result<Artifact, CliError> {
    let g = r.grid.unwrap_or(GridSpec { lo: 1e-4, hi: 2e-2, n: 12, log: true });
    let fit = model::measure_series(g.lo, g.hi, g.n).map_err(usage)?;
    let records = (0..fit.coupling_coeffs.len())
        .map(|order| {
            json!({
                "order": order,
                "coupling_fit": fit.coupling_coeffs[order],
                "coupling_quoted": fit.coupling_quoted.get(order),
                "cutoff_fit": fit.cutoff_coeffs[order],
                "cutoff_quoted": fit.cutoff_quoted.get(order),
                "coupling_slope_bound": fit.coupling_slope_bound,
                "cutoff_slope_bound": fit.cutoff_slope_bound,
                "alpha0_lo": g.lo,
                "alpha0_hi": g.hi,
                "points": g.n,
            })
        })
        .collect();
    Ok(Artifact::ok(records, None))
}

fn oracle(r: &Resolved) -> Result<Artifact, CliError> {
    let d = OracleConfig::default();
    let config = OracleConfig {
        n_modes: r.params.modes.unwrap_or(d.n_modes),
        spacing: r.params.spacing.unwrap_or(d.spacing),
        omega_volume: r.params.omega_volume.unwrap_or(d.omega_volume),
        bare: BareParams::new(
            r.params.m.unwrap_or(d.bare.m),
            r.params.c.unwrap_or(d.bare.c),
            r.params.lambda.unwrap_or(d.bare.lambda),
        )
        .map_err(usage)?,
        ..d
    };
    let report = run_oracle(&config).map_err(usage)?;
    let failures = verify::oracle_failures(&report);
    let mut v = to_value(&report);
    v["failures"] = to_value(&failures);
    let outcome = if failures.is_empty() { Ok(()) } else { Err(CliError::Tolerance(failures.join("; "))) };
    let scheme = model::renormalize(&config.bare).ok();
    Ok(Artifact { records: vec![v], columns: Vec::new(), scheme, outcome })
}

fn verify_all(_: &Resolved) -> Result<Artifact, CliError> {
    let report = verify::run_acceptance();
    for c in &report.criteria {
        eprintln!("{}", c.line());
    }
    let failed: Vec<String> = report.criteria.iter().filter(|c| !c.passed).map(|c| format!("criterion {} failed", c.id)).collect();
    Ok(Artifact {
        records: report.criteria.iter().map(to_value).collect(),
        columns: Vec::new(),
        scheme: None,
        outcome: if failed.is_empty() { Ok(()) } else { Err(CliError::Tolerance(failed.join(", "))) },
    })
}

fn cache_key(command: Command, params: &Params) -> String {
    let canonical = json!({ "version": env!("CARGO_PKG_VERSION"), "command": command, "params": params });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: String,
    scheme: Option<ModelScheme>,
    columns: Vec<String>,
    records: Vec<Value>,
}

fn cache_lookup(path: &PathBuf, key: &str) -> Option<CacheEntry> {
    let file = File::open(path).ok()?;
    BufReader::new(file)
        .lines()
        .map_while(Result::ok)
        .filter_map(|l| serde_json::from_str::<CacheEntry>(&l).ok())
        .find(|e| e.key == key)
}

fn cache_store(path: &PathBuf, entry: &CacheEntry) -> Result<(), CliError> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(f, "{}", serde_json::to_string(entry).map_err(|e| CliError::Io(e.into()))?)?;
    Ok(())
}

fn execute(command: Command, r: &Resolved) -> Result<Artifact, CliError> {
    match command {
        Command::Spectrum => spectrum(r),
        Command::Masses => masses(r),
        Command::Vacuum => vacuum(r),
        Command::Critical => critical(r),
        Command::Bound => bound(r),
        Command::Table1 => table1(r),
        Command::Series => series(r),
        Command::Oracle => oracle(r),
        Command::VerifyAll => verify_all(r),
    }
}

fn run_command(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = resolve(&cli.params)?;
    let mut echo = r.params.clone();
    echo.out = None;
    // only successful, tolerance-clean results are cached
    let cacheable = !matches!(cli.command, Command::VerifyAll);
    let key = cache_key(cli.command, &echo);
    let cached = match (&r.params.cache, cacheable) {
        (Some(p), true) => cache_lookup(p, &key),
        _ => None,
    };
    let art = match cached {
        Some(e) => Artifact { records: e.records, columns: e.columns, scheme: e.scheme, outcome: Ok(()) },
        None => {
            let art = execute(cli.command, &r)?;
            if let (Some(p), true, Ok(())) = (&r.params.cache, cacheable, &art.outcome) {
                cache_store(
                    p,
                    &CacheEntry { key, scheme: art.scheme, columns: art.columns.clone(), records: art.records.clone() },
                )?;
            }
            art
        }
    };
    let mut file;
    let sink: &mut dyn Write = match &r.params.out {
        Some(p) => {
            file = File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            &mut file
        }
        None => stdout,
    };
    match r.format {
        Format::Json => emit_json(cli.command, &echo, art.scheme.as_ref(), &art.records, sink)?,
        Format::Csv => emit_csv(&art.records, &art.columns, sink)?,
    }
    art.outcome
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run_command(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("cxc: {e}");
            e.exit_code()
        }
    }
}
