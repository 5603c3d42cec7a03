//! `cartan`: batch front end for the cartan-metrology library.
//!
//! JSON for single queries, CSV for datasets, SVG for heatmaps. Every output
//! carries `schema_version` plus the seed, grid, λ and tool version that
//! produced it. Domain errors exit with status 2 and a one-line message.

mod args;
mod svg;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use cartan_metrology::noise::{noisy_qfim, NoiseScan};
use cartan_metrology::optimal::kappas;
use cartan_metrology::sampling::{write_scan_csv, Histogram2d, ScanMetadata};
use cartan_metrology::states::StateLiteral;
use cartan_metrology::{
    canonicalize, concurrence_pure, frontier, make_optimal, noise_scan, qfim_pure, rx_generate,
    scan, uhlmann_pure, CartanParams, ChannelFamily, ChannelScope, NoiseChannel, NoiseScanGrid,
    OptimalFamilySpec, ProbeClass, ProbeKind, Qfim, RngSpec, RxPairing, TwoQubitPureState,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::svg::{ColorScale, Heatmap};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const JSON_SCHEMA_VERSION: u32 = 1;
const THREADS_ENV: &str = "CARTAN_THREADS";

#[derive(Parser)]
#[command(
    name = "cartan",
    version,
    about = "Estimation bounds for two-qubit Cartan kernels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// QFIM, precision and sloppiness of one probe state.
    Qfim(QfimOpts),
    /// Build a member of an optimal family (or a frontier state).
    Optimal(OptimalOpts),
    /// Largest 1/s reachable at given precisions.
    Frontier(FrontierOpts),
    /// Monte-Carlo scan of random probes over the (p, 1/s) plane.
    Sample(SampleOpts),
    /// Precision of a probe class over a (γ, φ) noise grid.
    NoiseScan(NoiseOpts),
    /// Reduce λ to the canonical class vector set.
    Canonicalize(CanonicalizeOpts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct Output {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Output {
    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            let name = f.to_possible_value().expect("no skipped variants");
            bail!(
                "--format {} is not available for this command",
                name.get_name()
            );
        }
        Ok(f)
    }

    fn write(&self, body: &[u8]) -> Result<()> {
        match &self.out {
            Some(path) => {
                let mut w = BufWriter::new(
                    File::create(path).with_context(|| format!("creating {}", path.display()))?,
                );
                w.write_all(body)?;
                w.flush()?;
            }
            None => io::stdout().lock().write_all(body)?,
        }
        Ok(())
    }

    fn write_json(&self, v: &Value) -> Result<()> {
        let mut s = serde_json::to_string_pretty(v)?;
        s.push('\n');
        self.write(s.as_bytes())
    }
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("state").required(true))]
struct QfimOpts {
    /// α,β,γ,δ[,φβ,φγ,φδ] in the computational basis.
    #[arg(long, group = "state", allow_hyphen_values = true)]
    state_canonical: Option<String>,
    /// b,c,d | a,b,c,d, optionally followed by φb,φc,φd, in the Bell basis.
    #[arg(long, group = "state", allow_hyphen_values = true)]
    state_bell: Option<String>,
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true)]
    lambda: String,
    /// Apply a noise channel before the gate (needs --gamma).
    #[arg(long, value_enum, requires = "gamma")]
    family: Option<FamilyArg>,
    #[arg(long, value_enum, default_value = "single")]
    scope: ScopeArg,
    #[arg(long, requires = "family")]
    gamma: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("which").required(true))]
struct OptimalOpts {
    /// Family spec as JSON, or @path to a JSON file, e.g.
    /// {"family":"entangled","alpha":0.3,"beta":0.2}.
    #[arg(long, group = "which")]
    spec: Option<String>,
    /// θa,θb[,φ]: rotate |0⟩ about x in each invariant block.
    #[arg(long, group = "which", allow_hyphen_values = true)]
    rx: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FrontierOpts {
    /// One or more precisions p ≥ 3/4, comma separated.
    #[arg(long)]
    p: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Haar,
    Factorizable,
    #[value(name = "optimal")]
    OptimalFamily,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MapArg {
    Density,
    Concurrence,
}

#[derive(Args)]
struct SampleOpts {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "haar")]
    kind: KindArg,
    /// Quantity drawn in SVG output.
    #[arg(long, value_enum, default_value = "density")]
    map: MapArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Psi1,
    Psi2,
    Psi3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Bitflip,
    Depolarizing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Single,
    Both,
}

impl From<ClassArg> for ProbeClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Psi1 => ProbeClass::Psi1,
            ClassArg::Psi2 => ProbeClass::Psi2,
            ClassArg::Psi3 => ProbeClass::Psi3,
        }
    }
}

impl From<FamilyArg> for ChannelFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Bitflip => ChannelFamily::BitFlip,
            FamilyArg::Depolarizing => ChannelFamily::Depolarizing,
        }
    }
}

impl From<ScopeArg> for ChannelScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Single => ChannelScope::Single,
            ScopeArg::Both => ChannelScope::Both,
        }
    }
}

impl From<KindArg> for ProbeKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Haar => ProbeKind::Haar,
            KindArg::Factorizable => ProbeKind::Factorizable,
            KindArg::OptimalFamily => ProbeKind::OptimalFamily,
        }
    }
}

#[derive(Args)]
struct NoiseOpts {
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_enum)]
    scope: ScopeArg,
    #[arg(long, default_value_t = NoiseScanGrid::DEFAULT_GAMMA_POINTS)]
    gamma_grid: usize,
    #[arg(long, default_value_t = NoiseScanGrid::DEFAULT_PHI_POINTS)]
    phi_grid: usize,
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true)]
    lambda: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CanonicalizeOpts {
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[command(flatten)]
    output: Output,
}

/// JSON number, or the strings `inf` / `-inf` / `nan`.
fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn header(
    command: &str,
    seed: Option<u64>,
    grid: Value,
    lambda: Option<&CartanParams>,
) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(JSON_SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(VERSION));
    m.insert("seed".into(), json!(seed));
    m.insert("grid".into(), grid);
    m.insert("lambda".into(), lambda.map_or(Value::Null, |l| json!(l.0)));
    m
}

fn qfim_fields(m: &mut Map<String, Value>, q: &Qfim) {
    m.insert("q".into(), json!(q.q.map(|row| row.map(real))));
    m.insert("p".into(), real(q.p));
    m.insert("inv_s".into(), real(q.inverse_sloppiness()));
    m.insert("s".into(), real(q.s));
    m.insert("singular".into(), json!(q.singular));
}

fn state_json(psi: &TwoQubitPureState) -> Value {
    serde_json::to_value(StateLiteral::from(*psi)).expect("state literal serializes")
}

fn run_qfim(o: &QfimOpts) -> Result<()> {
    o.output.format(Format::Json, &[Format::Json])?;
    let lambda = args::parse_lambda(&o.lambda)?;
    let psi = match (&o.state_canonical, &o.state_bell) {
        (Some(s), _) => args::parse_state_canonical(s).context("--state-canonical")?,
        (_, Some(s)) => args::parse_state_bell(s).context("--state-bell")?,
        _ => unreachable!("clap enforces the state group"),
    };
    let mut m = header("qfim", None, Value::Null, Some(&lambda));
    m.insert("state".into(), state_json(&psi));
    m.insert("concurrence".into(), real(concurrence_pure(&psi)));
    match (o.family, o.gamma) {
        (Some(family), Some(gamma)) => {
            let ch = NoiseChannel::new(family.into(), o.scope.into(), gamma)?;
            let q = noisy_qfim(&psi, &ch, &lambda)?;
            m.insert("route".into(), json!("mixed"));
            m.insert(
                "noise".into(),
                json!({"family": ch.family(), "scope": ch.scope(), "gamma": gamma}),
            );
            qfim_fields(&mut m, &q);
        }
        _ => {
            let q = qfim_pure(&psi, &lambda);
            m.insert("route".into(), json!("pure"));
            m.insert("noise".into(), Value::Null);
            qfim_fields(&mut m, &q);
            m.insert(
                "uhlmann_max_abs".into(),
                real(uhlmann_pure(&psi, &lambda).max_abs()),
            );
        }
    }
    o.output.write_json(&Value::Object(m))
}

fn run_optimal(o: &OptimalOpts) -> Result<()> {
    o.output.format(Format::Json, &[Format::Json])?;
    let mut m = header("optimal", None, Value::Null, Some(&CartanParams::zero()));
    let psi = if let Some(spec) = &o.spec {
        let text = match spec.strip_prefix('@') {
            Some(path) => {
                std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
            }
            None => spec.clone(),
        };
        let spec: OptimalFamilySpec = serde_json::from_str(&text).context("--spec")?;
        m.insert("spec".into(), serde_json::to_value(spec)?);
        make_optimal(&spec)?
    } else {
        let v = args::parse_angles(o.rx.as_deref().unwrap_or_default()).context("--rx")?;
        let (ta, tb, phi) = match v[..] {
            [ta, tb] => (ta, tb, 0.0),
            [ta, tb, phi] => (ta, tb, phi),
            _ => bail!("--rx takes θa,θb or θa,θb,φ"),
        };
        m.insert(
            "spec".into(),
            json!({"rx": {"theta_a": ta, "theta_b": tb, "relative_phase": phi}}),
        );
        rx_generate(
            ta,
            tb,
            RxPairing {
                relative_phase: phi,
            },
        )
    };
    m.insert("state".into(), state_json(&psi));
    m.insert("concurrence".into(), real(concurrence_pure(&psi)));
    qfim_fields(&mut m, &qfim_pure(&psi, &CartanParams::zero()));
    o.output.write_json(&Value::Object(m))
}

fn run_frontier(o: &FrontierOpts) -> Result<()> {
    let format = o
        .output
        .format(Format::Json, &[Format::Json, Format::Csv])?;
    let ps = args::parse_reals(&o.p).context("--p")?;
    let mut rows = Vec::with_capacity(ps.len());
    for p in ps {
        let inv_s = frontier(p)?;
        let (k1, k2) = kappas(p)?;
        rows.push((p, inv_s, k1, k2));
    }
    match format {
        Format::Csv => {
            let mut s = format!("# schema_version={JSON_SCHEMA_VERSION}\n# version={VERSION}\np,inv_s,kappa1,kappa2\n");
            for (p, inv_s, k1, k2) in rows {
                s.push_str(&format!("{p},{inv_s},{k1},{k2}\n"));
            }
            o.output.write(s.as_bytes())
        }
        _ => {
            let mut m = header("frontier", None, Value::Null, None);
            let points: Vec<Value> = rows
                .iter()
                .map(|&(p, inv_s, k1, k2)| json!({"p": real(p), "inv_s": real(inv_s), "kappa1": k1, "kappa2": k2}))
                .collect();
            m.insert("points".into(), Value::Array(points));
            o.output.write_json(&Value::Object(m))
        }
    }
}

fn run_sample(o: &SampleOpts) -> Result<()> {
    let format = o.output.format(Format::Csv, &[Format::Csv, Format::Svg])?;
    if o.n == 0 {
        bail!("empty dataset: --n must be at least 1");
    }
    let kind: ProbeKind = o.kind.into();
    let rng = RngSpec::new(o.seed);
    let records = scan(o.n, kind, &rng);
    let mut meta = ScanMetadata::for_scan(o.n, kind, &rng);
    meta.entries.push(("lambda".into(), "any".into()));
    meta.entries.push(("version".into(), VERSION.into()));
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_scan_csv(&mut buf, &meta, &records)?;
            o.output.write(&buf)
        }
        _ => {
            let (hist, scale, label) = match o.map {
                MapArg::Density => (Histogram2d::density(&records), None, "count"),
                MapArg::Concurrence => (
                    Histogram2d::concurrence_map(&records),
                    Some(ColorScale::Linear { min: 0.0, max: 1.0 }),
                    "mean concurrence",
                ),
            };
            let cells: Vec<Vec<Option<f64>>> = (0..hist.x.bins)
                .map(|i| {
                    (0..hist.y.bins)
                        .map(|j| match o.map {
                            MapArg::Density => {
                                (hist.counts[i][j] > 0).then(|| hist.counts[i][j] as f64)
                            }
                            MapArg::Concurrence => hist.mean(i, j),
                        })
                        .collect()
                })
                .collect();
            let max_count = hist
                .counts
                .iter()
                .flatten()
                .copied()
                .max()
                .unwrap_or(1)
                .max(2) as f64;
            meta.entries
                .push(("grid".into(), format!("{}x{}", hist.x.bins, hist.y.bins)));
            meta.entries
                .push(("outside_window".into(), hist.outside.to_string()));
            let map = Heatmap {
                title: format!("{kind} probes, n = {}", o.n),
                x_label: "p = Tr Q⁻¹".into(),
                y_label: "1/s = Det Q".into(),
                x_range: (hist.x.min, hist.x.max),
                y_range: (hist.y.min, hist.y.max),
                cells,
                scale: scale.unwrap_or(ColorScale::Log {
                    min: 1.0,
                    max: max_count,
                }),
                value_label: label.into(),
                metadata: meta.entries.clone(),
            };
            o.output.write(map.render()?.as_bytes())
        }
    }
}

fn noise_heatmap(scan: &NoiseScan, meta: &ScanMetadata) -> Heatmap {
    let finite = scan.p.iter().flatten().copied().filter(|p| p.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p), hi.max(p))
    });
    let scale = if lo.is_finite() && hi > lo * (1.0 + 1e-9) {
        ColorScale::Log { min: lo, max: hi }
    } else {
        let base = if lo.is_finite() { lo } else { 0.75 };
        ColorScale::Linear {
            min: base,
            max: base + 1.0,
        }
    };
    Heatmap {
        title: format!(
            "{} under {} noise ({})",
            scan.grid.class, scan.family, scan.scope
        ),
        x_label: "γ".into(),
        y_label: "φ".into(),
        x_range: (scan.gammas[0], *scan.gammas.last().unwrap()),
        y_range: (scan.phis[0], *scan.phis.last().unwrap()),
        cells: scan
            .p
            .iter()
            .map(|row| row.iter().map(|&p| Some(p)).collect())
            .collect(),
        scale,
        value_label: "p".into(),
        metadata: meta.entries.clone(),
    }
}

fn run_noise(o: &NoiseOpts) -> Result<()> {
    let format = o
        .output
        .format(Format::Csv, &[Format::Csv, Format::Svg, Format::Json])?;
    let lambda = args::parse_lambda(&o.lambda)?;
    let grid = NoiseScanGrid::new(o.gamma_grid, o.phi_grid, o.class.into())?;
    let scan = noise_scan(&grid, o.family.into(), o.scope.into(), &lambda)?;
    let mut meta = scan.metadata();
    meta.entries.push(("seed".into(), "none".into()));
    meta.entries.push(("version".into(), VERSION.into()));
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            scan.write_csv(&meta, &mut buf)?;
            o.output.write(&buf)
        }
        Format::Svg => o
            .output
            .write(noise_heatmap(&scan, &meta).render()?.as_bytes()),
        Format::Json => {
            let grid = json!({"gamma": scan.gammas, "phi": scan.phis});
            let mut m = header("noise-scan", None, grid, Some(&lambda));
            m.insert("class".into(), json!(scan.grid.class));
            m.insert("family".into(), json!(scan.family));
            m.insert("scope".into(), json!(scan.scope));
            m.insert(
                "p".into(),
                json!(scan
                    .p
                    .iter()
                    .map(|row| row.iter().map(|&p| real(p)).collect::<Vec<_>>())
                    .collect::<Vec<_>>()),
            );
            o.output.write_json(&Value::Object(m))
        }
    }
}

fn run_canonicalize(o: &CanonicalizeOpts) -> Result<()> {
    o.output.format(Format::Json, &[Format::Json])?;
    let lambda = args::parse_lambda(&o.lambda)?;
    let (canonical, moves) = canonicalize(&lambda)?;
    let mut m = header("canonicalize", None, Value::Null, Some(&lambda));
    m.insert("canonical".into(), json!(canonical.0));
    m.insert("moves".into(), serde_json::to_value(moves)?);
    o.output.write_json(&Value::Object(m))
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_ENV}={raw:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")
}

fn run(cli: &Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Qfim(o) => run_qfim(o),
        Command::Optimal(o) => run_optimal(o),
        Command::Frontier(o) => run_frontier(o),
        Command::Sample(o) => run_sample(o),
        Command::NoiseScan(o) => run_noise(o),
        Command::Canonicalize(o) => run_canonicalize(o),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let io_failure = e.chain().any(|c| c.is::<io::Error>());
            ExitCode::from(if io_failure { 1 } else { 2 })
        }
    }
}
