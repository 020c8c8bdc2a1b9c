//! `burstic` command-line front end. Each subcommand reads a JSON config,
//! runs one experiment family and writes CSV or JSON datasets.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use burstic::design::{self, d_max_of, optimum_switches, outage, please1_holds};
use burstic::detection::{detection_experiment, DetectionConfig, DetectionRow};
use burstic::region::{self, rbar_c, sym_curves, sym_region, Region2D};
use burstic::{arrival, Error};

use config::{load, BuffersParams, DesignParams, DetectParams, RegionParams, RunConfig};
use output::Sink;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(name = "burstic", version, about = "Bursty two-user interference channel experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed (overrides the config's `seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Dataset format (overrides the config's `format`).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Delay-gap and immediacy statistics of the burst scheduler.
    Buffers(Common),
    /// Admissible offsets, outage curves and the best number of codewords.
    Design(Common),
    /// Achievable codebook-rate region and, for symmetric setups, its diagonal.
    Region(Common),
    /// Finite-length detection and decoding error frequencies.
    Detect(Common),
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn config(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resonance { .. } | Error::EmptyActiveSet | Error::InfeasibleRate(_) => 3,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::config(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::config(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::config(format!("json: {e}"))
    }
}

type Out = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Buffers(c) => run(&c, cmd_buffers),
        Command::Design(c) => run(&c, cmd_design),
        Command::Region(c) => run(&c, cmd_region),
        Command::Detect(c) => run(&c, cmd_detect),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run<P: serde::de::DeserializeOwned>(c: &Common, f: impl FnOnce(&RunConfig<P>, &Sink) -> Out) -> Out {
    let cfg: RunConfig<P> = load(&c.config)?;
    let out = c.out.clone().or_else(|| cfg.out.clone()).ok_or_else(|| Failure::config("no output directory"))?;
    let cfg = RunConfig {
        seed: c.seed.or(cfg.seed),
        format: c.format.or(cfg.format),
        ..cfg
    };
    let sink = Sink::new(out, cfg.format.unwrap_or(Format::Csv))?;
    f(&cfg, &sink)
}

const EXPERIMENT_HEADER: &[&str] = &["n", "j", "metric", "value", "trials", "seed"];

fn cmd_buffers(cfg: &RunConfig<BuffersParams>, sink: &Sink) -> Out {
    let p = &cfg.params;
    let u = p.user.build()?;
    let seed = cfg.seed_or_default();
    let mut gaps = Vec::new();
    let mut imm = Vec::new();
    for &n in &p.n {
        for (j, v) in arrival::delay_gap_experiment(&u, n, p.count, p.theta, p.delta, p.trials, seed)?
            .into_iter()
            .enumerate()
        {
            gaps.push(arrival::ExperimentRow {
                n,
                j: j as u32 + 1,
                metric: "delay_gap".into(),
                value: v,
                trials: p.trials,
                seed,
            });
        }
        imm.push(arrival::ExperimentRow {
            n,
            j: 0,
            metric: "immediacy_violation".into(),
            value: arrival::immediacy_violation_frequency(&u, n, p.count, p.theta, p.trials, seed)?,
            trials: p.trials,
            seed,
        });
    }
    sink.rows("delay_gap", EXPERIMENT_HEADER, &gaps)?;
    sink.rows("immediacy", EXPERIMENT_HEADER, &imm)
}

#[derive(serde::Serialize)]
struct OutageRow {
    #[serde(rename = "N1")]
    n1: u32,
    #[serde(rename = "N2")]
    n2: u32,
    d: f64,
    outage: f64,
}

#[derive(serde::Serialize)]
struct AdmissibleEntry {
    n1: u32,
    n2: u32,
    d_max: f64,
    /// Admissible α within `[-d.max, d.max]`; `grey` is its complement there.
    admissible: Vec<(f64, f64)>,
    grey: Vec<(f64, f64)>,
}

#[derive(serde::Serialize)]
struct Switch {
    d: f64,
    from: (u32, u32),
    to: (u32, u32),
}

#[derive(serde::Serialize)]
struct DesignSummary {
    scenario: String,
    rates: [f64; 2],
    always_reliable: bool,
    active_set: Vec<(u32, u32)>,
    d_max: Option<f64>,
    switches: Vec<Switch>,
}

fn cmd_design(cfg: &RunConfig<DesignParams>, sink: &Sink) -> Out {
    let p = &cfg.params;
    let u = [p.users[0].build()?, p.users[1].build()?];
    let r = [p.rate_fraction[0] * u[0].lambda(), p.rate_fraction[1] * u[1].lambda()];
    let ds = p.d.points()?;
    let always = !please1_holds(&u[0], &u[1], r[0], r[1])?;
    let mut summary = DesignSummary {
        scenario: cfg.scenario.clone(),
        rates: r,
        always_reliable: always,
        active_set: design::active_set(&u[0], &u[1], r[0], r[1])?,
        d_max: None,
        switches: Vec::new(),
    };
    let mut rows = Vec::new();
    let mut adm = Vec::new();
    if always {
        println!("ALWAYS_RELIABLE: some design in the active set is decodable for every offset; no outage curves");
    } else {
        let sets = design::active_admissible(&u[0], &u[1], r[0], r[1])?;
        for ((n1, n2), a) in &sets {
            for &d in &ds {
                rows.push(OutageRow { n1: *n1, n2: *n2, d, outage: outage(a, d)? });
            }
            adm.push(AdmissibleEntry {
                n1: *n1,
                n2: *n2,
                d_max: d_max_of(a),
                admissible: a.intersect_interval(-p.d.max, p.d.max).parts().to_vec(),
                grey: a.complement_within(-p.d.max, p.d.max).parts().to_vec(),
            });
        }
        summary.d_max = adm.iter().map(|e| e.d_max).reduce(f64::max);
        summary.switches = optimum_switches(&sets, p.d.min, p.d.max, p.d.steps)?
            .into_iter()
            .map(|(d, from, to)| Switch { d, from, to })
            .collect();
        if let Some(d) = summary.d_max {
            println!("d_max = {d:.6}");
        }
    }
    sink.rows("outage", &["N1", "N2", "d", "outage"], &rows)?;
    sink.json("admissible", &adm)?;
    sink.json("design_summary", &summary)
}

#[derive(serde::Serialize)]
struct PointRow {
    #[serde(rename = "R_c1")]
    r1: f64,
    #[serde(rename = "R_c2")]
    r2: f64,
    member: u8,
}

#[derive(serde::Serialize)]
struct CurveRow {
    gamma: f64,
    f: f64,
    g: f64,
    power: f64,
}

#[derive(serde::Serialize)]
struct RegionMeta {
    scenario: String,
    rbar_c: [f64; 2],
    bbox: [(f64, f64); 2],
    h: f64,
    nx: usize,
    ny: usize,
    members: usize,
}

#[derive(serde::Serialize)]
struct SymDump {
    sym_region: Vec<(f64, f64)>,
    /// Runs of member cells on the grid diagonal, as cell-edge intervals.
    diagonal: Vec<(f64, f64)>,
    gamma: Option<[f64; 3]>,
}

fn cmd_region(cfg: &RunConfig<RegionParams>, sink: &Sink) -> Out {
    let p = &cfg.params;
    let u = [p.users[0].build()?, p.users[1].build()?];
    let grid = region::region(&u[0], &u[1], p.count[0], p.count[1], p.theta[0], p.theta[1], p.alpha, p.m_grid, p.resolution)?;
    let Region2D::Grid { bbox, h, nx, ny, ref mask } = grid else {
        unreachable!("region() returns a grid")
    };
    let points: Vec<PointRow> = grid
        .points()
        .into_iter()
        .map(|(r1, r2, m)| PointRow { r1, r2, member: u8::from(m) })
        .collect();
    sink.rows("region", &["R_c1", "R_c2", "member"], &points)?;
    let meta = RegionMeta {
        scenario: cfg.scenario.clone(),
        rbar_c: [rbar_c(&u[0], p.count[0])?, rbar_c(&u[1], p.count[1])?],
        bbox,
        h,
        nx,
        ny,
        members: grid.member_count(),
    };
    sink.json("region_meta", &meta)?;
    println!("rbar_c = ({:.6}, {:.6})", meta.rbar_c[0], meta.rbar_c[1]);

    if u[0] != u[1] || p.count[0] != p.count[1] || p.theta[0] != p.theta[1] {
        return Ok(());
    }
    let (n, theta, lambda, a, pw) = (p.count[0], p.theta[0], u[0].lambda(), u[0].cross_gain(), u[0].power());
    let mut diagonal = Vec::new();
    if bbox[0] == bbox[1] {
        let mut run: Option<f64> = None;
        for i in 0..nx.min(ny) {
            let lo = bbox[0].0 + i as f64 * h;
            match (mask[i * nx + i], run) {
                (true, None) => run = Some(lo),
                (false, Some(s)) => {
                    diagonal.push((s, lo));
                    run = None;
                }
                _ => {}
            }
        }
        if let Some(s) = run {
            diagonal.push((s, bbox[0].0 + nx.min(ny) as f64 * h));
        }
    }
    let mut dump = SymDump { sym_region: sym_region(n, theta, lambda, a, pw, p.alpha)?.parts().to_vec(), diagonal, gamma: None };
    if n >= 2 && p.alpha.abs() < theta {
        let c = sym_curves(n, theta, lambda, a, pw, p.alpha)?;
        dump.gamma = Some([c.gamma0, c.gamma1, c.gamma2]);
        let rows: Vec<CurveRow> = c.table()?.into_iter().map(|[gamma, f, g, power]| CurveRow { gamma, f, g, power }).collect();
        sink.rows("sym_curves", &["gamma", "f", "g", "power"], &rows)?;
    }
    sink.json("sym_region", &dump)
}

#[derive(serde::Serialize)]
struct DetectRow {
    n: usize,
    nprime: usize,
    rate1: f64,
    rate2: f64,
    trials: u64,
    detect_errors: u64,
    spurious_trials: u64,
    exact: u64,
    spurious: u64,
    detected: u64,
    misidentified: u64,
    codewords: u64,
    decode_errors: u64,
    all_correct: u64,
    detect_error_rate: f64,
    exact_rate: f64,
    spurious_rate: f64,
    misid_rate: f64,
    decode_error_rate: f64,
    all_correct_rate: f64,
}

const DETECT_HEADER: &[&str] = &[
    "n",
    "nprime",
    "rate1",
    "rate2",
    "trials",
    "detect_errors",
    "spurious_trials",
    "exact",
    "spurious",
    "detected",
    "misidentified",
    "codewords",
    "decode_errors",
    "all_correct",
    "detect_error_rate",
    "exact_rate",
    "spurious_rate",
    "misid_rate",
    "decode_error_rate",
    "all_correct_rate",
];

impl From<DetectionRow> for DetectRow {
    fn from(r: DetectionRow) -> Self {
        DetectRow {
            n: r.n,
            nprime: r.nprime,
            rate1: r.rate1,
            rate2: r.rate2,
            trials: r.trials,
            detect_errors: r.detect_errors,
            spurious_trials: r.spurious_trials,
            exact: r.exact,
            spurious: r.spurious,
            detected: r.detected,
            misidentified: r.misidentified,
            codewords: r.codewords,
            decode_errors: r.decode_errors,
            all_correct: r.all_correct,
            detect_error_rate: r.detect_error_rate(),
            exact_rate: r.exact_rate(),
            spurious_rate: r.spurious_rate(),
            misid_rate: r.misid_rate(),
            decode_error_rate: r.decode_error_rate(),
            all_correct_rate: r.all_correct_rate(),
        }
    }
}

fn cmd_detect(cfg: &RunConfig<DetectParams>, sink: &Sink) -> Out {
    let p = &cfg.params;
    let base = DetectionConfig {
        n: p.n.clone(),
        nprime: None,
        theta: p.theta,
        mu: p.mu,
        nu: p.nu,
        count: p.count,
        codewords: p.codewords,
        gamma: [p.gamma[0].linear(), p.gamma[1].linear()],
        gain: p.gain,
        eps: p.eps,
        trials: p.trials,
        seed: cfg.seed_or_default(),
    };
    let nprimes: Vec<Option<usize>> = match &p.nprime {
        None => vec![None],
        Some(v) => v.iter().map(|&x| Some(x)).collect(),
    };
    let mut rows = Vec::new();
    for np in nprimes {
        let c = DetectionConfig { nprime: np, ..base.clone() };
        rows.extend(detection_experiment(&c)?.into_iter().map(DetectRow::from));
    }
    sink.rows("detection", DETECT_HEADER, &rows)
}
