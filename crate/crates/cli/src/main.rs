mod numfmt;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blaschke_lab::gallery::{DEFAULT_EPSILON, DEFAULT_RATE};
use blaschke_lab::mapspec::{GallerySpec, MapSpec, GALLERY_NAMES};
use blaschke_lab::valence::{default_schedule, valence_at, valence_heatmap_in, with_workers, ValenceOptions, Window};
use blaschke_lab::verifier::{
    canonical_candidates, check_pipeline_suite, check_theorem_3_1, check_theorem_3_2, check_theorem_a, check_theorem_b,
    check_theorem_c, demo_hurwitz_escape, hurwitz_report, SuiteReport, CANONICAL_VALENCE_BOUND,
};
use blaschke_lab::{DiscMapHandle, Error};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use numfmt::{fmt_complex, fmt_g, parse_complex, parse_list};

const THREADS_VAR: &str = "BLASCHKE_LAB_THREADS";
const SUITES: [&str; 6] = [
    "theorem-a",
    "theorem-b",
    "theorem-c",
    "theorem-3-1",
    "theorem-3-2",
    "hurwitz-demo",
];

#[derive(Parser)]
#[command(
    name = "blaschke-lab",
    version,
    about = "Valence and automorphism checks for holomorphic disc maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print f(z) and f'(z).
    Eval {
        /// Map spec: a JSON file path or inline JSON.
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Valence of f at w over a radius schedule.
    Valence {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Comma-separated strictly increasing radii (default 1 - 2^-j, j = 1..20).
        #[arg(long)]
        schedule: Option<String>,
        /// Stop once three consecutive counts agree.
        #[arg(long)]
        early_stop: bool,
    },
    /// Valence counts on a grid over [-1, 1]^2 (or a smaller window).
    Heatmap {
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long, default_value_t = 0.99)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = GridFormat::Csv)]
        format: GridFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Window center (default 0).
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        /// Window half-width (default 1).
        #[arg(long)]
        half_width: Option<f64>,
    },
    /// Run a verification suite and emit a JSON-lines report.
    Verify {
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random products, pairs or maps.
        #[arg(long)]
        cases: Option<usize>,
        /// Targets per product (theorem-a).
        #[arg(long, default_value_t = 10)]
        targets: usize,
        /// Random automorphisms (theorem-c).
        #[arg(long, default_value_t = 20)]
        mobius: usize,
        /// Power of the slit map (theorem-3-2).
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// theorem-3-1 candidate: mobius, slit-power or atomic-inner.
        #[arg(long)]
        candidate: Option<String>,
        /// theorem-3-1 candidate given as a map spec.
        #[arg(long)]
        map: Option<String>,
        /// Claimed valence bound (theorem-3-1).
        #[arg(long, default_value_t = CANONICAL_VALENCE_BOUND)]
        bound: i64,
        /// Indices of the escape sequence (hurwitz-demo).
        #[arg(long, default_value = "2,10,100")]
        n_list: String,
        /// Target (hurwitz-demo).
        #[arg(long, allow_hyphen_values = true, default_value = "0.1")]
        w: String,
        /// jsonl report, or csv for the hurwitz-demo table.
        #[arg(long, value_enum, default_value_t = ReportFormat::Jsonl)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the canonical spec of a gallery map.
    Gallery {
        name: String,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        /// Frostman shift parameter.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Frostman base map spec.
        #[arg(long)]
        base: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFormat {
    Csv,
    Pgm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Jsonl,
    Csv,
}

enum Failure {
    /// Suite failures or a computation that did not succeed.
    Check(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SpecParse { .. } | Error::InvalidArgument(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn complex_arg(text: &str) -> CliResult<Complex64> {
    parse_complex(text).map_err(usage)
}

fn load_spec(arg: &str) -> CliResult<MapSpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Io(format!("cannot read map spec {arg}: {e}")))?
    };
    Ok(MapSpec::parse_str(&text)?)
}

fn load_map(arg: &str) -> CliResult<DiscMapHandle> {
    Ok(load_spec(arg)?.build()?)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn list(values: &[f64]) -> String {
    values.iter().map(|v| fmt_g(*v)).collect::<Vec<_>>().join(",")
}

fn cmd_eval(map: &str, z: &str) -> CliResult {
    let f = load_map(map)?;
    let z = complex_arg(z)?;
    if z.norm().is_nan() || z.norm() >= 1.0 {
        return Err(usage(format!("z = {} is not inside the unit disc", fmt_complex(z))));
    }
    let (v, d) = f.eval(z)?;
    println!("{} {} | {} {}", fmt_g(v.re), fmt_g(v.im), fmt_g(d.re), fmt_g(d.im));
    Ok(())
}

fn cmd_valence(map: &str, w: &str, schedule: Option<&str>, early_stop: bool) -> CliResult {
    let f = load_map(map)?;
    let w = complex_arg(w)?;
    let radii = match schedule {
        Some(s) => parse_list(s).map_err(usage)?,
        None => default_schedule(),
    };
    let opts = ValenceOptions {
        early_stop,
        ..ValenceOptions::default()
    };
    let report = valence_at(&f, w, &radii, &opts)?;
    println!("w = {}", fmt_complex(w));
    println!("radii = {}", list(&report.radii));
    println!(
        "counts = {}",
        report.counts.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    );
    if let Some(r) = report.failed_radius {
        println!("failed_radius = {}", fmt_g(r));
    }
    println!("stabilized = {}", report.stabilized);
    println!("value = {}", report.value);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_heatmap(
    map: &str,
    resolution: usize,
    radius: f64,
    format: GridFormat,
    out: Option<&Path>,
    center: Option<&str>,
    half_width: Option<f64>,
) -> CliResult {
    let f = load_map(map)?;
    let window = Window {
        center: center.map(complex_arg).transpose()?.unwrap_or_default(),
        half_width: half_width.unwrap_or(1.0),
    };
    let grid = valence_heatmap_in(&f, resolution, radius, window, &ValenceOptions::default())?;
    let text = match format {
        GridFormat::Csv => grid.to_csv(),
        GridFormat::Pgm => grid.to_pgm(),
    };
    emit(out, &text)?;
    let s = grid.summary();
    let count = |c: Option<i64>| c.map_or("none".to_string(), |n| n.to_string());
    let summary = format!(
        "min_count = {}\nmax_count = {}\nvalid_cells = {}\noutside_cells = {}\nerror_cells = {}",
        count(s.min_count),
        count(s.max_count),
        s.valid_cells,
        s.outside_cells,
        s.error_cells
    );
    // keep stdout clean when it carries the grid
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn finish(report: &SuiteReport, out: Option<&Path>) -> CliResult {
    emit(out, &report.to_json_lines())?;
    eprintln!(
        "{}: {} cases, {} failures in {:.2}s",
        report.suite,
        report.cases.len(),
        report.failure_count(),
        report.wall_time.as_secs_f64()
    );
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} reported failures", report.suite)))
    }
}

fn require_seed(suite: &str, seed: Option<u64>) -> CliResult<u64> {
    seed.ok_or_else(|| usage(format!("{suite} is randomized and requires --seed")))
}

fn positive(value: usize, what: &str) -> CliResult<usize> {
    if value == 0 {
        Err(usage(format!("{what} must be positive")))
    } else {
        Ok(value)
    }
}

struct VerifyArgs<'a> {
    suite: &'a str,
    seed: Option<u64>,
    cases: Option<usize>,
    targets: usize,
    mobius: usize,
    k: u32,
    candidate: Option<&'a str>,
    map: Option<&'a str>,
    bound: i64,
    n_list: &'a str,
    w: &'a str,
    format: ReportFormat,
    out: Option<&'a Path>,
}

fn cmd_verify(a: VerifyArgs) -> CliResult {
    if a.format == ReportFormat::Csv && a.suite != "hurwitz-demo" {
        return Err(usage("--format csv is only available for hurwitz-demo"));
    }
    match a.suite {
        "theorem-a" => {
            let seed = require_seed(a.suite, a.seed)?;
            let n = positive(a.cases.unwrap_or(20), "--cases")?;
            finish(&check_theorem_a(seed, n, positive(a.targets, "--targets")?), a.out)
        }
        "theorem-b" => {
            let seed = require_seed(a.suite, a.seed)?;
            finish(
                &check_theorem_b(seed, positive(a.cases.unwrap_or(50), "--cases")?),
                a.out,
            )
        }
        "theorem-c" => {
            let seed = require_seed(a.suite, a.seed)?;
            let n = positive(a.cases.unwrap_or(50), "--cases")?;
            finish(&check_theorem_c(seed, n, a.mobius), a.out)
        }
        "theorem-3-1" => verify_pipeline(&a),
        "theorem-3-2" => {
            let seed = require_seed(a.suite, a.seed)?;
            finish(&check_theorem_3_2(seed, a.k)?, a.out)
        }
        "hurwitz-demo" => {
            let n_list = a
                .n_list
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| usage(format!("bad --n-list entry \"{s}\"")))
                })
                .collect::<CliResult<Vec<u32>>>()?;
            let w = complex_arg(a.w)?;
            match a.format {
                ReportFormat::Csv => {
                    let table = demo_hurwitz_escape(&n_list, w)?;
                    emit(a.out, &table.to_csv())
                }
                ReportFormat::Jsonl => finish(&hurwitz_report(&n_list, w), a.out),
            }
        }
        other => Err(usage(format!(
            "unknown suite \"{other}\"; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

fn verify_pipeline(a: &VerifyArgs) -> CliResult {
    let (name, f, expected) = match (a.candidate, a.map) {
        (None, None) => return finish(&check_pipeline_suite(), a.out),
        (Some(_), Some(_)) => return Err(usage("give either --candidate or --map, not both")),
        (Some(name), None) => {
            let c = canonical_candidates()
                .into_iter()
                .find(|c| c.name == name)
                .ok_or_else(|| {
                    let names: Vec<_> = canonical_candidates().iter().map(|c| c.name).collect();
                    usage(format!(
                        "unknown candidate \"{name}\"; expected one of {}",
                        names.join(", ")
                    ))
                })?;
            (c.name.to_string(), c.map, Some(c.expected))
        }
        (None, Some(spec)) => ("map".to_string(), load_map(spec)?, None),
    };
    let verdict = check_theorem_3_1(&f, a.bound);
    let mut line = serde_json::Map::new();
    line.insert("suite".into(), "theorem-3-1".into());
    line.insert("candidate".into(), name.into());
    line.insert("valence_bound".into(), a.bound.into());
    if let Some(e) = expected {
        line.insert("expected".into(), e.into());
    }
    for (k, v) in verdict.to_json().as_object().into_iter().flatten() {
        line.insert(k.clone(), v.clone());
    }
    emit(a.out, &format!("{}\n", serde_json::Value::Object(line)))?;
    match expected {
        Some(e) if e != verdict.name() => Err(Failure::Check(format!("expected {e}, got {}", verdict.name()))),
        _ => Ok(()),
    }
}

fn cmd_gallery(
    name: &str,
    epsilon: Option<f64>,
    c: Option<f64>,
    k: Option<u32>,
    n: Option<u32>,
    a: Option<&str>,
    base: Option<&str>,
) -> CliResult {
    let g = match name {
        "half" => GallerySpec::Half,
        "scaled-exp" => GallerySpec::ScaledExp {
            epsilon: epsilon.unwrap_or(DEFAULT_EPSILON),
            c: c.unwrap_or(DEFAULT_RATE),
        },
        "slit-g" => GallerySpec::SlitG,
        "slit-power" => GallerySpec::SlitPower { k: k.unwrap_or(2) },
        "atomic-inner" => GallerySpec::AtomicInner,
        "frostman" => {
            let base = base.ok_or_else(|| usage("frostman requires --base <spec>"))?;
            let a = a.ok_or_else(|| usage("frostman requires --a <complex>"))?;
            GallerySpec::Frostman {
                base: Box::new(load_spec(base)?),
                a: complex_arg(a)?,
            }
        }
        "escape" => GallerySpec::Escape { n: n.unwrap_or(2) },
        other => {
            return Err(usage(format!(
                "unknown gallery map \"{other}\"; valid names: {}",
                GALLERY_NAMES.join(", ")
            )))
        }
    };
    let spec = MapSpec::Gallery(g);
    // reject parameters the map cannot be built with
    spec.build()?;
    println!("{}", spec.to_json());
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Eval { map, z } => cmd_eval(&map, &z),
        Command::Valence {
            map,
            w,
            schedule,
            early_stop,
        } => cmd_valence(&map, &w, schedule.as_deref(), early_stop),
        Command::Heatmap {
            map,
            resolution,
            radius,
            format,
            out,
            center,
            half_width,
        } => cmd_heatmap(
            &map,
            resolution,
            radius,
            format,
            out.as_deref(),
            center.as_deref(),
            half_width,
        ),
        Command::Verify {
            suite,
            seed,
            cases,
            targets,
            mobius,
            k,
            candidate,
            map,
            bound,
            n_list,
            w,
            format,
            out,
        } => cmd_verify(VerifyArgs {
            suite: &suite,
            seed,
            cases,
            targets,
            mobius,
            k,
            candidate: candidate.as_deref(),
            map: map.as_deref(),
            bound,
            n_list: &n_list,
            w: &w,
            format,
            out: out.as_deref(),
        }),
        Command::Gallery {
            name,
            epsilon,
            c,
            k,
            n,
            a,
            base,
        } => cmd_gallery(&name, epsilon, c, k, n, a.as_deref(), base.as_deref()),
    }
}

fn worker_count() -> CliResult<usize> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{THREADS_VAR} must be a non-negative integer, got \"{v}\""))),
        Err(_) => Ok(0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = worker_count().and_then(|workers| with_workers(workers, || run(cli)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Check(msg) | Failure::Usage(msg) | Failure::Io(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
