//! `aqi`: asymmetric quantum-illumination error exponents for Gaussian
//! probes. Single-point queries, R-vs-M curves, bundled reference figures,
//! grid sweeps, and the TMSV/three-mode crossover search.

mod figures;
mod gridspec;
mod manifest;
mod record;
mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aqi_core::probes::{ProbeKind, SceneParams};
use aqi_core::stein::{crossover_ns, CrossoverMode};
use clap::{Args, Parser, Subcommand, ValueEnum};

use figures::{m_grid, probe_from_name, render_curve_figure, render_fig3a, render_fig3b, CURVE_FIGURES};
use manifest::RunManifest;
use record::{evaluate, SweepRecord, CSV_HEADER};
use svg::{Chart, Series};

#[derive(Parser)]
#[command(
    name = "aqi",
    version,
    about = "Asymmetric quantum-illumination error exponents for Gaussian probes",
    long_about = "Computes quantum Stein-lemma error exponents R = a + sqrt(b/M) Phi^-1(eps) \
for target detection in thermal noise with coherent, two-mode squeezed vacuum (tmsv), and \
three-mode entangled Gaussian probes. Conventions: quadrature ordering [q..q, p..p], vacuum \
variance 1/2, entropies in nats. Numbers are deterministic; no command uses randomness."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate (a, b), R, and P_err at a single parameter point
    Exponent(ExponentArgs),
    /// Emit an R-versus-M curve for one or more probes
    Curve(CurveArgs),
    /// Reproduce a bundled reference figure (CSV + SVG + annotations)
    Figure(FigureArgs),
    /// Evaluate a Cartesian parameter grid from a spec file
    Sweep(SweepArgs),
    /// Locate the N_S where the TMSV/three-mode ratio crosses 1
    Crossover(CrossoverArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeArg {
    Tmsv,
    Coherent,
    Threemode,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct SceneArgs {
    /// Mean signal photons per mode
    #[arg(long, default_value_t = 1.0)]
    ns: f64,
    /// Mean background photons
    #[arg(long, default_value_t = 1.0)]
    nb: f64,
    /// Target reflectivity in [0, 1)
    #[arg(long, default_value_t = 0.01)]
    kappa: f64,
    /// Permitted type-I error probability in (0, 1)
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
}

impl SceneArgs {
    fn build(&self) -> Result<SceneParams, String> {
        SceneParams::new(self.ns, self.nb, self.kappa, self.eps).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct ExponentArgs {
    /// Probe family
    #[arg(long, value_enum, default_value = "tmsv")]
    probe: ProbeArg,
    #[command(flatten)]
    scene: SceneArgs,
    /// Number of copies M; omit to report the M -> infinity limit
    #[arg(long)]
    m: Option<u64>,
    /// Three-mode correlation C (default: C_max(N_S))
    #[arg(long)]
    c: Option<f64>,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write output to a file (with a .manifest.json sidecar)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    /// Comma-separated probes: tmsv, coherent, threemode
    #[arg(long, value_delimiter = ',', default_value = "tmsv")]
    probes: Vec<String>,
    #[command(flatten)]
    scene: SceneArgs,
    /// Smallest copy count
    #[arg(long, default_value_t = 1.0)]
    mmin: f64,
    /// Largest copy count
    #[arg(long)]
    mmax: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Logarithmic M spacing
    #[arg(long)]
    log: bool,
    /// Three-mode correlation C (default: C_max(N_S))
    #[arg(long)]
    c: Option<f64>,
    /// Write the CSV to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render an SVG chart to this path
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
#[command(after_long_help = "\
Bundled scenarios (reference exponents shown as dashed lines):
  fig1a  R vs M, N_S=20, N_B=0.01, kappa=0.01, eps=0.001; tmsv 0.9395, coherent 0.9230
  fig1b  R vs M, N_S=0.01, N_B=20, kappa=0.01, eps=0.01;  tmsv 2.24e-5, coherent 4.88e-6
  fig2a  R vs M, N_S=10, N_B=0.01, kappa=0.01, eps=0.001; tmsv 0.474, threemode 0.249
  fig2b  R vs M, N_S=0.01, N_B=20, kappa=0.01, eps=0.01;  tmsv 2.24e-5, threemode 2.57e-5
  fig3a  exact ratio r over N_B in [1e-3,1] x kappa in [1e-3,0.1], N_S = 100 N_B
  fig3b  asymptotic ratio r vs N_S (background-dominant); crossover reference 0.46")]
struct FigureArgs {
    /// Figure id: fig1a, fig1b, fig2a, fig2b, fig3a, fig3b
    id: String,
    /// Output directory (default: $AQI_OUT_DIR or the working directory)
    #[arg(long)]
    outdir: Option<PathBuf>,
}

#[derive(Args)]
#[command(after_long_help = "\
Grid spec grammar: one `key = value` per line, `#` comments. Numeric axes
take a scalar or start:stop:count (append :log for log spacing); `probe`
takes a comma list of tmsv,coherent,threemode; `m` takes integers (0 = the
M -> infinity limit). Defaults: probe=tmsv, ns=1, nb=1, kappa=0.01,
eps=0.01, m=0; `c` defaults to C_max(N_S) per point and applies to the
threemode probe only. Rows follow the fixed axis order probe, ns, nb,
kappa, eps, c, m; failed points are emitted with error flags, not dropped.")]
struct SweepArgs {
    /// Grid spec file: `key = value` lines; see --help for the grammar
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    /// Write the CSV to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CrossoverArgs {
    /// Solve the kappa- and N_B-free leading-term ratio
    #[arg(long, conflicts_with = "exact")]
    asymptotic: bool,
    /// Solve the full-pipeline ratio at --nb, --kappa
    #[arg(long)]
    exact: bool,
    /// Background occupation for --exact (must be at least 100)
    #[arg(long, default_value_t = 1e4)]
    nb: f64,
    /// Reflectivity for --exact
    #[arg(long, default_value_t = 1e-3)]
    kappa: f64,
    /// Bisection tolerance on N_S
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
}

fn probe_kind(arg: ProbeArg, c: Option<f64>) -> ProbeKind {
    match arg {
        ProbeArg::Tmsv => ProbeKind::Tmsv,
        ProbeArg::Coherent => ProbeKind::Coherent,
        ProbeArg::Threemode => ProbeKind::ThreeMode { c },
    }
}

fn write_output(path: &Path, body: &str) -> Result<(), String> {
    std::fs::write(path, body).map_err(|e| format!("writing {}: {e}", path.display()))?;
    RunManifest::current()
        .write_sidecar(path)
        .map_err(|e| format!("writing manifest for {}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), String> {
    match out {
        Some(path) => write_output(path, body),
        None => {
            print!("{body}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn records_to_csv(rows: &[SweepRecord]) -> String {
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in rows {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    csv
}

fn run_exponent(args: &ExponentArgs) -> Result<bool, String> {
    let scene = args.scene.build()?;
    let probe = probe_kind(args.probe, args.c);
    if args.c.is_some() && !matches!(probe, ProbeKind::ThreeMode { .. }) {
        return Err("--c applies to the threemode probe only".to_string());
    }
    let rec = evaluate(&probe, &scene, args.m.unwrap_or(0));
    let body = match args.format {
        FormatArg::Json => serde_json::to_string_pretty(&rec).expect("record serializes") + "\n",
        FormatArg::Csv => records_to_csv(std::slice::from_ref(&rec)),
    };
    emit(&args.out, &body)?;
    Ok(rec.is_error())
}

fn run_curve(args: &CurveArgs) -> Result<bool, String> {
    let scene = args.scene.build()?;
    if !(args.mmax >= args.mmin && args.mmin >= 1.0) {
        return Err(format!(
            "empty M range: mmin = {}, mmax = {}",
            args.mmin, args.mmax
        ));
    }
    let probes: Vec<(String, ProbeKind)> = args
        .probes
        .iter()
        .map(|name| {
            let mut kind = probe_from_name(name)
                .ok_or_else(|| format!("unknown probe '{name}' (tmsv|coherent|threemode)"))?;
            if let (ProbeKind::ThreeMode { .. }, Some(c)) = (&kind, args.c) {
                kind = ProbeKind::ThreeMode { c: Some(c) };
            }
            Ok((name.clone(), kind))
        })
        .collect::<Result<_, String>>()?;
    let ms = m_grid(args.mmin as u64, args.mmax as u64, args.points, args.log);
    let mut rows = Vec::new();
    let mut series = Vec::new();
    let mut asymptotes = Vec::new();
    for (name, probe) in &probes {
        let mut pts = Vec::new();
        for &m in &ms {
            let rec = evaluate(probe, &scene, m);
            pts.push((m as f64, rec.r));
            rows.push(rec);
        }
        let limit = evaluate(probe, &scene, 0);
        asymptotes.push((format!("{name} Rmax = {:.6e}", limit.a), limit.a));
        series.push(Series {
            label: name.clone(),
            points: pts,
        });
    }
    let any_error = rows.iter().any(SweepRecord::is_error);
    emit(&args.out, &records_to_csv(&rows))?;
    if let Some(svg_path) = &args.svg {
        let chart = Chart {
            title: format!(
                "R vs M (N_S={}, N_B={}, kappa={}, eps={})",
                scene.n_s, scene.n_b, scene.kappa, scene.epsilon
            ),
            x_label: if args.log { "M (log scale)" } else { "M" }.to_string(),
            y_label: "R (nats)".to_string(),
            log_x: args.log,
            series,
            asymptotes,
        };
        write_output(svg_path, &chart.render())?;
    }
    Ok(any_error)
}

fn run_figure(args: &FigureArgs) -> Result<bool, String> {
    let outdir = args
        .outdir
        .clone()
        .or_else(|| std::env::var_os("AQI_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&outdir)
        .map_err(|e| format!("creating {}: {e}", outdir.display()))?;
    let output = match args.id.as_str() {
        "fig3a" => render_fig3a(),
        "fig3b" => render_fig3b(),
        id => {
            let fig = CURVE_FIGURES
                .iter()
                .find(|f| f.id == id)
                .ok_or_else(|| {
                    format!(
                        "unknown figure id '{id}'; known ids: {}",
                        figures::FIGURE_IDS.join(", ")
                    )
                })?;
            render_curve_figure(fig)
        }
    };
    let csv_path = outdir.join(format!("{}.csv", args.id));
    let svg_path = outdir.join(format!("{}.svg", args.id));
    write_output(&csv_path, &output.csv)?;
    write_output(&svg_path, &output.svg)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&output.annotations).expect("annotations serialize")
    );
    Ok(output.any_error)
}

fn run_sweep(args: &SweepArgs) -> Result<bool, String> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| format!("reading {}: {e}", args.spec.display()))?;
    let spec = gridspec::parse(&text).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    // fixed axis order: probe, ns, nb, kappa, eps, c, m
    for probe_name in &spec.probes {
        let base = probe_from_name(probe_name).expect("validated by the parser");
        for &ns in &spec.ns {
            for &nb in &spec.nb {
                for &kappa in &spec.kappa {
                    for &eps in &spec.eps {
                        let c_axis: Vec<Option<f64>> = match &spec.c {
                            Some(cs) => cs.iter().map(|&c| Some(c)).collect(),
                            None => vec![None],
                        };
                        for c in c_axis {
                            for &m in &spec.m {
                                let probe = match base {
                                    ProbeKind::ThreeMode { .. } => ProbeKind::ThreeMode { c },
                                    other => other,
                                };
                                match SceneParams::new(ns, nb, kappa, eps) {
                                    Ok(scene) => rows.push(evaluate(&probe, &scene, m)),
                                    Err(e) => {
                                        let mut rec = SweepRecord {
                                            probe: probe.label().to_string(),
                                            n_s: ns,
                                            n_b: nb,
                                            kappa,
                                            epsilon: eps,
                                            c: None,
                                            m,
                                            a: f64::NAN,
                                            b: f64::NAN,
                                            r: f64::NAN,
                                            p_err: f64::NAN,
                                            path: "-".to_string(),
                                            flags: Vec::new(),
                                        };
                                        rec.flags.push(format!("error:{e}"));
                                        rows.push(rec);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let any_error = rows.iter().any(SweepRecord::is_error);
    emit(&args.out, &records_to_csv(&rows))?;
    Ok(any_error)
}

fn run_crossover(args: &CrossoverArgs) -> Result<bool, String> {
    if !args.asymptotic && !args.exact {
        return Err("choose --asymptotic or --exact".to_string());
    }
    let mode = if args.asymptotic {
        CrossoverMode::Asymptotic
    } else {
        CrossoverMode::Exact {
            n_b: args.nb,
            kappa: args.kappa,
        }
    };
    let res = crossover_ns(mode, args.tol).map_err(|e| e.to_string())?;
    let mut body = serde_json::json!({
        "mode": if args.asymptotic { "asymptotic" } else { "exact" },
        "ns_star": res.ns_star,
        "tol": args.tol,
        "bracket": [res.bracket.0, res.bracket.1],
        "residual": res.residual,
        "iterations": res.iterations,
    });
    if args.exact {
        body["N_B"] = serde_json::json!(args.nb);
        body["kappa"] = serde_json::json!(args.kappa);
    }
    println!("{}", serde_json::to_string_pretty(&body).expect("serializes"));
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Exponent(args) => run_exponent(args),
        Command::Curve(args) => run_curve(args),
        Command::Figure(args) => run_figure(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Crossover(args) => run_crossover(args),
    };
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::FAILURE, // at least one record carries an error flag
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
