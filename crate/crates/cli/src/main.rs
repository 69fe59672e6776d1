mod complex_arg;
mod plot;

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use complex_arg::parse_complex;
use sn_conjugacy::conjugacy::{sector_select, ConjugacyMap};
use sn_conjugacy::foliation::{
    formal_series_coefficients, hankel_closed_form, hankel_numeric, stokes_estimate,
    FoliationParameter, HalfPlane, LeafSolver, SectorTag,
};
use sn_conjugacy::numerics::QuadratureConfig;
use sn_conjugacy::projective::{chart_transition, Chart, ProjectivePoint};
use sn_conjugacy::verify::{run_all, run_suite, ComplexValue, SuiteConfig, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "snconj",
    version,
    about = "Leaves, Stokes constants and the conjugacy map of x³y′ = y + x² + αx³"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sector {
    Plus,
    Minus,
}

impl From<Sector> for SectorTag {
    fn from(s: Sector) -> Self {
        match s {
            Sector::Plus => SectorTag::Plus,
            Sector::Minus => SectorTag::Minus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartArg {
    Xy,
    St,
    Uv,
}

impl From<ChartArg> for Chart {
    fn from(c: ChartArg) -> Self {
        match c {
            ChartArg::Xy => Chart::XY,
            ChartArg::St => Chart::ST,
            ChartArg::Uv => Chart::UV,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the sectorial leaf y(x) with leaf coordinate c.
    Leaf {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex64,
        #[arg(long, value_enum)]
        sector: Sector,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        x: Complex64,
    },
    /// Recover the leaf coordinate c of the point (x, y).
    Invert {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex64,
        #[arg(long, value_enum)]
        sector: Sector,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        x: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        y: Complex64,
    },
    /// Estimate both Stokes constants at x (Re x > 0) and -x.
    Stokes {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0.5")]
        x: Complex64,
        /// Leaf coordinate used for the estimate.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0.3-0.7i")]
        c: Complex64,
    },
    /// Compare a Hankel loop integral with its closed form.
    Hankel {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        j: u32,
    },
    /// Apply the conjugacy map to one point or to a CSV batch.
    Map {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "y", conflicts_with = "input")]
        x: Option<Complex64>,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "x")]
        y: Option<Complex64>,
        /// CSV with header re_x,im_x,re_y,im_y ("-" for stdin).
        #[arg(long, required_unless_present = "x")]
        input: Option<PathBuf>,
        /// Output CSV (stdout when omitted).
        #[arg(long, requires = "input")]
        output: Option<PathBuf>,
    },
    /// Re-express a point of CP² in another chart.
    Chart {
        #[arg(long, value_enum)]
        from: ChartArg,
        #[arg(long, value_enum)]
        to: ChartArg,
        /// First coordinate in the source chart.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex64,
        /// Second coordinate in the source chart.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        b: Complex64,
    },
    /// Run a verification suite (or all of them) and print the JSON report.
    Verify {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex64,
        #[arg(long)]
        suite: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the coefficients a_0..a_N of the divergent formal separatrix.
    Series {
        #[arg(long)]
        order: usize,
    },
    /// Trace leaves along the circle |x| = R, split by sector.
    PlotLeaves {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex64,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Samples along the circle.
        #[arg(long, default_value_t = 360)]
        points: usize,
        /// Output file; .svg or .csv.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct BatchIn {
    re_x: f64,
    im_x: f64,
    re_y: f64,
    im_y: f64,
}

#[derive(Debug, Serialize)]
struct BatchOut {
    re_x: f64,
    im_x: f64,
    re_y: f64,
    im_y: f64,
    #[serde(rename = "re_X")]
    re_big_x: f64,
    #[serde(rename = "im_X")]
    im_big_x: f64,
    #[serde(rename = "re_Y")]
    re_big_y: f64,
    #[serde(rename = "im_Y")]
    im_big_y: f64,
}

const BATCH_HEADER: [&str; 4] = ["re_x", "im_x", "re_y", "im_y"];

fn cv(z: Complex64) -> ComplexValue {
    z.into()
}

fn print_json(value: &impl Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            let (kind, code) = match err.downcast_ref::<sn_conjugacy::Error>() {
                Some(e @ sn_conjugacy::Error::UnknownSuite(_)) => (e.kind(), 2),
                Some(e) => (e.kind(), 3),
                None => ("io", 1),
            };
            eprintln!(
                "{}",
                json!({ "error": kind, "message": format!("{err:#}") })
            );
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Leaf {
            alpha,
            sector,
            c,
            x,
        } => {
            let alpha = FoliationParameter::new(alpha)?;
            print_json(&cv(LeafSolver::default().value(
                &alpha,
                sector.into(),
                c,
                x,
            )?))?;
        }
        Command::Invert {
            alpha,
            sector,
            x,
            y,
        } => {
            let alpha = FoliationParameter::new(alpha)?;
            print_json(&cv(LeafSolver::default().invert(
                &alpha,
                sector.into(),
                x,
                y,
            )?))?;
        }
        Command::Stokes { alpha, x, c } => {
            let alpha = FoliationParameter::new(alpha)?;
            let x_pos = if x.re > 0.0 { x } else { -x };
            let solver = LeafSolver::default();
            let tau0 = stokes_estimate(&solver, &alpha, HalfPlane::RePos, x_pos, c)?;
            let tau1 = stokes_estimate(&solver, &alpha, HalfPlane::ReNeg, -x_pos, c)?;
            let (e0, e1) = (
                HalfPlane::RePos.expected(&alpha),
                HalfPlane::ReNeg.expected(&alpha),
            );
            print_json(&json!({
                "tau0_est": cv(tau0),
                "tau0_exact": cv(e0),
                "tau1_est": cv(tau1),
                "tau1_exact": cv(e1),
                "max_err": (tau0 - e0).norm().max((tau1 - e1).norm()),
            }))?;
        }
        Command::Hankel { a, j } => {
            let closed = hankel_closed_form(a, j)?;
            let numeric = hankel_numeric(a, j, &QuadratureConfig::default())?;
            print_json(&json!({
                "a": a,
                "j": j,
                "numeric": cv(numeric),
                "closed_form": cv(closed),
                "rel_err": (numeric - closed).norm() / closed.norm(),
            }))?;
        }
        Command::Map {
            alpha,
            x,
            y,
            input,
            output,
        } => {
            let map = ConjugacyMap::new(FoliationParameter::new(alpha)?)?;
            match (x, y, input) {
                (Some(x), Some(y), _) => {
                    let (big_x, big_y) = map.phi(x, y)?;
                    print_json(&json!({ "X": cv(big_x), "Y": cv(big_y) }))?;
                }
                (_, _, Some(input)) => map_batch(&map, &input, output.as_deref())?,
                _ => bail!("either --x/--y or --input is required"),
            }
        }
        Command::Chart { from, to, a, b } => {
            let p = ProjectivePoint::new(from.into(), a, b);
            let q = chart_transition(&p, to.into())?;
            print_json(&json!({ "chart": q.chart, "coords": [cv(q.coords.0), cv(q.coords.1)] }))?;
        }
        Command::Verify {
            alpha,
            suite,
            samples,
            seed,
            tol,
        } => {
            let reports = if suite == "all" {
                if samples.is_some() || tol.is_some() {
                    clap::Error::raw(
                        ErrorKind::ArgumentConflict,
                        "--samples and --tol apply to a single suite\n",
                    )
                    .exit();
                }
                run_all(alpha, seed)?
            } else {
                FoliationParameter::new(alpha)?.check_conjugacy_regime()?;
                let mut cfg = SuiteConfig::default_for(&suite, alpha, seed)?;
                if let Some(n) = samples {
                    cfg.samples = n;
                }
                if let Some(t) = tol {
                    cfg.tolerance = t;
                }
                vec![run_suite(&cfg)?]
            };
            let pass = reports.iter().all(|r| r.pass);
            if suite == "all" {
                print_json(&reports)?;
            } else {
                print_json(&reports[0])?;
            }
            return Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::Series { order } => {
            let line = formal_series_coefficients(order)
                .iter()
                .enumerate()
                .map(|(n, a)| format!("a{n}={a}"))
                .collect::<Vec<_>>()
                .join(",");
            println!("{line}");
        }
        Command::PlotLeaves {
            alpha,
            radius,
            count,
            points,
            out,
        } => {
            plot_leaves(alpha, radius, count, points, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn map_batch(map: &ConjugacyMap, input: &Path, output: Option<&Path>) -> anyhow::Result<()> {
    let reader: Box<dyn Read> = if input == Path::new("-") {
        Box::new(io::stdin())
    } else {
        Box::new(File::open(input).with_context(|| format!("opening {}", input.display()))?)
    };
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != BATCH_HEADER {
        bail!("input header must be exactly {}", BATCH_HEADER.join(","));
    }
    let writer: Box<dyn Write> = match output {
        Some(path) => {
            Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    };
    let mut wtr = csv::Writer::from_writer(writer);
    for (row, record) in rdr.deserialize::<BatchIn>().enumerate() {
        let r = record.with_context(|| format!("row {}", row + 1))?;
        let (big_x, big_y) = map
            .phi(
                Complex64::new(r.re_x, r.im_x),
                Complex64::new(r.re_y, r.im_y),
            )
            .with_context(|| format!("row {}", row + 1))?;
        wtr.serialize(BatchOut {
            re_x: r.re_x,
            im_x: r.im_x,
            re_y: r.re_y,
            im_y: r.im_y,
            re_big_x: big_x.re,
            im_big_x: big_x.im,
            re_big_y: big_y.re,
            im_big_y: big_y.im,
        })?;
    }
    wtr.flush()?;
    Ok(())
}

/// Leaf coordinates `c_k` spread evenly over `[−2, 2]`.
fn leaf_coordinates(count: usize) -> Vec<Complex64> {
    match count {
        0 => Vec::new(),
        1 => vec![Complex64::new(0.0, 0.0)],
        n => (0..n)
            .map(|k| Complex64::new(-2.0 + 4.0 * k as f64 / (n - 1) as f64, 0.0))
            .collect(),
    }
}

fn plot_leaves(
    alpha: Complex64,
    radius: f64,
    count: usize,
    points: usize,
    out: &Path,
) -> anyhow::Result<()> {
    if count == 0 || points < 2 {
        bail!("--count must be >= 1 and --points >= 2");
    }
    let alpha = FoliationParameter::new(alpha)?;
    let solver = LeafSolver::default();
    let mut traces = Vec::new();
    for (k, c) in leaf_coordinates(count).into_iter().enumerate() {
        let mut pts = Vec::with_capacity(points);
        for m in 0..points {
            let theta =
                -std::f64::consts::PI + std::f64::consts::TAU * (m as f64 + 0.5) / points as f64;
            let x = Complex64::from_polar(radius, theta);
            let y = solver.value(&alpha, sector_select(x)?, c, x)?;
            pts.push((theta, y.re, y.im));
        }
        traces.push(plot::Trace {
            c_index: k,
            points: pts,
        });
    }
    let bytes = match out
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("svg") => {
            let title = format!(
                "leaves at |x| = {radius}, alpha = {}{:+}i",
                alpha.value().re,
                alpha.value().im
            );
            plot::to_svg(&traces, &title).into_bytes()
        }
        Some("csv") => plot::to_csv(&traces)?,
        _ => bail!("--out must end in .svg or .csv"),
    };
    std::fs::write(out, bytes).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}
