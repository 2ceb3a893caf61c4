use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use blgeo::certify::{certify_bt_equality, certify_liakopoulos_equality, inf_decomposition_gap};
use blgeo::cover::{datum_from_cover, induced_partition, validate_cover, UniformCover};
use blgeo::datum::{decompose, validate_datum, BLDatum, DecompositionReport};
use blgeo::integrate::{mc_exp_gauge, mc_uniform_in, ExpGaugeEstimate, UniformSample};
use blgeo::linalg::{format_rational, parse_rational, Rational};
use blgeo::optimize::{norm_decompose, NormDecomposition};
use blgeo::polytope::{Body, HPolytope, VPolytope};
use blgeo::search::search;
use blgeo::verify::{
    gaussian_bl_constant, verify_bollobas_thomason, verify_brunn_minkowski, verify_liakopoulos,
    verify_loomis_whitney, verify_meyer, verify_rbl_indicators, InequalityReport,
};
use blgeo::Error;

const EXIT_ERROR: u8 = 1;
const EXIT_INVALID_DATUM: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_STRICT: u8 = 4;

#[derive(Parser)]
#[command(name = "blgeo", version, about = "Exact convex geometry for Brascamp-Lieb data")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the identity sum c_i P_{E_i} = I.
    CheckDatum { datum: PathBuf },
    /// Split a datum into independent subspaces and the dependent space.
    Decompose { datum: PathBuf },
    /// Validate an s-uniform cover and build its datum.
    Cover { cover: PathBuf },
    /// Exact volume with both representations of the body.
    Volume { body: PathBuf },
    /// Check one inequality on a body.
    Verify {
        #[arg(value_enum)]
        inequality: Inequality,
        body: PathBuf,
        /// Datum (liakopoulos, rbl), cover (bt) or second body (bm).
        extra: Option<PathBuf>,
        /// Weight of the first body (bm).
        #[arg(long, default_value = "1")]
        alpha: String,
        /// Weight of the second body (bm).
        #[arg(long, default_value = "1")]
        beta: String,
    },
    /// Decide the equality case for a datum or a cover.
    Certify { body: PathBuf, datum_or_cover: PathBuf },
    /// Minimise sum ||y_i||_K over z = sum y_i with y_i in E_i.
    NormDecompose {
        body: PathBuf,
        datum: PathBuf,
        /// Comma-separated rationals, e.g. 1,1/2,-3.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Monte Carlo estimates of gauge integrals or volume.
    Integrate {
        body: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Mode::ExpGauge)]
        mode: Mode,
        /// Exponent p in exp(-p ||x||_K); defaults to the dimension.
        #[arg(long)]
        power: Option<String>,
    },
    /// Chart the Liakopoulos ratio over random polytopes.
    Search {
        datum: PathBuf,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Number of smallest ratios to keep.
        #[arg(long, default_value_t = 10)]
        keep: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Inequality {
    Liakopoulos,
    Meyer,
    Lw,
    Bt,
    Bm,
    Rbl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    ExpGauge,
    Uniform,
}

#[derive(Serialize, Deserialize)]
struct DatumCheck {
    valid: bool,
    residual: Vec<Vec<String>>,
    trace_defect: String,
    gaussian_constant: String,
}

#[derive(Serialize, Deserialize)]
struct DecomposeOutput {
    valid: bool,
    decomposition: DecompositionReport,
}

#[derive(Serialize, Deserialize)]
struct CoverOutput {
    valid: bool,
    multiplicity: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    induced_partition: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    datum: Option<BLDatum>,
}

#[derive(Serialize, Deserialize)]
struct VolumeOutput {
    dim: usize,
    volume: String,
    vertices: VPolytope,
    facets: HPolytope,
}

#[derive(Serialize, Deserialize)]
struct NormDecomposeOutput {
    decomposition: NormDecomposition,
    gauge: String,
    gap: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntegrateOutput {
    ExpGauge(ExpGaugeEstimate),
    Uniform(UniformSample),
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::InvalidDatum(_)) => EXIT_INVALID_DATUM,
            _ => EXIT_ERROR,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit<T: Serialize>(output: Option<&Path>, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn require<'a>(extra: &'a Option<PathBuf>, what: &str) -> anyhow::Result<&'a Path> {
    extra
        .as_deref()
        .with_context(|| format!("this inequality needs a {what} file"))
}

fn parse_point(s: &str) -> anyhow::Result<Vec<Rational>> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(anyhow::Error::from))
        .collect()
}

/// A second input file is a cover when it has a `sets` field.
enum DatumOrCover {
    Datum(BLDatum),
    Cover(UniformCover),
}

fn read_datum_or_cover(path: &Path) -> anyhow::Result<DatumOrCover> {
    let value: serde_json::Value = read_json(path)?;
    if value.get("sets").is_some() {
        Ok(DatumOrCover::Cover(
            serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))?,
        ))
    } else {
        Ok(DatumOrCover::Datum(
            serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))?,
        ))
    }
}

fn verify(
    inequality: Inequality,
    body: &Path,
    extra: &Option<PathBuf>,
    alpha: &str,
    beta: &str,
) -> Result<InequalityReport, Failure> {
    let k: Body = read_json(body)?;
    let report = match inequality {
        Inequality::Liakopoulos => {
            let d: BLDatum = read_json(require(extra, "datum")?)?;
            verify_liakopoulos(&k.to_h()?, &d)?
        }
        Inequality::Rbl => {
            let d: BLDatum = read_json(require(extra, "datum")?)?;
            verify_rbl_indicators(&k.to_h()?, &d)?
        }
        Inequality::Meyer => verify_meyer(&k.to_h()?)?,
        Inequality::Lw => verify_loomis_whitney(&k)?,
        Inequality::Bt => {
            let c: UniformCover = read_json(require(extra, "cover")?)?;
            verify_bollobas_thomason(&k, &c)?
        }
        Inequality::Bm => {
            let y: Body = read_json(require(extra, "second body")?)?;
            let a = parse_rational(alpha)?;
            let b = parse_rational(beta)?;
            verify_brunn_minkowski(&k.to_v()?, &y.to_v()?, &a, &b)?
        }
    };
    Ok(report)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let out = cli.output.as_deref();
    match cli.command {
        Command::CheckDatum { datum } => {
            let d: BLDatum = read_json(&datum)?;
            let v = validate_datum(&d);
            let report = DatumCheck {
                valid: v.valid,
                residual: v
                    .residual
                    .row_vectors()
                    .iter()
                    .map(|r| r.iter().map(format_rational).collect())
                    .collect(),
                trace_defect: format_rational(&v.trace_defect),
                gaussian_constant: format_rational(&gaussian_bl_constant(&d)),
            };
            emit(out, &report)?;
            Ok(if v.valid { 0 } else { EXIT_INVALID_DATUM })
        }
        Command::Decompose { datum } => {
            let d: BLDatum = read_json(&datum)?;
            let valid = d.is_valid();
            emit(
                out,
                &DecomposeOutput {
                    valid,
                    decomposition: decompose(&d)?,
                },
            )?;
            Ok(if valid { 0 } else { EXIT_INVALID_DATUM })
        }
        Command::Cover { cover } => {
            let c: UniformCover = read_json(&cover)?;
            let v = validate_cover(&c);
            let (partition, datum) = if v.valid {
                let blocks = induced_partition(&c)?
                    .into_iter()
                    .map(|b| b.into_iter().map(|j| j + 1).collect())
                    .collect();
                (Some(blocks), Some(datum_from_cover(&c)?))
            } else {
                (None, None)
            };
            emit(
                out,
                &CoverOutput {
                    valid: v.valid,
                    multiplicity: v.multiplicity,
                    induced_partition: partition,
                    datum,
                },
            )?;
            Ok(if v.valid { 0 } else { EXIT_INVALID_DATUM })
        }
        Command::Volume { body } => {
            let k: Body = read_json(&body)?;
            let vertices = k.to_v()?;
            let facets = k.to_h()?;
            emit(
                out,
                &VolumeOutput {
                    dim: k.dim(),
                    volume: format_rational(&vertices.volume()?),
                    vertices,
                    facets,
                },
            )?;
            Ok(0)
        }
        Command::Verify {
            inequality,
            body,
            extra,
            alpha,
            beta,
        } => {
            let report = verify(inequality, &body, &extra, &alpha, &beta)?;
            emit(out, &report)?;
            if !report.holds {
                eprintln!("blgeo: {} reported as violated", report.name);
                return Ok(EXIT_VIOLATION);
            }
            Ok(0)
        }
        Command::Certify { body, datum_or_cover } => {
            let k: Body = read_json(&body)?;
            let cert = match read_datum_or_cover(&datum_or_cover)? {
                DatumOrCover::Datum(d) => certify_liakopoulos_equality(&k.to_h()?, &d)?,
                DatumOrCover::Cover(c) => certify_bt_equality(&k, &c)?,
            };
            emit(out, &cert)?;
            if !cert.consistent() {
                eprintln!("blgeo: certificate checks disagree");
                return Ok(EXIT_VIOLATION);
            }
            Ok(if cert.is_equality() { 0 } else { EXIT_STRICT })
        }
        Command::NormDecompose { body, datum, point } => {
            let k = read_json::<Body>(&body)?.to_h()?;
            let d: BLDatum = read_json(&datum)?;
            let z = parse_point(&point)?;
            let decomposition = norm_decompose(&k, &d.subspaces(), &z)?;
            let gauge = k.gauge(&z)?;
            let gap = inf_decomposition_gap(&k, &d, &z)?;
            emit(
                out,
                &NormDecomposeOutput {
                    decomposition,
                    gauge: format_rational(&gauge),
                    gap: format_rational(&gap),
                },
            )?;
            Ok(0)
        }
        Command::Integrate {
            body,
            seed,
            samples,
            mode,
            power,
        } => {
            let k = read_json::<Body>(&body)?.to_h()?;
            let report = match mode {
                Mode::ExpGauge => {
                    let p = match power {
                        Some(p) => parse_rational(&p)?,
                        None => Rational::from_integer((k.dim() as i64).into()),
                    };
                    IntegrateOutput::ExpGauge(mc_exp_gauge(&k, &p, samples, seed)?)
                }
                Mode::Uniform => {
                    let mut s = mc_uniform_in(&k, samples, seed)?;
                    s.points.clear();
                    IntegrateOutput::Uniform(s)
                }
            };
            emit(out, &report)?;
            Ok(0)
        }
        Command::Search {
            datum,
            trials,
            seed,
            keep,
        } => {
            let d: BLDatum = read_json(&datum)?;
            let table = search(&d, trials, seed, keep)?;
            emit(out, &table)?;
            Ok(if table.violations > 0 { EXIT_VIOLATION } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("blgeo: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
