use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qdiv_core::lab::{run_experiment, DivergenceSelector, ExperimentConfig};
use qdiv_core::linalg::{chaotic_leq, loewner_leq, HermitianMatrix, PsdMatrix};
use qdiv_core::means::{kubo_ando_mean_limit, log_euclidean, log_product};
use qdiv_core::suite::{run_suites, SuiteConfig};
use qdiv_core::{defaults, Error, ExtendedReal, LimitSchedule, MatrixJson, MeanFunction};

use crate::{Command, Divergence, Format, OrderKind, OutputArgs, Overrides};

pub const EXIT_OK: u8 = 0;
pub const EXIT_UNEXPECTED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Convergence { .. }) { EXIT_NO_CONVERGENCE } else { EXIT_INVALID };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Compute { a, b, divergence, alpha, f, tol, output } => {
            compute(&a, &b, divergence, alpha, f.as_deref(), tol, &output)
        }
        Command::Suite { config, overrides, output } => suite(config.as_deref(), &overrides, &output),
        Command::Preserve { config, overrides, output } => preserve(&config, &overrides, &output),
        Command::Order { a, b, order, tol } => order_cmd(&a, &b, order, tol),
        Command::Mean { a, b, mean, output } => mean_cmd(&a, &b, &mean, &output),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: qdiv_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn read_matrix(path: &Path) -> CliResult<MatrixJson> {
    let text = read(path)?;
    with_path(path, MatrixJson::parse(&text))
}

fn read_psd(path: &Path) -> CliResult<PsdMatrix> {
    with_path(path, read_matrix(path)?.to_psd())
}

fn read_pair(a: &Path, b: &Path) -> CliResult<(PsdMatrix, PsdMatrix)> {
    let (x, y) = (read_psd(a)?, read_psd(b)?);
    same_dim(x.dim(), y.dim())?;
    Ok((x, y))
}

fn same_dim(x: usize, y: usize) -> CliResult<()> {
    if x != y {
        return Err(Error::DimMismatch(x, y).into());
    }
    Ok(())
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ComputeRecord<'a> {
    divergence: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<&'a str>,
    value: ExtendedReal,
}

fn compute(
    a: &Path,
    b: &Path,
    divergence: Divergence,
    alpha: Option<f64>,
    f: Option<&str>,
    tol: Option<f64>,
    output: &OutputArgs,
) -> CliResult<u8> {
    let selector = DivergenceSelector::parse(divergence.name(), alpha, f)?;
    let sched = match tol {
        Some(t) => LimitSchedule::new(defaults::EPS0, defaults::EPS_RATIO, t, defaults::MAX_STEPS)?,
        None => LimitSchedule::default(),
    };
    let (x, y) = read_pair(a, b)?;
    let value = selector.evaluate_with(&x, &y, &sched)?;
    let record = ComputeRecord { divergence: selector.name(), alpha: selector.alpha(), f, value };
    let text = match output.format {
        Format::Json => serde_json::to_string(&record).expect("record serializes"),
        Format::Text => {
            let param = match (record.alpha, record.f) {
                (Some(al), _) => format!(" alpha={al}"),
                (_, Some(name)) => format!(" f={name}"),
                _ => String::new(),
            };
            format!("{}{param} value={value}", record.divergence)
        }
    };
    emit(&text, output.out.as_ref())?;
    Ok(EXIT_OK)
}

fn suite(config: Option<&Path>, o: &Overrides, output: &OutputArgs) -> CliResult<u8> {
    let mut cfg = match config {
        Some(p) => with_path(p, SuiteConfig::parse(&read(p)?))?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    if let Some(d) = o.dim {
        cfg.dim = d;
    }
    if o.tol.is_some() {
        cfg.tol = o.tol;
    }
    let report = run_suites(&cfg)?;
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(&text, output.out.as_ref())?;
    Ok(if report.passed { EXIT_OK } else { EXIT_UNEXPECTED })
}

fn preserve(config: &Path, o: &Overrides, output: &OutputArgs) -> CliResult<u8> {
    let mut cfg = with_path(config, ExperimentConfig::parse(&read(config)?))?;
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    if let Some(d) = o.dim {
        cfg.dim = d;
    }
    if let Some(t) = o.tol {
        cfg.tol = t;
    }
    let report = run_experiment(&cfg)?;
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(&text, output.out.as_ref())?;
    Ok(if report.meets_expectation() { EXIT_OK } else { EXIT_UNEXPECTED })
}

fn order_cmd(a: &Path, b: &Path, order: OrderKind, tol: Option<f64>) -> CliResult<u8> {
    let tol = tol.unwrap_or(defaults::ORDER_TOL);
    if !(tol >= 0.0) {
        return Err(CliError::invalid(format!("tol must be nonnegative, got {tol}")));
    }
    let holds = match order {
        OrderKind::Loewner => {
            let x: HermitianMatrix = with_path(a, read_matrix(a)?.to_hermitian())?;
            let y: HermitianMatrix = with_path(b, read_matrix(b)?.to_hermitian())?;
            same_dim(x.dim(), y.dim())?;
            loewner_leq(&x, &y, tol)?
        }
        OrderKind::Chaotic => {
            let x = with_path(a, read_matrix(a)?.to_pd())?;
            let y = with_path(b, read_matrix(b)?.to_pd())?;
            same_dim(x.dim(), y.dim())?;
            chaotic_leq(&x, &y, tol)?
        }
    };
    println!("{holds}");
    Ok(EXIT_OK)
}

fn mean_cmd(a: &Path, b: &Path, mean: &str, output: &OutputArgs) -> CliResult<u8> {
    let (x, y) = read_pair(a, b)?;
    let m = match mean {
        "log_euclidean" => log_euclidean(&x, &y)?,
        "log_product" => log_product(&x, &y)?,
        other => {
            let h = match other.strip_prefix("kubo:") {
                Some(name) => MeanFunction::parse(name)?,
                None if other == "geometric" => MeanFunction::geometric(),
                None => {
                    return Err(CliError::invalid(format!(
                        "unknown mean `{other}` (expected geometric, log_euclidean, log_product or kubo:<h>)"
                    )))
                }
            };
            kubo_ando_mean_limit(&x, &y, &h, &LimitSchedule::default())?
        }
    };
    let json = MatrixJson::from_matrix(m.matrix());
    let text = match output.format {
        Format::Json => json.to_json(),
        Format::Text => {
            let d = json.dim;
            let rows: Vec<String> = (0..d)
                .map(|i| {
                    json.entries[i * d..(i + 1) * d]
                        .iter()
                        .map(|[re, im]| format!("{re}{im:+}i"))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            rows.join("\n")
        }
    };
    emit(&text, output.out.as_ref())?;
    Ok(EXIT_OK)
}
