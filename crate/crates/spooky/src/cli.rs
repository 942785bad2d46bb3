//! Command-line surface. `run` does all the work and writes to the given
//! sink, so tests can drive it without spawning a process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use spooky_core::gpt::{
    find_common_sharp_state, is_proposition, reduce_to_two, ConvexStateSpace, Proposition,
};
use spooky_core::hvt::deterministic_local_model;
use spooky_core::quantum::born_table;
use spooky_core::steering::{
    table_to_steering_quantum_with_tol, table_to_steering_tabular_with_tol, SweepFamily,
};
use spooky_core::{Error, EPS};

use crate::error::CliError;
use crate::formats::{
    parse_json, read_json, to_json, BehaviorDoc, CertificateDoc, ModelDoc, PropositionsDoc,
    ScenarioDoc, TableDoc, TheoryDoc,
};
use crate::{figure, report, sweep};

pub const MIN_TOLERANCE: f64 = 1e-14;
pub const MAX_TOLERANCE: f64 = 1e-3;

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if !(MIN_TOLERANCE..=MAX_TOLERANCE).contains(&v) {
        return Err(format!("tolerance must lie in [1e-14, 1e-3], got {v}"));
    }
    Ok(v)
}

#[derive(Debug, Parser)]
#[command(
    name = "spooky",
    version,
    about = "Checks tables, hidden-variable models, steering and complementarity"
)]
pub struct RunConfig {
    /// Comparison tolerance for probabilities.
    #[arg(long, global = true, env = "SPOOKY_TOLERANCE", value_parser = parse_tolerance)]
    pub tolerance: Option<f64>,

    /// Write the JSON or CSV artifact (or the report) here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Haar,
    Product,
    Aligned,
    Mixed,
}

impl From<Family> for SweepFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Haar => SweepFamily::Haar,
            Family::Product => SweepFamily::Product,
            Family::Aligned => SweepFamily::MaxEntangledAligned,
            Family::Mixed => SweepFamily::Mixed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Determinant, factorization and verdict for a table.
    SpookyCheck { input: PathBuf },
    /// Steering certificate and trace from a table or a quantum scenario.
    Steer { input: PathBuf },
    /// Independence predicates and significance of a hidden-variable model.
    HvtCheck {
        model: PathBuf,
        /// Behavior the model should reproduce.
        #[arg(long)]
        behavior: Option<PathBuf>,
    },
    /// Deterministic local model of a table, as model JSON.
    LocalModel { input: PathBuf },
    /// Complementarity of propositions in a polytopal theory.
    Complementarity {
        #[arg(long)]
        theory: PathBuf,
        #[arg(required = true)]
        props: Vec<PathBuf>,
    },
    /// Reduce a family without a common sharp state to a complementary pair.
    Reduce {
        #[arg(long)]
        theory: PathBuf,
        #[arg(required = true)]
        props: Vec<PathBuf>,
    },
    /// Report on the three built-in cat scenarios.
    Cat,
    /// CSV of the factorization residual over a grid of the tetrahedron.
    Figure {
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(2..=1000))]
        grid: u64,
    },
    /// Check on random two-qubit scenarios that the three conditions agree.
    Sweep {
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..=sweep::MAX_SAMPLES))]
        samples: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Family::Haar)]
        family: Family,
    },
}

impl RunConfig {
    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(EPS)
    }

    /// Writes `report` to stdout and `artifact` to `--out`, or both to
    /// stdout when no path is given. Without an artifact the report itself
    /// goes to `--out`.
    fn emit(
        &self,
        out: &mut dyn Write,
        report: &str,
        artifact: Option<&str>,
    ) -> Result<(), CliError> {
        match (&self.out, artifact) {
            (Some(path), Some(a)) => {
                out.write_all(report.as_bytes())?;
                write_file(path, a)
            }
            (Some(path), None) => write_file(path, report),
            (None, a) => {
                out.write_all(report.as_bytes())?;
                if let Some(a) = a {
                    out.write_all(a.as_bytes())?;
                }
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn read_propositions(
    space: &ConvexStateSpace,
    paths: &[PathBuf],
) -> Result<Vec<Proposition>, CliError> {
    let mut props = Vec::new();
    for p in paths {
        let doc: PropositionsDoc = read_json(p)?;
        props.extend(doc.resolve(space)?);
    }
    Ok(props)
}

fn read_theory(path: &Path, eps: f64) -> Result<ConvexStateSpace, CliError> {
    Ok(read_json::<TheoryDoc>(path)?.0.with_tolerance(eps))
}

pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let eps = config.tolerance();
    match &config.command {
        Command::SpookyCheck { input } => {
            let t = read_json::<TableDoc>(input)?.0;
            config.emit(out, &report::spooky_check(&t, eps), None)
        }
        Command::Steer { input } => steer(config, input, out),
        Command::HvtCheck { model, behavior } => {
            let m = read_json::<ModelDoc>(model)?.0;
            let b = behavior
                .as_deref()
                .map(read_json::<BehaviorDoc>)
                .transpose()?
                .map(|d| d.0);
            config.emit(out, &report::hvt_check(&m, b.as_ref(), eps), None)
        }
        Command::LocalModel { input } => {
            let t = read_json::<TableDoc>(input)?.0;
            let json = to_json(&ModelDoc(deterministic_local_model(&t)));
            config.emit(out, "", Some(&json))
        }
        Command::Complementarity { theory, props } => {
            let space = read_theory(theory, eps)?;
            let props = read_propositions(&space, props)?;
            config.emit(out, &complementarity(&space, &props)?, None)
        }
        Command::Reduce { theory, props } => {
            let space = read_theory(theory, eps)?;
            let props = read_propositions(&space, props)?;
            let r = reduce_to_two(&space, &props)?;
            let pair = PropositionsDoc::from_propositions(&[r.averaged.clone(), r.other.clone()]);
            config.emit(
                out,
                &report::reduction(&r, props.len()),
                Some(&to_json(&pair)),
            )
        }
        Command::Cat => config.emit(out, &report::cat(eps)?, None),
        Command::Figure { grid } => {
            let points = figure::figure_points(*grid as usize)?;
            let mut buf = Vec::new();
            figure::write_csv(&points, &mut buf)?;
            let csv = String::from_utf8(buf).expect("csv output is ASCII");
            config.emit(out, "", Some(&csv))
        }
        Command::Sweep {
            samples,
            seed,
            family,
        } => {
            let r = sweep::parallel_sweep(*samples, *seed, (*family).into())?;
            config.emit(out, &report::sweep(&r), None)?;
            if r.divergences.is_empty() {
                Ok(())
            } else {
                Err(CliError::Divergence(r.divergences.len()))
            }
        }
    }
}

fn steer(config: &RunConfig, input: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let eps = config.tolerance();
    let text = read_text(input)?;
    let value: serde_json::Value = parse_json(input, &text)?;
    let (trace, cert) = if value.get("table").is_some() {
        let t = parse_json::<TableDoc>(input, &text)?.0;
        let c = table_to_steering_tabular_with_tol(&t, eps)?;
        (
            report::vector_trace(&c, t.purity(), eps),
            CertificateDoc::new(&c),
        )
    } else {
        let s = parse_json::<ScenarioDoc>(input, &text)?.0;
        let c = table_to_steering_quantum_with_tol(&s, eps)?;
        let p = born_table(&s)?.purity();
        (report::matrix_trace(&c, p, eps), CertificateDoc::new(&c))
    };
    config.emit(out, &trace, Some(&to_json(&cert)))
}

fn complementarity(space: &ConvexStateSpace, props: &[Proposition]) -> Result<String, CliError> {
    use std::fmt::Write as _;
    let mut s = String::new();
    writeln!(
        s,
        "theory: dimension {}, {} vertices",
        space.dim(),
        space.vertices().len()
    )
    .unwrap();
    for (i, p) in props.iter().enumerate() {
        match is_proposition(space, p.effects())? {
            Some((w0, w1)) => writeln!(
                s,
                "proposition {i}: {}; sharp states {} and {}",
                report::proposition(p),
                report::state_vector(&w0),
                report::state_vector(&w1)
            )
            .unwrap(),
            None => {
                return Err(Error::Validation(format!(
                    "test {i} is not a proposition: no state makes one of its outcomes certain"
                ))
                .into())
            }
        }
    }
    let witness = find_common_sharp_state(space, props)?;
    if props.len() == 2 {
        writeln!(
            s,
            "complementary: {}",
            if witness.is_none() { "yes" } else { "no" }
        )
        .unwrap();
    }
    writeln!(
        s,
        "common sharp state: {}",
        report::sharp_witness(witness.as_ref())
    )
    .unwrap();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("spooky").chain(args.iter().copied())).unwrap()
    }

    fn run_to_string(args: &[&str]) -> Result<String, CliError> {
        let mut buf = Vec::new();
        run(&config(args), &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn tolerance_range() {
        assert!(parse_tolerance("1e-9").is_ok());
        assert!(parse_tolerance("1e-15").is_err());
        assert!(parse_tolerance("0.01").is_err());
        assert!(parse_tolerance("abc").is_err());
        assert!(RunConfig::try_parse_from(["spooky", "--tolerance", "1", "cat"]).is_err());
    }

    #[test]
    fn sample_bounds() {
        assert!(RunConfig::try_parse_from(["spooky", "sweep", "--samples", "0"]).is_err());
        assert!(RunConfig::try_parse_from(["spooky", "sweep", "--samples", "1000001"]).is_err());
    }

    #[test]
    fn cat_runs() {
        let text = run_to_string(&["cat"]).unwrap();
        assert!(text.contains("v3:"));
    }

    #[test]
    fn figure_to_stdout() {
        let text = run_to_string(&["figure", "--grid", "4"]).unwrap();
        assert!(text.starts_with("p00,p01,p10,residual\n"));
    }

    #[test]
    fn sweep_reports_no_divergences() {
        let text = run_to_string(&["sweep", "--samples", "30", "--seed", "3"]).unwrap();
        assert!(text.contains("0 divergences"), "{text}");
    }

    #[test]
    fn missing_input_is_exit_two() {
        let err = run_to_string(&["spooky-check", "/nonexistent/table.json"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
