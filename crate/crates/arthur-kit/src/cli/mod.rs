//! Command-line front end. Every verb reads one parameter file and writes JSON, or an
//! aligned text view of the same JSON with `--format table`.

mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

pub use suites::{run_suite, select, SuiteOutcome, SUITES};

use crate::component_group::{CentralizerDescriptor, Character, SignVector, Which};
use crate::endoscopy::{decompose, product_character, transfer_coefficients};
use crate::error::{Error, Result};
use crate::groth_engine::{AtomLevel, Config, Convention, Engine};
use crate::packet_enum::{packet, Level};
use crate::param_core::{block_to_value, fmt_rat, parameter_to_value, parse_parameter, parse_signs, ArthurParameter};

/// Exit status for a run that completed and whose checks passed.
pub const EXIT_OK: i32 = 0;
/// Exit status when a verification suite found a failure.
pub const EXIT_FAILED: i32 = 1;
/// Exit status for unreadable or invalid input.
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Parser, Debug)]
#[command(
    name = "arthur-kit",
    version,
    about = "Arthur packet combinatorics for classical and similitude groups"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parity, temperedness, discreteness and diagonal restriction of a parameter.
    Classify { input: PathBuf },
    /// Component groups, the twist map and its kernel.
    Centralizer { input: PathBuf },
    /// Packet members with their characters and twists.
    Packet {
        input: PathBuf,
        #[arg(long, default_value = "sigma0")]
        level: String,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
    },
    /// Expansion of a packet into induced and Jacquet terms.
    Expand {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        /// Perform only the first step, along the block declared at this index.
        #[arg(long)]
        block: Option<usize>,
        #[arg(long, default_value = "similitude")]
        level: String,
    },
    /// Endoscopic factors attached to signs on the block copies.
    Endoscopy {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
        #[arg(long, default_value = "sigma0")]
        level: String,
    },
    /// Multiplicity of a packet member in the discrete spectrum.
    Multiplicity {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        #[arg(long = "eps-psi", allow_hyphen_values = true)]
        eps_psi: Option<String>,
        #[arg(long = "m-psi", default_value_t = 1)]
        m_psi: u32,
        #[arg(long, default_value = "sigma0")]
        level: String,
    },
    /// Run verification suites over parameter files or directories of them.
    Verify {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Invalid(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Invalid(e)
    }
}

fn error_value(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

/// Run with `args` (program name first), writing to standard output.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(args, &mut lock)
}

/// Run with `args`, writing the output to `out`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            emit(out, Format::Json, &error_value("Usage", first));
            return EXIT_INVALID;
        }
    };
    match dispatch(&cli.command) {
        Ok((value, code)) => {
            emit(out, cli.format, &value);
            code
        }
        Err(Failure::Invalid(e)) => {
            emit(out, Format::Json, &error_value(e.kind(), &e.to_string()));
            EXIT_INVALID
        }
        Err(Failure::Io(msg)) => {
            emit(out, Format::Json, &error_value("Io", &msg));
            EXIT_INVALID
        }
    }
}

fn emit(out: &mut dyn Write, format: Format, value: &Value) {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("values serialize"),
        Format::Table => render_table(value),
    };
    let _ = writeln!(out, "{}", text.trim_end());
}

fn read_parameter(path: &Path) -> std::result::Result<ArthurParameter, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_parameter(&text)?)
}

fn signs(s: &str) -> Result<SignVector> {
    Ok(SignVector::from_signs(&parse_signs(s)?))
}

fn character(psi: &ArthurParameter, s: &str) -> Result<Character> {
    let eps = signs(s)?;
    CentralizerDescriptor::build(psi)?.check_character(&eps)?;
    Ok(eps)
}

fn engine_level(s: &str) -> Result<AtomLevel> {
    Ok(if Level::parse(s)?.is_similitude() {
        AtomLevel::Similitude
    } else {
        AtomLevel::Classical
    })
}

fn dispatch(cmd: &Command) -> std::result::Result<(Value, i32), Failure> {
    let value = match cmd {
        Command::Classify { input } => classify(&read_parameter(input)?),
        Command::Centralizer { input } => centralizer(&read_parameter(input)?)?,
        Command::Packet { input, level, epsilon } => {
            let psi = read_parameter(input)?;
            let eps = epsilon.as_deref().map(signs).transpose()?;
            packet(&psi, Level::parse(level)?, eps.as_ref())?.to_value()
        }
        Command::Expand {
            input,
            epsilon,
            block,
            level,
        } => {
            let psi = read_parameter(input)?;
            expand(&psi, epsilon, *block, engine_level(level)?)?
        }
        Command::Endoscopy {
            input,
            s,
            epsilon,
            level,
        } => {
            let psi = read_parameter(input)?;
            endoscopy(&psi, s, epsilon.as_deref(), Level::parse(level)?)?
        }
        Command::Multiplicity {
            input,
            epsilon,
            eps_psi,
            m_psi,
            level,
        } => {
            let psi = read_parameter(input)?;
            let desc = CentralizerDescriptor::build(&psi)?;
            let pi = character(&psi, epsilon)?;
            let eps_psi = match eps_psi {
                Some(e) => character(&psi, e)?,
                None => SignVector::trivial(desc.k()),
            };
            let which = if Level::parse(level)? == Level::Classical {
                Which::S
            } else {
                Which::SSigma0
            };
            let m = desc.multiplicity(&pi, &eps_psi, *m_psi, which)?;
            json!({ "epsilon": pi, "epsilon_psi": eps_psi, "m_psi": m_psi, "multiplicity": m })
        }
        Command::Verify { inputs, suite } => return verify(inputs, suite),
    };
    Ok((value, EXIT_OK))
}

/// Classification, block data and infinitesimal character of `psi`.
pub fn classify(psi: &ArthurParameter) -> Value {
    let ic = psi.inf_char();
    let mut inf = Map::new();
    for rho in psi.rho_names() {
        inf.insert(
            rho.clone(),
            Value::from(ic.exponents(&rho).iter().map(fmt_rat).collect::<Vec<_>>()),
        );
    }
    json!({
        "parameter": parameter_to_value(psi),
        "classification": psi.classify(),
        "inf_char": inf,
    })
}

/// Component group summary of `psi`.
pub fn centralizer(psi: &ArthurParameter) -> Result<Value> {
    let d = CentralizerDescriptor::build(psi)?;
    let x: Vec<String> = d.x_group().iter().map(|t| t.to_string()).collect();
    let ker = d.ker_alpha();
    Ok(json!({
        "blocks": d.blocks.iter().map(|(b, m)| block_to_value(b, *m)).collect::<Vec<_>>(),
        "k": d.k(),
        "s0": SignVector::new(d.s0, d.k()),
        "s_psi": d.s_psi(),
        "order_S_Sigma0": d.order(Which::SSigma0),
        "order_S": d.order(Which::S),
        "ker_alpha": ker,
        "order_ker_alpha": ker.len(),
        "X": x,
        "order_X": x.len(),
        "characters": d.characters(Which::SSigma0),
    }))
}

fn expand(psi: &ArthurParameter, epsilon: &str, block: Option<usize>, level: AtomLevel) -> Result<Value> {
    let eps = character(psi, epsilon)?;
    let convention = Convention::from_env()?;
    let mut e = Engine::new(Config {
        convention,
        ..Config::at(level)
    });
    let atom = e.atom_of(psi, &eps)?;
    let sum = match block {
        Some(i) => {
            let j = Engine::atom_index(psi, &atom, i)?;
            e.expand_step(&atom, j)?
        }
        None => e.expand_full(&atom)?,
    };
    Ok(json!({
        "convention": convention.id(),
        "level": level,
        "atom": atom.to_value(),
        "terms": sum.to_value(),
    }))
}

fn endoscopy(psi: &ArthurParameter, s: &str, epsilon: Option<&str>, level: Level) -> Result<Value> {
    let s = signs(s)?;
    let (one, two, datum) = decompose(psi, &s)?;
    let mut v = json!({
        "psi_I": parameter_to_value(&one),
        "psi_II": parameter_to_value(&two),
        "datum": datum.to_value(),
        "transfer": transfer_coefficients(psi, &s, level)?
            .into_iter()
            .map(|(l, c)| {
                let mut x = l.to_value();
                x["coefficient"] = json!(c);
                x
            })
            .collect::<Vec<_>>(),
    });
    if let Some(e) = epsilon {
        let eps = character(psi, e)?;
        let (e1, e2) = product_character(&eps, &datum, psi)?;
        v["epsilon_I"] = json!(e1);
        v["epsilon_II"] = json!(e2);
    }
    Ok(v)
}

/// Files named on the command line, with directories replaced by their `*.json` files.
fn collect_inputs(inputs: &[PathBuf]) -> std::result::Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let rd = std::fs::read_dir(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            let mut found: Vec<PathBuf> = rd
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|q| q.extension().is_some_and(|x| x == "json"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn verify(inputs: &[PathBuf], suite: &str) -> std::result::Result<(Value, i32), Failure> {
    let names = select(suite).ok_or_else(|| Error::Schema(format!("unknown suite {suite:?}")))?;
    let convention = Convention::from_env()?;
    let mut results = Vec::new();
    let mut passed = true;
    let mut common: Option<Vec<Value>> = None;
    for file in collect_inputs(inputs)? {
        let psi = read_parameter(&file)?;
        for name in &names {
            let r = run_suite(name, &psi, convention)?;
            passed &= r.passed;
            if let Some(p) = r.extra.get("passing_conventions").and_then(Value::as_array) {
                common = Some(match common {
                    None => p.clone(),
                    Some(c) => c.into_iter().filter(|x| p.contains(x)).collect(),
                });
            }
            let mut v = r.to_value();
            v["parameter"] = json!(file.display().to_string());
            results.push(v);
        }
    }
    let mut report = json!({ "convention": convention.id(), "results": results });
    if let Some(c) = common {
        let unique = c.len() == 1 && c[0] == json!(convention.id());
        passed &= unique;
        report["conventions_passing_everywhere"] = Value::Array(c);
    }
    report["passed"] = json!(passed);
    Ok((report, if passed { EXIT_OK } else { EXIT_FAILED }))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn is_record_list(v: &Value) -> bool {
    matches!(v, Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object))
}

fn table_of(rows: &[Value]) -> String {
    let mut columns: Vec<String> = Vec::new();
    for r in rows {
        for k in r.as_object().expect("checked").keys() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| columns.iter().map(|c| cell(&r[c])).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain([c.chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |xs: &[String]| {
        xs.iter()
            .zip(&widths)
            .map(|(x, w)| format!("{x:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(&columns)];
    out.push(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    out.extend(cells.iter().map(|r| line(r)));
    out.join("\n")
}

/// Aligned text view: scalar fields as `key  value`, lists of records as tables.
pub fn render_table(v: &Value) -> String {
    match v {
        Value::Object(m) => {
            let scalars: Vec<(&String, &Value)> = m.iter().filter(|(_, x)| !is_record_list(x)).collect();
            let width = scalars.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            let mut parts: Vec<String> = scalars
                .iter()
                .map(|(k, x)| format!("{k:<width$}  {}", cell(x)))
                .collect();
            for (k, x) in m.iter().filter(|(_, x)| is_record_list(x)) {
                parts.push(String::new());
                parts.push(format!("{k}:"));
                parts.push(table_of(x.as_array().expect("checked")));
            }
            parts.join("\n")
        }
        Value::Array(a) if is_record_list(v) => table_of(a),
        other => cell(other),
    }
}
