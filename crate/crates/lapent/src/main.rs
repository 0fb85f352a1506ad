//! `lapent`: Laplacian-based purity and entanglement checks for bipartite density matrices.
//!
//! Exit codes: 0 success, 1 parse error, 2 validation error, 3 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lapent::matrix_file::{self, emit_decimal, emit_exact};
use lapent::report::{to_json, to_text};
use lapent::sweep::{self, Column, SweepError, SweepSpec};
use lapent_core::corpus::{self, CorpusError, StateName};
use lapent_core::criteria::{classify_with, CriteriaError, DecisionTolerance};
use lapent_core::exact::parse_decimal;
use lapent_core::fmt::{format_decimal, format_rational};
use lapent_core::graph::{graph_from_laplacian, WConvention, DEFAULT_EDGE_THRESHOLD};
use lapent_core::laplacian::laplacian_of_density;
use lapent_core::qstate::{validate_exact, DEFAULT_VALIDATION_TOLERANCE};
use lapent_core::{DensityMatrix, ValidationError};
use num_rational::BigRational;

#[derive(Parser)]
#[command(name = "lapent", version, about = "Laplacian criteria for purity and entanglement of bipartite states")]
struct Cli {
    /// Half-width of the indeterminate band around every inequality.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps: f64,
    /// Reading of the edge functional W[i,j].
    #[arg(long, global = true, value_enum, default_value_t = Convention::ExcludeEndpoints)]
    w_convention: Convention,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    ExcludeEndpoints,
    SetDifference,
}

impl From<Convention> for WConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::ExcludeEndpoints => WConvention::ExcludeEndpoints,
            Convention::SetDifference => WConvention::SetDifference,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the density-matrix axioms for a matrix file.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VALIDATION_TOLERANCE)]
        tol: f64,
    },
    /// Run every criterion and the partial-transpose oracle.
    Classify {
        #[command(flatten)]
        input: Input,
        /// JSON output (the default).
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Plain-text table.
        #[arg(long)]
        text: bool,
    },
    /// Write the Laplacian of a state as a matrix file.
    Laplacian {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the weighted graph of a state's Laplacian as DOT.
    Graph {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Evaluate a parameterized reference state on a grid and write CSV.
    Sweep {
        #[arg(long)]
        state: String,
        /// Name of the swept parameter; checked against the state's parameter.
        #[arg(long)]
        param_name: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        steps: usize,
        /// Comma-separated scalar columns (default: all).
        #[arg(long, value_delimiter = ',')]
        columns: Option<Vec<String>>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List or emit reference states.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Emit {
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Matrix file.
    #[arg(required_unless_present = "state", conflicts_with = "state")]
    file: Option<PathBuf>,
    /// Reference state name (see `corpus list`).
    #[arg(long)]
    state: Option<String>,
    #[arg(long, requires = "state", allow_hyphen_values = true)]
    param: Option<String>,
}

enum Failure {
    Parse(String),
    Invalid(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Usage(_) | Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Invalid(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::ParameterOutOfDomain { .. } | CorpusError::Invalid(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CriteriaError> for Failure {
    fn from(e: CriteriaError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<ValidationError> for Failure {
    fn from(e: ValidationError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol = DecisionTolerance::new(cli.eps)
        .ok_or_else(|| Failure::Usage(format!("--eps must be positive, got {}", cli.eps)))?;
    let conv = WConvention::from(cli.w_convention);
    match cli.command {
        Command::Validate { file, tol: vtol } => validate_cmd(&file, vtol),
        Command::Classify { input, text, .. } => {
            let (rho, id) = load(&input)?;
            let mut report = classify_with(&rho, tol, conv)?;
            report.state_id = id;
            print(&if text { to_text(&report) } else { to_json(&report) })
        }
        Command::Laplacian { input, out } => {
            let (rho, _) = load(&input)?;
            let lap = laplacian_of_density(&rho);
            let body = match lap.exact() {
                Some(exact) => emit_exact(exact, rho.dims()),
                None => emit_decimal(lap.matrix(), rho.dims()),
            };
            write_or_print(out.as_deref(), &body)
        }
        Command::Graph { input, dot } => graph_cmd(&input, dot.as_deref(), conv),
        Command::Sweep { state, param_name, from, to, steps, columns, csv } => {
            let state = state_name(&state)?;
            let domain = corpus::entry(state).parameter;
            if let (Some(given), Some(d)) = (&param_name, &domain) {
                if given != d.name {
                    return Err(Failure::Usage(format!(
                        "state {} is parameterized by {}, not {given}",
                        state.as_str(),
                        d.name
                    )));
                }
            }
            let columns = match columns {
                None => Column::ALL.to_vec(),
                Some(names) => names
                    .iter()
                    .map(|n| Column::parse(n).ok_or_else(|| Failure::Usage(format!("unknown column `{n}`"))))
                    .collect::<Result<_, _>>()?,
            };
            let spec = SweepSpec {
                state,
                from: number(&from, "--from")?,
                to: number(&to, "--to")?,
                steps,
                columns,
                tol,
                convention: conv,
            };
            let result = match &csv {
                Some(path) => {
                    let file = fs::File::create(path)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    sweep::run(&spec, io::BufWriter::new(file))
                }
                None => sweep::run(&spec, io::stdout().lock()),
            };
            match result {
                Ok(_) => Ok(()),
                Err(SweepError::Spec(m)) => Err(Failure::Usage(m)),
                Err(SweepError::Corpus(e)) => Err(e.into()),
                Err(SweepError::Criteria(e)) => Err(e.into()),
                Err(SweepError::Csv(e)) => Err(Failure::Io(e.to_string())),
            }
        }
        Command::Corpus { action: CorpusAction::List } => {
            let mut out = String::new();
            for e in corpus::list() {
                let domain = match &e.parameter {
                    Some(p) => format!("{} in [{}, {}]", p.name, format_rational(&p.lo), format_rational(&p.hi)),
                    None => "-".to_string(),
                };
                out.push_str(&format!("{:<8} {:<5} {:<22} {}\n", e.name.as_str(), e.dims.to_string(), domain, e.provenance));
            }
            print(&out)
        }
        Command::Corpus { action: CorpusAction::Emit { name, param, out } } => {
            let name = state_name(&name)?;
            let param = param.as_deref().map(|p| number(p, "--param")).transpose()?;
            let (m, dims) = corpus::build_exact(name, param.as_ref())?;
            write_or_print(out.as_deref(), &emit_exact(&m, dims))
        }
    }
}

fn validate_cmd(file: &Path, tol: f64) -> Result<(), Failure> {
    let parsed = read_matrix(file)?;
    match validate_exact(&parsed.matrix, parsed.dims, tol) {
        Ok(rho) => {
            let r = rho.purity_report();
            print(&format!(
                "VALID\npurity {}\nlinear_entropy {}\nrank {}\n",
                format_decimal(r.purity),
                format_decimal(r.linear_entropy),
                r.rank
            ))
        }
        Err(e) => {
            let mut out = String::from("INVALID\n");
            for v in &e.violations {
                out.push_str(&format!("{v}\n"));
            }
            print(&out)?;
            Err(Failure::Invalid(e.to_string()))
        }
    }
}

fn graph_cmd(input: &Input, dot: Option<&Path>, conv: WConvention) -> Result<(), Failure> {
    let (rho, _) = load(input)?;
    let lap = laplacian_of_density(&rho);
    let g = graph_from_laplacian(&lap, DEFAULT_EDGE_THRESHOLD);
    let max_w = g.max_w_with(conv).map(format_decimal).unwrap_or_else(|_| "n/a".into());
    let summary = [
        format!("edges {}", g.edges().len()),
        format!("d_G {}", format_decimal(g.total_degree())),
        (if g.is_connected() { "connected" } else { "disconnected" }).to_string(),
        format!("max_W {max_w}"),
    ];
    match dot {
        Some(path) => {
            fs::write(path, g.export_dot()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            print(&(summary.join("\n") + "\n"))
        }
        None => {
            let mut out: String = summary.iter().map(|l| format!("// {l}\n")).collect();
            out.push_str(&g.export_dot());
            print(&out)
        }
    }
}

fn state_name(s: &str) -> Result<StateName, Failure> {
    s.parse::<StateName>().map_err(|e: CorpusError| Failure::Usage(e.to_string()))
}

fn number(s: &str, flag: &str) -> Result<BigRational, Failure> {
    parse_decimal(s).ok_or_else(|| Failure::Usage(format!("{flag}: `{s}` is not a decimal number")))
}

fn read_matrix(path: &Path) -> Result<matrix_file::MatrixFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    matrix_file::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

/// The validated state and its report label.
fn load(input: &Input) -> Result<(DensityMatrix, String), Failure> {
    if let Some(path) = &input.file {
        let parsed = read_matrix(path)?;
        let rho = validate_exact(&parsed.matrix, parsed.dims, DEFAULT_VALIDATION_TOLERANCE)?;
        let id = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        return Ok((rho, id));
    }
    let name = state_name(input.state.as_deref().expect("clap requires a file or --state"))?;
    let param = input.param.as_deref().map(|p| number(p, "--param")).transpose()?;
    let rho = corpus::build(name, param.as_ref())?;
    let id = match (&input.param, corpus::entry(name).parameter) {
        (Some(p), Some(d)) => format!("{}({}={p})", name.as_str(), d.name),
        _ => name.as_str().to_string(),
    };
    Ok((rho, id))
}

fn print(s: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    out.write_all(s.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Io(e.to_string()))
}

fn write_or_print(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => print(body),
    }
}
