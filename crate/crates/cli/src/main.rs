use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monoidlab::monoid::MAX_N_ENV;
use monoidlab::pipeline;
use monoidlab::{Error, MonoidKind, PrimeField, Report, DEFAULT_PRIME};
use serde::Serialize;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "monoidlab", version, about = "Representation theory of monoids of monotone maps over F_p")]
#[command(after_help = format!(
    "Size caps: n <= 8 for `sizes`, n <= 6 elsewhere. Setting {MAX_N_ENV} raises them; large values can exhaust memory."
))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Element counts of Op_n, OD_n, COD_n and the identities between them.
    Sizes(Common),
    /// Eggbox diagram of the J-class of rank k.
    Eggbox {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
    },
    /// Sandwich matrix of J_k with a right-inverse certificate.
    Sandwich {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
    },
    /// dim Hom(kL_Y, kL_X) against |H~_{Y,X}| for all Y, X in P_1([n]).
    Homdims(Common),
    /// Composition relations among rho, delta and the eps/Delta basis.
    Relations(Common),
    /// Quiver of the skeleton algebra (od: A_n, cod: CA_n, op: skeletal k0D_n).
    Quiver(Common),
    /// Decomposition kCOD_n = kOp_n x kOp_n through the category D_n.
    CodDecompose(Common),
    /// Every check for the given monoid and n; exits 1 on any failure.
    VerifyAll(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Sizes(c)
            | Command::Homdims(c)
            | Command::Relations(c)
            | Command::Quiver(c)
            | Command::CodDecompose(c)
            | Command::VerifyAll(c)
            | Command::Eggbox { common: c, .. }
            | Command::Sandwich { common: c, .. } => c,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MonoidArg {
    Op,
    Od,
    Cod,
}

impl From<MonoidArg> for MonoidKind {
    fn from(m: MonoidArg) -> Self {
        match m {
            MonoidArg::Op => MonoidKind::Op,
            MonoidArg::Od => MonoidKind::OD,
            MonoidArg::Cod => MonoidKind::COD,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum)]
    monoid: Option<MonoidArg>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the product decomposition above n = 5.
    #[arg(long)]
    extended: bool,
    /// Progress and timing on stderr; repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

/// A rendered result and whether every check in it passed.
struct Outcome {
    body: String,
    passed: bool,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String, passed: bool) -> Outcome {
    let body = match format {
        Format::Json => json(value),
        _ => text(),
    };
    Outcome { body, passed }
}

fn report_outcome(format: Format, report: &Report) -> Outcome {
    render(format, report, || report.to_string(), report.passed())
}

enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

fn is_usage_error(e: &Error) -> bool {
    !matches!(e, Error::Structure(_))
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    let common = command.common();
    if common.format == Format::Dot && !matches!(command, Command::Quiver(_)) {
        return Err(Failure::Usage("--format dot is only available for `quiver`".into()));
    }
    let default_kind = if matches!(command, Command::CodDecompose(_)) { MonoidArg::Cod } else { MonoidArg::Od };
    let kind: MonoidKind = common.monoid.unwrap_or(default_kind).into();
    let n = common.n;
    let field = PrimeField::new(common.prime)?;
    let fmt = common.format;
    Ok(match command {
        Command::Sizes(_) => {
            let s = pipeline::sizes(kind, n)?;
            render(fmt, &s, || s.to_text(), s.report.passed())
        }
        Command::Eggbox { k, .. } => {
            let v = pipeline::eggbox_view(kind, n, *k)?;
            render(fmt, &v, || v.to_text(), true)
        }
        Command::Sandwich { k, .. } => {
            let s = pipeline::sandwich(kind, n, *k, field)?;
            render(fmt, &s, || s.to_text(), s.report.passed())
        }
        Command::Homdims(_) => {
            let t = pipeline::homdims(kind, n, field)?;
            let passed = t.mismatches().next().is_none();
            render(fmt, &t, || t.to_text(), passed)
        }
        Command::Relations(_) => report_outcome(fmt, &pipeline::relations(kind, n, field)?),
        Command::Quiver(_) => {
            let q = pipeline::quiver(kind, n, field)?;
            let passed = q.report.passed();
            match fmt {
                Format::Dot => Outcome { body: q.to_dot(), passed },
                _ => render(fmt, &q, || q.to_text(), passed),
            }
        }
        Command::CodDecompose(_) => {
            if kind != MonoidKind::COD {
                return Err(Failure::Usage("cod-decompose only applies to --monoid cod".into()));
            }
            let d = pipeline::cod_decompose(n, field, common.extended)?;
            render(fmt, &d, || d.to_text(), d.report.passed())
        }
        Command::VerifyAll(_) => {
            let r = pipeline::verify_all(kind, n, field, common.extended)?;
            render(fmt, &r, || format!("{r}{}\n", if r.passed() { "PASS" } else { "FAIL" }), r.passed())
        }
    })
}

fn emit(out: Option<&PathBuf>, body: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let (out, verbose) = (cli.command.common().out.clone(), cli.command.common().verbose);
    let start = Instant::now();
    let result = run(&cli.command);
    match &result {
        Ok(outcome) => {
            if let Err(e) = emit(out.as_ref(), &outcome.body) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            if verbose > 0 {
                eprintln!("finished in {:.3}s", start.elapsed().as_secs_f64());
            }
            if !outcome.passed {
                eprintln!("some checks failed");
            }
        }
        Err(Failure::Usage(msg)) => eprintln!("error: {msg}"),
        Err(Failure::Library(e)) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_status(&result))
}

fn exit_status(result: &Result<Outcome, Failure>) -> u8 {
    match result {
        Ok(o) if o.passed => 0,
        Ok(_) => EXIT_VIOLATION,
        Err(Failure::Usage(_)) => EXIT_USAGE,
        Err(Failure::Library(e)) if is_usage_error(e) => EXIT_USAGE,
        Err(Failure::Library(_)) => EXIT_VIOLATION,
    }
}
