//! `localeps`: root numbers of characters of unramified p-adic fields.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use localeps::spec::{auto_precision, parse_character, parse_family, spec_depth};
use localeps::suites::{self, SuiteConfig, TableRow};
use localeps::verify::{describe, Report, WRecord};
use localeps::{Backend, Error, UnramifiedField};

#[derive(Parser)]
#[command(
    name = "localeps",
    version,
    about = "Exact local root numbers W(χ) over unramified p-adic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// W, W*, ι and the three-factor decomposition of one or more characters.
    W {
        #[command(flatten)]
        common: Common,
        /// Character spec, e.g. "alpha=1/9;tame=1;onp=4:1". Repeatable.
        #[arg(long = "char", required = true)]
        chars: Vec<String>,
    },
    /// Run a named verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite name, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest conductor exponent for suites that sweep n.
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long, value_enum, default_value_t = BackendArg::Oracle)]
        backend: BackendArg,
        /// Record wall-clock time per case.
        #[arg(long)]
        timing: bool,
    },
    /// Sweep a family such as "alpha=a/p^2" into a table.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value_t = BackendArg::Oracle)]
        backend: BackendArg,
        /// Refuse families with more rows than this.
        #[arg(long, default_value_t = 10_000)]
        max_rows: usize,
    },
}

#[derive(Args)]
struct Common {
    /// The prime p (a comma-separated list for verify).
    #[arg(long = "p", value_delimiter = ',')]
    primes: Vec<u64>,
    /// Residue degree.
    #[arg(long, default_value_t = 1)]
    f: usize,
    /// Working precision N, or "auto".
    #[arg(long, default_value = "auto")]
    prec: String,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for sampled grids.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Oracle,
    Closed,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Oracle => Backend::Oracle,
            BackendArg::Closed => Backend::Closed,
        }
    }
}

enum Failure {
    Usage(String),
    Precision(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precision(_) => Failure::Precision(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = Result<bool, Failure>;

impl Common {
    fn setup(&self) -> Result<Box<dyn Write>, Failure> {
        if let Some(j) = self.jobs {
            rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build_global()
                .map_err(|e| Failure::Usage(e.to_string()))?;
        }
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn single_prime(&self) -> Result<u64, Failure> {
        match self.primes.as_slice() {
            [p] => Ok(*p),
            [] => Err(Failure::Usage("--p is required".into())),
            _ => Err(Failure::Usage("this command takes a single prime".into())),
        }
    }

    fn precision(&self, depth: u32) -> Result<Option<u32>, Failure> {
        if self.prec == "auto" {
            return Ok(None);
        }
        let n: u32 = self.prec.parse().map_err(|_| {
            Failure::Usage(format!(
                "--prec must be a number or auto, got {:?}",
                self.prec
            ))
        })?;
        if n <= depth {
            return Err(Failure::Precision(format!(
                "--prec {n} is too small for conductor exponent {depth}"
            )));
        }
        Ok(Some(n))
    }

    fn field(&self, depth: u32) -> Result<Arc<UnramifiedField>, Failure> {
        let p = self.single_prime()?;
        let n = self
            .precision(depth)?
            .unwrap_or_else(|| auto_precision(depth));
        Ok(UnramifiedField::new(p, self.f, n)?)
    }
}

fn cmd_w(common: &Common, chars: &[String]) -> Outcome {
    let p = common.single_prime()?;
    let depth = chars
        .iter()
        .map(|c| spec_depth(c, p))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let fld = common.field(depth)?;
    let mut out = common.setup()?;
    let records: Vec<WRecord> = chars
        .iter()
        .map(|c| describe(&parse_character(&fld, c)?))
        .collect::<Result<_, _>>()?;
    let opt = |x: Option<localeps::RootOfUnity>| x.map_or("-".to_string(), |r| r.to_string());
    match common.format {
        Format::Json => {
            for r in &records {
                serde_json::to_writer(&mut out, r)?;
                writeln!(out)?;
            }
        }
        Format::Tsv => {
            writeln!(
                out,
                "char\tconductor\torder\tW\tW*\tiota\tclosed\tagree\ttame\tG\tW_p"
            )?;
            for r in &records {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.character,
                    r.conductor,
                    r.order,
                    r.w,
                    r.w_star,
                    r.iota,
                    r.closed.as_ref().map_or("-".to_string(), |c| c.to_string()),
                    r.agree.map_or("-".to_string(), |a| a.to_string()),
                    opt(r.tame),
                    opt(r.g),
                    opt(r.w_p),
                )?;
            }
        }
        Format::Pretty => {
            for r in &records {
                writeln!(
                    out,
                    "character  {}  (p = {}, f = {}, N = {})",
                    r.character, r.p, r.f, r.prec
                )?;
                writeln!(out, "  conductor  {}", r.conductor)?;
                writeln!(out, "  order      {}", r.order)?;
                writeln!(out, "  W          {}", r.w)?;
                writeln!(out, "  W*         {}", r.w_star)?;
                writeln!(out, "  iota       {}", r.iota)?;
                if let Some(c) = &r.closed {
                    let mark = if r.agree == Some(true) {
                        "agrees"
                    } else {
                        "DISAGREES"
                    };
                    writeln!(out, "  closed     {c}  ({mark})")?;
                    writeln!(out, "  tame       {}", opt(r.tame))?;
                    writeln!(out, "  G          {}", opt(r.g))?;
                }
                writeln!(out, "  W_{}        {}", r.p, opt(r.w_p))?;
            }
        }
    }
    out.flush()?;
    Ok(records.iter().all(|r| r.agree != Some(false)))
}

fn cmd_verify(
    common: &Common,
    suite: &str,
    max_n: Option<u32>,
    backend: Backend,
    timing: bool,
) -> Outcome {
    let cfg = SuiteConfig {
        primes: (!common.primes.is_empty()).then(|| common.primes.clone()),
        f: common.f,
        prec: common.precision(max_n.unwrap_or(0))?,
        max_n,
        seed: common.seed,
        backend,
        timing,
        ..SuiteConfig::default()
    };
    let mut out = common.setup()?;
    let reports: Vec<Report> = suites::run(suite, &cfg)?;
    if let Format::Tsv = common.format {
        writeln!(out, "identity\tparams\tlhs\trhs\tequal")?;
    }
    for r in &reports {
        let side = |s: &Option<localeps::verify::Side>| {
            s.as_ref().map_or("-".to_string(), |x| x.to_string())
        };
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        match common.format {
            Format::Json => {
                serde_json::to_writer(&mut out, r)?;
                writeln!(out)?;
            }
            Format::Tsv => writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.identity,
                params,
                side(&r.lhs),
                side(&r.rhs),
                r.equal
            )?,
            Format::Pretty => {
                let status = if r.equal { "PASS" } else { "FAIL" };
                write!(out, "{status} {:<14} {params}", r.identity)?;
                if r.lhs.is_some() || r.rhs.is_some() {
                    write!(out, "  {} = {}", side(&r.lhs), side(&r.rhs))?;
                }
                if let Some(t) = r.timing {
                    write!(out, "  [{t:.3}s]")?;
                }
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    let failed = reports.iter().filter(|r| !r.equal).count();
    eprintln!("{suite}: {} cases, {failed} failed", reports.len());
    Ok(failed == 0)
}

fn cmd_table(common: &Common, family: &str, backend: Backend, max_rows: usize) -> Outcome {
    let p = common.single_prime()?;
    let fld = common.field(spec_depth(family, p)?)?;
    let members = parse_family(&fld, family)?;
    if members.len() > max_rows {
        return Err(Failure::Usage(format!(
            "family has {} rows; raise --max-rows to allow it",
            members.len()
        )));
    }
    let mut out = common.setup()?;
    let rows: Vec<TableRow> = suites::table(&members, backend)?;
    let opt = |x: Option<localeps::RootOfUnity>| x.map_or("-".to_string(), |r| r.to_string());
    match common.format {
        Format::Json => {
            serde_json::to_writer(&mut out, &rows)?;
            writeln!(out)?;
        }
        Format::Tsv => {
            writeln!(out, "a\tconductor\torder\tW\tW*\tW_p")?;
            for r in &rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    r.a,
                    r.conductor,
                    r.order,
                    r.w,
                    r.w_star,
                    opt(r.w_p)
                )?;
            }
        }
        Format::Pretty => {
            writeln!(
                out,
                "{:>10} {:>4} {:>6} {:>14} {:>14} {:>10}",
                "a", "c", "order", "W", "W*", "W_p"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>10} {:>4} {:>6} {:>14} {:>14} {:>10}",
                    r.a,
                    r.conductor,
                    r.order,
                    r.w.to_string(),
                    r.w_star.to_string(),
                    opt(r.w_p)
                )?;
            }
        }
    }
    out.flush()?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::W { common, chars } => cmd_w(common, chars),
        Command::Verify {
            common,
            suite,
            max_n,
            backend,
            timing,
        } => cmd_verify(common, suite, *max_n, (*backend).into(), *timing),
        Command::Table {
            common,
            family,
            backend,
            max_rows,
        } => cmd_table(common, family, (*backend).into(), *max_rows),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Precision(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
