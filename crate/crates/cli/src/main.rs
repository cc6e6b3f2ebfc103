use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tropenum_core::enumeration::{count_report, EnumOptions};
use tropenum_core::fan::FanSpec;
use tropenum_core::lattice::parse_rat;
use tropenum_core::reports::{
    degenerate_report, disks_report, load_document, phi_report, potential_report, render_document, scatter_report,
    trees_report,
};
use tropenum_core::{Degree, Error, Fan, RatVec2};

#[derive(Parser, Debug)]
#[command(name = "tropenum", version, about = "Exact tropical curve counts, scattering diagrams and broken lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count rational curves of a degree through generic points.
    Count(CountArgs),
    /// Same run as `count`; the summary line reports the Welschinger count.
    Welschinger(CountArgs),
    /// Maslov index 0 trees through k generic points.
    Trees(KArgs),
    /// Maslov index 2 disks through k generic points ending at Q.
    Disks(QArgs),
    /// Scattering diagram of k generic points and its consistency check.
    Scatter(KArgs),
    /// The potential at Q from broken lines.
    Potential(QArgs),
    /// Checks index times log-count against the multiplicity for every solution.
    PhiCheck(CountArgs),
    /// Decomposition from the union of the solutions, and the fan over it.
    Degenerate(CountArgs),
    /// SVG picture of any JSON document written by this tool.
    Render { input: PathBuf, output: PathBuf },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Min,
    Max,
}

#[derive(Args, Debug)]
struct Common {
    /// Builtin fan (p2, p1xp1, dp6) or a JSON file with `rays`.
    #[arg(long, default_value = "p2")]
    fan: String,
    #[arg(long, env = "TROPENUM_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Under `max` the fan rays are negated.
    #[arg(long, value_enum, default_value_t = ConventionArg::Min)]
    convention: ConventionArg,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    common: Common,
    /// An integer, `anticanonical`, or comma separated counts per ray.
    #[arg(long)]
    degree: String,
}

#[derive(Args, Debug)]
struct KArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0)]
    k: usize,
}

#[derive(Args, Debug)]
struct QArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// `x,y` with rational coordinates.
    #[arg(long, allow_hyphen_values = true)]
    q: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    /// The document was written but an invariant failed.
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invariant(_) => 3,
            Failure::Lib(e) => match e {
                Error::Genericity(_) | Error::NonGenericQ(_) | Error::NonTransverse(_) => 2,
                Error::Property(_) => 3,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Invariant(m) => f.write_str(m),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn base_fan(name: &str) -> Result<Fan, Failure> {
    if let Some(f) = Fan::builtin(name) {
        return Ok(f);
    }
    let text = std::fs::read_to_string(name).map_err(|e| Failure::Usage(format!("unknown fan {name:?}: {e}")))?;
    let spec: FanSpec = serde_json::from_str(&text).map_err(|e| Failure::Lib(e.into()))?;
    Ok(Fan::from_spec(&spec)?)
}

fn load_fan(c: &Common) -> Result<Fan, Failure> {
    let fan = base_fan(&c.fan)?;
    Ok(match c.convention {
        ConventionArg::Min => fan,
        ConventionArg::Max => {
            let rays: Vec<_> = fan.rays().iter().map(|&v| -v).collect();
            Fan::new(fan.name(), &rays)?
        }
    })
}

/// Degree counts are given in the order of the input fan; they are moved to
/// the negated rays under the max convention.
fn parse_degree(fan: &Fan, c: &Common, s: &str) -> Result<Degree, Failure> {
    let s = s.trim();
    if s == "anticanonical" {
        return Ok(fan.anticanonical()?);
    }
    if let Ok(d) = s.parse::<u32>() {
        return Ok(fan.multiple(d)?);
    }
    let given: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("bad degree {s:?}")))?;
    if given.len() != fan.len() {
        return Err(Failure::Usage(format!("degree has {} entries, the fan has {} rays", given.len(), fan.len())));
    }
    let coeffs = match c.convention {
        ConventionArg::Min => given,
        ConventionArg::Max => {
            let orig = base_fan(&c.fan)?;
            let mut out = vec![0; fan.len()];
            for (i, &v) in orig.rays().iter().enumerate() {
                let j = fan.ray_index(-v).ok_or_else(|| Failure::Usage("ray mismatch".into()))?;
                out[j] = given[i];
            }
            out
        }
    };
    Ok(Degree::new(fan, coeffs)?)
}

fn parse_q(s: &str) -> Result<RatVec2, Failure> {
    let (x, y) = s.split_once(',').ok_or_else(|| Failure::Usage(format!("bad point {s:?}, expected x,y")))?;
    let x = parse_rat(x).map_err(|e| Failure::Usage(e.to_string()))?;
    let y = parse_rat(y).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(RatVec2::new(x, y))
}

fn emit<T: Serialize>(out: &Option<PathBuf>, doc: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(doc).map_err(|e| Failure::Lib(e.into()))?;
    text.push('\n');
    match out {
        Some(p) => write_file(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(p: &Path, text: &str) -> Outcome {
    std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))
}

fn opts(c: &Common) -> EnumOptions {
    EnumOptions { jobs: c.jobs.max(1) }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Count(a) => {
            let fan = load_fan(&a.common)?;
            let d = parse_degree(&fan, &a.common, &a.degree)?;
            let r = count_report(&fan, &d, a.common.seed, opts(&a.common))?;
            eprintln!("n_trop = {}", r.n_trop);
            emit(&a.common.out, &r)
        }
        Command::Welschinger(a) => {
            let fan = load_fan(&a.common)?;
            let d = parse_degree(&fan, &a.common, &a.degree)?;
            let r = count_report(&fan, &d, a.common.seed, opts(&a.common))?;
            eprintln!("w_trop = {}", r.w_trop);
            emit(&a.common.out, &r)
        }
        Command::Trees(a) => {
            let fan = load_fan(&a.common)?;
            let r = trees_report(&fan, a.k, a.common.seed, opts(&a.common))?;
            emit(&a.common.out, &r)
        }
        Command::Disks(a) => {
            let fan = load_fan(&a.common)?;
            let q = parse_q(&a.q)?;
            let r = disks_report(&fan, a.k, a.common.seed, &q, opts(&a.common))?;
            emit(&a.common.out, &r)
        }
        Command::Scatter(a) => {
            let fan = load_fan(&a.common)?;
            let r = scatter_report(&fan, a.k, a.common.seed, opts(&a.common))?;
            emit(&a.common.out, &r)?;
            if !r.consistency.consistent {
                return Err(Failure::Invariant("scattering diagram is not consistent".into()));
            }
            Ok(())
        }
        Command::Potential(a) => {
            let fan = load_fan(&a.common)?;
            let q = parse_q(&a.q)?;
            let r = potential_report(&fan, a.k, a.common.seed, &q, opts(&a.common))?;
            eprintln!("W = {}", r.text);
            emit(&a.common.out, &r)
        }
        Command::PhiCheck(a) => {
            let fan = load_fan(&a.common)?;
            let d = parse_degree(&fan, &a.common, &a.degree)?;
            let r = phi_report(&fan, &d, a.common.seed, opts(&a.common))?;
            emit(&a.common.out, &r)?;
            if !r.all_hold {
                return Err(Failure::Invariant("index times log-count differs from the multiplicity".into()));
            }
            Ok(())
        }
        Command::Degenerate(a) => {
            let fan = load_fan(&a.common)?;
            let d = parse_degree(&fan, &a.common, &a.degree)?;
            let r = degenerate_report(&fan, &d, a.common.seed, opts(&a.common))?;
            emit(&a.common.out, &r)?;
            if !r.decomposition.report.all() {
                return Err(Failure::Invariant("decomposition fails its properties".into()));
            }
            Ok(())
        }
        Command::Render { input, output } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", input.display())))?;
            let doc = load_document(&text)?;
            write_file(&output, &render_document(&doc))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_table() {
        assert_eq!(Failure::Usage("x".into()).code(), 1);
        assert_eq!(Failure::Lib(Error::Parse("x".into())).code(), 1);
        assert_eq!(Failure::Lib(Error::Genericity("x".into())).code(), 2);
        assert_eq!(Failure::Lib(Error::NonGenericQ("x".into())).code(), 2);
        assert_eq!(Failure::Lib(Error::Property("x".into())).code(), 3);
        assert_eq!(Failure::Invariant("x".into()).code(), 3);
    }
}
