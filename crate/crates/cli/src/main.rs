use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use preper::closure::{classify_structure, PreperiodicGraph};
use preper::dynatomic::{degree_phi, degree_phi_star, generalized_dynatomic_poly, DynatomicKind};
use preper::pipeline::{periods_only, run, PrimeChoice, ResultDocument, RunConfig};
use preper::poly::parse::parse_map;
use preper::sweep::{run_sweep, SweepSpec};
use preper::Error;

#[derive(Parser)]
#[command(name = "preper", version, about = "Rational preperiodic points of morphisms of projective space")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// All rational preperiodic points of a map.
    Preperiodic {
        map: String,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Local periods at each prime and their intersection.
    Periods {
        map: String,
        #[command(flatten)]
        primes: PrimeArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dynatomic polynomial of a map of P^1.
    Dynatomic {
        map: String,
        /// Preperiod.
        #[arg(short, long, default_value_t = 0)]
        m: u32,
        /// Period.
        #[arg(short, long)]
        n: u32,
        /// The full polynomial G_m F_(n+m) - F_m G_(n+m) instead of the Moebius quotient.
        #[arg(long)]
        full: bool,
        /// Print the binary form in x, y instead of the affine polynomial in z.
        #[arg(long)]
        homogeneous: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Runs a family sweep described by a JSON file; prints JSON lines.
    Sweep {
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// The preperiodic graph in DOT.
    Graph {
        map: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct PrimeArgs {
    /// Comma-separated primes of good reduction.
    #[arg(long, value_delimiter = ',', conflicts_with = "auto_primes")]
    primes: Option<Vec<u64>>,
    /// Use the K smallest primes of good reduction.
    #[arg(long, value_name = "K", default_value_t = 3)]
    auto_primes: usize,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    primes: PrimeArgs,
    /// Lift every candidate period at this prime.
    #[arg(long)]
    lift_prime: Option<u64>,
    /// Do not lift candidate periods above C; the result is marked incomplete.
    #[arg(long, value_name = "C")]
    max_candidate_period: Option<u64>,
    /// Search height bound; rejected if below the proven bound.
    #[arg(long, value_name = "B", conflicts_with = "unsafe_height_bound")]
    height_bound: Option<BigInt>,
    /// Search height bound, used even if below the proven bound.
    #[arg(long, value_name = "B")]
    unsafe_height_bound: Option<BigInt>,
}

impl PrimeArgs {
    fn choice(&self) -> PrimeChoice {
        match &self.primes {
            Some(ps) => PrimeChoice::Explicit(ps.clone()),
            None => PrimeChoice::Auto(self.auto_primes),
        }
    }
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            primes: self.primes.choice(),
            lift_prime: self.lift_prime,
            height_override: self.height_bound.clone().or_else(|| self.unsafe_height_bound.clone()),
            allow_unsafe_height: self.unsafe_height_bound.is_some(),
            max_candidate_period: self.max_candidate_period,
            ..RunConfig::default()
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidMap(_) | Error::NotAMorphism(_) | Error::EmptyPrimeList | Error::BadPrime(_) => 2,
        Error::Resource(_) | Error::DegreeCap { .. } | Error::NotEnoughPrimes { .. } => 3,
        Error::UnsoundConfig(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    }
    match execute(cli.command) {
        Ok(out) => {
            print!("{}", out);
            ExitCode::SUCCESS
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code(&e))
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(CliError::Other(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}

enum CliError {
    Core(Error),
    Usage(String),
    Other(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn execute(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Preperiodic { map, run: args, format } => {
            let doc = run(&parse_map(&map)?, &args.config())?;
            Ok(match format {
                Format::Text => text_report(&doc),
                Format::Json => json(&doc),
                Format::Dot => dot(&doc.graph),
            })
        }
        Command::Graph { map, run: args } => Ok(dot(&run(&parse_map(&map)?, &args.config())?.graph)),
        Command::Periods { map, primes, format } => {
            let cfg = RunConfig { primes: primes.choice(), ..RunConfig::default() };
            let (primes, bad, cand) = periods_only(&parse_map(&map)?, &cfg)?;
            match format {
                Format::Json => Ok(json(&serde_json::json!({
                    "primes": primes,
                    "bad_primes": bad,
                    "per_prime": cand.per_prime,
                    "intersection": cand.intersection,
                }))),
                Format::Text => {
                    let mut s = String::new();
                    for (p, set) in &cand.per_prime {
                        writeln!(s, "p = {}: {}", p, braces(set)).unwrap();
                    }
                    if !bad.is_empty() {
                        writeln!(s, "bad primes skipped: {}", list(&bad)).unwrap();
                    }
                    writeln!(s, "intersection: {}", braces(&cand.intersection)).unwrap();
                    Ok(s)
                }
                Format::Dot => Err(CliError::Usage("periods has no dot format".into())),
            }
        }
        Command::Dynatomic { map, m, n, full, homogeneous, format } => {
            if n == 0 {
                return Err(CliError::Usage("period must be at least 1".into()));
            }
            let f = parse_map(&map)?;
            let kind = if full { DynatomicKind::Phi } else { DynatomicKind::PhiStar };
            let phi = generalized_dynatomic_poly(&f, m, n, kind)?;
            let expected = match kind {
                DynatomicKind::Phi => degree_phi(1, f.degree(), m, n),
                DynatomicKind::PhiStar => degree_phi_star(1, f.degree(), m, n),
            };
            let poly = if homogeneous { phi.render() } else { phi.render_affine() };
            match format {
                Format::Text => Ok(format!("{}\n", poly)),
                Format::Json => {
                    let roots: Vec<serde_json::Value> = phi
                        .rational_roots()?
                        .into_iter()
                        .map(|(p, k)| serde_json::json!({"point": p, "multiplicity": k}))
                        .collect();
                    Ok(json(&serde_json::json!({
                        "map": f.render(),
                        "kind": if full { "phi" } else { "phi_star" },
                        "m": m,
                        "n": n,
                        "degree": phi.degree(),
                        "expected_degree": expected.to_string(),
                        "homogeneous": phi.render(),
                        "affine": phi.render_affine(),
                        "rational_roots": roots,
                    })))
                }
                Format::Dot => Err(CliError::Usage("dynatomic has no dot format".into())),
            }
        }
        Command::Sweep { spec, run: args } => {
            let text = std::fs::read_to_string(&spec).map_err(|e| CliError::Other(format!("{}: {}", spec.display(), e)))?;
            let spec: SweepSpec = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {}", spec.display(), e)))?;
            Ok(run_sweep(&spec, &args.config())?.to_json_lines())
        }
    }
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn braces<'a>(v: impl IntoIterator<Item = &'a u64>) -> String {
    format!("{{{}}}", v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn text_report(doc: &ResultDocument) -> String {
    let mut s = String::new();
    let w = &mut s;
    writeln!(w, "map: {}", doc.map).unwrap();
    writeln!(w, "primes: {}", list(&doc.primes)).unwrap();
    if !doc.bad_primes.is_empty() {
        writeln!(w, "bad primes: {}", list(&doc.bad_primes)).unwrap();
    }
    writeln!(w, "height bound: {} (used {})", doc.height_bound.cap, doc.height_cap).unwrap();
    for (p, set) in &doc.periods.per_prime {
        writeln!(w, "periods mod {}: {}", p, braces(set)).unwrap();
    }
    writeln!(w, "candidate periods: {}", braces(&doc.periods.intersection)).unwrap();
    if !doc.skipped_periods.is_empty() {
        writeln!(w, "skipped periods: {}", list(&doc.skipped_periods)).unwrap();
    }
    if !doc.complete {
        writeln!(w, "warning: result is incomplete").unwrap();
    }
    writeln!(w, "\npoint  preperiod  period").unwrap();
    for n in &doc.graph.nodes {
        writeln!(w, "{}  {}  {}", n.point, n.preperiod, n.period).unwrap();
    }
    writeln!(w, "\ncycles | # con. comp. | # Pre").unwrap();
    let comps: Vec<String> = doc.summary.components.iter().map(|c| c.to_string()).collect();
    writeln!(w, "{} | {} | {}", list(&doc.summary.cycles), comps.join(","), doc.summary.total).unwrap();
    if let Ok(st) = classify_structure(&doc.graph) {
        writeln!(w, "structure: {}", st).unwrap();
    }
    s
}

fn dot(g: &PreperiodicGraph) -> String {
    let mut s = String::from("digraph preperiodic {\n");
    for (i, n) in g.nodes.iter().enumerate() {
        let shape = if n.preperiod == 0 { "doublecircle" } else { "circle" };
        writeln!(s, "  n{} [label=\"{}\", shape={}];", i, n.point, shape).unwrap();
    }
    for (i, n) in g.nodes.iter().enumerate() {
        writeln!(s, "  n{} -> n{};", i, n.image).unwrap();
    }
    s.push_str("}\n");
    s
}
