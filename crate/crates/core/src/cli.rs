//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cube::{hamming, Subcube, Vertex};
use crate::error::{arg_err, Error, Result};
use crate::fault::{
    adversarial_q1_family, adversarial_subcube_family, enumerate_families, read_family_file, render_family_file,
    sample_families, FaultFamily, FaultMode,
};
use crate::metrics::{Diameter, SurvivalGraph};
use crate::oracle::{
    connectivity_bruteforce, fault_diameter_bruteforce, parse_claim_scope, verify_claims, ClaimRecord, ClaimStatus,
    Search,
};
use crate::router::{Router, RouterConfig};

/// Environment variable that overrides `--jobs`.
pub const JOBS_ENV: &str = "CUBE_FAULTLAB_JOBS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cube-faultlab", version, about = "Hypercube structure-fault connectivity, fault diameter and routing")]
pub struct Cli {
    /// Worker threads for brute-force searches (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check registered connectivity and fault-diameter claims.
    Verify {
        /// `all` or comma-separated ids such as `thm3.3,lem2.4(n=5,m=3)`.
        #[arg(long, default_value = "all")]
        claims: String,
        /// Skip default instances on cubes larger than Q_<max-n>.
        #[arg(long)]
        max_n: Option<u8>,
    },
    /// Brute-force connectivity of Q_n for one fault mode.
    Connectivity(ModeArgs),
    /// Largest survival-graph diameter over families of bounded size.
    FaultDiameter {
        #[command(flatten)]
        mode: ModeArgs,
        /// Maximum family size (default: connectivity - 1).
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, conflicts_with = "sampled")]
        exhaustive: bool,
        #[arg(long)]
        sampled: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
    },
    /// Diameter of Q_n minus one fault family.
    Diameter(FaultArgs),
    /// Fault-avoiding route between two survivors.
    Route {
        #[command(flatten)]
        faults: FaultArgs,
        #[arg(long)]
        from: Vertex,
        #[arg(long)]
        to: Vertex,
        /// Subcubes up to this dimension are routed by BFS.
        #[arg(long, default_value_t = RouterConfig::default().base_dim)]
        base_dim: u8,
    },
    /// Print a worst-case fault family in the fault-file format.
    Adversary {
        #[arg(value_enum)]
        kind: AdversaryKind,
        #[arg(long)]
        n: u8,
        #[arg(long)]
        m: Option<u8>,
    },
    /// List fault families of one size, exhaustively or by seeded sampling.
    Enumerate {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        size: usize,
        /// Draw this many families at random instead of listing all.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop after this many families.
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AdversaryKind {
    Q1,
    Subcube,
}

#[derive(Args, Debug)]
pub struct ModeArgs {
    #[arg(long)]
    pub n: u8,
    /// `structure`, `substructure` or `subcube`, optionally with `:<m>`.
    #[arg(long)]
    pub mode: String,
    #[arg(long)]
    pub m: Option<u8>,
}

impl ModeArgs {
    fn mode(&self) -> Result<FaultMode> {
        parse_mode(&self.mode, self.m)
    }
}

#[derive(Args, Debug)]
pub struct FaultArgs {
    #[arg(long)]
    pub n: Option<u8>,
    /// Comma-separated patterns, `adversary:q1`, `adversary:subcube:<m>` or `none`.
    #[arg(long, conflicts_with = "fault_file")]
    pub faults: Option<String>,
    #[arg(long)]
    pub fault_file: Option<PathBuf>,
    /// Mode for inline patterns (default: inferred from element dimensions).
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub m: Option<u8>,
}

fn parse_mode(mode: &str, m: Option<u8>) -> Result<FaultMode> {
    if mode.contains(':') {
        let parsed: FaultMode = mode.parse()?;
        if m.is_some_and(|m| parsed.max_element_dim() != m) || (m.is_some() && parsed == FaultMode::Substructure) {
            return Err(arg_err!("--m disagrees with mode `{mode}`"));
        }
        return Ok(parsed);
    }
    match (mode, m) {
        ("substructure", None) => Ok(FaultMode::Substructure),
        ("substructure", Some(_)) => Err(arg_err!("substructure mode takes no --m")),
        (kind, Some(m)) => format!("{kind}:{m}").parse(),
        (kind, None) => Err(arg_err!("mode {kind} needs --m or the form {kind}:<m>")),
    }
}

impl FaultArgs {
    fn family(&self) -> Result<FaultFamily> {
        let mode = self.mode.as_deref().map(|s| parse_mode(s, self.m)).transpose()?;
        if let Some(path) = &self.fault_file {
            let f = read_family_file(path)?;
            if self.n.is_some_and(|n| n != f.ambient()) {
                return Err(arg_err!("--n disagrees with the fault file header (n={})", f.ambient()));
            }
            return Ok(match mode {
                Some(mode) => FaultFamily::try_new(f.ambient(), mode, f.elements().to_vec())?,
                None => f,
            });
        }
        let faults = self.faults.as_deref().unwrap_or("none").trim();
        let need_n = || self.n.ok_or_else(|| arg_err!("--n is required"));
        let f = match faults {
            "none" | "" => FaultFamily::empty(need_n()?, mode.unwrap_or(FaultMode::Structure(0))),
            "adversary:q1" => adversarial_q1_family(need_n()?)?,
            s if s.starts_with("adversary:subcube:") => {
                let m = s["adversary:subcube:".len()..]
                    .parse()
                    .map_err(|_| arg_err!("bad subcube dimension in `{s}`"))?;
                adversarial_subcube_family(need_n()?, m)?
            }
            s => {
                let elements = s.split(',').map(|p| p.trim().parse()).collect::<Result<Vec<Subcube>>>()?;
                let n = self.n.unwrap_or_else(|| elements[0].ambient());
                let mode = mode.unwrap_or_else(|| infer_mode(&elements));
                return FaultFamily::try_new(n, mode, elements);
            }
        };
        match mode {
            Some(mode) if mode != f.mode() => FaultFamily::try_new(f.ambient(), mode, f.elements().to_vec()),
            _ => Ok(f),
        }
    }
}

/// `structure:k` when all elements are Q_k, otherwise `subcube:<max dim>`.
fn infer_mode(elements: &[Subcube]) -> FaultMode {
    let max = elements.iter().map(|e| e.dim()).max().unwrap_or(0);
    if elements.iter().all(|e| e.dim() == max) {
        FaultMode::Structure(max)
    } else {
        FaultMode::SubcubeFamily(max)
    }
}

/// A rendered report and whether every check in it passed.
pub struct Report {
    pub body: String,
    pub passed: bool,
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    s.push('\n');
    Ok(s)
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String, header: &[&str], rows: impl FnOnce() -> Vec<Vec<String>>) -> Result<String> {
    match format {
        Format::Json => json(value),
        Format::Text => Ok(text()),
        Format::Csv => csv_table(header, &rows()),
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn verify_report(format: Format, records: &[ClaimRecord]) -> Result<String> {
    let passed = records.iter().filter(|r| r.status == ClaimStatus::Pass).count();
    render(
        format,
        &records,
        || {
            let width = records.iter().map(|r| r.id.len()).max().unwrap_or(0);
            let mut out = String::new();
            for r in records {
                let status = if r.status == ClaimStatus::Pass { "PASS" } else { "FAIL" };
                let computed = r.computed.map_or("-".to_string(), |c| c.to_string());
                let _ = writeln!(
                    out,
                    "{status}  {:width$}  computed {computed}, expected {} {}  {:>6} ms  {}",
                    r.id,
                    r.relation.symbol(),
                    r.expected,
                    r.wall_ms,
                    r.description,
                );
                if r.status == ClaimStatus::Fail {
                    let _ = writeln!(out, "      {}", r.detail);
                    if !r.witness.is_empty() {
                        let _ = writeln!(out, "      witness {{{}}}", r.witness.join(","));
                    }
                }
            }
            let _ = writeln!(out, "{} claims, {passed} passed, {} failed", records.len(), records.len() - passed);
            out
        },
        &["id", "description", "n", "m", "relation", "expected", "computed", "status", "witness", "detail", "wall_ms"],
        || {
            records
                .iter()
                .map(|r| {
                    vec![
                        r.id.clone(),
                        r.description.to_string(),
                        r.n.to_string(),
                        opt(r.m),
                        r.relation.symbol().to_string(),
                        r.expected.to_string(),
                        opt(r.computed),
                        if r.status == ClaimStatus::Pass { "pass" } else { "fail" }.to_string(),
                        r.witness.join(" "),
                        r.detail.clone(),
                        r.wall_ms.to_string(),
                    ]
                })
                .collect()
        },
    )
}

#[derive(Serialize)]
struct DiameterReport {
    n: u8,
    mode: FaultMode,
    faults: Vec<String>,
    survivors: usize,
    connected: bool,
    diameter: Option<usize>,
}

#[derive(Serialize)]
struct RouteReport {
    from: Vertex,
    to: Vertex,
    mode: FaultMode,
    faults: Vec<String>,
    length: usize,
    bound: usize,
    bfs_distance: Option<usize>,
    fallbacks: usize,
    path: Vec<Vertex>,
}

#[derive(Serialize)]
struct FamilyListing {
    n: u8,
    mode: FaultMode,
    size: usize,
    families: Vec<Vec<String>>,
}

/// Largest cube for which routes are cross-checked against BFS.
const ROUTE_BFS_MAX_DIM: u8 = 20;

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Report> {
    let format = cli.format;
    let mut passed = true;
    let body = match &cli.command {
        Command::Verify { claims, max_n } => {
            let scope = parse_claim_scope(claims)?;
            let records = verify_claims(&scope, *max_n)?;
            passed = records.iter().all(|r| r.status == ClaimStatus::Pass);
            verify_report(format, &records)?
        }
        Command::Connectivity(args) => {
            let r = connectivity_bruteforce(args.n, args.mode()?)?;
            render(
                format,
                &r,
                || format!("kappa(Q_{}, {}) = {}\nwitness {{{}}}\n", r.n, r.mode, r.kappa, r.witness.patterns().join(",")),
                &["n", "mode", "kappa", "witness"],
                || vec![vec![r.n.to_string(), r.mode.to_string(), r.kappa.to_string(), r.witness.patterns().join(" ")]],
            )?
        }
        Command::FaultDiameter { mode, budget, exhaustive: _, sampled, seed, draws } => {
            let fm = mode.mode()?;
            let budget = match budget {
                Some(b) => *b,
                None => {
                    fm.kappa(mode.n).ok_or_else(|| arg_err!("mode {fm} has no known connectivity in Q_{}; pass --budget", mode.n))?
                        - 1
                }
            };
            let search = if *sampled { Search::Sampled { seed: *seed, draws: *draws } } else { Search::Exhaustive };
            let r = fault_diameter_bruteforce(mode.n, fm, budget, search)?;
            let search_text = match r.search {
                Search::Exhaustive => "exhaustive".to_string(),
                Search::Sampled { seed, draws } => format!("sampled seed={seed} draws={draws}"),
            };
            render(
                format,
                &r,
                || {
                    format!(
                        "fault diameter of Q_{} under {} (<= {} elements, {}, {} families) = {}\nwitness {{{}}}\n",
                        r.n,
                        r.mode,
                        r.budget,
                        search_text,
                        r.families,
                        r.value,
                        r.witness.patterns().join(",")
                    )
                },
                &["n", "mode", "budget", "search", "families", "value", "witness"],
                || {
                    vec![vec![
                        r.n.to_string(),
                        r.mode.to_string(),
                        r.budget.to_string(),
                        search_text.clone(),
                        r.families.to_string(),
                        r.value.to_string(),
                        r.witness.patterns().join(" "),
                    ]]
                },
            )?
        }
        Command::Diameter(args) => {
            let f = args.family()?;
            let g = SurvivalGraph::new(&f)?;
            let d = g.diameter()?;
            let r = DiameterReport {
                n: f.ambient(),
                mode: f.mode(),
                faults: f.patterns(),
                survivors: g.survivor_count(),
                connected: d != Diameter::Disconnected,
                diameter: d.finite(),
            };
            render(
                format,
                &r,
                || {
                    let d = r.diameter.map_or("disconnected".to_string(), |d| d.to_string());
                    format!("diameter of Q_{} - {{{}}} = {d} ({} survivors)\n", r.n, r.faults.join(","), r.survivors)
                },
                &["n", "mode", "faults", "survivors", "connected", "diameter"],
                || {
                    vec![vec![
                        r.n.to_string(),
                        r.mode.to_string(),
                        r.faults.join(" "),
                        r.survivors.to_string(),
                        r.connected.to_string(),
                        opt(r.diameter),
                    ]]
                },
            )?
        }
        Command::Route { faults, from, to, base_dim } => {
            let f = faults.family()?;
            let route = Router::new(RouterConfig { base_dim: *base_dim }).route(*from, *to, &f)?;
            let bfs = if f.ambient() <= ROUTE_BFS_MAX_DIM {
                SurvivalGraph::new(&f)?.bfs_distance(*from, *to)?
            } else {
                None
            };
            let r = RouteReport {
                from: *from,
                to: *to,
                mode: f.mode(),
                faults: f.patterns(),
                length: route.path.len(),
                bound: route.bound,
                bfs_distance: bfs,
                fallbacks: route.fallbacks,
                path: route.path.vertices().to_vec(),
            };
            let path_text = r.path.iter().map(ToString::to_string).collect::<Vec<_>>();
            render(
                format,
                &r,
                || {
                    let h = hamming(*from, *to).unwrap_or(0);
                    format!(
                        "route {} -> {} (hamming {h}, bfs {}): length {} <= bound {}, {} fallbacks\n{}\n",
                        r.from,
                        r.to,
                        opt(r.bfs_distance),
                        r.length,
                        r.bound,
                        r.fallbacks,
                        path_text.join(" ")
                    )
                },
                &["from", "to", "mode", "length", "bound", "bfs_distance", "fallbacks", "path"],
                || {
                    vec![vec![
                        r.from.to_string(),
                        r.to.to_string(),
                        r.mode.to_string(),
                        r.length.to_string(),
                        r.bound.to_string(),
                        opt(r.bfs_distance),
                        r.fallbacks.to_string(),
                        path_text.join(" "),
                    ]]
                },
            )?
        }
        Command::Adversary { kind, n, m } => {
            let f = match (kind, m) {
                (AdversaryKind::Q1, None) => adversarial_q1_family(*n)?,
                (AdversaryKind::Q1, Some(_)) => return Err(arg_err!("the q1 family takes no --m")),
                (AdversaryKind::Subcube, Some(m)) => adversarial_subcube_family(*n, *m)?,
                (AdversaryKind::Subcube, None) => return Err(arg_err!("the subcube family needs --m")),
            };
            render(
                format,
                &f,
                || render_family_file(&f),
                &["n", "mode", "pattern"],
                || f.patterns().into_iter().map(|p| vec![f.ambient().to_string(), f.mode().to_string(), p]).collect(),
            )?
        }
        Command::Enumerate { mode, size, sample, seed, limit } => {
            let fm = mode.mode()?;
            let families: Vec<FaultFamily> = match sample {
                Some(count) => sample_families(mode.n, fm, *size, *count, *seed)?,
                None => enumerate_families(mode.n, fm, *size)?.take(limit.unwrap_or(usize::MAX)).collect(),
            };
            let families: Vec<FaultFamily> = families.into_iter().take(limit.unwrap_or(usize::MAX)).collect();
            let listing = FamilyListing {
                n: mode.n,
                mode: fm,
                size: *size,
                families: families.iter().map(FaultFamily::patterns).collect(),
            };
            render(
                format,
                &listing,
                || {
                    let mut out = String::new();
                    for f in &listing.families {
                        let _ = writeln!(out, "{{{}}}", f.join(","));
                    }
                    let _ = writeln!(out, "{} families", listing.families.len());
                    out
                },
                &["index", "family"],
                || listing.families.iter().enumerate().map(|(i, f)| vec![i.to_string(), f.join(" ")]).collect(),
            )?
        }
    };
    Ok(Report { body, passed })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Argument(_) | Error::Parse(_) | Error::Io(_) => EXIT_USAGE,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Invariant(_) => EXIT_MISMATCH,
    }
}

fn init_pool(flag: Option<usize>) -> Result<()> {
    let jobs = match std::env::var(JOBS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| arg_err!("{JOBS_ENV} must be a thread count, got `{v}`"))?),
        Err(_) => flag,
    };
    if let Some(jobs) = jobs {
        if jobs == 0 {
            return Err(arg_err!("--jobs must be at least 1"));
        }
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = init_pool(cli.jobs).and_then(|_| execute(&cli)).and_then(|report| {
        match &cli.output {
            Some(path) => std::fs::write(path, &report.body)?,
            None => print!("{}", report.body),
        }
        Ok(report.passed)
    });
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_MISMATCH,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Result<Report> {
        let cli = Cli::try_parse_from(std::iter::once("cube-faultlab").chain(args.iter().copied())).unwrap();
        execute(&cli)
    }

    #[test]
    fn mode_parsing() {
        assert_eq!(parse_mode("structure", Some(1)).unwrap(), FaultMode::Structure(1));
        assert_eq!(parse_mode("subcube:2", None).unwrap(), FaultMode::SubcubeFamily(2));
        assert_eq!(parse_mode("substructure", None).unwrap(), FaultMode::Substructure);
        assert!(parse_mode("structure", None).is_err());
        assert!(parse_mode("subcube:2", Some(3)).is_err());
        assert!(parse_mode("path", Some(1)).is_err());
    }

    #[test]
    fn route_adversary_q1() {
        let r = exec(&["--format", "json", "route", "--n", "5", "--faults", "adversary:q1", "--from", "00000", "--to", "11110"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
        assert_eq!(v["length"], 6);
        assert_eq!(v["bfs_distance"], 6);
        assert_eq!(v["path"][0], "00000");
    }

    #[test]
    fn fault_diameter_command() {
        let r = exec(&["fault-diameter", "--n", "4", "--mode", "structure", "--m", "1", "--budget", "2", "--exhaustive"]).unwrap();
        assert!(r.body.contains("= 5"), "{}", r.body);
        let r = exec(&["--format", "csv", "fault-diameter", "--n", "4", "--mode", "structure", "--m", "1"]).unwrap();
        assert!(r.body.lines().nth(1).unwrap().contains(",5,"), "{}", r.body);
    }

    #[test]
    fn inline_faults_infer_mode() {
        let r = exec(&["--format", "json", "diameter", "--faults", "*010,*100"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
        assert_eq!(v["diameter"], 5);
        assert_eq!(v["mode"], "structure:1");
        let r = exec(&["--format", "json", "diameter", "--faults", "01,10"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
        assert_eq!(v["diameter"], serde_json::Value::Null);
        assert!(exec(&["diameter", "--faults", "0**,001"]).is_err());
    }

    #[test]
    fn adversary_prints_file_format() {
        let r = exec(&["adversary", "q1", "--n", "4"]).unwrap();
        assert_eq!(r.body, "n=4 mode=structure:1\n*010\n*100\n");
        assert!(exec(&["adversary", "subcube", "--n", "4"]).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["cube-faultlab", "--bogus"]), EXIT_USAGE);
        assert_eq!(run(["cube-faultlab", "connectivity", "--n", "8", "--mode", "structure:1"]), EXIT_RESOURCE);
        assert_eq!(run(["cube-faultlab", "verify", "--claims", "nope"]), EXIT_USAGE);
    }
}
