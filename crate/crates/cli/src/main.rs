//! `treedisp`: enumerate, map, inspect, sample, and verify plane trees,
//! dispositions, and colored cycle decompositions from the command line.
//!
//! All object I/O is newline-delimited: one canonical text form or one JSON
//! document per line, so streams compose in shell pipelines. Exit codes:
//! 0 success / all checks pass, 1 verification failure, 2 usage or data
//! errors, 3 coefficient overflow.

use std::io::{BufRead, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use treedisp::bijection::{marks_from_disposition, phi, phi_inverse, prufer_marks, MarkTable};
use treedisp::disposition::{
    enumerate_dispositions, sample_uniform, Disposition, SAMPLER_RNG,
};
use treedisp::perm::ColoredCyclePermutation;
use treedisp::poly::{
    disposition_polynomial, homogeneous_disposition_polynomial, Polynomial, VarSet,
};
use treedisp::tree::{enumerate_plane_trees, PlaneTree};
use treedisp::verify::{
    plan, preflight, run_cell, Caps, Cell, Identity, VerificationReport,
};
use treedisp::Error;

#[derive(Parser)]
#[command(name = "treedisp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct IoArgs {
    /// Object format for input and output lines.
    #[arg(long, value_enum, default_value = "text", global = false)]
    format: Format,
    /// Read objects from a file instead of standard input.
    #[arg(long = "in", value_name = "PATH")]
    in_path: Option<PathBuf>,
    /// Write output to a file instead of standard output.
    #[arg(long = "out", value_name = "PATH")]
    out_path: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Plane tree streams.
    Trees {
        #[command(subcommand)]
        action: TreesAction,
    },
    /// Disposition streams.
    Dispositions {
        #[command(subcommand)]
        action: DispositionsAction,
    },
    /// Apply a correspondence to each piped object.
    Map {
        #[arg(value_enum)]
        direction: MapDirection,
        /// Segment count for perm-to-disposition (defaults to the largest
        /// color present).
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Print the mark table of each piped object.
    Marks {
        /// What the piped objects are.
        #[arg(long, value_enum)]
        input: ObjectKind,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Print the statistics of each piped object.
    Stats {
        #[command(subcommand)]
        kind: StatsKind,
    },
    /// Draw uniformly random objects, reproducibly.
    Sample {
        #[command(subcommand)]
        what: SampleWhat,
    },
    /// Check identities by exhaustive enumeration; exit 0 iff all pass.
    Verify {
        /// One of thm2.1, thm2.2, q, eq3, eq4, transport, gessel-seo, all.
        #[arg(long)]
        identity: String,
        /// Grid ceilings as key=value pairs, e.g. m=4,n=3.
        #[arg(long, default_value = "")]
        caps: String,
        /// Run grid cells on a thread pool (reports keep their order).
        #[arg(long)]
        parallel: bool,
        /// Deliberately corrupt one statistic (fault-injection hook).
        #[arg(long, value_enum, hide = true)]
        corrupt: Option<Corruption>,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum TreesAction {
    /// Stream every plane tree on [n] in canonical text order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        root: Option<usize>,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum DispositionsAction {
    /// Stream every disposition from [m] to [n] in insertion order.
    Enumerate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapDirection {
    TreeToDisposition,
    DispositionToTree,
    PermToDisposition,
    DispositionToPerm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectKind {
    Tree,
    Disposition,
}

#[derive(Subcommand)]
enum StatsKind {
    /// β, younger/elder children per vertex, and the elder total.
    Tree {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Right-to-left minima per segment and the general descent count.
    Disposition {
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum SampleWhat {
    /// Uniform plane trees on [n], via uniform dispositions.
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Uniform dispositions from [m] to [n].
    Disposition {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Corruption {
    YoungElder,
    RlminSize,
    GdesAdjacent,
}

/// Errors mapped onto process exit codes.
enum CliError {
    Data(String),
    Overflow(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Overflow => CliError::Overflow(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Overflow(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn input_reader(path: &Option<PathBuf>) -> Result<Box<dyn BufRead>, CliError> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufReader::new(std::fs::File::open(p)?)),
        None => Box::new(std::io::BufReader::new(std::io::stdin())),
    })
}

fn output_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

/// Broken pipes (e.g. `… | head`) end the stream, they are not errors.
fn emit(out: &mut dyn Write, line: &str) -> Result<bool, CliError> {
    match writeln!(out, "{line}") {
        Ok(()) => Ok(true),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(false),
        Err(e) => Err(e.into()),
    }
}

fn parse_tree(line: &str, format: Format) -> Result<PlaneTree, CliError> {
    Ok(match format {
        Format::Text => PlaneTree::from_str(line)?,
        Format::Json => serde_json::from_str(line).map_err(|e| CliError::Data(e.to_string()))?,
    })
}

fn parse_disposition(line: &str, format: Format) -> Result<Disposition, CliError> {
    Ok(match format {
        Format::Text => Disposition::from_str(line)?,
        Format::Json => serde_json::from_str(line).map_err(|e| CliError::Data(e.to_string()))?,
    })
}

fn parse_perm(line: &str, format: Format) -> Result<ColoredCyclePermutation, CliError> {
    Ok(match format {
        Format::Text => ColoredCyclePermutation::from_str(line)?,
        Format::Json => serde_json::from_str(line).map_err(|e| CliError::Data(e.to_string()))?,
    })
}

fn render<T: std::fmt::Display + serde::Serialize>(
    value: &T,
    format: Format,
) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => value.to_string(),
        Format::Json => serde_json::to_string(value).map_err(|e| CliError::Data(e.to_string()))?,
    })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Trees {
            action: TreesAction::Enumerate { n, root, io },
        } => {
            if n == 0 {
                return Err(CliError::Data("need --n >= 1".into()));
            }
            if let Some(r) = root {
                if r == 0 || r > n {
                    return Err(CliError::Data(format!("--root {r} outside 1..={n}")));
                }
            }
            let mut out = output_writer(&io.out_path)?;
            for tree in enumerate_plane_trees(n, root) {
                if !emit(out.as_mut(), &render(&tree, io.format)?)? {
                    break;
                }
            }
            out.flush().ok();
            Ok(ExitCode::SUCCESS)
        }
        Command::Dispositions {
            action: DispositionsAction::Enumerate { m, n, io },
        } => {
            if n == 0 {
                return Err(CliError::Data("need --n >= 1".into()));
            }
            let mut out = output_writer(&io.out_path)?;
            for d in enumerate_dispositions(m, n) {
                if !emit(out.as_mut(), &render(&d, io.format)?)? {
                    break;
                }
            }
            out.flush().ok();
            Ok(ExitCode::SUCCESS)
        }
        Command::Map { direction, n, io } => {
            let reader = input_reader(&io.in_path)?;
            let mut out = output_writer(&io.out_path)?;
            for line in reader.lines() {
                let line = line?;
                let rendered = match direction {
                    MapDirection::TreeToDisposition => {
                        render(&phi(&parse_tree(&line, io.format)?), io.format)?
                    }
                    MapDirection::DispositionToTree => {
                        render(&phi_inverse(&parse_disposition(&line, io.format)?)?, io.format)?
                    }
                    MapDirection::PermToDisposition => {
                        let p = parse_perm(&line, io.format)?;
                        let n = n
                            .or_else(|| p.colors().iter().copied().max())
                            .unwrap_or(1);
                        render(&p.to_disposition(n)?, io.format)?
                    }
                    MapDirection::DispositionToPerm => {
                        let d = parse_disposition(&line, io.format)?;
                        render(&ColoredCyclePermutation::from_disposition(&d)?, io.format)?
                    }
                };
                if !emit(out.as_mut(), &rendered)? {
                    break;
                }
            }
            out.flush().ok();
            Ok(ExitCode::SUCCESS)
        }
        Command::Marks { input, io } => {
            let reader = input_reader(&io.in_path)?;
            let mut out = output_writer(&io.out_path)?;
            for line in reader.lines() {
                let line = line?;
                let marks: MarkTable = match input {
                    ObjectKind::Tree => prufer_marks(&parse_tree(&line, io.format)?),
                    ObjectKind::Disposition => {
                        marks_from_disposition(&parse_disposition(&line, io.format)?)?
                    }
                };
                if !emit(out.as_mut(), &render(&marks, io.format)?)? {
                    break;
                }
            }
            out.flush().ok();
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats { kind } => match kind {
            StatsKind::Tree { io } => {
                let reader = input_reader(&io.in_path)?;
                let mut out = output_writer(&io.out_path)?;
                for line in reader.lines() {
                    let tree = parse_tree(&line?, io.format)?;
                    let stats = tree.stats();
                    let rendered = match io.format {
                        Format::Text => format!(
                            "beta={:?} young={:?} eld_children={:?} eld={} young_total={}",
                            stats.beta,
                            stats.young_children,
                            stats.eld_children,
                            stats.eld_total,
                            stats.young_total
                        ),
                        Format::Json => serde_json::json!({
                            "beta": stats.beta,
                            "young_children": stats.young_children,
                            "eld_children": stats.eld_children,
                            "eld": stats.eld_total,
                            "young_total": stats.young_total,
                        })
                        .to_string(),
                    };
                    if !emit(out.as_mut(), &rendered)? {
                        break;
                    }
                }
                out.flush().ok();
                Ok(ExitCode::SUCCESS)
            }
            StatsKind::Disposition { io } => {
                let reader = input_reader(&io.in_path)?;
                let mut out = output_writer(&io.out_path)?;
                for line in reader.lines() {
                    let d = parse_disposition(&line?, io.format)?;
                    let stats = d.stats();
                    let rendered = match io.format {
                        Format::Text => format!("rlmin={:?} gdes={}", stats.rlmin, stats.gdes),
                        Format::Json => serde_json::json!({
                            "rlmin": stats.rlmin,
                            "gdes": stats.gdes,
                        })
                        .to_string(),
                    };
                    if !emit(out.as_mut(), &rendered)? {
                        break;
                    }
                }
                out.flush().ok();
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Sample { what } => match what {
            SampleWhat::Tree { n, seed, count, io } => {
                if n == 0 {
                    return Err(CliError::Data("need --n >= 1".into()));
                }
                eprintln!("sampler: rng={SAMPLER_RNG} seed={seed} n={n} count={count}");
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                let mut out = output_writer(&io.out_path)?;
                for _ in 0..count {
                    let d = sample_uniform(n - 1, n, &mut rng);
                    let tree = phi_inverse(&d)?;
                    if !emit(out.as_mut(), &render(&tree, io.format)?)? {
                        break;
                    }
                }
                out.flush().ok();
                Ok(ExitCode::SUCCESS)
            }
            SampleWhat::Disposition {
                m,
                n,
                seed,
                count,
                io,
            } => {
                if n == 0 {
                    return Err(CliError::Data("need --n >= 1".into()));
                }
                eprintln!("sampler: rng={SAMPLER_RNG} seed={seed} m={m} n={n} count={count}");
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                let mut out = output_writer(&io.out_path)?;
                for _ in 0..count {
                    let d = sample_uniform(m, n, &mut rng);
                    if !emit(out.as_mut(), &render(&d, io.format)?)? {
                        break;
                    }
                }
                out.flush().ok();
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Verify {
            identity,
            caps,
            parallel,
            corrupt,
            io,
        } => {
            let caps = Caps::parse(&caps)?;
            let identity = match identity.as_str() {
                "all" => None,
                token => Some(Identity::from_str(token)?),
            };
            let cells = plan(identity, &caps);
            preflight(&cells)?;
            let reports: Vec<VerificationReport> = if parallel {
                cells
                    .par_iter()
                    .map(|cell| run_one(cell, corrupt))
                    .collect::<Result<_, Error>>()?
            } else {
                cells
                    .iter()
                    .map(|cell| run_one(cell, corrupt))
                    .collect::<Result<_, Error>>()?
            };
            let mut out = output_writer(&io.out_path)?;
            let mut all_pass = true;
            for report in &reports {
                all_pass &= report.pass;
                let line = match io.format {
                    Format::Text => report.render_line(),
                    Format::Json => serde_json::to_string(report)
                        .map_err(|e| CliError::Data(e.to_string()))?,
                };
                if !emit(out.as_mut(), &line)? {
                    break;
                }
            }
            if io.format == Format::Text {
                emit(
                    out.as_mut(),
                    &format!(
                        "{}: {} cells, {}",
                        if all_pass { "PASS" } else { "FAIL" },
                        reports.len(),
                        if all_pass {
                            "all identities hold".to_string()
                        } else {
                            format!(
                                "{} failing",
                                reports.iter().filter(|r| !r.pass).count()
                            )
                        }
                    ),
                )?;
            }
            out.flush().ok();
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn run_one(cell: &Cell, corrupt: Option<Corruption>) -> Result<VerificationReport, Error> {
    match corrupt {
        None => run_cell(cell),
        Some(c) => run_corrupted(cell, c),
    }
}

/// Fault injection for the exit-code contract: recompute the enumeration
/// side with one statistic deliberately wrong, then compare as usual.
fn run_corrupted(cell: &Cell, corruption: Corruption) -> Result<VerificationReport, Error> {
    match (corruption, cell.identity) {
        (Corruption::YoungElder, Identity::TreeProduct) => {
            let n = cell.n.expect("n");
            let mut lhs = Polynomial::zero(VarSet::xs_t(n));
            let mut exps = vec![0u16; n + 1];
            let mut objects = 0;
            for t in enumerate_plane_trees(n, None) {
                let stats = t.stats();
                for (i, &e) in stats.eld_children.iter().enumerate() {
                    exps[i] = e as u16;
                }
                exps[n] = (stats.young_total - 1) as u16;
                lhs.add_term(&exps, 1)?;
                objects += 1;
            }
            let rhs = homogeneous_disposition_polynomial(n.saturating_sub(1), n)?;
            Ok(VerificationReport::from_comparison(*cell, objects, &lhs, &rhs))
        }
        (Corruption::RlminSize, Identity::DispositionProduct) => {
            let (m, n) = (cell.m.expect("m"), cell.n.expect("n"));
            let mut lhs = Polynomial::zero(VarSet::xs(n));
            let mut exps = vec![0u16; n];
            let mut objects = 0;
            for d in enumerate_dispositions(m, n) {
                for (i, seg) in d.segments().iter().enumerate() {
                    exps[i] = seg.len() as u16;
                }
                lhs.add_term(&exps, 1)?;
                objects += 1;
            }
            let rhs = disposition_polynomial(m, n)?;
            Ok(VerificationReport::from_comparison(*cell, objects, &lhs, &rhs))
        }
        (Corruption::GdesAdjacent, Identity::HomogeneousProduct) => {
            let (m, n) = (cell.m.expect("m"), cell.n.expect("n"));
            let mut lhs = Polynomial::zero(VarSet::xs_t(n));
            let mut exps = vec![0u16; n + 1];
            let mut objects = 0;
            for d in enumerate_dispositions(m, n) {
                let stats = d.stats();
                for (i, &c) in stats.rlmin.iter().enumerate() {
                    exps[i] = c as u16;
                }
                let adjacent: usize = d
                    .segments()
                    .iter()
                    .map(|seg| seg.windows(2).filter(|w| w[0] > w[1]).count())
                    .sum();
                exps[n] = adjacent as u16;
                lhs.add_term(&exps, 1)?;
                objects += 1;
            }
            let rhs = homogeneous_disposition_polynomial(m, n)?;
            Ok(VerificationReport::from_comparison(*cell, objects, &lhs, &rhs))
        }
        // The corruption does not apply to this identity; run it honestly.
        _ => run_cell(cell),
    }
}
