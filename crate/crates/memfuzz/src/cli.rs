//! Command-line driver.
//!
//! Exit codes: 0 on success, 1 when the input fails validation (or a shape /
//! construction check), 2 on usage errors such as unreadable files or bad
//! flags. All report output goes to stdout and is byte-deterministic for a
//! given input; diagnostics go to stderr.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::constructions::{compose, embed, slice};
use crate::crisp::{check_generator_shape, CrispPSystem};
use crate::engine::{explore, ExploreBounds};
use crate::fuzzy::GradeSet;
use crate::outputs::gen_from_exploration;
use crate::textio::{format_errors, parse, parse_grade_list, render, SystemDocument};
use crate::trace::{render_trace, TraceDocument};

#[derive(Parser)]
#[command(
    name = "memfuzz",
    version,
    about = "Simulate fuzzy symport/antiport membrane systems and transform them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BoundArgs {
    /// Maximum number of transitions along any explored computation.
    #[arg(long, env = "MEMFUZZ_MAX_DEPTH", default_value_t = 64)]
    max_depth: usize,
    /// Maximum number of distinct configurations to discover.
    #[arg(long, env = "MEMFUZZ_MAX_CONFIGS", default_value_t = 100_000)]
    max_configs: usize,
    /// Maximum raw transition assignments enumerated per configuration.
    #[arg(
        long = "max-trans",
        env = "MEMFUZZ_MAX_TRANS",
        default_value_t = 10_000
    )]
    max_trans: usize,
}

impl BoundArgs {
    fn bounds(&self) -> ExploreBounds {
        ExploreBounds {
            max_depth: self.max_depth,
            max_configs: self.max_configs,
            max_transitions_per_config: self.max_trans,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a system definition against the model invariants.
    Validate { file: PathBuf },
    /// Print the transitions of the first breadth-first layers.
    Step {
        file: PathBuf,
        /// Number of layers to expand.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Explore the computation tree and summarize it.
    Explore {
        file: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Write the full trace document here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Compute the generated fuzzy set of naturals.
    Gen {
        file: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Report only positive naturals.
        #[arg(long)]
        restrict_positive: bool,
    },
    /// Lift a crisp system into the fuzzy model.
    Embed {
        file: PathBuf,
        /// Grade set for the embedding, e.g. `0,1/2,1`.
        #[arg(long, env = "MEMFUZZ_GRADES", default_value = "0,1")]
        grades: String,
    },
    /// Split a fuzzy system into one crisp system per positive grade.
    Slice {
        file: PathBuf,
        /// Directory for the emitted definitions.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Cap on the number of crisp rules one rule may expand into.
        #[arg(long, env = "MEMFUZZ_MAX_EXPANSION", default_value_t = 4096)]
        max_expansion: usize,
    },
    /// Assemble generator components (one per positive grade, ascending)
    /// into a single fuzzy system.
    Compose {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Grade set of the composite, e.g. `0,1/2,1`.
        #[arg(long)]
        grades: String,
    },
    /// Check the two-membrane generator shape of a crisp system.
    CheckShape { file: PathBuf },
}

/// A failure with its exit code; message goes to stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

pub fn run() -> ExitCode {
    run_cli(std::env::args_os())
}

/// Parses `args` and runs the selected subcommand.
pub fn run_cli<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outputs, not usage errors.
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("{}", failure.message.trim_end());
            }
            ExitCode::from(failure.code)
        }
    }
}

fn dispatch(command: Command) -> Result<String, Failure> {
    match command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Step { file, n, bounds } => cmd_step(&file, n, &bounds),
        Command::Explore {
            file,
            bounds,
            trace,
        } => cmd_explore(&file, &bounds, trace.as_deref()),
        Command::Gen {
            file,
            bounds,
            restrict_positive,
        } => cmd_gen(&file, &bounds, restrict_positive),
        Command::Embed { file, grades } => cmd_embed(&file, &grades),
        Command::Slice {
            file,
            out,
            max_expansion,
        } => cmd_slice(&file, &out, max_expansion),
        Command::Compose { files, grades } => cmd_compose(&files, &grades),
        Command::CheckShape { file } => cmd_check_shape(&file),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_document(path: &Path) -> Result<SystemDocument, Failure> {
    let text = read_file(path)?;
    parse(&text).map_err(|errors| Failure::invalid(format_errors(&errors)))
}

/// Loads a document and refuses to simulate an invalid system.
fn load_valid(path: &Path) -> Result<SystemDocument, Failure> {
    let doc = load_document(path)?;
    let report = doc.system.validate();
    if !report.is_valid() {
        return Err(Failure::invalid(report.to_string()));
    }
    Ok(doc)
}

fn load_crisp(path: &Path) -> Result<(SystemDocument, CrispPSystem), Failure> {
    let doc = load_valid(path)?;
    let crisp = CrispPSystem::from_psystem(&doc.system)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    Ok((doc, crisp))
}

fn cmd_validate(file: &Path) -> Result<String, Failure> {
    let doc = load_document(file)?;
    let report = doc.system.validate();
    if report.is_valid() {
        Ok("ok\n".to_string())
    } else {
        Err(Failure::invalid(report.to_string()))
    }
}

fn cmd_step(file: &Path, n: usize, bounds: &BoundArgs) -> Result<String, Failure> {
    let doc = load_valid(file)?;
    let mut bounds = bounds.bounds();
    bounds.max_depth = n;
    let result = explore(&doc.system, &bounds);
    let mut out = String::new();
    let _ = writeln!(out, "system {}", doc.name);
    for layer in 0..n {
        let edges: Vec<_> = result
            .edges
            .iter()
            .filter(|e| result.depths[e.from] == layer)
            .collect();
        if edges.is_empty() {
            break;
        }
        let _ = writeln!(out, "layer {layer}: {} transitions", edges.len());
        for e in &edges {
            let _ = writeln!(out, "  c{} -> c{} [{}]", e.from, e.to, e.choice);
        }
    }
    let halting: Vec<String> = result.halting_ids.iter().map(|i| format!("c{i}")).collect();
    let _ = writeln!(
        out,
        "halting {}",
        if halting.is_empty() {
            "none".to_string()
        } else {
            halting.join(" ")
        }
    );
    Ok(out)
}

fn cmd_explore(
    file: &Path,
    bounds: &BoundArgs,
    trace_path: Option<&Path>,
) -> Result<String, Failure> {
    let doc = load_valid(file)?;
    let bounds = bounds.bounds();
    let result = explore(&doc.system, &bounds);
    let report = gen_from_exploration(&doc.system, &result);
    let mut out = String::new();
    let _ = writeln!(out, "system {}", doc.name);
    let _ = writeln!(out, "visited {}", result.visited_count);
    let _ = writeln!(out, "depth-reached {}", result.depth_reached);
    let _ = writeln!(out, "halting {}", result.halting_ids.len());
    let _ = writeln!(out, "exhausted {}", result.exhausted);
    let _ = writeln!(
        out,
        "truncation {}",
        result
            .truncation_reason
            .map(|t| t.to_string())
            .unwrap_or_else(|| "none".to_string())
    );
    if let Some(path) = trace_path {
        let trace = TraceDocument::from_run(&doc.name, &result, &report, &bounds);
        std::fs::write(path, render_trace(&trace))
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        let _ = writeln!(out, "trace {}", path.display());
    }
    Ok(out)
}

fn cmd_gen(file: &Path, bounds: &BoundArgs, restrict_positive: bool) -> Result<String, Failure> {
    let doc = load_valid(file)?;
    let result = explore(&doc.system, &bounds.bounds());
    let report = gen_from_exploration(&doc.system, &result);
    let mut out = String::new();
    let _ = writeln!(out, "system {}", doc.name);
    let _ = writeln!(out, "exhausted {}", report.exhausted);
    for (id, h) in &report.histograms {
        let _ = writeln!(out, "histogram c{id} {h}");
    }
    let gen = if restrict_positive {
        report.gen.restricted_to_positive()
    } else {
        report.gen.clone()
    };
    let _ = writeln!(out, "gen {gen}");
    Ok(out)
}

fn cmd_embed(file: &Path, grades: &str) -> Result<String, Failure> {
    let (doc, crisp) = load_crisp(file)?;
    let grades = parse_grade_list(grades).map_err(Failure::usage)?;
    let fuzzy = embed(&crisp, &grades);
    let out_doc = SystemDocument {
        name: format!("{}_embedded", doc.name),
        system: fuzzy,
    };
    Ok(render(&out_doc))
}

fn grade_file_label(g: crate::fuzzy::Grade) -> String {
    g.to_string().replace('/', "_")
}

fn cmd_slice(file: &Path, out_dir: &Path, max_expansion: usize) -> Result<String, Failure> {
    let doc = load_valid(file)?;
    let family = slice(&doc.system, max_expansion).map_err(|e| Failure::invalid(e.to_string()))?;
    let mut out = String::new();
    for (&t, crisp) in &family.slices {
        let fuzzy = embed(crisp, &GradeSet::boolean());
        let slice_doc = SystemDocument {
            name: format!("{}_slice_{}", doc.name, grade_file_label(t)),
            system: fuzzy,
        };
        let path = out_dir.join(format!("{}.slice-{}.psys", doc.name, grade_file_label(t)));
        std::fs::write(&path, render(&slice_doc))
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(out)
}

fn cmd_compose(files: &[PathBuf], grades: &str) -> Result<String, Failure> {
    let grades = parse_grade_list(grades).map_err(Failure::usage)?;
    if files.len() != grades.positive().len() {
        return Err(Failure::usage(format!(
            "{} component files given for {} positive grades",
            files.len(),
            grades.positive().len()
        )));
    }
    let mut components = BTreeMap::new();
    for (&t, path) in grades.positive().iter().zip(files) {
        let (_, crisp) = load_crisp(path)?;
        components.insert(t, crisp);
    }
    let composite = compose(&components, &grades).map_err(|e| Failure::invalid(e.to_string()))?;
    let out_doc = SystemDocument {
        name: "composite".to_string(),
        system: composite,
    };
    Ok(render(&out_doc))
}

fn cmd_check_shape(file: &Path) -> Result<String, Failure> {
    let (_, crisp) = load_crisp(file)?;
    let report = check_generator_shape(&crisp);
    if report.conforms {
        Ok(report.to_string())
    } else {
        Err(Failure::invalid(report.to_string()))
    }
}
