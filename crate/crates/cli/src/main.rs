//! Command-line front end: parse systems, replay runs, unfold trees, count
//! loops, compare word types, evaluate bound tables and check formulas.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use nptkit::analysis::{
    count_word, generalized_milestones, minimal_op_sequence, AnalysisError, CountFunction, LengthBoundTable,
    LengthTableOptions,
};
use nptkit::fomc::{
    bound_tables, check_bounded, constraint_1npt, constraint_2npt, normalize, parse_formula, s_model_check,
    ClassCounts, Constraint, FomcError, Npt2Caps, Npt2Options, UniformConstraint,
};
use nptkit::npt::{relevant_ancestors, to_dot, truncate_with_cap, NptError, DEFAULT_NODE_CAP};
use nptkit::stack::Stack;
use nptkit::system::{parse_run_indices, parse_system, serialize_system, PushdownSystem, Run, SystemError};
use nptkit::wordtypes::{Verdict, WordTypeError, WordTypes};

#[derive(Parser)]
#[command(name = "nptkit", version, about = "Nested pushdown trees of level 1 and 2")]
struct Cli {
    /// Output style for counts, verdicts and results.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a system and print a summary.
    Parse {
        file: PathBuf,
        /// Print the canonical serialization instead.
        #[arg(long)]
        canonical: bool,
    },
    /// Replay a run given by transition indices.
    Run {
        file: PathBuf,
        /// Comma-separated transition indices.
        #[arg(long, default_value = "")]
        steps: String,
    },
    /// Emit the truncation of the nested pushdown tree as DOT.
    Tree {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        cap: usize,
    },
    /// List the relevant ancestors of a run.
    Ancestors {
        file: PathBuf,
        #[arg(long, default_value = "")]
        steps: String,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Generalised milestones of a stack and a shortest operation sequence.
    Milestones {
        file: PathBuf,
        /// Words separated by `:`, symbols by `.`, e.g. `_:_.a`.
        #[arg(long)]
        stack: String,
    },
    /// Loop, high-loop and return counts of a word in the context `[⊥]`.
    Loops {
        file: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 2)]
        threshold: usize,
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
    },
    /// Type of a word, or whether two words are equivalent.
    Wtype {
        file: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        other: Option<String>,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        z: usize,
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
    },
    /// Evaluate the bounding functions.
    Bounds {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        z: usize,
        #[arg(long, default_value_t = 0)]
        l: u64,
        #[arg(long, default_value_t = 1)]
        n1: u64,
        #[arg(long, default_value_t = 1)]
        n2: u64,
        /// Use this loop length at every height instead of measuring.
        #[arg(long)]
        lambda: Option<u64>,
        /// Use this class count at every level instead of estimating.
        #[arg(long)]
        classes: Option<u64>,
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
    },
    /// Check a closed formula.
    Check {
        file: PathBuf,
        #[arg(long)]
        formula: String,
        /// `bounded:D`, `s:uniform:L`, `s:npt1` or `s:npt2`.
        #[arg(long)]
        mode: String,
        /// Caps for `s:npt2`, e.g. `length=6,height=4`.
        #[arg(long)]
        caps: Option<String>,
        /// Expansion budget for `s:npt1`; measured when absent.
        #[arg(long)]
        expansion: Option<u64>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<SystemError> for CliError {
    fn from(e: SystemError) -> Self {
        match e {
            SystemError::Capacity(_) => CliError::Budget(e.to_string()),
            SystemError::Invalid(_) => CliError::Usage(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<NptError> for CliError {
    fn from(e: NptError) -> Self {
        match e {
            NptError::SizeLimit { .. } => CliError::Budget(e.to_string()),
            NptError::NotRooted => CliError::Usage(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::BudgetExhausted => CliError::Budget(e.to_string()),
            AnalysisError::System(s) => s.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<WordTypeError> for CliError {
    fn from(e: WordTypeError) -> Self {
        match e {
            WordTypeError::BudgetExhausted => CliError::Budget(e.to_string()),
            WordTypeError::Analysis(a) => a.into(),
            WordTypeError::System(s) => s.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FomcError> for CliError {
    fn from(e: FomcError) -> Self {
        match e {
            FomcError::Parse { .. } => CliError::Parse(format!("formula: {e}")),
            FomcError::BudgetExhausted => CliError::Budget(e.to_string()),
            FomcError::Npt(n) => n.into(),
            FomcError::WordTypes(w) => w.into(),
            FomcError::Analysis(a) => a.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn load(path: &PathBuf) -> Result<PushdownSystem, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_system(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn replay(sys: &PushdownSystem, steps: &str) -> Result<Run, CliError> {
    let steps = parse_run_indices(steps)?;
    Ok(Run::from_initial(sys, &steps)?)
}

struct Out {
    format: Format,
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

impl Out {
    fn text(&self, line: impl AsRef<str>) {
        if self.format == Format::Text {
            emit(&format!("{}\n", line.as_ref()));
        }
    }

    fn record(&self, v: Value) {
        if self.format == Format::JsonLines {
            emit(&format!("{v}\n"));
        }
    }
}

fn count_records(sys: &PushdownSystem, kind: &str, c: &CountFunction, exact: bool, out: &Out) {
    for q in sys.state_ids() {
        for q2 in sys.state_ids() {
            let v = c.get(q, q2);
            out.record(json!({
                "kind": kind,
                "from": sys.state_name(q),
                "to": sys.state_name(q2),
                "count": v,
                "saturated": v == c.threshold(),
                "exact": exact,
            }));
        }
    }
    let rows: Vec<String> = c.rows().iter().map(|r| format!("{r:?}")).collect();
    out.text(format!("{kind}: {}", rows.join(" ")));
}

fn parse_caps(text: &str) -> Result<Npt2Caps, CliError> {
    let mut caps = Npt2Caps::default();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bad cap `{part}`")))?;
        let v: u64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad cap value `{value}`")))?;
        match key.trim() {
            "length" => caps.length = Some(v),
            "height" => caps.height = Some(v),
            "width" => caps.width = Some(v),
            k => return Err(CliError::Usage(format!("unknown cap `{k}`"))),
        }
    }
    Ok(caps)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Equivalent => 0,
        Verdict::Distinct => 1,
        Verdict::Indeterminate => 4,
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    let out = Out { format: cli.format };
    match cli.command {
        Command::Parse { file, canonical } => {
            let sys = load(&file)?;
            if canonical {
                emit(&serialize_system(&sys));
                return Ok(0);
            }
            let summary = format!(
                "level {}, {} states, {} transitions",
                sys.level(),
                sys.num_states(),
                sys.transitions().len()
            );
            out.text(&summary);
            out.record(json!({
                "level": sys.level(),
                "states": sys.num_states(),
                "symbols": sys.alphabet().len(),
                "transitions": sys.transitions().len(),
            }));
            Ok(0)
        }
        Command::Run { file, steps } => {
            let sys = load(&file)?;
            let run = replay(&sys, &steps)?;
            for (i, c) in run.configs().iter().enumerate() {
                let by = if i == 0 {
                    String::from("start")
                } else {
                    format!("by {}", run.step_at(i - 1))
                };
                out.text(format!("{i}: {} {by}", sys.format_configuration(c)));
                out.record(json!({
                    "position": i,
                    "state": sys.state_name(c.state),
                    "stack": sys.format_stack(&c.stack),
                }));
            }
            Ok(0)
        }
        Command::Tree { file, depth, cap } => {
            let sys = load(&file)?;
            let t = truncate_with_cap(&sys, depth, cap)?;
            emit(&to_dot(&sys, &t));
            Ok(0)
        }
        Command::Ancestors { file, steps, level } => {
            let sys = load(&file)?;
            let run = replay(&sys, &steps)?;
            for e in relevant_ancestors(&run, level) {
                let steps = e.node.format_steps();
                out.text(format!(
                    "[{steps}] level {} {}",
                    e.level,
                    sys.format_configuration(e.node.last())
                ));
                out.record(json!({
                    "steps": steps,
                    "level": e.level,
                    "state": sys.state_name(e.node.state()),
                    "stack": sys.format_stack(e.node.stack()),
                }));
            }
            Ok(0)
        }
        Command::Milestones { file, stack } => {
            let sys = load(&file)?;
            let s: Stack = sys.parse_stack(&stack)?;
            let gm = generalized_milestones(&s)?;
            let ops = minimal_op_sequence(&s, sys.bottom())?;
            for (m, is_m) in gm.stacks.iter().zip(&gm.is_milestone) {
                let tag = if *is_m { "milestone" } else { "generalised" };
                out.text(format!("{} {tag}", sys.format_stack(m)));
                out.record(json!({ "stack": sys.format_stack(m), "milestone": is_m }));
            }
            let ops: Vec<String> = ops.iter().map(|op| sys.format_op(*op)).collect();
            out.text(format!("operations: {}", ops.join(" ")));
            out.record(json!({ "operations": ops.join(" ") }));
            Ok(0)
        }
        Command::Loops {
            file,
            word,
            threshold,
            budget,
        } => {
            let sys = load(&file)?;
            let w = sys.parse_word(&word)?;
            let ctx = Stack::initial(sys.level(), sys.bottom());
            let counts = count_word(&sys, &ctx, &w, threshold, budget)?;
            count_records(&sys, "loop", &counts.loops, counts.exact, &out);
            count_records(&sys, "high_loop", &counts.high_loops, counts.exact, &out);
            count_records(&sys, "return", &counts.returns, counts.exact, &out);
            out.text(format!("exact: {}", counts.exact));
            Ok(if counts.exact { 0 } else { 4 })
        }
        Command::Wtype {
            file,
            word,
            other,
            n,
            z,
            budget,
        } => {
            let sys = load(&file)?;
            let wt = WordTypes::new(&sys, budget)?;
            let w1 = sys.parse_word(&word)?;
            match other {
                None => {
                    let (id, exact) = wt.type_of(&w1, n, z, z)?;
                    out.text(format!(
                        "type {} (n={n}, z={z}){}",
                        id.0,
                        if exact { "" } else { " inexact" }
                    ));
                    out.record(json!({ "word": word, "n": n, "z": z, "type": id.0, "exact": exact }));
                    Ok(if exact { 0 } else { 4 })
                }
                Some(o) => {
                    let w2 = sys.parse_word(&o)?;
                    let v = wt.word_equiv(&w1, &w2, n, z)?;
                    out.text(format!("{v:?}"));
                    out.record(json!({ "left": word, "right": o, "n": n, "z": z, "verdict": format!("{v:?}") }));
                    Ok(verdict_code(v))
                }
            }
        }
        Command::Bounds {
            file,
            n,
            z,
            l,
            n1,
            n2,
            lambda,
            classes,
            budget,
        } => {
            let sys = load(&file)?;
            let table = match lambda {
                Some(b) => LengthBoundTable::fixed(z, b),
                None => nptkit::analysis::loop_length_table(&sys, z, LengthTableOptions::default())?,
            };
            let cls = match classes {
                Some(c) => ClassCounts::uniform(z, c),
                None => ClassCounts::estimate(&sys, 2, z, budget)?,
            };
            let t = bound_tables(&sys, n, z, l, n1, n2, &table, &cls);
            out.text(format!(
                "classes {:?}{}, loop lengths {:?}",
                cls.per_level,
                if cls.estimated { " (estimated)" } else { "" },
                table.soundness
            ));
            for lv in &t.levels {
                out.text(format!(
                    "n={} l={} n1={} n2={}: B_H={} B_W={} B_L={}",
                    lv.n, lv.l, lv.n1, lv.n2, lv.height, lv.width, lv.length
                ));
                out.record(json!({
                    "n": lv.n,
                    "l": lv.l,
                    "n1": lv.n1,
                    "n2": lv.n2.to_string(),
                    "height": lv.height.to_string(),
                    "width": lv.width.to_string(),
                    "length": lv.length.to_string(),
                }));
            }
            Ok(0)
        }
        Command::Check {
            file,
            formula,
            mode,
            caps,
            expansion,
        } => {
            let sys = load(&file)?;
            let f = parse_formula(&formula)?;
            if let Some(x) = f.free_vars().into_iter().next() {
                return Err(CliError::Usage(format!("formula has a free variable {x}")));
            }
            let (nnf, rank) = normalize(&f);
            let (result, provenance) = if let Some(d) = mode.strip_prefix("bounded:") {
                let d: usize = d
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad depth in `{mode}`")))?;
                (
                    check_bounded(&sys, &f, d, &[])?,
                    format!("bounded: truncation at depth {d}"),
                )
            } else {
                let c: Box<dyn Constraint> = if let Some(d) = mode.strip_prefix("s:uniform:") {
                    let d: usize = d
                        .parse()
                        .map_err(|_| CliError::Usage(format!("bad depth in `{mode}`")))?;
                    Box::new(UniformConstraint::new(&sys, d, DEFAULT_NODE_CAP)?)
                } else if mode == "s:npt1" {
                    Box::new(constraint_1npt(&sys, rank, expansion)?)
                } else if mode == "s:npt2" {
                    let caps = caps.as_deref().map(parse_caps).transpose()?.unwrap_or_default();
                    Box::new(constraint_2npt(&sys, rank, caps, Npt2Options::default())?)
                } else {
                    return Err(CliError::Usage(format!("unknown mode `{mode}`")));
                };
                (s_model_check(c.as_ref(), &nnf, &[])?, c.describe())
            };
            out.text(format!("{result}"));
            out.text(format!("rank {rank}; {provenance}"));
            out.record(json!({
                "formula": f.to_string(),
                "rank": rank,
                "mode": mode,
                "result": result,
                "provenance": provenance,
            }));
            Ok(if result { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
