//! The `sct` command line.

use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::auts::{abelian_invariants, abelian_name, automorphism_group, automorphism_theories, brauer_check, preserves_power_maps};
use crate::bitset::BitSet;
use crate::chartable::CharacterTable;
use crate::enumerate::{all_scts_with, brute_force_all_scts, lattice_edges, refinement_histogram, Options, Progress};
use crate::error::Error;
use crate::partition::Partition;
use crate::sct::{coarsest_sct_with_superclass, is_sct, refine_chars_to_sct, refine_classes_to_sct, verify_schur_closure, verify_supercharacter_products, SuperTheory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "sct", version, about = "Supercharacter theories from character tables")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Character table in JSON form.
    table: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Skip the orthogonality checks run before every command.
    #[arg(long)]
    no_validate: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check class sizes, degrees and orthogonality exactly.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Coarsest supercharacter theory refining a class or character partition.
    Refine {
        #[command(flatten)]
        common: Common,
        /// Class partition such as "[[0],[1,2],[3,4]]".
        #[arg(long, conflicts_with = "chars", required_unless_present = "chars")]
        classes: Option<String>,
        /// Character partition in the same notation.
        #[arg(long)]
        chars: Option<String>,
    },
    /// Decide whether a union of classes is a superclass of some theory.
    Superclass {
        #[command(flatten)]
        common: Common,
        /// Comma-separated class indices.
        classes: String,
        /// Exit with status 1 when the subset is not a superclass.
        #[arg(long)]
        assert: bool,
    },
    /// Enumerate every supercharacter theory.
    All {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Table automorphisms and the theories of their subgroups.
    Auts {
        #[command(flatten)]
        common: Common,
        /// Keep only automorphisms commuting with the stored power maps.
        #[arg(long)]
        restrict_power_maps: bool,
    },
    /// Cover relations between all theories.
    Lattice {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Number of Irpt/Clpt applications needed, over all class partitions.
    Histogram {
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate theories by brute force over all class partitions.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        max_k: usize,
    },
}

#[derive(Args, Debug)]
struct RunFlags {
    /// Scanning threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Scan every subset instead of one per automorphism orbit.
    #[arg(long)]
    no_auts: bool,
    /// Check every theory for Schur closure and product decompositions.
    #[arg(long)]
    verify: bool,
    /// No progress reports on stderr.
    #[arg(long)]
    quiet: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } | Error::Json(_) | Error::Syntax { .. } | Error::Schema(_) | Error::Value { .. } | Error::Partition(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        // reader went away (`sct ... | head`): stop quietly
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure { code: EXIT_OK, message: String::new() };
        }
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line on `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}

fn load(common: &Common, err: &mut dyn Write) -> Result<CharacterTable, Failure> {
    let t = CharacterTable::from_path(&common.table)?;
    if !common.no_validate {
        let report = t.validate();
        if !report.is_valid() {
            write!(err, "invalid table:\n{report}")?;
            return Err(Failure { code: EXIT_DOMAIN, message: format!("{} is not a character table", common.table.display()) });
        }
    }
    Ok(t)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { common } => cmd_validate(&common, out),
        Command::Refine { common, classes, chars } => {
            let t = load(&common, err)?;
            let theory = match (classes, chars) {
                (Some(p), _) => refine_classes_to_sct(&t, &Partition::parse(&p, t.k())?),
                (None, Some(p)) => refine_chars_to_sct(&t, &Partition::parse(&p, t.k())?),
                (None, None) => unreachable!("clap requires one partition"),
            };
            print_theories(&t, common.format, &[theory], out)?;
            Ok(EXIT_OK)
        }
        Command::Superclass { common, classes, assert } => cmd_superclass(&common, &classes, assert, out, err),
        Command::All { common, run } => cmd_all(&common, &run, false, out, err),
        Command::Lattice { common, run } => cmd_all(&common, &run, true, out, err),
        Command::Auts { common, restrict_power_maps } => cmd_auts(&common, restrict_power_maps, out, err),
        Command::Histogram { common } => {
            let t = load(&common, err)?;
            let tally = refinement_histogram(&t)?;
            let total: u64 = tally.values().sum();
            match common.format {
                Format::Text => {
                    for (steps, count) in &tally {
                        writeln!(out, "steps {steps}: {count}")?;
                    }
                    writeln!(out, "total: {total}")?;
                }
                Format::Json => {
                    let doc = json!({ "table": t.name(), "histogram": tally, "total": total });
                    writeln!(out, "{doc}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Oracle { common, max_k } => {
            let t = load(&common, err)?;
            let theories = brute_force_all_scts(&t, max_k)?;
            print_theories(&t, common.format, &theories, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_validate(common: &Common, out: &mut dyn Write) -> Outcome {
    let t = CharacterTable::from_path(&common.table)?;
    let report = t.validate();
    match common.format {
        Format::Text => write!(out, "{report}")?,
        Format::Json => {
            let failures: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", json!({ "table": t.name(), "valid": report.is_valid(), "failures": failures }))?;
        }
    }
    Ok(if report.is_valid() { EXIT_OK } else { EXIT_DOMAIN })
}

fn parse_indices(text: &str, k: usize) -> Result<BitSet, Failure> {
    let mut set = BitSet::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let j: usize = part
            .parse()
            .map_err(|_| Failure { code: EXIT_USAGE, message: format!("'{part}' is not a class index") })?;
        if j >= k {
            return Err(Failure { code: EXIT_USAGE, message: format!("class {j} out of range (k = {k})") });
        }
        set.insert(j);
    }
    if set.is_empty() {
        return Err(Failure { code: EXIT_USAGE, message: "empty class subset".into() });
    }
    Ok(set)
}

fn describe(t: &CharacterTable, theory: &SuperTheory) -> &'static str {
    if *theory == SuperTheory::finest(t.k()) {
        " (finest)"
    } else if *theory == SuperTheory::coarse(t.k()) {
        " (coarse)"
    } else {
        ""
    }
}

fn cmd_superclass(common: &Common, classes: &str, assert: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let t = load(common, err)?;
    let subset = parse_indices(classes, t.k())?;
    let found = coarsest_sct_with_superclass(&t, &subset);
    match common.format {
        Format::Text => match &found {
            Some(theory) => {
                writeln!(out, "superclass: yes{}", describe(&t, theory))?;
                writeln!(out, "{}", theory_line(&t, theory))?;
            }
            None => writeln!(out, "superclass: no")?,
        },
        Format::Json => {
            let doc = json!({ "subset": subset.iter().collect::<Vec<_>>(), "superclass": found.is_some(), "theory": found });
            writeln!(out, "{doc}")?;
        }
    }
    Ok(if found.is_none() && assert { EXIT_DOMAIN } else { EXIT_OK })
}

fn theory_line(t: &CharacterTable, theory: &SuperTheory) -> String {
    let mut line = format!("classes {} chars {}", theory.classes(), theory.chars());
    if let Some(names) = t.class_names() {
        let named: Vec<String> = theory
            .classes()
            .blocks()
            .iter()
            .map(|b| b.iter().map(|j| names[j].as_str()).collect::<Vec<_>>().join("+"))
            .collect();
        line.push_str(&format!(" ({})", named.join(", ")));
    }
    line
}

fn print_theories(t: &CharacterTable, format: Format, theories: &[SuperTheory], out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Text => {
            writeln!(out, "table: {} (k = {})", t.name(), t.k())?;
            writeln!(out, "theories: {}", theories.len())?;
            for (x, theory) in theories.iter().enumerate() {
                writeln!(out, "{x}: {}", theory_line(t, theory))?;
            }
        }
        Format::Json => {
            let doc = json!({ "table": t.name(), "k": t.k(), "count": theories.len(), "theories": theories });
            writeln!(out, "{doc}")?;
        }
    }
    Ok(())
}

fn progress_printer() -> Arc<dyn Fn(Progress) + Send + Sync> {
    let last = Mutex::new(Instant::now());
    Arc::new(move |p: Progress| {
        let mut last = last.lock().expect("progress lock");
        if last.elapsed() < Duration::from_secs(1) && p.scanned < p.total {
            return;
        }
        *last = Instant::now();
        let rate = p.scanned as f64 / p.elapsed.as_secs_f64().max(1e-9);
        eprintln!("scanned {}/{} subsets ({rate:.0}/s)", p.scanned, p.total);
    })
}

fn cmd_all(common: &Common, run: &RunFlags, lattice: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let t = load(common, err)?;
    let opts = Options {
        workers: run.workers,
        use_auts: !run.no_auts,
        progress: (!run.quiet).then(progress_printer),
    };
    let result = all_scts_with(&t, &opts)?;
    let stats = &result.stats;
    if !run.quiet {
        writeln!(
            err,
            "scanned {} subsets, {} theories after step 1, {} meets, {:.3} s",
            stats.subsets_scanned,
            stats.step1_theories,
            stats.meets_computed,
            stats.elapsed.as_secs_f64()
        )?;
    }
    let mut code = EXIT_OK;
    let mut problems: Vec<String> = Vec::new();
    if run.verify {
        for (x, theory) in result.theories.iter().enumerate() {
            if !is_sct(&t, theory.chars(), theory.classes()) {
                problems.push(format!("theory {x}: not a supercharacter theory"));
            }
            for v in verify_schur_closure(&t, theory)?.violations {
                problems.push(format!("theory {x}: {v}"));
            }
            for v in verify_supercharacter_products(&t, theory)?.violations {
                problems.push(format!("theory {x}: {v}"));
            }
        }
        if !problems.is_empty() {
            code = EXIT_DOMAIN;
        }
    }
    let edges = if lattice { lattice_edges(&result.theories) } else { Vec::new() };
    match common.format {
        Format::Text => {
            print_theories(&t, Format::Text, &result.theories, out)?;
            if lattice {
                writeln!(out, "edges: {}", edges.len())?;
                for (a, b) in &edges {
                    writeln!(out, "{a} <= {b}")?;
                }
            }
            if run.verify {
                if problems.is_empty() {
                    writeln!(out, "verify: ok")?;
                } else {
                    for p in &problems {
                        writeln!(out, "verify: {p}")?;
                    }
                }
            }
        }
        Format::Json => {
            let mut doc = json!({
                "table": t.name(),
                "k": t.k(),
                "count": result.theories.len(),
                "theories": result.theories,
            });
            if lattice {
                doc["edges"] = json!(edges);
            }
            if run.verify {
                doc["verify"] = json!(problems);
            }
            writeln!(out, "{doc}")?;
        }
    }
    Ok(code)
}

fn cmd_auts(common: &Common, restrict: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let t = load(common, err)?;
    let full = automorphism_group(&t);
    let group: Vec<_> = if restrict { full.iter().filter(|a| preserves_power_maps(&t, a)).cloned().collect() } else { full.clone() };
    let structure = abelian_invariants(&group).map(|inv| abelian_name(&inv));
    let theories = automorphism_theories(&t, &group)?;
    let brauer = group.iter().all(|a| brauer_check(&t, a));
    let power_map_order =
        (!t.power_maps().is_empty()).then(|| full.iter().filter(|a| preserves_power_maps(&t, a)).count());
    match common.format {
        Format::Text => {
            writeln!(out, "order: {}", group.len())?;
            writeln!(out, "structure: {}", structure.as_deref().unwrap_or("nonabelian"))?;
            if let (false, Some(n)) = (restrict, power_map_order) {
                writeln!(out, "preserving power maps: {n}")?;
            }
            writeln!(out, "brauer: {}", if brauer { "ok" } else { "violated" })?;
            for (x, a) in group.iter().enumerate() {
                writeln!(out, "{x}: rows {:?} cols {:?}", a.row_perm(), a.col_perm())?;
            }
            writeln!(out, "theories from subgroups: {}", theories.len())?;
            for theory in &theories {
                writeln!(out, "  {}", theory_line(&t, theory))?;
            }
        }
        Format::Json => {
            let doc = json!({
                "table": t.name(),
                "order": group.len(),
                "structure": structure,
                "power_map_order": power_map_order,
                "automorphisms": group,
                "theories": theories,
            });
            writeln!(out, "{doc}")?;
        }
    }
    Ok(if brauer { EXIT_OK } else { EXIT_DOMAIN })
}
