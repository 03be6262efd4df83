//! Command-line front end: validate algebras against a class, build and
//! verify representations, and import/close concrete units.
//!
//! Exit codes: 0 on success, 1 on a semantic failure (validation or
//! verification fails, or saturation was required but not reached), 2 on
//! usage or file-format errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cylrep::algebra::{AlgebraDoc, AtomStructure};
use cylrep::axioms::{
    catalog, holds_atomwise, holds_exhaustive, validate, Ax7Mode, ValidationOptions,
    DEFAULT_AX7_DEPTH, DEFAULT_AX7_MODE,
};
use cylrep::game::{GameOptions, Limits, PlayStatus};
use cylrep::represent::{
    close_unit, import_unit, verify_embedding, RepresentationDoc, UnitClosure, UnitDoc,
};
use cylrep::AlgebraClass;

const EXIT_SEMANTIC: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "cylrep",
    version,
    about = "Cylindric-type algebras: validation, games, representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra file against a class
    Check(CheckArgs),
    /// Build a representation by playing the witness game to saturation
    Represent(RepresentArgs),
    /// Verify that a representation embeds an algebra
    Verify(VerifyArgs),
    /// Build the full set-algebra atom structure over a unit file
    ImportUnit(ImportArgs),
    /// Close a unit under composition
    CloseUnit(CloseArgs),
    /// Cross-check the atomwise checker against the exhaustive oracle
    Oracle(OracleArgs),
}

fn parse_class(s: &str) -> Result<AlgebraClass, String> {
    AlgebraClass::parse(s)
        .ok_or_else(|| format!("unknown class {s:?}; expected rc, dc, sc, dc-minus or sc-minus"))
}

fn parse_mode(s: &str) -> Result<Ax7Mode, String> {
    Ax7Mode::parse(s).ok_or_else(|| format!("unknown mode {s:?}; expected skip-t0 or include-t0"))
}

fn parse_kind(s: &str) -> Result<UnitClosure, String> {
    match s {
        "diagonalizable" => Ok(UnitClosure::Diagonalizable),
        "permutable" => Ok(UnitClosure::Permutable),
        _ => Err(format!(
            "unknown kind {s:?}; expected diagonalizable or permutable"
        )),
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Algebra file (JSON)
    input: PathBuf,
    #[arg(long = "class", value_parser = parse_class)]
    klass: AlgebraClass,
    #[arg(long, default_value_t = DEFAULT_AX7_DEPTH)]
    ax7_depth: usize,
    #[arg(long, value_parser = parse_mode, default_value = DEFAULT_AX7_MODE.name())]
    ax7_mode: Ax7Mode,
    /// Also cross-check each axiom with the exhaustive oracle
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 6)]
    oracle_atom_bound: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RepresentArgs {
    /// Algebra file (JSON)
    input: PathBuf,
    #[arg(long = "class", value_parser = parse_class)]
    klass: AlgebraClass,
    /// Output representation file
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    max_rounds: usize,
    #[arg(long, default_value_t = 5_000)]
    max_nodes: usize,
    /// Check the network conditions after every round
    #[arg(long)]
    debug_check_networks: bool,
    /// Skip class validation before playing
    #[arg(long)]
    no_validate: bool,
    /// Treat a bounded (non-saturated) outcome as a failure
    #[arg(long)]
    require_saturation: bool,
    #[arg(long, default_value_t = DEFAULT_AX7_DEPTH)]
    ax7_depth: usize,
    #[arg(long, value_parser = parse_mode, default_value = DEFAULT_AX7_MODE.name())]
    ax7_mode: Ax7Mode,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Algebra file (JSON)
    algebra: PathBuf,
    /// Representation file (JSON)
    representation: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ImportArgs {
    /// Unit file (JSON)
    input: PathBuf,
    /// Fail unless the unit is closed as this class requires
    #[arg(long, value_parser = parse_class)]
    expect: Option<AlgebraClass>,
    /// Output algebra file; stdout when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CloseArgs {
    /// Unit file (JSON)
    input: PathBuf,
    #[arg(long, value_parser = parse_kind)]
    kind: UnitClosure,
    /// Output unit file; stdout when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Algebra file (JSON)
    input: PathBuf,
    #[arg(long = "class", value_parser = parse_class)]
    klass: AlgebraClass,
    #[arg(long, default_value_t = 6)]
    atom_bound: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd)]
enum LogLevel {
    Off,
    Info,
    Trace,
}

fn log_level() -> LogLevel {
    match std::env::var("CYLREP_LOG").as_deref() {
        Ok("info") => LogLevel::Info,
        Ok("trace") => LogLevel::Trace,
        _ => LogLevel::Off,
    }
}

fn info(msg: &str) {
    if log_level() >= LogLevel::Info {
        eprintln!("cylrep: {msg}");
    }
}

enum CliError {
    /// Bad file, bad format, bad arguments.
    Usage(String),
    /// The command ran but its assertion failed.
    Semantic,
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io: {e}"))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed {what} {}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<AtomStructure, CliError> {
    let doc: AlgebraDoc = read_json(path, "algebra file")?;
    doc.to_structure()
        .map_err(|e| CliError::Usage(format!("invalid algebra {}: {e}", path.display())))
}

/// Serializes through a `Value` so that object keys come out sorted; the
/// output is byte-stable across runs.
fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Usage(format!("serialize: {e}")))?;
    println!(
        "{}",
        serde_json::to_string_pretty(&v).expect("value serializes")
    );
    Ok(())
}

fn write_or_print<T: serde::Serialize>(value: &T, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            let v = serde_json::to_value(value)
                .map_err(|e| CliError::Usage(format!("serialize: {e}")))?;
            fs::write(
                path,
                serde_json::to_string_pretty(&v).expect("value serializes"),
            )?;
            Ok(())
        }
        None => print_json(value),
    }
}

fn cmd_check(args: &CheckArgs) -> Result<(), CliError> {
    let algebra = load_algebra(&args.input)?;
    let opts = ValidationOptions {
        ax7_depth: args.ax7_depth,
        ax7_mode: args.ax7_mode,
        use_oracle: args.oracle,
        oracle_bound: args.oracle_atom_bound,
    };
    let report = validate(&algebra, args.klass, &opts);
    if args.json {
        print_json(&report)?;
    } else {
        for v in &report.wellformed {
            println!("wellformed: {v}");
        }
        for r in &report.axioms {
            match &r.counterexample {
                Some(cx) if !r.pass => println!("{}: fail ({cx})", r.name),
                _ => println!("{}: {}", r.name, if r.pass { "pass" } else { "fail" }),
            }
        }
        if let Some(ax7) = &report.ax7 {
            println!(
                "Ax7[depth={}, mode={}]: {} instances, {}",
                ax7.depth,
                ax7.mode,
                ax7.instance_count,
                if ax7.pass {
                    "pass".to_string()
                } else {
                    format!("{} failures", ax7.failures.len())
                }
            );
            for f in &ax7.failures {
                println!(
                    "  {}: fail ({})",
                    f.name,
                    f.counterexample.as_deref().unwrap_or("")
                );
            }
        }
        println!("overall: {}", if report.pass { "pass" } else { "fail" });
    }
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Semantic)
    }
}

fn cmd_represent(args: &RepresentArgs) -> Result<(), CliError> {
    let algebra = load_algebra(&args.input)?;
    if !args.no_validate {
        let vopts = ValidationOptions {
            ax7_depth: args.ax7_depth,
            ax7_mode: args.ax7_mode,
            ..Default::default()
        };
        let report = validate(&algebra, args.klass, &vopts);
        if !report.pass {
            eprintln!(
                "validation failed for class {} ({} failing axioms); pass --no-validate to play anyway",
                args.klass,
                report.failing_axioms().len()
            );
            return Err(CliError::Semantic);
        }
        info("validation passed");
    }
    let trace = log_level() >= LogLevel::Trace;
    let gopts = GameOptions {
        limits: Limits {
            max_rounds: args.max_rounds,
            max_nodes: args.max_nodes,
        },
        check_networks: args.debug_check_networks,
        record_transcript: trace,
    };
    let outcome = cylrep::game::run_to_saturation(&algebra, args.klass, &gopts).map_err(|e| {
        eprintln!("play failed: {e}");
        CliError::Semantic
    })?;
    if let Some(t) = &outcome.transcript {
        for record in t {
            eprintln!(
                "{}",
                serde_json::to_string(record).expect("record serializes")
            );
        }
    }
    info(&format!(
        "play ended after {} rounds: {} nodes, {} edges",
        outcome.rounds,
        outcome.network.nodes().len(),
        outcome.network.edge_count()
    ));
    let rep = cylrep::represent::Representation::from_network(&outcome.network, outcome.status);
    let doc = RepresentationDoc::from_representation(&rep);
    if let Some(path) = &args.output {
        let v = serde_json::to_value(&doc).expect("doc serializes");
        fs::write(
            path,
            serde_json::to_string_pretty(&v).expect("value serializes"),
        )?;
    }
    if args.json {
        #[derive(serde::Serialize)]
        struct Summary<'a> {
            status: &'a str,
            rounds: usize,
            base_size: usize,
            unit_size: usize,
            pending: usize,
        }
        print_json(&Summary {
            status: if rep.is_saturated() {
                "saturated"
            } else {
                "bounded"
            },
            rounds: outcome.rounds,
            base_size: rep.base.len(),
            unit_size: rep.unit.len(),
            pending: outcome.pending.len(),
        })?;
    } else if args.output.is_none() {
        print_json(&doc)?;
    }
    if args.require_saturation && rep.status != PlayStatus::Saturated {
        eprintln!(
            "play did not saturate within the limits ({} demands pending)",
            outcome.pending.len()
        );
        return Err(CliError::Semantic);
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let algebra = load_algebra(&args.algebra)?;
    let doc: RepresentationDoc = read_json(&args.representation, "representation file")?;
    let rep = doc
        .to_representation()
        .map_err(|e| CliError::Usage(format!("invalid representation: {e}")))?;
    let report = verify_embedding(&algebra, &rep);
    if args.json {
        print_json(&report)?;
    } else {
        for c in &report.checks {
            match &c.detail {
                Some(d) if !c.pass => println!("{}: fail ({d})", c.name),
                _ => println!("{}: {}", c.name, if c.pass { "pass" } else { "fail" }),
            }
        }
        println!(
            "overall: {} ({})",
            if report.pass { "pass" } else { "fail" },
            report.status
        );
    }
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Semantic)
    }
}

fn cmd_import(args: &ImportArgs) -> Result<(), CliError> {
    let doc: UnitDoc = read_json(&args.input, "unit file")?;
    let unit = doc
        .to_unit()
        .map_err(|e| CliError::Usage(format!("invalid unit: {e}")))?;
    let imported = import_unit(&unit, args.expect).map_err(|e| {
        eprintln!("import failed: {e}");
        CliError::Semantic
    })?;
    let out = AlgebraDoc::from_structure(&imported.algebra, &imported.atom_names);
    write_or_print(&out, args.output.as_deref())
}

fn cmd_close(args: &CloseArgs) -> Result<(), CliError> {
    let doc: UnitDoc = read_json(&args.input, "unit file")?;
    let unit = doc
        .to_unit()
        .map_err(|e| CliError::Usage(format!("invalid unit: {e}")))?;
    let closed = close_unit(&unit, args.kind);
    write_or_print(&UnitDoc::from_unit(&closed), args.output.as_deref())
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let algebra = load_algebra(&args.input)?;
    let cat = catalog(args.klass, algebra.dimension())
        .map_err(|e| CliError::Usage(format!("catalog: {e}")))?;
    #[derive(serde::Serialize)]
    struct Row {
        name: String,
        atomwise_pass: bool,
        exhaustive_pass: bool,
        agree: bool,
    }
    let mut rows = Vec::new();
    let mut disagreements = 0usize;
    for ineq in &cat.axioms {
        let atomwise = holds_atomwise(&algebra, ineq)
            .map_err(|e| CliError::Usage(format!("checker: {e}")))?
            .is_none();
        let exhaustive = holds_exhaustive(&algebra, ineq, args.atom_bound)
            .map_err(|e| CliError::Usage(format!("oracle: {e}")))?
            .is_none();
        let agree = atomwise == exhaustive;
        if !agree {
            disagreements += 1;
        }
        rows.push(Row {
            name: ineq.name.clone(),
            atomwise_pass: atomwise,
            exhaustive_pass: exhaustive,
            agree,
        });
    }
    if args.json {
        #[derive(serde::Serialize)]
        struct Report {
            axioms: Vec<Row>,
            disagreements: usize,
        }
        print_json(&Report {
            axioms: rows,
            disagreements,
        })?;
    } else {
        for r in &rows {
            println!(
                "{}: atomwise={} exhaustive={}{}",
                r.name,
                if r.atomwise_pass { "pass" } else { "fail" },
                if r.exhaustive_pass { "pass" } else { "fail" },
                if r.agree { "" } else { "  <-- disagreement" }
            );
        }
        println!("disagreements: {disagreements}");
    }
    if disagreements == 0 {
        Ok(())
    } else {
        Err(CliError::Semantic)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Represent(args) => cmd_represent(args),
        Command::Verify(args) => cmd_verify(args),
        Command::ImportUnit(args) => cmd_import(args),
        Command::CloseUnit(args) => cmd_close(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Semantic) => ExitCode::from(EXIT_SEMANTIC),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
