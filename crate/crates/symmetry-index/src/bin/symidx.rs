//! Command-line front end: analyze a space description (or catalog entry),
//! list the catalog, or run structural validation only.
//!
//! Exit codes: 0 success, 2 input/validation error, 3 numerical
//! instability, 4 expected-value mismatch under --strict.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use symmetry_index::catalog::{self, CatalogEntry};
use symmetry_index::homo::{Assertions, HomogeneousSpace, SpaceError};
use symmetry_index::killing::{InvariantFieldPolicy, SignConvention};
use symmetry_index::report::{
    self, diff_expected, validation_report_failed, validation_report_ok, AnalysisOptions,
};
use symmetry_index::spacefile::{SpaceDescription, SpaceFileError};

#[derive(Parser)]
#[command(
    name = "symidx",
    about = "Index of symmetry for compact homogeneous Riemannian spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full symmetry analysis on a space.
    Analyze {
        /// Path to a space-description JSON file, or `catalog:<name>`.
        source: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Structural validation and metric classification only.
    Check {
        /// Path to a space-description JSON file, or `catalog:<name>`.
        source: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Work with the built-in catalog of spaces.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List entries with expected values and provenance.
    List {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Analyze a named entry and diff against its expected values.
    Analyze {
        name: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Singular-value threshold for all rank and kernel decisions.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    /// Invariant-field candidates: auto includes them on naturally
    /// reductive spaces only.
    #[arg(long, value_enum, default_value_t = FieldsArg::Auto)]
    invariant_fields: FieldsArg,
    /// Seed for the randomized splitting steps.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Fail (exit 4) when computed values miss the expected ones, or when
    /// only a lower bound is available for an entry with expected values.
    #[arg(long)]
    strict: bool,
    /// Random pairs for the bracket-formula identity check.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// f4 structure-constants file for the gated Wallach entry.
    #[arg(long)]
    f4_data: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldsArg {
    Auto,
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl CommonOpts {
    fn analysis_options(&self) -> AnalysisOptions {
        AnalysisOptions {
            seed: self.seed,
            invariant_fields: match self.invariant_fields {
                FieldsArg::Auto => InvariantFieldPolicy::Auto,
                FieldsArg::On => InvariantFieldPolicy::On,
                FieldsArg::Off => InvariantFieldPolicy::Off,
            },
            sign: SignConvention::AntiHomomorphism,
            bracket_trials: self.trials,
        }
    }
}

struct LoadedSpace {
    name: String,
    space: HomogeneousSpace,
    assertions: Assertions,
    entry: Option<CatalogEntry>,
}

enum LoadError {
    /// Input or validation problem (exit 2), with the failing check name
    /// when structural validation identified one.
    Invalid {
        message: String,
        failed_check: Option<&'static str>,
    },
}

impl LoadError {
    fn message(&self) -> &str {
        let LoadError::Invalid { message, .. } = self;
        message
    }
}

fn space_error_check(e: &SpaceError) -> &'static str {
    match e {
        SpaceError::NotSubalgebra { .. } => "isotropy-subalgebra",
        SpaceError::DependentIsotropy | SpaceError::NotComplement => "complement",
        SpaceError::NonReductive { .. } => "reductivity",
        SpaceError::NotInvariant { .. } | SpaceError::FormNotInvariant { .. } => {
            "metric-invariance"
        }
        SpaceError::NotPositiveDefinite { .. } => "positive-definite",
        SpaceError::Form(_) => "structure-constants",
    }
}

fn load_space(source: &str, opts: &CommonOpts) -> Result<LoadedSpace, LoadError> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return load_catalog_entry(name, opts);
    }
    let description =
        SpaceDescription::from_path(Path::new(source)).map_err(|e| LoadError::Invalid {
            message: e.to_string(),
            failed_check: None,
        })?;
    let name = description.name.clone();
    let assertions = description.assertions;
    let space = description
        .to_space(opts.tolerance)
        .map_err(|e| LoadError::Invalid {
            failed_check: Some(match &e {
                SpaceFileError::Algebra(_) => "structure-constants",
                SpaceFileError::Jacobi { .. } => "jacobi",
                SpaceFileError::Space(s) => space_error_check(s),
                _ => "structure-constants",
            }),
            message: e.to_string(),
        })?;
    Ok(LoadedSpace {
        name,
        space,
        assertions,
        entry: None,
    })
}

fn load_catalog_entry(name: &str, opts: &CommonOpts) -> Result<LoadedSpace, LoadError> {
    let entry = catalog::get(name).map_err(|e| LoadError::Invalid {
        message: e.to_string(),
        failed_check: None,
    })?;
    let space = entry
        .build_with_data(opts.f4_data.as_deref())
        .map_err(|e| LoadError::Invalid {
            message: e.to_string(),
            failed_check: None,
        })?;
    // A non-default tolerance re-validates through the description path so
    // every rank decision uses the requested threshold.
    let space = if (opts.tolerance - 1e-8).abs() > f64::EPSILON {
        let description = SpaceDescription::from_space(name, &space, entry.assertions);
        description
            .to_space(opts.tolerance)
            .map_err(|e| LoadError::Invalid {
                message: e.to_string(),
                failed_check: None,
            })?
    } else {
        space
    };
    Ok(LoadedSpace {
        name: name.to_string(),
        space,
        assertions: entry.assertions,
        entry: Some(entry),
    })
}

fn cmd_analyze(source: &str, opts: &CommonOpts) -> ExitCode {
    let loaded = match load_space(source, opts) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(2);
        }
    };
    let report = match report::analyze(
        &loaded.name,
        &loaded.space,
        loaded.assertions,
        &opts.analysis_options(),
    ) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match opts.format {
        FormatArg::Json => println!("{}", report.to_json()),
        FormatArg::Text => print!("{}", report.to_text()),
    }
    if opts.strict {
        if let Some(entry) = &loaded.entry {
            let diff = diff_expected(&entry.expected, &report);
            if !diff.is_empty() {
                for line in &diff {
                    eprintln!("mismatch: {line}");
                }
                return ExitCode::from(4);
            }
            if report.index.status == symmetry_index::IndexStatus::LowerBound {
                eprintln!(
                    "strict: only a lower bound is available for '{}'",
                    loaded.name
                );
                return ExitCode::from(4);
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_check(source: &str, opts: &CommonOpts) -> ExitCode {
    let name = source
        .strip_prefix("catalog:")
        .unwrap_or(source)
        .to_string();
    let (validation, ok) = match load_space(source, opts) {
        Ok(loaded) => (validation_report_ok(&loaded.name, &loaded.space), true),
        Err(LoadError::Invalid {
            message,
            failed_check: Some(check),
        }) => (validation_report_failed(&name, check, message), false),
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(2);
        }
    };
    match opts.format {
        FormatArg::Json => println!("{}", validation.to_json()),
        FormatArg::Text => print!("{}", validation.to_text()),
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn cmd_catalog_list(opts: &CommonOpts) -> ExitCode {
    let entries = catalog::named_catalog();
    match opts.format {
        FormatArg::Json => {
            let summaries: Vec<serde_json::Value> = entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "name": e.name,
                        "summary": e.summary,
                        "gated": e.is_gated(),
                        "assertions": e.assertions,
                        "expected": e.expected,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&summaries).expect("catalog serializes")
            );
        }
        FormatArg::Text => {
            for e in &entries {
                let gated = if e.is_gated() { " [gated]" } else { "" };
                println!("{}{gated}", e.name);
                println!("    {}", e.summary);
                println!(
                    "    expected: dim M = {}, index = {} ({}), symmetric = {} ({})",
                    e.expected.dim_m,
                    e.expected.index.value,
                    e.expected.index.provenance,
                    e.expected.is_symmetric.value,
                    e.expected.is_symmetric.provenance,
                );
                if let Some(l) = &e.expected.leaf_dim {
                    println!("              leaf dim = {} ({})", l.value, l.provenance);
                }
                if let Some(g) = &e.expected.factor_group_type {
                    println!(
                        "              factors group type = {} ({})",
                        g.value, g.provenance
                    );
                }
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_catalog_analyze(name: &str, opts: &CommonOpts) -> ExitCode {
    let source = format!("catalog:{name}");
    let loaded = match load_space(&source, opts) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(2);
        }
    };
    let entry = loaded.entry.clone().expect("catalog source");
    let report = match report::analyze(
        &loaded.name,
        &loaded.space,
        loaded.assertions,
        &opts.analysis_options(),
    ) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let diff = diff_expected(&entry.expected, &report);
    match opts.format {
        FormatArg::Json => {
            let payload = serde_json::json!({
                "report": serde_json::to_value(&report).expect("report serializes"),
                "expected": entry.expected,
                "diff": diff,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&payload).expect("payload serializes")
            );
        }
        FormatArg::Text => {
            print!("{}", report.to_text());
            if diff.is_empty() {
                println!("expected values: all match");
            } else {
                for line in &diff {
                    println!("mismatch: {line}");
                }
            }
        }
    }
    if opts.strict {
        if !diff.is_empty() {
            return ExitCode::from(4);
        }
        if report.index.status == symmetry_index::IndexStatus::LowerBound {
            eprintln!("strict: only a lower bound is available for '{name}'");
            return ExitCode::from(4);
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze { source, opts } => cmd_analyze(source, opts),
        Command::Check { source, opts } => cmd_check(source, opts),
        Command::Catalog { command } => match command {
            CatalogCommand::List { opts } => cmd_catalog_list(opts),
            CatalogCommand::Analyze { name, opts } => cmd_catalog_analyze(name, opts),
        },
    }
}
