//! Batch CLI for the tessellation engine.
//!
//! `tess run` enumerates perfect-form classes for one or more imaginary
//! quadratic fields and caches the reports; `tess report` renders cached
//! reports as a table; `tess export` writes per-class geometry files.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tess_core::pipeline::{
    export_geometry, load_cached, paper_range, render_table, run_range, RunConfig, RunManifest,
    TableFormat, TessellationReport,
};
use tess_core::qfield::make_context;

const CACHE_ENV: &str = "TESS_CACHE_DIR";

#[derive(Parser)]
#[command(
    name = "tess",
    version,
    about = "Perfect-form tessellations of hyperbolic 3-space over imaginary quadratic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate classes for the selected fields and cache the reports.
    Run(RunArgs),
    /// Render cached reports as a class-count table.
    Report(ReportArgs),
    /// Export per-class geometry files from cached reports.
    Export(ExportArgs),
}

#[derive(Args)]
struct Selection {
    /// A single square-free negative d (repeatable).
    #[arg(long = "d", allow_hyphen_values = true, value_parser = clap::value_parser!(i64))]
    d: Vec<i64>,

    /// An inclusive range like "-1..-100"; non-square-free values are
    /// skipped.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,

    /// The full survey list: every square-free -100 ≤ d ≤ -1 plus
    /// {-115, -123, -163, -187, -235, -267, -403, -427}.
    #[arg(long)]
    paper_range: bool,

    /// Keep only fields with these class numbers (comma-separated).
    #[arg(long, value_delimiter = ',')]
    class_number: Vec<u64>,
}

impl Selection {
    fn resolve(&self) -> anyhow::Result<Vec<i64>> {
        let mut ds: Vec<i64> = Vec::new();
        ds.extend(&self.d);
        if let Some(range) = &self.range {
            ds.extend(parse_range(range)?);
        }
        if self.paper_range {
            ds.extend(paper_range());
        }
        // First-occurrence dedup, preserving the requested order.
        let mut seen = std::collections::HashSet::new();
        ds.retain(|d| seen.insert(*d));
        if !self.class_number.is_empty() {
            ds.retain(|&d| {
                make_context(d)
                    .map(|ctx| self.class_number.contains(&ctx.class_number()))
                    .unwrap_or(true) // invalid d stays selected and fails visibly
            });
        }
        Ok(ds)
    }
}

fn parse_range(s: &str) -> anyhow::Result<Vec<i64>> {
    let (a, b) = s
        .split_once("..")
        .with_context(|| format!("range must look like -1..-100, got {s}"))?;
    let a: i64 = a.trim().parse().context("range start")?;
    let b: i64 = b.trim().parse().context("range end")?;
    let (lo, hi) = (a.min(b), a.max(b));
    if hi >= 0 {
        bail!("range must be negative, got {s}");
    }
    // From small |d| to large, square-free only.
    Ok((lo..=hi)
        .rev()
        .filter(|&d| make_context(d).is_ok())
        .collect())
}

#[derive(Args)]
struct CacheArg {
    /// Cache directory (default: $TESS_CACHE_DIR or ./tess-cache).
    #[arg(long)]
    cache: Option<PathBuf>,
}

impl CacheArg {
    fn dir(&self) -> PathBuf {
        self.cache
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("tess-cache"))
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    selection: Selection,
    #[command(flatten)]
    cache: CacheArg,
    /// Worker count for field-level parallelism.
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    /// Recompute even when a cached report exists.
    #[arg(long)]
    force: bool,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Md,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    selection: Selection,
    #[command(flatten)]
    cache: CacheArg,
    #[arg(long, value_enum, default_value = "md")]
    format: FormatArg,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    selection: Selection,
    #[command(flatten)]
    cache: CacheArg,
    /// Output directory for the geometry files.
    #[arg(long)]
    geometry: PathBuf,
    /// Also write an OFF mesh per class.
    #[arg(long)]
    off: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Report(args) => cmd_report(args),
        Command::Export(args) => cmd_export(args),
    }
}

fn cmd_run(args: RunArgs) -> anyhow::Result<ExitCode> {
    let ds = args.selection.resolve()?;
    if ds.is_empty() {
        bail!("no fields selected; use --d, --range or --paper-range");
    }
    let config = RunConfig {
        cache_dir: args.cache.dir(),
        jobs: args.jobs,
        force: args.force,
    };
    let manifest = run_range(&ds, &config);
    print_manifest(&manifest);
    let manifest_path = config.cache_dir.join("manifest.json");
    std::fs::create_dir_all(&config.cache_dir)?;
    std::fs::write(&manifest_path, serde_json::to_vec_pretty(&manifest)?)?;
    eprintln!("manifest written to {}", manifest_path.display());
    Ok(if manifest.all_done() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn print_manifest(manifest: &RunManifest) {
    use tess_core::pipeline::FieldStatus;
    for entry in &manifest.entries {
        match &entry.status {
            FieldStatus::Done {
                cached,
                total_classes,
                duration_ms,
                ..
            } => {
                let src = if *cached { "cache" } else { "computed" };
                println!(
                    "d={}: {} classes ({src}, {duration_ms} ms)",
                    entry.d, total_classes
                );
            }
            FieldStatus::Failed { error } => {
                println!("d={}: FAILED: {error}", entry.d);
            }
        }
    }
}

/// Loads the cached reports of a selection; with an empty selection, all
/// reports present in the cache.
fn load_selection(
    selection: &Selection,
    cache_dir: &std::path::Path,
) -> anyhow::Result<Vec<TessellationReport>> {
    let ds = selection.resolve()?;
    let mut reports = Vec::new();
    if ds.is_empty() {
        let version_dir = cache_dir.join(format!("v{}", tess_core::pipeline::SCHEMA_VERSION));
        let entries = match std::fs::read_dir(&version_dir) {
            Ok(e) => e,
            Err(_) => bail!(
                "no cached reports under {}; run `tess run` first",
                cache_dir.display()
            ),
        };
        let mut cached_ds = Vec::new();
        for entry in entries {
            let name = entry?.file_name();
            let name = name.to_string_lossy();
            if let Some(d) = name
                .strip_prefix('d')
                .and_then(|s| s.strip_suffix(".json"))
                .and_then(|s| s.parse::<i64>().ok())
            {
                cached_ds.push(d);
            }
        }
        cached_ds.sort_by_key(|d| (d.unsigned_abs(), *d));
        for d in cached_ds {
            if let Some(r) = load_cached(cache_dir, d)? {
                reports.push(r);
            }
        }
    } else {
        for d in ds {
            match load_cached(cache_dir, d)? {
                Some(r) => reports.push(r),
                None => bail!("no cached report for d = {d}; run `tess run --d {d}` first"),
            }
        }
    }
    Ok(reports)
}

fn cmd_report(args: ReportArgs) -> anyhow::Result<ExitCode> {
    let reports = load_selection(&args.selection, &args.cache.dir())?;
    let format = match args.format {
        FormatArg::Json => TableFormat::Json,
        FormatArg::Csv => TableFormat::Csv,
        FormatArg::Md => TableFormat::Markdown,
    };
    print!("{}", render_table(&reports, format));
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(args: ExportArgs) -> anyhow::Result<ExitCode> {
    let reports = load_selection(&args.selection, &args.cache.dir())?;
    let mut count = 0;
    for report in &reports {
        count += export_geometry(report, &args.geometry, args.off)?.len();
    }
    eprintln!("wrote {count} files to {}", args.geometry.display());
    Ok(ExitCode::SUCCESS)
}
