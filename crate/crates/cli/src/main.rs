use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dirext::catalog::{self, CatalogEntry, CatalogOptions};
use dirext::decomposition;
use dirext::harness::{self, Report, Verdict, VerifyConfig, VerifyEntry};
use dirext::{Error, Limits};

const PASS: u8 = 0;
const VIOLATION: u8 = 1;
const INPUT_ERROR: u8 = 2;

/// Exhaustive checks of direct-product decompositions over small groups.
#[derive(Parser)]
#[command(name = "dirext", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in catalog and optionally export it.
    Catalog(CatalogArgs),
    /// Check every extension instance in the catalog for a normal complement.
    Verify(VerifyArgs),
    /// Print the Remak decomposition of a group file.
    Decompose(DecomposeArgs),
    /// Run only the property suites and print per-property totals.
    Props(PropsArgs),
    /// Build the order p^4 group with split and non-split extensions.
    Counterexample(CounterexampleArgs),
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, env = "DIREXT_MAX_ORDER", default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    max_order: u32,
    /// Include the selected groups of order 17 to 24.
    #[arg(long)]
    extras: bool,
    /// Include every abelian group of prime-power order.
    #[arg(long)]
    abelian: bool,
    /// Write the catalog as a JSON array of group records.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, env = "DIREXT_MAX_ORDER", default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    max_order: u32,
    #[arg(long, env = "DIREXT_LATTICE_CAP", default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    lattice_cap: u32,
    /// Worker threads; the report does not depend on it.
    #[arg(long, env = "DIREXT_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    /// Where to write the JSON report.
    #[arg(long, env = "DIREXT_REPORT")]
    report: Option<PathBuf>,
    /// Verify the groups in this catalog file instead of the built-in list.
    #[arg(long, env = "DIREXT_CATALOG")]
    catalog: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Also check Remak factors over ten seeded search orders per group.
    #[arg(long, env = "DIREXT_SEED")]
    seed: Option<u64>,
    /// Record per-group wall time (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
    /// Skip the property suites.
    #[arg(long)]
    no_properties: bool,
}

#[derive(Args)]
struct PropsArgs {
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct DecomposeArgs {
    file: PathBuf,
    #[arg(long, env = "DIREXT_LATTICE_CAP", default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    lattice_cap: u32,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, env = "DIREXT_P")]
    p: u64,
    #[arg(long, env = "DIREXT_OUT")]
    out: Option<PathBuf>,
    /// Raise to 81 to run the exhaustive non-split scan for p = 3.
    #[arg(long, env = "DIREXT_LATTICE_CAP", default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    lattice_cap: u32,
}

fn limits(lattice_cap: u32) -> Limits {
    Limits::default().with_lattice_cap(lattice_cap as usize)
}

fn load_entries(run: &RunArgs, limits: &Limits) -> Result<Vec<VerifyEntry>> {
    if let Some(path) = &run.catalog {
        let records = catalog::read_catalog(path)?;
        return Ok(records.iter().enumerate().map(|(i, r)| VerifyEntry::from_record(r, i, limits)).collect());
    }
    let opts = CatalogOptions { limits: *limits, ..CatalogOptions::new(run.max_order as usize) };
    Ok(catalog::builtin_catalog_with(&opts)?
        .into_iter()
        .map(|e| VerifyEntry { name: e.name, group: Ok(e.group) })
        .collect())
}

fn run_catalog(args: &RunArgs, config: &VerifyConfig) -> Result<Report> {
    let entries = load_entries(args, &config.limits)?;
    let report = harness::verify_catalog(&entries, config);
    if let Some(path) = &args.report {
        fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    for g in report.groups.iter().filter(|g| g.error.is_some()) {
        eprintln!("input error in {}: {}", g.name, g.error.as_deref().unwrap_or_default());
    }
    Ok(report)
}

fn exit_code(report: &Report) -> u8 {
    if report.summary.violations > 0 || report.summary.property_failures > 0 {
        VIOLATION
    } else if report.summary.input_errors > 0 {
        INPUT_ERROR
    } else {
        PASS
    }
}

fn verify(args: &VerifyArgs) -> Result<u8> {
    let config = VerifyConfig {
        limits: limits(args.run.lattice_cap),
        jobs: args.run.jobs as usize,
        properties: !args.no_properties,
        timings: args.timings,
        max_order: args.run.catalog.is_none().then_some(args.run.max_order as usize),
        seed: args.seed,
    };
    let report = run_catalog(&args.run, &config)?;
    let s = &report.summary;
    println!(
        "{:?}: {} groups, {} instances, {} violations, {} property failures, {} skipped, {} input errors",
        report.status, s.groups, s.instances, s.violations, s.property_failures, s.skipped, s.input_errors
    );
    Ok(exit_code(&report))
}

#[derive(Serialize, Default)]
struct PropertyTotals {
    groups: usize,
    failed: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failing_groups: Vec<String>,
}

fn props(args: &PropsArgs) -> Result<u8> {
    let config = VerifyConfig {
        limits: limits(args.run.lattice_cap),
        jobs: args.run.jobs as usize,
        max_order: args.run.catalog.is_none().then_some(args.run.max_order as usize),
        ..VerifyConfig::default()
    };
    let report = run_catalog(&args.run, &config)?;
    let mut totals: BTreeMap<&str, PropertyTotals> = BTreeMap::new();
    for g in &report.groups {
        for (name, verdict) in &g.properties {
            let t = totals.entry(name).or_default();
            t.groups += 1;
            if *verdict == Verdict::Fail {
                t.failed += 1;
                t.failing_groups.push(g.name.clone());
            }
        }
    }
    println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "status": report.status, "properties": totals }))?);
    Ok(exit_code(&report))
}

#[derive(Serialize)]
struct FactorOut<'a> {
    order: usize,
    members: Vec<usize>,
    name: Option<&'a str>,
}

fn decompose(args: &DecomposeArgs) -> Result<u8> {
    let limits = limits(args.lattice_cap);
    let g = catalog::import_group_with(&args.file, &limits)?;
    let split = decomposition::remak_decomposition_with(&g, &limits)?;
    let known = reference_catalog()?;
    let factors: Vec<FactorOut> = split
        .factors
        .iter()
        .map(|f| FactorOut {
            order: f.order(),
            members: f.to_vec(),
            name: catalog::identify(&known, &dirext::subgroups::Induced::new(&g, f).group),
        })
        .collect();
    let out = serde_json::json!({ "order": g.order(), "factors": factors });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(PASS)
}

fn reference_catalog() -> Result<Vec<CatalogEntry>> {
    let opts = CatalogOptions { extras: true, ..CatalogOptions::new(24) };
    Ok(catalog::builtin_catalog_with(&opts)?)
}

fn counterexample(args: &CounterexampleArgs) -> Result<u8> {
    let bundle = harness::build_split_counterexample(args.p, &limits(args.lattice_cap))?;
    let text = serde_json::to_string_pretty(&bundle)? + "\n";
    match &args.out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    let c = &bundle.checks;
    let summary = format!(
        "p={} order={} split_complement={} kernel_central={} quotient_elementary={} no_supplement={} \
         not_elementary_abelian={} same_kernel_and_quotient={}",
        bundle.p,
        bundle.group.order(),
        c.split_complement,
        c.kernel_central,
        c.quotient_elementary,
        c.no_supplement.map_or("skipped".to_string(), |b| b.to_string()),
        c.not_elementary_abelian,
        c.same_kernel_and_quotient
    );
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(if c.all_pass() { PASS } else { VIOLATION })
}

fn list_catalog(args: &CatalogArgs) -> Result<u8> {
    let opts = CatalogOptions {
        extras: args.extras,
        abelian_p_groups: args.abelian,
        ..CatalogOptions::new(args.max_order as usize)
    };
    let entries = catalog::builtin_catalog_with(&opts)?;
    if let Some(path) = &args.out {
        catalog::export_catalog(&entries, path)?;
    }
    for e in &entries {
        println!("{:>3}  {:<12} {}", e.group.order(), e.name, e.recipe);
    }
    Ok(PASS)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Catalog(a) => list_catalog(a),
        Command::Verify(a) => verify(a),
        Command::Decompose(a) => decompose(a),
        Command::Props(a) => props(a),
        Command::Counterexample(a) => counterexample(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match e.downcast_ref::<Error>() {
                Some(inner) => eprintln!("error: {inner}"),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(INPUT_ERROR)
        }
    }
}
