//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use dirext::catalog::{self, CatalogEntry, CatalogOptions};
use dirext::decomposition::{self, DirectStructure};
use dirext::harness::{self, Report, Status, VerifyConfig, VerifyEntry, PROPERTY_NAMES};
use dirext::iso;
use dirext::subgroups::{self, Induced, Subgroup};
use dirext::{construct, Limits};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const EXPECTED_COUNTS: [usize; 16] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];
const THEOREM_BUDGET: Duration = Duration::from_secs(300);

fn catalog16() -> &'static [CatalogEntry] {
    static CAT: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CAT.get_or_init(|| catalog::builtin_catalog(16).expect("catalog builds"))
}

fn entries() -> Vec<VerifyEntry> {
    catalog16()
        .iter()
        .map(|e| VerifyEntry { name: e.name.clone(), group: Ok(e.group.clone()) })
        .collect()
}

fn full_report(jobs: usize) -> Report {
    let config = VerifyConfig { jobs, max_order: Some(16), ..VerifyConfig::default() };
    harness::verify_catalog(&entries(), &config)
}

fn serial_report() -> &'static Report {
    static REPORT: OnceLock<Report> = OnceLock::new();
    REPORT.get_or_init(|| full_report(1))
}

fn theorem() -> Check {
    let start = Instant::now();
    let config = VerifyConfig { properties: false, max_order: Some(16), ..VerifyConfig::default() };
    let report = harness::verify_catalog(&entries(), &config);
    let elapsed = start.elapsed();
    ensure!(report.groups.len() == 42, "{} groups", report.groups.len());
    ensure!(report.status == Status::Pass, "status {:?}", report.status);
    ensure!(report.summary.violations == 0, "{} violations", report.summary.violations);
    ensure!(
        report.summary.skipped == 0 && report.summary.input_errors == 0,
        "{} skipped, {} errors",
        report.summary.skipped,
        report.summary.input_errors
    );
    ensure!(elapsed <= THEOREM_BUDGET, "took {elapsed:?}");

    // Independent re-check of every instance and witness.
    for e in catalog16() {
        let g = &e.group;
        let all: Vec<Vec<usize>> = subgroups::all_subgroups(g).unwrap().iter().map(Subgroup::to_vec).collect();
        for inst in harness::extension_instances(g).unwrap() {
            ensure!(inst.is_valid(g), "{}: invalid instance {:?}", e.name, inst.h0);
            let witness = harness::check_direct_extension(g, &inst).unwrap().witness;
            let oracle = common::complements_oracle(g, &all, &inst.h0.to_vec());
            ensure!(
                witness.as_ref().map(Subgroup::to_vec).as_ref() == oracle.first(),
                "{}: witness {:?} vs oracle {:?}",
                e.name,
                witness,
                oracle.first()
            );
        }
    }
    Ok(format!("42 groups, {} instances, 0 violations in {:.2?}", report.summary.instances, elapsed))
}

fn counterexample() -> Check {
    let b2 = harness::build_split_counterexample(2, &Limits::default()).map_err(|e| e.to_string())?;
    ensure!(b2.group.order() == 16, "order {}", b2.group.order());
    ensure!(b2.checks.all_pass() && b2.checks.no_supplement == Some(true), "p=2 checks {:?}", b2.checks);
    ensure!(!b2.checks.isomorphic_to_kernel_times_quotient, "p=2 G is C2^4");

    // The non-split check again, with subgroups from the subset oracle.
    let g = &b2.group;
    let n = b2.n_nonsplit.to_vec();
    let supplement = common::subsets_oracle(g)
        .into_iter()
        .find(|t| t.len() * n.len() == g.order() && t.iter().filter(|x| n.contains(x)).count() == 1);
    ensure!(supplement.is_none(), "oracle found supplement {supplement:?}");

    let limits = Limits::default().with_lattice_cap(81);
    let b3 = harness::build_split_counterexample(3, &limits).map_err(|e| e.to_string())?;
    let c = &b3.checks;
    ensure!(
        c.split_complement && c.kernel_central && c.quotient_elementary && c.not_elementary_abelian
            && c.same_kernel_and_quotient,
        "p=3 checks {c:?}"
    );
    Ok(format!("p=2 all six checks hold; p=3 checks 1-3,5,6 hold, exhaustive scan {:?}", c.no_supplement))
}

fn properties() -> Check {
    let report = serial_report();
    ensure!(report.summary.property_failures == 0, "{} property failures", report.summary.property_failures);
    for g in &report.groups {
        for name in PROPERTY_NAMES {
            ensure!(g.properties.contains_key(name), "{} lacks {name}", g.name);
        }
        ensure!(g.property_failures.is_empty(), "{}: {:?}", g.name, g.property_failures);
    }
    Ok(format!("{} properties x {} groups, 0 failures", PROPERTY_NAMES.len(), report.groups.len()))
}

fn cyclic_complements() -> Check {
    let (mut groups, mut cases, mut dichotomy) = (0, 0, 0);
    for (name, recipe) in catalog::abelian_p_group_recipes(64) {
        let a = construct(&recipe).map_err(|e| e.to_string())?;
        let exp = a.exponent();
        let mut seen = BTreeSet::new();
        for x in a.elements().filter(|&x| a.element_order(x).unwrap() == exp) {
            let d = subgroups::generate_subgroup(&a, &[x]).unwrap();
            if !seen.insert(d.clone()) {
                continue;
            }
            let out = decomposition::cyclic_max_complement(&a, &d).map_err(|e| format!("{name}: {e}"))?;
            ensure!(!out.used_fallback, "{name}: fallback for {:?}", d.to_vec());
            ensure!(decomposition::is_internal_direct(&a, &[d.clone(), out.complement.clone()]), "{name}: invalid");
            dichotomy += usize::from(out.dichotomy_failed);
            cases += 1;
        }
        groups += 1;
    }
    Ok(format!("{groups} abelian p-groups, {cases} maximal cyclic subgroups, no fallback, dichotomy gaps {dichotomy}"))
}

fn oracles() -> Check {
    let opts = CatalogOptions { extras: true, ..CatalogOptions::new(24) };
    let cat = catalog::builtin_catalog_with(&opts).map_err(|e| e.to_string())?;
    let mut normal_checked = 0;
    for e in &cat {
        let g = &e.group;
        let all: Vec<Vec<usize>> = subgroups::all_subgroups(g).unwrap().iter().map(Subgroup::to_vec).collect();
        if g.order() <= 16 {
            ensure!(all == common::subsets_oracle(g), "{}: lattice differs", e.name);
        }
        let ds = DirectStructure::new(g, &Limits::default()).unwrap();
        for n in all.iter().filter(|s| common::is_normal_oracle(g, s)) {
            let n_sub = Subgroup::from_members(g, n).unwrap();
            let got: Vec<Vec<usize>> = ds.direct_complements(&n_sub).unwrap().iter().map(Subgroup::to_vec).collect();
            ensure!(got == common::complements_oracle(g, &all, n), "{}: complements of {n:?}", e.name);
            normal_checked += 1;
        }
    }
    Ok(format!("{} groups up to order 24, {normal_checked} normal subgroups", cat.len()))
}

fn counts() -> Check {
    let cat = catalog16();
    let mut counts = [0usize; 16];
    for e in cat {
        counts[e.group.order() - 1] += 1;
    }
    ensure!(counts == EXPECTED_COUNTS, "counts {counts:?}");
    for (i, a) in cat.iter().enumerate() {
        for b in &cat[i + 1..] {
            ensure!(iso::find_isomorphism(&a.group, &b.group).is_none(), "{} ≅ {}", a.name, b.name);
        }
    }
    Ok(format!("{counts:?}, pairwise non-isomorphic"))
}

fn determinism() -> Check {
    let serial = serial_report().to_json();
    let parallel = full_report(8).to_json();
    ensure!(serial == parallel, "reports differ between 1 and 8 jobs");

    let limits = Limits::default();
    let cat = catalog16();
    let classes = |factors: &[Subgroup], g| {
        let mut names: Vec<&str> = factors
            .iter()
            .filter(|f| !f.is_trivial())
            .map(|f| catalog::identify(cat, &Induced::new(g, f).group).unwrap_or("?"))
            .collect();
        names.sort_unstable();
        names
    };
    for e in cat {
        let base = decomposition::remak_decomposition(&e.group).unwrap();
        let expected = classes(&base.factors, &e.group);
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let split = decomposition::remak_decomposition_shuffled(&e.group, &limits, &mut rng).unwrap();
            ensure!(decomposition::is_internal_direct(&e.group, &split.factors), "{} seed {seed}", e.name);
            let got = classes(&split.factors, &e.group);
            ensure!(got == expected, "{} seed {seed}: {got:?} vs {expected:?}", e.name);
        }
    }
    Ok(format!("{} report bytes identical for jobs 1 and 8; 10 seeds agree on all groups", serial.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 direct extension theorem over order <= 16", theorem),
        ("2 split and non-split extensions of order p^4", counterexample),
        ("3 property suites over order <= 16", properties),
        ("4 constructive cyclic complements in abelian p-groups", cyclic_complements),
        ("5 complement and lattice oracles", oracles),
        ("6 catalog counts", counts),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{t:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why} [{t:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
