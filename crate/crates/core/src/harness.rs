//! Exhaustive verification over catalog groups.
//!
//! For a group `G = H x K` and a normal `H0` with `H0 ≅ H` and `G/H0 ≅ K`,
//! the checker looks for a normal complement of `H0`. Alongside it runs a
//! suite of identities about direct factors that hold for every finite group,
//! and it builds the family of groups of order `p^4` in which one
//! `C_p^2`-by-`C_p^2` extension splits and another does not.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{self, CoprimeOutcome, DirectStructure};
use crate::error::{Error, Result};
use crate::group::{Group, GroupRecord};
use crate::iso::{self, Iso, IsoClassifier};
use crate::limits::Limits;
use crate::recipe::{construct_with, ActionImage, Recipe};
use crate::subgroups::{self, Induced, QuotientMap, Subgroup};

/// The premises: `G = H x K` internally, `H0` normal, `H0 ≅ H` and
/// `G/H0 ≅ K`.
///
/// `iso_h` maps `H0` onto `H` and `iso_k` maps `G/H0` onto `K`, each in the
/// re-indexed numbering of [`Induced`] and [`QuotientMap`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionInstance {
    pub h0: Subgroup,
    pub h: Subgroup,
    pub k: Subgroup,
    pub iso_h: Iso,
    pub iso_k: Iso,
}

impl ExtensionInstance {
    /// Re-checks every premise from scratch.
    pub fn is_valid(&self, g: &Group) -> bool {
        let Ok(q) = subgroups::quotient(g, &self.h0) else { return false };
        decomposition::is_internal_direct(g, &[self.h.clone(), self.k.clone()])
            && self.iso_h.verify(&Induced::new(g, &self.h0).group, &Induced::new(g, &self.h).group)
            && self.iso_k.verify(&q.target, &Induced::new(g, &self.k).group)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremResult {
    pub instance: ExtensionInstance,
    /// A normal complement `K0` of `H0`; `None` would falsify the theorem.
    pub witness: Option<Subgroup>,
}

impl TheoremResult {
    pub fn is_violation(&self) -> bool {
        self.witness.is_none()
    }
}

/// Cached lattice, iso-class and quotient data for one group.
pub struct GroupAnalysis<'g> {
    ds: DirectStructure<'g>,
    classes: IsoClassifier,
    induced: HashMap<Subgroup, (Induced, usize)>,
    quotients: HashMap<Subgroup, (QuotientMap, usize)>,
    remak_classes: HashMap<Subgroup, BTreeSet<usize>>,
}

impl<'g> GroupAnalysis<'g> {
    pub fn new(g: &'g Group, limits: &Limits) -> Result<Self> {
        Ok(Self {
            ds: DirectStructure::new(g, limits)?,
            classes: IsoClassifier::new(),
            induced: HashMap::new(),
            quotients: HashMap::new(),
            remak_classes: HashMap::new(),
        })
    }

    pub fn structure(&self) -> &DirectStructure<'g> {
        &self.ds
    }

    fn group(&self) -> &'g Group {
        self.ds.group()
    }

    fn induced(&mut self, s: &Subgroup) -> &(Induced, usize) {
        if !self.induced.contains_key(s) {
            let ind = Induced::new(self.group(), s);
            let class = self.classes.classify(&ind.group);
            self.induced.insert(s.clone(), (ind, class));
        }
        &self.induced[s]
    }

    fn quotient(&mut self, n: &Subgroup) -> &(QuotientMap, usize) {
        if !self.quotients.contains_key(n) {
            let q = subgroups::quotient_with(self.group(), n, self.ds.limits()).expect("normal subgroup");
            let class = self.classes.classify(&q.target);
            self.quotients.insert(n.clone(), (q, class));
        }
        &self.quotients[n]
    }

    /// Iso classes of the nontrivial Remak factors of a subgroup.
    fn remak_classes(&mut self, s: &Subgroup) -> Result<BTreeSet<usize>> {
        if let Some(c) = self.remak_classes.get(s) {
            return Ok(c.clone());
        }
        let group = self.induced(s).0.group.clone();
        let mut set = BTreeSet::new();
        for f in decomposition::remak_factor_groups(&group, self.ds.limits())? {
            set.insert(self.classes.classify(&f));
        }
        self.remak_classes.insert(s.clone(), set.clone());
        Ok(set)
    }

    fn coprime(&mut self, a: &Subgroup, b: &Subgroup) -> Result<bool> {
        Ok(self.remak_classes(a)?.is_disjoint(&self.remak_classes(b)?))
    }

    /// Every premise triple, over both orientations of each splitting.
    pub fn extension_instances(&mut self) -> Vec<ExtensionInstance> {
        let normal = self.ds.normal_subgroups().to_vec();
        let mut out = Vec::new();
        for (h, k) in self.ds.ordered_splittings() {
            let h_class = self.induced(&h).1;
            let k_class = self.induced(&k).1;
            for h0 in normal.iter().filter(|n| n.order() == h.order()) {
                if self.induced(h0).1 != h_class || self.quotient(h0).1 != k_class {
                    continue;
                }
                let iso_h = iso::find_isomorphism(&self.induced[h0].0.group, &self.induced[&h].0.group)
                    .expect("same iso class");
                let iso_k = iso::find_isomorphism(&self.quotients[h0].0.target, &self.induced[&k].0.group)
                    .expect("same iso class");
                out.push(ExtensionInstance { h0: h0.clone(), h: h.clone(), k: k.clone(), iso_h, iso_k });
            }
        }
        out.sort_by(|a, b| (&a.h0, &a.h, &a.k).cmp(&(&b.h0, &b.h, &b.k)));
        out.dedup_by(|a, b| (&a.h0, &a.h, &a.k) == (&b.h0, &b.h, &b.k));
        out
    }

    pub fn check(&self, inst: &ExtensionInstance) -> TheoremResult {
        let witness = self.ds.direct_complements(&inst.h0).ok().and_then(|c| c.into_iter().next());
        TheoremResult { instance: inst.clone(), witness }
    }

    /// Runs every identity check; `instances` supplies the kernels for the
    /// kernel-specific ones.
    pub fn property_suite(&mut self, instances: &[ExtensionInstance]) -> Result<PropertyReport> {
        let g = self.group();
        let mut report = PropertyReport::default();
        let ordered = self.ds.ordered_splittings();
        let subgroups_all = self.ds.subgroups().to_vec();
        let normal = self.ds.normal_subgroups().to_vec();
        let whole = Subgroup::whole(g);
        let derived = subgroups::derived_subgroup(g);
        let center = subgroups::center(g);

        let p = report.entry(FACTOR_CONTAINMENT);
        for (h, k) in &ordered {
            for l in subgroups_all.iter().filter(|l| h.is_subgroup_of(l)) {
                let (set, _) = subgroups::set_product(g, h, &l.meet(k));
                p.record(set == *l.bits(), || format!("H={:?} K={:?} L={:?}", h.to_vec(), k.to_vec(), l.to_vec()));
            }
        }

        let p = report.entry(DERIVED_AND_CENTER_SPLIT);
        for (h, k) in self.ds.splittings() {
            let (d, _) = subgroups::set_product(g, &subgroups::commutator(g, h, h), &subgroups::commutator(g, k, k));
            let (z, _) = subgroups::set_product(g, &subgroups::center_of(g, h), &subgroups::center_of(g, k));
            p.record(d == *derived.bits() && z == *center.bits(), || {
                format!("H={:?} K={:?}", h.to_vec(), k.to_vec())
            });
        }

        let factors = self.ds.direct_factors();
        let mut coprime_pairs = Vec::new();
        for (i, a) in factors.iter().enumerate() {
            for b in &factors[i..] {
                if self.coprime(a, b)? {
                    coprime_pairs.push((a.clone(), b.clone()));
                }
            }
        }
        let p = report.entry(COPRIME_FACTOR_PRODUCT);
        for (a, b) in &coprime_pairs {
            let outcome = self.ds.combine_coprime_unchecked(a, b);
            p.record(matches!(outcome, CoprimeOutcome::Combined { .. }), || {
                format!("A={:?} B={:?}: {outcome:?}", a.to_vec(), b.to_vec())
            });
        }

        let mut projections = Vec::new();
        for (b, c) in &ordered {
            for a in &factors {
                if self.coprime(a, b)? {
                    projections.push((b.clone(), c.clone(), a.clone()));
                }
            }
        }
        let p = report.entry(COPRIME_PROJECTION);
        for (b, c, a) in &projections {
            let proj = decomposition::project_unchecked(g, b, c, a);
            p.record(self.ds.is_direct_factor(&proj), || {
                format!("B={:?} C={:?} A={:?}", b.to_vec(), c.to_vec(), a.to_vec())
            });
        }

        let remak = self.ds.remak()?;
        let decomposable: Vec<Subgroup> =
            normal.iter().filter(|d| self.ds.is_directly_decomposable(d)).cloned().collect();
        let p = report.entry(DECOMPOSABLE_DISTRIBUTES);
        for d in &decomposable {
            let mut acc = Subgroup::trivial(g);
            for f in &remak.factors {
                let (set, _) = subgroups::set_product(g, &acc, &f.meet(d));
                acc = Subgroup::from_bits_unchecked(set);
            }
            p.record(acc == *d, || format!("D={:?}", d.to_vec()));
        }
        let p = report.entry(DECOMPOSABLE_QUOTIENT_SPLITS);
        for d in &decomposable {
            let q = subgroups::quotient_with(g, d, self.ds.limits())?;
            let images: Vec<Subgroup> = remak.factors.iter().map(|f| q.image(f)).collect();
            p.record(decomposition::is_internal_direct(&q.target, &images), || format!("D={:?}", d.to_vec()));
        }

        let p = report.entry(DERIVED_OF_NORMAL_DECOMPOSABLE);
        for t in &normal {
            let t_derived = subgroups::commutator(g, t, t);
            if t_derived == t.meet(&derived) {
                p.record(self.ds.is_directly_decomposable(&t_derived), || format!("T={:?}", t.to_vec()));
            }
        }

        let kernels: BTreeSet<&Subgroup> = instances.iter().map(|i| &i.h0).collect();
        for h0 in kernels {
            let h0_derived = subgroups::commutator(g, h0, h0);
            report.entry(KERNEL_DERIVED_INTERSECTION).record(h0_derived == h0.meet(&derived), || {
                format!("H0={:?}", h0.to_vec())
            });

            let has_m = normal.iter().any(|m| {
                m.meet(h0) == h0_derived && subgroups::set_product(g, m, h0).0 == *whole.bits()
            });
            report.entry(ABELIANIZATION_COMPLEMENT).record(has_m, || format!("H0={:?}", h0.to_vec()));

            let h0_center = subgroups::center_of(g, h0);
            report.entry(KERNEL_CENTER_INTERSECTION).record(h0_center == h0.meet(&center), || {
                format!("H0={:?}", h0.to_vec())
            });

            let want = center.order() / h0_center.order();
            let complemented = h0_center.is_subgroup_of(&center)
                && subgroups_all.iter().any(|s| {
                    s.order() == want && s.is_subgroup_of(&center) && s.meets_trivially(&h0_center)
                });
            report.entry(KERNEL_CENTER_COMPLEMENTED).record(complemented, || format!("H0={:?}", h0.to_vec()));
        }
        Ok(report)
    }
}

impl GroupAnalysis<'_> {
    /// Iso classes of the Remak factors found along `runs` shuffled search
    /// orders must all agree with the unshuffled decomposition.
    pub fn remak_order_independent(&mut self, seed: u64, runs: u64) -> Result<PropertyOutcome> {
        let base = self.ds.remak()?;
        let expected = self.factor_classes(&base.factors);
        let mut outcome = PropertyOutcome::default();
        for run in 0..runs {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(run));
            let split = decomposition::remak_decomposition_shuffled(self.group(), self.ds.limits(), &mut rng)?;
            let got = self.factor_classes(&split.factors);
            outcome.record(got == expected, || format!("seed {}: classes {got:?} vs {expected:?}", seed.wrapping_add(run)));
        }
        Ok(outcome)
    }

    fn factor_classes(&mut self, factors: &[Subgroup]) -> Vec<usize> {
        let mut classes: Vec<usize> =
            factors.iter().filter(|f| !f.is_trivial()).map(|f| self.induced(f).1).collect();
        classes.sort_unstable();
        classes
    }
}

pub const DIRECT_EXTENSION: &str = "direct_extension";
pub const WITNESS_REVALIDATES: &str = "witness_revalidates";
pub const REMAK_ORDER_INDEPENDENT: &str = "remak_order_independent";
pub const FACTOR_CONTAINMENT: &str = "factor_containment";
pub const DERIVED_AND_CENTER_SPLIT: &str = "derived_and_center_split";
pub const COPRIME_FACTOR_PRODUCT: &str = "coprime_factor_product";
pub const COPRIME_PROJECTION: &str = "coprime_projection";
pub const DECOMPOSABLE_DISTRIBUTES: &str = "decomposable_distributes";
pub const DECOMPOSABLE_QUOTIENT_SPLITS: &str = "decomposable_quotient_splits";
pub const DERIVED_OF_NORMAL_DECOMPOSABLE: &str = "derived_of_normal_decomposable";
pub const KERNEL_DERIVED_INTERSECTION: &str = "kernel_derived_intersection";
pub const ABELIANIZATION_COMPLEMENT: &str = "abelianization_complement";
pub const KERNEL_CENTER_INTERSECTION: &str = "kernel_center_intersection";
pub const KERNEL_CENTER_COMPLEMENTED: &str = "kernel_center_complemented";

/// Properties every group reports, in report order.
pub const PROPERTY_NAMES: [&str; 11] = [
    FACTOR_CONTAINMENT,
    DERIVED_AND_CENTER_SPLIT,
    COPRIME_FACTOR_PRODUCT,
    COPRIME_PROJECTION,
    DECOMPOSABLE_DISTRIBUTES,
    DECOMPOSABLE_QUOTIENT_SPLITS,
    DERIVED_OF_NORMAL_DECOMPOSABLE,
    KERNEL_DERIVED_INTERSECTION,
    ABELIANIZATION_COMPLEMENT,
    KERNEL_CENTER_INTERSECTION,
    KERNEL_CENTER_COMPLEMENTED,
];

const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub checked: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl PropertyOutcome {
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PropertyReport {
    pub properties: BTreeMap<&'static str, PropertyOutcome>,
}

impl PropertyReport {
    fn entry(&mut self, name: &'static str) -> &mut PropertyOutcome {
        self.properties.entry(name).or_default()
    }

    pub fn failures(&self) -> usize {
        self.properties.values().map(|p| p.failed).sum()
    }
}

pub fn extension_instances(g: &Group) -> Result<Vec<ExtensionInstance>> {
    extension_instances_with(g, &Limits::default())
}

pub fn extension_instances_with(g: &Group, limits: &Limits) -> Result<Vec<ExtensionInstance>> {
    Ok(GroupAnalysis::new(g, limits)?.extension_instances())
}

pub fn check_direct_extension(g: &Group, inst: &ExtensionInstance) -> Result<TheoremResult> {
    let ds = DirectStructure::new(g, &Limits::default().with_lattice_cap(g.order().max(64)))?;
    let witness = ds.direct_complements(&inst.h0)?.into_iter().next();
    Ok(TheoremResult { instance: inst.clone(), witness })
}

pub fn property_suite(g: &Group) -> Result<PropertyReport> {
    property_suite_with(g, &Limits::default())
}

pub fn property_suite_with(g: &Group, limits: &Limits) -> Result<PropertyReport> {
    let mut analysis = GroupAnalysis::new(g, limits)?;
    let instances = analysis.extension_instances();
    analysis.property_suite(&instances)
}

/// The `p^4` group `(A ⋉ (B x C)) x D` with every factor cyclic of order
/// `p` and `A` acting by `(b, c) -> (b, c + b)`, plus the subgroups that
/// exhibit a split and a non-split extension of `C_p^2` by `C_p^2`.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleBundle {
    pub p: u64,
    #[serde(serialize_with = "serialize_group")]
    pub group: Group,
    /// `B x C`, normal with the subgroup complement `A x D`.
    pub n_split: Subgroup,
    pub t_split: Subgroup,
    /// `C x D`, central and without any complement.
    pub n_nonsplit: Subgroup,
    pub checks: CounterexampleChecks,
}

fn serialize_group<S: serde::Serializer>(g: &Group, s: S) -> std::result::Result<S::Ok, S::Error> {
    g.to_record().serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleChecks {
    /// `B x C` is normal and `A x D` meets it trivially with product `G`.
    pub split_complement: bool,
    /// `C x D` lies in the center.
    pub kernel_central: bool,
    /// `G / (C x D)` is elementary abelian of rank 2.
    pub quotient_elementary: bool,
    /// No subgroup at all complements `C x D`; `None` when `|G|` exceeds the
    /// lattice cap and the scan was skipped.
    pub no_supplement: Option<bool>,
    /// `G` is not elementary abelian of rank 4.
    pub not_elementary_abelian: bool,
    /// Both kernels and both quotients are `C_p^2`, while `G` is not
    /// isomorphic to `C_p^2 x C_p^2`.
    pub same_kernel_and_quotient: bool,
    pub isomorphic_to_kernel_times_quotient: bool,
}

impl CounterexampleChecks {
    /// All checks that ran passed.
    pub fn all_pass(&self) -> bool {
        self.split_complement
            && self.kernel_central
            && self.quotient_elementary
            && self.no_supplement != Some(false)
            && self.not_elementary_abelian
            && self.same_kernel_and_quotient
    }
}

pub fn counterexample_recipe(p: usize) -> Recipe {
    let image = (0..p * p).map(|i| (i / p) * p + (i % p + i / p) % p).collect();
    let inner = Recipe::semidirect(
        Recipe::product(Recipe::Cyclic(p), Recipe::Cyclic(p)),
        Recipe::Cyclic(p),
        vec![ActionImage { element: 1, image }],
    );
    Recipe::product(inner, Recipe::Cyclic(p))
}

pub fn build_split_counterexample(p: u64, limits: &Limits) -> Result<CounterexampleBundle> {
    if !subgroups::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let order = (p as usize).checked_pow(4).unwrap_or(usize::MAX);
    if order > limits.order_cap {
        return Err(Error::OrderBound { what: "construction", order, cap: limits.order_cap });
    }
    let p = p as usize;
    let g = construct_with(&counterexample_recipe(p), limits)?;
    // (a, b, c, d) sits at a p^3 + b p^2 + c p + d.
    let index = |a: usize, b: usize, c: usize, d: usize| ((a * p + b) * p + c) * p + d;
    let span = |f: &dyn Fn(usize, usize) -> usize| -> Result<Subgroup> {
        let members: Vec<usize> = (0..p).flat_map(|x| (0..p).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect();
        Subgroup::from_members(&g, &members)
    };
    let n_split = span(&|b, c| index(0, b, c, 0))?;
    let t_split = span(&|a, d| index(a, 0, 0, d))?;
    let n_nonsplit = span(&|c, d| index(0, 0, c, d))?;

    let cp = construct_with(&Recipe::Cyclic(p), limits)?;
    let cp2 = construct_with(&Recipe::product(Recipe::Cyclic(p), Recipe::Cyclic(p)), limits)?;
    let cp4 = construct_with(
        &Recipe::product_of([Recipe::Cyclic(p), Recipe::Cyclic(p), Recipe::Cyclic(p), Recipe::Cyclic(p)]),
        limits,
    )?;
    let h_times_k = construct_with(
        &Recipe::product(
            Recipe::product(Recipe::Cyclic(p), Recipe::Cyclic(p)),
            Recipe::product(Recipe::Cyclic(p), Recipe::Cyclic(p)),
        ),
        limits,
    )?;
    debug_assert_eq!(cp.order(), p);

    let whole = Subgroup::whole(&g);
    let split_complement = subgroups::is_normal(&g, &n_split)
        && t_split.meets_trivially(&n_split)
        && subgroups::set_product(&g, &t_split, &n_split).0 == *whole.bits();
    let kernel_central = n_nonsplit.is_subgroup_of(&subgroups::center(&g));
    let q_nonsplit = subgroups::quotient_with(&g, &n_nonsplit, limits)?;
    let q_split = subgroups::quotient_with(&g, &n_split, limits)?;
    let quotient_elementary = iso::are_isomorphic(&q_nonsplit.target, &cp2);
    let no_supplement = if g.order() <= limits.lattice_cap {
        let all = subgroups::all_subgroups_with(&g, limits)?;
        Some(!all.iter().any(|t| {
            t.meets_trivially(&n_nonsplit) && subgroups::set_product(&g, t, &n_nonsplit).0 == *whole.bits()
        }))
    } else {
        None
    };
    let not_elementary_abelian = !iso::are_isomorphic(&g, &cp4);
    let isomorphic_to_kernel_times_quotient = iso::are_isomorphic(&g, &h_times_k);
    let same_kernel_and_quotient = iso::are_isomorphic(&Induced::new(&g, &n_split).group, &cp2)
        && iso::are_isomorphic(&Induced::new(&g, &n_nonsplit).group, &cp2)
        && iso::are_isomorphic(&q_split.target, &cp2)
        && quotient_elementary
        && !isomorphic_to_kernel_times_quotient;

    Ok(CounterexampleBundle {
        p: p as u64,
        group: g.with_name(format!("(C{p}:(C{p}xC{p}))xC{p}")),
        n_split,
        t_split,
        n_nonsplit,
        checks: CounterexampleChecks {
            split_complement,
            kernel_central,
            quotient_elementary,
            no_supplement,
            not_elementary_abelian,
            same_kernel_and_quotient,
            isomorphic_to_kernel_times_quotient,
        },
    })
}

/// One group to verify; `group` carries the input error when the entry
/// could not be built.
#[derive(Debug)]
pub struct VerifyEntry {
    pub name: String,
    pub group: Result<Group>,
}

impl VerifyEntry {
    pub fn from_record(record: &GroupRecord, index: usize, limits: &Limits) -> Self {
        Self {
            name: record.name.clone().unwrap_or_else(|| format!("entry{index}")),
            group: record.to_group(limits),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub limits: Limits,
    pub jobs: usize,
    pub properties: bool,
    pub timings: bool,
    pub max_order: Option<usize>,
    /// Enables the shuffled Remak check, ten search orders per group.
    pub seed: Option<u64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { limits: Limits::default(), jobs: 1, properties: true, timings: false, max_order: None, seed: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Serialized context of a theorem violation: enough to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub group: GroupRecord,
    pub instance: ExtensionInstance,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub name: String,
    pub order: usize,
    pub instances: usize,
    pub violations: Vec<Violation>,
    pub properties: BTreeMap<String, Verdict>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub property_failures: BTreeMap<String, PropertyOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

impl GroupReport {
    fn empty(name: String, order: usize) -> Self {
        Self {
            name,
            order,
            instances: 0,
            violations: Vec::new(),
            properties: BTreeMap::new(),
            property_failures: BTreeMap::new(),
            skipped: None,
            error: None,
            ms: None,
        }
    }

    pub fn property_failure_count(&self) -> usize {
        self.property_failures.values().map(|p| p.failed).sum()
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub groups: usize,
    pub instances: usize,
    pub violations: usize,
    pub property_failures: usize,
    pub skipped: usize,
    pub input_errors: usize,
}

/// Configuration echoed into the report. Parallelism is deliberately absent
/// so reports are identical for every job count.
#[derive(Debug, Clone, Serialize)]
pub struct ReportConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    pub lattice_cap: usize,
    pub order_cap: usize,
    pub properties: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub status: Status,
    pub summary: Summary,
    pub groups: Vec<GroupReport>,
    pub config: ReportConfig,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Theorem check plus (optionally) the property suite for one group.
pub fn verify_group(name: &str, g: &Group, config: &VerifyConfig) -> GroupReport {
    let start = Instant::now();
    let mut report = GroupReport::empty(name.to_string(), g.order());
    let mut analysis = match GroupAnalysis::new(g, &config.limits) {
        Ok(a) => a,
        Err(e @ Error::OrderBound { .. }) => {
            report.skipped = Some(e.to_string());
            return report;
        }
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let instances = analysis.extension_instances();
    report.instances = instances.len();

    let mut theorem = PropertyOutcome::default();
    let mut revalidates = PropertyOutcome::default();
    for inst in &instances {
        let result = analysis.check(inst);
        theorem.record(!result.is_violation(), || format!("H0={:?}", inst.h0.to_vec()));
        match &result.witness {
            None => report.violations.push(Violation { group: g.to_record(), instance: inst.clone() }),
            Some(w) => revalidates.record(decomposition::is_internal_direct(g, &[inst.h0.clone(), w.clone()]), || {
                format!("H0={:?} K0={:?}", inst.h0.to_vec(), w.to_vec())
            }),
        }
    }
    let mut outcomes = BTreeMap::from([(DIRECT_EXTENSION, theorem), (WITNESS_REVALIDATES, revalidates)]);
    if config.properties {
        match analysis.property_suite(&instances) {
            Ok(props) => outcomes.extend(props.properties),
            Err(e) => report.error = Some(e.to_string()),
        }
    }
    if let Some(seed) = config.seed {
        match analysis.remak_order_independent(seed, 10) {
            Ok(o) => {
                outcomes.insert(REMAK_ORDER_INDEPENDENT, o);
            }
            Err(e) => report.error = Some(e.to_string()),
        }
    }
    for (name, outcome) in outcomes {
        report.properties.insert(name.to_string(), if outcome.passed() { Verdict::Pass } else { Verdict::Fail });
        if !outcome.passed() {
            report.property_failures.insert(name.to_string(), outcome);
        }
    }
    if config.timings {
        report.ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

/// Verifies every entry and aggregates a deterministic report. Entries are
/// processed in parallel on `config.jobs` threads; output order follows the
/// input order.
pub fn verify_catalog(entries: &[VerifyEntry], config: &VerifyConfig) -> Report {
    let run = |entry: &VerifyEntry| match &entry.group {
        Ok(g) => verify_group(&entry.name, g, config),
        Err(e) => {
            let mut r = GroupReport::empty(entry.name.clone(), 0);
            r.error = Some(e.to_string());
            r
        }
    };
    let groups: Vec<GroupReport> = match rayon::ThreadPoolBuilder::new().num_threads(config.jobs.max(1)).build() {
        Ok(pool) => pool.install(|| entries.par_iter().map(run).collect()),
        Err(_) => entries.iter().map(run).collect(),
    };
    let mut summary = Summary { groups: groups.len(), ..Summary::default() };
    for r in &groups {
        summary.instances += r.instances;
        summary.violations += r.violations.len();
        summary.property_failures += r.property_failure_count();
        summary.skipped += usize::from(r.skipped.is_some());
        summary.input_errors += usize::from(r.error.is_some());
    }
    let status = if summary.violations == 0 && summary.property_failures == 0 { Status::Pass } else { Status::Fail };
    Report {
        status,
        summary,
        groups,
        config: ReportConfig {
            max_order: config.max_order,
            lattice_cap: config.limits.lattice_cap,
            order_cap: config.limits.order_cap,
            properties: config.properties,
            seed: config.seed,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recipe::construct;

    fn build(r: &str) -> Group {
        construct(&r.parse().unwrap()).unwrap()
    }

    #[test]
    fn trivial_group_has_one_instance() {
        let g = Group::trivial();
        let inst = extension_instances(&g).unwrap();
        assert_eq!(inst.len(), 1);
        let r = check_direct_extension(&g, &inst[0]).unwrap();
        assert_eq!(r.witness, Some(Subgroup::whole(&g)));
        let props = property_suite(&g).unwrap();
        assert_eq!(props.failures(), 0);
    }

    #[test]
    fn twisted_diagonal_kernel() {
        // S3 x C2 with (s, e) at 2s + e; odd permutations of S3 are 1, 2, 5.
        let g = build("P(S(3),C(2))");
        let s3 = Subgroup::from_members(&g, &[0, 2, 4, 6, 8, 10]).unwrap();
        let c2 = Subgroup::from_members(&g, &[0, 1]).unwrap();
        let twisted = Subgroup::from_members(&g, &[0, 3, 5, 6, 8, 11]).unwrap();
        let all = extension_instances(&g).unwrap();
        let oriented: Vec<_> = all.iter().filter(|i| i.h == s3 && i.k == c2).collect();
        assert_eq!(oriented.len(), 2);
        let inst = oriented.iter().find(|i| i.h0 == twisted).unwrap();
        assert!(inst.is_valid(&g));
        let r = check_direct_extension(&g, inst).unwrap();
        assert_eq!(r.witness, Some(c2.clone()));
        // The derived subgroup of the twisted copy is the order-3 subgroup.
        let derived = subgroups::derived_subgroup(&g);
        assert_eq!(subgroups::commutator(&g, &twisted, &twisted), twisted.meet(&derived));
        assert_eq!(derived.order(), 3);
    }

    #[test]
    fn quaternion_only_has_trivial_splitting_instances() {
        let g = build("Dic(2)");
        let inst = extension_instances(&g).unwrap();
        assert!(inst.iter().all(|i| i.h.is_trivial() || i.k.is_trivial()));
        assert_eq!(inst.len(), 2);
    }

    #[test]
    fn klein_four_witnesses() {
        let g = build("P(C(2),C(2))");
        let (a, b) = (Subgroup::from_members(&g, &[0, 2]).unwrap(), Subgroup::from_members(&g, &[0, 1]).unwrap());
        for inst in extension_instances(&g).unwrap().iter().filter(|i| i.h == a && i.k == b) {
            let w = check_direct_extension(&g, inst).unwrap().witness.unwrap();
            assert_eq!(w.order(), 2);
            assert_ne!(w, inst.h0);
        }
    }

    #[test]
    fn counterexample_p2() {
        let bundle = build_split_counterexample(2, &Limits::default()).unwrap();
        assert_eq!(bundle.group.order(), 16);
        assert!(bundle.checks.all_pass(), "{:?}", bundle.checks);
        assert_eq!(bundle.checks.no_supplement, Some(true));
        assert!(bundle.n_nonsplit.is_subgroup_of(&subgroups::center(&bundle.group)));
        assert!(matches!(build_split_counterexample(4, &Limits::default()), Err(Error::NotPrime(4))));
        assert!(matches!(build_split_counterexample(7, &Limits::default()), Err(Error::OrderBound { .. })));
    }

    #[test]
    fn seeded_remak_check() {
        let g = build("P(P(C(2),C(2)),C(3))");
        let mut a = GroupAnalysis::new(&g, &Limits::default()).unwrap();
        let o = a.remak_order_independent(5, 10).unwrap();
        assert_eq!((o.checked, o.failed), (10, 0));
        let config = VerifyConfig { seed: Some(5), ..VerifyConfig::default() };
        let r = verify_group("C2xC6", &g, &config);
        assert_eq!(r.properties.get(REMAK_ORDER_INDEPENDENT), Some(&Verdict::Pass));
    }

    #[test]
    fn corrupted_entry_is_an_input_error() {
        let mut record = build("C(3)").to_record();
        record.table[1][1] = 0;
        let entries = vec![
            VerifyEntry { name: "C1".into(), group: Ok(Group::trivial()) },
            VerifyEntry::from_record(&record, 1, &Limits::default()),
        ];
        let report = verify_catalog(&entries, &VerifyConfig::default());
        assert_eq!(report.status, Status::Pass);
        assert_eq!(report.summary.input_errors, 1);
        assert_eq!(report.summary.violations, 0);
        assert_eq!(report.groups[0].instances, 1);
    }
}
