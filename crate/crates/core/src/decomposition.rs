//! Internal direct products: complements, splittings, Remak decompositions,
//! coprime factors and directly decomposable subgroups.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::iso;
use crate::limits::Limits;
use crate::subgroups::{self, Induced, Subgroup};

/// An internal direct product decomposition `G = F1 x ... x Fm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Splitting {
    pub factors: Vec<Subgroup>,
}

impl Splitting {
    pub fn orders(&self) -> Vec<usize> {
        self.factors.iter().map(Subgroup::order).collect()
    }
}

/// True iff every factor is normal, distinct factors commute, each factor
/// meets the join of the others trivially and the orders multiply to `|G|`.
pub fn is_internal_direct(g: &Group, factors: &[Subgroup]) -> bool {
    if factors.iter().any(|f| f.bits().universe() != g.order()) {
        return false;
    }
    if factors.iter().map(Subgroup::order).product::<usize>() != g.order() {
        return false;
    }
    if !factors.iter().all(|f| subgroups::is_normal(g, f)) {
        return false;
    }
    for (i, f) in factors.iter().enumerate() {
        for other in &factors[i + 1..] {
            if f.members().any(|x| other.members().any(|y| g.mul(x, y) != g.mul(y, x))) {
                return false;
            }
        }
        let rest = subgroups::join_all(g, factors.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| s));
        if !f.meets_trivially(&rest) {
            return false;
        }
    }
    true
}

/// Lattice data for one group, computed once and shared by the direct
/// product queries.
#[derive(Debug, Clone)]
pub struct DirectStructure<'g> {
    group: &'g Group,
    limits: Limits,
    subgroups: Vec<Subgroup>,
    normal: Vec<Subgroup>,
    splittings: Vec<(Subgroup, Subgroup)>,
}

impl<'g> DirectStructure<'g> {
    pub fn new(group: &'g Group, limits: &Limits) -> Result<Self> {
        let subgroups = subgroups::all_subgroups_with(group, limits)?;
        let normal: Vec<Subgroup> =
            subgroups.iter().filter(|s| subgroups::is_normal(group, s)).cloned().collect();
        let n = group.order();
        let mut splittings = Vec::new();
        for (i, h) in normal.iter().enumerate() {
            let want = n / h.order();
            if h.order() * want != n || want < h.order() {
                continue;
            }
            for k in &normal[i..] {
                if k.order() == want && h.meets_trivially(k) {
                    splittings.push((h.clone(), k.clone()));
                }
            }
        }
        splittings.sort();
        Ok(Self { group, limits: *limits, subgroups, normal, splittings })
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn normal_subgroups(&self) -> &[Subgroup] {
        &self.normal
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        self.normal.binary_search(s).is_ok()
    }

    /// Unordered direct splittings `{H, K}` with `H <= K` canonically,
    /// including `{1, G}`.
    pub fn splittings(&self) -> &[(Subgroup, Subgroup)] {
        &self.splittings
    }

    /// Both orientations of every splitting, deduplicated.
    pub fn ordered_splittings(&self) -> Vec<(Subgroup, Subgroup)> {
        let mut out = Vec::with_capacity(2 * self.splittings.len());
        for (h, k) in &self.splittings {
            out.push((h.clone(), k.clone()));
            if h != k {
                out.push((k.clone(), h.clone()));
            }
        }
        out.sort();
        out
    }

    /// All normal `K` with `N ∩ K = 1` and `|N||K| = |G|`, canonically
    /// ordered.
    pub fn direct_complements(&self, n: &Subgroup) -> Result<Vec<Subgroup>> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let want = self.group.order() / n.order();
        Ok(self.normal.iter().filter(|k| k.order() == want && n.meets_trivially(k)).cloned().collect())
    }

    pub fn is_direct_factor(&self, n: &Subgroup) -> bool {
        self.direct_complements(n).is_ok_and(|c| !c.is_empty())
    }

    /// Every subgroup that occurs in some splitting, canonically ordered.
    pub fn direct_factors(&self) -> Vec<Subgroup> {
        let mut out: Vec<Subgroup> =
            self.splittings.iter().flat_map(|(h, k)| [h.clone(), k.clone()]).collect();
        out.sort();
        out.dedup();
        out
    }

    /// `D = (H ∩ D)(K ∩ D)` for every splitting `{H, K}`.
    pub fn is_directly_decomposable(&self, d: &Subgroup) -> bool {
        self.splittings.iter().all(|(h, k)| {
            let (set, _) = subgroups::set_product(self.group, &h.meet(d), &k.meet(d));
            set == *d.bits()
        })
    }

    pub fn remak(&self) -> Result<Splitting> {
        let first = self.splittings.iter().find(|(h, _)| !h.is_trivial()).cloned();
        self.remak_from(first, &mut |g, limits| remak_decomposition_with(g, limits))
    }

    fn remak_from(
        &self,
        split: Option<(Subgroup, Subgroup)>,
        recurse: &mut dyn FnMut(&Group, &Limits) -> Result<Splitting>,
    ) -> Result<Splitting> {
        let Some((h, k)) = split else {
            return Ok(Splitting { factors: vec![Subgroup::whole(self.group)] });
        };
        let mut factors = Vec::new();
        for part in [h, k] {
            let induced = Induced::new(self.group, &part);
            for f in recurse(&induced.group, &self.limits)?.factors {
                factors.push(induced.lift(&f, self.group.order()));
            }
        }
        factors.sort();
        Ok(Splitting { factors })
    }

    pub fn combine_coprime(&self, a: &Subgroup, b: &Subgroup) -> Result<CoprimeOutcome> {
        if !self.is_direct_factor(a) || !self.is_direct_factor(b) {
            return Err(Error::PreconditionFailed("inputs must be direct factors".into()));
        }
        let ga = Induced::new(self.group, a).group;
        let gb = Induced::new(self.group, b).group;
        if !is_coprime_with(&ga, &gb, &self.limits)? {
            return Err(Error::PreconditionFailed("factors are not coprime".into()));
        }
        Ok(self.combine_coprime_unchecked(a, b))
    }

    /// The combination step alone, for callers that already established
    /// the preconditions.
    pub fn combine_coprime_unchecked(&self, a: &Subgroup, b: &Subgroup) -> CoprimeOutcome {
        if !a.meets_trivially(b) {
            return CoprimeOutcome::Violation { reason: "A ∩ B is not trivial".into() };
        }
        let (set, closed) = subgroups::set_product(self.group, a, b);
        if !closed {
            return CoprimeOutcome::Violation { reason: "AB is not a subgroup".into() };
        }
        let product = Subgroup::from_bits_unchecked(set);
        match self.direct_complements(&product) {
            Ok(c) if !c.is_empty() => CoprimeOutcome::Combined { complement: c[0].clone(), product },
            _ => CoprimeOutcome::Violation { reason: "AB is not a direct factor".into() },
        }
    }
}

/// Result of combining two coprime direct factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoprimeOutcome {
    Combined { product: Subgroup, complement: Subgroup },
    Violation { reason: String },
}

pub fn direct_complements(g: &Group, n: &Subgroup) -> Result<Vec<Subgroup>> {
    if !subgroups::is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    DirectStructure::new(g, &Limits::default())?.direct_complements(n)
}

pub fn all_direct_splittings(g: &Group) -> Result<Vec<(Subgroup, Subgroup)>> {
    Ok(DirectStructure::new(g, &Limits::default())?.splittings)
}

pub fn remak_decomposition(g: &Group) -> Result<Splitting> {
    remak_decomposition_with(g, &Limits::default())
}

/// Splits recursively along the first nontrivial splitting in canonical
/// order until every factor is indecomposable.
pub fn remak_decomposition_with(g: &Group, limits: &Limits) -> Result<Splitting> {
    if g.order() == 1 {
        return Ok(Splitting { factors: vec![Subgroup::whole(g)] });
    }
    DirectStructure::new(g, limits)?.remak()
}

/// Same decomposition procedure, but each level picks its splitting from a
/// randomly permuted candidate list.
pub fn remak_decomposition_shuffled<R: Rng>(g: &Group, limits: &Limits, rng: &mut R) -> Result<Splitting> {
    if g.order() == 1 {
        return Ok(Splitting { factors: vec![Subgroup::whole(g)] });
    }
    let ds = DirectStructure::new(g, limits)?;
    let mut candidates: Vec<(Subgroup, Subgroup)> =
        ds.splittings().iter().filter(|(h, _)| !h.is_trivial()).cloned().collect();
    candidates.shuffle(rng);
    let pick = candidates.into_iter().next();
    ds.remak_from(pick, &mut |sub, limits| remak_decomposition_shuffled(sub, limits, rng))
}

/// The nontrivial indecomposable factors of `g` as groups in their own right.
pub fn remak_factor_groups(g: &Group, limits: &Limits) -> Result<Vec<Group>> {
    let split = remak_decomposition_with(g, limits)?;
    Ok(split
        .factors
        .iter()
        .filter(|f| !f.is_trivial())
        .map(|f| Induced::new(g, f).group)
        .collect())
}

pub fn is_coprime(a: &Group, b: &Group) -> Result<bool> {
    is_coprime_with(a, b, &Limits::default())
}

/// No indecomposable factor of `a` is isomorphic to one of `b`.
pub fn is_coprime_with(a: &Group, b: &Group, limits: &Limits) -> Result<bool> {
    let fa = remak_factor_groups(a, limits)?;
    let fb = remak_factor_groups(b, limits)?;
    Ok(!fa.iter().any(|x| fb.iter().any(|y| iso::are_isomorphic(x, y))))
}

pub fn combine_coprime_factors(g: &Group, a: &Subgroup, b: &Subgroup) -> Result<CoprimeOutcome> {
    DirectStructure::new(g, &Limits::default())?.combine_coprime(a, b)
}

/// Image of `X` under `hk -> k` for the splitting `G = H x K`.
pub fn project_onto_factor(g: &Group, h: &Subgroup, k: &Subgroup, x: &Subgroup) -> Result<Subgroup> {
    if !is_internal_direct(g, &[h.clone(), k.clone()]) {
        return Err(Error::NotASplitting);
    }
    Ok(project_unchecked(g, h, k, x))
}

pub(crate) fn project_unchecked(g: &Group, h: &Subgroup, k: &Subgroup, x: &Subgroup) -> Subgroup {
    let mut k_part = vec![usize::MAX; g.order()];
    for a in h.members() {
        for b in k.members() {
            k_part[g.mul(a, b)] = b;
        }
    }
    Subgroup::from_bits_unchecked(crate::bitset::BitSet::from_indices(
        g.order(),
        x.members().map(|y| k_part[y]),
    ))
}

pub fn is_directly_decomposable(g: &Group, d: &Subgroup) -> Result<bool> {
    Ok(DirectStructure::new(g, &Limits::default())?.is_directly_decomposable(d))
}

/// Outcome of the constructive complement search for a maximal cyclic
/// subgroup of an abelian p-group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicComplement {
    pub complement: Subgroup,
    /// The constructive step produced nothing valid and the brute-force
    /// search supplied the answer.
    pub used_fallback: bool,
    /// Some recursion level found both `B ∩ D` and `C ∩ D` nontrivial.
    pub dichotomy_failed: bool,
}

pub fn cyclic_max_complement(a: &Group, d: &Subgroup) -> Result<CyclicComplement> {
    cyclic_max_complement_with(a, d, &Limits::default())
}

/// A complement to a cyclic subgroup of maximal order in an abelian
/// p-group.
///
/// Writes `A = B x C` with `B` the first Remak factor. If `C ∩ D = 1` then
/// `C` is the complement. Otherwise `B ∩ D = 1`, the projection of `D` to
/// `C` is again cyclic of maximal order, and a complement `E` of it inside
/// `C` lifts to the complement `B E` of `D` in `A`.
pub fn cyclic_max_complement_with(a: &Group, d: &Subgroup, limits: &Limits) -> Result<CyclicComplement> {
    if !a.is_abelian() {
        return Err(Error::PreconditionFailed("group is not abelian".into()));
    }
    if prime_power_base(a.order()).is_none() && a.order() > 1 {
        return Err(Error::PreconditionFailed(format!("order {} is not a prime power", a.order())));
    }
    if d.bits().universe() != a.order() {
        return Err(Error::PreconditionFailed("subgroup belongs to a different group".into()));
    }
    let cyclic = d.members().any(|x| a.element_order(x).is_ok_and(|o| o == d.order()));
    if !cyclic || d.order() != a.exponent() {
        return Err(Error::PreconditionFailed("subgroup is not cyclic of maximal order".into()));
    }
    let mut dichotomy_failed = false;
    let built = complement_step(a, d, limits, &mut dichotomy_failed)?;
    if let Some(e) = built {
        if is_internal_direct(a, &[d.clone(), e.clone()]) {
            return Ok(CyclicComplement { complement: e, used_fallback: false, dichotomy_failed });
        }
    }
    log::warn!("constructive complement failed for {:?}; falling back to search", d.to_vec());
    let want = a.order() / d.order();
    let complement = subgroups::all_subgroups_with(a, limits)?
        .into_iter()
        .find(|e| e.order() == want && e.meets_trivially(d))
        .ok_or_else(|| Error::PreconditionFailed("no complement exists".into()))?;
    Ok(CyclicComplement { complement, used_fallback: true, dichotomy_failed })
}

fn complement_step(a: &Group, d: &Subgroup, limits: &Limits, dichotomy_failed: &mut bool) -> Result<Option<Subgroup>> {
    if d.order() == a.order() {
        return Ok(Some(Subgroup::trivial(a)));
    }
    let factors = remak_decomposition_with(a, limits)?.factors;
    if factors.len() < 2 {
        // A cyclic p-group has D = A, handled above.
        return Ok(None);
    }
    let b = &factors[0];
    let c = subgroups::join_all(a, &factors[1..]);
    if c.meets_trivially(d) {
        return Ok(Some(c));
    }
    if !b.meets_trivially(d) {
        log::warn!("both B ∩ D and C ∩ D are nontrivial for D = {:?}", d.to_vec());
        *dichotomy_failed = true;
        return Ok(None);
    }
    let projected = project_unchecked(a, b, &c, d);
    let inner = Induced::new(a, &c);
    let Some(e) = complement_step(&inner.group, &inner.restrict(&projected), limits, dichotomy_failed)? else {
        return Ok(None);
    };
    Ok(Some(subgroups::join(a, b, &inner.lift(&e, a.order()))))
}

fn prime_power_base(n: usize) -> Option<usize> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|p| n.is_multiple_of(*p))?;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recipe::construct;
    use crate::subgroups::generate_subgroup;

    fn build(r: &str) -> Group {
        construct(&r.parse().unwrap()).unwrap()
    }

    fn sub(g: &Group, gens: &[usize]) -> Subgroup {
        generate_subgroup(g, gens).unwrap()
    }

    #[test]
    fn internal_direct_basics() {
        let s3 = build("S(3)");
        assert!(is_internal_direct(&s3, &[Subgroup::whole(&s3)]));
        assert!(is_internal_direct(&s3, &[Subgroup::trivial(&s3), Subgroup::whole(&s3)]));
        let three = subgroups::derived_subgroup(&s3);
        assert!(!is_internal_direct(&s3, &[three, sub(&s3, &[1])]));
    }

    #[test]
    fn complements_in_klein_four() {
        let v = build("P(C(2),C(2))");
        let a = sub(&v, &[2]);
        let comps = direct_complements(&v, &a).unwrap();
        assert_eq!(comps, vec![sub(&v, &[1]), sub(&v, &[3])]);
        assert_eq!(direct_complements(&v, &Subgroup::trivial(&v)).unwrap(), vec![Subgroup::whole(&v)]);
        let q8 = build("Dic(2)");
        assert!(direct_complements(&q8, &subgroups::center(&q8)).unwrap().is_empty());
        let s3 = build("S(3)");
        assert!(matches!(direct_complements(&s3, &sub(&s3, &[1])), Err(Error::NotNormal)));
    }

    #[test]
    fn splitting_counts() {
        assert_eq!(all_direct_splittings(&build("Dic(2)")).unwrap().len(), 1);
        assert_eq!(all_direct_splittings(&build("P(C(2),C(2))")).unwrap().len(), 4);
        let c6 = all_direct_splittings(&build("C(6)")).unwrap();
        assert_eq!(c6.len(), 2);
        assert_eq!((c6[1].0.order(), c6[1].1.order()), (2, 3));
        assert_eq!(all_direct_splittings(&Group::trivial()).unwrap().len(), 1);
    }

    #[test]
    fn remak_examples() {
        let mut orders = remak_decomposition(&build("C(12)")).unwrap().orders();
        orders.sort();
        assert_eq!(orders, vec![3, 4]);
        assert_eq!(remak_decomposition(&build("S(3)")).unwrap().orders(), vec![6]);
        let g = build("P(D(4),C(2))");
        let split = remak_decomposition(&g).unwrap();
        assert_eq!(split.orders(), vec![2, 8]);
        let big = Induced::new(&g, &split.factors[1]).group;
        assert!(iso::are_isomorphic(&big, &build("D(4)")));
        assert!(is_internal_direct(&g, &split.factors));
        assert_eq!(remak_decomposition(&Group::trivial()).unwrap().orders(), vec![1]);
    }

    #[test]
    fn coprimality() {
        assert!(is_coprime(&build("C(2)"), &build("C(3)")).unwrap());
        assert!(!is_coprime(&build("C(2)"), &build("P(C(2),C(3))")).unwrap());
        assert!(is_coprime(&build("S(3)"), &build("C(6)")).unwrap());
        assert!(is_coprime(&Group::trivial(), &build("C(2)")).unwrap());
    }

    #[test]
    fn coprime_combination() {
        let g = build("P(C(2),C(3))");
        let (a, b) = (sub(&g, &[3]), sub(&g, &[2]));
        assert_eq!(a.order() * b.order(), 6);
        match combine_coprime_factors(&g, &a, &b).unwrap() {
            CoprimeOutcome::Combined { product, complement } => {
                assert_eq!(product, Subgroup::whole(&g));
                assert!(complement.is_trivial());
            }
            v => panic!("{v:?}"),
        }
        let t = Subgroup::trivial(&g);
        assert!(matches!(
            combine_coprime_factors(&g, &t, &t).unwrap(),
            CoprimeOutcome::Combined { ref product, .. } if product.is_trivial()
        ));
        let v = build("P(C(2),C(2))");
        assert!(matches!(
            combine_coprime_factors(&v, &sub(&v, &[1]), &sub(&v, &[2])),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn projections() {
        let v = build("P(C(2),C(2))");
        // (a, b) = (1,0) at index 2 and (0,1) at index 1; the diagonal is 3.
        let (a, b, diag) = (sub(&v, &[2]), sub(&v, &[1]), sub(&v, &[3]));
        assert_eq!(project_onto_factor(&v, &a, &b, &diag).unwrap(), b);
        assert_eq!(project_onto_factor(&v, &a, &b, &b).unwrap(), b);
        assert!(project_onto_factor(&v, &a, &b, &a).unwrap().is_trivial());
        assert!(matches!(project_onto_factor(&v, &a, &a, &b), Err(Error::NotASplitting)));
    }

    #[test]
    fn direct_decomposability() {
        let v = build("P(C(2),C(2))");
        assert!(is_directly_decomposable(&v, &Subgroup::trivial(&v)).unwrap());
        assert!(is_directly_decomposable(&v, &Subgroup::whole(&v)).unwrap());
        assert!(!is_directly_decomposable(&v, &sub(&v, &[3])).unwrap());
    }

    #[test]
    fn cyclic_complements() {
        let c8 = build("C(8)");
        let r = cyclic_max_complement(&c8, &Subgroup::whole(&c8)).unwrap();
        assert!(r.complement.is_trivial() && !r.used_fallback);

        // C4 x C2: (x, y) at 2x + y. The C4 factor is <2>, the diagonal <3>.
        let g = build("P(C(4),C(2))");
        for gen in [2, 3] {
            let d = sub(&g, &[gen]);
            assert_eq!(d.order(), 4);
            let r = cyclic_max_complement(&g, &d).unwrap();
            assert_eq!(r.complement.order(), 2);
            assert!(!r.used_fallback && !r.dichotomy_failed);
            assert!(is_internal_direct(&g, &[d, r.complement]));
        }
        assert!(matches!(cyclic_max_complement(&g, &sub(&g, &[1])), Err(Error::PreconditionFailed(_))));
        let c6 = build("C(6)");
        assert!(matches!(
            cyclic_max_complement(&c6, &Subgroup::whole(&c6)),
            Err(Error::PreconditionFailed(_))
        ));
        let s3 = build("S(3)");
        assert!(cyclic_max_complement(&s3, &Subgroup::whole(&s3)).is_err());
    }
}
