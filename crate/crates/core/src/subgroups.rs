//! Subgroups as membership bitsets, lattice enumeration and the standard
//! characteristic constructions (center, commutators, agemo, Sylow).

use std::collections::HashMap;

use serde::{Serialize, Serializer};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::limits::Limits;

/// A subgroup of some parent group, stored as a bitset over the parent's
/// element indices. The parent is not stored; every operation takes it
/// explicitly.
///
/// Ordering is canonical: by order, then lexicographically by members.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup(BitSet);

impl Subgroup {
    pub fn trivial(g: &Group) -> Self {
        Subgroup(BitSet::from_indices(g.order(), [0]))
    }

    pub fn whole(g: &Group) -> Self {
        Subgroup(BitSet::full(g.order()))
    }

    /// Wraps a bitset that the caller knows to be a subgroup.
    pub(crate) fn from_bits_unchecked(bits: BitSet) -> Self {
        Subgroup(bits)
    }

    /// Accepts `members` only if they form a subgroup of `g`.
    pub fn from_members(g: &Group, members: &[usize]) -> Result<Self> {
        for &x in members {
            g.check_index(x)?;
        }
        let bits = BitSet::from_indices(g.order(), members.iter().copied());
        if !is_subgroup(g, &bits) {
            return Err(Error::PreconditionFailed(format!("{members:?} is not a subgroup")));
        }
        Ok(Subgroup(bits))
    }

    pub fn bits(&self) -> &BitSet {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.count()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.to_vec()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Intersections of subgroups are subgroups.
    pub fn meet(&self, other: &Subgroup) -> Subgroup {
        Subgroup(self.0.intersection(&other.0))
    }

    pub fn meets_trivially(&self, other: &Subgroup) -> bool {
        self.0.intersection_count(&other.0) == 1
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.0)
    }
}

impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

/// True iff the set contains the identity and is closed under products.
/// (Closure under products implies closure under inverses for finite sets.)
pub fn is_subgroup(g: &Group, set: &BitSet) -> bool {
    if !set.contains(0) {
        return false;
    }
    let members = set.to_vec();
    members.iter().all(|&a| members.iter().all(|&b| set.contains(g.mul(a, b))))
}

pub fn generate_subgroup(g: &Group, gens: &[usize]) -> Result<Subgroup> {
    for &x in gens {
        g.check_index(x)?;
    }
    Ok(closure(g, BitSet::from_indices(g.order(), [0]), gens))
}

/// Closure of `start` (which must contain the identity) under right
/// multiplication by `gens`. When `start` is already a subgroup `S` the
/// result is `<S, gens>` provided `gens` includes generators of `S`.
fn closure(g: &Group, mut members: BitSet, gens: &[usize]) -> Subgroup {
    let mut queue: Vec<usize> = members.to_vec();
    while let Some(x) = queue.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if members.insert(y) {
                queue.push(y);
            }
        }
    }
    Subgroup(members)
}

/// Smallest subgroup containing both.
pub fn join(g: &Group, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let gens: Vec<usize> = a.members().chain(b.members()).collect();
    closure(g, a.0.union(&b.0), &gens)
}

pub fn join_all<'a>(g: &Group, parts: impl IntoIterator<Item = &'a Subgroup>) -> Subgroup {
    parts.into_iter().fold(Subgroup::trivial(g), |acc, s| join(g, &acc, s))
}

pub fn all_subgroups(g: &Group) -> Result<Vec<Subgroup>> {
    all_subgroups_with(g, &Limits::default())
}

/// Every subgroup exactly once, canonically sorted.
///
/// Seeds with the cyclic subgroups and closes the set under joins with a
/// cyclic subgroup until nothing new appears; every subgroup is the join of
/// the cyclic subgroups it contains, so the fixed point is the full lattice.
pub fn all_subgroups_with(g: &Group, limits: &Limits) -> Result<Vec<Subgroup>> {
    limits.check_lattice(g.order())?;
    let mut cyclic: HashMap<BitSet, usize> = HashMap::new();
    for x in g.elements() {
        let c = generate_subgroup(g, &[x])?;
        cyclic.entry(c.0).or_insert(x);
    }
    let mut cyclic: Vec<(Subgroup, usize)> = cyclic.into_iter().map(|(b, x)| (Subgroup(b), x)).collect();
    cyclic.sort();

    // Each subgroup remembers a generating set so joins are cheap closures.
    let mut known: HashMap<BitSet, Vec<usize>> = HashMap::new();
    let mut frontier: Vec<(Subgroup, Vec<usize>)> = Vec::new();
    for (c, x) in &cyclic {
        let gens = if *x == 0 { vec![] } else { vec![*x] };
        known.insert(c.0.clone(), gens.clone());
        frontier.push((c.clone(), gens));
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (s, gens) in &frontier {
            for (c, x) in &cyclic {
                if c.is_subgroup_of(s) {
                    continue;
                }
                let mut joined_gens = gens.clone();
                joined_gens.push(*x);
                let t = closure(g, s.0.clone(), &joined_gens);
                if !known.contains_key(&t.0) {
                    known.insert(t.0.clone(), joined_gens.clone());
                    next.push((t, joined_gens));
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Subgroup> = known.into_keys().map(Subgroup).collect();
    out.sort();
    Ok(out)
}

pub fn is_normal(g: &Group, s: &Subgroup) -> bool {
    s.members().all(|x| g.elements().all(|y| s.contains(g.conjugate(x, y))))
}

pub fn normal_subgroups(g: &Group) -> Result<Vec<Subgroup>> {
    normal_subgroups_with(g, &Limits::default())
}

pub fn normal_subgroups_with(g: &Group, limits: &Limits) -> Result<Vec<Subgroup>> {
    Ok(all_subgroups_with(g, limits)?.into_iter().filter(|s| is_normal(g, s)).collect())
}

pub fn center(g: &Group) -> Subgroup {
    centralizer_in(g, &Subgroup::whole(g), &Subgroup::whole(g))
}

/// Elements of `s` that commute with every element of `t`.
pub fn centralizer_in(g: &Group, s: &Subgroup, t: &Subgroup) -> Subgroup {
    let bits = BitSet::from_indices(
        g.order(),
        s.members().filter(|&x| t.members().all(|y| g.mul(x, y) == g.mul(y, x))),
    );
    Subgroup(bits)
}

/// `Z(S)` computed inside `S`.
pub fn center_of(g: &Group, s: &Subgroup) -> Subgroup {
    centralizer_in(g, s, s)
}

/// Subgroup generated by all `[a, b]` with `a` in `A` and `b` in `B`.
pub fn commutator(g: &Group, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut gens = BitSet::new(g.order());
    for x in a.members() {
        for y in b.members() {
            gens.insert(g.commutator(x, y));
        }
    }
    let gens = gens.to_vec();
    closure(g, BitSet::from_indices(g.order(), [0]), &gens)
}

pub fn derived_subgroup(g: &Group) -> Subgroup {
    let whole = Subgroup::whole(g);
    commutator(g, &whole, &whole)
}

/// Length of the derived series down to the trivial group, or `None` when
/// the series stabilises above it.
pub fn derived_length(g: &Group) -> Option<usize> {
    let mut current = Subgroup::whole(g);
    let mut steps = 0;
    while !current.is_trivial() {
        let next = commutator(g, &current, &current);
        if next == current {
            return None;
        }
        current = next;
        steps += 1;
    }
    Some(steps)
}

/// The set `AB` and whether it is a subgroup. Its size is
/// `|A||B| / |A ∩ B|`.
pub fn set_product(g: &Group, a: &Subgroup, b: &Subgroup) -> (BitSet, bool) {
    let mut set = BitSet::new(g.order());
    for x in a.members() {
        for y in b.members() {
            set.insert(g.mul(x, y));
        }
    }
    let closed = if a.is_subgroup_of(b) || b.is_subgroup_of(a) {
        true
    } else {
        is_subgroup(g, &set)
    };
    (set, closed)
}

/// A group homomorphism onto `G/N`, with the quotient as a fresh group.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    pub target: Group,
    /// `projection[x]` is the index of the coset `xN` in `target`.
    pub projection: Vec<usize>,
}

impl QuotientMap {
    pub fn image(&self, s: &Subgroup) -> Subgroup {
        Subgroup(BitSet::from_indices(self.target.order(), s.members().map(|x| self.projection[x])))
    }

    /// Full preimage of a subgroup of the quotient.
    pub fn preimage(&self, s: &Subgroup) -> Subgroup {
        Subgroup(BitSet::from_indices(
            self.projection.len(),
            self.projection.iter().enumerate().filter(|(_, &c)| s.contains(c)).map(|(x, _)| x),
        ))
    }
}

pub fn quotient(g: &Group, n: &Subgroup) -> Result<QuotientMap> {
    quotient_with(g, n, &Limits::default())
}

pub fn quotient_with(g: &Group, n: &Subgroup, limits: &Limits) -> Result<QuotientMap> {
    if !is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    let mut projection = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        for y in n.members() {
            projection[g.mul(x, y)] = reps.len();
        }
        reps.push(x);
    }
    let m = reps.len();
    let mut table = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            table.push(projection[g.mul(a, b)]);
        }
    }
    let target = Group::from_flat_with(m, table, limits)?;
    Ok(QuotientMap { target, projection })
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub fn sylow(g: &Group, p: u64) -> Result<Subgroup> {
    sylow_with(g, p, &Limits::default())
}

pub fn sylow_with(g: &Group, p: u64, limits: &Limits) -> Result<Subgroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p = p as usize;
    let mut target = 1;
    let mut rest = g.order();
    while rest.is_multiple_of(p) {
        rest /= p;
        target *= p;
    }
    if target == 1 {
        return Ok(Subgroup::trivial(g));
    }
    if g.is_abelian() {
        let bits = BitSet::from_indices(
            g.order(),
            g.elements().filter(|&x| is_power_of(g.element_order(x).expect("in range"), p)),
        );
        return Ok(Subgroup(bits));
    }
    all_subgroups_with(g, limits)?
        .into_iter()
        .find(|s| s.order() == target)
        .ok_or_else(|| Error::PreconditionFailed("no Sylow subgroup found".into()))
}

fn is_power_of(mut n: usize, p: usize) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Subgroup generated by all `n`-th powers.
pub fn agemo(g: &Group, n: u64) -> Subgroup {
    let powers: Vec<usize> = g.elements().map(|x| g.pow(x, n)).collect();
    generate_subgroup(g, &powers).expect("powers are in range")
}

/// A subgroup re-indexed as a group in its own right. Members keep their
/// relative order, so the identity stays at index 0.
#[derive(Debug, Clone)]
pub struct Induced {
    pub group: Group,
    /// `members[i]` is the parent index of element `i`.
    pub members: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl Induced {
    pub fn new(g: &Group, s: &Subgroup) -> Self {
        let members = s.to_vec();
        let position: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let m = members.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &members {
            for &b in &members {
                table.push(position[&g.mul(a, b)]);
            }
        }
        let limits = Limits { associativity_bound: 0, ..Limits::default() };
        let group = Group::from_flat_with(m, table, &limits).expect("a subgroup is a group");
        Self { group, members, position }
    }

    /// Maps a subgroup of the induced group back into the parent.
    pub fn lift(&self, s: &Subgroup, parent_order: usize) -> Subgroup {
        Subgroup(BitSet::from_indices(parent_order, s.members().map(|i| self.members[i])))
    }

    /// Maps a parent subgroup contained in this one into the induced group.
    pub fn restrict(&self, s: &Subgroup) -> Subgroup {
        Subgroup(BitSet::from_indices(self.members.len(), s.members().map(|x| self.position[&x])))
    }
}
