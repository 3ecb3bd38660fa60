//! Isomorphism testing and automorphism enumeration by backtracking.
//!
//! Elements of the source are visited in index order. An element already in
//! the subgroup generated by earlier choices has a forced image; every other
//! element is a branch point whose candidate images are tried in increasing
//! order. The first complete map found is therefore the lexicographically
//! least isomorphism, and a full traversal lists automorphisms in
//! lexicographic order.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::group::Group;
use crate::limits::Limits;
use crate::subgroups;

/// An isomorphism `source -> target` as an image array over source indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Iso {
    pub map: Vec<usize>,
}

impl Iso {
    pub fn identity(order: usize) -> Self {
        Iso { map: (0..order).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Full check: bijective, identity-preserving and multiplicative on all
    /// pairs.
    pub fn verify(&self, source: &Group, target: &Group) -> bool {
        let n = source.order();
        if target.order() != n || self.map.len() != n || self.map[0] != 0 {
            return false;
        }
        let mut hit = vec![false; n];
        for &y in &self.map {
            if y >= n || std::mem::replace(&mut hit[y], true) {
                return false;
            }
        }
        source.elements().all(|a| {
            source.elements().all(|b| self.map[source.mul(a, b)] == target.mul(self.map[a], self.map[b]))
        })
    }

    /// `self` after `first`: `x -> self(first(x))`.
    pub fn compose(&self, first: &Iso) -> Iso {
        Iso { map: first.map.iter().map(|&y| self.map[y]).collect() }
    }

    pub fn inverse(&self) -> Iso {
        let mut map = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            map[y] = x;
        }
        Iso { map }
    }
}

/// Isomorphism invariants used as a prefilter. Equal for isomorphic groups;
/// never treated as sufficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub order_histogram: BTreeMap<usize, usize>,
    pub center_order: usize,
    pub derived_order: usize,
    pub exponent: usize,
    pub abelian: bool,
    /// `None` for non-solvable groups.
    pub derived_length: Option<usize>,
}

pub fn fingerprint(g: &Group) -> Fingerprint {
    let orders = g.element_orders();
    let mut order_histogram = BTreeMap::new();
    for &o in &orders {
        *order_histogram.entry(o).or_insert(0) += 1;
    }
    Fingerprint {
        order: g.order(),
        order_histogram,
        center_order: subgroups::center(g).order(),
        derived_order: subgroups::derived_subgroup(g).order(),
        exponent: orders.into_iter().fold(1, crate::group::lcm),
        abelian: g.is_abelian(),
        derived_length: subgroups::derived_length(g),
    }
}

/// Per-element invariant: (element order, centralizer order).
fn profiles(g: &Group) -> Vec<(usize, usize)> {
    let orders = g.element_orders();
    g.elements()
        .map(|x| {
            let centralizer = g.elements().filter(|&y| g.mul(x, y) == g.mul(y, x)).count();
            (orders[x], centralizer)
        })
        .collect()
}

struct Search<'a> {
    src: &'a Group,
    dst: &'a Group,
    src_profile: Vec<(usize, usize)>,
    dst_profile: Vec<(usize, usize)>,
    map: Vec<usize>,
    used: Vec<bool>,
    domain: Vec<usize>,
    gens: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(src: &'a Group, dst: &'a Group) -> Self {
        let n = src.order();
        let mut map = vec![UNSET; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        Self {
            src,
            dst,
            src_profile: profiles(src),
            dst_profile: profiles(dst),
            map,
            used,
            domain: vec![0],
            gens: Vec::new(),
        }
    }

    /// Adds the generator `x -> y` and closes the partial homomorphism over
    /// the enlarged generated subgroup. Returns false (with state rolled
    /// back) on any inconsistency.
    fn extend(&mut self, x: usize, y: usize) -> bool {
        let mark = self.domain.len();
        self.gens.push(x);
        self.map[x] = y;
        self.used[y] = true;
        self.domain.push(x);
        let mut i = 0;
        let mut ok = true;
        'outer: while i < self.domain.len() {
            let a = self.domain[i];
            // Old elements only need the new generator; new ones need all.
            let gens: &[usize] = if i < mark { &self.gens[self.gens.len() - 1..] } else { &self.gens };
            for &g in gens {
                let c = self.src.mul(a, g);
                let expected = self.dst.mul(self.map[a], self.map[g]);
                if self.map[c] == UNSET {
                    if self.used[expected] || self.src_profile[c] != self.dst_profile[expected] {
                        ok = false;
                        break 'outer;
                    }
                    self.map[c] = expected;
                    self.used[expected] = true;
                    self.domain.push(c);
                } else if self.map[c] != expected {
                    ok = false;
                    break 'outer;
                }
            }
            i += 1;
        }
        if !ok {
            self.rollback(mark);
        }
        ok
    }

    fn rollback(&mut self, mark: usize) {
        for &z in &self.domain[mark..] {
            self.used[self.map[z]] = false;
            self.map[z] = UNSET;
        }
        self.domain.truncate(mark);
        self.gens.pop();
    }

    /// Depth-first search from source index `from`; `visit` returns true to
    /// stop the traversal.
    fn run(&mut self, from: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let Some(x) = (from..self.src.order()).find(|&x| self.map[x] == UNSET) else {
            return visit(&self.map);
        };
        for y in 0..self.dst.order() {
            if self.used[y] || self.src_profile[x] != self.dst_profile[y] {
                continue;
            }
            let mark = self.domain.len();
            if self.extend(x, y) {
                let stop = self.run(x + 1, visit);
                self.rollback(mark);
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

fn sorted_profiles(g: &Group) -> Vec<(usize, usize)> {
    let mut p = profiles(g);
    p.sort_unstable();
    p
}

/// The lexicographically least isomorphism `g -> h`, if any.
pub fn find_isomorphism(g: &Group, h: &Group) -> Option<Iso> {
    if g.order() != h.order() {
        return None;
    }
    if fingerprint(g) != fingerprint(h) || sorted_profiles(g) != sorted_profiles(h) {
        return None;
    }
    let mut found = None;
    Search::new(g, h).run(1, &mut |map| {
        found = Some(Iso { map: map.to_vec() });
        true
    });
    found
}

pub fn are_isomorphic(g: &Group, h: &Group) -> bool {
    find_isomorphism(g, h).is_some()
}

pub fn automorphisms(g: &Group) -> Result<Vec<Iso>> {
    automorphisms_with(g, &Limits::default())
}

/// All automorphisms, ordered by their image arrays.
pub fn automorphisms_with(g: &Group, limits: &Limits) -> Result<Vec<Iso>> {
    if g.order() > limits.automorphism_cap {
        return Err(crate::Error::OrderBound {
            what: "automorphism",
            order: g.order(),
            cap: limits.automorphism_cap,
        });
    }
    let mut out = Vec::new();
    Search::new(g, g).run(1, &mut |map| {
        out.push(Iso { map: map.to_vec() });
        false
    });
    Ok(out)
}

type Representative = (Fingerprint, Vec<(usize, usize)>, Group);

/// Assigns stable class ids to groups up to isomorphism, first come first
/// numbered.
#[derive(Debug, Default)]
pub struct IsoClassifier {
    reps: Vec<Representative>,
}

impl IsoClassifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn classify(&mut self, g: &Group) -> usize {
        if let Some(id) = self.find(g) {
            return id;
        }
        self.reps.push((fingerprint(g), sorted_profiles(g), g.clone()));
        self.reps.len() - 1
    }

    /// Class id of `g` without registering it.
    pub fn find(&self, g: &Group) -> Option<usize> {
        let fp = fingerprint(g);
        let prof = sorted_profiles(g);
        self.reps.iter().position(|(f, p, rep)| {
            *f == fp && *p == prof && {
                let mut found = false;
                Search::new(g, rep).run(1, &mut |_| {
                    found = true;
                    true
                });
                found
            }
        })
    }

    pub fn representative(&self, id: usize) -> &Group {
        &self.reps[id].2
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}
