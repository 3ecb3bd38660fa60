//! Brute-force oracles shared by the integration tests. They deliberately
//! avoid the lattice and complement machinery they are checking.

#![allow(dead_code)]

use dirext::iso;
use dirext::subgroups::{Induced, Subgroup};
use dirext::Group;

/// Every subgroup, found by testing all `2^(n-1)` subsets that contain the
/// identity for closure. Only sensible for `n <= 16`.
pub fn subsets_oracle(g: &Group) -> Vec<Vec<usize>> {
    let n = g.order();
    assert!(n <= 16);
    let mut out = Vec::new();
    for rest in 0u32..(1 << (n - 1)) {
        let mask = (rest << 1) | 1;
        let inside = |x: usize| mask >> x & 1 == 1;
        let members: Vec<usize> = (0..n).filter(|&x| inside(x)).collect();
        if members.iter().all(|&a| members.iter().all(|&b| inside(g.mul(a, b)))) {
            out.push(members);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn is_normal_oracle(g: &Group, s: &[usize]) -> bool {
    s.iter().all(|&x| g.elements().all(|y| s.contains(&g.mul(g.mul(g.inv(y), x), y))))
}

/// Normal complements of `n`, scanning the given subgroup list.
pub fn complements_oracle(g: &Group, all: &[Vec<usize>], n: &[usize]) -> Vec<Vec<usize>> {
    all.iter()
        .filter(|s| s.len() * n.len() == g.order())
        .filter(|s| s.iter().filter(|x| n.contains(x)).count() == 1)
        .filter(|s| is_normal_oracle(g, s))
        .cloned()
        .collect()
}

/// Nontrivial direct factors as stand-alone groups.
pub fn direct_factor_groups_oracle(g: &Group) -> Vec<Group> {
    let all = subsets_oracle(g);
    all.iter()
        .filter(|n| n.len() > 1 && is_normal_oracle(g, n) && !complements_oracle(g, &all, n).is_empty())
        .map(|n| Induced::new(g, &Subgroup::from_members(g, n).unwrap()).group)
        .collect()
}

/// Coprimality read straight off the definition: no nontrivial direct
/// factor of one is isomorphic to a direct factor of the other.
pub fn coprime_oracle(a: &Group, b: &Group) -> bool {
    let fa = direct_factor_groups_oracle(a);
    let fb = direct_factor_groups_oracle(b);
    !fa.iter().any(|x| fb.iter().any(|y| iso::are_isomorphic(x, y)))
}

/// The same group with elements renamed by `perm`, which must fix 0.
pub fn relabel(g: &Group, perm: &[usize]) -> Group {
    let n = g.order();
    let mut rows = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            rows[perm[a]][perm[b]] = perm[g.mul(a, b)];
        }
    }
    Group::from_rows(&rows).unwrap()
}

