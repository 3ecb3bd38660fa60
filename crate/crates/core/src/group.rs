//! Finite groups stored as explicit Cayley tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Line, Result};
use crate::limits::Limits;
use crate::recipe::Recipe;

/// A finite group on the indices `0..order`, with the identity at index 0.
///
/// Groups are immutable once built; every constructor runs the full axiom
/// check (associativity only up to [`Limits::associativity_bound`]).
#[derive(Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    name: Option<String>,
    recipe: Option<Recipe>,
}

impl Group {
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        Self::from_rows_with(rows, &Limits::default())
    }

    pub fn from_rows_with(rows: &[Vec<usize>], limits: &Limits) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MalformedTable("table is empty".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat_with(n, flat, limits)
    }

    /// Builds a group from a row-major `n*n` table.
    pub fn from_flat(order: usize, table: Vec<usize>) -> Result<Self> {
        Self::from_flat_with(order, table, &Limits::default())
    }

    pub fn from_flat_with(order: usize, table: Vec<usize>, limits: &Limits) -> Result<Self> {
        let inv = check_axioms(order, &table, limits.associativity_bound)?;
        Ok(Self {
            order,
            table: table.into_iter().map(|x| x as u32).collect(),
            inv: inv.into_iter().map(|x| x as u32).collect(),
            name: None,
            recipe: None,
        })
    }

    pub fn trivial() -> Self {
        Self { order: 1, table: vec![0], inv: vec![0], name: None, recipe: None }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub(crate) fn with_recipe(mut self, recipe: Recipe) -> Self {
        self.recipe = Some(recipe);
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `a^-1 b^-1 a b`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        self.mul(self.mul(self.inv(a), self.inv(b)), ab)
    }

    /// `g^-1 x g`
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, x: usize, mut e: u64) -> usize {
        let mut base = x;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn recipe(&self) -> Option<&Recipe> {
        self.recipe.as_ref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.iter().map(|&x| x as usize).collect()).collect()
    }

    /// Tables compare equal iff the groups are identical (same numbering).
    pub fn same_table(&self, other: &Group) -> bool {
        self.table == other.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn check_index(&self, x: usize) -> Result<()> {
        if x >= self.order {
            return Err(Error::IndexOutOfRange { index: x, order: self.order });
        }
        Ok(())
    }

    pub fn element_order(&self, x: usize) -> Result<usize> {
        self.check_index(x)?;
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        Ok(k)
    }

    /// All element orders, indexed by element.
    pub fn element_orders(&self) -> Vec<usize> {
        self.elements().map(|x| self.element_order(x).expect("index in range")).collect()
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.element_orders().into_iter().fold(1, lcm)
    }

    pub fn to_record(&self) -> GroupRecord {
        GroupRecord {
            order: self.order,
            table: self.rows(),
            name: self.name.clone(),
            recipe: self.recipe.as_ref().map(|r| r.to_string()),
        }
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("order", &self.order)
            .field("name", &self.name)
            .field("recipe", &self.recipe.as_ref().map(|r| r.to_string()))
            .finish_non_exhaustive()
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Checks every group axiom on a square table without building a [`Group`].
pub fn validate_group(rows: &[Vec<usize>]) -> Result<()> {
    Group::from_rows(rows).map(|_| ())
}

fn check_axioms(n: usize, t: &[usize], assoc_bound: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::MalformedTable("order must be positive".into()));
    }
    if t.len() != n * n {
        return Err(Error::MalformedTable(format!("expected {} entries, found {}", n * n, t.len())));
    }
    if let Some(pos) = t.iter().position(|&x| x >= n) {
        return Err(Error::MalformedTable(format!(
            "entry ({}, {}) = {} is out of range",
            pos / n,
            pos % n,
            t[pos]
        )));
    }
    let at = |i: usize, j: usize| t[i * n + j];
    if (0..n).any(|j| at(0, j) != j || at(j, 0) != j) {
        return Err(Error::NoIdentity);
    }
    let mut inv = vec![usize::MAX; n];
    for (i, slot) in inv.iter_mut().enumerate() {
        match (0..n).find(|&j| at(i, j) == 0) {
            Some(j) if at(j, i) == 0 => *slot = j,
            _ => return Err(Error::NotInvertible(i)),
        }
    }
    let mut seen = vec![usize::MAX; n];
    for line in [Line::Row, Line::Column] {
        for i in 0..n {
            for j in 0..n {
                let v = if line == Line::Row { at(i, j) } else { at(j, i) };
                let stamp = i + if line == Line::Row { 0 } else { n };
                if seen[v] == stamp {
                    return Err(Error::NotLatin { line, index: i, value: v });
                }
                seen[v] = stamp;
            }
        }
    }
    if n <= assoc_bound {
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// The JSON group-exchange object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<String>,
}

impl GroupRecord {
    /// Validates the table and rebuilds the group. The recipe string is
    /// parsed and kept, but the table is authoritative.
    pub fn to_group(&self, limits: &Limits) -> Result<Group> {
        if self.table.len() != self.order {
            return Err(Error::MalformedTable(format!(
                "declared order {} but table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        let mut g = Group::from_rows_with(&self.table, limits)?;
        g.name = self.name.clone();
        if let Some(text) = &self.recipe {
            g.recipe = Some(text.parse()?);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_rows(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
    }

    #[test]
    fn trivial_table_is_a_group() {
        assert!(validate_group(&[vec![0]]).is_ok());
        let g = Group::trivial();
        assert_eq!(g.exponent(), 1);
        assert_eq!(g.element_order(0).unwrap(), 1);
    }

    #[test]
    fn perturbed_cyclic_table_is_rejected() {
        let base = cyclic_rows(3);
        for i in 1..3 {
            for j in 1..3 {
                for v in 0..3 {
                    if v == base[i][j] {
                        continue;
                    }
                    let mut rows = base.clone();
                    rows[i][j] = v;
                    let err = validate_group(&rows).unwrap_err();
                    assert!(
                        matches!(
                            err,
                            Error::NotAssociative(..) | Error::NotLatin { .. } | Error::NotInvertible(_)
                        ),
                        "{err}"
                    );
                }
            }
        }
    }

    #[test]
    fn malformed_and_identity_errors() {
        assert!(matches!(validate_group(&[]), Err(Error::MalformedTable(_))));
        assert!(matches!(validate_group(&[vec![0, 1], vec![1]]), Err(Error::MalformedTable(_))));
        assert!(matches!(validate_group(&[vec![0, 2], vec![1, 0]]), Err(Error::MalformedTable(_))));
        assert!(matches!(validate_group(&[vec![1, 0], vec![0, 1]]), Err(Error::NoIdentity)));
        assert!(matches!(validate_group(&[vec![0, 1], vec![1, 1]]), Err(Error::NotInvertible(1))));
    }

    #[test]
    fn latin_violation_reports_witness() {
        // Identity row/column fine, element 1 inverts to 1, but row 2 repeats 0.
        let rows = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 1]];
        assert!(matches!(
            validate_group(&rows),
            Err(Error::NotLatin { line: Line::Row, index: 1, value: 0 })
        ));
    }

    #[test]
    fn element_order_bounds() {
        let g = Group::from_rows(&cyclic_rows(6)).unwrap();
        assert_eq!(g.element_order(1).unwrap(), 6);
        assert_eq!(g.element_order(3).unwrap(), 2);
        assert!(matches!(g.element_order(6), Err(Error::IndexOutOfRange { index: 6, order: 6 })));
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.pow(1, 4), 4);
    }
}
