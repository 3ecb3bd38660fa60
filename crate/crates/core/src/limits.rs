use serde::Serialize;

/// Size bounds applied by the expensive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest group `construct` will build.
    pub order_cap: usize,
    /// Largest group whose full subgroup lattice may be enumerated.
    pub lattice_cap: usize,
    /// Largest group whose automorphisms may be listed.
    pub automorphism_cap: usize,
    /// Tables up to this order get the exhaustive O(n^3) associativity check.
    pub associativity_bound: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            order_cap: 512,
            lattice_cap: 64,
            automorphism_cap: 64,
            associativity_bound: 512,
        }
    }
}

impl Limits {
    pub fn with_lattice_cap(mut self, cap: usize) -> Self {
        self.lattice_cap = cap;
        self
    }

    pub(crate) fn check_lattice(&self, order: usize) -> crate::Result<()> {
        if order > self.lattice_cap {
            return Err(crate::Error::OrderBound { what: "lattice", order, cap: self.lattice_cap });
        }
        Ok(())
    }
}
