//! Construction recipes and the recipe DSL.
//!
//! ```text
//! C(n)                       cyclic of order n
//! D(m)                       dihedral of order 2m
//! Dic(m)                     dicyclic of order 4m
//! S(m)                       symmetric on m <= 5 points
//! P(r1,r2)                   direct product
//! SD(rN,rQ,action=[q:[..]])  semidirect product, N normal
//! CQ(r,gens=[..])            quotient by a central subgroup
//! ```
//!
//! Element numbering is fixed so recipes are portable:
//!
//! * `C(n)`: `a^i` is `i`.
//! * `D(m)` and `Dic(m)`: `a^i b^j` is `i + j*k` where `k` is the order of `a`.
//! * `S(m)`: permutations in lexicographic order of their image lists;
//!   `p*q` applies `q` first.
//! * `P` and `SD`: the pair `(x, y)` is `x*|second| + y`. For `SD` the pair is
//!   `(q, n)` with `q` in the acting group, and
//!   `(q1,n1)(q2,n2) = (q1 q2, phi(q2^-1)(n1) n2)`.
//! * `CQ`: cosets ordered by their least member.
//!
//! An `SD` action lists, for each of a generating set of acting-group
//! elements, the full image array of the automorphism of `N` it induces.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::limits::Limits;
use crate::subgroups;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Recipe {
    Cyclic(usize),
    Dihedral(usize),
    Dicyclic(usize),
    Symmetric(usize),
    Product(Box<Recipe>, Box<Recipe>),
    Semidirect { normal: Box<Recipe>, acting: Box<Recipe>, action: Vec<ActionImage> },
    CentralQuotient { base: Box<Recipe>, generators: Vec<usize> },
}

/// The automorphism of the normal factor induced by one acting element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionImage {
    pub element: usize,
    pub image: Vec<usize>,
}

impl Recipe {
    pub fn product(a: Recipe, b: Recipe) -> Self {
        Recipe::Product(Box::new(a), Box::new(b))
    }

    /// Right-nested product of all factors; `C(1)` when empty.
    pub fn product_of(factors: impl IntoIterator<Item = Recipe>) -> Self {
        let mut v: Vec<Recipe> = factors.into_iter().collect();
        let Some(mut acc) = v.pop() else { return Recipe::Cyclic(1) };
        while let Some(r) = v.pop() {
            acc = Recipe::product(r, acc);
        }
        acc
    }

    pub fn semidirect(normal: Recipe, acting: Recipe, action: Vec<ActionImage>) -> Self {
        Recipe::Semidirect { normal: Box::new(normal), acting: Box::new(acting), action }
    }

    pub fn central_quotient(base: Recipe, generators: Vec<usize>) -> Self {
        Recipe::CentralQuotient { base: Box::new(base), generators }
    }

    /// Order of the resulting group, or `None` on overflow.
    pub fn order(&self) -> Option<usize> {
        match self {
            Recipe::Cyclic(n) => Some(*n),
            Recipe::Dihedral(m) => m.checked_mul(2),
            Recipe::Dicyclic(m) => m.checked_mul(4),
            Recipe::Symmetric(m) => (1..=*m).try_fold(1usize, |acc, k| acc.checked_mul(k)),
            Recipe::Product(a, b) => a.order()?.checked_mul(b.order()?),
            Recipe::Semidirect { normal, acting, .. } => normal.order()?.checked_mul(acting.order()?),
            // Only an upper bound until the quotient is formed.
            Recipe::CentralQuotient { base, .. } => base.order(),
        }
    }
}

pub fn construct(recipe: &Recipe) -> Result<Group> {
    construct_with(recipe, &Limits::default())
}

pub fn construct_with(recipe: &Recipe, limits: &Limits) -> Result<Group> {
    if let Recipe::Symmetric(m) = recipe {
        if *m == 0 || *m > 5 {
            return Err(Error::InvalidRecipe(format!("S({m}) needs 1 <= m <= 5")));
        }
    }
    let order = recipe.order().unwrap_or(usize::MAX);
    if order > limits.order_cap {
        return Err(Error::OrderBound { what: "construction", order, cap: limits.order_cap });
    }
    let g = match recipe {
        Recipe::Cyclic(n) => {
            positive(*n, "C")?;
            let n = *n;
            table(n, |i, j| (i + j) % n, limits)?
        }
        Recipe::Dihedral(m) => {
            positive(*m, "D")?;
            metacyclic(*m, 0, limits)?
        }
        Recipe::Dicyclic(m) => {
            positive(*m, "Dic")?;
            metacyclic(2 * m, *m, limits)?
        }
        Recipe::Symmetric(m) => symmetric(*m, limits)?,
        Recipe::Product(a, b) => {
            let (a, b) = (construct_with(a, limits)?, construct_with(b, limits)?);
            let nb = b.order();
            table(a.order() * nb, |x, y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb), limits)?
        }
        Recipe::Semidirect { normal, acting, action } => {
            let n = construct_with(normal, limits)?;
            let q = construct_with(acting, limits)?;
            semidirect(&n, &q, action, limits)?
        }
        Recipe::CentralQuotient { base, generators } => {
            let g = construct_with(base, limits)?;
            for &x in generators {
                g.check_index(x)?;
                if g.elements().any(|y| g.mul(x, y) != g.mul(y, x)) {
                    return Err(Error::NotCentral(x));
                }
            }
            let z = subgroups::generate_subgroup(&g, generators)?;
            subgroups::quotient_with(&g, &z, limits)?.target
        }
    };
    Ok(g.with_recipe(recipe.clone()))
}

fn positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidRecipe(format!("{what}(0) is not a group")));
    }
    Ok(())
}

fn table(n: usize, f: impl Fn(usize, usize) -> usize, limits: &Limits) -> Result<Group> {
    let mut t = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            t.push(f(i, j));
        }
    }
    Group::from_flat_with(n, t, limits)
}

/// `<a, b | a^k, b^2 = a^s, b a b^-1 = a^-1>` with elements `a^i b^j` at
/// `i + j*k`. Dihedral uses `s = 0`, dicyclic `k = 2m, s = m`.
fn metacyclic(k: usize, s: usize, limits: &Limits) -> Result<Group> {
    let mul = |x: usize, y: usize| {
        let (i, j) = (x % k, x / k);
        let (u, v) = (y % k, y / k);
        let twisted = if j == 0 { u } else { (k - u) % k };
        let mut e = (i + twisted) % k;
        let mut f = j + v;
        if f == 2 {
            e = (e + s) % k;
            f = 0;
        }
        e + f * k
    };
    table(2 * k, mul, limits)
}

fn symmetric(m: usize, limits: &Limits) -> Result<Group> {
    let mut perms = Vec::new();
    permutations(&mut (0..m).collect::<Vec<_>>(), 0, &mut perms);
    perms.sort();
    let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).expect("closed");
    let compose = |i: usize, j: usize| {
        let (p, q) = (&perms[i], &perms[j]);
        let r: Vec<usize> = (0..m).map(|x| p[q[x]]).collect();
        index(&r)
    };
    table(perms.len(), compose, limits)
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Extends the listed automorphisms to a homomorphism `Q -> Aut(N)`,
/// returning `phi[q]` as image arrays.
fn action_homomorphism(n: &Group, q: &Group, action: &[ActionImage]) -> Result<Vec<Vec<usize>>> {
    for a in action {
        q.check_index(a.element)
            .map_err(|_| Error::InvalidAction(format!("acting element {} out of range", a.element)))?;
        if a.image.len() != n.order() {
            return Err(Error::InvalidAction(format!(
                "image for acting element {} has {} entries, expected {}",
                a.element,
                a.image.len(),
                n.order()
            )));
        }
        let mut hit = vec![false; n.order()];
        for &y in &a.image {
            if y >= n.order() || std::mem::replace(&mut hit[y], true) {
                return Err(Error::InvalidAction(format!(
                    "image for acting element {} is not a bijection",
                    a.element
                )));
            }
        }
        for x in n.elements() {
            for y in n.elements() {
                if a.image[n.mul(x, y)] != n.mul(a.image[x], a.image[y]) {
                    return Err(Error::InvalidAction(format!(
                        "image for acting element {} is not a homomorphism at ({x}, {y})",
                        a.element
                    )));
                }
            }
        }
    }
    let identity: Vec<usize> = n.elements().collect();
    let mut phi: Vec<Option<Vec<usize>>> = vec![None; q.order()];
    phi[0] = Some(identity);
    let mut queue = vec![0];
    while let Some(x) = queue.pop() {
        for a in action {
            let y = q.mul(x, a.element);
            let px = phi[x].as_ref().expect("visited");
            let composed: Vec<usize> = a.image.iter().map(|&t| px[t]).collect();
            match &phi[y] {
                Some(existing) if *existing != composed => {
                    return Err(Error::InvalidAction(format!(
                        "action is inconsistent with the relations of the acting group at element {y}"
                    )));
                }
                Some(_) => {}
                None => {
                    phi[y] = Some(composed);
                    queue.push(y);
                }
            }
        }
    }
    phi.into_iter()
        .enumerate()
        .map(|(x, p)| {
            p.ok_or_else(|| {
                Error::InvalidAction(format!("listed acting elements do not generate element {x}"))
            })
        })
        .collect()
}

fn semidirect(n: &Group, q: &Group, action: &[ActionImage], limits: &Limits) -> Result<Group> {
    let phi = action_homomorphism(n, q, action)?;
    let nn = n.order();
    table(
        q.order() * nn,
        |x, y| {
            let (q1, n1) = (x / nn, x % nn);
            let (q2, n2) = (y / nn, y % nn);
            q.mul(q1, q2) * nn + n.mul(phi[q.inv(q2)][n1], n2)
        },
        limits,
    )
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, xs: &[usize]) -> fmt::Result {
            f.write_str("[")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")
        }
        match self {
            Recipe::Cyclic(n) => write!(f, "C({n})"),
            Recipe::Dihedral(m) => write!(f, "D({m})"),
            Recipe::Dicyclic(m) => write!(f, "Dic({m})"),
            Recipe::Symmetric(m) => write!(f, "S({m})"),
            Recipe::Product(a, b) => write!(f, "P({a},{b})"),
            Recipe::Semidirect { normal, acting, action } => {
                write!(f, "SD({normal},{acting},action=[")?;
                for (i, a) in action.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}:", a.element)?;
                    list(f, &a.image)?;
                }
                f.write_str("])")
            }
            Recipe::CentralQuotient { base, generators } => {
                write!(f, "CQ({base},gens=")?;
                list(f, generators)?;
                f.write_str(")")
            }
        }
    }
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let r = p.recipe()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(r)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::RecipeSyntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::RecipeSyntax { pos: start, msg: "expected a number".into() })
    }

    fn numbers(&mut self) -> Result<Vec<usize>> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat("]") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_alphabetic) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a constructor name"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii letters"))
    }

    fn recipe(&mut self) -> Result<Recipe> {
        let start = self.pos;
        let name = self.ident()?.to_string();
        self.expect("(")?;
        let r = match name.as_str() {
            "C" => Recipe::Cyclic(self.number()?),
            "D" => Recipe::Dihedral(self.number()?),
            "Dic" => Recipe::Dicyclic(self.number()?),
            "S" => Recipe::Symmetric(self.number()?),
            "P" => {
                let a = self.recipe()?;
                self.expect(",")?;
                Recipe::product(a, self.recipe()?)
            }
            "SD" => {
                let normal = self.recipe()?;
                self.expect(",")?;
                let acting = self.recipe()?;
                self.expect(",")?;
                self.expect("action")?;
                self.expect("=")?;
                self.expect("[")?;
                let mut action = Vec::new();
                if !self.eat("]") {
                    loop {
                        let element = self.number()?;
                        self.expect(":")?;
                        action.push(ActionImage { element, image: self.numbers()? });
                        if self.eat("]") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                Recipe::semidirect(normal, acting, action)
            }
            "CQ" => {
                let base = self.recipe()?;
                self.expect(",")?;
                self.expect("gens")?;
                self.expect("=")?;
                Recipe::central_quotient(base, self.numbers()?)
            }
            _ => return Err(Error::RecipeSyntax { pos: start, msg: format!("unknown constructor `{name}`") }),
        };
        self.expect(")")?;
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_constructions() {
        assert_eq!(construct(&Recipe::Cyclic(1)).unwrap().order(), 1);
        let d4 = construct(&Recipe::Dihedral(4)).unwrap();
        assert_eq!(d4.order(), 8);
        // reflections a^i b all have order 2
        for x in 4..8 {
            assert_eq!(d4.element_order(x).unwrap(), 2);
        }
        let q8 = construct(&Recipe::Dicyclic(2)).unwrap();
        assert_eq!(q8.element_orders().iter().filter(|&&o| o == 4).count(), 6);
        let s3 = construct(&Recipe::Symmetric(3)).unwrap();
        assert_eq!(s3.exponent(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(construct(&Recipe::Symmetric(5)).unwrap().order(), 120);
    }

    #[test]
    fn invalid_recipes() {
        assert!(matches!(construct(&Recipe::Cyclic(0)), Err(Error::InvalidRecipe(_))));
        assert!(matches!(construct(&Recipe::Symmetric(6)), Err(Error::InvalidRecipe(_))));
        let big = Recipe::product(Recipe::Cyclic(30), Recipe::Cyclic(30));
        assert!(matches!(construct(&big), Err(Error::OrderBound { order: 900, .. })));
        // x -> 2x is not an automorphism of C4
        let bad = Recipe::semidirect(
            Recipe::Cyclic(4),
            Recipe::Cyclic(2),
            vec![ActionImage { element: 1, image: vec![0, 2, 0, 2] }],
        );
        assert!(matches!(construct(&bad), Err(Error::InvalidAction(_))));
        // inversion has order 2, so it cannot be the image of a generator of C3
        let bad = Recipe::semidirect(
            Recipe::Cyclic(5),
            Recipe::Cyclic(3),
            vec![ActionImage { element: 1, image: vec![0, 4, 3, 2, 1] }],
        );
        assert!(matches!(construct(&bad), Err(Error::InvalidAction(_))));
        // a reflection of D4 is not central
        let bad = Recipe::central_quotient(Recipe::Dihedral(4), vec![4]);
        assert!(matches!(construct(&bad), Err(Error::NotCentral(4))));
    }

    #[test]
    fn central_quotient_of_dihedral() {
        let q = construct(&Recipe::central_quotient(Recipe::Dihedral(4), vec![2])).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(), 2);
    }

    #[test]
    fn dsl_parses_with_whitespace() {
        let r: Recipe = " SD( P(C(2), C(2)) , C(3), action = [1:[0,2,3,1]] )".parse().unwrap();
        assert_eq!(r.to_string(), "SD(P(C(2),C(2)),C(3),action=[1:[0,2,3,1]])");
        assert_eq!(construct(&r).unwrap().order(), 12);
        assert!(matches!("Q(3)".parse::<Recipe>(), Err(Error::RecipeSyntax { .. })));
        assert!(matches!("C(3) x".parse::<Recipe>(), Err(Error::RecipeSyntax { .. })));
        assert!(matches!("C(".parse::<Recipe>(), Err(Error::RecipeSyntax { .. })));
    }

    fn leaf() -> impl Strategy<Value = Recipe> {
        prop_oneof![
            (1usize..9).prop_map(Recipe::Cyclic),
            (1usize..5).prop_map(Recipe::Dihedral),
            (1usize..4).prop_map(Recipe::Dicyclic),
            (1usize..4).prop_map(Recipe::Symmetric),
        ]
    }

    fn recipe() -> impl Strategy<Value = Recipe> {
        leaf().prop_recursive(2, 4, 2, |inner| {
            (inner.clone(), inner).prop_map(|(a, b)| Recipe::product(a, b))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dsl_round_trips(r in recipe()) {
            let text = r.to_string();
            prop_assert_eq!(text.parse::<Recipe>().unwrap(), r);
        }

        #[test]
        fn constructed_groups_are_valid_and_deterministic(r in recipe()) {
            prop_assume!(r.order().unwrap() <= 64);
            let g = construct(&r).unwrap();
            prop_assert_eq!(Some(g.order()), r.order());
            prop_assert!(validate_group_rows(&g));
            prop_assert!(g.same_table(&construct(&r).unwrap()));
            for x in g.elements() {
                prop_assert_eq!(g.element_order(x).unwrap(), g.element_order(g.inv(x)).unwrap());
            }
        }
    }

    fn validate_group_rows(g: &Group) -> bool {
        crate::group::validate_group(&g.rows()).is_ok()
    }
}
