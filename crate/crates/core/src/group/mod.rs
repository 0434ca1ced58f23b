//! Finite groups given by explicit multiplication, subgroup closure, and the
//! two concrete families used here: the central extensions `G(B)` of bracket
//! algebras and permutation groups.

mod bracket_group;
mod coset;
mod perm;

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use num_integer::Integer;

use crate::error::{Error, Result};

pub use bracket_group::{BracketGroup, GroupElement, MAX_GROUP_DIM};
pub use coset::{CosetAction, DEFAULT_DEGREE_CAP};
pub use perm::{wreath_sylow, PermGroup, Permutation, SymmetricGroup};

/// Default cap on materialized group and subgroup sizes.
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

pub trait FiniteGroup {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    fn power(&self, g: &Self::Elem, k: i64) -> Self::Elem {
        let mut base = if k < 0 { self.inverse(g) } else { g.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// g⁻¹h⁻¹gh
    fn commutator(&self, g: &Self::Elem, h: &Self::Elem) -> Self::Elem {
        let gi = self.inverse(g);
        let hi = self.inverse(h);
        self.mul(&self.mul(&gi, &hi), &self.mul(g, h))
    }

    /// Least k >= 1 with g^k = 1.
    fn element_order(&self, g: &Self::Elem) -> u64 {
        let id = self.identity();
        let mut x = g.clone();
        let mut k = 1;
        while x != id {
            x = self.mul(&x, g);
            k += 1;
        }
        k
    }
}

/// Exponent of a finite set of elements: lcm of their orders.
pub fn exponent_of<G: FiniteGroup>(group: &G, elements: &[G::Elem]) -> u64 {
    elements.iter().fold(1, |acc, g| acc.lcm(&group.element_order(g)))
}

/// A subgroup stored as its sorted element set plus the generators it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup<E> {
    elements: Vec<E>,
    generators: Vec<E>,
}

impl<E: Clone + Ord> Subgroup<E> {
    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, g: &E) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup<E>) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Set intersection. The result carries no generators; call
    /// [`Subgroup::with_generators`] when they are needed.
    pub fn intersect(&self, other: &Subgroup<E>) -> Subgroup<E> {
        let elements = self.elements.iter().filter(|g| other.contains(g)).cloned().collect();
        Subgroup { elements, generators: Vec::new() }
    }

    /// Recomputes a small generating set greedily from the element list.
    pub fn with_generators<G: FiniteGroup<Elem = E>>(mut self, group: &G) -> Self
    where
        E: Hash + Debug + Eq,
    {
        let mut gens: Vec<E> = Vec::new();
        let mut span = closure(group, &[], u64::MAX).expect("trivial closure");
        for g in &self.elements {
            if !span.contains(g) {
                gens.push(g.clone());
                span = closure(group, &gens, u64::MAX).expect("uncapped closure");
            }
        }
        self.generators = gens;
        self
    }
}

/// Smallest subgroup containing `generators`, by worklist saturation with
/// left and right multiplication.
pub fn closure<G: FiniteGroup>(group: &G, generators: &[G::Elem], cap: u64) -> Result<Subgroup<G::Elem>> {
    let id = group.identity();
    let mut seen: HashSet<G::Elem> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in generators {
            for y in [group.mul(&x, g), group.mul(g, &x)] {
                if seen.insert(y.clone()) {
                    if seen.len() as u64 > cap {
                        return Err(Error::cap("subgroup closure", seen.len() as u64, cap));
                    }
                    queue.push(y);
                }
            }
        }
    }
    let mut elements: Vec<_> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(Subgroup { elements, generators: generators.to_vec() })
}

/// Wraps an element list already known to be a subgroup (e.g. a kernel or an
/// intersection of subgroups).
pub(crate) fn subgroup_from_sorted<E: Ord>(mut elements: Vec<E>) -> Subgroup<E> {
    elements.sort_unstable();
    Subgroup { elements, generators: Vec::new() }
}

/// Builds a subgroup from an element list after checking closure under
/// multiplication (quadratic in the size).
pub fn subgroup_from_elements<G: FiniteGroup>(group: &G, mut elements: Vec<G::Elem>) -> Result<Subgroup<G::Elem>> {
    elements.sort_unstable();
    elements.dedup();
    let sub = Subgroup { elements, generators: Vec::new() };
    if !sub.contains(&group.identity()) {
        return Err(Error::contract("element set does not contain the identity"));
    }
    for a in sub.elements() {
        for b in sub.elements() {
            if !sub.contains(&group.mul(a, b)) {
                return Err(Error::contract("element set is not closed under multiplication"));
            }
        }
    }
    Ok(sub.with_generators(group))
}

/// Subgroup of `h` generated by all p-th powers and all commutators of its
/// elements (full enumeration; quadratic in |h|). For a p-group this is the
/// Frattini subgroup.
pub fn frattini<G: FiniteGroup>(group: &G, h: &Subgroup<G::Elem>, p: u64, cap: u64) -> Result<Subgroup<G::Elem>> {
    if h.order() > cap {
        return Err(Error::cap("frattini pair sweep", h.order(), cap));
    }
    let mut gens: HashSet<G::Elem> = HashSet::new();
    let id = group.identity();
    for g in h.elements() {
        gens.insert(group.power(g, p as i64));
        for k in h.elements() {
            gens.insert(group.commutator(g, k));
        }
    }
    gens.remove(&id);
    let mut gens: Vec<_> = gens.into_iter().collect();
    gens.sort_unstable();
    Ok(closure(group, &gens, cap)?.with_generators(group))
}

/// Frattini subgroup of a p-group from a generating set: the normal closure
/// of {x^p, [x, y]} over generators x, y. Agrees with [`frattini`] on p-groups
/// and costs O(|Φ| · |gens|) instead of O(|h|²).
pub fn frattini_from_generators<G: FiniteGroup>(
    group: &G,
    h: &Subgroup<G::Elem>,
    p: u64,
    cap: u64,
) -> Result<Subgroup<G::Elem>> {
    let gens = h.generators();
    let mut seeds: Vec<G::Elem> = Vec::new();
    for (i, x) in gens.iter().enumerate() {
        seeds.push(group.power(x, p as i64));
        for y in &gens[i + 1..] {
            seeds.push(group.commutator(x, y));
        }
    }
    normal_closure(group, &seeds, gens, cap)
}

/// Smallest subgroup containing `seeds` and normalized by `conjugators`.
pub fn normal_closure<G: FiniteGroup>(
    group: &G,
    seeds: &[G::Elem],
    conjugators: &[G::Elem],
    cap: u64,
) -> Result<Subgroup<G::Elem>> {
    let id = group.identity();
    let mut gens: Vec<G::Elem> = Vec::new();
    let mut span = closure(group, &[], cap)?;
    let mut pending: Vec<G::Elem> = seeds.to_vec();
    while let Some(x) = pending.pop() {
        if x == id || span.contains(&x) {
            continue;
        }
        gens.push(x.clone());
        span = closure(group, &gens, cap)?;
        for c in conjugators {
            let ci = group.inverse(c);
            pending.push(group.mul(&group.mul(&ci, &x), c));
        }
    }
    // conjugates of every generator must stay inside
    debug_assert!(gens.iter().all(|x| conjugators.iter().all(|c| {
        let ci = group.inverse(c);
        span.contains(&group.mul(&group.mul(&ci, x), c))
    })));
    Ok(span.with_generators(group))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::BracketAlgebra;
    use crate::fpla::PrimeField;

    fn g3() -> BracketGroup {
        BracketGroup::new(BracketAlgebra::sl2(PrimeField::new(3).unwrap())).unwrap()
    }

    #[test]
    fn closure_examples() {
        let g = g3();
        let trivial = closure(&g, &[g.identity()], 10).unwrap();
        assert_eq!(trivial.order(), 1);
        let all = closure(&g, &g.basis_lifts(), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(all.order(), 729);
        assert!(matches!(closure(&g, &g.basis_lifts(), 100), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn lagrange_on_random_closures() {
        use rand::{Rng, SeedableRng};
        let g = g3();
        let all = g.elements(DEFAULT_GROUP_CAP).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let k = rng.gen_range(0..3);
            let gens: Vec<_> = (0..k).map(|_| all[rng.gen_range(0..all.len())]).collect();
            let h = closure(&g, &gens, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(729 % h.order(), 0);
            for a in h.elements() {
                assert!(h.contains(&g.inverse(a)));
            }
        }
    }

    #[test]
    fn frattini_methods_agree() {
        let g = g3();
        let all = closure(&g, &g.basis_lifts(), DEFAULT_GROUP_CAP).unwrap();
        let full = frattini(&g, &all, 3, DEFAULT_GROUP_CAP).unwrap();
        let fast = frattini_from_generators(&g, &all, 3, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(full.elements(), fast.elements());
        assert_eq!(full.elements(), g.center_w().elements());
        let w = g.center_w();
        assert!(frattini(&g, &w, 3, DEFAULT_GROUP_CAP).unwrap().is_trivial());
    }

    #[test]
    fn from_elements_rejects_non_subgroups() {
        let g = g3();
        let x = g.lift(&g.algebra().basis_vector(0));
        assert!(subgroup_from_elements(&g, vec![g.identity(), x]).is_err());
        let w = g.center_w();
        let rebuilt = subgroup_from_elements(&g, w.elements().to_vec()).unwrap();
        assert_eq!(rebuilt.elements(), w.elements());
        assert_eq!(rebuilt.generators().len(), 3);
    }
}
