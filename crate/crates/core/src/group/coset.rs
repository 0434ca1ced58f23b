use crate::error::{Error, Result};

use super::{BracketGroup, FiniteGroup, GroupElement, Permutation, Subgroup};

/// Default cap on the number of cosets (the permutation degree).
pub const DEFAULT_DEGREE_CAP: u64 = 10_000;

/// Left-multiplication action of G(B) on the left cosets of a subgroup H.
///
/// Cosets are numbered by their minimal element's code, so the permutation
/// attached to an element does not depend on how H was built.
#[derive(Clone, Debug)]
pub struct CosetAction {
    representatives: Vec<GroupElement>,
    /// coset index of every group element, indexed by code
    coset_of: Vec<u32>,
}

impl CosetAction {
    pub fn new(group: &BracketGroup, h: &Subgroup<GroupElement>, degree_cap: u64, group_cap: u64) -> Result<Self> {
        if group.order() > group_cap {
            return Err(Error::cap("group enumeration", group.order(), group_cap));
        }
        if h.order() == 0 || group.order() % h.order() != 0 {
            return Err(Error::contract("subgroup order does not divide the group order"));
        }
        let index = group.order() / h.order();
        if index > degree_cap {
            return Err(Error::cap("coset action degree", index, degree_cap));
        }
        let mut coset_of = vec![u32::MAX; group.order() as usize];
        let mut representatives = Vec::with_capacity(index as usize);
        for code in 0..group.order() {
            if coset_of[code as usize] != u32::MAX {
                continue;
            }
            let rep = group.decode(code);
            let i = representatives.len() as u32;
            for x in h.elements() {
                let y = group.code(&group.mul(&rep, x)) as usize;
                if coset_of[y] != u32::MAX {
                    return Err(Error::contract("element set is not a subgroup: cosets overlap"));
                }
                coset_of[y] = i;
            }
            representatives.push(rep);
        }
        Ok(CosetAction { representatives, coset_of })
    }

    pub fn degree(&self) -> usize {
        self.representatives.len()
    }

    /// Minimal element of each coset, in coset order.
    pub fn representatives(&self) -> &[GroupElement] {
        &self.representatives
    }

    pub fn coset_index(&self, group: &BracketGroup, g: &GroupElement) -> usize {
        self.coset_of[group.code(g) as usize] as usize
    }

    /// The permutation i ↦ index of g·rᵢH.
    pub fn image(&self, group: &BracketGroup, g: &GroupElement) -> Permutation {
        let images = self
            .representatives
            .iter()
            .map(|r| self.coset_of[group.code(&group.mul(g, r)) as usize])
            .collect();
        Permutation::new(images).expect("left multiplication permutes cosets")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::BracketAlgebra;
    use crate::fpla::{PrimeField, Subspace};
    use crate::group::{closure, DEFAULT_GROUP_CAP};

    fn g3() -> BracketGroup {
        BracketGroup::new(BracketAlgebra::sl2(PrimeField::new(3).unwrap())).unwrap()
    }

    #[test]
    fn whole_group_acts_trivially() {
        let g = g3();
        let all = closure(&g, &g.basis_lifts(), DEFAULT_GROUP_CAP).unwrap();
        let action = CosetAction::new(&g, &all, DEFAULT_DEGREE_CAP, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(action.degree(), 1);
        for x in g.elements(DEFAULT_GROUP_CAP).unwrap() {
            assert!(action.image(&g, &x).is_identity());
        }
    }

    #[test]
    fn index_nine_action_is_a_homomorphism() {
        let g = g3();
        let alg = g.algebra();
        let s = Subspace::span(alg.field(), 3, &[alg.basis_vector(0), alg.basis_vector(1)]).unwrap();
        let k = closure(&g, &s.basis().iter().map(|v| g.lift(v)).collect::<Vec<_>>(), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(k.order(), 81);
        let action = CosetAction::new(&g, &k, DEFAULT_DEGREE_CAP, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(action.degree(), 9);
        let all = g.elements(DEFAULT_GROUP_CAP).unwrap();
        let images: Vec<_> = all.iter().map(|x| action.image(&g, x)).collect();
        for (i, x) in all.iter().enumerate() {
            assert_eq!(9 % images[i].order(), 0);
            for (j, y) in all.iter().enumerate() {
                let xy = g.code(&g.mul(x, y)) as usize;
                assert_eq!(images[xy], images[i].compose(&images[j]));
            }
        }
        // kernel lies in K
        for (x, img) in all.iter().zip(&images) {
            if img.is_identity() {
                assert!(k.contains(x));
            }
        }
        // coset representatives are the minima of their cosets
        for (i, r) in action.representatives().iter().enumerate() {
            assert_eq!(action.coset_index(&g, r), i);
        }
        assert!(action.representatives().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn degree_cap() {
        let g = g3();
        let trivial = closure(&g, &[], 10).unwrap();
        assert!(matches!(CosetAction::new(&g, &trivial, 100, DEFAULT_GROUP_CAP), Err(Error::CapExceeded { .. })));
    }
}
