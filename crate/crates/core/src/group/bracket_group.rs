use std::fmt;

use crate::bracket::BracketAlgebra;
use crate::error::{Error, Result};
use crate::fpla::{odometer, FpVector, PrimeField, Subspace};

use super::{closure, FiniteGroup, Subgroup};

pub const MAX_GROUP_DIM: usize = 16;

/// An element (a, s) of G(B): `a` is the image in V = B, `s` the coordinate
/// in the central subgroup W. Digits beyond the algebra dimension are zero.
///
/// The derived ordering is lexicographic on (a, s), which coincides with the
/// order of the packed code from [`BracketGroup::code`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    a: [u8; MAX_GROUP_DIM],
    s: [u8; MAX_GROUP_DIM],
    n: u8,
}

impl GroupElement {
    pub fn a(&self) -> &[u8] {
        &self.a[..self.n as usize]
    }

    pub fn s(&self) -> &[u8] {
        &self.s[..self.n as usize]
    }

    pub fn is_central_coordinate(&self) -> bool {
        self.a().iter().all(|&d| d == 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.a(), self.s())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The central extension 1 → W → G(B) → V → 1 attached to a bracket algebra
/// B on V, with W ≅ V, commutator map equal to the bracket and p-power map
/// equal to the identity V → W.
///
/// Multiplication is (a, s)(b, t) = (a + b, s + t + c(a, b)) with the 2-cocycle
/// c(a, b) = ½[a, b] + κ(a, b), where κ is the coordinatewise carry of the
/// Z/p² extension: κ(a, b)ᵢ = 1 when aᵢ + bᵢ ≥ p (representatives 0..p-1).
#[derive(Clone, Debug)]
pub struct BracketGroup {
    algebra: BracketAlgebra,
    half: u8,
    order: u64,
}

impl BracketGroup {
    pub fn new(algebra: BracketAlgebra) -> Result<Self> {
        let n = algebra.dim();
        if n == 0 || n > MAX_GROUP_DIM {
            return Err(Error::contract(format!("algebra dimension {n} outside 1..={MAX_GROUP_DIM}")));
        }
        let p = algebra.field().p() as u128;
        let order = p.checked_pow(2 * n as u32).filter(|&o| o <= u64::MAX as u128).ok_or_else(|| {
            Error::contract(format!("p^(2n) = {p}^{} does not fit a 64-bit element code", 2 * n))
        })?;
        let half = algebra.field().inv(2).expect("p is odd");
        Ok(BracketGroup { algebra, half, order: order as u64 })
    }

    pub fn algebra(&self) -> &BracketAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn p(&self) -> u64 {
        self.field().p() as u64
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// |G| = p^(2n).
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn element(&self, a: &FpVector, s: &FpVector) -> Result<GroupElement> {
        if a.field() != self.field() || s.field() != self.field() {
            return Err(Error::contract("element coordinates over a different field"));
        }
        self.from_digits(a.digits(), s.digits())
    }

    pub fn from_digits(&self, a: &[u8], s: &[u8]) -> Result<GroupElement> {
        let n = self.dim();
        if a.len() != n || s.len() != n {
            return Err(Error::contract(format!("element with {} + {} digits in G of dimension {n}", a.len(), s.len())));
        }
        let p = self.field().p();
        if a.iter().chain(s).any(|&d| d >= p) {
            return Err(Error::contract("element digit is not a residue"));
        }
        let mut g = GroupElement { a: [0; MAX_GROUP_DIM], s: [0; MAX_GROUP_DIM], n: n as u8 };
        g.a[..n].copy_from_slice(a);
        g.s[..n].copy_from_slice(s);
        Ok(g)
    }

    /// Rejects elements that do not belong to this group.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let n = self.dim();
        let p = self.field().p();
        if g.n as usize != n
            || g.a().iter().chain(g.s()).any(|&d| d >= p)
            || g.a[n..].iter().chain(&g.s[n..]).any(|&d| d != 0)
        {
            return Err(Error::contract(format!("{g:?} is not an element of this group")));
        }
        Ok(())
    }

    /// (v, 0)
    pub fn lift(&self, v: &FpVector) -> GroupElement {
        let zero = vec![0u8; self.dim()];
        self.from_digits(v.digits(), &zero).expect("vector of algebra length")
    }

    /// (0, s)
    pub fn central(&self, s: &FpVector) -> GroupElement {
        let zero = vec![0u8; self.dim()];
        self.from_digits(&zero, s.digits()).expect("vector of algebra length")
    }

    pub fn basis_lifts(&self) -> Vec<GroupElement> {
        (0..self.dim()).map(|i| self.lift(&self.algebra.basis_vector(i))).collect()
    }

    pub fn a_vector(&self, g: &GroupElement) -> FpVector {
        FpVector::new(self.field(), g.a().to_vec()).expect("reduced digits")
    }

    pub fn s_vector(&self, g: &GroupElement) -> FpVector {
        FpVector::new(self.field(), g.s().to_vec()).expect("reduced digits")
    }

    /// Packed base-p code of (a₀..a_{n-1}, s₀..s_{n-1}), most significant first.
    /// Codes are exactly 0..|G| and sort like the elements.
    #[inline]
    pub fn code(&self, g: &GroupElement) -> u64 {
        let p = self.p();
        g.a().iter().chain(g.s()).fold(0u64, |acc, &d| acc * p + d as u64)
    }

    pub fn decode(&self, mut code: u64) -> GroupElement {
        let n = self.dim();
        let p = self.p();
        let mut g = GroupElement { a: [0; MAX_GROUP_DIM], s: [0; MAX_GROUP_DIM], n: n as u8 };
        for i in (0..n).rev() {
            g.s[i] = (code % p) as u8;
            code /= p;
        }
        for i in (0..n).rev() {
            g.a[i] = (code % p) as u8;
            code /= p;
        }
        g
    }

    /// The 2-cocycle c(a, b) = ½[a, b] + κ(a, b) on raw digit slices.
    #[inline]
    pub fn cocycle_into(&self, a: &[u8], b: &[u8], out: &mut [u8]) {
        let f = self.field();
        let p = f.p() as u16;
        self.algebra.bracket_into(a, b, out);
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            let carry = (x as u16 + y as u16 >= p) as u8;
            *o = f.add(f.mul(self.half, *o), carry);
        }
    }

    pub fn cocycle(&self, a: &FpVector, b: &FpVector) -> FpVector {
        let mut out = vec![0u8; self.dim()];
        self.cocycle_into(a.digits(), b.digits(), &mut out);
        FpVector::new(self.field(), out).expect("reduced digits")
    }

    pub fn try_mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    /// The central subgroup W = {(0, s)}.
    pub fn center_w(&self) -> Subgroup<GroupElement> {
        let gens: Vec<_> = (0..self.dim()).map(|i| self.central(&self.algebra.basis_vector(i))).collect();
        closure(self, &gens, u64::MAX).expect("uncapped closure")
    }

    /// Preimage {(a, s) : a ∈ U} of a subspace U of V.
    pub fn preimage(&self, u: &Subspace) -> Result<Subgroup<GroupElement>> {
        if u.ambient_dim() != self.dim() || u.field() != self.field() {
            return Err(Error::contract("subspace does not live in V"));
        }
        let n = self.dim();
        let p = self.field().p();
        let mut elements = Vec::with_capacity(u.elements().len() * (p as usize).pow(n as u32));
        for a in u.elements() {
            let mut s = vec![0u8; n];
            loop {
                elements.push(self.from_digits(a.digits(), &s).expect("reduced digits"));
                if !odometer(&mut s, p) {
                    break;
                }
            }
        }
        elements.sort_unstable();
        let mut generators: Vec<_> = u.basis().iter().map(|v| self.lift(v)).collect();
        generators.extend((0..n).map(|i| self.central(&self.algebra.basis_vector(i))));
        Ok(Subgroup { elements, generators })
    }

    /// Every element in code order.
    pub fn elements(&self, cap: u64) -> Result<Vec<GroupElement>> {
        if self.order > cap {
            return Err(Error::cap("group enumeration", self.order, cap));
        }
        Ok((0..self.order).map(|c| self.decode(c)).collect())
    }

    /// Order counted by enumerating the closure of the basis lifts.
    pub fn enumerated_order(&self, cap: u64) -> Result<u64> {
        Ok(closure(self, &self.basis_lifts(), cap)?.order())
    }

    /// lcm of all element orders, by full enumeration.
    pub fn exponent(&self, cap: u64) -> Result<u64> {
        Ok(super::exponent_of(self, &self.elements(cap)?))
    }

    /// Elements commuting with a generating set of G.
    pub fn center(&self, cap: u64) -> Result<Vec<GroupElement>> {
        let gens = self.basis_lifts();
        Ok(self
            .elements(cap)?
            .into_iter()
            .filter(|z| gens.iter().all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect())
    }
}

impl FiniteGroup for BracketGroup {
    type Elem = GroupElement;

    fn identity(&self) -> GroupElement {
        GroupElement { a: [0; MAX_GROUP_DIM], s: [0; MAX_GROUP_DIM], n: self.dim() as u8 }
    }

    #[inline]
    fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        debug_assert_eq!(g.n, h.n);
        let n = self.dim();
        let f = self.field();
        let mut c = [0u8; MAX_GROUP_DIM];
        self.cocycle_into(g.a(), h.a(), &mut c[..n]);
        let mut out = self.identity();
        for i in 0..n {
            out.a[i] = f.add(g.a[i], h.a[i]);
            out.s[i] = f.add(f.add(g.s[i], h.s[i]), c[i]);
        }
        out
    }

    /// (a, s)⁻¹ = (-a, -s - c(a, -a)).
    fn inverse(&self, g: &GroupElement) -> GroupElement {
        let n = self.dim();
        let f = self.field();
        let mut out = self.identity();
        for i in 0..n {
            out.a[i] = f.neg(g.a[i]);
        }
        let mut c = [0u8; MAX_GROUP_DIM];
        self.cocycle_into(g.a(), out.a(), &mut c[..n]);
        for i in 0..n {
            out.s[i] = f.neg(f.add(g.s[i], c[i]));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use rayon::prelude::*;

    use super::*;
    use crate::group::DEFAULT_GROUP_CAP;

    fn group(p: u64) -> BracketGroup {
        BracketGroup::new(BracketAlgebra::sl2(PrimeField::new(p).unwrap())).unwrap()
    }

    fn e(g: &BracketGroup, a: &[i64], s: &[i64]) -> GroupElement {
        let f = g.field();
        g.element(&FpVector::from_ints(f, a), &FpVector::from_ints(f, s)).unwrap()
    }

    /// Direct word evaluation of a commutator with explicit inverses found by search.
    fn brute_inverse(g: &BracketGroup, x: &GroupElement, all: &[GroupElement]) -> GroupElement {
        *all.iter().find(|y| g.mul(x, y) == g.identity()).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let g = group(3);
        let eh = e(&g, &[1, 0, 0], &[0, 0, 0]);
        assert_eq!(g.mul(&eh, &eh), e(&g, &[2, 0, 0], &[0, 0, 0]));
        let two_eh = e(&g, &[2, 0, 0], &[0, 0, 0]);
        assert_eq!(g.mul(&two_eh, &eh), e(&g, &[0, 0, 0], &[1, 0, 0]));
        let xp = e(&g, &[0, 1, 0], &[0, 0, 0]);
        let xm = e(&g, &[0, 0, 1], &[0, 0, 0]);
        assert_eq!(g.commutator(&xp, &xm), e(&g, &[0, 0, 0], &[1, 0, 0]));
        assert_eq!(g.inverse(&g.identity()), g.identity());
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let g3 = group(3);
        let g5 = group(5);
        let x = e(&g5, &[4, 0, 0], &[0, 0, 0]);
        assert!(g3.try_mul(&x, &g3.identity()).is_err());
        let small = BracketGroup::new(BracketAlgebra::abelian(g3.field(), 1)).unwrap();
        assert!(g3.try_mul(&small.identity(), &g3.identity()).is_err());
        assert!(g3.from_digits(&[3, 0, 0], &[0, 0, 0]).is_err());
    }

    #[test]
    fn codes_are_dense_and_ordered() {
        let g = group(3);
        let all = g.elements(DEFAULT_GROUP_CAP).unwrap();
        for (i, x) in all.iter().enumerate() {
            assert_eq!(g.code(x), i as u64);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cocycle_condition_exhaustive_p3() {
        let g = group(3);
        let f = g.field();
        let vs: Vec<_> = g.elements(DEFAULT_GROUP_CAP).unwrap().iter().filter(|x| x.s().iter().all(|&d| d == 0)).map(|x| g.a_vector(x)).collect();
        assert_eq!(vs.len(), 27);
        for a in &vs {
            for b in &vs {
                for d in &vs {
                    let lhs = g.cocycle(a, b).add(&g.cocycle(&a.add(b), d));
                    let rhs = g.cocycle(b, d).add(&g.cocycle(a, &b.add(d)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
        let _ = f;
    }

    #[test]
    fn associativity_exhaustive_p3() {
        let g = group(3);
        let all = g.elements(DEFAULT_GROUP_CAP).unwrap();
        let reps: Vec<_> = all.iter().step_by(7).collect();
        reps.par_iter().for_each(|x| {
            for y in &all {
                for z in reps.iter() {
                    assert_eq!(g.mul(&g.mul(x, y), z), g.mul(x, &g.mul(y, z)));
                }
            }
        });
    }

    #[test]
    fn p_power_is_identification() {
        let g = group(3);
        for x in g.elements(DEFAULT_GROUP_CAP).unwrap() {
            let mut y = g.identity();
            for _ in 0..3 {
                y = g.mul(&y, &x);
            }
            assert_eq!(y, g.central(&g.a_vector(&x)));
            assert_eq!(g.power(&x, 3), y);
            assert_eq!(g.mul(&x, &g.inverse(&x)), g.identity());
            assert_eq!(g.mul(&g.inverse(&x), &x), g.identity());
        }
    }

    #[test]
    fn commutator_is_bracket_exhaustive_p3() {
        let g = group(3);
        let all = g.elements(DEFAULT_GROUP_CAP).unwrap();
        let alg = g.algebra();
        for x in &all {
            let xi = brute_inverse(&g, x, &all);
            for y in all.iter().step_by(5) {
                let yi = brute_inverse(&g, y, &all);
                let word = g.mul(&g.mul(&xi, &yi), &g.mul(x, y));
                let expected = g.central(&alg.bracket(&g.a_vector(x), &g.a_vector(y)).unwrap());
                assert_eq!(word, expected);
                assert_eq!(g.commutator(x, y), expected);
            }
        }
    }

    #[test]
    fn orders_and_exponent() {
        let g = group(3);
        assert_eq!(g.element_order(&g.identity()), 1);
        for x in g.elements(DEFAULT_GROUP_CAP).unwrap() {
            let expected = if x == g.identity() {
                1
            } else if x.is_central_coordinate() {
                3
            } else {
                9
            };
            assert_eq!(g.element_order(&x), expected);
        }
        assert_eq!(g.exponent(DEFAULT_GROUP_CAP).unwrap(), 9);
        assert_eq!(group(5).exponent(DEFAULT_GROUP_CAP).unwrap(), 25);
        let w = g.center_w();
        assert_eq!(crate::group::exponent_of(&g, w.elements()), 3);
        assert!(matches!(group(5).exponent(1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn group_orders() {
        assert_eq!(group(3).order(), 729);
        assert_eq!(group(3).enumerated_order(DEFAULT_GROUP_CAP).unwrap(), 729);
        assert_eq!(group(5).order(), 15_625);
        assert_eq!(group(5).enumerated_order(DEFAULT_GROUP_CAP).unwrap(), 15_625);
        let z9 = BracketGroup::new(BracketAlgebra::abelian(PrimeField::new(3).unwrap(), 1)).unwrap();
        assert_eq!(z9.order(), 9);
        assert_eq!(z9.enumerated_order(100).unwrap(), 9);
        assert_eq!(z9.exponent(100).unwrap(), 9);
    }

    #[test]
    fn w_is_the_central_elements_of_order_p() {
        let g = group(3);
        let center = g.center(DEFAULT_GROUP_CAP).unwrap();
        let all = g.elements(DEFAULT_GROUP_CAP).unwrap();
        let central_p: Vec<_> = all
            .iter()
            .filter(|x| g.power(x, 3) == g.identity())
            .filter(|x| all.iter().all(|y| g.mul(x, y) == g.mul(y, x)))
            .copied()
            .collect();
        assert_eq!(central_p, g.center_w().elements());
        assert_eq!(center, central_p);
    }
}
