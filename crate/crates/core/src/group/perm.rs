use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fpla::is_prime;

use super::{closure, FiniteGroup};

/// A bijection of {0, …, d-1}, stored by its images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            let x = x as usize;
            if x >= d || std::mem::replace(&mut seen[x], true) {
                return Err(Error::contract(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// The cycle (c₀ c₁ … c_k) on `degree` points.
    pub fn cycle(degree: usize, points: &[u32]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in points.iter().enumerate() {
            let next = points[(i + 1) % points.len()];
            if x as usize >= degree || next as usize >= degree {
                return Err(Error::contract(format!("cycle point outside 0..{degree}")));
            }
            images[x as usize] = next;
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// self ∘ other: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    /// lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut order = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            order = order.lcm(&len);
        }
        order
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// Sym(d), used as the ambient group for permutation closures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetricGroup {
    pub degree: usize,
}

impl FiniteGroup for SymmetricGroup {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b)
    }

    fn inverse(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn element_order(&self, g: &Permutation) -> u64 {
        g.order()
    }
}

/// A permutation group given by generators, optionally materialized.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Option<Vec<Permutation>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::contract(format!("generator of degree {} in a group of degree {degree}", g.degree())));
        }
        Ok(PermGroup { degree, generators, elements: None })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn ambient(&self) -> SymmetricGroup {
        SymmetricGroup { degree: self.degree }
    }

    pub fn materialize(&mut self, cap: u64) -> Result<&[Permutation]> {
        if self.elements.is_none() {
            let sub = closure(&self.ambient(), &self.generators, cap)?;
            self.elements = Some(sub.elements().to_vec());
        }
        Ok(self.elements.as_deref().expect("just materialized"))
    }

    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    pub fn order(&mut self, cap: u64) -> Result<u64> {
        Ok(self.materialize(cap)?.len() as u64)
    }

    pub fn exponent(&mut self, cap: u64) -> Result<u64> {
        let ambient = self.ambient();
        Ok(super::exponent_of(&ambient, self.materialize(cap)?))
    }
}

/// The Sylow p-subgroup S(pⁿ) of Sym(pⁿ) for n ∈ {1, 2}: the cyclic shift
/// on p points, or the wreath product Z/p ≀ Z/p generated by the p block
/// cycles and the block shift x ↦ x + p (mod p²).
pub fn wreath_sylow(p: u64, n: u32) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::contract(format!("{p} is not prime")));
    }
    if p > 7 {
        return Err(Error::contract(format!("wreath Sylow subgroups are supported for p <= 7, got {p}")));
    }
    let p32 = p as u32;
    match n {
        1 => {
            let shift = Permutation::cycle(p as usize, &(0..p32).collect::<Vec<_>>())?;
            PermGroup::new(p as usize, vec![shift])
        }
        2 => {
            let degree = (p * p) as usize;
            let mut gens = Vec::with_capacity(p as usize + 1);
            for block in 0..p32 {
                let points: Vec<u32> = (0..p32).map(|i| block * p32 + i).collect();
                gens.push(Permutation::cycle(degree, &points)?);
            }
            let top = (0..degree as u32).map(|x| (x + p32) % degree as u32).collect();
            gens.push(Permutation::new(top)?);
            PermGroup::new(degree, gens)
        }
        _ => Err(Error::contract(format!("wreath Sylow subgroups are supported for n in {{1, 2}}, got {n}"))),
    }
}
