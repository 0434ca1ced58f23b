//! Exact linear algebra over a prime field F_p.
//!
//! Subspaces are always stored by their reduced row-echelon basis, so two
//! `Subspace` values are equal exactly when they span the same set.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Default cap on the number of subspaces a single enumeration may produce.
pub const DEFAULT_SUBSPACE_CAP: u64 = 1_000_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An odd prime field F_p with 3 <= p <= 251, so residues fit in a byte.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u8,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || p > 251 || !is_prime(p) {
            return Err(Error::UnsupportedField(p));
        }
        Ok(PrimeField { p: p as u8 })
    }

    #[inline]
    pub fn p(&self) -> u8 {
        self.p
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p as u32
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: u8) -> Option<u8> {
        if a % self.p == 0 {
            return None;
        }
        // a^(p-2) by square-and-multiply
        let (mut base, mut exp, mut acc) = (a as u32, self.p as u32 - 2, 1u32);
        let m = self.p as u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(acc as u8)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    field: PrimeField,
    digits: Vec<u8>,
}

impl FpVector {
    pub fn new(field: PrimeField, digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d >= field.p()) {
            return Err(Error::contract(format!("digit {d} is not a residue mod {}", field.p())));
        }
        Ok(FpVector { field, digits })
    }

    /// Reduces arbitrary integers mod p.
    pub fn from_ints(field: PrimeField, values: &[i64]) -> Self {
        FpVector { field, digits: values.iter().map(|&x| field.reduce(x)).collect() }
    }

    pub fn zero(field: PrimeField, len: usize) -> Self {
        FpVector { field, digits: vec![0; len] }
    }

    pub fn unit(field: PrimeField, len: usize, i: usize) -> Self {
        let mut v = Self::zero(field, len);
        v.digits[i] = 1;
        v
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn add(&self, other: &FpVector) -> FpVector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        let f = self.field;
        let digits = self.digits.iter().zip(&other.digits).map(|(&a, &b)| f.add(a, b)).collect();
        FpVector { field: f, digits }
    }

    pub fn sub(&self, other: &FpVector) -> FpVector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        let f = self.field;
        let digits = self.digits.iter().zip(&other.digits).map(|(&a, &b)| f.sub(a, b)).collect();
        FpVector { field: f, digits }
    }

    pub fn scale(&self, c: u8) -> FpVector {
        let f = self.field;
        FpVector { field: f, digits: self.digits.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn neg(&self) -> FpVector {
        let f = self.field;
        FpVector { field: f, digits: self.digits.iter().map(|&a| f.neg(a)).collect() }
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.digits.iter().join(", "))
    }
}

/// A dense matrix over F_p stored as rows of residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    ncols: usize,
    rows: Vec<Vec<u8>>,
}

impl FpMatrix {
    pub fn new(field: PrimeField, ncols: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::contract(format!("row of length {} in a {ncols}-column matrix", r.len())));
            }
            if r.iter().any(|&d| d >= field.p()) {
                return Err(Error::contract("matrix entry is not a residue"));
            }
        }
        Ok(FpMatrix { field, ncols, rows })
    }

    pub fn from_vectors(field: PrimeField, ncols: usize, vectors: &[FpVector]) -> Result<Self> {
        Self::new(field, ncols, vectors.iter().map(|v| v.digits().to_vec()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
}

/// Gauss-Jordan elimination. Returns the rank and the reduced row-echelon
/// form, with zero rows moved to the bottom.
pub fn rref(m: &FpMatrix) -> (usize, FpMatrix) {
    let f = m.field;
    let mut rows = m.rows.clone();
    let mut rank = 0;
    for col in 0..m.ncols {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = f.inv(rows[rank][col]).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let c = row[col];
            if i == rank || c == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    (rank, FpMatrix { field: f, ncols: m.ncols, rows })
}

/// A linear subspace of F_p^n in canonical (RREF) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    field: PrimeField,
    ambient_dim: usize,
    basis: Vec<FpVector>,
}

impl Subspace {
    pub fn span(field: PrimeField, ambient_dim: usize, vectors: &[FpVector]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim || v.field() != field) {
            return Err(Error::contract(format!(
                "vector of length {} over {} in F_{}^{ambient_dim}",
                v.len(),
                v.field(),
                field.p()
            )));
        }
        let m = FpMatrix::from_vectors(field, ambient_dim, vectors)?;
        Ok(Self::from_matrix(&m))
    }

    fn from_matrix(m: &FpMatrix) -> Self {
        let (rank, reduced) = rref(m);
        let basis = reduced.rows.into_iter().take(rank).map(|digits| FpVector { field: m.field, digits }).collect();
        Subspace { field: m.field, ambient_dim: m.ncols, basis }
    }

    pub fn zero(field: PrimeField, ambient_dim: usize) -> Self {
        Subspace { field, ambient_dim, basis: Vec::new() }
    }

    pub fn full(field: PrimeField, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| FpVector::unit(field, ambient_dim, i)).collect();
        Subspace { field, ambient_dim, basis }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|v| v.digits().iter().position(|&d| d != 0).expect("basis rows are nonzero")).collect()
    }

    /// Membership by reduction against the RREF basis.
    pub fn contains(&self, v: &FpVector) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length does not match ambient dimension");
        let f = self.field;
        let mut rest = v.digits().to_vec();
        for (row, pivot) in self.basis.iter().zip(self.pivots()) {
            let c = rest[pivot];
            if c == 0 {
                continue;
            }
            for (x, &y) in rest.iter_mut().zip(row.digits()) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        rest.iter().all(|&d| d == 0)
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field || self.ambient_dim != other.ambient_dim {
            return Err(Error::contract(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.field.p(),
                self.ambient_dim,
                other.field.p(),
                other.ambient_dim
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let vectors: Vec<_> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(self.field, self.ambient_dim, &vectors)
    }

    /// The orthogonal complement under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        let f = self.field;
        let n = self.ambient_dim;
        let pivots = self.pivots();
        let mut vectors = Vec::with_capacity(n - self.dim());
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut x = vec![0u8; n];
            x[free] = 1;
            for (row, &pc) in self.basis.iter().zip(&pivots) {
                x[pc] = f.neg(row.digits()[free]);
            }
            vectors.push(FpVector { field: f, digits: x });
        }
        Subspace::span(f, n, &vectors).expect("annihilator vectors have ambient length")
    }

    /// a ∩ b = ann(ann(a) + ann(b)).
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// All p^dim vectors of the subspace, in odometer order over the basis coefficients.
    pub fn elements(&self) -> Vec<FpVector> {
        let f = self.field;
        let p = f.p() as usize;
        let k = self.dim();
        let total = p.pow(k as u32);
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![0u8; k];
        for _ in 0..total {
            let mut v = vec![0u8; self.ambient_dim];
            for (c, row) in coeffs.iter().zip(&self.basis) {
                if *c == 0 {
                    continue;
                }
                for (x, &y) in v.iter_mut().zip(row.digits()) {
                    *x = f.add(*x, f.mul(*c, y));
                }
            }
            out.push(FpVector { field: f, digits: v });
            odometer(&mut coeffs, f.p());
        }
        out
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{{}}}", self.basis.iter().join(", "))
    }
}

/// Advances a little-endian base-`p` counter; returns false on wraparound.
pub(crate) fn odometer(digits: &mut [u8], p: u8) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// Number of k-dimensional subspaces of F_p^n.
pub fn gaussian_binomial(p: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= p.pow((n - i) as u32) - 1;
        den *= p.pow((k - i) as u32) - 1;
    }
    num / den
}

/// Every k-dimensional subspace of F_p^n, generated directly as RREF matrices
/// (pivot pattern, then free entries), so the list has no duplicates.
pub fn enumerate_subspaces(field: PrimeField, n: usize, k: usize, cap: u64) -> Result<Vec<Subspace>> {
    if k > n {
        return Err(Error::contract(format!("subspace dimension {k} exceeds ambient dimension {n}")));
    }
    let count = gaussian_binomial(field.p() as u64, n, k);
    if count > cap as u128 {
        return Err(Error::cap("subspace enumeration", count, cap));
    }
    let mut out = Vec::with_capacity(count as usize);
    for pivots in (0..n).combinations(k) {
        // free positions: row i, columns after its pivot that are not pivots
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| ((pc + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let mut values = vec![0u8; free.len()];
        loop {
            let mut rows = vec![vec![0u8; n]; k];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i][pc] = 1;
            }
            for (&(i, c), &v) in free.iter().zip(&values) {
                rows[i][c] = v;
            }
            let basis = rows.into_iter().map(|digits| FpVector { field, digits }).collect();
            out.push(Subspace { field, ambient_dim: n, basis });
            if !odometer(&mut values, field.p()) {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn v(field: PrimeField, xs: &[i64]) -> FpVector {
        FpVector::from_ints(field, xs)
    }

    /// All vectors of F_p^n, brute force.
    fn all_vectors(field: PrimeField, n: usize) -> Vec<FpVector> {
        let mut digits = vec![0u8; n];
        let mut out = vec![];
        loop {
            out.push(FpVector::new(field, digits.clone()).unwrap());
            if !odometer(&mut digits, field.p()) {
                break;
            }
        }
        out
    }

    /// Element set of the span of `gens`, by closing under addition and scaling.
    fn brute_span(field: PrimeField, n: usize, gens: &[FpVector]) -> BTreeSet<Vec<u8>> {
        let mut set: BTreeSet<Vec<u8>> = BTreeSet::new();
        set.insert(vec![0; n]);
        loop {
            let before = set.len();
            let current: Vec<_> = set.iter().cloned().collect();
            for x in &current {
                for g in gens {
                    let y = FpVector::new(field, x.clone()).unwrap().add(g);
                    set.insert(y.into_digits());
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    #[test]
    fn field_rejects_two_and_composites() {
        assert_eq!(PrimeField::new(2), Err(Error::UnsupportedField(2)));
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(257).is_err());
        assert!(PrimeField::new(251).is_ok());
        assert_eq!(f(7).inv(3), Some(5));
        assert_eq!(f(7).inv(0), None);
    }

    #[test]
    fn rref_examples() {
        let f3 = f(3);
        let id = FpMatrix::new(f3, 3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let (rank, r) = rref(&id);
        assert_eq!(rank, 3);
        assert_eq!(r, id);

        let zero = FpMatrix::new(f3, 3, vec![vec![0; 3]; 2]).unwrap();
        assert_eq!(rref(&zero).0, 0);

        let empty = FpMatrix::new(f3, 3, vec![]).unwrap();
        assert_eq!(rref(&empty).0, 0);

        // h + x+ and -h + x- in (h, x+, x-) coordinates
        let s = FpMatrix::new(f3, 3, vec![vec![1, 1, 0], vec![2, 0, 1]]).unwrap();
        let (rank, r) = rref(&s);
        assert_eq!(rank, 2);
        assert_eq!(r.rows(), &[vec![1, 0, 2], vec![0, 1, 1]]);
    }

    #[test]
    fn subspace_counts_match_brute_force() {
        let f3 = f(3);
        let vectors = all_vectors(f3, 3);
        for k in 0..=3 {
            let mut oracle: BTreeSet<BTreeSet<Vec<u8>>> = BTreeSet::new();
            for gens in vectors.iter().cloned().combinations(k) {
                let set = brute_span(f3, 3, &gens);
                if set.len() == 3usize.pow(k as u32) {
                    oracle.insert(set);
                }
            }
            let subs = enumerate_subspaces(f3, 3, k, DEFAULT_SUBSPACE_CAP).unwrap();
            assert_eq!(subs.len(), oracle.len(), "k = {k}");
            let listed: BTreeSet<BTreeSet<Vec<u8>>> =
                subs.iter().map(|s| s.elements().into_iter().map(|v| v.into_digits()).collect()).collect();
            assert_eq!(listed, oracle);
        }
        assert_eq!(enumerate_subspaces(f3, 3, 0, 10).unwrap().len(), 1);
        assert_eq!(enumerate_subspaces(f3, 3, 1, 100).unwrap().len(), 13);
        assert_eq!(enumerate_subspaces(f3, 3, 2, 100).unwrap().len(), 13);
    }

    #[test]
    fn enumeration_matches_gaussian_binomial() {
        for p in [3u64, 5, 7] {
            for n in 0..=4 {
                for k in 0..=n {
                    let subs = enumerate_subspaces(f(p), n, k, u64::MAX).unwrap();
                    assert_eq!(subs.len() as u128, gaussian_binomial(p, n, k));
                    let distinct: BTreeSet<_> = subs.iter().collect();
                    assert_eq!(distinct.len(), subs.len());
                    // canonical: re-reducing changes nothing
                    for s in &subs {
                        assert_eq!(&Subspace::span(f(p), n, s.basis()).unwrap(), s);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        let err = enumerate_subspaces(f(7), 4, 2, 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn intersect_examples() {
        let f3 = f(3);
        let h = v(f3, &[1, 0, 0]);
        let xp = v(f3, &[0, 1, 0]);
        let xm = v(f3, &[0, 0, 1]);
        let a = Subspace::span(f3, 3, &[h.clone(), xp.clone()]).unwrap();
        let b = Subspace::span(f3, 3, &[h.clone(), xm.clone()]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Subspace::span(f3, 3, &[h.clone()]).unwrap());
        assert_eq!(a.intersect(&a).unwrap(), a);

        let c = Subspace::span(f3, 3, &[xp.clone(), xm]).unwrap();
        // brute-force common elements
        let common: Vec<_> = all_vectors(f3, 3).into_iter().filter(|x| a.contains(x) && c.contains(x)).collect();
        assert_eq!(common.len(), 3);
        assert_eq!(a.intersect(&c).unwrap(), Subspace::span(f3, 3, &[xp]).unwrap());

        let other = Subspace::zero(f3, 4);
        assert!(matches!(a.intersect(&other), Err(Error::Contract(_))));
    }

    #[test]
    fn contains_examples() {
        let f3 = f(3);
        let s = Subspace::span(f3, 3, &[v(f3, &[1, 1, 0]), v(f3, &[-1, 0, 1])]).unwrap();
        assert!(s.contains(&FpVector::zero(f3, 3)));
        assert!(!s.contains(&v(f3, &[1, 0, 0])));
        let b = Subspace::span(f3, 3, &[v(f3, &[1, 0, 0]), v(f3, &[0, 1, 0])]).unwrap();
        assert!(b.contains(&v(f3, &[1, 0, 0])));
    }

    #[test]
    fn dimension_formula_on_all_plane_pairs() {
        let f3 = f(3);
        let planes = enumerate_subspaces(f3, 3, 2, 100).unwrap();
        let lines = enumerate_subspaces(f3, 3, 1, 100).unwrap();
        let all: Vec<_> = planes.iter().chain(&lines).collect();
        for a in &all {
            for b in &all {
                let meet = a.intersect(b).unwrap();
                let join = a.sum(b).unwrap();
                assert_eq!(meet.dim() + join.dim(), a.dim() + b.dim());
                assert!(meet.is_subspace_of(a) && meet.is_subspace_of(b));
            }
        }
    }

    #[test]
    fn contains_agrees_with_element_sets() {
        let f3 = f(3);
        let vectors = all_vectors(f3, 3);
        for k in 1..=2 {
            for s in enumerate_subspaces(f3, 3, k, 100).unwrap() {
                let elems: BTreeSet<_> = s.elements().into_iter().collect();
                assert_eq!(elems.len(), 3usize.pow(k as u32));
                for x in &vectors {
                    assert_eq!(s.contains(x), elems.contains(x));
                }
            }
        }
    }
}
