//! Bracket algebras over F_p: bilinear alternating products given by
//! structure constants, with no Jacobi requirement.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpla::{enumerate_subspaces, FpVector, PrimeField, Subspace};

pub const MAX_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketAlgebra {
    field: PrimeField,
    names: Vec<String>,
    /// `table[i][j]` = [b_i, b_j] in basis coordinates.
    table: Vec<Vec<Vec<u8>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub alternating: bool,
    pub jacobi: bool,
}

impl BracketAlgebra {
    /// Builds an algebra from a full n x n table of n-vectors. Entries are
    /// reduced mod p, so one integer table serves every prime.
    pub fn from_table(field: PrimeField, names: Vec<String>, table: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        let n = names.len();
        if n > MAX_DIM {
            return Err(Error::contract(format!("bracket algebras are limited to dimension {MAX_DIM}")));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|c| c.len() != n)) {
            return Err(Error::contract(format!("structure table is not {n} x {n} x {n}")));
        }
        let table = table
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.into_iter().map(|x| field.reduce(x)).collect()).collect())
            .collect();
        Ok(BracketAlgebra { field, names, table })
    }

    /// Builds an alternating algebra from brackets [b_i, b_j] given for i < j;
    /// the rest of the table is filled by antisymmetry, missing pairs are zero.
    pub fn from_upper(field: PrimeField, names: Vec<String>, pairs: &[(usize, usize, Vec<i64>)]) -> Result<Self> {
        let n = names.len();
        let mut table = vec![vec![vec![0i64; n]; n]; n];
        for (i, j, c) in pairs {
            let (i, j) = (*i, *j);
            if i >= j || j >= n {
                return Err(Error::contract(format!("bracket pair ({i}, {j}) must satisfy i < j < {n}")));
            }
            if c.len() != n {
                return Err(Error::contract(format!("bracket ({i}, {j}) has {} coordinates, expected {n}", c.len())));
            }
            table[i][j] = c.clone();
            table[j][i] = c.iter().map(|x| -x).collect();
        }
        Self::from_table(field, names, table)
    }

    /// sl_2 in the basis (h, x+, x-).
    pub fn sl2(field: PrimeField) -> Self {
        let names = ["h", "x+", "x-"].map(String::from).to_vec();
        let pairs = [(0, 1, vec![0, 2, 0]), (0, 2, vec![0, 0, -2]), (1, 2, vec![1, 0, 0])];
        Self::from_upper(field, names, &pairs).expect("sl2 table is well formed")
    }

    /// The abelian algebra of dimension n (all brackets zero).
    pub fn abelian(field: PrimeField, n: usize) -> Self {
        let names = (0..n).map(|i| format!("e{i}")).collect();
        Self::from_upper(field, names, &[]).expect("zero table is well formed")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn structure(&self, i: usize, j: usize) -> &[u8] {
        &self.table[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> FpVector {
        FpVector::unit(self.field, self.dim(), i)
    }

    pub fn vector(&self, coords: &[i64]) -> Result<FpVector> {
        if coords.len() != self.dim() {
            return Err(Error::contract(format!("expected {} coordinates, got {}", self.dim(), coords.len())));
        }
        Ok(FpVector::from_ints(self.field, coords))
    }

    pub fn validate(&self) -> Validation {
        let n = self.dim();
        let f = self.field;
        let alternating = (0..n).all(|i| {
            self.table[i][i].iter().all(|&x| x == 0)
                && (0..n).all(|j| self.table[i][j].iter().zip(&self.table[j][i]).all(|(&a, &b)| f.add(a, b) == 0))
        });
        let jacobi = (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    let bx = self.basis_vector(x);
                    let by = self.basis_vector(y);
                    let bz = self.basis_vector(z);
                    let t1 = self.bracket_unchecked(&bx, &self.bracket_unchecked(&by, &bz));
                    let t2 = self.bracket_unchecked(&by, &self.bracket_unchecked(&bz, &bx));
                    let t3 = self.bracket_unchecked(&bz, &self.bracket_unchecked(&bx, &by));
                    t1.add(&t2).add(&t3).is_zero()
                })
            })
        });
        Validation { alternating, jacobi }
    }

    pub fn bracket(&self, u: &FpVector, v: &FpVector) -> Result<FpVector> {
        let n = self.dim();
        if u.len() != n || v.len() != n || u.field() != self.field || v.field() != self.field {
            return Err(Error::contract(format!(
                "bracket of vectors of lengths {} and {} in a {n}-dimensional algebra",
                u.len(),
                v.len()
            )));
        }
        Ok(self.bracket_unchecked(u, v))
    }

    fn bracket_unchecked(&self, u: &FpVector, v: &FpVector) -> FpVector {
        let mut out = vec![0u8; self.dim()];
        self.bracket_into(u.digits(), v.digits(), &mut out);
        FpVector::new(self.field, out).expect("residues stay reduced")
    }

    /// Bilinear extension of the table on raw digit slices; `out` is overwritten.
    #[inline]
    pub fn bracket_into(&self, u: &[u8], v: &[u8], out: &mut [u8]) {
        let p = self.field.modulus();
        let n = self.dim();
        let mut acc = [0u32; MAX_DIM];
        let acc = &mut acc[..n];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj == 0 {
                    continue;
                }
                let c = ui as u32 * vj as u32 % p;
                for (a, &t) in acc.iter_mut().zip(&self.table[i][j]) {
                    *a = (*a + c * t as u32) % p;
                }
            }
        }
        for (o, a) in out.iter_mut().zip(acc.iter()) {
            *o = *a as u8;
        }
    }

    /// Closure of `s` under the bracket, checked on basis pairs (enough for
    /// an alternating bilinear bracket).
    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        assert_eq!(s.ambient_dim(), self.dim(), "subspace lives in a different ambient space");
        let basis = s.basis();
        basis.iter().enumerate().all(|(i, u)| basis[i + 1..].iter().all(|v| s.contains(&self.bracket_unchecked(u, v))))
    }

    pub fn subalgebras_of_dim(&self, k: usize, cap: u64) -> Result<Vec<Subspace>> {
        Ok(enumerate_subspaces(self.field, self.dim(), k, cap)?.into_iter().filter(|s| self.is_subalgebra(s)).collect())
    }
}

/// Intersection of a nonempty list of subspaces of one ambient space.
pub fn common_intersection(spaces: &[Subspace]) -> Result<Subspace> {
    let (first, rest) = spaces.split_first().ok_or_else(|| Error::contract("intersection of an empty list"))?;
    rest.iter().try_fold(first.clone(), |acc, s| acc.intersect(s))
}
