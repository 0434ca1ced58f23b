use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

use super::complex::CochainComplex;
use super::snf::elementary_divisors;

/// An exact non-negative integer; serialized as a JSON number when it fits
/// in u64 and as a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Natural(pub BigInt);

impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(x) => s.serialize_u64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for Natural {
    fn from(x: u64) -> Self {
        Natural(BigInt::from(x))
    }
}

/// Hⁿ ≅ Z^free_rank ⊕ ⊕ Z/dᵢ with d₁ | d₂ | … and every dᵢ > 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCohomology {
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<Natural>,
    /// lcm of the torsion coefficients, or None when there is a free part.
    pub exponent: Option<Natural>,
}

impl DegreeCohomology {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for DegreeCohomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        let group = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        write!(f, "H^{} = {group}", self.degree)?;
        match &self.exponent {
            Some(e) => write!(f, "  (exponent {e})"),
            None => write!(f, "  (infinite exponent)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub label: String,
    pub group_order: Option<u64>,
    pub max_degree: usize,
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologyReport {
    pub fn degree(&self, n: usize) -> Option<&DegreeCohomology> {
        self.degrees.get(n)
    }

    /// Whether |G| annihilates Hⁿ for every reported n ≥ 1 (None if the
    /// group order is unknown).
    pub fn annihilated_by_order(&self) -> Option<bool> {
        let order = BigInt::from(self.group_order?);
        Some(self.degrees.iter().skip(1).all(|d| match &d.exponent {
            Some(e) => order.is_multiple_of(&e.0),
            None => false,
        }))
    }
}

impl fmt::Display for CohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.label)?;
        for d in &self.degrees {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

/// Integral cohomology in degrees 0..=N via Smith forms of δ⁰ … δᴺ:
/// torsion(Hⁿ) comes from δⁿ⁻¹ and the free rank is rank Cⁿ − rk δⁿ − rk δⁿ⁻¹.
pub fn cohomology(complex: &CochainComplex) -> Result<CohomologyReport> {
    if !complex.is_complex() {
        return Err(Error::contract(format!("{}: δ∘δ is not zero", complex.label)));
    }
    let divisors: Vec<Vec<BigInt>> = complex.differentials.par_iter().map(elementary_divisors).collect();
    let mut degrees = Vec::with_capacity(complex.max_degree() + 1);
    for n in 0..=complex.max_degree() {
        let rank_out = divisors[n].len();
        let (rank_in, torsion): (usize, Vec<Natural>) = if n == 0 {
            (0, Vec::new())
        } else {
            let ds = &divisors[n - 1];
            (ds.len(), ds.iter().filter(|d| !d.is_one()).map(|d| Natural(d.clone())).collect())
        };
        let free_rank = complex.ranks[n] - rank_out - rank_in;
        let exponent = (free_rank == 0).then(|| Natural(torsion.iter().fold(BigInt::one(), |acc, d| acc.lcm(&d.0))));
        degrees.push(DegreeCohomology { degree: n, free_rank, torsion, exponent });
    }
    Ok(CohomologyReport {
        label: complex.label.clone(),
        group_order: complex.group_order,
        max_degree: complex.max_degree(),
        degrees,
    })
}

/// lcm of exp Hⁿ over 1 ≤ n ≤ N.
pub fn e_lowdeg(report: &CohomologyReport, n: usize) -> Result<BigInt> {
    if n == 0 || n > report.max_degree {
        return Err(Error::contract(format!(
            "low-degree exponent up to {n} needs degrees 1..={n}, report has 0..={}",
            report.max_degree
        )));
    }
    let mut e = BigInt::one();
    for d in &report.degrees[1..=n] {
        match &d.exponent {
            Some(x) => e = e.lcm(&x.0),
            None => return Err(Error::contract(format!("H^{} has a free part", d.degree))),
        }
    }
    debug_assert!(!e.is_zero());
    Ok(e)
}
