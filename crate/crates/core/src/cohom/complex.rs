use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

use super::matrix::IntegerMatrix;

/// Default cap on the rank of any cochain group an engine may build.
pub const DEFAULT_RANK_CAP: u64 = 10_000;

/// Caps for the normalized bar engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BarCaps {
    pub max_group_order: usize,
    /// Bound on (|G| - 1)^(N + 1), the rank of the top cochain group.
    pub max_rank: u64,
}

impl Default for BarCaps {
    fn default() -> Self {
        BarCaps { max_group_order: 8, max_rank: 100_000 }
    }
}

/// Cochain groups C⁰ … C^{N+1} (all free of finite rank) with differentials
/// δⁿ : Cⁿ → Cⁿ⁺¹ for n = 0..=N; δⁿ has ranks[n+1] rows and ranks[n] columns.
/// Cohomology is reported in degrees 0..=N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    pub label: String,
    pub group_order: Option<u64>,
    pub ranks: Vec<usize>,
    pub differentials: Vec<IntegerMatrix>,
}

impl CochainComplex {
    pub fn new(label: String, group_order: Option<u64>, ranks: Vec<usize>, differentials: Vec<IntegerMatrix>) -> Result<Self> {
        if ranks.len() != differentials.len() + 1 || differentials.is_empty() {
            return Err(Error::contract("a complex needs ranks for degrees 0..=N+1 and differentials for 0..=N"));
        }
        for (n, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[n + 1] || d.cols() != ranks[n] {
                return Err(Error::contract(format!(
                    "differential {n} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    ranks[n + 1],
                    ranks[n]
                )));
            }
        }
        Ok(CochainComplex { label, group_order, ranks, differentials })
    }

    /// Top degree N for which cohomology is computed.
    pub fn max_degree(&self) -> usize {
        self.differentials.len() - 1
    }

    /// Exact check that δⁿ⁺¹ ∘ δⁿ = 0 for every composable pair.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| w[1].mul(&w[0]).map(|m| m.is_zero()).unwrap_or(false))
    }
}

fn check_degree(max_degree: usize) -> Result<()> {
    if max_degree > 64 {
        return Err(Error::contract(format!("max degree {max_degree} is unreasonably large")));
    }
    Ok(())
}

/// Hom over Z[Z/m] of the periodic resolution … → ZG --N--> ZG --(g-1)--> ZG → Z:
/// rank 1 everywhere, δⁿ = 0 for even n and multiplication by m for odd n.
pub fn periodic_cochain(m: u64, max_degree: usize) -> Result<CochainComplex> {
    if m < 2 {
        return Err(Error::contract(format!("cyclic group order must be at least 2, got {m}")));
    }
    check_degree(max_degree)?;
    let differentials = (0..=max_degree)
        .map(|n| {
            let mut d = IntegerMatrix::zeros(1, 1);
            if n % 2 == 1 {
                d.set(0, 0, BigInt::from(m));
            }
            d
        })
        .collect();
    CochainComplex::new(format!("Z/{m}"), Some(m), vec![1; max_degree + 2], differentials)
}

/// Weak compositions of `n` into `k` parts, in lexicographic order.
pub fn weak_compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in weak_compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out.reverse();
    out
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Tensor product of the periodic cochain complexes of Z/m₁, …, Z/m_k, with
/// the Koszul sign (-1)^(d₁ + … + d_{j-1}) on the j-th factor's differential.
pub fn abelian_cochain(factors: &[u64], max_degree: usize, rank_cap: u64) -> Result<CochainComplex> {
    if factors.is_empty() {
        return Err(Error::contract("abelian group needs at least one cyclic factor"));
    }
    if let Some(&m) = factors.iter().find(|&&m| m < 2) {
        return Err(Error::contract(format!("cyclic factor order must be at least 2, got {m}")));
    }
    check_degree(max_degree)?;
    let k = factors.len();
    let top_rank = binomial((max_degree + 1 + k - 1) as u64, (k - 1) as u64);
    if top_rank > rank_cap as u128 {
        return Err(Error::cap("abelian cochain rank", top_rank, rank_cap));
    }
    let bases: Vec<Vec<Vec<usize>>> = (0..=max_degree + 1).map(|n| weak_compositions(n, k)).collect();
    let mut differentials = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let source = &bases[n];
        let target = &bases[n + 1];
        let index: HashMap<&Vec<usize>, usize> = target.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut d = IntegerMatrix::zeros(target.len(), source.len());
        for (col, comp) in source.iter().enumerate() {
            let mut prefix = 0;
            for j in 0..k {
                if comp[j] % 2 == 1 {
                    let mut next = comp.clone();
                    next[j] += 1;
                    let row = index[&next];
                    let sign = if prefix % 2 == 0 { 1i64 } else { -1 };
                    *d.get_mut(row, col) += BigInt::from(sign) * BigInt::from(factors[j]);
                }
                prefix += comp[j];
            }
        }
        differentials.push(d);
    }
    let order = factors.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m));
    let label = format!("abelian {}", factors.iter().map(|m| format!("Z/{m}")).collect::<Vec<_>>().join(" x "));
    CochainComplex::new(label, order, bases.iter().map(Vec::len).collect(), differentials)
}

/// A finite group given by its multiplication table on 0..n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl TableGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::contract(format!("multiplication table is not an {n} x {n} table on 0..{n}")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::contract("multiplication table has no identity"))?;
        let inverses = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .ok_or_else(|| Error::contract(format!("element {x} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::contract(format!("multiplication is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(TableGroup { table, identity, inverses })
    }

    pub fn cyclic(m: usize) -> Result<Self> {
        Self::abelian(&[m])
    }

    /// Z/m₁ × … × Z/m_k with mixed-radix element numbering.
    pub fn abelian(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|&m| m == 0) {
            return Err(Error::contract("abelian group needs positive cyclic factors"));
        }
        let n: usize = factors.iter().product();
        let digits = |mut x: usize| {
            factors
                .iter()
                .map(|&m| {
                    let d = x % m;
                    x /= m;
                    d
                })
                .collect::<Vec<_>>()
        };
        let encode = |ds: &[usize]| ds.iter().zip(factors).rev().fold(0, |acc, (&d, &m)| acc * m + d);
        let table = (0..n)
            .map(|a| {
                let da = digits(a);
                (0..n)
                    .map(|b| {
                        let sum: Vec<usize> = da.iter().zip(digits(b)).zip(factors).map(|((x, y), m)| (x + y) % m).collect();
                        encode(&sum)
                    })
                    .collect()
            })
            .collect();
        Self::new(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

impl FiniteGroup for TableGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }

    fn inverse(&self, a: &usize) -> usize {
        self.inverses[*a]
    }
}

/// Normalized bar cochains with trivial integer coefficients: Cⁿ has a basis
/// of n-tuples of non-identity elements, and
///
/// δf(g₁,…,g_{n+1}) = f(g₂,…,g_{n+1}) + Σᵢ (-1)ⁱ f(…, gᵢg_{i+1}, …) + (-1)^{n+1} f(g₁,…,g_n),
///
/// dropping terms whose argument contains the identity.
pub fn bar_cochain(group: &TableGroup, max_degree: usize, caps: BarCaps) -> Result<CochainComplex> {
    let order = group.order();
    if order > caps.max_group_order {
        return Err(Error::cap("bar resolution group order", order as u64, caps.max_group_order as u64));
    }
    check_degree(max_degree)?;
    let q = (order - 1) as u128;
    let top = q.pow(max_degree as u32 + 1);
    if top > caps.max_rank as u128 {
        return Err(Error::cap("bar resolution rank", top, caps.max_rank));
    }
    let e = group.identity_index();
    // non-identity elements and their positions
    let others: Vec<usize> = (0..order).filter(|&x| x != e).collect();
    let mut pos = vec![usize::MAX; order];
    for (i, &x) in others.iter().enumerate() {
        pos[x] = i;
    }
    let q = q as usize;
    let index = |tuple: &[usize]| tuple.iter().fold(0usize, |acc, &x| acc * q + pos[x]);
    let ranks: Vec<usize> = (0..=max_degree + 1).map(|n| q.pow(n as u32)).collect();

    let mut differentials = Vec::with_capacity(max_degree + 1);
    let mut tuple = Vec::new();
    for n in 0..=max_degree {
        let mut d = IntegerMatrix::zeros(ranks[n + 1], ranks[n]);
        for row in 0..ranks[n + 1] {
            // decode the (n+1)-tuple for this row
            tuple.clear();
            let mut r = row;
            for _ in 0..=n {
                tuple.push(others[r % q]);
                r /= q;
            }
            tuple.reverse();
            let mut add = |args: &[usize], sign: i64| {
                if args.iter().all(|&x| x != e) {
                    *d.get_mut(row, index(args)) += sign;
                }
            };
            add(&tuple[1..], 1);
            for i in 1..=n {
                let mut merged = Vec::with_capacity(n);
                merged.extend_from_slice(&tuple[..i - 1]);
                merged.push(group.product(tuple[i - 1], tuple[i]));
                merged.extend_from_slice(&tuple[i + 1..]);
                add(&merged, if i % 2 == 0 { 1 } else { -1 });
            }
            add(&tuple[..n], if (n + 1) % 2 == 0 { 1 } else { -1 });
        }
        differentials.push(d);
    }
    CochainComplex::new(format!("bar complex of a group of order {order}"), Some(order as u64), ranks, differentials)
}
