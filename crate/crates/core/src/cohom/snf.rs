//! Smith normal form over Z with exact unbounded integers.
//!
//! Pivots are chosen as the nonzero entry of least absolute value (a unit is
//! taken immediately), then the pivot row and column are cleared by
//! Euclidean row/column operations until the pivot divides everything in
//! both. The divisibility chain is established afterwards on the diagonal
//! with the 2x2 move diag(a, b) → diag(gcd, lcm).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// D = U · A · V with U, V unimodular and D diagonal, d₁ | d₂ | …, dᵢ ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntegerMatrix) -> Snf {
    let mut work = Work::new(a, true);
    work.run();
    let (d, u, v) = work.finish();
    Snf { u: u.expect("tracked"), d, v: v.expect("tracked") }
}

/// The nonzero diagonal entries of the Smith form, in chain order
/// (units included). Transforms are not tracked.
pub fn elementary_divisors(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut work = Work::new(a, false);
    work.run();
    work.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    rows: usize,
    cols: usize,
    /// number of pivots placed on the diagonal
    rank: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// dst -= q * src on a slice of rows
fn sub_row(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt, from: usize, to: usize) {
    let (d, s) = if dst < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for j in from..to {
        if !s[j].is_zero() {
            d[j] -= q * &s[j];
        }
    }
}

impl Work {
    fn new(a: &IntegerMatrix, track: bool) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        Work {
            a: a.to_rows(),
            u: track.then(|| identity(rows)),
            v: track.then(|| identity(cols)),
            rows,
            cols,
            rank: 0,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_dst -= q · row_src
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt, from: usize, to: usize) {
        sub_row(&mut self.a, dst, src, q, from, to);
        if let Some(u) = &mut self.u {
            let n = u.len();
            sub_row(u, dst, src, q, 0, n);
        }
    }

    /// col_dst -= q · col_src
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt, from: usize, to: usize) {
        for row in &mut self.a[from..to] {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] -= t;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[src].is_zero() {
                    let t = q * &row[src];
                    row[dst] -= t;
                }
            }
        }
    }

    /// Least-magnitude nonzero entry of the active block rows t..end,
    /// columns t..cols. Rows found entirely zero in the block are moved
    /// below `end` for good: later operations never touch them.
    fn find_pivot(&mut self, t: usize, end: &mut usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut i = t;
        while i < *end {
            let mut any = false;
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                any = true;
                if x.magnitude().is_one() {
                    return Some((i, j));
                }
                if best.map_or(true, |(bi, bj)| x.magnitude() < self.a[bi][bj].magnitude()) {
                    best = Some((i, j));
                }
            }
            if any {
                i += 1;
            } else {
                *end -= 1;
                self.swap_rows(i, *end);
            }
        }
        best
    }

    fn run(&mut self) {
        let mut end = self.rows;
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.find_pivot(t, &mut end) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.a[t][t].clone();
                let mut dirty = false;
                for i in t + 1..end {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_rem(&pivot).0;
                    if !q.is_zero() {
                        self.row_op(i, t, &q, t, self.cols);
                    }
                    dirty |= !self.a[i][t].is_zero();
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_rem(&pivot).0;
                    if !q.is_zero() {
                        self.col_op(j, t, &q, t, end);
                    }
                    dirty |= !self.a[t][j].is_zero();
                }
                if !dirty {
                    break;
                }
                // a remainder is smaller than the pivot: move the smallest into place
                let mut best = (t, t);
                for i in t + 1..end {
                    if !self.a[i][t].is_zero()
                        && (best == (t, t) || self.a[i][t].magnitude() < self.a[best.0][best.1].magnitude())
                    {
                        best = (i, t);
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero()
                        && (best == (t, t) || self.a[t][j].magnitude() < self.a[best.0][best.1].magnitude())
                    {
                        best = (t, j);
                    }
                }
                self.swap_rows(t, best.0);
                self.swap_cols(t, best.1);
            }
            t += 1;
        }
        self.rank = t;
        self.fix_chain();
        for i in 0..self.rank {
            if self.a[i][i].is_negative() {
                self.negate_row(i);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    /// Replaces diagonal pairs (a, b) with a ∤ b by (gcd, lcm).
    fn fix_chain(&mut self) {
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let (a, b) = (self.a[i][i].clone(), self.a[j][j].clone());
                if b.is_multiple_of(&a) {
                    continue;
                }
                let e = a.extended_gcd(&b);
                let (g, x, y) = (e.gcd, e.x, e.y);
                // row_i += row_j
                self.row_op(i, j, &BigInt::from(-1), 0, self.cols);
                // columns (i, j) ← (x·col_i + y·col_j, -(b/g)·col_i + (a/g)·col_j)
                let (bg, ag) = (&b / &g, &a / &g);
                let combine = |rows: &mut Vec<Vec<BigInt>>| {
                    for row in rows.iter_mut() {
                        let (ci, cj) = (row[i].clone(), row[j].clone());
                        row[i] = &x * &ci + &y * &cj;
                        row[j] = &ag * &cj - &bg * &ci;
                    }
                };
                combine(&mut self.a);
                if let Some(v) = &mut self.v {
                    combine(v);
                }
                // row_j -= (y·b/g) · row_i
                let q = &y * &bg;
                self.row_op(j, i, &q, 0, self.cols);
                debug_assert!(self.a[i][j].is_zero() && self.a[j][i].is_zero());
            }
        }
    }

    fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.a[i][i].clone()).collect()
    }

    fn finish(self) -> (IntegerMatrix, Option<IntegerMatrix>, Option<IntegerMatrix>) {
        let d = IntegerMatrix::from_rows(self.a, self.cols).expect("shape kept");
        let u = self.u.map(|u| IntegerMatrix::from_rows(u, self.rows).expect("square"));
        let v = self.v.map(|v| IntegerMatrix::from_rows(v, self.cols).expect("square"));
        (d, u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntegerMatrix) -> Snf {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.mul(a).unwrap().mul(&snf.v).unwrap(), snf.d);
        assert!(snf.u.is_unimodular() && snf.v.is_unimodular());
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d.get(i, j).is_zero());
                }
            }
        }
        let diag = snf.diagonal();
        assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero() && w[1].is_zero(), "{diag:?}");
        }
        assert_eq!(elementary_divisors(a), diag.into_iter().filter(|x| !x.is_zero()).collect::<Vec<_>>());
        snf
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2, |det| = 8
        let a = IntegerMatrix::from_i64(&[vec![2, 4], vec![6, 8]]).unwrap();
        assert_eq!(check(&a).diagonal(), ints(&[2, 4]));
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(check(&IntegerMatrix::zeros(3, 2)).diagonal(), ints(&[0, 0]));
        assert_eq!(check(&IntegerMatrix::identity(4)).diagonal(), ints(&[1, 1, 1, 1]));
        assert_eq!(check(&IntegerMatrix::zeros(0, 3)).diagonal(), ints(&[]));
    }

    #[test]
    fn needs_chain_fix() {
        let a = IntegerMatrix::from_i64(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 4]]).unwrap();
        assert_eq!(check(&a).diagonal(), ints(&[1, 2, 12]));
        let a = IntegerMatrix::from_i64(&[vec![-6, 0], vec![0, 0], vec![0, 10]]).unwrap();
        assert_eq!(check(&a).diagonal(), ints(&[2, 30]));
    }

    #[test]
    fn mixed_shapes() {
        let a = IntegerMatrix::from_i64(&[vec![0, 0, 0, 5], vec![0, 0, 0, 0], vec![3, 9, -12, 7]]).unwrap();
        check(&a);
        let a = IntegerMatrix::from_i64(&[vec![4, 6], vec![6, 9], vec![10, 15], vec![0, 2]]).unwrap();
        check(&a);
    }

    /// gcd of all k x k minors, by brute force over row and column subsets.
    fn minor_gcd(a: &IntegerMatrix, k: usize) -> BigInt {
        use itertools::Itertools;
        let mut g = BigInt::zero();
        for rows in (0..a.rows()).combinations(k) {
            for cols in (0..a.cols()).combinations(k) {
                let sub: Vec<Vec<BigInt>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| a.get(i, j).clone()).collect()).collect();
                g = g.gcd(&IntegerMatrix::from_rows(sub, k).unwrap().determinant().unwrap());
            }
        }
        g
    }

    proptest! {
        #[test]
        fn diagonal_products_are_minor_gcds(
            (r, c, entries) in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| {
                (Just(r), Just(c), prop::collection::vec(-20i64..=20, r * c))
            })
        ) {
            let a = IntegerMatrix::from_i64(&entries.chunks(c).map(<[i64]>::to_vec).collect::<Vec<_>>()).unwrap();
            let diag = check(&a).diagonal();
            let mut prod = BigInt::one();
            for k in 1..=r.min(c) {
                prod *= &diag[k - 1];
                prop_assert_eq!(&prod, &minor_gcd(&a, k));
            }
        }
    }
}
