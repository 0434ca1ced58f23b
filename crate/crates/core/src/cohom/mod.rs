//! Integral cohomology of finite groups with trivial coefficients, computed
//! from explicit cochain complexes by Smith normal form.

mod complex;
mod matrix;
mod report;
mod snf;

pub use complex::{
    abelian_cochain, bar_cochain, periodic_cochain, weak_compositions, BarCaps, CochainComplex, TableGroup,
    DEFAULT_RANK_CAP,
};
pub use matrix::IntegerMatrix;
pub use report::{cohomology, e_lowdeg, CohomologyReport, DegreeCohomology, Natural};
pub use snf::{elementary_divisors, smith_normal_form, Snf};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{exponent_of, FiniteGroup};
    use num_bigint::BigInt;

    fn torsion(r: &CohomologyReport, n: usize) -> Vec<u64> {
        r.degrees[n].torsion.iter().map(|d| u64::try_from(&d.0).unwrap()).collect()
    }

    fn summary(r: &CohomologyReport) -> Vec<(usize, Vec<u64>)> {
        (0..=r.max_degree).map(|n| (r.degrees[n].free_rank, torsion(r, n))).collect()
    }

    #[test]
    fn periodic_nine() {
        let r = cohomology(&periodic_cochain(9, 6).unwrap()).unwrap();
        assert_eq!(r.degrees[0].free_rank, 1);
        assert_eq!(r.degrees[0].exponent, None);
        for n in 1..=6 {
            let expected: Vec<u64> = if n % 2 == 0 { vec![9] } else { vec![] };
            assert_eq!((r.degrees[n].free_rank, torsion(&r, n)), (0, expected));
        }
        assert_eq!(e_lowdeg(&r, 6).unwrap(), BigInt::from(9));
        assert_eq!(r.annihilated_by_order(), Some(true));
        assert!(periodic_cochain(1, 3).is_err());
    }

    #[test]
    fn weak_composition_order() {
        assert_eq!(weak_compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(weak_compositions(3, 3).len(), 10);
        assert_eq!(weak_compositions(0, 4), vec![vec![0; 4]]);
    }

    #[test]
    fn tensor_complexes_are_complexes() {
        for factors in [&[2u64, 2][..], &[3, 9], &[2, 3, 4]] {
            assert!(abelian_cochain(factors, 5, DEFAULT_RANK_CAP).unwrap().is_complex());
        }
        assert!(matches!(abelian_cochain(&[2, 2, 2], 30, 100), Err(crate::Error::CapExceeded { .. })));
    }

    #[test]
    fn bar_matches_periodic_for_small_cyclic() {
        for m in 2..=4 {
            let g = TableGroup::cyclic(m).unwrap();
            let bar = bar_cochain(&g, 3, BarCaps::default()).unwrap();
            assert!(bar.is_complex());
            let per = periodic_cochain(m as u64, 3).unwrap();
            assert_eq!(summary(&cohomology(&bar).unwrap()), summary(&cohomology(&per).unwrap()), "Z/{m}");
        }
    }

    #[test]
    fn bar_matches_tensor_for_klein_four() {
        let g = TableGroup::abelian(&[2, 2]).unwrap();
        let bar = cohomology(&bar_cochain(&g, 3, BarCaps::default()).unwrap()).unwrap();
        let tensor = cohomology(&abelian_cochain(&[2, 2], 3, DEFAULT_RANK_CAP).unwrap()).unwrap();
        assert_eq!(summary(&bar), summary(&tensor));
        // H² = Z/2 ⊕ Z/2 is detected by the bar complex as well as by Künneth
        assert_eq!(torsion(&tensor, 2), vec![2, 2]);
        assert_eq!(torsion(&tensor, 3), vec![2]);
    }

    #[test]
    fn three_by_nine() {
        let r = cohomology(&abelian_cochain(&[3, 9], 4, DEFAULT_RANK_CAP).unwrap()).unwrap();
        assert!(r.degrees[1].is_zero());
        assert_eq!(torsion(&r, 2), vec![3, 9]);
        assert_eq!(torsion(&r, 3), vec![3]);
        assert_eq!(e_lowdeg(&r, 4).unwrap(), BigInt::from(9));
        assert!(e_lowdeg(&r, 5).is_err());
        assert!(e_lowdeg(&r, 0).is_err());
        let g = TableGroup::abelian(&[3, 9]).unwrap();
        assert_eq!(exponent_of(&g, &(0..g.order()).collect::<Vec<_>>()), 9);
    }

    #[test]
    fn table_group_validation() {
        assert!(TableGroup::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(TableGroup::new(vec![vec![0, 1], vec![1]]).is_err());
        // a quasigroup that is not associative
        let t = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
        assert!(TableGroup::new(t).is_err());
        let z4 = TableGroup::cyclic(4).unwrap();
        assert_eq!(z4.identity(), 0);
        assert_eq!(z4.inverse(&1), 3);
        assert!(z4.is_abelian());
        assert!(matches!(
            bar_cochain(&TableGroup::cyclic(9).unwrap(), 2, BarCaps::default()),
            Err(crate::Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn serializes_small_numbers_as_numbers() {
        let r = cohomology(&periodic_cochain(4, 2).unwrap()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["degrees"][2]["torsion"][0], 4);
        assert_eq!(json["degrees"][0]["exponent"], serde_json::Value::Null);
        let big = Natural(BigInt::from(u64::MAX) * 3);
        assert!(serde_json::to_value(&big).unwrap().is_string());
        assert_eq!(r.to_string().lines().nth(3).unwrap().trim(), "H^2 = Z/4  (exponent 4)");
    }
}
