mod common;

use common::{curve_add, q, Pt};
use mlcoset::group::{Backend, Point};
use mlcoset::num::int;
use mlcoset::snf::{kernel_basis, matmul, smith_normal_form, to_big};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

fn to_pt(p: &Point) -> Pt {
    p.coords().map(|(x, y)| (x.clone(), y.clone()))
}

fn matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-max_entry..=max_entry, c), r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_is_a_valid_factorization(m in matrix(8, 1000)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(matmul(&matmul(&s.u, &to_big(&m)), &s.v), s.d.clone());
        for w in [&s.u, &s.v] {
            let d = common::det(w);
            prop_assert!(d == BigInt::from(1) || d == BigInt::from(-1));
        }
        let f = s.invariant_factors();
        prop_assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        prop_assert_eq!(f, common::invariant_factors_by_elimination(&m));
    }

    #[test]
    fn kernel_vectors_solve_the_system(m in matrix(4, 30)) {
        let cols = m[0].len();
        let basis = kernel_basis(&m, cols).unwrap();
        let s = smith_normal_form(&m);
        prop_assert_eq!(basis.len(), cols - s.rank());
        for v in &basis {
            for row in &m {
                let dot: i128 = row.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum();
                prop_assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn scalar_multiples_match_repeated_oracle_addition(k in -12i64..=12) {
        let e = Backend::curve(int(0), int(-2)).unwrap();
        let p = Point::affine(int(3), int(5));
        let base = to_pt(&p);
        let neg = base.clone().map(|(x, y)| (x, -y));
        let step = if k < 0 { neg } else { base };
        let mut acc: Pt = None;
        for _ in 0..k.unsigned_abs() {
            acc = curve_add(&q(0), &acc, &step);
        }
        prop_assert_eq!(to_pt(&e.scalar_mul(k, &p).unwrap()), acc);
    }
}
