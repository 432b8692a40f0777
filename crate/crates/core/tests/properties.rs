use proptest::prelude::*;

use sextic_lattice::lattice::coset_vectors_up_to;
use sextic_lattice::linalg::{det, Matrix};
use sextic_lattice::roots::preserves_gram;
use sextic_lattice::{ADEType, Component, Int, Rat};

fn small_component() -> impl Strategy<Value = Component> {
    prop_oneof![(1usize..=4).prop_map(Component::a), Just(Component::d(4)), Just(Component::a(5))]
}

fn small_ade() -> impl Strategy<Value = ADEType> {
    prop::collection::vec(small_component(), 1..=3)
        .prop_filter("rank <= 6", |v| v.iter().map(|c| c.rank).sum::<usize>() <= 6)
        .prop_map(ADEType::new)
}

/// Every coset vector with `-x² ≤ bound`, by exhausting a box that contains
/// them all; coordinates are primal, scaled by `den`.
fn naive_coset(gram: &[Vec<i64>], rep: &[i64], den: i64, bound: i64, radius: i64) -> Vec<Vec<i64>> {
    let n = gram.len();
    let mut out = Vec::new();
    let mut k = vec![-radius; n];
    loop {
        let x: Vec<i64> = (0..n).map(|i| rep[i] + den * k[i]).collect();
        let mut s = 0i64;
        for i in 0..n {
            for j in 0..n {
                s += x[i] * gram[i][j] * x[j];
            }
        }
        if -s <= bound * den * den {
            out.push(x);
        }
        let mut i = 0;
        loop {
            if i == n {
                out.sort();
                return out;
            }
            k[i] += 1;
            if k[i] <= radius {
                break;
            }
            k[i] = -radius;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coset_enumeration_matches_box_oracle(r in small_ade(), seed in prop::collection::vec(0i64..12, 6), bound in 0i64..=4) {
        let l = r.root_lattice();
        let n = r.mu();
        let gram = r.gram_rows();
        // a coset representative with primal coordinates in (1/den)ℤ, den ≤ 12
        let den = 1 + seed[0] % 12;
        let rep: Vec<i64> = (0..n).map(|i| seed[i % 6] % den).collect();
        let rep_q: Vec<Rat> = rep.iter().map(|&x| Rat::new(x.into(), den.into())).collect();
        let got: Vec<Vec<i64>> = coset_vectors_up_to(&l, &rep_q, &Rat::from_integer(bound.into()))
            .unwrap()
            .into_iter()
            .map(|(c, _)| c.iter().map(|x| num_traits::ToPrimitive::to_i64(&(x * Rat::from_integer(den.into())).to_integer()).unwrap()).collect())
            .collect();
        let mut got = got;
        got.sort();
        // simple-root coefficients of vectors of norm ≤ 4 in these lattices stay below 4 in size
        prop_assert_eq!(got, naive_coset(&gram, &rep, den, bound, 4));
    }

    #[test]
    fn involution_is_an_isometric_involution(r in small_ade()) {
        let p = r.involution();
        prop_assert!(preserves_gram(&r.gram_rows(), &p));
        for (i, &j) in p.iter().enumerate() {
            prop_assert_eq!(p[j], i);
        }
    }

    #[test]
    fn sigma_p_is_lift_symmetric(l in 1usize..=19, t in 1usize..=19) {
        prop_assume!(t <= l);
        let c = Component::a(l);
        prop_assert_eq!(c.sigma_p(t).unwrap(), c.sigma_p(l + 1 - t).unwrap());
        prop_assert!(c.sigma_p(t).unwrap() <= Rat::from_integer(0.into()));
    }

    #[test]
    fn determinant_is_scalar_independent(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 4), 4)) {
        let small = Matrix::from_rows(rows.clone());
        let big: Matrix<Int> = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect());
        prop_assert_eq!(Int::from(det(&small)), det(&big));
    }
}
