use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use latgen::{
    cokernel, discr, smith_normal_form, DiscSubgroup, FiniteAbelianGroup, IntMatrix, Lattice,
    Signature,
};

fn symmetric(max_rank: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rank).prop_flat_map(move |n| {
        proptest::collection::vec(-bound..=bound, n * (n + 1) / 2).prop_map(move |upper| {
            let mut m = vec![vec![0i64; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i..n {
                    let x = it.next().unwrap();
                    m[i][j] = x;
                    m[j][i] = x;
                }
            }
            m
        })
    })
}

fn rectangular() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-20i64..=20, c), r)
    })
}

/// Characteristic polynomial coefficients `c_0..c_n` (`c_n = 1`) by
/// Faddeev-LeVerrier, exact in `i128`.
fn char_poly(a: &[Vec<i64>]) -> Vec<i128> {
    let n = a.len();
    let a: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut c = vec![0i128; n + 1];
    c[n] = 1;
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|t| a[i][t] * m[t][j]).sum();
            }
            next[i][i] += c[n - k + 1];
        }
        m = next;
        let trace: i128 = (0..n).map(|i| (0..n).map(|t| a[i][t] * m[t][i]).sum::<i128>()).sum();
        assert_eq!(trace % k as i128, 0);
        c[n - k] = -trace / k as i128;
    }
    c
}

fn sign_changes(coeffs: impl Iterator<Item = i128>) -> usize {
    let signs: Vec<i128> = coeffs.filter(|&x| x != 0).map(i128::signum).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Inertia from the characteristic polynomial. All roots are real, so
/// Descartes' rule counts them exactly.
fn signature_oracle(a: &[Vec<i64>]) -> Signature {
    let c = char_poly(a);
    let zero = c.iter().take_while(|&&x| x == 0).count();
    let plus = sign_changes(c.iter().copied());
    let minus = sign_changes(c.iter().enumerate().map(|(i, &x)| if i % 2 == 1 { -x } else { x }));
    Signature::new(plus, minus, zero)
}

fn det_oracle(a: &[Vec<i64>]) -> i128 {
    let c = char_poly(a);
    if a.len() % 2 == 0 {
        c[0]
    } else {
        -c[0]
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn signature_matches_characteristic_polynomial(rows in symmetric(5, 6)) {
        let l = Lattice::from_rows(&rows).unwrap();
        prop_assert_eq!(l.signature(), signature_oracle(&rows));
        prop_assert_eq!(l.det(), BigInt::from(det_oracle(&rows)));
    }

    #[test]
    fn direct_sums_multiply_det_and_add_signature(a in symmetric(4, 5), b in symmetric(4, 5)) {
        let la = Lattice::from_rows(&a).unwrap();
        let lb = Lattice::from_rows(&b).unwrap();
        let sum = la.direct_sum(&lb);
        prop_assert_eq!(sum.det(), la.det() * lb.det());
        prop_assert_eq!(sum.signature(), la.signature() + lb.signature());
        prop_assert_eq!(sum.negated().signature(), Signature::new(
            sum.signature().n_minus, sum.signature().n_plus, sum.signature().n_zero));
    }

    #[test]
    fn cokernel_order_is_det(rows in symmetric(5, 8)) {
        let l = Lattice::from_rows(&rows).unwrap();
        let det = l.det();
        prop_assume!(!det.is_zero());
        let g = cokernel(l.gram()).unwrap();
        prop_assert_eq!(g.order(), det.abs());
        prop_assert_eq!(l.is_unimodular(), det.abs().is_one());
        prop_assert!(g.ell() <= l.rank());
        for p in [2, 3, 5, 7] {
            let p = BigInt::from(p);
            let ell_p = g.ell_p(&p).unwrap();
            prop_assert!(ell_p <= g.ell());
            let primary = g.p_primary(&p).unwrap();
            prop_assert_eq!(primary.is_trivial(), !(g.order() % &p).is_zero());
            prop_assert_eq!(primary.ell(), ell_p);
            prop_assert_eq!(l.is_p_unimodular(&p).unwrap(), ell_p == 0);
        }
    }

    #[test]
    fn smith_form_is_a_certified_factorization(rows in rectangular()) {
        let cols = rows[0].len();
        let m = IntMatrix::from_rows(cols, &rows).unwrap();
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.left * &m) * &s.right, s.diag.clone());
        prop_assert!(s.left.det().abs().is_one());
        prop_assert!(s.right.det().abs().is_one());
        let d = s.diagonal_entries();
        for w in d.windows(2) {
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
        prop_assert_eq!(s.rank(), m.rank());
    }

    #[test]
    fn invariant_factors_are_canonical(orders in proptest::collection::vec(1i64..=60, 0..8)) {
        let g = FiniteAbelianGroup::from_cyclic_orders(orders.iter().map(|&o| BigInt::from(o))).unwrap();
        let product: BigInt = orders.iter().map(|&o| BigInt::from(o)).product();
        prop_assert_eq!(g.order(), product);
        let factors = g.invariant_factors().to_vec();
        let again = FiniteAbelianGroup::from_invariant_factors(factors.clone()).unwrap();
        prop_assert_eq!(&again, &g);
        let mut shuffled = orders.clone();
        shuffled.reverse();
        let h = FiniteAbelianGroup::from_cyclic_orders(shuffled.iter().map(|&o| BigInt::from(o))).unwrap();
        prop_assert_eq!(h, g);
    }

    #[test]
    fn discriminant_forms_are_nondegenerate(rows in symmetric(4, 6)) {
        let l = Lattice::from_rows(&rows).unwrap();
        prop_assume!(!l.is_degenerate());
        let form = Arc::new(discr(&l).unwrap());
        prop_assert_eq!(form.order(), l.det().abs());
        prop_assert!(form.radical().is_trivial());
        prop_assert!(form.is_nondegenerate());
        // b(e_i, e_j) = lift_i . G . lift_j, symmetric
        for i in 0..form.num_generators() {
            for j in 0..form.num_generators() {
                prop_assert_eq!(&form.bilinear()[i][j], &form.bilinear()[j][i]);
            }
        }
    }

    #[test]
    fn complements_have_complementary_order(rows in symmetric(3, 5)) {
        let l = Lattice::from_rows(&rows).unwrap();
        prop_assume!(!l.is_degenerate() && l.det().abs() <= BigInt::from(60));
        let form = Arc::new(discr(&l).unwrap());
        for x in form.elements().collect::<Vec<_>>() {
            let k = DiscSubgroup::generated(&form, &[x]).unwrap();
            let perp = k.orthogonal_complement();
            prop_assert_eq!(k.order() * perp.order(), form.order());
            prop_assert_eq!(perp.orthogonal_complement(), k.clone());
        }
    }

    #[test]
    fn text_and_json_round_trip(rows in symmetric(5, 100)) {
        let l = Lattice::from_rows(&rows).unwrap();
        prop_assert_eq!(Lattice::parse_text(&l.to_text()).unwrap(), l.clone());
        prop_assert_eq!(Lattice::parse_json(&l.to_json()).unwrap(), l.clone());
        prop_assert_eq!(Lattice::parse_any(&l.to_json()).unwrap(), l);
    }
}
