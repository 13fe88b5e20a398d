use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;

use icebox::coxeter::{demazure_product, monoid_act, word_act};
use icebox::gt::{
    all_patterns, bender_knuth, gt_from_ssyt, gt_from_state, schutzenberger, ssyt_from_gt, state_from_gt, t_k,
};
use icebox::lattice::{enumerate_states, partition_by_enumeration, partition_function, state_weight};
use icebox::{GTPattern, LaurentPoly, Registry, RowType, State, SystemSpec};

fn reg() -> Arc<Registry> {
    Registry::new(["x", "y", "z"]).unwrap()
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..3, 3), -5i64..6, 1i64..4), 0..5).prop_map(|terms| {
        let reg = reg();
        let mut p = LaurentPoly::zero(&reg);
        for (e, n, d) in terms {
            p.add_assign_ref(&LaurentPoly::monomial(&reg, e, BigRational::new(n.into(), d.into())));
        }
        p
    })
}

/// A strictly decreasing top row and one of its patterns.
fn pattern() -> impl Strategy<Value = GTPattern> {
    (2usize..5, prop::collection::vec(0i64..3, 4), any::<prop::sample::Index>()).prop_map(|(r, gaps, idx)| {
        let mut top = vec![0i64; r];
        for i in (0..r - 1).rev() {
            top[i] = top[i + 1] + gaps[i];
        }
        let ps = all_patterns(&top);
        ps[idx.index(ps.len())].clone()
    })
}

fn word(r: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..r, 0..10)
}

fn theta(r: usize) -> impl Strategy<Value = Vec<RowType>> {
    prop::collection::vec(prop_oneof![Just(RowType::R), Just(RowType::L)], r)
}

proptest! {
    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn poly_text_and_json(a in poly()) {
        let reg = reg();
        prop_assert_eq!(LaurentPoly::parse(&reg, &a.to_string()).unwrap(), a.clone());
        prop_assert_eq!(LaurentPoly::from_json(&a.to_json(), Some(&reg)).unwrap(), a);
    }

    #[test]
    fn bk_involutions(t in pattern()) {
        let s = ssyt_from_gt(&t).unwrap();
        prop_assert_eq!(gt_from_ssyt(&s).unwrap(), t.clone());
        for k in 1..t.r() {
            let u = t_k(&t, k).unwrap();
            prop_assert_eq!(t_k(&u, k).unwrap(), t.clone());
            prop_assert_eq!(ssyt_from_gt(&u).unwrap(), bender_knuth(&s, k as u32).unwrap());
        }
        prop_assert_eq!(schutzenberger(&schutzenberger(&t).unwrap()).unwrap(), t.clone());
        prop_assert_eq!(GTPattern::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn demazure_products(a in word(4), b in word(4), d in prop::collection::vec(1u8..5, 4)) {
        let ab: Vec<usize> = a.iter().chain(&b).copied().collect();
        let pa = demazure_product(4, &a).unwrap();
        let pab = demazure_product(4, &ab).unwrap();
        let mut from_pa = pa.reduced_word();
        from_pa.extend(&b);
        prop_assert_eq!(demazure_product(4, &from_pa).unwrap(), pab.clone());
        let rw = pab.reduced_word();
        prop_assert_eq!(rw.len(), pab.length());
        prop_assert_eq!(demazure_product(4, &rw).unwrap(), pab.clone());
        for &i in &ab {
            let twice = pab.mul_gen(i).unwrap();
            prop_assert_eq!(twice.mul_gen(i).unwrap(), twice);
        }
        prop_assert_eq!(monoid_act(&pab, &d).unwrap(), word_act(&ab, &d).unwrap());
    }

    #[test]
    fn crystal_states(th in theta(3), gaps in prop::collection::vec(1usize..3, 2)) {
        let top = vec![gaps[0] + gaps[1], gaps[1], 0];
        let spec = SystemSpec::crystal(th.clone(), top, None).unwrap();
        let states = enumerate_states(&spec).unwrap();
        let mut total = LaurentPoly::zero(spec.registry());
        for s in &states {
            let w = state_weight(s, &spec).unwrap();
            total.add_assign_ref(&w);
            let (back, th2) = State::from_json(&s.to_json(&th, Some(&w))).unwrap();
            prop_assert_eq!(&back, s);
            prop_assert_eq!(&th2, &th);
            let t = gt_from_state(s, &th).unwrap();
            prop_assert_eq!(&state_from_gt(&t, &th, None).unwrap(), s);
        }
        prop_assert_eq!(partition_function(&spec).unwrap(), total.clone());
        prop_assert_eq!(partition_by_enumeration(&spec).unwrap(), total);
    }
}
