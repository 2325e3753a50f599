mod common;

use proptest::prelude::*;
use varcalc::ansatz::Bounds;
use varcalc::error::Error;
use varcalc::euler::{divergence_invert, euler_lagrange, exterior_euler, interior_euler, is_d_exact};
use varcalc::random::{self, Shape};

use common::{setup, FORM};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn interior_euler_is_a_projection(seed in any::<u64>(), p in 1usize..=2) {
        let (mut r, cs) = setup(seed);
        let w = random::form(&mut r, &cs, p, cs.m(), FORM);
        let i = interior_euler(&w).unwrap();
        prop_assert_eq!(interior_euler(&i).unwrap(), i);
    }

    #[test]
    fn interior_euler_kills_d_exact(seed in any::<u64>(), p in 1usize..=2) {
        let (mut r, cs) = setup(seed);
        let b = random::form(&mut r, &cs, p, cs.m() - 1, FORM);
        prop_assert!(interior_euler(&b.d_h()).unwrap().is_zero());
    }

    #[test]
    fn exterior_euler_squares_to_zero(seed in any::<u64>(), p in 0usize..=1) {
        let (mut r, cs) = setup(seed);
        let w = random::form(&mut r, &cs, p, cs.m(), FORM);
        prop_assert!(exterior_euler(&exterior_euler(&w).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn euler_lagrange_ignores_divergences(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let l = random::lagrangian(&mut r, &cs, Shape::new(2, 3, 4));
        let b = random::form(&mut r, &cs, 0, cs.m() - 1, FORM);
        prop_assert_eq!(euler_lagrange(&l.add(&b.d_h())).unwrap(), euler_lagrange(&l).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn divergence_inversion(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let p = random::form(&mut r, &cs, 0, cs.m() - 1, Shape::new(1, 3, 3));
        let f = p.d_h();
        prop_assume!(!f.is_zero());
        let q = divergence_invert(&f, Bounds::default_for(&f)).unwrap();
        prop_assert_eq!(q.d_h(), f.clone());
        prop_assert!(is_d_exact(&f).unwrap());
    }

    #[test]
    fn non_divergences_are_rejected(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let f = random::lagrangian(&mut r, &cs, Shape::new(2, 3, 3));
        prop_assume!(!euler_lagrange(&f).unwrap().is_zero());
        prop_assert!(matches!(divergence_invert(&f, Bounds::default_for(&f)), Err(Error::NotExact(_))));
    }
}
