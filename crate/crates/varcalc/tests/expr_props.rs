mod common;

use proptest::prelude::*;
use varcalc::expr::Atom;
use varcalc::parse::parse_expr;
use varcalc::random;

use common::{setup, EXPR};

fn atoms(cs: &varcalc::CoordSystem) -> Vec<Atom> {
    let mut v: Vec<Atom> = (0..cs.m()).map(Atom::Base).collect();
    for a in 0..cs.e() {
        for idx in varcalc::MultiIndex::all_up_to(cs.m(), 2) {
            v.push(Atom::Jet(a, idx));
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let a = random::expr(&mut r, &cs, EXPR);
        let b = random::expr(&mut r, &cs, EXPR);
        let c = random::expr(&mut r, &cs, EXPR);
        prop_assert!((&(&(&a + &b) + &c) - &(&a + &(&b + &c))).is_zero());
        prop_assert!((&(&a * &b) - &(&b * &a)).is_zero());
        prop_assert!((&(&a * &(&b + &c)) - &(&(&a * &b) + &(&a * &c))).is_zero());
        prop_assert!((&(&(&a * &b) * &c) - &(&a * &(&b * &c))).is_zero());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn partials_commute(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let f = random::expr(&mut r, &cs, EXPR);
        let at = atoms(&cs);
        for p in &at {
            for q in &at {
                prop_assert_eq!(f.partial(p).partial(q), f.partial(q).partial(p));
            }
        }
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let f = random::expr(&mut r, &cs, EXPR);
        let g = random::expr(&mut r, &cs, EXPR);
        for a in atoms(&cs) {
            let lhs = (&f * &g).partial(&a);
            let rhs = &(&f.partial(&a) * &g) + &(&f * &g.partial(&a));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let f = random::expr(&mut r, &cs, EXPR);
        prop_assert_eq!(parse_expr(&cs, &f.to_text(&cs)).unwrap(), f);
    }
}
