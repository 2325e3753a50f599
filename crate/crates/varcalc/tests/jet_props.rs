mod common;

use proptest::prelude::*;
use varcalc::expr::{Atom, Rational};
use varcalc::jet::{bracket_evolutionary, bracket_insular, commutator_d_partial, total_derivative};
use varcalc::random::{self, Shape};
use varcalc::{Expr, MultiIndex};

use common::{setup, EXPR, FIELD};

/// `f ∘ j¹φ` as a polynomial in the base coordinates.
fn pull_back(f: &Expr, phi: &[Expr]) -> Expr {
    f.substitute(&|a| match a {
        Atom::Jet(al, idx) => Some(idx.entries().iter().fold(phi[*al].clone(), |v, &i| v.partial(&Atom::Base(i)))),
        _ => None,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let f = random::expr(&mut r, &cs, EXPR);
        for i in 0..cs.m() {
            for j in 0..cs.m() {
                prop_assert_eq!(total_derivative(&total_derivative(&f, i), j), total_derivative(&total_derivative(&f, j), i));
            }
        }
    }

    #[test]
    fn d_and_partial_commutator(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let f = random::expr(&mut r, &cs, EXPR);
        for a in 0..cs.e() {
            for idx in MultiIndex::all_up_to(cs.m(), 3) {
                for i in 0..cs.m() {
                    let expected = match idx.without(i) {
                        Some(rest) => -f.partial(&Atom::Jet(a, rest)),
                        None => Expr::zero(),
                    };
                    prop_assert_eq!(commutator_d_partial(&f, i, a, &idx), expected);
                }
            }
        }
    }

    #[test]
    fn total_derivative_is_derivative_along_sections(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let f = random::expr(&mut r, &cs, EXPR);
        let phi = random::section(&mut r, &cs, 3);
        let point: Vec<Rational> = (0..cs.m()).map(|k| Rational::new((k as i64 + 2).into(), 3.into())).collect();
        for i in 0..cs.m() {
            let along = pull_back(&f, &phi).partial(&Atom::Base(i));
            prop_assert_eq!(&pull_back(&total_derivative(&f, i), &phi), &along);
            let lhs = total_derivative(&f, i).eval_on_section(&phi, &point).unwrap();
            let rhs = along.eval_on_section(&phi, &point).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn prolongation_is_a_homomorphism(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let xi = random::evolutionary(&mut r, &cs, FIELD);
        let eta = random::evolutionary(&mut r, &cs, FIELD);
        let br = bracket_evolutionary(&xi, &eta);
        for a in 0..cs.e() {
            for idx in MultiIndex::all_up_to(cs.m(), 2) {
                let u = Expr::jet_mi(a, idx.clone());
                let commutator = &xi.apply(&eta.apply(&u)) - &eta.apply(&xi.apply(&u));
                prop_assert_eq!(br.prolong_coefficient(a, &idx), commutator);
            }
        }
        let f = random::expr(&mut r, &cs, Shape::new(1, 2, 3));
        prop_assert_eq!(br.apply(&f), &xi.apply(&eta.apply(&f)) - &eta.apply(&xi.apply(&f)));
    }

    #[test]
    fn insular_bracket_is_commutator(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let a = random::insular(&mut r, &cs, FIELD);
        let b = random::insular(&mut r, &cs, FIELD);
        let f = random::expr(&mut r, &cs, Shape::new(1, 2, 3));
        prop_assert_eq!(bracket_insular(&a, &b).apply(&f), &a.apply(&b.apply(&f)) - &b.apply(&a.apply(&f)));
        prop_assert_eq!(bracket_insular(&a, &b), bracket_insular(&b, &a).neg());
    }

    #[test]
    fn horizontal_and_evolutionary_fields_commute(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let xi = random::evolutionary(&mut r, &cs, FIELD).to_insular(&cs);
        let x = random::horizontal(&mut r, &cs, 2, 2).to_insular(&cs);
        let y = random::horizontal(&mut r, &cs, 2, 2).to_insular(&cs);
        prop_assert!(bracket_insular(&xi, &x).is_zero());
        let xy = bracket_insular(&x, &y);
        prop_assert!(xy.ev.is_zero() && xy.tot.is_horizontal());
    }

    #[test]
    fn vector_field_text_round_trip(seed in any::<u64>()) {
        let (mut r, cs) = setup(seed);
        let chi = random::insular(&mut r, &cs, FIELD);
        prop_assert_eq!(varcalc::parse::parse_vector_field(&cs, &chi.to_text(&cs)).unwrap(), chi);
    }
}
