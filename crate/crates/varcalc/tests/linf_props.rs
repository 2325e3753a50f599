use proptest::prelude::*;
use rand::seq::SliceRandom;
use varcalc::linf::graded::{
    self, compose, decalage_sign, koszul_sign, koszul_sign_by_transpositions, nonzero_jacobiators, permutation_sign,
    permute, transport_mismatches, unshuffles, BracketFamily, Convention, GradedSpace,
};
use varcalc::linf::{l1, l2_hamiltonian_residual, pair_jacobiator, surface_relation_residual, ObservableElement};
use varcalc::noether::{find_hamiltonian_form, HamiltonianPair};
use varcalc::parse::parse_vector_field;
use varcalc::random;
use varcalc::variational::{isotropic_oscillator, wave_equation, FundamentalData, Theory};

fn perm_and_degrees(seed: u64, n: usize) -> (Vec<usize>, Vec<usize>, Vec<i64>) {
    let mut r = random::rng(seed);
    let mut s: Vec<usize> = (0..n).collect();
    let mut t = s.clone();
    s.shuffle(&mut r);
    t.shuffle(&mut r);
    let d = (0..n).map(|k| ((seed >> (2 * k)) % 4) as i64 - 3).collect();
    (s, t, d)
}

const SPACES: [&[(i64, usize)]; 3] = [&[(-1, 2), (0, 1)], &[(-1, 1), (0, 2)], &[(-2, 1), (-1, 1), (0, 2)]];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn koszul_sign_is_a_cocycle(seed in any::<u64>(), n in 1usize..=6) {
        let (s, t, d) = perm_and_degrees(seed, n);
        let lhs = koszul_sign(&compose(&s, &t), &d);
        prop_assert_eq!(lhs, koszul_sign(&s, &d) * koszul_sign(&t, &permute(&s, &d)));
        prop_assert_eq!(koszul_sign(&s, &d), koszul_sign_by_transpositions(&s, &d));
        let odd = vec![1; n];
        prop_assert_eq!(koszul_sign(&s, &odd), permutation_sign(&s));
    }

    #[test]
    fn decalage_sign_matches_definition(seed in any::<u64>(), n in 1usize..=6) {
        let (_, _, d) = perm_and_degrees(seed, n);
        let e: i64 = d.iter().enumerate().map(|(i, x)| (n - 1 - i) as i64 * x).sum();
        prop_assert_eq!(decalage_sign(&d), if e.rem_euclid(2) == 0 { 1 } else { -1 });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transport_relates_jacobiators(seed in any::<u64>(), k in 0usize..SPACES.len()) {
        let space = GradedSpace::from_pairs(SPACES[k]).unwrap();
        let mut r = random::rng(seed);
        let l = graded::random_family(&mut r, &space, Convention::Anti, 3);
        prop_assert!(transport_mismatches(&l, 3).unwrap().is_empty());
        let q = graded::decalage_transport(&l).unwrap();
        prop_assert_eq!(graded::decalage_inverse(&q).unwrap().to_json(), l.to_json());
    }

    #[test]
    fn family_json_round_trip(seed in any::<u64>(), k in 0usize..SPACES.len(), sym in any::<bool>()) {
        let space = GradedSpace::from_pairs(SPACES[k]).unwrap();
        let conv = if sym { Convention::Sym } else { Convention::Anti };
        let f = graded::random_family(&mut random::rng(seed), &space, conv, 3);
        let back = BracketFamily::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), f.to_json());
    }
}

#[test]
fn unshuffle_counts_and_shape() {
    for n in 0..=6usize {
        for i in 0..=n {
            let us = unshuffles(i, n - i);
            let binom = (0..i).fold(1usize, |acc, k| acc * (n - k) / (k + 1));
            assert_eq!(us.len(), binom);
            for s in us {
                assert!(s[..i].windows(2).all(|w| w[0] < w[1]) && s[i..].windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}

#[test]
fn example_dglas_satisfy_jacobi() {
    for name in graded::EXAMPLES {
        let f = graded::example(name).unwrap();
        assert!(f.space.dim() <= 6);
        assert!(nonzero_jacobiators(&f, 3).is_empty(), "{name}");
        assert!(transport_mismatches(&f, 3).unwrap().is_empty(), "{name}");
        let q = graded::decalage_transport(&f).unwrap();
        assert!(nonzero_jacobiators(&q, 3).is_empty(), "{name}");
    }
}

fn pairs(t: &Theory, fields: &[&str]) -> (FundamentalData, Vec<HamiltonianPair>) {
    let fd = FundamentalData::new(&t.lagrangian).unwrap();
    let ps = fields
        .iter()
        .map(|f| {
            let chi = parse_vector_field(&t.coords, f).unwrap();
            HamiltonianPair { zeta: find_hamiltonian_form(&chi, &fd, None).unwrap(), chi }
        })
        .collect();
    (fd, ps)
}

#[test]
fn observable_brackets_on_corpus_pairs() {
    let cases: [(Theory, &[&str]); 2] = [
        (
            wave_equation(),
            &["ins{ev{u: -u_t}, tot{t: 1}}", "ins{ev{u: -u_x}, tot{x: 1}}", "ins{ev{u: -t*u_x - x*u_t}, tot{x: t, t: x}}", "ev{u: x}"],
        ),
        (isotropic_oscillator(), &["ins{ev{q1: -q1_t, q2: -q2_t}, tot{t: 1}}", "ev{q1: -q2, q2: q1}"]),
    ];
    for (t, fields) in cases {
        let (fd, ps) = pairs(&t, fields);
        for p in &ps {
            assert!(l1(&l1(&ObservableElement::pair(p.clone()))).is_zero());
        }
        for a in 0..ps.len() {
            for b in 0..ps.len() {
                assert!(l2_hamiltonian_residual(&ps[a], &ps[b], &fd).unwrap().is_zero());
                assert!(surface_relation_residual(&ps[a], &ps[b], &fd).unwrap().is_zero());
            }
        }
        for a in 0..ps.len() {
            for b in a + 1..ps.len() {
                for c in b + 1..ps.len() {
                    assert!(pair_jacobiator([&ps[a], &ps[b], &ps[c]], &fd).unwrap().is_d_exact());
                }
            }
        }
    }
}
