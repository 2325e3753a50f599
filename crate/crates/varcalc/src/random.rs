//! Seeded generators of random expressions, forms and vector fields.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{int, Atom, CoordSystem, Expr, Monomial, MultiIndex};
use crate::form::{Gen, LocalForm};
use crate::jet::{EvolutionaryVF, InsularVF, TotalVF};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random data: maximal jet order, polynomial degree and number of terms.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub order: usize,
    pub degree: u32,
    pub terms: usize,
}

impl Shape {
    pub const fn new(order: usize, degree: u32, terms: usize) -> Self {
        Shape { order, degree, terms }
    }
}

fn coefficient(r: &mut Rng64) -> i64 {
    let c = r.gen_range(1..=3);
    if r.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

fn polynomial(r: &mut Rng64, atoms: &[Atom], degree: u32, terms: usize) -> Expr {
    let mut out = Expr::zero();
    for _ in 0..terms {
        let d = r.gen_range(0..=degree);
        let factors: Vec<(Atom, u32)> = (0..d).filter_map(|_| atoms.choose(r).map(|a| (a.clone(), 1))).collect();
        out += &Expr::monomial(Monomial::from_factors(factors), int(coefficient(r)));
    }
    out
}

fn atoms(cs: &CoordSystem, order: usize, with_base: bool) -> Vec<Atom> {
    let mut v: Vec<Atom> = if with_base { (0..cs.m()).map(Atom::Base).collect() } else { Vec::new() };
    for a in 0..cs.e() {
        for idx in MultiIndex::all_up_to(cs.m(), order) {
            v.push(Atom::Jet(a, idx));
        }
    }
    v
}

/// Differential polynomial in base and jet coordinates.
pub fn expr(r: &mut Rng64, cs: &CoordSystem, s: Shape) -> Expr {
    polynomial(r, &atoms(cs, s.order, true), s.degree, s.terms)
}

/// Polynomial in the base coordinates only.
pub fn base_polynomial(r: &mut Rng64, cs: &CoordSystem, degree: u32, terms: usize) -> Expr {
    let a: Vec<Atom> = (0..cs.m()).map(Atom::Base).collect();
    polynomial(r, &a, degree, terms)
}

/// Nonzero random `(p, q)`-form.
pub fn form(r: &mut Rng64, cs: &Arc<CoordSystem>, p: usize, q: usize, s: Shape) -> LocalForm {
    let m = cs.m();
    let verts: Vec<(usize, MultiIndex)> =
        (0..cs.e()).flat_map(|a| MultiIndex::all_up_to(m, s.order).into_iter().map(move |i| (a, i))).collect();
    assert!(q <= m && p <= verts.len());
    loop {
        let mut out = LocalForm::zero(cs);
        for _ in 0..s.terms.max(1) {
            let mut gens: Vec<Gen> =
                verts.choose_multiple(r, p).map(|(a, i)| Gen::Vert(*a, i.clone())).collect();
            let hs: Vec<usize> = (0..m).collect();
            gens.extend(hs.choose_multiple(r, q).map(|&i| Gen::Horiz(i)));
            let c = expr(r, cs, Shape::new(s.order, s.degree, 2));
            out.add_gens(gens, &c);
        }
        if !out.is_zero() {
            return out;
        }
    }
}

/// Random form with components in every bidegree `(p, q)` with `p ≤ max_p`.
pub fn mixed_form(r: &mut Rng64, cs: &Arc<CoordSystem>, max_p: usize, s: Shape) -> LocalForm {
    let mut out = LocalForm::zero(cs);
    for p in 0..=max_p {
        for q in 0..=cs.m() {
            if r.gen_bool(0.5) {
                out = out.add(&form(r, cs, p, q, Shape::new(s.order, s.degree, 1)));
            }
        }
    }
    out
}

pub fn evolutionary(r: &mut Rng64, cs: &CoordSystem, s: Shape) -> EvolutionaryVF {
    EvolutionaryVF::new((0..cs.e()).map(|_| expr(r, cs, s)).collect())
}

pub fn total(r: &mut Rng64, cs: &CoordSystem, s: Shape) -> TotalVF {
    TotalVF::new((0..cs.m()).map(|_| expr(r, cs, s)).collect())
}

/// Total vector field with base-dependent coefficients.
pub fn horizontal(r: &mut Rng64, cs: &CoordSystem, degree: u32, terms: usize) -> TotalVF {
    TotalVF::new((0..cs.m()).map(|_| base_polynomial(r, cs, degree, terms)).collect())
}

pub fn insular(r: &mut Rng64, cs: &CoordSystem, s: Shape) -> InsularVF {
    InsularVF::new(evolutionary(r, cs, s), total(r, cs, s))
}

/// Lagrangian `f Vol` with `f` of the given shape.
pub fn lagrangian(r: &mut Rng64, cs: &Arc<CoordSystem>, s: Shape) -> LocalForm {
    LocalForm::top(cs, expr(r, cs, s))
}

/// Polynomial section `u^α = φ^α(x)`.
pub fn section(r: &mut Rng64, cs: &CoordSystem, degree: u32) -> Vec<Expr> {
    (0..cs.e()).map(|_| base_polynomial(r, cs, degree, 4)).collect()
}

/// Coordinate system with `1 ≤ m ≤ max_m`, `1 ≤ e ≤ max_e`.
pub fn coords(r: &mut Rng64, max_m: usize, max_e: usize) -> Arc<CoordSystem> {
    let m = r.gen_range(1..=max_m);
    let e = r.gen_range(1..=max_e);
    let base = ["x", "t", "y", "z"];
    let fibers = ["u", "v", "w"];
    Arc::new(CoordSystem::new(&base[..m], &fibers[..e]).expect("valid names"))
}
