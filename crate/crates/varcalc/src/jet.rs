//! Total derivatives, vector fields on the jet bundle and their prolongations.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::expr::{int, Atom, CoordSystem, Expr, MultiIndex};

/// `D_i f`
pub fn total_derivative(f: &Expr, i: usize) -> Expr {
    let mut out = Expr::zero();
    for (m, c) in f.terms() {
        for (pos, (b, k)) in m.factors().iter().enumerate() {
            let db = match b {
                Atom::Base(j) if *j == i => Expr::one(),
                Atom::Base(_) => continue,
                Atom::Jet(a, idx) => Expr::jet_mi(*a, idx.with(i)),
                Atom::Func(fa) => {
                    let dg = total_derivative(&fa.arg, i);
                    if dg.is_zero() {
                        continue;
                    }
                    &Expr::func(&fa.name, fa.ticks + 1, fa.arg.clone()) * &dg
                }
            };
            let rest = crate::expr::Monomial::from_factors(
                m.factors()
                    .iter()
                    .enumerate()
                    .map(|(q, (a, e))| (a.clone(), if q == pos { e - 1 } else { *e })),
            );
            out += &db.mul_monomial(&rest, &(c * int(*k as i64)));
        }
    }
    out
}

/// `D_I f = D_{i_1} ⋯ D_{i_n} f`
pub fn total_derivative_multi(f: &Expr, idx: &MultiIndex) -> Expr {
    idx.entries().iter().fold(f.clone(), |acc, &i| total_derivative(&acc, i))
}

/// Evolutionary vector field given by its characteristics `ξ_α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolutionaryVF {
    pub xi: Vec<Expr>,
}

/// Total vector field `X_i D_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalVF {
    pub x: Vec<Expr>,
}

/// `χ = pr ξ + X_i D_i`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsularVF {
    pub ev: EvolutionaryVF,
    pub tot: TotalVF,
}

/// Memo of prolonged coefficients `D_I ξ_α` for one computation.
#[derive(Default)]
pub struct Prolongation<'a> {
    xi: Option<&'a EvolutionaryVF>,
    cache: BTreeMap<(usize, MultiIndex), Expr>,
}

impl<'a> Prolongation<'a> {
    pub fn new(xi: &'a EvolutionaryVF) -> Self {
        Prolongation { xi: Some(xi), cache: BTreeMap::new() }
    }

    pub fn coefficient(&mut self, a: usize, idx: &MultiIndex) -> Expr {
        let Some(xi) = self.xi else { return Expr::zero() };
        if a >= xi.xi.len() {
            return Expr::zero();
        }
        if idx.is_empty() {
            return xi.xi[a].clone();
        }
        if let Some(v) = self.cache.get(&(a, idx.clone())) {
            return v.clone();
        }
        let last = *idx.entries().last().unwrap();
        let prev = self.coefficient(a, &idx.without(last).unwrap());
        let v = total_derivative(&prev, last);
        self.cache.insert((a, idx.clone()), v.clone());
        v
    }
}

impl EvolutionaryVF {
    pub fn new(xi: Vec<Expr>) -> Self {
        EvolutionaryVF { xi }
    }

    pub fn zero(cs: &CoordSystem) -> Self {
        EvolutionaryVF { xi: vec![Expr::zero(); cs.e()] }
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().all(Expr::is_zero)
    }

    pub fn prolong_coefficient(&self, a: usize, idx: &MultiIndex) -> Expr {
        total_derivative_multi(&self.xi[a], idx)
    }

    /// `pr ξ (f)`
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut pr = Prolongation::new(self);
        self.apply_with(&mut pr, f)
    }

    pub(crate) fn apply_with(&self, pr: &mut Prolongation<'_>, f: &Expr) -> Expr {
        let mut out = Expr::zero();
        for a in f.jet_atoms() {
            if let Atom::Jet(al, idx) = &a {
                let c = pr.coefficient(*al, idx);
                if c.is_zero() {
                    continue;
                }
                out += &(&c * &f.partial(&a));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        EvolutionaryVF { xi: self.xi.iter().map(|e| -e).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        EvolutionaryVF { xi: self.xi.iter().zip(&o.xi).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn to_insular(&self, cs: &CoordSystem) -> InsularVF {
        InsularVF { ev: self.clone(), tot: TotalVF::zero(cs) }
    }
}

impl TotalVF {
    pub fn new(x: Vec<Expr>) -> Self {
        TotalVF { x }
    }

    pub fn zero(cs: &CoordSystem) -> Self {
        TotalVF { x: vec![Expr::zero(); cs.m()] }
    }

    /// The coordinate field `D_i`.
    pub fn coordinate(cs: &CoordSystem, i: usize) -> Self {
        let mut x = vec![Expr::zero(); cs.m()];
        x[i] = Expr::one();
        TotalVF { x }
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(Expr::is_zero)
    }

    /// Components depend on base coordinates only.
    pub fn is_horizontal(&self) -> bool {
        self.x.iter().all(Expr::is_fiber_free)
    }

    pub fn apply(&self, f: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (i, xi) in self.x.iter().enumerate() {
            if !xi.is_zero() {
                out += &(xi * &total_derivative(f, i));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        TotalVF { x: self.x.iter().map(|e| -e).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        TotalVF { x: self.x.iter().zip(&o.x).map(|(a, b)| a + b).collect() }
    }

    pub fn to_insular(&self, cs: &CoordSystem) -> InsularVF {
        InsularVF { ev: EvolutionaryVF::zero(cs), tot: self.clone() }
    }
}

impl InsularVF {
    pub fn new(ev: EvolutionaryVF, tot: TotalVF) -> Self {
        InsularVF { ev, tot }
    }

    pub fn zero(cs: &CoordSystem) -> Self {
        InsularVF { ev: EvolutionaryVF::zero(cs), tot: TotalVF::zero(cs) }
    }

    pub fn is_zero(&self) -> bool {
        self.ev.is_zero() && self.tot.is_zero()
    }

    /// `χ(f) = pr ξ(f) + X_i D_i f`
    pub fn apply(&self, f: &Expr) -> Expr {
        &self.ev.apply(f) + &self.tot.apply(f)
    }

    pub fn neg(&self) -> Self {
        InsularVF { ev: self.ev.neg(), tot: self.tot.neg() }
    }

    pub fn add(&self, o: &Self) -> Self {
        InsularVF { ev: self.ev.add(&o.ev), tot: self.tot.add(&o.tot) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &crate::expr::Rational) -> Self {
        InsularVF {
            ev: EvolutionaryVF { xi: self.ev.xi.iter().map(|e| e.scale(c)).collect() },
            tot: TotalVF { x: self.tot.x.iter().map(|e| e.scale(c)).collect() },
        }
    }
}

fn assignments(names: &[String], comps: &[Expr], cs: &CoordSystem) -> String {
    let items: Vec<String> =
        names.iter().zip(comps).filter(|(_, c)| !c.is_zero()).map(|(n, c)| format!("{n}: {}", c.to_text(cs))).collect();
    if items.is_empty() {
        format!("{}: 0", names[0])
    } else {
        items.join(", ")
    }
}

fn latex_terms(comps: &[Expr], cs: &CoordSystem, op: impl Fn(usize) -> String) -> Vec<String> {
    comps
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let body = c.latex(cs).to_string();
            if c.num_terms() > 1 {
                format!("\\left({body}\\right) {}", op(k))
            } else if c.as_constant().is_some_and(|r| r == int(1)) {
                op(k)
            } else {
                format!("{body} {}", op(k))
            }
        })
        .collect()
}

impl EvolutionaryVF {
    /// `ev{u: …}`, readable by the parser.
    pub fn to_text(&self, cs: &CoordSystem) -> String {
        format!("ev{{{}}}", assignments(cs.fiber_names(), &self.xi, cs))
    }

    /// `\mathrm{pr}(ξ_α ∂/∂u^α)`
    pub fn to_latex(&self, cs: &CoordSystem) -> String {
        let t = latex_terms(&self.xi, cs, |a| format!("\\partial_{{{}}}", cs.fiber_name(a)));
        if t.is_empty() {
            "0".into()
        } else {
            format!("\\mathrm{{pr}}\\left({}\\right)", t.join(" + "))
        }
    }
}

impl TotalVF {
    pub fn to_text(&self, cs: &CoordSystem) -> String {
        format!("tot{{{}}}", assignments(cs.base_names(), &self.x, cs))
    }

    pub fn to_latex(&self, cs: &CoordSystem) -> String {
        let t = latex_terms(&self.x, cs, |i| format!("D_{{{}}}", cs.base_name(i)));
        if t.is_empty() {
            "0".into()
        } else {
            t.join(" + ")
        }
    }
}

impl InsularVF {
    pub fn to_text(&self, cs: &CoordSystem) -> String {
        match (self.ev.is_zero(), self.tot.is_zero()) {
            (_, true) => self.ev.to_text(cs),
            (true, false) => self.tot.to_text(cs),
            _ => format!("ins{{{}, {}}}", self.ev.to_text(cs), self.tot.to_text(cs)),
        }
    }

    pub fn to_latex(&self, cs: &CoordSystem) -> String {
        match (self.ev.is_zero(), self.tot.is_zero()) {
            (_, true) => self.ev.to_latex(cs),
            (true, false) => self.tot.to_latex(cs),
            _ => format!("{} + {}", self.ev.to_latex(cs), self.tot.to_latex(cs)),
        }
    }
}

/// `[ξ, η]_α = pr ξ(η_α) − pr η(ξ_α)`
pub fn bracket_evolutionary(xi: &EvolutionaryVF, eta: &EvolutionaryVF) -> EvolutionaryVF {
    let mut p = Prolongation::new(xi);
    let mut q = Prolongation::new(eta);
    let comps = xi
        .xi
        .iter()
        .zip(&eta.xi)
        .map(|(xa, ea)| &xi.apply_with(&mut p, ea) - &eta.apply_with(&mut q, xa))
        .collect();
    EvolutionaryVF { xi: comps }
}

/// Commutator of insular fields: the evolutionary parts bracket among
/// themselves, the total part is `χ(X'_i) − χ'(X_i)`.
pub fn bracket_insular(a: &InsularVF, b: &InsularVF) -> InsularVF {
    let ev = bracket_evolutionary(&a.ev, &b.ev);
    let x = a
        .tot
        .x
        .iter()
        .zip(&b.tot.x)
        .map(|(xa, xb)| &a.apply(xb) - &b.apply(xa))
        .collect();
    InsularVF { ev, tot: TotalVF { x } }
}

/// Components of a vector field in the variational frame `{D_i, ∂_α^I}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariationalComponents {
    pub total: TotalVF,
    pub vertical: BTreeMap<(usize, MultiIndex), Expr>,
}

impl VariationalComponents {
    /// Characteristics read off the order-zero components.
    pub fn evolutionary(&self, cs: &CoordSystem) -> EvolutionaryVF {
        let mut xi = vec![Expr::zero(); cs.e()];
        for ((a, idx), v) in &self.vertical {
            if idx.is_empty() {
                xi[*a] = v.clone();
            }
        }
        EvolutionaryVF { xi }
    }
}

/// Standard-frame components `X̃_i`, `X̃_α^I` to variational ones:
/// `X_α^I = X̃_α^I − X̃_j u^α_{I,j}`.
pub fn to_variational_coords(
    xt_base: &[Expr],
    xt_vert: &BTreeMap<(usize, MultiIndex), Expr>,
) -> VariationalComponents {
    let mut vertical = BTreeMap::new();
    for ((a, idx), v) in xt_vert {
        let mut c = v.clone();
        for (j, xj) in xt_base.iter().enumerate() {
            if !xj.is_zero() {
                c -= &(xj * &Expr::jet_mi(*a, idx.with(j)));
            }
        }
        vertical.insert((*a, idx.clone()), c);
    }
    VariationalComponents { total: TotalVF { x: xt_base.to_vec() }, vertical }
}

/// Prolongation in the standard frame:
/// `pr X̃_α^I = D_I(X̃_α − u^α_i X̃_i) + u^α_{I,i} X̃_i`.
pub fn prolong_standard_coords(
    xt_base: &[Expr],
    xt_fiber: &[Expr],
    a: usize,
    idx: &MultiIndex,
) -> Expr {
    let mut q = xt_fiber[a].clone();
    for (i, xi) in xt_base.iter().enumerate() {
        if !xi.is_zero() {
            q -= &(&Expr::jet(a, &[i]) * xi);
        }
    }
    let mut out = total_derivative_multi(&q, idx);
    for (i, xi) in xt_base.iter().enumerate() {
        if !xi.is_zero() {
            out += &(&Expr::jet_mi(a, idx.with(i)) * xi);
        }
    }
    out
}

/// `D_i ∘ ∂/∂u_I^α − ∂/∂u_I^α ∘ D_i`
pub fn commutator_d_partial(f: &Expr, i: usize, a: usize, idx: &MultiIndex) -> Expr {
    let at = Atom::Jet(a, idx.clone());
    &total_derivative(&f.partial(&at), i) - &total_derivative(f, i).partial(&at)
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
}
