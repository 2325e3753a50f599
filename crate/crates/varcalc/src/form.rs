//! Local forms of the variational bicomplex and their Cartan calculus.
//!
//! A form is a sum of coefficient expressions times words in the odd
//! generators `δu_I^α` (vertical) and `dx^i` (horizontal). Words are kept
//! sorted: vertical generators first, ordered by `(α, |I|, I)`, then the
//! horizontal ones by index.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use crate::expr::{fmt_rational, CoordSystem, Expr, MultiIndex, Rational};
use crate::jet::{total_derivative, EvolutionaryVF, InsularVF, Prolongation, TotalVF};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Vert(usize, MultiIndex),
    Horiz(usize),
}

/// Sorted generator word.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis {
    pub vert: Vec<(usize, MultiIndex)>,
    pub horiz: Vec<usize>,
}

impl Basis {
    pub fn empty() -> Self {
        Basis::default()
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.vert.len(), self.horiz.len())
    }

    pub fn gens(&self) -> Vec<Gen> {
        self.vert
            .iter()
            .map(|(a, i)| Gen::Vert(*a, i.clone()))
            .chain(self.horiz.iter().map(|&i| Gen::Horiz(i)))
            .collect()
    }

    /// Sorts a generator word; returns the permutation sign, or `None` when a
    /// generator repeats.
    pub fn normalize(mut gens: Vec<Gen>) -> Option<(i64, Basis)> {
        let mut sign = 1i64;
        for i in 1..gens.len() {
            let mut j = i;
            while j > 0 && gens[j - 1] > gens[j] {
                gens.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && gens[j - 1] == gens[j] {
                return None;
            }
        }
        let mut b = Basis::empty();
        for g in gens {
            match g {
                Gen::Vert(a, i) => b.vert.push((a, i)),
                Gen::Horiz(i) => b.horiz.push(i),
            }
        }
        Some((sign, b))
    }

    /// `dx^1 ∧ ⋯ ∧ dx^m`
    pub fn volume(m: usize) -> Basis {
        Basis { vert: Vec::new(), horiz: (0..m).collect() }
    }
}

/// A local form, possibly of mixed bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalForm {
    cs: Arc<CoordSystem>,
    terms: BTreeMap<Basis, Expr>,
}

/// Sum of components of different bidegrees; the same representation.
pub type MixedForm = LocalForm;

/// Depth of a `(p, q)` component: vertical degree for forms near the top
/// horizontal degree, with surface forms (p = 0 or q = m) at depth 0.
pub fn depth(p: usize, q: usize, m: usize) -> usize {
    p.min(m.saturating_sub(q))
}

impl LocalForm {
    pub fn zero(cs: &Arc<CoordSystem>) -> Self {
        LocalForm { cs: cs.clone(), terms: BTreeMap::new() }
    }

    pub fn function(cs: &Arc<CoordSystem>, f: Expr) -> Self {
        LocalForm::term(cs, f, Basis::empty())
    }

    pub fn term(cs: &Arc<CoordSystem>, f: Expr, b: Basis) -> Self {
        let mut out = LocalForm::zero(cs);
        out.add_term(b, &f);
        out
    }

    /// `f δu_{I_1}^{α_1} ∧ ⋯ ∧ dx^{i_q}` from an unsorted word.
    pub fn from_gens(cs: &Arc<CoordSystem>, f: Expr, gens: Vec<Gen>) -> Self {
        let mut out = LocalForm::zero(cs);
        out.add_gens(gens, &f);
        out
    }

    pub fn dx(cs: &Arc<CoordSystem>, i: usize) -> Self {
        LocalForm::from_gens(cs, Expr::one(), vec![Gen::Horiz(i)])
    }

    pub fn delta(cs: &Arc<CoordSystem>, a: usize, idx: MultiIndex) -> Self {
        LocalForm::from_gens(cs, Expr::one(), vec![Gen::Vert(a, idx)])
    }

    /// `f · Vol`
    pub fn top(cs: &Arc<CoordSystem>, f: Expr) -> Self {
        LocalForm::term(cs, f, Basis::volume(cs.m()))
    }

    /// `Vol^i := ι_{D_i} Vol`, as a form.
    pub fn vol_contracted(cs: &Arc<CoordSystem>, i: usize) -> Self {
        LocalForm::top(cs, Expr::one()).insert_tot(&TotalVF::coordinate(cs, i))
    }

    pub fn coords(&self) -> &Arc<CoordSystem> {
        &self.cs
    }

    pub fn m(&self) -> usize {
        self.cs.m()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &Expr)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, b: &Basis) -> Expr {
        self.terms.get(b).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: Basis, f: &Expr) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += f;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_gens(&mut self, gens: Vec<Gen>, f: &Expr) {
        if f.is_zero() {
            return;
        }
        if let Some((s, b)) = Basis::normalize(gens) {
            if s == 1 {
                self.add_term(b, f);
            } else {
                self.add_term(b, &-f);
            }
        }
    }

    fn check(&self, o: &LocalForm) {
        assert!(CoordSystem::same(&self.cs, &o.cs), "forms over different coordinate systems");
    }

    pub fn add(&self, o: &LocalForm) -> LocalForm {
        self.check(o);
        let mut out = self.clone();
        for (b, f) in &o.terms {
            out.add_term(b.clone(), f);
        }
        out
    }

    pub fn sub(&self, o: &LocalForm) -> LocalForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LocalForm {
        self.map_coeffs(|f| -f)
    }

    pub fn scale(&self, c: &Rational) -> LocalForm {
        self.map_coeffs(|f| f.scale(c))
    }

    /// Multiplication by a function.
    pub fn mul_expr(&self, g: &Expr) -> LocalForm {
        self.map_coeffs(|f| f * g)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Expr) -> Expr) -> LocalForm {
        let mut out = LocalForm::zero(&self.cs);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), &f(c));
        }
        out
    }

    pub fn wedge(&self, o: &LocalForm) -> LocalForm {
        self.check(o);
        let mut out = LocalForm::zero(&self.cs);
        for (b1, f1) in &self.terms {
            for (b2, f2) in &o.terms {
                let mut gens = b1.gens();
                gens.extend(b2.gens());
                out.add_gens(gens, &(f1 * f2));
            }
        }
        out
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms.keys().map(Basis::bidegree).collect()
    }

    /// The bidegree when homogeneous and nonzero.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let b = self.bidegrees();
        (b.len() == 1).then(|| *b.iter().next().unwrap())
    }

    pub fn has_bidegree(&self, p: usize, q: usize) -> bool {
        self.terms.keys().all(|b| b.bidegree() == (p, q))
    }

    pub fn component(&self, p: usize, q: usize) -> LocalForm {
        self.filter(|b| b.bidegree() == (p, q))
    }

    pub fn total_degree_component(&self, n: usize) -> LocalForm {
        self.filter(|b| b.vert.len() + b.horiz.len() == n)
    }

    fn filter(&self, keep: impl Fn(&Basis) -> bool) -> LocalForm {
        LocalForm {
            cs: self.cs.clone(),
            terms: self.terms.iter().filter(|(b, _)| keep(b)).map(|(b, f)| (b.clone(), f.clone())).collect(),
        }
    }

    /// Components grouped by depth.
    pub fn depth_split(&self) -> BTreeMap<usize, LocalForm> {
        let m = self.m();
        let mut out: BTreeMap<usize, LocalForm> = BTreeMap::new();
        for (b, f) in &self.terms {
            let (p, q) = b.bidegree();
            out.entry(depth(p, q, m)).or_insert_with(|| LocalForm::zero(&self.cs)).add_term(b.clone(), f);
        }
        out
    }

    /// Depth-0 part.
    pub fn surface(&self) -> LocalForm {
        let m = self.m();
        self.filter(|b| depth(b.vert.len(), b.horiz.len(), m) == 0)
    }

    pub fn max_jet_order(&self) -> usize {
        self.terms
            .iter()
            .map(|(b, f)| {
                let g = b.vert.iter().map(|(_, i)| i.len()).max().unwrap_or(0);
                g.max(f.max_jet_order())
            })
            .max()
            .unwrap_or(0)
    }

    /// `δ`: derivation with `δf = ∂f/∂u_J^α δu_J^α` killing all generators.
    pub fn d_v(&self) -> LocalForm {
        let mut out = LocalForm::zero(&self.cs);
        for (b, f) in &self.terms {
            for a in f.jet_atoms() {
                if let crate::expr::Atom::Jet(al, idx) = &a {
                    let g = f.partial(&a);
                    let mut gens = vec![Gen::Vert(*al, idx.clone())];
                    gens.extend(b.gens());
                    out.add_gens(gens, &g);
                }
            }
        }
        out
    }

    /// `d`: derivation with `d f = D_i f dx^i`, `d δu_I = −δu_{I·i} ∧ dx^i`,
    /// `d dx^i = 0`.
    pub fn d_h(&self) -> LocalForm {
        let m = self.m();
        let mut out = LocalForm::zero(&self.cs);
        for (b, f) in &self.terms {
            let gens = b.gens();
            for i in 0..m {
                if b.horiz.contains(&i) {
                    continue;
                }
                let df = total_derivative(f, i);
                let mut w = vec![Gen::Horiz(i)];
                w.extend(gens.iter().cloned());
                out.add_gens(w, &df);
                for (k, (al, idx)) in b.vert.iter().enumerate() {
                    // sign (−1)^k from passing k odd generators, times −1
                    let sgn = if k % 2 == 0 { -f } else { f.clone() };
                    let mut w = gens[..k].to_vec();
                    w.push(Gen::Vert(*al, idx.with(i)));
                    w.push(Gen::Horiz(i));
                    w.extend(gens[k + 1..].iter().cloned());
                    out.add_gens(w, &sgn);
                }
            }
        }
        out
    }

    /// `D = δ + d`
    pub fn d_total(&self) -> LocalForm {
        self.d_v().add(&self.d_h())
    }

    fn contract(&self, mut pairing: impl FnMut(&Gen) -> Expr) -> LocalForm {
        let mut out = LocalForm::zero(&self.cs);
        for (b, f) in &self.terms {
            let gens = b.gens();
            for (k, g) in gens.iter().enumerate() {
                let c = pairing(g);
                if c.is_zero() {
                    continue;
                }
                let coeff = &c * f;
                let mut rest = gens.clone();
                rest.remove(k);
                let Some((_, nb)) = Basis::normalize(rest) else { continue };
                out.add_term(nb, &if k % 2 == 0 { coeff } else { -coeff });
            }
        }
        out
    }

    /// Left insertion of `pr ξ`.
    pub fn insert_ev(&self, xi: &EvolutionaryVF) -> LocalForm {
        let mut pr = Prolongation::new(xi);
        self.contract(|g| match g {
            Gen::Vert(a, idx) => pr.coefficient(*a, idx),
            Gen::Horiz(_) => Expr::zero(),
        })
    }

    /// Left insertion of a total vector field.
    pub fn insert_tot(&self, x: &TotalVF) -> LocalForm {
        self.contract(|g| match g {
            Gen::Horiz(i) => x.x.get(*i).cloned().unwrap_or_else(Expr::zero),
            Gen::Vert(..) => Expr::zero(),
        })
    }

    /// Left insertion of an insular vector field.
    pub fn insert(&self, chi: &InsularVF) -> LocalForm {
        let mut pr = Prolongation::new(&chi.ev);
        self.contract(|g| match g {
            Gen::Vert(a, idx) => pr.coefficient(*a, idx),
            Gen::Horiz(i) => chi.tot.x.get(*i).cloned().unwrap_or_else(Expr::zero),
        })
    }

    /// `ι_{χ_1} ⋯ ι_{χ_n}`, the last field inserted first.
    pub fn insert_multi(&self, chis: &[InsularVF]) -> LocalForm {
        chis.iter().rev().fold(self.clone(), |acc, c| acc.insert(c))
    }

    /// Left contraction with the coordinate field `∂/∂u_I^α`.
    pub fn contract_vertical(&self, a: usize, idx: &MultiIndex) -> LocalForm {
        self.contract(|g| match g {
            Gen::Vert(b, j) if *b == a && j == idx => Expr::one(),
            _ => Expr::zero(),
        })
    }

    /// Lie derivative along the total derivative `D_i`: coefficients get
    /// `D_i`, `δu_I` goes to `δu_{I·i}`, `dx^j` is fixed.
    pub fn lie_total_coordinate(&self, i: usize) -> LocalForm {
        let mut out = LocalForm::zero(&self.cs);
        for (b, f) in &self.terms {
            let gens = b.gens();
            out.add_gens(gens.clone(), &total_derivative(f, i));
            for (k, (al, idx)) in b.vert.iter().enumerate() {
                let mut w = gens.clone();
                w[k] = Gen::Vert(*al, idx.with(i));
                out.add_gens(w, f);
            }
        }
        out
    }

    /// `D_I` acting through [`LocalForm::lie_total_coordinate`].
    pub fn lie_total_multi(&self, idx: &MultiIndex) -> LocalForm {
        idx.entries().iter().fold(self.clone(), |acc, &i| acc.lie_total_coordinate(i))
    }

    /// `L_χ = [D, ι_χ]`
    pub fn lie(&self, chi: &InsularVF) -> LocalForm {
        self.insert(chi).d_total().add(&self.d_total().insert(chi))
    }

    /// `L_ξ = [δ, ι_ξ]`
    pub fn lie_ev(&self, xi: &EvolutionaryVF) -> LocalForm {
        self.insert_ev(xi).d_v().add(&self.d_v().insert_ev(xi))
    }

    /// `L^d_χ = [d, ι_χ]`
    pub fn lie_d(&self, chi: &InsularVF) -> LocalForm {
        self.insert(chi).d_h().add(&self.d_h().insert(chi))
    }

    /// `M_χ = [δ, L^d_χ]`
    pub fn m_op(&self, chi: &InsularVF) -> LocalForm {
        self.lie_d(chi).d_v().sub(&self.d_v().lie_d(chi))
    }

    pub fn display(&self) -> FormDisplay<'_> {
        FormDisplay { f: self, latex: false }
    }

    pub fn latex(&self) -> FormDisplay<'_> {
        FormDisplay { f: self, latex: true }
    }

    pub fn to_text(&self) -> String {
        self.display().to_string()
    }

    /// Coefficient of `Vol` in a top horizontal form.
    pub fn top_coefficient(&self) -> Expr {
        self.coefficient(&Basis::volume(self.m()))
    }

    /// Components `E_α` of a source form `E_α δu^α ∧ Vol`.
    pub fn source_components(&self) -> Vec<Expr> {
        let m = self.m();
        (0..self.cs.e())
            .map(|a| {
                self.coefficient(&Basis { vert: vec![(a, MultiIndex::empty())], horiz: (0..m).collect() })
            })
            .collect()
    }

    /// Components `P_j` of a `(0, m−1)`-form `Σ P_j ι_{D_j} Vol`.
    pub fn current_components(&self) -> Vec<Expr> {
        let m = self.m();
        (0..m)
            .map(|j| {
                let horiz: Vec<usize> = (0..m).filter(|&k| k != j).collect();
                let c = self.coefficient(&Basis { vert: Vec::new(), horiz });
                // ι_{D_j} Vol = (−1)^j Vol^j
                if j % 2 == 0 {
                    c
                } else {
                    -&c
                }
            })
            .collect()
    }

    /// `Σ P_j ι_{D_j} Vol`
    pub fn from_current_components(cs: &Arc<CoordSystem>, p: &[Expr]) -> LocalForm {
        let mut out = LocalForm::zero(cs);
        for (j, pj) in p.iter().enumerate() {
            out = out.add(&LocalForm::vol_contracted(cs, j).mul_expr(pj));
        }
        out
    }
}

pub struct FormDisplay<'a> {
    f: &'a LocalForm,
    latex: bool,
}

impl FormDisplay<'_> {
    fn word(&self, b: &Basis) -> String {
        let cs = &self.f.cs;
        let mut parts = Vec::new();
        for (a, idx) in &b.vert {
            if self.latex {
                let sub: String = idx.entries().iter().map(|&i| cs.base_name(i)).collect();
                if sub.is_empty() {
                    parts.push(format!("\\delta {}", cs.fiber_name(*a)));
                } else {
                    parts.push(format!("\\delta {}_{{{}}}", cs.fiber_name(*a), sub));
                }
            } else {
                parts.push(format!("del({})", cs.jet_name(*a, idx)));
            }
        }
        for &i in &b.horiz {
            if self.latex {
                parts.push(format!("d{}", cs.base_name(i)));
            } else {
                parts.push(format!("dx({})", cs.base_name(i)));
            }
        }
        parts.join(if self.latex { " \\wedge " } else { " /\\ " })
    }
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_zero() {
            return write!(f, "0");
        }
        let cs = &self.f.cs;
        let mut first = true;
        for (b, c) in &self.f.terms {
            let word = self.word(b);
            let coeff = if self.latex { c.latex(cs).to_string() } else { c.to_text(cs) };
            let single = c.num_terms() == 1;
            let (neg, body) = match c.as_constant() {
                Some(k) if word.is_empty() => (k.is_negative(), fmt_rational(&k.abs())),
                Some(k) if k.abs().is_one() => (k.is_negative(), word.clone()),
                Some(k) => {
                    let sep = if self.latex { " " } else { " * " };
                    (k.is_negative(), format!("{}{sep}{word}", fmt_rational(&k.abs())))
                }
                None if word.is_empty() => (false, if first || single { coeff.clone() } else { format!("({coeff})") }),
                None => {
                    let sep = if self.latex { " \\, " } else { " * " };
                    (false, format!("({coeff}){sep}{word}"))
                }
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
            } else {
                write!(f, " {} {body}", if neg { "-" } else { "+" })?;
            }
            first = false;
        }
        Ok(())
    }
}

/// `ι_{χ} ι_{χ'} ω` helper used throughout.
pub fn insert2(w: &LocalForm, a: &InsularVF, b: &InsularVF) -> LocalForm {
    w.insert(b).insert(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::int;

    fn setup() -> Arc<CoordSystem> {
        Arc::new(CoordSystem::new(&["x", "t"], &["u"]).unwrap())
    }

    fn u(idx: &[usize]) -> Expr {
        Expr::jet(0, idx)
    }

    #[test]
    fn wedge_signs() {
        let cs = setup();
        let dx = LocalForm::dx(&cs, 0);
        assert!(dx.wedge(&dx).is_zero());
        let du = LocalForm::delta(&cs, 0, MultiIndex::empty());
        assert_eq!(du.wedge(&dx), dx.wedge(&du).neg());
        let a = du.mul_expr(&u(&[]));
        let b = dx.mul_expr(&u(&[0]));
        assert_eq!(a.wedge(&b), du.wedge(&dx).mul_expr(&(&u(&[]) * &u(&[0]))));
    }

    #[test]
    fn vertical_differential() {
        let cs = setup();
        let f = LocalForm::function(&cs, u(&[0]));
        assert_eq!(f.d_v(), LocalForm::delta(&cs, 0, MultiIndex::single(0)));
        assert!(LocalForm::function(&cs, Expr::base(0)).d_v().is_zero());
        let sq = LocalForm::function(&cs, u(&[]).pow(2));
        assert_eq!(sq.d_v(), LocalForm::delta(&cs, 0, MultiIndex::empty()).mul_expr(&u(&[]).scale(&int(2))));
    }

    #[test]
    fn horizontal_differential() {
        let cs = setup();
        let f = LocalForm::function(&cs, u(&[]));
        let expected = LocalForm::dx(&cs, 0).mul_expr(&u(&[0])).add(&LocalForm::dx(&cs, 1).mul_expr(&u(&[1])));
        assert_eq!(f.d_h(), expected);
        assert!(LocalForm::dx(&cs, 0).d_h().is_zero());
        let du = LocalForm::delta(&cs, 0, MultiIndex::empty());
        let expected = LocalForm::delta(&cs, 0, MultiIndex::single(0))
            .wedge(&LocalForm::dx(&cs, 0))
            .add(&LocalForm::delta(&cs, 0, MultiIndex::single(1)).wedge(&LocalForm::dx(&cs, 1)))
            .neg();
        assert_eq!(du.d_h(), expected);
    }

    #[test]
    fn total_differential() {
        let cs = setup();
        let x = Expr::base(0);
        let f = LocalForm::function(&cs, &x * &u(&[]));
        let expected = LocalForm::dx(&cs, 0)
            .mul_expr(&u(&[]))
            .add(&LocalForm::dx(&cs, 0).mul_expr(&(&x * &u(&[0]))))
            .add(&LocalForm::dx(&cs, 1).mul_expr(&(&x * &u(&[1]))))
            .add(&LocalForm::delta(&cs, 0, MultiIndex::empty()).mul_expr(&x));
        assert_eq!(f.d_total(), expected);
        assert!(f.d_total().d_total().is_zero());
        assert!(LocalForm::function(&cs, Expr::int(3)).d_total().is_zero());
    }

    #[test]
    fn insertion_examples() {
        let cs = setup();
        let f = u(&[0, 1]);
        let w = LocalForm::top(&cs, f.clone());
        assert_eq!(w.insert_tot(&TotalVF::coordinate(&cs, 0)), LocalForm::dx(&cs, 1).mul_expr(&f));
        let xi = EvolutionaryVF::new(vec![u(&[]).pow(2)]);
        let dux = LocalForm::delta(&cs, 0, MultiIndex::single(0));
        assert_eq!(dux.insert_ev(&xi), LocalForm::function(&cs, (&u(&[]) * &u(&[0])).scale(&int(2))));
        assert!(dux.insert_tot(&TotalVF::coordinate(&cs, 0)).is_zero());
    }

    #[test]
    fn lie_examples() {
        let cs = setup();
        let xi = EvolutionaryVF::new(vec![&u(&[0]) * &Expr::base(1)]);
        let chi = xi.to_insular(&cs);
        let f = LocalForm::function(&cs, u(&[]));
        assert_eq!(f.lie(&chi), LocalForm::function(&cs, xi.xi[0].clone()));
        let idx = MultiIndex::new(vec![0, 1]);
        let du = LocalForm::delta(&cs, 0, idx.clone());
        let expected = LocalForm::function(&cs, xi.prolong_coefficient(0, &idx)).d_v();
        assert_eq!(du.lie(&chi), expected);
        let g = u(&[1]).pow(2);
        let w = LocalForm::dx(&cs, 1).mul_expr(&g);
        let dx = TotalVF::coordinate(&cs, 0).to_insular(&cs);
        assert_eq!(w.lie(&dx), LocalForm::dx(&cs, 1).mul_expr(&total_derivative(&g, 0)));
    }

    #[test]
    fn depth_convention() {
        assert_eq!(depth(0, 2, 2), 0);
        assert_eq!(depth(1, 2, 2), 0);
        assert_eq!(depth(1, 1, 2), 1);
        assert_eq!(depth(2, 1, 2), 1);
        assert_eq!(depth(2, 0, 2), 2);
    }
}
