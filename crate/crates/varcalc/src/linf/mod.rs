//! The L∞-algebra of local observables of a Lagrangian, the deformed bracket
//! of Hamiltonian pairs, and the finite-dimensional graded kernel.

pub mod graded;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ansatz::Bounds;
use crate::error::Error;
use crate::euler::invert_d_h;
use crate::expr::{int, CoordSystem};
use crate::form::LocalForm;
use crate::jet::{bracket_insular, InsularVF};
use crate::noether::{check_hamiltonian_pair, HamiltonianPair};
use crate::variational::FundamentalData;

pub use graded::{
    decalage_inverse, decalage_sign, decalage_transport, jacobiator, koszul_sign, nonzero_jacobiators, unshuffles,
    BracketFamily, Convention, GradedSpace,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Pair(HamiltonianPair),
    Form(LocalForm),
}

/// Element of `L_n`: a Hamiltonian pair in degree 1, a form of total degree
/// `m − n` otherwise. Images of `l₁` may land in degrees `≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservableElement {
    pub degree: i64,
    pub payload: Payload,
}

fn total_degree_is(w: &LocalForm, k: i64) -> bool {
    w.terms().all(|(b, _)| (b.vert.len() + b.horiz.len()) as i64 == k)
}

impl ObservableElement {
    pub fn pair(p: HamiltonianPair) -> Self {
        ObservableElement { degree: 1, payload: Payload::Pair(p) }
    }

    /// A form in degree `n ≥ 2`; it must have total degree `m − n`.
    pub fn form(n: usize, w: LocalForm) -> Result<Self, Error> {
        let m = w.m() as i64;
        if n < 2 || !total_degree_is(&w, m - n as i64) {
            return Err(Error::Bidegree(format!("degree-{n} observables are forms of total degree {}", m - n as i64)));
        }
        Ok(ObservableElement { degree: n as i64, payload: Payload::Form(w) })
    }

    pub fn zero(cs: &Arc<CoordSystem>, degree: i64) -> Self {
        let payload = if degree <= 1 {
            Payload::Pair(HamiltonianPair { chi: InsularVF::zero(cs), zeta: LocalForm::zero(cs) })
        } else {
            Payload::Form(LocalForm::zero(cs))
        };
        ObservableElement { degree, payload }
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Pair(p) => p.chi.is_zero() && p.zeta.is_zero(),
            Payload::Form(w) => w.is_zero(),
        }
    }

    pub fn form_part(&self) -> &LocalForm {
        match &self.payload {
            Payload::Pair(p) => &p.zeta,
            Payload::Form(w) => w,
        }
    }

    pub fn as_degree_one_pair(&self) -> Option<&HamiltonianPair> {
        match &self.payload {
            Payload::Pair(p) if self.degree == 1 => Some(p),
            _ => None,
        }
    }

    fn coords(&self) -> &Arc<CoordSystem> {
        self.form_part().coords()
    }

    /// Sum of two elements of the same degree.
    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        if self.degree != o.degree {
            return Err(Error::Contract(format!("adding degrees {} and {}", self.degree, o.degree)));
        }
        let payload = match (&self.payload, &o.payload) {
            (Payload::Pair(a), Payload::Pair(b)) => {
                Payload::Pair(HamiltonianPair { chi: a.chi.add(&b.chi), zeta: a.zeta.add(&b.zeta) })
            }
            (Payload::Form(a), Payload::Form(b)) => Payload::Form(a.add(b)),
            _ => return Err(Error::Contract("adding a pair to a form".into())),
        };
        Ok(ObservableElement { degree: self.degree, payload })
    }

    pub fn neg(&self) -> Self {
        let payload = match &self.payload {
            Payload::Pair(p) => Payload::Pair(HamiltonianPair { chi: p.chi.neg(), zeta: p.zeta.neg() }),
            Payload::Form(w) => Payload::Form(w.neg()),
        };
        ObservableElement { degree: self.degree, payload }
    }
}

fn require_pair(p: &HamiltonianPair, fd: &FundamentalData) -> Result<(), Error> {
    if check_hamiltonian_pair(p, fd).passed() {
        Ok(())
    } else {
        Err(Error::InvalidPair("D zeta differs from i_chi omega".into()))
    }
}

/// `l₁ = −D`; a pair `(χ, ζ)` goes to `(0, −D ζ)`.
pub fn l1(v: &ObservableElement) -> ObservableElement {
    let cs = v.coords();
    let w = v.form_part().d_total().neg();
    let degree = v.degree - 1;
    let payload = match &v.payload {
        Payload::Form(_) if degree >= 2 => Payload::Form(w),
        _ => Payload::Pair(HamiltonianPair { chi: InsularVF::zero(cs), zeta: w }),
    };
    ObservableElement { degree, payload }
}

/// `l_n(v_1, …, v_n) = ι_{χ_1 ⋯ χ_n} ω` on degree-one pairs, zero otherwise;
/// for `n = 2` the result is the pair `([χ_1, χ_2], ι_{χ_1} ι_{χ_2} ω)`.
pub fn ln_bracket(args: &[&ObservableElement], fd: &FundamentalData) -> Result<ObservableElement, Error> {
    let n = args.len();
    if n < 2 {
        return Err(Error::Contract("l_n needs at least two arguments".into()));
    }
    let cs = fd.lagrangian.coords();
    let degree = args.iter().map(|a| a.degree).sum::<i64>() - 1;
    let Some(pairs) = args.iter().map(|a| a.as_degree_one_pair()).collect::<Option<Vec<_>>>() else {
        return Ok(ObservableElement::zero(cs, degree));
    };
    for p in &pairs {
        require_pair(p, fd)?;
    }
    let chis: Vec<InsularVF> = pairs.iter().map(|p| p.chi.clone()).collect();
    let w = fd.omega.insert_multi(&chis);
    Ok(if n == 2 {
        ObservableElement::pair(HamiltonianPair { chi: bracket_insular(&chis[0], &chis[1]), zeta: w })
    } else {
        ObservableElement { degree, payload: Payload::Form(w) }
    })
}

/// `l₂` of two Hamiltonian pairs.
pub fn l2_pairs(p: &HamiltonianPair, q: &HamiltonianPair, fd: &FundamentalData) -> Result<HamiltonianPair, Error> {
    let a = ObservableElement::pair(p.clone());
    let b = ObservableElement::pair(q.clone());
    match ln_bracket(&[&a, &b], fd)?.payload {
        Payload::Pair(r) => Ok(r),
        Payload::Form(_) => unreachable!("l2 of pairs is a pair"),
    }
}

/// `D(ι_{χ_1} ι_{χ_2} ω) − ι_{[χ_1, χ_2]} ω`
pub fn l2_hamiltonian_residual(p: &HamiltonianPair, q: &HamiltonianPair, fd: &FundamentalData) -> Result<LocalForm, Error> {
    let r = l2_pairs(p, q, fd)?;
    Ok(r.zeta.d_total().sub(&fd.omega.insert(&r.chi)))
}

/// `[ζ, η] = L_ξ η − L_υ ζ − ι_ξ ι_υ ω + ι_X ι_Y ω`
pub fn deformed_bracket(p: &HamiltonianPair, q: &HamiltonianPair, fd: &FundamentalData) -> Result<LocalForm, Error> {
    require_pair(p, fd)?;
    require_pair(q, fd)?;
    let (xi, x) = (&p.chi.ev, &p.chi.tot);
    let (up, y) = (&q.chi.ev, &q.chi.tot);
    Ok(q.zeta
        .lie_ev(xi)
        .sub(&p.zeta.lie_ev(up))
        .sub(&fd.omega.insert_ev(up).insert_ev(xi))
        .add(&fd.omega.insert_tot(y).insert_tot(x)))
}

fn depth_parts(w: &LocalForm) -> BTreeMap<usize, LocalForm> {
    w.depth_split()
}

fn part(parts: &BTreeMap<usize, LocalForm>, k: usize, cs: &Arc<CoordSystem>) -> LocalForm {
    parts.get(&k).cloned().unwrap_or_else(|| LocalForm::zero(cs))
}

/// The deformed bracket assembled depth by depth:
/// `[ζ,η]₀ = L_ξ H − L_υ Z − ι_ξ ι_υ ω₁`,
/// `[ζ,η]₁ = L_ξ η₁ − L_υ ζ₁ + ι_X ι_Y EL`,
/// `[ζ,η]₂ = L_ξ η₂ − L_υ ζ₂ + ι_X ι_Y ω₁`,
/// `[ζ,η]_i = L_ξ η_i − L_υ ζ_i` beyond.
pub fn deformed_bracket_by_depth(
    p: &HamiltonianPair,
    q: &HamiltonianPair,
    fd: &FundamentalData,
) -> Result<BTreeMap<usize, LocalForm>, Error> {
    require_pair(p, fd)?;
    require_pair(q, fd)?;
    let cs = fd.lagrangian.coords();
    let (xi, x) = (&p.chi.ev, &p.chi.tot);
    let (up, y) = (&q.chi.ev, &q.chi.tot);
    let zs = depth_parts(&p.zeta);
    let hs = depth_parts(&q.zeta);
    let top = zs.keys().chain(hs.keys()).copied().max().unwrap_or(0).max(2);
    let mut out = BTreeMap::new();
    for k in 0..=top {
        let mut w = part(&hs, k, cs).lie_ev(xi).sub(&part(&zs, k, cs).lie_ev(up));
        match k {
            0 => w = w.sub(&fd.omega1.insert_ev(up).insert_ev(xi)),
            1 => w = w.add(&fd.el.insert_tot(y).insert_tot(x)),
            2 => w = w.add(&fd.omega1.insert_tot(y).insert_tot(x)),
            _ => {}
        }
        if !w.is_zero() {
            out.insert(k, w);
        }
    }
    Ok(out)
}

/// Difference between the deformed bracket and its depth-wise formulas.
pub fn deformed_bracket_depth_residual(
    p: &HamiltonianPair,
    q: &HamiltonianPair,
    fd: &FundamentalData,
) -> Result<LocalForm, Error> {
    let whole = deformed_bracket(p, q, fd)?;
    let parts = deformed_bracket_by_depth(p, q, fd)?;
    Ok(parts.values().fold(whole, |acc, w| acc.sub(w)))
}

/// `D [ζ, η] − ι_{[χ_1, χ_2]} ω`
pub fn deformed_bracket_hamiltonian_residual(
    p: &HamiltonianPair,
    q: &HamiltonianPair,
    fd: &FundamentalData,
) -> Result<LocalForm, Error> {
    let b = deformed_bracket(p, q, fd)?;
    Ok(b.d_total().sub(&fd.omega.insert(&bracket_insular(&p.chi, &q.chi))))
}

fn depth_one(w: &LocalForm) -> LocalForm {
    let cs = w.coords();
    part(&depth_parts(w), 1, cs)
}

/// `[ζ,η]₀ − l₂(ζ,η)₀ − d(ι_ξ η₁ − ι_υ ζ₁)` on the surface.
pub fn surface_relation_residual(p: &HamiltonianPair, q: &HamiltonianPair, fd: &FundamentalData) -> Result<LocalForm, Error> {
    let b = deformed_bracket(p, q, fd)?.surface();
    let l = l2_pairs(p, q, fd)?.zeta.surface();
    let g = depth_one(&q.zeta).insert_ev(&p.chi.ev).sub(&depth_one(&p.zeta).insert_ev(&q.chi.ev));
    Ok(b.sub(&l).sub(&g.d_h()))
}

/// Some `α` of total degree `m − 2` with `D α = l₂(ζ, η) − [ζ, η]`. The
/// surface part is `ι_υ ζ₁ − ι_ξ η₁`; deeper parts come from inverting `d`.
pub fn d_exact_difference(
    p: &HamiltonianPair,
    q: &HamiltonianPair,
    fd: &FundamentalData,
    bounds: Option<Bounds>,
) -> Result<LocalForm, Error> {
    let cs = fd.lagrangian.coords();
    let m = cs.m();
    let diff = l2_pairs(p, q, fd)?.zeta.sub(&deformed_bracket(p, q, fd)?);
    let mut alpha = LocalForm::zero(cs);
    if m >= 2 {
        let mut prev = depth_one(&p.zeta).insert_ev(&q.chi.ev).sub(&depth_one(&q.zeta).insert_ev(&p.chi.ev));
        alpha = prev.clone();
        for k in 1..=m - 2 {
            let target = diff.component(k, m - 1 - k).sub(&prev.d_v());
            let b = bounds.unwrap_or_else(|| Bounds::default_for(&target));
            prev = invert_d_h(&target, b)?;
            alpha = alpha.add(&prev);
        }
    }
    if alpha.d_total() != diff {
        return Err(Error::Contract("D alpha does not replay l2 minus the deformed bracket".into()));
    }
    Ok(alpha)
}

/// `d_CE(X_1, …, X_n) = Σ_{σ ∈ Sh(2, n−2)} ε(σ) [X_σ(1), X_σ(2)] ∧ X_σ(3) ∧ ⋯`
/// as signed lists of fields.
pub fn ce_differential(xs: &[InsularVF]) -> Vec<(i64, Vec<InsularVF>)> {
    let n = xs.len();
    if n < 2 {
        return Vec::new();
    }
    let odd = vec![1; n];
    unshuffles(2, n - 2)
        .into_iter()
        .map(|s| {
            let mut fields = vec![bracket_insular(&xs[s[0]], &xs[s[1]])];
            fields.extend(s[2..].iter().map(|&k| xs[k].clone()));
            (koszul_sign(&s, &odd), fields)
        })
        .collect()
}

/// `ι` of a signed combination of multivector fields.
pub fn insert_multivector(w: &LocalForm, mv: &[(i64, Vec<InsularVF>)]) -> LocalForm {
    mv.iter().fold(LocalForm::zero(w.coords()), |acc, (s, fields)| {
        let t = w.insert_multi(fields);
        acc.add(&t.scale(&int(*s)))
    })
}

/// `D ι_{X_1 ⋯ X_n} ω − ι_{d_CE(X_1, …, X_n)} ω` for symplectic `X_i`.
pub fn insertion_cochain_check(xs: &[InsularVF], omega: &LocalForm) -> Result<LocalForm, Error> {
    for (k, x) in xs.iter().enumerate() {
        if !omega.insert(x).d_total().is_zero() {
            return Err(Error::NotSymplectic(format!("field {} has D i_X omega != 0", k + 1)));
        }
    }
    Ok(omega.insert_multi(xs).d_total().sub(&insert_multivector(omega, &ce_differential(xs))))
}

fn bracket(args: &[&ObservableElement], fd: &FundamentalData) -> Result<ObservableElement, Error> {
    if args.len() == 1 {
        Ok(l1(args[0]))
    } else {
        ln_bracket(args, fd)
    }
}

/// The `n`-th Jacobiator of `{l_k}` on observables; the Koszul signs use the
/// internal degree `1 − n` of an element of `L_n`.
pub fn observable_jacobiator(args: &[ObservableElement], fd: &FundamentalData) -> Result<ObservableElement, Error> {
    let n = args.len();
    let degs: Vec<i64> = args.iter().map(|a| 1 - a.degree).collect();
    let cs = fd.lagrangian.coords();
    let mut acc: Option<ObservableElement> = None;
    for i in 1..=n {
        let j = n + 1 - i;
        for s in unshuffles(i, j - 1) {
            let sign = koszul_sign(&s, &degs) * koszul_sign(&s, &vec![1; n]) * if (j * (i - 1)).is_multiple_of(2) { 1 } else { -1 };
            let x: Vec<&ObservableElement> = s.iter().map(|&k| &args[k]).collect();
            let inner = bracket(&x[..i], fd)?;
            let mut outer_args = vec![&inner];
            outer_args.extend_from_slice(&x[i..]);
            let mut t = bracket(&outer_args, fd)?;
            if sign < 0 {
                t = t.neg();
            }
            acc = Some(match acc {
                None => t,
                Some(a) if a.is_zero() && a.degree == t.degree => t,
                Some(a) if t.is_zero() => a,
                Some(a) => a.add(&t)?,
            });
        }
    }
    Ok(acc.unwrap_or_else(|| ObservableElement::zero(cs, 0)))
}

/// Arity-three Jacobiator on Hamiltonian pairs with a `D`-primitive of its
/// form part, when one is found among `0` and `±ι_{χ_1 χ_2 χ_3} ω`.
#[derive(Clone, Debug)]
pub struct PairJacobiator {
    pub vector: InsularVF,
    pub form: LocalForm,
    pub witness: Option<LocalForm>,
}

impl PairJacobiator {
    pub fn is_zero(&self) -> bool {
        self.vector.is_zero() && self.form.is_zero()
    }

    pub fn is_d_exact(&self) -> bool {
        self.vector.is_zero() && self.witness.is_some()
    }
}

pub fn pair_jacobiator(ps: [&HamiltonianPair; 3], fd: &FundamentalData) -> Result<PairJacobiator, Error> {
    let args: Vec<ObservableElement> = ps.iter().map(|p| ObservableElement::pair((*p).clone())).collect();
    let j = observable_jacobiator(&args, fd)?;
    let (vector, form) = match j.payload {
        Payload::Pair(p) => (p.chi, p.zeta),
        Payload::Form(w) => (InsularVF::zero(fd.lagrangian.coords()), w),
    };
    let chis: Vec<InsularVF> = ps.iter().map(|p| p.chi.clone()).collect();
    let i3 = fd.omega.insert_multi(&chis);
    let witness = [LocalForm::zero(fd.lagrangian.coords()), i3.clone(), i3.neg()]
        .into_iter()
        .find(|w| w.d_total() == form);
    Ok(PairJacobiator { vector, form, witness })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::noether::find_hamiltonian_form;
    use crate::parse::parse_vector_field;
    use crate::random::{self, Shape};
    use crate::variational::{harmonic_oscillator, isotropic_oscillator, wave_equation, Theory};

    fn pairs(t: &Theory, fields: &[&str]) -> (FundamentalData, Vec<HamiltonianPair>) {
        let fd = FundamentalData::new(&t.lagrangian).unwrap();
        let ps = fields
            .iter()
            .map(|f| {
                let chi = parse_vector_field(&t.coords, f).unwrap();
                let zeta = find_hamiltonian_form(&chi, &fd, None).unwrap();
                HamiltonianPair { chi, zeta }
            })
            .collect();
        (fd, ps)
    }

    const WAVE: [&str; 4] =
        ["ins{ev{u: -u_t}, tot{t: 1}}", "ins{ev{u: -u_x}, tot{x: 1}}", "ev{u: 1}", "ins{ev{u: -t*u_x - x*u_t}, tot{x: t, t: x}}"];

    #[test]
    fn l1_on_pairs_and_forms() {
        let t = harmonic_oscillator();
        let (fd, ps) = pairs(&t, &["ins{ev{q: -q_t}, tot{t: 1}}"]);
        let v = ObservableElement::pair(ps[0].clone());
        let w = l1(&v);
        assert_eq!(w.degree, 0);
        assert_eq!(w.as_degree_one_pair(), None);
        let Payload::Pair(p) = &w.payload else { panic!() };
        assert!(p.chi.is_zero());
        assert_eq!(p.zeta, fd.omega.insert(&ps[0].chi).neg());
        assert!(l1(&w).is_zero());

        let cs = wave_equation().coords;
        let mut r = random::rng(3);
        for _ in 0..5 {
            let f = random::form(&mut r, &cs, 0, 0, Shape::new(2, 3, 3));
            let v = ObservableElement::form(2, f.clone()).unwrap();
            let w = l1(&v);
            assert_eq!(w.degree, 1);
            assert_eq!(w.form_part(), &f.d_total().neg());
            assert!(l1(&w).is_zero());
        }
        assert!(ObservableElement::form(2, LocalForm::dx(&cs, 0)).is_err());
    }

    #[test]
    fn higher_brackets() {
        let t = harmonic_oscillator();
        let (fd, ps) = pairs(&t, &["ins{ev{q: -q_t}, tot{t: 1}}"]);
        let v = ObservableElement::pair(ps[0].clone());
        assert!(ln_bracket(&[&v, &v], &fd).unwrap().is_zero());

        let w = wave_equation();
        let (fd, ps) = pairs(&w, &WAVE);
        let a = ObservableElement::pair(ps[0].clone());
        let f = ObservableElement::form(2, LocalForm::function(&w.coords, crate::expr::Expr::jet(0, &[]))).unwrap();
        let z = ln_bracket(&[&a, &f], &fd).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree, 2);
        for p in &ps {
            for q in &ps {
                assert!(l2_hamiltonian_residual(p, q, &fd).unwrap().is_zero());
            }
        }
        let bad = HamiltonianPair { chi: ps[0].chi.clone(), zeta: ps[1].zeta.clone() };
        assert!(matches!(l2_pairs(&bad, &ps[0], &fd), Err(Error::InvalidPair(_))));
    }

    #[test]
    fn deformed_bracket_identities() {
        for (t, fields) in [
            (wave_equation(), WAVE.to_vec()),
            (isotropic_oscillator(), vec!["ins{ev{q1: -q1_t, q2: -q2_t}, tot{t: 1}}", "ev{q1: -q2, q2: q1}"]),
        ] {
            let (fd, ps) = pairs(&t, &fields);
            for p in &ps {
                assert!(deformed_bracket(p, p, &fd).unwrap().is_zero());
                assert!(d_exact_difference(p, p, &fd, None).unwrap().is_zero());
                for q in &ps {
                    let b = deformed_bracket(p, q, &fd).unwrap();
                    assert_eq!(deformed_bracket(q, p, &fd).unwrap(), b.neg());
                    assert!(deformed_bracket_depth_residual(p, q, &fd).unwrap().is_zero());
                    assert!(deformed_bracket_hamiltonian_residual(p, q, &fd).unwrap().is_zero());
                    assert!(surface_relation_residual(p, q, &fd).unwrap().is_zero());
                    let alpha = d_exact_difference(p, q, &fd, None).unwrap();
                    assert_eq!(alpha.d_total(), l2_pairs(p, q, &fd).unwrap().zeta.sub(&b));
                }
            }
        }
    }

    #[test]
    fn chevalley_eilenberg_cochain() {
        let (fd, ps) = pairs(&wave_equation(), &WAVE);
        let xs: Vec<InsularVF> = ps.iter().map(|p| p.chi.clone()).collect();
        for a in 0..xs.len() {
            for b in 0..xs.len() {
                assert!(insertion_cochain_check(&[xs[a].clone(), xs[b].clone()], &fd.omega).unwrap().is_zero());
                for c in 0..xs.len() {
                    let triple = [xs[a].clone(), xs[b].clone(), xs[c].clone()];
                    assert!(insertion_cochain_check(&triple, &fd.omega).unwrap().is_zero());
                }
            }
        }
        let (fd, ps) = pairs(
            &isotropic_oscillator(),
            &["ins{ev{q1: -q1_t, q2: -q2_t}, tot{t: 1}}", "ev{q1: -q2, q2: q1}", "ins{ev{q1: -q1_t - q2, q2: -q2_t + q1}, tot{t: 1}}"],
        );
        let xs: Vec<InsularVF> = ps.iter().map(|p| p.chi.clone()).collect();
        assert!(insertion_cochain_check(&xs, &fd.omega).unwrap().is_zero());
        let not_symplectic = parse_vector_field(&isotropic_oscillator().coords, "ev{q1: q1}").unwrap();
        assert!(matches!(insertion_cochain_check(&[not_symplectic], &fd.omega), Err(Error::NotSymplectic(_))));
        assert_eq!(ce_differential(&xs).len(), 3);
    }

    #[test]
    fn arity_three_jacobiator() {
        let (fd, ps) = pairs(&wave_equation(), &WAVE);
        let mut cancellations = 0;
        for (a, b, c) in [(0, 1, 2), (0, 1, 3), (1, 2, 3), (0, 3, 3)] {
            let i3 = fd.omega.insert_multi(&[ps[a].chi.clone(), ps[b].chi.clone(), ps[c].chi.clone()]);
            if !i3.d_total().is_zero() {
                cancellations += 1;
            }
            let j = pair_jacobiator([&ps[a], &ps[b], &ps[c]], &fd).unwrap();
            assert!(j.vector.is_zero());
            assert!(j.is_d_exact(), "{a}{b}{c}: {}", j.form.to_text());
        }
        assert!(cancellations > 0);
        let (fd, ps) = pairs(&isotropic_oscillator(), &["ins{ev{q1: -q1_t, q2: -q2_t}, tot{t: 1}}", "ev{q1: -q2, q2: q1}"]);
        let j = pair_jacobiator([&ps[0], &ps[1], &ps[1]], &fd).unwrap();
        assert!(j.is_zero());
    }
}
