//! Fundamental formulae: `λ₁`, `ω₁ = δλ₁`, the Lepagean form `λ = L + λ₁`
//! and the Poincaré-Cartan form `ω = EL + ω₁`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::Error;
use crate::euler::euler_lagrange;
use crate::expr::{Atom, CoordSystem, Expr, MultiIndex};
use crate::form::LocalForm;
use crate::jet::TotalVF;
use crate::parse::parse_expr;

/// Which global sign made `dλ₁ = EL − δL` hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignBranch {
    Literal,
    Flipped,
}

fn require_lagrangian(l: &LocalForm) -> Result<(), Error> {
    if l.has_bidegree(0, l.m()) {
        Ok(())
    } else {
        Err(Error::Bidegree("Lagrangian must have bidegree (0, m)".into()))
    }
}

/// Fixes the global sign of a candidate `λ₁` by the contract `dλ₁ = EL − δL`.
fn normalize_sign(raw: LocalForm, l: &LocalForm, el: &LocalForm) -> Result<(LocalForm, SignBranch), Error> {
    let target = el.sub(&l.d_v());
    let d = raw.d_h();
    if d == target {
        Ok((raw, SignBranch::Literal))
    } else if d.neg() == target {
        Ok((raw.neg(), SignBranch::Flipped))
    } else {
        Err(Error::Contract(format!(
            "neither sign of the lambda_1 candidate satisfies d lambda_1 = EL - delta L; residual {}",
            d.sub(&target).to_text()
        )))
    }
}

/// `λ₁ = Σ_I Σ_j δu_{J_I(j)} ∧ (−1)^{|K_I(j)|} D_{K_I(j)}((−1)^m ι_{∂_I} ι_{D_{i_j}} δL)`
/// before sign normalization.
pub fn lambda1_literal(l: &LocalForm) -> Result<LocalForm, Error> {
    require_lagrangian(l)?;
    let cs = l.coords();
    let m = cs.m();
    let dl = l.d_v();
    let gens: BTreeSet<(usize, MultiIndex)> = dl.terms().flat_map(|(b, _)| b.vert.iter().cloned()).collect();
    let mut out = LocalForm::zero(cs);
    for (a, idx) in gens {
        let e = idx.entries();
        for j in 0..e.len() {
            let jj = MultiIndex::new(e[..j].to_vec());
            let kk = MultiIndex::new(e[j + 1..].to_vec());
            let inner = dl.insert_tot(&TotalVF::coordinate(cs, e[j])).contract_vertical(a, &idx);
            let mut t = inner.lie_total_multi(&kk);
            if (kk.len() + m) % 2 == 1 {
                t = t.neg();
            }
            out = out.add(&LocalForm::delta(cs, a, jj).wedge(&t));
        }
    }
    Ok(out)
}

/// `λ₁` together with the sign branch that satisfied the contract.
pub fn lambda1_with_branch(l: &LocalForm) -> Result<(LocalForm, SignBranch), Error> {
    let el = euler_lagrange(l)?;
    normalize_sign(lambda1_literal(l)?, l, &el)
}

pub fn lambda1(l: &LocalForm) -> Result<LocalForm, Error> {
    Ok(lambda1_with_branch(l)?.0)
}

/// `ω₁ = δλ₁`
pub fn omega1(l: &LocalForm) -> Result<LocalForm, Error> {
    Ok(lambda1(l)?.d_v())
}

/// `ω = EL + ω₁`, checked to be `D`-closed.
pub fn poincare_cartan(l: &LocalForm) -> Result<LocalForm, Error> {
    let w = euler_lagrange(l)?.add(&omega1(l)?);
    let dw = w.d_total();
    if !dw.is_zero() {
        return Err(Error::Contract(format!("D omega = {}", dw.to_text())));
    }
    Ok(w)
}

/// `λ = L + λ₁`
pub fn lepagean(l: &LocalForm) -> Result<LocalForm, Error> {
    Ok(l.add(&lambda1(l)?))
}

/// `(−1)^{m+i−1} ∂f/∂u^α_i δu^α ∧ Vol^i` before sign normalization, with
/// `Vol^i` the volume form with `dx^i` omitted.
pub fn first_order_lambda1_literal(l: &LocalForm) -> Result<LocalForm, Error> {
    require_lagrangian(l)?;
    let cs = l.coords();
    let m = cs.m();
    let f = l.top_coefficient();
    if f.max_jet_order() > 1 {
        return Err(Error::Order("first-order formula needs a first-order Lagrangian".into()));
    }
    let mut out = LocalForm::zero(cs);
    for a in 0..cs.e() {
        for i in 0..m {
            let c = f.partial(&Atom::Jet(a, MultiIndex::single(i)));
            if c.is_zero() {
                continue;
            }
            let mut w = LocalForm::delta(cs, a, MultiIndex::empty());
            for k in (0..m).filter(|&k| k != i) {
                w = w.wedge(&LocalForm::dx(cs, k));
            }
            // i is zero-based: (−1)^{m+i}
            let w = if (m + i) % 2 == 1 { w.neg() } else { w };
            out = out.add(&w.mul_expr(&c));
        }
    }
    Ok(out)
}

/// First-order `λ₁`, normalized by the same contract as [`lambda1`].
pub fn first_order_lambda1(l: &LocalForm) -> Result<LocalForm, Error> {
    let raw = first_order_lambda1_literal(l)?;
    let el = euler_lagrange(l)?;
    Ok(normalize_sign(raw, l, &el)?.0)
}

/// All objects of the fundamental formulae for one Lagrangian.
#[derive(Clone, Debug)]
pub struct FundamentalData {
    pub lagrangian: LocalForm,
    pub el: LocalForm,
    pub lambda1: LocalForm,
    pub omega1: LocalForm,
    pub omega: LocalForm,
    pub lepagean: LocalForm,
    pub branch: SignBranch,
}

impl FundamentalData {
    pub fn new(l: &LocalForm) -> Result<Self, Error> {
        let el = euler_lagrange(l)?;
        let (lambda1, branch) = normalize_sign(lambda1_literal(l)?, l, &el)?;
        let omega1 = lambda1.d_v();
        Ok(FundamentalData {
            lagrangian: l.clone(),
            omega: el.add(&omega1),
            lepagean: l.add(&lambda1),
            el,
            lambda1,
            omega1,
            branch,
        })
    }
}

/// One identity with its residual (zero when it holds).
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub residual: LocalForm,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct FundamentalReport {
    pub data: FundamentalData,
    pub checks: Vec<IdentityCheck>,
}

impl FundamentalReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

/// Replays every identity of the fundamental formulae.
pub fn verify_fundamental(l: &LocalForm) -> Result<FundamentalReport, Error> {
    let d = FundamentalData::new(l)?;
    let checks = vec![
        IdentityCheck { name: "delta L = EL - d lambda1", residual: l.d_v().sub(&d.el).add(&d.lambda1.d_h()) },
        IdentityCheck { name: "omega1 = delta lambda1", residual: d.omega1.sub(&d.lambda1.d_v()) },
        IdentityCheck { name: "delta omega1 = 0", residual: d.omega1.d_v() },
        IdentityCheck { name: "d omega1 = -delta EL", residual: d.omega1.d_h().add(&d.el.d_v()) },
        IdentityCheck { name: "D(L + lambda1) = EL + omega1", residual: d.lepagean.d_total().sub(&d.omega) },
        IdentityCheck { name: "D(EL + omega1) = 0", residual: d.omega.d_total() },
    ];
    Ok(FundamentalReport { data: d, checks })
}

/// A named example theory.
#[derive(Clone, Debug)]
pub struct Theory {
    pub name: &'static str,
    pub coords: Arc<CoordSystem>,
    pub lagrangian: LocalForm,
}

impl Theory {
    pub fn new(name: &'static str, base: &str, fibers: &str, density: &str) -> Theory {
        let coords = Arc::new(CoordSystem::from_lists(base, fibers).expect("valid coordinates"));
        let f = parse_expr(&coords, density).expect("valid density");
        let lagrangian = LocalForm::top(&coords, f);
        Theory { name, coords, lagrangian }
    }

    pub fn density(&self) -> Expr {
        self.lagrangian.top_coefficient()
    }
}

pub fn harmonic_oscillator() -> Theory {
    Theory::new("harmonic-oscillator", "t", "q", "1/2*q_t**2 - 1/2*q**2")
}

pub fn free_particle() -> Theory {
    Theory::new("free-particle", "t", "q", "1/2*q_t**2")
}

pub fn wave_equation() -> Theory {
    Theory::new("wave", "x,t", "u", "1/2*u_t**2 - 1/2*u_x**2")
}

/// Potential form of a KdV-type equation, second order in `x`.
pub fn kdv_type() -> Theory {
    Theory::new("kdv-type", "x,t", "u", "1/2*u_x*u_t + u_x**3 - 1/2*u_xx**2")
}

/// `½(D_x u² − D_t u¹)²`
pub fn maxwell_like() -> Theory {
    Theory::new("maxwell-2d", "x,t", "u1,u2", "1/2*(u2_x - u1_t)**2")
}

pub fn isotropic_oscillator() -> Theory {
    Theory::new("oscillator-2d", "t", "q1,q2", "1/2*q1_t**2 + 1/2*q2_t**2 - 1/2*q1**2 - 1/2*q2**2")
}

/// The four reference Lagrangians.
pub fn bundled() -> Vec<Theory> {
    vec![harmonic_oscillator(), free_particle(), wave_equation(), kdv_type()]
}

/// Every example theory.
pub fn corpus() -> Vec<Theory> {
    let mut v = bundled();
    v.push(maxwell_like());
    v.push(isotropic_oscillator());
    v
}

pub fn theory_by_name(name: &str) -> Option<Theory> {
    corpus().into_iter().find(|t| t.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::source_form;
    use crate::parse::parse_form;

    #[test]
    fn oscillator_lambda1_and_omega1() {
        let t = harmonic_oscillator();
        let cs = &t.coords;
        let l1 = lambda1(&t.lagrangian).unwrap();
        assert_eq!(l1, parse_form(cs, "q_t * del(q)").unwrap());
        let w1 = omega1(&t.lagrangian).unwrap();
        assert_eq!(w1, parse_form(cs, "del(q_t) /\\ del(q)").unwrap());
        let w = poincare_cartan(&t.lagrangian).unwrap();
        let expected = parse_form(cs, "(-q_tt - q) * del(q) /\\ dx(t) + del(q_t) /\\ del(q)").unwrap();
        assert_eq!(w, expected);
        assert_eq!(w.surface(), source_form(cs, &[parse_expr(cs, "-q_tt - q").unwrap()]));
    }

    #[test]
    fn jet_free_lagrangian() {
        let cs = Arc::new(CoordSystem::from_lists("x,t", "u").unwrap());
        let l = LocalForm::top(&cs, parse_expr(&cs, "u**3 + x").unwrap());
        assert!(lambda1(&l).unwrap().is_zero());
        assert!(omega1(&l).unwrap().is_zero());
        assert!(first_order_lambda1(&l).unwrap().is_zero());
        assert!(poincare_cartan(&LocalForm::zero(&cs)).unwrap().is_zero());
    }

    #[test]
    fn sign_branches() {
        let (_, b1) = lambda1_with_branch(&harmonic_oscillator().lagrangian).unwrap();
        assert_eq!(b1, SignBranch::Literal);
        let (_, b2) = lambda1_with_branch(&wave_equation().lagrangian).unwrap();
        assert_eq!(b2, SignBranch::Flipped);
        let wave = wave_equation();
        assert_eq!(
            lambda1(&wave.lagrangian).unwrap(),
            parse_form(&wave.coords, "-u_x * del(u) /\\ dx(t) - u_t * del(u) /\\ dx(x)").unwrap()
        );
    }

    #[test]
    fn first_order_agrees() {
        for t in corpus() {
            if t.density().max_jet_order() <= 1 {
                assert_eq!(first_order_lambda1(&t.lagrangian).unwrap(), lambda1(&t.lagrangian).unwrap(), "{}", t.name);
            }
        }
        assert!(first_order_lambda1(&kdv_type().lagrangian).is_err());
    }

    #[test]
    fn bundled_identities() {
        for t in corpus() {
            let r = verify_fundamental(&t.lagrangian).unwrap();
            for c in &r.checks {
                assert!(c.passed(), "{}: {}", t.name, c.name);
            }
        }
    }
}
