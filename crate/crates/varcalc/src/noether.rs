//! Symmetries, Noether currents and pairs, Hamiltonian pairs, and the
//! Noether identities of gauge symmetries.

use std::collections::BTreeMap;

use crate::ansatz::{self, Bounds};
use crate::error::Error;
use crate::euler::{divergence_invert, euler_lagrange, exterior_euler, is_d_exact};
use crate::expr::{int, Atom, Expr, Monomial, MultiIndex};
use crate::form::LocalForm;
use crate::jet::{bracket_evolutionary, total_derivative_multi, EvolutionaryVF, InsularVF};
use crate::variational::FundamentalData;

/// Gauge action `ξ(ψ)_α = Σ_{β,I} ξ^I_{α,β} D_I ψ_β` with parameter fields `ψ_β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeAction {
    pub params: Vec<String>,
    /// `(α, β, I) ↦ ξ^I_{α,β}`
    pub coeffs: BTreeMap<(usize, usize, MultiIndex), Expr>,
}

/// Symmetry `ξ` with conserved current `Z`: `d Z = ι_ξ EL`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherPair {
    pub xi: EvolutionaryVF,
    pub z: LocalForm,
}

/// `(χ, ζ)` with `D ζ = ι_χ ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianPair {
    pub chi: InsularVF,
    pub zeta: LocalForm,
}

/// `L_ξ L` for a Lagrangian `L`.
pub fn lie_lagrangian(xi: &EvolutionaryVF, l: &LocalForm) -> LocalForm {
    l.d_v().insert_ev(xi)
}

/// Whether `L_ξ L` is `d`-exact, together with `L_ξ L`.
pub fn is_symmetry(xi: &EvolutionaryVF, l: &LocalForm) -> Result<(bool, LocalForm), Error> {
    let eta = lie_lagrangian(xi, l);
    let ok = exterior_euler(&eta)?.is_zero();
    Ok((ok, eta))
}

/// `d Z − ι_ξ EL`
pub fn noether_residual(pair: &NoetherPair, el: &LocalForm) -> LocalForm {
    pair.z.d_h().sub(&el.insert_ev(&pair.xi))
}

/// `Z = A − ι_ξ λ₁` with `d A = L_ξ L`; `A` is found by divergence inversion
/// when not supplied.
pub fn noether_current(
    xi: &EvolutionaryVF,
    l: &LocalForm,
    witness: Option<&LocalForm>,
    bounds: Option<Bounds>,
) -> Result<NoetherPair, Error> {
    let fd = FundamentalData::new(l)?;
    noether_current_with(xi, &fd, witness, bounds)
}

pub fn noether_current_with(
    xi: &EvolutionaryVF,
    fd: &FundamentalData,
    witness: Option<&LocalForm>,
    bounds: Option<Bounds>,
) -> Result<NoetherPair, Error> {
    let (ok, eta) = is_symmetry(xi, &fd.lagrangian)?;
    if !ok {
        return Err(Error::NotASymmetry);
    }
    let a = match witness {
        Some(a) => {
            if a.d_h() != eta {
                return Err(Error::BadWitness);
            }
            a.clone()
        }
        None => divergence_invert(&eta, bounds.unwrap_or_else(|| Bounds::default_for(&eta)))?,
    };
    let pair = NoetherPair { xi: xi.clone(), z: a.sub(&fd.lambda1.insert_ev(xi)) };
    let r = noether_residual(&pair, &fd.el);
    if !r.is_zero() {
        return Err(Error::Contract(format!("d Z - i_xi EL = {}", r.to_text())));
    }
    Ok(pair)
}

/// `([ξ, υ], L_ξ H − L_υ Z − ι_ξ ι_υ ω₁)` for pairs `(ξ, Z)` and `(υ, H)`.
pub fn noether_pair_bracket(p: &NoetherPair, q: &NoetherPair, fd: &FundamentalData) -> Result<NoetherPair, Error> {
    for (k, pair) in [p, q].into_iter().enumerate() {
        let r = noether_residual(pair, &fd.el);
        if !r.is_zero() {
            return Err(Error::InvalidPair(format!("argument {} fails d Z = i_xi EL: {}", k + 1, r.to_text())));
        }
    }
    let current = q
        .z
        .lie_ev(&p.xi)
        .sub(&p.z.lie_ev(&q.xi))
        .sub(&fd.omega1.insert_ev(&q.xi).insert_ev(&p.xi));
    let out = NoetherPair { xi: bracket_evolutionary(&p.xi, &q.xi), z: current };
    let r = noether_residual(&out, &fd.el);
    if !r.is_zero() {
        return Err(Error::Contract(format!("bracket current fails d Z = i_xi EL: {}", r.to_text())));
    }
    Ok(out)
}

/// Jacobiator of the Noether pair bracket on three pairs.
#[derive(Clone, Debug)]
pub struct PairJacobi {
    pub vector_part: EvolutionaryVF,
    pub current_part: LocalForm,
    pub current_exact: bool,
}

pub fn noether_pair_jacobi(ps: [&NoetherPair; 3], fd: &FundamentalData) -> Result<PairJacobi, Error> {
    let cs = fd.lagrangian.coords();
    let mut v = EvolutionaryVF::zero(cs);
    let mut c = LocalForm::zero(cs);
    for k in 0..3 {
        let (a, b, d) = (ps[k], ps[(k + 1) % 3], ps[(k + 2) % 3]);
        let ab = noether_pair_bracket(a, b, fd)?;
        let abd = noether_pair_bracket(&ab, d, fd)?;
        v = v.add(&abd.xi);
        c = c.add(&abd.z);
    }
    let current_exact = is_d_exact(&c)?;
    Ok(PairJacobi { vector_part: v, current_part: c, current_exact })
}

/// Residuals of an identity split by depth.
#[derive(Clone, Debug)]
pub struct DepthReport {
    pub residuals: BTreeMap<usize, LocalForm>,
}

impl DepthReport {
    fn from_residual(r: &LocalForm, depths: usize) -> DepthReport {
        let cs = r.coords();
        let mut residuals: BTreeMap<usize, LocalForm> = (0..depths).map(|k| (k, LocalForm::zero(cs))).collect();
        for (k, f) in r.depth_split() {
            residuals.insert(k, f);
        }
        DepthReport { residuals }
    }

    pub fn passed(&self) -> bool {
        self.residuals.values().all(LocalForm::is_zero)
    }

    pub fn passed_at(&self, depth: usize) -> bool {
        self.residuals.get(&depth).is_none_or(LocalForm::is_zero)
    }
}

/// `D ι_χ ω` by depth; zero iff `χ` is symplectic.
pub fn check_symplectic(chi: &InsularVF, fd: &FundamentalData) -> DepthReport {
    DepthReport::from_residual(&fd.omega.insert(chi).d_total(), 3)
}

/// Depth split of `D ζ − ι_χ ω`, and whether the surface part `(ξ, Z)` is a
/// Noether pair.
#[derive(Clone, Debug)]
pub struct HamiltonianReport {
    pub depths: DepthReport,
    pub surface_is_noether: bool,
}

impl HamiltonianReport {
    pub fn passed(&self) -> bool {
        self.depths.passed()
    }
}

pub fn check_hamiltonian_pair(pair: &HamiltonianPair, fd: &FundamentalData) -> HamiltonianReport {
    let m = fd.lagrangian.m();
    let r = pair.zeta.d_total().sub(&fd.omega.insert(&pair.chi));
    let z = pair.zeta.component(0, m - 1);
    let np = NoetherPair { xi: pair.chi.ev.clone(), z };
    HamiltonianReport {
        depths: DepthReport::from_residual(&r, 2),
        surface_is_noether: noether_residual(&np, &fd.el).is_zero(),
    }
}

/// Some `ζ` of total degree `m − 1` with `D ζ = ι_χ ω`.
pub fn find_hamiltonian_form(chi: &InsularVF, fd: &FundamentalData, bounds: Option<Bounds>) -> Result<LocalForm, Error> {
    let m = fd.lagrangian.m();
    let target = fd.omega.insert(chi);
    if !target.d_total().is_zero() {
        return Err(Error::NotSymplectic("D i_chi omega is nonzero".into()));
    }
    let unknown: Vec<(usize, usize)> = (0..m).map(|k| (k, m - 1 - k)).collect();
    let b = bounds.unwrap_or_else(|| Bounds::default_for(&target));
    ansatz::invert(|f| f.d_total(), &target, &unknown, b)
}

/// `Σ_{α,I} (−1)^{|I|} D_I(ξ^I_{α,β} E_α)` for each parameter `β`.
pub fn noether2_identity(g: &GaugeAction, l: &LocalForm) -> Result<Vec<Expr>, Error> {
    let e = euler_lagrange(l)?.source_components();
    let mut out = vec![Expr::zero(); g.params.len()];
    for ((a, b, idx), c) in &g.coeffs {
        let t = total_derivative_multi(&(c * &e[*a]), idx);
        if idx.len() % 2 == 0 {
            out[*b] += &t;
        } else {
            out[*b] -= &t;
        }
    }
    Ok(out)
}

/// `d ι_{ξ₂} ι_{ξ₁} ω₁ + ι_{ξ₂} ι_{ξ₁} δEL`
pub fn universal_current_check(xi1: &EvolutionaryVF, xi2: &EvolutionaryVF, fd: &FundamentalData) -> LocalForm {
    let a = fd.omega1.insert_ev(xi1).insert_ev(xi2).d_h();
    a.add(&fd.el.d_v().insert_ev(xi1).insert_ev(xi2))
}

/// Coefficients `c^I_α` with `f = Σ c^I_α D_I E_α`, if they exist within the bounds.
pub fn on_shell_witness(f: &Expr, fd: &FundamentalData, bounds: Bounds) -> Option<BTreeMap<(usize, MultiIndex), Expr>> {
    let cs = fd.lagrangian.coords();
    let e = fd.el.source_components();
    let m = cs.m();
    if f.is_zero() {
        return Some(BTreeMap::new());
    }
    let mut atoms: Vec<Atom> = (0..m).map(Atom::Base).collect();
    let order = f.max_jet_order().max(bounds.order);
    for a in 0..cs.e() {
        for idx in MultiIndex::all_up_to(m, order) {
            atoms.push(Atom::Jet(a, idx));
        }
    }
    let mut monos = Vec::new();
    for d in 0..=bounds.degree as usize {
        for combo in itertools::Itertools::combinations_with_replacement(0..atoms.len(), d) {
            monos.push(Monomial::from_factors(combo.into_iter().map(|k| (atoms[k].clone(), 1))));
        }
    }
    let mut labels = Vec::new();
    let mut columns = Vec::new();
    for (a, ea) in e.iter().enumerate() {
        if ea.is_zero() {
            continue;
        }
        for idx in MultiIndex::all_up_to(m, bounds.order) {
            let de = total_derivative_multi(ea, &idx);
            for mono in &monos {
                labels.push((a, idx.clone(), mono.clone()));
                columns.push(LocalForm::function(cs, de.mul_monomial(mono, &int(1))));
            }
        }
    }
    let x = ansatz::solve_columns(&columns, &LocalForm::function(cs, f.clone()))?;
    let mut out: BTreeMap<(usize, MultiIndex), Expr> = BTreeMap::new();
    for ((a, idx, mono), c) in labels.into_iter().zip(x) {
        if c != int(0) {
            *out.entry((a, idx)).or_insert_with(Expr::zero) += &Expr::monomial(mono, c);
        }
    }
    Some(out)
}

pub fn vanishes_on_shell(f: &Expr, fd: &FundamentalData, bounds: Bounds) -> bool {
    on_shell_witness(f, fd, bounds).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_evolutionary, parse_expr, parse_form, parse_gauge, parse_vector_field};
    use crate::variational::{free_particle, harmonic_oscillator, maxwell_like, wave_equation};

    #[test]
    fn oscillator_energy() {
        let t = harmonic_oscillator();
        let xi = parse_evolutionary(&t.coords, "ev{q: -q_t}").unwrap();
        assert!(is_symmetry(&xi, &t.lagrangian).unwrap().0);
        let p = noether_current(&xi, &t.lagrangian, None, None).unwrap();
        assert_eq!(p.z, parse_form(&t.coords, "1/2*q_t**2 + 1/2*q**2").unwrap());
        let zero = noether_current(&EvolutionaryVF::zero(&t.coords), &t.lagrangian, None, None).unwrap();
        assert!(zero.z.is_zero());
        let bad = parse_form(&t.coords, "q").unwrap();
        assert_eq!(noether_current(&xi, &t.lagrangian, Some(&bad), None), Err(Error::BadWitness));
    }

    #[test]
    fn non_symmetry() {
        let cs = std::sync::Arc::new(crate::expr::CoordSystem::from_lists("x", "u").unwrap());
        let l = parse_form(&cs, "1/2*u_x**2 * dx(x)").unwrap();
        let xi = parse_evolutionary(&cs, "ev{u: u}").unwrap();
        assert!(!is_symmetry(&xi, &l).unwrap().0);
        assert_eq!(noether_current(&xi, &l, None, None), Err(Error::NotASymmetry));
    }

    #[test]
    fn pair_bracket() {
        let t = free_particle();
        let fd = FundamentalData::new(&t.lagrangian).unwrap();
        let a = noether_current_with(&parse_evolutionary(&t.coords, "ev{q: -q_t}").unwrap(), &fd, None, None).unwrap();
        let b = noether_current_with(&parse_evolutionary(&t.coords, "ev{q: -1}").unwrap(), &fd, None, None).unwrap();
        let ab = noether_pair_bracket(&a, &b, &fd).unwrap();
        assert!(ab.xi.is_zero());
        let aa = noether_pair_bracket(&a, &a, &fd).unwrap();
        assert!(aa.xi.is_zero());
        assert!(is_d_exact(&aa.z).unwrap() || aa.z.d_h().is_zero());
    }

    #[test]
    fn hamiltonian_pairs() {
        let t = harmonic_oscillator();
        let fd = FundamentalData::new(&t.lagrangian).unwrap();
        let z = parse_form(&t.coords, "1/2*q_t**2 + 1/2*q**2").unwrap();
        let chi = parse_vector_field(&t.coords, "ev{q: -q_t}").unwrap();
        let r = check_hamiltonian_pair(&HamiltonianPair { chi: chi.clone(), zeta: z.clone() }, &fd);
        assert!(r.depths.passed_at(0) && r.surface_is_noether);
        assert_eq!(r.depths.residuals[&1], parse_form(&t.coords, "(q_tt + q) * del(q)").unwrap());
        let full = parse_vector_field(&t.coords, "ins{ev{q: -q_t}, tot{t: 1}}").unwrap();
        assert!(check_hamiltonian_pair(&HamiltonianPair { chi: full.clone(), zeta: z.clone() }, &fd).passed());
        assert_eq!(find_hamiltonian_form(&full, &fd, None).unwrap(), z);
        let wrong = z.add(&parse_form(&t.coords, "q").unwrap());
        assert!(!check_hamiltonian_pair(&HamiltonianPair { chi: full, zeta: wrong }, &fd).depths.passed_at(0));
        let zero = HamiltonianPair { chi: InsularVF::zero(&t.coords), zeta: LocalForm::zero(&t.coords) };
        assert!(check_hamiltonian_pair(&zero, &fd).passed());
    }

    #[test]
    fn symplectic_checks() {
        let t = wave_equation();
        let fd = FundamentalData::new(&t.lagrangian).unwrap();
        let shift = parse_vector_field(&t.coords, "ev{u: 1}").unwrap();
        assert!(check_symplectic(&shift, &fd).passed());
        assert!(check_symplectic(&InsularVF::zero(&t.coords), &fd).passed());
        let scale = parse_vector_field(&t.coords, "ev{u: u}").unwrap();
        assert!(!check_symplectic(&scale, &fd).passed());
    }

    #[test]
    fn maxwell_noether_two() {
        let t = maxwell_like();
        let g = parse_gauge(&t.coords, "gauge[psi]{u1: psi_x, u2: psi_t}").unwrap();
        assert!(noether2_identity(&g, &t.lagrangian).unwrap().iter().all(Expr::is_zero));
        let trivial = GaugeAction { params: vec!["psi".into()], coeffs: BTreeMap::new() };
        assert!(noether2_identity(&trivial, &t.lagrangian).unwrap()[0].is_zero());
        let bad = parse_gauge(&t.coords, "gauge[psi]{u1: psi}").unwrap();
        let e1 = euler_lagrange(&t.lagrangian).unwrap().source_components()[0].clone();
        assert_eq!(noether2_identity(&bad, &t.lagrangian).unwrap()[0], e1);
    }

    #[test]
    fn on_shell() {
        let t = harmonic_oscillator();
        let fd = FundamentalData::new(&t.lagrangian).unwrap();
        let f = parse_expr(&t.coords, "q_t*(q_tt + q) + q_ttt + q_t").unwrap();
        assert!(vanishes_on_shell(&f, &fd, Bounds { order: 1, degree: 1 }));
        assert!(!vanishes_on_shell(&parse_expr(&t.coords, "q").unwrap(), &fd, Bounds { order: 1, degree: 1 }));
    }
}
