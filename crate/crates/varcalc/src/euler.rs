//! Interior and exterior Euler operators, Euler-Lagrange expressions and
//! inversion of the horizontal differential.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::ansatz::{self, Bounds};
use crate::error::Error;
use crate::expr::{rat, Atom, CoordSystem, Expr, MultiIndex};
use crate::form::{Basis, LocalForm};
use crate::jet::{total_derivative, total_derivative_multi};

fn require_top(w: &LocalForm, what: &str) -> Result<(), Error> {
    let m = w.m();
    if w.terms().any(|(b, _)| b.horiz.len() != m) {
        return Err(Error::Bidegree(format!("{what} needs horizontal degree {m}")));
    }
    Ok(())
}

fn vertical_degree(w: &LocalForm) -> Result<Option<usize>, Error> {
    let ps: BTreeSet<usize> = w.terms().map(|(b, _)| b.vert.len()).collect();
    match ps.len() {
        0 => Ok(None),
        1 => Ok(ps.into_iter().next()),
        _ => Err(Error::Bidegree("form is not homogeneous".into())),
    }
}

/// `I(A) = (1/p) δu^α ∧ Σ_I (−1)^{|I|} D_I(ι_{∂_I^α} A)` for `A ∈ Ω^{p,m}`, `p ≥ 1`.
pub fn interior_euler(w: &LocalForm) -> Result<LocalForm, Error> {
    require_top(w, "interior Euler operator")?;
    let Some(p) = vertical_degree(w)? else {
        return Ok(w.clone());
    };
    if p == 0 {
        return Err(Error::Bidegree("interior Euler operator needs vertical degree ≥ 1".into()));
    }
    let cs = w.coords();
    let gens: BTreeSet<(usize, MultiIndex)> = w.terms().flat_map(|(b, _)| b.vert.iter().cloned()).collect();
    let mut out = LocalForm::zero(cs);
    for (a, idx) in gens {
        let c = w.contract_vertical(a, &idx).lie_total_multi(&idx);
        let c = if idx.len() % 2 == 0 { c } else { c.neg() };
        out = out.add(&LocalForm::delta(cs, a, MultiIndex::empty()).wedge(&c));
    }
    Ok(out.scale(&rat(1, p as i64)))
}

/// `E = I ∘ δ` on `(p, m)`-forms.
pub fn exterior_euler(w: &LocalForm) -> Result<LocalForm, Error> {
    require_top(w, "exterior Euler operator")?;
    interior_euler(&w.d_v())
}

/// `E_α = Σ_I (−1)^{|I|} D_I ∂f/∂u_I^α`
pub fn el_components(cs: &CoordSystem, f: &Expr) -> Vec<Expr> {
    let jets = f.jet_atoms();
    (0..cs.e())
        .map(|a| {
            let mut e = Expr::zero();
            for atom in &jets {
                if let Atom::Jet(b, idx) = atom {
                    if *b == a {
                        let t = total_derivative_multi(&f.partial(atom), idx);
                        if idx.len() % 2 == 0 {
                            e += &t;
                        } else {
                            e -= &t;
                        }
                    }
                }
            }
            e
        })
        .collect()
}

/// The source form `E_α δu^α ∧ Vol`.
pub fn source_form(cs: &Arc<CoordSystem>, comps: &[Expr]) -> LocalForm {
    let m = cs.m();
    let mut out = LocalForm::zero(cs);
    for (a, e) in comps.iter().enumerate() {
        out.add_term(Basis { vert: vec![(a, MultiIndex::empty())], horiz: (0..m).collect() }, e);
    }
    out
}

/// `EL = E(L)` for a Lagrangian `L ∈ Ω^{0,m}`.
pub fn euler_lagrange(l: &LocalForm) -> Result<LocalForm, Error> {
    if !l.has_bidegree(0, l.m()) {
        return Err(Error::Bidegree("Lagrangian must have bidegree (0, m)".into()));
    }
    let cs = l.coords();
    Ok(source_form(cs, &el_components(cs, &l.top_coefficient())))
}

/// Whether `w ∈ Ω^{p,q}` is `d`-exact on the global chart.
pub fn is_d_exact(w: &LocalForm) -> Result<bool, Error> {
    if w.is_zero() {
        return Ok(true);
    }
    let Some((p, q)) = w.bidegree() else {
        return Err(Error::Bidegree("form is not homogeneous".into()));
    };
    let m = w.m();
    Ok(if q == m {
        if p == 0 {
            exterior_euler(w)?.is_zero()
        } else {
            interior_euler(w)?.is_zero()
        }
    } else if q == 0 {
        false
    } else {
        w.d_h().is_zero()
    })
}

/// Exactness test at top horizontal degree.
pub fn is_d_exact_top(w: &LocalForm) -> Result<bool, Error> {
    require_top(w, "top-degree exactness test")?;
    is_d_exact(w)
}

/// Some `β` with `d β = w`.
pub fn invert_d_h(w: &LocalForm, bounds: Bounds) -> Result<LocalForm, Error> {
    if w.is_zero() {
        return Ok(LocalForm::zero(w.coords()));
    }
    let Some((p, q)) = w.bidegree() else {
        return Err(Error::Bidegree("form is not homogeneous".into()));
    };
    if !is_d_exact(w)? {
        return Err(Error::NotExact(format!("({p}, {q})-form is not d-exact")));
    }
    ansatz::invert(|f| f.d_h(), w, &[(p, q - 1)], bounds)
}

/// Some `P ∈ Ω^{0,m−1}` with `d P = f` for `f ∈ Ω^{0,m}` with `E(f) = 0`.
pub fn divergence_invert(f: &LocalForm, bounds: Bounds) -> Result<LocalForm, Error> {
    let m = f.m();
    if !f.has_bidegree(0, m) {
        return Err(Error::Bidegree("divergence inversion needs a (0, m)-form".into()));
    }
    if !exterior_euler(f)?.is_zero() {
        return Err(Error::NotExact("Euler-Lagrange expression is nonzero".into()));
    }
    invert_d_h(f, bounds)
}

/// `P_j` with `Σ_j D_j P_j = (−1)^{|I|} D_I g · f − g · D_I f`.
pub fn ibp_shift(cs: &CoordSystem, f: &Expr, g: &Expr, idx: &MultiIndex) -> Vec<Expr> {
    let mut p = vec![Expr::zero(); cs.m()];
    let e = idx.entries();
    for r in 0..e.len() {
        let left = total_derivative_multi(g, &MultiIndex::new(e[..r].to_vec()));
        let right = total_derivative_multi(f, &MultiIndex::new(e[r + 1..].to_vec()));
        let t = &left * &right;
        // r is zero-based, the sign is (−1)^{r+1}
        if r % 2 == 0 {
            p[e[r]] -= &t;
        } else {
            p[e[r]] += &t;
        }
    }
    p
}

/// `Σ_j D_j P_j`
pub fn divergence(p: &[Expr]) -> Expr {
    p.iter().enumerate().fold(Expr::zero(), |acc, (j, pj)| acc + total_derivative(pj, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> crate::expr::Rational {
        rat(1, 2)
    }

    fn cs1() -> Arc<CoordSystem> {
        Arc::new(CoordSystem::new(&["x"], &["u"]).unwrap())
    }

    #[test]
    fn interior_euler_single_term() {
        let cs = cs1();
        let w = LocalForm::delta(&cs, 0, MultiIndex::single(0))
            .wedge(&LocalForm::dx(&cs, 0))
            .mul_expr(&Expr::jet(0, &[0]));
        let expected = LocalForm::delta(&cs, 0, MultiIndex::empty())
            .wedge(&LocalForm::dx(&cs, 0))
            .mul_expr(&-Expr::jet(0, &[0, 0]));
        assert_eq!(interior_euler(&w).unwrap(), expected);
        let s = LocalForm::delta(&cs, 0, MultiIndex::empty()).wedge(&LocalForm::dx(&cs, 0));
        assert_eq!(interior_euler(&s).unwrap(), s);
        assert!(interior_euler(&LocalForm::top(&cs, Expr::one())).is_err());
        assert!(interior_euler(&LocalForm::delta(&cs, 0, MultiIndex::empty())).is_err());
    }

    #[test]
    fn exterior_euler_examples() {
        let cs = cs1();
        let ux = Expr::jet(0, &[0]);
        let l = LocalForm::top(&cs, ux.pow(2).scale(&half()));
        let expected = source_form(&cs, &[-Expr::jet(0, &[0, 0])]);
        assert_eq!(exterior_euler(&l).unwrap(), expected);
        assert_eq!(euler_lagrange(&l).unwrap(), expected);
        let p = &Expr::jet(0, &[]).pow(3) * &ux;
        assert!(exterior_euler(&LocalForm::top(&cs, total_derivative(&p, 0))).unwrap().is_zero());
        assert!(exterior_euler(&expected).unwrap().is_zero());
    }

    #[test]
    fn exactness_and_inversion() {
        let cs = cs1();
        let ux = Expr::jet(0, &[0]);
        let f = LocalForm::top(&cs, &ux * &Expr::jet(0, &[0, 0]));
        assert!(is_d_exact_top(&f).unwrap());
        let s = LocalForm::delta(&cs, 0, MultiIndex::empty()).wedge(&LocalForm::dx(&cs, 0));
        assert!(!is_d_exact_top(&s).unwrap());
        let p = divergence_invert(&f, Bounds::default_for(&f)).unwrap();
        assert_eq!(p, LocalForm::function(&cs, ux.pow(2).scale(&half())));
        let z = LocalForm::zero(&cs);
        assert!(divergence_invert(&z, Bounds { order: 0, degree: 0 }).unwrap().is_zero());
        let bad = LocalForm::top(&cs, Expr::jet(0, &[]));
        assert!(matches!(divergence_invert(&bad, Bounds::default_for(&bad)), Err(Error::NotExact(_))));
    }

    #[test]
    fn ibp_examples() {
        let cs = cs1();
        let u = Expr::jet(0, &[]);
        assert!(ibp_shift(&cs, &u, &u, &MultiIndex::empty()).iter().all(Expr::is_zero));
        assert_eq!(ibp_shift(&cs, &u, &u, &MultiIndex::single(0)), vec![-u.pow(2)]);
    }
}
