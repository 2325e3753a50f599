//! Undetermined-coefficient solver for linear equations `op(P) = f` between
//! local forms.
//!
//! Candidate terms for `P` are graded: the multiset of fibers carried by jets
//! and vertical generators, and for each base direction `j` the number
//! `#j in indices − deg_{x^j} − [dx^j]`, are preserved by `d`, `δ` and `D`.
//! Only candidates in the grades of `f` are generated, which fixes the
//! powers of the base coordinates.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::Error;
use crate::expr::{int, Atom, CoordSystem, Expr, Monomial, MultiIndex, Rational};
use crate::form::{Basis, LocalForm};
use crate::linsolve::{Echelon, Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub order: usize,
    pub degree: u32,
}

impl Bounds {
    /// `(order(f), degree(f) + 1)`
    pub fn default_for(f: &LocalForm) -> Bounds {
        let degree = f.terms().map(|(_, c)| c.degree()).max().unwrap_or(0);
        Bounds { order: f.max_jet_order(), degree: degree + 1 }
    }

    pub fn or_default(order: Option<usize>, degree: Option<u32>, f: &LocalForm) -> Bounds {
        let d = Bounds::default_for(f);
        Bounds { order: order.unwrap_or(d.order), degree: degree.unwrap_or(d.degree) }
    }
}

type Grade = (Vec<usize>, Vec<i64>);

fn grade_of(cs: &CoordSystem, b: &Basis, mono: &Monomial) -> Grade {
    let m = cs.m();
    let mut fibers = Vec::new();
    let mut g = vec![0i64; m];
    let add_index = |g: &mut Vec<i64>, idx: &MultiIndex, times: i64| {
        for &i in idx.entries() {
            g[i] += times;
        }
    };
    for (atom, k) in mono.factors() {
        match atom {
            Atom::Base(i) => g[*i] -= *k as i64,
            Atom::Jet(a, idx) => {
                fibers.extend(std::iter::repeat_n(*a, *k as usize));
                add_index(&mut g, idx, *k as i64);
            }
            Atom::Func(_) => unreachable!("graded mode excludes function symbols"),
        }
    }
    for (a, idx) in &b.vert {
        fibers.push(*a);
        add_index(&mut g, idx, 1);
    }
    for &i in &b.horiz {
        g[i] -= 1;
    }
    fibers.sort_unstable();
    (fibers, g)
}

fn graded_candidates(
    cs: &CoordSystem,
    grades: &[Grade],
    unknown: &[(usize, usize)],
    order: usize,
) -> Vec<(Basis, Monomial)> {
    let m = cs.m();
    let indices = MultiIndex::all_up_to(m, order);
    let mut out = Vec::new();
    for (fibers, g) in grades {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &a in fibers {
            *counts.entry(a).or_default() += 1;
        }
        let alphas: Vec<(usize, usize)> = counts.into_iter().collect();
        for &(p, q) in unknown {
            if p > fibers.len() || q > m {
                continue;
            }
            // split of p vertical slots among the fibers
            let splits = alphas.iter().map(|&(_, n)| 0..=n.min(p)).multi_cartesian_product();
            let splits: Vec<Vec<usize>> = if alphas.is_empty() {
                vec![vec![]]
            } else {
                splits.filter(|s| s.iter().sum::<usize>() == p).collect()
            };
            for split in splits {
                let per_alpha: Vec<Vec<(Vec<usize>, Vec<usize>)>> = alphas
                    .iter()
                    .zip(&split)
                    .map(|(&(_, n), &pa)| {
                        let verts: Vec<Vec<usize>> = (0..indices.len()).combinations(pa).collect();
                        let jets: Vec<Vec<usize>> =
                            (0..indices.len()).combinations_with_replacement(n - pa).collect();
                        verts.into_iter().cartesian_product(jets).collect()
                    })
                    .collect();
                let choices: Vec<Vec<(Vec<usize>, Vec<usize>)>> = if per_alpha.is_empty() {
                    vec![vec![]]
                } else {
                    per_alpha.into_iter().multi_cartesian_product().collect()
                };
                for choice in choices {
                    let mut vert = Vec::new();
                    let mut factors: Vec<(Atom, u32)> = Vec::new();
                    let mut c = vec![0i64; m];
                    for ((a, _), (vs, js)) in alphas.iter().zip(&choice) {
                        for &v in vs {
                            vert.push((*a, indices[v].clone()));
                            for &i in indices[v].entries() {
                                c[i] += 1;
                            }
                        }
                        for &j in js {
                            factors.push((Atom::Jet(*a, indices[j].clone()), 1));
                            for &i in indices[j].entries() {
                                c[i] += 1;
                            }
                        }
                    }
                    for horiz in (0..m).combinations(q) {
                        let mut fs = factors.clone();
                        let mut ok = true;
                        for j in 0..m {
                            let e = c[j] - horiz.contains(&j) as i64 - g[j];
                            if e < 0 {
                                ok = false;
                                break;
                            }
                            if e > 0 {
                                fs.push((Atom::Base(j), e as u32));
                            }
                        }
                        if !ok {
                            continue;
                        }
                        let Some((_, basis)) = Basis::normalize(
                            vert.iter()
                                .map(|(a, i)| crate::form::Gen::Vert(*a, i.clone()))
                                .chain(horiz.iter().map(|&i| crate::form::Gen::Horiz(i)))
                                .collect(),
                        ) else {
                            continue;
                        };
                        out.push((basis, Monomial::from_factors(fs)));
                    }
                }
            }
        }
    }
    out.sort_by_cached_key(preference);
    out.dedup();
    out
}

/// Free columns of the solve are the early ones and are set to zero, so
/// candidates with base coordinates and high jet order go first.
fn preference(c: &(Basis, Monomial)) -> (Reverse<u32>, Reverse<usize>, Basis, Monomial) {
    let (b, mono) = c;
    let mut base = 0;
    let mut order = b.vert.iter().map(|(_, i)| i.len()).max().unwrap_or(0);
    for (a, k) in mono.factors() {
        match a {
            Atom::Base(_) => base += k,
            Atom::Jet(_, i) => order = order.max(i.len()),
            Atom::Func(_) => {}
        }
    }
    (Reverse(base), Reverse(order), b.clone(), mono.clone())
}

fn ungraded_candidates(
    cs: &CoordSystem,
    target: &LocalForm,
    unknown: &[(usize, usize)],
    bounds: Bounds,
) -> Vec<(Basis, Monomial)> {
    let m = cs.m();
    let indices = MultiIndex::all_up_to(m, bounds.order);
    let mut atoms: Vec<Atom> = (0..m).map(Atom::Base).collect();
    for a in 0..cs.e() {
        for idx in &indices {
            atoms.push(Atom::Jet(a, idx.clone()));
        }
    }
    let mut funcs = Vec::new();
    for (_, c) in target.terms() {
        for (mono, _) in c.terms() {
            for (atom, _) in mono.factors() {
                if let Atom::Func(fa) = atom {
                    funcs.push(atom.clone());
                    if fa.ticks > 0 {
                        funcs.push(Atom::func(&fa.name, fa.ticks - 1, fa.arg.clone()));
                    }
                }
            }
        }
    }
    funcs.sort();
    funcs.dedup();
    atoms.extend(funcs);
    let mut monos = Vec::new();
    for d in 0..=bounds.degree as usize {
        for combo in (0..atoms.len()).combinations_with_replacement(d) {
            monos.push(Monomial::from_factors(combo.into_iter().map(|k| (atoms[k].clone(), 1))));
        }
    }
    let verts: Vec<(usize, MultiIndex)> =
        (0..cs.e()).flat_map(|a| indices.iter().map(move |i| (a, i.clone()))).collect();
    let mut out = Vec::new();
    for &(p, q) in unknown {
        if q > m {
            continue;
        }
        for vs in verts.iter().combinations(p) {
            for hs in (0..m).combinations(q) {
                let basis = Basis { vert: vs.iter().map(|v| (*v).clone()).collect(), horiz: hs.clone() };
                for mono in &monos {
                    out.push((basis.clone(), mono.clone()));
                }
            }
        }
    }
    out
}

/// Finds `x` with `Σ x_k columns[k] = target`.
pub fn solve_columns(columns: &[LocalForm], target: &LocalForm) -> Option<Vec<Rational>> {
    let mut keys: BTreeMap<(Basis, Monomial), usize> = BTreeMap::new();
    let mut rows: Vec<Row> = Vec::new();
    let mut key = |b: &Basis, mono: &Monomial, rows: &mut Vec<Row>| -> usize {
        *keys.entry((b.clone(), mono.clone())).or_insert_with(|| {
            rows.push(Row::default());
            rows.len() - 1
        })
    };
    for (k, col) in columns.iter().enumerate() {
        for (b, c) in col.terms() {
            for (mono, v) in c.terms() {
                let r = key(b, mono, &mut rows);
                rows[r].coeffs.insert(k, v.clone());
            }
        }
    }
    for (b, c) in target.terms() {
        for (mono, v) in c.terms() {
            let r = key(b, mono, &mut rows);
            rows[r].rhs = v.clone();
        }
    }
    let mut e = Echelon::new();
    for r in rows {
        e.push(r);
        if !e.is_consistent() {
            return None;
        }
    }
    e.solve(columns.len())
}

/// Solves `op(P) = target` for `P` with components in the `unknown`
/// bidegrees. `op` must be linear over Q and, unless function symbols occur,
/// preserve the grading described in the module docs.
pub fn invert<F>(op: F, target: &LocalForm, unknown: &[(usize, usize)], bounds: Bounds) -> Result<LocalForm, Error>
where
    F: Fn(&LocalForm) -> LocalForm + Sync,
{
    let cs: &Arc<CoordSystem> = target.coords();
    if target.is_zero() {
        return Ok(LocalForm::zero(cs));
    }
    let graded = !target.terms().any(|(_, c)| c.has_func());
    let cands = if graded {
        let mut grades: Vec<Grade> =
            target.terms().flat_map(|(b, c)| c.terms().map(move |(mono, _)| grade_of(cs, b, mono))).collect();
        grades.sort();
        grades.dedup();
        graded_candidates(cs, &grades, unknown, bounds.order)
    } else {
        ungraded_candidates(cs, target, unknown, bounds)
    };
    let columns: Vec<LocalForm> = cands
        .par_iter()
        .map(|(b, mono)| op(&LocalForm::term(cs, Expr::monomial(mono.clone(), int(1)), b.clone())))
        .collect();
    let x = solve_columns(&columns, target)
        .ok_or(Error::AnsatzExhausted { order: bounds.order, degree: bounds.degree })?;
    let mut p = LocalForm::zero(cs);
    for ((b, mono), c) in cands.into_iter().zip(x) {
        if c != int(0) {
            p.add_term(b, &Expr::monomial(mono, c));
        }
    }
    if op(&p) != *target {
        return Err(Error::Contract("ansatz solution failed verification".into()));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    #[test]
    fn inverts_horizontal_differential() {
        let cs = Arc::new(CoordSystem::new(&["x"], &["u"]).unwrap());
        let ux = Expr::jet(0, &[0]);
        let f = LocalForm::top(&cs, &ux * &Expr::jet(0, &[0, 0]));
        let b = Bounds::default_for(&f);
        let p = invert(|w| w.d_h(), &f, &[(0, 0)], b).unwrap();
        assert_eq!(p, LocalForm::function(&cs, ux.pow(2).scale(&rat(1, 2))));
    }

    #[test]
    fn base_coordinate_powers() {
        let cs = Arc::new(CoordSystem::new(&["x", "t"], &["u"]).unwrap());
        let x = Expr::base(0);
        let f = LocalForm::top(&cs, &x * &Expr::int(2));
        let p = invert(|w| w.d_h(), &f, &[(0, 1)], Bounds::default_for(&f)).unwrap();
        assert_eq!(p.d_h(), f);
    }

    #[test]
    fn function_symbols() {
        let cs = Arc::new(CoordSystem::new(&["t"], &["q"]).unwrap());
        let q = Expr::jet(0, &[]);
        let f = LocalForm::top(&cs, &Expr::func("V", 1, q.clone()) * &Expr::jet(0, &[0]));
        let p = invert(|w| w.d_h(), &f, &[(0, 0)], Bounds::default_for(&f)).unwrap();
        assert_eq!(p, LocalForm::function(&cs, Expr::func("V", 0, q)));
    }

    #[test]
    fn exhaustion() {
        let cs = Arc::new(CoordSystem::new(&["x"], &["u"]).unwrap());
        let f = LocalForm::top(&cs, Expr::jet(0, &[]));
        let b = Bounds::default_for(&f);
        assert_eq!(invert(|w| w.d_h(), &f, &[(0, 0)], b), Err(Error::AnsatzExhausted { order: 0, degree: 2 }));
    }
}
