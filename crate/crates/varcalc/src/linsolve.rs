//! Exact sparse linear systems over Q.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::expr::Rational;

/// A sparse row `Σ a_j x_j = b`.
#[derive(Clone, Debug, Default)]
pub struct Row {
    pub coeffs: BTreeMap<usize, Rational>,
    pub rhs: Rational,
}

/// Incremental row echelon form. Each pivot row is normalized to 1 at its
/// largest column.
#[derive(Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, Row>,
    inconsistent: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn push(&mut self, mut row: Row) {
        row.coeffs.retain(|_, v| !v.is_zero());
        loop {
            let Some((&c, lead)) = row.coeffs.iter().next_back() else {
                if !row.rhs.is_zero() {
                    self.inconsistent = true;
                }
                return;
            };
            let lead = lead.clone();
            match self.pivots.get(&c) {
                Some(p) => {
                    for (j, v) in &p.coeffs {
                        let e = row.coeffs.entry(*j).or_insert_with(Rational::zero);
                        *e -= &lead * v;
                        if e.is_zero() {
                            row.coeffs.remove(j);
                        }
                    }
                    row.rhs -= &lead * &p.rhs;
                }
                None => {
                    if !lead.is_one() {
                        let inv = lead.recip();
                        for v in row.coeffs.values_mut() {
                            *v *= &inv;
                        }
                        row.rhs *= &inv;
                    }
                    self.pivots.insert(c, row);
                    return;
                }
            }
        }
    }

    /// A solution with all free variables set to zero.
    pub fn solve(&self, n: usize) -> Option<Vec<Rational>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![Rational::zero(); n];
        for (&c, row) in &self.pivots {
            let mut v = row.rhs.clone();
            for (&j, a) in row.coeffs.range(..c) {
                v -= a * &x[j];
            }
            x[c] = v;
        }
        Some(x)
    }
}

/// Solves the system, or `None` if inconsistent.
pub fn solve(rows: impl IntoIterator<Item = Row>, n: usize) -> Option<Vec<Rational>> {
    let mut e = Echelon::new();
    for r in rows {
        e.push(r);
        if !e.is_consistent() {
            return None;
        }
    }
    e.solve(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{int, rat};

    fn row(c: &[(usize, i64)], b: i64) -> Row {
        Row { coeffs: c.iter().map(|&(j, v)| (j, int(v))).collect(), rhs: int(b) }
    }

    #[test]
    fn small_system() {
        let x = solve(vec![row(&[(0, 1), (1, 1)], 3), row(&[(0, 1), (1, -1)], 1)], 2).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
    }

    #[test]
    fn underdetermined_sets_free_to_zero() {
        let x = solve(vec![row(&[(0, 2), (1, 1)], 1)], 2).unwrap();
        assert_eq!(x, vec![Rational::zero(), int(1)]);
        let x = solve(vec![row(&[(0, 2)], 1)], 3).unwrap();
        assert_eq!(x[0], rat(1, 2));
    }

    #[test]
    fn inconsistent() {
        assert!(solve(vec![row(&[(0, 1)], 1), row(&[(0, 2)], 3)], 1).is_none());
        assert!(solve(vec![row(&[], 1)], 1).is_none());
    }
}
