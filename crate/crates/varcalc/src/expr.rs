//! Differential polynomials with exact rational coefficients.
//!
//! An [`Expr`] is a finite sum of monomials in three kinds of atoms: base
//! coordinates `x^i`, jet coordinates `u^α_I` and applications of opaque unary
//! function symbols. All atoms are independent ring variables, so partial
//! derivatives are plain and the zero test is structural.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Names of the base coordinates `x^1..x^m` and fiber coordinates `u^1..u^e`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordSystem {
    base: Vec<String>,
    fibers: Vec<String>,
}

const RESERVED: &[&str] = &["dx", "del", "ev", "tot", "ins", "pair", "gauge"];

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric()),
        _ => false,
    }
}

impl CoordSystem {
    pub fn new<S: AsRef<str>>(base: &[S], fibers: &[S]) -> Result<Self, Error> {
        let base: Vec<String> = base.iter().map(|s| s.as_ref().trim().to_string()).collect();
        let fibers: Vec<String> = fibers.iter().map(|s| s.as_ref().trim().to_string()).collect();
        if base.is_empty() {
            return Err(Error::Coords("at least one base coordinate is required".into()));
        }
        if fibers.is_empty() {
            return Err(Error::Coords("at least one fiber coordinate is required".into()));
        }
        let mut seen = BTreeSet::new();
        for n in base.iter().chain(fibers.iter()) {
            if !valid_name(n) {
                return Err(Error::Coords(format!("invalid coordinate name `{n}`")));
            }
            if RESERVED.contains(&n.as_str()) {
                return Err(Error::Coords(format!("`{n}` is a reserved word")));
            }
            if !seen.insert(n.clone()) {
                return Err(Error::Coords(format!("duplicate coordinate name `{n}`")));
            }
        }
        Ok(CoordSystem { base, fibers })
    }

    /// Parses comma separated name lists, as used on the command line.
    pub fn from_lists(base: &str, fibers: &str) -> Result<Self, Error> {
        let split = |s: &str| -> Vec<String> {
            s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
        };
        CoordSystem::new(&split(base), &split(fibers))
    }

    pub fn m(&self) -> usize {
        self.base.len()
    }

    pub fn e(&self) -> usize {
        self.fibers.len()
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn fiber_names(&self) -> &[String] {
        &self.fibers
    }

    pub fn base_name(&self, i: usize) -> &str {
        &self.base[i]
    }

    pub fn fiber_name(&self, a: usize) -> &str {
        &self.fibers[a]
    }

    pub fn base_index(&self, name: &str) -> Option<usize> {
        self.base.iter().position(|n| n == name)
    }

    pub fn fiber_index(&self, name: &str) -> Option<usize> {
        self.fibers.iter().position(|n| n == name)
    }

    /// Splits a jet suffix such as `xt` into base indices.
    pub fn split_suffix(&self, suffix: &str) -> Option<Vec<usize>> {
        if suffix.is_empty() {
            return Some(Vec::new());
        }
        let mut order: Vec<usize> = (0..self.base.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.base[i].len()));
        for i in order {
            if let Some(rest) = suffix.strip_prefix(self.base[i].as_str()) {
                if let Some(mut tail) = self.split_suffix(rest) {
                    tail.insert(0, i);
                    return Some(tail);
                }
            }
        }
        None
    }

    pub fn jet_name(&self, a: usize, idx: &MultiIndex) -> String {
        let mut s = self.fibers[a].clone();
        if !idx.is_empty() {
            s.push('_');
            for &i in idx.entries() {
                s.push_str(&self.base[i]);
            }
        }
        s
    }

    pub fn same(a: &CoordSystem, b: &CoordSystem) -> bool {
        std::ptr::eq(a, b) || a == b
    }
}

/// Sorted multiset of base indices. Ordered by length, then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        MultiIndex(v)
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(vec![i])
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `I·i`
    pub fn with(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&k| k <= i);
        v.insert(pos, i);
        MultiIndex(v)
    }

    pub fn concat(&self, other: &MultiIndex) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex::new(v)
    }

    /// `I∖i`, removing one copy of `i`.
    pub fn without(&self, i: usize) -> Option<Self> {
        let pos = self.0.iter().position(|&k| k == i)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(MultiIndex(v))
    }

    pub fn count(&self, i: usize) -> usize {
        self.0.iter().filter(|&&k| k == i).count()
    }

    /// All sorted multi-indices over `m` directions with length at most `order`.
    pub fn all_up_to(m: usize, order: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::empty()];
        let mut layer = vec![MultiIndex::empty()];
        for _ in 0..order {
            let mut next = Vec::new();
            for idx in &layer {
                let start = idx.0.last().copied().unwrap_or(0);
                for i in start..m {
                    let mut v = idx.0.clone();
                    v.push(i);
                    next.push(MultiIndex(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `F^{(ticks)}(arg)`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncApp {
    pub name: String,
    pub ticks: u32,
    pub arg: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Base(usize),
    Jet(usize, MultiIndex),
    Func(Arc<FuncApp>),
}

impl Atom {
    pub fn jet(a: usize, idx: &[usize]) -> Atom {
        Atom::Jet(a, MultiIndex::new(idx.to_vec()))
    }

    pub fn func(name: &str, ticks: u32, arg: Expr) -> Atom {
        Atom::Func(Arc::new(FuncApp { name: name.to_string(), ticks, arg }))
    }

    pub fn is_func(&self) -> bool {
        matches!(self, Atom::Func(_))
    }
}

/// Product of atoms with positive exponents, atoms ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Atom, u32)>) -> Self {
        let mut m = Monomial::one();
        for (a, k) in factors {
            m.mul_atom(a, k);
        }
        m
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        match self.0.binary_search_by(|(b, _)| b.cmp(a)) {
            Ok(pos) => self.0[pos].1,
            Err(_) => 0,
        }
    }

    fn mul_atom(&mut self, a: Atom, k: u32) {
        if k == 0 {
            return;
        }
        match self.0.binary_search_by(|(b, _)| b.cmp(&a)) {
            Ok(pos) => self.0[pos].1 += k,
            Err(pos) => self.0.insert(pos, (a, k)),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes one power of `a`, returning the old exponent.
    fn lower(&self, a: &Atom) -> Option<(u32, Monomial)> {
        let pos = self.0.binary_search_by(|(b, _)| b.cmp(a)).ok()?;
        let k = self.0[pos].1;
        let mut v = self.0.clone();
        if k == 1 {
            v.remove(pos);
        } else {
            v[pos].1 -= 1;
        }
        Some((k, Monomial(v)))
    }
}

impl Ord for Monomial {
    // lexicographic from the largest atom down
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((x, i)), Some((y, j))) => {
                    let c = x.cmp(y).then(i.cmp(j));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical sum of monomials with nonzero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut e = Expr::zero();
        if !c.is_zero() {
            e.terms.insert(Monomial::one(), c);
        }
        e
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(int(n))
    }

    pub fn atom(a: Atom) -> Self {
        Expr::monomial(Monomial::atom(a), Rational::one())
    }

    pub fn base(i: usize) -> Self {
        Expr::atom(Atom::Base(i))
    }

    pub fn jet(a: usize, idx: &[usize]) -> Self {
        Expr::atom(Atom::jet(a, idx))
    }

    pub fn jet_mi(a: usize, idx: MultiIndex) -> Self {
        Expr::atom(Atom::Jet(a, idx))
    }

    pub fn func(name: &str, ticks: u32, arg: Expr) -> Self {
        Expr::atom(Atom::func(name, ticks, arg))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut e = Expr::zero();
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut acc = Expr::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with every atom independent; chain rule
    /// through function applications.
    pub fn partial(&self, a: &Atom) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            for (b, _) in m.factors() {
                let inner = if b == a {
                    Expr::one()
                } else if let Atom::Func(f) = b {
                    let dg = f.arg.partial(a);
                    if dg.is_zero() {
                        continue;
                    }
                    &Expr::func(&f.name, f.ticks + 1, f.arg.clone()) * &dg
                } else {
                    continue;
                };
                let (k, rest) = m.lower(b).unwrap();
                out += &inner.mul_monomial(&rest, &(c * int(k as i64)));
            }
        }
        out
    }

    /// Replaces atoms by expressions; function arguments are rewritten
    /// recursively. Atoms mapped to `None` are kept.
    pub fn substitute(&self, f: &dyn Fn(&Atom) -> Option<Expr>) -> Expr {
        let mut cache: BTreeMap<Atom, Expr> = BTreeMap::new();
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut term = Expr::constant(c.clone());
            for (a, k) in m.factors() {
                let val = cache
                    .entry(a.clone())
                    .or_insert_with(|| match f(a) {
                        Some(v) => v,
                        None => match a {
                            Atom::Func(fa) => Expr::func(&fa.name, fa.ticks, fa.arg.substitute(f)),
                            _ => Expr::atom(a.clone()),
                        },
                    })
                    .clone();
                term = &term * &val.pow(*k);
            }
            out += &term;
        }
        out
    }

    /// Every atom occurring, including inside function arguments.
    pub fn atoms_deep(&self) -> BTreeSet<Atom> {
        let mut s = BTreeSet::new();
        self.collect_atoms(&mut s);
        s
    }

    fn collect_atoms(&self, s: &mut BTreeSet<Atom>) {
        for m in self.terms.keys() {
            for (a, _) in m.factors() {
                if let Atom::Func(f) = a {
                    f.arg.collect_atoms(s);
                }
                s.insert(a.clone());
            }
        }
    }

    /// Jet atoms the expression depends on (recursively through functions).
    pub fn jet_atoms(&self) -> BTreeSet<Atom> {
        self.atoms_deep().into_iter().filter(|a| matches!(a, Atom::Jet(..))).collect()
    }

    pub fn max_jet_order(&self) -> usize {
        self.atoms_deep()
            .iter()
            .map(|a| match a {
                Atom::Jet(_, i) => i.len(),
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Total degree in all top-level atoms.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn has_func(&self) -> bool {
        self.atoms_deep().iter().any(Atom::is_func)
    }

    /// True when the expression involves no jet coordinates at all.
    pub fn is_fiber_free(&self) -> bool {
        self.jet_atoms().is_empty()
    }

    /// Fails if a base or fiber index lies outside `cs`.
    pub fn check_coords(&self, cs: &CoordSystem) -> Result<(), Error> {
        for a in self.atoms_deep() {
            match a {
                Atom::Base(i) if i >= cs.m() => {
                    return Err(Error::Coords(format!("base index {i} out of range")))
                }
                Atom::Jet(al, ref idx) if al >= cs.e() || idx.entries().iter().any(|&i| i >= cs.m()) => {
                    return Err(Error::Coords("jet coordinate out of range".into()))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, cs: &'a CoordSystem) -> ExprDisplay<'a> {
        ExprDisplay { e: self, cs, latex: false }
    }

    pub fn latex<'a>(&'a self, cs: &'a CoordSystem) -> ExprDisplay<'a> {
        ExprDisplay { e: self, cs, latex: true }
    }

    pub fn to_text(&self, cs: &CoordSystem) -> String {
        self.display(cs).to_string()
    }

    /// Pulls back along the jet of a section `φ` (fiber-free expressions in
    /// the base coordinates) and evaluates at a point.
    pub fn eval_on_section(
        &self,
        phi: &[Expr],
        point: &[Rational],
    ) -> Result<Expr, Error> {
        for a in self.atoms_deep() {
            if let Atom::Jet(al, _) = a {
                if al >= phi.len() {
                    return Err(Error::Section(format!("no component given for fiber {al}")));
                }
            }
        }
        if phi.iter().any(|p| !p.is_fiber_free()) {
            return Err(Error::Section("section components must not involve fields".into()));
        }
        let pulled = self.substitute(&|a| match a {
            Atom::Jet(al, idx) => {
                let mut v = phi[*al].clone();
                for &i in idx.entries() {
                    v = v.partial(&Atom::Base(i));
                }
                Some(v)
            }
            _ => None,
        });
        Ok(pulled.substitute(&|a| match a {
            Atom::Base(i) => Some(Expr::constant(point.get(*i).cloned().unwrap_or_else(Rational::zero))),
            _ => None,
        }))
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Self {
        Expr::constant(c)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr { (&self).$f(&rhs) }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr { (&self).$f(rhs) }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr { self.$f(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

pub fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub struct ExprDisplay<'a> {
    e: &'a Expr,
    cs: &'a CoordSystem,
    latex: bool,
}

impl ExprDisplay<'_> {
    fn atom(&self, a: &Atom) -> String {
        match a {
            Atom::Base(i) => self.cs.base_name(*i).to_string(),
            Atom::Jet(al, idx) => {
                if self.latex {
                    let f = self.cs.fiber_name(*al);
                    if idx.is_empty() {
                        f.to_string()
                    } else {
                        let sub: String = idx.entries().iter().map(|&i| self.cs.base_name(i)).collect();
                        format!("{f}_{{{sub}}}")
                    }
                } else {
                    self.cs.jet_name(*al, idx)
                }
            }
            Atom::Func(f) => {
                let arg = ExprDisplay { e: &f.arg, cs: self.cs, latex: self.latex };
                format!("{}{}({})", f.name, "'".repeat(f.ticks as usize), arg)
            }
        }
    }

    fn monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .factors()
            .iter()
            .rev()
            .map(|(a, k)| {
                let s = self.atom(a);
                match (*k, self.latex) {
                    (1, _) => s,
                    (k, false) => format!("{s}**{k}"),
                    (k, true) => format!("{s}^{{{k}}}"),
                }
            })
            .collect();
        parts.join(if self.latex { " " } else { "*" })
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.e.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", self.monomial(m))?;
            } else if self.latex {
                if mag.is_integer() {
                    write!(f, "{} {}", mag, self.monomial(m))?;
                } else {
                    write!(f, "\\frac{{{}}}{{{}}} {}", mag.numer(), mag.denom(), self.monomial(m))?;
                }
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), self.monomial(m))?;
            }
        }
        Ok(())
    }
}
