//! Finite-dimensional graded vector spaces with multilinear bracket families,
//! Koszul signs, unshuffles, décalage and Jacobiators.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Error;
use crate::expr::{fmt_rational, int, Rational};
use crate::random::Rng64;

pub const MAX_ARITY: usize = 4;
pub const MAX_DIM: usize = 6;
pub const MIN_DEGREE: i64 = -3;
pub const MAX_DEGREE: i64 = 0;

/// Sparse vector over the global basis of a [`GradedSpace`].
pub type Vector = BTreeMap<usize, Rational>;

fn axpy(out: &mut Vector, c: &Rational, v: &Vector) {
    for (k, x) in v {
        let e = out.entry(*k).or_insert_with(Rational::zero);
        *e += c * x;
        if e.is_zero() {
            out.remove(k);
        }
    }
}

fn parity(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `ε(σ, w)` for `w_1 ⊗ ⋯ ⊗ w_n ↦ ε · w_{σ(1)} ⊗ ⋯ ⊗ w_{σ(n)}`, with
/// `degrees[k]` the degree of `w_k`.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> i64 {
    let mut s = 1;
    for (p, q) in (0..perm.len()).tuple_combinations() {
        if perm[p] > perm[q] {
            s *= parity(degrees[perm[p]] * degrees[perm[q]]);
        }
    }
    s
}

/// Same sign, computed by sorting the target arrangement back with adjacent
/// transpositions and applying the sign rule to each one.
pub fn koszul_sign_by_transpositions(perm: &[usize], degrees: &[i64]) -> i64 {
    let mut labels = perm.to_vec();
    let mut s = 1;
    for pass in 0..labels.len() {
        for k in 0..labels.len().saturating_sub(pass + 1) {
            if labels[k] > labels[k + 1] {
                s *= parity(degrees[labels[k]] * degrees[labels[k + 1]]);
                labels.swap(k, k + 1);
            }
        }
    }
    s
}

/// Ordinary sign of a permutation.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    koszul_sign(perm, &vec![1; perm.len()])
}

/// `(σ ∘ τ)(k) = σ(τ(k))`
pub fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&k| sigma[k]).collect()
}

/// Degrees of `w_{σ(1)}, …, w_{σ(n)}`.
pub fn permute<T: Clone>(perm: &[usize], w: &[T]) -> Vec<T> {
    perm.iter().map(|&k| w[k].clone()).collect()
}

/// The `(i, j)`-unshuffles in lexicographic order: permutations of
/// `0..i+j` increasing on the first `i` and on the last `j` slots.
pub fn unshuffles(i: usize, j: usize) -> Vec<Vec<usize>> {
    let n = i + j;
    (0..n)
        .combinations(i)
        .map(|head| {
            let tail = (0..n).filter(|k| !head.contains(k));
            head.iter().copied().chain(tail).collect()
        })
        .collect()
}

/// `(−1)^{Σ_i (n−i)|v_i|}`
pub fn decalage_sign(degrees: &[i64]) -> i64 {
    let n = degrees.len() as i64;
    parity(degrees.iter().enumerate().map(|(i, d)| (n - 1 - i as i64) * d).sum())
}

/// Finite-dimensional graded vector space with basis labels `(degree, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    dims: BTreeMap<i64, usize>,
    labels: Vec<(i64, usize)>,
}

impl GradedSpace {
    pub fn new(dims: BTreeMap<i64, usize>) -> Result<Self, Error> {
        if let Some(d) = dims.keys().find(|d| !(MIN_DEGREE..=MAX_DEGREE).contains(*d)) {
            return Err(Error::Brackets(format!("degree {d} outside [{MIN_DEGREE}, {MAX_DEGREE}]")));
        }
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|(_, n)| *n > 0).collect();
        let labels: Vec<(i64, usize)> = dims.iter().flat_map(|(&d, &n)| (0..n).map(move |k| (d, k))).collect();
        if labels.len() > MAX_DIM {
            return Err(Error::Brackets(format!("total dimension {} exceeds {MAX_DIM}", labels.len())));
        }
        Ok(GradedSpace { dims, labels })
    }

    pub fn from_pairs(dims: &[(i64, usize)]) -> Result<Self, Error> {
        GradedSpace::new(dims.iter().copied().collect())
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self, b: usize) -> i64 {
        self.labels[b].0
    }

    pub fn label(&self, b: usize) -> (i64, usize) {
        self.labels[b]
    }

    pub fn index(&self, degree: i64, k: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == (degree, k))
    }

    pub fn basis_of_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.degree(b) == d).collect()
    }

    pub fn degrees(&self, bs: &[usize]) -> Vec<i64> {
        bs.iter().map(|&b| self.degree(b)).collect()
    }
}

/// Symmetry convention of a bracket family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Graded antisymmetric `l_n` on `V`, of degree `2 − n`.
    Anti,
    /// Graded symmetric `q_n` on `[1]V`, of degree `1`.
    Sym,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Anti => "anti",
            Convention::Sym => "sym",
        }
    }
}

/// Brackets `l_n` (or `q_n`) given on basis tuples, stored on non-decreasing
/// tuples and extended by (anti)symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketFamily {
    pub space: GradedSpace,
    pub convention: Convention,
    maps: BTreeMap<usize, BTreeMap<Vec<usize>, Vector>>,
}

impl BracketFamily {
    pub fn new(space: GradedSpace, convention: Convention) -> Self {
        BracketFamily { space, convention, maps: BTreeMap::new() }
    }

    /// Degrees entering the Koszul sign.
    fn sign_degrees(&self, bs: &[usize]) -> Vec<i64> {
        let shift = match self.convention {
            Convention::Anti => 0,
            Convention::Sym => 1,
        };
        bs.iter().map(|&b| self.space.degree(b) - shift).collect()
    }

    /// `χ(σ)` with `l(x_{σ(1)}, …) = χ(σ) l(x_1, …)`.
    fn symmetry_sign(&self, perm: &[usize], bs: &[usize]) -> i64 {
        let e = koszul_sign(perm, &self.sign_degrees(bs));
        match self.convention {
            Convention::Anti => e * permutation_sign(perm),
            Convention::Sym => e,
        }
    }

    /// Sorting permutation of `bs` and the sign relating both values.
    fn canonical(&self, bs: &[usize]) -> (Vec<usize>, i64) {
        let perm: Vec<usize> = (0..bs.len()).sorted_by_key(|&k| bs[k]).collect();
        let sorted = permute(&perm, bs);
        (sorted, self.symmetry_sign(&perm, bs))
    }

    /// Whether symmetry forces the value on `bs` to vanish.
    fn forced_zero(&self, sorted: &[usize]) -> bool {
        sorted.windows(2).enumerate().any(|(k, w)| {
            if w[0] != w[1] {
                return false;
            }
            let mut swap: Vec<usize> = (0..sorted.len()).collect();
            swap.swap(k, k + 1);
            self.symmetry_sign(&swap, sorted) == -1
        })
    }

    pub fn output_degree(&self, bs: &[usize]) -> i64 {
        self.space.degrees(bs).iter().sum::<i64>() + 2 - bs.len() as i64
    }

    /// Adds `c · out` to the value on the basis tuple `bs`.
    pub fn add(&mut self, bs: &[usize], out: usize, c: &Rational) -> Result<(), Error> {
        let n = bs.len();
        if n == 0 || n > MAX_ARITY {
            return Err(Error::Brackets(format!("arity {n} outside 1..={MAX_ARITY}")));
        }
        if bs.iter().chain([&out]).any(|&b| b >= self.space.dim()) {
            return Err(Error::Brackets("basis index out of range".into()));
        }
        let want = self.output_degree(bs);
        if self.space.degree(out) != want {
            return Err(Error::Brackets(format!(
                "arity-{n} bracket on degrees {:?} must land in degree {want}",
                self.space.degrees(bs)
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        let (sorted, s) = self.canonical(bs);
        if self.forced_zero(&sorted) {
            return Err(Error::Brackets(format!("value on {bs:?} is forced to vanish by symmetry")));
        }
        let v = self.maps.entry(n).or_default().entry(sorted.clone()).or_default();
        axpy(v, &(c * int(s)), &Vector::from([(out, Rational::one())]));
        if v.is_empty() {
            self.maps.get_mut(&n).map(|t| t.remove(&sorted));
        }
        Ok(())
    }

    pub fn eval(&self, bs: &[usize]) -> Vector {
        let (sorted, s) = self.canonical(bs);
        match self.maps.get(&bs.len()).and_then(|t| t.get(&sorted)) {
            Some(v) => v.iter().map(|(k, x)| (*k, x * int(s))).collect(),
            None => Vector::new(),
        }
    }

    /// Value with a vector in the first slot and basis elements after it.
    pub fn eval_first(&self, first: &Vector, rest: &[usize]) -> Vector {
        let mut out = Vector::new();
        let mut bs = Vec::with_capacity(rest.len() + 1);
        for (b, c) in first {
            bs.clear();
            bs.push(*b);
            bs.extend_from_slice(rest);
            axpy(&mut out, c, &self.eval(&bs));
        }
        out
    }

    pub fn arities(&self) -> Vec<usize> {
        self.maps.iter().filter(|(_, t)| !t.is_empty()).map(|(n, _)| *n).collect()
    }

    pub fn has_arity(&self, n: usize) -> bool {
        self.maps.get(&n).is_some_and(|t| !t.is_empty())
    }

    /// Stored values on non-decreasing tuples.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.maps.values().flat_map(|t| t.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(BTreeMap::is_empty)
    }
}

/// The `n`-th Jacobiator on basis inputs, in the family's convention.
pub fn jacobiator(f: &BracketFamily, n: usize, inputs: &[usize]) -> Vector {
    assert_eq!(inputs.len(), n);
    let degs = f.sign_degrees(inputs);
    let terms: Vec<(usize, usize, Vec<usize>)> = (1..=n)
        .map(|i| (i, n + 1 - i))
        .filter(|&(i, j)| f.has_arity(i) && f.has_arity(j))
        .flat_map(|(i, j)| unshuffles(i, j - 1).into_iter().map(move |s| (i, j, s)))
        .collect();
    terms
        .par_iter()
        .map(|(i, j, sigma)| {
            let mut sign = koszul_sign(sigma, &degs);
            if f.convention == Convention::Anti {
                sign *= permutation_sign(sigma) * parity((*j * (*i - 1)) as i64);
            }
            let x = permute(sigma, inputs);
            let inner = f.eval(&x[..*i]);
            let mut v = f.eval_first(&inner, &x[*i..]);
            if sign < 0 {
                v.values_mut().for_each(|c| *c = -c.clone());
            }
            v
        })
        .reduce(Vector::new, |mut a, b| {
            axpy(&mut a, &Rational::one(), &b);
            a
        })
}

/// All nonzero Jacobiators of arities `1..=max_n` on non-decreasing basis
/// tuples (the Jacobiator is (anti)symmetric, so these determine the rest).
pub fn nonzero_jacobiators(f: &BracketFamily, max_n: usize) -> Vec<(Vec<usize>, Vector)> {
    let d = f.space.dim();
    (1..=max_n)
        .flat_map(|n| (0..d).combinations_with_replacement(n))
        .filter_map(|bs| {
            let j = jacobiator(f, bs.len(), &bs);
            (!j.is_empty()).then_some((bs, j))
        })
        .collect()
}

fn transport(f: &BracketFamily, to: Convention) -> BracketFamily {
    let mut out = BracketFamily::new(f.space.clone(), to);
    for (bs, v) in f.entries() {
        let s = int(decalage_sign(&f.space.degrees(bs)));
        for (b, c) in v {
            out.add(bs, *b, &(c * &s)).expect("transport preserves degrees and symmetry");
        }
    }
    out
}

/// `q_n(↑x_1, …, ↑x_n) = (−1)^{Σ(n−i)|x_i|} ↑ l_n(x_1, …, x_n)`
pub fn decalage_transport(l: &BracketFamily) -> Result<BracketFamily, Error> {
    if l.convention != Convention::Anti {
        return Err(Error::Brackets("décalage transport expects antisymmetric brackets".into()));
    }
    Ok(transport(l, Convention::Sym))
}

/// Inverse of [`decalage_transport`].
pub fn decalage_inverse(q: &BracketFamily) -> Result<BracketFamily, Error> {
    if q.convention != Convention::Sym {
        return Err(Error::Brackets("inverse décalage expects symmetric brackets".into()));
    }
    Ok(transport(q, Convention::Anti))
}

/// Sign `κ` with `J_sym(dec l)(↑x) = κ · (−1)^{Σ(n−i)|x_i|} ↑ J_anti(l)(x)`.
pub fn transported_jacobiator_sign(n: usize) -> i64 {
    parity(n as i64 - 1)
}

/// Compares the Jacobiators of `l` and of its décalage transport on every
/// basis tuple of arity `≤ max_n`; returns the offending tuples.
pub fn transport_mismatches(l: &BracketFamily, max_n: usize) -> Result<Vec<Vec<usize>>, Error> {
    let q = decalage_transport(l)?;
    let d = l.space.dim();
    Ok((1..=max_n)
        .flat_map(|n| (0..n).map(|_| 0..d).multi_cartesian_product().map(move |bs| (n, bs)))
        .filter(|(n, bs)| {
            let js = jacobiator(&q, *n, bs);
            let s = int(transported_jacobiator_sign(*n) * decalage_sign(&l.space.degrees(bs)));
            let ja: Vector = jacobiator(l, *n, bs).into_iter().map(|(k, c)| (k, c * &s)).collect();
            js != ja
        })
        .map(|(_, bs)| bs)
        .collect())
}

/// Random family of brackets of arities `1..=max_arity` respecting degrees
/// and symmetry.
pub fn random_family(r: &mut Rng64, space: &GradedSpace, convention: Convention, max_arity: usize) -> BracketFamily {
    let mut f = BracketFamily::new(space.clone(), convention);
    let d = space.dim();
    for n in 1..=max_arity.min(MAX_ARITY) {
        for bs in (0..d).combinations_with_replacement(n) {
            if f.forced_zero(&bs) {
                continue;
            }
            for out in space.basis_of_degree(f.output_degree(&bs)) {
                if r.gen_bool(0.7) {
                    let c = r.gen_range(1i64..=3) * if r.gen_bool(0.5) { 1 } else { -1 };
                    f.add(&bs, out, &int(c)).expect("degree-compatible entry");
                }
            }
        }
    }
    f
}

fn lie_family(space: GradedSpace, d: &[(usize, usize, i64)], bracket: &[(usize, usize, usize, i64)]) -> BracketFamily {
    let mut f = BracketFamily::new(space, Convention::Anti);
    for &(a, out, c) in d {
        f.add(&[a], out, &int(c)).expect("valid differential");
    }
    for &(a, b, out, c) in bracket {
        f.add(&[a, b], out, &int(c)).expect("valid bracket");
    }
    f
}

/// `so(3)`: `[e_i, e_j] = ε_{ijk} e_k`.
pub fn so3() -> BracketFamily {
    let v = GradedSpace::from_pairs(&[(0, 3)]).expect("small space");
    lie_family(v, &[], &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)])
}

/// Three-dimensional `R ⋉ R²`: `[e₃, e₁] = a e₁ + c e₂`, `[e₃, e₂] = b e₁ + d e₂`.
pub fn bianchi(a: i64, b: i64, c: i64, d: i64) -> BracketFamily {
    let v = GradedSpace::from_pairs(&[(0, 3)]).expect("small space");
    lie_family(v, &[], &[(2, 0, 0, a), (2, 0, 1, c), (2, 1, 0, b), (2, 1, 1, d)])
}

/// Crossed module `R → aff(1)`: `∂h = e₂`, `[e₁, e₂] = e₂`, `e₁ · h = h`.
pub fn affine_crossed_module() -> BracketFamily {
    let v = GradedSpace::from_pairs(&[(-1, 1), (0, 2)]).expect("small space");
    // basis: 0 = h, 1 = e₁, 2 = e₂
    lie_family(v, &[(0, 2, 1)], &[(1, 2, 2, 1), (1, 0, 0, 1)])
}

/// `so(3) ⊕ so(3)[1]` with `d` the identity onto degree zero.
pub fn so3_cone() -> BracketFamily {
    let v = GradedSpace::from_pairs(&[(-1, 3), (0, 3)]).expect("small space");
    // basis: 0..3 = s e_i, 3..6 = e_i
    let mut bracket = Vec::new();
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        bracket.push((3 + i, 3 + j, 3 + k, 1));
        bracket.push((3 + i, j, k, 1));
        bracket.push((3 + j, i, k, -1));
    }
    lie_family(v, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)], &bracket)
}

/// Named example families.
pub fn example(name: &str) -> Option<BracketFamily> {
    Some(match name {
        "so3" => so3(),
        "bianchi" => bianchi(1, 2, 0, 3),
        "heisenberg" => {
            let v = GradedSpace::from_pairs(&[(0, 3)]).expect("small space");
            lie_family(v, &[], &[(0, 1, 2, 1)])
        }
        "crossed-module" => affine_crossed_module(),
        "so3-cone" => so3_cone(),
        _ => return None,
    })
}

pub const EXAMPLES: [&str; 5] = ["so3", "bianchi", "heisenberg", "crossed-module", "so3-cone"];

fn degree_key(d: i64) -> String {
    d.to_string()
}

fn parse_degree(v: &Value) -> Result<i64, Error> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| Error::Json(format!("bad degree {s:?}"))),
        Value::Number(n) => n.as_i64().ok_or_else(|| Error::Json(format!("bad degree {n}"))),
        _ => Err(Error::Json(format!("bad degree {v}"))),
    }
}

fn parse_label(space: &GradedSpace, v: &Value) -> Result<usize, Error> {
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Json(format!("bad basis label {v}")))?;
    let d = parse_degree(&arr[0])?;
    let k = arr[1].as_u64().ok_or_else(|| Error::Json(format!("bad basis index {}", arr[1])))? as usize;
    space.index(d, k).ok_or_else(|| Error::Json(format!("no basis element ({d}, {k})")))
}

fn parse_rational(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::String(s) => s.trim().parse::<Rational>().ok().ok_or_else(|| Error::Json(format!("bad coefficient {s:?}"))),
        Value::Number(n) => n.as_i64().map(int).ok_or_else(|| Error::Json(format!("bad coefficient {n}"))),
        _ => Err(Error::Json(format!("bad coefficient {v}"))),
    }
}

impl BracketFamily {
    pub fn to_json(&self) -> Value {
        let dims: serde_json::Map<String, Value> =
            self.space.dims().iter().map(|(d, n)| (degree_key(*d), json!(n))).collect();
        let label = |b: usize| {
            let (d, k) = self.space.label(b);
            json!([degree_key(d), k])
        };
        let brackets: Vec<Value> = self
            .entries()
            .flat_map(|(bs, v)| {
                v.iter().map(move |(out, c)| {
                    json!({
                        "arity": bs.len(),
                        "in": bs.iter().map(|&b| label(b)).collect::<Vec<_>>(),
                        "out": label(*out),
                        "coeff": fmt_rational(c),
                    })
                })
            })
            .collect();
        json!({ "dims": dims, "convention": self.convention.name(), "brackets": brackets })
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let dims = v.get("dims").and_then(Value::as_object).ok_or_else(|| Error::Json("missing \"dims\"".into()))?;
        let mut d = BTreeMap::new();
        for (k, n) in dims {
            let deg = parse_degree(&Value::String(k.clone()))?;
            let n = n.as_u64().ok_or_else(|| Error::Json(format!("bad dimension for degree {k}")))?;
            d.insert(deg, n as usize);
        }
        let space = GradedSpace::new(d)?;
        let convention = match v.get("convention").and_then(Value::as_str) {
            None | Some("anti") => Convention::Anti,
            Some("sym") => Convention::Sym,
            Some(other) => return Err(Error::Json(format!("unknown convention {other:?}"))),
        };
        let mut f = BracketFamily::new(space, convention);
        let empty = Vec::new();
        let entries = match v.get("brackets") {
            None => &empty,
            Some(b) => b.as_array().ok_or_else(|| Error::Json("\"brackets\" must be a list".into()))?,
        };
        for e in entries {
            let ins = e.get("in").and_then(Value::as_array).ok_or_else(|| Error::Json("bracket without \"in\"".into()))?;
            let bs: Vec<usize> = ins.iter().map(|x| parse_label(&f.space, x)).collect::<Result<_, _>>()?;
            if let Some(a) = e.get("arity") {
                if a.as_u64() != Some(bs.len() as u64) {
                    return Err(Error::Json(format!("arity {a} does not match {} inputs", bs.len())));
                }
            }
            let out = parse_label(&f.space, e.get("out").ok_or_else(|| Error::Json("bracket without \"out\"".into()))?)?;
            let c = e.get("coeff").map(parse_rational).transpose()?.unwrap_or_else(Rational::one);
            f.add(&bs, out, &c)?;
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng;

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 1, 1]), 1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]), -1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]), 1);
        // σ = (2 3 1): w₁w₂w₃ ↦ w₂w₃w₁ moves the even w₃ and the odd w₂ past w₁
        let s = koszul_sign(&[1, 2, 0], &[1, 1, 0]);
        assert_eq!(s, -1);
        assert_eq!(s, koszul_sign_by_transpositions(&[1, 2, 0], &[1, 1, 0]));
        for p in (0..4).permutations(4) {
            for degs in [[1, 0, -1, 2], [1, 1, 1, 1], [-3, -1, 0, 0]] {
                assert_eq!(koszul_sign(&p, &degs), koszul_sign_by_transpositions(&p, &degs));
            }
        }
    }

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(1, 2), vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 0, 1]]);
        assert_eq!(unshuffles(3, 0), vec![vec![0, 1, 2]]);
        let by_filter: Vec<Vec<usize>> =
            (0..4).permutations(4).filter(|p| p[0] < p[1] && p[2] < p[3]).sorted().collect();
        assert_eq!(unshuffles(2, 2), by_filter);
        assert_eq!(by_filter.len(), 6);
    }

    #[test]
    fn decalage_examples() {
        assert_eq!(decalage_sign(&[-1]), 1);
        assert_eq!(decalage_sign(&[-1, 0]), -1);
        assert_eq!(decalage_sign(&[0, -1]), 1);
        assert_eq!(decalage_sign(&[-1, -1, 0]), -1);
    }

    #[test]
    fn antisymmetry_completion() {
        let f = so3();
        assert_eq!(f.eval(&[1, 0]), Vector::from([(2, int(-1))]));
        assert!(f.eval(&[0, 0]).is_empty());
        let mut g = BracketFamily::new(GradedSpace::from_pairs(&[(0, 1), (-1, 1)]).unwrap(), Convention::Anti);
        // odd elements commute under l₂
        g.add(&[0, 0], 1, &int(1)).unwrap_err();
        let mut h = BracketFamily::new(GradedSpace::from_pairs(&[(-1, 2), (-2, 1)]).unwrap(), Convention::Anti);
        h.add(&[1, 1], 0, &int(1)).unwrap();
        h.add(&[1, 2], 0, &int(1)).unwrap();
        assert_eq!(h.eval(&[2, 1]), h.eval(&[1, 2]));
        assert!(matches!(h.add(&[1], 0, &int(1)), Err(Error::Brackets(_))));
    }

    #[test]
    fn dgla_examples_satisfy_jacobi() {
        for name in EXAMPLES {
            let f = example(name).unwrap();
            assert!(nonzero_jacobiators(&f, 3).is_empty(), "{name}");
        }
        let mut broken = so3();
        broken.add(&[0, 1], 2, &int(1)).unwrap();
        broken.add(&[0, 2], 0, &int(1)).unwrap();
        assert!(!nonzero_jacobiators(&broken, 3).is_empty());
        let zero = BracketFamily::new(GradedSpace::from_pairs(&[(0, 2)]).unwrap(), Convention::Anti);
        assert!(nonzero_jacobiators(&zero, 3).is_empty());
    }

    #[test]
    fn transport_of_random_families() {
        let mut r = rng(7);
        let spaces: [&[(i64, usize)]; 4] =
            [&[(-1, 2), (0, 1)], &[(-1, 1), (0, 2)], &[(-1, 2), (0, 2)], &[(-3, 1), (-2, 1), (-1, 1), (0, 3)]];
        for dims in spaces {
            let v = GradedSpace::from_pairs(dims).unwrap();
            let n = if v.dim() > 4 { 4 } else { 3 };
            for _ in 0..3 {
                let l = random_family(&mut r, &v, Convention::Anti, n);
                assert!(!nonzero_jacobiators(&l, n).is_empty());
                assert!(transport_mismatches(&l, n).unwrap().is_empty());
                let q = decalage_transport(&l).unwrap();
                assert_eq!(decalage_inverse(&q).unwrap(), l);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = affine_crossed_module();
        let back = BracketFamily::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let text = r#"{"dims": {"-1": 2, "0": 1}, "brackets": [{"arity": 2, "in": [["0", 0], ["-1", 1]], "out": ["-1", 0], "coeff": "1/2"}]}"#;
        let g = BracketFamily::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(g.eval(&[1, 2]), Vector::from([(0, crate::expr::rat(-1, 2))]));
        let bad = r#"{"dims": {"-1": 2, "0": 1}, "brackets": [{"arity": 2, "in": [["-1", 0], ["-1", 1]], "out": ["-1", 0]}]}"#;
        assert!(BracketFamily::from_json(&serde_json::from_str(bad).unwrap()).is_err());
    }
}
