//! The `varc` command line: problem input, one subcommand per construction,
//! text / JSON / LaTeX reports.
//!
//! Exit codes: 0 when every check passes, 2 when a check fails or a
//! derivation cannot be completed, 1 on parse and usage errors.

use std::ffi::OsString;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use rand::Rng;
use serde_json::{json, Value};

use crate::ansatz::Bounds;
use crate::error::Error;
use crate::euler::{euler_lagrange, exterior_euler};
use crate::expr::{CoordSystem, Expr};
use crate::form::LocalForm;
use crate::jet::{bracket_evolutionary, bracket_insular, EvolutionaryVF, InsularVF};
use crate::linf::graded::{self, BracketFamily, Convention, GradedSpace, MAX_ARITY};
use crate::linf::{
    d_exact_difference, deformed_bracket, deformed_bracket_by_depth, deformed_bracket_depth_residual,
    deformed_bracket_hamiltonian_residual, insertion_cochain_check, l1, l2_hamiltonian_residual, l2_pairs,
    pair_jacobiator, surface_relation_residual, ObservableElement,
};
use crate::noether::{
    check_hamiltonian_pair, check_symplectic, find_hamiltonian_form, is_symmetry, noether2_identity,
    noether_current_with, noether_pair_bracket, noether_pair_jacobi, noether_residual, universal_current_check,
    GaugeAction, HamiltonianPair, NoetherPair,
};
use crate::parse::{parse_form, parse_gauge, parse_pair, parse_vector_field};
use crate::random;
use crate::variational::{first_order_lambda1, theory_by_name, verify_fundamental, FundamentalData};

#[derive(Parser, Debug)]
#[command(name = "varc", version, about = "Variational bicomplex calculations with exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Euler-Lagrange form and its components
    El(Options),
    /// The boundary form lambda1
    Lambda1(Options),
    /// Poincare-Cartan forms omega1, omega and the Lepagean L + lambda1
    Pc(Options),
    /// Replay the fundamental formulae
    VerifyFf(Options),
    /// Check that evolutionary fields are symmetries
    Symcheck(Options),
    /// Conserved currents of symmetries
    Noether(Options),
    /// Bracket of Noether pairs (--xi) or of Hamiltonian pairs (--pair)
    Bracket(Options),
    /// Noether identities of a gauge symmetry
    Noether2(Options),
    /// Check Hamiltonian pairs, finding zeta for bare fields
    Hampair(Options),
    /// Check that insular fields are symplectic
    Symplectic(Options),
    /// l1, l2 and the arity-three Jacobiator on Hamiltonian pairs
    LinfJacobi(Options),
    /// Jacobiators and decalage transport of finite bracket families
    GradedCheck(Options),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Args, Debug, Clone, Default)]
struct Options {
    /// Problem file of `key: value` lines; command-line flags take precedence
    #[arg(long)]
    problem: Option<String>,
    /// Base coordinates, e.g. `x,t`
    #[arg(long)]
    coords: Option<String>,
    /// Fiber coordinates, e.g. `u`
    #[arg(long)]
    fields: Option<String>,
    /// Lagrangian density (or a (0, m)-form)
    #[arg(long)]
    lagrangian: Option<String>,
    /// A bundled theory supplying coordinates and Lagrangian
    #[arg(long)]
    theory: Option<String>,
    /// Vector field literal `ev{..}`, `tot{..}` or `ins{..}`; repeatable
    #[arg(long)]
    xi: Vec<String>,
    /// Total part `tot{..}` added to the --xi of the same position; repeatable
    #[arg(long)]
    total: Vec<String>,
    /// Hamiltonian pair literal `pair{<field>; <form>}`; repeatable
    #[arg(long)]
    pair: Vec<String>,
    /// Gauge action literal `gauge[psi]{u: ..}`
    #[arg(long)]
    gauge: Option<String>,
    /// Witness A with d A = L_xi L for the --xi of the same position
    #[arg(long)]
    witness: Vec<String>,
    /// Bracket family: an example name, a JSON file or inline JSON
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Jet order bound for ansatz searches
    #[arg(long)]
    order_bound: Option<usize>,
    /// Polynomial degree bound for ansatz searches
    #[arg(long)]
    degree_bound: Option<u32>,
    /// Seed for random bracket families
    #[arg(long)]
    seed: Option<u64>,
    /// Largest Jacobiator arity checked by graded-check
    #[arg(long)]
    max_arity: Option<usize>,
    /// Worker threads
    #[arg(long)]
    jobs: Option<usize>,
}

/// Everything a subcommand may need, parsed and resolved.
#[derive(Clone, Debug, Default)]
pub struct Problem {
    pub coords: Option<Arc<CoordSystem>>,
    pub lagrangian: Option<LocalForm>,
    pub fields: Vec<InsularVF>,
    pub pairs: Vec<HamiltonianPair>,
    pub gauge: Option<GaugeAction>,
    pub witnesses: Vec<LocalForm>,
    pub family: Option<(String, BracketFamily)>,
    pub order_bound: Option<usize>,
    pub degree_bound: Option<u32>,
    pub seed: Option<u64>,
    pub max_arity: Option<usize>,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Fail {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail::Usage(msg.into()))
}

/// Reads `key: value` lines into `o`, keeping values already set on the
/// command line.
fn merge_problem_file(o: &mut Options, text: &str) -> Result<(), Error> {
    let mut lists: Vec<(&str, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once(':') else {
            return Err(Error::Parse { line: n + 1, col: 1, msg: "expected 'key: value'".into() });
        };
        let (k, v) = (k.trim(), v.trim().to_string());
        let bad = |what: &str| Error::Parse { line: n + 1, col: raw.find(':').unwrap_or(0) + 2, msg: format!("bad {what}") };
        fn set<T>(slot: &mut Option<T>, v: T) {
            if slot.is_none() {
                *slot = Some(v);
            }
        }
        match k {
            "coords" => set(&mut o.coords, v),
            "fields" => set(&mut o.fields, v),
            "lagrangian" => set(&mut o.lagrangian, v),
            "theory" => set(&mut o.theory, v),
            "gauge" => set(&mut o.gauge, v),
            "family" => set(&mut o.family, v),
            "xi" | "total" | "pair" | "witness" => lists.push((k, v)),
            "format" => set(&mut o.format, Format::from_str(&v, true).map_err(|_| bad("format"))?),
            "order-bound" => set(&mut o.order_bound, v.parse().map_err(|_| bad("order bound"))?),
            "degree-bound" => set(&mut o.degree_bound, v.parse().map_err(|_| bad("degree bound"))?),
            "seed" => set(&mut o.seed, v.parse().map_err(|_| bad("seed"))?),
            "max-arity" => set(&mut o.max_arity, v.parse().map_err(|_| bad("arity"))?),
            "jobs" => set(&mut o.jobs, v.parse().map_err(|_| bad("job count"))?),
            _ => return Err(Error::Parse { line: n + 1, col: 1, msg: format!("unknown key {k:?}") }),
        }
    }
    for key in ["xi", "total", "pair", "witness"] {
        let slot = match key {
            "xi" => &mut o.xi,
            "total" => &mut o.total,
            "pair" => &mut o.pair,
            _ => &mut o.witness,
        };
        if slot.is_empty() {
            slot.extend(lists.iter().filter(|(k, _)| *k == key).map(|(_, v)| v.clone()));
        }
    }
    Ok(())
}

fn parse_lagrangian(cs: &Arc<CoordSystem>, src: &str) -> Result<LocalForm, Error> {
    let f = parse_form(cs, src)?;
    match f.bidegree() {
        None => Ok(f),
        Some((0, 0)) => Ok(LocalForm::top(cs, f.coefficient(&crate::form::Basis::empty()))),
        Some((0, q)) if q == cs.m() => Ok(f),
        Some(b) => Err(Error::Bidegree(format!("Lagrangian has bidegree {b:?}, expected (0, {})", cs.m()))),
    }
}

pub fn parse_family(src: &str) -> Result<(String, BracketFamily), Error> {
    if let Some(f) = graded::example(src) {
        return Ok((src.to_string(), f));
    }
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else {
        std::fs::read_to_string(src).map_err(|e| Error::Json(format!("{src}: {e}")))?
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Json(e.to_string()))?;
    let name = v.get("name").and_then(Value::as_str).unwrap_or(src).to_string();
    Ok((name, BracketFamily::from_json(&v)?))
}

impl Problem {
    fn from_options(o: &Options) -> Result<Problem, Error> {
        let theory = match &o.theory {
            Some(name) => Some(theory_by_name(name).ok_or_else(|| Error::Coords(format!("unknown theory {name:?}")))?),
            None => None,
        };
        let coords = match (&o.coords, &o.fields, &theory) {
            (Some(b), Some(f), _) => Some(Arc::new(CoordSystem::from_lists(b, f)?)),
            (None, None, Some(t)) => Some(t.coords.clone()),
            (None, None, None) => None,
            _ => return Err(Error::Coords("--coords and --fields go together".into())),
        };
        let mut p = Problem {
            order_bound: o.order_bound,
            degree_bound: o.degree_bound,
            seed: o.seed,
            max_arity: o.max_arity,
            family: o.family.as_deref().map(parse_family).transpose()?,
            ..Problem::default()
        };
        let Some(cs) = coords else {
            if o.lagrangian.is_some() || !o.xi.is_empty() || !o.pair.is_empty() || o.gauge.is_some() {
                return Err(Error::Coords("no coordinates given (use --coords/--fields or --theory)".into()));
            }
            return Ok(p);
        };
        p.lagrangian = match (&o.lagrangian, &theory) {
            (Some(src), _) => Some(parse_lagrangian(&cs, src)?),
            (None, Some(t)) if o.coords.is_none() => Some(t.lagrangian.clone()),
            _ => None,
        };
        if o.total.len() > o.xi.len().max(1) {
            return Err(Error::Coords("more --total fields than --xi fields".into()));
        }
        p.fields = o.xi.iter().map(|s| parse_vector_field(&cs, s)).collect::<Result<_, _>>()?;
        for (k, s) in o.total.iter().enumerate() {
            let x = parse_vector_field(&cs, s)?;
            if !x.ev.is_zero() {
                return Err(Error::Coords("--total takes a 'tot{..}' field".into()));
            }
            match p.fields.get_mut(k) {
                Some(chi) => chi.tot = chi.tot.add(&x.tot),
                None => p.fields.push(x),
            }
        }
        p.pairs = o
            .pair
            .iter()
            .map(|s| parse_pair(&cs, s).map(|(chi, zeta)| HamiltonianPair { chi, zeta }))
            .collect::<Result<_, _>>()?;
        p.gauge = o.gauge.as_deref().map(|s| parse_gauge(&cs, s)).transpose()?;
        p.witnesses = o.witness.iter().map(|s| parse_form(&cs, s)).collect::<Result<_, _>>()?;
        p.coords = Some(cs);
        Ok(p)
    }

    fn lagrangian(&self) -> Result<&LocalForm, Fail> {
        match &self.lagrangian {
            Some(l) => Ok(l),
            None => usage("a Lagrangian is required (--lagrangian or --theory)"),
        }
    }

    fn data(&self) -> Result<FundamentalData, Fail> {
        Ok(FundamentalData::new(self.lagrangian()?)?)
    }

    fn bounds(&self) -> Option<Bounds> {
        if self.order_bound.is_none() && self.degree_bound.is_none() {
            return None;
        }
        let l = self.lagrangian.clone().unwrap_or_else(|| LocalForm::zero(self.coords.as_ref().expect("coordinates")));
        Some(Bounds::or_default(self.order_bound, self.degree_bound, &l))
    }

    fn evolutionary(&self, min: usize, max: usize) -> Result<Vec<EvolutionaryVF>, Fail> {
        if self.fields.len() < min || self.fields.len() > max {
            return usage(if min == max {
                format!("expected {min} --xi field(s), got {}", self.fields.len())
            } else {
                format!("expected {min} to {max} --xi fields, got {}", self.fields.len())
            });
        }
        if self.fields.iter().any(|c| !c.tot.is_zero()) {
            return usage("--xi must be evolutionary ('ev{..}') here");
        }
        Ok(self.fields.iter().map(|c| c.ev.clone()).collect())
    }
}

enum Item {
    Expr(String, Expr),
    Form(String, LocalForm),
    Field(String, InsularVF),
    Note(String, String),
    Check(String, LocalForm),
    Flag(String, bool, String),
    Family(String, BracketFamily),
}

struct Report {
    command: &'static str,
    coords: Option<Arc<CoordSystem>>,
    items: Vec<Item>,
}

impl Report {
    fn new(command: &'static str, p: &Problem) -> Self {
        Report { command, coords: p.coords.clone(), items: Vec::new() }
    }

    fn cs(&self) -> &CoordSystem {
        self.coords.as_deref().expect("report with coordinates")
    }

    fn expr(&mut self, name: impl Into<String>, e: Expr) {
        self.items.push(Item::Expr(name.into(), e));
    }

    fn form(&mut self, name: impl Into<String>, w: LocalForm) {
        self.items.push(Item::Form(name.into(), w));
    }

    fn field(&mut self, name: impl Into<String>, chi: InsularVF) {
        self.items.push(Item::Field(name.into(), chi));
    }

    fn note(&mut self, name: impl Into<String>, v: impl Into<String>) {
        self.items.push(Item::Note(name.into(), v.into()));
    }

    fn check(&mut self, name: impl Into<String>, residual: LocalForm) {
        self.items.push(Item::Check(name.into(), residual));
    }

    fn flag(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.items.push(Item::Flag(name.into(), ok, detail.into()));
    }

    fn passed(&self) -> bool {
        self.items.iter().all(|i| match i {
            Item::Check(_, r) => r.is_zero(),
            Item::Flag(_, ok, _) => *ok,
            _ => true,
        })
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable report");
                s.push('\n');
                s
            }
            _ => self.items.iter().map(|i| self.line(i, format == Format::Latex) + "\n").collect(),
        }
    }

    fn line(&self, item: &Item, latex: bool) -> String {
        let form = |w: &LocalForm| if latex { w.latex().to_string() } else { w.to_text() };
        match item {
            Item::Expr(n, e) => {
                let cs = self.cs();
                format!("{n} = {}", if latex { e.latex(cs).to_string() } else { e.to_text(cs) })
            }
            Item::Form(n, w) => format!("{n} = {}", form(w)),
            Item::Field(n, chi) => {
                let cs = self.cs();
                format!("{n} = {}", if latex { chi.to_latex(cs) } else { chi.to_text(cs) })
            }
            Item::Note(n, v) => format!("{n}: {v}"),
            Item::Check(n, r) if r.is_zero() => format!("PASS {n}"),
            Item::Check(n, r) => format!("FAIL {n}\n  residual = {}", form(r)),
            Item::Flag(n, true, _) => format!("PASS {n}"),
            Item::Flag(n, false, d) => format!("FAIL {n}: {d}"),
            Item::Family(n, f) => format!("family {n}: {}", serde_json::to_string(&f.to_json()).expect("json")),
        }
    }

    fn to_json(&self) -> Value {
        let mut results = Vec::new();
        let mut residuals = Vec::new();
        for item in &self.items {
            results.push(match item {
                Item::Expr(n, e) => {
                    let cs = self.coords.as_ref().expect("coordinates");
                    json!({"name": n, "kind": "expression", "text": e.to_text(cs),
                           "form": LocalForm::function(cs, e.clone()).to_json()})
                }
                Item::Form(n, w) => json!({"name": n, "kind": "form", "text": w.to_text(), "form": w.to_json()}),
                Item::Field(n, chi) => json!({"name": n, "kind": "vector-field", "text": chi.to_text(self.cs())}),
                Item::Note(n, v) => json!({"name": n, "kind": "note", "text": v}),
                Item::Check(n, r) => {
                    residuals.push(json!({"name": n, "zero": r.is_zero(), "form": r.to_json()}));
                    json!({"name": n, "kind": "check", "passed": r.is_zero()})
                }
                Item::Flag(n, ok, d) => json!({"name": n, "kind": "check", "passed": ok, "detail": d}),
                Item::Family(n, f) => json!({"name": n, "kind": "bracket-family", "family": f.to_json()}),
            });
        }
        json!({
            "command": self.command,
            "status": if self.passed() { "ok" } else { "failed" },
            "results": results,
            "residuals": residuals,
        })
    }
}

/// Replaces `#` by the 1-based position, or by nothing for a single input.
fn indexed(name: &str, k: usize, n: usize) -> String {
    name.replace('#', &if n == 1 { String::new() } else { (k + 1).to_string() })
}

fn cmd_el(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("el", p);
    let el = euler_lagrange(p.lagrangian()?)?;
    for (a, c) in el.source_components().into_iter().enumerate() {
        let name = format!("EL[{}]", r.cs().fiber_name(a));
        r.expr(name, c);
    }
    r.form("EL", el);
    Ok(r)
}

fn branch_name(fd: &FundamentalData) -> &'static str {
    match fd.branch {
        crate::variational::SignBranch::Literal => "literal",
        crate::variational::SignBranch::Flipped => "flipped",
    }
}

fn cmd_lambda1(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("lambda1", p);
    let l = p.lagrangian()?;
    let fd = p.data()?;
    r.form("lambda1", fd.lambda1.clone());
    r.note("sign branch", branch_name(&fd));
    if l.max_jet_order() <= 1 {
        r.check("lambda1 = first-order formula", first_order_lambda1(l)?.sub(&fd.lambda1));
    }
    r.check("d lambda1 = EL - delta L", fd.lambda1.d_h().sub(&fd.el).add(&l.d_v()));
    Ok(r)
}

fn cmd_pc(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("pc", p);
    let fd = p.data()?;
    r.form("omega1", fd.omega1.clone());
    r.form("omega", fd.omega.clone());
    r.form("L + lambda1", fd.lepagean.clone());
    r.check("D omega = 0", fd.omega.d_total());
    Ok(r)
}

fn cmd_verify_ff(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("verify-ff", p);
    let rep = verify_fundamental(p.lagrangian()?)?;
    r.note("sign branch", branch_name(&rep.data));
    for c in rep.checks {
        r.check(c.name, c.residual);
    }
    Ok(r)
}

fn cmd_symcheck(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("symcheck", p);
    let fd = p.data()?;
    let xis = p.evolutionary(1, usize::MAX)?;
    let n = xis.len();
    for (k, xi) in xis.iter().enumerate() {
        let (_, eta) = is_symmetry(xi, &fd.lagrangian)?;
        r.check(indexed("E(L_xi# L) = 0", k, n), exterior_euler(&eta)?);
        r.form(indexed("L_xi# L", k, n), eta);
    }
    for (a, b) in (0..n).tuple_combinations() {
        r.check(
            format!("d i_xi{} i_xi{} omega1 + i_xi{} i_xi{} delta EL = 0", b + 1, a + 1, b + 1, a + 1),
            universal_current_check(&xis[a], &xis[b], &fd),
        );
    }
    Ok(r)
}

/// Currents for the given fields; non-symmetries are reported as failures.
fn currents(p: &Problem, fd: &FundamentalData, xis: &[EvolutionaryVF], r: &mut Report) -> Result<Vec<NoetherPair>, Fail> {
    let n = xis.len();
    let mut out = Vec::new();
    for (k, xi) in xis.iter().enumerate() {
        let (ok, eta) = is_symmetry(xi, &fd.lagrangian)?;
        if !ok {
            r.check(indexed("E(L_xi# L) = 0", k, n), exterior_euler(&eta)?);
            continue;
        }
        let pair = noether_current_with(xi, fd, p.witnesses.get(k), p.bounds())?;
        r.form(indexed("Z#", k, n), pair.z.clone());
        r.check(indexed("d Z# - i_xi# EL = 0", k, n), noether_residual(&pair, &fd.el));
        out.push(pair);
    }
    Ok(out)
}

fn cmd_noether(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("noether", p);
    let fd = p.data()?;
    let xis = p.evolutionary(1, usize::MAX)?;
    currents(p, &fd, &xis, &mut r)?;
    Ok(r)
}

fn cmd_bracket(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("bracket", p);
    let fd = p.data()?;
    if !p.pairs.is_empty() {
        let ps = hamiltonian_inputs(p, &fd, &mut r)?;
        if !r.passed() {
            return Ok(r);
        }
        if ps.len() != 2 {
            return usage(format!("the deformed bracket takes 2 Hamiltonian pairs, got {}", ps.len()));
        }
        let (a, b) = (&ps[0], &ps[1]);
        r.field("[chi1, chi2]", bracket_insular(&a.chi, &b.chi));
        r.form("[zeta1, zeta2]", deformed_bracket(a, b, &fd)?);
        for (k, w) in deformed_bracket_by_depth(a, b, &fd)? {
            r.form(format!("[zeta1, zeta2] depth {k}"), w);
        }
        r.check("[zeta1, zeta2] = sum of its depth formulas", deformed_bracket_depth_residual(a, b, &fd)?);
        r.check("D[zeta1, zeta2] = i_[chi1,chi2] omega", deformed_bracket_hamiltonian_residual(a, b, &fd)?);
        r.check("surface relation", surface_relation_residual(a, b, &fd)?);
        let l2 = l2_pairs(a, b, &fd)?;
        r.form("l2 form part", l2.zeta.clone());
        let alpha = d_exact_difference(a, b, &fd, p.bounds())?;
        r.form("alpha", alpha.clone());
        r.check("D alpha = l2 - [zeta1, zeta2]", alpha.d_total().sub(&l2.zeta.sub(&deformed_bracket(a, b, &fd)?)));
        return Ok(r);
    }
    let xis = p.evolutionary(2, 3)?;
    let np = currents(p, &fd, &xis, &mut r)?;
    if np.len() < xis.len() {
        return Ok(r);
    }
    let b = noether_pair_bracket(&np[0], &np[1], &fd)?;
    r.field("[xi1, xi2]", bracket_evolutionary(&xis[0], &xis[1]).to_insular(r.cs()));
    r.form("Z12", b.z.clone());
    r.check("d Z12 - i_[xi1,xi2] EL = 0", noether_residual(&b, &fd.el));
    if np.len() == 3 {
        let j = noether_pair_jacobi([&np[0], &np[1], &np[2]], &fd)?;
        let cs = r.cs();
        let v = j.vector_part.to_text(cs);
        r.flag("Jacobiator vector part = 0", j.vector_part.is_zero(), v);
        r.form("Jacobiator current part", j.current_part);
        r.flag("Jacobiator current part is d-exact", j.current_exact, "not d-exact");
    }
    Ok(r)
}

fn cmd_noether2(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("noether2", p);
    let Some(g) = &p.gauge else {
        return usage("noether2 needs --gauge");
    };
    let ids = noether2_identity(g, p.lagrangian()?)?;
    let cs = p.coords.clone().expect("coordinates");
    for (name, e) in g.params.iter().zip(ids) {
        r.expr(format!("N[{name}]"), e.clone());
        r.check(format!("N[{name}] = 0"), LocalForm::function(&cs, e));
    }
    Ok(r)
}

fn depth_checks(r: &mut Report, name: &str, rep: &crate::noether::DepthReport) {
    for (k, w) in &rep.residuals {
        r.check(format!("{name}, depth {k}"), w.clone());
    }
}

/// `--pair` inputs followed by `--xi` fields completed with some `ζ`.
fn hamiltonian_inputs(p: &Problem, fd: &FundamentalData, r: &mut Report) -> Result<Vec<HamiltonianPair>, Fail> {
    let mut out = p.pairs.clone();
    let n = p.fields.len();
    for (k, chi) in p.fields.iter().enumerate() {
        let rep = check_symplectic(chi, fd);
        if !rep.passed() {
            depth_checks(r, &indexed("D i_chi# omega", k, n), &rep);
            continue;
        }
        let zeta = find_hamiltonian_form(chi, fd, p.bounds())?;
        out.push(HamiltonianPair { chi: chi.clone(), zeta });
    }
    if out.is_empty() {
        return usage("give Hamiltonian pairs with --pair or symplectic fields with --xi");
    }
    Ok(out)
}

fn cmd_hampair(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("hampair", p);
    let fd = p.data()?;
    let ps = hamiltonian_inputs(p, &fd, &mut r)?;
    let n = ps.len();
    for (k, pair) in ps.iter().enumerate() {
        r.field(indexed("chi#", k, n), pair.chi.clone());
        r.form(indexed("zeta#", k, n), pair.zeta.clone());
        let rep = check_hamiltonian_pair(pair, &fd);
        depth_checks(&mut r, &indexed("D zeta# - i_chi# omega", k, n), &rep.depths);
        r.flag(indexed("surface part of pair# is a Noether pair", k, n), rep.surface_is_noether, "d Z differs from i_xi EL");
    }
    Ok(r)
}

fn cmd_symplectic(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("symplectic", p);
    let fd = p.data()?;
    if p.fields.is_empty() {
        return usage("symplectic needs --xi");
    }
    let n = p.fields.len();
    for (k, chi) in p.fields.iter().enumerate() {
        r.field(indexed("chi#", k, n), chi.clone());
        depth_checks(&mut r, &indexed("D i_chi# omega", k, n), &check_symplectic(chi, &fd));
    }
    Ok(r)
}

fn cmd_linf_jacobi(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("linf-jacobi", p);
    let fd = p.data()?;
    let ps = hamiltonian_inputs(p, &fd, &mut r)?;
    if !r.passed() {
        return Ok(r);
    }
    let n = ps.len();
    for (k, pair) in ps.iter().enumerate() {
        let rep = check_hamiltonian_pair(pair, &fd);
        depth_checks(&mut r, &indexed("D zeta# - i_chi# omega", k, n), &rep.depths);
        let v = ObservableElement::pair(pair.clone());
        r.check(indexed("l1 l1 pair# = 0", k, n), l1(&l1(&v)).form_part().clone());
    }
    if !r.passed() {
        return Ok(r);
    }
    for (a, b) in (0..n).tuple_combinations() {
        let l2 = l2_pairs(&ps[a], &ps[b], &fd)?;
        let tag = format!("[{},{}]", a + 1, b + 1);
        r.field(format!("l2{tag} vector part"), l2.chi);
        r.form(format!("l2{tag} form part"), l2.zeta);
        r.check(format!("D l2{tag} = i_[chi,chi'] omega"), l2_hamiltonian_residual(&ps[a], &ps[b], &fd)?);
    }
    if (2..=3).contains(&n) {
        let chis: Vec<InsularVF> = ps.iter().map(|q| q.chi.clone()).collect();
        r.check("D i_chi omega = i_(d_CE chi) omega", insertion_cochain_check(&chis, &fd.omega)?);
    }
    for (a, b, c) in (0..n).tuple_combinations() {
        let tag = format!("[{},{},{}]", a + 1, b + 1, c + 1);
        let j = pair_jacobiator([&ps[a], &ps[b], &ps[c]], &fd)?;
        r.field(format!("J3{tag} vector part"), j.vector.clone());
        r.form(format!("J3{tag} form part"), j.form.clone());
        if let Some(w) = &j.witness {
            r.form(format!("J3{tag} primitive"), w.clone());
        }
        r.flag(format!("J3{tag} is D-exact"), j.is_d_exact(), "no primitive found");
    }
    Ok(r)
}

fn dims_text(s: &GradedSpace) -> String {
    s.dims().iter().map(|(d, n)| format!("{d}:{n}")).join(", ")
}

fn label_tuple(s: &GradedSpace, bs: &[usize]) -> String {
    bs.iter().map(|&b| format!("{:?}", s.label(b))).join(" ")
}

const RANDOM_SPACES: [&[(i64, usize)]; 4] =
    [&[(-1, 2), (0, 1)], &[(-1, 1), (0, 2)], &[(-1, 2), (0, 2)], &[(-2, 1), (-1, 1), (0, 2)]];

fn cmd_graded_check(p: &Problem) -> Result<Report, Fail> {
    let mut r = Report::new("graded-check", p);
    let max_n = p.max_arity.unwrap_or(3);
    if max_n == 0 || max_n > MAX_ARITY {
        return usage(format!("--max-arity must lie in 1..={MAX_ARITY}"));
    }
    let Some((name, f)) = &p.family else {
        let seed = p.seed.unwrap_or(0);
        let mut rng = random::rng(seed);
        r.note("seed", seed.to_string());
        for k in 0..4 {
            let space = GradedSpace::from_pairs(RANDOM_SPACES[rng.gen_range(0..RANDOM_SPACES.len())])?;
            let f = graded::random_family(&mut rng, &space, Convention::Anti, max_n);
            r.note(format!("random family {}", k + 1), format!("dims {}", dims_text(&space)));
            r.note(format!("random family {} nonzero Jacobiators", k + 1), graded::nonzero_jacobiators(&f, max_n).len().to_string());
            let bad = graded::transport_mismatches(&f, max_n)?;
            let detail = bad.first().map(|bs| label_tuple(&space, bs)).unwrap_or_default();
            r.flag(format!("random family {} decalage transport", k + 1), bad.is_empty(), detail);
        }
        return Ok(r);
    };
    r.note("family", name.clone());
    r.note("dims", dims_text(&f.space));
    r.note("convention", f.convention.name());
    r.items.push(Item::Family(name.clone(), f.clone()));
    let nonzero = graded::nonzero_jacobiators(f, max_n);
    for n in 1..=max_n {
        let first = nonzero.iter().find(|(bs, _)| bs.len() == n);
        let detail = first.map(|(bs, _)| format!("nonzero on {}", label_tuple(&f.space, bs))).unwrap_or_default();
        r.flag(format!("Jacobiator of arity {n} vanishes"), first.is_none(), detail);
    }
    let anti = match f.convention {
        Convention::Anti => f.clone(),
        Convention::Sym => graded::decalage_inverse(f)?,
    };
    let bad = graded::transport_mismatches(&anti, max_n)?;
    let detail = bad.first().map(|bs| label_tuple(&f.space, bs)).unwrap_or_default();
    r.flag(format!("decalage transport up to arity {max_n}"), bad.is_empty(), detail);
    Ok(r)
}

fn dispatch(cmd: &Command, p: &Problem) -> Result<Report, Fail> {
    match cmd {
        Command::El(_) => cmd_el(p),
        Command::Lambda1(_) => cmd_lambda1(p),
        Command::Pc(_) => cmd_pc(p),
        Command::VerifyFf(_) => cmd_verify_ff(p),
        Command::Symcheck(_) => cmd_symcheck(p),
        Command::Noether(_) => cmd_noether(p),
        Command::Bracket(_) => cmd_bracket(p),
        Command::Noether2(_) => cmd_noether2(p),
        Command::Hampair(_) => cmd_hampair(p),
        Command::Symplectic(_) => cmd_symplectic(p),
        Command::LinfJacobi(_) => cmd_linf_jacobi(p),
        Command::GradedCheck(_) => cmd_graded_check(p),
    }
}

fn options(cmd: &mut Command) -> &mut Options {
    match cmd {
        Command::El(o)
        | Command::Lambda1(o)
        | Command::Pc(o)
        | Command::VerifyFf(o)
        | Command::Symcheck(o)
        | Command::Noether(o)
        | Command::Bracket(o)
        | Command::Noether2(o)
        | Command::Hampair(o)
        | Command::Symplectic(o)
        | Command::LinfJacobi(o)
        | Command::GradedCheck(o) => o,
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Coords(_) | Error::Json(_) => 1,
        _ => 2,
    }
}

fn fail(code: i32, msg: impl std::fmt::Display) -> Outcome {
    Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let o = options(&mut cli.command);
    if let Some(path) = o.problem.clone() {
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => return fail(1, format!("{path}: {e}")),
        };
        if let Err(e) = merge_problem_file(o, &text) {
            return fail(1, format!("{path}: {e}"));
        }
    }
    let o = o.clone();
    let problem = match Problem::from_options(&o) {
        Ok(p) => p,
        Err(e) => return fail(1, e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(o.jobs.unwrap_or(1).max(1)).build() {
        Ok(p) => p,
        Err(e) => return fail(1, e),
    };
    match pool.install(|| dispatch(&cli.command, &problem)) {
        Ok(report) => Outcome {
            code: if report.passed() { 0 } else { 2 },
            stdout: report.render(o.format.unwrap_or_default()),
            stderr: String::new(),
        },
        Err(Fail::Usage(msg)) => fail(1, msg),
        Err(Fail::Lib(e)) => fail(error_code(&e), e),
    }
}
