//! Recursive-descent parser for expressions, forms and vector-field literals.
//!
//! ```text
//! form    := ["-"] prod (("+" | "-") prod)*
//! prod    := unary (("*" | "/\" | "/") unary)*
//! unary   := "-" unary | power
//! power   := primary ("**" NAT)?
//! primary := NAT | JET | BASE | FUNC | "(" form ")" | "dx(" BASE ")" | "del(" JET ")"
//! FUNC    := IDENT "'"* "(" form ")"
//! ```
//!
//! Vector fields are written `ev{u: ..}`, `tot{x: ..}` or `ins{ev{..}, tot{..}}`,
//! Hamiltonian pairs `pair{<field>; <form>}` and gauge actions
//! `gauge[psi]{u1: psi_x, u2: psi_t}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;
use crate::expr::{Atom, CoordSystem, Expr, Monomial, MultiIndex, Rational};
use crate::form::{Gen, LocalForm};
use crate::jet::{EvolutionaryVF, InsularVF, TotalVF};
use crate::noether::GaugeAction;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Tick,
    Plus,
    Minus,
    Star,
    Pow,
    Slash,
    Wedge,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Semi,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, Error> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut take = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i + take < chars.len() && chars[i + take].is_ascii_digit() {
                    take += 1;
                }
                let s: String = chars[start..start + take].iter().collect();
                Tok::Num(s.parse().unwrap())
            }
            c if c.is_ascii_alphabetic() => {
                while i + take < chars.len() && (chars[i + take].is_ascii_alphanumeric() || chars[i + take] == '_') {
                    take += 1;
                }
                Tok::Ident(chars[i..i + take].iter().collect())
            }
            '\'' => Tok::Tick,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' if chars.get(i + 1) == Some(&'*') => {
                take = 2;
                Tok::Pow
            }
            '*' => Tok::Star,
            '/' if chars.get(i + 1) == Some(&'\\') => {
                take = 2;
                Tok::Wedge
            }
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            other => {
                return Err(Error::Parse { line: l0, col: c0, msg: format!("unexpected character '{other}'") });
            }
        };
        out.push(Token { tok, line: l0, col: c0 });
        i += take;
        col += take;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser<'a> {
    cs: &'a Arc<CoordSystem>,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(cs: &'a Arc<CoordSystem>, src: &str) -> Result<Self, Error> {
        Ok(Parser { cs, toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        let t = &self.toks[self.pos];
        Err(Error::Parse { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), Error> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, Error> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn finish(&mut self) -> Result<(), Error> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn form(&mut self) -> Result<LocalForm, Error> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.next();
            self.product()?.neg()
        } else {
            self.product()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.product()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<LocalForm, Error> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star | Tok::Wedge => {
                    self.next();
                    acc = acc.wedge(&self.unary()?);
                }
                Tok::Slash => {
                    self.next();
                    let d = self.unary()?;
                    let c = as_function(&d).and_then(|e| e.as_constant());
                    match c {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        _ => return self.err("can only divide by a nonzero rational constant"),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LocalForm, Error> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<LocalForm, Error> {
        let base = self.primary()?;
        if *self.peek() != Tok::Pow {
            return Ok(base);
        }
        self.next();
        let Tok::Num(n) = self.peek().clone() else {
            return self.err("expected natural exponent");
        };
        let Some(f) = as_function(&base) else {
            return self.err("only functions can be raised to a power");
        };
        let n: u32 = match n.try_into() {
            Ok(n) => n,
            Err(_) => return self.err("exponent too large"),
        };
        self.next();
        Ok(LocalForm::function(self.cs, f.pow(n)))
    }

    fn primary(&mut self) -> Result<LocalForm, Error> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.next();
                Ok(LocalForm::function(self.cs, Expr::constant(Rational::from_integer(n))))
            }
            Tok::LParen => {
                self.next();
                let f = self.form()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                self.next();
                match (name.as_str(), self.peek()) {
                    ("dx", Tok::LParen) => {
                        self.next();
                        let b = self.ident()?;
                        let Some(i) = self.cs.base_index(&b) else {
                            self.pos -= 1;
                            return self.err(format!("unknown base coordinate '{b}'"));
                        };
                        self.expect(Tok::RParen, "')'")?;
                        Ok(LocalForm::from_gens(self.cs, Expr::one(), vec![Gen::Horiz(i)]))
                    }
                    ("del", Tok::LParen) => {
                        self.next();
                        let j = self.ident()?;
                        let Some((a, idx)) = self.resolve_jet(&j) else {
                            self.pos -= 1;
                            return self.err(format!("unknown jet coordinate '{j}'"));
                        };
                        self.expect(Tok::RParen, "')'")?;
                        Ok(LocalForm::delta(self.cs, a, idx))
                    }
                    (_, Tok::Tick) | (_, Tok::LParen) => {
                        if self.cs.base_index(&name).is_some() || self.resolve_jet(&name).is_some() || name.contains('_') {
                            self.pos -= 1;
                            return self.err(format!("'{name}' cannot be used as a function symbol"));
                        }
                        let mut ticks = 0;
                        while *self.peek() == Tok::Tick {
                            self.next();
                            ticks += 1;
                        }
                        self.expect(Tok::LParen, "'('")?;
                        let arg = self.form()?;
                        let Some(arg) = as_function(&arg) else {
                            return self.err("function argument must be a function");
                        };
                        self.expect(Tok::RParen, "')'")?;
                        Ok(LocalForm::function(self.cs, Expr::func(&name, ticks, arg)))
                    }
                    _ => {
                        if let Some(i) = self.cs.base_index(&name) {
                            return Ok(LocalForm::function(self.cs, Expr::base(i)));
                        }
                        if let Some((a, idx)) = self.resolve_jet(&name) {
                            return Ok(LocalForm::function(self.cs, Expr::jet_mi(a, idx)));
                        }
                        self.pos -= 1;
                        self.err(format!("unknown identifier '{name}'"))
                    }
                }
            }
            Tok::Eof => self.err("unexpected end of input"),
            _ => self.err("unexpected token"),
        }
    }

    fn resolve_jet(&self, s: &str) -> Option<(usize, MultiIndex)> {
        resolve_jet(self.cs, s)
    }

    /// `{name: form, ...}` with names resolved by `key`.
    fn assignments(&mut self, key: impl Fn(&str) -> Option<usize>, what: &str) -> Result<Vec<(usize, LocalForm)>, Error> {
        self.expect(Tok::LBrace, "'{'")?;
        let mut out = Vec::new();
        if *self.peek() == Tok::RBrace {
            self.next();
            return Ok(out);
        }
        loop {
            let name = self.ident()?;
            let Some(k) = key(&name) else {
                self.pos -= 1;
                return self.err(format!("unknown {what} '{name}'"));
            };
            if out.iter().any(|(j, _)| *j == k) {
                self.pos -= 1;
                return self.err(format!("{what} '{name}' given twice"));
            }
            self.expect(Tok::Colon, "':'")?;
            out.push((k, self.form()?));
            match self.next() {
                Tok::Comma => continue,
                Tok::RBrace => return Ok(out),
                _ => {
                    self.pos -= 1;
                    return self.err("expected ',' or '}'");
                }
            }
        }
    }

    fn function_list(&mut self, n: usize, key: impl Fn(&str) -> Option<usize>, what: &str) -> Result<Vec<Expr>, Error> {
        let start = self.pos;
        let items = self.assignments(key, what)?;
        let mut out = vec![Expr::zero(); n];
        for (k, f) in items {
            match as_function(&f) {
                Some(e) => out[k] = e,
                None => {
                    self.pos = start;
                    return self.err("vector field components must be functions");
                }
            }
        }
        Ok(out)
    }

    fn evolutionary(&mut self) -> Result<EvolutionaryVF, Error> {
        let cs = self.cs.clone();
        Ok(EvolutionaryVF::new(self.function_list(cs.e(), |s| cs.fiber_index(s), "field")?))
    }

    fn total(&mut self) -> Result<TotalVF, Error> {
        let cs = self.cs.clone();
        Ok(TotalVF::new(self.function_list(cs.m(), |s| cs.base_index(s), "base coordinate")?))
    }

    fn vector_field(&mut self) -> Result<InsularVF, Error> {
        let kw = self.ident()?;
        match kw.as_str() {
            "ev" => Ok(self.evolutionary()?.to_insular(self.cs)),
            "tot" => Ok(self.total()?.to_insular(self.cs)),
            "ins" => {
                self.expect(Tok::LBrace, "'{'")?;
                let mut chi = InsularVF::zero(self.cs);
                let mut seen = (false, false);
                loop {
                    match self.ident()?.as_str() {
                        "ev" if !seen.0 => {
                            seen.0 = true;
                            chi.ev = self.evolutionary()?;
                        }
                        "tot" if !seen.1 => {
                            seen.1 = true;
                            chi.tot = self.total()?;
                        }
                        _ => {
                            self.pos -= 1;
                            return self.err("expected 'ev{..}' or 'tot{..}' (each at most once)");
                        }
                    }
                    match self.next() {
                        Tok::Comma => continue,
                        Tok::RBrace => return Ok(chi),
                        _ => {
                            self.pos -= 1;
                            return self.err("expected ',' or '}'");
                        }
                    }
                }
            }
            _ => {
                self.pos -= 1;
                self.err("expected 'ev', 'tot' or 'ins'")
            }
        }
    }
}

fn as_function(f: &LocalForm) -> Option<Expr> {
    if f.is_zero() {
        return Some(Expr::zero());
    }
    f.has_bidegree(0, 0).then(|| f.coefficient(&crate::form::Basis::empty()))
}

/// Resolves `u`, `u_x`, `u2_xt`, ... to a jet coordinate.
pub fn resolve_jet(cs: &CoordSystem, s: &str) -> Option<(usize, MultiIndex)> {
    let (head, suffix) = match s.split_once('_') {
        Some((h, t)) => (h, Some(t)),
        None => (s, None),
    };
    let a = cs.fiber_index(head)?;
    match suffix {
        None => Some((a, MultiIndex::empty())),
        Some("") => None,
        Some(t) => Some((a, MultiIndex::new(cs.split_suffix(t)?))),
    }
}

pub fn parse_form(cs: &Arc<CoordSystem>, src: &str) -> Result<LocalForm, Error> {
    let mut p = Parser::new(cs, src)?;
    let f = p.form()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_expr(cs: &Arc<CoordSystem>, src: &str) -> Result<Expr, Error> {
    let f = parse_form(cs, src)?;
    as_function(&f).ok_or_else(|| Error::Parse { line: 1, col: 1, msg: "expected a function, found a form".into() })
}

pub fn parse_vector_field(cs: &Arc<CoordSystem>, src: &str) -> Result<InsularVF, Error> {
    let mut p = Parser::new(cs, src)?;
    let chi = p.vector_field()?;
    p.finish()?;
    Ok(chi)
}

/// Parses an `ev{..}` literal.
pub fn parse_evolutionary(cs: &Arc<CoordSystem>, src: &str) -> Result<EvolutionaryVF, Error> {
    let mut p = Parser::new(cs, src)?;
    if p.ident()? != "ev" {
        p.pos -= 1;
        return p.err("expected 'ev{..}'");
    }
    let xi = p.evolutionary()?;
    p.finish()?;
    Ok(xi)
}

/// Parses a `tot{..}` literal.
pub fn parse_total(cs: &Arc<CoordSystem>, src: &str) -> Result<TotalVF, Error> {
    let mut p = Parser::new(cs, src)?;
    if p.ident()? != "tot" {
        p.pos -= 1;
        return p.err("expected 'tot{..}'");
    }
    let x = p.total()?;
    p.finish()?;
    Ok(x)
}

/// `pair{<vector field>; <form>}`
pub fn parse_pair(cs: &Arc<CoordSystem>, src: &str) -> Result<(InsularVF, LocalForm), Error> {
    let mut p = Parser::new(cs, src)?;
    if p.ident()? != "pair" {
        p.pos -= 1;
        return p.err("expected 'pair{..}'");
    }
    p.expect(Tok::LBrace, "'{'")?;
    let chi = p.vector_field()?;
    p.expect(Tok::Semi, "';'")?;
    let zeta = p.form()?;
    p.expect(Tok::RBrace, "'}'")?;
    p.finish()?;
    Ok((chi, zeta))
}

/// `gauge[psi, ..]{u1: <linear in psi jets>, ..}`
pub fn parse_gauge(cs: &Arc<CoordSystem>, src: &str) -> Result<GaugeAction, Error> {
    let mut head = Parser::new(cs, src)?;
    if head.ident()? != "gauge" {
        head.pos -= 1;
        return head.err("expected 'gauge[..]{..}'");
    }
    head.expect(Tok::LBrack, "'['")?;
    let mut params = Vec::new();
    loop {
        params.push(head.ident()?);
        match head.next() {
            Tok::Comma => continue,
            Tok::RBrack => break,
            _ => {
                head.pos -= 1;
                return head.err("expected ',' or ']'");
            }
        }
    }
    let mut fibers: Vec<String> = cs.fiber_names().to_vec();
    fibers.extend(params.iter().cloned());
    let ext = Arc::new(CoordSystem::new(cs.base_names(), &fibers).map_err(|e| {
        let t = &head.toks[head.pos - 1];
        Error::Parse { line: t.line, col: t.col, msg: format!("bad gauge parameter: {e}") }
    })?);
    let e = cs.e();
    let mut p = Parser { cs: &ext, toks: head.toks.clone(), pos: head.pos };
    let start = p.pos;
    let comps = p.function_list(e, |s| cs.fiber_index(s), "field")?;
    p.finish()?;
    let mut coeffs: BTreeMap<(usize, usize, MultiIndex), Expr> = BTreeMap::new();
    for (a, comp) in comps.iter().enumerate() {
        for (mono, c) in comp.terms() {
            let mut param = None;
            let mut rest = Vec::new();
            for (atom, k) in mono.factors() {
                match atom {
                    Atom::Jet(b, idx) if *b >= e => {
                        if param.is_some() || *k != 1 {
                            p.pos = start;
                            return p.err("gauge action must be linear in the parameter jets");
                        }
                        param = Some((*b - e, idx.clone()));
                    }
                    other => {
                        if other.is_func() && atom_mentions_params(other, e) {
                            p.pos = start;
                            return p.err("gauge parameters may not appear inside function symbols");
                        }
                        rest.push((other.clone(), *k));
                    }
                }
            }
            let Some((b, idx)) = param else {
                p.pos = start;
                return p.err("gauge action must be linear in the parameter jets");
            };
            *coeffs.entry((a, b, idx)).or_insert_with(Expr::zero) += &Expr::monomial(Monomial::from_factors(rest), c.clone());
        }
    }
    coeffs.retain(|_, v| !v.is_zero());
    Ok(GaugeAction { params, coeffs })
}

fn atom_mentions_params(a: &Atom, e: usize) -> bool {
    match a {
        Atom::Jet(b, _) => *b >= e,
        Atom::Base(_) => false,
        Atom::Func(fa) => fa.arg.atoms_deep().iter().any(|x| matches!(x, Atom::Jet(b, _) if *b >= e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::int;

    fn cs() -> Arc<CoordSystem> {
        Arc::new(CoordSystem::new(&["x", "t"], &["u", "u2"]).unwrap())
    }

    #[test]
    fn expressions() {
        let cs = cs();
        let e = parse_expr(&cs, "(x + u_t)**2").unwrap();
        let x = Expr::base(0);
        let ut = Expr::jet(0, &[1]);
        assert_eq!(e, &(&x * &x) + &(&(&x * &ut).scale(&int(2)) + &(&ut * &ut)));
        assert!(parse_expr(&cs, "u_xt - u_tx").unwrap().is_zero());
        assert_eq!(parse_expr(&cs, "1/2*u2_x").unwrap(), Expr::jet(1, &[0]).scale(&crate::expr::rat(1, 2)));
        assert_eq!(parse_expr(&cs, "-3").unwrap(), Expr::int(-3));
        let v = parse_expr(&cs, "V''(u)").unwrap();
        assert_eq!(v, Expr::func("V", 2, Expr::jet(0, &[])));
    }

    #[test]
    fn forms() {
        let cs = cs();
        let f = parse_form(&cs, "(u_x) * del(u) /\\ dx(x) /\\ dx(t)").unwrap();
        assert_eq!(f.bidegree(), Some((1, 2)));
        let g = parse_form(&cs, "dx(t) /\\ dx(x)").unwrap();
        assert_eq!(g, parse_form(&cs, "-dx(x)/\\dx(t)").unwrap());
        assert!(parse_expr(&cs, "dx(x)").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let cs = cs();
        match parse_expr(&cs, "u +\n  w_x") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr(&cs, "u_q"), Err(Error::Parse { col: 1, .. })));
        assert!(parse_expr(&cs, "u +").is_err());
        assert!(parse_expr(&cs, "dx(x)**2").is_err());
        assert!(parse_expr(&cs, "u_x(u)").is_err());
    }

    #[test]
    fn vector_fields() {
        let cs = cs();
        let chi = parse_vector_field(&cs, "ins{ev{u: u_x}, tot{t: 1}}").unwrap();
        assert_eq!(chi.ev.xi, vec![Expr::jet(0, &[0]), Expr::zero()]);
        assert_eq!(chi.tot.x, vec![Expr::zero(), Expr::one()]);
        assert!(parse_vector_field(&cs, "ev{w: 1}").is_err());
        assert!(parse_vector_field(&cs, "ev{u: 1, u: 2}").is_err());
        let (chi, z) = parse_pair(&cs, "pair{ev{u: -1}; u_t*dx(x)}").unwrap();
        assert_eq!(chi.ev.xi[0], Expr::int(-1));
        assert_eq!(z.bidegree(), Some((0, 1)));
    }

    #[test]
    fn gauge_literal() {
        let cs = cs();
        let g = parse_gauge(&cs, "gauge[psi]{u: psi_x, u2: x*psi_t}").unwrap();
        assert_eq!(g.params, vec!["psi".to_string()]);
        assert_eq!(g.coeffs[&(0, 0, MultiIndex::single(0))], Expr::one());
        assert_eq!(g.coeffs[&(1, 0, MultiIndex::single(1))], Expr::base(0));
        assert!(parse_gauge(&cs, "gauge[psi]{u: psi**2}").is_err());
        assert!(parse_gauge(&cs, "gauge[psi]{u: 1}").is_err());
    }
}
