//! JSON encoding of local forms:
//! `{"bidegree":[p,q],"terms":[{"coeff","vert":[["u","xx"]],"horiz":["x"],"monomial":[["u_x",2]]}]}`,
//! and `{"components":[…]}` for forms with several bidegrees.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::Error;
use crate::expr::{fmt_rational, CoordSystem, Expr, Rational};
use crate::form::{Gen, LocalForm};
use crate::parse::{parse_expr, resolve_jet};

fn component_json(w: &LocalForm, p: usize, q: usize) -> Value {
    let cs = w.coords();
    let mut terms = Vec::new();
    for (b, c) in w.terms() {
        if b.bidegree() != (p, q) {
            continue;
        }
        let vert: Vec<Value> = b
            .vert
            .iter()
            .map(|(a, idx)| {
                let suffix: String = idx.entries().iter().map(|&i| cs.base_name(i)).collect();
                json!([cs.fiber_name(*a), suffix])
            })
            .collect();
        let horiz: Vec<Value> = b.horiz.iter().map(|&i| json!(cs.base_name(i))).collect();
        for (m, k) in c.terms().rev() {
            let monomial: Vec<Value> =
                m.factors().iter().rev().map(|(a, e)| json!([Expr::atom(a.clone()).to_text(cs), e])).collect();
            terms.push(json!({
                "coeff": fmt_rational(k),
                "vert": vert,
                "horiz": horiz,
                "monomial": monomial,
            }));
        }
    }
    json!({ "bidegree": [p, q], "terms": terms })
}

impl LocalForm {
    pub fn to_json(&self) -> Value {
        let bs: Vec<(usize, usize)> = self.bidegrees().into_iter().collect();
        match bs.as_slice() {
            [] => json!({ "bidegree": Value::Null, "terms": [] }),
            [(p, q)] => component_json(self, *p, *q),
            _ => json!({ "components": bs.iter().map(|(p, q)| component_json(self, *p, *q)).collect::<Vec<_>>() }),
        }
    }

    pub fn from_json(cs: &Arc<CoordSystem>, v: &Value) -> Result<LocalForm, Error> {
        if let Some(cs_list) = v.get("components") {
            let list = cs_list.as_array().ok_or_else(|| Error::Json("\"components\" must be a list".into()))?;
            return list.iter().try_fold(LocalForm::zero(cs), |acc, c| Ok(acc.add(&component_from_json(cs, c)?)));
        }
        component_from_json(cs, v)
    }
}

fn str_of(v: &Value, what: &str) -> Result<String, Error> {
    v.as_str().map(str::to_string).ok_or_else(|| Error::Json(format!("{what} must be a string")))
}

fn component_from_json(cs: &Arc<CoordSystem>, v: &Value) -> Result<LocalForm, Error> {
    let declared = match v.get("bidegree") {
        None | Some(Value::Null) => None,
        Some(b) => {
            let pq: Vec<usize> = b
                .as_array()
                .filter(|a| a.len() == 2)
                .and_then(|a| a.iter().map(|x| x.as_u64().map(|n| n as usize)).collect())
                .ok_or_else(|| Error::Json("\"bidegree\" must be [p, q]".into()))?;
            Some((pq[0], pq[1]))
        }
    };
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| Error::Json("missing \"terms\" list".into()))?;
    let mut out = LocalForm::zero(cs);
    for t in terms {
        let coeff: Rational = str_of(t.get("coeff").unwrap_or(&Value::Null), "coeff")?
            .trim()
            .parse()
            .map_err(|_| Error::Json("bad coefficient".into()))?;
        let gens = generators(cs, t)?;
        if let Some(pq) = declared {
            let got = gens.iter().fold((0, 0), |(p, q), g| match g {
                Gen::Vert(..) => (p + 1, q),
                Gen::Horiz(_) => (p, q + 1),
            });
            if got != pq {
                return Err(Error::Json(format!("term of bidegree {got:?} in a {pq:?} component")));
            }
        }
        let mut c = Expr::constant(coeff);
        for f in list(t, "monomial")? {
            let pair = f.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Json("monomial entry must be [atom, power]".into()))?;
            let atom = parse_expr(cs, &str_of(&pair[0], "atom")?)?;
            let k = pair[1].as_u64().ok_or_else(|| Error::Json("power must be a natural number".into()))?;
            c = &c * &atom.pow(k as u32);
        }
        out = out.add(&LocalForm::from_gens(cs, c, gens));
    }
    Ok(out)
}

fn list<'a>(t: &'a Value, key: &str) -> Result<&'a [Value], Error> {
    match t.get(key) {
        None => Ok(&[]),
        Some(v) => v.as_array().map(Vec::as_slice).ok_or_else(|| Error::Json(format!("\"{key}\" must be a list"))),
    }
}

fn generators(cs: &Arc<CoordSystem>, t: &Value) -> Result<Vec<Gen>, Error> {
    let mut gens = Vec::new();
    for g in list(t, "vert")? {
        let pair = g.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Json("vert entry must be [field, index]".into()))?;
        let (f, s) = (str_of(&pair[0], "field")?, str_of(&pair[1], "index")?);
        let name = if s.is_empty() { f } else { format!("{f}_{s}") };
        let (a, idx) = resolve_jet(cs, &name).ok_or_else(|| Error::Coords(format!("unknown jet coordinate {name}")))?;
        gens.push(Gen::Vert(a, idx));
    }
    for h in list(t, "horiz")? {
        let name = str_of(h, "horiz entry")?;
        gens.push(Gen::Horiz(cs.base_index(&name).ok_or_else(|| Error::Coords(format!("unknown base coordinate {name}")))?));
    }
    Ok(gens)
}
