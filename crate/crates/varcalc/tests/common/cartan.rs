//! Graded-commutator identities of the insular Cartan calculus.

use varcalc::form::LocalForm;
use varcalc::jet::{bracket_insular, InsularVF};
use varcalc::random::{self, Rng64, Shape};
use varcalc::CoordSystem;

type Op<'a> = Box<dyn Fn(&LocalForm) -> LocalForm + 'a>;

/// An operator with its degree.
struct Graded<'a>(i64, Op<'a>);

/// `[A, B] = AB − (−1)^{|A||B|} BA` applied to `w`.
fn comm(a: &Graded, b: &Graded, w: &LocalForm) -> LocalForm {
    let ab = (a.1)(&(b.1)(w));
    let ba = (b.1)(&(a.1)(w));
    if (a.0 * b.0) % 2 == 0 {
        ab.sub(&ba)
    } else {
        ab.add(&ba)
    }
}

fn d<'a>() -> Graded<'a> {
    Graded(1, Box::new(|f| f.d_h()))
}

fn delta<'a>() -> Graded<'a> {
    Graded(1, Box::new(|f| f.d_v()))
}

fn big_d<'a>() -> Graded<'a> {
    Graded(1, Box::new(|f| f.d_total()))
}

fn iota(c: &InsularVF) -> Graded<'_> {
    Graded(-1, Box::new(move |f| f.insert(c)))
}

fn lie(c: &InsularVF) -> Graded<'_> {
    Graded(0, Box::new(move |f| f.lie(c)))
}

fn lie_d(c: &InsularVF) -> Graded<'_> {
    Graded(0, Box::new(move |f| f.lie_d(c)))
}

fn m_op(c: &InsularVF) -> Graded<'_> {
    Graded(1, Box::new(move |f| f.m_op(c)))
}

/// Random data: a mixed form, an evolutionary `ξ`, total `X`, `X'` and
/// insular `χ`, `χ'`.
pub struct Tuple {
    pub w: LocalForm,
    pub xi: InsularVF,
    pub x: InsularVF,
    pub x2: InsularVF,
    pub chi: InsularVF,
    pub chi2: InsularVF,
}

impl Tuple {
    pub fn random(r: &mut Rng64, cs: &std::sync::Arc<CoordSystem>, form: Shape, field: Shape) -> Tuple {
        Tuple {
            w: random::mixed_form(r, cs, 2, form),
            xi: random::evolutionary(r, cs, field).to_insular(cs),
            x: random::total(r, cs, field).to_insular(cs),
            x2: random::total(r, cs, field).to_insular(cs),
            chi: random::insular(r, cs, field),
            chi2: random::insular(r, cs, field),
        }
    }
}

/// Residuals of every identity on one tuple; all must vanish.
pub fn residuals(t: &Tuple) -> Vec<(String, LocalForm)> {
    let w = &t.w;
    let br = bracket_insular;
    let mut out: Vec<(String, LocalForm)> = Vec::new();
    let mut push = |name: &str, r: LocalForm| out.push((name.to_string(), r));

    push("d^2 = 0", w.d_h().d_h());
    push("delta^2 = 0", w.d_v().d_v());
    push("d delta + delta d = 0", comm(&d(), &delta(), w));
    push("D^2 = 0", w.d_total().d_total());
    push("[i_chi, i_chi'] = 0", comm(&iota(&t.chi), &iota(&t.chi2), w));

    push("L_X = [D, i_X]", comm(&big_d(), &iota(&t.x), w).sub(&w.lie(&t.x)));
    push("[delta, i_xi] = L_xi", comm(&delta(), &iota(&t.xi), w).sub(&w.lie(&t.xi)));
    push("[D, i_xi] = L_xi", comm(&big_d(), &iota(&t.xi), w).sub(&w.lie(&t.xi)));
    push("L^d_X = [d, i_X]", comm(&d(), &iota(&t.x), w).sub(&w.lie_d(&t.x)));
    push("M_X = [D, L^d_X]", comm(&big_d(), &lie_d(&t.x), w).sub(&w.m_op(&t.x)));
    push("M_X = [delta, L^d_X]", comm(&delta(), &lie_d(&t.x), w).sub(&w.m_op(&t.x)));
    push("M_X = [delta, L_X]", comm(&delta(), &lie(&t.x), w).sub(&w.m_op(&t.x)));
    push("M_X = -[d, L_X]", comm(&d(), &lie(&t.x), w).add(&w.m_op(&t.x)));
    let delta_i = Graded(0, Box::new(|f: &LocalForm| comm(&delta(), &iota(&t.x), f)));
    push("M_X = -[d, [delta, i_X]]", comm(&d(), &delta_i, w).add(&w.m_op(&t.x)));
    push("[delta, i_X] = L_X - L^d_X", comm(&delta(), &iota(&t.x), w).sub(&w.lie(&t.x)).add(&w.lie_d(&t.x)));

    for (name, a, b) in [("chi", &t.chi, &t.chi2), ("xi", &t.xi, &t.chi2), ("X", &t.x, &t.chi2)] {
        let ab = br(a, b);
        push(&format!("[L_{name}, i_chi'] = i_[{name}, chi']"), comm(&lie(a), &iota(b), w).sub(&w.insert(&ab)));
        push(&format!("[L_{name}, L_chi'] = L_[{name}, chi']"), comm(&lie(a), &lie(b), w).sub(&w.lie(&ab)));
    }

    push("[i_xi, L^d_X] = 0", comm(&iota(&t.xi), &lie_d(&t.x), w));
    let xx = br(&t.x, &t.x2);
    push("[L^d_X, i_X'] = i_[X, X']", comm(&lie_d(&t.x), &iota(&t.x2), w).sub(&w.insert(&xx)));
    push("[L^d_X, L^d_X'] = L^d_[X, X']", comm(&lie_d(&t.x), &lie_d(&t.x2), w).sub(&w.lie_d(&xx)));
    push("[M_X, D] = 0", comm(&m_op(&t.x), &big_d(), w));
    push("[M_X, d] = 0", comm(&m_op(&t.x), &d(), w));
    push("[M_X, delta] = 0", comm(&m_op(&t.x), &delta(), w));
    let xix = br(&t.xi, &t.x);
    push("[L_xi, L^d_X] = L^d_[xi, X]", comm(&lie(&t.xi), &lie_d(&t.x), w).sub(&w.lie_d(&xix)));
    push("[L_xi, M_X] = M_[xi, X]", comm(&lie(&t.xi), &m_op(&t.x), w).sub(&w.m_op(&xix)));
    out
}
