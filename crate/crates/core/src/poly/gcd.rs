//! Multivariate gcd by recursive primitive polynomial remainder sequences.

use super::{Monomial, Poly};

/// Coefficients of `p` viewed as a univariate polynomial in `x<var>`,
/// indexed by power.
fn coeffs_in(p: &Poly, var: usize) -> Vec<Poly> {
    let k = var - 1;
    let deg = p.degree_in(var) as usize;
    let mut out = vec![Poly::zero(p.nvars); deg + 1];
    for (m, c) in p.terms() {
        let e = m.0[k] as usize;
        let mut exps = m.0.clone();
        exps[k] = 0;
        out[e].add_term(Monomial(exps), c.clone());
    }
    out
}

fn var_power(nvars: usize, var: usize, e: u32) -> Poly {
    let mut exps = vec![0; nvars];
    exps[var - 1] = e;
    Poly::monomial(Monomial(exps), super::Rational::from_integer(1.into()))
}

fn leading_coeff_in(p: &Poly, var: usize) -> Poly {
    coeffs_in(p, var)
        .pop()
        .unwrap_or_else(|| Poly::zero(p.nvars))
}

fn content_in(p: &Poly, var: usize) -> Poly {
    coeffs_in(p, var)
        .iter()
        .fold(Poly::zero(p.nvars), |acc, c| gcd(&acc, c))
}

fn primitive_in(p: &Poly, var: usize) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    p.div_exact(&c)
        .expect("same ring")
        .expect("content divides its polynomial")
}

fn pseudo_remainder(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let lb = leading_coeff_in(b, var);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = leading_coeff_in(&r, var);
        let shift = var_power(r.nvars, var, dr - db);
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

fn highest_var(a: &Poly, b: &Poly) -> Option<usize> {
    (1..=a.nvars)
        .rev()
        .find(|&v| a.depends_on(v) || b.depends_on(v))
}

/// Greatest common divisor, normalized to leading coefficient one. The gcd
/// of two zero polynomials is zero.
pub(super) fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let Some(var) = highest_var(a, b) else {
        // both nonzero constants
        return Poly::one(a.nvars);
    };
    if !a.depends_on(var) {
        return gcd(a, &content_in(b, var));
    }
    if !b.depends_on(var) {
        return gcd(&content_in(a, var), b);
    }
    let content = gcd(&content_in(a, var), &content_in(b, var));
    let (mut x, mut y) = (primitive_in(a, var), primitive_in(b, var));
    if x.degree_in(var) < y.degree_in(var) {
        std::mem::swap(&mut x, &mut y);
    }
    let g = loop {
        let r = pseudo_remainder(&x, &y, var);
        if r.is_zero() {
            break y;
        }
        if !r.depends_on(var) {
            break Poly::one(a.nvars);
        }
        x = y;
        y = primitive_in(&r, var);
    };
    (&content * &primitive_in(&g, var)).monic()
}
