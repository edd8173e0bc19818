//! Exact multivariate polynomials over the rationals.
//!
//! Variables are named `x1..xn` and addressed with 1-based indices in the
//! public API. Terms live in a `BTreeMap` keyed by exponent vectors under
//! graded-lexicographic order, so iteration and rendering are deterministic.

mod gcd;
mod rational;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use rational::{parse_rational, rat, Rational};

/// Exponent vector of a monomial, ordered graded-lexicographically with
/// `x1 > x2 > ... > xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables with rational coefficients.
///
/// No zero coefficient is ever stored, so structural equality is
/// polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    /// The coordinate function `x<var>` (1-based).
    pub fn var(nvars: usize, var: usize) -> Result<Self> {
        check_var(var, nvars)?;
        let mut exps = vec![0; nvars];
        exps[var - 1] = 1;
        Ok(Self::monomial(Monomial(exps), Rational::one()))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.0.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::Arity {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree in a single variable (1-based); 0 for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.0.get(var.wrapping_sub(1)).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Whether the polynomial involves `x<var>` at all.
    pub fn depends_on(&self, var: usize) -> bool {
        self.degree_in(var) > 0
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative with respect to `x<var>`.
    pub fn diff(&self, var: usize) -> Result<Poly> {
        check_var(var, self.nvars)?;
        let k = var - 1;
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[k] = e - 1;
            out.add_term(Monomial(exps), c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Antiderivative in `x<var>` vanishing on the hyperplane `x<var> = 0`.
    pub fn integrate(&self, var: usize) -> Result<Poly> {
        check_var(var, self.nvars)?;
        let k = var - 1;
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps[k] += 1;
            let e = exps[k];
            out.add_term(Monomial(exps), c / Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Substitutes `subst[k]` for `x<k+1>`. All substituted polynomials must
    /// share one variable count, which becomes the result's.
    pub fn compose(&self, subst: &[Poly]) -> Result<Poly> {
        if subst.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: subst.len(),
            });
        }
        let target = match subst.first() {
            Some(s) => s.nvars,
            // zero-variable polynomial: a constant
            None => return Ok(self.clone()),
        };
        if let Some(bad) = subst.iter().find(|s| s.nvars != target) {
            return Err(Error::VarCountMismatch(target, bad.nvars));
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(target)]; self.nvars];
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[k].len() <= e as usize {
                    let next = &powers[k][powers[k].len() - 1] * &subst[k];
                    powers[k].push(next);
                }
                term = &term * &powers[k][e as usize];
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Re-embeds the polynomial into a ring with `nvars` variables; the
    /// dropped variables must not occur.
    pub fn with_nvars(&self, nvars: usize) -> Result<Poly> {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            if exps.len() > nvars {
                if exps[nvars..].iter().any(|&e| e > 0) {
                    return Err(Error::VarCountMismatch(self.nvars, nvars));
                }
                exps.truncate(nvars);
            } else {
                exps.resize(nvars, 0);
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Option<Poly>> {
        self.check_same(divisor)?;
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Ok(None),
        };
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let Some(qm) = m.div(&lm) else {
                return Ok(None);
            };
            let qc = c / &lc;
            let step = Poly::monomial(qm, qc);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Ok(Some(quot))
    }

    /// Leading coefficient under graded-lex order, one for the zero
    /// polynomial.
    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::one)
    }

    /// Scales so the graded-lex leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(gcd::gcd(self, other))
    }
}

fn check_var(var: usize, nvars: usize) -> Result<()> {
    if var == 0 || var > nvars {
        return Err(Error::VarOutOfRange { var, nvars });
    }
    Ok(())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            /// Panics on a variable-count mismatch; use the `checked_*`
            /// variant to get an error instead.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs)
                    .expect("polynomial variable-count mismatch")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub fn poly_add(a: &Poly, b: &Poly) -> Result<Poly> {
    a.checked_add(b)
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly> {
    a.checked_mul(b)
}

pub fn poly_neg(a: &Poly) -> Poly {
    -a
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (k, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "x{}", k + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Renders `3/2*x1^2*x2 - x3 + 1`: highest graded-lex term first.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, k: usize) -> Poly {
        Poly::var(n, k).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn additive_inverse() {
        let a = &x(1, 1) + &Poly::one(1);
        let b = -x(1, 1);
        assert_eq!(&a + &b, Poly::one(1));
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (x(2, 1), x(2, 2));
        let lhs = &(&a + &b) * &(&a - &b);
        let rhs = &(&a * &a) - &(&b * &b);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_absorbs() {
        let p = x(1, 1).pow(3).scale(&q(3, 2));
        let z = &Poly::zero(1) * &p;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn mismatched_nvars_is_an_error() {
        assert_eq!(
            x(2, 1).checked_add(&x(3, 1)),
            Err(Error::VarCountMismatch(2, 3))
        );
    }

    #[test]
    fn derivatives() {
        let p = &(&x(2, 1) * &x(2, 1)) * &x(2, 2);
        assert_eq!(p.diff(1).unwrap(), (&x(2, 1) * &x(2, 2)).scale(&q(2, 1)));
        assert!(x(2, 1).diff(2).unwrap().is_zero());
        let p = &x(1, 1) + &x(1, 1).pow(2).scale(&q(1, 2));
        assert_eq!(p.diff(1).unwrap(), &Poly::one(1) + &x(1, 1));
        assert!(matches!(p.diff(2), Err(Error::VarOutOfRange { .. })));
    }

    #[test]
    fn integrals() {
        let p = &Poly::one(1) + &x(1, 1);
        let expected = &x(1, 1) + &x(1, 1).pow(2).scale(&q(1, 2));
        assert_eq!(p.integrate(1).unwrap(), expected);
        assert!(Poly::zero(1).integrate(1).unwrap().is_zero());
        let p = &x(2, 1) * &x(2, 2);
        let i = p.integrate(2).unwrap();
        assert_eq!(i, (&x(2, 1) * &x(2, 2).pow(2)).scale(&q(1, 2)));
        assert_eq!(i.diff(2).unwrap(), p);
    }

    #[test]
    fn composition() {
        let p = x(2, 1).pow(2);
        let s = vec![&x(2, 1) + &x(2, 2), x(2, 2)];
        assert_eq!(p.compose(&s).unwrap(), (&x(2, 1) + &x(2, 2)).pow(2));
        let p = &(&x(2, 1) * &x(2, 2)) + &Poly::from_int(2, 5);
        assert_eq!(p.compose(&[x(2, 1), x(2, 2)]).unwrap(), p);
        let p = &x(2, 1) * &x(2, 2);
        assert_eq!(p.compose(&[x(2, 2), x(2, 1)]).unwrap(), p);
        assert!(p.compose(&[x(2, 1)]).is_err());
    }

    #[test]
    fn evaluation() {
        let p = &x(2, 1).pow(2) + &x(2, 2);
        assert_eq!(p.eval(&[q(2, 1), q(3, 1)]).unwrap(), q(7, 1));
        let c = Poly::constant(3, q(-4, 3));
        assert_eq!(c.eval(&[q(9, 1), q(1, 7), q(0, 1)]).unwrap(), q(-4, 3));
        let p = &(&x(3, 1) * &x(3, 2)) * &x(3, 3);
        assert_eq!(p.eval(&[q(1, 2), q(2, 1), q(3, 1)]).unwrap(), q(3, 1));
        assert!(p.eval(&[q(1, 1)]).is_err());
    }

    #[test]
    fn rendering_is_graded_lex() {
        let p = &(&(&x(3, 1).pow(2) * &x(3, 2)).scale(&q(3, 2)) - &x(3, 3)) + &Poly::one(3);
        assert_eq!(p.to_string(), "3/2*x1^2*x2 - x3 + 1");
        assert_eq!(Poly::zero(2).to_string(), "0");
        assert_eq!((-x(2, 2)).to_string(), "-x2");
    }

    #[test]
    fn exact_division() {
        let a = &x(2, 1) + &x(2, 2);
        let b = &x(2, 1) - &x(2, 2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), Some(b.clone()));
        assert_eq!((&prod + &Poly::one(2)).div_exact(&a).unwrap(), None);
    }
}
