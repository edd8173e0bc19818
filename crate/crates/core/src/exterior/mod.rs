//! Degree-homogeneous differential forms and multivector fields with
//! polynomial coefficients on a single chart of `R^n`.

mod chart;
mod multiindex;
mod ops;

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational};

pub use chart::{Chart, ForwardChart};
pub use multiindex::{binomial, MultiIndex};
pub use ops::{
    exterior_derivative, interior_form_vec, interior_vec_form, iota_pq, iota_star_qp, lie_bracket,
    pullback, pushforward, pushforward_in_source, schouten_bracket,
};

/// Marker distinguishing covariant (`dx`) from contravariant (`Dx`) objects.
pub trait Variance: Copy + Clone + fmt::Debug + PartialEq + Eq + Hash + Default + 'static {
    /// Basis token used in the text rendering.
    const TOKEN: &'static str;
    type Dual: Variance<Dual = Self>;
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Covariant;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Contravariant;

impl Variance for Covariant {
    const TOKEN: &'static str = "dx";
    type Dual = Contravariant;
}

impl Variance for Contravariant {
    const TOKEN: &'static str = "Dx";
    type Dual = Covariant;
}

/// A homogeneous element of the exterior algebra over `R^n`: a map from
/// multi-indices of one fixed degree to polynomial coefficients. Absent
/// keys are zero coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homogeneous<V: Variance> {
    n: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Poly>,
    _variance: PhantomData<V>,
}

/// `sum F_I dx^I`.
pub type DiffForm = Homogeneous<Covariant>;
/// `sum F_I Dx^I`, the `Dx[i]` being coordinate vector fields.
pub type MultiVector = Homogeneous<Contravariant>;

impl<V: Variance> Homogeneous<V> {
    /// The zero object. Degrees above `n` are admitted and always zero.
    pub fn zero(n: usize, degree: usize) -> Self {
        Homogeneous {
            n,
            degree,
            coeffs: BTreeMap::new(),
            _variance: PhantomData,
        }
    }

    /// A degree-0 object, i.e. a function.
    pub fn function(f: Poly) -> Self {
        let mut out = Self::zero(f.nvars(), 0);
        out.add_term(MultiIndex::empty(), f);
        out
    }

    /// `coeff * basis`, where `basis` may be unsorted or contain repeats;
    /// it is normalized with the permutation sign.
    pub fn term(n: usize, basis: &[usize], coeff: Poly) -> Result<Self> {
        if coeff.nvars() != n {
            return Err(Error::VarCountMismatch(n, coeff.nvars()));
        }
        if let Some(&bad) = basis.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::InvalidMultiIndex(format!(
                "index {bad} outside 1..={n}"
            )));
        }
        let mut out = Self::zero(n, basis.len());
        if let Some((sign, idx)) = MultiIndex::sorted(basis.to_vec()) {
            let c = if sign < 0 { -coeff } else { coeff };
            out.add_term(idx, c);
        }
        Ok(out)
    }

    /// The constant basis element `dx^I` (or `Dx^I`).
    pub fn basis(n: usize, basis: &[usize]) -> Result<Self> {
        Self::term(n, basis, Poly::one(n))
    }

    /// Builds from validated `(index, coefficient)` pairs.
    pub fn from_terms<I>(n: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Poly)>,
    {
        let mut out = Self::zero(n, degree);
        for (idx, c) in terms {
            if idx.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: idx.degree(),
                });
            }
            MultiIndex::new(idx.entries().to_vec(), n)?;
            if c.nvars() != n {
                return Err(Error::VarCountMismatch(n, c.nvars()));
            }
            out.add_term(idx, c);
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, idx: MultiIndex, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&idx) {
            Some(existing) => {
                let sum = &existing + &c;
                if !sum.is_zero() {
                    self.coeffs.insert(idx, sum);
                }
            }
            None => {
                self.coeffs.insert(idx, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether every coefficient is a constant polynomial.
    pub fn is_constant(&self) -> bool {
        self.coeffs.values().all(Poly::is_constant)
    }

    /// Coefficient at `idx`, zero when absent.
    pub fn coeff(&self, idx: &MultiIndex) -> Poly {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.n))
    }

    /// Nonzero coefficients in multi-index order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Poly)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Multiplies every coefficient by a function.
    pub fn mul_poly(&self, f: &Poly) -> Self {
        self.map_coeffs(|p| p * f)
    }

    /// Applies `f` to each coefficient, dropping coefficients that become
    /// zero. `f` must preserve the variable count.
    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), f(c));
        }
        out
    }

    /// Coefficient values at a point, in multi-index order over all
    /// `C(n, degree)` indices.
    pub fn eval_at(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        MultiIndex::all(self.n, self.degree)
            .iter()
            .map(|idx| self.coeff(idx).eval(point))
            .collect()
    }

    /// Whether some coefficient is nonzero at `point`.
    pub fn nonvanishing_at(&self, point: &[Rational]) -> Result<bool> {
        for c in self.coeffs.values() {
            if !c.eval(point)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Exterior product. Repeated indices annihilate; the sign comes from
    /// sorting the concatenated index lists.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n, self.degree + other.degree);
        for (ia, ca) in &self.coeffs {
            for (ib, cb) in &other.coeffs {
                let mut cat = ia.entries().to_vec();
                cat.extend_from_slice(ib.entries());
                if let Some((sign, idx)) = MultiIndex::sorted(cat) {
                    let prod = ca * cb;
                    out.add_term(idx, if sign < 0 { -prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    /// Removes the common polynomial factor of the coefficients, returning
    /// `(content, primitive part)`. The content is normalized to leading
    /// coefficient one.
    pub fn factor_content(&self) -> (Poly, Self) {
        let content = self
            .coeffs
            .values()
            .fold(Poly::zero(self.n), |acc, c| acc.gcd(c).expect("same ring"));
        if content.is_zero() {
            return (Poly::one(self.n), self.clone());
        }
        let prim = self.map_coeffs(|c| {
            c.div_exact(&content)
                .expect("same ring")
                .expect("content divides every coefficient")
        });
        (content, prim)
    }
}

fn needs_parens(p: &Poly) -> bool {
    p.num_terms() > 1
}

impl<V: Variance> fmt::Display for Homogeneous<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (idx, c)) in self.coeffs.iter().enumerate() {
            let basis = format!("{}{}", V::TOKEN, idx);
            let single_negative = c.num_terms() == 1
                && c.leading_term()
                    .map(|(_, v)| v.is_negative())
                    .unwrap_or(false);
            let shown = if single_negative { -c } else { c.clone() };
            match (k, single_negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if idx.degree() == 0 {
                if needs_parens(&shown) && k > 0 {
                    write!(f, "({shown})")?;
                } else {
                    write!(f, "{shown}")?;
                }
                continue;
            }
            if shown.constant_value().map(|v| v.is_one()).unwrap_or(false) {
                write!(f, "{basis}")?;
            } else if needs_parens(&shown) {
                write!(f, "({shown})*{basis}")?;
            } else {
                write!(f, "{shown}*{basis}")?;
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

    #[test]
    fn wedge_basics() {
        let a = DiffForm::basis(2, &[1]).unwrap();
        let b = DiffForm::basis(2, &[2]).unwrap();
        assert_eq!(a.wedge(&b).unwrap(), DiffForm::basis(2, &[1, 2]).unwrap());
        assert_eq!(
            b.wedge(&a).unwrap(),
            DiffForm::basis(2, &[1, 2]).unwrap().neg()
        );
        assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn wedge_sign_from_permutation() {
        // (x1 dx2) ^ (x2 dx13): concatenation [2,1,3] is one transposition
        let a = DiffForm::term(3, &[2], x(3, 1)).unwrap();
        let b = DiffForm::term(3, &[1, 3], x(3, 2)).unwrap();
        let expected = DiffForm::term(3, &[1, 2, 3], -(&x(3, 1) * &x(3, 2))).unwrap();
        assert_eq!(a.wedge(&b).unwrap(), expected);
    }

    #[test]
    fn wedge_rejects_dimension_mismatch() {
        let a = DiffForm::basis(2, &[1]).unwrap();
        let b = DiffForm::basis(3, &[2]).unwrap();
        assert_eq!(a.wedge(&b), Err(Error::DimensionMismatch(2, 3)));
    }

    #[test]
    fn rendering() {
        let w = DiffForm::basis(3, &[1, 2])
            .unwrap()
            .checked_add(
                &DiffForm::term(
                    3,
                    &[2, 3],
                    x(3, 3).scale(&Rational::from_integer((-2).into())),
                )
                .unwrap(),
            )
            .unwrap();
        assert_eq!(w.to_string(), "dx[1,2] - 2*x3*dx[2,3]");
        let v = MultiVector::term(2, &[1], &x(2, 1) + &Poly::one(2)).unwrap();
        assert_eq!(v.to_string(), "(x1 + 1)*Dx[1]");
        assert_eq!(DiffForm::zero(2, 1).to_string(), "0");
    }

    #[test]
    fn content_factoring() {
        let v = MultiVector::term(3, &[1, 2], x(3, 1)).unwrap();
        let (c, prim) = v.factor_content();
        assert_eq!(c, x(3, 1));
        assert_eq!(prim, MultiVector::basis(3, &[1, 2]).unwrap());
    }
}
