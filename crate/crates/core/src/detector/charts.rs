//! Chart witnesses: exact verification of a supplied chart and the
//! constructive charts for closed 1-forms, volume forms and the
//! coordinate-aligned `(n-1)`-form case.

use std::fmt;

use num_traits::Zero;

use super::Object;
use crate::error::{Error, Result};
use crate::exterior::{
    exterior_derivative, pullback, pushforward, Chart, ForwardChart, MultiIndex,
};
use crate::linalg::Matrix;
use crate::poly::{Poly, Rational};
use crate::{DiffForm, MultiVector};

/// A coordinate change offered as evidence of constancy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartWitness {
    /// Polynomial chart with verified polynomial inverse.
    Exact(Chart),
    /// Forward map only; its inverse is not polynomial, so it is checked in
    /// the forward direction and not reused for pushforwards.
    Formal(ForwardChart),
}

impl ChartWitness {
    pub fn n(&self) -> usize {
        match self {
            ChartWitness::Exact(c) => c.n(),
            ChartWitness::Formal(f) => f.n(),
        }
    }

    pub fn is_formal(&self) -> bool {
        matches!(self, ChartWitness::Formal(_))
    }

    pub fn forward(&self) -> ForwardChart {
        match self {
            ChartWitness::Exact(c) => c.to_forward(),
            ChartWitness::Formal(f) => f.clone(),
        }
    }
}

/// Chart-file rendering; formal charts carry no `inv` lines.
impl fmt::Display for ChartWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartWitness::Exact(c) => f.write_str(&c.to_file_string()),
            ChartWitness::Formal(fc) => write!(f, "{fc}"),
        }
    }
}

/// Outcome of checking an object against a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartCheck {
    pub constant: bool,
    /// The object written in the chart's coordinates (exact charts), or the
    /// constant coefficients read off at the base point (formal charts).
    pub expressed: Option<Object>,
    /// Non-constant part; zero exactly when `constant`.
    pub residual: Object,
}

fn nonconstant_part<V: crate::exterior::Variance>(
    obj: &crate::exterior::Homogeneous<V>,
) -> crate::exterior::Homogeneous<V> {
    obj.map_coeffs(|c| c - &Poly::constant(c.nvars(), c.constant_term()))
}

/// Writes `obj` in the coordinates `u` of `phi` and tests whether every
/// coefficient is constant.
pub fn verify_chart(obj: &Object, phi: &Chart) -> Result<ChartCheck> {
    if obj.n() != phi.n() {
        return Err(Error::DimensionMismatch(obj.n(), phi.n()));
    }
    let expressed = match obj {
        Object::Form(a) => Object::Form(pullback(&phi.inverse(), a)?),
        Object::MultiVector(v) => Object::MultiVector(pushforward(phi, v)?),
    };
    let residual = match &expressed {
        Object::Form(a) => Object::Form(nonconstant_part(a)),
        Object::MultiVector(v) => Object::MultiVector(nonconstant_part(v)),
    };
    Ok(ChartCheck {
        constant: residual.is_zero(),
        expressed: Some(expressed),
        residual,
    })
}

fn wedge_all(forms: &[&DiffForm], n: usize) -> Result<DiffForm> {
    let mut acc = DiffForm::function(Poly::one(n));
    for f in forms {
        acc = acc.wedge(f)?;
    }
    Ok(acc)
}

/// Numerator forms `N_i` with `du^i = N_i / D^2` (or `dP_i` when polynomial).
fn differential_forms(fc: &ForwardChart) -> Vec<DiffForm> {
    let n = fc.n();
    fc.differential_numerators()
        .into_iter()
        .map(|row| {
            DiffForm::from_terms(
                n,
                1,
                row.into_iter()
                    .enumerate()
                    .map(|(j, c)| (MultiIndex::single(j + 1), c)),
            )
            .expect("degree-one terms")
        })
        .collect()
}

/// Forward-direction check: the object equals a constant combination of the
/// chart's coordinate objects `du^I` (resp. `d/du^I`). The constants are read
/// off at `base`, where the chart must be regular.
pub fn verify_forward(obj: &Object, fc: &ForwardChart, base: &[Rational]) -> Result<ChartCheck> {
    let n = fc.n();
    if obj.n() != n {
        return Err(Error::DimensionMismatch(obj.n(), n));
    }
    let deg = obj.degree();
    let dd = fc.differential_denominator();
    let scale = dd.pow(deg as u32);
    if scale.eval(base)?.is_zero() {
        return Err(Error::VanishingAtBase);
    }
    let nforms = differential_forms(fc);
    let indices = MultiIndex::all(n, deg);
    // N^I for every I, as full coefficient vectors over the same basis
    let blades: Vec<DiffForm> = indices
        .iter()
        .map(|idx| {
            let parts: Vec<&DiffForm> = idx.entries().iter().map(|&i| &nforms[i - 1]).collect();
            wedge_all(&parts, n)
        })
        .collect::<Result<_>>()?;
    match obj {
        Object::Form(a) => {
            // D^{2p} a == sum_I lambda_I N^I, lambda from the base point
            let target = a.mul_poly(&scale);
            let mut m = Matrix::zeros(indices.len(), indices.len());
            let mut rhs = Vec::with_capacity(indices.len());
            for (r, k) in indices.iter().enumerate() {
                for (c, b) in blades.iter().enumerate() {
                    m.set(r, c, b.coeff(k).eval(base)?);
                }
                rhs.push(target.coeff(k).eval(base)?);
            }
            let lambda = m.solve(&rhs).ok_or(Error::VanishingAtBase)?;
            let mut combo = DiffForm::zero(n, deg);
            for (l, b) in lambda.iter().zip(&blades) {
                if !l.is_zero() {
                    combo = combo.checked_add(&b.scale(l))?;
                }
            }
            let residual = target.checked_sub(&combo)?;
            let expressed = DiffForm::from_terms(
                n,
                deg,
                indices
                    .iter()
                    .cloned()
                    .zip(lambda.into_iter().map(|l| Poly::constant(n, l))),
            )?;
            Ok(ChartCheck {
                constant: residual.is_zero(),
                expressed: Some(Object::Form(expressed)),
                residual: Object::Form(residual),
            })
        }
        Object::MultiVector(v) => {
            // <N^I, V> == c_I D^{2q} for constants c_I
            let base_scale = scale.eval(base)?;
            let mut residual = MultiVector::zero(n, deg);
            let mut expressed = MultiVector::zero(n, deg);
            for (idx, b) in indices.iter().zip(&blades) {
                let mut pairing = Poly::zero(n);
                for (k, f) in v.terms() {
                    pairing = &pairing + &(&b.coeff(k) * f);
                }
                let c = pairing.eval(base)? / &base_scale;
                let r = &pairing - &scale.scale(&c);
                if !r.is_zero() {
                    residual = residual.checked_add(&MultiVector::from_terms(
                        n,
                        deg,
                        [(idx.clone(), r)],
                    )?)?;
                }
                if !c.is_zero() {
                    expressed = expressed.checked_add(&MultiVector::from_terms(
                        n,
                        deg,
                        [(idx.clone(), Poly::constant(n, c))],
                    )?)?;
                }
            }
            Ok(ChartCheck {
                constant: residual.is_zero(),
                expressed: Some(Object::MultiVector(expressed)),
                residual: Object::MultiVector(residual),
            })
        }
    }
}

/// Checks any witness: exact charts by change of coordinates, formal ones
/// in the forward direction.
pub fn verify_witness(obj: &Object, w: &ChartWitness, base: &[Rational]) -> Result<ChartCheck> {
    match w {
        ChartWitness::Exact(c) => verify_chart(obj, c),
        ChartWitness::Formal(f) => verify_forward(obj, f, base),
    }
}

/// The chart whose coordinate at position `slot` is `f` and whose other
/// coordinates are the `x_m`, `m != k`, in increasing order. An exact inverse
/// exists when `f = c x_k + g` with `c` a nonzero constant and `g` free of `x_k`.
fn coordinate_chart(f: Poly, k: usize, slot: usize) -> ChartWitness {
    let n = f.nvars();
    let others: Vec<usize> = (1..=n).filter(|&m| m != k).collect();
    let mut forward: Vec<Poly> = others
        .iter()
        .map(|&m| Poly::var(n, m).expect("in range"))
        .collect();
    forward.insert(slot - 1, f.clone());
    let fc =
        || ChartWitness::Formal(ForwardChart::polynomial(forward.clone()).expect("n components"));
    let Some(c) = f.diff(k).expect("in range").constant_value() else {
        return fc();
    };
    if c.is_zero() {
        return fc();
    }
    // position of each x_m among the u's
    let position = |m: usize| -> usize {
        let p = others.iter().position(|&o| o == m).expect("other index");
        if p + 1 >= slot {
            p + 2
        } else {
            p + 1
        }
    };
    let u_of_x: Vec<Poly> = (1..=n)
        .map(|m| {
            if m == k {
                Poly::zero(n)
            } else {
                Poly::var(n, position(m)).expect("in range")
            }
        })
        .collect();
    let g = &f - &Poly::var(n, k).expect("in range").scale(&c);
    let g_in_u = g.compose(&u_of_x).expect("n components");
    let mut inverse = u_of_x;
    inverse[k - 1] = (&Poly::var(n, slot).expect("in range") - &g_in_u).scale(&c.recip());
    match Chart::new(forward.clone(), inverse) {
        Ok(chart) => ChartWitness::Exact(chart),
        Err(_) => fc(),
    }
}

/// Potential of a closed polynomial 1-form by integration along rays from
/// the origin: `f(x) = sum_i int_0^1 a_i(t x) x_i dt`.
pub fn potential(a: &DiffForm) -> Result<Poly> {
    if a.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            got: a.degree(),
        });
    }
    let n = a.n();
    let mut f = Poly::zero(n);
    for (idx, c) in a.terms() {
        let xi = Poly::var(n, idx.entries()[0])?;
        for (m, coef) in c.terms() {
            let w = coef / Rational::from_integer((m.degree() + 1).into());
            f = &f + &(&Poly::monomial(m.clone(), w) * &xi);
        }
    }
    Ok(f)
}

/// Chart `u^1 = f`, `u^2.. = ` the remaining `x` in order, for a closed
/// 1-form `a = df`, with the replaced coordinate chosen so that
/// `df/dx_k(base) != 0`. Then `a == du^1`.
pub fn chart_from_exact_1form(a: &DiffForm, base: &[Rational]) -> Result<ChartWitness> {
    let f = potential(a)?;
    if !exterior_derivative(a).is_zero() {
        return Err(Error::NotClosed);
    }
    let values = a.eval_at(base)?;
    let idx = MultiIndex::all(a.n(), 1);
    let Some(pos) = values.iter().position(|v| !v.is_zero()) else {
        return Err(Error::VanishingAtBase);
    };
    let k = idx[pos].entries()[0];
    Ok(coordinate_chart(f, k, 1))
}

/// Chart `u^1 = int_0^{x^1} f dx^1`, `u^i = x^i`, for the volume form
/// `a = f dx^1..dx^n`. Then `a == du^1 .. du^n`.
pub fn chart_from_volume_form(a: &DiffForm, base: &[Rational]) -> Result<ChartWitness> {
    let n = a.n();
    if a.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            got: a.degree(),
        });
    }
    let top = MultiIndex::new((1..=n).collect(), n)?;
    let f = a.coeff(&top);
    if f.eval(base)?.is_zero() {
        return Err(Error::VanishingAtBase);
    }
    Ok(coordinate_chart(f.integrate(1)?, 1, 1))
}

/// For a closed `(n-1)`-form with a single coefficient, `F dx^J`, the chart
/// replacing `x^k` (`k` the first entry of `J`) by `int_0^{x^k} F dx^k`.
/// Returns `None` when the form has more than one term.
pub fn chart_from_aligned_codim1_form(
    a: &DiffForm,
    base: &[Rational],
) -> Result<Option<ChartWitness>> {
    let n = a.n();
    if n < 2 || a.degree() != n - 1 {
        return Err(Error::DegreeMismatch {
            expected: n.saturating_sub(1),
            got: a.degree(),
        });
    }
    if !exterior_derivative(a).is_zero() {
        return Err(Error::NotClosed);
    }
    let mut terms = a.terms();
    let (Some((idx, f)), None) = (terms.next(), terms.next()) else {
        return Ok(None);
    };
    if f.eval(base)?.is_zero() {
        return Err(Error::VanishingAtBase);
    }
    let k = idx.entries()[0];
    Ok(Some(coordinate_chart(f.integrate(k)?, k, k)))
}

/// `du^1 ^ .. ^ du^n` of a polynomial forward map.
pub fn coordinate_volume(fc: &ForwardChart) -> Result<DiffForm> {
    let forms = differential_forms(fc);
    let refs: Vec<&DiffForm> = forms.iter().collect();
    wedge_all(&refs, fc.n())
}

/// `du^1` of a polynomial forward map.
pub fn first_differential(fc: &ForwardChart) -> DiffForm {
    differential_forms(fc).swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn x(n: usize, k: usize) -> Poly {
        Poly::var(n, k).unwrap()
    }

    fn origin(n: usize) -> Vec<Rational> {
        vec![rat(0); n]
    }

    fn shear() -> Chart {
        Chart::new(
            vec![&x(3, 1) + &x(3, 3).pow(2), x(3, 2), x(3, 3)],
            vec![&x(3, 1) - &x(3, 3).pow(2), x(3, 2), x(3, 3)],
        )
        .unwrap()
    }

    fn pulled_back() -> DiffForm {
        // dx[1,2] - 2 x3 dx[2,3]
        DiffForm::basis(3, &[1, 2])
            .unwrap()
            .checked_add(&DiffForm::term(3, &[2, 3], x(3, 3).scale(&rat(-2))).unwrap())
            .unwrap()
    }

    #[test]
    fn supplied_chart_checks() {
        let obj = Object::Form(pulled_back());
        let check = verify_chart(&obj, &shear()).unwrap();
        assert!(check.constant);
        assert_eq!(
            check.expressed,
            Some(Object::Form(DiffForm::basis(3, &[1, 2]).unwrap()))
        );
        let fwd = verify_forward(&obj, &shear().to_forward(), &origin(3)).unwrap();
        assert!(fwd.constant);

        let bad = Object::Form(DiffForm::term(1, &[1], x(1, 1)).unwrap());
        let check = verify_chart(&bad, &Chart::identity(1)).unwrap();
        assert!(!check.constant);
        assert_eq!(check.residual, bad);
        assert!(
            verify_chart(
                &Object::Form(DiffForm::basis(2, &[1]).unwrap()),
                &Chart::identity(2)
            )
            .unwrap()
            .constant
        );
    }

    #[test]
    fn volume_form_chart() {
        let a = DiffForm::term(2, &[1, 2], &Poly::one(2) + &x(2, 1)).unwrap();
        let w = chart_from_volume_form(&a, &origin(2)).unwrap();
        assert!(w.is_formal());
        let u1 = &x(2, 1) + &x(2, 1).pow(2).scale(&Rational::new(1.into(), 2.into()));
        assert_eq!(w.forward().numerators()[0], u1);
        assert_eq!(coordinate_volume(&w.forward()).unwrap(), a);
        assert!(
            verify_forward(&Object::Form(a), &w.forward(), &origin(2))
                .unwrap()
                .constant
        );

        let top = DiffForm::basis(3, &[1, 2, 3]).unwrap();
        assert_eq!(
            chart_from_volume_form(&top, &origin(3)).unwrap(),
            ChartWitness::Exact(Chart::identity(3))
        );
        let vanishing = DiffForm::term(2, &[1, 2], x(2, 1)).unwrap();
        assert_eq!(
            chart_from_volume_form(&vanishing, &origin(2)),
            Err(Error::VanishingAtBase)
        );
    }

    #[test]
    fn exact_one_form_chart() {
        let a = DiffForm::basis(2, &[1]).unwrap();
        assert_eq!(
            chart_from_exact_1form(&a, &origin(2)).unwrap(),
            ChartWitness::Exact(Chart::identity(2))
        );

        let a = DiffForm::term(2, &[1], x(2, 2))
            .unwrap()
            .checked_add(&DiffForm::term(2, &[2], x(2, 1)).unwrap())
            .unwrap();
        assert_eq!(potential(&a).unwrap(), &x(2, 1) * &x(2, 2));
        assert_eq!(
            chart_from_exact_1form(&a, &origin(2)),
            Err(Error::VanishingAtBase)
        );
        let w = chart_from_exact_1form(&a, &[rat(1), rat(1)]).unwrap();
        assert_eq!(first_differential(&w.forward()), a);

        let not_closed = DiffForm::term(2, &[1], x(2, 2)).unwrap();
        assert_eq!(
            chart_from_exact_1form(&not_closed, &origin(2)),
            Err(Error::NotClosed)
        );
    }

    #[test]
    fn permuted_potential_has_exact_inverse() {
        // a = dx2 + 2 x1 dx1 = d(x2 + x1^2): replace x2, u = (x2 + x1^2, x1)
        let a = DiffForm::basis(2, &[2])
            .unwrap()
            .checked_add(&DiffForm::term(2, &[1], x(2, 1).scale(&rat(2))).unwrap())
            .unwrap();
        let base = [rat(0), rat(0)];
        let ChartWitness::Exact(c) = chart_from_exact_1form(&a, &base).unwrap() else {
            panic!("expected an exact chart");
        };
        assert_eq!(first_differential(&c.to_forward()), a);
        assert!(verify_chart(&Object::Form(a), &c).unwrap().constant);
    }

    #[test]
    fn aligned_codim1_chart() {
        let a = DiffForm::term(3, &[1, 2], Poly::from_int(3, 3)).unwrap();
        let w = chart_from_aligned_codim1_form(&a, &origin(3))
            .unwrap()
            .unwrap();
        let ChartWitness::Exact(c) = &w else {
            panic!("constant coefficient")
        };
        assert!(verify_chart(&Object::Form(a), c).unwrap().constant);

        // (1 + x2^2) dx[1,2] is closed; u1 = x1 (1 + x2^2) has no polynomial inverse
        let a = DiffForm::term(3, &[1, 2], &Poly::one(3) + &x(3, 2).pow(2)).unwrap();
        let w = chart_from_aligned_codim1_form(&a, &origin(3))
            .unwrap()
            .unwrap();
        assert!(w.is_formal());
        assert!(
            verify_witness(&Object::Form(a.clone()), &w, &origin(3))
                .unwrap()
                .constant
        );
        let bad = DiffForm::term(3, &[1, 2], &Poly::one(3) + &x(3, 3).pow(2)).unwrap();
        assert_eq!(
            chart_from_aligned_codim1_form(&bad, &origin(3)),
            Err(Error::NotClosed)
        );
    }

    #[test]
    fn formal_multivector_chart() {
        // V = (1 + x3) d1^d2 with y1 = x1 / (1 + x3)
        let n = 3;
        let f = &Poly::one(n) + &x(n, 3);
        let fc =
            ForwardChart::rational(vec![x(n, 1), &x(n, 2) * &f, &x(n, 3) * &f], f.clone()).unwrap();
        let v = Object::MultiVector(MultiVector::term(n, &[1, 2], f).unwrap());
        let check = verify_forward(&v, &fc, &origin(3)).unwrap();
        assert!(check.constant, "{:?}", check.residual);
        assert_eq!(
            check.expressed,
            Some(Object::MultiVector(MultiVector::basis(3, &[1, 2]).unwrap()))
        );
        let w = Object::MultiVector(MultiVector::term(n, &[1, 2], x(n, 1) + Poly::one(n)).unwrap());
        assert!(!verify_forward(&w, &fc, &origin(3)).unwrap().constant);
    }
}
