//! `(n-1)`-vector fields: the Pfaffian form, the derivation-law test, the
//! explicit first-order system `E[j,l]` and, for `n = 3`, the constraint
//! coefficients built from `[V,V]`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::charts::{verify_forward, ChartWitness};
use super::kernel::kernel_system;
use super::system::{build_system, GammaIndex, GammaSystem, Kind, LinearExpr};
use super::{DetectionReport, Object, Reason, Verdict};
use crate::error::{Error, Result};
use crate::exterior::{exterior_derivative, schouten_bracket, Chart, ForwardChart, MultiIndex};
use crate::linalg::Matrix;
use crate::poly::{Poly, Rational};
use crate::{DiffForm, MultiVector};

fn check_codim1(v: &MultiVector) -> Result<()> {
    let n = v.n();
    if n < 2 || v.degree() + 1 != n {
        return Err(Error::DegreeMismatch {
            expected: n.saturating_sub(1),
            got: v.degree(),
        });
    }
    Ok(())
}

/// Coefficients `F_i` in `V = sum_i F_i d_1 ^ .. (d_i omitted) .. ^ d_n`.
pub fn codim1_coefficients(v: &MultiVector) -> Result<Vec<Poly>> {
    check_codim1(v)?;
    let n = v.n();
    Ok((1..=n)
        .map(|i| v.coeff(&MultiIndex::single(i).complement(n)))
        .collect())
}

/// `alpha = sum_i (-1)^(i-1) F_i dx^i`, with `X ^ V = alpha(X) d_1 ^ .. ^ d_n`;
/// it spans the Pfaffian system of `V` wherever `V` does not vanish.
pub fn pfaffian_form(v: &MultiVector) -> Result<DiffForm> {
    let f = codim1_coefficients(v)?;
    let n = v.n();
    DiffForm::from_terms(
        n,
        1,
        f.into_iter().enumerate().map(|(k, c)| {
            let c = if k % 2 == 0 { c } else { -c };
            (MultiIndex::single(k + 1), c)
        }),
    )
}

/// Decides an `(n-1)`-vector field through its Pfaffian form `alpha` and,
/// optionally, a supplied connection 1-form `omega` of a derivation law on
/// top-degree fields (`nabla V_n = omega (x) V_n`).
///
/// Requirements checked: `alpha ^ d alpha = 0` (integrable Pfaffian system),
/// and for the law, `d omega = 0` (flat) and `d alpha + omega ^ alpha = 0`.
pub fn detect_vec_n_minus_1(
    v: &MultiVector,
    derivation_form: Option<&DiffForm>,
    base: &[Rational],
) -> Result<DetectionReport> {
    check_codim1(v)?;
    let n = v.n();
    if !v.nonvanishing_at(base)? {
        return Err(Error::VanishingAtBase);
    }
    let mut reasons = Vec::new();
    let alpha = pfaffian_form(v)?;
    let kernel = kernel_system(&Object::MultiVector(v.clone()), base)?;
    reasons.push(Reason::new(
        "Prop1.13-pfaffian",
        format!(
            "Pfaffian system has rank {} at the base point, spanned by alpha",
            kernel.len()
        ),
        Some(alpha.to_string()),
    ));
    let dalpha = exterior_derivative(&alpha);
    let frob = alpha.wedge(&dalpha)?;
    if !frob.is_zero() {
        reasons.push(Reason::new(
            "Prop1.11-pfaffian-integrability",
            "Pfaffian system is not integrable: alpha ^ d alpha != 0",
            Some(frob.to_string()),
        ));
        return Ok(DetectionReport::new(Verdict::NotConstant, reasons));
    }

    if let Some(omega) = derivation_form {
        if omega.n() != n || omega.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                got: omega.degree(),
            });
        }
        let curvature = exterior_derivative(omega);
        let d_nabla = dalpha.checked_add(&omega.wedge(&alpha)?)?;
        if curvature.is_zero() && d_nabla.is_zero() {
            reasons.push(Reason::new(
                "Prop1.13-derivation-law",
                "supplied derivation law is flat and d alpha + omega ^ alpha = 0",
                Some(omega.to_string()),
            ));
            return Ok(DetectionReport::new(Verdict::Constant, reasons));
        }
        reasons.push(Reason::new(
            "Prop1.13-derivation-law-rejected",
            "supplied derivation law fails: d omega or d alpha + omega ^ alpha is nonzero",
            Some(format!(
                "d omega = {curvature}; d alpha + omega ^ alpha = {d_nabla}"
            )),
        ));
    }

    // a single coefficient F against d_1 .. (d_k omitted) .. d_n
    let mut terms = v.terms();
    if let (Some((idx, f)), None) = (terms.next(), terms.next()) {
        let k = idx.complement(n).entries()[0];
        let xk = DiffForm::basis(n, &[k])?;
        let obstruction = exterior_derivative(&DiffForm::function(f.clone())).wedge(&xk)?;
        if obstruction.is_zero() {
            let witness = aligned_chart(f, k, n)?;
            let obj = Object::MultiVector(v.clone());
            let check = verify_forward(&obj, &witness.forward(), base)?;
            if check.constant {
                reasons.push(Reason::new(
                    "Prop1.13-normalized-chart",
                    format!("coefficient depends only on x{k}; rescaling one coordinate by it gives constant coefficients"),
                    Some(witness.to_string()),
                ));
                let mut report = DetectionReport::new(Verdict::Constant, reasons);
                report.chart = Some(witness);
                return Ok(report);
            }
        }
        reasons.push(Reason::new(
            "Prop1.13-normalized-obstruction",
            format!("in the given coordinates dF ^ dx{k} != 0, so the trivial derivation law does not apply"),
            Some(obstruction.to_string()),
        ));
    }
    Ok(DetectionReport::new(Verdict::Inconclusive, reasons))
}

/// `y^m = x^m / F` on the first index `m != k`, other coordinates unchanged,
/// for `F` depending on `x^k` only.
fn aligned_chart(f: &Poly, k: usize, n: usize) -> Result<ChartWitness> {
    let m = if k == 1 { 2 } else { 1 };
    let xs: Vec<Poly> = (1..=n).map(|i| Poly::var(n, i)).collect::<Result<_>>()?;
    if let Some(c) = f.constant_value() {
        let mut forward = xs.clone();
        let mut inverse = xs;
        forward[m - 1] = forward[m - 1].scale(&c.recip());
        inverse[m - 1] = inverse[m - 1].scale(&c);
        return Ok(ChartWitness::Exact(Chart::new(forward, inverse)?));
    }
    let numerators = xs
        .iter()
        .enumerate()
        .map(|(i, x)| if i + 1 == m { x.clone() } else { x * f })
        .collect();
    Ok(ChartWitness::Formal(ForwardChart::rational(
        numerators,
        f.clone(),
    )?))
}

/// The `n^2 x n^2(n+1)/2` system `E[j,l]` written out term by term, rows keyed
/// `(j, index of d_l omitted)`, `rhs = dF_l/dx^j`.
pub fn codim1_explicit_system(v: &MultiVector) -> Result<GammaSystem> {
    let rows = explicit_rows(v)?;
    let rhs = |j: usize, idx: &MultiIndex| v.coeff(idx).diff(j).expect("in range");
    Ok(build_system(v.n(), v.n() - 1, Kind::MultiVector, rows, rhs))
}

fn explicit_rows(v: &MultiVector) -> Result<BTreeMap<(usize, MultiIndex), LinearExpr>> {
    let f = codim1_coefficients(v)?;
    let n = v.n();
    let delta = |a: usize, b: usize| -> i64 { i64::from(a == b) };
    let sign = |e: usize| -> i64 {
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    };
    let mut rows = BTreeMap::new();
    for j in 1..=n {
        for l in 1..=n {
            let mut e = LinearExpr::zero();
            let fl = &f[l - 1];
            for h in 1..l {
                e.add_term(
                    GammaIndex::new(h, j, h),
                    fl.scale(&Rational::from_integer((delta(l, 1) - 1).into())),
                );
            }
            for h in l + 1..=n {
                e.add_term(
                    GammaIndex::new(h, j, h),
                    fl.scale(&Rational::from_integer((delta(l, n) - 1).into())),
                );
            }
            for i in l + 1..=n {
                let c = (1 - delta(i, 1)) * (1 - delta(l, n)) * sign(i - l);
                e.add_term(
                    GammaIndex::new(i, j, l),
                    f[i - 1].scale(&Rational::from_integer(c.into())),
                );
            }
            for i in 1..l {
                let c = (1 - delta(i, n)) * (1 - delta(l, 1)) * sign(l - i);
                e.add_term(
                    GammaIndex::new(i, j, l),
                    f[i - 1].scale(&Rational::from_integer(c.into())),
                );
            }
            rows.insert((j, MultiIndex::single(l).complement(n)), e);
        }
    }
    Ok(rows)
}

/// Rank at `point` of `E[j,l]` with all `n^3` symbols `Gamma^a_{bc}` kept as
/// independent unknowns (no torsion symmetry imposed).
pub fn unsymmetrized_rank(v: &MultiVector, point: &[Rational]) -> Result<usize> {
    let n = v.n();
    let rows = explicit_rows(v)?;
    let mut m = Matrix::zeros(rows.len(), n * n * n);
    for (r, expr) in rows.values().enumerate() {
        for (g, c) in expr.terms() {
            m.set(
                r,
                (g.a - 1) * n * n + (g.b - 1) * n + (g.c - 1),
                c.eval(point)?,
            );
        }
    }
    Ok(m.rank())
}

/// For `n = 3`: `C = -1/2 <dx^1 ^ dx^2 ^ dx^3, [V,V]>` and the constraint
/// numerators `F_2 C_1 = F_2 dC/dx^3 - C dF_2/dx^3`,
/// `F_2 C_2 = F_2 dC/dx^2 - C dF_2/dx^2` (cleared of the denominator `F_2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraints {
    pub c: Poly,
    /// The `dx^1 ^ dx^2 ^ dx^3` coefficient of `alpha ^ d alpha`.
    pub c_from_pfaffian: Poly,
    pub f2_c1: Poly,
    pub f2_c2: Poly,
}

impl Constraints {
    /// `C == 0` implies both constraint numerators vanish.
    pub fn vanish_when_c_zero(&self) -> bool {
        !self.c.is_zero() || (self.f2_c1.is_zero() && self.f2_c2.is_zero())
    }
}

pub fn constraints_n3(v: &MultiVector) -> Result<Constraints> {
    check_codim1(v)?;
    if v.n() != 3 {
        return Err(Error::DimensionMismatch(3, v.n()));
    }
    let top = MultiIndex::new(vec![1, 2, 3], 3)?;
    let bracket = schouten_bracket(v, v)?;
    let c = bracket
        .coeff(&top)
        .scale(&Rational::new((-1).into(), 2.into()));
    let alpha = pfaffian_form(v)?;
    let c_from_pfaffian = alpha.wedge(&exterior_derivative(&alpha))?.coeff(&top);
    let f2 = &codim1_coefficients(v)?[1];
    let numerator =
        |k: usize| &(f2 * &c.diff(k).expect("in range")) - &(&c * &f2.diff(k).expect("in range"));
    Ok(Constraints {
        f2_c1: numerator(3),
        f2_c2: numerator(2),
        c,
        c_from_pfaffian,
    })
}

/// The explicit system together with the `n = 3` constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimOneSystem {
    pub system: GammaSystem,
    pub constraints: Option<Constraints>,
}

pub fn nminus1_vector_system(v: &MultiVector) -> Result<CodimOneSystem> {
    let system = codim1_explicit_system(v)?;
    let constraints = if v.n() == 3 {
        Some(constraints_n3(v)?)
    } else {
        None
    };
    Ok(CodimOneSystem {
        system,
        constraints,
    })
}

/// Rank of the coefficient matrix at `point`.
pub fn coefficient_rank(sys: &GammaSystem, point: &[Rational]) -> Result<usize> {
    let (m, _): (Matrix, _) = sys.evaluate(point)?;
    Ok(m.rank())
}

/// Whether every `F_i` is nonzero at `point`.
pub fn generic_point(v: &MultiVector, point: &[Rational]) -> Result<bool> {
    for f in codim1_coefficients(v)? {
        if f.eval(point)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::system::assemble_multivector_system;
    use crate::poly::rat;

    fn x(n: usize, k: usize) -> Poly {
        Poly::var(n, k).unwrap()
    }

    fn origin(n: usize) -> Vec<Rational> {
        vec![rat(0); n]
    }

    #[test]
    fn normalized_case_builds_chart() {
        let v = MultiVector::term(3, &[1, 2], &Poly::one(3) + &x(3, 3)).unwrap();
        let r = detect_vec_n_minus_1(&v, None, &origin(3)).unwrap();
        assert_eq!(r.verdict, Verdict::Constant);
        let chart = r.chart.unwrap();
        assert!(chart.is_formal());
        assert!(chart.to_string().starts_with("u1 = (x1) / (x3 + 1)\n"));

        let v = MultiVector::basis(3, &[1, 2]).unwrap();
        assert_eq!(
            detect_vec_n_minus_1(&v, None, &origin(3)).unwrap().verdict,
            Verdict::Constant
        );
    }

    #[test]
    fn normalized_obstruction() {
        let v = MultiVector::term(3, &[1, 2], x(3, 1)).unwrap();
        let base = [rat(1), rat(0), rat(0)];
        let r = detect_vec_n_minus_1(&v, None, &base).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let last = r.reasons.last().unwrap();
        assert_eq!(last.rule, "Prop1.13-normalized-obstruction");
        assert_eq!(last.witness.as_deref(), Some("dx[1,3]"));
        assert_eq!(
            detect_vec_n_minus_1(&v, None, &origin(3)),
            Err(Error::VanishingAtBase)
        );
    }

    #[test]
    fn supplied_derivation_law() {
        // alpha = (1 + x3) dx3 is closed, so the trivial law omega = 0 works
        let v = MultiVector::term(3, &[1, 2], &Poly::one(3) + &x(3, 3)).unwrap();
        let zero = DiffForm::zero(3, 1);
        let r = detect_vec_n_minus_1(&v, Some(&zero), &origin(3)).unwrap();
        assert_eq!(r.verdict, Verdict::Constant);
        assert_eq!(r.reasons.last().unwrap().rule, "Prop1.13-derivation-law");
        // wrong law is reported and the normalized path still decides
        let bad = DiffForm::basis(3, &[1]).unwrap();
        let r = detect_vec_n_minus_1(&v, Some(&bad), &origin(3)).unwrap();
        assert!(r
            .reasons
            .iter()
            .any(|q| q.rule == "Prop1.13-derivation-law-rejected"));
        assert_eq!(r.verdict, Verdict::Constant);
    }

    #[test]
    fn explicit_system_is_negated_general_system() {
        let v = MultiVector::term(3, &[1, 2], &Poly::one(3) + &x(3, 3))
            .unwrap()
            .checked_add(&MultiVector::term(3, &[1, 3], x(3, 2).pow(2)).unwrap())
            .unwrap()
            .checked_add(&MultiVector::term(3, &[2, 3], &x(3, 1) * &x(3, 2)).unwrap())
            .unwrap();
        let e = codim1_explicit_system(&v).unwrap();
        let g = assemble_multivector_system(&v).unwrap();
        assert_eq!(e.rows.len(), 9);
        assert_eq!(e.num_unknowns(), 18);
        for (re, rg) in e.rows.iter().zip(&g.rows) {
            assert_eq!((re.j, &re.index), (rg.j, &rg.index));
            assert_eq!(re.rhs, -rg.rhs.clone());
            let neg: BTreeMap<usize, Poly> =
                rg.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect();
            assert_eq!(re.coeffs, neg);
        }
    }

    #[test]
    fn constraint_coefficient_two_ways() {
        // d1^d2 + x1 d1^d3: [V,V] = 2 d123, so C = -1
        let v = MultiVector::basis(3, &[1, 2])
            .unwrap()
            .checked_add(&MultiVector::term(3, &[1, 3], x(3, 1)).unwrap())
            .unwrap();
        let c = constraints_n3(&v).unwrap();
        assert_eq!(c.c, Poly::from_int(3, -1));
        assert_eq!(c.c_from_pfaffian, Poly::from_int(3, -1));
        let flat = constraints_n3(&MultiVector::term(3, &[1, 2], x(3, 3)).unwrap()).unwrap();
        assert!(flat.c.is_zero() && flat.vanish_when_c_zero());
    }

    // With torsion-free unknowns the rank falls short of n^2 by C(n-1, 2),
    // the number of independent components of alpha ^ d alpha modulo alpha.
    #[test]
    fn rank_at_generic_point() {
        let v = MultiVector::term(3, &[1, 2], &Poly::one(3) + &x(3, 3))
            .unwrap()
            .checked_add(&MultiVector::term(3, &[1, 3], &Poly::one(3) + &x(3, 2)).unwrap())
            .unwrap()
            .checked_add(&MultiVector::term(3, &[2, 3], Poly::from_int(3, 2)).unwrap())
            .unwrap();
        let p = [rat(1), rat(2), rat(3)];
        assert!(generic_point(&v, &p).unwrap());
        let sys = codim1_explicit_system(&v).unwrap();
        assert_eq!(coefficient_rank(&sys, &p).unwrap(), 8);
        assert_eq!(unsymmetrized_rank(&v, &p).unwrap(), 9);
    }
}
