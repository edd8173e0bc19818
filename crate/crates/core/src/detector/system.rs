//! The linear systems in the Christoffel unknowns whose solvability is
//! necessary for constant coefficients, and their pointwise rank analysis.

use std::collections::BTreeMap;
use std::fmt;

use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::exterior::{binomial, Homogeneous, MultiIndex, Variance};
use crate::linalg::Matrix;
use crate::poly::{Poly, Rational};
use crate::{DiffForm, MultiVector};

/// A symbolic unknown `Gamma^a_{bc}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaIndex {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl GammaIndex {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        GammaIndex { a, b, c }
    }

    /// Representative with `b <= c`, identifying `Gamma^a_{bc}` with `Gamma^a_{cb}`.
    pub fn symmetric(self) -> Self {
        if self.b <= self.c {
            self
        } else {
            GammaIndex::new(self.a, self.c, self.b)
        }
    }
}

impl fmt::Display for GammaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gamma[{}][{}][{}]", self.a, self.b, self.c)
    }
}

/// A linear combination of Christoffel unknowns with polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearExpr {
    terms: BTreeMap<GammaIndex, Poly>,
}

impl LinearExpr {
    pub fn zero() -> Self {
        LinearExpr::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GammaIndex, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &GammaIndex) -> Option<&Poly> {
        self.terms.get(g)
    }

    pub fn add_term(&mut self, g: GammaIndex, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&g) {
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(g, s);
                }
            }
            None => {
                self.terms.insert(g, c);
            }
        }
    }

    pub fn add(&self, other: &LinearExpr) -> LinearExpr {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(*g, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LinearExpr {
        let mut out = LinearExpr::zero();
        for (g, p) in &self.terms {
            out.add_term(*g, p.scale(c));
        }
        out
    }

    /// Merges `Gamma^a_{bc}` and `Gamma^a_{cb}` into one unknown.
    pub fn symmetrized(&self) -> LinearExpr {
        let mut out = LinearExpr::zero();
        for (g, c) in &self.terms {
            out.add_term(g.symmetric(), c.clone());
        }
        out
    }

    /// Substitutes polynomial values for every unknown.
    pub fn substitute(&self, conn: &Connection) -> Poly {
        let mut acc = Poly::zero(conn.n());
        for (g, c) in &self.terms {
            acc = &acc + &(c * conn.get(g.a, g.b, g.c));
        }
        acc
    }
}

/// `Phi_{j,J}` keyed by `(j, J)` for every `j` and every `J` of the object's degree.
pub type PhiMap = BTreeMap<(usize, MultiIndex), LinearExpr>;

fn slot_phi<V: Variance>(
    obj: &Homogeneous<V>,
    unknown: impl Fn(usize, usize, usize) -> GammaIndex,
) -> PhiMap {
    let (n, p) = (obj.n(), obj.degree());
    let mut phi = PhiMap::new();
    for j in 1..=n {
        for idx in MultiIndex::all(n, p) {
            phi.insert((j, idx), LinearExpr::zero());
        }
    }
    for (idx, f) in obj.terms() {
        for (h, &ih) in idx.entries().iter().enumerate() {
            for i in 1..=n {
                let mut entries = idx.entries().to_vec();
                entries[h] = i;
                let Some((sign, target)) = MultiIndex::sorted(entries) else {
                    continue;
                };
                let c = if sign < 0 { -f.clone() } else { f.clone() };
                for j in 1..=n {
                    phi.get_mut(&(j, target.clone()))
                        .expect("all keys present")
                        .add_term(unknown(j, ih, i), c.clone());
                }
            }
        }
    }
    phi
}

/// `Phi_{j,J} = sum_{I,h,i} Gamma^{i_h}_{ji} F_I [dx^J] dx^{i_1}..(dx^i at slot h)..dx^{i_p}`:
/// the right-hand side of `dF_J/dx^j = Phi_{j,J}` for a parallel form.
pub fn assemble_phi(a: &DiffForm) -> PhiMap {
    slot_phi(a, |j, ih, i| GammaIndex::new(ih, j, i))
}

/// Contravariant analogue built from `nabla_j d_k = Gamma^i_{jk} d_i`:
/// `dF_J/dx^j = -PhiBar_{j,J}` for a parallel multivector.
pub fn assemble_phi_bar(v: &MultiVector) -> PhiMap {
    slot_phi(v, |j, ih, i| GammaIndex::new(i, j, ih))
}

/// Whether a system comes from a form or a multivector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Form,
    MultiVector,
}

/// One equation `sum_k coeffs[k] * unknowns[k] = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub j: usize,
    pub index: MultiIndex,
    pub coeffs: BTreeMap<usize, Poly>,
    pub rhs: Poly,
}

/// The linear system in the torsion-free unknowns `Gamma^a_{bc}`, `b <= c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSystem {
    pub n: usize,
    pub degree: usize,
    pub kind: Kind,
    pub unknowns: Vec<GammaIndex>,
    pub rows: Vec<Row>,
}

/// Symmetric unknowns in lexicographic `(a, b, c)` order.
pub fn symmetric_unknowns(n: usize) -> Vec<GammaIndex> {
    let mut out = Vec::with_capacity(n * n * (n + 1) / 2);
    for a in 1..=n {
        for b in 1..=n {
            for c in b..=n {
                out.push(GammaIndex::new(a, b, c));
            }
        }
    }
    out
}

pub(super) fn build_system(
    n: usize,
    degree: usize,
    kind: Kind,
    phi: PhiMap,
    rhs: impl Fn(usize, &MultiIndex) -> Poly,
) -> GammaSystem {
    let unknowns = symmetric_unknowns(n);
    let column: BTreeMap<GammaIndex, usize> =
        unknowns.iter().enumerate().map(|(k, g)| (*g, k)).collect();
    let rows = phi
        .into_iter()
        .map(|((j, index), expr)| {
            let coeffs = expr
                .symmetrized()
                .terms()
                .map(|(g, c)| (column[g], c.clone()))
                .collect();
            let rhs = rhs(j, &index);
            Row {
                j,
                index,
                coeffs,
                rhs,
            }
        })
        .collect();
    GammaSystem {
        n,
        degree,
        kind,
        unknowns,
        rows,
    }
}

fn check_degree(degree: usize, n: usize) -> Result<()> {
    if degree == 0 || degree > n {
        return Err(Error::DegreeOutOfRange { degree, n });
    }
    Ok(())
}

/// Rows `Phi_{j,J} = dF_J/dx^j`.
pub fn assemble_form_system(a: &DiffForm) -> Result<GammaSystem> {
    check_degree(a.degree(), a.n())?;
    Ok(build_system(
        a.n(),
        a.degree(),
        Kind::Form,
        assemble_phi(a),
        |j, idx| a.coeff(idx).diff(j).expect("in range"),
    ))
}

/// Rows `PhiBar_{j,J} = -dF_J/dx^j`.
pub fn assemble_multivector_system(v: &MultiVector) -> Result<GammaSystem> {
    check_degree(v.degree(), v.n())?;
    Ok(build_system(
        v.n(),
        v.degree(),
        Kind::MultiVector,
        assemble_phi_bar(v),
        |j, idx| -v.coeff(idx).diff(j).expect("in range"),
    ))
}

impl GammaSystem {
    /// Row count predicted from the shape alone: `n * C(n, p)`.
    pub fn expected_rows(n: usize, degree: usize) -> usize {
        n * binomial(n, degree)
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    /// Coefficient matrix and right-hand side at a point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<(Matrix, Vec<Rational>)> {
        let mut m = Matrix::zeros(self.rows.len(), self.unknowns.len());
        let mut rhs = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, p) in &row.coeffs {
                m.set(r, c, p.eval(point)?);
            }
            rhs.push(row.rhs.eval(point)?);
        }
        Ok((m, rhs))
    }

    /// Whether `Gamma` (after symmetrization) satisfies every row identically.
    pub fn is_solved_by(&self, conn: &Connection) -> bool {
        self.rows.iter().all(|row| {
            let mut acc = Poly::zero(self.n);
            for (&c, p) in &row.coeffs {
                let g = self.unknowns[c];
                acc = &acc + &(p * conn.get(g.a, g.b, g.c));
            }
            acc == row.rhs
        })
    }
}

/// Ranks of the coefficient and augmented matrices at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub point: Vec<Rational>,
    pub rank_m: usize,
    pub rank_m_aug: usize,
    pub consistent: bool,
}

/// Exact Rouché–Capelli test at each point.
pub fn rank_analysis(sys: &GammaSystem, points: &[Vec<Rational>]) -> Result<Vec<RankReport>> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    points
        .iter()
        .map(|pt| {
            if pt.len() != sys.n {
                return Err(Error::Arity {
                    expected: sys.n,
                    got: pt.len(),
                });
            }
            let (m, rhs) = sys.evaluate(pt)?;
            let rank_m = m.rank();
            let rank_m_aug = m.augment(&rhs).rank();
            Ok(RankReport {
                point: pt.clone(),
                rank_m,
                rank_m_aug,
                consistent: rank_m == rank_m_aug,
            })
        })
        .collect()
}

/// `Phi` with numeric Christoffel symbols, as a family of forms indexed by `j`.
pub fn phi_with(conn: &Connection, a: &DiffForm) -> Result<Vec<DiffForm>> {
    if conn.n() != a.n() {
        return Err(Error::DimensionMismatch(conn.n(), a.n()));
    }
    let phi = assemble_phi(a);
    let n = a.n();
    let mut out: Vec<DiffForm> = (0..n).map(|_| DiffForm::zero(n, a.degree())).collect();
    for ((j, idx), expr) in phi {
        let v = expr.substitute(conn);
        if !v.is_zero() {
            out[j - 1] =
                out[j - 1].checked_add(&DiffForm::from_terms(n, a.degree(), [(idx, v)])?)?;
        }
    }
    Ok(out)
}

/// Mixed-partial residuals `D_l Phi_{j,J} - D_j Phi_{l,J}` for `j < l`,
/// where `D_l` differentiates `Phi` and then replaces every first derivative
/// `dF_I/dx^l` by `Phi_{l,I}` (derivatives taken modulo the system itself).
/// For a flat connection these vanish identically for every form.
pub fn integrability_residuals(
    conn: &Connection,
    a: &DiffForm,
) -> Result<Vec<((usize, usize), DiffForm)>> {
    let n = a.n();
    let phi = phi_with(conn, a)?;
    let dconn: Vec<Connection> = (1..=n)
        .map(|l| conn.map(|g| g.diff(l).expect("in range")))
        .collect();
    // d_l Phi_j = Phi_j(d_l Gamma, F) + Phi_j(Gamma, Phi_l)
    let total = |j: usize, l: usize| -> Result<DiffForm> {
        let a1 = &phi_with(&dconn[l - 1], a)?[j - 1];
        let a2 = &phi_with(conn, &phi[l - 1])?[j - 1];
        a1.checked_add(a2)
    };
    let mut out = Vec::new();
    for j in 1..=n {
        for l in j + 1..=n {
            out.push(((j, l), total(j, l)?.checked_sub(&total(l, j)?)?));
        }
    }
    Ok(out)
}

/// Literal mixed partials `d/dx^l Phi_{j,J} - d/dx^j Phi_{l,J}`; these vanish
/// when the form is parallel for the connection.
pub fn literal_mixed_partials(
    conn: &Connection,
    a: &DiffForm,
) -> Result<Vec<((usize, usize), DiffForm)>> {
    let n = a.n();
    let phi = phi_with(conn, a)?;
    let mut out = Vec::new();
    for j in 1..=n {
        for l in j + 1..=n {
            let lhs = phi[j - 1].map_coeffs(|c| c.diff(l).expect("in range"));
            let rhs = phi[l - 1].map_coeffs(|c| c.diff(j).expect("in range"));
            out.push(((j, l), lhs.checked_sub(&rhs)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{christoffel_from_chart, covariant_derivative_form};
    use crate::exterior::Chart;
    use crate::poly::rat;

    fn x(n: usize, k: usize) -> Poly {
        Poly::var(n, k).unwrap()
    }

    #[test]
    fn shape_counts() {
        for n in 2..=5 {
            for p in 1..=n {
                let sys = assemble_form_system(
                    &DiffForm::basis(n, &(1..=p).collect::<Vec<_>>()).unwrap(),
                )
                .unwrap();
                assert_eq!(sys.rows.len(), n * binomial(n, p));
                assert_eq!(sys.num_unknowns(), n * n * (n + 1) / 2);
            }
        }
        assert!(assemble_form_system(&DiffForm::zero(3, 0)).is_err());
    }

    #[test]
    fn constant_form_is_solved_by_zero() {
        let a = DiffForm::basis(3, &[1, 2]).unwrap();
        let sys = assemble_form_system(&a).unwrap();
        assert!(sys.rows.iter().all(|r| r.rhs.is_zero()));
        assert!(sys.is_solved_by(&Connection::zero(3)));
        let reports =
            rank_analysis(&sys, &[vec![rat(0); 3], vec![rat(1), rat(2), rat(-3)]]).unwrap();
        assert!(reports.iter().all(|r| r.consistent));
        assert!(rank_analysis(&sys, &[]).is_err());
    }

    #[test]
    fn non_closed_one_form_is_inconsistent() {
        let a = DiffForm::term(2, &[1], x(2, 2)).unwrap();
        let sys = assemble_form_system(&a).unwrap();
        let r = rank_analysis(&sys, &[vec![rat(1), rat(1)]]).unwrap();
        assert!(!r[0].consistent);
        assert!(r[0].rank_m <= sys.rows.len().min(sys.num_unknowns()));
    }

    #[test]
    fn phi_matches_covariant_derivative() {
        let phi = Chart::new(
            vec![&x(2, 1) + &x(2, 2).pow(2), x(2, 2)],
            vec![&x(2, 1) - &x(2, 2).pow(2), x(2, 2)],
        )
        .unwrap();
        let conn = christoffel_from_chart(&phi);
        let a = DiffForm::term(2, &[1], &x(2, 1) * &x(2, 2))
            .unwrap()
            .checked_add(&DiffForm::term(2, &[2], x(2, 1).pow(3)).unwrap())
            .unwrap();
        let nabla = covariant_derivative_form(&conn, &a).unwrap();
        let phis = phi_with(&conn, &a).unwrap();
        for j in 1..=2 {
            let partial = a.map_coeffs(|c| c.diff(j).unwrap());
            assert_eq!(partial.checked_sub(&phis[j - 1]).unwrap(), nabla[j - 1]);
        }
    }

    #[test]
    fn contravariant_system_is_solved_by_chart_connection() {
        let phi = Chart::new(
            vec![&x(2, 1) + &x(2, 2).pow(2), x(2, 2)],
            vec![&x(2, 1) - &x(2, 2).pow(2), x(2, 2)],
        )
        .unwrap();
        let conn = christoffel_from_chart(&phi);
        let v = crate::exterior::pushforward(&phi.inverse(), &MultiVector::basis(2, &[2]).unwrap())
            .unwrap();
        assert!(!v.is_constant());
        let sys = assemble_multivector_system(&v).unwrap();
        assert!(sys.is_solved_by(&conn));
    }
}
