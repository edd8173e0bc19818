//! Linear connections with polynomial Christoffel symbols: the flat
//! torsion-free connection parallelizing a chart, covariant derivatives of
//! forms and multivectors, and torsion/curvature tests.
//!
//! Convention: `nabla_{d_b} d_c = Gamma^a_{bc} d_a`, indices 1-based and
//! written `(a, b, c)` in the API.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{Chart, DiffForm, Homogeneous, MultiIndex, MultiVector, Variance};
use crate::poly::Poly;

/// Christoffel symbols `Gamma^a_{bc}` of a linear connection on `R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    n: usize,
    gamma: Vec<Poly>,
}

impl Connection {
    pub fn zero(n: usize) -> Self {
        Connection {
            n,
            gamma: vec![Poly::zero(n); n * n * n],
        }
    }

    /// Fills every symbol from `f(a, b, c)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Poly) -> Result<Self> {
        let mut c = Connection::zero(n);
        for a in 1..=n {
            for b in 1..=n {
                for cc in 1..=n {
                    c.set(a, b, cc, f(a, b, cc))?;
                }
            }
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn offset(&self, a: usize, b: usize, c: usize) -> usize {
        debug_assert!(
            (1..=self.n).contains(&a) && (1..=self.n).contains(&b) && (1..=self.n).contains(&c)
        );
        ((a - 1) * self.n + (b - 1)) * self.n + (c - 1)
    }

    /// `Gamma^a_{bc}`.
    pub fn get(&self, a: usize, b: usize, c: usize) -> &Poly {
        &self.gamma[self.offset(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, value: Poly) -> Result<()> {
        if value.nvars() != self.n {
            return Err(Error::VarCountMismatch(self.n, value.nvars()));
        }
        for idx in [a, b, c] {
            if idx == 0 || idx > self.n {
                return Err(Error::VarOutOfRange {
                    var: idx,
                    nvars: self.n,
                });
            }
        }
        let o = self.offset(a, b, c);
        self.gamma[o] = value;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(Poly::is_zero)
    }

    /// Applies `f` to every symbol.
    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Connection {
        Connection {
            n: self.n,
            gamma: self.gamma.iter().map(f).collect(),
        }
    }

    /// Golden-file dump: one `Gamma[a][b][c] = <poly>` line per symbol.
    pub fn to_dump_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 1..=self.n {
            for b in 1..=self.n {
                for c in 1..=self.n {
                    writeln!(f, "Gamma[{a}][{b}][{c}] = {}", self.get(a, b, c))?;
                }
            }
        }
        Ok(())
    }
}

/// Christoffel symbols of the connection parallelizing the coordinate
/// fields of `phi`: `Gamma^b_{ij} = v^b_h d^2u^h/dx^i dx^j`, where `v` is the
/// inverse Jacobian obtained from the chart's inverse map.
pub fn christoffel_from_chart(phi: &Chart) -> Connection {
    let n = phi.n();
    let v = phi.inverse_jacobian();
    let jac = phi.jacobian();
    let mut conn = Connection::zero(n);
    for i in 1..=n {
        for j in i..=n {
            let second: Vec<Poly> = (0..n)
                .map(|h| jac[h][j - 1].diff(i).expect("in range"))
                .collect();
            for b in 1..=n {
                let mut acc = Poly::zero(n);
                for h in 0..n {
                    if !second[h].is_zero() {
                        acc = &acc + &(&v[b - 1][h] * &second[h]);
                    }
                }
                conn.set(b, i, j, acc.clone()).expect("in range");
                conn.set(b, j, i, acc).expect("in range");
            }
        }
    }
    conn
}

/// The same symbols through first derivatives of the inverse Jacobian:
/// `Gamma^a_{cd} = -(dv^a_b/dx^d) (du^b/dx^c)`.
pub fn christoffel_from_inverse_jacobian(phi: &Chart) -> Connection {
    let n = phi.n();
    let v = phi.inverse_jacobian();
    let jac = phi.jacobian();
    let mut conn = Connection::zero(n);
    for a in 1..=n {
        for c in 1..=n {
            for d in 1..=n {
                let mut acc = Poly::zero(n);
                for b in 0..n {
                    let dv = v[a - 1][b].diff(d).expect("in range");
                    acc = &acc - &(&dv * &jac[b][c - 1]);
                }
                conn.set(a, c, d, acc).expect("in range");
            }
        }
    }
    conn
}

fn check_dims(conn: &Connection, n: usize) -> Result<()> {
    if conn.n != n {
        return Err(Error::DimensionMismatch(conn.n, n));
    }
    Ok(())
}

/// Slot-wise action of the connection on the basis: each index `i_h` of every
/// term is replaced in turn by every `i`, weighted by `weight(j, i_h, i)`.
fn slot_replacement<V: Variance>(
    obj: &Homogeneous<V>,
    j: usize,
    weight: impl Fn(usize, usize, usize) -> Poly,
) -> Homogeneous<V> {
    let n = obj.n();
    let mut out = Homogeneous::<V>::zero(n, obj.degree());
    for (idx, f) in obj.terms() {
        for (h, &ih) in idx.entries().iter().enumerate() {
            for i in 1..=n {
                let w = weight(j, ih, i);
                if w.is_zero() {
                    continue;
                }
                let mut entries = idx.entries().to_vec();
                entries[h] = i;
                if let Some((sign, sorted)) = MultiIndex::sorted(entries) {
                    let c = &w * f;
                    out.add_term(sorted, if sign < 0 { -c } else { c });
                }
            }
        }
    }
    out
}

fn partial<V: Variance>(obj: &Homogeneous<V>, j: usize) -> Homogeneous<V> {
    obj.map_coeffs(|c| c.diff(j).expect("in range"))
}

/// `nabla_{d_j} a` for `j = 1..n`, using `nabla_{d_j} dx^k = -Gamma^k_{ji} dx^i`.
pub fn covariant_derivative_form(conn: &Connection, a: &DiffForm) -> Result<Vec<DiffForm>> {
    check_dims(conn, a.n())?;
    (1..=a.n())
        .map(|j| {
            let rot = slot_replacement(a, j, |j, k, i| conn.get(k, j, i).clone());
            partial(a, j).checked_sub(&rot)
        })
        .collect()
}

/// `nabla_{d_j} V` for `j = 1..n`, using `nabla_{d_j} d_k = Gamma^i_{jk} d_i`.
pub fn covariant_derivative_multivector(
    conn: &Connection,
    v: &MultiVector,
) -> Result<Vec<MultiVector>> {
    check_dims(conn, v.n())?;
    (1..=v.n())
        .map(|j| {
            let rot = slot_replacement(v, j, |j, k, i| conn.get(i, j, k).clone());
            partial(v, j).checked_add(&rot)
        })
        .collect()
}

/// `T^a_{bc} = Gamma^a_{bc} - Gamma^a_{cb}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torsion {
    n: usize,
    components: Vec<Poly>,
}

impl Torsion {
    pub fn get(&self, a: usize, b: usize, c: usize) -> &Poly {
        &self.components[((a - 1) * self.n + (b - 1)) * self.n + (c - 1)]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    /// Nonzero components as `((a, b, c), value)`.
    pub fn nonzero(&self) -> Vec<((usize, usize, usize), Poly)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    let v = self.get(a, b, c);
                    if !v.is_zero() {
                        out.push(((a, b, c), v.clone()));
                    }
                }
            }
        }
        out
    }
}

pub fn torsion(conn: &Connection) -> Torsion {
    let n = conn.n;
    let mut components = Vec::with_capacity(n * n * n);
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                components.push(conn.get(a, b, c) - conn.get(a, c, b));
            }
        }
    }
    Torsion { n, components }
}

/// Violation of the flatness condition
/// `dGamma^a_{bd}/dx^c - dGamma^a_{bc}/dx^d = Gamma^e_{bc} Gamma^a_{de} - Gamma^e_{bd} Gamma^a_{ce}`,
/// stored as `R^a_{bcd}` = left side minus right side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    n: usize,
    components: Vec<Poly>,
}

impl CurvatureTensor {
    fn offset(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        (((a - 1) * self.n + (b - 1)) * self.n + (c - 1)) * self.n + (d - 1)
    }

    /// `R^a_{bcd}`.
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> &Poly {
        &self.components[self.offset(a, b, c, d)]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn nonzero(&self) -> Vec<((usize, usize, usize, usize), Poly)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    for d in 1..=n {
                        let v = self.get(a, b, c, d);
                        if !v.is_zero() {
                            out.push(((a, b, c, d), v.clone()));
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn curvature(conn: &Connection) -> CurvatureTensor {
    let n = conn.n;
    let mut components = Vec::with_capacity(n.pow(4));
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                for d in 1..=n {
                    let lhs = &conn.get(a, b, d).diff(c).expect("in range")
                        - &conn.get(a, b, c).diff(d).expect("in range");
                    let mut rhs = Poly::zero(n);
                    for e in 1..=n {
                        rhs = &rhs + &(conn.get(e, b, c) * conn.get(a, d, e));
                        rhs = &rhs - &(conn.get(e, b, d) * conn.get(a, c, e));
                    }
                    components.push(&lhs - &rhs);
                }
            }
        }
    }
    CurvatureTensor { n, components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::pushforward;
    use crate::poly::rat;

    fn x(n: usize, k: usize) -> Poly {
        Poly::var(n, k).unwrap()
    }

    fn plane_shear() -> Chart {
        // u = (x1 + x2^2, x2)
        Chart::new(
            vec![&x(2, 1) + &x(2, 2).pow(2), x(2, 2)],
            vec![&x(2, 1) - &x(2, 2).pow(2), x(2, 2)],
        )
        .unwrap()
    }

    #[test]
    fn identity_chart_has_no_symbols() {
        assert!(christoffel_from_chart(&Chart::identity(3)).is_zero());
    }

    #[test]
    fn plane_shear_symbols() {
        let conn = christoffel_from_chart(&plane_shear());
        // v = [[1, -2x2], [0, 1]] and only d^2u^1/dx2^2 = 2 survives
        let mut expected = Connection::zero(2);
        expected.set(1, 2, 2, Poly::from_int(2, 2)).unwrap();
        assert_eq!(conn, expected);
        assert_eq!(christoffel_from_inverse_jacobian(&plane_shear()), expected);
    }

    #[test]
    fn linear_chart_has_no_symbols() {
        // u = (x1 + 3x2, x2)
        let c = Chart::new(
            vec![&x(2, 1) + &x(2, 2).scale(&rat(3)), x(2, 2)],
            vec![&x(2, 1) - &x(2, 2).scale(&rat(3)), x(2, 2)],
        )
        .unwrap();
        assert!(christoffel_from_chart(&c).is_zero());
    }

    #[test]
    fn covariant_derivatives_parallelize_chart_objects() {
        let phi = plane_shear();
        let conn = christoffel_from_chart(&phi);
        // du^1 = dx1 + 2 x2 dx2
        let du1 = DiffForm::basis(2, &[1])
            .unwrap()
            .checked_add(&DiffForm::term(2, &[2], x(2, 2).scale(&rat(2))).unwrap())
            .unwrap();
        assert!(covariant_derivative_form(&conn, &du1)
            .unwrap()
            .iter()
            .all(DiffForm::is_zero));
        // d/du^1 written in x: push the constant field forward by the inverse chart
        let e1 = MultiVector::basis(2, &[1]).unwrap();
        let field = pushforward(&phi.inverse(), &e1).unwrap();
        assert!(covariant_derivative_multivector(&conn, &field)
            .unwrap()
            .iter()
            .all(MultiVector::is_zero));
    }

    #[test]
    fn flat_connection_reduces_to_partials() {
        let conn = Connection::zero(2);
        let w = DiffForm::term(2, &[1], &x(2, 1) * &x(2, 2)).unwrap();
        let d = covariant_derivative_form(&conn, &w).unwrap();
        assert_eq!(d[0], DiffForm::term(2, &[1], x(2, 2)).unwrap());
        assert_eq!(d[1], DiffForm::term(2, &[1], x(2, 1)).unwrap());
        let c = DiffForm::basis(2, &[1, 2]).unwrap();
        assert!(covariant_derivative_form(&conn, &c)
            .unwrap()
            .iter()
            .all(DiffForm::is_zero));
        let v = MultiVector::basis(2, &[2]).unwrap();
        assert!(covariant_derivative_multivector(&conn, &v)
            .unwrap()
            .iter()
            .all(MultiVector::is_zero));
        let v = MultiVector::term(2, &[2], x(2, 1)).unwrap();
        assert_eq!(
            covariant_derivative_multivector(&conn, &v).unwrap()[0],
            MultiVector::basis(2, &[2]).unwrap()
        );
    }

    #[test]
    fn torsion_and_curvature_witnesses() {
        let mut conn = Connection::zero(2);
        conn.set(1, 1, 2, Poly::one(2)).unwrap();
        let t = torsion(&conn);
        assert_eq!(t.get(1, 1, 2), &Poly::one(2));
        assert_eq!(t.get(1, 2, 1), &-Poly::one(2));

        let mut conn = Connection::zero(2);
        conn.set(1, 1, 1, x(2, 2)).unwrap();
        let r = curvature(&conn);
        assert_eq!(r.get(1, 1, 2, 1), &Poly::one(2));
        assert_eq!(r.get(1, 1, 1, 2), &-Poly::one(2));
        assert!(!r.is_zero());
    }

    #[test]
    fn chart_connection_is_flat_and_symmetric() {
        let conn = christoffel_from_chart(&plane_shear());
        assert!(torsion(&conn).is_zero());
        assert!(curvature(&conn).is_zero());
    }

    #[test]
    fn dump_format() {
        let conn = christoffel_from_chart(&plane_shear());
        let dump = conn.to_dump_string();
        assert_eq!(dump.lines().count(), 8);
        assert!(dump.contains("Gamma[1][2][2] = 2\n"));
        assert!(dump.starts_with("Gamma[1][1][1] = 0\n"));
    }
}
