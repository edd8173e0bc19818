use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational};

/// A polynomial coordinate change `u = u(x)` on `R^n` together with its
/// polynomial inverse `x = x(u)`.
///
/// Construction checks both compositions against the identity exactly and
/// requires the chart to be centred, `u(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    n: usize,
    forward: Vec<Poly>,
    inverse: Vec<Poly>,
}

fn identity_map(n: usize) -> Vec<Poly> {
    (1..=n)
        .map(|k| Poly::var(n, k).expect("in range"))
        .collect()
}

fn check_map(n: usize, map: &[Poly]) -> Result<()> {
    if map.len() != n {
        return Err(Error::Arity {
            expected: n,
            got: map.len(),
        });
    }
    if let Some(bad) = map.iter().find(|p| p.nvars() != n) {
        return Err(Error::VarCountMismatch(n, bad.nvars()));
    }
    Ok(())
}

impl Chart {
    pub fn new(forward: Vec<Poly>, inverse: Vec<Poly>) -> Result<Self> {
        let n = forward.len();
        check_map(n, &forward)?;
        check_map(n, &inverse)?;
        let id = identity_map(n);
        for (i, (u, x)) in forward.iter().zip(&inverse).enumerate() {
            if u.compose(&inverse)? != id[i] {
                return Err(Error::ChartRoundTrip(format!(
                    "u{}(x(u)) != u{}",
                    i + 1,
                    i + 1
                )));
            }
            if x.compose(&forward)? != id[i] {
                return Err(Error::ChartRoundTrip(format!(
                    "x{}(u(x)) != x{}",
                    i + 1,
                    i + 1
                )));
            }
        }
        let origin = vec![Rational::zero(); n];
        for u in &forward {
            if !u.eval(&origin)?.is_zero() {
                return Err(Error::ChartNotCentred);
            }
        }
        Ok(Chart {
            n,
            forward,
            inverse,
        })
    }

    pub fn identity(n: usize) -> Self {
        Chart {
            n,
            forward: identity_map(n),
            inverse: identity_map(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The components `u^i(x)`.
    pub fn forward(&self) -> &[Poly] {
        &self.forward
    }

    /// The components `x^i(u)`.
    pub fn inverse_map(&self) -> &[Poly] {
        &self.inverse
    }

    /// The inverse coordinate change as a chart in its own right.
    pub fn inverse(&self) -> Chart {
        Chart {
            n: self.n,
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &Chart) -> Result<Chart> {
        if self.n != inner.n {
            return Err(Error::DimensionMismatch(self.n, inner.n));
        }
        let forward = self
            .forward
            .iter()
            .map(|u| u.compose(&inner.forward))
            .collect::<Result<Vec<_>>>()?;
        let inverse = inner
            .inverse
            .iter()
            .map(|x| x.compose(&self.inverse))
            .collect::<Result<Vec<_>>>()?;
        Ok(Chart {
            n: self.n,
            forward,
            inverse,
        })
    }

    /// `J[i][j] = du^i/dx^j`.
    pub fn jacobian(&self) -> Vec<Vec<Poly>> {
        jacobian_of(&self.forward)
    }

    /// `v[i][j] = (dx^i/du^j)(u(x))`, the inverse of the Jacobian as a
    /// polynomial matrix in `x`.
    pub fn inverse_jacobian(&self) -> Vec<Vec<Poly>> {
        jacobian_of(&self.inverse)
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|p| p.compose(&self.forward).expect("same dimension"))
                    .collect()
            })
            .collect()
    }

    /// Forward-only view of this chart.
    pub fn to_forward(&self) -> ForwardChart {
        ForwardChart::polynomial(self.forward.clone()).expect("validated chart")
    }

    /// Chart file body: `u<i> = <poly>` lines, then `inv x<i> = <poly>`
    /// lines with the inverse written in `u<k>` variables.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        for (i, u) in self.forward.iter().enumerate() {
            s.push_str(&format!("u{} = {}\n", i + 1, u));
        }
        for (i, x) in self.inverse.iter().enumerate() {
            s.push_str(&format!(
                "inv x{} = {}\n",
                i + 1,
                rename_vars(&x.to_string(), 'u')
            ));
        }
        s
    }
}

/// Replaces variable names `x<k>` with `<letter><k>` in a rendering.
fn rename_vars(text: &str, letter: char) -> String {
    text.replace('x', &letter.to_string())
}

pub(crate) fn jacobian_of(map: &[Poly]) -> Vec<Vec<Poly>> {
    map.iter()
        .map(|u| {
            (1..=u.nvars())
                .map(|j| u.diff(j).expect("in range"))
                .collect()
        })
        .collect()
}

/// A forward-only coordinate map `u^i = numerator_i / denominator`, used as
/// a witness when no polynomial inverse is available. The denominator is
/// one for polynomial maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForwardChart {
    n: usize,
    numerators: Vec<Poly>,
    denominator: Poly,
}

impl ForwardChart {
    pub fn polynomial(forward: Vec<Poly>) -> Result<Self> {
        let n = forward.len();
        check_map(n, &forward)?;
        Ok(ForwardChart {
            n,
            numerators: forward,
            denominator: Poly::one(n),
        })
    }

    pub fn rational(numerators: Vec<Poly>, denominator: Poly) -> Result<Self> {
        let n = numerators.len();
        check_map(n, &numerators)?;
        if denominator.nvars() != n {
            return Err(Error::VarCountMismatch(n, denominator.nvars()));
        }
        if denominator.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(ForwardChart {
            n,
            numerators,
            denominator,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn numerators(&self) -> &[Poly] {
        &self.numerators
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator
            .constant_value()
            .map(|c| c.is_one())
            .unwrap_or(false)
    }

    /// Numerators of the differentials: `du^i = N_i / D^2` with
    /// `N_i = D dP_i - P_i dD` (plain `dP_i` in the polynomial case).
    pub(crate) fn differential_numerators(&self) -> Vec<Vec<Poly>> {
        let jp = jacobian_of(&self.numerators);
        if self.is_polynomial() {
            return jp;
        }
        let d = &self.denominator;
        let dd: Vec<Poly> = (1..=self.n).map(|j| d.diff(j).expect("in range")).collect();
        jp.into_iter()
            .zip(&self.numerators)
            .map(|(row, p)| {
                row.iter()
                    .zip(&dd)
                    .map(|(dp, ddj)| &(d * dp) - &(p * ddj))
                    .collect()
            })
            .collect()
    }

    /// Power of the denominator dividing each differential.
    pub(crate) fn differential_denominator(&self) -> Poly {
        if self.is_polynomial() {
            Poly::one(self.n)
        } else {
            &self.denominator * &self.denominator
        }
    }
}

impl fmt::Display for ForwardChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.numerators.iter().enumerate() {
            if self.is_polynomial() {
                writeln!(f, "u{} = {}", i + 1, p)?;
            } else {
                writeln!(f, "u{} = ({}) / ({})", i + 1, p, self.denominator)?;
            }
        }
        Ok(())
    }
}
