//! Equation and unknown counts for the first- and second-order systems.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::binomial;

/// How two counts compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

impl Relation {
    fn of(lhs: usize, rhs: usize) -> Self {
        match lhs.cmp(&rhs) {
            Ordering::Less => Relation::Less,
            Ordering::Equal => Relation::Equal,
            Ordering::Greater => Relation::Greater,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Less => "<",
            Relation::Equal => "==",
            Relation::Greater => ">",
        }
    }
}

/// A known classification of a count comparison for this `(n, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Less,
    Equal,
    Greater,
    AtLeast,
}

impl Expectation {
    pub fn admits(self, r: Relation) -> bool {
        match self {
            Expectation::Less => r == Relation::Less,
            Expectation::Equal => r == Relation::Equal,
            Expectation::Greater => r == Relation::Greater,
            Expectation::AtLeast => r != Relation::Less,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub name: &'static str,
    pub lhs: usize,
    pub rhs: usize,
    pub relation: Relation,
    /// `None` when no classification is known for this `(n, p)`.
    pub expected: Option<Expectation>,
}

impl Comparison {
    fn new(name: &'static str, lhs: usize, rhs: usize, expected: Option<Expectation>) -> Self {
        Comparison {
            name,
            lhs,
            rhs,
            relation: Relation::of(lhs, rhs),
            expected,
        }
    }

    /// True unless a known classification is contradicted.
    pub fn holds(&self) -> bool {
        self.expected.map_or(true, |e| e.admits(self.relation))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counting {
    pub n: usize,
    pub deg: usize,
    /// `n C(n,p)`: the first-order system in the Christoffel unknowns.
    pub rows_first_order: usize,
    /// `n C(n,p) + n C(n,2)`: the second-order system in `v` and its derivatives.
    pub rows_second_order: usize,
    /// `n^3`.
    pub unknowns_gamma: usize,
    /// `n^2 (n+1) / 2` once torsion-freeness is imposed.
    pub unknowns_gamma_symmetric: usize,
    /// `n^2 + n^3`.
    pub unknowns_v: usize,
    pub comparisons: Vec<Comparison>,
}

fn second_order_expectation(n: usize, p: usize) -> Option<Expectation> {
    if n >= 7 && (3..=n - 3).contains(&p) {
        if n == 7 && (p == 3 || p == 4) {
            Some(Expectation::Equal)
        } else {
            Some(Expectation::Greater)
        }
    } else {
        None
    }
}

fn first_order_expectation(n: usize, p: usize) -> Option<Expectation> {
    if (2..=7).contains(&n) && p >= 2 && p + 2 <= n {
        Some(Expectation::Less)
    } else if n == 8 && [2, 3, 5, 6].contains(&p) {
        Some(Expectation::Less)
    } else if n == 8 && p == 4 {
        Some(Expectation::AtLeast)
    } else if n >= 9 && p + 2 >= n && p <= n {
        Some(Expectation::Less)
    } else if n >= 9 && p >= 3 && p + 3 <= n {
        Some(Expectation::AtLeast)
    } else {
        None
    }
}

pub fn counting(n: usize, deg: usize) -> Result<Counting> {
    if n == 0 || deg == 0 || deg > n {
        return Err(Error::DegreeOutOfRange { degree: deg, n });
    }
    let rows_first_order = n * binomial(n, deg);
    let rows_second_order = rows_first_order + n * binomial(n, 2);
    let unknowns_gamma = n * n * n;
    let unknowns_v = n * n + unknowns_gamma;
    let comparisons = vec![
        Comparison::new(
            "first-order rows vs n^3",
            rows_first_order,
            unknowns_gamma,
            first_order_expectation(n, deg),
        ),
        Comparison::new(
            "second-order rows vs n^2 + n^3",
            rows_second_order,
            unknowns_v,
            second_order_expectation(n, deg),
        ),
    ];
    Ok(Counting {
        n,
        deg,
        rows_first_order,
        rows_second_order,
        unknowns_gamma,
        unknowns_gamma_symmetric: n * n * (n + 1) / 2,
        unknowns_v,
        comparisons,
    })
}

impl fmt::Display for Counting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}, degree = {}", self.n, self.deg)?;
        writeln!(f, "first-order rows n*C(n,p) = {}", self.rows_first_order)?;
        writeln!(
            f,
            "second-order rows n*C(n,p) + n*C(n,2) = {}",
            self.rows_second_order
        )?;
        writeln!(f, "unknowns Gamma n^3 = {}", self.unknowns_gamma)?;
        writeln!(
            f,
            "unknowns Gamma (torsion-free) n^2(n+1)/2 = {}",
            self.unknowns_gamma_symmetric
        )?;
        writeln!(f, "unknowns v n^2 + n^3 = {}", self.unknowns_v)?;
        for c in &self.comparisons {
            let label = if c.relation == Relation::Equal {
                "equality"
            } else {
                "inequality"
            };
            let status = match c.expected {
                None => "",
                Some(_) if c.holds() => " [as classified]",
                Some(_) => " [CONTRADICTS classification]",
            };
            writeln!(
                f,
                "{}: {} {} {} {}{}",
                c.name,
                label,
                c.lhs,
                c.relation.symbol(),
                c.rhs,
                status
            )?;
        }
        Ok(())
    }
}

/// Sizes of the first-order system for an `(n-1)`-vector field and of the
/// system joined with its first prolongation and the curvature components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinedCounts {
    pub n: usize,
    pub equations: usize,
    pub unknowns: usize,
    pub joined_equations: usize,
    pub joined_unknowns: usize,
    /// `n^2 (3n + 2n^2 + 7) / 6` and `n^2 (n+1)^2 / 2`.
    pub joined_equations_closed: usize,
    pub joined_unknowns_closed: usize,
}

pub fn joined_counts(n: usize) -> JoinedCounts {
    let n2 = n * n;
    let equations = n2;
    let unknowns = n2 * (n + 1) / 2;
    JoinedCounts {
        n,
        equations,
        unknowns,
        joined_equations: n2 + n2 * (n + 1) / 2 + n2 * (n2 - 1) / 3,
        joined_unknowns: unknowns + n2 * n * (n + 1) / 2,
        joined_equations_closed: n2 * (3 * n + 2 * n2 + 7) / 6,
        joined_unknowns_closed: n2 * (n + 1) * (n + 1) / 2,
    }
}
