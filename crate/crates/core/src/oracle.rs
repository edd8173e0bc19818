//! Ground truth for tests: random unipotent polynomial charts, labeled
//! corpora of constant and certified non-constant objects, and a literal
//! Schouten bracket used to cross-check the optimized one.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detector::{Kind, Object, Verdict};
use crate::error::{Error, Result};
use crate::exterior::{
    exterior_derivative, pullback, pushforward, schouten_bracket, Chart, MultiIndex,
};
use crate::poly::{Poly, Rational};
use crate::{DiffForm, MultiVector};

/// Coefficient range of generated polynomials and constant objects.
pub const COEFF_RANGE: i64 = 9;

const RETRIES_PER_SAMPLE: usize = 64;

/// `u^target = x^target + g(x^others)`; `g` never involves `x^target` and
/// has no constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shear {
    pub target: usize,
    pub g: Poly,
}

impl Shear {
    pub fn new(n: usize, target: usize, g: Poly) -> Result<Self> {
        if target == 0 || target > n {
            return Err(Error::VarOutOfRange {
                var: target,
                nvars: n,
            });
        }
        if g.nvars() != n {
            return Err(Error::VarCountMismatch(n, g.nvars()));
        }
        if g.depends_on(target) || !g.constant_term().is_zero() {
            return Err(Error::ChartRoundTrip(format!(
                "shear of x{target} is not unipotent"
            )));
        }
        Ok(Shear { target, g })
    }

    /// The shear as a chart; its inverse is `x^target = u^target - g(u)`.
    pub fn to_chart(&self) -> Chart {
        let n = self.g.nvars();
        let xs: Vec<Poly> = (1..=n)
            .map(|k| Poly::var(n, k).expect("in range"))
            .collect();
        let mut forward = xs.clone();
        let mut inverse = xs;
        forward[self.target - 1] = &forward[self.target - 1] + &self.g;
        inverse[self.target - 1] = &inverse[self.target - 1] - &self.g;
        Chart::new(forward, inverse).expect("shears are invertible")
    }
}

/// A composition of shears, applied first to last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnipotentChart {
    n: usize,
    shears: Vec<Shear>,
}

impl UnipotentChart {
    pub fn new(n: usize, shears: Vec<Shear>) -> Result<Self> {
        if let Some(s) = shears.iter().find(|s| s.g.nvars() != n) {
            return Err(Error::VarCountMismatch(n, s.g.nvars()));
        }
        Ok(UnipotentChart { n, shears })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shears(&self) -> &[Shear] {
        &self.shears
    }

    pub fn to_chart(&self) -> Chart {
        self.shears.iter().fold(Chart::identity(self.n), |acc, s| {
            s.to_chart().compose(&acc).expect("same dimension")
        })
    }
}

fn small_int(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let c = rng.gen_range(-COEFF_RANGE..=COEFF_RANGE);
        if c != 0 {
            return c;
        }
    }
}

/// Random polynomial with `terms` monomials of total degree `1..=degree`
/// in the variables `vars`.
fn random_poly(
    rng: &mut ChaCha8Rng,
    n: usize,
    vars: &[usize],
    degree: u32,
    terms: usize,
    constant: bool,
) -> Poly {
    let mut p = if constant {
        Poly::from_int(n, small_int(rng))
    } else {
        Poly::zero(n)
    };
    if vars.is_empty() {
        return p;
    }
    for _ in 0..terms {
        let d = rng.gen_range(1..=degree.max(1));
        let mut exps = vec![0u32; n];
        for _ in 0..d {
            exps[vars[rng.gen_range(0..vars.len())] - 1] += 1;
        }
        let c = Rational::from_integer(small_int(rng).into());
        p = &p + &Poly::from_terms(n, [(exps, c)]).expect("arity");
    }
    p
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-COEFF_RANGE..=COEFF_RANGE);
    let den: i64 = rng.gen_range(1..=5);
    Rational::new(num.into(), den.into())
}

pub fn random_unipotent(
    n: usize,
    degree_bound: u32,
    num_shears: usize,
    seed: u64,
) -> UnipotentChart {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shears = Vec::with_capacity(num_shears);
    for _ in 0..num_shears {
        let target = rng.gen_range(1..=n.max(1));
        let others: Vec<usize> = (1..=n).filter(|&k| k != target).collect();
        let terms = rng.gen_range(1..=2);
        let g = random_poly(&mut rng, n, &others, degree_bound, terms, false);
        shears.push(Shear { target, g });
    }
    UnipotentChart { n, shears }
}

/// Random centred polynomial chart with a polynomial inverse. `num_shears = 0`
/// gives the identity.
pub fn random_chart(n: usize, degree_bound: u32, num_shears: usize, seed: u64) -> Chart {
    random_unipotent(n, degree_bound, num_shears, seed).to_chart()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ObstructionKind {
    /// `d a != 0`.
    NotClosed,
    /// `[V,V] != 0`.
    SelfBracket,
}

impl ObstructionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObstructionKind::NotClosed => "not-closed",
            ObstructionKind::SelfBracket => "self-bracket",
        }
    }
}

/// Exact certificate: the obstruction object has component `index` equal to
/// the nonzero `value` at `point`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub witness: Object,
    pub point: Vec<Rational>,
    pub index: MultiIndex,
    pub value: Rational,
}

impl Obstruction {
    /// Re-evaluates the certificate from scratch.
    pub fn holds(&self) -> bool {
        let coeff = match &self.witness {
            Object::Form(a) => a.coeff(&self.index),
            Object::MultiVector(v) => v.coeff(&self.index),
        };
        !self.value.is_zero() && coeff.eval(&self.point).ok().as_ref() == Some(&self.value)
    }
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let point: Vec<String> = self.point.iter().map(|r| r.to_string()).collect();
        let token = match self.witness {
            Object::Form(_) => "dx",
            Object::MultiVector(_) => "Dx",
        };
        write!(
            f,
            "{} {} ; component {}{} = {} at {}",
            self.kind.as_str(),
            self.witness,
            token,
            self.index,
            self.value,
            point.join(",")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub object: Object,
    pub chart: Option<Chart>,
    pub label: Verdict,
    pub obstruction: Option<Obstruction>,
}

impl Sample {
    /// One-file dump used for golden regression files.
    pub fn to_dump_string(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("n: {}\n", self.object.n()));
        s.push_str(&format!("object: {}\n", self.object));
        s.push_str(&format!("label: {}\n", self.label.as_str()));
        match &self.obstruction {
            Some(o) => s.push_str(&format!("obstruction: {o}\n")),
            None => s.push_str("obstruction: none\n"),
        }
        match &self.chart {
            Some(c) => {
                s.push_str("chart:\n");
                s.push_str(&c.to_file_string());
            }
            None => s.push_str("chart: none\n"),
        }
        s
    }
}

fn check_degree(n: usize, degree: usize) -> Result<()> {
    if n == 0 || degree == 0 || degree > n {
        return Err(Error::DegreeOutOfRange { degree, n });
    }
    Ok(())
}

/// `count` objects with constant coefficients in a random chart: a random
/// constant `sum c_I du^I` pulled back to `x` (or a constant multivector
/// pushed back to `x`), each labeled `CONSTANT` together with its chart.
pub fn positive_corpus(
    n: usize,
    kind: Kind,
    degree: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Sample>> {
    check_degree(n, degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = MultiIndex::all(n, degree);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let chart = random_chart(n, 2, rng.gen_range(1..=2), rng.gen());
        let mut coeffs: Vec<(MultiIndex, Poly)> = Vec::new();
        for idx in &indices {
            if rng.gen_bool(0.5) {
                coeffs.push((idx.clone(), Poly::from_int(n, small_int(&mut rng))));
            }
        }
        if coeffs.is_empty() {
            let idx = indices[rng.gen_range(0..indices.len())].clone();
            coeffs.push((idx, Poly::from_int(n, small_int(&mut rng))));
        }
        let object = match kind {
            Kind::Form => {
                Object::Form(pullback(&chart, &DiffForm::from_terms(n, degree, coeffs)?)?)
            }
            Kind::MultiVector => Object::MultiVector(pushforward(
                &chart.inverse(),
                &MultiVector::from_terms(n, degree, coeffs)?,
            )?),
        };
        out.push(Sample {
            object,
            chart: Some(chart),
            label: Verdict::Constant,
            obstruction: None,
        });
    }
    Ok(out)
}

fn certify(
    kind: ObstructionKind,
    witness: Object,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Obstruction>> {
    if witness.is_zero() {
        return Ok(None);
    }
    let n = witness.n();
    for _ in 0..4 {
        let point: Vec<Rational> = (0..n).map(|_| random_rational(rng)).collect();
        let found = match &witness {
            Object::Form(a) => first_nonzero(a.terms(), &point)?,
            Object::MultiVector(v) => first_nonzero(v.terms(), &point)?,
        };
        if let Some((index, value)) = found {
            return Ok(Some(Obstruction {
                kind,
                witness,
                point,
                index,
                value,
            }));
        }
    }
    Ok(None)
}

fn first_nonzero<'a>(
    terms: impl Iterator<Item = (&'a MultiIndex, &'a Poly)>,
    point: &[Rational],
) -> Result<Option<(MultiIndex, Rational)>> {
    for (idx, c) in terms {
        let value = c.eval(point)?;
        if !value.is_zero() {
            return Ok(Some((idx.clone(), value)));
        }
    }
    Ok(None)
}

/// `count` objects carrying an exactly certified obstruction: `d a != 0` for
/// forms, `[V,V] != 0` for multivectors, each nonzero at a rational point.
///
/// Top-degree forms are excluded (a nonvanishing top form is always
/// constant), as are multivector degrees whose self-bracket vanishes
/// identically: odd `q`, and `2q - 1 > n`.
pub fn negative_corpus(
    n: usize,
    kind: Kind,
    degree: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Sample>> {
    check_degree(n, degree)?;
    match kind {
        Kind::Form if degree == n => {
            return Err(Error::ExcludedDegree {
                degree,
                reason: "top-degree forms are closed".into(),
            })
        }
        Kind::MultiVector if degree % 2 == 1 || 2 * degree - 1 > n => {
            return Err(Error::ExcludedDegree {
                degree,
                reason: "self-bracket vanishes identically".into(),
            })
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = MultiIndex::all(n, degree);
    let vars: Vec<usize> = (1..=n).collect();
    let mut out = Vec::with_capacity(count);
    for s in 0..count {
        let mut sample = None;
        for _ in 0..RETRIES_PER_SAMPLE {
            let mut coeffs: Vec<(MultiIndex, Poly)> = Vec::new();
            for idx in &indices {
                if rng.gen_bool(0.5) {
                    let constant = rng.gen_bool(0.5);
                    let terms = rng.gen_range(1..=2);
                    coeffs.push((
                        idx.clone(),
                        random_poly(&mut rng, n, &vars, 2, terms, constant),
                    ));
                }
            }
            let (object, kind, witness) = match kind {
                Kind::Form => {
                    let a = DiffForm::from_terms(n, degree, coeffs)?;
                    let da = Object::Form(exterior_derivative(&a));
                    (Object::Form(a), ObstructionKind::NotClosed, da)
                }
                Kind::MultiVector => {
                    let v = MultiVector::from_terms(n, degree, coeffs)?;
                    let vv = Object::MultiVector(schouten_bracket(&v, &v)?);
                    (Object::MultiVector(v), ObstructionKind::SelfBracket, vv)
                }
            };
            if let Some(obstruction) = certify(kind, witness, &mut rng)? {
                sample = Some(Sample {
                    object,
                    chart: None,
                    label: Verdict::NotConstant,
                    obstruction: Some(obstruction),
                });
                break;
            }
        }
        match sample {
            Some(x) => out.push(x),
            None => {
                return Err(Error::RetryExhausted(format!(
                    "no certified obstruction for sample {s} after {RETRIES_PER_SAMPLE} draws"
                )))
            }
        }
    }
    Ok(out)
}

fn plain_lie(x: &(Poly, usize), y: &(Poly, usize), n: usize) -> MultiVector {
    // [f d_a, g d_b] = f dg/dx^a d_b - g df/dx^b d_a
    let (f, a) = x;
    let (g, b) = y;
    let first = MultiVector::term(n, &[*b], f * &g.diff(*a).expect("in range")).expect("in range");
    let second = MultiVector::term(n, &[*a], g * &f.diff(*b).expect("in range")).expect("in range");
    first.checked_sub(&second).expect("same shape")
}

fn wedge_factors(factors: &[(Poly, usize)], n: usize) -> MultiVector {
    factors
        .iter()
        .fold(MultiVector::function(Poly::one(n)), |acc, (f, k)| {
            acc.wedge(&MultiVector::term(n, &[*k], f.clone()).expect("in range"))
                .expect("same dimension")
        })
}

/// Schouten bracket by the decomposable formula
/// `[X_1^..^X_q, Y_1^..^Y_r] = sum_{i,j} (-1)^(i+j) [X_i,Y_j] ^ X_1..^X_i..X_q ^ Y_1..^Y_j..Y_r`,
/// applied literally to every pair of terms. Each term `F Dx^I` is split
/// with `F` on its last factor.
pub fn brute_force_sn_bracket(a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    let n = a.n();
    let (q, r) = (a.degree(), b.degree());
    if q == 0 || r == 0 {
        return Err(Error::DegreeOutOfRange { degree: 0, n });
    }
    let split = |idx: &MultiIndex, c: &Poly| -> Vec<(Poly, usize)> {
        let e = idx.entries();
        e.iter()
            .enumerate()
            .map(|(k, &i)| {
                (
                    if k + 1 == e.len() {
                        c.clone()
                    } else {
                        Poly::one(n)
                    },
                    i,
                )
            })
            .collect()
    };
    let mut out = MultiVector::zero(n, q + r - 1);
    for (ia, f) in a.terms() {
        let xs = split(ia, f);
        for (ib, g) in b.terms() {
            let ys = split(ib, g);
            for i in 0..q {
                for j in 0..r {
                    let mut rest: Vec<(Poly, usize)> = Vec::new();
                    rest.extend(
                        xs.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != i)
                            .map(|(_, x)| x.clone()),
                    );
                    rest.extend(
                        ys.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, y)| y.clone()),
                    );
                    let mut term = plain_lie(&xs[i], &ys[j], n).wedge(&wedge_factors(&rest, n))?;
                    // (-1)^(i+j) with 1-based i, j
                    if (i + j) % 2 == 1 {
                        term = term.neg();
                    }
                    out = out.checked_add(&term)?;
                }
            }
        }
    }
    Ok(out)
}
