//! Decision engine for constant coefficients.
//!
//! `detect` combines exact obstructions (closedness, the self-bracket,
//! Pfaffian integrability, rank drops), the low/high-degree
//! characterizations, supplied-chart verification and the pointwise rank
//! test of the Christoffel system. Verdicts are conservative: anything not
//! settled by one of these is `Inconclusive`.

mod charts;
mod counting;
mod kernel;
mod nminus1;
mod system;

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{exterior_derivative, schouten_bracket, Chart, Homogeneous, Variance};
use crate::poly::{Poly, Rational};
use crate::{DiffForm, MultiVector};

pub use charts::{
    chart_from_aligned_codim1_form, chart_from_exact_1form, chart_from_volume_form,
    coordinate_volume, first_differential, potential, verify_chart, verify_forward, verify_witness,
    ChartCheck, ChartWitness,
};
pub use counting::{
    counting, joined_counts, Comparison, Counting, Expectation, JoinedCounts, Relation,
};
pub use kernel::{contraction_matrix, contraction_rank, kernel_system};
pub use nminus1::{
    codim1_coefficients, codim1_explicit_system, coefficient_rank, constraints_n3,
    detect_vec_n_minus_1, generic_point, nminus1_vector_system, pfaffian_form, unsymmetrized_rank,
    CodimOneSystem, Constraints,
};
pub use system::{
    assemble_form_system, assemble_multivector_system, assemble_phi, assemble_phi_bar,
    integrability_residuals, literal_mixed_partials, phi_with, rank_analysis, symmetric_unknowns,
    GammaIndex, GammaSystem, Kind, LinearExpr, PhiMap, RankReport, Row,
};

/// A form or a multivector field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Form(DiffForm),
    MultiVector(MultiVector),
}

impl Object {
    pub fn n(&self) -> usize {
        match self {
            Object::Form(a) => a.n(),
            Object::MultiVector(v) => v.n(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Object::Form(a) => a.degree(),
            Object::MultiVector(v) => v.degree(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Object::Form(a) => a.is_zero(),
            Object::MultiVector(v) => v.is_zero(),
        }
    }

    pub fn nonvanishing_at(&self, point: &[Rational]) -> Result<bool> {
        match self {
            Object::Form(a) => a.nonvanishing_at(point),
            Object::MultiVector(v) => v.nonvanishing_at(point),
        }
    }

    /// `(content, primitive part)`; see `Homogeneous::factor_content`.
    pub fn factor_content(&self) -> (Poly, Object) {
        match self {
            Object::Form(a) => {
                let (c, p) = a.factor_content();
                (c, Object::Form(p))
            }
            Object::MultiVector(v) => {
                let (c, p) = v.factor_content();
                (c, Object::MultiVector(p))
            }
        }
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Form(a) => write!(f, "{a}"),
            Object::MultiVector(v) => write!(f, "{v}"),
        }
    }
}

impl From<DiffForm> for Object {
    fn from(a: DiffForm) -> Self {
        Object::Form(a)
    }
}

impl From<MultiVector> for Object {
    fn from(v: MultiVector) -> Self {
        Object::MultiVector(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Constant,
    NotConstant,
    ConformalConstant,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Constant => "CONSTANT",
            Verdict::NotConstant => "NOT_CONSTANT",
            Verdict::ConformalConstant => "CONFORMAL_CONSTANT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }

    /// 0 for (conformally) constant, 1 for not constant, 2 for inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Constant | Verdict::ConformalConstant => 0,
            Verdict::NotConstant => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One piece of evidence: a rule identifier, a human-readable detail and an
/// optional rendered witness object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reason {
    pub rule: String,
    pub detail: String,
    pub witness: Option<String>,
}

impl Reason {
    pub fn new(rule: &str, detail: impl Into<String>, witness: Option<String>) -> Self {
        Reason {
            rule: rule.to_string(),
            detail: detail.into(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectionReport {
    pub verdict: Verdict,
    pub reasons: Vec<Reason>,
    pub rank_data: Vec<RankReport>,
    pub chart: Option<ChartWitness>,
}

fn render_point(p: &[Rational]) -> Vec<String> {
    p.iter().map(ToString::to_string).collect()
}

impl DetectionReport {
    pub fn new(verdict: Verdict, reasons: Vec<Reason>) -> Self {
        DetectionReport {
            verdict,
            reasons,
            rank_data: Vec::new(),
            chart: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.reasons.iter().any(|r| r.rule == rule)
    }

    /// Versioned JSON document.
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "verdict": self.verdict.as_str(),
            "reasons": self.reasons.iter().map(|r| json!({
                "rule": r.rule,
                "detail": r.detail,
                "witness": r.witness,
            })).collect::<Vec<_>>(),
            "rank_data": self.rank_data.iter().map(|r| json!({
                "point": render_point(&r.point),
                "rank_m": r.rank_m,
                "rank_m_aug": r.rank_m_aug,
                "consistent": r.consistent,
            })).collect::<Vec<_>>(),
            "chart": self.chart.as_ref().map(ToString::to_string),
            "chart_formal": self.chart.as_ref().map(ChartWitness::is_formal),
        })
    }
}

impl fmt::Display for DetectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict)?;
        for r in &self.reasons {
            writeln!(f, "reason [{}]: {}", r.rule, r.detail)?;
            if let Some(w) = &r.witness {
                for line in w.lines() {
                    writeln!(f, "  witness: {line}")?;
                }
            }
        }
        for r in &self.rank_data {
            writeln!(
                f,
                "rank at ({}): M = {}, M' = {}, {}",
                render_point(&r.point).join(", "),
                r.rank_m,
                r.rank_m_aug,
                if r.consistent {
                    "consistent"
                } else {
                    "inconsistent"
                }
            )?;
        }
        if let Some(c) = &self.chart {
            writeln!(
                f,
                "chart{}:",
                if c.is_formal() {
                    " (formal inverse)"
                } else {
                    ""
                }
            )?;
            f.write_str(&c.to_string())?;
        }
        Ok(())
    }
}

/// Parameters of a detection run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectConfig {
    /// Candidate chart; when it verifies, the verdict is `Constant`.
    pub chart: Option<ChartWitness>,
    /// Base point; the origin when absent.
    pub base: Option<Vec<Rational>>,
    /// Number of random sample points in addition to the base point.
    pub samples: usize,
    pub seed: u64,
    /// Bound on numerators and denominators of sample coordinates.
    pub bound: i64,
    /// Connection form of a derivation law on top-degree fields, used for
    /// `(n-1)`-vector fields.
    pub derivation_form: Option<DiffForm>,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            chart: None,
            base: None,
            samples: 5,
            seed: 0,
            bound: 10,
            derivation_form: None,
        }
    }
}

impl DetectConfig {
    pub fn base_point(&self, n: usize) -> Result<Vec<Rational>> {
        match &self.base {
            None => Ok(vec![Rational::zero(); n]),
            Some(p) if p.len() == n => Ok(p.clone()),
            Some(p) => Err(Error::Arity {
                expected: n,
                got: p.len(),
            }),
        }
    }

    /// The base point followed by the seeded random samples.
    pub fn points(&self, n: usize) -> Result<Vec<Vec<Rational>>> {
        let mut pts = vec![self.base_point(n)?];
        pts.extend(sample_points(n, self.samples, self.seed, self.bound));
        Ok(pts)
    }
}

/// Seeded rational points with numerators in `[-bound, bound]` and
/// denominators in `[1, bound]`.
pub fn sample_points(n: usize, count: usize, seed: u64, bound: i64) -> Vec<Vec<Rational>> {
    let bound = bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let num: i64 = rng.gen_range(-bound..=bound);
                    let den: i64 = rng.gen_range(1..=bound);
                    Rational::new(num.into(), den.into())
                })
                .collect()
        })
        .collect()
}

fn finish(verdict: Verdict, reasons: Vec<Reason>) -> Result<DetectionReport> {
    Ok(DetectionReport::new(verdict, reasons))
}

fn with_chart(mut report: DetectionReport, chart: ChartWitness) -> DetectionReport {
    report.chart = Some(chart);
    report
}

/// Rank of the coefficient matrix of a 2-form (equivalently of its contraction map).
fn ranks(obj: &Object, points: &[Vec<Rational>]) -> Result<Vec<usize>> {
    points.iter().map(|p| contraction_rank(obj, p)).collect()
}

fn check_shape<V: Variance>(obj: &Homogeneous<V>) -> Result<()> {
    if obj.degree() == 0 || obj.degree() > obj.n() {
        return Err(Error::DegreeOutOfRange {
            degree: obj.degree(),
            n: obj.n(),
        });
    }
    Ok(())
}

/// Decides whether `obj` has constant coefficients near the base point.
pub fn detect(obj: &Object, cfg: &DetectConfig) -> Result<DetectionReport> {
    match obj {
        Object::Form(a) => check_shape(a)?,
        Object::MultiVector(v) => check_shape(v)?,
    }
    let n = obj.n();
    let deg = obj.degree();
    let base = cfg.base_point(n)?;
    let mut reasons = Vec::new();

    if let Some(w) = &cfg.chart {
        if w.n() != n {
            return Err(Error::DimensionMismatch(n, w.n()));
        }
        let check = verify_witness(obj, w, &base)?;
        if check.constant {
            reasons.push(Reason::new(
                "chart-verified",
                "object has constant coefficients in the supplied chart",
                check.expressed.map(|e| e.to_string()),
            ));
            return Ok(with_chart(
                DetectionReport::new(Verdict::Constant, reasons),
                w.clone(),
            ));
        }
        reasons.push(Reason::new(
            "chart-rejected",
            "supplied chart leaves non-constant coefficients",
            Some(check.residual.to_string()),
        ));
    }

    if obj.is_zero() {
        reasons.push(Reason::new(
            "zero-object",
            "the zero object has constant coefficients",
            None,
        ));
        return Ok(with_chart(
            DetectionReport::new(Verdict::Constant, reasons),
            ChartWitness::Exact(Chart::identity(n)),
        ));
    }

    // necessary conditions, each certified by an exactly nonzero witness
    match obj {
        Object::Form(a) => {
            let da = exterior_derivative(a);
            if !da.is_zero() {
                reasons.push(Reason::new(
                    "Prop1.3-closedness",
                    "forms with constant coefficients are closed; d(omega) != 0",
                    Some(da.to_string()),
                ));
                return finish(Verdict::NotConstant, reasons);
            }
        }
        Object::MultiVector(v) => {
            let b = schouten_bracket(v, v)?;
            if !b.is_zero() {
                reasons.push(Reason::new(
                    "Prop1.11-bracket",
                    "multivectors with constant coefficients have [V,V] = 0",
                    Some(b.to_string()),
                ));
                return finish(Verdict::NotConstant, reasons);
            }
            if 2 * deg > n + 1 {
                reasons.push(Reason::new(
                    "Rem1.18-bracket-auto",
                    format!(
                        "[V,V] has degree {} > {n}, so it vanishes for every V",
                        2 * deg - 1
                    ),
                    None,
                ));
            }
            if deg + 1 == n {
                let alpha = pfaffian_form(v)?;
                let frob = alpha.wedge(&exterior_derivative(&alpha))?;
                if !frob.is_zero() {
                    reasons.push(Reason::new(
                        "Prop1.11-pfaffian-integrability",
                        "the Pfaffian system is not integrable: alpha ^ d alpha != 0",
                        Some(frob.to_string()),
                    ));
                    return finish(Verdict::NotConstant, reasons);
                }
            }
        }
    }

    if !obj.nonvanishing_at(&base)? {
        reasons.push(Reason::new(
            "vanishing-at-base",
            "a nonzero object with constant coefficients cannot vanish at a point",
            Some(obj.to_string()),
        ));
        return finish(Verdict::NotConstant, reasons);
    }

    let points = cfg.points(n)?;
    let rank_values = ranks(obj, &points)?;
    let max_rank = rank_values.iter().copied().max().unwrap_or(0);
    if rank_values[0] < max_rank {
        let at = rank_values
            .iter()
            .position(|&r| r == max_rank)
            .expect("maximum exists");
        reasons.push(Reason::new(
            "rank-drop",
            format!(
                "contraction rank {} at the base point is below the rank {} attained at ({})",
                rank_values[0],
                max_rank,
                render_point(&points[at]).join(", ")
            ),
            None,
        ));
        return finish(Verdict::NotConstant, reasons);
    }

    // characterizations in low and high degree
    match obj {
        Object::Form(a) => {
            if deg == n {
                let w = chart_from_volume_form(a, &base)?;
                reasons.push(Reason::new(
                    "Ex1.6-volume-form",
                    "a volume form not vanishing at the base point has constant coefficients",
                    Some(w.to_string()),
                ));
                return Ok(with_chart(
                    DetectionReport::new(Verdict::Constant, reasons),
                    w,
                ));
            }
            if deg == 1 {
                let w = chart_from_exact_1form(a, &base)?;
                reasons.push(Reason::new(
                    "Ex1.5-closed-1form",
                    "a closed 1-form not vanishing at the base point is du^1 for a potential u^1",
                    Some(w.to_string()),
                ));
                return Ok(with_chart(
                    DetectionReport::new(Verdict::Constant, reasons),
                    w,
                ));
            }
            if deg + 1 == n {
                reasons.push(Reason::new(
                    "Ex1.8-closed-codim1-form",
                    "a closed (n-1)-form not vanishing at the base point has constant coefficients",
                    None,
                ));
                let report = DetectionReport::new(Verdict::Constant, reasons);
                return Ok(match chart_from_aligned_codim1_form(a, &base)? {
                    Some(w) => with_chart(report, w),
                    None => report,
                });
            }
            if deg == 2 {
                if rank_values.iter().all(|&r| r == max_rank) {
                    reasons.push(Reason::new(
                        "Ex1.7-darboux",
                        format!("closed 2-form of constant rank {max_rank} at all sample points (Darboux)"),
                        None,
                    ));
                    return finish(Verdict::Constant, reasons);
                }
                reasons.push(Reason::new(
                    "Ex1.7-rank-varies",
                    "rank of the 2-form differs between sample points",
                    None,
                ));
            }
        }
        Object::MultiVector(v) => {
            if deg == 1 {
                reasons.push(Reason::new(
                    "Ex1.13-flow-box",
                    "a vector field not vanishing at the base point is a coordinate field",
                    None,
                ));
                return finish(Verdict::Constant, reasons);
            }
            if deg == n {
                reasons.push(Reason::new(
                    "Ex1.19-top-multivector",
                    "an n-vector field not vanishing at the base point has constant coefficients",
                    None,
                ));
                return finish(Verdict::Constant, reasons);
            }
            if deg == 2 && n % 2 == 0 && rank_values[0] == n {
                reasons.push(Reason::new(
                    "Cor1.12-symplectic-bivector",
                    "bivector of full rank with [V,V] = 0 (Darboux)",
                    None,
                ));
                return finish(Verdict::Constant, reasons);
            }
            if deg + 1 == n {
                let sub = detect_vec_n_minus_1(v, cfg.derivation_form.as_ref(), &base)?;
                match sub.verdict {
                    Verdict::Constant | Verdict::NotConstant => {
                        reasons.extend(sub.reasons);
                        let mut report = DetectionReport::new(sub.verdict, reasons);
                        report.chart = sub.chart;
                        return Ok(report);
                    }
                    _ => reasons.extend(sub.reasons),
                }
            }
        }
    }

    // general path: Rouché–Capelli at the base point and the samples
    let sys = match obj {
        Object::Form(a) => assemble_form_system(a)?,
        Object::MultiVector(v) => assemble_multivector_system(v)?,
    };
    let reports = rank_analysis(&sys, &points)?;
    let bad = reports.iter().find(|r| !r.consistent).cloned();
    let verdict = match bad {
        Some(r) => {
            reasons.push(Reason::new(
                "Rem4.3-rank-inconsistent",
                format!(
                    "no torsion-free Christoffel symbols solve the system at ({}), hence no constant coefficients near that point",
                    render_point(&r.point).join(", ")
                ),
                Some(format!("rank M = {}, rank M' = {}", r.rank_m, r.rank_m_aug)),
            ));
            Verdict::NotConstant
        }
        None => {
            reasons.push(Reason::new(
                "Rem4.3-rank-consistent",
                "the Christoffel system is consistent at every sample point; flatness of a solution is not decided",
                None,
            ));
            Verdict::Inconclusive
        }
    };
    let mut report = DetectionReport::new(verdict, reasons);
    report.rank_data = reports;
    Ok(report)
}

/// Decides conformal constancy `obj = f * obj'` with `obj'` constant.
pub fn detect_conformal(obj: &Object, cfg: &DetectConfig) -> Result<DetectionReport> {
    if obj.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = obj.n();
    let deg = obj.degree();
    let base = cfg.base_point(n)?;
    let mut reasons = Vec::new();

    // criterion: a necessary condition that is also sufficient when the
    // object does not vanish at the base point
    let criterion: Option<bool> = match obj {
        Object::Form(a) if deg == 1 || deg == 2 => {
            let w = a.wedge(&exterior_derivative(a))?;
            let ok = w.is_zero();
            reasons.push(Reason::new(
                "Ex1.20-conformal-criterion",
                if ok {
                    "omega ^ d omega = 0"
                } else {
                    "omega ^ d omega != 0, so omega is not conformally constant"
                },
                Some(w.to_string()),
            ));
            Some(ok)
        }
        Object::MultiVector(v) if n >= 2 && deg + 1 == n => {
            let alpha = pfaffian_form(v)?;
            let w = alpha.wedge(&exterior_derivative(&alpha))?;
            let ok = w.is_zero();
            reasons.push(Reason::new(
                "Ex1.21-conformal-pfaffian",
                if ok {
                    "the Pfaffian system is integrable: alpha ^ d alpha = 0"
                } else {
                    "alpha ^ d alpha != 0, so V is not conformally constant"
                },
                Some(w.to_string()),
            ));
            Some(ok)
        }
        _ => None,
    };
    if criterion == Some(false) {
        return finish(Verdict::NotConstant, reasons);
    }

    // factor out the polynomial content and decide the primitive part
    let (content, primitive) = obj.factor_content();
    let sub = detect(&primitive, cfg)?;
    if sub.verdict == Verdict::Constant {
        reasons.push(Reason::new(
            "Def1.17-factor-out",
            format!("object = f * primitive with f = {content}; the primitive part has constant coefficients"),
            Some(primitive.to_string()),
        ));
        reasons.extend(sub.reasons);
        let mut report = DetectionReport::new(Verdict::ConformalConstant, reasons);
        report.chart = sub.chart;
        return Ok(report);
    }

    if criterion == Some(true) && obj.nonvanishing_at(&base)? {
        let needs_constant_rank = matches!(obj, Object::Form(_)) && deg == 2;
        if !needs_constant_rank || {
            let r = ranks(obj, &cfg.points(n)?)?;
            r.iter().all(|&x| x == r[0])
        } {
            return finish(Verdict::ConformalConstant, reasons);
        }
        reasons.push(Reason::new(
            "Ex1.20-class-varies",
            "rank of the 2-form differs between sample points",
            None,
        ));
    }
    reasons.push(Reason::new(
        "conformal-undecided",
        format!("primitive part {}: {}", primitive, sub.verdict),
        None,
    ));
    finish(Verdict::Inconclusive, reasons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn x(n: usize, k: usize) -> Poly {
        Poly::var(n, k).unwrap()
    }

    #[test]
    fn closed_one_form_near_nonvanishing_point() {
        let a = Object::Form(DiffForm::term(2, &[2], x(2, 2)).unwrap());
        let cfg = DetectConfig {
            base: Some(vec![rat(0), rat(1)]),
            ..DetectConfig::default()
        };
        let r = detect(&a, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Constant);
        assert!(r.has_rule("Ex1.5-closed-1form"));
        let w = r.chart.unwrap();
        assert_eq!(
            first_differential(&w.forward()),
            DiffForm::term(2, &[2], x(2, 2)).unwrap()
        );
    }

    #[test]
    fn non_closed_form() {
        let a = Object::Form(DiffForm::term(2, &[1], x(2, 2)).unwrap());
        let r = detect(&a, &DetectConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NotConstant);
        assert_eq!(r.reasons[0].rule, "Prop1.3-closedness");
        assert_eq!(r.reasons[0].witness.as_deref(), Some("-dx[1,2]"));
        assert_eq!(r.exit_code(), 1);
        let j = r.to_json();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["verdict"], "NOT_CONSTANT");
    }

    #[test]
    fn supplied_chart_decides() {
        let phi = Chart::new(
            vec![&x(3, 1) + &x(3, 3).pow(2), x(3, 2), x(3, 3)],
            vec![&x(3, 1) - &x(3, 3).pow(2), x(3, 2), x(3, 3)],
        )
        .unwrap();
        let a = DiffForm::basis(3, &[1, 2])
            .unwrap()
            .checked_add(&DiffForm::term(3, &[2, 3], x(3, 3).scale(&rat(-2))).unwrap())
            .unwrap();
        let cfg = DetectConfig {
            chart: Some(ChartWitness::Exact(phi)),
            ..DetectConfig::default()
        };
        let r = detect(&Object::Form(a), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Constant);
        assert!(r.has_rule("chart-verified"));
    }

    #[test]
    fn conformal_examples() {
        let cfg = DetectConfig::default();
        let a = Object::Form(DiffForm::term(2, &[2], &Poly::one(2) + &x(2, 1)).unwrap());
        let r = detect_conformal(&a, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::ConformalConstant);
        assert!(r.has_rule("Ex1.20-conformal-criterion"));

        let b = Object::Form(
            DiffForm::basis(3, &[1])
                .unwrap()
                .checked_add(&DiffForm::term(3, &[2], x(3, 3)).unwrap())
                .unwrap(),
        );
        assert_eq!(
            detect_conformal(&b, &cfg).unwrap().verdict,
            Verdict::NotConstant
        );

        let v = Object::MultiVector(MultiVector::term(3, &[1, 2], x(3, 1)).unwrap());
        let r = detect_conformal(&v, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::ConformalConstant);
        assert!(r.has_rule("Def1.17-factor-out"));

        assert_eq!(
            detect_conformal(&Object::Form(DiffForm::zero(2, 1)), &cfg),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_points(3, 5, 7, 10), sample_points(3, 5, 7, 10));
        assert_ne!(sample_points(3, 5, 7, 10), sample_points(3, 5, 8, 10));
    }

    #[test]
    fn general_path_reports_ranks() {
        // a constant 3-form on R^5 skips every shortcut except the chart-free general path
        let a = Object::Form(DiffForm::basis(5, &[1, 2, 3]).unwrap());
        let r = detect(&a, &DetectConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.rank_data.len(), 6);
        assert!(r.rank_data.iter().all(|q| q.consistent));
    }
}
