//! Acceptance gate: one PASS/FAIL line per criterion, with the tolerance
//! (exact throughout) and the wall-clock limit of each pinned below.
//! Runs as a plain binary (`harness = false`) so the report always prints.

mod common;

use std::time::{Duration, Instant};

use common::{displayed_phi_mismatch, q, random_object, random_point};
use constcoef::connection::{
    christoffel_from_chart, christoffel_from_inverse_jacobian, curvature, torsion,
};
use constcoef::detector::{
    chart_from_exact_1form, chart_from_volume_form, codim1_coefficients, codim1_explicit_system,
    coefficient_rank, constraints_n3, coordinate_volume, counting, detect, first_differential,
    generic_point, integrability_residuals, joined_counts, unsymmetrized_rank, verify_chart,
    verify_witness, ChartWitness, DetectConfig, Expectation, Kind, Object, Relation, Verdict,
};
use constcoef::exterior::{exterior_derivative, schouten_bracket, Contravariant, Covariant};
use constcoef::oracle::{brute_force_sn_bracket, negative_corpus, positive_corpus, random_chart};
use constcoef::{DiffForm, MultiVector, Poly};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for n in 2..=10 {
        for p in 1..=n {
            let c = counting(n, p).unwrap();
            for cmp in &c.comparisons {
                if let Some(e) = cmp.expected {
                    if !cmp.holds() {
                        return outcome(
                            false,
                            format!(
                                "n={n} p={p}: {} {} {} not {e:?}",
                                cmp.lhs,
                                cmp.relation.symbol(),
                                cmp.rhs
                            ),
                        );
                    }
                    checked += 1;
                }
            }
        }
    }
    for p in [3, 4] {
        let c = counting(7, p).unwrap();
        let second = &c.comparisons[1];
        if !(second.lhs == 392
            && second.rhs == 392
            && second.relation == Relation::Equal
            && second.expected == Some(Expectation::Equal))
        {
            return outcome(
                false,
                format!("n=7 p={p}: {} vs {}", second.lhs, second.rhs),
            );
        }
    }
    let j = joined_counts(3);
    if (j.joined_equations, j.joined_unknowns) != (51, 72) {
        return outcome(
            false,
            format!(
                "joined n=3: {} equations, {} unknowns",
                j.joined_equations, j.joined_unknowns
            ),
        );
    }
    outcome(true, format!("392 == 392 for n=7, p=3,4; {checked} classified rows for 2<=n<=10; joined n=3: 51 eq / 72 unknowns"))
}

fn criterion_2() -> Outcome {
    match displayed_phi_mismatch() {
        Some(m) => outcome(false, m),
        None => outcome(true, "Phi_{j,123} (and Phi_{j,124}, Phi_{j,125}) match the displayed expansion for j=1..5, exact"),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pairs = 0;
    for k in 0..20 {
        let n = 2 + k % 3;
        let chart = random_chart(n, 2, 2, rng.gen());
        let conn = christoffel_from_chart(&chart);
        let p = rng.gen_range(1..=n);
        let a: DiffForm = random_object::<Covariant>(&mut rng, n, p);
        let residuals = integrability_residuals(&conn, &a).unwrap();
        if let Some(((j, l), r)) = residuals.iter().find(|(_, r)| !r.is_zero()) {
            return outcome(false, format!("chart {k}: residual ({j},{l}) = {r}"));
        }
        pairs += residuals.len();
    }
    outcome(
        true,
        format!("20 charts, n in 2..=4: {pairs} (j,l) residuals are the zero polynomial form"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..20 {
        let n = 2 + k % 3;
        let chart = random_chart(n, 2, 3, rng.gen());
        if christoffel_from_chart(&chart) != christoffel_from_inverse_jacobian(&chart) {
            return outcome(
                false,
                format!("chart {k} (n={n}): the two Christoffel routes differ"),
            );
        }
    }
    outcome(true, "v d2u route == -(dv/dx) J route on 20 charts, exact")
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut nonzero_gamma = 0;
    for k in 0..50 {
        let n = 2 + k % 3;
        let chart = random_chart(n, 2, 3, rng.gen());
        let conn = christoffel_from_chart(&chart);
        if !conn.is_zero() {
            nonzero_gamma += 1;
        }
        if !torsion(&conn).is_zero() || !curvature(&conn).is_zero() {
            return outcome(false, format!("chart {k} (n={n}) has torsion or curvature"));
        }
    }
    outcome(
        true,
        format!("50 charts ({nonzero_gamma} with nonzero Gamma): T == 0 and R == 0 symbolically"),
    )
}

fn criterion_6() -> Outcome {
    let families: Vec<(usize, usize, Kind)> = (2..=5)
        .flat_map(|n| (1..=n).flat_map(move |p| [(n, p, Kind::Form), (n, p, Kind::MultiVector)]))
        .collect();
    let mut positives = 0;
    let mut seed = 600;
    while positives < 100 {
        let (n, p, kind) = families[positives % families.len()];
        seed += 1;
        let s = positive_corpus(n, kind, p, 1, seed).unwrap().remove(0);
        let chart = s.chart.clone().unwrap();
        let cfg = DetectConfig {
            chart: Some(ChartWitness::Exact(chart)),
            ..DetectConfig::default()
        };
        let report = detect(&s.object, &cfg).unwrap();
        let verified = match &report.chart {
            Some(w) => {
                verify_witness(&s.object, w, &cfg.base_point(n).unwrap())
                    .unwrap()
                    .constant
            }
            None => false,
        };
        if report.verdict != Verdict::Constant || !verified {
            return outcome(
                false,
                format!(
                    "positive misclassified as {}:\n{}",
                    report.verdict,
                    s.to_dump_string()
                ),
            );
        }
        positives += 1;
    }
    let mut negatives = 0;
    let mut cross_checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let families: [(usize, Kind, usize); 8] = [
        (2, Kind::Form, 1),
        (3, Kind::Form, 1),
        (3, Kind::Form, 2),
        (4, Kind::Form, 2),
        (4, Kind::Form, 3),
        (3, Kind::MultiVector, 2),
        (4, Kind::MultiVector, 2),
        (5, Kind::MultiVector, 2),
    ];
    for (f, &(n, kind, p)) in families.iter().enumerate() {
        let count = if f < 4 { 13 } else { 12 };
        for s in negative_corpus(n, kind, p, count, 700 + f as u64).unwrap() {
            let ob = s.obstruction.as_ref().unwrap();
            let report = detect(&s.object, &DetectConfig::default()).unwrap();
            let rule = match kind {
                Kind::Form => "Prop1.3-closedness",
                Kind::MultiVector => "Prop1.11-bracket",
            };
            if !ob.holds() || report.verdict != Verdict::NotConstant || !report.has_rule(rule) {
                return outcome(
                    false,
                    format!(
                        "negative misclassified as {}:\n{}",
                        report.verdict,
                        s.to_dump_string()
                    ),
                );
            }
            if cross_checked < 20 {
                let chart = random_chart(n, 2, 2, rng.gen());
                if verify_chart(&s.object, &chart).unwrap().constant {
                    return outcome(false, "a random chart verified a certified negative");
                }
                cross_checked += 1;
            }
            negatives += 1;
        }
    }
    let pass = positives == 100 && negatives == 100;
    outcome(pass, format!("{positives} positives CONSTANT with verified chart, {negatives} negatives NOT_CONSTANT with exact witness, 0 misclassified"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let p = rng.gen_range(0..=n);
        let a: DiffForm = random_object::<Covariant>(&mut rng, n, p);
        if !exterior_derivative(&exterior_derivative(&a)).is_zero() {
            return outcome(false, format!("d d a != 0 for {a}"));
        }
        cases += 1;
    }
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let (p, r) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        let a: DiffForm = random_object::<Covariant>(&mut rng, n, p);
        let b: DiffForm = random_object::<Covariant>(&mut rng, n, r);
        let lhs = exterior_derivative(&a.wedge(&b).unwrap());
        let second = a
            .wedge(&exterior_derivative(&b))
            .unwrap()
            .scale(&q(sign(p % 2 == 1), 1));
        let rhs = exterior_derivative(&a)
            .wedge(&b)
            .unwrap()
            .checked_add(&second)
            .unwrap();
        if lhs != rhs {
            return outcome(false, format!("Leibniz fails for {a} and {b}"));
        }
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap().scale(&q(sign(p * r % 2 == 1), 1));
        if ab != ba {
            return outcome(false, format!("graded commutativity fails for {a} and {b}"));
        }
        cases += 2;
    }
    for _ in 0..80 {
        let n = rng.gen_range(2..=4);
        let (s, t) = (rng.gen_range(1..=3.min(n)), rng.gen_range(1..=3.min(n)));
        let a: MultiVector = random_object::<Contravariant>(&mut rng, n, s);
        let b: MultiVector = random_object::<Contravariant>(&mut rng, n, t);
        let ab = schouten_bracket(&a, &b).unwrap();
        let ba = schouten_bracket(&b, &a)
            .unwrap()
            .scale(&q(-sign((s - 1) * (t - 1) % 2 == 1), 1));
        if ab != ba {
            return outcome(false, format!("Schouten symmetry fails for {a} and {b}"));
        }
        if ab != brute_force_sn_bracket(&a, &b).unwrap() {
            return outcome(
                false,
                format!("Schouten differs from the literal formula for {a} and {b}"),
            );
        }
        cases += 2;
    }
    for _ in 0..40 {
        let n = rng.gen_range(2..=6);
        let qd = rng.gen_range((n / 2 + 1)..=n);
        let v: MultiVector = random_object::<Contravariant>(&mut rng, n, qd);
        if 2 * qd - 1 > n && !schouten_bracket(&v, &v).unwrap().is_zero() {
            return outcome(false, format!("[V,V] != 0 with 2q-1 > n for {v}"));
        }
        cases += 1;
    }
    outcome(cases >= 500, format!("{cases} randomized exact cases (d d, Leibniz, graded commutativity, Schouten symmetry, literal Schouten, auto-vanishing)"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..20 {
        let n = 1 + k % 4;
        let base = random_point(&mut rng, n);
        let mut f = common::random_poly(&mut rng, n, 3, 3);
        if f.eval(&base).unwrap().is_zero() {
            f = &f + &Poly::one(n);
        }
        let all: Vec<usize> = (1..=n).collect();
        let a = DiffForm::term(n, &all, f).unwrap();
        let w = chart_from_volume_form(&a, &base).unwrap();
        if coordinate_volume(&w.forward()).unwrap() != a {
            return outcome(
                false,
                format!("volume chart for {a} fails du^1^..^du^n == a"),
            );
        }
    }
    for k in 0..20 {
        let n = 1 + k % 4;
        let base = random_point(&mut rng, n);
        let g = common::random_poly(&mut rng, n, 3, 4);
        let mut a = DiffForm::zero(n, 1);
        for j in 1..=n {
            a = a
                .checked_add(&DiffForm::term(n, &[j], g.diff(j).unwrap()).unwrap())
                .unwrap();
        }
        if !a.nonvanishing_at(&base).unwrap() {
            a = a.checked_add(&DiffForm::basis(n, &[1]).unwrap()).unwrap();
        }
        let w = chart_from_exact_1form(&a, &base).unwrap();
        if first_differential(&w.forward()) != a {
            return outcome(false, format!("exact 1-form chart for {a} fails du^1 == a"));
        }
    }
    outcome(
        true,
        "20 volume forms and 20 exact 1-forms: forward identity holds exactly",
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut report = Vec::new();
    let mut pass = true;
    for n in [3usize, 4] {
        let mut ranks = std::collections::BTreeSet::new();
        let mut full = std::collections::BTreeSet::new();
        let mut tried = 0;
        while tried < 10 {
            let v: MultiVector = random_object::<Contravariant>(&mut rng, n, n - 1);
            let point = random_point(&mut rng, n);
            if codim1_coefficients(&v).unwrap().len() != n || !generic_point(&v, &point).unwrap() {
                continue;
            }
            let sys = codim1_explicit_system(&v).unwrap();
            ranks.insert(coefficient_rank(&sys, &point).unwrap());
            full.insert(unsymmetrized_rank(&v, &point).unwrap());
            tried += 1;
        }
        let ok = ranks.len() == 1 && ranks.contains(&(n * n));
        pass &= ok;
        report.push(format!(
            "n={n}: rank {:?} over {} torsion-free unknowns (expected {}); {:?} over all n^3 unknowns",
            ranks,
            n * n * (n + 1) / 2,
            n * n,
            full
        ));
    }
    let mut zero_c = 0;
    for s in positive_corpus(3, Kind::MultiVector, 2, 10, 90).unwrap() {
        let Object::MultiVector(v) = &s.object else {
            unreachable!()
        };
        let c = constraints_n3(v).unwrap();
        if c.c.is_zero() {
            zero_c += 1;
        }
        if !c.vanish_when_c_zero() {
            pass = false;
            report.push(format!("C == 0 but C1/C2 do not vanish for {v}"));
        }
    }
    for _ in 0..10 {
        let v: MultiVector = random_object::<Contravariant>(&mut rng, 3, 2);
        if !constraints_n3(&v).unwrap().vanish_when_c_zero() {
            pass = false;
            report.push(format!("C == 0 but C1/C2 do not vanish for {v}"));
        }
    }
    report.push(format!("C1, C2 vanish in all {zero_c} cases with C == 0"));
    outcome(pass, report.join("; "))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 9] = [
        (
            1,
            "counting identities",
            Duration::from_secs(1),
            criterion_1,
        ),
        (
            2,
            "displayed Phi expansion (p=3, n=5)",
            Duration::from_secs(10),
            criterion_2,
        ),
        (
            3,
            "integrability identities hold identically",
            Duration::from_secs(120),
            criterion_3,
        ),
        (
            4,
            "two Christoffel routes agree",
            Duration::from_secs(60),
            criterion_4,
        ),
        (
            5,
            "chart connections are flat and torsion-free",
            Duration::from_secs(120),
            criterion_5,
        ),
        (
            6,
            "detector soundness on oracle corpora",
            Duration::from_secs(300),
            criterion_6,
        ),
        (
            7,
            "exterior-calculus invariants",
            Duration::from_secs(180),
            criterion_7,
        ),
        (
            8,
            "constructive charts",
            Duration::from_secs(60),
            criterion_8,
        ),
        (
            9,
            "rank of the (n-1)-vector system",
            Duration::from_secs(120),
            criterion_9,
        ),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = out.pass && in_time;
        println!(
            "{} criterion {id} ({name}): {} [{:.2?} / limit {:?}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed,
            limit
        );
        if !pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
