#![allow(dead_code)]

use constcoef::detector::{assemble_phi, GammaIndex, LinearExpr};
use constcoef::exterior::{Homogeneous, Variance};
use constcoef::{DiffForm, MultiIndex, Poly, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_degree: u32, max_terms: usize) -> Poly {
    let terms = rng.gen_range(0..=max_terms);
    let raw = (0..terms).map(|_| {
        let mut exps = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=max_degree) {
            exps[rng.gen_range(0..n)] += 1;
        }
        (exps, q(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
    });
    Poly::from_terms(n, raw.collect::<Vec<_>>()).unwrap()
}

pub fn random_object<V: Variance>(rng: &mut ChaCha8Rng, n: usize, degree: usize) -> Homogeneous<V> {
    let mut terms = Vec::new();
    for idx in MultiIndex::all(n, degree) {
        if rng.gen_bool(0.6) {
            terms.push((idx, random_poly(rng, n, 2, 2)));
        }
    }
    Homogeneous::<V>::from_terms(n, degree, terms).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| q(rng.gen_range(-7..=7), rng.gen_range(1..=4)))
        .collect()
}

/// Coefficient polynomial of `F_I`: distinct monomials `x1^k`.
fn f_of(idx: &[usize], table: &[MultiIndex], n: usize) -> Option<Poly> {
    let k = table.iter().position(|t| t.entries() == idx)?;
    Some(Poly::var(n, 1).unwrap().pow(k as u32 + 1))
}

/// `Gamma^h_{j,slot} * (+-F_a + ...)` with every `F` tuple kept only when it
/// is strictly increasing (it then names one of the summed coefficients).
fn displayed(
    j: usize,
    groups: &[(usize, [(i64, [usize; 3]); 3])],
    table: &[MultiIndex],
    n: usize,
) -> LinearExpr {
    let mut e = LinearExpr::zero();
    for (slot, terms) in groups {
        for h in 1..=n {
            for (s, pattern) in terms {
                let tuple: Vec<usize> = pattern
                    .iter()
                    .map(|&v| if v == 0 { h } else { v })
                    .collect();
                if tuple.windows(2).all(|w| w[0] < w[1]) {
                    let f = f_of(&tuple, table, n).unwrap();
                    e.add_term(GammaIndex::new(h, j, *slot), f.scale(&q(*s, 1)));
                }
            }
        }
    }
    e
}

/// Checks `Phi_{j,123}`, `Phi_{j,124}` and `Phi_{j,125}` for `n = 5`
/// against the hand expansion; returns the first mismatch.
pub fn displayed_phi_mismatch() -> Option<String> {
    let n = 5;
    let table = MultiIndex::all(n, 3);
    let terms: Vec<(MultiIndex, Poly)> = table
        .iter()
        .map(|i| (i.clone(), f_of(i.entries(), &table, n).unwrap()))
        .collect();
    let omega = DiffForm::from_terms(n, 3, terms).unwrap();
    let phi = assemble_phi(&omega);
    // 0 marks the position of the summed index h
    let rows: [([usize; 3], [(usize, [(i64, [usize; 3]); 3]); 3]); 3] = [
        (
            [1, 2, 3],
            [
                (1, [(1, [0, 2, 3]), (-1, [2, 0, 3]), (1, [2, 3, 0])]),
                (2, [(1, [1, 0, 3]), (-1, [0, 1, 3]), (-1, [1, 3, 0])]),
                (3, [(1, [0, 1, 2]), (-1, [1, 0, 2]), (1, [1, 2, 0])]),
            ],
        ),
        (
            // printed with F_{h24} twice; the middle term is F_{2h4}
            [1, 2, 4],
            [
                (1, [(1, [0, 2, 4]), (-1, [2, 0, 4]), (1, [2, 4, 0])]),
                (2, [(1, [1, 0, 4]), (-1, [0, 1, 4]), (-1, [1, 4, 0])]),
                (4, [(1, [0, 1, 2]), (-1, [1, 0, 2]), (1, [1, 2, 0])]),
            ],
        ),
        (
            [1, 2, 5],
            [
                (1, [(1, [0, 2, 5]), (-1, [2, 0, 5]), (1, [2, 5, 0])]),
                (2, [(1, [1, 0, 5]), (-1, [0, 1, 5]), (-1, [1, 5, 0])]),
                (5, [(1, [0, 1, 2]), (-1, [1, 0, 2]), (1, [1, 2, 0])]),
            ],
        ),
    ];
    for (index, groups) in &rows {
        let idx = MultiIndex::new(index.to_vec(), n).unwrap();
        for j in 1..=n {
            let expected = displayed(j, groups, &table, n);
            let got = phi
                .get(&(j, idx.clone()))
                .cloned()
                .unwrap_or_else(LinearExpr::zero);
            if got != expected {
                return Some(format!(
                    "Phi_{{{j},{idx}}} differs from the displayed expansion"
                ));
            }
        }
    }
    None
}
