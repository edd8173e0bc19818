use crate::error::{Error, Result};
use crate::poly::Poly;

use super::chart::Chart;
use super::{DiffForm, Homogeneous, MultiIndex, MultiVector, Variance};

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(a, b));
    }
    Ok(())
}

fn require_degree(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::DegreeMismatch { expected, got });
    }
    Ok(())
}

/// `d(sum F_I dx^I) = sum_j dF_I/dx^j dx^j ^ dx^I`. On top-degree forms
/// the result is the empty `(n+1)`-form.
pub fn exterior_derivative(a: &DiffForm) -> DiffForm {
    let n = a.n();
    let mut out = DiffForm::zero(n, a.degree() + 1);
    for (idx, c) in a.terms() {
        for j in 1..=n {
            if idx.contains(j) {
                continue;
            }
            let dc = c.diff(j).expect("variable in range");
            if dc.is_zero() {
                continue;
            }
            let mut cat = vec![j];
            cat.extend_from_slice(idx.entries());
            let (sign, sorted) = MultiIndex::sorted(cat).expect("j not in idx");
            out.add_term(sorted, if sign < 0 { -dc } else { dc });
        }
    }
    out
}

/// Contraction of a degree-1 object into the first slot of an object of the
/// dual variance.
fn contract<V: Variance>(x: &Homogeneous<V::Dual>, t: &Homogeneous<V>) -> Result<Homogeneous<V>> {
    check_dims(x.n(), t.n())?;
    require_degree(x.degree(), 1)?;
    if t.degree() == 0 {
        return Err(Error::DegreeOutOfRange {
            degree: 0,
            n: t.n(),
        });
    }
    let mut out = Homogeneous::<V>::zero(t.n(), t.degree() - 1);
    for (xi, xc) in x.terms() {
        let i = xi.entries()[0];
        for (idx, c) in t.terms() {
            if let Ok(h) = idx.entries().binary_search(&i) {
                let prod = xc * c;
                out.add_term(idx.without_slot(h), if h % 2 == 1 { -prod } else { prod });
            }
        }
    }
    Ok(out)
}

/// `i_X a` for a vector field `X`.
pub fn interior_vec_form(x: &MultiVector, a: &DiffForm) -> Result<DiffForm> {
    contract(x, a)
}

/// `i_w V` for a 1-form `w`.
pub fn interior_form_vec(w: &DiffForm, v: &MultiVector) -> Result<MultiVector> {
    contract(w, v)
}

/// Iterated contraction `i_{e_{i1}}(... i_{e_{iq}}(top))` of a constant
/// basis blade into a top-degree object.
fn iterated_contraction<V: Variance>(blade: &MultiIndex, top: &Homogeneous<V>) -> Homogeneous<V> {
    let n = top.n();
    let mut acc = top.clone();
    for &i in blade.entries().iter().rev() {
        let e = Homogeneous::<V::Dual>::basis(n, &[i]).expect("index in range");
        acc = contract(&e, &acc).expect("degrees checked by caller");
    }
    acc
}

fn duality<V: Variance>(
    obj: &Homogeneous<V::Dual>,
    top: &Homogeneous<V>,
) -> Result<Homogeneous<V>> {
    check_dims(obj.n(), top.n())?;
    let n = obj.n();
    if obj.degree() > n {
        return Err(Error::DegreeOutOfRange {
            degree: obj.degree(),
            n,
        });
    }
    require_degree(top.degree(), n)?;
    let mut out = Homogeneous::<V>::zero(n, n - obj.degree());
    for (idx, c) in obj.terms() {
        for (k, kc) in iterated_contraction(idx, top).terms() {
            out.add_term(k.clone(), c * kc);
        }
    }
    Ok(out)
}

/// The volume duality taking a `q`-vector to the `(n-q)`-form
/// `i_{X_1}(... i_{X_q}(vol))`.
pub fn iota_pq(v: &MultiVector, vol: &DiffForm) -> Result<DiffForm> {
    duality(v, vol)
}

/// The dual map taking a `p`-form to the `(n-p)`-vector `i_{w_1}(... i_{w_p}(V_n))`.
pub fn iota_star_qp(w: &DiffForm, top: &MultiVector) -> Result<MultiVector> {
    duality(w, top)
}

/// Lie bracket of vector fields, `[X,Y]^k = X^i dY^k/dx^i - Y^i dX^k/dx^i`.
pub fn lie_bracket(x: &MultiVector, y: &MultiVector) -> Result<MultiVector> {
    check_dims(x.n(), y.n())?;
    require_degree(x.degree(), 1)?;
    require_degree(y.degree(), 1)?;
    let n = x.n();
    let mut out = MultiVector::zero(n, 1);
    for k in 1..=n {
        let kk = MultiIndex::single(k);
        let (xk, yk) = (x.coeff(&kk), y.coeff(&kk));
        let mut acc = Poly::zero(n);
        for i in 1..=n {
            let ii = MultiIndex::single(i);
            acc = &acc + &(&x.coeff(&ii) * &yk.diff(i)?);
            acc = &acc - &(&y.coeff(&ii) * &xk.diff(i)?);
        }
        out.add_term(kk, acc);
    }
    Ok(out)
}

/// Pushes `coeff * Dx[indices...]` (indices possibly unsorted) into `out`.
fn push_blade(out: &mut MultiVector, coeff: Poly, indices: Vec<usize>) {
    if coeff.is_zero() {
        return;
    }
    if let Some((sign, idx)) = MultiIndex::sorted(indices) {
        out.add_term(idx, if sign < 0 { -coeff } else { coeff });
    }
}

/// Schouten–Nijenhuis bracket of multivector fields of degrees `q, r >= 1`.
///
/// Each term `F Dx^I` is read as the decomposable
/// `(F Dx[i1]) ^ Dx[i2] ^ ... ^ Dx[iq]`, and the decomposable formula
/// `[A,B] = sum (-1)^(i+j) [X_i,Y_j] ^ X_1..^X_i..X_q ^ Y_1..^Y_j..Y_r` is
/// expanded bilinearly. Brackets between two plain coordinate fields
/// vanish, so only pairs involving a weighted first factor survive.
pub fn schouten_bracket(a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    check_dims(a.n(), b.n())?;
    let (q, r) = (a.degree(), b.degree());
    if q == 0 || r == 0 {
        return Err(Error::DegreeOutOfRange {
            degree: 0,
            n: a.n(),
        });
    }
    let n = a.n();
    let mut out = MultiVector::zero(n, q + r - 1);
    if q + r - 1 > n {
        return Ok(out);
    }
    for (ia, f) in a.terms() {
        let ie = ia.entries();
        for (ib, g) in b.terms() {
            let je = ib.entries();
            let (a1, b1) = (ie[0], je[0]);
            let tail = |e: &[usize], skip: usize| -> Vec<usize> {
                e.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &v)| v)
                    .collect()
            };

            // i = 1, j = 1: [F d_a1, G d_b1] = F dG/dx^a1 d_b1 - G dF/dx^b1 d_a1
            let rest: Vec<usize> = ie[1..].iter().chain(&je[1..]).copied().collect();
            let mut idx = vec![b1];
            idx.extend_from_slice(&rest);
            push_blade(&mut out, f * &g.diff(a1)?, idx);
            let mut idx = vec![a1];
            idx.extend_from_slice(&rest);
            push_blade(&mut out, -(g * &f.diff(b1)?), idx);

            // i = 1, j > 1: [F d_a1, d_bj] = -dF/dx^bj d_a1, sign (-1)^(1+j)
            for j in 2..=r {
                let c = -(g * &f.diff(je[j - 1])?);
                let c = if (1 + j) % 2 == 1 { -c } else { c };
                let mut idx = vec![a1];
                idx.extend_from_slice(&ie[1..]);
                idx.extend(tail(je, j - 1));
                push_blade(&mut out, c, idx);
            }

            // i > 1, j = 1: [d_ai, G d_b1] = dG/dx^ai d_b1, sign (-1)^(i+1)
            for i in 2..=q {
                let c = f * &g.diff(ie[i - 1])?;
                let c = if (i + 1) % 2 == 1 { -c } else { c };
                let mut idx = vec![b1];
                idx.extend(tail(ie, i - 1));
                idx.extend_from_slice(&je[1..]);
                push_blade(&mut out, c, idx);
            }
        }
    }
    Ok(out)
}

/// Differentials of the component functions, as 1-forms.
pub(crate) fn differentials(components: &[Poly]) -> Vec<DiffForm> {
    components
        .iter()
        .map(|u| {
            let n = u.nvars();
            let mut du = DiffForm::zero(n, 1);
            for j in 1..=n {
                du.add_term(MultiIndex::single(j), u.diff(j).expect("in range"));
            }
            du
        })
        .collect()
}

/// Pullback along a polynomial map `x -> u(x)` of a form written in the
/// `u` variables.
pub(crate) fn pullback_along(forward: &[Poly], a: &DiffForm) -> Result<DiffForm> {
    check_dims(forward.len(), a.n())?;
    let n = a.n();
    let du = differentials(forward);
    let mut out = DiffForm::zero(n, a.degree());
    for (idx, c) in a.terms() {
        let mut acc = DiffForm::function(c.compose(forward)?);
        for &i in idx.entries() {
            acc = acc.wedge(&du[i - 1])?;
        }
        out = out.checked_add(&acc)?;
    }
    Ok(out)
}

/// `phi^* a`: `a` is written in the chart coordinates `u`, the result in `x`.
pub fn pullback(phi: &Chart, a: &DiffForm) -> Result<DiffForm> {
    check_dims(phi.n(), a.n())?;
    pullback_along(phi.forward(), a)
}

/// Image of `V` under the differential of `x -> u(x)`, with coefficients
/// still expressed as functions of the source variables `x`:
/// `Dx[j] -> sum_i du^i/dx^j Du[i]`.
pub fn pushforward_in_source(forward: &[Poly], v: &MultiVector) -> Result<MultiVector> {
    check_dims(forward.len(), v.n())?;
    let n = v.n();
    let columns: Vec<MultiVector> = (1..=n)
        .map(|j| {
            let mut col = MultiVector::zero(n, 1);
            for (i, u) in forward.iter().enumerate() {
                col.add_term(MultiIndex::single(i + 1), u.diff(j).expect("in range"));
            }
            col
        })
        .collect();
    let mut out = MultiVector::zero(n, v.degree());
    for (idx, c) in v.terms() {
        let mut acc = MultiVector::function(c.clone());
        for &j in idx.entries() {
            acc = acc.wedge(&columns[j - 1])?;
        }
        out = out.checked_add(&acc)?;
    }
    Ok(out)
}

/// `phi_* V`: `V` is written in `x`, the result in the chart coordinates `u`.
pub fn pushforward(phi: &Chart, v: &MultiVector) -> Result<MultiVector> {
    check_dims(phi.n(), v.n())?;
    let in_x = pushforward_in_source(phi.forward(), v)?;
    let inv = phi.inverse_map();
    let mut out = MultiVector::zero(v.n(), v.degree());
    for (idx, c) in in_x.terms() {
        out.add_term(idx.clone(), c.compose(inv)?);
    }
    Ok(out)
}
