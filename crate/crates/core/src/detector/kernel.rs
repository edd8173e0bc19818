//! Pointwise kernels of the contraction maps: the distribution
//! `{X : i_X a = 0}` of a form and the Pfaffian system `{w : i_w V = 0}` of a
//! multivector.

use super::Object;
use crate::error::Result;
use crate::exterior::{interior_form_vec, interior_vec_form, MultiIndex};
use crate::linalg::Matrix;
use crate::poly::Rational;
use crate::{DiffForm, MultiVector};

/// Matrix of `e_k -> contraction of the object with e_k` at `point`;
/// column `k-1` holds the coefficients of the contraction with `e_k`.
pub fn contraction_matrix(obj: &Object, point: &[Rational]) -> Result<Matrix> {
    let n = obj.n();
    let deg = obj.degree();
    let rows = if deg == 0 {
        Vec::new()
    } else {
        MultiIndex::all(n, deg - 1)
    };
    let mut m = Matrix::zeros(rows.len(), n);
    for k in 1..=n {
        let column = match obj {
            Object::Form(a) => {
                interior_vec_form(&MultiVector::basis(n, &[k])?, a)?.eval_at(point)?
            }
            Object::MultiVector(v) => {
                interior_form_vec(&DiffForm::basis(n, &[k])?, v)?.eval_at(point)?
            }
        };
        for (r, value) in column.into_iter().enumerate() {
            m.set(r, k - 1, value);
        }
    }
    Ok(m)
}

/// Basis of the kernel at `point`, as component vectors: vectors
/// `(X^1..X^n)` for a form, covectors `(w_1..w_n)` for a multivector.
pub fn kernel_system(obj: &Object, point: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    Ok(contraction_matrix(obj, point)?.null_space())
}

/// Rank of the contraction map at `point` (`n` minus the kernel dimension).
pub fn contraction_rank(obj: &Object, point: &[Rational]) -> Result<usize> {
    Ok(contraction_matrix(obj, point)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn origin(n: usize) -> Vec<Rational> {
        vec![rat(0); n]
    }

    #[test]
    fn coordinate_kernels() {
        let v = Object::MultiVector(MultiVector::basis(3, &[1, 2]).unwrap());
        assert_eq!(
            kernel_system(&v, &origin(3)).unwrap(),
            vec![vec![rat(0), rat(0), rat(1)]]
        );
        let a = Object::Form(DiffForm::basis(3, &[1, 2]).unwrap());
        assert_eq!(
            kernel_system(&a, &origin(3)).unwrap(),
            vec![vec![rat(0), rat(0), rat(1)]]
        );
    }

    #[test]
    fn symplectic_bivector_has_trivial_kernel() {
        let v = MultiVector::basis(4, &[1, 2])
            .unwrap()
            .checked_add(&MultiVector::basis(4, &[3, 4]).unwrap())
            .unwrap();
        let v = Object::MultiVector(v);
        assert!(kernel_system(&v, &origin(4)).unwrap().is_empty());
        assert_eq!(contraction_rank(&v, &origin(4)).unwrap(), 4);
    }
}
