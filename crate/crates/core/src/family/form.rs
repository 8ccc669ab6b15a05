//! Bilinear rewriting of a predicate and its exact congruence diagonalization.

use num_traits::{Signed, Zero};

use super::basis::MonomialBasis;
use super::predicate::PolynomialPredicate;
use crate::error::{Error, Result};
use crate::rational::{dot, Rational};

/// Symmetric matrix `M` with `f(x, y) = lift(x)^T M lift(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    pub matrix: Vec<Vec<Rational>>,
}

impl BilinearForm {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            self.matrix[i].len() == n && (0..i).all(|j| self.matrix[i][j] == self.matrix[j][i])
        })
    }

    pub fn apply(&self, a: &[Rational], b: &[Rational]) -> Rational {
        self.matrix
            .iter()
            .zip(a)
            .fold(Rational::zero(), |acc, (row, ai)| acc + ai * dot(row, b))
    }
}

/// Rewrites `f` over the monomial basis sized by its per-argument degree.
pub fn to_bilinear(f: &PolynomialPredicate) -> (MonomialBasis, BilinearForm) {
    let basis = MonomialBasis::new(f.q(), f.lift_degree());
    let n = basis.len();
    let mut matrix = vec![vec![Rational::zero(); n]; n];
    for ((a, b), c) in f.terms() {
        let i = basis.index_of(a).expect("x exponent within lift degree");
        let j = basis.index_of(b).expect("y exponent within lift degree");
        matrix[i][j] += Rational::from_integer(c.clone());
    }
    (basis, BilinearForm { matrix })
}

/// `M = sum_k diagonal[k] * b_k b_k^T` with `b_k` the rows of `basis_inverse`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalizedForm {
    pub diagonal: Vec<Rational>,
    /// `Q x Q0`: maps a lifted vector to reduced coordinates.
    pub basis_inverse: Vec<Vec<Rational>>,
}

impl DiagonalizedForm {
    pub fn reduced_dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn signature(&self) -> (usize, usize) {
        let pos = self.diagonal.iter().filter(|d| d.is_positive()).count();
        (pos, self.diagonal.len() - pos)
    }

    pub fn reduce(&self, lifted: &[Rational]) -> Vec<Rational> {
        self.basis_inverse
            .iter()
            .map(|row| dot(row, lifted))
            .collect()
    }

    /// Multiplies the decomposition back out.
    pub fn reconstruct(&self, dim: usize) -> Vec<Vec<Rational>> {
        let mut m = vec![vec![Rational::zero(); dim]; dim];
        for (d, b) in self.diagonal.iter().zip(&self.basis_inverse) {
            for i in 0..dim {
                if b[i].is_zero() {
                    continue;
                }
                let di = d * &b[i];
                for j in 0..dim {
                    m[i][j] += &di * &b[j];
                }
            }
        }
        m
    }
}

/// Symmetric rank-one elimination with exact pivots. A nonzero diagonal pivot is used
/// when one exists; otherwise the basis move `e_i <- e_i + e_j` exposes `2 M_ij` on the
/// diagonal. Each step removes one from the rank, so zero directions never appear.
pub fn congruence_diagonalize(m: &BilinearForm) -> DiagonalizedForm {
    assert!(
        m.is_symmetric(),
        "congruence_diagonalize needs a symmetric matrix"
    );
    let n = m.dim();
    let mut a = m.matrix.clone();
    let mut diagonal = Vec::new();
    let mut rows = Vec::new();
    loop {
        // direction s with s^T A s != 0, as a sparse list of unit coefficients
        let dir: Vec<usize> = if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            vec![i]
        } else if let Some((i, j)) =
            (0..n).find_map(|i| (i + 1..n).find(|&j| !a[i][j].is_zero()).map(|j| (i, j)))
        {
            vec![i, j]
        } else {
            break;
        };
        let col: Vec<Rational> = (0..n)
            .map(|r| dir.iter().fold(Rational::zero(), |acc, &c| acc + &a[r][c]))
            .collect();
        let d = dir.iter().fold(Rational::zero(), |acc, &r| acc + &col[r]);
        debug_assert!(!d.is_zero());
        let b: Vec<Rational> = col.iter().map(|v| v / &d).collect();
        for i in 0..n {
            if col[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[j].is_zero() {
                    let sub = &col[i] * &b[j];
                    a[i][j] -= sub;
                }
            }
        }
        diagonal.push(d);
        rows.push(b);
    }
    let out = DiagonalizedForm {
        diagonal,
        basis_inverse: rows,
    };
    assert_eq!(out.reconstruct(n), m.matrix, "congruence identity failed");
    out
}

/// A predicate together with its lift and diagonalized reduction.
#[derive(Clone, Debug)]
pub struct ReducedPredicate {
    pub predicate: PolynomialPredicate,
    pub basis: MonomialBasis,
    pub bilinear: BilinearForm,
    pub form: DiagonalizedForm,
}

impl ReducedPredicate {
    /// Fails when the form has rank zero, i.e. `f` is constant.
    pub fn new(predicate: &PolynomialPredicate) -> Result<Self> {
        let (basis, bilinear) = to_bilinear(predicate);
        let form = congruence_diagonalize(&bilinear);
        if form.reduced_dim() == 0 {
            return Err(Error::ConstantPredicate);
        }
        Ok(Self {
            predicate: predicate.clone(),
            basis,
            bilinear,
            form,
        })
    }

    pub fn q(&self) -> usize {
        self.predicate.q()
    }

    /// Reduced dimension `Q`.
    pub fn dim(&self) -> usize {
        self.form.reduced_dim()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.form.signature()
    }

    pub fn reduced_lift(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        Ok(self.form.reduce(&self.basis.lift(point)?))
    }

    /// `sum_k d_k x'_k y'_k`, equal to `f(x, y)`.
    pub fn evaluate_reduced(&self, x: &[Rational], y: &[Rational]) -> Rational {
        self.form
            .diagonal
            .iter()
            .zip(x.iter().zip(y))
            .fold(Rational::zero(), |acc, (d, (a, b))| acc + d * a * b)
    }

    pub fn edge_sign(&self, x: &[Rational], y: &[Rational]) -> Result<super::EdgeSign> {
        let (rx, ry) = (self.reduced_lift(x)?, self.reduced_lift(y)?);
        Ok(super::EdgeSign::of(&self.evaluate_reduced(&rx, &ry)))
    }

    /// Normal `w` of the homogeneous hyperplane of `y`: `x` is adjacent iff `w . x' >= 0`.
    pub fn hyperplane_normal(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        Ok(self.normal_of_reduced(&self.reduced_lift(y)?))
    }

    pub fn normal_of_reduced(&self, ry: &[Rational]) -> Vec<Rational> {
        self.form
            .diagonal
            .iter()
            .zip(ry)
            .map(|(d, v)| d * v)
            .collect()
    }
}
