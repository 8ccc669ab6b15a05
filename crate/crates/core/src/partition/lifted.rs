use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::ReducedPredicate;
use crate::rational::{to_f64, Rational};

/// Reduced lifts of the vertex set; vertex `i` is `points[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedPointSet {
    dim: usize,
    points: Vec<Vec<Rational>>,
    approx: Vec<Vec<f64>>,
}

impl LiftedPointSet {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("lifted dimension must be positive".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        let approx = points
            .iter()
            .map(|p| p.iter().map(to_f64).collect())
            .collect();
        Ok(Self {
            dim,
            points,
            approx,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, id: usize) -> &[Rational] {
        &self.points[id]
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    /// Floating-point shadow used only to steer heuristic searches.
    pub fn approx(&self, id: usize) -> &[f64] {
        &self.approx[id]
    }
}

/// Lifts every raw point through the reduction; ids follow input order.
pub fn lift_point_set(points: &[Vec<Rational>], pred: &ReducedPredicate) -> Result<LiftedPointSet> {
    let lifted = points
        .par_iter()
        .map(|p| pred.reduced_lift(p))
        .collect::<Result<Vec<_>>>()?;
    LiftedPointSet::new(pred.dim(), lifted)
}

/// Normals `w(y)` of every vertex's homogeneous hyperplane `w . z = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperplaneSet {
    pub normals: Vec<Vec<Rational>>,
}

impl HyperplaneSet {
    pub fn from_lifted(pred: &ReducedPredicate, lifted: &LiftedPointSet) -> Self {
        Self {
            normals: lifted
                .points()
                .iter()
                .map(|z| pred.normal_of_reduced(z))
                .collect(),
        }
    }
}
